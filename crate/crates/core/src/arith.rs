//! Elementary number-theoretic helpers used throughout the crate.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization with primes in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor pairs `(p, multiplicity)` in increasing prime order.
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Distinct prime divisors in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Product of all factors, i.e. the number that was factored.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, a)| p.pow(a))
            .product()
    }

    /// Product of the distinct prime divisors.
    pub fn radical(&self) -> u64 {
        self.pairs.iter().map(|&(p, _)| p).product()
    }

    /// All positive divisors, in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, a) in &self.pairs {
            let prev = out.clone();
            let mut power = 1u64;
            for _ in 0..a {
                power *= p;
                out.extend(prev.iter().map(|d| d * power));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Factor `n >= 1` by trial division.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut pairs = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut a = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            a += 1;
        }
        if a > 0 {
            pairs.push((p, a));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut p = 5u64;
    while p.checked_mul(p).map_or(false, |sq| sq <= rest) {
        push(p, &mut rest);
        push(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Factorization { pairs }
}

/// Euler totient of `n >= 1`.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient requires n >= 1");
    factorize(n)
        .pairs()
        .iter()
        .map(|&(p, a)| p.pow(a - 1) * (p - 1))
        .product()
}

/// gcd of a slice together with an extra value; gcd of the empty slice is `extra`.
pub fn gcd_with(values: &[i64], extra: u64) -> u64 {
    values
        .iter()
        .fold(extra, |g, &v| g.gcd(&v.unsigned_abs()))
}

/// Least nonnegative residue of `v` modulo `n`.
pub fn reduce_mod(v: i64, n: u64) -> u64 {
    debug_assert!(n >= 1);
    v.rem_euclid(n as i64) as u64
}

/// Centered residue in `(-n/2, n/2]`.
pub fn centered_mod(v: i64, n: u64) -> i64 {
    let r = v.rem_euclid(n as i64);
    if 2 * r > n as i64 {
        r - n as i64
    } else {
        r
    }
}

/// `base^exp mod m` for `m >= 1`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    assert!(m >= 1);
    if m == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::NotPrimitive { modulus: m });
    }
    Ok(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `r` with `r^k <= n` (integer Newton iteration, no floating point).
pub fn floor_nth_root(n: u64, k: u32) -> u64 {
    assert!(k >= 1);
    if n <= 1 || k == 1 {
        return n;
    }
    if k >= 64 {
        return 1;
    }
    // initial overestimate from the bit length
    let bits = 64 - n.leading_zeros();
    let mut x = 1u64 << (bits / k + 1).min(63);
    loop {
        // Newton step for x^k - n, rounded down
        let xk1 = checked_pow_u128(x as u128, k - 1);
        let next = match xk1 {
            Some(p) if p > 0 => {
                let q = (n as u128 / p) as u64;
                ((k as u64 - 1) * x).saturating_add(q) / k as u64
            }
            _ => x / 2,
        };
        if next >= x {
            break;
        }
        x = next;
    }
    while checked_pow_u128((x + 1) as u128, k).map_or(false, |p| p <= n as u128) {
        x += 1;
    }
    while checked_pow_u128(x as u128, k).map_or(true, |p| p > n as u128) {
        x -= 1;
    }
    x
}

fn checked_pow_u128(base: u128, mut exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut b = base;
    loop {
        if exp & 1 == 1 {
            acc = acc.checked_mul(b)?;
        }
        exp >>= 1;
        if exp == 0 {
            return Some(acc);
        }
        b = b.checked_mul(b)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1).pairs(), &[]);
        assert_eq!(factorize(12).pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(
            factorize(9240).pairs(),
            &[(2, 3), (3, 1), (5, 1), (7, 1), (11, 1)]
        );
        for n in 1..2000u64 {
            assert_eq!(factorize(n).value(), n);
        }
    }

    #[test]
    fn totient_small() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(30030), 5760);
        // brute force cross-check
        for n in 1..500u64 {
            let direct = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(totient(n), direct, "n = {n}");
        }
    }

    #[test]
    fn divisors_sorted_and_complete() {
        let d = factorize(360).divisors();
        assert_eq!(d.len(), 24);
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert!(d.iter().all(|x| 360 % x == 0));
    }

    #[test]
    fn centered_residues() {
        assert_eq!(centered_mod(30, 36), -6);
        assert_eq!(centered_mod(18, 36), 18);
        assert_eq!(centered_mod(-1, 36), -1);
        assert_eq!(centered_mod(35, 36), -1);
        for n in 1..40u64 {
            for v in -100i64..100 {
                let c = centered_mod(v, n);
                assert!(2 * c <= n as i64 && 2 * c > -(n as i64));
                assert_eq!(c.rem_euclid(n as i64), v.rem_euclid(n as i64));
            }
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), slow, "n = {n}");
        }
        assert!(is_prime(0xffff_ffff_ffff_ffc5)); // largest 64-bit prime
    }

    #[test]
    fn nth_roots_exact() {
        for n in 0..3000u64 {
            for k in 1..8u32 {
                let r = floor_nth_root(n, k);
                assert!(checked_pow_u128(r as u128, k).unwrap() <= n as u128);
                assert!(checked_pow_u128((r + 1) as u128, k).map_or(true, |p| p > n as u128));
            }
        }
        assert_eq!(floor_nth_root(u64::MAX, 2), 0xffff_ffff);
    }

    #[test]
    fn inverses() {
        for m in 2..200u64 {
            for a in 1..m {
                match mod_inverse(a, m) {
                    Ok(inv) => assert_eq!(a * inv % m, 1),
                    Err(_) => assert_ne!(a.gcd(&m), 1),
                }
            }
        }
    }
}
