//! Short multiples of exponent vectors and the induced decomposition of a
//! torsion point into a low-order translate and a one-parameter direction.
//!
//! For a primitive exponent vector `a` modulo `N` the scan below finds the
//! multiplier `k` whose centered residue vector `k*a mod N` has minimal max
//! norm. Adjusting `k` by a unit and dividing out the common factor
//! `e = gcd(k, N)` turns this into the identity
//!
//! `a_i = f*c_i + (N/e)*t_i  (mod N)`
//!
//! with `gcd(f, N) = 1` and `t_i` in `[0, e)`: the point is the order-`e`
//! translate `t` times a power of the one-parameter subgroup with exponent
//! direction `c`. For `N > (2^n)^2` both `e` and `e*max|c_i|` stay below
//! `N^(1-1/(2n))`, which is what makes the solver's certificates terminate.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::arith::{factorize, gcd_with, mod_inverse};
use crate::error::{Error, Result};

/// Minimal-norm nonzero multiple of an exponent vector, with the multiplier
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortMultiple {
    /// Multiplier `k` in `[1, modulus)`; smallest among all minimizers.
    pub multiplier: u64,
    /// Centered residues of `k*a` modulo the modulus, entries in `(-N/2, N/2]`.
    pub vector: Vec<i64>,
    pub modulus: u64,
    /// Whether the max norm meets the `floor(N^(1-1/(2n)))` threshold.
    pub bound_met: bool,
}

impl ShortMultiple {
    /// Max norm of the residue vector.
    pub fn norm(&self) -> u64 {
        self.vector.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}

/// `floor(N^(1 - 1/(2n)))`, computed exactly.
pub fn norm_threshold(n_vars: usize, modulus: u64) -> u64 {
    let k = 2 * n_vars as u32;
    let pow = BigUint::from(modulus).pow(k - 1);
    let root = pow.nth_root(k);
    u64::try_from(root).expect("threshold fits u64 since it is at most the modulus")
}

/// Scan all multipliers `k` in `[1, N)` for the centered residue vector
/// `k*a mod N` of minimal max norm; ties resolve to the smallest `k`.
///
/// Requires `gcd(a_1, ..., a_n, N) = 1` (so the point has exact order `N`)
/// and `N >= 2`.
pub fn short_multiple(a: &[i64], modulus: u64) -> Result<ShortMultiple> {
    if modulus < 2 {
        return Err(Error::ModulusTooSmall {
            min: 2,
            got: modulus,
        });
    }
    assert!(!a.is_empty(), "exponent vector must be nonempty");
    if gcd_with(a, modulus) != 1 {
        return Err(Error::NotPrimitive { modulus });
    }
    let n = modulus as i64;
    let reduced: Vec<i64> = a.iter().map(|&v| v.rem_euclid(n)).collect();
    let mut best_norm = u64::MAX;
    let mut best_k = 0u64;
    let mut best = Vec::new();
    let mut current = vec![0i64; a.len()];
    for k in 1..modulus {
        let mut norm = 0u64;
        for (slot, &step) in current.iter_mut().zip(&reduced) {
            *slot += step;
            if *slot >= n {
                *slot -= n;
            }
            let centered = if 2 * *slot > n { *slot - n } else { *slot };
            norm = norm.max(centered.unsigned_abs());
        }
        if norm < best_norm {
            best_norm = norm;
            best_k = k;
            best = current
                .iter()
                .map(|&v| if 2 * v > n { v - n } else { v })
                .collect();
            if norm == 1 {
                break;
            }
        }
    }
    debug_assert!(best_norm >= 1, "k*a cannot vanish for primitive a");
    let bound_met = best_norm <= norm_threshold(a.len(), modulus);
    Ok(ShortMultiple {
        multiplier: best_k,
        vector: best,
        modulus,
        bound_met,
    })
}

/// Replace the multiplier `k` by `l` with `gcd(l, N) = 1` and
/// `l * gcd(k, N) = k (mod N)`. Returns `(gcd(k, N), l)`.
pub fn unit_adjust(k: u64, modulus: u64) -> Result<(u64, u64)> {
    assert!(modulus >= 1);
    let k = k % modulus;
    if k == 0 {
        return Err(Error::ZeroResidue { modulus });
    }
    let e = k.gcd(&modulus);
    let k_over_e = k / e;
    let fill: u64 = factorize(modulus)
        .primes()
        .filter(|&p| k_over_e % p != 0)
        .product();
    let l = ((k_over_e as u128 + fill as u128 * (modulus / e) as u128) % modulus as u128) as u64;
    assert_eq!(l.gcd(&modulus), 1, "adjusted multiplier must be a unit");
    assert_eq!(
        (l as u128 * e as u128) % modulus as u128,
        k as u128,
        "adjusted multiplier must reproduce k"
    );
    Ok((e, l))
}

/// Decomposition of a torsion point of order `N`: an order-`e` translate and
/// a power of a one-parameter subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionDecomposition {
    /// Order `N` of the decomposed point.
    pub modulus: u64,
    /// Order `e` of the translate; divides the modulus.
    pub translate_order: u64,
    /// Unit `f` modulo `N` relating the point to the subgroup parameter.
    pub unit: u64,
    /// Exponent direction `c` of the one-parameter subgroup.
    pub directions: Vec<i64>,
    /// Translate exponents `t`, entries in `[0, e)`.
    pub translate: Vec<u64>,
}

impl TorsionDecomposition {
    /// `2^(2n) + 1`, the order above which the size bounds are guaranteed.
    pub fn bound_threshold(n_vars: usize) -> Option<u64> {
        let shift = 2 * n_vars as u32;
        (shift < 63).then(|| (1u64 << shift) + 1)
    }

    /// Max norm of the direction vector.
    pub fn direction_norm(&self) -> u64 {
        self.directions
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Whether `e <= N^(1-1/(2n))` and `e * max|c_i| <= N^(1-1/(2n))` hold.
    pub fn bounds_hold(&self) -> bool {
        let k = 2 * self.directions.len() as u32;
        let rhs = BigUint::from(self.modulus).pow(k - 1);
        let e_ok = BigUint::from(self.translate_order).pow(k) <= rhs;
        let c_ok = BigUint::from(self.translate_order * self.direction_norm()).pow(k) <= rhs;
        e_ok && c_ok
    }
}

/// Decompose a primitive exponent vector modulo `N >= 2`.
pub fn decompose(a: &[i64], modulus: u64) -> Result<TorsionDecomposition> {
    let sm = short_multiple(a, modulus)?;
    let (e, l) = unit_adjust(sm.multiplier, modulus)?;
    let directions: Vec<i64> = sm
        .vector
        .iter()
        .map(|&b| {
            debug_assert_eq!(b.rem_euclid(e as i64), 0, "gcd(k, N) divides every entry");
            b / e as i64
        })
        .collect();
    let unit = mod_inverse(l, modulus)?;
    let n = modulus as i64;
    let step = (modulus / e) as i64;
    let translate: Vec<u64> = a
        .iter()
        .zip(&directions)
        .map(|(&ai, &ci)| {
            let diff = (ai as i128 - unit as i128 * ci as i128).rem_euclid(modulus as i128) as i64;
            assert_eq!(diff % step, 0, "translate exponents must be integral");
            let t = (diff / step).rem_euclid(n / step) as u64;
            debug_assert!(t < e);
            t
        })
        .collect();
    let dec = TorsionDecomposition {
        modulus,
        translate_order: e,
        unit,
        directions,
        translate,
    };
    debug_assert!(verify_decomposition(a, &dec));
    Ok(dec)
}

/// Independent integer-arithmetic check of all decomposition invariants
/// against the original exponent vector.
pub fn verify_decomposition(a: &[i64], dec: &TorsionDecomposition) -> bool {
    let n = dec.modulus;
    let e = dec.translate_order;
    if n < 2 || e == 0 || n % e != 0 {
        return false;
    }
    if dec.unit.gcd(&n) != 1 {
        return false;
    }
    if a.len() != dec.directions.len() || a.len() != dec.translate.len() {
        return false;
    }
    if dec.translate.iter().any(|&t| t >= e) {
        return false;
    }
    let step = n / e;
    let identity = a.iter().zip(&dec.directions).zip(&dec.translate).all(
        |((&ai, &ci), &ti)| {
            let lhs = (ai as i128).rem_euclid(n as i128);
            let rhs = (dec.unit as i128 * ci as i128 + step as i128 * ti as i128)
                .rem_euclid(n as i128);
            lhs == rhs
        },
    );
    if !identity {
        return false;
    }
    match TorsionDecomposition::bound_threshold(a.len()) {
        Some(threshold) if n >= threshold => dec.bounds_hold(),
        _ => true,
    }
}
