//! Effective completeness threshold. An order N is "forced" once
//! φ(N) > 2·d_max·N^(1 - 1/(2n)): every torsion point of that exact order on
//! the variety then certifies a coset, because a nonzero specialization
//! cannot host φ(N)/e conjugate roots inside its exponent span. The bound
//! returned here is one more than the largest order that is not forced.
//!
//! The scan terminates by the explicit totient lower bound
//! φ(N) > N / (e^γ·ln ln N + 3/ln ln N) for N ≥ 3: beyond an exact, outward
//! rounded cutoff the polynomial side wins forever. Everything is integer or
//! rational interval arithmetic; no floating point.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{floor_nth_root, is_prime, totient};
use crate::error::{Error, Result};

/// True when the conjugate-count inequality forces certificates at this
/// order: φ(N)^(2n) > (2·d_max)^(2n)·N^(2n-1), compared exactly.
pub fn completeness_holds(nvars: usize, d_max: u64, order: u64) -> bool {
    assert!(nvars >= 1 && order >= 1);
    let tn = 2 * nvars as u32;
    let lhs = BigUint::from(totient(order)).pow(tn);
    let rhs = BigUint::from(2 * d_max).pow(tn) * BigUint::from(order).pow(tn - 1);
    lhs > rhs
}

fn rat_u(num: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

fn rat_frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ln2_lb() -> BigRational {
    rat_frac(6_931_471_805_599_453, 10_000_000_000_000_000)
}

fn ln2_ub() -> BigRational {
    rat_frac(6_931_471_805_599_454, 10_000_000_000_000_000)
}

fn exp_gamma_ub() -> BigRational {
    rat_frac(17_810_724_179_901_980, 10_000_000_000_000_000)
}

/// Rational lower and upper bounds for ln(x), x > 1, via binary reduction to
/// [1,2) and the atanh series with an explicit tail estimate.
fn ln_bounds(x: &BigRational) -> (BigRational, BigRational) {
    assert!(x > &BigRational::one(), "ln bounds need x > 1");
    let two = rat_u(2);
    let mut m = x.clone();
    let mut halvings = 0u32;
    while m >= two {
        m /= &two;
        halvings += 1;
    }
    // ln m = 2·atanh(t), t = (m-1)/(m+1) in [0, 1/3)
    let t = (&m - BigRational::one()) / (&m + BigRational::one());
    let t2 = &t * &t;
    let mut term = t.clone();
    let mut sum = BigRational::zero();
    let terms = 12u64;
    for j in 0..terms {
        sum += &term / rat_u(2 * j + 1);
        term *= &t2;
    }
    // remaining tail is at most t^(2J+1)/(2J+1) · 1/(1-t²) ≤ term·(9/8)/(2J+1)
    let tail = &term * rat_frac(9, 8) / rat_u(2 * terms + 1);
    let lb = rat_u(halvings as u64) * ln2_lb() + &sum * &two;
    let ub = rat_u(halvings as u64) * ln2_ub() + (&sum + &tail) * &two;
    (lb, ub)
}

/// Smallest power of two C ≥ 16 with a certificate that no order above C can
/// violate the completeness condition: the level check compares N^(1/(2n))
/// against the totient-bound envelope at C, the slope check makes the
/// comparison persist for all larger N.
pub fn analytic_cutoff(nvars: usize, d_max: u64) -> Result<u64> {
    assert!(nvars >= 1);
    let tn = 2 * nvars as u64;
    for k in 4u32..=62 {
        let c = 1u64 << k;
        let root = rat_u(floor_nth_root(c, tn as u32));
        let ln_c_lb = rat_u(k as u64) * ln2_lb();
        let ln_c_ub = rat_u(k as u64) * ln2_ub();
        let lnln_lb = ln_bounds(&ln_c_lb).0;
        let lnln_ub = ln_bounds(&ln_c_ub).1;
        if lnln_lb <= BigRational::zero() {
            continue;
        }
        let envelope = rat_u(2 * d_max) * (exp_gamma_ub() * &lnln_ub + rat_u(3) / &lnln_lb);
        let level = root >= envelope;
        let slope = &root * &ln_c_lb >= rat_u(4 * nvars as u64 * d_max) * exp_gamma_ub();
        if level && slope {
            return Ok(c);
        }
    }
    Err(Error::OutOfRange(
        "analytic cutoff exceeds u64 for these parameters".into(),
    ))
}

/// Largest order up to `limit` where the completeness condition fails,
/// via a totient sieve with a cheap one-sided filter before exact compares.
fn sieve_max_failing(nvars: usize, d_max: u64, limit: u64) -> u64 {
    let tn = 2 * nvars as u32;
    let size = (limit + 1) as usize;
    let mut phi: Vec<u32> = (0..size as u32).collect();
    for p in 2..size {
        if phi[p] == p as u32 {
            for m in (p..size).step_by(p) {
                phi[m] -= phi[m] / p as u32;
            }
        }
    }
    let mut max_fail = 0u64;
    for n in (1..=limit).rev() {
        let ph = phi[n as usize] as u128;
        let root = floor_nth_root(n, tn) as u128;
        if ph * root > 2 * d_max as u128 * n as u128 {
            continue;
        }
        if !completeness_holds(nvars, d_max, n) {
            max_fail = n;
            break;
        }
    }
    max_fail
}

const SIEVE_LIMIT: u64 = 1 << 22;
const NODE_BUDGET: u64 = 4_000_000;

struct RadicalSearch {
    tn: u32,
    nodes: u64,
    best: BigUint,
}

impl RadicalSearch {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::OutOfRange(
                "order bound search exceeded its node budget".into(),
            ));
        }
        Ok(())
    }

    /// Largest multiple of `radical` with the same prime support, at most
    /// `bound`.
    fn max_smooth(&mut self, radical: &BigUint, primes: &[u64], bound: &BigUint) -> Result<BigUint> {
        self.tick()?;
        let mut best = radical.clone();
        for (i, &p) in primes.iter().enumerate() {
            let next = radical * BigUint::from(p);
            if next <= *bound {
                let sub = self.max_smooth(&next, &primes[i..], bound)?;
                if sub > best {
                    best = sub;
                }
            }
        }
        Ok(best)
    }

    /// (q-1)^(2n) ≥ q^(2n-1): once true, appending q (or anything larger) to
    /// a radical can only push it further past its failure threshold.
    fn growth_factor_at_least_one(&self, q: u64) -> bool {
        BigUint::from(q - 1).pow(self.tn) >= BigUint::from(q).pow(self.tn - 1)
    }

    fn explore(
        &mut self,
        last_prime: u64,
        radical: &BigUint,
        primes: &[u64],
        num: &BigUint,
        den: &BigUint,
    ) -> Result<()> {
        self.tick()?;
        let bound = num / den;
        if *radical <= bound {
            let cand = self.max_smooth(radical, primes, &bound)?;
            if cand > self.best {
                self.best = cand.clone();
            }
        }
        let mut q = next_prime(last_prime);
        loop {
            let radical2 = radical * BigUint::from(q);
            let num2 = num * BigUint::from(q).pow(self.tn);
            let den2 = den * BigUint::from(q - 1).pow(self.tn);
            let viable = radical2 <= &num2 / &den2;
            if !viable && self.growth_factor_at_least_one(q) {
                break;
            }
            let mut primes2 = primes.to_vec();
            primes2.push(q);
            self.explore(q, &radical2, &primes2, &num2, &den2)?;
            q = next_prime(q);
        }
        Ok(())
    }
}

fn next_prime(after: u64) -> u64 {
    let mut q = after + 1;
    loop {
        if q < 2 {
            q = 2;
        }
        if is_prime(q) {
            return q;
        }
        q += 1;
    }
}

/// Largest failing order found by enumerating prime supports: N fails exactly
/// when N·prod((p-1)^(2n)) ≤ (2d)^(2n)·prod(p^(2n)) over the primes of N, so
/// each support carries an explicit ceiling and only finitely many supports
/// admit any failure at all.
fn radical_max_failing(nvars: usize, d_max: u64) -> Result<BigUint> {
    let tn = 2 * nvars as u32;
    let mut search = RadicalSearch {
        tn,
        nodes: 0,
        best: BigUint::zero(),
    };
    let base = BigUint::from(2 * d_max).pow(tn);
    if base.is_zero() {
        return Ok(BigUint::zero());
    }
    search.explore(1, &BigUint::one(), &[], &base, &BigUint::one())?;
    Ok(search.best)
}

static BOUND_MEMO: Lazy<RwLock<HashMap<(usize, u64), u64>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// One more than the largest order where the completeness condition fails;
/// every torsion point on the variety of order at least this bound lies on a
/// certified coset.
pub fn order_bound(nvars: usize, d_max: u64) -> Result<u64> {
    if let Some(&m) = BOUND_MEMO.read().unwrap().get(&(nvars, d_max)) {
        return Ok(m);
    }
    let cutoff = analytic_cutoff(nvars, d_max)?;
    let max_fail: BigUint = if cutoff <= SIEVE_LIMIT {
        BigUint::from(sieve_max_failing(nvars, d_max, cutoff))
    } else {
        radical_max_failing(nvars, d_max)?
    };
    let m = u64::try_from(&(max_fail + BigUint::one()))
        .map_err(|_| Error::OutOfRange("order bound exceeds u64".into()))?;
    BOUND_MEMO.write().unwrap().insert((nvars, d_max), m);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_bounds_bracket_known_values() {
        // pins straddle the true logarithm: lo_pin < ln(x) < hi_pin, all
        // scaled by 1e16
        let scale = 10_000_000_000_000_000u64;
        let cases = [
            (rat_u(2), 6_931_471_805_599_452u64, 6_931_471_805_599_455u64),
            (rat_u(10), 23_025_850_929_940_456, 23_025_850_929_940_458),
            (rat_frac(1001, 1000), 9_995_003_330_834, 9_995_003_330_836),
        ];
        for (x, lo_pin, hi_pin) in cases {
            let (lb, ub) = ln_bounds(&x);
            assert!(lb <= rat_frac(hi_pin, scale), "lb too high for {x}");
            assert!(rat_frac(lo_pin, scale) <= ub, "ub too low for {x}");
            assert!(lb <= ub);
            assert!(ub - lb < rat_frac(1, 10_000_000), "bounds too loose for {x}");
        }
    }

    #[test]
    fn completeness_condition_examples() {
        // phi(30) = 8 against 2·sqrt(30) ~ 10.95
        assert!(!completeness_holds(1, 1, 30));
        assert!(completeness_holds(1, 1, 43));
        // phi(6930) = 1440 against 2·6930^(3/4) ~ 1513
        assert!(!completeness_holds(2, 1, 6930));
        assert!(completeness_holds(2, 1, 30030));
        assert!(!completeness_holds(2, 1, 7140));
        assert!(completeness_holds(2, 1, 7141));
        // degree zero forces everything
        assert!(completeness_holds(2, 0, 123456));
    }

    #[test]
    fn cutoff_terminates_and_is_modest() {
        let c = analytic_cutoff(1, 1).unwrap();
        assert!((64..=4096).contains(&c), "got {c}");
        let c = analytic_cutoff(2, 1).unwrap();
        assert!((8192..=131072).contains(&c), "got {c}");
        assert!(analytic_cutoff(2, 3).unwrap() <= SIEVE_LIMIT);
    }

    #[test]
    fn frozen_bounds() {
        assert_eq!(order_bound(1, 1).unwrap(), 43);
        assert_eq!(order_bound(2, 1).unwrap(), 7141);
        assert_eq!(order_bound(1, 0).unwrap(), 1);
        assert_eq!(order_bound(3, 0).unwrap(), 1);
    }

    #[test]
    fn no_failures_above_frozen_bounds() {
        for n in 43..=5000u64 {
            assert!(completeness_holds(1, 1, n), "unexpected failure at {n}");
        }
        for n in 7141..=20000u64 {
            assert!(completeness_holds(2, 1, n), "unexpected failure at {n}");
        }
    }

    #[test]
    fn radical_search_agrees_with_sieve() {
        for (nvars, d) in [(1usize, 1u64), (1, 2), (2, 1), (2, 2)] {
            let cutoff = analytic_cutoff(nvars, d).unwrap();
            assert!(cutoff <= SIEVE_LIMIT);
            let sieve = BigUint::from(sieve_max_failing(nvars, d, cutoff));
            let radical = radical_max_failing(nvars, d).unwrap();
            assert_eq!(sieve, radical, "nvars {nvars}, d {d}");
        }
    }

    #[test]
    fn bound_grows_with_degree_and_dimension() {
        let b11 = order_bound(1, 1).unwrap();
        let b12 = order_bound(1, 2).unwrap();
        let b21 = order_bound(2, 1).unwrap();
        assert!(b12 > b11);
        assert!(b21 > b11);
    }
}
