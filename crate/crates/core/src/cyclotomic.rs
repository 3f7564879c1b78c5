//! Exact arithmetic in cyclotomic fields.
//!
//! Elements of the degree-`totient(m)` field extension are stored on the power
//! basis `1, z, ..., z^(totient(m)-1)` of a primitive `m`-th root of unity `z`,
//! canonically reduced modulo the `m`-th cyclotomic polynomial. Equality of
//! elements is therefore equality of coefficient vectors. Coefficients are
//! exact rationals; nothing here touches floating point.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{factorize, totient};
use crate::error::{Error, Result};

/// Cyclotomic polynomials are memoized globally up to this modulus; larger
/// ones are recomputed per call so a sweep over many moduli stays bounded in
/// memory.
const MEMO_MAX: u64 = 1024;

static PHI_MEMO: Lazy<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Coefficients of the `m`-th cyclotomic polynomial, ascending degree, monic.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic polynomial requires m >= 1");
    if let Some(hit) = PHI_MEMO.read().unwrap().get(&m) {
        return hit.clone();
    }
    let mut local = HashMap::new();
    phi_poly(m, &mut local)
}

fn phi_poly(m: u64, local: &mut HashMap<u64, Arc<Vec<BigInt>>>) -> Arc<Vec<BigInt>> {
    if let Some(hit) = PHI_MEMO.read().unwrap().get(&m) {
        return hit.clone();
    }
    if let Some(hit) = local.get(&m) {
        return hit.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        let fac = factorize(m);
        let rad = fac.radical();
        if rad < m {
            // the polynomial for m is the squarefree one evaluated at x^(m/rad)
            let base = phi_poly(rad, local);
            let stride = (m / rad) as usize;
            let mut out = vec![BigInt::zero(); (base.len() - 1) * stride + 1];
            for (i, c) in base.iter().enumerate() {
                if !c.is_zero() {
                    out[i * stride] = c.clone();
                }
            }
            out
        } else {
            // squarefree: divide x^m - 1 by the polynomials of all proper divisors
            let mut num = vec![BigInt::zero(); m as usize + 1];
            num[0] = BigInt::from(-1);
            num[m as usize] = BigInt::one();
            for d in fac.divisors() {
                if d < m {
                    let den = phi_poly(d, local);
                    num = exact_div_monic(num, &den);
                }
            }
            num
        }
    };
    debug_assert_eq!(poly.len() as u64, totient(m) + 1);
    debug_assert!(poly.last().unwrap().is_one());
    let arc = Arc::new(poly);
    if m <= MEMO_MAX {
        PHI_MEMO
            .write()
            .unwrap()
            .entry(m)
            .or_insert_with(|| arc.clone());
    } else {
        local.insert(m, arc.clone());
    }
    arc
}

/// Exact quotient of `num` by a monic `den`; panics if the division leaves a
/// remainder.
fn exact_div_monic(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    assert!(den[dn].is_one());
    assert!(num.len() > dn);
    let qn = num.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = std::mem::replace(&mut num[i + dn], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, d) in den[..dn].iter().enumerate() {
            if !d.is_zero() {
                num[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    assert!(num.iter().all(Zero::is_zero), "division left a remainder");
    quot
}

/// An element of the `m`-th cyclotomic field on the canonical power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    modulus: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    pub fn zero(modulus: u64) -> Self {
        assert!(modulus >= 1);
        CyclotomicElement {
            modulus,
            coeffs: vec![BigRational::zero(); totient(modulus) as usize],
        }
    }

    pub fn one(modulus: u64) -> Self {
        Self::from_rational(modulus, BigRational::one())
    }

    pub fn from_rational(modulus: u64, value: BigRational) -> Self {
        let mut out = Self::zero(modulus);
        out.coeffs[0] = value;
        out
    }

    /// `z^j` for the primitive root `z` of the given modulus; `j` may be any
    /// integer and is reduced modulo the modulus first.
    pub fn root_power(modulus: u64, j: i64) -> Self {
        assert!(modulus >= 1);
        let jm = j.rem_euclid(modulus as i64) as usize;
        let deg = totient(modulus) as usize;
        if jm < deg {
            let mut out = Self::zero(modulus);
            out.coeffs[jm] = BigRational::one();
            return out;
        }
        let mut dense = vec![BigRational::zero(); jm + 1];
        dense[jm] = BigRational::one();
        Self::from_dense(modulus, dense)
    }

    /// Reduce an arbitrary-length coefficient vector in the root power basis.
    pub fn from_dense(modulus: u64, mut dense: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(modulus);
        let deg = phi.len() - 1;
        for i in (deg..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut dense[i], BigRational::zero());
            for (j, d) in phi[..deg].iter().enumerate() {
                if !d.is_zero() {
                    let sub = &c * BigRational::from(d.clone());
                    dense[i - deg + j] -= sub;
                }
            }
        }
        dense.resize(deg, BigRational::zero());
        CyclotomicElement {
            modulus,
            coeffs: dense,
        }
    }

    /// Canonical sum `sum of coeff * z^exp` with exponents already reduced
    /// modulo the modulus.
    pub fn from_power_sum(modulus: u64, terms: &[(u64, BigRational)]) -> Self {
        let mut dense = vec![BigRational::zero(); modulus as usize];
        for (exp, coeff) in terms {
            debug_assert!(*exp < modulus);
            dense[*exp as usize] += coeff;
        }
        Self::from_dense(modulus, dense)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coefficients on the power basis, length `totient(modulus)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicElement {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut conv = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_dense(self.modulus, conv))
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        CyclotomicElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Reinterpret in the larger field of the given modulus, which must be a
    /// multiple of the current one.
    pub fn lift_to(&self, modulus: u64) -> Result<Self> {
        if modulus % self.modulus != 0 {
            return Err(Error::NotADivisor {
                modulus: self.modulus,
                target: modulus,
            });
        }
        if modulus == self.modulus {
            return Ok(self.clone());
        }
        let stride = (modulus / self.modulus) as usize;
        let mut dense = vec![BigRational::zero(); modulus as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[i * stride] = c.clone();
            }
        }
        Ok(Self::from_dense(modulus, dense))
    }
}

/// Exact test whether `sum of coeff * z^exp` vanishes, where `z` is a
/// primitive `m`-th root of unity.
///
/// Works prime by prime: exponents split through the tower of prime-power
/// subfields, top powers rewrite through the prime-power minimal polynomial,
/// and the element is zero iff every coordinate bucket vanishes. Stays sparse,
/// so it is fast even for large `m`, unlike a dense reduction.
pub fn root_sum_is_zero(m: u64, terms: &[(i64, BigRational)]) -> bool {
    assert!(m >= 1);
    let mut merged: HashMap<u64, BigRational> = HashMap::new();
    for (exp, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        let e = exp.rem_euclid(m as i64) as u64;
        let slot = merged.entry(e).or_insert_with(BigRational::zero);
        *slot += coeff;
    }
    merged.retain(|_, c| !c.is_zero());
    buckets_vanish(m, merged)
}

fn buckets_vanish(m: u64, terms: HashMap<u64, BigRational>) -> bool {
    if terms.is_empty() {
        return true;
    }
    if m == 1 {
        return terms.values().sum::<BigRational>().is_zero();
    }
    let (p, a) = *factorize(m).pairs().last().unwrap();
    let q = p.pow(a);
    let r = m / q;
    let base = (p - 1) * p.pow(a - 1); // extension degree of the prime-power level
    let step = p.pow(a - 1);
    // alpha in [0, base) indexes the power basis over the subfield of order r
    let mut buckets: HashMap<u64, HashMap<u64, BigRational>> = HashMap::new();
    let mut push = |alpha: u64, beta: u64, c: BigRational| {
        let slot = buckets
            .entry(alpha)
            .or_default()
            .entry(beta)
            .or_insert_with(BigRational::zero);
        *slot += c;
    };
    for (k, c) in terms {
        let alpha = k % q;
        let beta = k % r;
        if alpha < base {
            push(alpha, beta, c);
        } else {
            // z^base = -(1 + z^step + ... + z^((p-2)*step)) at this level
            let rem = alpha - base;
            for j in 0..p - 1 {
                push(rem + j * step, beta, -c.clone());
            }
        }
    }
    buckets.into_values().all(|bucket| {
        let mut cleaned = bucket;
        cleaned.retain(|_, c| !c.is_zero());
        buckets_vanish(r, cleaned)
    })
}
