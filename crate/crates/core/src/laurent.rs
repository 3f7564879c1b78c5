//! Sparse Laurent polynomials and the three substitutions the solver needs:
//! evaluation at a torsion point, specialization along a decomposition, and
//! monomial substitution along a coset parametrization.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::CyclotomicElement;
use crate::decomposition::TorsionDecomposition;
use crate::error::{Error, Result};
use crate::point::TorsionPoint;

/// Coefficient rings a Laurent polynomial can live over.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn checked_add(&self, rhs: &Self) -> Result<Self>;
    fn checked_mul(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
}

impl Coefficient for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coefficient for CyclotomicElement {
    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }
    fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.add(rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)
    }
    fn neg(&self) -> Self {
        CyclotomicElement::neg(self)
    }
}

/// Sparse Laurent polynomial: exponent vectors map to nonzero coefficients,
/// kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial<C> {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LaurentPolynomial<C> {
    pub fn new(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// Collect terms, merging duplicate exponent vectors and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
    {
        let mut out = Self::new(nvars);
        for (exps, coeff) in terms {
            out.insert(exps, coeff)?;
        }
        Ok(out)
    }

    /// Add a term to the polynomial.
    pub fn insert(&mut self, exps: Vec<i64>, coeff: C) -> Result<()> {
        if exps.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: exps.len(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&exps) {
            None => {
                self.terms.insert(exps, coeff);
            }
            Some(old) => {
                let sum = old.checked_add(&coeff)?;
                if !sum.is_zero() {
                    self.terms.insert(exps, sum);
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// True iff the polynomial has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Laurent total degree: max over terms of the sum of absolute exponents.
    pub fn degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|v| v.unsigned_abs()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut out = Self::new(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(exps, ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Span of a univariate polynomial: largest minus smallest exponent.
    pub fn exponent_span(&self) -> u64 {
        assert_eq!(self.nvars, 1, "span is a univariate notion");
        if self.terms.is_empty() {
            return 0;
        }
        let min = self.terms.keys().next().unwrap()[0];
        let max = self.terms.keys().next_back().unwrap()[0];
        (max - min) as u64
    }
}

fn dot_mod(exps: &[i64], values: &[u64], modulus: u64) -> u64 {
    let acc: i128 = exps
        .iter()
        .zip(values)
        .map(|(&e, &v)| e as i128 * v as i128)
        .sum();
    acc.rem_euclid(modulus as i128) as u64
}

fn dot_i64(exps: &[i64], values: &[i64]) -> i64 {
    let acc: i128 = exps
        .iter()
        .zip(values)
        .map(|(&e, &v)| e as i128 * v as i128)
        .sum();
    i64::try_from(acc).expect("substituted exponent overflows i64")
}

impl LaurentPolynomial<BigRational> {
    /// Exact value at a torsion point, canonically reduced.
    pub fn evaluate_at_torsion(&self, point: &TorsionPoint) -> Result<CyclotomicElement> {
        if point.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.dim(),
            });
        }
        let modulus = point.order();
        let collected: Vec<(u64, BigRational)> = self
            .terms
            .iter()
            .map(|(e, c)| (dot_mod(e, point.exponents(), modulus), c.clone()))
            .collect();
        Ok(CyclotomicElement::from_power_sum(modulus, &collected))
    }

    /// Substitute `X_i -> w^t_i * x^c_i` along a decomposition, where `w` is
    /// the primitive root of order `e`. The result is univariate over the
    /// order-`e` cyclotomic field.
    pub fn specialize(
        &self,
        dec: &TorsionDecomposition,
    ) -> Result<LaurentPolynomial<CyclotomicElement>> {
        if dec.directions.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: dec.directions.len(),
            });
        }
        let e = dec.translate_order;
        let mut out = LaurentPolynomial::new(1);
        for (exps, coeff) in &self.terms {
            let x_exp = dot_i64(exps, &dec.directions);
            let root = dot_mod(exps, &dec.translate, e);
            let scaled = CyclotomicElement::root_power(e, root as i64).scaled(coeff);
            out.insert(vec![x_exp], scaled)?;
        }
        Ok(out)
    }

    /// Substitute `X_i -> z^a_i * prod_j y_j^(B_ij)` where `z` is the
    /// primitive root of the translate's order and the columns of `B` are the
    /// given direction vectors. The result has one variable per direction.
    pub fn substitute_monomial_map(
        &self,
        directions: &[Vec<i64>],
        translate: &TorsionPoint,
    ) -> Result<LaurentPolynomial<CyclotomicElement>> {
        if translate.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: translate.dim(),
            });
        }
        for col in directions {
            if col.len() != self.nvars {
                return Err(Error::DimensionMismatch {
                    expected: self.nvars,
                    found: col.len(),
                });
            }
        }
        let modulus = translate.order();
        let mut out = LaurentPolynomial::new(directions.len());
        for (exps, coeff) in &self.terms {
            let root = dot_mod(exps, translate.exponents(), modulus);
            let y_exps: Vec<i64> = directions.iter().map(|col| dot_i64(exps, col)).collect();
            let scaled = CyclotomicElement::root_power(modulus, root as i64).scaled(coeff);
            out.insert(y_exps, scaled)?;
        }
        Ok(out)
    }
}

impl LaurentPolynomial<CyclotomicElement> {
    /// Value of a univariate polynomial at `z^j`, where `z` is the primitive
    /// root of order `modulus`. Coefficient moduli must divide `modulus`.
    pub fn eval_at_root_power(&self, modulus: u64, j: i64) -> Result<CyclotomicElement> {
        assert_eq!(self.nvars, 1);
        let mut acc = CyclotomicElement::zero(modulus);
        for (exps, coeff) in &self.terms {
            let power = CyclotomicElement::root_power(modulus, (exps[0] as i128 * j as i128)
                .rem_euclid(modulus as i128) as i64);
            acc = acc.add(&coeff.lift_to(modulus)?.mul(&power)?)?;
        }
        Ok(acc)
    }
}

/// Convenience constructor for rational polynomials from integer tuples.
pub fn rational_poly(nvars: usize, terms: &[(i64, &[i64])]) -> LaurentPolynomial<BigRational> {
    LaurentPolynomial::from_terms(
        nvars,
        terms
            .iter()
            .map(|(c, e)| (e.to_vec(), BigRational::from(num_bigint::BigInt::from(*c)))),
    )
    .expect("construction from literals cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;

    fn x_plus_y_minus_1() -> LaurentPolynomial<BigRational> {
        rational_poly(2, &[(1, &[1, 0]), (1, &[0, 1]), (-1, &[0, 0])])
    }

    fn xy_minus_1() -> LaurentPolynomial<BigRational> {
        rational_poly(2, &[(1, &[1, 1]), (-1, &[0, 0])])
    }

    #[test]
    fn construction_merges_and_drops_zeros() {
        let p = rational_poly(2, &[(1, &[1, 0]), (2, &[1, 0]), (3, &[0, 0]), (-3, &[0, 0])]);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.degree(), 1);
        let q = rational_poly(2, &[(5, &[2, -3])]);
        assert_eq!(q.degree(), 5);
    }

    #[test]
    fn evaluate_examples() {
        let p = x_plus_y_minus_1();
        let pt = TorsionPoint::new(6, vec![1, 5]).unwrap();
        assert!(p.evaluate_at_torsion(&pt).unwrap().is_zero());

        let q = xy_minus_1();
        for k in 2..=30u64 {
            let pt = TorsionPoint::new(k, vec![1, k - 1]).unwrap();
            assert!(q.evaluate_at_torsion(&pt).unwrap().is_zero(), "k = {k}");
        }

        let pt = TorsionPoint::new(4, vec![1, 3]).unwrap();
        let value = p.evaluate_at_torsion(&pt).unwrap();
        assert_eq!(
            value,
            CyclotomicElement::from_rational(4, -num_rational::BigRational::from_integer(1.into()))
        );
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let p = x_plus_y_minus_1();
        let pt = TorsionPoint::new(3, vec![1]).unwrap();
        assert!(matches!(
            p.evaluate_at_torsion(&pt),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn specialize_examples() {
        // along the inverse-pair direction the product collapses
        let dec = TorsionDecomposition {
            modulus: 8,
            translate_order: 1,
            unit: 1,
            directions: vec![1, -1],
            translate: vec![0, 0],
        };
        assert!(xy_minus_1().specialize(&dec).unwrap().is_zero());

        let dec = TorsionDecomposition {
            modulus: 17,
            translate_order: 1,
            unit: 1,
            directions: vec![1, 4],
            translate: vec![0, 0],
        };
        let p = x_plus_y_minus_1().specialize(&dec).unwrap();
        let expect = LaurentPolynomial::from_terms(
            1,
            [
                (vec![0i64], CyclotomicElement::from_rational(1, BigRational::from_integer((-1).into()))),
                (vec![1], CyclotomicElement::one(1)),
                (vec![4], CyclotomicElement::one(1)),
            ],
        )
        .unwrap();
        assert_eq!(p, expect);

        // X^2 - Y with a genuine order-2 translate twist
        let dec = TorsionDecomposition {
            modulus: 8,
            translate_order: 2,
            unit: 1,
            directions: vec![0, 1],
            translate: vec![1, 0],
        };
        let p = rational_poly(2, &[(1, &[2, 0]), (-1, &[0, 1])]);
        let s = p.specialize(&dec).unwrap();
        let expect = LaurentPolynomial::from_terms(
            1,
            [
                (vec![0i64], CyclotomicElement::one(2)),
                (vec![1], CyclotomicElement::one(2).neg()),
            ],
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn specialization_span_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(1..4usize);
            let nterms = rng.gen_range(1..6usize);
            let p = LaurentPolynomial::from_terms(
                n,
                (0..nterms).map(|_| {
                    let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
                    (exps, BigRational::from_integer(rng.gen_range(1..5).into()))
                }),
            )
            .unwrap();
            if p.is_zero() {
                continue;
            }
            let modulus = rng.gen_range(2..60u64);
            let a: Vec<i64> = loop {
                let cand: Vec<i64> = (0..n).map(|_| rng.gen_range(0..modulus as i64)).collect();
                if crate::arith::gcd_with(&cand, modulus) == 1 {
                    break cand;
                }
            };
            let dec = decompose(&a, modulus).unwrap();
            let s = p.specialize(&dec).unwrap();
            let max_dir = dec.direction_norm();
            assert!(
                s.exponent_span() <= 2 * p.degree() * max_dir,
                "span bound violated"
            );
        }
    }

    #[test]
    fn substitution_examples() {
        let p = x_plus_y_minus_1();
        // identity substitution returns the polynomial itself
        let id = p
            .substitute_monomial_map(
                &[vec![1, 0], vec![0, 1]],
                &TorsionPoint::identity(2),
            )
            .unwrap();
        let back = LaurentPolynomial::from_terms(
            2,
            id.terms().map(|(e, c)| {
                (
                    e.to_vec(),
                    c.coeffs()[0].clone(),
                )
            }),
        )
        .unwrap();
        assert_eq!(back, p);

        // the product relation vanishes along its own coset
        let z = xy_minus_1()
            .substitute_monomial_map(&[vec![1, -1]], &TorsionPoint::identity(2))
            .unwrap();
        assert!(z.is_zero());

        // X + Y vanishes on the diagonal translated by (1, -1)
        let q = rational_poly(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        let translate = TorsionPoint::new(2, vec![0, 1]).unwrap();
        let z = q
            .substitute_monomial_map(&[vec![1, 1]], &translate)
            .unwrap();
        assert!(z.is_zero());

        // but X + Y - 1 does not vanish along the inverse direction
        let s = p
            .substitute_monomial_map(&[vec![1, -1]], &TorsionPoint::identity(2))
            .unwrap();
        assert!(!s.is_zero());
        assert_eq!(s.num_terms(), 3);
    }

    #[test]
    fn specialization_commutes_with_evaluation() {
        // exhaustive over primitive pairs for small orders
        for n in 2..=18u64 {
            for a1 in 0..n as i64 {
                for a2 in 0..n as i64 {
                    if crate::arith::gcd_with(&[a1, a2], n) != 1 {
                        continue;
                    }
                    let pt = TorsionPoint::new(n, vec![a1 as u64, a2 as u64]).unwrap();
                    let dec = decompose(&[a1, a2], n).unwrap();
                    for p in [x_plus_y_minus_1(), xy_minus_1(),
                        rational_poly(2, &[(2, &[1, -2]), (3, &[0, 1]), (-5, &[2, 0])])] {
                        let direct = p.evaluate_at_torsion(&pt).unwrap();
                        let via = p
                            .specialize(&dec)
                            .unwrap()
                            .eval_at_root_power(n, dec.unit as i64)
                            .unwrap();
                        assert_eq!(direct, via, "n = {n}, a = ({a1},{a2})");
                    }
                }
            }
        }
    }

    #[test]
    fn add_mul_respect_evaluation() {
        let p = x_plus_y_minus_1();
        let q = rational_poly(2, &[(2, &[1, -1]), (1, &[0, 2])]);
        let pt = TorsionPoint::new(12, vec![1, 5]).unwrap();
        let pv = p.evaluate_at_torsion(&pt).unwrap();
        let qv = q.evaluate_at_torsion(&pt).unwrap();
        assert_eq!(
            p.add(&q).unwrap().evaluate_at_torsion(&pt).unwrap(),
            pv.add(&qv).unwrap()
        );
        assert_eq!(
            p.mul(&q).unwrap().evaluate_at_torsion(&pt).unwrap(),
            pv.mul(&qv).unwrap()
        );
    }
}
