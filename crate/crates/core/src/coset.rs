//! Torsion cosets: a torsion translate of a subtorus, stored in canonical
//! form so that set equality is structural equality. The direction lattice is
//! saturated (otherwise membership tests along the parametrization would skip
//! points whose exponents need the denominators), and the translate is
//! reduced to the representative of minimal order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice::{saturate_columns, smith_form, solve_mod, IntMat};
use crate::laurent::LaurentPolynomial;
use crate::point::TorsionPoint;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionCoset {
    translate: TorsionPoint,
    directions: Vec<Vec<i64>>,
}

impl TorsionCoset {
    /// Canonicalize a coset given by any torsion translate and any generating
    /// set for the direction lattice (columns, one per generator).
    pub fn new(translate: TorsionPoint, raw_directions: &[Vec<i64>]) -> Result<Self> {
        let n = translate.dim();
        if raw_directions.is_empty() {
            return Err(Error::ZeroMatrix);
        }
        for col in raw_directions {
            if col.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: col.len(),
                });
            }
        }
        let sat = saturate_columns(&IntMat::from_cols(n, raw_directions)?)?;
        let rank = sat.cols();
        let mut directions = Vec::with_capacity(rank);
        for c in 0..rank {
            let col: Result<Vec<i64>> = sat
                .column(c)
                .iter()
                .map(|v| {
                    i64::try_from(v).map_err(|_| {
                        Error::OutOfRange("saturated direction entry exceeds i64".into())
                    })
                })
                .collect();
            directions.push(col?);
        }
        let translate = canonical_translate(&sat, &translate)?;
        Ok(TorsionCoset {
            translate,
            directions,
        })
    }

    pub fn translate(&self) -> &TorsionPoint {
        &self.translate
    }

    /// Saturated direction basis, canonical order, one column per dimension.
    pub fn directions(&self) -> &[Vec<i64>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.translate.dim()
    }

    /// Exact membership test for a torsion point.
    pub fn contains_point(&self, point: &TorsionPoint) -> Result<bool> {
        let n = self.ambient_dim();
        if point.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: point.dim(),
            });
        }
        let nt = BigInt::from(self.translate.order());
        let np = BigInt::from(point.order());
        let l = nt.lcm(&np);
        let lift_t = &l / &nt;
        let lift_p = &l / &np;
        let delta: Vec<BigInt> = point
            .exponents()
            .iter()
            .zip(self.translate.exponents())
            .map(|(&p, &t)| (BigInt::from(p) * &lift_p - BigInt::from(t) * &lift_t).mod_floor(&l))
            .collect();
        let mat = IntMat::from_cols(n, &self.directions)?;
        Ok(solve_mod(&mat, &delta, &l).is_some())
    }

    /// True iff every polynomial vanishes identically along the coset's
    /// monomial parametrization.
    pub fn in_zero_locus(&self, polys: &[LaurentPolynomial<BigRational>]) -> Result<bool> {
        for p in polys {
            if !p
                .substitute_monomial_map(&self.directions, &self.translate)?
                .is_zero()
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The orbit of this coset under the unit-group action on the translate.
    /// A rational polynomial system vanishing on the coset vanishes on every
    /// member, so reports stay closed under conjugation.
    pub fn galois_conjugates(&self) -> Result<Vec<TorsionCoset>> {
        let n = self.translate.order();
        let mut out = Vec::new();
        for u in 1..=n {
            if num_integer::gcd(u, n) != 1 {
                continue;
            }
            let exps: Vec<i64> = self
                .translate
                .exponents()
                .iter()
                .map(|&a| ((a as u128 * u as u128) % n as u128) as i64)
                .collect();
            let translate = TorsionPoint::canonicalize(n, &exps)?;
            out.push(TorsionCoset::new(translate, &self.directions)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Replace the translate by the canonical representative modulo the subtorus:
/// minimal order first, then least free coordinates in the Smith basis.
fn canonical_translate(sat: &IntMat, translate: &TorsionPoint) -> Result<TorsionPoint> {
    let n = sat.rows();
    let rank = sat.cols();
    let snf = smith_form(sat);
    debug_assert!(snf.diag.iter().all(|d| d.is_one()), "basis not saturated");
    if rank == n {
        return Ok(TorsionPoint::identity(n));
    }
    let order = BigInt::from(translate.order());
    let a: Vec<BigInt> = translate
        .exponents()
        .iter()
        .map(|&v| BigInt::from(v))
        .collect();
    let sigma: Vec<BigInt> = snf
        .u
        .mul_vec(&a)
        .into_iter()
        .map(|v| v.mod_floor(&order))
        .collect();
    // invariant coordinates: the classes sigma_i / N in Q/Z for i >= rank
    let mut min_order = BigInt::one();
    for s in &sigma[rank..] {
        let den = &order / s.gcd(&order);
        min_order = min_order.lcm(&den);
    }
    let mut w = vec![BigInt::zero(); n];
    for i in rank..n {
        w[i] = (&sigma[i] * &min_order) / &order;
    }
    let mut content = min_order.clone();
    for v in &w[rank..] {
        content = content.gcd(v);
    }
    if !content.is_one() {
        w[rank - 1] = BigInt::one();
    }
    let exps: Result<Vec<i64>> = snf
        .u_inv
        .mul_vec(&w)
        .into_iter()
        .map(|v| {
            i64::try_from(v.mod_floor(&min_order))
                .map_err(|_| Error::OutOfRange("translate exponent exceeds i64".into()))
        })
        .collect();
    let modulus = u64::try_from(&min_order)
        .map_err(|_| Error::OutOfRange("translate order exceeds u64".into()))?;
    let point = TorsionPoint::canonicalize(modulus, &exps?)?;
    debug_assert_eq!(point.order(), modulus);
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rational_poly;

    fn pt(order: u64, exps: &[u64]) -> TorsionPoint {
        TorsionPoint::new(order, exps.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form_merges_presentations() {
        let a = TorsionCoset::new(TorsionPoint::identity(2), &[vec![1, -1]]).unwrap();
        let b = TorsionCoset::new(TorsionPoint::identity(2), &[vec![-1, 1]]).unwrap();
        let c = TorsionCoset::new(TorsionPoint::identity(2), &[vec![2, -2]]).unwrap();
        let d = TorsionCoset::new(pt(4, &[1, 3]), &[vec![1, -1]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, d);
        assert_eq!(a.translate(), &TorsionPoint::identity(2));
        assert_eq!(a.directions(), &[vec![1, -1]]);
    }

    #[test]
    fn translate_reduced_to_minimal_order() {
        // translate (zeta_12, zeta_12^7) on the diagonal-direction coset:
        // the class of x/y is zeta_2, so the canonical translate has order 2
        let c = TorsionCoset::new(pt(12, &[1, 7]), &[vec![1, 1]]).unwrap();
        assert_eq!(c.translate().order(), 2);
        assert!(c.contains_point(&pt(12, &[1, 7])).unwrap());
        let d = TorsionCoset::new(pt(2, &[0, 1]), &[vec![1, 1]]).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn saturation_fixes_membership() {
        // direction (2, 0) saturates to (1, 0); the point (zeta_4, 1) lies on
        // the subtorus even though its exponent vector is not in the raw span
        let c = TorsionCoset::new(TorsionPoint::identity(2), &[vec![2, 0]]).unwrap();
        assert_eq!(c.directions(), &[vec![1, 0]]);
        assert!(c.contains_point(&pt(4, &[1, 0])).unwrap());
        assert!(!c.contains_point(&pt(4, &[1, 1])).unwrap());
    }

    #[test]
    fn membership_examples() {
        let inverse_pair = TorsionCoset::new(TorsionPoint::identity(2), &[vec![1, -1]]).unwrap();
        for k in 2..=24u64 {
            assert!(inverse_pair.contains_point(&pt(k, &[1, k - 1])).unwrap());
        }
        assert!(inverse_pair.contains_point(&TorsionPoint::identity(2)).unwrap());
        assert!(!inverse_pair.contains_point(&pt(6, &[1, 1])).unwrap());

        let diagonal_shift = TorsionCoset::new(pt(2, &[0, 1]), &[vec![1, 1]]).unwrap();
        assert!(diagonal_shift.contains_point(&pt(8, &[1, 5])).unwrap());
        assert!(diagonal_shift.contains_point(&pt(2, &[1, 0])).unwrap());
        assert!(!diagonal_shift.contains_point(&pt(8, &[1, 3])).unwrap());
    }

    #[test]
    fn full_torus_coset() {
        let c = TorsionCoset::new(pt(6, &[1, 5]), &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.translate(), &TorsionPoint::identity(2));
        assert!(c.contains_point(&pt(30, &[7, 11])).unwrap());
    }

    #[test]
    fn zero_locus_checks() {
        let xy = rational_poly(2, &[(1, &[1, 1]), (-1, &[0, 0])]);
        let inverse_pair = TorsionCoset::new(TorsionPoint::identity(2), &[vec![1, -1]]).unwrap();
        assert!(inverse_pair.in_zero_locus(std::slice::from_ref(&xy)).unwrap());

        let sum = rational_poly(2, &[(1, &[1, 0]), (1, &[0, 1])]);
        let diagonal_shift = TorsionCoset::new(pt(2, &[0, 1]), &[vec![1, 1]]).unwrap();
        assert!(diagonal_shift.in_zero_locus(std::slice::from_ref(&sum)).unwrap());
        assert!(!inverse_pair.in_zero_locus(std::slice::from_ref(&sum)).unwrap());
    }

    #[test]
    fn conjugates_cover_unit_orbit_of_translate() {
        // translate of order 3 along the second axis direction (1, 0)
        let c = TorsionCoset::new(pt(3, &[0, 1]), &[vec![1, 0]]).unwrap();
        let conj = c.galois_conjugates().unwrap();
        assert_eq!(conj.len(), 2);
        assert!(conj.contains(&c));
        assert!(conj.contains(&TorsionCoset::new(pt(3, &[0, 2]), &[vec![1, 0]]).unwrap()));

        // identity translate is fixed
        let inverse_pair = TorsionCoset::new(TorsionPoint::identity(2), &[vec![1, -1]]).unwrap();
        assert_eq!(inverse_pair.galois_conjugates().unwrap(), vec![inverse_pair.clone()]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            TorsionCoset::new(TorsionPoint::identity(2), &[]),
            Err(Error::ZeroMatrix)
        ));
        assert!(matches!(
            TorsionCoset::new(TorsionPoint::identity(2), &[vec![0, 0]]),
            Err(Error::ZeroMatrix)
        ));
        assert!(matches!(
            TorsionCoset::new(TorsionPoint::identity(2), &[vec![1]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
