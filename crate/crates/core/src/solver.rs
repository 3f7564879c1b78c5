//! Order-by-order torsion search. Each Galois orbit of candidate points is
//! screened modulo two primes that split the cyclotomic level, survivors are
//! confirmed exactly, and every confirmed point is offered a coset
//! certificate built from its balanced decomposition. Certified cosets are
//! closed under the Galois action so the emitted list covers entire orbits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{factorize, is_prime, mod_pow};
use crate::bounds::order_bound;
use crate::coset::TorsionCoset;
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::orbits::{expand_orbit, orbit_count, orbit_representatives};
use crate::point::TorsionPoint;

/// A subvariety of the n-torus cut out by Laurent polynomials with rational
/// coefficients.
#[derive(Debug, Clone)]
pub struct VarietySystem {
    nvars: usize,
    polynomials: Vec<LaurentPolynomial<BigRational>>,
    degree_max: u64,
}

impl VarietySystem {
    pub fn new(nvars: usize, polynomials: Vec<LaurentPolynomial<BigRational>>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::OutOfRange(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if polynomials.is_empty() {
            return Err(Error::EmptySystem);
        }
        let mut degree_max = 0;
        for poly in &polynomials {
            if poly.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: poly.nvars(),
                });
            }
            if poly.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            degree_max = degree_max.max(poly.degree());
        }
        Ok(VarietySystem {
            nvars,
            polynomials,
            degree_max,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polynomials(&self) -> &[LaurentPolynomial<BigRational>] {
        &self.polynomials
    }

    /// Largest total degree over the defining polynomials.
    pub fn degree_max(&self) -> u64 {
        self.degree_max
    }

    /// Exact membership test in the cyclotomic field of the point's order.
    pub fn point_on_variety(&self, point: &TorsionPoint) -> Result<bool> {
        if point.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.dim(),
            });
        }
        for poly in &self.polynomials {
            if !poly.evaluate_at_torsion(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Every torsion point of order at most `cap` on the variety, each tested
/// exactly, in sorted order. Reference implementation for cross-checks.
pub fn brute_force_torsion(system: &VarietySystem, cap: u64) -> Result<Vec<TorsionPoint>> {
    let mut found = Vec::new();
    for order in 1..=cap {
        for rep in orbit_representatives(order, system.nvars) {
            for point in expand_orbit(order, &rep) {
                if system.point_on_variety(&point)? {
                    found.push(point);
                }
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Try to promote a torsion point of the variety to a one-dimensional
/// torsion coset: decompose the point into a low-order translate and a short
/// subgroup direction, and check that every defining polynomial vanishes
/// identically along that line. Returns `None` when some specialization is a
/// nonzero polynomial; errors when the point is not on the variety at all.
pub fn coset_certificate(
    system: &VarietySystem,
    point: &TorsionPoint,
) -> Result<Option<TorsionCoset>> {
    if !system.point_on_variety(point)? {
        return Err(Error::NotOnVariety);
    }
    if point.order() == 1 {
        return Ok(None);
    }
    certificate_core(system, point)
}

fn certificate_core(
    system: &VarietySystem,
    point: &TorsionPoint,
) -> Result<Option<TorsionCoset>> {
    let dec = decompose(&point.signed_exponents(), point.order())?;
    for poly in &system.polynomials {
        if !poly.specialize(&dec)?.is_zero() {
            return Ok(None);
        }
    }
    let raw_translate: Vec<i64> = dec.translate.iter().map(|&t| t as i64).collect();
    let translate = TorsionPoint::canonicalize(dec.translate_order, &raw_translate)?;
    let coset = TorsionCoset::new(translate, &[dec.directions.clone()])?;
    #[cfg(debug_assertions)]
    {
        debug_assert!(coset.in_zero_locus(&system.polynomials)?);
        debug_assert!(coset.contains_point(point)?);
    }
    Ok(Some(coset))
}

/// Modular prescreen for one order: two primes splitting completely at that
/// cyclotomic level, with the scaled integer coefficients and a full power
/// table of an exact-order root reduced once up front. A zero report can be
/// a false positive, never a false negative.
struct OrderScreen {
    order: u64,
    primes: Vec<ScreenPrime>,
}

struct ScreenPrime {
    p: u64,
    powers: Vec<u64>,
    polys: Vec<Vec<(u64, Vec<i64>)>>,
}

impl OrderScreen {
    fn build(system: &VarietySystem, order: u64) -> Result<OrderScreen> {
        let mut scaled: Vec<Vec<(Vec<i64>, BigInt)>> = Vec::new();
        let mut denominators = BigInt::one();
        for poly in &system.polynomials {
            let mut lcm = BigInt::one();
            for (_, coeff) in poly.terms() {
                lcm = lcm.lcm(coeff.denom());
            }
            let terms = poly
                .terms()
                .map(|(exps, coeff)| {
                    (exps.to_vec(), coeff.numer() * (&lcm / coeff.denom()))
                })
                .collect();
            denominators = denominators.lcm(&lcm);
            scaled.push(terms);
        }
        let mut primes = Vec::new();
        let mut k = 1u64;
        while primes.len() < 2 {
            let p = k
                .checked_mul(order)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| {
                    Error::OutOfRange("screening prime search overflowed".into())
                })?;
            k += 1;
            if p < 3 || !is_prime(p) {
                continue;
            }
            if (&denominators % BigInt::from(p)).is_zero() {
                continue;
            }
            let Some(root) = element_of_order(p, order) else {
                continue;
            };
            let mut powers = Vec::with_capacity(order as usize);
            let mut w = 1u64;
            for _ in 0..order {
                powers.push(w);
                w = ((w as u128 * root as u128) % p as u128) as u64;
            }
            let modulus = BigInt::from(p);
            let polys = scaled
                .iter()
                .map(|terms| {
                    terms
                        .iter()
                        .map(|(exps, coeff)| {
                            let res = coeff.mod_floor(&modulus).to_u64().unwrap();
                            (res, exps.clone())
                        })
                        .collect()
                })
                .collect();
            primes.push(ScreenPrime { p, powers, polys });
        }
        Ok(OrderScreen { order, primes })
    }

    fn passes(&self, exponents: &[u64]) -> bool {
        self.primes.iter().all(|sp| {
            sp.polys.iter().all(|terms| {
                let mut acc = 0u128;
                for (res, exps) in terms {
                    let j = dot_mod(exps, exponents, self.order);
                    acc = (acc + *res as u128 * sp.powers[j as usize] as u128) % sp.p as u128;
                }
                acc == 0
            })
        })
    }
}

fn dot_mod(v: &[i64], a: &[u64], m: u64) -> u64 {
    let mut acc: i128 = 0;
    for (x, y) in v.iter().zip(a) {
        acc += *x as i128 * *y as i128;
    }
    acc.rem_euclid(m as i128) as u64
}

/// An element of exact multiplicative order `order` in the prime field,
/// assuming `p = 1 (mod order)`.
fn element_of_order(p: u64, order: u64) -> Option<u64> {
    let step = (p - 1) / order;
    let prime_divs: Vec<u64> = factorize(order).primes().collect();
    for g in 2..p {
        let w = mod_pow(g, step, p);
        if w == 1 {
            continue;
        }
        if prime_divs.iter().all(|&q| mod_pow(w, order / q, p) != 1) {
            return Some(w);
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Highest order to scan; clamped to the certified completeness bound.
    pub cap: Option<u64>,
    /// Scan certificates (cosets only) beyond the cap up to this order.
    pub probe: Option<u64>,
    /// Maximum number of Galois orbits to examine across all orders.
    pub budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cap: None,
            probe: None,
            budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TorsionReport {
    /// Torsion points on the variety not covered by any emitted coset.
    pub isolated_points: Vec<TorsionPoint>,
    /// Certified one-dimensional torsion cosets, closed under conjugation.
    pub cosets: Vec<TorsionCoset>,
    /// Highest order actually scanned.
    pub scanned_cap: u64,
    /// Orders at or above this value cannot carry uncertified points.
    pub certified_bound: u64,
    /// Whether the scan reached the certified bound.
    pub complete: bool,
    pub budget_exceeded: bool,
    pub diagnostic: Option<String>,
}

/// Scan torsion orders up to the configured cap, certify cosets, and report
/// everything found. The orbit budget truncates the scan front; the report
/// says how far it got.
pub fn solve(system: &VarietySystem, options: &SolveOptions) -> Result<TorsionReport> {
    let bound = order_bound(system.nvars, system.degree_max)?;
    let cap = options.cap.map_or(bound, |c| c.min(bound));

    let budget = BigUint::from(options.budget);
    let mut used = BigUint::zero();
    let mut scanned_cap = 0u64;
    for order in 1..=cap {
        let next = &used + orbit_count(order, system.nvars);
        if next > budget {
            break;
        }
        used = next;
        scanned_cap = order;
    }
    let budget_exceeded = scanned_cap < cap;

    let survey: Vec<(Vec<TorsionPoint>, Vec<TorsionCoset>)> = (1..=scanned_cap)
        .into_par_iter()
        .map(|order| scan_order(system, order, true))
        .collect::<Result<Vec<_>>>()?;

    let probe_hi = options.probe.unwrap_or(0);
    let probed: Vec<(Vec<TorsionPoint>, Vec<TorsionCoset>)> = if probe_hi > scanned_cap {
        ((scanned_cap + 1)..=probe_hi)
            .into_par_iter()
            .map(|order| scan_order(system, order, false))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let mut isolated = Vec::new();
    let mut cosets = Vec::new();
    for (points, found) in survey.into_iter().chain(probed) {
        isolated.extend(points);
        cosets.extend(found);
    }
    cosets.sort();
    cosets.dedup();
    isolated.sort();
    isolated.dedup();

    let mut kept = Vec::new();
    'points: for point in isolated {
        for coset in &cosets {
            if coset.contains_point(&point)? {
                continue 'points;
            }
        }
        kept.push(point);
    }

    let complete = scanned_cap == bound;
    let diagnostic = budget_exceeded.then(|| {
        format!(
            "orbit budget {} exhausted at order {scanned_cap} of {cap}",
            options.budget
        )
    });
    Ok(TorsionReport {
        isolated_points: kept,
        cosets,
        scanned_cap,
        certified_bound: bound,
        complete,
        budget_exceeded,
        diagnostic,
    })
}

/// Process one order: screen orbit representatives, confirm survivors
/// exactly, certify cosets and close them under conjugation. Uncertified
/// orbits are reported pointwise when `keep_isolated` is set; probe orders
/// beyond the cap pass `false` and contribute cosets only.
fn scan_order(
    system: &VarietySystem,
    order: u64,
    keep_isolated: bool,
) -> Result<(Vec<TorsionPoint>, Vec<TorsionCoset>)> {
    let mut points = Vec::new();
    let mut cosets = Vec::new();
    if order == 1 {
        let id = TorsionPoint::identity(system.nvars);
        if keep_isolated && system.point_on_variety(&id)? {
            points.push(id);
        }
        return Ok((points, cosets));
    }
    let screen = OrderScreen::build(system, order)?;
    for rep in orbit_representatives(order, system.nvars) {
        if !screen.passes(&rep) {
            continue;
        }
        let point = TorsionPoint::new(order, rep.clone())?;
        if !system.point_on_variety(&point)? {
            continue;
        }
        match certificate_core(system, &point)? {
            Some(coset) => cosets.extend(coset.galois_conjugates()?),
            None => {
                if keep_isolated {
                    points.extend(expand_orbit(order, &rep));
                }
            }
        }
    }
    Ok((points, cosets))
}
