//! Exact computation of torsion points and one-dimensional torsion cosets on
//! subvarieties of the multiplicative torus cut out by Laurent polynomials
//! with rational coefficients.
//!
//! Everything is integer or rational arithmetic: cyclotomic evaluation works
//! in the basis of a cyclotomic polynomial, lattice routines use exact
//! normal forms, and the completeness threshold is certified with rational
//! interval bounds. The solver scans Galois orbits of candidate points order
//! by order, confirms survivors of a modular prescreen exactly, and promotes
//! points to cosets via a balanced decomposition whenever every defining
//! polynomial vanishes along the decomposed direction.

pub mod arith;
pub mod bounds;
pub mod coset;
pub mod cyclotomic;
pub mod decomposition;
pub mod error;
pub mod lattice;
pub mod laurent;
pub mod orbits;
pub mod point;
pub mod solver;

pub use coset::TorsionCoset;
pub use cyclotomic::{cyclotomic_polynomial, root_sum_is_zero, CyclotomicElement};
pub use decomposition::{
    decompose, short_multiple, unit_adjust, verify_decomposition, ShortMultiple,
    TorsionDecomposition,
};
pub use error::{Error, Result};
pub use laurent::{rational_poly, LaurentPolynomial};
pub use orbits::{expand_orbit, orbit_count, orbit_representatives};
pub use point::TorsionPoint;
pub use solver::{
    brute_force_torsion, coset_certificate, solve, SolveOptions, TorsionReport, VarietySystem,
};

pub use bounds::{analytic_cutoff, completeness_holds, order_bound};
