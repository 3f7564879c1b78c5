//! Torsion points of the multiplicative torus, stored by exact order and
//! exponent vector.

use crate::arith::{gcd_with, reduce_mod};
use crate::error::{Error, Result};

/// A torsion point `(z^a_1, ..., z^a_n)` where `z` is a primitive root of
/// unity of order `order` and `gcd(a_1, ..., a_n, order) = 1`, so the order is
/// exact. Exponents are reduced to `[0, order)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    order: u64,
    exponents: Vec<u64>,
}

impl TorsionPoint {
    /// Validate an already-reduced representation.
    pub fn new(order: u64, exponents: Vec<u64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::ModulusTooSmall { min: 1, got: order });
        }
        if exponents.iter().any(|&a| a >= order) {
            return Err(Error::OutOfRange(format!(
                "exponent not reduced modulo {order}"
            )));
        }
        let signed: Vec<i64> = exponents.iter().map(|&a| a as i64).collect();
        if gcd_with(&signed, order) != 1 {
            return Err(Error::NotPrimitive { modulus: order });
        }
        Ok(TorsionPoint { order, exponents })
    }

    /// Reduce raw exponents modulo `modulus` and divide out the common factor
    /// so the stored order is exact.
    pub fn canonicalize(modulus: u64, raw: &[i64]) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::ModulusTooSmall {
                min: 1,
                got: modulus,
            });
        }
        let reduced: Vec<u64> = raw.iter().map(|&v| reduce_mod(v, modulus)).collect();
        let signed: Vec<i64> = reduced.iter().map(|&v| v as i64).collect();
        let g = gcd_with(&signed, modulus);
        let order = modulus / g;
        let exponents = reduced.iter().map(|&v| (v / g) % order.max(1)).collect();
        TorsionPoint::new(order, exponents)
    }

    /// The identity point in `n` coordinates.
    pub fn identity(n: usize) -> Self {
        TorsionPoint {
            order: 1,
            exponents: vec![0; n],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// Exponents as signed integers, convenient for modular arithmetic.
    pub fn signed_exponents(&self) -> Vec<i64> {
        self.exponents.iter().map(|&a| a as i64).collect()
    }
}
