//! Enumeration of torsion points up to the unit-group action. A rational
//! polynomial vanishes on a whole orbit at once, so the solver only ever
//! probes one representative per orbit: the lexicographically smallest.
//!
//! The enumerator builds vectors coordinate by coordinate. A vector is the
//! lex-least element of its orbit exactly when each coordinate is minimal in
//! its orbit under the stabilizer of the prefix before it, and that
//! stabilizer is the congruence group {u ≡ 1 mod N/g} for g = gcd(N, prefix).
//! This keeps the work near-linear in the number of representatives.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_integer::gcd;

use crate::arith::{factorize, totient};
use crate::point::TorsionPoint;

/// Number of unit-group orbits of primitive vectors in (Z/N)^n: the action is
/// free, so this is the primitive-vector count divided by φ(N).
pub fn orbit_count(order: u64, nvars: usize) -> BigUint {
    let mut primitive = BigUint::from(1u32);
    for &(p, a) in factorize(order).pairs() {
        let pn = BigUint::from(p).pow(nvars as u32);
        let block = pn.pow(a - 1) * (pn - BigUint::from(1u32));
        primitive *= block;
    }
    let phi = BigUint::from(totient(order));
    let (q, r) = num_integer::Integer::div_rem(&primitive, &phi);
    debug_assert!(r == BigUint::from(0u32), "free action must divide evenly");
    q
}

struct Enumerator {
    modulus: u64,
    nvars: usize,
    min_lists: HashMap<u64, Rc<Vec<u64>>>,
    prefix: Vec<u64>,
    out: Vec<Vec<u64>>,
}

impl Enumerator {
    /// Values minimal in their orbit under {u ≡ 1 mod N/g, gcd(u,N)=1}.
    fn min_list(&mut self, g: u64) -> Rc<Vec<u64>> {
        if let Some(list) = self.min_lists.get(&g) {
            return Rc::clone(list);
        }
        let n = self.modulus;
        let step = n / g;
        let mut stab = Vec::new();
        let mut k = 0;
        while k < g {
            let u = (1 + k * step) % n;
            if gcd(u, n) == 1 {
                stab.push(u);
            }
            k += 1;
        }
        let list = if stab.len() <= 1 {
            (0..n).collect()
        } else {
            let mut seen = vec![false; n as usize];
            let mut mins = Vec::new();
            for v in 0..n {
                if seen[v as usize] {
                    continue;
                }
                mins.push(v);
                for &u in &stab {
                    seen[((u as u128 * v as u128) % n as u128) as usize] = true;
                }
            }
            mins
        };
        let list = Rc::new(list);
        self.min_lists.insert(g, Rc::clone(&list));
        list
    }

    fn descend(&mut self, depth: usize, g: u64) {
        let list = self.min_list(g);
        if depth + 1 == self.nvars {
            for &v in list.iter() {
                if gcd(g, v) == 1 {
                    self.prefix[depth] = v;
                    self.out.push(self.prefix.clone());
                }
            }
        } else {
            for &v in list.iter() {
                self.prefix[depth] = v;
                self.descend(depth + 1, gcd(g, v));
            }
        }
    }
}

/// Lexicographically smallest element of each unit-group orbit of primitive
/// vectors in (Z/N)^n, in increasing lex order.
pub fn orbit_representatives(order: u64, nvars: usize) -> Vec<Vec<u64>> {
    assert!(order >= 1 && nvars >= 1);
    if order == 1 {
        return vec![vec![0; nvars]];
    }
    let mut e = Enumerator {
        modulus: order,
        nvars,
        min_lists: HashMap::new(),
        prefix: vec![0; nvars],
        out: Vec::new(),
    };
    e.descend(0, order);
    e.out
}

/// All members of the orbit through `rep`, sorted.
pub fn expand_orbit(order: u64, rep: &[u64]) -> Vec<TorsionPoint> {
    let mut members: Vec<Vec<u64>> = (1..=order)
        .filter(|&u| gcd(u, order) == 1)
        .map(|u| {
            rep.iter()
                .map(|&a| ((u as u128 * a as u128) % order as u128) as u64)
                .collect()
        })
        .collect();
    members.sort();
    members.dedup();
    members
        .into_iter()
        .map(|exps| TorsionPoint::new(order, exps).expect("orbit member is primitive"))
        .collect()
}
