//! Integer matrix normal forms: column Hermite form for canonical direction
//! bases, Smith form with transforms for saturation and modular solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row major. Sizes here are tiny (ambient dimension),
/// entries can grow during elimination, hence BigInt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Build from column vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = BigInt::from(v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.at(k, c);
                    out.data[r * other.cols + c] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * self.at(src, c);
            self.data[dst * self.cols + c] += add;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * self.at(r, src);
            self.data[r * self.cols + dst] += add;
        }
    }
}

/// Row Hermite normal form: unique U·A with U unimodular, row echelon shape,
/// positive pivots, entries above a pivot reduced into [0, pivot).
pub fn row_hnf(mat: &IntMat) -> IntMat {
    let mut a = mat.clone();
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.rows {
                if !a.at(r, col).is_zero()
                    && best.map_or(true, |b| a.at(r, col).abs() < a.at(b, col).abs())
                {
                    best = Some(r);
                }
            }
            let Some(best) = best else { break };
            a.swap_rows(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..a.rows {
                if !a.at(r, col).is_zero() {
                    let q = -a.at(r, col).div_floor(a.at(pivot_row, col));
                    a.add_row_multiple(r, pivot_row, &q);
                    if !a.at(r, col).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a.at(pivot_row, col).is_zero() {
            continue;
        }
        if a.at(pivot_row, col).is_negative() {
            a.negate_row(pivot_row);
        }
        for r in 0..pivot_row {
            let q = -a.at(r, col).div_floor(a.at(pivot_row, col));
            a.add_row_multiple(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    a
}

/// Column Hermite normal form with zero columns stripped: the canonical basis
/// of the column lattice of `mat`.
pub fn col_hnf_basis(mat: &IntMat) -> IntMat {
    let h = row_hnf(&mat.transpose()).transpose();
    let mut keep = h.cols;
    while keep > 0 && (0..h.rows).all(|r| h.at(r, keep - 1).is_zero()) {
        keep -= 1;
    }
    let mut out = IntMat::zero(h.rows, keep);
    for r in 0..h.rows {
        for c in 0..keep {
            out.set(r, c, h.at(r, c).clone());
        }
    }
    out
}

/// Smith normal form data: u * a * v is diagonal with each entry dividing the
/// next, diag entries nonnegative; u_inv undoes u.
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_form(mat: &IntMat) -> SmithForm {
    let mut a = mat.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut u = IntMat::identity(rows);
    let mut u_inv = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let swap_rows = |a: &mut IntMat, u: &mut IntMat, ui: &mut IntMat, i: usize, j: usize| {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    let add_rows = |a: &mut IntMat, u: &mut IntMat, ui: &mut IntMat, dst: usize, src: usize, q: &BigInt| {
        a.add_row_multiple(dst, src, q);
        u.add_row_multiple(dst, src, q);
        let neg = -q;
        ui.add_col_multiple(src, dst, &neg);
    };

    let n = rows.min(cols);
    for t in 0..n {
        // move a nonzero entry of minimal magnitude into the pivot slot
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if !a.at(r, c).is_zero()
                        && best.map_or(true, |(br, bc)| a.at(r, c).abs() < a.at(br, bc).abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            swap_rows(&mut a, &mut u, &mut u_inv, t, br);
            a.swap_cols(t, bc);
            v.swap_cols(t, bc);

            let mut clean = true;
            for r in t + 1..rows {
                if !a.at(r, t).is_zero() {
                    let q = -a.at(r, t).div_floor(a.at(t, t));
                    add_rows(&mut a, &mut u, &mut u_inv, r, t, &q);
                    if !a.at(r, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for c in t + 1..cols {
                if !a.at(t, c).is_zero() {
                    let q = -a.at(t, c).div_floor(a.at(t, t));
                    a.add_col_multiple(c, t, &q);
                    v.add_col_multiple(c, t, &q);
                    if !a.at(t, c).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let mut offender = None;
            'scan: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !(a.at(r, c) % a.at(t, t)).is_zero() {
                        offender = Some(r);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    add_rows(&mut a, &mut u, &mut u_inv, t, r, &one);
                }
                None => break,
            }
        }
        if a.at(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    let diag = (0..n).map(|t| a.at(t, t).clone()).collect();
    SmithForm { diag, u, u_inv, v }
}

/// Canonical basis of the saturation of the column lattice: all integer
/// vectors with a nonzero multiple inside the span.
pub fn saturate_columns(mat: &IntMat) -> Result<IntMat> {
    let snf = smith_form(mat);
    let rank = snf.rank();
    if rank == 0 {
        return Err(Error::ZeroMatrix);
    }
    let mut gens = IntMat::zero(mat.rows, rank);
    for c in 0..rank {
        for r in 0..mat.rows {
            gens.set(r, c, snf.u_inv.at(r, c).clone());
        }
    }
    Ok(col_hnf_basis(&gens))
}

/// Solve mat * x ≡ target (mod modulus) for an integer vector x, if possible.
pub fn solve_mod(mat: &IntMat, target: &[BigInt], modulus: &BigInt) -> Option<Vec<BigInt>> {
    assert_eq!(mat.rows, target.len());
    assert!(modulus.is_positive());
    let snf = smith_form(mat);
    let rhs = snf.u.mul_vec(target);
    let mut y = vec![BigInt::zero(); mat.cols];
    for (i, r) in rhs.iter().enumerate() {
        let d = if i < snf.diag.len() {
            snf.diag[i].clone()
        } else {
            BigInt::zero()
        };
        let r = r.mod_floor(modulus);
        if d.is_zero() {
            if !r.is_zero() {
                return None;
            }
            continue;
        }
        let g = d.gcd(modulus);
        if !(&r % &g).is_zero() {
            return None;
        }
        if i < mat.cols {
            let m = modulus / &g;
            let inv = modinv(&((&d / &g).mod_floor(&m)), &m)?;
            y[i] = ((&r / &g) * inv).mod_floor(&m);
        }
    }
    let x = snf.v.mul_vec(&y);
    Some(x.into_iter().map(|c| c.mod_floor(modulus)).collect())
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}
