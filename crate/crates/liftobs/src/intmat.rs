//! Exact integer matrices: Smith normal form with unimodular transforms,
//! commutators, determinants, and the coprime generator-change matrix.
//!
//! Entries are arbitrary-precision integers. The Smith reduction selects
//! minimal-absolute-value pivots, which keeps entry growth tame at the
//! matrix sizes this crate handles.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix is singular or has no integer inverse")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inputs are not coprime: gcd({0}, {1}) = {2}")]
    NotCoprime(i64, i64, i64),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = -std::mem::take(v);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BigInt::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Exact inverse, defined only when it is again an integer matrix
    /// (determinant +-1... or more generally when the adjugate divides).
    pub fn inverse_exact(&self) -> Result<IntMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension("inverse of non-square matrix".into()));
        }
        let det = self.determinant();
        if det.is_zero() {
            return Err(MatrixError::Singular);
        }
        let n = self.rows;
        // Gauss-Jordan over rationals, tracked as integer numerators over a
        // common denominator chain would be heavy; for the small sizes here,
        // the adjugate via cofactors is simpler.
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j).determinant();
                let sign = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                adj[(j, i)] = sign * minor;
            }
        }
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (q, r) = adj[(i, j)].div_rem(&det);
                if !r.is_zero() {
                    return Err(MatrixError::Singular);
                }
                out[(i, j)] = q;
            }
        }
        Ok(out)
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut out = IntMatrix::zeros(n - 1, n - 1);
        let mut ii = 0;
        for i in 0..n {
            if i == row {
                continue;
            }
            let mut jj = 0;
            for j in 0..n {
                if j == col {
                    continue;
                }
                out[(ii, jj)] = self[(i, j)].clone();
                jj += 1;
            }
            ii += 1;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self[(a, j)].clone(), self[(b, j)].clone());
            self[(a, j)] = y;
            self[(b, j)] = x;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (x, y) = (self[(i, a)].clone(), self[(i, b)].clone());
            self[(i, a)] = y;
            self[(i, b)] = x;
        }
    }

    /// row[to] += q * row[from]
    fn add_row(&mut self, to: usize, from: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(to, j)] + q * &self[(from, j)];
            self[(to, j)] = v;
        }
    }

    /// col[to] += q * col[from]
    fn add_col(&mut self, to: usize, from: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, to)] + q * &self[(i, from)];
            self[(i, to)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular, `d` diagonal
/// with non-negative entries satisfying `d1 | d2 | ...`. Inverse transforms
/// are tracked alongside so callers never need rational inversion.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Mirrored elementary operations. Row ops on d map to row ops on u and
    // inverse column ops on u_inv; column ops on d map to column ops on v
    // and inverse row ops on v_inv.
    macro_rules! row_add {
        ($to:expr, $from:expr, $q:expr) => {{
            let q = $q;
            d.add_row($to, $from, &q);
            u.add_row($to, $from, &q);
            u_inv.add_col($from, $to, &(-q));
        }};
    }
    macro_rules! col_add {
        ($to:expr, $from:expr, $q:expr) => {{
            let q = $q;
            d.add_col($to, $from, &q);
            v.add_col($to, $from, &q);
            v_inv.add_row($from, $to, &(-q));
        }};
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // Minimal-absolute-value pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d[(i, j)].abs() < d[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
        }
        if pj != t {
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }

        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    row_add!(i, t, q);
                    if !d[(i, t)].is_zero() {
                        // Remainder became the smaller pivot.
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        u_inv.swap_cols(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    col_add!(j, t, q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        v_inv.swap_rows(t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                // Pivot must divide the whole trailing block for the
                // divisibility chain; fold an offending row in and redo.
                'search: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                            row_add!(t, i, BigInt::one());
                            clean = false;
                            break 'search;
                        }
                    }
                }
            }
        }
        t += 1;
    }

    for i in 0..rows.min(cols) {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
            u_inv.negate_col(i);
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), d);
    debug_assert!(u.mul(&u_inv).is_identity());
    debug_assert!(v.mul(&v_inv).is_identity());
    SmithNormalForm { d, u, v, u_inv, v_inv }
}

/// `p * q * p^-1 * q^-1`, exactly. Inputs must be square, equal-sized,
/// and integrally invertible.
pub fn matrix_commutator(p: &IntMatrix, q: &IntMatrix) -> Result<IntMatrix, MatrixError> {
    if p.rows != p.cols || q.rows != q.cols || p.rows != q.rows {
        return Err(MatrixError::Dimension(format!(
            "commutator needs equal square matrices, got {}x{} and {}x{}",
            p.rows, p.cols, q.rows, q.cols
        )));
    }
    let p_inv = p.inverse_exact()?;
    let q_inv = q.inverse_exact()?;
    Ok(p.mul(q).mul(&p_inv).mul(&q_inv))
}

pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let g = a.abs();
        return (g, if a < 0 { -1 } else { 1 }, 0);
    }
    let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
    (g, y, x - (a.div_euclid(b)) * y)
}

/// For coprime `(m, n)`, the matrix `[[m, n], [-b, a]]` with `am + bn = 1`,
/// determinant exactly one. The representative is normalized: when `n != 0`,
/// `a` is the least non-negative inverse of `m` modulo `|n|`.
pub fn generator_change_matrix(m: i64, n: i64) -> Result<IntMatrix, MatrixError> {
    if m == 0 && n == 0 {
        return Err(MatrixError::NotCoprime(0, 0, 0));
    }
    let (g, _, _) = extended_gcd(m, n);
    if g != 1 {
        return Err(MatrixError::NotCoprime(m, n, g));
    }
    let (a, b) = if n == 0 {
        (m.signum(), 0)
    } else {
        let (_, x, _) = extended_gcd(m, n);
        // x with x*m = 1 mod n; normalize to the least non-negative residue.
        let modulus = n.abs();
        let a = x.rem_euclid(modulus);
        let b = (1 - a * m) / n;
        (a, b)
    };
    debug_assert_eq!(a * m + b * n, 1);
    Ok(IntMatrix::from_rows(&[vec![m, n], vec![-b, a]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn snf_example_matrix() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.d.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
    }

    #[test]
    fn snf_reorders_divisibility() {
        let m = IntMatrix::from_rows(&[vec![3, 0], vec![0, 1]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d.diagonal(), vec![BigInt::one(), BigInt::from(3)]);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zeros(3, 2);
        let snf = smith_normal_form(&m);
        assert!(snf.d.is_zero());
        assert!(snf.u.is_identity());
        assert!(snf.v.is_identity());
    }

    #[test]
    fn commutator_of_commuting_diagonals_is_identity() {
        let p = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let q = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 5]]);
        // Diagonal matrices with det != +-1 still invert only rationally.
        assert_eq!(matrix_commutator(&p, &q), Err(MatrixError::Singular));
        let p = IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]]);
        let q = IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]);
        assert!(matrix_commutator(&p, &q).unwrap().is_identity());
    }

    #[test]
    fn generator_change_pinned_values() {
        let m = generator_change_matrix(1, 0).unwrap();
        assert!(m.is_identity());
        let m = generator_change_matrix(2, 3).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![2, 3], vec![1, 2]]));
        let m = generator_change_matrix(3, 5).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![3, 5], vec![1, 2]]));
        assert_eq!(generator_change_matrix(2, 4), Err(MatrixError::NotCoprime(2, 4, 2)));
    }

    proptest! {
        #[test]
        fn snf_soundness_random(entries in proptest::collection::vec(-10i64..=10, 16)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            let snf = smith_normal_form(&m);
            prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
            prop_assert_eq!(snf.u.determinant().abs(), BigInt::one());
            prop_assert_eq!(snf.v.determinant().abs(), BigInt::one());
            let diag = snf.d.diagonal();
            for w in diag.windows(2) {
                if !w[0].is_zero() {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                } else {
                    prop_assert!(w[1].is_zero());
                }
            }
            for x in &diag {
                prop_assert!(!x.is_negative());
            }
        }

        #[test]
        fn generator_change_determinant_one(m in -1000i64..=1000, n in -1000i64..=1000) {
            prop_assume!(m != 0 || n != 0);
            let (g, _, _) = extended_gcd(m, n);
            prop_assume!(g == 1);
            let mat = generator_change_matrix(m, n).unwrap();
            prop_assert_eq!(mat.determinant(), BigInt::one());
        }
    }
}
