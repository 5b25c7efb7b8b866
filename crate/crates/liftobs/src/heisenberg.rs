//! The discrete Heisenberg group in normal form `X^a Y^b Z^c`, with the
//! 3x3 unitriangular matrix realization as an independent oracle.
//!
//! The normal-form convention is pinned by the matrix realization: the
//! element `(a, b, c)` corresponds to the matrix
//! `[[1, a, ab+c], [0, 1, b], [0, 0, 1]]`, and multiplication satisfies
//! `(a,b,c) * (a',b',c') = (a+a', b+b', c+c'-a'b)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::intmat::IntMatrix;
use crate::words::{Word, WordError};

/// Generator indices for words over the Heisenberg group.
pub const GEN_X: usize = 0;
pub const GEN_Y: usize = 1;
pub const GEN_Z: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl HeisenbergElement {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> HeisenbergElement {
        HeisenbergElement { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn identity() -> HeisenbergElement {
        HeisenbergElement::new(0, 0, 0)
    }

    pub fn multiply(&self, other: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c - &other.a * &self.b,
        }
    }

    pub fn inverse(&self) -> HeisenbergElement {
        // (a,b,c)^-1 = (-a, -b, -c - ab)
        HeisenbergElement {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -(&self.c) - &self.a * &self.b,
        }
    }

    pub fn pow(&self, n: i64) -> HeisenbergElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = HeisenbergElement::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// The corresponding unitriangular matrix.
    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(3);
        m[(0, 1)] = self.a.clone();
        m[(1, 2)] = self.b.clone();
        m[(0, 2)] = &self.a * &self.b + &self.c;
        m
    }

    /// Read `(a, b, c)` back off a unitriangular matrix.
    pub fn from_matrix(m: &IntMatrix) -> Option<HeisenbergElement> {
        if m.rows != 3 || m.cols != 3 {
            return None;
        }
        let one = BigInt::one();
        let zero = BigInt::zero();
        if m[(0, 0)] != one || m[(1, 1)] != one || m[(2, 2)] != one {
            return None;
        }
        if m[(1, 0)] != zero || m[(2, 0)] != zero || m[(2, 1)] != zero {
            return None;
        }
        let a = m[(0, 1)].clone();
        let b = m[(1, 2)].clone();
        let c = &m[(0, 2)] - &a * &b;
        Some(HeisenbergElement { a, b, c })
    }
}

/// The generating matrices X, Y, Z with `Z = [X, Y]`.
pub fn heisenberg_matrices() -> (IntMatrix, IntMatrix, IntMatrix) {
    let x = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let y = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
    let z = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);
    (x, y, z)
}

/// Normal form of a word over generators {0: X, 1: Y, 2: Z}.
pub fn heisenberg_normal_form(word: &Word) -> Result<HeisenbergElement, WordError> {
    if let Some(g) = word.max_generator() {
        if g > GEN_Z {
            return Err(WordError::BadGenerator { index: g, count: 3 });
        }
    }
    let mut acc = HeisenbergElement::identity();
    for &(g, e) in word.letters() {
        let gen = match g {
            GEN_X => HeisenbergElement::new(1, 0, 0),
            GEN_Y => HeisenbergElement::new(0, 1, 0),
            GEN_Z => HeisenbergElement::new(0, 0, 1),
            _ => unreachable!(),
        };
        acc = acc.multiply(&gen.pow(e));
    }
    Ok(acc)
}

/// Matrix-product oracle: multiply out the letter matrices and map back.
pub fn heisenberg_matrix_oracle(word: &Word) -> Result<HeisenbergElement, WordError> {
    if let Some(g) = word.max_generator() {
        if g > GEN_Z {
            return Err(WordError::BadGenerator { index: g, count: 3 });
        }
    }
    let (x, y, z) = heisenberg_matrices();
    let mut acc = IntMatrix::identity(3);
    for &(g, e) in word.letters() {
        let base = match g {
            GEN_X => &x,
            GEN_Y => &y,
            GEN_Z => &z,
            _ => unreachable!(),
        };
        let m = if e < 0 { base.inverse_exact().expect("unitriangular") } else { base.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&m);
        }
    }
    Ok(HeisenbergElement::from_matrix(&acc).expect("product stays unitriangular"))
}
