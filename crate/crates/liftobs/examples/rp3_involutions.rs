//! The projective-space example: two commuting involutions downstairs
//! whose lifts to the sphere anticommute.
//!
//! A and B are signed permutation matrices with A^2 = B^2 = I; they
//! commute with the antipode C = -I and can be joined to the identity
//! through matrices commuting with C, so the induced maps downstairs are
//! isotopic to the identity. Upstairs, [A, B] = C: the lifts miss
//! commuting by exactly the antipode.
//!
//! Run with `cargo run -p liftobs --example rp3_involutions`.

use liftobs::catalog::rp3_matrices;
use liftobs::intmat::{matrix_commutator, IntMatrix};

fn main() {
    let (a, b, c) = rp3_matrices();
    println!("A =\n{a:?}");
    println!("B =\n{b:?}");

    println!("A^2 = I: {}", a.mul(&a).is_identity());
    println!("B^2 = I: {}", b.mul(&b).is_identity());
    println!("C = -I: {}", c == IntMatrix::identity(4).neg());
    println!("[A, B] = C: {}", matrix_commutator(&a, &b).unwrap() == c);
    println!("A C = C A: {}", a.mul(&c) == c.mul(&a));
    println!("B C = C B: {}", b.mul(&c) == c.mul(&b));
}
