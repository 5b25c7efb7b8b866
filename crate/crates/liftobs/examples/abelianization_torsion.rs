//! Abelianization and torsion via Smith normal form: the lifting
//! hypothesis test for finitely presented groups.
//!
//! Run with `cargo run -p liftobs --example abelianization_torsion`.

use liftobs::intmat::{generator_change_matrix, smith_normal_form, IntMatrix};
use liftobs::words::{abelianization, parse_presentation};

fn main() {
    for text in [
        "a,b; [a,b]",           // Z^2
        "a,b; aba^-1b^-3",      // BS(1,3): b is 2-torsion downstairs
        "a; a^2",               // Z/2
        "a1,b1,a2,b2; [a1,b1][a2,b2]", // genus-2 surface group
        "a,b,c; a^2b^4, b^2c^6",
    ] {
        let p = parse_presentation(text).unwrap();
        let ab = abelianization(&p);
        println!(
            "{text:>32}  ->  rank {} torsion {:?}  (torsion-free: {})",
            ab.free_rank,
            ab.torsion_coefficients.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            ab.is_torsion_free()
        );
    }

    // The Smith normal form behind the scenes: U M V = D with unimodular
    // transforms and a divisibility chain on the diagonal.
    let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let snf = smith_normal_form(&m);
    println!(
        "\nSNF of [[2,4],[6,8]]: diagonal {:?}, U M V = D: {}",
        snf.d.diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        snf.u.mul(&m).mul(&snf.v) == snf.d
    );

    // The coprime generator change of basis for Z^2: [[m, n], [-b, a]]
    // with am + bn = 1 has determinant one.
    for (m, n) in [(1, 0), (2, 3), (3, 5), (13, 21)] {
        let mat = generator_change_matrix(m, n).unwrap();
        println!("generator change ({m}, {n}): det = {}", mat.determinant());
    }
}
