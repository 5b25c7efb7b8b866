//! Heisenberg normal forms against the 3x3 matrix oracle.
//!
//! Run with `cargo run -p liftobs --example heisenberg_words`.

use liftobs::heisenberg::{
    heisenberg_matrices, heisenberg_matrix_oracle, heisenberg_normal_form, HeisenbergElement,
};
use liftobs::intmat::matrix_commutator;
use liftobs::words::{parse_word, Word};

fn main() {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();

    for text in ["xyx^-1y^-1", "yx", "x^3y^-2z", "[x,y]z^-1", "y^2x^2y^-2x^-2"] {
        let word = parse_word(text, &names).unwrap();
        let nf = heisenberg_normal_form(&word).unwrap();
        let oracle = heisenberg_matrix_oracle(&word).unwrap();
        println!(
            "{text:>14}  ->  X^{} Y^{} Z^{}   (matrix oracle agrees: {})",
            nf.a,
            nf.b,
            nf.c,
            nf == oracle
        );
    }

    // The defining relation Z = [X, Y] at the matrix level.
    let (x, y, z) = heisenberg_matrices();
    println!("[X, Y] == Z: {}", matrix_commutator(&x, &y).unwrap() == z);

    // The twisted multiplication and the inverse law.
    let p = HeisenbergElement::new(2, -1, 3);
    let q = HeisenbergElement::new(-1, 4, 0);
    let pq = p.multiply(&q);
    println!("(2,-1,3) * (-1,4,0) = ({}, {}, {})", pq.a, pq.b, pq.c);
    let inv = p.inverse();
    let id = p.multiply(&inv);
    println!("(2,-1,3) * (2,-1,3)^-1 = ({}, {}, {})", id.a, id.b, id.c);

    // Commutators of powers land in the center: [X^a, Y^b] = Z^(ab).
    let w = Word::commutator(&Word::gen(0, 3), &Word::gen(1, -2));
    let nf = heisenberg_normal_form(&w).unwrap();
    println!("[x^3, y^-2] = Z^{}", nf.c);
}
