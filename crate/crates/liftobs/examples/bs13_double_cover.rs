//! The Baumslag-Solitar BS(1,3) circle action that cannot lift.
//!
//! `f` covers `x -> 3x` and `g` covers `x -> x + 1` on the double cover
//! of `R u {inf}`; `g` is chosen to interchange the two preimages of
//! `inf`, giving it rotation number 1/2. The group relation holds for the
//! circle maps but every choice of lifts to the line misses it by a deck
//! translation, and the abelianization test knows why: `b` is torsion in
//! `G/[G,G]`.
//!
//! Run with `cargo run -p liftobs --example bs13_double_cover`.

use liftobs::circle::{build_bs13_action, translation_number, CircleLift};
use liftobs::lifting::AbelianBasis;
use liftobs::scalar::Scalar;
use liftobs::words::{abelianization, GroupPresentation};

fn main() {
    let (f, g) = build_bs13_action();

    let interval = translation_number(&g, 1000).unwrap();
    println!(
        "rotation number of g: interval center {:.6} (width {:.2e})",
        interval.center().to_f64(),
        interval.width().to_f64()
    );

    // f fixes both preimages of inf (chart positions 0 and 1/2).
    println!(
        "f fixes the two lifts of inf: f(0) = {}, f(1/2) = {}",
        f.eval(&Scalar::zero()).unwrap(),
        f.eval(&Scalar::ratio(1, 2)).unwrap()
    );

    // The relation a b a^-1 = b^3 holds on the circle; as maps of the
    // line the two sides differ by a constant integer translation.
    let lhs = CircleLift::compose(vec![f.clone(), g.clone(), f.inverse()]);
    let rhs = CircleLift::compose(vec![g.clone(), g.clone(), g.clone()]);
    let x = Scalar::ratio(3, 10);
    let offset = (lhs.eval(&x).unwrap() - rhs.eval(&x).unwrap()).to_f64();
    println!("lifted relation offset f g f^-1 = g^3 + ({offset:.0}) on the line");

    // The abelianization has torsion [2], so the lifting machinery
    // refuses the presentation outright.
    let presentation = GroupPresentation::bs13();
    let ab = abelianization(&presentation);
    println!(
        "abelianization of BS(1,3): free rank {}, torsion {:?}",
        ab.free_rank,
        ab.torsion_coefficients.iter().map(|t| t.to_string()).collect::<Vec<_>>()
    );
    match AbelianBasis::compute(&presentation) {
        Err(e) => println!("lift construction refused: {e}"),
        Ok(_) => unreachable!("torsion must refuse"),
    }
}
