//! Translation numbers of circle lifts: certified intervals, conjugacy
//! invariance, the displacement integral, and the non-homomorphism
//! witness.
//!
//! Run with `cargo run -p liftobs --example rotation_numbers`.

use liftobs::circle::{
    translation_integral, translation_number, CircleLift, CircleMeasure, PlBreakpoints,
};
use liftobs::scalar::Scalar;

fn main() {
    // A rational rotation: the certified interval has exact center p/q.
    let rotation = CircleLift::rotation(Scalar::ratio(2, 7));
    let interval = translation_number(&rotation, 35).unwrap();
    println!(
        "rotation(2/7): interval [{}, {}] after {} iterates, center {} ({})",
        interval.lo,
        interval.hi,
        interval.n_used,
        interval.center(),
        interval.mode
    );

    // A piecewise-linear lift fixing zero: translation number zero.
    let pl = CircleLift::PiecewiseLinear {
        breakpoints: PlBreakpoints::from_i64(&[(0, 1, 0, 1), (1, 2, 1, 4)]).unwrap(),
    };
    let interval = translation_number(&pl, 40).unwrap();
    println!("PL lift fixing 0: center {}", interval.center());

    // Conjugating a rotation does not change the translation number.
    let h = CircleLift::PiecewiseLinear {
        breakpoints: PlBreakpoints::from_i64(&[(0, 1, 0, 1), (1, 3, 3, 5)]).unwrap(),
    };
    let conjugated = CircleLift::compose(vec![
        h.clone(),
        CircleLift::rotation(Scalar::ratio(1, 3)),
        h.inverse(),
    ]);
    let conj_interval = translation_number(&conjugated, 600).unwrap();
    println!(
        "H o R_(1/3) o H^-1: interval [{:.6}, {:.6}] contains 1/3 = {}",
        conj_interval.lo.to_f64(),
        conj_interval.hi.to_f64(),
        conj_interval.contains(&Scalar::ratio(1, 3)),
    );

    // Against the H-pushforward of Lebesgue (an invariant measure for the
    // conjugated rotation) the displacement integral recovers 1/3 directly.
    let mu = CircleMeasure::Pushforward { conjugacy: h, quadrature_nodes: 4096 };
    let tau = translation_integral(&conjugated, &mu).unwrap();
    println!("displacement integral against the invariant measure: {:.9}", tau.to_f64());

    // The rotation number is not a homomorphism: composing a small
    // rotation with a map having a transverse fixed point keeps a fixed
    // point, so the translation number stays zero while eps does not.
    let eps = Scalar::ratio(1, 100);
    let perturbed = CircleLift::compose(vec![CircleLift::rotation(eps.clone()), pl]);
    let interval = translation_number(&perturbed, 500).unwrap();
    println!(
        "R_(1/100) o PL: interval [{:.6}, {:.6}] contains 0 = {}, yet eps = {}",
        interval.lo.to_f64(),
        interval.hi.to_f64(),
        interval.contains(&Scalar::zero()),
        eps,
    );
}
