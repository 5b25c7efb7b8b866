//! Mean homological translation vectors on the flat torus: orbit loops,
//! point estimates, quadrature means, and the homotopy-class shift.
//!
//! Run with `cargo run -p liftobs --example mean_translation_vectors`.

use liftobs::homology::{
    mean_translation_vector, orbit_loop_class, point_translation_vector, ModelSurface, Quadrature,
    TrackedMap,
};
use liftobs::maps::{PlaneMap, Wave};
use liftobs::scalar::{Point2, Scalar};

fn main() {
    let torus = ModelSurface::torus(3, 3, Scalar::one()).unwrap();
    println!(
        "model: 3x3 torus grid, betti {} (torsion {:?})",
        torus.h1.betti, torus.h1.torsion
    );

    // A translation: the n-step loop class is the accumulated integer
    // displacement.
    let f = TrackedMap::new(
        &torus,
        PlaneMap::translate(Scalar::ratio(2, 7), Scalar::ratio(3, 11)),
        30,
    )
    .unwrap();
    let x = Point2::new(Scalar::ratio(1, 10), Scalar::ratio(1, 10));
    for n in [1u32, 7, 25] {
        let class = orbit_loop_class(&torus, &f, &x, n).unwrap();
        println!("[h_{n}(x)] = ({}, {})", class[0], class[1]);
    }
    let estimate = point_translation_vector(&torus, &f, &x, 1000).unwrap();
    println!(
        "point estimate at n = 1000: ({:.6}, {:.6}) vs (2/7, 3/11) = ({:.6}, {:.6})",
        estimate[0].to_f64(),
        estimate[1].to_f64(),
        2.0 / 7.0,
        3.0 / 11.0
    );

    // A Lebesgue-preserving perturbed map: the wave integrates away and
    // the mean vector is the translation part, exactly on the grid.
    let perturbed = PlaneMap::compose(vec![
        PlaneMap::translate(Scalar::ratio(13, 50), Scalar::ratio(9, 50)),
        PlaneMap::translate(Scalar::ratio(-3, 100), Scalar::zero()),
        PlaneMap::HorizontalWave { wave: Wave::new(Scalar::ratio(3, 100), 1, Scalar::zero()).unwrap() },
    ]);
    let g = TrackedMap::new(&torus, perturbed, 30).unwrap();
    let mean = mean_translation_vector(&torus, &g, &Quadrature::GridMidpoint { cells: 100 }).unwrap();
    println!(
        "mean vector of the perturbed map: ({}, {}) over {} nodes ({})",
        mean.vector[0], mean.vector[1], mean.nodes, mean.mode
    );

    // Changing the homotopy class composes the lift with a Deck
    // translation and shifts the mean by exactly that integer vector.
    let shifted_lift = PlaneMap::compose(vec![
        PlaneMap::translate(Scalar::int(2), Scalar::int(-1)),
        f.lift.clone(),
    ]);
    let shifted = TrackedMap::new(&torus, shifted_lift, 30).unwrap();
    let quad = Quadrature::GridMidpoint { cells: 20 };
    let base = mean_translation_vector(&torus, &f, &quad).unwrap();
    let moved = mean_translation_vector(&torus, &shifted, &quad).unwrap();
    println!(
        "homotopy shift by (2, -1): mean moves by ({}, {})",
        &moved.vector[0] - &base.vector[0],
        &moved.vector[1] - &base.vector[1]
    );

    // The vertical unit translation covers the identity of the unit
    // torus; as a homotopy lift it carries the vertical deck class.
    let g0 = TrackedMap::new(&torus, PlaneMap::translate(Scalar::zero(), Scalar::one()), 30).unwrap();
    let class = orbit_loop_class(&torus, &g0, &x, 1).unwrap();
    println!("one-step class of the vertical deck lift: ({}, {})", class[0], class[1]);
}
