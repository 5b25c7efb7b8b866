//! The basic annulus action: commuting downstairs, obstructed upstairs.
//!
//! `f0(x,y) = (x+y, y)` and `g0(x,y) = (x, y+1)` descend to commuting
//! homeomorphisms of the annulus, but their lifts have commutator `h0`,
//! the Deck translation — and no choice of lifts does better, since `h0`
//! is central. The extension `1 -> Z -> K -> Z^2 -> 1` is of Heisenberg
//! type with index one.
//!
//! Run with `cargo run -p liftobs --example annulus_obstruction`.

use liftobs::catalog::{map_f0, map_g0, map_h0};
use liftobs::lifting::{
    relator_obstruction, search_deck_corrections, CorrectionOutcome, LiftAssignment,
};
use liftobs::maps::{evaluate_word_action, DeckGroup};
use liftobs::scalar::Point2;
use liftobs::words::{GroupPresentation, Word};

fn main() {
    let presentation = GroupPresentation::z2();
    let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));

    // The commutator moves the origin one unit to the right.
    let image = evaluate_word_action(&[map_f0(), map_g0()], &comm, &Point2::ints(0, 0)).unwrap();
    println!("[f0, g0](0, 0) = ({}, {})", image.x, image.y);

    let assignment = LiftAssignment::new(
        presentation.clone(),
        vec![map_f0(), map_g0()],
        DeckGroup::abelian(vec![map_h0()]),
        60,
        1e-9,
    )
    .unwrap();

    let ob = relator_obstruction(&assignment, &comm, 3, 60, 1e-9).unwrap();
    println!(
        "relator {} evaluates to the Deck word h0^{:?} ({:?})",
        comm.display(&presentation.generators),
        ob.deck_word.letters().first().map(|&(_, e)| e).unwrap_or(0),
        ob.status
    );
    println!("extension class: {:?}", liftobs::lifting::classify_extension(1));

    // h0 is central: composing either lift with its powers cannot change
    // the commutator, so the correction search exhausts.
    match search_deck_corrections(&assignment, 3, 60, 1e-9).unwrap() {
        CorrectionOutcome::Exhausted { bound } => {
            println!("correction search exhausted at bound {bound}: central Deck corrections cancel");
        }
        CorrectionOutcome::Corrected { .. } => unreachable!(),
    }
}
