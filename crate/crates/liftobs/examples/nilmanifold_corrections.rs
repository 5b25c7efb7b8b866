//! The nilmanifold action where correcting the lifts works.
//!
//! On the universal cover of the Heisenberg nilmanifold, the isotopy
//! lifts `j(x,y,z) = (x+z, y+1, z)` and `k(x,y,z) = (x,y,z+1)` have
//! commutator the Deck map `S`. Unlike the annulus case the Deck group is
//! nonabelian: `[T, U] = S^-1`, so replacing `j` by `T j` and `k` by
//! `U k` cancels the obstruction and the corrected lifts commute on the
//! nose.
//!
//! Run with `cargo run -p liftobs --example nilmanifold_corrections`.

use liftobs::lifting::{
    relator_obstruction, search_deck_corrections, CorrectionOutcome, LiftAssignment,
};
use liftobs::maps::{evaluate_word_action, DeckGroup, Space3Map};
use liftobs::scalar::{halton_space, Point3};
use liftobs::words::{GroupPresentation, Word};

fn main() {
    let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));

    // [j, k] = S pointwise.
    let p = Point3::ints(0, 0, 1);
    let jk = evaluate_word_action(&[Space3Map::j(), Space3Map::k()], &comm, &p).unwrap();
    let s = Space3Map::S.apply(&p).unwrap();
    println!("[j, k]({:?}) = {:?} = S(point): {}", (0, 0, 1), (jk.x.to_f64(), jk.y.to_f64(), jk.z.to_f64()), jk == s);

    let assignment = LiftAssignment::new(
        GroupPresentation::z2(),
        vec![Space3Map::j(), Space3Map::k()],
        DeckGroup::nil3(Space3Map::S, Space3Map::T, Space3Map::U),
        60,
        1e-9,
    )
    .unwrap();
    let ob = relator_obstruction(&assignment, &comm, 1, 60, 1e-9).unwrap();
    println!("obstruction word over the Deck generators (S, T, U): {:?}", ob.deck_word.letters());

    match search_deck_corrections(&assignment, 1, 60, 1e-9).unwrap() {
        CorrectionOutcome::Corrected { assignment: corrected, correction_words } => {
            println!(
                "correction found at bound 1: j -> generator {:?} o j, k -> generator {:?} o k",
                correction_words.0.letters(),
                correction_words.1.letters()
            );
            // Exact commutation of T j and U k at rational sample points.
            let tj = &corrected.lifts[0];
            let uk = &corrected.lifts[1];
            let exact = halton_space(100, 3).iter().all(|q| {
                tj.apply(&uk.apply(q).unwrap()).unwrap() == uk.apply(&tj.apply(q).unwrap()).unwrap()
            });
            println!("corrected lifts commute exactly at 100 rational points: {exact}");
        }
        CorrectionOutcome::Exhausted { .. } => unreachable!("the paper's correction exists"),
    }
}
