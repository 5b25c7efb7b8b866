//! The full lift-check pipeline as a library call: abelianization basis,
//! word decompositions, relator obstructions, and mean-translation
//! reports for the commutator parts.
//!
//! Run with `cargo run -p liftobs --example lift_check_reports`.

use liftobs::catalog::{map_f0, map_g0, map_h0};
use liftobs::lifting::construct_lift_assignment;
use liftobs::maps::{DeckGroup, PlaneMap};
use liftobs::scalar::{Point2, Scalar};
use liftobs::words::{parse_word, GroupPresentation};

fn main() {
    let presentation = GroupPresentation::z2();
    let requested = vec![
        parse_word("a^2b", &presentation.generators).unwrap(),
        parse_word("abab^-1", &presentation.generators).unwrap(),
    ];

    // Mean horizontal displacement over a band quadrature; not an
    // invariant measure, so the report carries a caveat.
    let tau = |map: &PlaneMap| -> Option<Vec<Scalar>> {
        let cells = 16i64;
        let mut sum = Scalar::zero();
        for i in 0..cells {
            for j in -cells..cells {
                let p = Point2::new(
                    Scalar::ratio(2 * i + 1, 2 * cells),
                    Scalar::ratio(2 * j + 1, 2 * cells),
                );
                let q = map.apply(&p).ok()?;
                sum = sum + (&q.x - &p.x);
            }
        }
        Some(vec![sum / Scalar::int(2 * cells * cells)])
    };

    let (_, report) = construct_lift_assignment(
        &presentation,
        vec![map_f0(), map_g0()],
        DeckGroup::abelian(vec![map_h0()]),
        &requested,
        3,
        60,
        1e-9,
        Some(&tau),
        Some("band quadrature; not an invariant measure".into()),
    )
    .unwrap();

    println!("abelianization: rank {}", report.abelianization.free_rank);
    println!(
        "basis words: {:?}",
        report.basis_words.iter().map(|w| w.display(&presentation.generators)).collect::<Vec<_>>()
    );
    for dec in &report.decompositions {
        println!(
            "word {} = basis powers {:?} times commutator part {}",
            dec.word.display(&presentation.generators),
            dec.basis_powers.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            dec.commutator_part.display(&presentation.generators),
        );
    }
    for ob in &report.obstructions {
        println!(
            "relator {}: {:?}, deck word {:?}",
            ob.relator.display(&presentation.generators),
            ob.status,
            ob.deck_word.letters(),
        );
    }
    println!("liftable: {}, extension: {:?}", report.liftable, report.extension);
    for t in &report.commutator_tau {
        println!(
            "mean translation of the lifted word {}: {:?} (zero: {}, caveat: {:?})",
            t.word.display(&presentation.generators),
            t.tau.iter().map(|v| v.to_f64()).collect::<Vec<_>>(),
            t.zero_within_tol,
            t.caveat.as_deref().unwrap_or("none"),
        );
    }
}
