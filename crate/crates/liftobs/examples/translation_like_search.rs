//! Searching the group for a translation-like element, and conjugating it
//! to the vertical translation.
//!
//! For each catalog pair `(f, g)` with nontrivial commutator, the search
//! enumerates words `f^a g^b` and accepts the first whose iterated images
//! of the x-axis are disjoint, ordered, and escape both ends; every
//! smaller candidate's rejection reason is reported.
//!
//! Run with `cargo run -p liftobs --example translation_like_search`.

use liftobs::annulus::{
    build_vertical_conjugacy, find_translation_like, RegionOptions, SearchOptions,
};
use liftobs::catalog::{annulus_pair, map_g0};
use liftobs::maps::word_to_map;

fn main() {
    let options = SearchOptions { iter_bound: 8, resolution: 128, ..Default::default() };
    for name in ["annulus_basic", "sin_profile", "sin_skew"] {
        let (f, g) = annulus_pair(name).unwrap();
        let outcome = find_translation_like(&f, &g, &[], &options).unwrap();
        println!("{name}:");
        for r in &outcome.rejected {
            println!("  rejected {:?}: {}", r.word.letters(), r.reason);
        }
        match &outcome.element {
            Some(word) => println!("  accepted {:?}", word.letters()),
            None => println!("  no translation-like word within the bound"),
        }

        if let Some(word) = outcome.element {
            let element = word_to_map(&[f, g], &word);
            let (_, report) = build_vertical_conjugacy(
                &element,
                &RegionOptions { depth: 4, resolution: 64, ..Default::default() },
            )
            .unwrap();
            println!(
                "  fiberwise conjugacy to g0: vertical residual {:.2e}, horizontal drift {:.2e}\n",
                report.vertical_residual, report.horizontal_drift
            );
        }
    }

    // An affine candidate with horizontal drift: the conjugacy report
    // separates the exact vertical part from the allowed drift.
    let e = liftobs::maps::PlaneMap::translate(
        liftobs::scalar::Scalar::ratio(3, 10),
        liftobs::scalar::Scalar::one(),
    );
    let (_, report) = build_vertical_conjugacy(
        &e,
        &RegionOptions { depth: 4, resolution: 32, ..Default::default() },
    )
    .unwrap();
    println!(
        "translate(3/10, 1): vertical residual {:.2e}, horizontal drift {:.2}",
        report.vertical_residual, report.horizontal_drift
    );
    let _ = map_g0();
}
