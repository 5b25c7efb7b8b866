//! The executable catalog: every explicit example action the crate
//! models, keyed by name.
//!
//! Plane entries act on the universal cover of the open annulus with Deck
//! generator `h0`; the nilmanifold entries act on three-space with Deck
//! generators `S, T, U`; circle entries are lifts to the line; the
//! real-projective-space entry is a matrix action on the three-sphere.

use std::collections::BTreeMap;

use crate::circle::{build_bs13_action, CircleLift};
use crate::intmat::IntMatrix;
use crate::maps::{profile_l, skew_k, PlaneMap, Space3Map};
use crate::scalar::Scalar;
use crate::words::GroupPresentation;

/// A circle generator with its orientation flag; the reflection in the
/// two-generator circle example is orientation-reversing.
#[derive(Clone, Debug)]
pub struct CircleGenerator {
    pub lift: CircleLift,
    pub orientation_reversing: bool,
}

#[derive(Clone, Debug)]
pub enum CatalogEntry {
    /// Generators acting on the plane, commuting with `h0`.
    Annulus {
        presentation: GroupPresentation,
        generators: Vec<PlaneMap>,
        deck: Vec<PlaneMap>,
    },
    /// Generators acting on three-space, nilmanifold Deck group.
    Nil3 {
        presentation: GroupPresentation,
        generators: Vec<Space3Map>,
        deck: Vec<Space3Map>,
    },
    Circle {
        presentation: GroupPresentation,
        generators: Vec<CircleGenerator>,
    },
    /// Matrix action on the three-sphere commuting with the antipode.
    Matrices {
        generators: Vec<IntMatrix>,
        center: IntMatrix,
    },
}

impl CatalogEntry {
    pub fn space(&self) -> &'static str {
        match self {
            CatalogEntry::Annulus { .. } => "annulus",
            CatalogEntry::Nil3 { .. } => "nil3",
            CatalogEntry::Circle { .. } => "circle",
            CatalogEntry::Matrices { .. } => "rp3",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CatalogEntry::Annulus { generators, .. } => {
                format!("Z^2 action on the annulus cover, {} generators", generators.len())
            }
            CatalogEntry::Nil3 { generators, .. } => {
                format!("Z^2 action on the nilmanifold cover, {} generators", generators.len())
            }
            CatalogEntry::Circle { generators, .. } => {
                format!("circle action, {} generators", generators.len())
            }
            CatalogEntry::Matrices { generators, .. } => {
                format!("matrix action on S^3, {} generators", generators.len())
            }
        }
    }
}

/// `f0(x, y) = (x + y, y)`
pub fn map_f0() -> PlaneMap {
    PlaneMap::AffineShear
}

/// `g0(x, y) = (x, y + 1)`
pub fn map_g0() -> PlaneMap {
    PlaneMap::translate(Scalar::zero(), Scalar::one())
}

/// `h0(x, y) = (x + 1, y)`
pub fn map_h0() -> PlaneMap {
    PlaneMap::deck_h0()
}

/// The lift (unique up to integral vertical translations) of the standard
/// twist torus map to the annulus, with vertical offset `m`.
pub fn lifted_toral_generator(m: i64) -> PlaneMap {
    if m == 0 {
        map_f0()
    } else {
        PlaneMap::compose(vec![PlaneMap::translate(Scalar::zero(), Scalar::int(m)), map_f0()])
    }
}

/// `f(x, y) = (x + y, y + l(y))` with the catalog profile `l`.
pub fn sin_profile_generator() -> PlaneMap {
    PlaneMap::vertical_profile(profile_l()).expect("catalog profile satisfies the certificate")
}

/// `f(x, y) = (x + y, y + k(x + y) + l(y))` with the catalog bumps.
pub fn sin_skew_generator() -> PlaneMap {
    PlaneMap::skew_perturbed(skew_k(), profile_l()).expect("catalog profile satisfies the certificate")
}

/// The A, B involutions of the projective-space example and their
/// commutator C = -I.
pub fn rp3_matrices() -> (IntMatrix, IntMatrix, IntMatrix) {
    let a = IntMatrix::from_rows(&[
        vec![1, 0, 0, 0],
        vec![0, -1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ]);
    let b = IntMatrix::from_rows(&[
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, 1, 0],
    ]);
    let c = IntMatrix::identity(4).neg();
    (a, b, c)
}

fn z2_annulus(generators: Vec<PlaneMap>) -> CatalogEntry {
    CatalogEntry::Annulus {
        presentation: GroupPresentation::z2(),
        generators,
        deck: vec![map_h0()],
    }
}

/// Build the full named catalog.
pub fn build_catalog() -> BTreeMap<String, CatalogEntry> {
    let mut catalog = BTreeMap::new();

    catalog.insert("annulus_basic".to_string(), z2_annulus(vec![map_f0(), map_g0()]));
    catalog.insert(
        "lifted_toral".to_string(),
        z2_annulus(vec![lifted_toral_generator(1), map_g0()]),
    );
    catalog.insert(
        "sin_profile".to_string(),
        z2_annulus(vec![sin_profile_generator(), map_g0()]),
    );
    catalog.insert("sin_skew".to_string(), z2_annulus(vec![sin_skew_generator(), map_g0()]));

    catalog.insert(
        "nilmanifold".to_string(),
        CatalogEntry::Nil3 {
            presentation: GroupPresentation::z2(),
            generators: vec![Space3Map::j(), Space3Map::k()],
            deck: vec![Space3Map::S, Space3Map::T, Space3Map::U],
        },
    );
    catalog.insert(
        "nilmanifold_corrected".to_string(),
        CatalogEntry::Nil3 {
            presentation: GroupPresentation::z2(),
            generators: vec![
                Space3Map::compose(vec![Space3Map::T, Space3Map::j()]),
                Space3Map::compose(vec![Space3Map::U, Space3Map::k()]),
            ],
            deck: vec![Space3Map::S, Space3Map::T, Space3Map::U],
        },
    );

    let (a, b, c) = rp3_matrices();
    catalog.insert("rp3".to_string(), CatalogEntry::Matrices { generators: vec![a, b], center: c });

    // The order-two circle action: a reflection and the half turn. The
    // maps commute on the circle; no lifts commute on the line.
    catalog.insert(
        "circle_z2".to_string(),
        CatalogEntry::Circle {
            presentation: GroupPresentation::z2(),
            generators: vec![
                CircleGenerator { lift: CircleLift::Reflection, orientation_reversing: true },
                CircleGenerator {
                    lift: CircleLift::rotation(Scalar::ratio(1, 2)),
                    orientation_reversing: false,
                },
            ],
        },
    );

    let (f, g) = build_bs13_action();
    catalog.insert(
        "bs13".to_string(),
        CatalogEntry::Circle {
            presentation: GroupPresentation::bs13(),
            generators: vec![
                CircleGenerator { lift: f, orientation_reversing: false },
                CircleGenerator { lift: g, orientation_reversing: false },
            ],
        },
    );

    catalog
}

/// Fetch a plane-action pair `(f, g)` from a Z^2 annulus entry.
pub fn annulus_pair(name: &str) -> Option<(PlaneMap, PlaneMap)> {
    match build_catalog().remove(name)? {
        CatalogEntry::Annulus { mut generators, .. } if generators.len() == 2 => {
            let g = generators.pop().unwrap();
            let f = generators.pop().unwrap();
            Some((f, g))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::matrix_commutator;
    use crate::maps::{evaluate_word_action, maps_equal_check};
    use crate::scalar::{halton_space, Point2};
    use crate::words::Word as W;

    #[test]
    fn catalog_names() {
        let catalog = build_catalog();
        let names: Vec<&str> = catalog.keys().map(String::as_str).collect();
        assert_eq!(
            names,
            vec![
                "annulus_basic",
                "bs13",
                "circle_z2",
                "lifted_toral",
                "nilmanifold",
                "nilmanifold_corrected",
                "rp3",
                "sin_profile",
                "sin_skew"
            ]
        );
    }

    #[test]
    fn annulus_basic_commutator() {
        let (f, g) = annulus_pair("annulus_basic").unwrap();
        let comm = W::commutator(&W::gen(0, 1), &W::gen(1, 1));
        let p = evaluate_word_action(&[f, g], &comm, &Point2::ints(0, 0)).unwrap();
        assert_eq!(p, Point2::ints(1, 0));
    }

    #[test]
    fn lifted_toral_commutator_is_h0() {
        let (f, g) = annulus_pair("lifted_toral").unwrap();
        let comm = W::commutator(&W::gen(0, 1), &W::gen(1, 1));
        for p in crate::scalar::halton_plane(50, 3) {
            let q = evaluate_word_action(&[f.clone(), g.clone()], &comm, &p).unwrap();
            assert_eq!(q, p.add(&Scalar::one(), &Scalar::zero()));
        }
    }

    #[test]
    fn corrected_nil_lifts_commute_exactly() {
        let catalog = build_catalog();
        let CatalogEntry::Nil3 { generators, .. } = &catalog["nilmanifold_corrected"] else {
            panic!("wrong entry type");
        };
        let tj = &generators[0];
        let uk = &generators[1];
        let lhs = Space3Map::compose(vec![tj.clone(), uk.clone()]);
        let rhs = Space3Map::compose(vec![uk.clone(), tj.clone()]);
        for p in halton_space(100, 3) {
            let a = lhs.apply(&p).unwrap();
            let b = rhs.apply(&p).unwrap();
            assert_eq!(a, b);
        }
        let verdict = maps_equal_check(&lhs, &rhs, 100, 1e-12).unwrap();
        assert!(verdict.commutes());
    }

    #[test]
    fn sin_skew_pinned_point() {
        let f = sin_skew_generator();
        let p = f.apply(&Point2::new(Scalar::ratio(3, 8), Scalar::ratio(1, 2))).unwrap();
        assert_eq!(p, Point2::new(Scalar::ratio(7, 8), Scalar::ratio(1, 2)));
    }

    #[test]
    fn sin_profile_iterates_stay_below_half() {
        let f = sin_profile_generator();
        let mut rng_denominator = 101i64;
        for seed in 0..100 {
            let y0 = Scalar::ratio(seed % 50, rng_denominator * 2); // in (0, 1/2)
            let mut p = Point2::new(Scalar::ratio(seed, 257), y0);
            for _ in 0..200 {
                p = f.apply(&p).unwrap();
                assert!(p.y < Scalar::ratio(1, 2));
            }
            rng_denominator += 2;
        }
    }

    #[test]
    fn rp3_relations() {
        let (a, b, c) = rp3_matrices();
        assert!(a.mul(&a).is_identity());
        assert!(b.mul(&b).is_identity());
        assert_eq!(matrix_commutator(&a, &b).unwrap(), c);
        assert_eq!(c.mul(&c), IntMatrix::identity(4));
        // A and B commute with C (the antipode).
        assert_eq!(a.mul(&c), c.mul(&a));
        assert_eq!(b.mul(&c), c.mul(&b));
    }

    #[test]
    fn circle_z2_entry_flags_reflection() {
        let catalog = build_catalog();
        let CatalogEntry::Circle { generators, .. } = &catalog["circle_z2"] else {
            panic!("wrong entry type");
        };
        assert!(generators[0].orientation_reversing);
        assert!(!generators[1].orientation_reversing);
        assert!(!generators[0].lift.orientation_preserving());
    }

    #[test]
    fn words_module_reexport_sanity() {
        // The catalog presentations parse back from their display form.
        let z2 = GroupPresentation::z2();
        assert_eq!(z2.relators[0], W::commutator(&W::gen(0, 1), &W::gen(1, 1)));
    }
}
