//! Constructing lift assignments and extracting their obstructions.
//!
//! A lift assignment sends each generator of a finitely presented group to
//! a lift on the cover. A relator word then evaluates to a Deck element
//! (the obstruction); the assignment defines an action on the cover
//! exactly when every obstruction is trivial. The constructive route:
//! refuse groups whose abelianization has torsion, pick a basis of the
//! free abelianization via Smith normal form, decompose group elements as
//! basis powers times an abelianization-trivial part, and search Deck
//! corrections of the generator lifts when the plain assignment obstructs.
//!
//! Commutator-subgroup membership is certified at the abelianization
//! level only (exponent vector zero); the report labels that part
//! accordingly.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{
    deck_commutation_check, match_deck_word, maps_equal_check, word_to_map, DeckGroup, DeckMatch,
    MapError, SpaceMap,
};
use crate::scalar::Scalar;
use crate::words::{abelianization_with_snf, AbelianizationResult, GroupPresentation, Word};

/// Callback computing a mean translation vector of a composed lift, when
/// the model carries a quadrature measure.
pub type TauFn<'a, M> = &'a dyn Fn(&M) -> Option<Vec<Scalar>>;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("abelianization has torsion {coefficients:?}; lifting needs a torsion-free abelianization")]
    Torsion { coefficients: Vec<BigInt> },
    #[error("lift count {lifts} does not match generator count {generators}")]
    CountMismatch { lifts: usize, generators: usize },
    #[error("a generator lift fails to commute with a Deck generator")]
    NotDeckEquivariant,
    #[error("correction search needs the single-relator commutator presentation")]
    NeedsCommutatorRelator,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A generator-to-lift assignment over a Deck group.
#[derive(Clone, Debug)]
pub struct LiftAssignment<M: SpaceMap> {
    pub presentation: GroupPresentation,
    pub lifts: Vec<M>,
    pub deck: DeckGroup<M>,
    /// Whether the lifts are homotopy lifts (commute with the full Deck
    /// group). Corrected assignments trade this for commuting lifts.
    pub homotopy_lifts: bool,
}

impl<M: SpaceMap> LiftAssignment<M> {
    pub fn new(
        presentation: GroupPresentation,
        lifts: Vec<M>,
        deck: DeckGroup<M>,
        samples: usize,
        tol: f64,
    ) -> Result<LiftAssignment<M>, LiftError> {
        if lifts.len() != presentation.generator_count() {
            return Err(LiftError::CountMismatch {
                lifts: lifts.len(),
                generators: presentation.generator_count(),
            });
        }
        for lift in &lifts {
            for deck_gen in &deck.gens {
                if !deck_commutation_check(lift, deck_gen, samples, tol)?.commutes() {
                    return Err(LiftError::NotDeckEquivariant);
                }
            }
        }
        Ok(LiftAssignment { presentation, lifts, deck, homotopy_lifts: true })
    }

    /// Realize a word in the generators as a composed lift.
    pub fn word_map(&self, word: &Word) -> M {
        word_to_map(&self.lifts, word)
    }
}

/// Status of a lifted relator word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionStatus {
    Trivial,
    Nontrivial,
    NotDeck,
    Inconclusive,
}

/// A relator together with the Deck element its lift evaluates to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    pub relator: Word,
    /// Word over the Deck generators; empty iff trivial.
    pub deck_word: Word,
    pub status: ObstructionStatus,
}

/// Evaluate a lifted relator and match it against Deck words with
/// exponents within `bound`.
pub fn relator_obstruction<M: SpaceMap>(
    assignment: &LiftAssignment<M>,
    relator: &Word,
    bound: i64,
    samples: usize,
    tol: f64,
) -> Result<Obstruction, LiftError> {
    let lifted = assignment.word_map(relator);
    let matched = match_deck_word(&lifted, &assignment.deck, bound, samples, tol)?;
    let (deck_word, status) = match matched {
        DeckMatch::Identity => (Word::empty(), ObstructionStatus::Trivial),
        DeckMatch::Deck { word } => (word, ObstructionStatus::Nontrivial),
        DeckMatch::NotDeck => (Word::empty(), ObstructionStatus::NotDeck),
        DeckMatch::Inconclusive => (Word::empty(), ObstructionStatus::Inconclusive),
    };
    Ok(Obstruction { relator: relator.clone(), deck_word, status })
}

/// Decomposition `g = b_1^{m_1} ... b_n^{m_n} g_0` with `g_0` trivial in
/// the abelianization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordDecomposition {
    pub word: Word,
    pub basis_powers: Vec<BigInt>,
    /// The abelianization-trivial part.
    pub commutator_part: Word,
}

/// The basis data of the free abelianization, as words in the generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianBasis {
    pub result: AbelianizationResult,
    pub basis_words: Vec<Word>,
    /// Row transform of the exponent-matrix Smith form; coordinates of a
    /// word are `u * exponent_vector`.
    free_rows: Vec<usize>,
    u: crate::intmat::IntMatrix,
}

impl AbelianBasis {
    /// Refuses presentations with abelianization torsion.
    pub fn compute(presentation: &GroupPresentation) -> Result<AbelianBasis, LiftError> {
        let (result, snf) = abelianization_with_snf(presentation);
        if !result.is_torsion_free() {
            return Err(LiftError::Torsion { coefficients: result.torsion_coefficients });
        }
        let g = presentation.generator_count();
        let diag = snf.d.diagonal();
        let free_rows: Vec<usize> =
            (0..g).filter(|&i| i >= diag.len() || diag[i].is_zero()).collect();
        let basis_words: Vec<Word> = free_rows
            .iter()
            .map(|&i| {
                let raw: Vec<(usize, i64)> = (0..g)
                    .filter_map(|j| {
                        let e = snf.u_inv[(j, i)].to_i64().expect("basis exponent fits i64");
                        if e == 0 {
                            None
                        } else {
                            Some((j, e))
                        }
                    })
                    .collect();
                Word::reduce(&raw)
            })
            .collect();
        Ok(AbelianBasis { result, basis_words, free_rows, u: snf.u })
    }

    /// Decompose a word as basis powers times an abelianization-trivial
    /// part.
    pub fn decompose(&self, word: &Word, generator_count: usize) -> WordDecomposition {
        let x = word.exponent_vector(generator_count);
        let mut col = crate::intmat::IntMatrix::zeros(generator_count.max(1), 1);
        for (i, v) in x.iter().enumerate() {
            col[(i, 0)] = v.clone();
        }
        let y = self.u.mul(&col);
        let basis_powers: Vec<BigInt> = self.free_rows.iter().map(|&i| y[(i, 0)].clone()).collect();
        let mut prefix = Word::empty();
        for (w, m) in self.basis_words.iter().zip(&basis_powers) {
            prefix = prefix.concat(&w.pow(m.to_i64().expect("power fits i64")));
        }
        let commutator_part = prefix.inverse().concat(word);
        WordDecomposition { word: word.clone(), basis_powers, commutator_part }
    }
}

/// Mean translation of the commutator-part lift, computed by a
/// caller-supplied quadrature (present only when the model carries one).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutatorTau {
    pub word: Word,
    pub tau: Vec<Scalar>,
    pub zero_within_tol: bool,
    /// Present when the quadrature measure is not known to be invariant;
    /// the value is then reported against the given measure only.
    pub caveat: Option<String>,
}

/// Construction report: abelianization, basis, decompositions, per-relator
/// obstructions, and the extension classification when it applies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftReport {
    pub abelianization: AbelianizationResult,
    pub basis_words: Vec<Word>,
    pub decompositions: Vec<WordDecomposition>,
    pub obstructions: Vec<Obstruction>,
    pub liftable: bool,
    pub extension: Option<ExtensionClass>,
    pub commutator_tau: Vec<CommutatorTau>,
}

/// Construct a lift assignment and its report. Refuses presentations with
/// abelianization torsion (carrying the coefficients as the witness).
/// `requested` words are decomposed through the free-abelianization basis;
/// `tau` computes a mean translation vector of a composed lift when the
/// model provides a quadrature.
#[allow(clippy::too_many_arguments)]
pub fn construct_lift_assignment<M: SpaceMap>(
    presentation: &GroupPresentation,
    raw_lifts: Vec<M>,
    deck: DeckGroup<M>,
    requested: &[Word],
    bound: i64,
    samples: usize,
    tol: f64,
    tau: Option<TauFn<'_, M>>,
    tau_caveat: Option<String>,
) -> Result<(LiftAssignment<M>, LiftReport), LiftError> {
    let basis = AbelianBasis::compute(presentation)?;
    let assignment = LiftAssignment::new(presentation.clone(), raw_lifts, deck, samples, tol)?;

    let decompositions: Vec<WordDecomposition> = requested
        .iter()
        .map(|w| basis.decompose(w, presentation.generator_count()))
        .collect();

    let mut obstructions = Vec::new();
    for relator in &presentation.relators {
        obstructions.push(relator_obstruction(&assignment, relator, bound, samples, tol)?);
    }
    let liftable = obstructions.iter().all(|o| o.status == ObstructionStatus::Trivial);

    // Classify the central extension in the single-commutator-relator
    // case over a rank-one Deck group.
    let extension = single_commutator_extension(&assignment, &obstructions);

    let mut commutator_tau = Vec::new();
    if let Some(tau_fn) = tau {
        for dec in &decompositions {
            if dec.commutator_part.is_empty() {
                continue;
            }
            let lift = assignment.word_map(&dec.commutator_part);
            if let Some(value) = tau_fn(&lift) {
                let zero = value.iter().all(|v| v.to_f64().abs() <= tol.max(1e-9));
                commutator_tau.push(CommutatorTau {
                    word: dec.commutator_part.clone(),
                    tau: value,
                    zero_within_tol: zero,
                    caveat: tau_caveat.clone(),
                });
            }
        }
        for relator in &presentation.relators {
            let lift = assignment.word_map(relator);
            if let Some(value) = tau_fn(&lift) {
                let zero = value.iter().all(|v| v.to_f64().abs() <= tol.max(1e-9));
                commutator_tau.push(CommutatorTau {
                    word: relator.clone(),
                    tau: value,
                    zero_within_tol: zero,
                    caveat: tau_caveat.clone(),
                });
            }
        }
    }

    let report = LiftReport {
        abelianization: basis.result.clone(),
        basis_words: basis.basis_words.clone(),
        decompositions,
        obstructions,
        liftable,
        extension,
        commutator_tau,
    };
    Ok((assignment, report))
}

/// The central extension `1 -> Z -> K -> Z^2 -> 1` determined by the
/// commutator Deck power `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionClass {
    /// `k = 0`: the sequence splits and `K` is `Z^3`.
    SplitsZ3,
    /// `k != 0`: `K` contains the Heisenberg group with index `|k|`.
    HeisenbergFiniteIndex { index: u64 },
}

/// Classify from the integer commutator Deck power.
pub fn classify_extension(k: i64) -> ExtensionClass {
    if k == 0 {
        ExtensionClass::SplitsZ3
    } else {
        ExtensionClass::HeisenbergFiniteIndex { index: k.unsigned_abs() }
    }
}

fn single_commutator_extension<M: SpaceMap>(
    assignment: &LiftAssignment<M>,
    obstructions: &[Obstruction],
) -> Option<ExtensionClass> {
    if assignment.deck.gens.len() != 1 || obstructions.len() != 1 {
        return None;
    }
    let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
    if obstructions[0].relator != comm {
        return None;
    }
    match obstructions[0].status {
        ObstructionStatus::Trivial => Some(classify_extension(0)),
        ObstructionStatus::Nontrivial => {
            let letters = obstructions[0].deck_word.letters();
            if letters.len() == 1 && letters[0].0 == 0 {
                Some(classify_extension(letters[0].1))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Outcome of the Deck-correction search.
#[derive(Clone, Debug)]
pub enum CorrectionOutcome<M: SpaceMap> {
    Corrected {
        assignment: LiftAssignment<M>,
        correction_words: (Word, Word),
    },
    Exhausted {
        bound: i64,
    },
}

/// Search for Deck words `D1, D2` with exponents within `bound` such that
/// the corrected lifts `D1 f, D2 g` commute. Candidate pairs are ordered
/// by total exponent size, then by the number of negative exponents, then
/// lexicographically, so minimal positive corrections are found first and
/// the result is deterministic.
pub fn search_deck_corrections<M: SpaceMap>(
    assignment: &LiftAssignment<M>,
    bound: i64,
    samples: usize,
    tol: f64,
) -> Result<CorrectionOutcome<M>, LiftError> {
    let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
    if assignment.presentation.relators != vec![comm.clone()] || assignment.lifts.len() != 2 {
        return Err(LiftError::NeedsCommutatorRelator);
    }
    let singles = assignment.deck.enumerate_words(bound);
    let mut pairs: Vec<(&Word, &Word)> = Vec::with_capacity(singles.len() * singles.len());
    for d1 in &singles {
        for d2 in &singles {
            pairs.push((d1, d2));
        }
    }
    pairs.sort_by_key(|(d1, d2)| {
        let weight = d1.length() + d2.length();
        let negatives = d1.letters().iter().chain(d2.letters()).filter(|&&(_, e)| e < 0).count();
        let mut key_vec: Vec<(usize, i64)> = d1.letters().to_vec();
        key_vec.extend_from_slice(d2.letters());
        (weight, negatives, key_vec)
    });

    for (d1, d2) in pairs {
        let corrected = vec![
            M::compose_all(vec![assignment.deck.word_map(d1), assignment.lifts[0].clone()]),
            M::compose_all(vec![assignment.deck.word_map(d2), assignment.lifts[1].clone()]),
        ];
        let lifted = word_to_map(&corrected, &comm);
        if maps_equal_check(&lifted, &M::identity(), samples, tol)?.commutes() {
            let corrected_assignment = LiftAssignment {
                presentation: assignment.presentation.clone(),
                lifts: corrected,
                deck: assignment.deck.clone(),
                homotopy_lifts: d1.is_empty() && d2.is_empty() && assignment.homotopy_lifts,
            };
            return Ok(CorrectionOutcome::Corrected {
                assignment: corrected_assignment,
                correction_words: (d1.clone(), d2.clone()),
            });
        }
    }
    Ok(CorrectionOutcome::Exhausted { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{map_f0, map_g0, map_h0};
    use crate::maps::{PlaneMap, Space3Map};
    use crate::words::parse_presentation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z2_annulus_assignment() -> LiftAssignment<PlaneMap> {
        LiftAssignment::new(
            GroupPresentation::z2(),
            vec![map_f0(), map_g0()],
            DeckGroup::abelian(vec![map_h0()]),
            60,
            1e-9,
        )
        .unwrap()
    }

    fn nil_assignment() -> LiftAssignment<Space3Map> {
        LiftAssignment::new(
            GroupPresentation::z2(),
            vec![Space3Map::j(), Space3Map::k()],
            DeckGroup::nil3(Space3Map::S, Space3Map::T, Space3Map::U),
            60,
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn translation_lifts_have_trivial_obstruction() {
        let assignment = LiftAssignment::new(
            GroupPresentation::z2(),
            vec![
                PlaneMap::translate(Scalar::ratio(1, 3), Scalar::ratio(2, 7)),
                PlaneMap::translate(Scalar::ratio(5, 11), Scalar::ratio(1, 2)),
            ],
            DeckGroup::abelian(vec![map_h0()]),
            60,
            1e-9,
        )
        .unwrap();
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let ob = relator_obstruction(&assignment, &comm, 2, 60, 1e-9).unwrap();
        assert_eq!(ob.status, ObstructionStatus::Trivial);
    }

    #[test]
    fn annulus_obstruction_is_h0() {
        let assignment = z2_annulus_assignment();
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let ob = relator_obstruction(&assignment, &comm, 3, 60, 1e-9).unwrap();
        assert_eq!(ob.status, ObstructionStatus::Nontrivial);
        assert_eq!(ob.deck_word, Word::gen(0, 1));
    }

    #[test]
    fn nil_obstruction_is_s() {
        let assignment = nil_assignment();
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let ob = relator_obstruction(&assignment, &comm, 1, 60, 1e-9).unwrap();
        assert_eq!(ob.status, ObstructionStatus::Nontrivial);
        assert_eq!(ob.deck_word, Word::gen(0, 1)); // S^1
    }

    #[test]
    fn bs13_refused_with_torsion_witness() {
        let p = GroupPresentation::bs13();
        let err = AbelianBasis::compute(&p).unwrap_err();
        match err {
            LiftError::Torsion { coefficients } => {
                assert_eq!(coefficients, vec![BigInt::from(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn z2_decomposition_recovers_exponents() {
        let p = GroupPresentation::z2();
        let basis = AbelianBasis::compute(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let raw: Vec<(usize, i64)> = (0..rng.gen_range(0..10))
                .map(|_| (rng.gen_range(0..2), rng.gen_range(-2..=2i64)))
                .collect();
            let w = Word::reduce(&raw);
            let dec = basis.decompose(&w, 2);
            // Reconstruct and compare exponent vectors.
            let mut rebuilt = Word::empty();
            for (bw, m) in basis.basis_words.iter().zip(&dec.basis_powers) {
                rebuilt = rebuilt.concat(&bw.pow(m.to_i64().unwrap()));
            }
            rebuilt = rebuilt.concat(&dec.commutator_part);
            assert_eq!(rebuilt.exponent_vector(2), w.exponent_vector(2));
            // Commutator part is abelianization-trivial.
            assert!(dec.commutator_part.exponent_vector(2).iter().all(BigInt::is_zero));
        }
    }

    #[test]
    fn surface_group_decomposition() {
        let p = parse_presentation("a1,b1,a2,b2; [a1,b1][a2,b2]").unwrap();
        let basis = AbelianBasis::compute(&p).unwrap();
        assert_eq!(basis.result.free_rank, 4);
        let w = parse_presentation("a1,b1,a2,b2; a1b1a1^-1b1^-1a2^3").unwrap().relators[0].clone();
        let dec = basis.decompose(&w, 4);
        assert!(dec.commutator_part.exponent_vector(4).iter().all(BigInt::is_zero));
    }

    #[test]
    fn construct_reports_annulus_not_liftable() {
        let (_, report) = construct_lift_assignment(
            &GroupPresentation::z2(),
            vec![map_f0(), map_g0()],
            DeckGroup::abelian(vec![map_h0()]),
            &[Word::gen(0, 2).concat(&Word::gen(1, 1))],
            3,
            60,
            1e-9,
            None,
            None,
        )
        .unwrap();
        assert!(!report.liftable);
        assert_eq!(report.extension, Some(ExtensionClass::HeisenbergFiniteIndex { index: 1 }));
        assert_eq!(report.obstructions[0].deck_word, Word::gen(0, 1));
    }

    #[test]
    fn construct_accepts_torus_translations() {
        let (assignment, report) = construct_lift_assignment(
            &GroupPresentation::z2(),
            vec![
                PlaneMap::translate(Scalar::ratio(1, 4), Scalar::ratio(1, 3)),
                PlaneMap::translate(Scalar::ratio(1, 5), Scalar::ratio(2, 3)),
            ],
            DeckGroup::abelian(vec![map_h0()]),
            &[],
            2,
            60,
            1e-9,
            None,
            None,
        )
        .unwrap();
        assert!(report.liftable);
        assert_eq!(report.extension, Some(ExtensionClass::SplitsZ3));
        // Identity words act as the identity map.
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let lifted = assignment.word_map(&comm);
        assert!(maps_equal_check(&lifted, &PlaneMap::identity(), 100, 1e-9)
            .unwrap()
            .commutes());
    }

    #[test]
    fn correction_search_finds_t_and_u() {
        let assignment = nil_assignment();
        match search_deck_corrections(&assignment, 1, 60, 1e-9).unwrap() {
            CorrectionOutcome::Corrected { assignment: corrected, correction_words } => {
                assert_eq!(correction_words.0, Word::gen(1, 1), "T corrects j");
                assert_eq!(correction_words.1, Word::gen(2, 1), "U corrects k");
                assert!(!corrected.homotopy_lifts);
                // The corrected pair commutes exactly.
                let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
                let lifted = corrected.word_map(&comm);
                assert!(maps_equal_check(&lifted, &Space3Map::identity(), 100, 1e-12)
                    .unwrap()
                    .commutes());
            }
            CorrectionOutcome::Exhausted { .. } => panic!("correction exists at bound 1"),
        }
    }

    #[test]
    fn correction_search_exhausts_for_central_deck() {
        let assignment = z2_annulus_assignment();
        match search_deck_corrections(&assignment, 3, 40, 1e-9).unwrap() {
            CorrectionOutcome::Exhausted { bound } => assert_eq!(bound, 3),
            CorrectionOutcome::Corrected { .. } => {
                panic!("central corrections cannot fix the commutator")
            }
        }
    }

    #[test]
    fn correction_search_returns_identity_for_commuting_lifts() {
        let assignment = LiftAssignment::new(
            GroupPresentation::z2(),
            vec![
                PlaneMap::translate(Scalar::ratio(1, 3), Scalar::zero()),
                PlaneMap::translate(Scalar::zero(), Scalar::ratio(1, 2)),
            ],
            DeckGroup::abelian(vec![map_h0()]),
            40,
            1e-9,
        )
        .unwrap();
        match search_deck_corrections(&assignment, 2, 40, 1e-9).unwrap() {
            CorrectionOutcome::Corrected { correction_words, assignment: corrected } => {
                assert!(correction_words.0.is_empty());
                assert!(correction_words.1.is_empty());
                assert!(corrected.homotopy_lifts);
            }
            CorrectionOutcome::Exhausted { .. } => panic!("identity correction suffices"),
        }
    }

    #[test]
    fn obstruction_invariant_under_central_corrections() {
        // Composing either lift with powers of the central h0 leaves the
        // commutator obstruction unchanged.
        let deck = DeckGroup::abelian(vec![map_h0()]);
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        for ef in -2..=2i64 {
            for eg in -2..=2i64 {
                let f = PlaneMap::compose(vec![map_h0().pow(ef), map_f0()]);
                let g = PlaneMap::compose(vec![map_h0().pow(eg), map_g0()]);
                let assignment = LiftAssignment::new(
                    GroupPresentation::z2(),
                    vec![f, g],
                    deck.clone(),
                    40,
                    1e-9,
                )
                .unwrap();
                let ob = relator_obstruction(&assignment, &comm, 3, 40, 1e-9).unwrap();
                assert_eq!(ob.deck_word, Word::gen(0, 1));
            }
        }
    }

    #[test]
    fn tau_additivity_along_words() {
        // For measure-preserving torus fixtures, the mean translation of
        // a composed lift is the sum of the per-letter means.
        use crate::homology::{mean_translation_vector, ModelSurface, Quadrature, TrackedMap};
        let torus = ModelSurface::torus(3, 3, Scalar::one()).unwrap();
        let lifts = vec![
            PlaneMap::translate(Scalar::ratio(7, 100), Scalar::ratio(13, 100)),
            PlaneMap::translate(Scalar::ratio(41, 100), Scalar::ratio(3, 100)),
        ];
        // Tie-free quadrature: at 100 cells the nodes (2j+1)/200 shifted
        // by p/100 never land on integer thresholds.
        let quad = Quadrature::GridMidpoint { cells: 100 };
        let tau_of = |m: &PlaneMap| {
            let tracked = TrackedMap::new(&torus, m.clone(), 20).unwrap();
            mean_translation_vector(&torus, &tracked, &quad).unwrap().vector
        };
        let per_letter: Vec<Vec<Scalar>> = lifts.iter().map(tau_of).collect();
        let words = [
            Word::gen(0, 2),
            Word::gen(0, 1).concat(&Word::gen(1, 1)),
            Word::gen(0, -1).concat(&Word::gen(1, 3)),
        ];
        for word in &words {
            let composed = crate::maps::word_to_map(&lifts, word);
            let tau = tau_of(&composed);
            let n = word.length() as f64;
            for i in 0..2 {
                let mut expected = 0.0;
                for &(g, e) in word.letters() {
                    expected += e as f64 * per_letter[g][i].to_f64();
                }
                let defect = (tau[i].to_f64() - expected).abs();
                assert!(defect <= n * 1e-6, "defect {defect} for {word}");
            }
        }
    }

    #[test]
    fn classify_extension_cases() {
        assert_eq!(classify_extension(0), ExtensionClass::SplitsZ3);
        assert_eq!(classify_extension(1), ExtensionClass::HeisenbergFiniteIndex { index: 1 });
        assert_eq!(classify_extension(-2), ExtensionClass::HeisenbergFiniteIndex { index: 2 });
    }
}
