//! Expression-tree homeomorphisms of the plane and of three-space, word
//! evaluation for group actions, and Deck-element matching.
//!
//! Plane primitives model the annulus universal cover: the shear
//! `(x, y) -> (x + y, y)`, translations, and the sine-perturbed twist
//! family `(x, y) -> (x + y, y + k(x + y) + l(y))`. Every primitive
//! commutes with the horizontal unit translation, so all of them descend
//! to the annulus. Three-space primitives are the nilmanifold Deck maps
//! `S, T, U` and the isotopy lifts `j_t, k_t`.
//!
//! Perturbed primitives carry a Lipschitz certificate `sup|l'| < 1`; the
//! solved coordinate of the inverse is then strictly monotone and a
//! bisection to width 1e-12 recovers it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{halton_plane, halton_space, ArithmeticMode, Point2, Point3, Scalar};
use crate::words::Word;

const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("invertibility certificate violated: sup|l'| = {sup_lip} >= 1")]
    Certificate { sup_lip: f64 },
    #[error("wave frequency must be a positive integer (unit-period equivariance)")]
    BadFrequency,
    #[error("inversion bracket failure; the expression does not define a homeomorphism")]
    BrokenInverse,
    #[error("word uses generator {index} but the action has {count} generators")]
    WordMismatch { index: usize, count: usize },
}

/// `amplitude * (sin(pi * (2 * frequency * u + phase_over_pi)) + 1)`,
/// a non-negative bump of unit period. Stays exact when the phase
/// argument lands on a half-integer multiple of pi.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub amplitude: Scalar,
    pub frequency: u32,
    pub phase_over_pi: Scalar,
}

impl Wave {
    pub fn new(amplitude: Scalar, frequency: u32, phase_over_pi: Scalar) -> Result<Wave, MapError> {
        if frequency == 0 {
            return Err(MapError::BadFrequency);
        }
        Ok(Wave { amplitude, frequency, phase_over_pi })
    }

    pub fn value(&self, u: &Scalar) -> Scalar {
        let arg = Scalar::int(2 * self.frequency as i64) * u + &self.phase_over_pi;
        (arg.sin_pi() + Scalar::one()) * &self.amplitude
    }

    /// `sup |d/du value| = 2 pi * frequency * amplitude`
    pub fn lipschitz_bound(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency as f64 * self.amplitude.to_f64().abs()
    }

    /// Maximum of the value: `2 * amplitude`.
    pub fn sup(&self) -> f64 {
        2.0 * self.amplitude.to_f64().abs()
    }
}

/// The paper-catalog profile `l(y) = (sin(pi(2y + 1/2)) + 1) / 8`.
pub fn profile_l() -> Wave {
    Wave::new(Scalar::ratio(1, 8), 1, Scalar::ratio(1, 2)).unwrap()
}

/// The paper-catalog skew bump `k(u) = sin(4 pi u) + 1`.
pub fn skew_k() -> Wave {
    Wave::new(Scalar::one(), 2, Scalar::zero()).unwrap()
}

/// An expression-tree homeomorphism of the plane, equivariant under the
/// horizontal unit translation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PlaneMap {
    /// `(x, y) -> (x + y, y)`
    AffineShear,
    Translate { dx: Scalar, dy: Scalar },
    /// `(x, y) -> (x + y, y + l(y))`
    VerticalProfile { l: Wave },
    /// `(x, y) -> (x + y, y + k(x + y) + l(y))`
    SkewPerturbed { k: Wave, l: Wave },
    /// `(x, y) -> (x + amp * sin(...y...), y)`; area-preserving shear wave.
    HorizontalWave { wave: Wave },
    /// `(x, y) -> (x, y + amp * sin(...x...))`; vertical shear wave.
    VerticalWave { wave: Wave },
    /// `(x, y) -> (x, scale * y)`; vertical expansion, scale > 0.
    VerticalScale { scale: Scalar },
    /// `(x, y) -> (-x, y)`; orientation-reversing, breaks Deck
    /// equivariance with the horizontal translation.
    ReflectX,
    /// Applied right-to-left.
    Compose { maps: Vec<PlaneMap> },
    Inverse { of: Box<PlaneMap> },
}

impl PlaneMap {
    pub fn translate(dx: Scalar, dy: Scalar) -> PlaneMap {
        PlaneMap::Translate { dx, dy }
    }

    /// The Deck generator of the annulus: horizontal translation by one.
    pub fn deck_h0() -> PlaneMap {
        PlaneMap::translate(Scalar::one(), Scalar::zero())
    }

    pub fn vertical_profile(l: Wave) -> Result<PlaneMap, MapError> {
        let sup = l.lipschitz_bound();
        if sup >= 1.0 {
            return Err(MapError::Certificate { sup_lip: sup });
        }
        Ok(PlaneMap::VerticalProfile { l })
    }

    pub fn skew_perturbed(k: Wave, l: Wave) -> Result<PlaneMap, MapError> {
        let sup = l.lipschitz_bound();
        if sup >= 1.0 {
            return Err(MapError::Certificate { sup_lip: sup });
        }
        Ok(PlaneMap::SkewPerturbed { k, l })
    }

    pub fn compose(maps: Vec<PlaneMap>) -> PlaneMap {
        PlaneMap::Compose { maps }
    }

    pub fn inverse(&self) -> PlaneMap {
        match self {
            PlaneMap::Translate { dx, dy } => PlaneMap::Translate { dx: -dx.clone(), dy: -dy.clone() },
            PlaneMap::Compose { maps } => {
                PlaneMap::Compose { maps: maps.iter().rev().map(PlaneMap::inverse).collect() }
            }
            PlaneMap::Inverse { of } => (**of).clone(),
            other => PlaneMap::Inverse { of: Box::new(other.clone()) },
        }
    }

    pub fn pow(&self, n: i64) -> PlaneMap {
        if n == 0 {
            return PlaneMap::translate(Scalar::zero(), Scalar::zero());
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        PlaneMap::Compose { maps: vec![base; n.unsigned_abs() as usize] }
    }

    pub fn apply(&self, p: &Point2) -> Result<Point2, MapError> {
        match self {
            PlaneMap::AffineShear => Ok(Point2::new(&p.x + &p.y, p.y.clone())),
            PlaneMap::Translate { dx, dy } => Ok(p.add(dx, dy)),
            PlaneMap::VerticalProfile { l } => {
                let u = &p.x + &p.y;
                let y = &p.y + &l.value(&p.y);
                Ok(Point2::new(u, y))
            }
            PlaneMap::SkewPerturbed { k, l } => {
                let u = &p.x + &p.y;
                let y = &p.y + &k.value(&u) + l.value(&p.y);
                Ok(Point2::new(u, y))
            }
            PlaneMap::HorizontalWave { wave } => {
                Ok(Point2::new(&p.x + &wave.value(&p.y), p.y.clone()))
            }
            PlaneMap::VerticalWave { wave } => {
                Ok(Point2::new(p.x.clone(), &p.y + &wave.value(&p.x)))
            }
            PlaneMap::VerticalScale { scale } => Ok(Point2::new(p.x.clone(), &p.y * scale)),
            PlaneMap::ReflectX => Ok(Point2::new(-&p.x, p.y.clone())),
            PlaneMap::Compose { maps } => {
                let mut q = p.clone();
                for m in maps.iter().rev() {
                    q = m.apply(&q)?;
                }
                Ok(q)
            }
            PlaneMap::Inverse { of } => of.apply_inverse(p),
        }
    }

    fn apply_inverse(&self, p: &Point2) -> Result<Point2, MapError> {
        match self {
            PlaneMap::AffineShear => Ok(Point2::new(&p.x - &p.y, p.y.clone())),
            PlaneMap::Translate { dx, dy } => Ok(Point2::new(&p.x - dx, &p.y - dy)),
            PlaneMap::VerticalProfile { l } => {
                // (u, v): solve v = y + l(y), then x = u - y.
                let y = solve_monotone(&p.y, |y| y + &l.value(y), l.sup())?;
                Ok(Point2::new(&p.x - &y, y))
            }
            PlaneMap::SkewPerturbed { k, l } => {
                let ku = k.value(&p.x);
                let target = &p.y - &ku;
                let y = solve_monotone(&target, |y| y + &l.value(y), l.sup())?;
                Ok(Point2::new(&p.x - &y, y))
            }
            PlaneMap::HorizontalWave { wave } => {
                Ok(Point2::new(&p.x - &wave.value(&p.y), p.y.clone()))
            }
            PlaneMap::VerticalWave { wave } => {
                Ok(Point2::new(p.x.clone(), &p.y - &wave.value(&p.x)))
            }
            PlaneMap::VerticalScale { scale } => Ok(Point2::new(p.x.clone(), &p.y / scale)),
            PlaneMap::ReflectX => Ok(Point2::new(-&p.x, p.y.clone())),
            PlaneMap::Compose { maps } => {
                let mut q = p.clone();
                for m in maps {
                    q = m.apply_inverse(&q)?;
                }
                Ok(q)
            }
            PlaneMap::Inverse { of } => of.apply(p),
        }
    }

    /// Whether evaluation is exact on exact rational inputs.
    pub fn rational_exact(&self) -> bool {
        match self {
            PlaneMap::AffineShear | PlaneMap::ReflectX => true,
            PlaneMap::Translate { dx, dy } => dx.is_exact() && dy.is_exact(),
            PlaneMap::VerticalScale { scale } => scale.is_exact(),
            PlaneMap::Compose { maps } => maps.iter().all(PlaneMap::rational_exact),
            PlaneMap::Inverse { of } => of.rational_exact(),
            _ => false,
        }
    }
}

/// Solve `f(y) = target` for a strictly increasing `f(y) = y + bump(y)`
/// with `0 <= bump <= bump_sup`. The root lies in
/// `[target - bump_sup, target]`; the bracket is widened geometrically if
/// float rounding puts the root marginally outside.
fn solve_monotone(
    target: &Scalar,
    f: impl Fn(&Scalar) -> Scalar,
    bump_sup: f64,
) -> Result<Scalar, MapError> {
    // Fast path: if the target is exact and f(target - c) hits exactly for
    // the trivial bump values, skip bisection only when bump is 0 there.
    let t = target.to_f64();
    let mut lo = t - bump_sup - 1e-9;
    let mut hi = t + 1e-9;
    let mut expand = bump_sup.max(1.0);
    for _ in 0..60 {
        let flo = f(&Scalar::Float(lo)).to_f64();
        let fhi = f(&Scalar::Float(hi)).to_f64();
        if flo <= t && t <= fhi {
            break;
        }
        if flo > t {
            lo -= expand;
        }
        if fhi < t {
            hi += expand;
        }
        expand *= 2.0;
    }
    let (mut lo, mut hi) = (lo, hi);
    if !(f(&Scalar::Float(lo)).to_f64() <= t && t <= f(&Scalar::Float(hi)).to_f64()) {
        return Err(MapError::BrokenInverse);
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if f(&Scalar::Float(mid)).to_f64() < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Scalar::Float(0.5 * (lo + hi)))
}

/// Homeomorphisms of three-space for the nilmanifold cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Space3Map {
    /// `S(x, y, z) = (x + 1, y, z)`
    S,
    /// `T(x, y, z) = (x, y + 1, z)`
    T,
    /// `U(x, y, z) = (x + y, y, z + 1)`
    U,
    /// `j_t(x, y, z) = (x + t z, y + t, z)`
    J { t: Scalar },
    /// `k_t(x, y, z) = (x, y, z + t)`
    K { t: Scalar },
    Compose { maps: Vec<Space3Map> },
    Inverse { of: Box<Space3Map> },
}

impl Space3Map {
    pub fn j() -> Space3Map {
        Space3Map::J { t: Scalar::one() }
    }

    pub fn k() -> Space3Map {
        Space3Map::K { t: Scalar::one() }
    }

    pub fn compose(maps: Vec<Space3Map>) -> Space3Map {
        Space3Map::Compose { maps }
    }

    pub fn inverse(&self) -> Space3Map {
        match self {
            Space3Map::J { t } => Space3Map::J { t: -t.clone() },
            Space3Map::K { t } => Space3Map::K { t: -t.clone() },
            Space3Map::Compose { maps } => {
                Space3Map::Compose { maps: maps.iter().rev().map(Space3Map::inverse).collect() }
            }
            Space3Map::Inverse { of } => (**of).clone(),
            prim => Space3Map::Inverse { of: Box::new(prim.clone()) },
        }
    }

    pub fn pow(&self, n: i64) -> Space3Map {
        if n == 0 {
            return Space3Map::K { t: Scalar::zero() };
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        Space3Map::Compose { maps: vec![base; n.unsigned_abs() as usize] }
    }

    pub fn apply(&self, p: &Point3) -> Result<Point3, MapError> {
        match self {
            Space3Map::S => Ok(Point3::new(&p.x + &Scalar::one(), p.y.clone(), p.z.clone())),
            Space3Map::T => Ok(Point3::new(p.x.clone(), &p.y + &Scalar::one(), p.z.clone())),
            Space3Map::U => Ok(Point3::new(&p.x + &p.y, p.y.clone(), &p.z + &Scalar::one())),
            Space3Map::J { t } => {
                Ok(Point3::new(&p.x + &(t * &p.z), &p.y + t, p.z.clone()))
            }
            Space3Map::K { t } => Ok(Point3::new(p.x.clone(), p.y.clone(), &p.z + t)),
            Space3Map::Compose { maps } => {
                let mut q = p.clone();
                for m in maps.iter().rev() {
                    q = m.apply(&q)?;
                }
                Ok(q)
            }
            Space3Map::Inverse { of } => match &**of {
                Space3Map::S => Ok(Point3::new(&p.x - &Scalar::one(), p.y.clone(), p.z.clone())),
                Space3Map::T => Ok(Point3::new(p.x.clone(), &p.y - &Scalar::one(), p.z.clone())),
                Space3Map::U => {
                    Ok(Point3::new(&p.x - &p.y, p.y.clone(), &p.z - &Scalar::one()))
                }
                other => other.inverse().apply(p),
            },
        }
    }
}

/// Shared evaluation surface for word actions and Deck matching.
pub trait SpaceMap: Clone {
    type Point: Clone + PartialEq;
    fn apply_point(&self, p: &Self::Point) -> Result<Self::Point, MapError>;
    fn invert(&self) -> Self;
    fn compose_all(maps: Vec<Self>) -> Self;
    fn identity() -> Self;
    fn sample_points(count: usize) -> Vec<Self::Point>;
    fn point_distance(a: &Self::Point, b: &Self::Point) -> f64;
    fn points_equal_exact(a: &Self::Point, b: &Self::Point) -> Option<bool>;
}

impl SpaceMap for PlaneMap {
    type Point = Point2;

    fn apply_point(&self, p: &Point2) -> Result<Point2, MapError> {
        self.apply(p)
    }

    fn invert(&self) -> PlaneMap {
        self.inverse()
    }

    fn compose_all(maps: Vec<PlaneMap>) -> PlaneMap {
        PlaneMap::Compose { maps }
    }

    fn identity() -> PlaneMap {
        PlaneMap::translate(Scalar::zero(), Scalar::zero())
    }

    fn sample_points(count: usize) -> Vec<Point2> {
        halton_plane(count, 3)
    }

    fn point_distance(a: &Point2, b: &Point2) -> f64 {
        a.dist_f64(b)
    }

    fn points_equal_exact(a: &Point2, b: &Point2) -> Option<bool> {
        if a.mode() == ArithmeticMode::Exact && b.mode() == ArithmeticMode::Exact {
            Some(a == b)
        } else {
            None
        }
    }
}

impl SpaceMap for Space3Map {
    type Point = Point3;

    fn apply_point(&self, p: &Point3) -> Result<Point3, MapError> {
        self.apply(p)
    }

    fn invert(&self) -> Space3Map {
        self.inverse()
    }

    fn compose_all(maps: Vec<Space3Map>) -> Space3Map {
        Space3Map::Compose { maps }
    }

    fn identity() -> Space3Map {
        Space3Map::K { t: Scalar::zero() }
    }

    fn sample_points(count: usize) -> Vec<Point3> {
        halton_space(count, 3)
    }

    fn point_distance(a: &Point3, b: &Point3) -> f64 {
        a.dist_f64(b)
    }

    fn points_equal_exact(a: &Point3, b: &Point3) -> Option<bool> {
        let exact = a.x.is_exact()
            && a.y.is_exact()
            && a.z.is_exact()
            && b.x.is_exact()
            && b.y.is_exact()
            && b.z.is_exact();
        if exact {
            Some(a == b)
        } else {
            None
        }
    }
}

/// Apply a word in the generators (right-to-left) to a point.
pub fn evaluate_word_action<M: SpaceMap>(
    images: &[M],
    word: &Word,
    p: &M::Point,
) -> Result<M::Point, MapError> {
    if let Some(g) = word.max_generator() {
        if g >= images.len() {
            return Err(MapError::WordMismatch { index: g, count: images.len() });
        }
    }
    let mut q = p.clone();
    for &(g, e) in word.letters().iter().rev() {
        let map = if e < 0 { images[g].invert() } else { images[g].clone() };
        for _ in 0..e.unsigned_abs() {
            q = map.apply_point(&q)?;
        }
    }
    Ok(q)
}

/// Compose the word into a single expression-tree map.
pub fn word_to_map<M: SpaceMap>(images: &[M], word: &Word) -> M {
    let mut parts: Vec<M> = Vec::new();
    for &(g, e) in word.letters() {
        let base = if e < 0 { images[g].invert() } else { images[g].clone() };
        for _ in 0..e.unsigned_abs() {
            parts.push(base.clone());
        }
    }
    if parts.is_empty() {
        M::identity()
    } else {
        M::compose_all(parts)
    }
}

/// Verdict of a sampled equality/commutation check. Float comparisons use
/// a band: deviations in `(tol/10, tol)` are inconclusive rather than
/// silently rounded to either side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CheckVerdict<P> {
    Commutes { max_deviation: f64 },
    Violates { witness: P, deviation: f64 },
    Inconclusive { max_deviation: f64 },
}

impl<P> CheckVerdict<P> {
    pub fn commutes(&self) -> bool {
        matches!(self, CheckVerdict::Commutes { .. })
    }
}

/// Compare `f o deck` with `deck o f` on a deterministic low-discrepancy
/// sample.
pub fn deck_commutation_check<M: SpaceMap>(
    f: &M,
    deck: &M,
    samples: usize,
    tol: f64,
) -> Result<CheckVerdict<M::Point>, MapError> {
    maps_equal_check(
        &M::compose_all(vec![f.clone(), deck.clone()]),
        &M::compose_all(vec![deck.clone(), f.clone()]),
        samples,
        tol,
    )
}

/// Compare two maps pointwise on a deterministic sample.
pub fn maps_equal_check<M: SpaceMap>(
    a: &M,
    b: &M,
    samples: usize,
    tol: f64,
) -> Result<CheckVerdict<M::Point>, MapError> {
    let points = M::sample_points(samples);
    let mut max_dev = 0.0f64;
    let mut witness: Option<M::Point> = None;
    let mut all_exact = true;
    for p in &points {
        let pa = a.apply_point(p)?;
        let pb = b.apply_point(p)?;
        match M::points_equal_exact(&pa, &pb) {
            Some(true) => {}
            Some(false) => {
                let d = M::point_distance(&pa, &pb);
                if d > max_dev {
                    max_dev = d;
                    witness = Some(p.clone());
                }
            }
            None => {
                all_exact = false;
                let d = M::point_distance(&pa, &pb);
                if d > max_dev {
                    max_dev = d;
                    witness = Some(p.clone());
                }
            }
        }
    }
    if all_exact {
        return Ok(if max_dev == 0.0 && witness.is_none() {
            CheckVerdict::Commutes { max_deviation: 0.0 }
        } else {
            CheckVerdict::Violates { witness: witness.unwrap(), deviation: max_dev }
        });
    }
    if max_dev <= tol / 10.0 {
        Ok(CheckVerdict::Commutes { max_deviation: max_dev })
    } else if max_dev >= tol {
        Ok(CheckVerdict::Violates { witness: witness.unwrap(), deviation: max_dev })
    } else {
        Ok(CheckVerdict::Inconclusive { max_deviation: max_dev })
    }
}

/// A Deck transformation group presented by generator maps. `nil3` marks
/// the Heisenberg-type relations of the nilmanifold cover, where the first
/// generator is central and words take the normal form
/// `S^a T^b U^c`; otherwise the group is free abelian on its generators.
#[derive(Clone, Debug)]
pub struct DeckGroup<M: SpaceMap> {
    pub gens: Vec<M>,
    pub nil3: bool,
}

impl<M: SpaceMap> DeckGroup<M> {
    pub fn abelian(gens: Vec<M>) -> DeckGroup<M> {
        DeckGroup { gens, nil3: false }
    }

    pub fn nil3(s: M, t: M, u: M) -> DeckGroup<M> {
        DeckGroup { gens: vec![s, t, u], nil3: true }
    }

    /// Realize a word in the Deck generators as a map.
    pub fn word_map(&self, word: &Word) -> M {
        word_to_map(&self.gens, word)
    }

    /// Normal-form word from an exponent vector, one exponent per
    /// generator.
    pub fn word_from_exponents(&self, exps: &[i64]) -> Word {
        let raw: Vec<(usize, i64)> = exps.iter().enumerate().map(|(g, &e)| (g, e)).collect();
        Word::reduce(&raw)
    }

    /// Enumerate candidate Deck words with per-generator exponents in
    /// `[-bound, bound]`, ordered by total exponent size, then by number
    /// of negative exponents, then lexicographically. The identity comes
    /// first and minimal non-negative corrections precede mirrored ones.
    pub fn enumerate_words(&self, bound: i64) -> Vec<Word> {
        let n = self.gens.len();
        let mut vectors: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for v in &vectors {
                for e in -bound..=bound {
                    let mut w = v.clone();
                    w.push(e);
                    next.push(w);
                }
            }
            vectors = next;
        }
        vectors.sort_by_key(|v| {
            let weight: i64 = v.iter().map(|e| e.abs()).sum();
            let negatives = v.iter().filter(|&&e| e < 0).count();
            (weight, negatives, v.clone())
        });
        vectors.into_iter().map(|v| self.word_from_exponents(&v)).collect()
    }
}

/// Result of matching a map against Deck words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DeckMatch {
    /// The empty word: the map is the identity.
    Identity,
    Deck { word: Word },
    NotDeck,
    /// Two candidate words matched within tolerance, or the deviation fell
    /// inside the tolerance band.
    Inconclusive,
}

/// Identify `[f, g]` as a word in the Deck generators, with exponents
/// within `bound`. Checks first that `f` and `g` commute with every Deck
/// generator.
pub fn commutator_deck_element<M: SpaceMap>(
    f: &M,
    g: &M,
    deck: &DeckGroup<M>,
    bound: i64,
    samples: usize,
    tol: f64,
) -> Result<DeckMatch, MapError> {
    for gen in &deck.gens {
        if !deck_commutation_check(f, gen, samples, tol)?.commutes() {
            return Ok(DeckMatch::NotDeck);
        }
        if !deck_commutation_check(g, gen, samples, tol)?.commutes() {
            return Ok(DeckMatch::NotDeck);
        }
    }
    let commutator = M::compose_all(vec![f.clone(), g.clone(), f.invert(), g.invert()]);
    match_deck_word(&commutator, deck, bound, samples, tol)
}

/// Identify a map as a Deck word by sampled comparison.
pub fn match_deck_word<M: SpaceMap>(
    map: &M,
    deck: &DeckGroup<M>,
    bound: i64,
    samples: usize,
    tol: f64,
) -> Result<DeckMatch, MapError> {
    let mut matched: Option<Word> = None;
    let mut saw_inconclusive = false;
    for word in deck.enumerate_words(bound) {
        let candidate = deck.word_map(&word);
        match maps_equal_check(map, &candidate, samples, tol)? {
            CheckVerdict::Commutes { .. } => {
                if let Some(first) = &matched {
                    if *first != word {
                        return Ok(DeckMatch::Inconclusive);
                    }
                } else {
                    matched = Some(word);
                }
            }
            CheckVerdict::Inconclusive { .. } => saw_inconclusive = true,
            CheckVerdict::Violates { .. } => {}
        }
    }
    match matched {
        Some(w) if w.is_empty() => Ok(DeckMatch::Identity),
        Some(w) => Ok(DeckMatch::Deck { word: w }),
        None if saw_inconclusive => Ok(DeckMatch::Inconclusive),
        None => Ok(DeckMatch::NotDeck),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn f0() -> PlaneMap {
        PlaneMap::AffineShear
    }

    pub fn g0() -> PlaneMap {
        PlaneMap::translate(Scalar::zero(), Scalar::one())
    }

    #[test]
    fn shear_evaluation() {
        let p = f0().apply(&Point2::ints(1, 2)).unwrap();
        assert_eq!(p, Point2::ints(3, 2));
    }

    #[test]
    fn nil_lift_evaluation() {
        let j = Space3Map::j();
        assert_eq!(j.apply(&Point3::ints(0, 0, 1)).unwrap(), Point3::ints(1, 1, 1));
    }

    #[test]
    fn profile_value_at_origin() {
        let f = PlaneMap::vertical_profile(profile_l()).unwrap();
        let p = f.apply(&Point2::ints(0, 0)).unwrap();
        assert_eq!(p, Point2::new(Scalar::zero(), Scalar::ratio(1, 4)));
        assert!(p.y.is_exact());
    }

    #[test]
    fn profile_fixes_half_line() {
        let f = PlaneMap::vertical_profile(profile_l()).unwrap();
        let p = f.apply(&Point2::new(Scalar::ratio(1, 3), Scalar::ratio(1, 2))).unwrap();
        assert_eq!(p.y, Scalar::ratio(1, 2));
    }

    #[test]
    fn skew_fixed_ray() {
        let f = PlaneMap::skew_perturbed(skew_k(), profile_l()).unwrap();
        let mut p = Point2::new(Scalar::ratio(3, 8), Scalar::ratio(1, 2));
        for n in 1..=100i64 {
            p = f.apply(&p).unwrap();
            assert_eq!(p.y, Scalar::ratio(1, 2), "stays on the ray at step {n}");
            assert_eq!(p.x, Scalar::ratio(3, 8) + Scalar::ratio(n, 2));
        }
    }

    #[test]
    fn skew_on_x_axis_matches_closed_form() {
        let f = PlaneMap::skew_perturbed(skew_k(), profile_l()).unwrap();
        for i in 0..50 {
            let x = Scalar::ratio(i, 50);
            let p = f.apply(&Point2::new(x.clone(), Scalar::zero())).unwrap();
            assert_eq!(p.x, x);
            let expected = (4.0 * std::f64::consts::PI * x.to_f64()).sin() + 1.25;
            assert!((p.y.to_f64() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn certificate_rejects_steep_profile() {
        let steep = Wave::new(Scalar::ratio(1, 2), 1, Scalar::zero()).unwrap();
        assert!(matches!(
            PlaneMap::vertical_profile(steep),
            Err(MapError::Certificate { .. })
        ));
    }

    #[test]
    fn inverses_round_trip() {
        let catalog: Vec<PlaneMap> = vec![
            f0(),
            g0(),
            PlaneMap::vertical_profile(profile_l()).unwrap(),
            PlaneMap::skew_perturbed(skew_k(), profile_l()).unwrap(),
            PlaneMap::HorizontalWave { wave: profile_l() },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in &catalog {
            let inv = f.inverse();
            for _ in 0..200 {
                let p = Point2::floats(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let q = f.apply(&p).unwrap();
                let back = inv.apply(&q).unwrap();
                assert!(back.dist_f64(&p) <= 1e-9, "map {f:?}");
            }
        }
    }

    #[test]
    fn deck_equivariance_of_catalog() {
        let h0 = PlaneMap::deck_h0();
        let catalog: Vec<PlaneMap> = vec![
            f0(),
            g0(),
            PlaneMap::vertical_profile(profile_l()).unwrap(),
            PlaneMap::skew_perturbed(skew_k(), profile_l()).unwrap(),
        ];
        for f in &catalog {
            let verdict = deck_commutation_check(f, &h0, 200, 1e-9).unwrap();
            assert!(verdict.commutes(), "map {f:?} verdict {verdict:?}");
        }
        // Exactness for the affine members.
        let verdict = deck_commutation_check(&f0(), &h0, 200, 1e-9).unwrap();
        match verdict {
            CheckVerdict::Commutes { max_deviation } => assert_eq!(max_deviation, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reflection_violates_deck_commutation() {
        // The reflection commutes with vertical translation but not with
        // the horizontal Deck generator: h0 refl (x, y) = (1 - x, y)
        // while refl h0 (x, y) = (-1 - x, y).
        let refl = PlaneMap::ReflectX;
        let h0 = PlaneMap::deck_h0();
        let verdict = deck_commutation_check(&refl, &h0, 100, 1e-9).unwrap();
        assert!(matches!(verdict, CheckVerdict::Violates { .. }));
        // Exact witness at (1, 0): images differ by (2, 0).
        let p = Point2::ints(1, 0);
        let a = h0.apply(&refl.apply(&p).unwrap()).unwrap();
        let b = refl.apply(&h0.apply(&p).unwrap()).unwrap();
        assert_eq!(a, Point2::ints(0, 0));
        assert_eq!(b, Point2::ints(-2, 0));
        // The vertical translation, by contrast, does commute with it.
        assert!(deck_commutation_check(&g0(), &refl, 100, 1e-9).unwrap().commutes());
    }

    #[test]
    fn conjugated_shear_violates_g0_commutation() {
        let stretch = PlaneMap::VerticalScale { scale: Scalar::int(2) };
        let bad = PlaneMap::compose(vec![stretch.clone(), f0(), stretch.inverse()]);
        let verdict = deck_commutation_check(&bad, &g0(), 100, 1e-9).unwrap();
        assert!(matches!(verdict, CheckVerdict::Violates { .. }));
    }

    #[test]
    fn word_action_on_annulus_pair() {
        let images = vec![f0(), g0()];
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let p = evaluate_word_action(&images, &comm, &Point2::ints(0, 0)).unwrap();
        assert_eq!(p, Point2::ints(1, 0));
        let empty = evaluate_word_action(&images, &Word::empty(), &Point2::ints(5, 7)).unwrap();
        assert_eq!(empty, Point2::ints(5, 7));
    }

    #[test]
    fn word_action_on_nil_pair() {
        let images = vec![Space3Map::j(), Space3Map::k()];
        let comm = Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = Point3::new(
                Scalar::ratio(rng.gen_range(-50..50), 7),
                Scalar::ratio(rng.gen_range(-50..50), 7),
                Scalar::ratio(rng.gen_range(-50..50), 7),
            );
            let q = evaluate_word_action(&images, &comm, &p).unwrap();
            let expected = Space3Map::S.apply(&p).unwrap();
            assert_eq!(q, expected);
        }
    }

    #[test]
    fn commutator_matching() {
        let deck = DeckGroup::abelian(vec![PlaneMap::deck_h0()]);
        let m = commutator_deck_element(&f0(), &g0(), &deck, 2, 60, 1e-9).unwrap();
        assert_eq!(m, DeckMatch::Deck { word: Word::gen(0, 1) });

        let m = commutator_deck_element(&f0(), &PlaneMap::deck_h0(), &deck, 2, 60, 1e-9).unwrap();
        assert_eq!(m, DeckMatch::Identity);

        let nil = DeckGroup::nil3(Space3Map::S, Space3Map::T, Space3Map::U);
        let m = commutator_deck_element(&Space3Map::j(), &Space3Map::k(), &nil, 1, 60, 1e-9).unwrap();
        assert_eq!(m, DeckMatch::Deck { word: Word::gen(0, 1) });
    }

    #[test]
    fn deck_word_order_prefers_small_nonnegative() {
        let deck = DeckGroup::nil3(Space3Map::S, Space3Map::T, Space3Map::U);
        let words = deck.enumerate_words(1);
        assert_eq!(words[0], Word::empty());
        // Weight-one candidates: positive exponents precede negative ones.
        assert_eq!(words[1], Word::gen(2, 1));
        assert_eq!(words[2], Word::gen(1, 1));
        assert_eq!(words[3], Word::gen(0, 1));
        assert_eq!(words[4], Word::gen(0, -1));
    }

    #[test]
    fn nil_deck_relations() {
        // [T, U] = S^-1 and S is central.
        let s = Space3Map::S;
        let t = Space3Map::T;
        let u = Space3Map::U;
        let tu = Space3Map::compose(vec![t.clone(), u.clone(), t.inverse(), u.inverse()]);
        let verdict = maps_equal_check(&tu, &s.inverse(), 50, 1e-12).unwrap();
        assert!(verdict.commutes());
        for gen in [&t, &u] {
            assert!(deck_commutation_check(&s, gen, 50, 1e-12).unwrap().commutes());
        }
    }
}
