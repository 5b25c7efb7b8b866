//! Lifts of circle homeomorphisms and their translation numbers.
//!
//! A lift is a degree-one map `F: R -> R` with `F(x+1) = F(x)+1`, built as
//! an expression tree of primitives. Rational primitives (rotations,
//! piecewise-linear maps, the arctangent-chart affine family at integer
//! points) evaluate exactly; everything else takes the float path.
//!
//! The certified estimate `|F^n(0)/n - tau| <= 1/n` follows from the
//! near-subadditivity of the displacement sequence `F^n(0)`, so the
//! returned interval always contains the true translation number.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{ArithmeticMode, Scalar};
use crate::words::GroupPresentation;

#[derive(Debug, Error, PartialEq)]
pub enum CircleError {
    #[error("piecewise-linear breakpoints must start in [0,1) and be strictly increasing in both coordinates")]
    BadBreakpoints,
    #[error("chart-affine slope must be positive")]
    BadSlope,
    #[error("map is orientation-reversing; translation numbers need an orientation-preserving lift")]
    OrientationReversing,
    #[error("inversion failed to bracket a root; the expression is not a valid monotone lift")]
    Inversion,
    #[error("discrete measure weights do not sum to one")]
    BadMeasure,
}

/// Breakpoints of a degree-one piecewise-linear circle lift. The graph
/// interpolates `(x_i, y_i)` within `[0,1)` and extends by `F(x+1)=F(x)+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlBreakpoints {
    points: Vec<(BigRational, BigRational)>,
}

impl PlBreakpoints {
    pub fn new(points: Vec<(BigRational, BigRational)>) -> Result<PlBreakpoints, CircleError> {
        if points.is_empty() {
            return Err(CircleError::BadBreakpoints);
        }
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        if points[0].0 < zero || points.last().unwrap().0 >= one {
            return Err(CircleError::BadBreakpoints);
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(CircleError::BadBreakpoints);
            }
        }
        // The wrap-around segment from the last point to (first + 1) must
        // also increase.
        let wrap_y = &points[0].1 + &one;
        if wrap_y <= points.last().unwrap().1 {
            return Err(CircleError::BadBreakpoints);
        }
        Ok(PlBreakpoints { points })
    }

    pub fn from_i64(points: &[(i64, i64, i64, i64)]) -> Result<PlBreakpoints, CircleError> {
        PlBreakpoints::new(
            points
                .iter()
                .map(|&(xp, xq, yp, yq)| {
                    (BigRational::new(xp.into(), xq.into()), BigRational::new(yp.into(), yq.into()))
                })
                .collect(),
        )
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        let k = x.floor();
        let t = x - &k;
        let n = self.points.len();
        let mut seg = None;
        for i in 0..n {
            let (x0, y0) = &self.points[i];
            let (x1, y1) = if i + 1 < n {
                self.points[i + 1].clone()
            } else {
                (&self.points[0].0 + BigRational::one(), &self.points[0].1 + BigRational::one())
            };
            if t >= *x0 && t < x1 {
                seg = Some((x0.clone(), y0.clone(), x1, y1));
                break;
            }
        }
        let (x0, y0, x1, y1) = match seg {
            Some(s) => s,
            None => {
                // t lies before the first breakpoint: previous period's
                // wrap segment shifted down by one.
                let (xl, yl) = &self.points[n - 1];
                (
                    xl - BigRational::one(),
                    yl - BigRational::one(),
                    self.points[0].0.clone(),
                    self.points[0].1.clone(),
                )
            }
        };
        let slope = (&y1 - &y0) / (&x1 - &x0);
        let y = &y0 + slope * (&t - &x0);
        y + k
    }

    fn inverse(&self) -> PlBreakpoints {
        // Swap coordinates; shift so the first x lands in [0,1).
        let mut pts: Vec<(BigRational, BigRational)> =
            self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let shift = pts[0].0.floor();
        for (x, y) in &mut pts {
            *x -= &shift;
            *y -= &shift;
        }
        PlBreakpoints { points: pts }
    }
}

/// Expression tree of a circle lift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CircleLift {
    /// `x + alpha`
    Rotation { alpha: Scalar },
    PiecewiseLinear { breakpoints: PlBreakpoints },
    /// Conjugate of the affine map `x -> slope * x + offset` of
    /// `R u {inf}` through the chart `theta(x) = 1/2 + atan(x)/pi`,
    /// which sends `inf` to `0 = 1`. Fixes all integers.
    ChartAffine { slope: Scalar, offset: Scalar },
    /// Double-cover coordinate change: `v -> (base(2v + pre) + post) / 2`.
    /// Odd `post` selects the lift that interchanges the two preimages of
    /// a base-circle point.
    HalfCover { base: Box<CircleLift>, pre: i64, post: i64 },
    /// `x -> -x`; orientation-reversing, admitted only for cataloging
    /// non-liftable examples.
    Reflection,
    /// Applied right-to-left: `Compose[f, g]` is `f o g`.
    Compose { maps: Vec<CircleLift> },
    Inverse { of: Box<CircleLift> },
}

impl CircleLift {
    pub fn rotation(alpha: Scalar) -> CircleLift {
        CircleLift::Rotation { alpha }
    }

    pub fn compose(maps: Vec<CircleLift>) -> CircleLift {
        CircleLift::Compose { maps }
    }

    pub fn inverse(&self) -> CircleLift {
        self.symbolic_inverse()
    }

    pub fn orientation_preserving(&self) -> bool {
        match self {
            CircleLift::Reflection => false,
            CircleLift::Compose { maps } => {
                maps.iter().filter(|m| !m.orientation_preserving()).count() % 2 == 0
            }
            CircleLift::Inverse { of } => of.orientation_preserving(),
            _ => true,
        }
    }

    fn symbolic_inverse(&self) -> CircleLift {
        match self {
            CircleLift::Rotation { alpha } => CircleLift::Rotation { alpha: -alpha.clone() },
            CircleLift::PiecewiseLinear { breakpoints } => {
                CircleLift::PiecewiseLinear { breakpoints: breakpoints.inverse() }
            }
            CircleLift::ChartAffine { slope, offset } => CircleLift::ChartAffine {
                slope: Scalar::one() / slope.clone(),
                offset: -(offset.clone() / slope.clone()),
            },
            CircleLift::HalfCover { base, pre, post } => CircleLift::HalfCover {
                base: Box::new(base.symbolic_inverse()),
                pre: -post,
                post: -pre,
            },
            CircleLift::Reflection => CircleLift::Reflection,
            CircleLift::Compose { maps } => CircleLift::Compose {
                maps: maps.iter().rev().map(CircleLift::symbolic_inverse).collect(),
            },
            CircleLift::Inverse { of } => (**of).clone(),
        }
    }

    /// Evaluate the lift at a point of the line.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar, CircleError> {
        match self {
            CircleLift::Rotation { alpha } => Ok(x + alpha),
            CircleLift::PiecewiseLinear { breakpoints } => match x {
                Scalar::Exact(r) => Ok(Scalar::Exact(breakpoints.eval(r))),
                Scalar::Float(v) => {
                    let r = BigRational::from_float(*v).ok_or(CircleError::Inversion)?;
                    Ok(Scalar::Float(breakpoints.eval(&r).to_f64().unwrap_or(f64::NAN)))
                }
            },
            CircleLift::ChartAffine { slope, offset } => {
                if slope.to_f64() <= 0.0 {
                    return Err(CircleError::BadSlope);
                }
                let k = x.floor_big();
                let t = x.fract();
                if t.is_zero() {
                    // The chart image of inf is fixed by every affine map.
                    return Ok(Scalar::big_int(k));
                }
                let t = t.to_f64();
                let pre = (std::f64::consts::PI * (t - 0.5)).tan();
                let image = slope.to_f64() * pre + offset.to_f64();
                let y = 0.5 + image.atan() / std::f64::consts::PI;
                Ok(Scalar::big_int(k) + Scalar::Float(y.clamp(0.0, 1.0)))
            }
            CircleLift::HalfCover { base, pre, post } => {
                let inner = Scalar::int(2) * x + Scalar::int(*pre);
                let out = base.eval(&inner)? + Scalar::int(*post);
                Ok(out / Scalar::int(2))
            }
            CircleLift::Reflection => Ok(-x),
            CircleLift::Compose { maps } => {
                let mut p = x.clone();
                for m in maps.iter().rev() {
                    p = m.eval(&p)?;
                }
                Ok(p)
            }
            CircleLift::Inverse { of } => of.symbolic_inverse().eval(x),
        }
    }

    /// n-fold iterate at x.
    pub fn iterate(&self, x: &Scalar, n: u32) -> Result<Scalar, CircleError> {
        let mut p = x.clone();
        for _ in 0..n {
            p = self.eval(&p)?;
        }
        Ok(p)
    }

    /// The induced circle map: evaluation mod 1.
    pub fn eval_mod1(&self, x: &Scalar) -> Result<Scalar, CircleError> {
        Ok(self.eval(x)?.fract())
    }
}

/// Certified enclosure of the translation number.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationInterval {
    pub lo: Scalar,
    pub hi: Scalar,
    pub n_used: u32,
    pub mode: ArithmeticMode,
}

impl TranslationInterval {
    pub fn center(&self) -> Scalar {
        (&self.lo + &self.hi) / Scalar::int(2)
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, value: &Scalar) -> bool {
        self.lo <= *value && *value <= self.hi
    }

    pub fn overlaps(&self, other: &TranslationInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// `[F^n(0)/n - 1/n, F^n(0)/n + 1/n]`; the true translation number lies
/// inside.
pub fn translation_number(lift: &CircleLift, n: u32) -> Result<TranslationInterval, CircleError> {
    assert!(n >= 1, "need at least one iterate");
    if !lift.orientation_preserving() {
        return Err(CircleError::OrientationReversing);
    }
    let end = lift.iterate(&Scalar::zero(), n)?;
    let center = end / Scalar::int(n as i64);
    let radius = Scalar::ratio(1, n as i64);
    let mode = center.mode();
    Ok(TranslationInterval { lo: &center - &radius, hi: center + radius, n_used: n, mode })
}

/// A Borel probability measure on the circle, in quadrature form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleMeasure {
    Lebesgue { quadrature_nodes: u32 },
    /// Pushforward of Lebesgue by a circle lift (a conjugacy).
    Pushforward { conjugacy: CircleLift, quadrature_nodes: u32 },
    /// Atoms (position, weight); weights should sum to one.
    Discrete { points: Vec<(Scalar, Scalar)> },
}

/// Integral of the displacement `F(x) - x` against the measure. Equals the
/// translation number when the measure is invariant under the induced
/// circle map; the integral is computed regardless.
pub fn translation_integral(lift: &CircleLift, measure: &CircleMeasure) -> Result<Scalar, CircleError> {
    match measure {
        CircleMeasure::Lebesgue { quadrature_nodes } => {
            let n = *quadrature_nodes as i64;
            let mut sum = Scalar::zero();
            for i in 0..n {
                let x = Scalar::ratio(2 * i + 1, 2 * n);
                sum = sum + (lift.eval(&x)? - x);
            }
            Ok(sum / Scalar::int(n))
        }
        CircleMeasure::Pushforward { conjugacy, quadrature_nodes } => {
            // Integrate the displacement at H(x) against Lebesgue in x.
            let n = *quadrature_nodes as i64;
            let mut sum = Scalar::zero();
            for i in 0..n {
                let x = Scalar::ratio(2 * i + 1, 2 * n);
                let hx = conjugacy.eval(&x)?;
                sum = sum + (lift.eval(&hx)? - hx);
            }
            Ok(sum / Scalar::int(n))
        }
        CircleMeasure::Discrete { points } => {
            let mass: Scalar =
                points.iter().fold(Scalar::zero(), |acc, (_, w)| acc + w);
            if (mass.to_f64() - 1.0).abs() > 1e-9 {
                return Err(CircleError::BadMeasure);
            }
            let mut sum = Scalar::zero();
            for (x, w) in points {
                sum = sum + (lift.eval(x)? - x) * w;
            }
            Ok(sum)
        }
    }
}

/// The Baumslag-Solitar BS(1,3) action on the double cover of
/// `R u {inf}`: `f` covers `x -> 3x`, `g` covers `x -> x + 1`. With
/// `g_half_turn` the lift of `g` interchanges the two preimages of `inf`
/// and has rotation number 1/2; otherwise the alternative lift with
/// rotation number 0 is returned.
pub fn build_bs13_action_with(g_half_turn: bool) -> (CircleLift, CircleLift) {
    let f_base = CircleLift::ChartAffine { slope: Scalar::int(3), offset: Scalar::zero() };
    let g_base = CircleLift::ChartAffine { slope: Scalar::int(1), offset: Scalar::int(1) };
    let f = CircleLift::HalfCover { base: Box::new(f_base), pre: 0, post: 0 };
    let g = CircleLift::HalfCover {
        base: Box::new(g_base),
        pre: 0,
        post: if g_half_turn { 1 } else { 0 },
    };
    (f, g)
}

/// Default BS(1,3) double-cover action: `g` has rotation number 1/2.
pub fn build_bs13_action() -> (CircleLift, CircleLift) {
    build_bs13_action_with(true)
}

pub fn bs13_presentation() -> GroupPresentation {
    GroupPresentation::bs13()
}

/// Distance to the nearest integer, as f64.
pub fn dist_mod1(x: &Scalar) -> f64 {
    let f = x.fract().to_f64();
    f.min(1.0 - f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rot(p: i64, q: i64) -> CircleLift {
        CircleLift::rotation(Scalar::ratio(p, q))
    }

    #[test]
    fn rotation_evaluation() {
        let r = rot(1, 3);
        assert_eq!(r.eval(&Scalar::zero()).unwrap(), Scalar::ratio(1, 3));
        assert_eq!(r.eval(&Scalar::ratio(5, 3)).unwrap(), Scalar::int(2));
        let r_inv = CircleLift::Inverse { of: Box::new(rot(1, 4)) };
        assert_eq!(r_inv.eval(&Scalar::zero()).unwrap(), Scalar::ratio(-1, 4));
    }

    #[test]
    fn rotation_translation_number_exact() {
        let interval = translation_number(&rot(1, 3), 3).unwrap();
        assert_eq!(interval.center(), Scalar::ratio(1, 3));
        assert!(interval.contains(&Scalar::ratio(1, 3)));
        assert_eq!(interval.mode, ArithmeticMode::Exact);
        for n in 1..=50 {
            let i = translation_number(&rot(2, 5), n).unwrap();
            assert!(i.contains(&Scalar::ratio(2, 5)), "n = {n}");
        }
    }

    fn pl_fix_zero() -> CircleLift {
        // Fixes 0 and 1/2, transverse crossings.
        let bp = PlBreakpoints::from_i64(&[(0, 1, 0, 1), (1, 2, 1, 4)]).unwrap();
        CircleLift::PiecewiseLinear { breakpoints: bp }
    }

    #[test]
    fn pl_fixed_point_tau_zero() {
        let f = pl_fix_zero();
        assert_eq!(f.eval(&Scalar::zero()).unwrap(), Scalar::zero());
        for n in [1, 5, 20] {
            let i = translation_number(&f, n).unwrap();
            assert!(i.contains(&Scalar::zero()));
            assert!(i.center().is_zero());
        }
    }

    #[test]
    fn pl_equivariance_and_inverse() {
        let bp = PlBreakpoints::from_i64(&[(0, 1, 1, 8), (1, 4, 1, 2), (3, 4, 7, 8)]).unwrap();
        let f = CircleLift::PiecewiseLinear { breakpoints: bp };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = Scalar::ratio(rng.gen_range(-4000..4000), 1000);
            let fx = f.eval(&x).unwrap();
            let fx1 = f.eval(&(&x + &Scalar::one())).unwrap();
            assert_eq!(fx1, &fx + &Scalar::one());
            let back = f.inverse().eval(&fx).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn chart_affine_fixes_integers() {
        let f = CircleLift::ChartAffine { slope: Scalar::int(3), offset: Scalar::zero() };
        assert_eq!(f.eval(&Scalar::int(2)).unwrap(), Scalar::int(2));
        // Monotone between integers.
        let a = f.eval(&Scalar::ratio(1, 4)).unwrap().to_f64();
        let b = f.eval(&Scalar::ratio(1, 2)).unwrap().to_f64();
        let c = f.eval(&Scalar::ratio(3, 4)).unwrap().to_f64();
        assert!(0.0 < a && a < b && b < c && c < 1.0);
        // The chart center t=1/2 is theta(0); x -> 3x fixes 0, and
        // theta conjugation sends it to theta(0) again.
        let theta = |x: f64| 0.5 + x.atan() / std::f64::consts::PI;
        assert!((b - theta(0.0)).abs() < 1e-12);
        // Offset moves the chart of 0 to the chart of 1.
        let g = CircleLift::ChartAffine { slope: Scalar::int(1), offset: Scalar::int(1) };
        let gb = g.eval(&Scalar::ratio(1, 2)).unwrap().to_f64();
        assert!((gb - theta(1.0)).abs() < 1e-12);
    }

    #[test]
    fn bs13_g_has_rotation_number_half() {
        let (f, g) = build_bs13_action();
        let i = translation_number(&g, 1000).unwrap();
        assert!((i.center().to_f64() - 0.5).abs() <= 1e-3);
        assert!(i.contains(&Scalar::ratio(1, 2)));
        // f fixes both chart preimages of inf.
        assert_eq!(f.eval(&Scalar::zero()).unwrap(), Scalar::zero());
        assert_eq!(f.eval(&Scalar::ratio(1, 2)).unwrap(), Scalar::ratio(1, 2));
        // The alternative lift of g has rotation number 0.
        let (_, g0) = build_bs13_action_with(false);
        let i0 = translation_number(&g0, 500).unwrap();
        assert!(i0.contains(&Scalar::zero()));
    }

    #[test]
    fn bs13_relation_holds_on_circle() {
        // a b a^-1 = b^3 holds for the induced circle maps; as lifts the
        // two sides differ by a constant integer translation (the lifting
        // obstruction).
        let (f, g) = build_bs13_action();
        let lhs = CircleLift::compose(vec![f.clone(), g.clone(), f.inverse()]);
        let rhs = CircleLift::compose(vec![g.clone(), g.clone(), g.clone()]);
        let mut deck_offsets = Vec::new();
        for i in 0..100 {
            let x = Scalar::ratio(i, 100);
            let a = lhs.eval(&x).unwrap();
            let b = rhs.eval(&x).unwrap();
            let diff = (&a - &b).to_f64();
            assert!((diff - diff.round()).abs() < 1e-9, "not a deck difference at {x:?}");
            deck_offsets.push(diff.round() as i64);
            // The induced circle maps agree outright.
            let am = lhs.eval_mod1(&x).unwrap().to_f64();
            let bm = rhs.eval_mod1(&x).unwrap().to_f64();
            let circle_dist = (am - bm).abs().min(1.0 - (am - bm).abs());
            assert!(circle_dist <= 1e-9);
        }
        deck_offsets.dedup();
        assert_eq!(deck_offsets, vec![-1], "constant deck offset of the relation");
    }

    #[test]
    fn reflection_and_half_rotation_never_lift() {
        // Lifts of x -> -x and x -> x + 1/2 commute downstairs but the
        // commutator of any lifts is an odd integer translation.
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let f = CircleLift::compose(vec![rot(a, 1), CircleLift::Reflection]);
                let g = rot(2 * b + 1, 2);
                let comm =
                    CircleLift::compose(vec![f.clone(), g.clone(), f.inverse(), g.inverse()]);
                let delta = comm.eval(&Scalar::zero()).unwrap();
                let k = delta.as_exact().unwrap();
                assert!(k.is_integer());
                assert!((k.to_integer() % 2i64) != 0.into(), "odd translation, never identity");
            }
        }
        assert!(translation_number(&CircleLift::Reflection, 5).is_err());
        // Any lift of the half turn has infinite order: its square is a
        // nonzero translation.
        for k in -2..=2i64 {
            let lift = rot(2 * k + 1, 2);
            let sq = lift.iterate(&Scalar::zero(), 2).unwrap();
            assert_eq!(sq, Scalar::int(2 * k + 1));
        }
    }

    #[test]
    fn tau_integral_examples() {
        let alpha = Scalar::ratio(2, 7);
        let f = CircleLift::rotation(alpha.clone());
        let tau =
            translation_integral(&f, &CircleMeasure::Lebesgue { quadrature_nodes: 64 }).unwrap();
        assert_eq!(tau, alpha);

        // Discrete measure at a fixed point of the induced map.
        let pl = pl_fix_zero();
        let tau = translation_integral(
            &pl,
            &CircleMeasure::Discrete { points: vec![(Scalar::zero(), Scalar::one())] },
        )
        .unwrap();
        assert!(tau.is_zero());
    }

    #[test]
    fn conjugated_rotation_integral_matches_alpha() {
        let h = CircleLift::PiecewiseLinear {
            breakpoints: PlBreakpoints::from_i64(&[(0, 1, 0, 1), (1, 3, 3, 5)]).unwrap(),
        };
        let alpha = Scalar::ratio(1, 3);
        let f =
            CircleLift::compose(vec![h.clone(), CircleLift::rotation(alpha.clone()), h.inverse()]);
        let mu = CircleMeasure::Pushforward { conjugacy: h, quadrature_nodes: 2000 };
        let tau = translation_integral(&f, &mu).unwrap();
        assert!((tau.to_f64() - alpha.to_f64()).abs() < 1e-6);
        // Long-iteration oracle.
        let i = translation_number(&f, 3000).unwrap();
        assert!((i.center().to_f64() - alpha.to_f64()).abs() < 1e-3);
    }

    #[test]
    fn measure_preserving_homomorphism() {
        // tau is additive on lifts preserving the same measure: test
        // H-conjugated rotations against the H-pushforward of Lebesgue.
        let h = CircleLift::PiecewiseLinear {
            breakpoints: PlBreakpoints::from_i64(&[(0, 1, 0, 1), (2, 5, 1, 5), (4, 5, 3, 5)]).unwrap(),
        };
        let conj = |alpha: Scalar| {
            CircleLift::compose(vec![h.clone(), CircleLift::rotation(alpha), h.inverse()])
        };
        let f = conj(Scalar::ratio(1, 3));
        let g = conj(Scalar::ratio(2, 7));
        let fg = CircleLift::compose(vec![f.clone(), g.clone()]);
        let mu = CircleMeasure::Pushforward { conjugacy: h.clone(), quadrature_nodes: 4096 };
        let tf = translation_integral(&f, &mu).unwrap().to_f64();
        let tg = translation_integral(&g, &mu).unwrap().to_f64();
        let tfg = translation_integral(&fg, &mu).unwrap().to_f64();
        assert!((tfg - tf - tg).abs() <= 1e-6, "defect {}", (tfg - tf - tg).abs());
    }

    #[test]
    fn non_homomorphism_witness() {
        // F has a transverse fixed point; rotating by a small eps keeps a
        // fixed point, so tau(R_eps o F) = 0 while eps exceeds the
        // certified width.
        let f = pl_fix_zero();
        let eps = Scalar::ratio(1, 100);
        let perturbed = CircleLift::compose(vec![CircleLift::rotation(eps.clone()), f]);
        let n = 500;
        let i = translation_number(&perturbed, n).unwrap();
        assert!(i.contains(&Scalar::zero()));
        assert!(eps > i.width());
    }

    #[test]
    fn equivariance_of_catalog_lifts() {
        let lifts: Vec<CircleLift> =
            vec![rot(1, 3), pl_fix_zero(), build_bs13_action().0, build_bs13_action().1];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in &lifts {
            for _ in 0..1000 {
                let x = Scalar::ratio(rng.gen_range(-3000..3000), 997);
                let a = f.eval(&(&x + &Scalar::one())).unwrap();
                let b = f.eval(&x).unwrap() + Scalar::one();
                if a.is_exact() && b.is_exact() {
                    assert_eq!(a, b);
                } else {
                    assert!((a.to_f64() - b.to_f64()).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn conjugacy_invariance_of_translation_number() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let alphas = [Scalar::ratio(1, 3), Scalar::ratio(2, 5), Scalar::Float(2f64.sqrt() - 1.0)];
        for alpha in &alphas {
            for _ in 0..20 {
                // Random increasing PL conjugacy fixing the integers.
                let x1 = rng.gen_range(200..500);
                let y1 = rng.gen_range(200..500);
                let x2 = rng.gen_range(550..900);
                let y2 = rng.gen_range(550..900);
                let bp = PlBreakpoints::from_i64(&[
                    (0, 1, 0, 1),
                    (x1, 1000, y1, 1000),
                    (x2, 1000, y2, 1000),
                ])
                .unwrap();
                let h = CircleLift::PiecewiseLinear { breakpoints: bp };
                let f = CircleLift::rotation(alpha.clone());
                let conj = CircleLift::compose(vec![h.clone(), f.clone(), h.inverse()]);
                let i1 = translation_number(&conj, 400).unwrap();
                let i2 = translation_number(&f, 600).unwrap();
                assert!(i1.overlaps(&i2), "alpha {alpha:?}");
            }
        }
    }
}
