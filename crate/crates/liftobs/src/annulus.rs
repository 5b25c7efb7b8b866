//! Essential circles in the annulus at polyline resolution: iterated
//! images of the x-axis, disjointness, the swept region, crossings with
//! orientation, and the search for a translation-like element.
//!
//! Curves are periodic polylines winding once around the annulus,
//! represented by one period of vertices with the closure rule
//! `last = first + (1, 0)`. Intersection tests are exact on rational
//! segments; float segments get an inconclusive band of width `tol`.
//! Disjointness claims are therefore conservative: a verdict of
//! `Disjoint` certifies a gap at the stated resolution.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{commutator_deck_element, DeckGroup, DeckMatch, MapError, PlaneMap};
use crate::scalar::{ArithmeticMode, Point2, Scalar};
use crate::words::Word;

#[derive(Debug, Error)]
pub enum AnnulusError {
    #[error("periodic curve needs at least two vertices")]
    TooFewVertices,
    #[error("curve is not simple at this resolution (self-intersection near vertex {near})")]
    NotSimple { near: usize },
    #[error("curve and its image intersect; the region construction needs disjointness")]
    Intersecting,
    #[error("frontier curves are closer than the tolerance; region is inconclusive here")]
    ThinRegion,
    #[error("a frontier curve failed the simplicity check; refusing the tainted data")]
    Tainted,
    #[error("frontier data is not monotone in y; refusing the fiberwise conjugacy")]
    NotMonotone,
    #[error("commutator is not a nonzero Deck power; the search precondition fails")]
    BadCommutator,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Sign of the cross product (b - a) x (c - a), with an inconclusive band
/// for float inputs.
fn orient(a: &Point2, b: &Point2, c: &Point2, tol: f64) -> Option<i8> {
    let ux = &b.x - &a.x;
    let uy = &b.y - &a.y;
    let vx = &c.x - &a.x;
    let vy = &c.y - &a.y;
    let cross = &ux * &vy - &uy * &vx;
    if cross.is_exact() {
        let r = cross.as_exact().unwrap();
        Some(if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        })
    } else {
        let v = cross.to_f64();
        if v == 0.0 {
            Some(0) // exactly collinear in float representation
        } else if v.abs() <= tol {
            None // too close to call
        } else {
            Some(if v > 0.0 { 1 } else { -1 })
        }
    }
}

fn on_segment_box(p: &Point2, a: &Point2, b: &Point2) -> bool {
    let (xmin, xmax) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ymin, ymax) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xmin <= p.x && p.x <= *xmax && *ymin <= p.y && p.y <= *ymax
}

/// Three-valued segment intersection test.
fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2, tol: f64) -> Option<bool> {
    let bb = |p: &Point2, q: &Point2, r: &Point2, s: &Point2| {
        let pq_max = if p.x >= q.x { &p.x } else { &q.x };
        let pq_min = if p.x <= q.x { &p.x } else { &q.x };
        let rs_max = if r.x >= s.x { &r.x } else { &s.x };
        let rs_min = if r.x <= s.x { &r.x } else { &s.x };
        pq_max >= rs_min && rs_max >= pq_min
    };
    // Bounding-box prefilter, in both coordinates.
    if !bb(a, b, c, d) {
        return Some(false);
    }
    let flip = |p: &Point2| Point2::new(p.y.clone(), p.x.clone());
    if !bb(&flip(a), &flip(b), &flip(c), &flip(d)) {
        return Some(false);
    }
    let o1 = orient(a, b, c, tol)?;
    let o2 = orient(a, b, d, tol)?;
    let o3 = orient(c, d, a, tol)?;
    let o4 = orient(c, d, b, tol)?;
    if o1 != o2 && o3 != o4 {
        return Some(true);
    }
    if o1 == 0 && on_segment_box(c, a, b) {
        return Some(true);
    }
    if o2 == 0 && on_segment_box(d, a, b) {
        return Some(true);
    }
    if o3 == 0 && on_segment_box(a, c, d) {
        return Some(true);
    }
    if o4 == 0 && on_segment_box(b, c, d) {
        return Some(true);
    }
    Some(false)
}

fn segment_distance_f64(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> f64 {
    fn point_seg(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
        let (px, py) = p;
        let (ax, ay) = a;
        let (bx, by) = b;
        let dx = bx - ax;
        let dy = by - ay;
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 { 0.0 } else { ((px - ax) * dx + (py - ay) * dy) / len2 };
        let t = t.clamp(0.0, 1.0);
        let qx = ax + t * dx;
        let qy = ay + t * dy;
        ((px - qx).powi(2) + (py - qy).powi(2)).sqrt()
    }
    let fa = (a.x.to_f64(), a.y.to_f64());
    let fb = (b.x.to_f64(), b.y.to_f64());
    let fc = (c.x.to_f64(), c.y.to_f64());
    let fd = (d.x.to_f64(), d.y.to_f64());
    point_seg(fa, fc, fd)
        .min(point_seg(fb, fc, fd))
        .min(point_seg(fc, fa, fb))
        .min(point_seg(fd, fa, fb))
}

fn seg_box(seg: ((f64, f64), (f64, f64))) -> [f64; 4] {
    let ((ax, ay), (bx, by)) = seg;
    [ax.min(bx), ax.max(bx), ay.min(by), ay.max(by)]
}

fn boxes_touch(a: &[f64; 4], b: &[f64; 4], margin: f64) -> bool {
    a[0] <= b[1] + margin && b[0] <= a[1] + margin && a[2] <= b[3] + margin && b[2] <= a[3] + margin
}

/// An essential circle in the annulus: one period of a winding-one
/// polyline on the universal cover. The closing vertex `first + (1, 0)`
/// is implicit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicCurve {
    vertices: Vec<Point2>,
    /// Whether the polyline passed the simplicity check; images of deep
    /// iterates may fold beyond the resolution and come back tainted.
    /// Verdict-bearing operations refuse tainted curves.
    simple: bool,
    #[serde(skip)]
    cache: CurveCache,
}

/// Float mirror of the vertex data for prefilters and gap estimates.
#[derive(Clone, Debug, Default)]
struct CurveCache {
    verts: Vec<(f64, f64)>,
    x_min: f64,
    x_max: f64,
}

impl CurveCache {
    fn build(vertices: &[Point2]) -> CurveCache {
        let verts: Vec<(f64, f64)> = vertices.iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
        let mut x_min = f64::MAX;
        let mut x_max = f64::MIN;
        for &(x, _) in &verts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
        // The implicit closing vertex.
        x_min = x_min.min(verts[0].0 + 1.0);
        x_max = x_max.max(verts[0].0 + 1.0);
        CurveCache { verts, x_min, x_max }
    }

    /// Segments in f64, including the closing one, shifted by k.
    fn segments(&self, k: f64) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        let n = self.verts.len();
        (0..n).map(move |i| {
            let a = self.verts[i];
            let b = if i + 1 < n { self.verts[i + 1] } else { (self.verts[0].0 + 1.0, self.verts[0].1) };
            ((a.0 + k, a.1), (b.0 + k, b.1))
        })
    }

    /// Height of the (graph-like near x) curve at x: first segment whose
    /// x-span covers x, over the shifts needed.
    fn height_at(&self, x: f64) -> Option<f64> {
        let lo = (x - self.x_max).floor() as i64 - 1;
        let hi = (x - self.x_min).ceil() as i64 + 1;
        for k in lo..=hi {
            for (a, b) in self.segments(k as f64) {
                let covers = (a.0 <= x && x < b.0) || (b.0 <= x && x < a.0);
                if covers {
                    let t = (x - a.0) / (b.0 - a.0);
                    return Some(a.1 + t * (b.1 - a.1));
                }
            }
        }
        None
    }
}

fn seg_construct(vertices: Vec<Point2>) -> PeriodicCurve {
    let cache = CurveCache::build(&vertices);
    PeriodicCurve { vertices, simple: true, cache }
}

impl PeriodicCurve {
    /// Build and check simplicity against the curve's own unit shifts.
    pub fn new(vertices: Vec<Point2>, tol: f64) -> Result<PeriodicCurve, AnnulusError> {
        if vertices.len() < 2 {
            return Err(AnnulusError::TooFewVertices);
        }
        let curve = seg_construct(vertices);
        if let Some(near) = curve.self_intersection(tol) {
            return Err(AnnulusError::NotSimple { near });
        }
        Ok(curve)
    }

    /// The horizontal line `y = c`, sampled at `resolution` vertices.
    pub fn horizontal(c: Scalar, resolution: usize) -> PeriodicCurve {
        let vertices = (0..resolution)
            .map(|i| Point2::new(Scalar::ratio(i as i64, resolution as i64), c.clone()))
            .collect();
        seg_construct(vertices)
    }

    /// The x-axis at the given resolution.
    pub fn x_axis(resolution: usize) -> PeriodicCurve {
        PeriodicCurve::horizontal(Scalar::zero(), resolution)
    }

    /// Graph of `f: [0,1) -> R` sampled at `resolution` points.
    pub fn graph(f: impl Fn(&Scalar) -> Scalar, resolution: usize) -> PeriodicCurve {
        let vertices = (0..resolution)
            .map(|i| {
                let x = Scalar::ratio(i as i64, resolution as i64);
                let y = f(&x);
                Point2::new(x, y)
            })
            .collect();
        seg_construct(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn resolution(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.vertices
            .iter()
            .fold(ArithmeticMode::Exact, |m, p| m.combine(p.mode()))
    }

    /// Shift by `(k, 0)`.
    pub fn shifted(&self, k: i64) -> PeriodicCurve {
        seg_construct(
            self.vertices.iter().map(|p| p.add(&Scalar::int(k), &Scalar::zero())).collect(),
        )
    }

    /// Segments of one period, including the closing segment.
    pub fn segments(&self) -> Vec<(Point2, Point2)> {
        let mut out = Vec::with_capacity(self.vertices.len());
        for w in self.vertices.windows(2) {
            out.push((w[0].clone(), w[1].clone()));
        }
        let first = &self.vertices[0];
        let last = self.vertices.last().unwrap();
        out.push((last.clone(), first.add(&Scalar::one(), &Scalar::zero())));
        out
    }

    pub fn y_min(&self) -> Scalar {
        self.vertices.iter().map(|p| p.y.clone()).fold(self.vertices[0].y.clone(), Scalar::min)
    }

    pub fn y_max(&self) -> Scalar {
        self.vertices.iter().map(|p| p.y.clone()).fold(self.vertices[0].y.clone(), Scalar::max)
    }

    fn x_min_f64(&self) -> f64 {
        self.cache.x_min
    }

    fn x_max_f64(&self) -> f64 {
        self.cache.x_max
    }

    /// Check one period against itself and its shifts; returns a witness
    /// vertex index on failure. An f64 bounding-box prefilter keeps the
    /// exact tests to the pairs that can actually touch.
    fn self_intersection(&self, tol: f64) -> Option<usize> {
        let segs = self.segments();
        let n = segs.len();
        let boxes: Vec<[f64; 4]> = self.cache.segments(0.0).map(seg_box).collect();
        let max_shift = ((self.x_max_f64() - self.x_min_f64()).ceil() as i64 + 1).max(1);
        let margin = tol.max(1e-12);
        for shift in 0..=max_shift {
            let other: Vec<(Point2, Point2)> =
                if shift == 0 { segs.clone() } else { self.shifted(shift).segments() };
            for i in 0..n {
                for (j, seg) in other.iter().enumerate() {
                    let structural_adjacency = if shift == 0 {
                        i == j || (i + 1) % n == j || (j + 1) % n == i
                    } else {
                        // The closing vertex of one period is the first
                        // vertex of the next.
                        shift == 1 && i == n - 1 && j == 0
                    };
                    if structural_adjacency {
                        continue;
                    }
                    let mut bj = boxes[j];
                    bj[0] += shift as f64;
                    bj[1] += shift as f64;
                    if !boxes_touch(&boxes[i], &bj, margin) {
                        continue;
                    }
                    if segments_intersect(&segs[i].0, &segs[i].1, &seg.0, &seg.1, tol) == Some(true)
                    {
                        return Some(i);
                    }
                }
            }
        }
        None
    }
}

/// Verdict of a curve-pair disjointness test.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DisjointVerdict {
    Disjoint { min_gap: f64 },
    Intersecting { witness: Point2 },
    Inconclusive,
}

impl DisjointVerdict {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, DisjointVerdict::Disjoint { .. })
    }
}

/// Exact (when possible) disjointness of two periodic curves, testing all
/// horizontal shifts the x-extents require. Curves confined to separated
/// height bands are disjoint outright, with the band separation as a
/// lower bound on the gap.
pub fn curves_disjoint(c1: &PeriodicCurve, c2: &PeriodicCurve, tol: f64) -> DisjointVerdict {
    if !c1.simple || !c2.simple {
        return DisjointVerdict::Inconclusive;
    }
    let band_gap = (c2.y_min().to_f64() - c1.y_max().to_f64())
        .max(c1.y_min().to_f64() - c2.y_max().to_f64());
    if band_gap > tol {
        return DisjointVerdict::Disjoint { min_gap: band_gap };
    }

    let segs2 = c2.segments();
    let boxes2: Vec<[f64; 4]> = c2.cache.segments(0.0).map(seg_box).collect();
    let boxes1: Vec<[f64; 4]> = c1.cache.segments(0.0).map(seg_box).collect();
    let shift_lo = (c2.x_min_f64() - c1.x_max_f64()).floor() as i64 - 1;
    let shift_hi = (c2.x_max_f64() - c1.x_min_f64()).ceil() as i64 + 1;
    let margin = tol.max(1e-12);
    let mut min_gap = f64::MAX;
    let mut saw_inconclusive = false;
    for k in shift_lo..=shift_hi {
        let shifted = c1.shifted(k);
        let segs_shifted = shifted.segments();
        for (i, (a, b)) in segs_shifted.iter().enumerate() {
            let mut bi = boxes1[i];
            bi[0] += k as f64;
            bi[1] += k as f64;
            for (j, (c, d)) in segs2.iter().enumerate() {
                if !boxes_touch(&bi, &boxes2[j], margin.max(min_gap.min(1.0))) {
                    // Too far apart to intersect or to improve the gap.
                    let dx = (bi[0] - boxes2[j][1]).max(boxes2[j][0] - bi[1]).max(0.0);
                    let dy = (bi[2] - boxes2[j][3]).max(boxes2[j][2] - bi[3]).max(0.0);
                    min_gap = min_gap.min((dx * dx + dy * dy).sqrt());
                    continue;
                }
                match segments_intersect(a, b, c, d, tol) {
                    Some(true) => {
                        return DisjointVerdict::Intersecting { witness: c.clone() };
                    }
                    Some(false) => {
                        min_gap = min_gap.min(segment_distance_f64(a, b, c, d));
                    }
                    None => saw_inconclusive = true,
                }
            }
        }
    }
    if saw_inconclusive || min_gap <= tol {
        DisjointVerdict::Inconclusive
    } else {
        DisjointVerdict::Disjoint { min_gap }
    }
}

/// Map a curve's vertices and re-close by equivariance. `resample > 0`
/// re-distributes the vertices by arc length (float path). A failed
/// simplicity check taints the result instead of failing: downstream
/// verdict-bearing operations refuse tainted curves.
pub fn image_curve(
    map: &PlaneMap,
    curve: &PeriodicCurve,
    resample: usize,
    tol: f64,
) -> Result<PeriodicCurve, AnnulusError> {
    let mut vertices = Vec::with_capacity(curve.resolution());
    for v in curve.vertices() {
        vertices.push(map.apply(v)?);
    }
    let image = seg_construct(vertices);
    let mut image = if resample > 0 { resample_by_arclength(&image, resample) } else { image };
    image.simple = curve.simple && image.self_intersection(tol).is_none();
    Ok(image)
}

fn resample_by_arclength(curve: &PeriodicCurve, resolution: usize) -> PeriodicCurve {
    let segs = curve.segments();
    let lengths: Vec<f64> = segs.iter().map(|(a, b)| a.dist_f64(b)).collect();
    let total: f64 = lengths.iter().sum();
    let step = total / resolution as f64;
    let mut vertices = Vec::with_capacity(resolution);
    let mut acc = 0.0;
    let mut target = 0.0;
    let mut seg_idx = 0;
    for _ in 0..resolution {
        while seg_idx < segs.len() - 1 && acc + lengths[seg_idx] < target {
            acc += lengths[seg_idx];
            seg_idx += 1;
        }
        let (a, b) = &segs[seg_idx];
        let t = if lengths[seg_idx] == 0.0 { 0.0 } else { (target - acc) / lengths[seg_idx] };
        let t = Scalar::Float(t.clamp(0.0, 1.0));
        vertices.push(Point2::new(
            &a.x + &((&b.x - &a.x) * &t),
            &a.y + &((&b.y - &a.y) * &t),
        ));
        target += step;
    }
    seg_construct(vertices)
}

/// Whether the point lies above the curve: an upward vertical ray from it
/// crosses the periodic curve an even number of times.
pub fn point_above_curve(p: &Point2, curve: &PeriodicCurve) -> bool {
    let (px, py) = (p.x.to_f64(), p.y.to_f64());
    let mut crossings = 0usize;
    let lo = (px - curve.x_max_f64()).floor() as i64 - 1;
    let hi = (px - curve.x_min_f64()).ceil() as i64 + 1;
    for k in lo..=hi {
        for (a, b) in curve.cache.segments(k as f64) {
            // Half-open rule in x to avoid double counts at vertices.
            let counts = (a.0 <= px && px < b.0) || (b.0 <= px && px < a.0);
            if !counts {
                continue;
            }
            let t = (px - a.0) / (b.0 - a.0);
            let y = a.1 + t * (b.1 - a.1);
            if y > py {
                crossings += 1;
            }
        }
    }
    crossings.is_multiple_of(2)
}

/// Whether `upper` lies strictly above `lower` (assumes the curves are
/// disjoint essential circles).
pub fn curve_above(upper: &PeriodicCurve, lower: &PeriodicCurve) -> bool {
    point_above_curve(&upper.vertices()[0], lower)
}

/// Pointwise min of two graph-like curves on a common x-grid: the
/// boundary of the intersection of their below-regions.
pub fn vee_join(c1: &PeriodicCurve, c2: &PeriodicCurve, resolution: usize) -> PeriodicCurve {
    let vertices = (0..resolution)
        .map(|i| {
            let x = Scalar::ratio(i as i64, resolution as i64);
            let xf = x.to_f64();
            let y1 = c1.cache.height_at(xf).unwrap_or(c1.cache.verts[0].1);
            let y2 = c2.cache.height_at(xf).unwrap_or(c2.cache.verts[0].1);
            Point2::new(x, Scalar::Float(y1.min(y2)))
        })
        .collect();
    seg_construct(vertices)
}

/// Per-candidate verdict of the non-intersection test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonIntersectionVerdict {
    pub curve_index: usize,
    pub verdict: DisjointVerdict,
}

/// Apply `curves_disjoint(c, F(c))` to each candidate. One `Disjoint`
/// verdict certifies the non-intersection property at this resolution;
/// all-intersecting is evidence only, reported as such.
pub fn non_intersection_report(
    map: &PlaneMap,
    candidates: &[PeriodicCurve],
    tol: f64,
) -> Result<(Vec<NonIntersectionVerdict>, bool), AnnulusError> {
    let mut verdicts = Vec::new();
    let mut certified = false;
    for (i, c) in candidates.iter().enumerate() {
        let image = image_curve(map, c, 0, tol)?;
        let verdict = curves_disjoint(c, &image, tol);
        certified |= verdict.is_disjoint();
        verdicts.push(NonIntersectionVerdict { curve_index: i, verdict });
    }
    Ok((verdicts, certified))
}

/// The region swept by the iterated images of the x-axis: frontier curves
/// `f^n(x-axis)` for `n` in `[-depth, depth]`.
#[derive(Clone, Debug)]
pub struct RegionU {
    pub depth: i64,
    /// Index `n + depth` holds `f^n(x-axis)`.
    pub curves: Vec<PeriodicCurve>,
    /// Some frontier curve failed the simplicity check at this
    /// resolution.
    pub tainted: bool,
    pub monotone: bool,
    /// Smallest index `n` at which three consecutive upward gaps fell
    /// below the accumulation threshold.
    pub upward_accumulation: Option<i64>,
    pub downward_accumulation: Option<i64>,
    pub accumulation_threshold: f64,
}

impl RegionU {
    pub fn curve(&self, n: i64) -> &PeriodicCurve {
        &self.curves[(n + self.depth) as usize]
    }

    pub fn top(&self) -> &PeriodicCurve {
        self.curves.last().unwrap()
    }

    pub fn bottom(&self) -> &PeriodicCurve {
        &self.curves[0]
    }

    /// Largest height reached by any frontier curve.
    pub fn sup_y(&self) -> Scalar {
        self.curves
            .iter()
            .map(PeriodicCurve::y_max)
            .fold(self.curves[0].y_max(), Scalar::max)
    }

    pub fn inf_y(&self) -> Scalar {
        self.curves
            .iter()
            .map(PeriodicCurve::y_min)
            .fold(self.curves[0].y_min(), Scalar::min)
    }
}

/// Directed vertical gap: the farthest any vertex of `c2` sits from `c1`,
/// measured vertically. Uniform accumulation drives this to zero.
fn sup_vertical_gap(c1: &PeriodicCurve, c2: &PeriodicCurve) -> f64 {
    let mut sup: f64 = 0.0;
    for &(x, y) in &c2.cache.verts {
        if let Some(h) = c1.cache.height_at(x) {
            sup = sup.max((h - y).abs());
        }
    }
    sup
}

/// Options for the region construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionOptions {
    pub depth: i64,
    pub resolution: usize,
    pub tol: f64,
    /// Gap threshold for flagging accumulation; gaps of the catalog
    /// profile near its invariant line are around 1e-5 at depth 200.
    pub accumulation_threshold: f64,
}

impl Default for RegionOptions {
    fn default() -> RegionOptions {
        RegionOptions { depth: 50, resolution: 256, tol: 1e-7, accumulation_threshold: 1e-4 }
    }
}

/// Build the region: iterate the x-axis both ways, checking consecutive
/// disjointness, monotone ordering, and accumulation.
pub fn build_region(map: &PlaneMap, options: &RegionOptions) -> Result<RegionU, AnnulusError> {
    let axis = PeriodicCurve::x_axis(options.resolution);
    let image = image_curve(map, &axis, 0, options.tol)?;
    if !curves_disjoint(&axis, &image, options.tol).is_disjoint() {
        return Err(AnnulusError::Intersecting);
    }

    let mut forward = vec![axis.clone()];
    for _ in 0..options.depth {
        let next = image_curve(map, forward.last().unwrap(), 0, options.tol)?;
        forward.push(next);
    }
    let inverse = map.inverse();
    let mut backward = vec![axis.clone()];
    for _ in 0..options.depth {
        let next = image_curve(&inverse, backward.last().unwrap(), 0, options.tol)?;
        backward.push(next);
    }
    let mut curves: Vec<PeriodicCurve> = backward.into_iter().skip(1).rev().collect();
    curves.extend(forward);

    let tainted = curves.iter().any(|c| !c.is_simple());

    // Consecutive disjointness plus a fixed ordering direction gives
    // pairwise disjointness: disjoint essential circles are linearly
    // ordered on the annulus. Tainted curves cannot be certified.
    let mut monotone = !tainted;
    if monotone {
        let upward =
            curve_above(&curves[options.depth as usize + 1], &curves[options.depth as usize]);
        for w in curves.windows(2) {
            if !curves_disjoint(&w[0], &w[1], options.tol).is_disjoint() {
                monotone = false;
                break;
            }
            if curve_above(&w[1], &w[0]) != upward {
                monotone = false;
                break;
            }
        }
    }

    let gap_at = |i: usize| sup_vertical_gap(&curves[i], &curves[i + 1]);
    let mut upward_accumulation = None;
    let mut downward_accumulation = None;
    let mid = options.depth as usize;
    let mut consecutive = 0;
    for i in mid..curves.len() - 1 {
        if gap_at(i) < options.accumulation_threshold {
            consecutive += 1;
            if consecutive >= 3 {
                upward_accumulation = Some(i as i64 - options.depth);
                break;
            }
        } else {
            consecutive = 0;
        }
    }
    consecutive = 0;
    for i in (0..mid).rev() {
        if gap_at(i) < options.accumulation_threshold {
            consecutive += 1;
            if consecutive >= 3 {
                downward_accumulation = Some(i as i64 - options.depth);
                break;
            }
        } else {
            consecutive = 0;
        }
    }

    Ok(RegionU {
        depth: options.depth,
        curves,
        tainted,
        monotone,
        upward_accumulation,
        downward_accumulation,
        accumulation_threshold: options.accumulation_threshold,
    })
}

/// The trichotomy of how `g` moves the region, sampled at the frontier
/// band. `X` is the region above the band, `Y` below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CaseVerdict {
    Case1Contained,
    Case2Disjoint,
    /// The g-image of the x-axis meets X and the band (or the band and Y).
    Case3aXu,
    /// It meets X, the band, and Y.
    Case3bXuy,
    Inconclusive {
        regions_met: Vec<String>,
        case1_candidate: bool,
    },
}

/// Classify how `g(x-axis)` sits against the region band of `f`.
pub fn classify_case(
    region: &RegionU,
    g: &PlaneMap,
    resolution: usize,
    tol: f64,
) -> Result<CaseVerdict, AnnulusError> {
    let axis = PeriodicCurve::x_axis(resolution);
    let g_axis = image_curve(g, &axis, 0, tol)?;
    let top = region.top();
    let bottom = region.bottom();

    let mut meets_x = false;
    let mut meets_u = false;
    let mut meets_y = false;
    for v in g_axis.vertices() {
        let above_top = point_above_curve(v, top);
        let above_bottom = point_above_curve(v, bottom);
        match (above_top, above_bottom) {
            (true, true) => meets_x = true,
            (false, true) => meets_u = true,
            (false, false) => meets_y = true,
            (true, false) => meets_u = true, // inverted band orientation
        }
    }

    let mut regions = Vec::new();
    if meets_x {
        regions.push("X".to_string());
    }
    if meets_u {
        regions.push("U".to_string());
    }
    if meets_y {
        regions.push("Y".to_string());
    }

    let verdict = match (meets_x, meets_u, meets_y) {
        (true, false, false) | (false, false, true) => CaseVerdict::Case2Disjoint,
        (true, false, true) => {
            // Skips the band entirely while meeting both sides: degenerate
            // at this resolution.
            CaseVerdict::Inconclusive { regions_met: regions, case1_candidate: false }
        }
        (true, true, false) | (false, true, true) => CaseVerdict::Case3aXu,
        (true, true, true) => CaseVerdict::Case3bXuy,
        (false, true, false) => {
            // Entirely inside the band: containment candidate. Check the
            // band of g(U) against the band of U.
            let g_top = image_curve(g, top, 0, tol)?;
            let g_bottom = image_curve(g, bottom, 0, tol)?;
            let g_sup = g_top.y_max().max(g_bottom.y_max());
            let g_inf = g_top.y_min().min(g_bottom.y_min());
            let strictly_contains = g_sup.to_f64() > region.sup_y().to_f64() + tol
                && g_inf.to_f64() < region.inf_y().to_f64() - tol;
            if strictly_contains {
                CaseVerdict::Case1Contained
            } else {
                CaseVerdict::Inconclusive { regions_met: regions, case1_candidate: true }
            }
        }
        (false, false, false) => {
            CaseVerdict::Inconclusive { regions_met: regions, case1_candidate: false }
        }
    };
    Ok(verdict)
}

/// Orientation of a crossing of the region band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingOrientation {
    Upward,
    Downward,
}

/// A maximal subarc of a curve from one frontier of the band to the
/// other.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub component_id: usize,
    pub orientation: CrossingOrientation,
    /// Parameter interval along the curve, in units of vertex index.
    pub parameter_interval: (f64, f64),
}

/// Find the crossings of a curve through the band between the region's
/// bottom and top frontier curves, with orientations. Crossings are
/// grouped by the maximal in-band subarcs of the curve (the component
/// bookkeeping of the overlap at polyline resolution).
pub fn crossings_with_orientation(
    curve: &PeriodicCurve,
    region: &RegionU,
    tol: f64,
) -> Result<Vec<CrossingRecord>, AnnulusError> {
    let top = region.top();
    let bottom = region.bottom();
    if !top.is_simple() || !bottom.is_simple() {
        return Err(AnnulusError::Tainted);
    }
    if sup_vertical_gap(bottom, top) < tol {
        return Err(AnnulusError::ThinRegion);
    }

    // Position of each vertex: above band (+1), inside (0), below (-1).
    let n = curve.resolution();
    let pos: Vec<i8> = curve
        .vertices()
        .iter()
        .map(|v| {
            let above_top = point_above_curve(v, top);
            let above_bottom = point_above_curve(v, bottom);
            match (above_top, above_bottom) {
                (true, _) => 1,
                (false, true) => 0,
                (false, false) => -1,
            }
        })
        .collect();

    // Walk the cyclic vertex sequence: a crossing is a transit from -1 to
    // +1 (upward) or +1 to -1 (downward) through a run of 0s (or
    // directly).
    // Each crossing is its own maximal in-band transit arc, so arcs and
    // component ids coincide and are numbered in recorded order.
    let mut records = Vec::new();
    let mut last_side: Option<i8> = None;
    let mut entered_band_at: Option<usize> = None;
    for step in 0..2 * n {
        let i = step % n;
        match pos[i] {
            0 => {
                if entered_band_at.is_none() {
                    entered_band_at = Some(step);
                }
            }
            side => {
                if let Some(prev_side) = last_side {
                    if prev_side != side && step >= n {
                        // Record only on the second lap so every crossing
                        // is seen exactly once with full context.
                        let t1 = entered_band_at.unwrap_or(step.saturating_sub(1)) as f64;
                        let t2 = step as f64;
                        records.push(CrossingRecord {
                            component_id: records.len(),
                            orientation: if side > 0 {
                                CrossingOrientation::Upward
                            } else {
                                CrossingOrientation::Downward
                            },
                            parameter_interval: (t1 % n as f64, t2 % n as f64),
                        });
                    }
                }
                last_side = Some(side);
                entered_band_at = None;
            }
        }
        if step >= n && records.len() >= n {
            break;
        }
    }
    Ok(records)
}

/// Count transversal hits of `curve` on the region frontiers by brute
/// segment intersection: the oracle for crossing counts.
pub fn frontier_hit_counts(curve: &PeriodicCurve, region: &RegionU, tol: f64) -> (usize, usize) {
    let count_hits = |frontier: &PeriodicCurve| -> usize {
        let mut hits = 0;
        let shift_lo = (curve.x_min_f64() - frontier.x_max_f64()).floor() as i64 - 1;
        let shift_hi = (curve.x_max_f64() - frontier.x_min_f64()).ceil() as i64 + 1;
        for (a, b) in curve.segments() {
            for k in shift_lo..=shift_hi {
                for (c, d) in frontier.shifted(k).segments() {
                    if segments_intersect(&a, &b, &c, &d, tol) == Some(true) {
                        hits += 1;
                    }
                }
            }
        }
        hits
    };
    (count_hits(region.bottom()), count_hits(region.top()))
}

/// Options for the translation-like element search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOptions {
    pub word_bound: i64,
    pub iter_bound: i64,
    pub escape_y: f64,
    pub resolution: usize,
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions { word_bound: 1, iter_bound: 8, escape_y: 3.0, resolution: 128, tol: 1e-7 }
    }
}

/// Why a candidate word was rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub word: Word,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Accepted word `f^a g^b`, if any.
    pub element: Option<Word>,
    pub rejected: Vec<RejectedCandidate>,
}

/// Search for a translation-like element among `f^a g^b` (plus any extra
/// words): the word must move the x-axis strictly upward off itself, with
/// iterated images pairwise disjoint, monotonically ordered, and escaping
/// `[-escape_y, escape_y]` in both directions. Words are enumerated by
/// `(|a| + |b|, a, b)`; the whole weight shell of the first acceptance is
/// evaluated so the outcome lists every smaller rejection.
pub fn find_translation_like(
    f: &PlaneMap,
    g: &PlaneMap,
    extra_words: &[Word],
    options: &SearchOptions,
) -> Result<SearchOutcome, AnnulusError> {
    // Precondition: [f, g] is a nonzero Deck power.
    let deck = DeckGroup::abelian(vec![PlaneMap::deck_h0()]);
    match commutator_deck_element(f, g, &deck, 4, 40, options.tol)? {
        DeckMatch::Deck { .. } => {}
        _ => return Err(AnnulusError::BadCommutator),
    }

    let mut candidates: Vec<(i64, i64)> = Vec::new();
    for a in -options.word_bound..=options.word_bound {
        for b in -options.word_bound..=options.word_bound {
            if (a, b) != (0, 0) {
                candidates.push((a, b));
            }
        }
    }
    candidates.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a, b));

    let mut words: Vec<Word> = candidates
        .iter()
        .map(|&(a, b)| Word::gen(0, a).concat(&Word::gen(1, b)))
        .collect();
    words.extend_from_slice(extra_words);

    let mut rejected = Vec::new();
    let mut element = None;
    let mut accepted_weight: Option<u64> = None;
    for word in words {
        if let Some(weight) = accepted_weight {
            if word.length() > weight {
                break;
            }
        }
        let map = crate::maps::word_to_map(&[f.clone(), g.clone()], &word);
        match check_translation_like(&map, options) {
            Ok(()) => {
                if element.is_none() {
                    accepted_weight = Some(word.length());
                    element = Some(word);
                }
            }
            Err(reason) => rejected.push(RejectedCandidate { word, reason }),
        }
    }
    Ok(SearchOutcome { element, rejected })
}

fn check_translation_like(map: &PlaneMap, options: &SearchOptions) -> Result<(), String> {
    let axis = PeriodicCurve::x_axis(options.resolution);
    let image = image_curve(map, &axis, 0, options.tol).map_err(|e| e.to_string())?;
    if !curves_disjoint(&axis, &image, options.tol).is_disjoint() {
        return Err("image of the x-axis meets the x-axis".into());
    }
    if !curve_above(&image, &axis) {
        return Err("moves the x-axis downward; the upward normalization rejects it".into());
    }

    // Witness-orbit escape: a translation-like element sweeps every orbit
    // off to both ends, so a single sampled orbit with bounded height
    // refutes it. The rational grid picks up invariant rays like the one
    // pinned at height 1/2 by the skewed catalog twist.
    let budget = (options.iter_bound * 8).max(32);
    for i in 0..8i64 {
        for j in -16..=16i64 {
            let start = Point2::new(Scalar::ratio(i, 8), Scalar::ratio(j, 8));
            let mut p = start.clone();
            let mut escaped_up = false;
            for _ in 0..budget {
                if p.y.to_f64() > options.escape_y {
                    escaped_up = true;
                    break;
                }
                p = map.apply(&p).map_err(|e| e.to_string())?;
            }
            if !escaped_up && p.y.to_f64() <= options.escape_y {
                return Err(format!(
                    "orbit of sample ({}, {}) fails to escape: y stays <= {} for {budget} iterates",
                    start.x,
                    start.y,
                    p.y.to_f64().max(start.y.to_f64())
                ));
            }
            let inverse = map.inverse();
            let mut q = start.clone();
            let mut escaped_down = false;
            for _ in 0..budget {
                if q.y.to_f64() < -options.escape_y {
                    escaped_down = true;
                    break;
                }
                q = inverse.apply(&q).map_err(|e| e.to_string())?;
            }
            if !escaped_down {
                return Err(format!(
                    "backward orbit of sample ({}, {}) fails to escape downward",
                    start.x, start.y
                ));
            }
        }
    }
    let region = build_region(
        map,
        &RegionOptions {
            depth: options.iter_bound,
            resolution: options.resolution,
            tol: options.tol,
            accumulation_threshold: 0.0, // not used for acceptance
        },
    )
    .map_err(|e| e.to_string())?;
    // Escape is raw y-extent data, meaningful even for folded iterates.
    let top_min = region.top().y_min().to_f64();
    let bottom_max = region.bottom().y_max().to_f64();
    if top_min <= options.escape_y {
        return Err(format!(
            "forward images fail to escape: min height {top_min} after {} iterates",
            options.iter_bound
        ));
    }
    if bottom_max >= -options.escape_y {
        return Err(format!(
            "backward images fail to escape: max height {bottom_max} after {} iterates",
            options.iter_bound
        ));
    }
    if !region.monotone {
        return Err("iterated images are not certifiably disjoint and monotone".into());
    }
    Ok(())
}

/// The piecewise-fiberwise conjugacy sending the n-th iterate of the
/// x-axis to the line `y = n`, linear between consecutive frontier
/// curves.
#[derive(Clone, Debug)]
pub struct VerticalConjugacy {
    pub region: RegionU,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugacyReport {
    /// max |vertical part of (Phi e Phi^-1) - g0| over the sampled band.
    pub vertical_residual: f64,
    /// max horizontal drift |x(e(p)) - x(p)| over the samples; conjugacy
    /// through maps commuting with the Deck translation allows it.
    pub horizontal_drift: f64,
    pub samples: usize,
}

impl VerticalConjugacy {
    /// `Phi(x, y)`: the band coordinate: n + position between curve n and
    /// curve n+1 at x.
    pub fn apply(&self, p: &Point2) -> Option<Point2> {
        let heights: Vec<f64> = (0..self.region.curves.len())
            .map(|i| curve_height_at(&self.region.curves[i], &p.x))
            .collect();
        let y = p.y.to_f64();
        for i in 0..heights.len() - 1 {
            let (lo, hi) = (heights[i], heights[i + 1]);
            if lo <= y && y <= hi {
                let n = i as i64 - self.region.depth;
                let t = if hi > lo { (y - lo) / (hi - lo) } else { 0.0 };
                return Some(Point2::new(p.x.clone(), Scalar::Float(n as f64 + t)));
            }
        }
        None
    }
}

fn curve_height_at(curve: &PeriodicCurve, x: &Scalar) -> f64 {
    curve.cache.height_at(x.to_f64()).unwrap_or(curve.cache.verts[0].1)
}

/// Build the fiberwise conjugacy for an accepted element and report the
/// residual `max |Phi e Phi^-1 - g0|` on samples within the band.
pub fn build_vertical_conjugacy(
    element: &PlaneMap,
    options: &RegionOptions,
) -> Result<(VerticalConjugacy, ConjugacyReport), AnnulusError> {
    let region = build_region(element, options)?;
    if !region.monotone {
        return Err(AnnulusError::NotMonotone);
    }
    let conjugacy = VerticalConjugacy { region };

    let mut vertical_residual = 0.0f64;
    let mut horizontal_drift = 0.0f64;
    let mut samples = 0usize;
    // Sample inside the band spanned by the inner frontier curves.
    let inner = conjugacy.region.depth - 1;
    for i in 0..24 {
        let x = Scalar::ratio(i, 24);
        for n in -inner..inner {
            let lo = curve_height_at(conjugacy.region.curve(n), &x);
            let hi = curve_height_at(conjugacy.region.curve(n + 1), &x);
            for t in [0.25, 0.5, 0.75] {
                let p = Point2::new(x.clone(), Scalar::Float(lo + t * (hi - lo)));
                let ep = match element.apply(&p) {
                    Ok(q) => q,
                    Err(_) => continue,
                };
                let (Some(phi_p), Some(phi_ep)) = (conjugacy.apply(&p), conjugacy.apply(&ep))
                else {
                    continue;
                };
                let dv = (phi_ep.y.to_f64() - phi_p.y.to_f64() - 1.0).abs();
                let dh = (ep.x.to_f64() - p.x.to_f64()).abs();
                vertical_residual = vertical_residual.max(dv);
                horizontal_drift = horizontal_drift.max(dh);
                samples += 1;
            }
        }
    }
    Ok((conjugacy, ConjugacyReport { vertical_residual, horizontal_drift, samples }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{map_f0, map_g0, map_h0, sin_profile_generator, sin_skew_generator};

    const TOL: f64 = 1e-7;

    #[test]
    fn horizontal_lines_disjoint() {
        let c0 = PeriodicCurve::x_axis(16);
        let c1 = PeriodicCurve::horizontal(Scalar::one(), 16);
        match curves_disjoint(&c0, &c1, TOL) {
            DisjointVerdict::Disjoint { min_gap } => assert!((min_gap - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        // Set-equal curves intersect.
        let shifted = image_curve(&map_h0(), &c0, 0, TOL).unwrap();
        assert!(matches!(curves_disjoint(&c0, &shifted, TOL), DisjointVerdict::Intersecting { .. }));
    }

    #[test]
    fn sine_crosses_axis() {
        let sine = PeriodicCurve::graph(
            |x| Scalar::Float((2.0 * std::f64::consts::PI * x.to_f64()).sin()),
            64,
        );
        let axis = PeriodicCurve::x_axis(64);
        assert!(matches!(curves_disjoint(&axis, &sine, TOL), DisjointVerdict::Intersecting { .. }));
    }

    #[test]
    fn disjointness_is_symmetric_and_shift_invariant() {
        let c1 = PeriodicCurve::graph(|x| Scalar::Float(0.2 * (2.0 * std::f64::consts::PI * x.to_f64()).sin()), 48);
        let c2 = PeriodicCurve::horizontal(Scalar::one(), 48);
        let v12 = curves_disjoint(&c1, &c2, TOL).is_disjoint();
        let v21 = curves_disjoint(&c2, &c1, TOL).is_disjoint();
        let v_shift = curves_disjoint(&c1.shifted(3), &c2, TOL).is_disjoint();
        assert!(v12 && v21 && v_shift);
    }

    #[test]
    fn image_of_axis_under_g0_is_line_one() {
        let axis = PeriodicCurve::x_axis(32);
        let image = image_curve(&map_g0(), &axis, 0, TOL).unwrap();
        assert_eq!(image.y_min(), Scalar::one());
        assert_eq!(image.y_max(), Scalar::one());
    }

    #[test]
    fn f0_preserves_horizontals_setwise() {
        let line = PeriodicCurve::horizontal(Scalar::ratio(1, 2), 32);
        let image = image_curve(&map_f0(), &line, 0, TOL).unwrap();
        assert_eq!(image.y_min(), Scalar::ratio(1, 2));
        assert_eq!(image.y_max(), Scalar::ratio(1, 2));
        // Same set: the image meets the original line.
        assert!(matches!(curves_disjoint(&line, &image, TOL), DisjointVerdict::Intersecting { .. }));
    }

    #[test]
    fn sin_profile_image_of_axis() {
        let f = sin_profile_generator();
        let axis = PeriodicCurve::x_axis(128);
        let image = image_curve(&f, &axis, 0, TOL).unwrap();
        // The whole axis maps to the level l(0) = 1/4.
        assert_eq!(image.y_min(), Scalar::ratio(1, 4));
        assert_eq!(image.y_max(), Scalar::ratio(1, 4));
        assert!(curves_disjoint(&axis, &image, TOL).is_disjoint());
    }

    #[test]
    fn non_intersection_certificates() {
        let axis = PeriodicCurve::x_axis(64);
        let (_, certified) = non_intersection_report(&map_g0(), &[axis.clone()], TOL).unwrap();
        assert!(certified);
        let (verdicts, certified) = non_intersection_report(&map_h0(), &[axis.clone()], TOL).unwrap();
        assert!(!certified);
        assert!(matches!(verdicts[0].verdict, DisjointVerdict::Intersecting { .. }));
        // Power law: f and f^2 both certify on the axis.
        let f = sin_profile_generator();
        let f2 = PlaneMap::compose(vec![f.clone(), f.clone()]);
        for map in [f, f2] {
            let (_, ok) = non_intersection_report(&map, &[axis.clone()], TOL).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn region_of_g0_has_unit_lines() {
        let region = build_region(
            &map_g0(),
            &RegionOptions { depth: 5, resolution: 32, ..Default::default() },
        )
        .unwrap();
        assert!(region.monotone);
        assert!(region.upward_accumulation.is_none());
        assert!(region.downward_accumulation.is_none());
        for n in -5..=5 {
            assert_eq!(region.curve(n).y_min(), Scalar::int(n));
        }
    }

    #[test]
    fn region_of_f0_fails_precondition() {
        let err = build_region(&map_f0(), &RegionOptions::default());
        assert!(matches!(err, Err(AnnulusError::Intersecting)));
    }

    #[test]
    fn sin_profile_region_accumulates_below_half() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 200, resolution: 512, ..Default::default() },
        )
        .unwrap();
        assert!(region.monotone);
        assert!(region.upward_accumulation.is_some());
        let sup = region.sup_y();
        assert!(sup < Scalar::ratio(1, 2), "sup {} is strictly below 1/2", sup.to_f64());
        // Downward accumulation towards -1/2 as well.
        assert!(region.downward_accumulation.is_some());
        assert!(region.inf_y() > Scalar::ratio(-1, 2));
    }

    #[test]
    fn sin_skew_region_reports_no_accumulation() {
        let region = build_region(
            &sin_skew_generator(),
            &RegionOptions { depth: 40, resolution: 512, ..Default::default() },
        )
        .unwrap();
        assert!(region.upward_accumulation.is_none(), "no accumulation detected up to depth");
    }

    #[test]
    fn classify_sin_profile_with_g0() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 60, resolution: 128, ..Default::default() },
        )
        .unwrap();
        let verdict = classify_case(&region, &map_g0(), 128, TOL).unwrap();
        assert_eq!(verdict, CaseVerdict::Case2Disjoint);
    }

    #[test]
    fn classify_inside_band_is_case1_candidate() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 60, resolution: 128, ..Default::default() },
        )
        .unwrap();
        let tiny = PlaneMap::translate(Scalar::zero(), Scalar::ratio(1, 10));
        let verdict = classify_case(&region, &tiny, 128, TOL).unwrap();
        match verdict {
            CaseVerdict::Inconclusive { regions_met, case1_candidate } => {
                assert_eq!(regions_met, vec!["U".to_string()]);
                assert!(case1_candidate);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_expanding_map_is_case1() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 60, resolution: 128, ..Default::default() },
        )
        .unwrap();
        let expand = PlaneMap::VerticalScale { scale: Scalar::int(3) };
        let verdict = classify_case(&region, &expand, 128, TOL).unwrap();
        assert_eq!(verdict, CaseVerdict::Case1Contained);
    }

    #[test]
    fn classify_steep_sine_is_case3b() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 60, resolution: 128, ..Default::default() },
        )
        .unwrap();
        // A vertical wave of amplitude above the band sends the x-axis
        // across every frontier curve: it meets X, the band, and Y.
        let steep = PlaneMap::compose(vec![
            PlaneMap::translate(Scalar::zero(), Scalar::int(-2)),
            PlaneMap::VerticalWave {
                wave: crate::maps::Wave::new(Scalar::int(2), 1, Scalar::zero()).unwrap(),
            },
        ]);
        let verdict = classify_case(&region, &steep, 256, TOL).unwrap();
        assert_eq!(verdict, CaseVerdict::Case3bXuy);

        // The same curve crosses the band twice with alternating
        // orientations; the brute-force oracle agrees.
        let axis = PeriodicCurve::x_axis(256);
        let steep_axis = image_curve(&steep, &axis, 0, TOL).unwrap();
        let crossings = crossings_with_orientation(&steep_axis, &region, TOL).unwrap();
        assert_eq!(crossings.len(), 2);
        assert_ne!(crossings[0].orientation, crossings[1].orientation);
        let (bottom_hits, top_hits) = frontier_hit_counts(&steep_axis, &region, TOL);
        assert_eq!(bottom_hits, 2);
        assert_eq!(top_hits, 2);
    }

    #[test]
    fn crossings_inside_band_are_empty() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 30, resolution: 128, ..Default::default() },
        )
        .unwrap();
        let inside = PeriodicCurve::horizontal(Scalar::ratio(1, 5), 64);
        let crossings = crossings_with_orientation(&inside, &region, TOL).unwrap();
        assert!(crossings.is_empty());
    }

    #[test]
    fn four_crossings_alternate() {
        let region = build_region(
            &sin_profile_generator(),
            &RegionOptions { depth: 30, resolution: 256, ..Default::default() },
        )
        .unwrap();
        let wavy = PeriodicCurve::graph(
            |x| Scalar::Float(2.0 * (4.0 * std::f64::consts::PI * x.to_f64()).sin()),
            512,
        );
        let crossings = crossings_with_orientation(&wavy, &region, TOL).unwrap();
        assert_eq!(crossings.len(), 4);
        for w in crossings.windows(2) {
            assert_ne!(w[0].orientation, w[1].orientation, "orientations alternate");
        }
        let (bottom_hits, top_hits) = frontier_hit_counts(&wavy, &region, TOL);
        assert_eq!(bottom_hits, 4);
        assert_eq!(top_hits, 4);
    }

    #[test]
    fn search_on_basic_pair_returns_g() {
        let outcome = find_translation_like(
            &map_f0(),
            &map_g0(),
            &[],
            &SearchOptions { iter_bound: 5, resolution: 64, ..Default::default() },
        )
        .unwrap();
        assert_eq!(outcome.element, Some(Word::gen(1, 1)));
        // f0 itself was evaluated and rejected: it fixes the x-axis.
        assert!(outcome
            .rejected
            .iter()
            .any(|r| r.word == Word::gen(0, 1) && r.reason.contains("meets the x-axis")));
    }

    #[test]
    fn search_on_sin_profile_rejects_f() {
        let outcome = find_translation_like(
            &sin_profile_generator(),
            &map_g0(),
            &[],
            &SearchOptions { iter_bound: 8, resolution: 128, ..Default::default() },
        )
        .unwrap();
        assert_eq!(outcome.element, Some(Word::gen(1, 1)));
        let f_rejection = outcome.rejected.iter().find(|r| r.word == Word::gen(0, 1)).unwrap();
        assert!(f_rejection.reason.contains("fails to escape"));
    }

    #[test]
    fn search_on_sin_skew_rejects_f_via_pinned_ray() {
        let outcome = find_translation_like(
            &sin_skew_generator(),
            &map_g0(),
            &[],
            &SearchOptions { iter_bound: 8, resolution: 128, ..Default::default() },
        )
        .unwrap();
        assert_eq!(outcome.element, Some(Word::gen(1, 1)));
        // The axis image contains a point pinned at height 1/2 forever, so
        // f's images never escape upward.
        let f_rejection = outcome.rejected.iter().find(|r| r.word == Word::gen(0, 1)).unwrap();
        assert!(f_rejection.reason.contains("fails to escape"), "{}", f_rejection.reason);
    }

    #[test]
    fn vertical_conjugacy_of_g0_is_exact() {
        let (_, report) = build_vertical_conjugacy(
            &map_g0(),
            &RegionOptions { depth: 4, resolution: 32, ..Default::default() },
        )
        .unwrap();
        assert_eq!(report.vertical_residual, 0.0);
        assert_eq!(report.horizontal_drift, 0.0);
    }

    #[test]
    fn vertical_conjugacy_allows_horizontal_drift() {
        let e = PlaneMap::translate(Scalar::ratio(3, 10), Scalar::one());
        let (_, report) = build_vertical_conjugacy(
            &e,
            &RegionOptions { depth: 4, resolution: 32, ..Default::default() },
        )
        .unwrap();
        assert!(report.vertical_residual <= 1e-12);
        assert!((report.horizontal_drift - 0.3).abs() <= 1e-12);
    }

    #[test]
    fn vertical_conjugacy_small_shear_residual() {
        // g0 composed with a small equivariant horizontal wave: vertical
        // part stays within tolerance inside the band.
        let e = PlaneMap::compose(vec![
            map_g0(),
            PlaneMap::HorizontalWave {
                wave: crate::maps::Wave::new(Scalar::ratio(1, 50), 1, Scalar::zero()).unwrap(),
            },
        ]);
        let (_, report) = build_vertical_conjugacy(
            &e,
            &RegionOptions { depth: 4, resolution: 64, ..Default::default() },
        )
        .unwrap();
        assert!(report.vertical_residual <= 10.0 * TOL, "residual {}", report.vertical_residual);
    }

    #[test]
    fn accepted_element_passes_conjugacy() {
        let outcome = find_translation_like(
            &sin_profile_generator(),
            &map_g0(),
            &[],
            &SearchOptions { iter_bound: 6, resolution: 64, ..Default::default() },
        )
        .unwrap();
        let word = outcome.element.unwrap();
        let e = crate::maps::word_to_map(&[sin_profile_generator(), map_g0()], &word);
        let (_, report) = build_vertical_conjugacy(
            &e,
            &RegionOptions { depth: 4, resolution: 64, ..Default::default() },
        )
        .unwrap();
        assert!(report.vertical_residual <= 10.0 * TOL);
    }

    #[test]
    fn arclength_resampling_preserves_the_curve_band() {
        let f = sin_skew_generator();
        let axis = PeriodicCurve::x_axis(96);
        let plain = image_curve(&f, &axis, 0, TOL).unwrap();
        let resampled = image_curve(&f, &axis, 192, TOL).unwrap();
        assert_eq!(resampled.resolution(), 192);
        assert!(resampled.is_simple());
        // Same band up to the sampling error of the coarser polyline.
        assert!((resampled.y_max().to_f64() - plain.y_max().to_f64()).abs() < 0.05);
        assert!((resampled.y_min().to_f64() - plain.y_min().to_f64()).abs() < 0.05);
        // Roughly even spacing by arc length.
        let lengths: Vec<f64> =
            resampled.segments().iter().map(|(a, b)| a.dist_f64(b)).collect();
        let mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
        let spread = lengths.iter().fold(0.0f64, |m, l| m.max((l - mean).abs()));
        assert!(spread <= mean, "spacing within a factor of two of the mean");
    }

    #[test]
    fn vee_join_of_two_graphs() {
        let c1 = PeriodicCurve::horizontal(Scalar::one(), 32);
        let c2 = PeriodicCurve::graph(
            |x| Scalar::Float(1.0 + (2.0 * std::f64::consts::PI * x.to_f64()).sin()),
            32,
        );
        let join = vee_join(&c1, &c2, 64);
        // The join is the pointwise min: never above either curve.
        assert!(join.y_max() <= Scalar::Float(1.0 + 1e-12));
        assert!(join.y_min() >= Scalar::Float(-1e-9));
    }

    #[test]
    fn equivariance_under_shift_reindexing() {
        let f = sin_profile_generator();
        let axis = PeriodicCurve::x_axis(64);
        let image = image_curve(&f, &axis, 0, TOL).unwrap();
        let image_shifted = image_curve(&f, &axis.shifted(2), 0, TOL).unwrap();
        for (a, b) in image.vertices().iter().zip(image_shifted.vertices()) {
            assert_eq!(&a.x + &Scalar::int(2), b.x);
            assert_eq!(a.y, b.y);
        }
    }
}
