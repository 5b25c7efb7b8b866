//! First homology of triangulated surfaces and mean homological
//! translation vectors of tracked maps on flat models.
//!
//! The chain complex is a delta complex: edges are ordered vertex pairs,
//! triangles are signed edge triples, so quotient gluings (one square with
//! identified sides) are representable alongside honest simplicial grids.
//! `H1Basis` computes Betti number, torsion, and an explicit cycle basis
//! from two Smith normal forms, and can express any cycle in that basis.
//!
//! On a flat model surface (torus with chosen y-period, or an annulus
//! band) the crate implements the loop-closing construction: an orbit
//! segment of a tracked map is closed up through simplex centers and a
//! base point, and the class of the resulting polygonal loop is computed
//! by counting its signed crossings with the cut circles. The integer
//! displacement of the lift is carried alongside as an independent oracle.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::{smith_normal_form, IntMatrix};
use crate::maps::{MapError, PlaneMap};
use crate::scalar::{halton_plane, ArithmeticMode, Point2, Scalar};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("edge path is not closed at the base point")]
    NotClosed,
    #[error("point lies outside the model surface band")]
    OutsideModel,
    #[error("lift is not equivariant for the model's deck translations (deviation {deviation})")]
    NotEquivariant { deviation: f64 },
    #[error("basis normalization is not unimodular; model windings are degenerate")]
    BadNormalization,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A finite delta complex of dimension two.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Complex {
    pub vertex_count: usize,
    /// (tail, head)
    pub edges: Vec<(usize, usize)>,
    /// Signed edge triples; `true` is positive orientation.
    pub triangles: Vec<[(usize, bool); 3]>,
}

impl Complex {
    pub fn boundary1(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.vertex_count.max(1), self.edges.len().max(1));
        for (j, &(tail, head)) in self.edges.iter().enumerate() {
            m[(head, j)] += BigInt::from(1);
            m[(tail, j)] -= BigInt::from(1);
        }
        m
    }

    pub fn boundary2(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.edges.len().max(1), self.triangles.len().max(1));
        for (j, tri) in self.triangles.iter().enumerate() {
            for &(e, positive) in tri {
                let delta = if positive { 1 } else { -1 };
                m[(e, j)] += BigInt::from(delta);
            }
        }
        m
    }

    pub fn validate(&self) -> Result<(), HomologyError> {
        for &(t, h) in &self.edges {
            if t >= self.vertex_count || h >= self.vertex_count {
                return Err(HomologyError::InvalidComplex("edge vertex out of range".into()));
            }
        }
        for tri in &self.triangles {
            for &(e, _) in tri {
                if e >= self.edges.len() {
                    return Err(HomologyError::InvalidComplex("triangle edge out of range".into()));
                }
            }
        }
        if !self.triangles.is_empty() && !self.boundary1().mul(&self.boundary2()).is_zero() {
            return Err(HomologyError::InvalidComplex("boundary of boundary is nonzero".into()));
        }
        Ok(())
    }

    /// Fan triangulation of a disk with `k` boundary vertices.
    pub fn disk_fan(k: usize) -> Complex {
        assert!(k >= 3);
        let mut edges = Vec::new();
        for i in 0..k {
            edges.push((0, i + 1)); // spokes
        }
        for i in 0..k {
            edges.push((i + 1, (i + 1) % k + 1)); // ring
        }
        let mut triangles = Vec::new();
        for i in 0..k {
            triangles.push([(i, true), (k + i, true), ((i + 1) % k, false)]);
        }
        Complex { vertex_count: k + 1, edges, triangles }
    }

    /// The classic one-square delta complex of the torus: a single vertex,
    /// edges a, b, and the diagonal c, two triangles.
    pub fn torus_square() -> Complex {
        Complex {
            vertex_count: 1,
            edges: vec![(0, 0), (0, 0), (0, 0)],
            triangles: vec![
                [(0, true), (1, true), (2, false)],
                [(2, true), (0, false), (1, false)],
            ],
        }
    }
}

/// Betti number, torsion, and an explicit cycle basis of first homology.
#[derive(Clone, Debug)]
pub struct H1Basis {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
    /// Basis cycles as integer edge chains.
    pub basis: Vec<Vec<(usize, BigInt)>>,
    edge_count: usize,
    rank1: usize,
    v1_inv: IntMatrix,
    kernel: IntMatrix,
    u2: IntMatrix,
    rank2: usize,
    /// Reported coords = basis_change * raw free coords.
    basis_change: Option<IntMatrix>,
}

impl H1Basis {
    fn empty() -> H1Basis {
        H1Basis {
            betti: 0,
            torsion: vec![],
            basis: vec![],
            edge_count: 0,
            rank1: 0,
            v1_inv: IntMatrix::identity(1),
            kernel: IntMatrix::identity(1),
            u2: IntMatrix::identity(1),
            rank2: 0,
            basis_change: None,
        }
    }

    /// Coordinates of a cycle (integer edge chain) in the basis.
    pub fn express(&self, chain: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        assert_eq!(chain.len(), self.edge_count);
        let mut col = IntMatrix::zeros(self.edge_count.max(1), 1);
        for (i, c) in chain.iter().enumerate() {
            col[(i, 0)] = c.clone();
        }
        let w = self.v1_inv.mul(&col);
        for i in 0..self.rank1 {
            if !w[(i, 0)].is_zero() {
                return Err(HomologyError::NotACycle);
            }
        }
        let k = self.kernel.cols;
        let mut y = IntMatrix::zeros(k.max(1), 1);
        for i in 0..k {
            y[(i, 0)] = w[(self.rank1 + i, 0)].clone();
        }
        let coords = self.u2.mul(&y);
        let mut free: Vec<BigInt> = (self.rank2..k).map(|i| coords[(i, 0)].clone()).collect();
        if let Some(change) = &self.basis_change {
            let mut v = IntMatrix::zeros(self.betti.max(1), 1);
            for (i, c) in free.iter().enumerate() {
                v[(i, 0)] = c.clone();
            }
            let out = change.mul(&v);
            free = (0..self.betti).map(|i| out[(i, 0)].clone()).collect();
        }
        Ok(free)
    }
}

/// Betti number and basis of `H_1` via boundary-matrix Smith forms:
/// `betti = dim ker d1 - rank d2`.
pub fn h1_basis(complex: &Complex) -> Result<H1Basis, HomologyError> {
    complex.validate()?;
    let d1 = complex.boundary1();
    let d2 = complex.boundary2();
    let snf1 = smith_normal_form(&d1);
    let rank1 = snf1.rank();
    let e = complex.edges.len();
    let k = e - rank1;

    // Kernel basis: trailing columns of V1.
    let mut kernel = IntMatrix::zeros(e.max(1), k.max(1));
    for j in 0..k {
        for i in 0..e {
            kernel[(i, j)] = snf1.v[(i, rank1 + j)].clone();
        }
    }

    // Image of d2 in kernel coordinates.
    let w = snf1.v_inv.mul(&d2);
    let t = complex.triangles.len();
    let mut m = IntMatrix::zeros(k.max(1), t.max(1));
    for j in 0..t {
        for i in 0..k {
            m[(i, j)] = w[(rank1 + i, j)].clone();
        }
    }
    if k > 0 {
        for j in 0..t {
            for i in 0..rank1 {
                if !w[(i, j)].is_zero() {
                    return Err(HomologyError::InvalidComplex(
                        "triangle boundary is not a cycle".into(),
                    ));
                }
            }
        }
    }
    let snf2 = smith_normal_form(&m);
    let rank2 = snf2.rank();
    let betti = k - rank2;
    let torsion: Vec<BigInt> = snf2
        .invariant_factors()
        .into_iter()
        .filter(|f| f.abs() > BigInt::from(1))
        .collect();

    // Free basis cycles: kernel * U2^{-1} e_i for the zero diagonal slots.
    let mut basis = Vec::with_capacity(betti);
    for j in rank2..k {
        let mut chain = vec![BigInt::zero(); e];
        for (i, entry) in chain.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for r in 0..k {
                acc += &kernel[(i, r)] * &snf2.u_inv[(r, j)];
            }
            *entry = acc;
        }
        basis.push(chain.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }

    Ok(H1Basis {
        betti,
        torsion,
        basis,
        edge_count: e,
        rank1,
        v1_inv: snf1.v_inv,
        kernel,
        u2: snf2.u,
        rank2,
        basis_change: None,
    })
}

/// Flat model geometry: a torus of x-period one and chosen y-period, or a
/// closed annulus band with the x-direction identified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Torus { y_period: Scalar },
    Annulus { y_min: Scalar, y_max: Scalar },
}

/// Reference to a simplex, smallest-dimension first in point location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "dim", rename_all = "snake_case")]
pub enum SimplexRef {
    Vertex(usize),
    Edge(usize),
    Triangle(usize),
}

/// A triangulated flat model surface with vertex coordinates, built on a
/// grid with diagonals. Grids of at least 3x3 are honest simplicial
/// complexes; smaller grids are delta complexes with the same homology.
#[derive(Clone, Debug)]
pub struct ModelSurface {
    pub kind: ModelKind,
    pub cols: usize,
    pub rows: usize,
    pub complex: Complex,
    pub h1: H1Basis,
    /// Representative model start/end coordinates per edge (unwrapped).
    edge_coords: Vec<(Point2, Point2)>,
    base_vertex: Point2,
}

impl ModelSurface {
    pub fn torus(cols: usize, rows: usize, y_period: Scalar) -> Result<ModelSurface, HomologyError> {
        assert!(cols >= 1 && rows >= 1);
        assert!(y_period > Scalar::zero());
        let n = cols;
        let m = rows;
        let vid = |i: usize, j: usize| (j % m) * n + (i % n);
        let xc = |i: usize| Scalar::ratio(i as i64, n as i64);
        let yc = |j: usize, h: &Scalar| Scalar::ratio(j as i64, m as i64) * h;
        let h = y_period.clone();

        let mut edges = Vec::new();
        let mut edge_coords = Vec::new();
        // horizontal, vertical, diagonal blocks
        for j in 0..m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i + 1, j)));
                edge_coords.push((
                    Point2::new(xc(i), yc(j, &h)),
                    Point2::new(xc(i + 1), yc(j, &h)),
                ));
            }
        }
        for j in 0..m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i, j + 1)));
                edge_coords.push((
                    Point2::new(xc(i), yc(j, &h)),
                    Point2::new(xc(i), yc(j + 1, &h)),
                ));
            }
        }
        for j in 0..m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i + 1, j + 1)));
                edge_coords.push((
                    Point2::new(xc(i), yc(j, &h)),
                    Point2::new(xc(i + 1), yc(j + 1, &h)),
                ));
            }
        }
        let eh = |i: usize, j: usize| (j % m) * n + (i % n);
        let ev = |i: usize, j: usize| n * m + (j % m) * n + (i % n);
        let ed = |i: usize, j: usize| 2 * n * m + (j % m) * n + (i % n);
        let mut triangles = Vec::new();
        for j in 0..m {
            for i in 0..n {
                triangles.push([(eh(i, j), true), (ev(i + 1, j), true), (ed(i, j), false)]);
                triangles.push([(ed(i, j), true), (eh(i, j + 1), false), (ev(i, j), false)]);
            }
        }
        let complex = Complex { vertex_count: n * m, edges, triangles };
        let kind = ModelKind::Torus { y_period };
        let mut surface = ModelSurface {
            kind,
            cols,
            rows,
            complex,
            h1: H1Basis::empty(),
            edge_coords,
            base_vertex: Point2::ints(0, 0),
        };
        surface.h1 = surface.normalized_h1()?;
        Ok(surface)
    }

    pub fn annulus(
        cols: usize,
        rows: usize,
        y_min: Scalar,
        y_max: Scalar,
    ) -> Result<ModelSurface, HomologyError> {
        assert!(cols >= 1 && rows >= 1);
        assert!(y_max > y_min);
        let n = cols;
        let m = rows;
        let vid = |i: usize, j: usize| j * n + (i % n);
        let xc = |i: usize| Scalar::ratio(i as i64, n as i64);
        let height = &y_max - &y_min;
        let yc = |j: usize| &y_min + &(Scalar::ratio(j as i64, m as i64) * &height);

        let mut edges = Vec::new();
        let mut edge_coords = Vec::new();
        for j in 0..=m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i + 1, j)));
                edge_coords.push((Point2::new(xc(i), yc(j)), Point2::new(xc(i + 1), yc(j))));
            }
        }
        let vert_base = n * (m + 1);
        for j in 0..m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i, j + 1)));
                edge_coords.push((Point2::new(xc(i), yc(j)), Point2::new(xc(i), yc(j + 1))));
            }
        }
        let diag_base = vert_base + n * m;
        for j in 0..m {
            for i in 0..n {
                edges.push((vid(i, j), vid(i + 1, j + 1)));
                edge_coords.push((Point2::new(xc(i), yc(j)), Point2::new(xc(i + 1), yc(j + 1))));
            }
        }
        let eh = |i: usize, j: usize| j * n + (i % n);
        let ev = |i: usize, j: usize| vert_base + j * n + (i % n);
        let ed = |i: usize, j: usize| diag_base + j * n + (i % n);
        let mut triangles = Vec::new();
        for j in 0..m {
            for i in 0..n {
                triangles.push([(eh(i, j), true), (ev(i + 1, j), true), (ed(i, j), false)]);
                triangles.push([(ed(i, j), true), (eh(i, j + 1), false), (ev(i, j), false)]);
            }
        }
        let complex = Complex { vertex_count: n * (m + 1), edges, triangles };
        let kind = ModelKind::Annulus { y_min: y_min.clone(), y_max };
        let mut surface = ModelSurface {
            kind,
            cols,
            rows,
            complex,
            h1: H1Basis::empty(),
            edge_coords,
            base_vertex: Point2::new(Scalar::zero(), y_min),
        };
        surface.h1 = surface.normalized_h1()?;
        Ok(surface)
    }

    pub fn winding_dim(&self) -> usize {
        match self.kind {
            ModelKind::Torus { .. } => 2,
            ModelKind::Annulus { .. } => 1,
        }
    }

    fn y_period(&self) -> Option<Scalar> {
        match &self.kind {
            ModelKind::Torus { y_period } => Some(y_period.clone()),
            ModelKind::Annulus { .. } => None,
        }
    }

    /// Signed crossings of an edge with the cut circles, read off its
    /// representative coordinates. This is a closed cocycle: summed over
    /// any triangle boundary it vanishes.
    fn edge_winding(&self, edge: usize) -> Vec<BigInt> {
        let (start, end) = &self.edge_coords[edge];
        let mut w = vec![&end.x.floor_big() - &start.x.floor_big()];
        if let Some(h) = self.y_period() {
            w.push((&end.y / &h).floor_big() - (&start.y / &h).floor_big());
        }
        w
    }

    /// Winding of a cycle chain: cocycle evaluation edge by edge.
    pub fn chain_winding(&self, chain: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.winding_dim()];
        for (e, c) in chain {
            for (a, w) in acc.iter_mut().zip(self.edge_winding(*e)) {
                *a += c * w;
            }
        }
        acc
    }

    /// H1 basis normalized so reported coordinates are geometric windings:
    /// the meridian maps to (1, 0) and the longitude to (0, 1) on the
    /// torus; the core circle maps to (1) on the annulus.
    fn normalized_h1(&self) -> Result<H1Basis, HomologyError> {
        let mut h1 = h1_basis(&self.complex)?;
        let dim = self.winding_dim();
        if h1.betti != dim {
            return Err(HomologyError::InvalidComplex(format!(
                "expected betti {dim}, got {}",
                h1.betti
            )));
        }
        // Rows: winding of each raw basis cycle.
        let mut w = IntMatrix::zeros(dim, dim);
        for (i, cycle) in h1.basis.iter().enumerate() {
            for (j, val) in self.chain_winding(cycle).into_iter().enumerate() {
                w[(i, j)] = val;
            }
        }
        let wt = w.transpose();
        let wt_inv = wt.inverse_exact().map_err(|_| HomologyError::BadNormalization)?;
        // New basis cycles B' = B * (W^T)^{-1}.
        let e = self.complex.edges.len();
        let mut b = IntMatrix::zeros(e, dim);
        for (j, cycle) in h1.basis.iter().enumerate() {
            for (i, c) in cycle {
                b[(*i, j)] = c.clone();
            }
        }
        let b_new = b.mul(&wt_inv);
        h1.basis = (0..dim)
            .map(|j| {
                (0..e)
                    .filter(|&i| !b_new[(i, j)].is_zero())
                    .map(|i| (i, b_new[(i, j)].clone()))
                    .collect()
            })
            .collect();
        h1.basis_change = Some(wt);
        Ok(h1)
    }

    /// Wrap a point into the fundamental domain `[0,1) x [0, H)` (torus)
    /// or `[0,1) x [y_min, y_max]` (annulus).
    pub fn wrap(&self, p: &Point2) -> Result<Point2, HomologyError> {
        let x = p.x.fract();
        let y = match &self.kind {
            ModelKind::Torus { y_period } => {
                let q = &p.y / y_period;
                q.fract() * y_period
            }
            ModelKind::Annulus { y_min, y_max } => {
                if p.y < *y_min || p.y > *y_max {
                    return Err(HomologyError::OutsideModel);
                }
                p.y.clone()
            }
        };
        Ok(Point2::new(x, y))
    }

    /// Locate the smallest-dimensional simplex containing a fundamental
    /// domain point, and its central point (vertex, edge midpoint, or
    /// triangle centroid) in the cell's unwrapped coordinates.
    pub fn locate(&self, rep: &Point2) -> Result<(SimplexRef, Point2), HomologyError> {
        let n = self.cols as i64;
        let m = self.rows as i64;
        let (y_offset, height) = match &self.kind {
            ModelKind::Torus { y_period } => (Scalar::zero(), y_period.clone()),
            ModelKind::Annulus { y_min, y_max } => (y_min.clone(), y_max - y_min),
        };
        // Cell coordinates.
        let u_all = &rep.x * Scalar::int(n);
        let v_all = (&rep.y - &y_offset) / &height * Scalar::int(m);
        let mut i = u_all.floor_i64();
        let mut j = v_all.floor_i64();
        i = i.clamp(0, n - 1);
        j = j.clamp(0, m - 1);
        let u = &u_all - &Scalar::int(i);
        let v = &v_all - &Scalar::int(j);
        let (iu, ju) = (i as usize, j as usize);

        let nn = self.cols;
        let mm = self.rows;
        let vid: Box<dyn Fn(usize, usize) -> usize> = match self.kind {
            ModelKind::Torus { .. } => Box::new(move |a: usize, b: usize| (b % mm) * nn + (a % nn)),
            ModelKind::Annulus { .. } => Box::new(move |a: usize, b: usize| b * nn + (a % nn)),
        };
        let h_edges = match self.kind {
            ModelKind::Torus { .. } => nn * mm,
            ModelKind::Annulus { .. } => nn * (mm + 1),
        };
        let eh = |a: usize, b: usize| match self.kind {
            ModelKind::Torus { .. } => (b % mm) * nn + (a % nn),
            ModelKind::Annulus { .. } => b * nn + (a % nn),
        };
        let ev = |a: usize, b: usize| h_edges + (b % mm) * nn + (a % nn);
        let ed = |a: usize, b: usize| h_edges + nn * mm + (b % mm) * nn + (a % nn);

        let zero = Scalar::zero();
        let at_u0 = u == zero;
        let at_v0 = v == zero;
        let on_diag = u == v;

        let corner = |a: usize, b: usize| -> Point2 {
            Point2::new(
                Scalar::ratio(a as i64, n),
                &y_offset + &(Scalar::ratio(b as i64, m) * &height),
            )
        };
        let midpoint = |p: &Point2, q: &Point2| -> Point2 {
            Point2::new((&p.x + &q.x) / Scalar::int(2), (&p.y + &q.y) / Scalar::int(2))
        };
        let centroid = |a: &Point2, b: &Point2, c: &Point2| -> Point2 {
            Point2::new(
                (&a.x + &b.x + &c.x) / Scalar::int(3),
                (&a.y + &b.y + &c.y) / Scalar::int(3),
            )
        };

        // Vertices first, then edges, then the open triangle.
        if at_u0 && at_v0 {
            return Ok((SimplexRef::Vertex(vid(iu, ju)), corner(iu, ju)));
        }
        if at_v0 {
            let c0 = corner(iu, ju);
            let c1 = corner(iu + 1, ju);
            return Ok((SimplexRef::Edge(eh(iu, ju)), midpoint(&c0, &c1)));
        }
        if at_u0 {
            let c0 = corner(iu, ju);
            let c1 = corner(iu, ju + 1);
            return Ok((SimplexRef::Edge(ev(iu, ju)), midpoint(&c0, &c1)));
        }
        if on_diag {
            let c0 = corner(iu, ju);
            let c1 = corner(iu + 1, ju + 1);
            return Ok((SimplexRef::Edge(ed(iu, ju)), midpoint(&c0, &c1)));
        }
        let tri_index = 2 * (ju * nn + iu);
        if u > v {
            let a = corner(iu, ju);
            let b = corner(iu + 1, ju);
            let c = corner(iu + 1, ju + 1);
            Ok((SimplexRef::Triangle(tri_index), centroid(&a, &b, &c)))
        } else {
            let a = corner(iu, ju);
            let b = corner(iu + 1, ju + 1);
            let c = corner(iu, ju + 1);
            Ok((SimplexRef::Triangle(tri_index + 1), centroid(&a, &b, &c)))
        }
    }
}

/// Coordinates of a closed edge path based at `base_vertex`, in the h1
/// basis. The path is a list of signed edges traversed in order.
pub fn loop_class(
    surface: &ModelSurface,
    path: &[(usize, bool)],
    base_vertex: usize,
) -> Result<Vec<BigInt>, HomologyError> {
    let mut current = base_vertex;
    let mut chain = vec![BigInt::zero(); surface.complex.edges.len()];
    for &(e, positive) in path {
        let (tail, head) = surface.complex.edges[e];
        let (from, to) = if positive { (tail, head) } else { (head, tail) };
        if from != current {
            return Err(HomologyError::NotClosed);
        }
        current = to;
        if positive {
            chain[e] += 1;
        } else {
            chain[e] -= 1;
        }
    }
    if current != base_vertex {
        return Err(HomologyError::NotClosed);
    }
    surface.h1.express(&chain)
}

/// A lift of a surface homeomorphism homotopic to the identity, tracked
/// through the straight-line homotopy. Construction verifies equivariance
/// under the model's deck translations on a deterministic sample.
#[derive(Clone, Debug)]
pub struct TrackedMap {
    pub lift: PlaneMap,
}

impl TrackedMap {
    pub fn new(surface: &ModelSurface, lift: PlaneMap, samples: usize) -> Result<TrackedMap, HomologyError> {
        let mut shifts = vec![(Scalar::one(), Scalar::zero())];
        if let ModelKind::Torus { y_period } = &surface.kind {
            shifts.push((Scalar::zero(), y_period.clone()));
        }
        let mut worst = 0.0f64;
        for p in halton_plane(samples, 2) {
            let fp = lift.apply(&p)?;
            for (dx, dy) in &shifts {
                let a = lift.apply(&p.add(dx, dy))?;
                let b = fp.add(dx, dy);
                if let (ArithmeticMode::Exact, ArithmeticMode::Exact) = (a.mode(), b.mode()) {
                    if a != b {
                        return Err(HomologyError::NotEquivariant { deviation: a.dist_f64(&b) });
                    }
                } else {
                    worst = worst.max(a.dist_f64(&b));
                }
            }
        }
        if worst > 1e-9 {
            return Err(HomologyError::NotEquivariant { deviation: worst });
        }
        Ok(TrackedMap { lift })
    }

    /// The straight-line homotopy displacement at time `t`:
    /// `p + t (F(p) - p)`. `t = 0` is the identity, `t = 1` the lift.
    pub fn homotopy_sample(&self, t: &Scalar, p: &Point2) -> Result<Point2, HomologyError> {
        let fp = self.lift.apply(p)?;
        Ok(Point2::new(&p.x + &((&fp.x - &p.x) * t), &p.y + &((&fp.y - &p.y) * t)))
    }

    pub fn mode(&self) -> ArithmeticMode {
        if self.lift.rational_exact() {
            ArithmeticMode::Exact
        } else {
            ArithmeticMode::Float
        }
    }
}

/// Count signed crossings of a straight segment `pos -> pos + d` with the
/// vertical cut circle `x in Z` and (on the torus) the horizontal cut
/// `y in H Z`.
fn segment_crossings(
    surface: &ModelSurface,
    pos: &Point2,
    end: &Point2,
) -> Vec<BigInt> {
    let mut w = vec![&end.x.floor_big() - &pos.x.floor_big()];
    if let ModelKind::Torus { y_period } = &surface.kind {
        w.push((&end.y / y_period).floor_big() - (&pos.y / y_period).floor_big());
    }
    w
}

/// The class of the closed-up n-step orbit loop of `x`: base to center to
/// x, the tracked orbit for n steps, then back through the final center to
/// base. Computed by summing signed crossings of the polygonal loop with
/// the cut circles.
pub fn orbit_loop_class(
    surface: &ModelSurface,
    map: &TrackedMap,
    x: &Point2,
    n: u32,
) -> Result<Vec<BigInt>, HomologyError> {
    let rep = surface.wrap(x)?;
    let (_, center_start) = surface.locate(&rep)?;

    let mut class = vec![BigInt::zero(); surface.winding_dim()];
    let count = |class: &mut Vec<BigInt>, from: &Point2, to: &Point2| {
        for (c, w) in class.iter_mut().zip(segment_crossings(surface, from, to)) {
            *c += w;
        }
    };

    // Each piece is counted from its own endpoints. Signed crossing
    // counts are invariant under integer deck translations, so pieces may
    // be counted in whichever lift of the segment is known exactly; the
    // alpha and beta paths stay inside the fundamental domain.
    let base = surface.base_vertex.clone();
    count(&mut class, &base, &center_start);
    count(&mut class, &center_start, &rep);

    // Tracked orbit: straight homotopy segments in the cover.
    let mut orbit = rep.clone();
    for _ in 0..n {
        let next = map.lift.apply(&orbit)?;
        count(&mut class, &orbit, &next);
        orbit = next;
    }

    // Close up: beta from the projected endpoint to its center, alpha back
    // to base, both counted downstairs.
    let q = surface.wrap(&orbit)?;
    let (_, center_end) = surface.locate(&q)?;
    count(&mut class, &q, &center_end);
    count(&mut class, &center_end, &base);

    Ok(class)
}

/// `(F^n(x) - x) / n` in winding coordinates: the displacement oracle for
/// the orbit-loop class.
pub fn displacement_vector(
    surface: &ModelSurface,
    map: &TrackedMap,
    x: &Point2,
    n: u32,
) -> Result<Vec<Scalar>, HomologyError> {
    let rep = surface.wrap(x)?;
    let mut p = rep.clone();
    for _ in 0..n {
        p = map.lift.apply(&p)?;
    }
    let dx = (&p.x - &rep.x) / Scalar::int(n as i64);
    match &surface.kind {
        ModelKind::Torus { y_period } => {
            let dy = (&p.y - &rep.y) / y_period / Scalar::int(n as i64);
            Ok(vec![dx, dy])
        }
        ModelKind::Annulus { .. } => Ok(vec![dx]),
    }
}

/// Point estimate of the translation vector: `[h_n(x)] / n`, with the
/// displacement form checked to within `2 * diameter / n`.
pub fn point_translation_vector(
    surface: &ModelSurface,
    map: &TrackedMap,
    x: &Point2,
    n: u32,
) -> Result<Vec<Scalar>, HomologyError> {
    let class = orbit_loop_class(surface, map, x, n)?;
    let estimate: Vec<Scalar> =
        class.iter().map(|c| Scalar::big_int(c.clone()) / Scalar::int(n as i64)).collect();
    let oracle = displacement_vector(surface, map, x, n)?;
    let bound = 2.0 / n as f64;
    for (e, o) in estimate.iter().zip(&oracle) {
        debug_assert!(
            (e.to_f64() - o.to_f64()).abs() <= bound + 1e-12,
            "orbit class and displacement disagree beyond 2/n"
        );
        let _ = o;
    }
    Ok(estimate)
}

/// One-step class of a fundamental-domain point, streamlined for
/// quadrature loops. Equals `orbit_loop_class(.., 1)`: the closing paths
/// of the loop construction run between points of the fundamental domain
/// and cross no cut circle, so only the tracked segment counts, and its
/// crossings are the floor components of the image.
pub fn one_step_class(
    surface: &ModelSurface,
    map: &TrackedMap,
    rep: &Point2,
) -> Result<Vec<BigInt>, HomologyError> {
    let image = map.lift.apply(rep)?;
    let mut class = vec![image.x.floor_big()];
    if let ModelKind::Torus { y_period } = &surface.kind {
        class.push((&image.y / y_period).floor_big());
    }
    Ok(class)
}

/// Quadrature presentation of a Borel probability measure on the model.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quadrature {
    /// Midpoint rule on a `cells x cells` grid over the fundamental domain.
    GridMidpoint { cells: u32 },
    /// Weighted sample points; weights should sum to one.
    Points { points: Vec<(Point2, Scalar)> },
    /// Empirical (Birkhoff) measure along an orbit: equal visit weights.
    /// Approximate unless the orbit equidistributes.
    BirkhoffOrbit { seed: Point2, steps: u32 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeanTranslation {
    pub vector: Vec<Scalar>,
    pub mode: ArithmeticMode,
    pub nodes: usize,
}

/// Mean homological translation vector: the quadrature average of the
/// one-step class `[h_1(x)]`. Equals the invariant-measure mean when the
/// quadrature represents an invariant measure.
pub fn mean_translation_vector(
    surface: &ModelSurface,
    map: &TrackedMap,
    quadrature: &Quadrature,
) -> Result<MeanTranslation, HomologyError> {
    let dim = surface.winding_dim();
    let mut sum = vec![BigInt::zero(); dim];
    let mut total_weight = Scalar::zero();
    let mut weighted: Vec<Scalar> = vec![Scalar::zero(); dim];
    let mut nodes = 0usize;
    let mut uniform = true;

    let add = |point: &Point2, weight: Option<&Scalar>, sum: &mut Vec<BigInt>, weighted: &mut Vec<Scalar>| -> Result<(), HomologyError> {
        let rep = surface.wrap(point)?;
        let class = one_step_class(surface, map, &rep)?;
        match weight {
            None => {
                for (s, c) in sum.iter_mut().zip(&class) {
                    *s += c;
                }
            }
            Some(w) => {
                for (acc, c) in weighted.iter_mut().zip(&class) {
                    *acc = &*acc + &(Scalar::big_int(c.clone()) * w);
                }
            }
        }
        Ok(())
    };

    match quadrature {
        Quadrature::GridMidpoint { cells } => {
            let k = *cells as i64;
            let (y0, height) = match &surface.kind {
                ModelKind::Torus { y_period } => (Scalar::zero(), y_period.clone()),
                ModelKind::Annulus { y_min, y_max } => (y_min.clone(), y_max - y_min),
            };
            for i in 0..k {
                for j in 0..k {
                    let p = Point2::new(
                        Scalar::ratio(2 * i + 1, 2 * k),
                        &y0 + &(Scalar::ratio(2 * j + 1, 2 * k) * &height),
                    );
                    add(&p, None, &mut sum, &mut weighted)?;
                    nodes += 1;
                }
            }
        }
        Quadrature::Points { points } => {
            uniform = false;
            for (p, w) in points {
                add(p, Some(w), &mut sum, &mut weighted)?;
                total_weight = total_weight + w;
                nodes += 1;
            }
        }
        Quadrature::BirkhoffOrbit { seed, steps } => {
            let mut p = surface.wrap(seed)?;
            for _ in 0..*steps {
                add(&p, None, &mut sum, &mut weighted)?;
                nodes += 1;
                p = surface.wrap(&map.lift.apply(&p)?)?;
            }
        }
    }

    let vector = if uniform {
        sum.into_iter().map(|s| Scalar::big_int(s) / Scalar::int(nodes as i64)).collect()
    } else {
        // Normalize by the actual weight mass.
        weighted.into_iter().map(|w| w / total_weight.clone()).collect()
    };
    Ok(MeanTranslation { vector, mode: map.mode(), nodes })
}

/// The data determining `[h_1(x)]` near `x`: the strata of `x` and
/// `f(x)` and the integer deck offset of the one-step segment. Constant
/// on each open cell of the induced subdivision.
pub fn one_step_cell(
    surface: &ModelSurface,
    map: &TrackedMap,
    x: &Point2,
) -> Result<(SimplexRef, SimplexRef, Vec<BigInt>), HomologyError> {
    let rep = surface.wrap(x)?;
    let (simplex, _) = surface.locate(&rep)?;
    let fx = map.lift.apply(&rep)?;
    let frep = surface.wrap(&fx)?;
    let (fsimplex, _) = surface.locate(&frep)?;
    let class = orbit_loop_class(surface, map, x, 1)?;
    Ok((simplex, fsimplex, class))
}
