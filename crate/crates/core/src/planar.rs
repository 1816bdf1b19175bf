//! Closed plane curves built from arcs of radius at least 1 and straight
//! segments, their enclosed area, and the largest disc they enclose.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom2::{distance_to_edge, edges_intersect};
use crate::profile::{ProfileEdge, CLOSURE_TOL};

type P2 = [f64; 2];

/// Tangent directions at a joint must agree to this.
pub const G1_TOL: f64 = 1e-9;
/// Grid nodes per axis for the inradius search.
pub const INRADIUS_GRID: usize = 512;
pub const ASCENT_STEPS: usize = 50;

const ASCENT_SEEDS: usize = 4;
const ASCENT_DIRECTIONS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarError {
    #[error("empty curve")]
    Empty,
    #[error("invalid edge {index}: {reason}")]
    InvalidEdge { index: usize, reason: String },
    #[error("arc {index} has radius {radius} < 1 (curvature above the bound)")]
    CurvatureExceeded { index: usize, radius: f64 },
    #[error("curve not closed between edges {0} and {1} (gap {2:e})")]
    NotClosed(usize, usize, f64),
    #[error("tangent jump of {1:e} at the joint after edge {0}")]
    NotSmooth(usize, f64),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
}

/// Closed G1 loop of arcs and segments. Edges use the same representation
/// as profile edges, read as plane coordinates `(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSpline {
    pub edges: Vec<ProfileEdge>,
}

/// Result of the enclosed-disc search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscCertificate {
    pub center: [f64; 2],
    pub inradius: f64,
    /// Best lattice value before the local ascent.
    pub grid_inradius: f64,
    pub grid_spacing: f64,
    pub area: f64,
}

fn unit(v: P2) -> P2 {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn rotate(p: P2, angle: f64) -> P2 {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

impl ArcSpline {
    pub fn new(edges: Vec<ProfileEdge>) -> Self {
        ArcSpline { edges }
    }

    pub fn circle(center: P2, radius: f64) -> Self {
        ArcSpline::new(vec![ProfileEdge::arc(center, radius, 0.0, TAU)])
    }

    /// Two semicircles of radius `radius` joined by segments of length
    /// `length`, counter-clockwise.
    pub fn stadium(radius: f64, length: f64) -> Self {
        let h = length / 2.0;
        ArcSpline::new(vec![
            ProfileEdge::segment([-h, -radius], [h, -radius]),
            ProfileEdge::arc([h, 0.0], radius, -FRAC_PI_2, PI),
            ProfileEdge::segment([h, radius], [-h, radius]),
            ProfileEdge::arc([-h, 0.0], radius, FRAC_PI_2, PI),
        ])
    }

    pub fn validate(&self) -> Result<(), PlanarError> {
        let n = self.edges.len();
        if n == 0 {
            return Err(PlanarError::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            e.validate()
                .map_err(|reason| PlanarError::InvalidEdge { index: i, reason })?;
            if let ProfileEdge::Arc { radius, .. } = *e {
                if radius < 1.0 {
                    return Err(PlanarError::CurvatureExceeded { index: i, radius });
                }
            }
        }
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (self.edges[i].end_point(), self.edges[j].start_point());
            let gap = (a[0] - b[0]).hypot(a[1] - b[1]);
            if gap > CLOSURE_TOL {
                return Err(PlanarError::NotClosed(i, j, gap));
            }
            let (ta, tb) = (
                unit(self.edges[i].tangent(1.0)),
                unit(self.edges[j].tangent(0.0)),
            );
            let jump = (ta[0] - tb[0]).hypot(ta[1] - tb[1]);
            if !(jump <= G1_TOL) {
                return Err(PlanarError::NotSmooth(i, jump));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if edges_intersect(&self.edges, i, j) {
                    return Err(PlanarError::SelfIntersecting(i, j));
                }
            }
        }
        Ok(())
    }

    /// Rotation by `angle` about the origin followed by a translation.
    pub fn transformed(&self, angle: f64, shift: P2) -> Self {
        let place = |p: P2| {
            let q = rotate(p, angle);
            [q[0] + shift[0], q[1] + shift[1]]
        };
        ArcSpline::new(
            self.edges
                .iter()
                .map(|e| match *e {
                    ProfileEdge::Arc {
                        center,
                        radius,
                        start,
                        sweep,
                    } => ProfileEdge::arc(place(center), radius, start + angle, sweep),
                    ProfileEdge::Segment { from, to } => {
                        ProfileEdge::segment(place(from), place(to))
                    }
                })
                .collect(),
        )
    }

    fn signed_area(&self) -> f64 {
        self.edges.iter().map(ProfileEdge::green_area_term).sum()
    }

    /// Convex exactly when every arc turns the same way as the loop.
    pub fn is_convex(&self) -> bool {
        let orientation = self.signed_area().signum();
        self.edges.iter().all(|e| match *e {
            ProfileEdge::Arc { sweep, .. } => sweep.signum() == orientation,
            ProfileEdge::Segment { .. } => true,
        })
    }

    pub fn bounds(&self) -> (P2, P2) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for e in &self.edges {
            for piece in e.quadrant_pieces() {
                for p in [piece.start_point(), piece.end_point()] {
                    for k in 0..2 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
            }
        }
        (lo, hi)
    }

    /// Distance from `p` to the nearest point of the curve.
    pub fn distance(&self, p: P2) -> f64 {
        self.edges
            .iter()
            .map(|e| distance_to_edge(e, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Abscissae where the horizontal line at height `y` crosses the curve,
    /// sorted. Each edge piece is treated as half-open in `y` so joints are
    /// counted consistently.
    pub fn row_crossings(&self, y: f64) -> Vec<f64> {
        let mut xs = Vec::new();
        for e in &self.edges {
            for piece in e.quadrant_pieces() {
                let (a, b) = (piece.start_point(), piece.end_point());
                let (ylo, yhi) = (a[1].min(b[1]), a[1].max(b[1]));
                if !(y >= ylo && y < yhi) {
                    continue;
                }
                match piece {
                    ProfileEdge::Segment { from, to } => {
                        let t = (y - from[1]) / (to[1] - from[1]);
                        xs.push(from[0] + t * (to[0] - from[0]));
                    }
                    ProfileEdge::Arc {
                        center,
                        radius,
                        start,
                        sweep,
                    } => {
                        let dy = (y - center[1]) / radius;
                        let dx = (1.0 - dy * dy).max(0.0).sqrt() * radius;
                        let side = (start + 0.5 * sweep).cos().signum();
                        xs.push(center[0] + side * dx);
                    }
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs
    }

    pub fn contains(&self, p: P2) -> bool {
        let xs = self.row_crossings(p[1]);
        (xs.len() - xs.partition_point(|&x| x <= p[0])) % 2 == 1
    }
}

/// Enclosed area by Green's theorem with exact arc terms.
pub fn enclosed_area(curve: &ArcSpline) -> Result<f64, PlanarError> {
    curve.validate()?;
    Ok(curve.signed_area().abs())
}

fn ascend(curve: &ArcSpline, start: P2, step0: f64) -> (P2, f64) {
    let mut p = start;
    let mut best = curve.distance(p);
    let mut step = step0;
    // golden-angle rotation of the stencil keeps ridges from stalling it
    let twist = PI * (3.0 - 5f64.sqrt());
    for k in 0..ASCENT_STEPS {
        let mut next = None;
        for d in 0..ASCENT_DIRECTIONS {
            let a = k as f64 * twist + TAU * d as f64 / ASCENT_DIRECTIONS as f64;
            let q = [p[0] + step * a.cos(), p[1] + step * a.sin()];
            let dq = curve.distance(q);
            if dq > best && curve.contains(q) {
                best = dq;
                next = Some(q);
            }
        }
        match next {
            Some(q) => p = q,
            None => step *= 0.5,
        }
    }
    (p, best)
}

/// Largest enclosed disc found by a distance lattice over the bounding box
/// followed by local ascent from the best nodes.
pub fn certify_unit_disc(curve: &ArcSpline) -> Result<DiscCertificate, PlanarError> {
    certify_with_resolution(curve, INRADIUS_GRID)
}

pub fn certify_with_resolution(
    curve: &ArcSpline,
    resolution: usize,
) -> Result<DiscCertificate, PlanarError> {
    let area = enclosed_area(curve)?;
    let (lo, hi) = curve.bounds();
    let n = resolution.max(2);
    let h = [
        (hi[0] - lo[0]) / (n - 1) as f64,
        (hi[1] - lo[1]) / (n - 1) as f64,
    ];
    let mut nodes: Vec<(f64, P2)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let y = lo[1] + j as f64 * h[1];
            let xs = curve.row_crossings(y);
            (0..n)
                .filter_map(move |i| {
                    let x = lo[0] + i as f64 * h[0];
                    let above = xs.len() - xs.partition_point(|&c| c <= x);
                    (above % 2 == 1).then_some([x, y])
                })
                .map(|p| (curve.distance(p), p))
                .collect::<Vec<_>>()
        })
        .collect();
    nodes.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1[0].total_cmp(&b.1[0])));
    let grid_inradius = nodes.first().map_or(0.0, |n| n.0);
    let step = h[0].min(h[1]);
    let (center, inradius) = nodes
        .iter()
        .take(ASCENT_SEEDS)
        .map(|&(_, p)| ascend(curve, p, step))
        .fold(([0.0, 0.0], f64::NEG_INFINITY), |acc, r| {
            if r.1 > acc.1 {
                r
            } else {
                acc
            }
        });
    Ok(DiscCertificate {
        center,
        inradius: inradius.max(grid_inradius),
        grid_inradius,
        grid_spacing: h[0].hypot(h[1]),
        area,
    })
}

/// Families of the random curve generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveFamily {
    /// Boundary of the convex hull of unit discs at random centers.
    DiscHull,
    /// Neighbourhood of a bent path, of half-width at least 1, whose turns
    /// exceed the half-width by at least 1.
    ThickPath,
}

/// Convex hull of points, counter-clockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<P2> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let it: Box<dyn Iterator<Item = &P2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in it {
            while hull.len() >= start + 2
                && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Boundary of the union's convex hull of unit discs centred at `centers`.
pub fn disc_hull(centers: &[P2]) -> ArcSpline {
    let hull = convex_hull(centers.to_vec());
    if hull.len() == 1 {
        return ArcSpline::circle(hull[0], 1.0);
    }
    let m = hull.len();
    let normal = |i: usize| {
        let (a, b) = (hull[i], hull[(i + 1) % m]);
        let d = unit([b[0] - a[0], b[1] - a[1]]);
        [d[1], -d[0]]
    };
    let mut edges = Vec::with_capacity(2 * m);
    for i in 0..m {
        let (a, b) = (hull[i], hull[(i + 1) % m]);
        let nu = normal(i);
        let nv = normal((i + 1) % m);
        edges.push(ProfileEdge::segment(
            [a[0] + nu[0], a[1] + nu[1]],
            [b[0] + nu[0], b[1] + nu[1]],
        ));
        let start = nu[1].atan2(nu[0]);
        let sweep = (nv[1].atan2(nv[0]) - start).rem_euclid(TAU);
        edges.push(ProfileEdge::arc(b, 1.0, start, sweep));
    }
    ArcSpline::new(edges)
}

/// Piece of a path centerline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPiece {
    Straight(f64),
    /// Turn of the given radius and signed sweep (positive turns left).
    Turn(f64, f64),
}

/// Boundary of the `w`-neighbourhood of a centerline starting at the origin
/// heading along `+x`, counter-clockwise. Turn radii must be at least `w + 1`
/// for the inner wall to keep radius at least 1.
pub fn thick_path(pieces: &[PathPiece], w: f64) -> ArcSpline {
    let mut right = Vec::new();
    let mut left = Vec::new();
    let mut p = [0.0, 0.0];
    let mut heading: f64 = 0.0;
    for piece in pieces {
        let nl = [-w * heading.sin(), w * heading.cos()];
        match *piece {
            PathPiece::Straight(len) => {
                let q = [p[0] + len * heading.cos(), p[1] + len * heading.sin()];
                right.push(ProfileEdge::segment(
                    [p[0] - nl[0], p[1] - nl[1]],
                    [q[0] - nl[0], q[1] - nl[1]],
                ));
                left.push(ProfileEdge::segment(
                    [p[0] + nl[0], p[1] + nl[1]],
                    [q[0] + nl[0], q[1] + nl[1]],
                ));
                p = q;
            }
            PathPiece::Turn(radius, sweep) => {
                let s = sweep.signum();
                let c = [p[0] + s * radius * nl[0] / w, p[1] + s * radius * nl[1] / w];
                let a0 = heading - s * FRAC_PI_2;
                // the wall on the turning side sits closer to the center
                right.push(ProfileEdge::arc(c, radius + s * w, a0, sweep));
                left.push(ProfileEdge::arc(c, radius - s * w, a0, sweep));
                p = [
                    c[0] + radius * (a0 + sweep).cos(),
                    c[1] + radius * (a0 + sweep).sin(),
                ];
                heading += sweep;
            }
        }
    }
    let mut edges = right;
    edges.push(ProfileEdge::arc(p, w, heading - FRAC_PI_2, PI));
    edges.extend(left.iter().rev().map(ProfileEdge::reversed));
    edges.push(ProfileEdge::arc([0.0, 0.0], w, FRAC_PI_2, PI));
    ArcSpline::new(edges)
}

/// Random valid curve of the given family. Candidates failing validation
/// are redrawn.
pub fn random_arc_spline<R: Rng>(rng: &mut R, family: CurveFamily) -> ArcSpline {
    loop {
        let curve = match family {
            CurveFamily::DiscHull => {
                let k = rng.gen_range(1..=7);
                let centers: Vec<P2> = (0..k)
                    .map(|_| [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)])
                    .collect();
                disc_hull(&centers)
            }
            CurveFamily::ThickPath => {
                let w = if rng.gen_bool(0.5) {
                    1.0
                } else {
                    rng.gen_range(1.0..1.6)
                };
                let mut pieces = vec![PathPiece::Straight(rng.gen_range(0.2..2.0))];
                for _ in 0..rng.gen_range(1..=3) {
                    let sweep =
                        rng.gen_range(0.4..2.4) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    pieces.push(PathPiece::Turn(w + rng.gen_range(1.0..2.5), sweep));
                    pieces.push(PathPiece::Straight(rng.gen_range(0.2..2.0)));
                }
                let angle = rng.gen_range(0.0..TAU);
                thick_path(&pieces, w)
                    .transformed(angle, [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
            }
        };
        if curve.validate().is_ok() {
            return curve;
        }
    }
}

/// `n` curves alternating between the two families, so half of them bend.
pub fn random_corpus<R: Rng>(rng: &mut R, n: usize) -> Vec<ArcSpline> {
    (0..n)
        .map(|i| {
            let family = if i % 2 == 0 {
                CurveFamily::DiscHull
            } else {
                CurveFamily::ThickPath
            };
            random_arc_spline(rng, family)
        })
        .collect()
}
