//! Planar profile regions in the `(rho, z)` half-plane and their solids of
//! revolution about the z axis, plus the closed-form volume constants.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Endpoint agreement required between consecutive edges.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Default Gauss-Legendre order per edge piece.
pub const QUADRATURE_ORDER: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("invalid edge {index}: {reason}")]
    InvalidEdge { index: usize, reason: String },
    #[error("loop not closed between edges {0} and {1} (gap {2:e})")]
    NotClosed(usize, usize, f64),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("edge {0} crosses the axis (rho = {1:e})")]
    CrossesAxis(usize, f64),
    #[error("empty region")]
    Empty,
}

/// Arc or straight segment in the `(rho, z)` plane. Arc angles are measured
/// from the `+rho` direction; `sweep` is signed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileEdge {
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
}

type P2 = [f64; 2];

fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl ProfileEdge {
    pub fn arc(center: P2, radius: f64, start: f64, sweep: f64) -> Self {
        ProfileEdge::Arc {
            center,
            radius,
            start,
            sweep,
        }
    }

    pub fn segment(from: P2, to: P2) -> Self {
        ProfileEdge::Segment { from, to }
    }

    /// Point at fraction `t` in `[0, 1]` along the edge.
    pub fn point(&self, t: f64) -> P2 {
        match *self {
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let (s, c) = (start + t * sweep).sin_cos();
                [center[0] + radius * c, center[1] + radius * s]
            }
            ProfileEdge::Segment { from, to } => [
                from[0] + t * (to[0] - from[0]),
                from[1] + t * (to[1] - from[1]),
            ],
        }
    }

    /// Derivative of `point` with respect to `t`.
    pub fn tangent(&self, t: f64) -> P2 {
        match *self {
            ProfileEdge::Arc {
                radius,
                start,
                sweep,
                ..
            } => {
                let (s, c) = (start + t * sweep).sin_cos();
                [-radius * sweep * s, radius * sweep * c]
            }
            ProfileEdge::Segment { from, to } => [to[0] - from[0], to[1] - from[1]],
        }
    }

    pub fn start_point(&self) -> P2 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> P2 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            ProfileEdge::Arc { radius, sweep, .. } => radius * sweep.abs(),
            ProfileEdge::Segment { from, to } => dist(from, to),
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => ProfileEdge::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
            ProfileEdge::Segment { from, to } => ProfileEdge::Segment { from: to, to: from },
        }
    }

    pub fn translated(&self, d: P2) -> Self {
        match *self {
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => ProfileEdge::Arc {
                center: [center[0] + d[0], center[1] + d[1]],
                radius,
                start,
                sweep,
            },
            ProfileEdge::Segment { from, to } => ProfileEdge::Segment {
                from: [from[0] + d[0], from[1] + d[1]],
                to: [to[0] + d[0], to[1] + d[1]],
            },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match *self {
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                if !(radius > 0.0) {
                    return Err(format!("arc radius {radius}"));
                }
                if sweep == 0.0 || !sweep.is_finite() || sweep.abs() > TAU + 1e-12 {
                    return Err(format!("arc sweep {sweep}"));
                }
                if !(center[0].is_finite() && center[1].is_finite() && start.is_finite()) {
                    return Err("non-finite arc parameters".into());
                }
            }
            ProfileEdge::Segment { from, to } => {
                if !(from.iter().chain(&to).all(|x| x.is_finite())) {
                    return Err("non-finite segment endpoint".into());
                }
                if dist(from, to) == 0.0 {
                    return Err("zero-length segment".into());
                }
            }
        }
        Ok(())
    }

    /// Smallest `rho` reached along the edge.
    pub fn min_rho(&self) -> f64 {
        match *self {
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let lo = start.min(start + sweep);
                let hi = start.max(start + sweep);
                let k = ((lo - PI) / TAU).ceil();
                let ends = self.start_point()[0].min(self.end_point()[0]);
                if PI + k * TAU <= hi {
                    center[0] - radius
                } else {
                    ends
                }
            }
            ProfileEdge::Segment { from, to } => from[0].min(to[0]),
        }
    }

    /// Split into pieces whose arcs do not cross a quadrant boundary.
    pub(crate) fn quadrant_pieces(&self) -> Vec<ProfileEdge> {
        match *self {
            ProfileEdge::Segment { .. } => vec![*self],
            ProfileEdge::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let end = start + sweep;
                let (lo, hi) = (start.min(end), start.max(end));
                let mut cuts = vec![lo];
                let mut k = (lo / FRAC_PI_2).floor() + 1.0;
                while k * FRAC_PI_2 < hi - 1e-14 {
                    cuts.push(k * FRAC_PI_2);
                    k += 1.0;
                }
                cuts.push(hi);
                let mut pieces: Vec<ProfileEdge> = cuts
                    .windows(2)
                    .filter(|w| w[1] > w[0])
                    .map(|w| ProfileEdge::arc(center, radius, w[0], w[1] - w[0]))
                    .collect();
                if sweep < 0.0 {
                    pieces.reverse();
                    pieces.iter_mut().for_each(|p| *p = p.reversed());
                }
                pieces
            }
        }
    }

    /// Exact `(1/2) * integral (rho dz - z drho)` along the edge.
    pub(crate) fn green_area_term(&self) -> f64 {
        match *self {
            ProfileEdge::Arc {
                center: [cx, cz],
                radius: r,
                start: s,
                sweep,
            } => {
                let e = s + sweep;
                0.5 * (r * cx * (e.sin() - s.sin()) - r * cz * (e.cos() - s.cos()) + r * r * sweep)
            }
            ProfileEdge::Segment { from, to } => 0.5 * (from[0] * to[1] - to[0] * from[1]),
        }
    }

    /// Exact `integral (rho^2 / 2) dz` along the edge, the first moment of area
    /// about the axis contributed by this edge.
    fn moment_term(&self) -> f64 {
        match *self {
            ProfileEdge::Arc {
                center: [cx, _],
                radius: r,
                start: s,
                sweep,
            } => {
                // antiderivative of (cx + r cos t)^2 r cos t
                let f = |t: f64| {
                    let (st, ct) = t.sin_cos();
                    r * (cx * cx * st
                        + 2.0 * cx * r * (t / 2.0 + st * ct / 2.0)
                        + r * r * (st - st * st * st / 3.0))
                };
                0.5 * (f(s + sweep) - f(s))
            }
            ProfileEdge::Segment { from, to } => {
                (to[1] - from[1]) * (from[0] * from[0] + from[0] * to[0] + to[0] * to[0]) / 6.0
            }
        }
    }
}

fn legendre(order: usize) -> Option<&'static GaussLegendre> {
    static R32: OnceLock<GaussLegendre> = OnceLock::new();
    static R64: OnceLock<GaussLegendre> = OnceLock::new();
    let make = |n| GaussLegendre::new(n).expect("order >= 2");
    match order {
        32 => Some(R32.get_or_init(|| make(32))),
        64 => Some(R64.get_or_init(|| make(64))),
        _ => None,
    }
}

/// Closed loop of edges in the half-plane `rho >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRegion {
    pub edges: Vec<ProfileEdge>,
}

impl ProfileRegion {
    pub fn new(edges: Vec<ProfileEdge>) -> Self {
        ProfileRegion { edges }
    }

    pub fn disc(center: P2, radius: f64) -> Self {
        ProfileRegion::new(vec![ProfileEdge::arc(center, radius, -PI, TAU)])
    }

    /// Axis-aligned rectangle `[r0, r1] x [z0, z1]`, counter-clockwise.
    pub fn rectangle(r0: f64, r1: f64, z0: f64, z1: f64) -> Self {
        let p = [[r0, z0], [r1, z0], [r1, z1], [r0, z1]];
        ProfileRegion::new(
            (0..4)
                .map(|i| ProfileEdge::segment(p[i], p[(i + 1) % 4]))
                .collect(),
        )
    }

    pub fn translated(&self, d: P2) -> Self {
        ProfileRegion::new(self.edges.iter().map(|e| e.translated(d)).collect())
    }

    /// Closure, axis and simplicity checks.
    pub fn validate(&self) -> Result<(), ProfileError> {
        let n = self.edges.len();
        if n == 0 {
            return Err(ProfileError::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            e.validate()
                .map_err(|reason| ProfileError::InvalidEdge { index: i, reason })?;
            let r = e.min_rho();
            if r < -CLOSURE_TOL {
                return Err(ProfileError::CrossesAxis(i, r));
            }
        }
        for i in 0..n {
            let j = (i + 1) % n;
            let gap = dist(self.edges[i].end_point(), self.edges[j].start_point());
            if gap > CLOSURE_TOL {
                return Err(ProfileError::NotClosed(i, j, gap));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if crate::geom2::edges_intersect(&self.edges, i, j) {
                    return Err(ProfileError::SelfIntersecting(i, j));
                }
            }
        }
        Ok(())
    }

    fn signed_area(&self) -> f64 {
        self.edges.iter().map(ProfileEdge::green_area_term).sum()
    }

    /// Enclosed area by Green's theorem with exact arc terms.
    pub fn area(&self) -> Result<f64, ProfileError> {
        self.validate()?;
        Ok(self.signed_area().abs())
    }

    /// Centroid distance from the axis from exact first moments.
    pub fn centroid_rho(&self) -> Result<f64, ProfileError> {
        self.validate()?;
        let a = self.signed_area();
        let m: f64 = self.edges.iter().map(ProfileEdge::moment_term).sum();
        Ok(m / a)
    }

    /// `2 pi * integral rho dA` by Gauss-Legendre quadrature of `rho^2/2 dz`
    /// over every edge, arcs cut at quadrant boundaries first.
    pub fn revolved_volume_with_order(&self, order: usize) -> Result<f64, ProfileError> {
        self.validate()?;
        let owned;
        let rule = match legendre(order) {
            Some(r) => r,
            None => {
                owned = GaussLegendre::new(order.max(2)).expect("order >= 2");
                &owned
            }
        };
        let mut sum = 0.0;
        for e in &self.edges {
            for piece in e.quadrant_pieces() {
                sum += rule.integrate(0.0, 1.0, |t| {
                    let p = piece.point(t);
                    0.5 * p[0] * p[0] * piece.tangent(t)[1]
                });
            }
        }
        Ok(TAU * sum * self.signed_area().signum())
    }

    pub fn revolved_volume(&self) -> Result<f64, ProfileError> {
        self.revolved_volume_with_order(QUADRATURE_ORDER)
    }
}

/// Free function forms of the region measurements.
pub fn region_area(region: &ProfileRegion) -> Result<f64, ProfileError> {
    region.area()
}

pub fn revolved_volume(region: &ProfileRegion) -> Result<f64, ProfileError> {
    region.revolved_volume()
}

/// Axis distance of the small blue tori.
pub fn blue_axis_distance() -> f64 {
    2.0 - 3f64.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub total: f64,
    pub unit_ball: f64,
}

/// One stated inequality with its evaluated left-hand side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl VolumeConstants {
    pub fn bound_checks(&self) -> Vec<BoundCheck> {
        [
            ("a", self.a, 0.5),
            ("b", self.b, 0.8),
            ("c", self.c, 1.5),
            ("total", self.total, self.unit_ball),
        ]
        .into_iter()
        .map(|(name, value, bound)| BoundCheck {
            name: name.into(),
            value,
            bound,
            pass: value < bound,
        })
        .collect()
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.bound_checks().iter().all(|c| c.pass)
    }

    /// `total / (4 pi / 3)`
    pub fn ratio(&self) -> f64 {
        self.total / self.unit_ball
    }
}

pub fn eval_constants() -> VolumeConstants {
    let s3 = 3f64.sqrt();
    let pi2 = PI * PI;
    let a = PI * (2.0 - 2.0 / s3) * (s3 - FRAC_PI_2);
    let b = 8.0 - 2.0 * s3 + PI * s3 + pi2 / 3.0 - 4.0 * PI;
    let c = 4.0 * PI * s3 - 2.0 * PI - 2.0 * pi2 + pi2 / s3;
    VolumeConstants {
        a,
        b,
        c,
        total: 2.0 * a + 2.0 * b + c,
        unit_ball: 4.0 * PI / 3.0,
    }
}

/// Upper half of the cork: the part with `z >= 0` of the curvilinear
/// triangle between the red circle at `(2, 0)` and the blue circles at
/// `(2 - sqrt3, +-1)`.
pub fn upper_cork_region() -> ProfileRegion {
    let beta = blue_axis_distance();
    let red = [2.0, 0.0];
    let blue = [beta, 1.0];
    ProfileRegion::new(vec![
        ProfileEdge::segment([beta, 0.0], [1.0, 0.0]),
        ProfileEdge::arc(red, 1.0, PI, -PI / 6.0),
        ProfileEdge::arc(blue, 1.0, -PI / 6.0, -PI / 3.0),
    ])
}

/// Curvilinear triangle between the red circles at `(2, 0)`, `(2, 2)` and
/// the blue circle at `(2 - sqrt3, 1)`.
pub fn collar_region() -> ProfileRegion {
    let beta = blue_axis_distance();
    ProfileRegion::new(vec![
        ProfileEdge::arc([2.0, 0.0], 1.0, 5.0 * PI / 6.0, -PI / 3.0),
        ProfileEdge::arc([2.0, 2.0], 1.0, 1.5 * PI, -PI / 3.0),
        ProfileEdge::arc([beta, 1.0], 1.0, PI / 6.0, -PI / 3.0),
    ])
}

/// A row of the constants table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub closed_form: f64,
    /// Volume of the reconstructed region, when one exists.
    pub reconstructed: Option<f64>,
    pub difference: Option<f64>,
    /// Stated upper bound, absent for the reference ball.
    pub bound: Option<f64>,
    pub pass: bool,
    pub note: String,
}

/// Absolute tolerance between a reconstruction and its closed form.
pub const RECONSTRUCTION_TOL: f64 = 1e-4;

/// Closed forms, reconstructions and stated bounds, one row per constant.
pub fn constants_table() -> Vec<ConstantRow> {
    let k = eval_constants();
    let a_rec = upper_cork_region().revolved_volume().ok();
    let c_rec = collar_region().revolved_volume().ok();
    let row = |name: &str, value: f64, rec: Option<f64>, bound: Option<f64>, note: &str| {
        let difference = rec.map(|r| (r - value).abs());
        let rec_ok = difference.is_none_or(|d| d <= RECONSTRUCTION_TOL);
        ConstantRow {
            name: name.into(),
            closed_form: value,
            reconstructed: rec,
            difference,
            bound,
            pass: bound.is_none_or(|b| value < b) && rec_ok,
            note: note.into(),
        }
    };
    vec![
        row("a", k.a, a_rec, Some(0.5), "upper cork half, revolved"),
        row(
            "b",
            k.b,
            None,
            Some(0.8),
            "no solid-of-revolution reconstruction (non-zero pi-free part)",
        ),
        row("c", k.c, c_rec, Some(1.5), "collar triangle, revolved"),
        row("total", k.total, None, Some(k.unit_ball), "2a + 2b + c"),
        row("unit_ball", k.unit_ball, None, None, "4 pi / 3"),
    ]
}
