//! Patch assemblies: the jerrycan and the sphere, torus and genus-2
//! certification fixtures.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mesh::{stitch, tessellate, MeshError, StitchReport, WELD_TOL};
use crate::patch::{
    max_abs_curvature, CurvatureReport, Mat3, ParametricPatch, PatchCurve, PatchError, PatchKind,
    Vec3,
};
use crate::profile::{blue_axis_distance, ProfileEdge, ProfileError, ProfileRegion};

/// Largest admissible thinness.
pub const MAX_THINNESS: f64 = 0.1;
pub const DEFAULT_THINNESS: f64 = 0.05;
pub const DEFAULT_RESOLUTION: usize = 128;
/// Sampled curvature may exceed 1 by this much on certified patches.
pub const CURVATURE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(
        "patch {index} ({name}) violates the curvature bound: |k| = {value} at (u, v) = ({u}, {v})"
    )]
    Curvature {
        index: usize,
        name: String,
        value: f64,
        u: f64,
        v: f64,
    },
    #[error("seam {index} between patches {a} and {b} is open by {gap:e}")]
    Seam {
        index: usize,
        a: usize,
        b: usize,
        gap: f64,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Yellow,
    Black,
    Green,
    /// Thin parts whose curvature is not bounded.
    White,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedPatch {
    pub name: String,
    pub color: Color,
    pub patch: ParametricPatch,
    /// Tessellation cells along `u` and `v`.
    pub nu: usize,
    pub nv: usize,
}

/// Straight segment in one patch's parameter space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeamCurve {
    pub patch: usize,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

impl SeamCurve {
    fn new(patch: usize, from: [f64; 2], to: [f64; 2]) -> Self {
        SeamCurve { patch, from, to }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seam {
    pub a: SeamCurve,
    pub b: SeamCurve,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyManifest {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thinness: Option<f64>,
    pub patches: Vec<PlacedPatch>,
    pub seams: Vec<Seam>,
    /// Volume known in closed form or from the exact profile, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_volume: Option<f64>,
}

/// Maximum sampled curvature of one patch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchCurvature {
    pub index: usize,
    pub name: String,
    pub color: Color,
    pub report: CurvatureReport,
}

const SEAM_SAMPLES: usize = 33;

impl AssemblyManifest {
    fn point_on(&self, c: &SeamCurve, t: f64) -> Vec3 {
        let u = c.from[0] + t * (c.to[0] - c.from[0]);
        let v = c.from[1] + t * (c.to[1] - c.from[1]);
        self.patches[c.patch].patch.point(u, v)
    }

    /// Largest distance between matching points of the two seam curves.
    pub fn seam_gap(&self, seam: &Seam) -> f64 {
        (0..SEAM_SAMPLES)
            .map(|k| {
                let t = k as f64 / (SEAM_SAMPLES - 1) as f64;
                (self.point_on(&seam.a, t) - self.point_on(&seam.b, t)).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn check_seams(&self, tol: f64) -> Result<f64, ConstructError> {
        let mut worst: f64 = 0.0;
        for (index, s) in self.seams.iter().enumerate() {
            let gap = self.seam_gap(s);
            if !(gap <= tol) {
                return Err(ConstructError::Seam {
                    index,
                    a: s.a.patch,
                    b: s.b.patch,
                    gap,
                });
            }
            worst = worst.max(gap);
        }
        Ok(worst)
    }

    /// Tessellates every patch at its stored resolution and welds the pieces.
    pub fn tessellate(&self) -> Result<StitchReport, MeshError> {
        let parts = self
            .patches
            .par_iter()
            .map(|p| tessellate(&p.patch, p.nu, p.nv))
            .collect::<Result<Vec<_>, _>>()?;
        stitch(&parts, WELD_TOL)
    }

    pub fn curvature(
        &self,
        grid_density: usize,
        refinement_levels: usize,
    ) -> Result<Vec<PatchCurvature>, PatchError> {
        self.patches
            .iter()
            .enumerate()
            .map(|(index, p)| {
                Ok(PatchCurvature {
                    index,
                    name: p.name.clone(),
                    color: p.color,
                    report: max_abs_curvature(&p.patch, grid_density, refinement_levels)?,
                })
            })
            .collect()
    }

    /// Rejects the assembly if a non-white patch bends more than `bound`.
    pub fn certify_curvature(
        &self,
        bound: f64,
        grid_density: usize,
        refinement_levels: usize,
    ) -> Result<f64, ConstructError> {
        let mut worst: f64 = 0.0;
        for c in self.curvature(grid_density, refinement_levels)? {
            if c.color == Color::White {
                continue;
            }
            let value = c.report.max_abs;
            if value > bound + CURVATURE_TOL {
                return Err(ConstructError::Curvature {
                    index: c.index,
                    name: c.name,
                    value,
                    u: c.report.location.u,
                    v: c.report.location.v,
                });
            }
            worst = worst.max(value);
        }
        Ok(worst)
    }

    /// Centre of the bounding box of a 9 x 9 parameter sample of every patch.
    pub fn centroid(&self) -> Vec3 {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.patches {
            let [u0, u1, v0, v1] = p.patch.domain;
            for j in 0..9 {
                for i in 0..9 {
                    let q = p.patch.point(
                        u0 + (u1 - u0) * i as f64 / 8.0,
                        v0 + (v1 - v0) * j as f64 / 8.0,
                    );
                    if q.iter().all(|x| x.is_finite()) {
                        lo = lo.inf(&q);
                        hi = hi.sup(&q);
                    }
                }
            }
        }
        (lo + hi) / 2.0
    }
}

/// Homothety by `s > 1` about the assembly centroid.
pub fn inflate(manifest: &AssemblyManifest, s: f64) -> Result<AssemblyManifest, ConstructError> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(ConstructError::InvalidSpec(format!(
            "inflation factor must exceed 1, got {s}"
        )));
    }
    let c = manifest.centroid();
    let mut out = manifest.clone();
    for p in &mut out.patches {
        p.patch = p.patch.scaled_about(c, s);
    }
    out.reference_volume = manifest.reference_volume.map(|v| v * s * s * s);
    out.name = format!("{} inflated by {s}", manifest.name);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JerrycanSpec {
    /// Width of the thin chambers.
    pub thinness: f64,
    /// Cells around the axis; profile cells are spaced to match.
    pub resolution: usize,
    /// Required slack in `cos(theta) >= -(2 - sqrt 3)/2` on blue arcs.
    #[serde(default)]
    pub blue_margin: f64,
}

impl Default for JerrycanSpec {
    fn default() -> Self {
        JerrycanSpec {
            thinness: DEFAULT_THINNESS,
            resolution: DEFAULT_RESOLUTION,
            blue_margin: 0.0,
        }
    }
}

impl JerrycanSpec {
    pub fn new(thinness: f64, resolution: usize) -> Self {
        JerrycanSpec {
            thinness,
            resolution,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConstructError> {
        if !(self.thinness > 0.0 && self.thinness <= MAX_THINNESS) {
            return Err(ConstructError::InvalidSpec(format!(
                "thinness {} outside (0, {MAX_THINNESS}]",
                self.thinness
            )));
        }
        if self.resolution < 8 {
            return Err(ConstructError::InvalidSpec(format!(
                "resolution {} < 8",
                self.resolution
            )));
        }
        if !(self.blue_margin >= 0.0 && self.blue_margin < 0.5) {
            return Err(ConstructError::InvalidSpec(format!(
                "blue margin {}",
                self.blue_margin
            )));
        }
        Ok(())
    }
}

type P2 = [f64; 2];

fn angle_of(center: P2, p: P2) -> f64 {
    (p[1] - center[1]).atan2(p[0] - center[0])
}

/// Half-disc closing the gap between two disjoint unit circles at their
/// nearest points. Returns the cap centre, radius and the two contact points.
fn throat_cap(a: P2, b: P2) -> (P2, f64, P2, P2) {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len = d[0].hypot(d[1]);
    let e = [d[0] / len, d[1] / len];
    let pa = [a[0] + e[0], a[1] + e[1]];
    let pb = [b[0] - e[0], b[1] - e[1]];
    let c = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
    (c, (len - 2.0) / 2.0, pa, pb)
}

/// Clockwise unit arc around `center` from point `p` to point `q`.
fn clockwise(center: P2, p: P2, q: P2) -> ProfileEdge {
    let s = angle_of(center, p);
    let sweep = (s - angle_of(center, q)).rem_euclid(TAU);
    ProfileEdge::arc(center, 1.0, s, -sweep)
}

/// Counter-clockwise arc of radius `r` around `center` from `p` to `q`.
fn counter_clockwise(center: P2, r: f64, p: P2, q: P2) -> ProfileEdge {
    let s = angle_of(center, p);
    let sweep = (angle_of(center, q) - s).rem_euclid(TAU);
    ProfileEdge::arc(center, r, s, sweep)
}

/// Meridian of the jerrycan as a counter-clockwise loop in the `(rho, z)`
/// half-plane, each edge tagged with its color.
///
/// At zero thinness the loop bounds the two cork halves and the two collars,
/// touching at tangency points. A positive thinness `e` separates the upper
/// and lower halves by `e` (a flat slab near the axis and a radius-1 cylinder
/// on the middle torus), moves the blue circles `e/16` toward the axis and
/// lifts the outer red circles by a further `e/16`. Every former tangency
/// becomes either an open channel inside the body or a throat closed by a
/// small half-disc.
pub fn jerrycan_profile(thinness: f64) -> Vec<(ProfileEdge, Color, &'static str)> {
    let r = thinness / 2.0;
    let g = thinness / 16.0;
    let beta = blue_axis_distance() - g;
    let mid_up = [2.0, r];
    let mid_down = [2.0, -r];
    let red_up = [2.0, 2.0 + r + g];
    let red_down = [2.0, -2.0 - r - g];
    let blue_up = [beta, 1.0 + r];
    let blue_down = [beta, -1.0 - r];

    let (c1, r1, b1, d1) = throat_cap(blue_down, red_down);
    let (c2, r2, d2, m2) = throat_cap(red_down, mid_down);
    let (c3, r3, m3, u3) = throat_cap(mid_up, red_up);
    let (c4, r4, u4, b4) = throat_cap(red_up, blue_up);

    vec![
        (
            ProfileEdge::segment([0.0, -r], [beta, -r]),
            Color::Green,
            "lower disc",
        ),
        (
            clockwise(blue_down, [beta, -r], b1),
            Color::Blue,
            "lower blue torus",
        ),
        (
            counter_clockwise(c1, r1, b1, d1),
            Color::White,
            "lower outer cap",
        ),
        (clockwise(red_down, d1, d2), Color::Red, "lower red torus"),
        (
            counter_clockwise(c2, r2, d2, m2),
            Color::White,
            "lower rim cap",
        ),
        (
            clockwise(mid_down, m2, [1.0, -r]),
            Color::Red,
            "middle red torus, lower half",
        ),
        (
            ProfileEdge::segment([1.0, -r], [1.0, r]),
            Color::Black,
            "cylinder",
        ),
        (
            clockwise(mid_up, [1.0, r], m3),
            Color::Red,
            "middle red torus, upper half",
        ),
        (
            counter_clockwise(c3, r3, m3, u3),
            Color::White,
            "upper rim cap",
        ),
        (clockwise(red_up, u3, u4), Color::Red, "upper red torus"),
        (
            counter_clockwise(c4, r4, u4, b4),
            Color::White,
            "upper outer cap",
        ),
        (
            clockwise(blue_up, b4, [beta, r]),
            Color::Blue,
            "upper blue torus",
        ),
        (
            ProfileEdge::segment([beta, r], [0.0, r]),
            Color::Green,
            "upper disc",
        ),
        (
            ProfileEdge::segment([0.0, r], [0.0, -r]),
            Color::Green,
            "axis",
        ),
    ]
}

fn cells(length: f64, resolution: usize) -> usize {
    ((length * resolution as f64 / TAU).ceil() as usize).max(4)
}

/// Surface swept by one profile edge about the z axis, or `None` for edges
/// lying on the axis.
fn revolve(edge: &ProfileEdge, color: Color) -> Option<ParametricPatch> {
    match *edge {
        ProfileEdge::Arc {
            center,
            radius,
            start,
            sweep,
        } => {
            let v = [start.min(start + sweep), start.max(start + sweep)];
            let kind = if (radius - 1.0).abs() < 1e-15 && matches!(color, Color::Red | Color::Blue)
            {
                PatchKind::Torus {
                    axis_distance: center[0],
                    tube_radius: 1.0,
                }
            } else {
                // arc centred on the z axis origin; the centre height goes into
                // the translation
                PatchKind::RevolvedProfile {
                    edge: ProfileEdge::arc([center[0], 0.0], radius, start, sweep),
                }
            };
            Some(
                ParametricPatch::new(kind, [0.0, TAU, v[0], v[1]])
                    .translated([0.0, 0.0, center[1]])
                    .flipped(sweep < 0.0),
            )
        }
        ProfileEdge::Segment { from, to } => {
            if from[0].abs() < 1e-12 && to[0].abs() < 1e-12 {
                return None;
            }
            if (from[1] - to[1]).abs() < 1e-15 {
                Some(
                    ParametricPatch::new(
                        PatchKind::PlaneDisc {},
                        [0.0, TAU, from[0].min(to[0]), from[0].max(to[0])],
                    )
                    .translated([0.0, 0.0, from[1]])
                    .flipped(to[0] < from[0]),
                )
            } else if (from[0] - to[0]).abs() < 1e-15 {
                Some(
                    ParametricPatch::new(
                        PatchKind::Cylinder { radius: from[0] },
                        [0.0, TAU, from[1].min(to[1]), from[1].max(to[1])],
                    )
                    .flipped(to[1] < from[1]),
                )
            } else {
                Some(ParametricPatch::new(
                    PatchKind::RevolvedProfile { edge: *edge },
                    [0.0, TAU, 0.0, 1.0],
                ))
            }
        }
    }
}

/// Parameter `v` at which the patch begins (`first`) or ends along the
/// counter-clockwise profile traversal.
fn traversal_v(patch: &ParametricPatch, first: bool) -> f64 {
    let [_, _, v0, v1] = patch.domain;
    if first != patch.flip {
        v0
    } else {
        v1
    }
}

/// Lowest `cos(theta)` on an arc.
fn min_cos(start: f64, sweep: f64) -> f64 {
    let (lo, hi) = (start.min(start + sweep), start.max(start + sweep));
    let k = ((lo - PI) / TAU).ceil();
    if PI + k * TAU <= hi {
        -1.0
    } else {
        lo.cos().min(hi.cos())
    }
}

/// Patch assembly of the jerrycan for the given thinness.
pub fn build_jerrycan(spec: &JerrycanSpec) -> Result<AssemblyManifest, ConstructError> {
    spec.validate()?;
    let beta = blue_axis_distance();
    let profile = jerrycan_profile(spec.thinness);
    let region = ProfileRegion::new(profile.iter().map(|e| e.0).collect());
    let volume = region.revolved_volume()?;

    let mut patches = Vec::new();
    for (edge, color, name) in &profile {
        if let (ProfileEdge::Arc { start, sweep, .. }, Color::Blue) = (edge, color) {
            let c = min_cos(*start, *sweep);
            if c < -beta / 2.0 + spec.blue_margin {
                return Err(ConstructError::InvalidSpec(format!(
                    "{name} reaches cos(theta) = {c}, below the curvature limit"
                )));
            }
        }
        if let Some(patch) = revolve(edge, *color) {
            patches.push(PlacedPatch {
                name: name.to_string(),
                color: *color,
                patch,
                nu: spec.resolution,
                nv: cells(edge.length(), spec.resolution),
            });
        }
    }

    let mut seams = Vec::new();
    for i in 0..patches.len() {
        let [_, _, v0, v1] = patches[i].patch.domain;
        seams.push(Seam {
            a: SeamCurve::new(i, [0.0, v0], [0.0, v1]),
            b: SeamCurve::new(i, [TAU, v0], [TAU, v1]),
        });
        if i + 1 < patches.len() {
            let va = traversal_v(&patches[i].patch, false);
            let vb = traversal_v(&patches[i + 1].patch, true);
            seams.push(Seam {
                a: SeamCurve::new(i, [0.0, va], [TAU, va]),
                b: SeamCurve::new(i + 1, [0.0, vb], [TAU, vb]),
            });
        }
    }

    let manifest = AssemblyManifest {
        name: format!("jerrycan (thinness {})", spec.thinness),
        thinness: Some(spec.thinness),
        patches,
        seams,
        reference_volume: Some(volume),
    };
    manifest.check_seams(WELD_TOL)?;
    manifest.certify_curvature(1.0, 16, 2)?;
    Ok(manifest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    Sphere,
    Torus,
    Genus2,
}

impl std::str::FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sphere" => Ok(FixtureKind::Sphere),
            "torus" => Ok(FixtureKind::Torus),
            "genus2" => Ok(FixtureKind::Genus2),
            _ => Err(format!("unknown fixture {s:?}")),
        }
    }
}

fn periodic_seams(index: usize, domain: [f64; 4], u: bool, v: bool) -> Vec<Seam> {
    let [u0, u1, v0, v1] = domain;
    let mut out = Vec::new();
    if u {
        out.push(Seam {
            a: SeamCurve::new(index, [u0, v0], [u0, v1]),
            b: SeamCurve::new(index, [u1, v0], [u1, v1]),
        });
    }
    if v {
        out.push(Seam {
            a: SeamCurve::new(index, [u0, v0], [u1, v0]),
            b: SeamCurve::new(index, [u0, v1], [u1, v1]),
        });
    }
    out
}

/// Closed fixture assembly with `resolution` cells around each circle.
/// The genus-2 fixture needs `resolution` divisible by 16.
pub fn build_fixture(
    kind: FixtureKind,
    resolution: usize,
) -> Result<AssemblyManifest, ConstructError> {
    let n = resolution;
    match kind {
        FixtureKind::Sphere => {
            let patch = ParametricPatch::sphere(1.0);
            let seams = periodic_seams(0, patch.domain, true, false);
            Ok(AssemblyManifest {
                name: "unit sphere".into(),
                thinness: None,
                patches: vec![PlacedPatch {
                    name: "sphere".into(),
                    color: Color::Yellow,
                    patch,
                    nu: n,
                    nv: n,
                }],
                seams,
                reference_volume: Some(4.0 * PI / 3.0),
            })
        }
        FixtureKind::Torus => {
            let patch = ParametricPatch::torus(2.0, 0.0, TAU);
            let seams = periodic_seams(0, patch.domain, true, true);
            Ok(AssemblyManifest {
                name: "torus R = 2".into(),
                thinness: None,
                patches: vec![PlacedPatch {
                    name: "torus".into(),
                    color: Color::Red,
                    patch,
                    nu: n,
                    nv: n,
                }],
                seams,
                reference_volume: Some(4.0 * PI * PI),
            })
        }
        FixtureKind::Genus2 => {
            if n < 32 || !n.is_multiple_of(16) {
                return Err(ConstructError::InvalidSpec(format!(
                    "genus-2 resolution must be a multiple of 16 and at least 32, got {n}"
                )));
            }
            Ok(genus2(n))
        }
    }
}

/// Two tori side by side, each with a window facing the other, joined by a
/// tube of straight rulings.
fn genus2(n: usize) -> AssemblyManifest {
    let k = n / 16;
    let w = TAU * k as f64 / n as f64;
    let turn = Mat3::new(-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
    let big = |x: f64| {
        ParametricPatch::torus(2.0, -PI, PI)
            .with_domain([w, TAU - w, -PI, PI])
            .translated([x, 0.0, 0.0])
    };
    let small = |x: f64| {
        ParametricPatch::torus(2.0, w, TAU - w)
            .with_domain([-w, w, w, TAU - w])
            .translated([x, 0.0, 0.0])
    };
    let mut patches = vec![
        PlacedPatch {
            name: "left torus".into(),
            color: Color::Red,
            patch: big(-4.0),
            nu: n - 2 * k,
            nv: n,
        },
        PlacedPatch {
            name: "left torus bridge".into(),
            color: Color::Red,
            patch: small(-4.0),
            nu: 2 * k,
            nv: n - 2 * k,
        },
        PlacedPatch {
            name: "right torus".into(),
            color: Color::Red,
            patch: big(4.0).rotated(turn),
            nu: n - 2 * k,
            nv: n,
        },
        PlacedPatch {
            name: "right torus bridge".into(),
            color: Color::Red,
            patch: small(4.0).rotated(turn),
            nu: 2 * k,
            nv: n - 2 * k,
        },
    ];
    // (torus patch, from, to) on the left; the right side is the mirror image
    // at azimuth -u
    let sides: [(usize, P2, P2, usize, P2, P2, bool, &str); 4] = [
        (
            0,
            [w, -w],
            [w, w],
            2,
            [TAU - w, -w],
            [TAU - w, w],
            false,
            "tube front",
        ),
        (
            0,
            [TAU - w, -w],
            [TAU - w, w],
            2,
            [w, -w],
            [w, w],
            true,
            "tube back",
        ),
        (1, [-w, w], [w, w], 3, [w, w], [-w, w], true, "tube top"),
        (
            1,
            [-w, TAU - w],
            [w, TAU - w],
            3,
            [w, TAU - w],
            [-w, TAU - w],
            false,
            "tube bottom",
        ),
    ];
    let mut seams = Vec::new();
    for (ia, fa, ta, ib, fb, tb, flip, name) in sides {
        let idx = patches.len();
        let ruled = ParametricPatch::new(
            PatchKind::Ruled {
                a: Box::new(PatchCurve {
                    patch: patches[ia].patch.clone(),
                    from: fa,
                    to: ta,
                }),
                b: Box::new(PatchCurve {
                    patch: patches[ib].patch.clone(),
                    from: fb,
                    to: tb,
                }),
            },
            [0.0, 1.0, 0.0, 1.0],
        )
        .flipped(flip);
        patches.push(PlacedPatch {
            name: name.into(),
            color: Color::Black,
            patch: ruled,
            nu: 2 * k,
            nv: k,
        });
        seams.push(Seam {
            a: SeamCurve::new(idx, [0.0, 0.0], [1.0, 0.0]),
            b: SeamCurve::new(ia, fa, ta),
        });
        seams.push(Seam {
            a: SeamCurve::new(idx, [0.0, 1.0], [1.0, 1.0]),
            b: SeamCurve::new(ib, fb, tb),
        });
    }
    // tube corners: front/top, back/top, front/bottom, back/bottom
    for (a, ta, b, tb) in [
        (4, 1.0, 6, 1.0),
        (5, 1.0, 6, 0.0),
        (4, 0.0, 7, 1.0),
        (5, 0.0, 7, 0.0),
    ] {
        seams.push(Seam {
            a: SeamCurve::new(a, [ta, 0.0], [ta, 1.0]),
            b: SeamCurve::new(b, [tb, 0.0], [tb, 1.0]),
        });
    }
    // torus pieces along the window columns and the meridian cut
    for (bigp, smallp) in [(0, 1), (2, 3)] {
        seams.push(Seam {
            a: SeamCurve::new(smallp, [w, w], [w, PI]),
            b: SeamCurve::new(bigp, [w, w], [w, PI]),
        });
        seams.push(Seam {
            a: SeamCurve::new(smallp, [w, PI], [w, TAU - w]),
            b: SeamCurve::new(bigp, [w, -PI], [w, -w]),
        });
        seams.push(Seam {
            a: SeamCurve::new(smallp, [-w, w], [-w, PI]),
            b: SeamCurve::new(bigp, [TAU - w, w], [TAU - w, PI]),
        });
        seams.push(Seam {
            a: SeamCurve::new(smallp, [-w, PI], [-w, TAU - w]),
            b: SeamCurve::new(bigp, [TAU - w, -PI], [TAU - w, -w]),
        });
        seams.extend(periodic_seams(
            bigp,
            patches[bigp].patch.domain,
            false,
            true,
        ));
    }
    AssemblyManifest {
        name: "genus-2 fixture".into(),
        thinness: None,
        patches,
        seams,
        reference_volume: None,
    }
}
