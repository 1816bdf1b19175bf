//! Analytic parametric patches, fundamental forms and principal curvatures.
//!
//! Every patch kind except `Ruled` is a surface of revolution about the local
//! z axis: `u` is the azimuth and `v` runs along the profile curve. Placement
//! is a rigid motion followed by an optional uniform scale (used by inflation).

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::ProfileEdge;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Slack allowed when checking that a parameter lies inside the domain.
const DOMAIN_SLACK: f64 = 1e-12;
/// Profile points closer than this to the axis are singular.
pub const AXIS_CLEARANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatchError {
    #[error("parameter ({u}, {v}) outside the patch domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("singular point at ({u}, {v}): profile touches the axis")]
    Singular { u: f64, v: f64 },
    #[error("degenerate parametrization at ({u}, {v}): EG - F^2 = {det}")]
    Degenerate { u: f64, v: f64, det: f64 },
    #[error("invalid patch: {0}")]
    Invalid(String),
}

/// Curve on another patch, linear in that patch's parameter space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchCurve {
    pub patch: ParametricPatch,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum PatchKind {
    Sphere {
        radius: f64,
    },
    Torus {
        #[serde(rename = "R")]
        axis_distance: f64,
        #[serde(rename = "r")]
        tube_radius: f64,
    },
    Cylinder {
        radius: f64,
    },
    PlaneDisc {},
    RevolvedProfile {
        edge: ProfileEdge,
    },
    /// Straight-line blend `(1 - v) a(u) + v b(u)` between two patch curves.
    Ruled {
        a: Box<PatchCurve>,
        b: Box<PatchCurve>,
    },
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_one(s: &f64) -> bool {
    *s == 1.0
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricPatch {
    #[serde(flatten)]
    pub kind: PatchKind,
    /// `[u_min, u_max, v_min, v_max]`
    pub domain: [f64; 4],
    /// Row-major orthonormal matrix.
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
    /// Uniform scale applied before the rotation. Only inflation changes it.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    /// Reverse the normal `Xu x Xv`.
    #[serde(default, skip_serializing_if = "is_false")]
    pub flip: bool,
}

/// Position and analytic partial derivatives at a parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub position: Vec3,
    pub du: Vec3,
    pub dv: Vec3,
    pub duu: Vec3,
    pub duv: Vec3,
    pub dvv: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub u: f64,
    pub v: f64,
    pub position: [f64; 3],
    pub k1: f64,
    pub k2: f64,
    pub normal: [f64; 3],
}

impl CurvatureSample {
    pub fn max_abs(&self) -> f64 {
        self.k1.abs().max(self.k2.abs())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub max_abs: f64,
    pub location: CurvatureSample,
    pub samples: usize,
    /// Parameter points where the forms were degenerate.
    pub flagged: Vec<[f64; 2]>,
}

/// Profile `(rho, z)` with first and second derivatives in `v`.
#[derive(Clone, Copy, Debug)]
struct Profile {
    rho: f64,
    rho_v: f64,
    rho_vv: f64,
    z: f64,
    z_v: f64,
    z_vv: f64,
}

pub const IDENTITY: [f64; 9] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];

impl ParametricPatch {
    pub fn new(kind: PatchKind, domain: [f64; 4]) -> Self {
        ParametricPatch {
            kind,
            domain,
            rotation: IDENTITY,
            translation: [0.0; 3],
            scale: 1.0,
            flip: false,
        }
    }

    /// Full unit-radius sphere: azimuth `u` and latitude `v`.
    pub fn sphere(radius: f64) -> Self {
        use std::f64::consts::{FRAC_PI_2, TAU};
        Self::new(
            PatchKind::Sphere { radius },
            [0.0, TAU, -FRAC_PI_2, FRAC_PI_2],
        )
    }

    /// Torus with unit tube about the z axis, `v` the meridian angle.
    pub fn torus(axis_distance: f64, v_min: f64, v_max: f64) -> Self {
        Self::new(
            PatchKind::Torus {
                axis_distance,
                tube_radius: 1.0,
            },
            [0.0, std::f64::consts::TAU, v_min, v_max],
        )
    }

    pub fn translated(mut self, t: [f64; 3]) -> Self {
        self.translation = t;
        self
    }

    pub fn rotated(mut self, r: Mat3) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.rotation[3 * i + j] = r[(i, j)];
            }
        }
        self
    }

    pub fn flipped(mut self, flip: bool) -> Self {
        self.flip = flip;
        self
    }

    pub fn with_domain(mut self, domain: [f64; 4]) -> Self {
        self.domain = domain;
        self
    }

    pub fn rotation_matrix(&self) -> Mat3 {
        Mat3::from_row_slice(&self.rotation)
    }

    pub fn translation_vector(&self) -> Vec3 {
        Vec3::from_column_slice(&self.translation)
    }

    pub fn validate(&self) -> Result<(), PatchError> {
        let [u0, u1, v0, v1] = self.domain;
        if !(u0 < u1 && v0 < v1) {
            return Err(PatchError::Invalid(format!(
                "empty domain {:?}",
                self.domain
            )));
        }
        let r = self.rotation_matrix();
        let rtr = r.transpose() * r;
        let dev = (rtr - Mat3::identity()).abs().max();
        if dev > 1e-12 || !dev.is_finite() {
            return Err(PatchError::Invalid(format!(
                "rotation not orthonormal (deviation {dev:e})"
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(PatchError::Invalid(format!("scale {}", self.scale)));
        }
        match &self.kind {
            PatchKind::Sphere { radius } | PatchKind::Cylinder { radius } if *radius <= 0.0 => {
                Err(PatchError::Invalid(format!("radius {radius}")))
            }
            PatchKind::Torus {
                axis_distance,
                tube_radius,
            } => {
                if *axis_distance <= 0.0 {
                    Err(PatchError::Invalid(format!(
                        "axis distance {axis_distance}"
                    )))
                } else if (*tube_radius - 1.0).abs() > 1e-12 {
                    Err(PatchError::Invalid(format!(
                        "torus tube radius must be 1, got {tube_radius}"
                    )))
                } else {
                    Ok(())
                }
            }
            PatchKind::RevolvedProfile { edge } => edge
                .validate()
                .map_err(|e| PatchError::Invalid(e.to_string())),
            PatchKind::Ruled { a, b } => {
                a.patch.validate()?;
                b.patch.validate()
            }
            _ => Ok(()),
        }
    }

    fn profile(&self, v: f64) -> Option<Profile> {
        Some(match &self.kind {
            PatchKind::Sphere { radius: r } => {
                let (s, c) = v.sin_cos();
                Profile {
                    rho: r * c,
                    rho_v: -r * s,
                    rho_vv: -r * c,
                    z: r * s,
                    z_v: r * c,
                    z_vv: -r * s,
                }
            }
            PatchKind::Torus {
                axis_distance,
                tube_radius: r,
            } => {
                let (s, c) = v.sin_cos();
                Profile {
                    rho: axis_distance + r * c,
                    rho_v: -r * s,
                    rho_vv: -r * c,
                    z: r * s,
                    z_v: r * c,
                    z_vv: -r * s,
                }
            }
            PatchKind::Cylinder { radius } => Profile {
                rho: *radius,
                rho_v: 0.0,
                rho_vv: 0.0,
                z: v,
                z_v: 1.0,
                z_vv: 0.0,
            },
            PatchKind::PlaneDisc {} => Profile {
                rho: v,
                rho_v: 1.0,
                rho_vv: 0.0,
                z: 0.0,
                z_v: 0.0,
                z_vv: 0.0,
            },
            PatchKind::RevolvedProfile { edge } => match *edge {
                ProfileEdge::Arc {
                    center, radius: r, ..
                } => {
                    let (s, c) = v.sin_cos();
                    Profile {
                        rho: center[0] + r * c,
                        rho_v: -r * s,
                        rho_vv: -r * c,
                        z: center[1] + r * s,
                        z_v: r * c,
                        z_vv: -r * s,
                    }
                }
                ProfileEdge::Segment { from, to } => Profile {
                    rho: from[0] + v * (to[0] - from[0]),
                    rho_v: to[0] - from[0],
                    rho_vv: 0.0,
                    z: from[1] + v * (to[1] - from[1]),
                    z_v: to[1] - from[1],
                    z_vv: 0.0,
                },
            },
            PatchKind::Ruled { .. } => return None,
        })
    }

    fn local(&self, u: f64, v: f64) -> Result<Evaluation, PatchError> {
        if let PatchKind::Ruled { a, b } = &self.kind {
            let (ea, da, dda) = a.eval(u)?;
            let (eb, db, ddb) = b.eval(u)?;
            let w = 1.0 - v;
            return Ok(Evaluation {
                position: ea * w + eb * v,
                du: da * w + db * v,
                dv: eb - ea,
                duu: dda * w + ddb * v,
                duv: db - da,
                dvv: Vec3::zeros(),
            });
        }
        let p = self.profile(v).expect("revolution kind");
        let (su, cu) = u.sin_cos();
        Ok(Evaluation {
            position: Vec3::new(p.rho * cu, p.rho * su, p.z),
            du: Vec3::new(-p.rho * su, p.rho * cu, 0.0),
            dv: Vec3::new(p.rho_v * cu, p.rho_v * su, p.z_v),
            duu: Vec3::new(-p.rho * cu, -p.rho * su, 0.0),
            duv: Vec3::new(-p.rho_v * su, p.rho_v * cu, 0.0),
            dvv: Vec3::new(p.rho_vv * cu, p.rho_vv * su, p.z_vv),
        })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let [u0, u1, v0, v1] = self.domain;
        let su = DOMAIN_SLACK * (1.0 + u0.abs().max(u1.abs()));
        let sv = DOMAIN_SLACK * (1.0 + v0.abs().max(v1.abs()));
        u >= u0 - su && u <= u1 + su && v >= v0 - sv && v <= v1 + sv
    }

    /// Position and analytic partials, including placement.
    pub fn evaluate(&self, u: f64, v: f64) -> Result<Evaluation, PatchError> {
        if !self.contains(u, v) {
            return Err(PatchError::OutOfDomain { u, v });
        }
        if let PatchKind::RevolvedProfile { .. } = self.kind {
            if self
                .profile(v)
                .is_some_and(|p| p.rho.abs() < AXIS_CLEARANCE)
            {
                return Err(PatchError::Singular { u, v });
            }
        }
        let e = self.local(u, v)?;
        let m = self.rotation_matrix() * self.scale;
        Ok(Evaluation {
            position: m * e.position + self.translation_vector(),
            du: m * e.du,
            dv: m * e.dv,
            duu: m * e.duu,
            duv: m * e.duv,
            dvv: m * e.dvv,
        })
    }

    /// Placed position without domain or singularity checks.
    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        let local = match self.local(u, v) {
            Ok(e) => e.position,
            Err(_) => Vec3::repeat(f64::NAN),
        };
        self.rotation_matrix() * (local * self.scale) + self.translation_vector()
    }

    /// Oriented unit normal, `None` at singular points.
    pub fn normal(&self, e: &Evaluation) -> Option<Vec3> {
        let n = e.du.cross(&e.dv);
        let len = n.norm();
        let scale = self.scale * (1.0 + e.du.norm().max(e.dv.norm()));
        if len <= 1e-14 * scale * scale || !len.is_finite() {
            return None;
        }
        Some(if self.flip { -n / len } else { n / len })
    }

    /// Copy with the homothety `x -> c + s (x - c)` applied to the placement.
    pub fn scaled_about(&self, c: Vec3, s: f64) -> Self {
        let mut out = self.clone();
        out.scale *= s;
        let t = c + (self.translation_vector() - c) * s;
        out.translation = [t.x, t.y, t.z];
        if let PatchKind::Ruled { a, b } = &self.kind {
            let mut a = a.clone();
            let mut b = b.clone();
            a.patch = a.patch.scaled_about(c, s);
            b.patch = b.patch.scaled_about(c, s);
            out.kind = PatchKind::Ruled { a, b };
            out.scale = self.scale;
            out.translation = self.translation;
        }
        out
    }
}

impl PatchCurve {
    /// Position, first and second derivative in the curve parameter `t`.
    fn eval(&self, t: f64) -> Result<(Vec3, Vec3, Vec3), PatchError> {
        let du = self.to[0] - self.from[0];
        let dv = self.to[1] - self.from[1];
        let e = self
            .patch
            .evaluate(self.from[0] + t * du, self.from[1] + t * dv)?;
        Ok((
            e.position,
            e.du * du + e.dv * dv,
            e.duu * (du * du) + e.duv * (2.0 * du * dv) + e.dvv * (dv * dv),
        ))
    }
}

/// First and second fundamental forms with the oriented unit normal.
pub fn fundamental_forms(
    patch: &ParametricPatch,
    u: f64,
    v: f64,
) -> Result<(FundamentalForms, Evaluation, Vec3), PatchError> {
    let e = patch.evaluate(u, v)?;
    let ff = FundamentalForms {
        e: e.du.dot(&e.du),
        f: e.du.dot(&e.dv),
        g: e.dv.dot(&e.dv),
        l: 0.0,
        m: 0.0,
        n: 0.0,
    };
    let det = ff.e * ff.g - ff.f * ff.f;
    let n = match patch.normal(&e) {
        Some(n) if det > 0.0 => n,
        _ => return Err(PatchError::Degenerate { u, v, det }),
    };
    Ok((
        FundamentalForms {
            l: e.duu.dot(&n),
            m: e.duv.dot(&n),
            n: e.dvv.dot(&n),
            ..ff
        },
        e,
        n,
    ))
}

/// Eigenvalues of the shape operator, sorted `k1 >= k2`.
///
/// The operator is symmetrized with the Cholesky factor of the first form so
/// that umbilic points do not lose half their digits in a square root.
pub fn principal_curvatures(ff: &FundamentalForms) -> (f64, f64) {
    let l11 = ff.e.sqrt();
    let l21 = ff.f / l11;
    let l22 = (ff.g - l21 * l21).sqrt();
    // S = L^-1 II L^-T with L lower triangular
    let a = ff.l / (l11 * l11);
    let b = (ff.m - l21 * a * l11) / (l11 * l22);
    let c = (ff.n - 2.0 * l21 * b * l22 - l21 * l21 * a) / (l22 * l22);
    let mean = 0.5 * (a + c);
    let r = (0.5 * (a - c)).hypot(b);
    (mean + r, mean - r)
}

pub fn curvature_sample(
    patch: &ParametricPatch,
    u: f64,
    v: f64,
) -> Result<CurvatureSample, PatchError> {
    let (ff, e, n) = fundamental_forms(patch, u, v)?;
    let (k1, k2) = principal_curvatures(&ff);
    Ok(CurvatureSample {
        u,
        v,
        position: e.position.into(),
        k1,
        k2,
        normal: n.into(),
    })
}

fn better(a: &CurvatureSample, b: &CurvatureSample) -> bool {
    a.max_abs() > b.max_abs()
}

/// Sampled maximum of `|k1|, |k2|` on a uniform grid plus local refinement
/// around the running maximum.
pub fn max_abs_curvature(
    patch: &ParametricPatch,
    grid_density: usize,
    refinement_levels: usize,
) -> Result<CurvatureReport, PatchError> {
    if grid_density < 8 {
        return Err(PatchError::Invalid(format!(
            "grid density {grid_density} < 8"
        )));
    }
    let [u0, u1, v0, v1] = patch.domain;
    let n = grid_density;
    let rows: Vec<(Option<CurvatureSample>, Vec<[f64; 2]>, usize)> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let v = v0 + (v1 - v0) * j as f64 / n as f64;
            let mut best: Option<CurvatureSample> = None;
            let mut flagged = Vec::new();
            let mut count = 0;
            for i in 0..=n {
                let u = u0 + (u1 - u0) * i as f64 / n as f64;
                match curvature_sample(patch, u, v) {
                    Ok(s) => {
                        count += 1;
                        if best.as_ref().is_none_or(|b| better(&s, b)) {
                            best = Some(s);
                        }
                    }
                    Err(_) => flagged.push([u, v]),
                }
            }
            (best, flagged, count)
        })
        .collect();

    let mut best: Option<CurvatureSample> = None;
    let mut flagged = Vec::new();
    let mut samples = 0;
    for (b, f, c) in rows {
        samples += c;
        flagged.extend(f);
        if let Some(b) = b {
            if best.as_ref().is_none_or(|cur| better(&b, cur)) {
                best = Some(b);
            }
        }
    }
    let mut best =
        best.ok_or_else(|| PatchError::Invalid("no regular sample points in the domain".into()))?;

    let (mut hu, mut hv) = ((u1 - u0) / n as f64, (v1 - v0) / n as f64);
    for _ in 0..refinement_levels {
        let (cu, cv) = (best.u, best.v);
        for j in -4i32..=4 {
            for i in -4i32..=4 {
                let u = (cu + hu * i as f64 / 4.0).clamp(u0, u1);
                let v = (cv + hv * j as f64 / 4.0).clamp(v0, v1);
                if let Ok(s) = curvature_sample(patch, u, v) {
                    samples += 1;
                    if better(&s, &best) {
                        best = s;
                    }
                }
            }
        }
        hu /= 4.0;
        hv /= 4.0;
    }
    Ok(CurvatureReport {
        max_abs: best.max_abs(),
        location: best,
        samples,
        flagged,
    })
}
