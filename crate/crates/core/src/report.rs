//! Verification reports tying topology, volume, curvature and the inscribed
//! ball together.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{AssemblyManifest, Color, ConstructError, CURVATURE_TOL};
use crate::mesh::{enclosed_volume, inscribed_ball, topology, MeshError, TopologyReport, TriMesh};
use crate::profile::{eval_constants, VolumeConstants};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("malformed report")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologySummary {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub chi: i64,
    pub genus: Option<i64>,
    pub watertight: bool,
    pub orientable: bool,
}

impl From<&TopologyReport> for TopologySummary {
    fn from(t: &TopologyReport) -> Self {
        TopologySummary {
            v: t.v,
            e: t.e,
            f: t.f,
            chi: t.chi,
            genus: t.genus,
            watertight: t.watertight,
            orientable: t.orientable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCurvature {
    pub value: f64,
    pub location: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSummary {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub input: String,
    pub topology: TopologySummary,
    /// `None` when the mesh does not enclose a volume.
    pub volume: Option<f64>,
    /// `None` for raw meshes, which carry no analytic patches.
    pub max_curvature: Option<MaxCurvature>,
    pub inscribed_ball: Option<BallSummary>,
    pub constants: VolumeConstants,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Plain-text summary, one line per item.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.topology;
        out += &format!("input        {}\n", self.input);
        out += &format!(
            "topology     V={} E={} F={} chi={} genus={} watertight={} orientable={}\n",
            t.v,
            t.e,
            t.f,
            t.chi,
            t.genus.map_or("-".to_string(), |g| g.to_string()),
            t.watertight,
            t.orientable
        );
        match self.volume {
            Some(v) => out += &format!("volume       {v:.6}\n"),
            None => out += "volume       undefined\n",
        }
        if let Some(k) = &self.max_curvature {
            out += &format!("max |k|      {:.9} at {:?}\n", k.value, k.location);
        }
        if let Some(b) = &self.inscribed_ball {
            out += &format!("inradius     {:.6} at {:?}\n", b.radius, b.center);
        }
        let c = &self.constants;
        out += &format!(
            "constants    a={:.6} b={:.6} c={:.6} total={:.6} unit ball={:.6}\n",
            c.a, c.b, c.c, c.total, c.unit_ball
        );
        for ch in &self.checks {
            out += &format!(
                "{} {:<28} measured {:.9} bound {:.9} tol {:e}\n",
                if ch.pass { "PASS" } else { "FAIL" },
                ch.name,
                ch.measured,
                ch.bound,
                ch.tolerance
            );
        }
        out += if self.passed() {
            "result       PASS\n"
        } else {
            "result       FAIL\n"
        };
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub curvature_bound: f64,
    pub sdf_resolution: usize,
    pub curvature_density: usize,
    pub refinement_levels: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            curvature_bound: 1.0,
            sdf_resolution: 64,
            curvature_density: 64,
            refinement_levels: 4,
        }
    }
}

/// What a built-in assembly is expected to satisfy.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Expectations {
    pub genus: Option<i64>,
    /// Enclosed volume must stay below this.
    pub volume_below: Option<f64>,
    /// Reference volume and relative tolerance.
    pub volume_near: Option<(f64, f64)>,
    /// Reference inradius and relative tolerance.
    pub inradius_near: Option<(f64, f64)>,
}

fn check(name: &str, measured: f64, bound: f64, tolerance: f64, pass: bool) -> Check {
    Check {
        name: name.into(),
        measured,
        bound,
        tolerance,
        pass,
    }
}

fn mesh_checks(
    topo: &TopologyReport,
    volume: Option<f64>,
    ball: Option<&BallSummary>,
    expect: &Expectations,
) -> Vec<Check> {
    let mut checks = vec![
        check(
            "watertight",
            topo.boundary_edges as f64,
            0.0,
            0.0,
            topo.watertight,
        ),
        check(
            "orientable",
            if topo.orientable { 1.0 } else { 0.0 },
            1.0,
            0.0,
            topo.orientable,
        ),
    ];
    if let Some(g) = expect.genus {
        let measured = topo.genus.map_or(f64::from(-1), |x| x as f64);
        checks.push(check(
            "genus",
            measured,
            g as f64,
            0.0,
            topo.genus == Some(g),
        ));
    }
    let v = volume.unwrap_or(f64::NAN);
    if let Some(bound) = expect.volume_below {
        checks.push(check("volume below", v, bound, 0.0, v < bound));
    }
    if let Some((reference, rel)) = expect.volume_near {
        let tol = rel * reference;
        checks.push(check(
            "volume",
            v,
            reference,
            tol,
            (v - reference).abs() <= tol,
        ));
    }
    if let Some((reference, rel)) = expect.inradius_near {
        let r = ball.map_or(f64::NAN, |b| b.radius);
        let tol = rel * reference;
        checks.push(check(
            "inradius",
            r,
            reference,
            tol,
            (r - reference).abs() <= tol,
        ));
    }
    if volume.is_none() {
        checks.push(check("volume defined", 0.0, 1.0, 0.0, false));
    }
    checks
}

fn measure(
    mesh: &TriMesh,
    opts: &VerifyOptions,
) -> Result<(TopologyReport, Option<f64>, Option<BallSummary>), ReportError> {
    let topo = topology(mesh)?;
    let volume = if topo.watertight && topo.consistently_oriented {
        Some(enclosed_volume(mesh)?)
    } else {
        None
    };
    let ball = if volume.is_some() {
        let b = inscribed_ball(mesh, opts.sdf_resolution)?;
        Some(BallSummary {
            center: b.center,
            radius: b.radius,
        })
    } else {
        None
    };
    Ok((topo, volume, ball))
}

/// Report for a raw triangle mesh: topology, volume and inscribed ball.
pub fn verify_mesh(
    input: &str,
    mesh: &TriMesh,
    opts: &VerifyOptions,
) -> Result<VerificationReport, ReportError> {
    let (topo, volume, ball) = measure(mesh, opts)?;
    let checks = mesh_checks(&topo, volume, ball.as_ref(), &Expectations::default());
    Ok(VerificationReport {
        version: VERSION.into(),
        input: input.into(),
        topology: (&topo).into(),
        volume,
        max_curvature: None,
        inscribed_ball: ball,
        constants: eval_constants(),
        checks,
    })
}

/// Report for a patch assembly: its stitched tessellation plus sampled
/// curvature of every patch that is not white.
pub fn verify_manifest(
    input: &str,
    manifest: &AssemblyManifest,
    expect: &Expectations,
    opts: &VerifyOptions,
) -> Result<VerificationReport, ReportError> {
    let mesh = manifest.tessellate()?.mesh;
    let (topo, volume, ball) = measure(&mesh, opts)?;
    let mut checks = mesh_checks(&topo, volume, ball.as_ref(), expect);
    let curv = manifest
        .curvature(opts.curvature_density, opts.refinement_levels)
        .map_err(ConstructError::from)?;
    let worst = curv
        .iter()
        .filter(|c| c.color != Color::White)
        .max_by(|a, b| a.report.max_abs.total_cmp(&b.report.max_abs));
    let max_curvature = worst.map(|c| MaxCurvature {
        value: c.report.max_abs,
        location: c.report.location.position,
    });
    if let Some(k) = &max_curvature {
        checks.push(check(
            "max curvature",
            k.value,
            opts.curvature_bound,
            CURVATURE_TOL,
            k.value <= opts.curvature_bound + CURVATURE_TOL,
        ));
    }
    Ok(VerificationReport {
        version: VERSION.into(),
        input: input.into(),
        topology: (&topo).into(),
        volume,
        max_curvature,
        inscribed_ball: ball,
        constants: eval_constants(),
        checks,
    })
}

/// Expectations for the built-in assemblies.
pub fn builtin_expectations(name: &str) -> Expectations {
    let ball = 4.0 * PI / 3.0;
    match name {
        "jerrycan" => Expectations {
            genus: Some(0),
            volume_below: Some(ball),
            ..Default::default()
        },
        "sphere" => Expectations {
            genus: Some(0),
            volume_near: Some((ball, 0.005)),
            inradius_near: Some((1.0, 0.02)),
            ..Default::default()
        },
        "torus" => Expectations {
            genus: Some(1),
            volume_near: Some((4.0 * PI * PI, 0.005)),
            ..Default::default()
        },
        "genus2" => Expectations {
            genus: Some(2),
            ..Default::default()
        },
        _ => Expectations::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_fixture, FixtureKind};
    use crate::mesh::fixtures::unit_cube;

    #[test]
    fn sphere_report_passes_and_round_trips() {
        let m = build_fixture(FixtureKind::Sphere, 64).unwrap();
        let r = verify_manifest(
            "builtin:sphere",
            &m,
            &builtin_expectations("sphere"),
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let json = r.to_json();
        assert_eq!(VerificationReport::from_json(&json).unwrap(), r);
        assert_eq!(r.to_json(), json);
    }

    fn in_order(json: &str, keys: &[&str]) -> bool {
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| json.find(&format!("\"{k}\":")).expect(k))
            .collect();
        pos.windows(2).all(|w| w[0] < w[1])
    }

    #[test]
    fn report_keys_follow_the_schema() {
        let r = verify_mesh("cube", &unit_cube(), &VerifyOptions::default()).unwrap();
        let json = r.to_json();
        assert!(in_order(
            &json,
            &[
                "version",
                "input",
                "topology",
                "V",
                "E",
                "F",
                "chi",
                "genus",
                "watertight",
                "orientable",
                "volume",
                "max_curvature",
                "inscribed_ball",
                "constants",
                "checks",
                "name",
                "measured",
                "bound",
                "tolerance",
                "pass"
            ]
        ));
        assert!(json.contains("\"max_curvature\": null"));
    }

    #[test]
    fn open_mesh_has_undefined_volume() {
        let mut m = unit_cube();
        m.triangles.pop();
        let r = verify_mesh("open", &m, &VerifyOptions::default()).unwrap();
        assert_eq!(r.volume, None);
        assert!(!r.passed());
    }
}
