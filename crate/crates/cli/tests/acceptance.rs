//! Exit criteria, one line each. Runs without the libtest harness so every
//! line is printed; exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use curvbound::construct::{
    build_fixture, build_jerrycan, inflate, AssemblyManifest, FixtureKind, JerrycanSpec,
};
use curvbound::mesh::{
    enclosed_volume, export, import, inscribed_ball, stitch, topology, MeshFormat, TriMesh,
    WELD_TOL,
};
use curvbound::patch::{curvature_sample, max_abs_curvature, ParametricPatch};
use curvbound::planar::{certify_unit_disc, random_corpus, ArcSpline};
use curvbound::profile::{eval_constants, ProfileEdge, ProfileRegion};
use curvbound::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIT_BALL: f64 = 4.0 * PI / 3.0;

// 30-digit evaluations of the closed forms (mpmath, 50-digit working precision).
const A: f64 = 0.428225234900418379385682729892;
const B: f64 = 0.700793996902178883821598890089;
const C: f64 = 1.44141701921636686411566127587;
const TOTAL: f64 = 3.69945548282156139053022451583;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn jerrycan(thinness: f64, resolution: usize) -> AssemblyManifest {
    build_jerrycan(&JerrycanSpec::new(thinness, resolution)).expect("jerrycan builds")
}

fn mesh_of(m: &AssemblyManifest) -> TriMesh {
    m.tessellate().expect("tessellates").mesh
}

fn constants() -> Outcome {
    let t = Instant::now();
    let k = eval_constants();
    let elapsed = t.elapsed();
    let close = [(k.a, A), (k.b, B), (k.c, C), (k.total, TOTAL)]
        .iter()
        .all(|(x, y)| (x - y).abs() <= 1e-6);
    let bounds = k.a < 0.5 && k.b < 0.8 && k.c < 1.5 && k.total < UNIT_BALL;
    let unit_ok = (k.unit_ball - UNIT_BALL).abs() <= 1e-12;
    outcome(
        close && bounds && unit_ok && elapsed < Duration::from_secs(1),
        format!(
            "a={:.6} b={:.6} c={:.6} total={:.6} < {:.6}",
            k.a, k.b, k.c, k.total, k.unit_ball
        ),
    )
}

fn headline() -> Outcome {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_curvbound"))
        .args(["verify", "--builtin", "jerrycan", "--json"])
        .output()
        .expect("binary runs");
    let elapsed = t.elapsed();
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json report");
    let topo = &r["topology"];
    let volume = r["volume"].as_f64().unwrap_or(f64::NAN);
    let kappa = r["max_curvature"]["value"].as_f64().unwrap_or(f64::NAN);
    let pass = out.status.code() == Some(0)
        && topo["watertight"] == true
        && topo["orientable"] == true
        && topo["genus"] == 0
        && volume < 4.188790
        && kappa <= 1.0 + 1e-6
        && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "genus {} volume {volume:.6} max|k| {kappa:.9} in {:.1}s",
            topo["genus"],
            elapsed.as_secs_f64()
        ),
    )
}

fn convergence() -> Outcome {
    let eps = [0.08, 0.04, 0.02];
    let vols: Vec<f64> = eps
        .iter()
        .map(|&e| enclosed_volume(&mesh_of(&jerrycan(e, 256))).expect("closed"))
        .collect();
    let decreasing = vols.windows(2).all(|w| w[0] > w[1]);
    // least-squares line through the three samples
    let n = eps.len() as f64;
    let mx = eps.iter().sum::<f64>() / n;
    let my = vols.iter().sum::<f64>() / n;
    let sxy: f64 = eps
        .iter()
        .zip(&vols)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = eps.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    outcome(
        decreasing && (intercept - 3.699).abs() <= 0.05,
        format!(
            "V = {:.6}, {:.6}, {:.6}; extrapolated {intercept:.6} (slope {slope:.3})",
            vols[0], vols[1], vols[2]
        ),
    )
}

fn inscribed() -> Outcome {
    let target = 6f64.sqrt() / 2.0 - 1.0;
    let j = inscribed_ball(&mesh_of(&jerrycan(0.05, 128)), 96).expect("ball");
    let s = inscribed_ball(
        &mesh_of(&build_fixture(FixtureKind::Sphere, 128).unwrap()),
        96,
    )
    .expect("ball");
    let pass = j.radius >= 0.21 && (s.radius - 1.0).abs() <= 0.02;
    outcome(
        pass,
        format!(
            "jerrycan r={:.4} (need >= 0.21, target {target:.7}), sphere r={:.4}",
            j.radius, s.radius
        ),
    )
}

fn rotation(axis: Vec3, angle: f64) -> Mat3 {
    let k = axis.normalize();
    let kx = Mat3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Mat3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

fn random_placement(p: ParametricPatch, rng: &mut ChaCha8Rng) -> ParametricPatch {
    let axis = Vec3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    let r = rotation(axis + Vec3::new(0.0, 0.0, 1e-3), rng.gen_range(0.0..TAU));
    let t = [
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    ];
    let placed_r = r * p.rotation_matrix();
    let placed_t = r * p.translation_vector() + Vec3::from(t);
    let mut q = p.rotated(placed_r);
    q.translation = placed_t.into();
    q
}

/// Largest error of the analytic partials against central differences of
/// the position (first order) and of the analytic first partials (second).
fn partials_error(p: &ParametricPatch, u: f64, v: f64) -> Option<f64> {
    let h = 1e-5;
    let e = p.evaluate(u, v).ok()?;
    let at = |du: f64, dv: f64| p.evaluate(u + du, v + dv).ok();
    let (up, um, vp, vm) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
    let pairs = [
        (e.du, (up.position - um.position) / (2.0 * h)),
        (e.dv, (vp.position - vm.position) / (2.0 * h)),
        (e.duu, (up.du - um.du) / (2.0 * h)),
        (e.duv, (vp.du - vm.du) / (2.0 * h)),
        (e.duv, (up.dv - um.dv) / (2.0 * h)),
        (e.dvv, (vp.dv - vm.dv) / (2.0 * h)),
    ];
    Some(
        pairs
            .iter()
            .map(|(a, fd)| (a - fd).norm() / a.norm().max(1.0))
            .fold(0.0, f64::max),
    )
}

fn curvature_oracles() -> Outcome {
    let torus2 = max_abs_curvature(&ParametricPatch::torus(2.0, -PI, PI), 64, 4).unwrap();
    let beta = 2.0 - 3f64.sqrt();
    let edge = (-beta / 2.0).acos();
    let restricted = max_abs_curvature(&ParametricPatch::torus(beta, -edge, edge), 64, 4).unwrap();
    let full = max_abs_curvature(&ParametricPatch::torus(beta, -PI, PI), 64, 4).unwrap();

    let mut pool: Vec<ParametricPatch> = vec![ParametricPatch::sphere(1.0)];
    for m in [
        jerrycan(0.05, 32),
        build_fixture(FixtureKind::Torus, 32).unwrap(),
        build_fixture(FixtureKind::Genus2, 32).unwrap(),
    ] {
        pool.extend(m.patches.into_iter().map(|p| p.patch));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let base = pool[rng.gen_range(0..pool.len())].clone();
        let p = random_placement(base, &mut rng);
        let [u0, u1, v0, v1] = p.domain;
        let (mu, mv) = (1e-3 * (u1 - u0), 1e-3 * (v1 - v0));
        let u = rng.gen_range(u0 + mu..u1 - mu);
        let v = rng.gen_range(v0 + mv..v1 - mv);
        if let Some(err) = partials_error(&p, u, v) {
            worst = worst.max(err);
            n += 1;
        }
    }
    let pass = (torus2.max_abs - 1.0).abs() <= 1e-6
        && restricted.max_abs <= 1.0 + 1e-6
        && full.max_abs > 1.0 + 1e-6
        && worst <= 1e-6;
    outcome(
        pass,
        format!(
            "torus(2) {:.9}, torus(2-sqrt3) restricted {:.9} full {:.4}, partials worst {worst:.1e} over {n}",
            torus2.max_abs, restricted.max_abs, full.max_abs
        ),
    )
}

/// Area and first moment `integral rho dA` from closed-form line integrals.
fn green_moments(edges: &[ProfileEdge]) -> (f64, f64) {
    let (mut a, mut m) = (0.0, 0.0);
    for e in edges {
        match *e {
            ProfileEdge::Segment { from, to } => {
                let (x0, y0, x1, y1) = (from[0], from[1], to[0], to[1]);
                a += 0.5 * (x0 * y1 - x1 * y0);
                m += 0.5 * (y1 - y0) * (x0 * x0 + x0 * x1 + x1 * x1) / 3.0;
            }
            ProfileEdge::Arc {
                center,
                radius: r,
                start,
                sweep,
            } => {
                let (cx, cy) = (center[0], center[1]);
                let (s0, c0) = start.sin_cos();
                let (s1, c1) = (start + sweep).sin_cos();
                a += 0.5 * (r * r * sweep + r * cx * (s1 - s0) - r * cy * (c1 - c0));
                let cos1 = s1 - s0;
                let cos2 =
                    0.5 * sweep + 0.25 * ((2.0 * (start + sweep)).sin() - (2.0 * start).sin());
                let cos3 = (s1 - s1.powi(3) / 3.0) - (s0 - s0.powi(3) / 3.0);
                m += 0.5 * r * (cx * cx * cos1 + 2.0 * cx * r * cos2 + r * r * cos3);
            }
        }
    }
    (a, m)
}

fn random_region(rng: &mut ChaCha8Rng, curve: &ArcSpline) -> ProfileRegion {
    let (lo, _) = curve.bounds();
    let shift = [rng.gen_range(0.05..3.0) - lo[0], rng.gen_range(-2.0..2.0)];
    let c = curve.transformed(0.0, shift);
    let mut edges = c.edges;
    if rng.gen_bool(0.5) {
        edges = edges.iter().rev().map(ProfileEdge::reversed).collect();
    }
    ProfileRegion::new(edges)
}

fn engine() -> Outcome {
    let sphere =
        enclosed_volume(&mesh_of(&build_fixture(FixtureKind::Sphere, 128).unwrap())).unwrap();
    let torus =
        enclosed_volume(&mesh_of(&build_fixture(FixtureKind::Torus, 128).unwrap())).unwrap();
    let ts = 4.0 * PI * PI;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let curves = random_corpus(&mut rng, 100);
    let mut worst: f64 = 0.0;
    for c in &curves {
        let region = random_region(&mut rng, c);
        let v = region.revolved_volume().expect("valid region");
        let (a, m) = green_moments(&region.edges);
        let pappus = TAU * (m / a) * a.abs();
        worst = worst.max((v - pappus).abs() / pappus);
    }
    let pass = (sphere - UNIT_BALL).abs() <= 0.005 * UNIT_BALL
        && (torus - ts).abs() <= 0.005 * ts
        && worst <= 1e-9;
    outcome(
        pass,
        format!(
            "sphere {:.3}%, torus {:.3}%, Pappus worst {worst:.1e} over {}",
            100.0 * (sphere / UNIT_BALL - 1.0),
            100.0 * (torus / ts - 1.0),
            curves.len()
        ),
    )
}

fn topology_suite() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut chis = Vec::new();
    let mut idempotent = true;
    let mut round_trip = true;
    for (i, kind) in [FixtureKind::Sphere, FixtureKind::Torus, FixtureKind::Genus2]
        .into_iter()
        .enumerate()
    {
        let mesh = mesh_of(&build_fixture(kind, 64).unwrap());
        let report = topology(&mesh).unwrap();
        chis.push(report.chi);
        idempotent &= stitch(std::slice::from_ref(&mesh), WELD_TOL).unwrap().mesh == mesh;
        let json = serde_json::to_string(&report).unwrap();
        for format in [MeshFormat::Obj, MeshFormat::StlBinary] {
            let path = dir.path().join(format!("m{i}-{format:?}"));
            export(&mesh, &path, format).unwrap();
            let back = topology(&import(&path, format).unwrap()).unwrap();
            round_trip &= serde_json::to_string(&back).unwrap() == json;
        }
    }
    outcome(
        chis == [2, 0, -2] && idempotent && round_trip,
        format!("chi {chis:?}, stitch idempotent {idempotent}, export round trip {round_trip}"),
    )
}

fn disc_suite() -> Outcome {
    let t = Instant::now();
    let curves = random_corpus(&mut ChaCha8Rng::seed_from_u64(0), 50);
    let nonconvex = curves.iter().filter(|c| !c.is_convex()).count();
    let mut min_area = f64::INFINITY;
    let mut min_r = f64::INFINITY;
    let mut all_valid = true;
    for c in &curves {
        match certify_unit_disc(c) {
            Ok(cert) => {
                min_area = min_area.min(cert.area);
                min_r = min_r.min(cert.inradius);
            }
            Err(_) => all_valid = false,
        }
    }
    let elapsed = t.elapsed();
    let pass = all_valid
        && nonconvex >= 10
        && min_area >= PI - 1e-6
        && min_r >= 1.0 - 1e-3
        && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{} curves ({nonconvex} nonconvex), min area {min_area:.6}, min inradius {min_r:.6} in {:.1}s",
            curves.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn inflation() -> Outcome {
    let s = 1.01;
    let m = jerrycan(0.05, 64);
    let big = inflate(&m, s).unwrap();
    let mut worst_k: f64 = 0.0;
    let mut samples = 0;
    for (p, q) in m.patches.iter().zip(&big.patches) {
        let [u0, u1, v0, v1] = p.patch.domain;
        for i in 0..=16 {
            for j in 0..=16 {
                let u = u0 + (u1 - u0) * i as f64 / 16.0;
                let v = v0 + (v1 - v0) * j as f64 / 16.0;
                let (Ok(a), Ok(b)) = (
                    curvature_sample(&p.patch, u, v),
                    curvature_sample(&q.patch, u, v),
                ) else {
                    continue;
                };
                samples += 1;
                for (ka, kb) in [(a.k1, b.k1), (a.k2, b.k2)] {
                    worst_k = worst_k.max((kb - ka / s).abs() / ka.abs().max(1.0));
                }
            }
        }
    }
    let va = enclosed_volume(&mesh_of(&m)).unwrap();
    let vb = enclosed_volume(&mesh_of(&big)).unwrap();
    let vol_err = (vb / (va * s * s * s) - 1.0).abs();
    let ref_err =
        (big.reference_volume.unwrap() / (m.reference_volume.unwrap() * s * s * s) - 1.0).abs();
    outcome(
        worst_k <= 1e-9 && vol_err <= 1e-9 && ref_err <= 1e-9,
        format!("|k| scale error {worst_k:.1e} over {samples} samples, volume {vol_err:.1e}, reference {ref_err:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("constants", constants),
        ("headline verify", headline),
        ("volume convergence", convergence),
        ("inscribed ball", inscribed),
        ("curvature oracles", curvature_oracles),
        ("geometry engine", engine),
        ("topology", topology_suite),
        ("unit disc suite", disc_suite),
        ("inflation", inflation),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| outcome(false, "panicked".into()));
        println!(
            "criterion {} {:<20} {}  {} [{:.1}s]",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
