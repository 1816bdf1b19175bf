use std::f64::consts::{PI, TAU};

use curvbound::construct::{build_jerrycan, JerrycanSpec};
use curvbound::mesh::{enclosed_volume, stitch, tessellate, topology, TriMesh, WELD_TOL};
use curvbound::patch::{curvature_sample, ParametricPatch, PatchKind};
use curvbound::planar::{certify_unit_disc, enclosed_area, random_corpus};
use curvbound::profile::{ProfileEdge, ProfileRegion};
use curvbound::{Mat3, Vec3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rotation(axis: [f64; 3], angle: f64) -> Mat3 {
    let k = Vec3::from(axis).normalize();
    let kx = Mat3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Mat3::identity() + kx * angle.sin() + kx * kx * (1.0 - angle.cos())
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    [0.1..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

fn patch() -> impl Strategy<Value = ParametricPatch> {
    prop_oneof![
        (0.5..3.0f64).prop_map(ParametricPatch::sphere),
        (1.1..4.0f64).prop_map(|r| ParametricPatch::torus(r, -PI, PI)),
        (0.5..3.0f64).prop_map(|radius| ParametricPatch::new(
            PatchKind::Cylinder { radius },
            [0.0, TAU, -1.0, 1.0]
        )),
        (1.5..3.0f64, -1.0..1.0f64, 0.5..1.4f64).prop_map(|(cx, cz, r)| {
            let edge = ProfileEdge::arc([cx, cz], r, -1.0, 2.0);
            ParametricPatch::new(PatchKind::RevolvedProfile { edge }, [0.0, TAU, -1.0, 1.0])
        }),
    ]
}

/// Interior parameter point from unit fractions.
fn at(p: &ParametricPatch, fu: f64, fv: f64) -> (f64, f64) {
    let [u0, u1, v0, v1] = p.domain;
    (u0 + (u1 - u0) * fu, v0 + (v1 - v0) * fv)
}

fn random_regions(seed: u64, n: usize) -> Vec<ProfileRegion> {
    random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), n)
        .into_iter()
        .map(|c| {
            let (lo, _) = c.bounds();
            ProfileRegion::new(c.transformed(0.0, [0.2 - lo[0], 0.0]).edges)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partials_match_central_differences(p in patch(), fu in 0.05..0.95f64, fv in 0.05..0.95f64) {
        let (u, v) = at(&p, fu, fv);
        let h = 1e-5;
        let e = p.evaluate(u, v).unwrap();
        let (up, um) = (p.evaluate(u + h, v).unwrap(), p.evaluate(u - h, v).unwrap());
        let (vp, vm) = (p.evaluate(u, v + h).unwrap(), p.evaluate(u, v - h).unwrap());
        let rel = |a: Vec3, b: Vec3| (a - b).norm() / a.norm().max(1.0);
        prop_assert!(rel(e.du, (up.position - um.position) / (2.0 * h)) < 1e-6);
        prop_assert!(rel(e.dv, (vp.position - vm.position) / (2.0 * h)) < 1e-6);
        prop_assert!(rel(e.duu, (up.du - um.du) / (2.0 * h)) < 1e-6);
        prop_assert!(rel(e.duv, (vp.du - vm.du) / (2.0 * h)) < 1e-6);
        prop_assert!(rel(e.dvv, (vp.dv - vm.dv) / (2.0 * h)) < 1e-6);
    }

    #[test]
    fn curvature_is_rigid_invariant(
        p in patch(),
        ax in axis(),
        angle in 0.0..TAU,
        t in [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64],
        fu in 0.05..0.95f64,
        fv in 0.05..0.95f64,
    ) {
        let (u, v) = at(&p, fu, fv);
        let a = curvature_sample(&p, u, v).unwrap();
        let q = p.clone().rotated(rotation(ax, angle)).translated(t);
        let b = curvature_sample(&q, u, v).unwrap();
        prop_assert!((a.k1 - b.k1).abs() < 1e-9);
        prop_assert!((a.k2 - b.k2).abs() < 1e-9);
    }

    #[test]
    fn homothety_scales_curvature(
        p in patch(),
        s in 0.25..4.0f64,
        c in [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64],
        fu in 0.05..0.95f64,
        fv in 0.05..0.95f64,
    ) {
        let (u, v) = at(&p, fu, fv);
        let a = curvature_sample(&p, u, v).unwrap();
        let b = curvature_sample(&p.scaled_about(Vec3::from(c), s), u, v).unwrap();
        prop_assert!((b.k1 - a.k1 / s).abs() < 1e-9 * a.k1.abs().max(1.0));
        prop_assert!((b.k2 - a.k2 / s).abs() < 1e-9 * a.k2.abs().max(1.0));
    }

    #[test]
    fn axial_translation_preserves_volume(seed in 0u64..1000, dz in -5.0..5.0f64) {
        for r in random_regions(seed, 2) {
            let v = r.revolved_volume().unwrap();
            let w = r.translated([0.0, dz]).revolved_volume().unwrap();
            prop_assert!((v - w).abs() <= 1e-10 * v);
        }
    }

    #[test]
    fn pappus_holds(seed in 0u64..1000) {
        for r in random_regions(seed, 2) {
            let v = r.revolved_volume().unwrap();
            let p = TAU * r.centroid_rho().unwrap() * r.area().unwrap();
            prop_assert!((v - p).abs() <= 1e-9 * v);
        }
    }

    #[test]
    fn quadrature_converges(seed in 0u64..1000) {
        for r in random_regions(seed, 2) {
            let v16 = r.revolved_volume_with_order(16).unwrap();
            let v32 = r.revolved_volume_with_order(32).unwrap();
            let v64 = r.revolved_volume_with_order(64).unwrap();
            prop_assert!((v32 - v64).abs() <= (v16 - v64).abs() + 1e-12);
            prop_assert!((v32 - v64).abs() <= 1e-10 * v64);
        }
    }

    #[test]
    fn volume_is_additive(r0 in 0.0..2.0f64, w in 0.1..2.0f64, z0 in -2.0..2.0f64, h in 0.1..2.0f64, f in 0.1..0.9f64) {
        let whole = ProfileRegion::rectangle(r0, r0 + w, z0, z0 + h).revolved_volume().unwrap();
        let split = r0 + f * w;
        let left = ProfileRegion::rectangle(r0, split, z0, z0 + h).revolved_volume().unwrap();
        let right = ProfileRegion::rectangle(split, r0 + w, z0, z0 + h).revolved_volume().unwrap();
        prop_assert!((whole - left - right).abs() <= 1e-12 * whole);
        let exact = PI * ((r0 + w).powi(2) - r0 * r0) * h;
        prop_assert!((whole - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn planar_measures_are_rigid_invariant(seed in 0u64..1000, angle in 0.0..TAU, dx in -10.0..10.0f64, dy in -10.0..10.0f64) {
        let c = random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), 1).remove(0);
        let moved = c.transformed(angle, [dx, dy]);
        let a = enclosed_area(&c).unwrap();
        let b = enclosed_area(&moved).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
        prop_assert!(a >= PI - 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_curves_hold_a_unit_disc(seed in 0u64..10_000) {
        let c = random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), 1).remove(0);
        let cert = certify_unit_disc(&c).unwrap();
        prop_assert!(cert.inradius >= 1.0 - 1e-3);
        prop_assert!(c.contains(cert.center));
    }

    #[test]
    fn mesh_volume_is_rigid_invariant(
        p in patch(),
        ax in axis(),
        angle in 0.0..TAU,
        t in [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64],
    ) {
        let sphere = matches!(p.kind, PatchKind::Sphere { .. });
        let torus = matches!(p.kind, PatchKind::Torus { .. });
        prop_assume!(sphere || torus);
        let m = stitch(&[tessellate(&p, 48, 48).unwrap()], WELD_TOL).unwrap().mesh;
        let v = enclosed_volume(&m).unwrap();
        let w = enclosed_volume(&m.transformed(&rotation(ax, angle), 1.0, Vec3::from(t))).unwrap();
        prop_assert!((v - w).abs() <= 1e-9 * v.abs());
    }

    #[test]
    fn stitching_is_idempotent(p in patch(), n in 8usize..40) {
        let once = stitch(&[tessellate(&p, n, n).unwrap()], WELD_TOL).unwrap().mesh;
        let twice = stitch(std::slice::from_ref(&once), WELD_TOL).unwrap().mesh;
        prop_assert_eq!(once, twice);
    }
}

fn jerrycan_mesh(thinness: f64, resolution: usize) -> (TriMesh, f64) {
    let m = build_jerrycan(&JerrycanSpec::new(thinness, resolution)).unwrap();
    let reference = m.reference_volume.unwrap();
    (m.tessellate().unwrap().mesh, reference)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn jerrycan_volume_grows_with_thinness(a in 0.005..0.1f64, b in 0.005..0.1f64) {
        prop_assume!((a - b).abs() > 1e-3);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (_, v_lo) = jerrycan_mesh(lo, 32);
        let (_, v_hi) = jerrycan_mesh(hi, 32);
        prop_assert!(v_lo < v_hi);
        if hi <= 0.08 {
            prop_assert!(v_hi < 4.0 * PI / 3.0);
        }
    }

    #[test]
    fn jerrycan_stays_a_sphere(e in 0.005..0.1f64, res in prop::sample::select(vec![32usize, 48, 64])) {
        let (mesh, _) = jerrycan_mesh(e, res);
        let t = topology(&mesh).unwrap();
        prop_assert!(t.watertight && t.orientable);
        prop_assert_eq!(t.genus, Some(0));
    }
}
