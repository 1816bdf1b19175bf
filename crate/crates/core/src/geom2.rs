//! Planar intersection tests for arc/segment loops.

use std::f64::consts::TAU;

use crate::profile::ProfileEdge;

type P2 = [f64; 2];

/// Points closer than this to a shared joint are not counted as crossings.
const JOINT_EXCLUSION: f64 = 1e-6;
const PARAM_TOL: f64 = 1e-12;

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Whether angle `theta` lies on the arc `start .. start + sweep`.
fn on_arc(theta: f64, start: f64, sweep: f64, radius: f64) -> bool {
    let d = if sweep > 0.0 {
        (theta - start).rem_euclid(TAU)
    } else {
        (start - theta).rem_euclid(TAU)
    };
    let tol = PARAM_TOL.max(1e-12 / radius);
    d <= sweep.abs() + tol || d >= TAU - tol
}

fn line_circle(p: P2, q: P2, c: P2, r: f64) -> Vec<P2> {
    let d = sub(q, p);
    let f = sub(p, c);
    let a = dot(d, d);
    let b = 2.0 * dot(f, d);
    let cc = dot(f, f) - r * r;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let mut out = Vec::new();
    for t in [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)] {
        if (-PARAM_TOL..=1.0 + PARAM_TOL).contains(&t) {
            out.push([p[0] + t * d[0], p[1] + t * d[1]]);
        }
    }
    out
}

fn circle_circle(c1: P2, r1: f64, c2: P2, r2: f64) -> Vec<P2> {
    let d = dist(c1, c2);
    if d > r1 + r2 || d < (r1 - r2).abs() || d == 0.0 {
        return vec![];
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let e = [(c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d];
    let m = [c1[0] + a * e[0], c1[1] + a * e[1]];
    vec![
        [m[0] - h * e[1], m[1] + h * e[0]],
        [m[0] + h * e[1], m[1] - h * e[0]],
    ]
}

fn arc_contains(e: &ProfileEdge, p: P2) -> bool {
    match *e {
        ProfileEdge::Arc {
            center,
            radius,
            start,
            sweep,
        } => on_arc(
            (p[1] - center[1]).atan2(p[0] - center[0]),
            start,
            sweep,
            radius,
        ),
        ProfileEdge::Segment { .. } => true,
    }
}

/// Intersection points of two edges, overlaps reported by a witness point.
pub fn edge_crossings(a: &ProfileEdge, b: &ProfileEdge) -> Vec<P2> {
    use ProfileEdge::*;
    match (*a, *b) {
        (Segment { from: p, to: q }, Segment { from: r, to: s }) => {
            let d1 = sub(q, p);
            let d2 = sub(s, r);
            let den = cross(d1, d2);
            let w = sub(r, p);
            if den.abs() <= 1e-15 * (dot(d1, d1) * dot(d2, d2)).sqrt() {
                if cross(w, d1).abs() > 1e-12 * dot(d1, d1).sqrt() {
                    return vec![];
                }
                // collinear: report any shared stretch
                let l = dot(d1, d1);
                let t0 = dot(sub(r, p), d1) / l;
                let t1 = dot(sub(s, p), d1) / l;
                let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
                if lo <= hi {
                    return [lo, hi]
                        .iter()
                        .map(|t| [p[0] + t * d1[0], p[1] + t * d1[1]])
                        .collect();
                }
                return vec![];
            }
            let t = cross(w, d2) / den;
            let u = cross(w, d1) / den;
            let ok = |x: f64| (-PARAM_TOL..=1.0 + PARAM_TOL).contains(&x);
            if ok(t) && ok(u) {
                vec![[p[0] + t * d1[0], p[1] + t * d1[1]]]
            } else {
                vec![]
            }
        }
        (Segment { from, to }, Arc { center, radius, .. })
        | (Arc { center, radius, .. }, Segment { from, to }) => {
            let arc = if matches!(a, Arc { .. }) { a } else { b };
            line_circle(from, to, center, radius)
                .into_iter()
                .filter(|p| arc_contains(arc, *p))
                .collect()
        }
        (
            Arc {
                center: c1,
                radius: r1,
                ..
            },
            Arc {
                center: c2,
                radius: r2,
                ..
            },
        ) => {
            if dist(c1, c2) <= 1e-12 && (r1 - r2).abs() <= 1e-12 {
                // same circle: overlap if either arc holds an end of the other
                return [a.start_point(), a.end_point()]
                    .into_iter()
                    .filter(|p| arc_contains(b, *p))
                    .chain(
                        [b.start_point(), b.end_point()]
                            .into_iter()
                            .filter(|p| arc_contains(a, *p)),
                    )
                    .collect();
            }
            circle_circle(c1, r1, c2, r2)
                .into_iter()
                .filter(|p| arc_contains(a, *p) && arc_contains(b, *p))
                .collect()
        }
    }
}

/// Whether edges `i < j` of a closed loop meet anywhere other than at the
/// joints they share with each other.
pub fn edges_intersect(edges: &[ProfileEdge], i: usize, j: usize) -> bool {
    let n = edges.len();
    let mut joints: Vec<P2> = Vec::new();
    if j == i + 1 {
        joints.push(edges[i].end_point());
    }
    if i == 0 && j == n - 1 {
        joints.push(edges[j].end_point());
    }
    edge_crossings(&edges[i], &edges[j])
        .into_iter()
        .any(|p| joints.iter().all(|q| dist(p, *q) > JOINT_EXCLUSION))
}

/// Unsigned distance from `p` to an edge.
pub fn distance_to_edge(e: &ProfileEdge, p: P2) -> f64 {
    match *e {
        ProfileEdge::Segment { from, to } => {
            let d = sub(to, from);
            let t = (dot(sub(p, from), d) / dot(d, d)).clamp(0.0, 1.0);
            dist(p, [from[0] + t * d[0], from[1] + t * d[1]])
        }
        ProfileEdge::Arc { center, radius, .. } => {
            let theta = (p[1] - center[1]).atan2(p[0] - center[0]);
            if arc_contains(
                e,
                [
                    center[0] + radius * theta.cos(),
                    center[1] + radius * theta.sin(),
                ],
            ) {
                (dist(p, center) - radius).abs()
            } else {
                dist(p, e.start_point()).min(dist(p, e.end_point()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn crossing_segments() {
        let a = ProfileEdge::segment([0.0, 0.0], [1.0, 1.0]);
        let b = ProfileEdge::segment([0.0, 1.0], [1.0, 0.0]);
        assert_eq!(edge_crossings(&a, &b).len(), 1);
    }

    #[test]
    fn arc_and_segment() {
        let a = ProfileEdge::arc([0.0, 0.0], 1.0, 0.0, PI);
        let s = ProfileEdge::segment([-2.0, 0.5], [2.0, 0.5]);
        assert_eq!(edge_crossings(&a, &s).len(), 2);
        let s = ProfileEdge::segment([-2.0, -0.5], [2.0, -0.5]);
        assert!(edge_crossings(&a, &s).is_empty());
    }

    #[test]
    fn disjoint_arcs_on_one_circle() {
        let a = ProfileEdge::arc([0.0, 0.0], 1.0, 0.0, 1.0);
        let b = ProfileEdge::arc([0.0, 0.0], 1.0, 2.0, 1.0);
        assert!(edge_crossings(&a, &b).is_empty());
        let c = ProfileEdge::arc([0.0, 0.0], 1.0, 0.5, 1.0);
        assert!(!edge_crossings(&a, &c).is_empty());
    }

    #[test]
    fn distance_to_arc_end() {
        let a = ProfileEdge::arc([0.0, 0.0], 1.0, 0.0, PI / 2.0);
        assert!((distance_to_edge(&a, [0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((distance_to_edge(&a, [2.0, -1.0]) - 2f64.sqrt()).abs() < 1e-15);
    }
}
