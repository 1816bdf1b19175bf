//! Bounding volume hierarchy over triangles: closest-point distance and
//! axis-aligned line crossings.

use crate::patch::Vec3;

use super::TriMesh;

const LEAF_SIZE: usize = 4;

struct Node {
    lo: Vec3,
    hi: Vec3,
    /// Leaf: first index into `order`. Inner: index of the left child.
    first: u32,
    /// Zero for inner nodes.
    count: u32,
}

pub(crate) struct Bvh {
    nodes: Vec<Node>,
    tris: Vec<[Vec3; 3]>,
    order: Vec<u32>,
}

fn tri_bounds(t: &[Vec3; 3]) -> (Vec3, Vec3) {
    (t[0].inf(&t[1]).inf(&t[2]), t[0].sup(&t[1]).sup(&t[2]))
}

fn box_dist2(lo: &Vec3, hi: &Vec3, p: &Vec3) -> f64 {
    let mut d = 0.0;
    for k in 0..3 {
        let v = (lo[k] - p[k]).max(0.0).max(p[k] - hi[k]);
        d += v * v;
    }
    d
}

/// Closest point on triangle `abc` to `p` (Ericson, Real-Time Collision
/// Detection, 5.1.5).
pub(crate) fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

/// Orientation of `p` against the directed 2D edge `a -> b`, computed from a
/// canonical vertex order so that both triangles sharing an edge see exactly
/// opposite values.
fn edge_fn(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let swap = (b[0], b[1]) < (a[0], a[1]);
    let (a, b) = if swap { (b, a) } else { (a, b) };
    let w = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    if swap {
        -w
    } else {
        w
    }
}

/// Top-left fill rule for a counter-clockwise triangle edge `a -> b`.
fn top_left(a: [f64; 2], b: [f64; 2]) -> bool {
    let d = [b[0] - a[0], b[1] - a[1]];
    (d[1] == 0.0 && d[0] < 0.0) || d[1] > 0.0
}

impl Bvh {
    pub(crate) fn new(mesh: &TriMesh) -> Self {
        let tris: Vec<[Vec3; 3]> = (0..mesh.triangles.len()).map(|t| mesh.corners(t)).collect();
        let mut order: Vec<u32> = (0..tris.len() as u32).collect();
        let centroids: Vec<Vec3> = tris.iter().map(|t| (t[0] + t[1] + t[2]) / 3.0).collect();
        let mut nodes = Vec::with_capacity(2 * tris.len() / LEAF_SIZE + 1);
        nodes.push(Node {
            lo: Vec3::zeros(),
            hi: Vec3::zeros(),
            first: 0,
            count: 0,
        });
        let mut stack = vec![(0usize, 0usize, order.len())];
        while let Some((ni, start, end)) = stack.pop() {
            let (mut lo, mut hi) = (Vec3::repeat(f64::INFINITY), Vec3::repeat(f64::NEG_INFINITY));
            for &t in &order[start..end] {
                let (a, b) = tri_bounds(&tris[t as usize]);
                lo = lo.inf(&a);
                hi = hi.sup(&b);
            }
            nodes[ni].lo = lo;
            nodes[ni].hi = hi;
            if end - start <= LEAF_SIZE {
                nodes[ni].first = start as u32;
                nodes[ni].count = (end - start) as u32;
                continue;
            }
            let ext = hi - lo;
            let axis = if ext.x >= ext.y && ext.x >= ext.z {
                0
            } else if ext.y >= ext.z {
                1
            } else {
                2
            };
            let mid = (start + end) / 2;
            order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                centroids[a as usize][axis].total_cmp(&centroids[b as usize][axis])
            });
            let left = nodes.len();
            for _ in 0..2 {
                nodes.push(Node {
                    lo: Vec3::zeros(),
                    hi: Vec3::zeros(),
                    first: 0,
                    count: 0,
                });
            }
            nodes[ni].first = left as u32;
            stack.push((left, start, mid));
            stack.push((left + 1, mid, end));
        }
        Bvh { nodes, tris, order }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.tris.is_empty()
    }

    /// Distance from `p` to the nearest triangle.
    pub(crate) fn distance(&self, p: &Vec3) -> f64 {
        self.distance_below(p, f64::INFINITY)
    }

    /// Distance from `p` if it exceeds `floor`, otherwise `None`. Stops at the
    /// first triangle closer than `floor`.
    pub(crate) fn distance_above(&self, p: &Vec3, floor: f64) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        let floor2 = floor * floor;
        let mut best = f64::INFINITY;
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let n = &self.nodes[ni];
            if box_dist2(&n.lo, &n.hi, p) >= best {
                continue;
            }
            if n.count > 0 {
                for &t in &self.order[n.first as usize..(n.first + n.count) as usize] {
                    let [a, b, c] = &self.tris[t as usize];
                    let q = closest_point_on_triangle(p, a, b, c);
                    best = best.min((q - p).norm_squared());
                    if best <= floor2 {
                        return None;
                    }
                }
            } else {
                let (l, r) = (n.first as usize, n.first as usize + 1);
                let dl = box_dist2(&self.nodes[l].lo, &self.nodes[l].hi, p);
                let dr = box_dist2(&self.nodes[r].lo, &self.nodes[r].hi, p);
                if dl < dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        Some(best.sqrt())
    }

    fn distance_below(&self, p: &Vec3, cap: f64) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        let mut best = cap * cap;
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let n = &self.nodes[ni];
            if box_dist2(&n.lo, &n.hi, p) >= best {
                continue;
            }
            if n.count > 0 {
                for &t in &self.order[n.first as usize..(n.first + n.count) as usize] {
                    let [a, b, c] = &self.tris[t as usize];
                    let q = closest_point_on_triangle(p, a, b, c);
                    best = best.min((q - p).norm_squared());
                }
            } else {
                let (l, r) = (n.first as usize, n.first as usize + 1);
                let dl = box_dist2(&self.nodes[l].lo, &self.nodes[l].hi, p);
                let dr = box_dist2(&self.nodes[r].lo, &self.nodes[r].hi, p);
                // visit the nearer child first
                if dl < dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        best.sqrt()
    }

    /// Coordinates along `axis` where the line through `p` parallel to that
    /// axis crosses the mesh, sorted ascending.
    pub(crate) fn line_crossings(&self, axis: usize, p: &Vec3) -> Vec<f64> {
        let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
        let q = [p[i], p[j]];
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let n = &self.nodes[ni];
            if q[0] < n.lo[i] || q[0] > n.hi[i] || q[1] < n.lo[j] || q[1] > n.hi[j] {
                continue;
            }
            if n.count > 0 {
                for &t in &self.order[n.first as usize..(n.first + n.count) as usize] {
                    let tri = &self.tris[t as usize];
                    let mut v = [
                        [tri[0][i], tri[0][j]],
                        [tri[1][i], tri[1][j]],
                        [tri[2][i], tri[2][j]],
                    ];
                    let mut h = [tri[0][axis], tri[1][axis], tri[2][axis]];
                    let area = edge_fn(v[0], v[1], v[2]);
                    if area == 0.0 {
                        continue;
                    }
                    if area < 0.0 {
                        v.swap(1, 2);
                        h.swap(1, 2);
                    }
                    let mut w = [0.0; 3];
                    let mut inside = true;
                    for k in 0..3 {
                        let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
                        w[k] = edge_fn(a, b, q);
                        if !(w[k] > 0.0 || (w[k] == 0.0 && top_left(a, b))) {
                            inside = false;
                            break;
                        }
                    }
                    if inside {
                        let s = w[0] + w[1] + w[2];
                        out.push((w[0] * h[0] + w[1] * h[1] + w[2] * h[2]) / s);
                    }
                }
            } else {
                stack.push(n.first as usize);
                stack.push(n.first as usize + 1);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Majority vote of ray parity along `+x`, `+y` and `+z`.
    pub(crate) fn contains(&self, p: &Vec3) -> bool {
        let votes = (0..3)
            .filter(|&axis| {
                let c = self.line_crossings(axis, p);
                c.iter().filter(|&&x| x > p[axis]).count() % 2 == 1
            })
            .count();
        votes >= 2
    }
}
