//! Euler characteristic, genus and manifold checks.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{MeshError, TriMesh};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub chi: i64,
    /// Only set for closed, connected, orientable meshes.
    pub genus: Option<i64>,
    pub watertight: bool,
    pub orientable: bool,
    /// Every interior edge is traversed once in each direction.
    pub consistently_oriented: bool,
    pub components: usize,
    pub boundary_edges: usize,
}

fn edge_key(a: u32, b: u32) -> [u32; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Counts, closedness and orientability from an undirected edge table.
pub fn topology(mesh: &TriMesh) -> Result<TopologyReport, MeshError> {
    let count = mesh.vertices.len();
    for t in &mesh.triangles {
        for &i in t {
            if i as usize >= count {
                return Err(MeshError::IndexOutOfRange { index: i, count });
            }
        }
    }
    // edge -> incident (face, same-direction-as-key) list
    let mut edges: HashMap<[u32; 2], Vec<(usize, bool)>> = HashMap::new();
    for (fi, t) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edges.entry(edge_key(a, b)).or_default().push((fi, a < b));
        }
    }
    let mut non_manifold: Vec<[u32; 2]> = edges
        .iter()
        .filter(|(_, f)| f.len() > 2)
        .map(|(e, _)| *e)
        .collect();
    if !non_manifold.is_empty() {
        non_manifold.sort_unstable();
        return Err(MeshError::NonManifold(non_manifold));
    }

    let boundary_edges = edges.values().filter(|f| f.len() == 1).count();
    let consistently_oriented = edges.values().all(|f| f.len() < 2 || f[0].1 != f[1].1);

    // orientability: propagate a relative flip per face
    let nf = mesh.triangles.len();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nf];
    for f in edges.values() {
        if f.len() == 2 {
            // faces agree when they traverse the shared edge in opposite directions
            let agree = f[0].1 != f[1].1;
            adj[f[0].0].push((f[1].0, agree));
            adj[f[1].0].push((f[0].0, agree));
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; nf];
    let mut orientable = true;
    for s in 0..nf {
        if flip[s].is_some() {
            continue;
        }
        flip[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(f) = queue.pop_front() {
            let ff = flip[f].unwrap();
            for &(g, agree) in &adj[f] {
                let want = if agree { ff } else { !ff };
                match flip[g] {
                    None => {
                        flip[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(x) if x != want => orientable = false,
                    _ => {}
                }
            }
        }
    }

    let mut uf = UnionFind::new(count);
    let mut used = vec![false; count];
    for t in &mesh.triangles {
        used[t[0] as usize] = true;
        used[t[1] as usize] = true;
        used[t[2] as usize] = true;
        uf.union(t[0] as usize, t[1] as usize);
        uf.union(t[1] as usize, t[2] as usize);
    }
    let components = (0..count).filter(|&i| uf.find(i) == i).count();

    let v = count;
    let e = edges.len();
    let f = nf;
    let chi = v as i64 - e as i64 + f as i64;
    let watertight = boundary_edges == 0 && nf > 0 && used.iter().all(|&u| u);
    let genus = (watertight && components == 1 && orientable).then(|| (2 - chi) / 2);
    Ok(TopologyReport {
        v,
        e,
        f,
        chi,
        genus,
        watertight,
        orientable,
        consistently_oriented,
        components,
        boundary_edges,
    })
}

/// `V - E + F` from an explicit half-edge structure: every directed triangle
/// side is a half-edge, twins are paired, and an edge is a twin pair or an
/// unpaired boundary half-edge.
pub fn euler_characteristic_halfedge(mesh: &TriMesh) -> Result<i64, MeshError> {
    #[derive(Clone, Copy)]
    struct HalfEdge {
        origin: u32,
        next: usize,
        twin: Option<usize>,
    }
    let mut half: Vec<HalfEdge> = Vec::with_capacity(3 * mesh.triangles.len());
    for t in &mesh.triangles {
        let base = half.len();
        for k in 0..3 {
            half.push(HalfEdge {
                origin: t[k],
                next: base + (k + 1) % 3,
                twin: None,
            });
        }
    }
    let mut by_ends: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, h) in half.iter().enumerate() {
        by_ends
            .entry((h.origin, half[h.next].origin))
            .or_default()
            .push(i);
    }
    for i in 0..half.len() {
        if half[i].twin.is_some() {
            continue;
        }
        let (a, b) = (half[i].origin, half[half[i].next].origin);
        // prefer an opposite half-edge, fall back to a same-direction one
        let candidate = by_ends
            .get(&(b, a))
            .into_iter()
            .flatten()
            .chain(by_ends.get(&(a, b)).into_iter().flatten())
            .copied()
            .find(|&j| j != i && half[j].twin.is_none());
        if let Some(j) = candidate {
            half[i].twin = Some(j);
            half[j].twin = Some(i);
        }
    }
    let paired = half.iter().filter(|h| h.twin.is_some()).count();
    let unpaired = half.len() - paired;
    let mut bad: Vec<[u32; 2]> = by_ends
        .iter()
        .filter(|(k, v)| {
            let rev = by_ends.get(&(k.1, k.0));
            (k.0 < k.1 || rev.is_none()) && v.len() + rev.map_or(0, Vec::len) > 2
        })
        .map(|(k, _)| edge_key(k.0, k.1))
        .collect();
    if !bad.is_empty() {
        bad.sort_unstable();
        return Err(MeshError::NonManifold(bad));
    }
    let e = paired / 2 + unpaired;
    Ok(mesh.vertices.len() as i64 - e as i64 + mesh.triangles.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::mesh::{stitch, tessellate, WELD_TOL};
    use crate::patch::ParametricPatch;
    use std::f64::consts::PI;

    #[test]
    fn icosahedron_counts() {
        let t = topology(&icosahedron()).unwrap();
        assert_eq!((t.v, t.e, t.f, t.chi, t.genus), (12, 30, 20, 2, Some(0)));
        assert!(t.watertight && t.orientable && t.consistently_oriented);
        assert_eq!(euler_characteristic_halfedge(&icosahedron()).unwrap(), 2);
    }

    #[test]
    fn torus_is_genus_one() {
        let m = tessellate(&ParametricPatch::torus(2.0, 0.0, 2.0 * PI), 64, 64).unwrap();
        let m = stitch(&[m], WELD_TOL).unwrap().mesh;
        let t = topology(&m).unwrap();
        assert_eq!((t.chi, t.genus), (0, Some(1)));
        assert_eq!(euler_characteristic_halfedge(&m).unwrap(), 0);
    }

    #[test]
    fn non_manifold_edge_is_reported() {
        let m = TriMesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
            ],
            vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        );
        assert!(matches!(topology(&m), Err(MeshError::NonManifold(e)) if e == vec![[0, 1]]));
    }

    #[test]
    fn open_mesh_has_no_genus() {
        let mut m = icosahedron();
        m.triangles.pop();
        let t = topology(&m).unwrap();
        assert!(!t.watertight);
        assert_eq!(t.genus, None);
        assert_eq!(t.boundary_edges, 3);
        assert_eq!(t.chi, 1);
    }

    #[test]
    fn mobius_strip_is_not_orientable() {
        let n = 12;
        let mut v = Vec::new();
        for i in 0..n {
            let a = 2.0 * PI * i as f64 / n as f64;
            for s in [-0.3, 0.3] {
                let w = s * (a / 2.0).cos();
                let r = 1.0 + w;
                v.push([r * a.cos(), r * a.sin(), s * (a / 2.0).sin()]);
            }
        }
        let mut t = Vec::new();
        for i in 0..n {
            let (a, b) = (2 * i as u32, 2 * i as u32 + 1);
            let (c, d) = if i + 1 < n {
                (2 * (i + 1) as u32, 2 * (i + 1) as u32 + 1)
            } else {
                (1, 0)
            };
            t.push([a, c, d]);
            t.push([a, d, b]);
        }
        let r = topology(&TriMesh::new(v, t)).unwrap();
        assert!(!r.orientable);
        assert_eq!(r.chi, 0);
    }
}
