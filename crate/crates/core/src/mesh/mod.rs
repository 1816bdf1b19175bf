//! Triangle meshes: tessellation of patches, welding, volume and topology.

mod bvh;
pub mod io;
pub mod sdf;
pub mod topology;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::patch::{ParametricPatch, PatchError, Vec3};

pub use io::{export, import, MeshFormat};
pub use sdf::{inscribed_ball, is_inside, InscribedBall, SdfGrid};
pub use topology::{euler_characteristic_halfedge, topology, TopologyReport};

/// Default vertex weld distance.
pub const WELD_TOL: f64 = 1e-7;
/// Triangles with area at or below this are degenerate.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error("singular parameter point ({u}, {v}) at {position:?}")]
    Singular { u: f64, v: f64, position: [f64; 3] },
    #[error("tessellation needs nu, nv >= 2 (got {0} x {1})")]
    Resolution(usize, usize),
    #[error("inconsistent orientation across {} welded edges, first {:?}", .0.len(), .0.first())]
    Orientation(Vec<[u32; 2]>),
    #[error("non-manifold mesh: {} edges with 3 or more faces, first {:?}", .0.len(), .0.first())]
    NonManifold(Vec<[u32; 2]>),
    #[error("mesh is not watertight ({0} boundary edges)")]
    NotWatertight(usize),
    #[error("vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { index: u32, count: usize },
    #[error("degenerate triangle {0} (area {1:e})")]
    DegenerateTriangle(usize, f64),
    #[error("no interior grid samples")]
    EmptyInterior,
    #[error("malformed {format} input: {reason}")]
    Parse {
        format: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
}

fn v3(p: [f64; 3]) -> Vec3 {
    Vec3::new(p[0], p[1], p[2])
}

/// Pairwise summation, deterministic for a given input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

impl TriMesh {
    pub fn new(vertices: Vec<[f64; 3]>, triangles: Vec<[u32; 3]>) -> Self {
        TriMesh {
            vertices,
            triangles,
        }
    }

    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [
            v3(self.vertices[a as usize]),
            v3(self.vertices[b as usize]),
            v3(self.vertices[c as usize]),
        ]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Index range and degeneracy checks.
    pub fn validate(&self) -> Result<(), MeshError> {
        let count = self.vertices.len();
        for tri in &self.triangles {
            for &i in tri {
                if i as usize >= count {
                    return Err(MeshError::IndexOutOfRange { index: i, count });
                }
            }
        }
        for t in 0..self.triangles.len() {
            let a = self.triangle_area(t);
            if !(a > MIN_TRIANGLE_AREA) {
                return Err(MeshError::DegenerateTriangle(t, a));
            }
        }
        Ok(())
    }

    pub fn surface_area(&self) -> f64 {
        let areas: Vec<f64> = (0..self.triangles.len())
            .into_par_iter()
            .map(|t| self.triangle_area(t))
            .collect();
        pairwise_sum(&areas)
    }

    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.vertices {
            let p = v3(*p);
            lo = lo.inf(&p);
            hi = hi.sup(&p);
        }
        (lo, hi)
    }

    pub fn vertex_centroid(&self) -> Vec3 {
        let n = self.vertices.len().max(1) as f64;
        self.vertices
            .iter()
            .fold(Vec3::zeros(), |acc, p| acc + v3(*p))
            / n
    }

    /// Apply `x -> s * R x + t` to every vertex.
    pub fn transformed(&self, r: &crate::patch::Mat3, s: f64, t: Vec3) -> TriMesh {
        TriMesh {
            vertices: self
                .vertices
                .iter()
                .map(|p| {
                    let q = r * v3(*p) * s + t;
                    [q.x, q.y, q.z]
                })
                .collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Reverse every triangle.
    pub fn flipped(&self) -> TriMesh {
        TriMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Concatenate without welding.
    pub fn merged(parts: &[TriMesh]) -> TriMesh {
        let mut out = TriMesh::default();
        for p in parts {
            let off = out.vertices.len() as u32;
            out.vertices.extend_from_slice(&p.vertices);
            out.triangles.extend(
                p.triangles
                    .iter()
                    .map(|t| [t[0] + off, t[1] + off, t[2] + off]),
            );
        }
        out
    }
}

/// Grid tessellation with two triangles per cell, wound so that triangle
/// normals follow the patch normal. Boundary rows that collapse to a point
/// (poles, disc centres) become a single vertex.
pub fn tessellate(patch: &ParametricPatch, nu: usize, nv: usize) -> Result<TriMesh, MeshError> {
    if nu < 2 || nv < 2 {
        return Err(MeshError::Resolution(nu, nv));
    }
    patch.validate()?;
    let [u0, u1, v0, v1] = patch.domain;
    let us: Vec<f64> = (0..=nu)
        .map(|i| u0 + (u1 - u0) * i as f64 / nu as f64)
        .collect();
    let vs: Vec<f64> = (0..=nv)
        .map(|j| v0 + (v1 - v0) * j as f64 / nv as f64)
        .collect();
    let rows: Vec<Vec<Vec3>> = vs
        .par_iter()
        .map(|&v| us.iter().map(|&u| patch.point(u, v)).collect())
        .collect();

    let extent = rows
        .iter()
        .flatten()
        .fold(0.0f64, |m, p| m.max(p.amax()))
        .max(1.0);
    let collapse_tol = 1e-12 * extent;

    let mut vertices = Vec::new();
    let mut index = vec![vec![0u32; nu + 1]; nv + 1];
    for (j, row) in rows.iter().enumerate() {
        if let Some(bad) = row.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(MeshError::Singular {
                u: us[bad],
                v: vs[j],
                position: [f64::NAN; 3],
            });
        }
        let collapsed = row.iter().all(|p| (p - row[0]).amax() <= collapse_tol);
        if collapsed {
            if j != 0 && j != nv {
                let p = row[0];
                return Err(MeshError::Singular {
                    u: us[0],
                    v: vs[j],
                    position: [p.x, p.y, p.z],
                });
            }
            let id = vertices.len() as u32;
            vertices.push([row[0].x, row[0].y, row[0].z]);
            index[j].iter_mut().for_each(|k| *k = id);
        } else {
            for (i, p) in row.iter().enumerate() {
                index[j][i] = vertices.len() as u32;
                vertices.push([p.x, p.y, p.z]);
            }
        }
    }

    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            let a = index[j][i];
            let b = index[j][i + 1];
            let c = index[j + 1][i + 1];
            let d = index[j + 1][i];
            for t in [[a, b, c], [a, c, d]] {
                if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                    triangles.push(if patch.flip { [t[0], t[2], t[1]] } else { t });
                }
            }
        }
    }
    Ok(TriMesh {
        vertices,
        triangles,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StitchReport {
    pub mesh: TriMesh,
    /// Edges with a single incident triangle after welding.
    pub unmatched_edges: Vec<[u32; 2]>,
    pub welded_vertices: usize,
    pub removed_faces: usize,
}

fn cell_key(p: &[f64; 3], h: f64) -> [i64; 3] {
    [
        (p[0] / h).floor() as i64,
        (p[1] / h).floor() as i64,
        (p[2] / h).floor() as i64,
    ]
}

/// Representative index for every vertex after welding within `tol`.
fn weld_map(vertices: &[[f64; 3]], tol: f64) -> Vec<u32> {
    let mut map = vec![0u32; vertices.len()];
    if tol <= 0.0 {
        let mut seen: HashMap<[u64; 3], u32> = HashMap::new();
        for (i, p) in vertices.iter().enumerate() {
            let key = [p[0].to_bits(), p[1].to_bits(), p[2].to_bits()];
            map[i] = *seen.entry(key).or_insert(i as u32);
        }
        return map;
    }
    let h = tol * 2.0;
    let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    for (i, p) in vertices.iter().enumerate() {
        let k = cell_key(p, h);
        let mut rep = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &j in list {
                            let q = &vertices[j as usize];
                            let d = (p[0] - q[0]).hypot(p[1] - q[1]).hypot(p[2] - q[2]);
                            if d <= tol {
                                rep = Some(j);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        match rep {
            Some(j) => map[i] = j,
            None => {
                map[i] = i as u32;
                grid.entry(k).or_default().push(i as u32);
            }
        }
    }
    map
}

/// Weld fragments into one mesh: merge vertices within `tol`, drop faces that
/// became degenerate or duplicated, re-index, and report open edges.
pub fn stitch(fragments: &[TriMesh], tol: f64) -> Result<StitchReport, MeshError> {
    let merged = TriMesh::merged(fragments);
    let map = weld_map(&merged.vertices, tol);

    let mut faces = Vec::with_capacity(merged.triangles.len());
    let mut seen = std::collections::HashSet::new();
    let mut removed = 0;
    for t in &merged.triangles {
        let f = [map[t[0] as usize], map[t[1] as usize], map[t[2] as usize]];
        if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            removed += 1;
            continue;
        }
        let mut key = f;
        key.sort_unstable();
        if !seen.insert(key) {
            removed += 1;
            continue;
        }
        faces.push(f);
    }

    // keep surviving vertices in their original order
    let mut used = vec![false; merged.vertices.len()];
    faces
        .iter()
        .flatten()
        .for_each(|&k| used[k as usize] = true);
    let mut new_index = vec![u32::MAX; merged.vertices.len()];
    let mut vertices = Vec::new();
    for (i, p) in merged.vertices.iter().enumerate() {
        if used[i] {
            new_index[i] = vertices.len() as u32;
            vertices.push(*p);
        }
    }
    faces
        .iter_mut()
        .flatten()
        .for_each(|k| *k = new_index[*k as usize]);
    let mesh = TriMesh {
        vertices,
        triangles: faces,
    };

    let mut directed: HashMap<[u32; 2], u32> = HashMap::new();
    for t in &mesh.triangles {
        for e in 0..3 {
            *directed.entry([t[e], t[(e + 1) % 3]]).or_default() += 1;
        }
    }
    let mut bad: Vec<[u32; 2]> = directed
        .iter()
        .filter(|(_, &n)| n > 1)
        .map(|(e, _)| *e)
        .collect();
    bad.sort_unstable();
    if !bad.is_empty() {
        return Err(MeshError::Orientation(bad));
    }
    let mut unmatched: Vec<[u32; 2]> = directed
        .keys()
        .filter(|e| !directed.contains_key(&[e[1], e[0]]))
        .copied()
        .collect();
    unmatched.sort_unstable();

    Ok(StitchReport {
        welded_vertices: merged.vertices.len() - mesh.vertices.len(),
        removed_faces: removed,
        mesh,
        unmatched_edges: unmatched,
    })
}

/// Enclosed volume by the divergence theorem, `sum det(v0, v1, v2) / 6`,
/// summed pairwise about the vertex centroid and returned positive.
pub fn enclosed_volume(mesh: &TriMesh) -> Result<f64, MeshError> {
    let report = topology(mesh)?;
    if !report.watertight {
        return Err(MeshError::NotWatertight(report.boundary_edges));
    }
    Ok(signed_volume(mesh).abs())
}

/// Signed divergence-theorem volume without closedness checks.
pub fn signed_volume(mesh: &TriMesh) -> f64 {
    let c = mesh.vertex_centroid();
    let terms: Vec<f64> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| {
            let [a, b, d] = mesh.corners(t);
            (a - c).dot(&(b - c).cross(&(d - c))) / 6.0
        })
        .collect();
    pairwise_sum(&terms)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::TriMesh;

    pub fn tetrahedron() -> TriMesh {
        TriMesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
            ],
            vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
        )
    }

    pub fn unit_cube() -> TriMesh {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        let quads = [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ];
        let mut t = Vec::new();
        for q in quads {
            t.push([q[0], q[1], q[2]]);
            t.push([q[0], q[2], q[3]]);
        }
        TriMesh::new(v, t)
    }

    pub fn icosahedron() -> TriMesh {
        let p = (1.0 + 5f64.sqrt()) / 2.0;
        let v = vec![
            [-1.0, p, 0.0],
            [1.0, p, 0.0],
            [-1.0, -p, 0.0],
            [1.0, -p, 0.0],
            [0.0, -1.0, p],
            [0.0, 1.0, p],
            [0.0, -1.0, -p],
            [0.0, 1.0, -p],
            [p, 0.0, -1.0],
            [p, 0.0, 1.0],
            [-p, 0.0, -1.0],
            [-p, 0.0, 1.0],
        ];
        let t = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        TriMesh::new(v, t)
    }
}
