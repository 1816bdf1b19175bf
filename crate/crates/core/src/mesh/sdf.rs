//! Signed distance grids and the largest inscribed ball.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bvh::Bvh;
use super::{topology, MeshError, TriMesh};
use crate::patch::Vec3;

/// Signed distance samples on a regular lattice, negative inside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdfGrid {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    /// x fastest, then y, then z.
    pub values: Vec<f64>,
}

impl SdfGrid {
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        )
    }

    pub fn node_of(&self, idx: usize) -> Vec3 {
        let i = idx % self.dims[0];
        let j = (idx / self.dims[0]) % self.dims[1];
        let k = idx / (self.dims[0] * self.dims[1]);
        self.node(i, j, k)
    }

    pub fn cell_diagonal(&self) -> f64 {
        Vec3::from(self.spacing).norm()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InscribedBall {
    pub center: [f64; 3],
    pub radius: f64,
    /// Best value on the lattice before ascent.
    pub grid_radius: f64,
    pub cell_diagonal: f64,
}

/// Parity of crossings above `x` along a sorted crossing list.
fn odd_above(crossings: &[f64], x: f64) -> bool {
    let below = crossings.partition_point(|&c| c <= x);
    (crossings.len() - below) % 2 == 1
}

fn build_grid(mesh: &TriMesh, bvh: &Bvh, resolution: usize) -> SdfGrid {
    let (lo, hi) = mesh.bounds();
    let ext = hi - lo;
    let pad = 0.05 * ext.max() + 1e-9;
    let origin = lo - Vec3::repeat(pad);
    let size = ext + Vec3::repeat(2.0 * pad);
    let n = resolution;
    let spacing = size / (n - 1) as f64;
    let mut grid = SdfGrid {
        origin: origin.into(),
        spacing: spacing.into(),
        dims: [n, n, n],
        values: vec![0.0; n * n * n],
    };

    // inside votes from the three families of axis lines
    let mut votes = vec![0u8; n * n * n];
    for axis in 0..3 {
        let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
        let lines: Vec<(usize, usize, Vec<f64>)> = (0..n * n)
            .into_par_iter()
            .map(|l| {
                let (ia, ib) = (l % n, l / n);
                let mut p = origin;
                p[a] += ia as f64 * spacing[a];
                p[b] += ib as f64 * spacing[b];
                (ia, ib, bvh.line_crossings(axis, &p))
            })
            .collect();
        for (ia, ib, crossings) in lines {
            if crossings.is_empty() {
                continue;
            }
            for t in 0..n {
                let x = origin[axis] + t as f64 * spacing[axis];
                if odd_above(&crossings, x) {
                    let mut ijk = [0; 3];
                    ijk[axis] = t;
                    ijk[a] = ia;
                    ijk[b] = ib;
                    votes[grid.index(ijk[0], ijk[1], ijk[2])] += 1;
                }
            }
        }
    }
    let g = &grid;
    grid.values = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let d = bvh.distance(&g.node_of(idx));
            if votes[idx] >= 2 {
                -d
            } else {
                d
            }
        })
        .collect();
    grid
}

/// Signed distance lattice with `resolution` nodes per axis over the padded
/// bounding box.
pub fn sdf_grid(mesh: &TriMesh, resolution: usize) -> Result<SdfGrid, MeshError> {
    if resolution < 2 {
        return Err(MeshError::Resolution(resolution, resolution));
    }
    let bvh = Bvh::new(mesh);
    Ok(build_grid(mesh, &bvh, resolution))
}

/// Inside test by majority of three axis-ray parities.
pub fn is_inside(mesh: &TriMesh, p: [f64; 3]) -> bool {
    Bvh::new(mesh).contains(&Vec3::from(p))
}

/// Unsigned distance from `p` to the mesh.
pub fn distance_to_mesh(mesh: &TriMesh, p: [f64; 3]) -> f64 {
    Bvh::new(mesh).distance(&Vec3::from(p))
}

const ASCENT_STEPS: usize = 50;
const ASCENT_SEEDS: usize = 8;

fn ascend(bvh: &Bvh, start: Vec3, step0: f64) -> (Vec3, f64) {
    let mut dirs = Vec::new();
    for dx in -1..=1 {
        for dy in -1..=1 {
            for dz in -1..=1 {
                if (dx, dy, dz) != (0, 0, 0) {
                    dirs.push(Vec3::new(dx as f64, dy as f64, dz as f64).normalize());
                }
            }
        }
    }
    let mut p = start;
    let mut best = bvh.distance(&p);
    let mut step = step0;
    for _ in 0..ASCENT_STEPS {
        let mut moved = false;
        for d in &dirs {
            let q = p + d * step;
            if let Some(dq) = bvh.distance_above(&q, best) {
                if bvh.contains(&q) {
                    p = q;
                    best = dq;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (p, best)
}

/// Interior lattice maximum of the distance to the surface, refined by a
/// pattern-search ascent. The radius is an actual distance from an interior
/// point, so it never exceeds the true inradius of the mesh.
pub fn inscribed_ball(mesh: &TriMesh, grid_resolution: usize) -> Result<InscribedBall, MeshError> {
    if grid_resolution < 32 {
        return Err(MeshError::Resolution(grid_resolution, grid_resolution));
    }
    let topo = topology(mesh)?;
    if !topo.watertight {
        return Err(MeshError::NotWatertight(topo.boundary_edges));
    }
    let bvh = Bvh::new(mesh);
    let grid = build_grid(mesh, &bvh, grid_resolution);
    let mut interior: Vec<usize> = (0..grid.values.len())
        .filter(|&i| grid.values[i] < 0.0)
        .collect();
    if interior.is_empty() {
        return Err(MeshError::EmptyInterior);
    }
    interior.sort_by(|&a, &b| grid.values[a].total_cmp(&grid.values[b]).then(a.cmp(&b)));
    let grid_radius = -grid.values[interior[0]];
    let step = grid.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
    let results: Vec<(Vec3, f64)> = interior
        .iter()
        .take(ASCENT_SEEDS)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| ascend(&bvh, grid.node_of(i), step))
        .collect();
    let (center, radius) =
        results
            .into_iter()
            .fold((Vec3::zeros(), f64::NEG_INFINITY), |acc, r| {
                if r.1 > acc.1 {
                    r
                } else {
                    acc
                }
            });
    Ok(InscribedBall {
        center: center.into(),
        radius,
        grid_radius,
        cell_diagonal: grid.cell_diagonal(),
    })
}
