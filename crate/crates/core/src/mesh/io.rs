//! OBJ and binary STL export/import.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use super::{stitch, MeshError, TriMesh};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshFormat {
    Obj,
    StlBinary,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "obj" => Some(MeshFormat::Obj),
            "stl" => Some(MeshFormat::StlBinary),
            _ => None,
        }
    }
}

/// ASCII OBJ: `v x y z` with 17 significant digits, 1-based `f i j k`.
pub fn write_obj<W: Write>(mesh: &TriMesh, mut w: W) -> std::io::Result<()> {
    for p in &mesh.vertices {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2])?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    w.flush()
}

fn obj_err(line: usize, reason: &str) -> MeshError {
    MeshError::Parse {
        format: "obj",
        reason: format!("line {line}: {reason}"),
    }
}

/// Reads `v` and `f` records; faces with more than three corners are fanned.
pub fn read_obj<R: Read>(r: R) -> Result<TriMesh, MeshError> {
    let mut mesh = TriMesh::default();
    for (n, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let xs: Vec<f64> = it
                    .take(3)
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| obj_err(n + 1, &e.to_string()))?;
                if xs.len() != 3 {
                    return Err(obj_err(n + 1, "vertex needs 3 coordinates"));
                }
                mesh.vertices.push([xs[0], xs[1], xs[2]]);
            }
            Some("f") => {
                let mut idx = Vec::new();
                for tok in it {
                    let first = tok.split('/').next().unwrap_or("");
                    let i: i64 = first
                        .parse()
                        .map_err(|_| obj_err(n + 1, "bad face index"))?;
                    let k = if i < 0 {
                        mesh.vertices.len() as i64 + i
                    } else {
                        i - 1
                    };
                    if k < 0 {
                        return Err(obj_err(n + 1, "face index out of range"));
                    }
                    idx.push(k as u32);
                }
                if idx.len() < 3 {
                    return Err(obj_err(n + 1, "face needs 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    mesh.triangles.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    let count = mesh.vertices.len();
    if let Some(&index) = mesh
        .triangles
        .iter()
        .flatten()
        .find(|&&i| i as usize >= count)
    {
        return Err(MeshError::IndexOutOfRange { index, count });
    }
    Ok(mesh)
}

/// Binary STL: 80-byte header, triangle count, little-endian f32 records.
pub fn write_stl<W: Write>(mesh: &TriMesh, mut w: W) -> std::io::Result<()> {
    let mut header = [0u8; 80];
    let tag = b"curvbound binary stl";
    header[..tag.len()].copy_from_slice(tag);
    w.write_all(&header)?;
    w.write_u32::<LittleEndian>(mesh.triangles.len() as u32)?;
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.corners(t);
        let n = (b - a).cross(&(c - a));
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        for x in n.iter().chain(a.iter()).chain(b.iter()).chain(c.iter()) {
            w.write_f32::<LittleEndian>(*x as f32)?;
        }
        w.write_u16::<LittleEndian>(0)?;
    }
    w.flush()
}

/// Reads binary STL and merges bit-identical corners into shared vertices.
pub fn read_stl<R: Read>(mut r: R) -> Result<TriMesh, MeshError> {
    let mut header = [0u8; 80];
    r.read_exact(&mut header)?;
    let count = r.read_u32::<LittleEndian>()? as usize;
    let mut soup = TriMesh::default();
    for _ in 0..count {
        let mut f = [0f32; 12];
        r.read_f32_into::<LittleEndian>(&mut f)
            .map_err(|e| MeshError::Parse {
                format: "stl",
                reason: e.to_string(),
            })?;
        let base = soup.vertices.len() as u32;
        for k in 1..4 {
            soup.vertices
                .push([f[3 * k] as f64, f[3 * k + 1] as f64, f[3 * k + 2] as f64]);
        }
        soup.triangles.push([base, base + 1, base + 2]);
        r.read_u16::<LittleEndian>()?;
    }
    Ok(stitch(&[soup], 0.0)?.mesh)
}

pub fn export(mesh: &TriMesh, path: &Path, format: MeshFormat) -> Result<(), MeshError> {
    let w = BufWriter::new(File::create(path)?);
    match format {
        MeshFormat::Obj => write_obj(mesh, w)?,
        MeshFormat::StlBinary => write_stl(mesh, w)?,
    }
    Ok(())
}

pub fn import(path: &Path, format: MeshFormat) -> Result<TriMesh, MeshError> {
    let r = File::open(path)?;
    match format {
        MeshFormat::Obj => read_obj(r),
        MeshFormat::StlBinary => read_stl(BufReader::new(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::tetrahedron;
    use crate::mesh::topology;

    #[test]
    fn tetrahedron_obj_lines() {
        let mut buf = Vec::new();
        write_obj(&tetrahedron(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
        assert!(text.contains("f 1 3 2"));
        assert_eq!(read_obj(text.as_bytes()).unwrap(), tetrahedron());
    }

    #[test]
    fn stl_round_trip() {
        let mut buf = Vec::new();
        write_stl(&tetrahedron(), &mut buf).unwrap();
        assert_eq!(buf.len(), 84 + 4 * 50);
        let back = read_stl(buf.as_slice()).unwrap();
        assert_eq!(topology(&back).unwrap(), topology(&tetrahedron()).unwrap());
    }

    #[test]
    fn quad_faces_are_fanned() {
        let m = read_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n".as_bytes()).unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn bad_index_is_an_error() {
        assert!(read_obj("v 0 0 0\nf 1 2 3\n".as_bytes()).is_err());
    }

    #[test]
    fn truncated_stl_is_an_error() {
        let mut buf = Vec::new();
        write_stl(&tetrahedron(), &mut buf).unwrap();
        buf.truncate(120);
        assert!(read_stl(buf.as_slice()).is_err());
    }
}
