//! General polyhedral meshes of Ω = [0,1]³ with cached geometry.
//!
//! A mesh stores vertices, edges, oriented faces (vertex loops, counter-
//! clockwise w.r.t. the stored unit normal) and cells (signed face lists,
//! sign = outward orientation). All geometric quantities used downstream —
//! centroids, volumes, diameters, face frames, star-shaped decompositions —
//! are computed once at construction, together with a full invariant check:
//! closed cell boundaries, planar faces, two-sided interior faces with
//! opposite orientations, per-cell Euler characteristic, and positive
//! decomposition tetrahedra.

mod generators;
mod io;
mod regularity;

pub use generators::{build_cube_mesh, build_dtp_mesh};
pub use io::{export_mesh, import_mesh, write_mesh_file};
pub use regularity::{regularity_report, CellRegularity, RegularityReport};

use crate::error::{Error, Result};
use nalgebra::{Point3, Vector3};
use std::collections::HashMap;

/// Closure residual bound, relative to h_K².
const CLOSURE_TOL: f64 = 1e-12;
/// Face planarity bound, relative to h_f.
const PLANARITY_TOL: f64 = 1e-10;
/// Relative volume-sum mismatch bound.
const VOLUME_TOL: f64 = 1e-12;

/// An oriented polygonal face with cached geometry.
#[derive(Debug, Clone)]
pub struct Face {
    /// Vertex loop, counter-clockwise w.r.t. `normal`.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` to `vertices[i+1]` (cyclic).
    pub edges: Vec<usize>,
    /// Area centroid.
    pub centroid: Point3<f64>,
    /// Stored unit normal (right-hand rule on the loop).
    pub normal: Vector3<f64>,
    pub area: f64,
    /// Max pairwise vertex distance.
    pub diameter: f64,
    /// First in-plane unit axis, from centroid towards the first loop vertex.
    pub axis1: Vector3<f64>,
    /// Second in-plane unit axis, `normal × axis1`.
    pub axis2: Vector3<f64>,
}

impl Face {
    /// Maps a 3D point on the face plane to in-plane coordinates.
    pub fn to_plane(&self, x: &Point3<f64>) -> [f64; 2] {
        let d = x - self.centroid;
        [d.dot(&self.axis1), d.dot(&self.axis2)]
    }
}

/// A polyhedral cell referencing its faces with outward-orientation signs.
#[derive(Debug, Clone)]
pub struct Cell {
    /// `(face index, sign)`; `sign = +1.0` when the stored face normal points
    /// out of this cell.
    pub faces: Vec<(usize, f64)>,
    /// Unique vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// Unique edge indices, ascending.
    pub edges: Vec<usize>,
    /// Volume centroid.
    pub centroid: Point3<f64>,
    pub volume: f64,
    /// Max pairwise vertex distance.
    pub diameter: f64,
}

/// Immutable polyhedral mesh with geometry cache; safe to share across threads.
#[derive(Debug, Clone)]
pub struct PolyMesh {
    pub vertices: Vec<Point3<f64>>,
    /// Vertex index pairs, ascending within each pair.
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Face>,
    pub cells: Vec<Cell>,
    pub boundary_vertices: Vec<bool>,
    pub boundary_edges: Vec<bool>,
    pub boundary_faces: Vec<bool>,
    /// |Ω|; equals Σ|K| by construction.
    pub domain_volume: f64,
}

/// Raw mesh connectivity before validation: face loops and signed cells.
pub(crate) struct RawMesh {
    pub vertices: Vec<Point3<f64>>,
    pub face_loops: Vec<Vec<usize>>,
    /// Per cell: (face index, outward?).
    pub cell_faces: Vec<Vec<(usize, bool)>>,
}

impl PolyMesh {
    /// Builds and validates a mesh from vertices, face loops and signed cells.
    ///
    /// `domain_volume = None` takes |Ω| := Σ|K| (imported meshes); generators
    /// pass the known value so the volume-sum invariant is an actual check.
    pub(crate) fn from_raw(raw: RawMesh, domain_volume: Option<f64>) -> Result<Self> {
        let RawMesh {
            vertices,
            face_loops,
            cell_faces,
        } = raw;
        let nv = vertices.len();

        // Edge table from face loops.
        let mut edge_map: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut faces: Vec<Face> = Vec::with_capacity(face_loops.len());
        for (fi, loop_) in face_loops.iter().enumerate() {
            if loop_.len() < 3 {
                return Err(Error::parse(0, format!("face {fi} has fewer than 3 vertices")));
            }
            let mut face_edges = Vec::with_capacity(loop_.len());
            for i in 0..loop_.len() {
                let a = loop_[i];
                let b = loop_[(i + 1) % loop_.len()];
                if a >= nv || b >= nv {
                    return Err(Error::parse(0, format!("face {fi} references vertex out of range")));
                }
                if a == b {
                    return Err(Error::parse(0, format!("face {fi} has a degenerate edge")));
                }
                let key = [a.min(b), a.max(b)];
                let id = *edge_map.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
                face_edges.push(id);
            }
            faces.push(face_geometry(fi, &vertices, loop_.clone(), face_edges)?);
        }

        // Face-cell incidence: interior faces must be seen from both sides.
        let mut incidence: Vec<Vec<(usize, bool)>> = vec![Vec::new(); faces.len()];
        for (ci, cf) in cell_faces.iter().enumerate() {
            for &(fi, outward) in cf {
                if fi >= faces.len() {
                    return Err(Error::parse(0, format!("cell {ci} references face out of range")));
                }
                incidence[fi].push((ci, outward));
            }
        }
        for (fi, inc) in incidence.iter().enumerate() {
            match inc.len() {
                1 => {}
                2 => {
                    if inc[0].1 == inc[1].1 {
                        return Err(Error::geometry(
                            inc[0].0,
                            format!("face {fi} has the same orientation in cells {} and {}", inc[0].0, inc[1].0),
                        ));
                    }
                }
                k => {
                    return Err(Error::geometry(
                        inc.first().map(|&(c, _)| c),
                        format!("face {fi} belongs to {k} cells"),
                    ))
                }
            }
        }

        // Cell geometry and invariants.
        let mut cells = Vec::with_capacity(cell_faces.len());
        for (ci, cf) in cell_faces.iter().enumerate() {
            cells.push(cell_geometry(ci, &vertices, &faces, cf)?);
        }

        let volume_sum: f64 = cells.iter().map(|c| c.volume).sum();
        let domain_volume = domain_volume.unwrap_or(volume_sum);
        if (volume_sum - domain_volume).abs() > VOLUME_TOL * domain_volume {
            return Err(Error::geometry(
                None,
                format!("cell volumes sum to {volume_sum:.16e}, expected {domain_volume:.16e}"),
            ));
        }

        // Boundary flags.
        let mut boundary_faces = vec![false; faces.len()];
        let mut boundary_vertices = vec![false; nv];
        let mut boundary_edges = vec![false; edges.len()];
        for (fi, inc) in incidence.iter().enumerate() {
            if inc.len() == 1 {
                boundary_faces[fi] = true;
                for &v in &faces[fi].vertices {
                    boundary_vertices[v] = true;
                }
                for &e in &faces[fi].edges {
                    boundary_edges[e] = true;
                }
            }
        }

        let mesh = PolyMesh {
            vertices,
            edges,
            faces,
            cells,
            boundary_vertices,
            boundary_edges,
            boundary_faces,
            domain_volume,
        };
        mesh.check_decomposition()?;
        Ok(mesh)
    }

    /// Mesh size h := (|Ω| / N_K)^{1/3}.
    pub fn mesh_size(&self) -> f64 {
        (self.domain_volume / self.cells.len() as f64).cbrt()
    }

    /// Positively oriented tetrahedra of the star-shaped cell decomposition:
    /// (cell centroid, face centroid, two consecutive loop vertices in
    /// outward order).
    pub fn cell_tets(&self, cell: usize) -> Vec<[Point3<f64>; 4]> {
        let c = &self.cells[cell];
        let mut tets = Vec::new();
        for &(fi, sign) in &c.faces {
            let f = &self.faces[fi];
            let k = f.vertices.len();
            for i in 0..k {
                let (a, b) = if sign > 0.0 {
                    (f.vertices[i], f.vertices[(i + 1) % k])
                } else {
                    (f.vertices[(i + 1) % k], f.vertices[i])
                };
                tets.push([c.centroid, f.centroid, self.vertices[a], self.vertices[b]]);
            }
        }
        tets
    }

    /// Centroid-fan triangles of a face, in stored loop order.
    pub fn face_tris(&self, face: usize) -> Vec<[Point3<f64>; 3]> {
        let f = &self.faces[face];
        let k = f.vertices.len();
        (0..k)
            .map(|i| {
                [
                    f.centroid,
                    self.vertices[f.vertices[i]],
                    self.vertices[f.vertices[(i + 1) % k]],
                ]
            })
            .collect()
    }

    /// Edge midpoint (the k_u = 2 edge DOF point).
    pub fn edge_midpoint(&self, edge: usize) -> Point3<f64> {
        let [a, b] = self.edges[edge];
        nalgebra::center(&self.vertices[a], &self.vertices[b])
    }

    fn check_decomposition(&self) -> Result<()> {
        for ci in 0..self.cells.len() {
            let h3 = self.cells[ci].diameter.powi(3);
            for tet in self.cell_tets(ci) {
                if tet_volume(&tet) <= 1e-14 * h3 {
                    return Err(Error::geometry(
                        ci,
                        "non-positive tetrahedron in centroid-fan decomposition (cell not star-shaped w.r.t. centroid)",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Signed volume of a tetrahedron (positive when (p1-p0, p2-p0, p3-p0) is a
/// right-handed triple).
pub fn tet_volume(t: &[Point3<f64>; 4]) -> f64 {
    let a = t[1] - t[0];
    let b = t[2] - t[0];
    let c = t[3] - t[0];
    a.dot(&b.cross(&c)) / 6.0
}

fn face_geometry(fi: usize, vertices: &[Point3<f64>], loop_: Vec<usize>, face_edges: Vec<usize>) -> Result<Face> {
    let pts: Vec<&Point3<f64>> = loop_.iter().map(|&v| &vertices[v]).collect();
    let k = pts.len();

    // Newell normal; right-handed w.r.t. the loop.
    let mut n = Vector3::zeros();
    for i in 0..k {
        let a = pts[i];
        let b = pts[(i + 1) % k];
        n += (a.coords - b.coords).cross(&(a.coords + b.coords));
    }
    let two_area_vec = n / 2.0;
    let area = two_area_vec.norm();
    if area <= 0.0 {
        return Err(Error::geometry(None, format!("face {fi} has zero area")));
    }
    let normal = two_area_vec / area;

    // Area centroid by a signed triangle fan from the vertex average.
    let vavg = Point3::from(pts.iter().map(|p| p.coords).sum::<Vector3<f64>>() / k as f64);
    let mut centroid = Vector3::zeros();
    let mut asum = 0.0;
    for i in 0..k {
        let a = pts[i];
        let b = pts[(i + 1) % k];
        let tri_vec = (a - vavg).cross(&(b - vavg)) / 2.0;
        let signed = tri_vec.dot(&normal);
        centroid += signed * (vavg.coords + a.coords + b.coords) / 3.0;
        asum += signed;
    }
    let centroid = Point3::from(centroid / asum);

    let mut diameter = 0.0f64;
    for i in 0..k {
        for j in 0..i {
            diameter = diameter.max((pts[i] - pts[j]).norm());
        }
    }

    for p in &pts {
        if ((*p - centroid).dot(&normal)).abs() > PLANARITY_TOL * diameter {
            return Err(Error::geometry(None, format!("face {fi} is not planar")));
        }
    }

    let raw1 = *pts[0] - centroid;
    let raw1 = raw1 - normal * raw1.dot(&normal);
    let axis1 = raw1
        .try_normalize(1e-300)
        .ok_or_else(|| Error::geometry(None, format!("face {fi} has degenerate frame")))?;
    let axis2 = normal.cross(&axis1);

    Ok(Face {
        vertices: loop_,
        edges: face_edges,
        centroid,
        normal,
        area,
        diameter,
        axis1,
        axis2,
    })
}

fn cell_geometry(ci: usize, vertices: &[Point3<f64>], faces: &[Face], cf: &[(usize, bool)]) -> Result<Cell> {
    if cf.is_empty() {
        return Err(Error::geometry(ci, "cell has no faces"));
    }
    let mut vset: Vec<usize> = cf
        .iter()
        .flat_map(|&(fi, _)| faces[fi].vertices.iter().copied())
        .collect();
    vset.sort_unstable();
    vset.dedup();
    let mut eset: Vec<usize> = cf
        .iter()
        .flat_map(|&(fi, _)| faces[fi].edges.iter().copied())
        .collect();
    eset.sort_unstable();
    eset.dedup();

    // Euler characteristic.
    let (kv, ke, kf) = (vset.len() as i64, eset.len() as i64, cf.len() as i64);
    if kv - ke + kf != 2 {
        return Err(Error::geometry(
            ci,
            format!("Euler formula violated: V={kv} E={ke} F={kf}"),
        ));
    }

    let mut diameter = 0.0f64;
    for i in 0..vset.len() {
        for j in 0..i {
            diameter = diameter.max((vertices[vset[i]] - vertices[vset[j]]).norm());
        }
    }

    // Volume, centroid and closure via the divergence theorem over the
    // oriented triangle fans of the boundary.
    let mut volume = 0.0;
    let mut closure = Vector3::zeros();
    let mut centroid = Vector3::zeros();
    for &(fi, outward) in cf {
        let f = &faces[fi];
        let sign = if outward { 1.0 } else { -1.0 };
        let k = f.vertices.len();
        for i in 0..k {
            let a = vertices[f.vertices[i]];
            let b = vertices[f.vertices[(i + 1) % k]];
            let tri_vec = (a - f.centroid).cross(&(b - f.centroid)) / 2.0;
            closure += sign * tri_vec;
            volume += sign * tri_vec.dot(&(f.centroid.coords + a.coords + b.coords)) / 9.0;
            // ∫ x_d² n_d over the triangle, midpoint rule (exact for quadratics).
            let m1 = (f.centroid.coords + a.coords) / 2.0;
            let m2 = (f.centroid.coords + b.coords) / 2.0;
            let m3 = (a.coords + b.coords) / 2.0;
            for d in 0..3 {
                centroid[d] += sign * tri_vec[d] * (m1[d] * m1[d] + m2[d] * m2[d] + m3[d] * m3[d]) / 6.0;
            }
        }
    }
    if closure.norm() > CLOSURE_TOL * diameter * diameter {
        return Err(Error::geometry(
            ci,
            format!("cell boundary does not close: |Σ n·dA| = {:.3e}", closure.norm()),
        ));
    }
    if volume <= 0.0 {
        return Err(Error::geometry(ci, format!("non-positive volume {volume:.3e}")));
    }
    let centroid = Point3::from(centroid / volume);

    Ok(Cell {
        faces: cf.iter().map(|&(fi, o)| (fi, if o { 1.0 } else { -1.0 })).collect(),
        vertices: vset,
        edges: eset,
        centroid,
        volume,
        diameter,
    })
}

/// Convenience builder used by the generators: registers faces once and hands
/// out consistent orientation signs to the cells sharing them.
pub(crate) struct MeshBuilder {
    pub vertices: Vec<Point3<f64>>,
    face_index: HashMap<Vec<usize>, usize>,
    face_loops: Vec<Vec<usize>>,
    cell_faces: Vec<Vec<(usize, bool)>>,
}

impl MeshBuilder {
    pub fn new(vertices: Vec<Point3<f64>>) -> Self {
        MeshBuilder {
            vertices,
            face_index: HashMap::new(),
            face_loops: Vec::new(),
            cell_faces: Vec::new(),
        }
    }

    /// Adds a cell given its face loops, each oriented outward for this cell.
    pub fn add_cell(&mut self, outward_loops: Vec<Vec<usize>>) -> Result<()> {
        let mut cf = Vec::with_capacity(outward_loops.len());
        for loop_ in outward_loops {
            let mut key = loop_.clone();
            key.sort_unstable();
            match self.face_index.get(&key) {
                None => {
                    let id = self.face_loops.len();
                    self.face_index.insert(key, id);
                    self.face_loops.push(loop_);
                    cf.push((id, true));
                }
                Some(&id) => {
                    if !is_reversed_rotation(&self.face_loops[id], &loop_) {
                        return Err(Error::geometry(
                            self.cell_faces.len(),
                            "shared face traversed with the same orientation by both cells",
                        ));
                    }
                    cf.push((id, false));
                }
            }
        }
        self.cell_faces.push(cf);
        Ok(())
    }

    pub fn finish(self, domain_volume: Option<f64>) -> Result<PolyMesh> {
        PolyMesh::from_raw(
            RawMesh {
                vertices: self.vertices,
                face_loops: self.face_loops,
                cell_faces: self.cell_faces,
            },
            domain_volume,
        )
    }
}

/// True when `b` is a cyclic rotation of `a` reversed.
fn is_reversed_rotation(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let Some(start) = b.iter().position(|&v| v == a[0]) else {
        return false;
    };
    (0..n).all(|i| b[(start + n - i) % n] == a[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_counts_match_closed_forms() {
        // (n+1)³ vertices, 3n²(n+1) faces, 3n(n+1)² edges, n³ cells
        let m = build_cube_mesh(2).unwrap();
        assert_eq!(m.vertices.len(), 27);
        assert_eq!(m.cells.len(), 8);
        assert_eq!(m.faces.len(), 36);
        assert_eq!(m.edges.len(), 54);
    }

    #[test]
    fn single_cube_is_all_boundary() {
        let m = build_cube_mesh(1).unwrap();
        assert_eq!(m.cells.len(), 1);
        assert_eq!(m.boundary_faces.iter().filter(|&&b| b).count(), 6);
        assert!((m.cells[0].volume - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mesh_size_cube4() {
        let m = build_cube_mesh(4).unwrap();
        assert!((m.mesh_size() - 0.25).abs() < 1e-14);
        let vol: f64 = m.cells.iter().map(|c| c.volume).sum();
        assert!((vol - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mesh_size_is_scale_covariant() {
        let m = build_cube_mesh(3).unwrap();
        for lambda in [0.5, 2.0, 7.25] {
            let scaled = PolyMesh::from_raw(
                RawMesh {
                    vertices: m.vertices.iter().map(|p| Point3::from(p.coords * lambda)).collect(),
                    face_loops: m.faces.iter().map(|f| f.vertices.clone()).collect(),
                    cell_faces: m
                        .cells
                        .iter()
                        .map(|c| c.faces.iter().map(|&(f, s)| (f, s > 0.0)).collect())
                        .collect(),
                },
                None,
            )
            .unwrap();
            assert!((scaled.mesh_size() - lambda * m.mesh_size()).abs() < 1e-12 * lambda);
        }
    }

    #[test]
    fn interior_faces_have_two_opposite_cells() {
        let m = build_cube_mesh(2).unwrap();
        let mut seen: Vec<Vec<f64>> = vec![Vec::new(); m.faces.len()];
        for c in &m.cells {
            for &(f, s) in &c.faces {
                seen[f].push(s);
            }
        }
        for (f, signs) in seen.iter().enumerate() {
            if m.boundary_faces[f] {
                assert_eq!(signs.len(), 1);
            } else {
                assert_eq!(signs.len(), 2);
                assert_eq!(signs[0] * signs[1], -1.0);
            }
        }
    }

    #[test]
    fn cell_tets_are_positive_and_fill_volume() {
        for m in [build_cube_mesh(2).unwrap(), build_dtp_mesh(2, 0.1, 42).unwrap()] {
            for ci in 0..m.cells.len() {
                let v: f64 = m.cell_tets(ci).iter().map(tet_volume).sum();
                assert!((v - m.cells[ci].volume).abs() < 1e-13 * m.cells[ci].volume.max(1e-3));
            }
        }
    }

    #[test]
    fn centroid_of_unit_cube() {
        let m = build_cube_mesh(1).unwrap();
        let c = m.cells[0].centroid;
        assert!((c - Point3::new(0.5, 0.5, 0.5)).norm() < 1e-14);
        assert!((m.cells[0].diameter - 3.0f64.sqrt()).abs() < 1e-14);
    }
}
