//! Structured mesh families on [0,1]³: cubes and distorted triangular prisms.

use super::{MeshBuilder, PolyMesh};
use crate::error::{Error, Result};
use nalgebra::Point3;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// n³ axis-aligned cubes tiling [0,1]³.
pub fn build_cube_mesh(n: usize) -> Result<PolyMesh> {
    assert!(n >= 1, "need at least one subdivision");
    let vertices = grid_vertices(n);
    let idx = |i: usize, j: usize, k: usize| i + (n + 1) * (j + (n + 1) * k);

    let mut b = MeshBuilder::new(vertices);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                // Outward loops of cell (i,j,k); right-hand rule.
                let loops = vec![
                    // x = i plane, outward -x
                    vec![idx(i, j, k), idx(i, j, k + 1), idx(i, j + 1, k + 1), idx(i, j + 1, k)],
                    // x = i+1 plane, outward +x
                    vec![idx(i + 1, j, k), idx(i + 1, j + 1, k), idx(i + 1, j + 1, k + 1), idx(i + 1, j, k + 1)],
                    // y = j plane, outward -y
                    vec![idx(i, j, k), idx(i + 1, j, k), idx(i + 1, j, k + 1), idx(i, j, k + 1)],
                    // y = j+1 plane, outward +y
                    vec![idx(i, j + 1, k), idx(i, j + 1, k + 1), idx(i + 1, j + 1, k + 1), idx(i + 1, j + 1, k)],
                    // z = k plane, outward -z
                    vec![idx(i, j, k), idx(i, j + 1, k), idx(i + 1, j + 1, k), idx(i + 1, j, k)],
                    // z = k+1 plane, outward +z
                    vec![idx(i, j, k + 1), idx(i + 1, j, k + 1), idx(i + 1, j + 1, k + 1), idx(i, j + 1, k + 1)],
                ];
                b.add_cell(loops)?;
            }
        }
    }
    b.finish(Some(1.0))
}

/// 2n³ triangular prisms from an n³ grid whose interior vertices are jittered
/// by a seeded offset ≤ jitter·(1/n) per coordinate. Boundary vertices move
/// only tangentially to ∂Ω so the domain is preserved. Side quadrilaterals
/// that lose planarity under the jitter are split into two triangles along
/// the diagonal from their lowest-indexed vertex.
pub fn build_dtp_mesh(n: usize, jitter: f64, seed: u64) -> Result<PolyMesh> {
    assert!(n >= 1, "need at least one subdivision");
    assert!((0.0..0.3).contains(&jitter), "jitter must be in [0, 0.3)");

    let mut vertices = grid_vertices(n);
    let h = 1.0 / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in vertices.iter_mut() {
        // Fixed draw count per vertex keeps the stream deterministic.
        let draws = [unit_draw(&mut rng), unit_draw(&mut rng), unit_draw(&mut rng)];
        for d in 0..3 {
            let on_boundary = v[d] == 0.0 || v[d] == 1.0;
            if !on_boundary {
                v[d] += jitter * h * draws[d];
            }
        }
    }

    let idx = |i: usize, j: usize, k: usize| i + (n + 1) * (j + (n + 1) * k);
    let mut b = MeshBuilder::new(vertices);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                // Split the (i,j) square along the (i,j)-(i+1,j+1) diagonal.
                let tri_a = [idx(i, j, k), idx(i + 1, j, k), idx(i + 1, j + 1, k)];
                let tri_b = [idx(i, j, k), idx(i + 1, j + 1, k), idx(i, j + 1, k)];
                for tri in [tri_a, tri_b] {
                    let top = [
                        idx_up(tri[0], n),
                        idx_up(tri[1], n),
                        idx_up(tri[2], n),
                    ];
                    let mut loops: Vec<Vec<usize>> = Vec::with_capacity(8);
                    // bottom (outward -z): reverse of the CCW triangle
                    loops.push(vec![tri[0], tri[2], tri[1]]);
                    // top (outward +z)
                    loops.push(vec![top[0], top[1], top[2]]);
                    // vertical sides, outward
                    for s in 0..3 {
                        let a = tri[s];
                        let c = tri[(s + 1) % 3];
                        let quad = vec![a, c, idx_up(c, n), idx_up(a, n)];
                        for piece in split_if_nonplanar(&b.vertices, quad) {
                            loops.push(piece);
                        }
                    }
                    b.add_cell(loops)?;
                }
            }
        }
    }
    b.finish(Some(1.0)).map_err(|e| match e {
        Error::Geometry { cell, msg } => Error::Geometry {
            cell,
            msg: format!("{msg} (jitter too large?)"),
        },
        other => other,
    })
}

fn grid_vertices(n: usize) -> Vec<Point3<f64>> {
    let mut vertices = Vec::with_capacity((n + 1).pow(3));
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                vertices.push(Point3::new(
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                ));
            }
        }
    }
    vertices
}

/// Vertex directly above `v` in the (n+1)³ grid.
fn idx_up(v: usize, n: usize) -> usize {
    v + (n + 1) * (n + 1)
}

/// Uniform draw in [-1, 1], platform-independent.
fn unit_draw(rng: &mut ChaCha8Rng) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    2.0 * u - 1.0
}

/// Keeps a planar quad whole; splits a warped one along the diagonal from its
/// lowest-indexed vertex so both adjacent cells derive the same two triangles.
fn split_if_nonplanar(vertices: &[Point3<f64>], quad: Vec<usize>) -> Vec<Vec<usize>> {
    let p: Vec<_> = quad.iter().map(|&v| vertices[v]).collect();
    let n = (p[1] - p[0]).cross(&(p[2] - p[0]));
    let dev = (p[3] - p[0]).dot(&n).abs();
    let scale = (p[2] - p[0]).norm().max((p[3] - p[1]).norm());
    if dev <= 1e-12 * scale * n.norm() {
        return vec![quad];
    }
    let m = (0..4).min_by_key(|&i| quad[i]).unwrap();
    let at = |o: usize| quad[(m + o) % 4];
    vec![vec![at(0), at(1), at(2)], vec![at(0), at(2), at(3)]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dtp_cell_count_and_mesh_size() {
        let m = build_dtp_mesh(5, 0.0, 0).unwrap();
        assert_eq!(m.cells.len(), 250);
        assert!((m.mesh_size() - (1.0f64 / 250.0).cbrt()).abs() < 1e-12);
        // paper's reported value for n = 4 (128 prisms)
        let m4 = build_dtp_mesh(4, 0.0, 0).unwrap();
        assert!((m4.mesh_size() - 1.9843e-01).abs() < 5e-5);
    }

    #[test]
    fn dtp_two_prisms_fill_unit_cube() {
        let m = build_dtp_mesh(1, 0.0, 0).unwrap();
        assert_eq!(m.cells.len(), 2);
        let vol: f64 = m.cells.iter().map(|c| c.volume).sum();
        assert!((vol - 1.0).abs() < 1e-14);
        // prism: 6 vertices, 9 edges, 5 faces
        assert_eq!(m.cells[0].vertices.len(), 6);
        assert_eq!(m.cells[0].edges.len(), 9);
        assert_eq!(m.cells[0].faces.len(), 5);
    }

    #[test]
    fn dtp_jitter_is_deterministic() {
        let a = build_dtp_mesh(4, 0.1, 42).unwrap();
        let b = build_dtp_mesh(4, 0.1, 42).unwrap();
        for (x, y) in a.vertices.iter().zip(&b.vertices) {
            assert_eq!(x, y);
        }
        let c = build_dtp_mesh(4, 0.1, 43).unwrap();
        assert!(a.vertices.iter().zip(&c.vertices).any(|(x, y)| x != y));
    }

    #[test]
    fn dtp_jitter_preserves_domain() {
        let m = build_dtp_mesh(3, 0.15, 7).unwrap();
        let vol: f64 = m.cells.iter().map(|c| c.volume).sum();
        assert!((vol - 1.0).abs() < 1e-12);
        // boundary vertices stay on their planes
        for (v, &bnd) in m.vertices.iter().zip(&m.boundary_vertices) {
            if bnd {
                let on_plane = (0..3).any(|d| v[d] == 0.0 || v[d] == 1.0);
                assert!(on_plane);
            }
        }
    }

    #[test]
    fn dtp_interior_quads_are_split_when_jittered() {
        let planar = build_dtp_mesh(2, 0.0, 1).unwrap();
        let jittered = build_dtp_mesh(2, 0.1, 1).unwrap();
        assert!(jittered.faces.len() > planar.faces.len());
    }
}
