//! Surrogate shape-regularity metrics.
//!
//! Exact star-shapedness parameters are not computable in general; we report
//! three surrogates per cell, each normalized by the cell diameter h_K:
//! the radius of the largest ball centered at the cell centroid inside all
//! face planes (the star-shapedness ball the centroid-fan decomposition
//! certifies), the smallest face inradius surrogate (2·area/perimeter), and
//! the shortest edge. Cells where any metric falls below the supplied ρ are
//! flagged.

use super::PolyMesh;

#[derive(Debug, Clone)]
pub struct CellRegularity {
    pub star_ball_ratio: f64,
    pub face_inradius_ratio: f64,
    pub edge_length_ratio: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub rho: f64,
    pub cells: Vec<CellRegularity>,
}

impl RegularityReport {
    pub fn flagged_cells(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.flagged)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn worst(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.star_ball_ratio.min(c.face_inradius_ratio).min(c.edge_length_ratio))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn regularity_report(mesh: &PolyMesh, rho: f64) -> RegularityReport {
    assert!(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1)");
    let cells = (0..mesh.cells.len())
        .map(|ci| {
            let cell = &mesh.cells[ci];
            let hk = cell.diameter;

            let star_ball = cell
                .faces
                .iter()
                .map(|&(fi, _)| {
                    let f = &mesh.faces[fi];
                    ((f.centroid - cell.centroid).dot(&f.normal)).abs()
                })
                .fold(f64::INFINITY, f64::min);

            let face_inradius = cell
                .faces
                .iter()
                .map(|&(fi, _)| {
                    let f = &mesh.faces[fi];
                    let perimeter: f64 = f
                        .edges
                        .iter()
                        .map(|&e| {
                            let [a, b] = mesh.edges[e];
                            (mesh.vertices[a] - mesh.vertices[b]).norm()
                        })
                        .sum();
                    2.0 * f.area / perimeter
                })
                .fold(f64::INFINITY, f64::min);

            let edge_len = cell
                .edges
                .iter()
                .map(|&e| {
                    let [a, b] = mesh.edges[e];
                    (mesh.vertices[a] - mesh.vertices[b]).norm()
                })
                .fold(f64::INFINITY, f64::min);

            CellRegularity {
                star_ball_ratio: star_ball / hk,
                face_inradius_ratio: face_inradius / hk,
                edge_length_ratio: edge_len / hk,
                flagged: star_ball / hk < rho || face_inradius / hk < rho || edge_len / hk < rho,
            }
        })
        .collect();
    RegularityReport { rho, cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cube_mesh, build_dtp_mesh, io::parse_mesh};

    #[test]
    fn unit_cube_is_not_flagged() {
        let m = build_cube_mesh(1).unwrap();
        let r = regularity_report(&m, 0.1);
        assert!(r.flagged_cells().is_empty());
        // shortest edge over diameter = 1/√3
        assert!((r.cells[0].edge_length_ratio - 1.0 / 3.0f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn undistorted_prisms_have_identical_metrics() {
        let m = build_dtp_mesh(3, 0.0, 0).unwrap();
        let r = regularity_report(&m, 0.01);
        let first = &r.cells[0];
        for c in &r.cells {
            assert!((c.star_ball_ratio - first.star_ball_ratio).abs() < 1e-12);
            assert!((c.face_inradius_ratio - first.face_inradius_ratio).abs() < 1e-12);
            assert!((c.edge_length_ratio - first.edge_length_ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn sliver_prism_is_flagged() {
        // a 1x1 prism squashed to height 1e-3
        let text = "polymesh 1\n\
            vertices 6\n\
            0 0 0\n1 0 0\n1 1 0\n\
            0 0 1e-3\n1 0 1e-3\n1 1 1e-3\n\
            faces 5\n\
            3 0 2 1\n3 3 4 5\n4 0 1 4 3\n4 1 2 5 4\n4 2 0 3 5\n\
            cells 1\n5 +1 +2 +3 +4 +5\n";
        let m = parse_mesh(text).unwrap();
        let r = regularity_report(&m, 0.1);
        assert_eq!(r.flagged_cells(), vec![0]);
    }
}
