//! Scaled monomial bases on cells and faces, hatted sub-bases, quadrature,
//! and the L²-orthogonal complement of gradient polynomials.
//!
//! Bases are ordered degree-major (all monomials of total degree d before
//! degree d+1), lexicographic within a degree, so the degree-(n-1) basis is a
//! prefix of the degree-n basis and hatted sub-bases are contiguous ranges.
//! Vector polynomial coefficients are stored component-major: all x-component
//! coefficients, then y, then z.

pub mod gperp;
pub mod quadrature;

pub use gperp::gperp_basis;
pub use quadrature::{quad_cell, quad_face, QuadratureRule};

use crate::mesh::PolyMesh;
use nalgebra::{Point3, Vector3};
use std::ops::Range;

/// dim P_n in 3 variables.
pub fn dim_p3(n: i64) -> usize {
    if n < 0 {
        0
    } else {
        ((n + 1) * (n + 2) * (n + 3) / 6) as usize
    }
}

/// dim P_n in 2 variables.
pub fn dim_p2(n: i64) -> usize {
    if n < 0 {
        0
    } else {
        ((n + 1) * (n + 2) / 2) as usize
    }
}

fn indices_3d(n: usize) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(dim_p3(n as i64));
    for d in 0..=n as u32 {
        for a in (0..=d).rev() {
            for b in (0..=(d - a)).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

fn indices_2d(n: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::with_capacity(dim_p2(n as i64));
    for d in 0..=n as u32 {
        for a in (0..=d).rev() {
            out.push([a, d - a]);
        }
    }
    out
}

/// Scaled monomial basis m_α = ((x-x_K)/h_K)^α on a cell.
#[derive(Debug, Clone)]
pub struct CellBasis {
    pub degree: usize,
    pub center: Point3<f64>,
    pub scale: f64,
    pub indices: Vec<[u32; 3]>,
}

impl CellBasis {
    pub fn new(mesh: &PolyMesh, cell: usize, degree: usize) -> Self {
        let c = &mesh.cells[cell];
        CellBasis {
            degree,
            center: c.centroid,
            scale: c.diameter,
            indices: indices_3d(degree),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn local(&self, x: &Point3<f64>) -> Vector3<f64> {
        (x - self.center) / self.scale
    }

    pub fn eval(&self, i: usize, x: &Point3<f64>) -> f64 {
        let t = self.local(x);
        let [a, b, c] = self.indices[i];
        t.x.powi(a as i32) * t.y.powi(b as i32) * t.z.powi(c as i32)
    }

    /// Values of all basis members at `x`.
    pub fn eval_all(&self, x: &Point3<f64>) -> Vec<f64> {
        let t = self.local(x);
        self.indices
            .iter()
            .map(|&[a, b, c]| t.x.powi(a as i32) * t.y.powi(b as i32) * t.z.powi(c as i32))
            .collect()
    }

    pub fn grad(&self, i: usize, x: &Point3<f64>) -> Vector3<f64> {
        let t = self.local(x);
        let [a, b, c] = self.indices[i];
        let pw = |v: f64, e: u32| if e == 0 { 0.0 } else { e as f64 * v.powi(e as i32 - 1) };
        Vector3::new(
            pw(t.x, a) * t.y.powi(b as i32) * t.z.powi(c as i32),
            t.x.powi(a as i32) * pw(t.y, b) * t.z.powi(c as i32),
            t.x.powi(a as i32) * t.y.powi(b as i32) * pw(t.z, c),
        ) / self.scale
    }

    pub fn laplacian(&self, i: usize, x: &Point3<f64>) -> f64 {
        let t = self.local(x);
        let [a, b, c] = self.indices[i];
        let p2 = |v: f64, e: u32| {
            if e < 2 {
                0.0
            } else {
                (e * (e - 1)) as f64 * v.powi(e as i32 - 2)
            }
        };
        (p2(t.x, a) * t.y.powi(b as i32) * t.z.powi(c as i32)
            + t.x.powi(a as i32) * p2(t.y, b) * t.z.powi(c as i32)
            + t.x.powi(a as i32) * t.y.powi(b as i32) * p2(t.z, c))
            / (self.scale * self.scale)
    }

    /// Contiguous range of the hatted sub-basis {m_α : m+1 ≤ |α| ≤ n}.
    /// `m = -1` yields the full basis; `m = n` the empty range.
    pub fn hat_range(&self, m: i64) -> Range<usize> {
        dim_p3(m)..self.len()
    }
}

/// Scaled monomial basis on a face, expressed in its in-plane frame:
/// m_β = ξ^β1 η^β2 with ξ = (x-x_f)·t₁/h_f, η = (x-x_f)·t₂/h_f.
#[derive(Debug, Clone)]
pub struct FaceBasis {
    pub degree: usize,
    pub center: Point3<f64>,
    pub scale: f64,
    pub axis1: Vector3<f64>,
    pub axis2: Vector3<f64>,
    pub indices: Vec<[u32; 2]>,
}

impl FaceBasis {
    pub fn new(mesh: &PolyMesh, face: usize, degree: usize) -> Self {
        let f = &mesh.faces[face];
        FaceBasis {
            degree,
            center: f.centroid,
            scale: f.diameter,
            axis1: f.axis1,
            axis2: f.axis2,
            indices: indices_2d(degree),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn local(&self, x: &Point3<f64>) -> [f64; 2] {
        let d = x - self.center;
        [d.dot(&self.axis1) / self.scale, d.dot(&self.axis2) / self.scale]
    }

    pub fn eval(&self, i: usize, x: &Point3<f64>) -> f64 {
        let [xi, eta] = self.local(x);
        let [a, b] = self.indices[i];
        xi.powi(a as i32) * eta.powi(b as i32)
    }

    pub fn eval_all(&self, x: &Point3<f64>) -> Vec<f64> {
        let [xi, eta] = self.local(x);
        self.indices
            .iter()
            .map(|&[a, b]| xi.powi(a as i32) * eta.powi(b as i32))
            .collect()
    }

    /// Surface gradient as a 3D vector in the face plane.
    pub fn surface_grad(&self, i: usize, x: &Point3<f64>) -> Vector3<f64> {
        let [xi, eta] = self.local(x);
        let [a, b] = self.indices[i];
        let pw = |v: f64, e: u32| if e == 0 { 0.0 } else { e as f64 * v.powi(e as i32 - 1) };
        (self.axis1 * (pw(xi, a) * eta.powi(b as i32)) + self.axis2 * (xi.powi(a as i32) * pw(eta, b)))
            / self.scale
    }

    /// Surface Laplacian Δ_f m.
    pub fn surface_laplacian(&self, i: usize, x: &Point3<f64>) -> f64 {
        let [xi, eta] = self.local(x);
        let [a, b] = self.indices[i];
        let p2 = |v: f64, e: u32| {
            if e < 2 {
                0.0
            } else {
                (e * (e - 1)) as f64 * v.powi(e as i32 - 2)
            }
        };
        (p2(xi, a) * eta.powi(b as i32) + xi.powi(a as i32) * p2(eta, b)) / (self.scale * self.scale)
    }

    pub fn hat_range(&self, m: i64) -> Range<usize> {
        dim_p2(m)..self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_cube_mesh;

    #[test]
    fn cardinalities() {
        let m = build_cube_mesh(1).unwrap();
        assert_eq!(CellBasis::new(&m, 0, 2).len(), 10);
        assert_eq!(CellBasis::new(&m, 0, 1).len(), 4);
        let f = FaceBasis::new(&m, 0, 2);
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn first_member_is_one_and_centered() {
        let m = build_cube_mesh(1).unwrap();
        let b = CellBasis::new(&m, 0, 1);
        let c = m.cells[0].centroid;
        let vals = b.eval_all(&c);
        assert_eq!(vals, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn hat_ranges() {
        let m = build_cube_mesh(1).unwrap();
        let b1 = CellBasis::new(&m, 0, 1);
        assert_eq!(b1.hat_range(0), 1..4); // the 3 linear monomials
        let b0 = CellBasis::new(&m, 0, 0);
        assert!(b0.hat_range(0).is_empty()); // P̂_{0\0} = ∅
        let b2 = CellBasis::new(&m, 0, 2);
        assert_eq!(b2.hat_range(0).len(), 9); // 10 - 1
        assert_eq!(b2.hat_range(-1), 0..10);
    }

    #[test]
    fn gradient_and_laplacian_match_finite_differences() {
        let m = build_cube_mesh(1).unwrap();
        let b = CellBasis::new(&m, 0, 3);
        let x = Point3::new(0.31, 0.7, 0.45);
        let h = 1e-6;
        for i in 0..b.len() {
            let g = b.grad(i, &x);
            let mut lap_fd = 0.0;
            for d in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[d] += h;
                xm[d] -= h;
                let fd = (b.eval(i, &xp) - b.eval(i, &xm)) / (2.0 * h);
                assert!((fd - g[d]).abs() < 1e-8, "grad {i} axis {d}");
                lap_fd += (b.eval(i, &xp) - 2.0 * b.eval(i, &x) + b.eval(i, &xm)) / (h * h);
            }
            assert!((lap_fd - b.laplacian(i, &x)).abs() < 2e-4);
        }
    }

    #[test]
    fn face_basis_lives_in_plane() {
        let m = build_cube_mesh(1).unwrap();
        let fb = FaceBasis::new(&m, 0, 2);
        let f = &m.faces[0];
        // surface gradient is orthogonal to the face normal
        let x = Point3::from(f.centroid.coords + 0.2 * f.axis1 + 0.1 * f.axis2);
        for i in 0..fb.len() {
            assert!(fb.surface_grad(i, &x).dot(&f.normal).abs() < 1e-14);
        }
    }
}
