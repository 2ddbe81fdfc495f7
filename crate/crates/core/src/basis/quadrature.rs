//! Quadrature on polygons and polyhedra, exact to a requested degree.
//!
//! Reference rules are conical (Duffy) products of Gauss–Legendre lines: a
//! degree-n polynomial on the reference triangle/tetrahedron pulls back to a
//! polynomial of degree n+1 / n+2 per collapsed direction, so exactness is
//! guaranteed with all-positive weights at any degree. Cell and face rules map
//! the reference rule over the centroid-fan decomposition, which is valid for
//! the star-shaped cells required of the mesh.

use crate::mesh::{tet_volume, PolyMesh};
use nalgebra::{Point3, Vector3};

/// Points and weights summing to the measure of the region.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<Point3<f64>>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl QuadratureRule {
    pub fn integrate(&self, mut f: impl FnMut(&Point3<f64>) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss–Legendre nodes/weights on [0,1], exact for degree ≤ 2n-1.
/// Newton iteration on the Legendre recurrence; accurate to ~1e-15.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess on [-1,1]
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        xs[i] = 0.5 * (x + 1.0);
        ws[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Legendre P_n and P_n' at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Duffy rule on the reference triangle {u,v ≥ 0, u+v ≤ 1}, exact to `degree`.
fn reference_triangle(degree: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    // x = u, y = v(1-u); Jacobian (1-u): degree in u becomes degree+1.
    let nu = (degree + 1) / 2 + 1;
    let nv = degree / 2 + 1;
    let (xu, wu) = gauss_legendre_01(nu);
    let (xv, wv) = gauss_legendre_01(nv);
    let mut pts = Vec::with_capacity(nu * nv);
    let mut wts = Vec::with_capacity(nu * nv);
    for (u, wu) in xu.iter().zip(&wu) {
        for (v, wv) in xv.iter().zip(&wv) {
            pts.push([*u, v * (1.0 - u)]);
            wts.push(wu * wv * (1.0 - u));
        }
    }
    (pts, wts)
}

/// Duffy rule on the reference tetrahedron, exact to `degree`.
fn reference_tet(degree: usize) -> (Vec<[f64; 3]>, Vec<f64>) {
    // x = u, y = v(1-u), z = w(1-u)(1-v); Jacobian (1-u)²(1-v).
    let nu = (degree + 2) / 2 + 1;
    let nv = (degree + 1) / 2 + 1;
    let nw = degree / 2 + 1;
    let (xu, wu) = gauss_legendre_01(nu);
    let (xv, wv) = gauss_legendre_01(nv);
    let (xw, ww) = gauss_legendre_01(nw);
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    for (u, wu) in xu.iter().zip(&wu) {
        for (v, wv) in xv.iter().zip(&wv) {
            for (w, ww) in xw.iter().zip(&ww) {
                let x = *u;
                let y = v * (1.0 - u);
                let z = w * (1.0 - u) * (1.0 - v);
                pts.push([x, y, z]);
                wts.push(wu * wv * ww * (1.0 - u) * (1.0 - u) * (1.0 - v));
            }
        }
    }
    (pts, wts)
}

/// Rule over one physical tetrahedron.
fn map_tet(t: &[Point3<f64>; 4], ref_pts: &[[f64; 3]], ref_wts: &[f64], pts: &mut Vec<Point3<f64>>, wts: &mut Vec<f64>) {
    let vol6 = 6.0 * tet_volume(t);
    for (rp, rw) in ref_pts.iter().zip(ref_wts) {
        let p = t[0].coords
            + (t[1] - t[0]) * rp[0]
            + (t[2] - t[0]) * rp[1]
            + (t[3] - t[0]) * rp[2];
        pts.push(Point3::from(p));
        wts.push(rw * vol6);
    }
}

/// Quadrature over a cell via its centroid-fan tetrahedra.
pub fn quad_cell(mesh: &PolyMesh, cell: usize, exactness: usize) -> QuadratureRule {
    let (rp, rw) = reference_tet(exactness);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for tet in mesh.cell_tets(cell) {
        map_tet(&tet, &rp, &rw, &mut points, &mut weights);
    }
    QuadratureRule {
        points,
        weights,
        exactness,
    }
}

/// Quadrature over a face via its centroid-fan triangles. Points are 3D
/// positions on the face plane; weights sum to the face area.
pub fn quad_face(mesh: &PolyMesh, face: usize, exactness: usize) -> QuadratureRule {
    let (rp, rw) = reference_triangle(exactness);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for tri in mesh.face_tris(face) {
        let e1 = tri[1] - tri[0];
        let e2 = tri[2] - tri[0];
        let darea2 = e1.cross(&e2).norm();
        for (p, w) in rp.iter().zip(&rw) {
            points.push(Point3::from(tri[0].coords + e1 * p[0] + e2 * p[1]));
            weights.push(w * darea2);
        }
    }
    QuadratureRule {
        points,
        weights,
        exactness,
    }
}

/// Simpson rule along a straight edge; exact for cubics, which covers every
/// trace integral of the k_u = 2 wireframe (P₂ trace × P₁ factor).
pub fn edge_simpson(a: &Point3<f64>, b: &Point3<f64>) -> [(Point3<f64>, f64); 3] {
    let len = (b - a).norm();
    let mid = nalgebra::center(a, b);
    [(*a, len / 6.0), (mid, 4.0 * len / 6.0), (*b, len / 6.0)]
}

/// Closed-form monomial moment over the reference tetrahedron:
/// ∫ x^a y^b z^c = a! b! c! / (a+b+c+3)!.
pub fn reference_tet_moment(a: u32, b: u32, c: u32) -> f64 {
    fn fact(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }
    fact(a) * fact(b) * fact(c) / fact(a + b + c + 3)
}

/// Closed-form monomial moment over the reference triangle:
/// ∫ x^a y^b = a! b! / (a+b+2)!.
pub fn reference_triangle_moment(a: u32, b: u32) -> f64 {
    fn fact(n: u32) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }
    fact(a) * fact(b) / fact(a + b + 2)
}

#[allow(dead_code)]
pub(crate) fn unit_normal_of(tri: &[Point3<f64>; 3]) -> Vector3<f64> {
    (tri[1] - tri[0]).cross(&(tri[2] - tri[0])).normalize()
}
