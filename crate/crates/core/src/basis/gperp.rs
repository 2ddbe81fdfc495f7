//! L²-orthonormal basis of 𝒢⊥_k(K) = orthogonal complement of ∇P_{k+1}(K)
//! inside [P_k(K)]³.
//!
//! Coefficient vectors are component-major over the scalar basis of P_k.
//! Cardinality: 3·dim P_k − (dim P_{k+1} − 1); 0 members at k = 0, 3 at k = 1.

use super::{dim_p3, CellBasis};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Relative singular-value cutoff for rank decisions in the Gram solves.
const RANK_TOL: f64 = 1e-10;

/// Coefficients (component-major, in the P_k scalar basis) of the gradient
/// fields h_K ∇m̂ for m̂ ranging over P̂_{k+1\0}; pure index algebra, exact.
pub fn gradient_subspace(basis_k1: &CellBasis) -> DMatrix<f64> {
    let k1 = basis_k1.degree;
    let m = dim_p3(k1 as i64 - 1); // dim P_k
    let g = basis_k1.len() - 1; // hatted members of P_{k+1}
    let prefix = &basis_k1.indices[..m];
    let mut out = DMatrix::zeros(3 * m, g);
    for (col, alpha) in basis_k1.indices[1..].iter().enumerate() {
        // h ∂_d m_α = α_d m_{α - e_d}
        for d in 0..3 {
            if alpha[d] == 0 {
                continue;
            }
            let mut down = *alpha;
            down[d] -= 1;
            let row = prefix.iter().position(|&i| i == down).expect("prefix ordering");
            out[(d * m + row, col)] = alpha[d] as f64;
        }
    }
    out
}

/// Builds the orthonormal complement basis. `basis_k1` is the scalar basis of
/// degree k+1 on the cell; `scalar_mass_k` the Gram matrix ∫ m_α m_β of its
/// degree-k prefix.
pub fn gperp_basis(basis_k1: &CellBasis, scalar_mass_k: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = scalar_mass_k.nrows();
    assert_eq!(m, dim_p3(basis_k1.degree as i64 - 1));
    let vdim = 3 * m;
    let grads = gradient_subspace(basis_k1);
    let g = grads.ncols();
    let ng = vdim - g;
    if ng == 0 {
        return Ok(DMatrix::zeros(vdim, 0));
    }

    // block-diagonal vector mass
    let mut mass = DMatrix::zeros(vdim, vdim);
    for d in 0..3 {
        mass.view_mut((d * m, d * m), (m, m)).copy_from(scalar_mass_k);
    }

    // Pivoted Gram–Schmidt in the M inner product with reorthogonalization:
    // first orthonormalize the gradient subspace, then sweep the coordinate
    // basis and keep the directions with the largest M-residual.
    let mdot = |a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>| (a.transpose() * &mass * b)[(0, 0)];
    let mut ortho: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(vdim);
    let mut grad_cols: Vec<nalgebra::DVector<f64>> = (0..g).map(|j| grads.column(j).into_owned()).collect();
    while !grad_cols.is_empty() {
        let pick = (0..grad_cols.len())
            .max_by(|&a, &b| mdot(&grad_cols[a], &grad_cols[a]).total_cmp(&mdot(&grad_cols[b], &grad_cols[b])))
            .unwrap();
        let mut v = grad_cols.swap_remove(pick);
        let before = mdot(&v, &v).sqrt();
        for _ in 0..2 {
            for q in &ortho {
                let proj = mdot(q, &v);
                v -= q * proj;
            }
        }
        let after = mdot(&v, &v).sqrt();
        if after <= RANK_TOL * before.max(1.0) {
            return Err(Error::NumericalRank(
                "gradient subspace is rank deficient; degenerate cell geometry".into(),
            ));
        }
        ortho.push(v / after);
    }

    let mut residuals: Vec<nalgebra::DVector<f64>> = (0..vdim)
        .map(|i| {
            let mut e = nalgebra::DVector::zeros(vdim);
            e[i] = 1.0;
            e
        })
        .collect();
    let mut complement: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(ng);
    while complement.len() < ng {
        // project all remaining candidates, pick the largest residual
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in residuals.iter().enumerate() {
            let mut v = c.clone();
            for q in ortho.iter().chain(&complement) {
                let proj = mdot(q, &v);
                v -= q * proj;
            }
            let n2 = mdot(&v, &v);
            if best.map_or(true, |(_, bn)| n2 > bn) {
                best = Some((i, n2));
            }
        }
        let (pick, n2) = best.ok_or_else(|| Error::NumericalRank("complement exhausted".into()))?;
        if n2.sqrt() <= RANK_TOL {
            return Err(Error::NumericalRank(
                "could not complete the complement basis; degenerate cell geometry".into(),
            ));
        }
        let mut v = residuals.swap_remove(pick);
        for _ in 0..2 {
            for q in ortho.iter().chain(&complement) {
                let proj = mdot(q, &v);
                v -= q * proj;
            }
        }
        let n = mdot(&v, &v).sqrt();
        complement.push(v / n);
    }

    let mut out = DMatrix::zeros(vdim, ng);
    for (j, q) in complement.iter().enumerate() {
        out.column_mut(j).copy_from(q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::quad_cell;
    use crate::mesh::{build_cube_mesh, build_dtp_mesh};
    use crate::mesh::PolyMesh;

    fn scalar_mass(mesh: &PolyMesh, cell: usize, basis: &CellBasis, upto: usize) -> DMatrix<f64> {
        let q = quad_cell(mesh, cell, 2 * basis.degree);
        let mut mass = DMatrix::zeros(upto, upto);
        for (p, w) in q.points.iter().zip(&q.weights) {
            let vals = basis.eval_all(p);
            for i in 0..upto {
                for j in 0..upto {
                    mass[(i, j)] += w * vals[i] * vals[j];
                }
            }
        }
        mass
    }

    #[test]
    fn cardinalities_match_the_dimension_count() {
        let mesh = build_cube_mesh(1).unwrap();
        // k = 0: 3 - 3 = 0 members
        let b1 = CellBasis::new(&mesh, 0, 1);
        let mass0 = scalar_mass(&mesh, 0, &b1, 1);
        assert_eq!(gperp_basis(&b1, &mass0).unwrap().ncols(), 0);
        // k = 1: 12 - 9 = 3 members
        let b2 = CellBasis::new(&mesh, 0, 2);
        let mass1 = scalar_mass(&mesh, 0, &b2, 4);
        assert_eq!(gperp_basis(&b2, &mass1).unwrap().ncols(), 3);
    }

    #[test]
    fn members_are_orthonormal_and_orthogonal_to_gradients() {
        for mesh in [build_cube_mesh(1).unwrap(), build_dtp_mesh(2, 0.15, 9).unwrap()] {
            for cell in 0..mesh.cells.len().min(3) {
                let b2 = CellBasis::new(&mesh, cell, 2);
                let mass1 = scalar_mass(&mesh, cell, &b2, 4);
                let gp = gperp_basis(&b2, &mass1).unwrap();
                let m = 4;
                let mut mass = DMatrix::zeros(3 * m, 3 * m);
                for d in 0..3 {
                    mass.view_mut((d * m, d * m), (m, m)).copy_from(&mass1);
                }
                let gram = gp.transpose() * &mass * &gp;
                for i in 0..gp.ncols() {
                    for j in 0..gp.ncols() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((gram[(i, j)] - expect).abs() < 1e-12);
                    }
                }
                let grads = gradient_subspace(&b2);
                let cross = grads.transpose() * &mass * &gp;
                assert!(cross.amax() < 1e-11);
            }
        }
    }

    #[test]
    fn decomposition_of_vector_polynomials_is_complete() {
        // every q ∈ [P_1]³ must split as ∇q̃ + q⊥ with those two ingredients
        let mesh = build_dtp_mesh(1, 0.0, 0).unwrap();
        let b2 = CellBasis::new(&mesh, 0, 2);
        let mass1 = scalar_mass(&mesh, 0, &b2, 4);
        let gp = gperp_basis(&b2, &mass1).unwrap();
        let grads = gradient_subspace(&b2);
        let gen = {
            let mut g = DMatrix::zeros(12, grads.ncols() + gp.ncols());
            g.view_mut((0, 0), (12, grads.ncols())).copy_from(&grads);
            g.view_mut((0, grads.ncols()), (12, gp.ncols())).copy_from(&gp);
            g
        };
        // residual of least-squares fit onto the generators must vanish
        let svd = nalgebra::SVD::new(gen.clone(), true, true);
        for col in 0..12 {
            let mut rhs = nalgebra::DVector::zeros(12);
            rhs[col] = 1.0;
            let sol = svd.solve(&rhs, 1e-12).unwrap();
            let res = (&gen * sol - rhs).norm();
            assert!(res < 1e-11, "monomial {col} residual {res}");
        }
    }
}
