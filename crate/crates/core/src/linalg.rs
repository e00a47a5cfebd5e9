//! Dense linear-algebra helpers built on `nalgebra`'s SVD and symmetric
//! eigensolver.

use crate::{Matrix, Vector};

/// Relative tolerance for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

fn full_svd(a: &Matrix) -> nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    // Pad wide matrices with zero rows so V^T comes back square.
    if a.nrows() < a.ncols() {
        let mut padded = Matrix::zeros(a.ncols(), a.ncols());
        padded.rows_mut(0, a.nrows()).copy_from(a);
        padded.svd(false, true)
    } else {
        a.clone().svd(false, true)
    }
}

fn cutoff(sv: &Vector, tol: f64) -> f64 {
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    tol * smax.max(1.0)
}

/// Orthonormal basis (as columns) of the right nullspace of `a`.
pub fn nullspace(a: &Matrix, tol: f64) -> Matrix {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    let svd = full_svd(a);
    let vt = svd.v_t.as_ref().expect("V^T requested");
    let cut = cutoff(&svd.singular_values, tol);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cut)
        .collect();
    let mut out = Matrix::zeros(n, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        out.set_column(c, &vt.row(i).transpose());
    }
    out
}

/// Numerical rank of `a` at relative tolerance `tol`.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.singular_values();
    let cut = cutoff(&sv, tol);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the column span of `a`.
pub fn column_space(a: &Matrix, tol: f64) -> Matrix {
    if a.ncols() == 0 {
        return Matrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.as_ref().expect("U requested");
    let cut = cutoff(&svd.singular_values, tol);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut)
        .collect();
    let mut out = Matrix::zeros(a.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        out.set_column(c, &u.column(i));
    }
    out
}

/// Minimum-norm least-squares solution of `a x = b`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: Vector,
    /// `||a x - b||`
    pub residual: f64,
    /// Dimension of the nullspace of `a`.
    pub nullity: usize,
}

pub fn least_squares(a: &Matrix, b: &Vector, tol: f64) -> LeastSquares {
    let n = a.ncols();
    let svd = a.clone().svd(true, true);
    let cut = cutoff(&svd.singular_values, tol);
    let r = svd.singular_values.iter().filter(|&&s| s > cut).count();
    let solution = svd.solve(b, cut).expect("both factors were computed");
    let residual = (a * &solution - b).norm();
    LeastSquares {
        solution,
        residual,
        nullity: n - r,
    }
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}
