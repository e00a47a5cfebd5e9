//! Recovering a curvature tensor from Jacobi-operator data.
//!
//! Both solvers fit basis coordinates by least squares. Since `J(x)` is
//! quadratic in `x`, the queries `e_i` and `e_i + e_j` determine it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::basis::{curvature_space_basis, Subspace};
use crate::error::{CurvError, Result};
use crate::identities::{constraint_subspace, Constraint};
use crate::linalg::{least_squares, RANK_TOL};
use crate::operators::{complex_jacobi, jacobi};
use crate::space::{spanning_lines, ComplexLine, ComplexStructure};
use crate::tensor::{AlgebraicCurvatureTensor, ComplexModel};
use crate::{Matrix, Vector};

/// Largest relative residual of the fitted system accepted as consistent.
pub const CONSISTENCY_TOL: f64 = 1e-8;

type JacobiFn = dyn Fn(&Vector) -> Matrix + Send + Sync;
type ComplexJacobiFn = dyn Fn(&ComplexLine) -> Matrix + Send + Sync;

/// A black box `x -> J(x)` on `R^m`.
#[derive(Clone)]
pub struct JacobiOracle {
    dim: usize,
    eval: Arc<JacobiFn>,
}

impl fmt::Debug for JacobiOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JacobiOracle")
            .field("dim", &self.dim)
            .finish()
    }
}

impl JacobiOracle {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&Vector) -> Matrix + Send + Sync + 'static,
    {
        Self {
            dim,
            eval: Arc::new(eval),
        }
    }

    /// The Jacobi field of `a`.
    pub fn from_tensor(a: &AlgebraicCurvatureTensor) -> Self {
        let a = a.clone();
        Self::new(a.dim(), move |x| {
            jacobi(&a, x)
                .expect("query has the oracle's dimension")
                .matrix
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, x: &Vector) -> Matrix {
        (self.eval)(x)
    }

    /// `x -> theta^T J(theta x) theta`, the Jacobi field of `theta^* A`.
    pub fn pulled_back(&self, theta: &Matrix) -> Self {
        let inner = self.clone();
        let theta = theta.clone();
        Self::new(self.dim, move |x| {
            theta.transpose() * inner.evaluate(&(&theta * x)) * &theta
        })
    }
}

/// A black box `pi -> J(pi)` on the complex lines of `(R^m, J)`.
#[derive(Clone)]
pub struct ComplexJacobiOracle {
    j: ComplexStructure,
    eval: Arc<ComplexJacobiFn>,
}

impl fmt::Debug for ComplexJacobiOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexJacobiOracle")
            .field("dim", &self.j.dim())
            .finish()
    }
}

impl ComplexJacobiOracle {
    pub fn new<F>(j: ComplexStructure, eval: F) -> Self
    where
        F: Fn(&ComplexLine) -> Matrix + Send + Sync + 'static,
    {
        Self {
            j,
            eval: Arc::new(eval),
        }
    }

    pub fn from_model(model: &ComplexModel) -> Self {
        let model = model.clone();
        Self::new(model.j.clone(), move |pi| {
            complex_jacobi(&model.a, &model.j, pi)
                .expect("line belongs to the oracle's structure")
                .matrix
        })
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.j
    }

    pub fn evaluate(&self, pi: &ComplexLine) -> Matrix {
        (self.eval)(pi)
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub tensor: AlgebraicCurvatureTensor,
    /// `||M c - b|| / (1 + ||b||)` for the fitted system.
    pub residual: f64,
}

fn jacobi_queries(m: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..m {
        out.push(Vector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 }));
    }
    for i in 0..m {
        for k in i + 1..m {
            out.push(Vector::from_fn(
                m,
                |r, _| if r == i || r == k { 1.0 } else { 0.0 },
            ));
        }
    }
    out
}

fn stack(blocks: &[Matrix], m: usize) -> Result<Vector> {
    let mut out = Vector::zeros(blocks.len() * m * m);
    for (q, b) in blocks.iter().enumerate() {
        if b.shape() != (m, m) {
            return Err(CurvError::ShapeMismatch {
                expected: m * m,
                found: b.nrows() * b.ncols(),
            });
        }
        out.rows_mut(q * m * m, m * m).copy_from_slice(b.as_slice());
    }
    Ok(out)
}

fn fit(design: &Matrix, rhs: &Vector) -> Result<(Vector, f64)> {
    let ls = least_squares(design, rhs, RANK_TOL);
    if ls.nullity > 0 {
        return Err(CurvError::NonUniqueSolution {
            nullity: ls.nullity,
        });
    }
    let residual = ls.residual / (1.0 + rhs.norm());
    if residual > CONSISTENCY_TOL {
        return Err(CurvError::InconsistentOracle { residual });
    }
    Ok((ls.solution, residual))
}

/// Solves `A(y, x, x, z) = <J(x) y, z>` for `A` over all of `𝔄(R^m)`.
pub fn reconstruct_from_jacobi(oracle: &JacobiOracle) -> Result<Reconstruction> {
    let m = oracle.dim();
    if m < 2 {
        return Err(CurvError::DimensionTooSmall(m));
    }
    let basis = curvature_space_basis(m)?;
    let queries = jacobi_queries(m);
    let rows = queries.len() * m * m;
    let mut design = Matrix::zeros(rows, basis.len());
    for b in 0..basis.len() {
        let e = basis.element(b);
        let blocks = queries
            .iter()
            .map(|x| jacobi(&e, x).map(|o| o.matrix))
            .collect::<Result<Vec<_>>>()?;
        design.set_column(b, &stack(&blocks, m)?);
    }
    let rhs = stack(
        &queries
            .iter()
            .map(|x| oracle.evaluate(x))
            .collect::<Vec<_>>(),
        m,
    )?;
    let (c, residual) = fit(&design, &rhs)?;
    Ok(Reconstruction {
        tensor: basis.from_coordinates(&c),
        residual,
    })
}

type GrayCache = Mutex<HashMap<(usize, Vec<u64>), Arc<Subspace>>>;

/// Gray-identity subspace for `(m, J)`, computed once.
pub fn gray_subspace(j: &ComplexStructure) -> Result<Arc<Subspace>> {
    static CACHE: OnceLock<GrayCache> = OnceLock::new();
    let key = (
        j.dim(),
        j.matrix().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
    );
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("cache lock").get(&key) {
        return Ok(g.clone());
    }
    let g = Arc::new(constraint_subspace(&[Constraint::GrayYano], j)?);
    cache.lock().expect("cache lock").insert(key, g.clone());
    Ok(g)
}

/// Fits `J(pi)` on the spanning lines with `A` restricted to the Gray
/// subspace, where complex Jacobi data determine `A` uniquely.
pub fn reconstruct_from_complex_jacobi(oracle: &ComplexJacobiOracle) -> Result<Reconstruction> {
    let j = oracle.structure();
    let m = j.dim();
    let g = gray_subspace(j)?;
    let lines = spanning_lines(j);
    let mut design = Matrix::zeros(lines.len() * m * m, g.dim());
    for k in 0..g.dim() {
        let e = g.element(k);
        let blocks = lines
            .iter()
            .map(|pi| complex_jacobi(&e, j, pi).map(|o| o.matrix))
            .collect::<Result<Vec<_>>>()?;
        design.set_column(k, &stack(&blocks, m)?);
    }
    let rhs = stack(
        &lines
            .iter()
            .map(|pi| oracle.evaluate(pi))
            .collect::<Vec<_>>(),
        m,
    )?;
    let (c, residual) = fit(&design, &rhs)?;
    let coords = g.coords() * c;
    Ok(Reconstruction {
        tensor: g.ambient().from_coordinates(&coords),
        residual,
    })
}
