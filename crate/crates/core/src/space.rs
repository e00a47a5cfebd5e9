//! Inner product spaces with complex and quaternionic structures, complex
//! lines, and complex isometries.
//!
//! The inner product is the standard dot product in a fixed orthonormal
//! basis `e_0, ..., e_{m-1}`.

use std::sync::Arc;

use crate::error::{CurvError, Result};
use crate::{Matrix, Vector, DEFAULT_TOL};

/// An orthogonal anti-involution `J` (`J^2 = -I`, `J^T J = I`).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    matrix: Arc<Matrix>,
}

impl ComplexStructure {
    /// Wraps a matrix already known to be a complex structure.
    pub(crate) fn new_unchecked(matrix: Matrix) -> Self {
        Self {
            matrix: Arc::new(matrix),
        }
    }

    pub fn new(matrix: Matrix) -> Result<Self> {
        validate_complex_structure(&matrix, DEFAULT_TOL)
    }

    pub fn standard(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(CurvError::DimensionTooSmall(m));
        }
        if !m.is_multiple_of(2) {
            return Err(CurvError::OddDimension(m));
        }
        Ok(standard_complex_structure(m))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &*self.matrix * v
    }

    /// `-J`, which is again a complex structure.
    pub fn conjugate(&self) -> Self {
        Self::new_unchecked(-&*self.matrix)
    }
}

/// The block-diagonal structure with blocks `[[0, -1], [1, 0]]`, so that
/// `J e_{2k} = e_{2k+1}`.
pub(crate) fn standard_complex_structure(m: usize) -> ComplexStructure {
    let mut j = Matrix::zeros(m, m);
    for b in (0..m).step_by(2) {
        j[(b + 1, b)] = 1.0;
        j[(b, b + 1)] = -1.0;
    }
    ComplexStructure::new_unchecked(j)
}

fn orthogonality_residual(m: &Matrix) -> f64 {
    (m.transpose() * m - Matrix::identity(m.nrows(), m.ncols())).amax()
}

/// Checks that `matrix` is a unitary almost complex structure.
pub fn validate_complex_structure(matrix: &Matrix, tol: f64) -> Result<ComplexStructure> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(CurvError::NotSquare { rows, cols });
    }
    if rows % 2 != 0 {
        return Err(CurvError::OddDimension(rows));
    }
    if rows == 0 {
        return Err(CurvError::DimensionTooSmall(rows));
    }
    let residual = orthogonality_residual(matrix);
    if residual > tol {
        return Err(CurvError::NotOrthogonal { residual });
    }
    let residual = (matrix * matrix + Matrix::identity(rows, rows)).amax();
    if residual > tol {
        return Err(CurvError::NotAntiInvolution { residual });
    }
    Ok(ComplexStructure::new_unchecked(matrix.clone()))
}

/// Unitary quaternion structure: `J1 J2 = J3`, pairwise anticommuting.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionTriple {
    pub j1: ComplexStructure,
    pub j2: ComplexStructure,
    pub j3: ComplexStructure,
}

impl QuaternionTriple {
    pub fn dim(&self) -> usize {
        self.j1.dim()
    }
}

// Left multiplication by i and j on H = R^4 with basis (1, i, j, k).
const QUAT_I: [[f64; 4]; 4] = [
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
];
const QUAT_J: [[f64; 4]; 4] = [
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
];

fn block_diagonal(block: &[[f64; 4]; 4], m: usize) -> Matrix {
    let mut out = Matrix::zeros(m, m);
    for b in (0..m).step_by(4) {
        for (r, row) in block.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out[(b + r, b + c)] = v;
            }
        }
    }
    out
}

/// Left quaternion multiplication by `i`, `j`, `k` repeated on `m / 4`
/// diagonal blocks. `J1` coincides with the standard complex structure.
pub fn build_quaternion_triple(m: usize) -> Result<QuaternionTriple> {
    if m == 0 || !m.is_multiple_of(4) {
        return Err(CurvError::DimensionNotMultipleOf4(m));
    }
    let j1 = block_diagonal(&QUAT_I, m);
    let j2 = block_diagonal(&QUAT_J, m);
    let j3 = &j1 * &j2;
    Ok(QuaternionTriple {
        j1: ComplexStructure::new_unchecked(j1),
        j2: ComplexStructure::new_unchecked(j2),
        j3: ComplexStructure::new_unchecked(j3),
    })
}

/// An orthogonal map commuting with a complex structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexIsometry {
    matrix: Matrix,
}

impl ComplexIsometry {
    pub fn new(matrix: Matrix, j: &ComplexStructure, tol: f64) -> Result<Self> {
        if matrix.shape() != (j.dim(), j.dim()) {
            return Err(CurvError::DimensionMismatch {
                expected: j.dim(),
                found: matrix.nrows(),
            });
        }
        let residual = orthogonality_residual(&matrix);
        if residual > tol {
            return Err(CurvError::NotOrthogonal { residual });
        }
        let residual = (&matrix * j.matrix() - j.matrix() * &matrix).amax();
        if residual > tol {
            return Err(CurvError::NotComplex { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            matrix: Matrix::identity(m, m),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }
}

/// `Theta = (I + J2) / sqrt(2)`. It commutes with `J2`, satisfies
/// `Theta J1 = -J3 Theta`, `Theta J3 = J1 Theta`, and squares to `J2`.
pub fn theta_map(triple: &QuaternionTriple) -> ComplexIsometry {
    let m = triple.dim();
    let theta = (Matrix::identity(m, m) + triple.j2.matrix()) * std::f64::consts::FRAC_1_SQRT_2;
    ComplexIsometry { matrix: theta }
}

/// A `J`-invariant 2-plane `Span{x, Jx}` with a unit representative `x`.
#[derive(Debug, Clone)]
pub struct ComplexLine {
    representative: Vector,
    j: ComplexStructure,
}

impl ComplexLine {
    /// The line through `x`. The representative is `x / |x|`, sign-flipped so
    /// its first nonzero coordinate is positive.
    pub fn new(x: &Vector, j: &ComplexStructure) -> Result<Self> {
        if x.len() != j.dim() {
            return Err(CurvError::DimensionMismatch {
                expected: j.dim(),
                found: x.len(),
            });
        }
        let n = x.norm();
        if n < 1e-14 {
            return Err(CurvError::ZeroVector);
        }
        let mut rep = x / n;
        if let Some(first) = rep.iter().find(|c| c.abs() > 1e-12) {
            if *first < 0.0 {
                rep.neg_mut();
            }
        }
        Ok(Self {
            representative: rep,
            j: j.clone(),
        })
    }

    pub fn representative(&self) -> &Vector {
        &self.representative
    }

    /// `J x` for the unit representative.
    pub fn partner(&self) -> Vector {
        self.j.apply(&self.representative)
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.j
    }

    /// Orthogonal projector `x x^T + (Jx)(Jx)^T` onto the plane.
    pub fn projector(&self) -> Matrix {
        let x = &self.representative;
        let jx = self.partner();
        x * x.transpose() + &jx * jx.transpose()
    }

    pub fn same_line(&self, other: &ComplexLine, tol: f64) -> bool {
        self.j == other.j && (self.projector() - other.projector()).amax() <= tol
    }

    /// The same line with representative `cos(t) x + sin(t) Jx`.
    pub fn rotated(&self, t: f64) -> ComplexLine {
        let x = &self.representative * t.cos() + self.partner() * t.sin();
        ComplexLine {
            representative: x,
            j: self.j.clone(),
        }
    }
}

/// Candidate representatives `e_i`, `(e_i + e_j)/sqrt 2` and
/// `(e_i + J e_j)/sqrt 2` for `i < j`. Candidates that vanish are `None`.
pub fn polarization_candidates(j: &ComplexStructure) -> Vec<Option<Vector>> {
    let m = j.dim();
    let e = |i: usize| Vector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Vector> = (0..m).map(e).collect();
    for a in 0..m {
        for b in a + 1..m {
            out.push((e(a) + e(b)) * s);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            out.push((e(a) + j.apply(&e(b))) * s);
        }
    }
    out.into_iter()
        .map(|v| if v.norm() < 1e-12 { None } else { Some(v) })
        .collect()
}

/// Finite set of complex lines on which every quadratic-in-`x` predicate
/// over `CP(V, J)` is certified. Coinciding planes are merged.
pub fn spanning_lines(j: &ComplexStructure) -> Vec<ComplexLine> {
    let mut lines: Vec<ComplexLine> = Vec::new();
    for v in polarization_candidates(j).into_iter().flatten() {
        let line = ComplexLine::new(&v, j).expect("nonzero candidate");
        if !lines.iter().any(|l| l.same_line(&line, 1e-12)) {
            lines.push(line);
        }
    }
    lines
}
