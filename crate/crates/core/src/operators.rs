//! Operator- and scalar-valued contractions of a curvature tensor: Jacobi
//! operators, skew-symmetric curvature operators, Ricci and ⋆-Ricci tensors,
//! holomorphic sectional curvature, and `λ`.

use std::fmt;

use crate::error::{CurvError, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::space::{spanning_lines, ComplexLine, ComplexStructure};
use crate::tensor::{check_dim, AlgebraicCurvatureTensor};
use crate::{Matrix, Vector};

/// Eigenvalues within this distance are merged into one multiplicity.
pub const MULTIPLICITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Jacobi,
    ComplexJacobi,
    CurvatureOp,
    ComplexCurvatureOp,
    Ricci,
    StarRicci,
}

impl OperatorKind {
    /// Kinds whose matrices are symmetric by construction.
    pub fn is_symmetric(self) -> bool {
        matches!(self, Self::Jacobi | Self::ComplexJacobi | Self::Ricci)
    }

    pub fn is_antisymmetric(self) -> bool {
        matches!(self, Self::CurvatureOp | Self::ComplexCurvatureOp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: Matrix,
    pub kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn apply(&self, v: &Vector) -> Vector {
        &self.matrix * v
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `max |M - M^T|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// `max |M + M^T|`.
    pub fn skew_defect(&self) -> f64 {
        (&self.matrix + self.matrix.transpose()).amax()
    }

    /// Spectrum of the symmetric part.
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_eigenvalues(&symmetric_eigenvalues(&self.matrix), MULTIPLICITY_TOL)
    }
}

/// Sorted eigenvalues with merged multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(pub Vec<(f64, usize)>);

impl Spectrum {
    pub fn from_eigenvalues(sorted: &[f64], tol: f64) -> Self {
        let mut groups: Vec<(f64, usize, f64)> = Vec::new(); // (first, count, sum)
        for &v in sorted {
            match groups.last_mut() {
                Some(g) if (v - g.0).abs() <= tol => {
                    g.1 += 1;
                    g.2 += v;
                }
                _ => groups.push((v, 1, v)),
            }
        }
        Spectrum(
            groups
                .into_iter()
                .map(|(_, n, s)| (s / n as f64, n))
                .collect(),
        )
    }

    /// Multiplicity of the eigenvalue closest to `value` within `tol`.
    pub fn multiplicity(&self, value: f64, tol: f64) -> usize {
        self.0
            .iter()
            .filter(|(v, _)| (v - value).abs() <= tol)
            .map(|(_, n)| n)
            .sum()
    }

    /// True when the spectrum is exactly `expected` (value, multiplicity) up
    /// to `tol` in the values.
    pub fn matches(&self, expected: &[(f64, usize)], tol: f64) -> bool {
        let mut want: Vec<(f64, usize)> = expected.iter().cloned().filter(|e| e.1 > 0).collect();
        want.sort_by(|a, b| a.0.total_cmp(&b.0));
        self.0.len() == want.len()
            && self
                .0
                .iter()
                .zip(&want)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && a.1 == b.1)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, n)| {
                let v = if v.abs() < 5e-13 { 0.0 } else { *v };
                if *n == 1 {
                    format!("{v:.9}")
                } else {
                    format!("{v:.9} (x{n})")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn check_line(a: &AlgebraicCurvatureTensor, j: &ComplexStructure, pi: &ComplexLine) -> Result<()> {
    check_dim(a.dim(), j.dim())?;
    if pi.structure() != j {
        return Err(CurvError::LineStructureMismatch);
    }
    Ok(())
}

/// `<J(x) y, z> = A(y, x, x, z)`; returned matrix has `M[z][y]`.
pub fn jacobi(a: &AlgebraicCurvatureTensor, x: &Vector) -> Result<OperatorMatrix> {
    check_dim(a.dim(), x.len())?;
    let m = a.dim();
    let t = a.tensor();
    let mut mat = Matrix::zeros(m, m);
    for y in 0..m {
        for p in 0..m {
            if x[p] == 0.0 {
                continue;
            }
            for q in 0..m {
                let c = x[p] * x[q];
                if c == 0.0 {
                    continue;
                }
                for z in 0..m {
                    mat[(z, y)] += c * t.get(y, p, q, z);
                }
            }
        }
    }
    Ok(OperatorMatrix {
        matrix: mat,
        kind: OperatorKind::Jacobi,
    })
}

/// `J(pi) = J(x) + J(Jx)` for the unit representative `x` of `pi`.
pub fn complex_jacobi(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    pi: &ComplexLine,
) -> Result<OperatorMatrix> {
    check_line(a, j, pi)?;
    let x = pi.representative();
    let mut out = jacobi(a, x)?;
    out.matrix += jacobi(a, &pi.partner())?.matrix;
    out.kind = OperatorKind::ComplexJacobi;
    Ok(out)
}

/// `<R(x, y) z, w> = A(x, y, z, w)`; returned matrix has `M[w][z]`.
pub fn curvature_operator(
    a: &AlgebraicCurvatureTensor,
    x: &Vector,
    y: &Vector,
) -> Result<OperatorMatrix> {
    check_dim(a.dim(), x.len())?;
    check_dim(a.dim(), y.len())?;
    let m = a.dim();
    let t = a.tensor();
    let mut mat = Matrix::zeros(m, m);
    for p in 0..m {
        if x[p] == 0.0 {
            continue;
        }
        for q in 0..m {
            let c = x[p] * y[q];
            if c == 0.0 {
                continue;
            }
            for z in 0..m {
                for w in 0..m {
                    mat[(w, z)] += c * t.get(p, q, z, w);
                }
            }
        }
    }
    Ok(OperatorMatrix {
        matrix: mat,
        kind: OperatorKind::CurvatureOp,
    })
}

/// `R(pi) = R(x, Jx)`; the same for every unit representative of `pi`.
pub fn complex_curvature_operator(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    pi: &ComplexLine,
) -> Result<OperatorMatrix> {
    check_line(a, j, pi)?;
    let mut out = curvature_operator(a, pi.representative(), &pi.partner())?;
    out.kind = OperatorKind::ComplexCurvatureOp;
    Ok(out)
}

/// `rho(x, y) = sum_i A(e_i, x, y, e_i)`.
pub fn ricci(a: &AlgebraicCurvatureTensor) -> OperatorMatrix {
    let m = a.dim();
    let t = a.tensor();
    let mat = Matrix::from_fn(m, m, |x, y| (0..m).map(|i| t.get(i, x, y, i)).sum());
    OperatorMatrix {
        matrix: mat,
        kind: OperatorKind::Ricci,
    }
}

/// `rho*(x, y) = sum_i A(x, J e_i, J y, e_i)`. Not symmetric in general.
pub fn star_ricci(a: &AlgebraicCurvatureTensor, j: &ComplexStructure) -> Result<OperatorMatrix> {
    check_dim(a.dim(), j.dim())?;
    let m = a.dim();
    let t = a.tensor();
    let jm = j.matrix();
    let mut mat = Matrix::zeros(m, m);
    for x in 0..m {
        for y in 0..m {
            let mut s = 0.0;
            for i in 0..m {
                for c in 0..m {
                    let jci = jm[(c, i)];
                    if jci == 0.0 {
                        continue;
                    }
                    for d in 0..m {
                        let jdy = jm[(d, y)];
                        if jdy != 0.0 {
                            s += t.get(x, c, d, i) * jci * jdy;
                        }
                    }
                }
            }
            mat[(x, y)] = s;
        }
    }
    Ok(OperatorMatrix {
        matrix: mat,
        kind: OperatorKind::StarRicci,
    })
}

/// `Q(pi) = A(x, Jx, Jx, x)` for the unit representative.
pub fn holomorphic_sectional_curvature(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    pi: &ComplexLine,
) -> Result<f64> {
    check_line(a, j, pi)?;
    let x = pi.representative();
    let jx = pi.partner();
    Ok(a.eval(x, &jx, &jx, x))
}

/// Quartic extension `A(v, Jv, Jv, v)`; equals `|v|^4 Q(pi_v)`.
pub fn holomorphic_quartic(a: &AlgebraicCurvatureTensor, j: &ComplexStructure, v: &Vector) -> f64 {
    let jv = j.apply(v);
    a.eval(v, &jv, &jv, v)
}

/// `Q` of the line through a possibly non-unit `v`, with the recorded
/// scaling factor `|v|^4` relating it to the quartic value.
pub fn holomorphic_curvature_of_vector(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    v: &Vector,
) -> Result<(f64, f64)> {
    let pi = ComplexLine::new(v, j)?;
    let q = holomorphic_sectional_curvature(a, j, &pi)?;
    Ok((q, v.norm().powi(4)))
}

/// `λ(x, y) = A(x, y, y, x) - A(x, y, Jy, Jx)`.
pub fn lambda_tensor(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    check_dim(a.dim(), j.dim())?;
    let jx = j.apply(x);
    let jy = j.apply(y);
    Ok(a.eval(x, y, y, x) - a.eval(x, y, &jy, &jx))
}

#[derive(Debug, Clone)]
pub struct ScalarReport {
    pub tau: f64,
    pub tau_star: f64,
    pub q_values: Vec<(ComplexLine, f64)>,
}

/// `τ`, `τ⋆`, and `Q` over the spanning lines of `J`.
pub fn scalars(a: &AlgebraicCurvatureTensor, j: &ComplexStructure) -> Result<ScalarReport> {
    let tau = ricci(a).trace();
    let tau_star = star_ricci(a, j)?.trace();
    let q_values = spanning_lines(j)
        .into_iter()
        .map(|l| {
            let q = holomorphic_sectional_curvature(a, j, &l)?;
            Ok((l, q))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalarReport {
        tau,
        tau_star,
        q_values,
    })
}
