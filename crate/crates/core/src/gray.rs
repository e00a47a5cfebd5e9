//! Gray's subspaces `𝔄₁ ⊂ 𝔄₂ ⊂ 𝔄₃` and the map `P₂` on `𝔄₃`.

use crate::basis::Subspace;
use crate::error::{CurvError, Result};
use crate::identities::{
    a1_identity, a2_identity, a2perp_identity, compatibility_identity, constraint_subspace,
    Constraint, IdentityReport, Term,
};
use crate::linalg::{nullspace, RANK_TOL};
use crate::space::ComplexStructure;
use crate::tensor::{AlgebraicCurvatureTensor, ComplexModel, Tensor4};
use crate::Matrix;

#[derive(Debug, Clone)]
pub struct GrayClassification {
    pub a1: IdentityReport,
    pub a2: IdentityReport,
    pub a3: IdentityReport,
    pub a2perp: IdentityReport,
}

impl GrayClassification {
    pub fn in_a1(&self) -> bool {
        self.a1.holds
    }

    pub fn in_a2(&self) -> bool {
        self.a2.holds
    }

    pub fn in_a3(&self) -> bool {
        self.a3.holds
    }

    pub fn in_a2perp(&self) -> bool {
        self.a2perp.holds
    }

    /// `𝔄₁ ⊂ 𝔄₂ ⊂ 𝔄₃` as seen by the membership flags.
    pub fn chain_holds(&self) -> bool {
        (!self.in_a1() || self.in_a2()) && (!self.in_a2() || self.in_a3())
    }

    pub fn reports(&self) -> [&IdentityReport; 4] {
        [&self.a1, &self.a2, &self.a3, &self.a2perp]
    }
}

pub fn gray_classify(model: &ComplexModel, tol: f64) -> GrayClassification {
    let (a, j) = (&model.a, &model.j);
    GrayClassification {
        a1: a1_identity().check(a, j, tol),
        a2: a2_identity().check(a, j, tol),
        a3: compatibility_identity().check(a, j, tol),
        a2perp: a2perp_identity().check(a, j, tol),
    }
}

fn p2_tensor(a: &Tensor4, j: &Matrix) -> Tensor4 {
    let mut out = a.scaled(0.5);
    for slots in ["Jx,Jy,z,w", "Jx,y,Jz,w", "Jx,y,z,Jw"] {
        out.axpy(0.5, &Term::parse(1.0, slots).apply(a, j));
    }
    out
}

/// `P₂A(x,y,z,w) = ½{A(x,y,z,w) + A(Jx,Jy,z,w) + A(Jx,y,Jz,w) + A(Jx,y,z,Jw)}`
/// for `A ∈ 𝔄₃`. On `𝔄₃` this is an involutive isometry, not a projection.
pub fn p2_map(model: &ComplexModel, tol: f64) -> Result<AlgebraicCurvatureTensor> {
    let r = compatibility_identity().check(&model.a, &model.j, tol);
    if !r.holds {
        return Err(CurvError::NotInA3 {
            residual: r.residual,
        });
    }
    Ok(AlgebraicCurvatureTensor::new_unchecked(p2_tensor(
        model.a.tensor(),
        model.j.matrix(),
    )))
}

/// `P₂` written in an orthonormal basis of `𝔄₃`, with its `±1` eigenspaces.
#[derive(Debug, Clone)]
pub struct P2Analysis {
    pub a3: Subspace,
    /// Matrix of `P₂` in the coordinates of `a3`.
    pub matrix: Matrix,
    pub fixed: Subspace,
    pub anti_fixed: Subspace,
    /// Largest distance of `P₂(e_k)` from `𝔄₃`.
    pub closure_residual: f64,
    /// `max |P₂² - I|` on the basis.
    pub involution_residual: f64,
    /// `max |<P₂e_a, P₂e_b> - <e_a, e_b>|` on the basis.
    pub isometry_residual: f64,
}

pub fn p2_analysis(j: &ComplexStructure) -> Result<P2Analysis> {
    let a3 = constraint_subspace(&[Constraint::A3], j)?;
    let ambient = a3.ambient().clone();
    let d = a3.dim();
    let elements = a3.elements();
    let images: Vec<Tensor4> = elements
        .iter()
        .map(|e| p2_tensor(e.tensor(), j.matrix()))
        .collect();
    let closure_residual = images.iter().map(|t| a3.distance(t)).fold(0.0, f64::max);
    let mut matrix = Matrix::zeros(d, d);
    for (k, img) in images.iter().enumerate() {
        let local = a3.coords().transpose() * ambient.coordinates(img);
        matrix.set_column(k, &local);
    }
    let involution_residual = (&matrix * &matrix - Matrix::identity(d, d)).amax();
    let mut isometry_residual: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let lhs = images[a].dot(&images[b]);
            let rhs = elements[a].tensor().dot(elements[b].tensor());
            isometry_residual = isometry_residual.max((lhs - rhs).abs());
        }
    }
    let eig = |sign: f64| {
        let y = nullspace(&(&matrix - Matrix::identity(d, d) * sign), RANK_TOL);
        Subspace::from_parts(ambient.clone(), a3.coords() * y)
    };
    let fixed = eig(1.0);
    let anti_fixed = eig(-1.0);
    Ok(P2Analysis {
        a3,
        matrix,
        fixed,
        anti_fixed,
        closure_residual,
        involution_residual,
        isometry_residual,
    })
}

/// Equal dimension and mutual containment of spanning sets.
pub fn same_subspace(a: &Subspace, b: &Subspace, tol: f64) -> bool {
    a.dim() == b.dim()
        && a.elements().iter().all(|e| b.distance(e.tensor()) <= tol)
        && b.elements().iter().all(|e| a.distance(e.tensor()) <= tol)
}
