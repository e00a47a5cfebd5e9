//! Identity checks for complex models.
//!
//! Every identity here is linear in `A`. Tensor identities are checked on all
//! basis quadruples, which is exhaustive. Predicates quantified over complex
//! lines are quadratic in the representative, so the spanning lines of
//! [`spanning_lines`] certify them.
//!
//! Residuals are the largest absolute violation divided by `1 + max|A|`.

use std::fmt;
use std::str::FromStr;

use crate::basis::Subspace;
use crate::error::{CurvError, Result};
use crate::operators::{
    complex_curvature_operator, complex_jacobi, holomorphic_quartic,
    holomorphic_sectional_curvature, lambda_tensor, ricci, star_ricci,
};
use crate::random;
use crate::space::{spanning_lines, ComplexLine, ComplexStructure};
use crate::tensor::{aphi, build_a0, check_dim, AlgebraicCurvatureTensor, ComplexModel, Tensor4};
use crate::{Matrix, Vector};

/// Where an identity attains its worst residual.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    Quad([usize; 4]),
    Line(Vector),
    Pair(Vector, Vector),
    Note(String),
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => write!(f, "-"),
            Witness::Quad(q) => write!(f, "(e{}, e{}, e{}, e{})", q[0], q[1], q[2], q[3]),
            Witness::Line(x) => write!(f, "line through {}", fmt_vec(x)),
            Witness::Pair(x, y) => write!(f, "x = {}, y = {}", fmt_vec(x), fmt_vec(y)),
            Witness::Note(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub holds: bool,
    pub residual: f64,
    pub witness: Witness,
}

impl IdentityReport {
    fn new(name: impl Into<String>, residual: f64, witness: Witness, tol: f64) -> Self {
        Self {
            name: name.into(),
            holds: residual <= tol,
            residual,
            witness,
        }
    }
}

fn scale_of(a: &AlgebraicCurvatureTensor) -> f64 {
    1.0 + a.max_abs()
}

/// One term `coeff * A(J^{s0} v_{p0}, ..., J^{s3} v_{p3})` of a linear identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub perm: [usize; 4],
    pub mask: [bool; 4],
}

impl Term {
    /// Parses slot lists such as `"x,Jz,w,Jy"` over the variables `x,y,z,w`.
    pub fn parse(coeff: f64, slots: &str) -> Term {
        let mut perm = [0; 4];
        let mut mask = [false; 4];
        let parts: Vec<&str> = slots.split(',').map(str::trim).collect();
        assert_eq!(parts.len(), 4, "term needs four slots: {slots}");
        for (s, p) in parts.iter().enumerate() {
            let (j, var) = match p.strip_prefix('J') {
                Some(rest) => (true, rest),
                None => (false, *p),
            };
            mask[s] = j;
            perm[s] = match var {
                "x" => 0,
                "y" => 1,
                "z" => 2,
                "w" => 3,
                other => panic!("unknown slot variable {other}"),
            };
        }
        Term { coeff, perm, mask }
    }

    pub fn apply(&self, a: &Tensor4, j: &Matrix) -> Tensor4 {
        let c = a.with_slots(j, self.mask);
        if self.perm == [0, 1, 2, 3] {
            c
        } else {
            c.permute(self.perm)
        }
    }
}

/// A linear identity `sum_k term_k(A) = 0`.
#[derive(Debug, Clone)]
pub struct LinearIdentity {
    pub name: &'static str,
    pub terms: Vec<Term>,
}

impl LinearIdentity {
    fn new(name: &'static str, terms: &[(f64, &str)]) -> Self {
        Self {
            name,
            terms: terms.iter().map(|(c, s)| Term::parse(*c, s)).collect(),
        }
    }

    pub fn residual_tensor(&self, a: &Tensor4, j: &Matrix) -> Tensor4 {
        let mut out = Tensor4::zeros(a.dim());
        for t in &self.terms {
            out.axpy(t.coeff, &t.apply(a, j));
        }
        out
    }

    pub fn check(
        &self,
        a: &AlgebraicCurvatureTensor,
        j: &ComplexStructure,
        tol: f64,
    ) -> IdentityReport {
        let r = self.residual_tensor(a.tensor(), j.matrix());
        let (quad, worst) = r.argmax_abs();
        let witness = if worst > 0.0 {
            Witness::Quad(quad)
        } else {
            Witness::None
        };
        IdentityReport::new(self.name, worst / scale_of(a), witness, tol)
    }
}

/// `J*A = A`.
pub fn compatibility_identity() -> LinearIdentity {
    LinearIdentity::new("compatibility", &[(1.0, "x,y,z,w"), (-1.0, "Jx,Jy,Jz,Jw")])
}

/// `A(x,y,z,w) = A(Jx,Jy,z,w)`, the Kähler identity.
pub fn a1_identity() -> LinearIdentity {
    LinearIdentity::new("a1", &[(1.0, "x,y,z,w"), (-1.0, "Jx,Jy,z,w")])
}

pub fn a2_identity() -> LinearIdentity {
    LinearIdentity::new(
        "a2",
        &[
            (1.0, "x,y,z,w"),
            (-1.0, "Jx,Jy,z,w"),
            (-1.0, "Jx,y,Jz,w"),
            (-1.0, "Jx,y,z,Jw"),
        ],
    )
}

/// `A(x,y,z,w) = -A(Jx,Jy,z,w)`.
pub fn a2perp_identity() -> LinearIdentity {
    LinearIdentity::new("a2perp", &[(1.0, "x,y,z,w"), (1.0, "Jx,Jy,z,w")])
}

/// The eight-term identity satisfied by the curvature of Hermitian and of
/// nearly Kähler manifolds.
pub fn gray_yano_identity() -> LinearIdentity {
    LinearIdentity::new(
        "gray-yano",
        &[
            (1.0, "x,y,z,w"),
            (1.0, "Jx,Jy,Jz,Jw"),
            (-1.0, "Jx,Jy,z,w"),
            (-1.0, "x,y,Jz,Jw"),
            (-1.0, "Jx,y,Jz,w"),
            (-1.0, "x,Jy,z,Jw"),
            (-1.0, "Jx,y,z,Jw"),
            (-1.0, "x,Jy,Jz,w"),
        ],
    )
}

/// The bracket `5A - 3A(x,y,Jz,Jw) + A(x,z,Jw,Jy) - A(x,w,Jz,Jy)
/// - A(x,Jz,w,Jy) + A(x,Jw,z,Jy)` shared by both constant-curvature identities.
fn sato_bracket() -> Vec<(f64, &'static str)> {
    vec![
        (5.0, "x,y,z,w"),
        (-3.0, "x,y,Jz,Jw"),
        (1.0, "x,z,Jw,Jy"),
        (-1.0, "x,w,Jz,Jy"),
        (-1.0, "x,Jz,w,Jy"),
        (1.0, "x,Jw,z,Jy"),
    ]
}

/// `3A(x,y,z,w) + 3A(x,y,Jz,Jw) = A(x,z,Jw,Jy) - A(x,w,Jz,Jy) - A(x,Jz,w,Jy) + A(x,Jw,z,Jy)`.
pub fn sato_zero_identity() -> LinearIdentity {
    LinearIdentity::new(
        "sato2",
        &[
            (3.0, "x,y,z,w"),
            (3.0, "x,y,Jz,Jw"),
            (-1.0, "x,z,Jw,Jy"),
            (1.0, "x,w,Jz,Jy"),
            (1.0, "x,Jz,w,Jy"),
            (-1.0, "x,Jw,z,Jy"),
        ],
    )
}

/// Linear constraint tags understood by [`subspace_dimension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    GrayYano,
    A1,
    A2,
    A3,
    A2Perp,
    Compatibility,
}

impl Constraint {
    pub fn identity(self) -> LinearIdentity {
        match self {
            Constraint::GrayYano => gray_yano_identity(),
            Constraint::A1 => a1_identity(),
            Constraint::A2 => a2_identity(),
            Constraint::A3 | Constraint::Compatibility => compatibility_identity(),
            Constraint::A2Perp => a2perp_identity(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Constraint::GrayYano => "gray-yano",
            Constraint::A1 => "a1",
            Constraint::A2 => "a2",
            Constraint::A3 => "a3",
            Constraint::A2Perp => "a2perp",
            Constraint::Compatibility => "compatibility",
        }
    }
}

impl FromStr for Constraint {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "gray-yano" | "grayyano" | "gray" => Constraint::GrayYano,
            "a1" => Constraint::A1,
            "a2" => Constraint::A2,
            "a3" => Constraint::A3,
            "a2perp" | "a2-perp" => Constraint::A2Perp,
            "compatibility" | "compatible" => Constraint::Compatibility,
            _ => return Err(CurvError::UnknownConstraintTag(s.to_string())),
        })
    }
}

/// Subspace of `𝔄(V)` on which every listed identity holds.
pub fn constraint_subspace(constraints: &[Constraint], j: &ComplexStructure) -> Result<Subspace> {
    let jm = j.matrix().clone();
    let ids: Vec<LinearIdentity> = constraints.iter().map(|c| c.identity()).collect();
    let maps: Vec<_> = ids
        .iter()
        .map(|id| {
            let jm = jm.clone();
            move |t: &Tensor4| id.residual_tensor(t, &jm)
        })
        .collect();
    Subspace::from_constraints(j.dim(), &maps)
}

/// Dimension of the subspace of `𝔄(R^m)` cut out by the tagged identities.
pub fn subspace_dimension(tags: &[&str], m: usize, j: &ComplexStructure) -> Result<usize> {
    check_dim(m, j.dim())?;
    let cs = tags
        .iter()
        .map(|t| t.parse())
        .collect::<Result<Vec<Constraint>>>()?;
    Ok(constraint_subspace(&cs, j)?.dim())
}

/// Selects which equivalent form of compatibility to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    /// `J*A = A` on basis quadruples.
    Pullback,
    /// `J(pi) J = J J(pi)` on spanning lines.
    JacobiCommutes,
    /// `R(pi) J = J R(pi)` on spanning lines.
    CurvatureCommutes,
    All,
}

#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub reports: Vec<IdentityReport>,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }

    pub fn summary(&self) -> IdentityReport {
        let worst = self
            .reports
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("at least one condition");
        IdentityReport {
            name: "compatibility".into(),
            holds: self.compatible(),
            residual: worst.residual,
            witness: worst.witness.clone(),
        }
    }
}

fn line_sweep<F>(
    name: &str,
    model: &ComplexModel,
    tol: f64,
    mut residual_at: F,
) -> Result<IdentityReport>
where
    F: FnMut(&ComplexLine) -> Result<f64>,
{
    let scale = scale_of(&model.a);
    let mut worst = (0.0, Witness::None);
    for line in spanning_lines(&model.j) {
        let r = residual_at(&line)? / scale;
        if r > worst.0 {
            worst = (r, Witness::Line(line.representative().clone()));
        }
    }
    Ok(IdentityReport::new(name, worst.0, worst.1, tol))
}

fn commutator_residual(op: &Matrix, j: &Matrix) -> f64 {
    (op * j - j * op).amax()
}

/// The three equivalent compatibility conditions. With `Compatibility::All`
/// the three verdicts must agree.
pub fn check_compatibility(
    model: &ComplexModel,
    which: Compatibility,
    tol: f64,
) -> Result<CompatibilityReport> {
    let jm = model.j.matrix();
    let mut reports = Vec::new();
    if matches!(which, Compatibility::Pullback | Compatibility::All) {
        let mut r = compatibility_identity().check(&model.a, &model.j, tol);
        r.name = "compatibility (J*A = A)".into();
        reports.push(r);
    }
    if matches!(which, Compatibility::JacobiCommutes | Compatibility::All) {
        reports.push(line_sweep(
            "compatibility (J(pi) J = J J(pi))",
            model,
            tol,
            |l| {
                Ok(commutator_residual(
                    &complex_jacobi(&model.a, &model.j, l)?.matrix,
                    jm,
                ))
            },
        )?);
    }
    if matches!(which, Compatibility::CurvatureCommutes | Compatibility::All) {
        reports.push(line_sweep(
            "compatibility (R(pi) J = J R(pi))",
            model,
            tol,
            |l| {
                Ok(commutator_residual(
                    &complex_curvature_operator(&model.a, &model.j, l)?.matrix,
                    jm,
                ))
            },
        )?);
    }
    if reports.iter().any(|r| r.holds) && !reports.iter().all(|r| r.holds) {
        return Err(CurvError::EquivalenceViolation {
            detail: format!(
                "compatibility conditions disagree: {:?}",
                reports
                    .iter()
                    .map(|r| (r.name.as_str(), r.holds, r.residual))
                    .collect::<Vec<_>>()
            ),
        });
    }
    Ok(CompatibilityReport { reports })
}

fn require_compatible(model: &ComplexModel, tol: f64) -> Result<()> {
    let r = compatibility_identity().check(&model.a, &model.j, tol);
    if !r.holds {
        return Err(CurvError::NotCompatible {
            residual: r.residual,
        });
    }
    Ok(())
}

/// Both sides of
/// `32 A(x,y,y,x) = 3Q(x+Jy) + 3Q(x-Jy) - Q(x+y) - Q(x-y) - 4Q(x) - 4Q(y)
///  + 4 {5 λ(x,y) + λ(x,Jy)}`,
/// with `Q(v) = A(v,Jv,Jv,v)` on non-unit vectors.
pub fn vanhecke_sides(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    x: &Vector,
    y: &Vector,
) -> Result<(f64, f64)> {
    let q = |v: &Vector| holomorphic_quartic(a, j, v);
    let jy = j.apply(y);
    let lhs = 32.0 * a.eval(x, y, y, x);
    let rhs = 3.0 * q(&(x + &jy)) + 3.0 * q(&(x - &jy))
        - q(&(x + y))
        - q(&(x - y))
        - 4.0 * q(x)
        - 4.0 * q(y)
        + 4.0 * (5.0 * lambda_tensor(a, j, x, y)? + lambda_tensor(a, j, x, &jy)?);
    Ok((lhs, rhs))
}

/// Vanhecke's identity on all basis pairs plus `trials` seeded random unit
/// pairs. Only defined for compatible models.
pub fn check_vanhecke(
    model: &ComplexModel,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    require_compatible(model, tol)?;
    let m = model.dim();
    let e = |i: usize| Vector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
    let mut pairs: Vec<(Vector, Vector)> = Vec::new();
    for i in 0..m {
        for k in 0..m {
            pairs.push((e(i), e(k)));
        }
    }
    let mut rng = random::rng(seed);
    for _ in 0..trials {
        pairs.push((
            random::unit_vector(&mut rng, m),
            random::unit_vector(&mut rng, m),
        ));
    }
    let scale = scale_of(&model.a);
    let mut worst = (0.0, Witness::None);
    for (x, y) in pairs {
        let (l, r) = vanhecke_sides(&model.a, &model.j, &x, &y)?;
        let res = (l - r).abs() / scale;
        if res > worst.0 {
            worst = (res, Witness::Pair(x, y));
        }
    }
    Ok(IdentityReport::new("vanhecke", worst.0, worst.1, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SatoVariant {
    /// Constant holomorphic sectional curvature `c`; `None` uses the measured value.
    ConstantCurvature(Option<f64>),
    /// Constant zero holomorphic sectional curvature.
    Zero,
}

const SATO_EXTRA_LINES: usize = 16;

fn sampled_q(model: &ComplexModel) -> Result<Vec<f64>> {
    let mut lines = spanning_lines(&model.j);
    let mut rng = random::rng(0x5a70);
    for _ in 0..SATO_EXTRA_LINES {
        lines.push(ComplexLine::new(
            &random::unit_vector(&mut rng, model.dim()),
            &model.j,
        )?);
    }
    lines
        .iter()
        .map(|l| holomorphic_sectional_curvature(&model.a, &model.j, l))
        .collect()
}

/// Sato's identities for compatible models of constant holomorphic
/// sectional curvature, checked on all basis quadruples.
pub fn check_sato(model: &ComplexModel, variant: SatoVariant, tol: f64) -> Result<IdentityReport> {
    require_compatible(model, tol)?;
    let scale = scale_of(&model.a);
    let qs = sampled_q(model)?;
    let qmax = qs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let qmin = qs.iter().cloned().fold(f64::INFINITY, f64::min);
    match variant {
        SatoVariant::Zero => {
            let max = qmax.abs().max(qmin.abs());
            if max / scale > tol {
                return Err(CurvError::QNotZero { max });
            }
            Ok(sato_zero_identity().check(&model.a, &model.j, tol))
        }
        SatoVariant::ConstantCurvature(c) => {
            let spread = match c {
                Some(c) => (qmax - c).abs().max((qmin - c).abs()),
                None => qmax - qmin,
            };
            if spread / scale > tol {
                return Err(CurvError::QNotConstant { spread });
            }
            let c = c.unwrap_or_else(|| qs.iter().sum::<f64>() / qs.len() as f64);
            let m = model.dim();
            let jm = model.j.matrix();
            let a = model.a.tensor();
            // A - (c/4)(A0 + A_J) - (1/8) bracket
            let mut r = a.clone();
            let canon = &build_a0(m)? + &aphi(&model.j);
            r.axpy(-c / 4.0, canon.tensor());
            for (coeff, slots) in sato_bracket() {
                r.axpy(-coeff / 8.0, &Term::parse(1.0, slots).apply(a, jm));
            }
            let (quad, worst) = r.argmax_abs();
            let witness = if worst > 0.0 {
                Witness::Quad(quad)
            } else {
                Witness::None
            };
            Ok(IdentityReport::new("sato1", worst / scale, witness, tol))
        }
    }
}

/// Outcome of the four equivalent vanishing conditions.
#[derive(Debug, Clone)]
pub struct Lemma23Report {
    /// `J(pi) = 0` for all complex lines.
    pub jacobi_vanishes: IdentityReport,
    /// `A(x, y) = -A(Jx, Jy)`.
    pub anti_invariant: IdentityReport,
    /// `R(pi) = 0` for all complex lines.
    pub curvature_vanishes: IdentityReport,
    /// `A(Jx, y) z = A(x, Jy) z = A(x, y) Jz`.
    pub j_shift: IdentityReport,
    /// `(max |rho|, max |rho*|)` relative to `1 + max|A|`, when the conditions hold.
    pub ricci_residuals: Option<(f64, f64)>,
}

impl Lemma23Report {
    pub fn conditions(&self) -> [&IdentityReport; 4] {
        [
            &self.jacobi_vanishes,
            &self.anti_invariant,
            &self.curvature_vanishes,
            &self.j_shift,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.conditions().iter().all(|r| r.holds)
    }

    pub fn summary(&self) -> IdentityReport {
        let worst = self
            .conditions()
            .into_iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("four conditions");
        IdentityReport {
            name: "lemma23".into(),
            holds: self.all_hold(),
            residual: worst.residual,
            witness: worst.witness.clone(),
        }
    }
}

/// Evaluates the four equivalent vanishing conditions independently. If they
/// hold, also requires Ricci and ⋆-Ricci flatness and compatibility. Any
/// disagreement is reported as [`CurvError::EquivalenceViolation`].
pub fn lemma23_battery(model: &ComplexModel, tol: f64) -> Result<Lemma23Report> {
    let a = &model.a;
    let j = &model.j;
    let jacobi_vanishes = line_sweep("complex Jacobi vanishes", model, tol, |l| {
        Ok(complex_jacobi(a, j, l)?.matrix.amax())
    })?;
    let mut anti_invariant = a2perp_identity().check(a, j, tol);
    anti_invariant.name = "A(x,y) = -A(Jx,Jy)".into();
    let curvature_vanishes = line_sweep("complex curvature vanishes", model, tol, |l| {
        Ok(complex_curvature_operator(a, j, l)?.matrix.amax())
    })?;
    let d1 = LinearIdentity::new("", &[(1.0, "Jx,y,z,w"), (-1.0, "x,Jy,z,w")]).check(a, j, tol);
    let d2 = LinearIdentity::new("", &[(1.0, "Jx,y,z,w"), (-1.0, "x,y,Jz,w")]).check(a, j, tol);
    let worst = if d1.residual >= d2.residual { d1 } else { d2 };
    let j_shift = IdentityReport {
        name: "A(Jx,y)z = A(x,Jy)z = A(x,y)Jz".into(),
        ..worst
    };
    let mut report = Lemma23Report {
        jacobi_vanishes,
        anti_invariant,
        curvature_vanishes,
        j_shift,
        ricci_residuals: None,
    };
    let flags: Vec<bool> = report.conditions().iter().map(|r| r.holds).collect();
    if flags.iter().any(|&f| f != flags[0]) {
        return Err(CurvError::EquivalenceViolation {
            detail: format!(
                "vanishing conditions disagree: {:?}",
                report
                    .conditions()
                    .iter()
                    .map(|r| (r.name.as_str(), r.holds, r.residual))
                    .collect::<Vec<_>>()
            ),
        });
    }
    if flags[0] {
        let scale = scale_of(a);
        let rho = ricci(a).matrix.amax() / scale;
        let rho_star = star_ricci(a, j)?.matrix.amax() / scale;
        report.ricci_residuals = Some((rho, rho_star));
        let compat = compatibility_identity().check(a, j, tol);
        if rho > tol || rho_star > tol || !compat.holds {
            return Err(CurvError::EquivalenceViolation {
                detail: format!(
                    "vanishing conditions hold but rho = {rho:e}, rho* = {rho_star:e}, compatibility residual = {:e}",
                    compat.residual
                ),
            });
        }
    }
    Ok(report)
}

/// The eight-term Gray identity on all basis quadruples.
pub fn check_gray_yano_identity(
    a: &AlgebraicCurvatureTensor,
    j: &ComplexStructure,
    tol: f64,
) -> Result<IdentityReport> {
    check_dim(a.dim(), j.dim())?;
    Ok(gray_yano_identity().check(a, j, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{random_curvature_tensor, GeneratorMix};
    use crate::space::{build_quaternion_triple, standard_complex_structure};
    use crate::DEFAULT_TOL;

    fn fubini_study(m: usize) -> ComplexModel {
        let j = standard_complex_structure(m);
        let a = &build_a0(m).unwrap() + &aphi(&j);
        ComplexModel::new(j, a).unwrap()
    }

    fn counterexample(m: usize) -> ComplexModel {
        let q = build_quaternion_triple(m).unwrap();
        ComplexModel::new(q.j1.clone(), &aphi(&q.j2) - &aphi(&q.j3)).unwrap()
    }

    #[test]
    fn term_parsing_matches_evaluation() {
        let mut rng = random::rng(1);
        let a = random_curvature_tensor(4, 1, GeneratorMix::Basis).unwrap();
        let j = random::complex_structure(&mut rng, 4);
        let v: Vec<Vector> = (0..4).map(|_| random::normal_vector(&mut rng, 4)).collect();
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        let t = Term::parse(1.0, "x,Jz,w,Jy").apply(a.tensor(), j.matrix());
        let direct = a.eval(x, &j.apply(z), w, &j.apply(y));
        assert!((t.eval(x, y, z, w) - direct).abs() < 1e-10);
    }

    #[test]
    fn unknown_tag() {
        let j = standard_complex_structure(4);
        assert_eq!(
            subspace_dimension(&["bogus"], 4, &j).unwrap_err(),
            CurvError::UnknownConstraintTag("bogus".into())
        );
    }

    #[test]
    fn subspace_dimensions_m4() {
        let j = standard_complex_structure(4);
        assert_eq!(subspace_dimension(&[], 4, &j).unwrap(), 20);
        assert_eq!(
            subspace_dimension(&["gray-yano", "a2perp"], 4, &j).unwrap(),
            0
        );
        assert!(subspace_dimension(&["a2perp"], 4, &j).unwrap() >= 1);
    }

    #[test]
    fn compatibility_examples() {
        let j = standard_complex_structure(4);
        let a0 = ComplexModel::new(j.clone(), build_a0(4).unwrap()).unwrap();
        assert!(check_compatibility(&a0, Compatibility::All, DEFAULT_TOL)
            .unwrap()
            .compatible());
        assert!(
            check_compatibility(&fubini_study(4), Compatibility::All, DEFAULT_TOL)
                .unwrap()
                .compatible()
        );
        let q = build_quaternion_triple(8).unwrap();
        let ak = ComplexModel::new(q.j1.clone(), aphi(&q.j2)).unwrap();
        assert!(check_compatibility(&ak, Compatibility::All, DEFAULT_TOL)
            .unwrap()
            .compatible());
        let raw = ComplexModel::new(
            j,
            random_curvature_tensor(4, 9, GeneratorMix::Basis).unwrap(),
        )
        .unwrap();
        let rep = check_compatibility(&raw, Compatibility::All, DEFAULT_TOL).unwrap();
        assert!(!rep.compatible());
        assert_eq!(rep.reports.len(), 3);
    }

    #[test]
    fn vanhecke_examples() {
        let r = check_vanhecke(&fubini_study(4), 20, 1, DEFAULT_TOL).unwrap();
        assert!(r.holds, "{r:?}");
        let j = standard_complex_structure(6);
        let a3 = constraint_subspace(&[Constraint::A3], &j).unwrap();
        let a = a3.random_member(&mut random::rng(4));
        let r = check_vanhecke(
            &ComplexModel::new(j.clone(), a).unwrap(),
            20,
            2,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(r.holds, "{r:?}");
        let raw = ComplexModel::new(
            j,
            random_curvature_tensor(6, 9, GeneratorMix::Basis).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            check_vanhecke(&raw, 5, 0, DEFAULT_TOL),
            Err(CurvError::NotCompatible { .. })
        ));
    }

    #[test]
    fn sato_examples() {
        let fs = fubini_study(4);
        for c in [-2.0, 0.0, 4.0] {
            let model = ComplexModel::new(fs.j.clone(), &fs.a * (c / 4.0)).unwrap();
            let r = check_sato(&model, SatoVariant::ConstantCurvature(None), DEFAULT_TOL).unwrap();
            assert!(r.holds, "c = {c}: {r:?}");
            let r =
                check_sato(&model, SatoVariant::ConstantCurvature(Some(c)), DEFAULT_TOL).unwrap();
            assert!(r.holds);
        }
        let r = check_sato(&counterexample(4), SatoVariant::Zero, DEFAULT_TOL).unwrap();
        assert!(r.holds);
        let a0 = ComplexModel::new(fs.j.clone(), build_a0(4).unwrap()).unwrap();
        assert!(matches!(
            check_sato(&a0, SatoVariant::Zero, DEFAULT_TOL),
            Err(CurvError::QNotZero { .. })
        ));
        assert!(matches!(
            check_sato(&fs, SatoVariant::ConstantCurvature(Some(1.0)), DEFAULT_TOL),
            Err(CurvError::QNotConstant { .. })
        ));
    }

    #[test]
    fn lemma23_examples() {
        let rep = lemma23_battery(&counterexample(4), DEFAULT_TOL).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.ricci_residuals, Some((0.0, 0.0)));
        let j = standard_complex_structure(4);
        let a0 = ComplexModel::new(j.clone(), build_a0(4).unwrap()).unwrap();
        let rep = lemma23_battery(&a0, DEFAULT_TOL).unwrap();
        assert!(rep.conditions().iter().all(|r| !r.holds));
        let zero = ComplexModel::new(j, AlgebraicCurvatureTensor::zeros(4)).unwrap();
        assert!(lemma23_battery(&zero, DEFAULT_TOL).unwrap().all_hold());
    }

    #[test]
    fn gray_yano_examples() {
        let fs = fubini_study(4);
        assert!(
            check_gray_yano_identity(&fs.a, &fs.j, DEFAULT_TOL)
                .unwrap()
                .holds
        );
        let ce = counterexample(4);
        let r = check_gray_yano_identity(&ce.a, &ce.j, DEFAULT_TOL).unwrap();
        assert!(!r.holds);
        assert!(
            check_gray_yano_identity(&AlgebraicCurvatureTensor::zeros(4), &fs.j, DEFAULT_TOL)
                .unwrap()
                .holds
        );
    }
}
