//! Explicit models: a nonzero tensor with vanishing complex Jacobi operator,
//! and a pair of non-isometric tensors with identical complex Jacobi and
//! complex curvature operators.

use std::fmt;

use crate::error::{CurvError, Result};
use crate::identities::{
    check_gray_yano_identity, lemma23_battery, IdentityReport, Lemma23Report, Witness,
};
use crate::operators::{complex_curvature_operator, complex_jacobi, jacobi};
use crate::random;
use crate::space::{
    build_quaternion_triple, spanning_lines, theta_map, ComplexIsometry, ComplexLine,
};
use crate::tensor::{aphi, build_a0, AlgebraicCurvatureTensor, ComplexModel};
use crate::{Matrix, Vector};

/// `(R^m, J1, A_{J2} - A_{J3})`, where `J3 = J1 J2`. Its complex Jacobi
/// operator vanishes identically although `A != 0`.
pub fn counterexample_model(m: usize) -> Result<ComplexModel> {
    let q = build_quaternion_triple(m)?;
    ComplexModel::new(q.j1.clone(), &aphi(&q.j2) - &aphi(&q.j3))
}

/// `(R^m, J2, A0 + A_{J1})` together with `Theta = (I + J2)/sqrt(2)`.
#[derive(Debug, Clone)]
pub struct TwistorModel {
    pub model: ComplexModel,
    pub theta: ComplexIsometry,
    /// `Theta^* A`, which equals `A0 + A_{J3}`.
    pub pulled: AlgebraicCurvatureTensor,
}

impl TwistorModel {
    pub fn pulled_model(&self) -> ComplexModel {
        ComplexModel {
            j: self.model.j.clone(),
            a: self.pulled.clone(),
        }
    }
}

const TWISTOR_TOL: f64 = 1e-10;

/// Builds the twistor pair and verifies `Theta^* A = A0 + A_{J3}`,
/// `Theta^* A != A`, and equality of both complex operators on every
/// spanning line.
pub fn twistor_point_model(m: usize) -> Result<TwistorModel> {
    let q = build_quaternion_triple(m)?;
    let a0 = build_a0(m)?;
    let a = &a0 + &aphi(&q.j1);
    let theta = theta_map(&q);
    let pulled = a.pullback(theta.matrix())?;
    let fail = |detail: String| Err(CurvError::EquivalenceViolation { detail });
    let target = &a0 + &aphi(&q.j3);
    let d = (&pulled - &target).max_abs();
    if d > TWISTOR_TOL {
        return fail(format!("Theta^* A differs from A0 + A_J3 by {d:e}"));
    }
    if (&pulled - &a).norm() <= TWISTOR_TOL {
        return fail("Theta^* A equals A".into());
    }
    let j = q.j2.clone();
    for pi in spanning_lines(&j) {
        let dj =
            (complex_jacobi(&a, &j, &pi)?.matrix - complex_jacobi(&pulled, &j, &pi)?.matrix).amax();
        let dr = (complex_curvature_operator(&a, &j, &pi)?.matrix
            - complex_curvature_operator(&pulled, &j, &pi)?.matrix)
            .amax();
        if dj.max(dr) > TWISTOR_TOL {
            return fail(format!(
                "complex operators differ by {:e} on a spanning line",
                dj.max(dr)
            ));
        }
    }
    Ok(TwistorModel {
        model: ComplexModel::new(j, a)?,
        theta,
        pulled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    /// `A1 = theta^* A2`.
    Isometric,
    /// Complex Jacobi data agree but the tensors differ; possible only when
    /// one of the models fails the Gray identity.
    JacobiOnly,
    /// Some complex line separates the models.
    Distinguished,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// `A1 - theta^* A2`.
    pub difference: AlgebraicCurvatureTensor,
    pub battery: Lemma23Report,
    pub gray_a: IdentityReport,
    pub gray_b: IdentityReport,
    pub verdict: EquivalenceVerdict,
}

impl EquivalenceReport {
    pub fn summary(&self) -> IdentityReport {
        let norm = self.difference.max_abs();
        let (holds, witness) = match self.verdict {
            EquivalenceVerdict::Isometric => (true, Witness::None),
            EquivalenceVerdict::JacobiOnly => (
                true,
                Witness::Note(format!(
                    "complex Jacobi data agree but the tensors differ (max |D| = {norm:.3e}); Gray identity residuals {:.3e} / {:.3e}",
                    self.gray_a.residual, self.gray_b.residual
                )),
            ),
            EquivalenceVerdict::Distinguished => (false, self.battery.jacobi_vanishes.witness.clone()),
        };
        IdentityReport {
            name: "jacobi-equivalence".into(),
            holds,
            residual: self.battery.jacobi_vanishes.residual,
            witness,
        }
    }
}

/// Compares the complex Jacobi data of two models through `theta`, which
/// must intertwine their structures: `theta J_a = J_b theta`.
pub fn jacobi_equivalence_check(
    model_a: &ComplexModel,
    model_b: &ComplexModel,
    theta: &ComplexIsometry,
    tol: f64,
) -> Result<EquivalenceReport> {
    let m = model_a.dim();
    if model_b.dim() != m {
        return Err(CurvError::DimensionMismatch {
            expected: m,
            found: model_b.dim(),
        });
    }
    let t = theta.matrix();
    if t.nrows() != m {
        return Err(CurvError::DimensionMismatch {
            expected: m,
            found: t.nrows(),
        });
    }
    let residual = (t * model_a.j.matrix() - model_b.j.matrix() * t).amax();
    if residual > tol {
        return Err(CurvError::NotComplex { residual });
    }
    let difference = &model_a.a - &model_b.a.pullback(t)?;
    let d_model = ComplexModel::new(model_a.j.clone(), difference.clone())?;
    let battery = lemma23_battery(&d_model, tol)?;
    let gray_a = check_gray_yano_identity(&model_a.a, &model_a.j, tol)?;
    let gray_b = check_gray_yano_identity(&model_b.a, &model_b.j, tol)?;
    let zero = difference.max_abs() / (1.0 + model_a.a.max_abs().max(model_b.a.max_abs())) <= tol;
    let verdict = if !battery.all_hold() {
        EquivalenceVerdict::Distinguished
    } else if zero {
        EquivalenceVerdict::Isometric
    } else if gray_a.holds && gray_b.holds {
        return Err(CurvError::UniquenessViolation {
            norm: difference.norm(),
        });
    } else {
        EquivalenceVerdict::JacobiOnly
    };
    Ok(EquivalenceReport {
        difference,
        battery,
        gray_a,
        gray_b,
        verdict,
    })
}

/// A value stated for an explicit model next to the brute-force value.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub quantity: String,
    pub stated: f64,
    pub computed: f64,
    /// Largest deviation from `computed` over the probes, plus the largest
    /// eigenvector defect.
    pub spread: f64,
}

impl AuditEntry {
    pub fn agrees(&self, tol: f64) -> bool {
        (self.stated - self.computed).abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyAudit {
    pub m: usize,
    pub entries: Vec<AuditEntry>,
}

impl DiscrepancyAudit {
    pub fn disagreements(&self, tol: f64) -> Vec<&AuditEntry> {
        self.entries.iter().filter(|e| !e.agrees(tol)).collect()
    }
}

impl fmt::Display for DiscrepancyAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "discrepancy audit (m = {})", self.m)?;
        for e in &self.entries {
            let mark = if e.agrees(1e-8) { "agrees" } else { "DIFFERS" };
            writeln!(
                f,
                "  {:<62} stated {:>3}  computed {:>10.6}  spread {:.1e}  {}",
                e.quantity, e.stated, e.computed, e.spread, mark
            )?;
        }
        Ok(())
    }
}

/// `(<Mv, v>, |Mv - <Mv, v> v|)` for unit `v`.
fn probe(mat: &Matrix, v: &Vector) -> (f64, f64) {
    let mv = mat * v;
    let lambda = mv.dot(v);
    (lambda, (mv - v * lambda).norm())
}

struct Accumulator {
    quantity: &'static str,
    stated: f64,
    values: Vec<f64>,
    defect: f64,
}

impl Accumulator {
    fn new(quantity: &'static str, stated: f64) -> Self {
        Self {
            quantity,
            stated,
            values: Vec::new(),
            defect: 0.0,
        }
    }

    fn push(&mut self, (lambda, defect): (f64, f64)) {
        self.values.push(lambda);
        self.defect = self.defect.max(defect);
    }

    fn finish(self) -> AuditEntry {
        let mean = self.values.iter().sum::<f64>() / self.values.len() as f64;
        let dev = self
            .values
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0, f64::max);
        AuditEntry {
            quantity: self.quantity.into(),
            stated: self.stated,
            computed: mean,
            spread: dev + self.defect,
        }
    }
}

/// Brute-force eigenvalues of the two explicit models at `probes` seeded
/// random unit vectors, next to the stated values.
pub fn discrepancy_audit(m: usize, probes: usize, seed: u64) -> Result<DiscrepancyAudit> {
    let q = build_quaternion_triple(m)?;
    let tw = twistor_point_model(m)?;
    let ce = counterexample_model(m)?;
    let mut rng = random::rng(seed);
    let mut jac_j1 = Accumulator::new("Jacobi of A0+A_J1 on J1x", 4.0);
    let mut jac_perp = Accumulator::new("Jacobi of A0+A_J1 on x^perp ∩ (J1x)^perp", 1.0);
    let mut span_x = Accumulator::new("complex Jacobi of A0+A_J1 (J2-line) on Span{x, J2x}", 4.0);
    let mut span_13 =
        Accumulator::new("complex Jacobi of A0+A_J1 (J2-line) on Span{J1x, J3x}", 5.0);
    let mut span_perp = Accumulator::new(
        "complex Jacobi of A0+A_J1 (J2-line) off the quaternionic span",
        2.0,
    );
    let mut kx = Accumulator::new("Jacobi of A_K - A_JK on Kx", 1.0);
    for _ in 0..probes.max(1) {
        let x = random::unit_vector(&mut rng, m);
        let (j1x, j2x, j3x) = (q.j1.apply(&x), q.j2.apply(&x), q.j3.apply(&x));
        // A unit vector orthogonal to x and J1x.
        let y = {
            let mut y = random::normal_vector(&mut rng, m);
            for b in [&x, &j1x] {
                y -= b * y.dot(b);
            }
            y.normalize()
        };
        let jx = jacobi(&tw.model.a, &x)?.matrix;
        jac_j1.push(probe(&jx, &j1x));
        jac_perp.push(probe(&jx, &y));
        let line = ComplexLine::new(&x, &q.j2)?;
        let cj = complex_jacobi(&tw.model.a, &q.j2, &line)?.matrix;
        span_x.push(probe(&cj, &x));
        span_x.push(probe(&cj, &j2x));
        span_13.push(probe(&cj, &j1x));
        span_13.push(probe(&cj, &j3x));
        if m >= 8 {
            let mut z = random::normal_vector(&mut rng, m);
            for _ in 0..2 {
                for b in [&x, &j1x, &j2x, &j3x] {
                    z -= b * z.dot(b);
                }
            }
            span_perp.push(probe(&cj, &z.normalize()));
        }
        let kxv = q.j2.apply(&x);
        kx.push(probe(&jacobi(&ce.a, &x)?.matrix, &kxv));
    }
    let mut entries = vec![
        jac_j1.finish(),
        jac_perp.finish(),
        span_x.finish(),
        span_13.finish(),
    ];
    if m >= 8 {
        entries.push(span_perp.finish());
    }
    entries.push(kx.finish());
    Ok(DiscrepancyAudit { m, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ricci;
    use crate::space::standard_complex_structure;
    use crate::DEFAULT_TOL;

    fn direct_jacobi(a: &AlgebraicCurvatureTensor, x: &Vector, y: &Vector) -> Vector {
        let m = a.dim();
        Vector::from_fn(m, |z, _| {
            let ez = Vector::from_fn(m, |r, _| if r == z { 1.0 } else { 0.0 });
            a.eval(y, x, x, &ez)
        })
    }

    #[test]
    fn counterexample_requires_multiple_of_four() {
        assert_eq!(
            counterexample_model(6).unwrap_err(),
            CurvError::DimensionNotMultipleOf4(6)
        );
    }

    #[test]
    fn counterexample_jacobi_formula() {
        for m in [4, 8] {
            let ce = counterexample_model(m).unwrap();
            let q = build_quaternion_triple(m).unwrap();
            assert!(ce.a.norm() > 1.0);
            let mut rng = random::rng(m as u64);
            for _ in 0..5 {
                let x = random::normal_vector(&mut rng, m);
                let y = random::normal_vector(&mut rng, m);
                let kx = q.j2.apply(&x);
                let jkx = q.j3.apply(&x);
                let expected = &kx * (3.0 * y.dot(&kx)) - &jkx * (3.0 * y.dot(&jkx));
                let got = direct_jacobi(&ce.a, &x, &y);
                assert!((got - expected).amax() < 1e-10);
            }
            let rep = lemma23_battery(&ce, DEFAULT_TOL).unwrap();
            assert!(rep.all_hold());
            assert!(ricci(&ce.a).matrix.amax() < 1e-12);
        }
    }

    #[test]
    fn twistor_model_builds() {
        let tw = twistor_point_model(4).unwrap();
        assert!((&tw.pulled - &tw.model.a).norm() > 0.1);
        assert!(matches!(
            twistor_point_model(2),
            Err(CurvError::DimensionNotMultipleOf4(2))
        ));
    }

    #[test]
    fn self_comparison_is_isometric() {
        let tw = twistor_point_model(4).unwrap();
        let rep = jacobi_equivalence_check(
            &tw.model,
            &tw.model,
            &ComplexIsometry::identity(4),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(rep.verdict, EquivalenceVerdict::Isometric);
        assert!(rep.summary().holds);
    }

    #[test]
    fn twistor_pair_is_jacobi_only() {
        let tw = twistor_point_model(4).unwrap();
        let rep = jacobi_equivalence_check(&tw.model, &tw.model, &tw.theta, DEFAULT_TOL).unwrap();
        assert_eq!(rep.verdict, EquivalenceVerdict::JacobiOnly);
        assert!(!rep.gray_a.holds);
        let rep = jacobi_equivalence_check(
            &tw.model,
            &tw.pulled_model(),
            &ComplexIsometry::identity(4),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(rep.verdict, EquivalenceVerdict::JacobiOnly);
    }

    #[test]
    fn kaehler_models_are_distinguished() {
        let j = standard_complex_structure(4);
        let a0 = build_a0(4).unwrap();
        let m1 = ComplexModel::new(j.clone(), &a0 + &aphi(&j)).unwrap();
        let m2 = ComplexModel::new(j.clone(), &(&a0 * 2.0) + &aphi(&j)).unwrap();
        let rep =
            jacobi_equivalence_check(&m1, &m2, &ComplexIsometry::identity(4), DEFAULT_TOL).unwrap();
        assert_eq!(rep.verdict, EquivalenceVerdict::Distinguished);
        assert!(matches!(rep.summary().witness, Witness::Line(_)));
    }

    #[test]
    fn theta_must_intertwine() {
        let q = build_quaternion_triple(4).unwrap();
        let m1 = ComplexModel::new(q.j1.clone(), build_a0(4).unwrap()).unwrap();
        let theta = theta_map(&q);
        assert!(matches!(
            jacobi_equivalence_check(&m1, &m1, &theta, DEFAULT_TOL),
            Err(CurvError::NotComplex { .. })
        ));
    }

    #[test]
    fn audit_values() {
        let audit = discrepancy_audit(8, 5, 1).unwrap();
        let get = |s: &str| {
            audit
                .entries
                .iter()
                .find(|e| e.quantity.contains(s))
                .unwrap()
        };
        assert!((get("on J1x").computed - 4.0).abs() < 1e-10);
        assert!((get("x^perp").computed - 1.0).abs() < 1e-10);
        assert!((get("Span{x, J2x}").computed - 1.0).abs() < 1e-10);
        assert!((get("Span{J1x, J3x}").computed - 5.0).abs() < 1e-10);
        assert!((get("off the quaternionic").computed - 2.0).abs() < 1e-10);
        assert!((get("on Kx").computed - 3.0).abs() < 1e-10);
        for e in &audit.entries {
            assert!(e.spread < 1e-10, "{e:?}");
        }
        assert_eq!(audit.disagreements(1e-8).len(), 2);
    }
}
