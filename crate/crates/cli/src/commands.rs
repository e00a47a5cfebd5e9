//! One function per subcommand. Each returns a finished [`CheckReport`];
//! errors are input or usage errors.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use curvlab::basis::{random_curvature_tensor, GeneratorMix};
use curvlab::operators::{complex_jacobi, jacobi, ricci};
use curvlab::random;
use curvlab::{
    build_a0, build_aphi, check_compatibility, check_gray_yano_identity, check_sato,
    check_vanhecke, counterexample_model, discrepancy_audit, gray_classify,
    jacobi_equivalence_check, lemma23_battery, reconstruct_from_complex_jacobi,
    reconstruct_from_jacobi, spanning_lines, subspace_dimension, twistor_point_model,
    Compatibility, ComplexIsometry, ComplexJacobiOracle, ComplexLine, ComplexModel,
    ComplexStructure, CurvError, IdentityReport, JacobiOracle, OperatorMatrix, SatoVariant, Vector,
};
use serde_json::{json, Value};

use crate::model::{load_matrix, load_model, save_matrix, ModelFile};
use crate::report::{CheckReport, CheckResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildKind {
    A0,
    FubiniStudy,
    Counterexample,
    Twistor,
    TwistorPullback,
    Random,
}

impl BuildKind {
    pub fn name(self) -> &'static str {
        match self {
            BuildKind::A0 => "a0",
            BuildKind::FubiniStudy => "fubini-study",
            BuildKind::Counterexample => "counterexample",
            BuildKind::Twistor => "twistor",
            BuildKind::TwistorPullback => "twistor-pullback",
            BuildKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructMode {
    Jacobi,
    ComplexJacobi,
}

pub const IDENTITY_NAMES: [&str; 8] = [
    "symmetries",
    "compatibility",
    "vanhecke",
    "sato1",
    "sato2",
    "lemma23",
    "gray-classify",
    "gray-yano",
];

pub struct BuildArgs<'a> {
    pub kind: BuildKind,
    pub m: usize,
    pub out: &'a Path,
    pub sparse: bool,
    pub theta_out: Option<&'a Path>,
}

pub fn build(command: &str, args: &BuildArgs, s: &Settings) -> Result<CheckReport> {
    let m = args.m;
    let mut theta = None;
    let model = match args.kind {
        BuildKind::A0 => {
            let j = ComplexStructure::standard(m)?;
            ComplexModel::new(j, build_a0(m)?)?
        }
        BuildKind::FubiniStudy => {
            let j = ComplexStructure::standard(m)?;
            let a = &build_a0(m)? + &build_aphi(j.matrix())?;
            ComplexModel::new(j, a)?
        }
        BuildKind::Counterexample => counterexample_model(m)?,
        BuildKind::Twistor | BuildKind::TwistorPullback => {
            let tw = twistor_point_model(m)?;
            theta = Some(tw.theta.matrix().clone());
            if args.kind == BuildKind::Twistor {
                tw.model.clone()
            } else {
                tw.pulled_model()
            }
        }
        BuildKind::Random => {
            let j = ComplexStructure::standard(m)?;
            ComplexModel::new(j, random_curvature_tensor(m, s.seed, GeneratorMix::Basis)?)?
        }
    };
    let mut metadata = BTreeMap::new();
    metadata.insert("construction".to_string(), args.kind.name().to_string());
    metadata.insert("name".to_string(), format!("{}-m{m}", args.kind.name()));
    if args.kind == BuildKind::Random {
        metadata.insert("seed".to_string(), s.seed.to_string());
    }
    let file = ModelFile::from_model(&model, args.sparse, metadata);
    file.save(args.out)?;
    let mut report = CheckReport::new(command);
    let back = load_model(args.out, s.tol)?;
    let exact = back == model;
    let gap = (&back.a - &model.a).max_abs();
    report.push(
        CheckResult::new(
            "round-trip",
            exact || (args.sparse && gap <= 1e-12),
            gap,
            args.out.display().to_string(),
        )
        .detail("dim", m)
        .detail(
            "nonzero",
            model
                .a
                .tensor()
                .data()
                .iter()
                .filter(|v| **v != 0.0)
                .count(),
        )
        .detail("storage", if args.sparse { "sparse" } else { "dense" }),
    );
    match (args.theta_out, theta) {
        (Some(path), Some(t)) => {
            save_matrix(path, &t)?;
            report.note(format!("wrote Theta to {}", path.display()));
        }
        (Some(_), None) => bail!("--theta-out only applies to twistor models"),
        _ => {}
    }
    report.note(format!("wrote {}", args.out.display()));
    Ok(report.finish())
}

fn precondition_failure(name: &str, e: CurvError) -> CheckResult {
    CheckResult::new(name, false, f64::NAN, format!("precondition failed: {e}"))
}

fn identity_result(name: &str, r: curvlab::Result<IdentityReport>) -> Result<CheckResult> {
    match r {
        Ok(r) => {
            let mut c = CheckResult::from(&r);
            c.name = name.to_string();
            Ok(c)
        }
        Err(
            e @ (CurvError::NotCompatible { .. }
            | CurvError::QNotConstant { .. }
            | CurvError::QNotZero { .. }),
        ) => Ok(precondition_failure(name, e)),
        Err(e) => Err(e.into()),
    }
}

pub fn check(
    command: &str,
    path: &Path,
    identities: &[String],
    s: &Settings,
) -> Result<CheckReport> {
    for id in identities {
        if !IDENTITY_NAMES.contains(&id.as_str()) {
            bail!(
                "unknown identity `{id}` (expected one of {})",
                IDENTITY_NAMES.join(", ")
            );
        }
    }
    let model = load_model(path, s.tol)?;
    let mut report = CheckReport::new(command);
    for id in identities {
        let result = match id.as_str() {
            "symmetries" => {
                let fams = model.a.tensor().family_residuals();
                let worst = fams
                    .iter()
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .expect("three families");
                let mut r = CheckResult::new(
                    id,
                    worst.0 <= s.tol,
                    worst.0,
                    format!("{} at {:?}", worst.1, worst.2),
                );
                for (res, fam, _) in fams {
                    r = r.detail(fam, res);
                }
                r
            }
            "compatibility" => {
                let rep = check_compatibility(&model, Compatibility::All, s.tol)?;
                let mut r = CheckResult::from(&rep.summary());
                for c in &rep.reports {
                    r = r.detail(&c.name, c.residual);
                }
                r
            }
            "vanhecke" => identity_result(id, check_vanhecke(&model, s.samples, s.seed, s.tol))?,
            "sato1" => identity_result(
                id,
                check_sato(&model, SatoVariant::ConstantCurvature(None), s.tol),
            )?,
            "sato2" => identity_result(id, check_sato(&model, SatoVariant::Zero, s.tol))?,
            "lemma23" => {
                let rep = lemma23_battery(&model, s.tol)?;
                let mut r = CheckResult::from(&rep.summary());
                for c in rep.conditions() {
                    r = r.detail(&c.name, json!({"holds": c.holds, "residual": c.residual}));
                }
                if let Some((rho, rho_star)) = rep.ricci_residuals {
                    r = r.detail("ricci", rho).detail("star-ricci", rho_star);
                }
                r
            }
            "gray-classify" => {
                let g = gray_classify(&model, s.tol);
                let worst = g.reports().iter().map(|r| r.residual).fold(0.0, f64::max);
                let mut r = CheckResult::new(id, g.chain_holds(), worst, "-");
                for (key, c) in ["in_a1", "in_a2", "in_a3", "in_a2perp"]
                    .iter()
                    .zip(g.reports())
                {
                    r = r.detail(key, json!({"member": c.holds, "residual": c.residual}));
                }
                r
            }
            "gray-yano" => {
                identity_result(id, check_gray_yano_identity(&model.a, &model.j, s.tol))?
            }
            _ => unreachable!("names validated above"),
        };
        report.push(result);
    }
    Ok(report.finish())
}

fn spectrum_value(op: &OperatorMatrix) -> Value {
    Value::Array(
        op.spectrum()
            .0
            .iter()
            .map(|(v, n)| json!([if v.abs() < 5e-13 { 0.0 } else { *v }, n]))
            .collect(),
    )
}

fn operator_result(
    name: String,
    op: &OperatorMatrix,
    scale: f64,
    s: &Settings,
    at: Option<&Vector>,
) -> CheckResult {
    let asym = op.asymmetry() / scale;
    let mut r = CheckResult::new(name, asym <= s.tol, asym, op.spectrum().to_string());
    if let Some(x) = at {
        r = r.detail("at", x.iter().cloned().collect::<Vec<f64>>());
    }
    r.detail("eigenvalues", spectrum_value(op))
}

pub fn spectra(
    command: &str,
    path: &Path,
    at: Option<&[f64]>,
    s: &Settings,
) -> Result<CheckReport> {
    let model = load_model(path, s.tol)?;
    let m = model.dim();
    let scale = 1.0 + model.a.max_abs();
    let mut report = CheckReport::new(command);
    let rho = ricci(&model.a);
    report.push(operator_result("ricci".into(), &rho, scale, s, None));
    let lines: Vec<ComplexLine> = match at {
        Some(x) => {
            if x.len() != m {
                bail!("--at needs {m} coordinates, got {}", x.len());
            }
            let x = Vector::from_column_slice(x);
            report.push(operator_result(
                "jacobi".into(),
                &jacobi(&model.a, &x)?,
                scale,
                s,
                Some(&x),
            ));
            vec![ComplexLine::new(&x, &model.j)?]
        }
        None => {
            let mut lines = spanning_lines(&model.j);
            let mut rng = random::rng(s.seed);
            for _ in 0..s.samples {
                lines.push(ComplexLine::new(
                    &random::unit_vector(&mut rng, m),
                    &model.j,
                )?);
            }
            lines
        }
    };
    for (k, pi) in lines.iter().enumerate() {
        let op = complex_jacobi(&model.a, &model.j, pi)?;
        report.push(operator_result(
            format!("complex-jacobi line {k}"),
            &op,
            scale,
            s,
            Some(pi.representative()),
        ));
    }
    Ok(report.finish())
}

pub fn reconstruct(
    command: &str,
    path: &Path,
    mode: ReconstructMode,
    out: Option<&Path>,
    s: &Settings,
) -> Result<CheckReport> {
    let file = ModelFile::load(path)?;
    let model = file
        .to_model(s.tol)
        .with_context(|| format!("in {}", path.display()))?;
    let fit = match mode {
        ReconstructMode::Jacobi => reconstruct_from_jacobi(&JacobiOracle::from_tensor(&model.a))?,
        ReconstructMode::ComplexJacobi => {
            reconstruct_from_complex_jacobi(&ComplexJacobiOracle::from_model(&model))?
        }
    };
    let mut report = CheckReport::new(command);
    report.push(CheckResult::new("fit", true, fit.residual, "-"));
    let gap = (&fit.tensor - &model.a).max_abs() / (1.0 + model.a.max_abs());
    let mut rt = CheckResult::new("round-trip", gap <= s.tol, gap, "-");
    if mode == ReconstructMode::ComplexJacobi {
        let g = check_gray_yano_identity(&model.a, &model.j, s.tol)?;
        if !g.holds {
            rt.witness =
                "input fails the Gray identity, so its complex Jacobi data do not determine it"
                    .into();
        }
        rt = rt.detail("gray-yano residual", g.residual);
    }
    report.push(rt);
    if let Some(out) = out {
        let mut metadata = file.metadata.clone();
        let how = match mode {
            ReconstructMode::Jacobi => "jacobi",
            ReconstructMode::ComplexJacobi => "complex-jacobi",
        };
        metadata.insert("construction".into(), format!("reconstruct-{how}"));
        let fitted = ComplexModel::new(model.j.clone(), fit.tensor)?;
        ModelFile::from_model(&fitted, false, metadata).save(out)?;
        report.note(format!("wrote {}", out.display()));
    }
    report.note(format!("fit residual {:.3e}", fit.residual));
    Ok(report.finish())
}

pub fn diff(
    command: &str,
    a: &Path,
    b: &Path,
    theta: Option<&Path>,
    s: &Settings,
) -> Result<CheckReport> {
    let ma = load_model(a, s.tol)?;
    let mb = load_model(b, s.tol)?;
    let m = ma.dim();
    let theta = match theta {
        Some(p) => ComplexIsometry::new(load_matrix(p, m)?, &ma.j, s.tol)
            .with_context(|| format!("invalid theta in {}", p.display()))?,
        None => ComplexIsometry::identity(m),
    };
    let rep = jacobi_equivalence_check(&ma, &mb, &theta, s.tol)?;
    let equal = rep.verdict == curvlab::constructions::EquivalenceVerdict::Isometric;
    let equivalent = rep.battery.all_hold();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let verdict = format!(
        "complex-Jacobi-equivalent: {}; tensors equal: {}",
        yn(equivalent),
        yn(equal)
    );
    let mut report = CheckReport::new(command);
    let norm = rep.difference.norm();
    report.push(
        CheckResult::new("tensors-equal", equal, norm, verdict.clone())
            .detail("max-abs", rep.difference.max_abs()),
    );
    let mut battery = CheckResult::from(&rep.battery.summary());
    battery.name = "difference complex Jacobi vanishes".into();
    for c in rep.battery.conditions() {
        battery = battery.detail(&c.name, json!({"holds": c.holds, "residual": c.residual}));
    }
    report.push(battery);
    let mut ga = CheckResult::from(&rep.gray_a);
    ga.name = "gray-yano (first model)".into();
    let mut gb = CheckResult::from(&rep.gray_b);
    gb.name = "gray-yano (second model)".into();
    report.push(ga);
    report.push(gb);
    report.note(verdict);
    if equivalent && !equal {
        report.note("the models share complex Jacobi and complex curvature data but are not isometric via theta");
    }
    // The exit status reports equality only.
    let mut report = report.finish();
    report.status = if equal { 0 } else { 1 };
    Ok(report)
}

pub fn subspace_dim(
    command: &str,
    m: usize,
    j: Option<&Path>,
    constraints: &[String],
    s: &Settings,
) -> Result<CheckReport> {
    let j = match j {
        Some(p) => curvlab::validate_complex_structure(&load_matrix(p, m)?, s.tol)?,
        None => ComplexStructure::standard(m)?,
    };
    let tags: Vec<&str> = constraints
        .iter()
        .map(String::as_str)
        .filter(|t| !t.is_empty())
        .collect();
    let d = subspace_dimension(&tags, m, &j)?;
    let mut report = CheckReport::new(command);
    report.push(
        CheckResult::new("subspace-dim", true, 0.0, "-")
            .detail("dimension", d)
            .detail(
                "constraints",
                tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            ),
    );
    report.note(d.to_string());
    Ok(report.finish())
}

pub fn audit(command: &str, m: usize, probes: usize, s: &Settings) -> Result<CheckReport> {
    let audit = discrepancy_audit(m, probes, s.seed)?;
    let mut report = CheckReport::new(command);
    for e in &audit.entries {
        report.push(
            CheckResult::new(
                e.quantity.clone(),
                true,
                (e.computed - e.stated).abs(),
                format!("stated {}, computed {:.9}", e.stated, e.computed),
            )
            .detail("stated", e.stated)
            .detail("computed", e.computed)
            .detail("agrees", e.agrees(1e-8))
            .detail("spread", e.spread),
        );
    }
    report.note(audit.to_string().trim_end());
    Ok(report.finish())
}
