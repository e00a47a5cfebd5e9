//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use curvlab::basis::{random_curvature_tensor, GeneratorMix};
use curvlab::constructions::EquivalenceVerdict;
use curvlab::gray::{p2_analysis, same_subspace};
use curvlab::identities::{constraint_subspace, Constraint};
use curvlab::operators::{complex_curvature_operator, complex_jacobi, jacobi, ricci, star_ricci};
use curvlab::random;
use curvlab::reconstruct::gray_subspace;
use curvlab::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: CurvError) -> String {
    e.to_string()
}

fn rel(a: &AlgebraicCurvatureTensor, b: &AlgebraicCurvatureTensor) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

// Oracle 1: dim = rank of S - Alt = tr S - tr Alt, where S averages over the
// order-8 group generated by the two antisymmetries and the pair swap and
// Alt is total antisymmetrisation.
fn projector_trace(m: usize) -> f64 {
    let group: [([usize; 4], f64); 8] = [
        ([0, 1, 2, 3], 1.0),
        ([1, 0, 2, 3], -1.0),
        ([0, 1, 3, 2], -1.0),
        ([1, 0, 3, 2], 1.0),
        ([2, 3, 0, 1], 1.0),
        ([3, 2, 0, 1], -1.0),
        ([2, 3, 1, 0], -1.0),
        ([3, 2, 1, 0], 1.0),
    ];
    let mut perms = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&i| seen[i] = true);
                    if seen.iter().all(|&s| s) {
                        let inv = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |k| (i, k)))
                            .filter(|&(i, k)| p[i] > p[k])
                            .count();
                        perms.push((p, if inv % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    let fixed_trace = |g: &[([usize; 4], f64)]| -> f64 {
        let mut tr = 0.0;
        for i in 0..m.pow(4) {
            let idx = [i / (m * m * m), (i / (m * m)) % m, (i / m) % m, i % m];
            for (p, s) in g {
                if (0..4).all(|k| idx[p[k]] == idx[k]) {
                    tr += s;
                }
            }
        }
        tr / g.len() as f64
    };
    fixed_trace(&group) - fixed_trace(&perms)
}

// Oracle 2: nullity of the dense symmetry-constraint matrix on R^{m^4}.
fn dense_constraint_nullity(m: usize) -> usize {
    let n = m.pow(4);
    let at = |i: usize, j: usize, k: usize, l: usize| ((i * m + j) * m + k) * m + l;
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    rows.push(vec![(at(i, j, k, l), 1.0), (at(j, i, k, l), 1.0)]);
                    rows.push(vec![(at(i, j, k, l), 1.0), (at(k, l, i, j), -1.0)]);
                    rows.push(vec![
                        (at(i, j, k, l), 1.0),
                        (at(j, k, i, l), 1.0),
                        (at(k, i, j, l), 1.0),
                    ]);
                }
            }
        }
    }
    let mut c = nalgebra::DMatrix::<f64>::zeros(rows.len(), n);
    for (r, row) in rows.iter().enumerate() {
        for &(col, v) in row {
            c[(r, col)] += v;
        }
    }
    let gram = c.transpose() * &c;
    let ev = gram.symmetric_eigenvalues();
    ev.iter().filter(|&&v| v.abs() < 1e-9).count()
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for (m, want) in [(2, 1), (4, 20), (6, 105)] {
        let basis = curvature_space_basis(m).map_err(err)?;
        let tr = projector_trace(m);
        ensure(
            basis.dim() == want,
            format!("m={m}: basis has {} elements, expected {want}", basis.dim()),
        )?;
        ensure(
            (tr - want as f64).abs() < 1e-9,
            format!("m={m}: projector trace {tr}"),
        )?;
        if m <= 4 {
            let nullity = dense_constraint_nullity(m);
            ensure(nullity == want, format!("m={m}: dense nullity {nullity}"))?;
        }
        let worst = (0..basis.len())
            .map(|b| basis.element(b).tensor().symmetry_residual().0)
            .fold(0.0, f64::max);
        ensure(
            worst < 1e-12,
            format!("m={m}: basis element symmetry residual {worst:e}"),
        )?;
        parts.push(format!("m={m}: {}", basis.dim()));
    }
    Ok(parts.join(", "))
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for m in [4, 8] {
        let model = counterexample_model(m).map_err(err)?;
        let norm2 = model.a.inner(&model.a).map_err(err)?;
        ensure(norm2 > 0.0, format!("m={m}: |A|^2 = 0"))?;
        let rep = lemma23_battery(&model, 1e-12).map_err(err)?;
        let worst = rep.summary().residual;
        ensure(
            rep.all_hold(),
            format!("m={m}: battery {:?}", rep.conditions().map(|r| r.holds)),
        )?;
        let rho = ricci(&model.a).matrix.amax();
        let rho_star = star_ricci(&model.a, &model.j).map_err(err)?.matrix.amax();
        ensure(
            rho < 1e-12 && rho_star < 1e-12,
            format!("m={m}: rho {rho:e}, rho* {rho_star:e}"),
        )?;
        parts.push(format!(
            "m={m}: |A|^2 = {norm2}, battery residual {worst:.1e}, rho = rho* = 0"
        ));
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let tw = twistor_point_model(4).map_err(err)?;
    let (a, pulled, j) = (&tw.model.a, &tw.pulled, &tw.model.j);
    let dist = (pulled - a).norm();
    ensure(dist > 0.1, format!("|Theta*A - A| = {dist}"))?;
    let mut dj: f64 = 0.0;
    let mut dr: f64 = 0.0;
    for pi in spanning_lines(j) {
        dj = dj.max(
            (complex_jacobi(a, j, &pi).map_err(err)?.matrix
                - complex_jacobi(pulled, j, &pi).map_err(err)?.matrix)
                .norm(),
        );
        dr = dr.max(
            (complex_curvature_operator(a, j, &pi).map_err(err)?.matrix
                - complex_curvature_operator(pulled, j, &pi)
                    .map_err(err)?
                    .matrix)
                .norm(),
        );
    }
    ensure(
        dj < 1e-10 && dr < 1e-10,
        format!("operator gaps {dj:e}, {dr:e}"),
    )?;
    let q = build_quaternion_triple(4).map_err(err)?;
    let target = &build_a0(4).map_err(err)? + &build_aphi(q.j3.matrix()).map_err(err)?;
    let entry = (pulled - &target).max_abs();
    ensure(
        entry < 1e-12,
        format!("Theta*A vs A0 + A_J3 entrywise {entry:e}"),
    )?;
    Ok(format!(
        "|Theta*A - A| = {dist:.4}, complex Jacobi gap {dj:.1e}, complex curvature gap {dr:.1e}, Theta*A = A0 + A_J3 to {entry:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for m in [4, 8] {
        let q = build_quaternion_triple(m).map_err(err)?;
        let a = &build_a0(m).map_err(err)? + &build_aphi(q.j1.matrix()).map_err(err)?;
        let mut rng = random::rng(40 + m as u64);
        for _ in 0..20 {
            let x = random::unit_vector(&mut rng, m);
            let s = jacobi(&a, &x).map_err(err)?.spectrum();
            ensure(
                s.matches(&[(0.0, 1), (1.0, m - 2), (4.0, 1)], 1e-8),
                format!("m={m}: spectrum {s}"),
            )?;
        }
        parts.push(format!("m={m}: {{0, 4, 1 x{}}} at 20 unit vectors", m - 2));
    }
    Ok(parts.join("; "))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for m in [4, 6] {
        let mut rng = random::rng(500 + m as u64);
        let structures: Vec<ComplexStructure> = (0..4)
            .map(|_| random::complex_structure(&mut rng, m))
            .collect();
        let subspaces = structures
            .iter()
            .map(|j| {
                Ok((
                    constraint_subspace(&[Constraint::A3], j)?,
                    constraint_subspace(&[Constraint::A2Perp], j)?,
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(err)?;
        let mut counts = [[0usize; 2]; 3];
        for n in 0..200 {
            let k = n % structures.len();
            let j = structures[k].clone();
            let raw =
                random_curvature_tensor(m, 10_000 + n as u64, GeneratorMix::Basis).map_err(err)?;
            let members = [
                raw.clone(),
                subspaces[k].0.project(raw.tensor()),
                subspaces[k].1.project(raw.tensor()),
            ];
            for (p, a) in members.into_iter().enumerate() {
                let model = ComplexModel::new(j.clone(), a).map_err(err)?;
                let compat = check_compatibility(&model, Compatibility::All, DEFAULT_TOL)
                    .map_err(|e| format!("m={m}, tensor {n}, population {p}: {e}"))?;
                let battery = lemma23_battery(&model, DEFAULT_TOL)
                    .map_err(|e| format!("m={m}, tensor {n}, population {p}: {e}"))?;
                counts[p][0] += compat.compatible() as usize;
                counts[p][1] += battery.all_hold() as usize;
            }
        }
        parts.push(format!(
            "m={m}: compatible/vanishing raw {}/{}, A3 {}/{}, A2perp {}/{}",
            counts[0][0], counts[0][1], counts[1][0], counts[1][1], counts[2][0], counts[2][1]
        ));
    }
    Ok(format!(
        "no disagreements in 2 x 600 models; {}",
        parts.join("; ")
    ))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [4, 6] {
        let mut rng = random::rng(600 + m as u64);
        for n in 0..50 {
            let j = random::complex_structure(&mut rng, m);
            let a3 = constraint_subspace(&[Constraint::A3], &j).map_err(err)?;
            let model = ComplexModel::new(j, a3.random_member(&mut rng)).map_err(err)?;
            let r = check_vanhecke(&model, 100, 7000 + n, DEFAULT_TOL).map_err(err)?;
            ensure(
                r.holds,
                format!(
                    "m={m}, model {n}: residual {:e} at {}",
                    r.residual, r.witness
                ),
            )?;
            worst = worst.max(r.residual);
        }
    }
    Ok(format!("100 models, worst residual {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let j = ComplexStructure::standard(4).map_err(err)?;
    let fs = &build_a0(4).map_err(err)? + &build_aphi(j.matrix()).map_err(err)?;
    let mut parts = Vec::new();
    for c in [-2.0, 0.0, 4.0] {
        let model = ComplexModel::new(j.clone(), &fs * (c / 4.0)).map_err(err)?;
        let r = check_sato(&model, SatoVariant::ConstantCurvature(Some(c)), DEFAULT_TOL)
            .map_err(err)?;
        ensure(r.holds, format!("c={c}: residual {:e}", r.residual))?;
        parts.push(format!("c={c}: {:.1e}", r.residual));
    }
    let ce = counterexample_model(4).map_err(err)?;
    let r = check_sato(&ce, SatoVariant::Zero, DEFAULT_TOL).map_err(err)?;
    ensure(r.holds, format!("zero variant residual {:e}", r.residual))?;
    parts.push(format!(
        "zero variant on the vanishing-Jacobi tensor: {:.1e}",
        r.residual
    ));
    Ok(parts.join(", "))
}

fn criterion_8() -> Outcome {
    let j = ComplexStructure::standard(4).map_err(err)?;
    let p = p2_analysis(&j).map_err(err)?;
    ensure(
        p.closure_residual < 1e-10,
        format!("P2 leaves A3: {:e}", p.closure_residual),
    )?;
    ensure(
        p.involution_residual < 1e-10,
        format!("P2^2 - I = {:e}", p.involution_residual),
    )?;
    ensure(
        p.isometry_residual < 1e-10,
        format!("isometry residual {:e}", p.isometry_residual),
    )?;
    let a2perp = constraint_subspace(&[Constraint::A2Perp], &j).map_err(err)?;
    let a2 = constraint_subspace(&[Constraint::A2], &j).map_err(err)?;
    ensure(
        same_subspace(&p.anti_fixed, &a2perp, 1e-8),
        "(-1)-eigenspace differs from A2perp",
    )?;
    ensure(
        same_subspace(&p.fixed, &a2, 1e-8),
        "fixed space differs from A2",
    )?;
    Ok(format!(
        "dim A3 = {}, P2^2 - I = {:.1e}, isometry {:.1e}, fixed = A2 (dim {}), (-1)-eigenspace = A2perp (dim {})",
        p.a3.dim(),
        p.involution_residual,
        p.isometry_residual,
        p.fixed.dim(),
        p.anti_fixed.dim()
    ))
}

fn criterion_9() -> Outcome {
    let j = ComplexStructure::standard(4).map_err(err)?;
    let d = subspace_dimension(&["gray-yano", "a2perp"], 4, &j).map_err(err)?;
    ensure(d == 0, format!("dim(Gray ∩ A2perp) = {d}"))?;
    let fs = &build_a0(4).map_err(err)? + &build_aphi(j.matrix()).map_err(err)?;
    let mut worst = 0.0_f64;
    let mut check = |model: ComplexModel| -> std::result::Result<(), String> {
        let r = reconstruct_from_complex_jacobi(&ComplexJacobiOracle::from_model(&model))
            .map_err(err)?;
        let e = rel(&r.tensor, &model.a);
        worst = worst.max(e);
        ensure(e < 1e-8, format!("relative error {e:e}"))
    };
    check(ComplexModel::new(j.clone(), fs).map_err(err)?)?;
    let g = gray_subspace(&j).map_err(err)?;
    let mut rng = random::rng(900);
    for _ in 0..20 {
        check(ComplexModel::new(j.clone(), g.random_member(&mut rng)).map_err(err)?)?;
    }
    Ok(format!(
        "dim(Gray ∩ A2perp) = 0, dim Gray = {}, 21 round trips, worst relative error {worst:.1e}",
        g.dim()
    ))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0_f64;
    let mut worst_eq = 0.0_f64;
    for m in [4, 6] {
        for n in 0..50 {
            let a = random_curvature_tensor(m, 1000 * m as u64 + n, GeneratorMix::Basis)
                .map_err(err)?;
            let r = reconstruct_from_jacobi(&JacobiOracle::from_tensor(&a)).map_err(err)?;
            let e = rel(&r.tensor, &a);
            ensure(e < 1e-8, format!("m={m}, tensor {n}: relative error {e:e}"))?;
            worst = worst.max(e);
        }
        let mut rng = random::rng(100 + m as u64);
        for n in 0..10 {
            let a = random_curvature_tensor(m, 77 + n, GeneratorMix::Basis).map_err(err)?;
            let theta = random::orthogonal(&mut rng, m);
            let oracle = JacobiOracle::from_tensor(&a);
            let lhs = reconstruct_from_jacobi(&oracle.pulled_back(&theta))
                .map_err(err)?
                .tensor;
            let rhs = reconstruct_from_jacobi(&oracle)
                .map_err(err)?
                .tensor
                .pullback(&theta)
                .map_err(err)?;
            let e = rel(&lhs, &rhs);
            ensure(
                e < 1e-8,
                format!("m={m}, theta {n}: equivariance error {e:e}"),
            )?;
            worst_eq = worst_eq.max(e);
        }
    }
    Ok(format!(
        "100 round trips, worst relative error {worst:.1e}; 20 orthogonal pullbacks, worst equivariance error {worst_eq:.1e}"
    ))
}

fn criterion_11() -> Outcome {
    let audit = discrepancy_audit(8, 20, 11).map_err(err)?;
    print!("{audit}");
    let differs: Vec<String> = audit
        .disagreements(1e-8)
        .iter()
        .map(|e| {
            format!(
                "{}: stated {}, computed {:.6}",
                e.quantity, e.stated, e.computed
            )
        })
        .collect();
    ensure(
        audit.entries.iter().all(|e| e.spread < 1e-10),
        "audited quantities are not eigenvalues at every probe",
    )?;
    let tw = twistor_point_model(4).map_err(err)?;
    let rep = jacobi_equivalence_check(
        &tw.model,
        &tw.pulled_model(),
        &ComplexIsometry::identity(4),
        DEFAULT_TOL,
    )
    .map_err(err)?;
    ensure(
        rep.verdict == EquivalenceVerdict::JacobiOnly,
        "twistor pair not reported as Jacobi-only",
    )?;
    Ok(format!(
        "reported {} differing values: {}",
        differs.len(),
        differs.join("; ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("curvature space dimension", criterion_1),
        ("vanishing complex Jacobi counterexample", criterion_2),
        ("twistor pair", criterion_3),
        ("Fubini-Study Jacobi spectrum", criterion_4),
        ("equivalence batteries", criterion_5),
        ("Vanhecke identity", criterion_6),
        ("Sato identities", criterion_7),
        ("P2 involution", criterion_8),
        ("complex Jacobi uniqueness on Gray tensors", criterion_9),
        ("Jacobi reconstruction", criterion_10),
        ("discrepancy audit", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
