//! The JSON model file: `{"dim", "J", "A", "metadata"}`.
//!
//! `A` is stored either densely as a nested `m x m x m x m` array, or
//! sparsely as `[i, j, k, l, value]` rows holding one representative per
//! symmetry orbit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use curvlab::tensor::{validate_or_project, ValidationMode};
use curvlab::{
    validate_complex_structure, AlgebraicCurvatureTensor, ComplexModel, Matrix, Tensor4,
};
use serde::{Deserialize, Serialize};

/// Orbit values closer than this are treated as equal.
pub const ORBIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseEntry(pub usize, pub usize, pub usize, pub usize, pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "storage", rename_all = "lowercase")]
pub enum Storage {
    Dense { entries: Vec<Vec<Vec<Vec<f64>>>> },
    Sparse { entries: Vec<SparseEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub dim: usize,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Storage,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

// (slot permutation, sign): A(q[p0], q[p1], q[p2], q[p3]) = sign * A(q).
const ORBIT: [([usize; 4], f64); 8] = [
    ([0, 1, 2, 3], 1.0),
    ([1, 0, 2, 3], -1.0),
    ([0, 1, 3, 2], -1.0),
    ([1, 0, 3, 2], 1.0),
    ([2, 3, 0, 1], 1.0),
    ([3, 2, 0, 1], -1.0),
    ([2, 3, 1, 0], -1.0),
    ([3, 2, 1, 0], 1.0),
];

fn orbit(q: [usize; 4]) -> impl Iterator<Item = ([usize; 4], f64)> {
    ORBIT.iter().map(move |(p, s)| (p.map(|i| q[i]), *s))
}

pub fn matrix_from_rows(rows: &[Vec<f64>], m: usize, what: &str) -> Result<Matrix> {
    ensure!(
        rows.len() == m && rows.iter().all(|r| r.len() == m),
        "{what} must be a {m}x{m} array"
    );
    Ok(Matrix::from_fn(m, m, |r, c| rows[r][c]))
}

pub fn matrix_to_rows(mat: &Matrix) -> Vec<Vec<f64>> {
    (0..mat.nrows())
        .map(|r| (0..mat.ncols()).map(|c| mat[(r, c)]).collect())
        .collect()
}

impl Storage {
    pub fn dense(t: &Tensor4) -> Self {
        let m = t.dim();
        let entries = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m)
                            .map(|k| (0..m).map(|l| t.get(i, j, k, l)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Storage::Dense { entries }
    }

    /// Nonzero entries at the lexicographically smallest index of each orbit.
    pub fn sparse(t: &Tensor4) -> Self {
        let m = t.dim();
        let mut entries = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let q = [i, j, k, l];
                        let v = t.get(i, j, k, l);
                        if v != 0.0 && orbit(q).all(|(p, _)| p >= q) {
                            entries.push(SparseEntry(i, j, k, l, v));
                        }
                    }
                }
            }
        }
        Storage::Sparse { entries }
    }

    pub fn to_tensor(&self, m: usize) -> Result<Tensor4> {
        match self {
            Storage::Dense { entries } => {
                let ok = entries.len() == m
                    && entries.iter().all(|a| {
                        a.len() == m
                            && a.iter()
                                .all(|b| b.len() == m && b.iter().all(|c| c.len() == m))
                    });
                ensure!(ok, "dense entries must be an {m}x{m}x{m}x{m} array");
                Ok(Tensor4::from_fn(m, |i, j, k, l| entries[i][j][k][l]))
            }
            Storage::Sparse { entries } => {
                let mut t = Tensor4::zeros(m);
                let mut set = vec![false; m.pow(4)];
                for &SparseEntry(i, j, k, l, v) in entries {
                    ensure!(
                        i < m && j < m && k < m && l < m,
                        "sparse index ({i}, {j}, {k}, {l}) out of range for dim {m}"
                    );
                    for (q, s) in orbit([i, j, k, l]) {
                        let idx = t.index(q[0], q[1], q[2], q[3]);
                        let val = s * v;
                        if set[idx] {
                            let old = t.data()[idx];
                            if (old - val).abs() > ORBIT_TOL {
                                bail!(
                                    "sparse entry ({i}, {j}, {k}, {l}) = {v} implies A{q:?} = {val}, which conflicts with {old}"
                                );
                            }
                        } else {
                            t.set(q[0], q[1], q[2], q[3], val);
                            set[idx] = true;
                        }
                    }
                }
                Ok(t)
            }
        }
    }
}

impl ModelFile {
    pub fn from_model(
        model: &ComplexModel,
        sparse: bool,
        metadata: BTreeMap<String, String>,
    ) -> Self {
        let t = model.a.tensor();
        Self {
            dim: model.dim(),
            j: matrix_to_rows(model.j.matrix()),
            a: if sparse {
                Storage::sparse(t)
            } else {
                Storage::dense(t)
            },
            metadata,
        }
    }

    /// Validates `J` and the symmetries of `A` at `tol`.
    pub fn to_model(&self, tol: f64) -> Result<ComplexModel> {
        let m = self.dim;
        let j = validate_complex_structure(&matrix_from_rows(&self.j, m, "J")?, tol)
            .context("invalid complex structure J")?;
        let t = self.a.to_tensor(m)?;
        let a: AlgebraicCurvatureTensor = validate_or_project(&t, ValidationMode::Strict, tol)
            .context("invalid curvature tensor A")?;
        Ok(ComplexModel::new(j, a)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("{} is not a valid model file", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }
}

pub fn load_model(path: &Path, tol: f64) -> Result<ComplexModel> {
    ModelFile::load(path)?
        .to_model(tol)
        .with_context(|| format!("in {}", path.display()))
}

/// Reads a plain `m x m` JSON array.
pub fn load_matrix(path: &Path, m: usize) -> Result<Matrix> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a JSON matrix", path.display()))?;
    matrix_from_rows(&rows, m, &path.display().to_string())
}

pub fn save_matrix(path: &Path, mat: &Matrix) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&matrix_to_rows(mat))?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
