//! The curvature space `𝔄(V)` as the solution space of the symmetry
//! constraints, its orthonormal basis, symmetry-reduced coordinates, and
//! linear subspaces cut out by further identities.
//!
//! The constraint system only ever relates entries whose index quadruples
//! are permutations of one another, so it splits into independent blocks,
//! one per index multiset. Each block has at most 24 unknowns and its
//! nullspace is computed directly; the union of the block nullspaces is an
//! orthonormal basis of the full solution space.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand_distr::{Distribution, StandardNormal};

use crate::error::{CurvError, Result};
use crate::linalg::{nullspace, RANK_TOL};
use crate::random;
use crate::tensor::{aphi, build_a0, AlgebraicCurvatureTensor, Tensor4};
use crate::{Matrix, Vector};

/// Orthonormal basis of `𝔄(V)` with sparse elements.
#[derive(Debug, Clone)]
pub struct CurvatureBasis {
    m: usize,
    elements: Vec<Vec<(usize, f64)>>,
}

fn permutations_of(q: [usize; 4]) -> Vec<[usize; 4]> {
    const PERMS: [[usize; 4]; 24] = [
        [0, 1, 2, 3],
        [0, 1, 3, 2],
        [0, 2, 1, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
        [0, 3, 2, 1],
        [1, 0, 2, 3],
        [1, 0, 3, 2],
        [1, 2, 0, 3],
        [1, 2, 3, 0],
        [1, 3, 0, 2],
        [1, 3, 2, 0],
        [2, 0, 1, 3],
        [2, 0, 3, 1],
        [2, 1, 0, 3],
        [2, 1, 3, 0],
        [2, 3, 0, 1],
        [2, 3, 1, 0],
        [3, 0, 1, 2],
        [3, 0, 2, 1],
        [3, 1, 0, 2],
        [3, 1, 2, 0],
        [3, 2, 0, 1],
        [3, 2, 1, 0],
    ];
    let mut out: Vec<[usize; 4]> = PERMS.iter().map(|p| p.map(|i| q[i])).collect();
    out.sort();
    out.dedup();
    out
}

impl CurvatureBasis {
    pub fn compute(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(CurvError::DimensionTooSmall(m));
        }
        let flat = |q: [usize; 4]| ((q[0] * m + q[1]) * m + q[2]) * m + q[3];
        let mut elements = Vec::new();
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    for d in c..m {
                        let quads = permutations_of([a, b, c, d]);
                        let local: HashMap<[usize; 4], usize> =
                            quads.iter().enumerate().map(|(i, q)| (*q, i)).collect();
                        let n = quads.len();
                        let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
                        for &[i, j, k, l] in &quads {
                            let at = |q: [usize; 4]| local[&q];
                            rows.push(vec![(at([i, j, k, l]), 1.0), (at([j, i, k, l]), 1.0)]);
                            rows.push(vec![(at([i, j, k, l]), 1.0), (at([k, l, i, j]), -1.0)]);
                            rows.push(vec![
                                (at([i, j, k, l]), 1.0),
                                (at([j, k, i, l]), 1.0),
                                (at([k, i, j, l]), 1.0),
                            ]);
                        }
                        let mut cm = Matrix::zeros(rows.len(), n);
                        for (r, row) in rows.iter().enumerate() {
                            for &(c, v) in row {
                                cm[(r, c)] += v;
                            }
                        }
                        let ns = nullspace(&cm, RANK_TOL);
                        for col in ns.column_iter() {
                            let el: Vec<(usize, f64)> = col
                                .iter()
                                .enumerate()
                                .filter(|(_, v)| v.abs() > 1e-15)
                                .map(|(i, v)| (flat(quads[i]), *v))
                                .collect();
                            elements.push(el);
                        }
                    }
                }
            }
        }
        Ok(Self { m, elements })
    }

    /// Dimension `m` of the underlying vector space.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of `𝔄(R^m)`, which is `m^2 (m^2 - 1) / 12`.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, b: usize) -> AlgebraicCurvatureTensor {
        let mut t = Tensor4::zeros(self.m);
        let data = t.data_mut();
        for &(idx, v) in &self.elements[b] {
            data[idx] = v;
        }
        AlgebraicCurvatureTensor::new_unchecked(t)
    }

    /// Symmetry-reduced coordinates `c_b = <T, B_b>`.
    pub fn coordinates(&self, t: &Tensor4) -> Vector {
        let data = t.data();
        Vector::from_iterator(
            self.len(),
            self.elements
                .iter()
                .map(|el| el.iter().map(|&(i, v)| data[i] * v).sum::<f64>()),
        )
    }

    pub fn from_coordinates(&self, coords: &Vector) -> AlgebraicCurvatureTensor {
        assert_eq!(coords.len(), self.len(), "coordinate length");
        let mut t = Tensor4::zeros(self.m);
        let data = t.data_mut();
        for (el, c) in self.elements.iter().zip(coords.iter()) {
            for &(idx, v) in el {
                data[idx] += c * v;
            }
        }
        AlgebraicCurvatureTensor::new_unchecked(t)
    }

    /// Orthogonal projection onto `𝔄(V)`.
    pub fn project(&self, t: &Tensor4) -> AlgebraicCurvatureTensor {
        self.from_coordinates(&self.coordinates(t))
    }
}

static BASIS_CACHE: OnceLock<Mutex<HashMap<usize, Arc<CurvatureBasis>>>> = OnceLock::new();

/// Cached orthonormal basis of `𝔄(R^m)`.
pub fn curvature_space_basis(m: usize) -> Result<Arc<CurvatureBasis>> {
    let cache = BASIS_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("basis cache").get(&m) {
        return Ok(b.clone());
    }
    let basis = Arc::new(CurvatureBasis::compute(m)?);
    cache.lock().expect("basis cache").insert(m, basis.clone());
    Ok(basis)
}

/// A linear subspace of `𝔄(V)`, held as an orthonormal set of coordinate
/// vectors in the ambient [`CurvatureBasis`].
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: Arc<CurvatureBasis>,
    coords: Matrix,
}

impl Subspace {
    pub fn full(m: usize) -> Result<Self> {
        let basis = curvature_space_basis(m)?;
        let d = basis.len();
        Ok(Self {
            basis,
            coords: Matrix::identity(d, d),
        })
    }

    /// Common kernel of linear maps `𝔄(V) -> ⊗^4 V*`.
    pub fn from_constraints<F>(m: usize, constraints: &[F]) -> Result<Self>
    where
        F: Fn(&Tensor4) -> Tensor4,
    {
        let basis = curvature_space_basis(m)?;
        let d = basis.len();
        let n4 = m.pow(4);
        if constraints.is_empty() {
            return Self::full(m);
        }
        let mut big = Matrix::zeros(n4 * constraints.len(), d);
        for b in 0..d {
            let el = basis.element(b).into_tensor();
            for (ci, f) in constraints.iter().enumerate() {
                let img = f(&el);
                for (r, v) in img.data().iter().enumerate() {
                    big[(ci * n4 + r, b)] = *v;
                }
            }
        }
        let coords = nullspace(&big, RANK_TOL);
        Ok(Self { basis, coords })
    }

    pub(crate) fn from_parts(basis: Arc<CurvatureBasis>, coords: Matrix) -> Self {
        Self { basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn ambient(&self) -> &Arc<CurvatureBasis> {
        &self.basis
    }

    /// Orthonormal coordinate columns.
    pub fn coords(&self) -> &Matrix {
        &self.coords
    }

    pub fn element(&self, i: usize) -> AlgebraicCurvatureTensor {
        self.basis
            .from_coordinates(&self.coords.column(i).into_owned())
    }

    pub fn elements(&self) -> Vec<AlgebraicCurvatureTensor> {
        (0..self.dim()).map(|i| self.element(i)).collect()
    }

    pub fn project(&self, t: &Tensor4) -> AlgebraicCurvatureTensor {
        let c = self.basis.coordinates(t);
        let local = self.coords.transpose() * c;
        self.basis.from_coordinates(&(&self.coords * local))
    }

    /// Distance from `t` to the subspace relative to `1 + |t|`.
    pub fn distance(&self, t: &Tensor4) -> f64 {
        let p = self.project(t);
        let mut diff = t.clone();
        diff.axpy(-1.0, p.tensor());
        diff.dot(&diff).sqrt() / (1.0 + t.dot(t).sqrt())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x in both iff (I - P_other) x = 0 for x = coords * y.
        let d = self.basis.len();
        let p_other = &other.coords * other.coords.transpose();
        let comp = (Matrix::identity(d, d) - p_other) * &self.coords;
        let y = nullspace(&comp, RANK_TOL);
        Subspace {
            basis: self.basis.clone(),
            coords: &self.coords * y,
        }
    }

    pub fn random_member(&self, rng: &mut random::Rng) -> AlgebraicCurvatureTensor {
        let y = random::normal_vector(rng, self.dim());
        self.basis.from_coordinates(&(&self.coords * y))
    }
}

/// Generators used by [`random_curvature_tensor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMix {
    /// Gaussian coordinates in the orthonormal basis.
    Basis,
    /// A random multiple of `A0`.
    A0Only,
    /// `c0 A0 + sum c_k A_{Phi_k}` over `count` random complex structures.
    Canonical { count: usize },
}

/// Reproducible random element of `𝔄(R^m)`.
pub fn random_curvature_tensor(
    m: usize,
    seed: u64,
    mix: GeneratorMix,
) -> Result<AlgebraicCurvatureTensor> {
    let mut rng = random::rng(seed);
    match mix {
        GeneratorMix::Basis => {
            let basis = curvature_space_basis(m)?;
            Ok(basis.from_coordinates(&random::normal_vector(&mut rng, basis.len())))
        }
        GeneratorMix::A0Only => {
            let c: f64 = StandardNormal.sample(&mut rng);
            Ok(&build_a0(m)? * c)
        }
        GeneratorMix::Canonical { count } => {
            if !m.is_multiple_of(2) {
                return Err(CurvError::OddDimension(m));
            }
            let c: f64 = StandardNormal.sample(&mut rng);
            let mut out = &build_a0(m)? * c;
            for _ in 0..count {
                let j = random::complex_structure(&mut rng, m);
                let c: f64 = StandardNormal.sample(&mut rng);
                out = &out + &(&aphi(&j) * c);
            }
            Ok(out)
        }
    }
}
