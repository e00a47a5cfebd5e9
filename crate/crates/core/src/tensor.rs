//! Dense rank-4 tensors and the algebraic curvature tensors among them.

use std::ops::{Add, Mul, Neg, Sub};

use crate::basis::curvature_space_basis;
use crate::error::{CurvError, Result};
use crate::space::{validate_complex_structure, ComplexStructure};
use crate::{Matrix, Vector, DEFAULT_TOL};

/// A dense rank-4 covariant tensor on `R^m`, stored row-major as
/// `T[i][j][k][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    m: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![0.0; m * m * m * m],
        }
    }

    pub fn from_vec(m: usize, data: Vec<f64>) -> Result<Self> {
        let expected = m * m * m * m;
        if data.len() != expected {
            return Err(CurvError::ShapeMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(Self { m, data })
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let idx = t.index(i, j, k, l);
                        t.data[idx] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.m + j) * self.m + k) * self.m + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }

    /// Multilinear evaluation `T(x, y, z, w)`.
    pub fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        let m = self.m;
        let mut total = 0.0;
        for i in 0..m {
            if x[i] == 0.0 {
                continue;
            }
            let mut si = 0.0;
            for j in 0..m {
                if y[j] == 0.0 {
                    continue;
                }
                let mut sj = 0.0;
                for k in 0..m {
                    if z[k] == 0.0 {
                        continue;
                    }
                    let base = self.index(i, j, k, 0);
                    let row = &self.data[base..base + m];
                    let sk: f64 = row.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
                    sj += z[k] * sk;
                }
                si += y[j] * sj;
            }
            total += x[i] * si;
        }
        total
    }

    /// Contracts slot `slot` against `mat`: the result evaluates as
    /// `T(.., mat v, ..)` in that slot.
    fn mode_product(&self, slot: usize, mat: &Matrix) -> Tensor4 {
        let m = self.m;
        let mut out = Tensor4::zeros(m);
        let stride = m.pow(3 - slot as u32);
        for (flat, o) in out.data.iter_mut().enumerate() {
            let idx = (flat / stride) % m;
            let base = flat - idx * stride;
            let mut s = 0.0;
            for a in 0..m {
                let c = mat[(a, idx)];
                if c != 0.0 {
                    s += self.data[base + a * stride] * c;
                }
            }
            *o = s;
        }
        out
    }

    /// `(x, y, z, w) -> T(M0 x, M1 y, M2 z, M3 w)`; `None` leaves a slot alone.
    pub fn transform(&self, maps: [Option<&Matrix>; 4]) -> Tensor4 {
        let mut out = self.clone();
        for (slot, map) in maps.iter().enumerate() {
            if let Some(mat) = map {
                out = out.mode_product(slot, mat);
            }
        }
        out
    }

    /// `(x, y, z, w) -> T(J^{s0} x, J^{s1} y, J^{s2} z, J^{s3} w)`.
    pub fn with_slots(&self, j: &Matrix, mask: [bool; 4]) -> Tensor4 {
        self.transform(mask.map(|s| if s { Some(j) } else { None }))
    }

    /// `(v0, v1, v2, v3) -> T(v_{p0}, v_{p1}, v_{p2}, v_{p3})`.
    pub fn permute(&self, perm: [usize; 4]) -> Tensor4 {
        let m = self.m;
        let mut out = Tensor4::zeros(m);
        let mut v = [0usize; 4];
        for i0 in 0..m {
            v[0] = i0;
            for i1 in 0..m {
                v[1] = i1;
                for i2 in 0..m {
                    v[2] = i2;
                    for i3 in 0..m {
                        v[3] = i3;
                        let src = self.get(v[perm[0]], v[perm[1]], v[perm[2]], v[perm[3]]);
                        out.set(i0, i1, i2, i3, src);
                    }
                }
            }
        }
        out
    }

    pub fn axpy(&mut self, alpha: f64, other: &Tensor4) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn scaled(&self, alpha: f64) -> Tensor4 {
        Tensor4 {
            m: self.m,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Full contraction `sum T1_ijkl T2_ijkl` in fixed index order.
    pub fn dot(&self, other: &Tensor4) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Largest index and value by absolute value.
    pub fn argmax_abs(&self) -> ([usize; 4], f64) {
        let mut best = (0usize, 0.0f64);
        for (i, v) in self.data.iter().enumerate() {
            if v.abs() > best.1 {
                best = (i, v.abs());
            }
        }
        (self.unflatten(best.0), best.1)
    }

    pub fn unflatten(&self, flat: usize) -> [usize; 4] {
        let m = self.m;
        [
            flat / (m * m * m),
            (flat / (m * m)) % m,
            (flat / m) % m,
            flat % m,
        ]
    }

    /// Worst violation of antisymmetry, pair symmetry and the first Bianchi
    /// identity, in that order, each scaled by `1 + max|T|`.
    pub fn family_residuals(&self) -> [(f64, &'static str, [usize; 4]); 3] {
        let m = self.m;
        let scale = 1.0 + self.max_abs();
        let mut worst = [
            (0.0, "antisymmetry", [0; 4]),
            (0.0, "pair symmetry", [0; 4]),
            (0.0, "first Bianchi", [0; 4]),
        ];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let q = [i, j, k, l];
                        let v = self.get(i, j, k, l);
                        let r = [
                            (v + self.get(j, i, k, l)).abs(),
                            (v - self.get(k, l, i, j)).abs(),
                            (v + self.get(j, k, i, l) + self.get(k, i, j, l)).abs(),
                        ];
                        for (f, r) in r.into_iter().enumerate() {
                            let r = r / scale;
                            if r > worst[f].0 {
                                worst[f].0 = r;
                                worst[f].2 = q;
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Worst violation over all symmetry families, scaled by `1 + max|T|`.
    pub fn symmetry_residual(&self) -> (f64, &'static str, [usize; 4]) {
        self.family_residuals()
            .into_iter()
            .fold(
                (0.0, "antisymmetry", [0; 4]),
                |a, b| if b.0 > a.0 { b } else { a },
            )
    }
}

/// How `validate_or_project` treats an input array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    Strict,
    Project,
}

/// A rank-4 tensor with `A(x,y,z,w) = -A(y,x,z,w) = A(z,w,x,y)` and the
/// first Bianchi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCurvatureTensor(Tensor4);

impl AlgebraicCurvatureTensor {
    /// Wraps a tensor known to lie in the curvature space.
    pub(crate) fn new_unchecked(t: Tensor4) -> Self {
        Self(t)
    }

    pub fn zeros(m: usize) -> Self {
        Self(Tensor4::zeros(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor4 {
        self.0
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0.get(i, j, k, l)
    }

    pub fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        self.0.eval(x, y, z, w)
    }

    /// `<A1, A2> = sum A1(e_i,e_j,e_k,e_l) A2(e_i,e_j,e_k,e_l)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.0.dot(&other.0))
    }

    pub fn norm(&self) -> f64 {
        self.0.dot(&self.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    /// `theta^* A`, i.e. `(x, y, z, w) -> A(theta x, theta y, theta z, theta w)`.
    pub fn pullback(&self, theta: &Matrix) -> Result<Self> {
        pullback(theta, self)
    }
}

impl Add for &AlgebraicCurvatureTensor {
    type Output = AlgebraicCurvatureTensor;
    fn add(self, rhs: Self) -> AlgebraicCurvatureTensor {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        let mut t = self.0.clone();
        t.axpy(1.0, &rhs.0);
        AlgebraicCurvatureTensor(t)
    }
}

impl Sub for &AlgebraicCurvatureTensor {
    type Output = AlgebraicCurvatureTensor;
    fn sub(self, rhs: Self) -> AlgebraicCurvatureTensor {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        let mut t = self.0.clone();
        t.axpy(-1.0, &rhs.0);
        AlgebraicCurvatureTensor(t)
    }
}

impl Mul<f64> for &AlgebraicCurvatureTensor {
    type Output = AlgebraicCurvatureTensor;
    fn mul(self, rhs: f64) -> AlgebraicCurvatureTensor {
        AlgebraicCurvatureTensor(self.0.scaled(rhs))
    }
}

impl Neg for &AlgebraicCurvatureTensor {
    type Output = AlgebraicCurvatureTensor;
    fn neg(self) -> AlgebraicCurvatureTensor {
        AlgebraicCurvatureTensor(self.0.scaled(-1.0))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(CurvError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Strict mode returns `t` when all symmetry families hold within `tol`
/// (relative to `1 + max|t|`); project mode returns the orthogonal
/// projection of `t` onto the curvature space.
pub fn validate_or_project(
    t: &Tensor4,
    mode: ValidationMode,
    tol: f64,
) -> Result<AlgebraicCurvatureTensor> {
    match mode {
        ValidationMode::Strict => {
            if let Some((residual, family, quad)) =
                t.family_residuals().into_iter().find(|f| f.0 > tol)
            {
                return Err(CurvError::SymmetryViolation {
                    family,
                    quad,
                    residual,
                });
            }
            Ok(AlgebraicCurvatureTensor(t.clone()))
        }
        ValidationMode::Project => {
            let basis = curvature_space_basis(t.dim())?;
            Ok(basis.project(t))
        }
    }
}

/// `A0(x,y,z,w) = <x,w><y,z> - <x,z><y,w>`: constant sectional curvature +1.
pub fn build_a0(m: usize) -> Result<AlgebraicCurvatureTensor> {
    if m < 2 {
        return Err(CurvError::DimensionTooSmall(m));
    }
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(AlgebraicCurvatureTensor(Tensor4::from_fn(
        m,
        |i, j, k, l| d(i, l) * d(j, k) - d(i, k) * d(j, l),
    )))
}

/// `A_Phi(x,y,z,w) = <x,Phi w><y,Phi z> - <x,Phi z><y,Phi w> - 2<x,Phi y><z,Phi w>`.
pub fn build_aphi(phi: &Matrix) -> Result<AlgebraicCurvatureTensor> {
    let j = validate_complex_structure(phi, DEFAULT_TOL)?;
    Ok(aphi(&j))
}

pub(crate) fn aphi(j: &ComplexStructure) -> AlgebraicCurvatureTensor {
    let p = j.matrix();
    AlgebraicCurvatureTensor(Tensor4::from_fn(j.dim(), |i, jj, k, l| {
        p[(i, l)] * p[(jj, k)] - p[(i, k)] * p[(jj, l)] - 2.0 * p[(i, jj)] * p[(k, l)]
    }))
}

pub fn tensor_inner_product(
    a1: &AlgebraicCurvatureTensor,
    a2: &AlgebraicCurvatureTensor,
) -> Result<f64> {
    a1.inner(a2)
}

pub fn pullback(theta: &Matrix, a: &AlgebraicCurvatureTensor) -> Result<AlgebraicCurvatureTensor> {
    check_dim(a.dim(), theta.nrows())?;
    check_dim(a.dim(), theta.ncols())?;
    let residual = (theta.transpose() * theta - Matrix::identity(a.dim(), a.dim())).amax();
    if residual > DEFAULT_TOL {
        return Err(CurvError::NotOrthogonal { residual });
    }
    Ok(AlgebraicCurvatureTensor(a.0.transform([Some(theta); 4])))
}

/// A complex model `(R^m, dot, J, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexModel {
    pub j: ComplexStructure,
    pub a: AlgebraicCurvatureTensor,
}

impl ComplexModel {
    pub fn new(j: ComplexStructure, a: AlgebraicCurvatureTensor) -> Result<Self> {
        check_dim(j.dim(), a.dim())?;
        Ok(Self { j, a })
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }
}
