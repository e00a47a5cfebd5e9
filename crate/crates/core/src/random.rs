//! Seeded random sampling of vectors, orthogonal matrices and complex
//! structures. Every sampler takes an explicit RNG so sweeps are reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::space::{standard_complex_structure, ComplexStructure};
use crate::{Matrix, Vector};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vector(rng: &mut Rng, m: usize) -> Vector {
    Vector::from_iterator(m, (0..m).map(|_| StandardNormal.sample(rng)))
}

pub fn normal_matrix(rng: &mut Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_iterator(
        rows,
        cols,
        (0..rows * cols).map(|_| StandardNormal.sample(rng)),
    )
}

/// Uniformly distributed unit vector: a normalized Gaussian sample.
pub fn unit_vector(rng: &mut Rng, m: usize) -> Vector {
    loop {
        let v = normal_vector(rng, m);
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of `R`'s diagonal folded into `Q`).
pub fn orthogonal(rng: &mut Rng, m: usize) -> Matrix {
    let qr = normal_matrix(rng, m, m).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// A random orthogonal complex structure `O J0 O^T`.
pub fn complex_structure(rng: &mut Rng, m: usize) -> ComplexStructure {
    let o = orthogonal(rng, m);
    let j0 = standard_complex_structure(m);
    ComplexStructure::new_unchecked(&o * j0.matrix() * o.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut r = rng(3);
        let o = orthogonal(&mut r, 6);
        assert!((o.transpose() * &o - Matrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = unit_vector(&mut rng(9), 5);
        let b = unit_vector(&mut rng(9), 5);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }
}
