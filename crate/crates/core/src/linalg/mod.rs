//! Dense complex linear algebra: the complex-symmetric eigensolver and the
//! c-product (bilinear, conjugation-free) inner-product conventions used by
//! every other module.
//!
//! Complex-symmetric operators (M = Mᵀ, not Mᴴ) are diagonalized by a general
//! dense path — Householder reduction to Hessenberg form followed by explicit
//! single-shift QR — and their eigenvectors are orthonormal under the
//! c-product rather than the Hermitian inner product. The self-c-product of an
//! eigenvector vanishes exactly at an exceptional point, which is why
//! [`c_normalize`] reports near-self-orthogonality as a dedicated error
//! instead of dividing through by it.

use num_complex::Complex64;

use crate::error::{Error, Result};

mod eig;
mod lu;
mod targeted;

pub use eig::{eig_complex_symmetric, eigenvalues};
pub use lu::LuFactors;
pub use targeted::{shift_invert_eigs, TargetedEig};

/// Self-orthogonality threshold: |(v|v)| / ⟨v|v⟩ below this is treated as
/// "at or near an exceptional point".
pub const TAU_EP: f64 = 1e-10;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row slices; errors unless the layout is square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::NonSquare {
                    rows: dim,
                    cols: r.len(),
                });
            }
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Mutable views of two distinct rows.
    pub(crate) fn two_rows_mut(&mut self, i: usize, j: usize) -> (&mut [Complex64], &mut [Complex64]) {
        assert!(i != j);
        let n = self.dim;
        if i < j {
            let (a, b) = self.data.split_at_mut(j * n);
            (&mut a[i * n..i * n + n], &mut b[..n])
        } else {
            let (a, b) = self.data.split_at_mut(i * n);
            let (rj, ri) = (&mut a[j * n..j * n + n], &mut b[..n]);
            (ri, rj)
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |M_ij − M_ji|; zero for an exactly symmetric matrix.
    pub fn symmetry_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                d = d.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        d
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// How the eigenvectors of an [`EigenSolution`] are normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// (v|v) = 1 under the bilinear c-product.
    CProduct,
    /// ⟨v|v⟩ = 1 under the conventional Hermitian product (fallback when a
    /// vector is self-orthogonal, i.e. at/near an exceptional point).
    Conventional,
}

/// Full eigendecomposition: eigenvalues sorted by (Re, Im) ascending,
/// eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub eigenvalues: Vec<Complex64>,
    /// Column k is the eigenvector of `eigenvalues[k]` in basis coefficients.
    pub eigenvectors: ComplexMatrix,
    pub normalization: Normalization,
}

impl EigenSolution {
    /// max_k ‖M v_k − λ_k v_k‖₂ / (‖M‖_F · ‖v_k‖₂)
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        let scale = m.frobenius_norm();
        let mut worst = 0.0f64;
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(k);
            let mv = m.matvec(&v);
            let num: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(num / (scale * vn));
        }
        worst
    }
}

/// Bilinear c-product (u|v) = Σ_k u_k v_k, no conjugation.
pub fn c_product(u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Conventional Hermitian inner product ⟨u|v⟩ = Σ_k u_k* v_k.
pub fn herm_product(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// |(v|v)| / ⟨v|v⟩ — the self-orthogonality ratio, 1 for a real vector and
/// 0 exactly at an exceptional point.
pub fn self_orthogonality(v: &[Complex64]) -> f64 {
    let q: Complex64 = v.iter().map(|z| z * z).sum();
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if n == 0.0 {
        0.0
    } else {
        q.norm() / n
    }
}

/// Rescale `v` so that (w|w) = 1. Errors with [`Error::SelfOrthogonal`] when
/// |(v|v)| falls below `TAU_EP` relative to the conventional norm, which is
/// the signature of an exceptional point.
pub fn c_normalize(v: &[Complex64]) -> Result<Vec<Complex64>> {
    c_normalize_with(v, TAU_EP)
}

/// [`c_normalize`] with an explicit self-orthogonality threshold.
pub fn c_normalize_with(v: &[Complex64], threshold: f64) -> Result<Vec<Complex64>> {
    let ratio = self_orthogonality(v);
    if ratio < threshold {
        return Err(Error::SelfOrthogonal { ratio, threshold });
    }
    let q: Complex64 = v.iter().map(|z| z * z).sum();
    let root = q.sqrt();
    Ok(v.iter().map(|z| z / root).collect())
}

/// Unit conventional norm.
pub fn unit_normalize(v: &[Complex64]) -> Vec<Complex64> {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn c_product_examples() {
        let one = c_product(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(one, c(1.0, 0.0));
        // (1, i) is self-orthogonal: 1 + i² = 0
        let zero = c_product(&[c(1.0, 0.0), c(0.0, 1.0)], &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(zero, c(0.0, 0.0));
        let v = c_product(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(3.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn c_product_length_mismatch() {
        assert!(matches!(
            c_product(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn c_normalize_examples() {
        let w = c_normalize(&[c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(w, vec![c(1.0, 0.0), c(0.0, 0.0)]);

        assert!(matches!(
            c_normalize(&[c(1.0, 0.0), c(0.0, 1.0)]),
            Err(Error::SelfOrthogonal { .. })
        ));

        let w = c_normalize(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((w[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((w[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn c_normalized_self_product_is_one() {
        let v = vec![c(0.3, -1.2), c(2.0, 0.7), c(-0.4, 0.1)];
        let w = c_normalize(&v).unwrap();
        let q = c_product(&w, &w).unwrap();
        assert!((q - c(1.0, 0.0)).norm() < 1e-12);
        // parallel to v: w × v cross-ratios all equal
        let ratio = w[0] / v[0];
        for k in 1..3 {
            assert!((w[k] / v[k] - ratio).norm() < 1e-12);
        }
    }
}
