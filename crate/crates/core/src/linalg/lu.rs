//! Dense complex LU with partial pivoting, used by the shift-invert path.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorization P·A = L·U of a dense complex matrix.
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
}

impl LuFactors {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu: Vec<Complex64> = (0..n).flat_map(|i| a.row(i).to_vec()).collect();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // pivot on the cheap |re| + |im| magnitude
            let mut p = k;
            let mut best = lu[k * n + k].l1_norm();
            for i in k + 1..n {
                let m = lu[i * n + k].l1_norm();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    let (head, tail) = lu.split_at_mut(i * n);
                    let krow = &head[k * n..k * n + n];
                    let irow = &mut tail[..n];
                    for j in k + 1..n {
                        irow[j] -= factor * krow[j];
                    }
                }
            }
        }
        Ok(Self { n, lu, piv })
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x: Vec<Complex64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_known_system() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            vec![c(1.0, -1.0), c(3.0, 0.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0), c(1.0, 2.0)],
        ])
        .unwrap();
        let x_true = vec![c(1.0, 2.0), c(-0.5, 0.25), c(2.0, -1.0)];
        let b = a.matvec(&x_true);
        let f = LuFactors::new(&a).unwrap();
        let x = f.solve(&b);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).norm() < 1e-13);
        }
    }

    #[test]
    fn singular_detected() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(LuFactors::new(&a), Err(Error::Singular { .. })));
    }
}
