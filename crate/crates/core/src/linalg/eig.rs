//! General dense complex eigensolver: Householder reduction to upper
//! Hessenberg form, explicit single-shift QR with Wilkinson shifts, and
//! eigenvectors by back-substitution on the triangular Schur factor.
//!
//! Works for any square complex matrix; the rest of the crate feeds it
//! complex-symmetric Hamiltonians, whose eigenvectors it then c-normalizes
//! (falling back to conventional normalization when a vector is
//! self-orthogonal, i.e. at an exceptional point).

use num_complex::Complex64;

use super::{c_normalize, unit_normalize, ComplexMatrix, EigenSolution, Normalization};
use crate::error::{Error, Result};

const MAX_ITERS_PER_EIGENVALUE: usize = 40;

/// Complex Givens rotation: real c and complex s with c² + |s|² = 1 such that
/// [c s; -s̄ c]·[f; g] = [r; 0].
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if f == Complex64::new(0.0, 0.0) {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let d = (fa * fa + g.norm_sqr()).sqrt();
    let c = fa / d;
    let s = (f / fa) * g.conj() / d;
    (c, s)
}

/// Householder reduction to upper Hessenberg form, in place. When `q` is
/// given it accumulates the orthogonal factor so that A_in = Q H Qᴴ.
fn hessenberg(h: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) {
    let n = h.dim();
    if let Some(q) = q.as_deref_mut() {
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] = Complex64::new((i == j) as u8 as f64, 0.0);
            }
        }
    }
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        // Householder vector for column k below the diagonal
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += h[(i, k)].norm_sqr();
        }
        if norm2 == 0.0 {
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = h[(k + 1, k)];
        let phase = if x0 == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut vnorm2 = 0.0;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        for i in k + 1..n {
            vnorm2 += v[i].norm_sqr();
        }
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // left: H := (I - τ v vᴴ) H, rows k+1.., columns k..
        for j in k..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                acc += v[i].conj() * h[(i, j)];
            }
            w[j] = acc * tau;
        }
        for i in k + 1..n {
            let vi = v[i];
            let row = h.row_mut(i);
            for j in k..n {
                row[j] -= vi * w[j];
            }
        }
        // right: H := H (I - τ v vᴴ), all rows, columns k+1..
        for i in 0..n {
            let row = h.row_mut(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                acc += row[j] * v[j];
            }
            let acc = acc * tau;
            for j in k + 1..n {
                row[j] -= acc * v[j].conj();
            }
        }
        if let Some(q) = q.as_deref_mut() {
            // Q := Q (I - τ v vᴴ)
            for i in 0..n {
                let row = q.row_mut(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for j in k + 1..n {
                    acc += row[j] * v[j];
                }
                let acc = acc * tau;
                for j in k + 1..n {
                    row[j] -= acc * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Wilkinson shift: the eigenvalue of the trailing 2×2 block closest to the
/// bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let t = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (t * t + bc).sqrt();
    if t.re * disc.re + t.im * disc.im < 0.0 {
        disc = -disc;
    }
    let den = t + disc;
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// Explicit single-shift QR on an upper Hessenberg matrix, reducing it to
/// upper triangular (Schur) form. `q`, when present, accumulates the
/// similarity so A_in = Q T Qᴴ holds throughout.
fn qr_to_schur(h: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) -> Result<()> {
    let n = h.dim();
    if n < 2 {
        return Ok(());
    }
    let norm = h.frobenius_norm();
    let eps = f64::EPSILON;
    let tiny = eps * norm.max(f64::MIN_POSITIVE);

    let mut hi = n - 1;
    let mut iters_here = 0usize;
    let mut total_iters = 0usize;
    let budget = MAX_ITERS_PER_EIGENVALUE * n;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    while hi > 0 {
        // deflate negligible subdiagonals
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let thresh = if s == 0.0 { tiny } else { eps * s };
            if h[(lo, lo - 1)].norm() <= thresh {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iters_here = 0;
            continue;
        }

        iters_here += 1;
        total_iters += 1;
        if total_iters > budget {
            return Err(Error::Convergence {
                converged: n - 1 - hi,
                total: n,
            });
        }
        let sigma = if iters_here % 12 == 0 {
            // exceptional shift to break symmetric stagnation
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(0.75 * (h[(hi, hi - 1)].norm() + extra), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };

        // H := H - σI on the active block
        for i in lo..=hi {
            h[(i, i)] -= sigma;
        }
        // left sweep: zero the subdiagonal
        rots.clear();
        for i in lo..hi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            rots.push((c, s));
            let (ri, rj) = h.two_rows_mut(i, i + 1);
            for col in i..n {
                let t1 = ri[col];
                let t2 = rj[col];
                ri[col] = c * t1 + s * t2;
                rj[col] = -s.conj() * t1 + c * t2;
            }
        }
        // right sweep: H := H Gᴴ, restoring Hessenberg form
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            let top = (i + 1).min(hi);
            for row in lo..=top {
                let t1 = h[(row, i)];
                let t2 = h[(row, i + 1)];
                h[(row, i)] = c * t1 + s.conj() * t2;
                h[(row, i + 1)] = -s * t1 + c * t2;
            }
            if let Some(q) = q.as_deref_mut() {
                for row in 0..n {
                    let t1 = q[(row, i)];
                    let t2 = q[(row, i + 1)];
                    q[(row, i)] = c * t1 + s.conj() * t2;
                    q[(row, i + 1)] = -s * t1 + c * t2;
                }
            }
        }
        // shift back
        for i in lo..=hi {
            h[(i, i)] += sigma;
        }
    }
    Ok(())
}

/// Eigenvalues only (no Schur vectors, no eigenvectors), sorted by
/// (Re, Im) ascending.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let mut h = m.clone();
    hessenberg(&mut h, None);
    qr_to_schur(&mut h, None)?;
    let mut vals: Vec<Complex64> = (0..m.dim()).map(|i| h[(i, i)]).collect();
    vals.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(vals)
}

/// Eigenvector of the triangular `t` for the eigenvalue at position `k`,
/// transformed back through `q`, conventionally normalized.
fn schur_eigenvector(t: &ComplexMatrix, q: &ComplexMatrix, k: usize, smin: f64) -> Vec<Complex64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::new(0.0, 0.0); k + 1];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in i + 1..=k {
            acc += t[(i, j)] * y[j];
        }
        let mut den = t[(i, i)] - lambda;
        if den.norm() < smin {
            den = Complex64::new(smin, 0.0);
        }
        y[i] = -acc / den;
        // keep back-substitution from overflowing for tightly clustered eigenvalues
        let m = y[i].norm();
        if m > 1e100 {
            for yy in y[i..=k].iter_mut() {
                *yy /= m;
            }
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (j, &yj) in y.iter().enumerate() {
        if yj == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in 0..n {
            v[i] += q[(i, j)] * yj;
        }
    }
    unit_normalize(&v)
}

/// Full eigendecomposition of a dense complex (typically complex-symmetric)
/// matrix. All eigenpairs are returned, eigenvalues sorted by real part
/// ascending (ties by imaginary part). Eigenvectors are c-normalized when
/// possible; if any vector is self-orthogonal (exceptional point) the whole
/// solution falls back to conventional normalization.
pub fn eig_complex_symmetric(m: &ComplexMatrix) -> Result<EigenSolution> {
    let n = m.dim();
    for z in (0..n).flat_map(|i| m.row(i)) {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NotPtStructured {
                reason: "non-finite matrix entry".into(),
            });
        }
    }
    let mut t = m.clone();
    let mut q = ComplexMatrix::zeros(n);
    hessenberg(&mut t, Some(&mut q));
    qr_to_schur(&mut t, Some(&mut q))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (t[(a, a)], t[(b, b)]);
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });

    let smin = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(t[(k, k)]);
        columns.push(schur_eigenvector(&t, &q, k, smin));
    }

    let c_normalized: Option<Vec<Vec<Complex64>>> = columns
        .iter()
        .map(|v| c_normalize(v).ok())
        .collect();
    let (columns, normalization) = match c_normalized {
        Some(cols) => (cols, Normalization::CProduct),
        None => (columns, Normalization::Conventional),
    };

    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (j, col) in columns.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, j)] = col[i];
        }
    }
    Ok(EigenSolution {
        eigenvalues,
        eigenvectors,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let m =
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]])
                .unwrap();
        let sol = eig_complex_symmetric(&m).unwrap();
        assert!((sol.eigenvalues[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((sol.eigenvalues[1] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((sol.eigenvectors[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((sol.eigenvectors[(1, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(sol.eigenvectors[(1, 0)].norm() < 1e-14);
        assert!(sol.max_residual(&m) < 1e-12);
    }

    // PT 2×2 family [[iγ, k],[k, -iγ]]: eigenvalues ±√(k² − γ²)
    fn pt2(gamma: f64, k: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(0.0, gamma), c(k, 0.0)],
            vec![c(k, 0.0), c(0.0, -gamma)],
        ])
        .unwrap()
    }

    #[test]
    fn pt_two_by_two_below_ep() {
        let sol = eig_complex_symmetric(&pt2(0.5, 1.0)).unwrap();
        let r = (1.0f64 - 0.25).sqrt(); // 0.8660254...
        assert!((sol.eigenvalues[0] - c(-r, 0.0)).norm() < 1e-12);
        assert!((sol.eigenvalues[1] - c(r, 0.0)).norm() < 1e-12);
        assert_eq!(sol.normalization, Normalization::CProduct);
        // c-orthonormality
        let v0 = sol.eigenvectors.column(0);
        let v1 = sol.eigenvectors.column(1);
        let off = crate::linalg::c_product(&v0, &v1).unwrap();
        assert!(off.norm() < 1e-12);
    }

    #[test]
    fn pt_two_by_two_above_ep() {
        let sol = eig_complex_symmetric(&pt2(2.0, 1.0)).unwrap();
        let r = 3.0f64.sqrt();
        assert!((sol.eigenvalues[0] - c(0.0, -r)).norm() < 1e-12);
        assert!((sol.eigenvalues[1] - c(0.0, r)).norm() < 1e-12);
    }

    #[test]
    fn at_exceptional_point_falls_back_to_conventional() {
        let sol = eig_complex_symmetric(&pt2(1.0, 1.0)).unwrap();
        assert_eq!(sol.normalization, Normalization::Conventional);
        for e in &sol.eigenvalues {
            assert!(e.norm() < 1e-7, "coalesced eigenvalues should be ~0, got {e}");
        }
    }

    #[test]
    fn non_square_rejected() {
        assert!(ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]]).is_err());
    }

    #[test]
    fn random_complex_symmetric_residuals_and_c_orthonormality() {
        // deterministic congruential fill
        let n = 40;
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let z = c(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z;
            }
        }
        let sol = eig_complex_symmetric(&m).unwrap();
        assert!(sol.max_residual(&m) < 1e-12);
        // (v_i|v_j) = δ_ij for a complex-symmetric matrix with simple spectrum
        for i in 0..n {
            let vi = sol.eigenvectors.column(i);
            for j in i..n {
                let vj = sol.eigenvectors.column(j);
                let p = crate::linalg::c_product(&vi, &vj).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (p.norm() - expect).abs() < 1e-8,
                    "c-orthonormality broken at ({i},{j}): {p}"
                );
            }
        }
    }

    #[test]
    fn eigenvalues_only_matches_full() {
        let m = pt2(0.3, 1.2);
        let vals = eigenvalues(&m).unwrap();
        let sol = eig_complex_symmetric(&m).unwrap();
        for (a, b) in vals.iter().zip(&sol.eigenvalues) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
