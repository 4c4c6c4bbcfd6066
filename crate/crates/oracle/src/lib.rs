//! Independent reference implementations for the test suites.
//!
//! Nothing here shares code or data structures with the production solver:
//! the guided-mode oracle discretizes the wave equation by second-order
//! finite differences (the solver uses a spectral sine basis), the slab
//! oracle solves the textbook transcendental dispersion relation by
//! bisection, and the series oracle produces binomial Taylor coefficients in
//! closed form.

use num_complex::Complex64;

/// Eigenvalue count of the real symmetric tridiagonal (diag `d`, constant
/// off-diagonal `e`) below `x`, by Sturm/LDLᵀ sign counting.
fn sturm_count(d: &[f64], e: f64, x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let e2 = e * e;
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        if q.abs() < tiny {
            q = if q < 0.0 { -tiny } else { tiny };
        }
        q = (d[i] - x) - e2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Guided propagation constants of −½ψ'' + V(x)ψ = Eψ with V = −½k²n(x)²,
/// from a second-order finite-difference discretization on a hard-wall box,
/// for a real index profile. Returns the β = √(−2E) with effective index in
/// (n_lo, n_hi), ascending in β.
pub fn fd_guided_betas_real(
    n_of_x: &dyn Fn(f64) -> f64,
    vacuum_wavelength: f64,
    box_length: f64,
    n_points: usize,
    n_window: (f64, f64),
) -> Vec<f64> {
    let k = 2.0 * std::f64::consts::PI / vacuum_wavelength;
    let h = box_length / (n_points + 1) as f64;
    let kin = 0.5 / (h * h);
    let d: Vec<f64> = (1..=n_points)
        .map(|i| {
            let x = -0.5 * box_length + h * i as f64;
            let n = n_of_x(x);
            2.0 * kin - 0.5 * k * k * n * n
        })
        .collect();
    let e = -kin;

    let (n_lo, n_hi) = n_window;
    let e_lo = -0.5 * k * k * n_hi * n_hi;
    let e_hi = -0.5 * k * k * n_lo * n_lo;
    let k_lo = sturm_count(&d, e, e_lo);
    let k_hi = sturm_count(&d, e, e_hi);

    let mut betas = Vec::new();
    for idx in k_lo..k_hi {
        let (mut lo, mut hi) = (e_lo, e_hi);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(&d, e, mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let energy = 0.5 * (lo + hi);
        betas.push((-2.0 * energy).sqrt());
    }
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    betas
}

/// Solve the complex symmetric tridiagonal system (diag `d` minus shift,
/// constant off-diagonal `e`) by LU with partial pivoting.
fn tridiag_solve(d: &[Complex64], e: f64, shift: Complex64, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = d.len();
    let mut a = vec![Complex64::new(0.0, 0.0); n]; // sub
    let mut b: Vec<Complex64> = d.iter().map(|&x| x - shift).collect(); // diag
    let mut c = vec![Complex64::new(e, 0.0); n]; // super
    let mut c2 = vec![Complex64::new(0.0, 0.0); n]; // second super (pivot fill-in)
    for i in 1..n {
        a[i] = Complex64::new(e, 0.0);
    }
    let mut x: Vec<Complex64> = rhs.to_vec();
    for i in 0..n - 1 {
        if a[i + 1].norm() > b[i].norm() {
            // swap rows i and i+1
            std::mem::swap(&mut b[i], &mut a[i + 1]);
            let t = c[i];
            c[i] = b[i + 1];
            b[i + 1] = t;
            if i + 2 < n {
                c2[i] = c[i + 1];
                c[i + 1] = Complex64::new(0.0, 0.0);
            }
            x.swap(i, i + 1);
        }
        if b[i].norm() == 0.0 {
            b[i] = Complex64::new(f64::EPSILON, 0.0);
        }
        let m = a[i + 1] / b[i];
        b[i + 1] -= m * c[i];
        if i + 2 < n {
            c[i + 1] -= m * c2[i];
        }
        x[i + 1] -= m * x[i];
        a[i + 1] = Complex64::new(0.0, 0.0);
    }
    // back substitution with two superdiagonals
    for i in (0..n).rev() {
        let mut acc = x[i];
        if i + 1 < n {
            acc -= c[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= c2[i] * x[i + 2];
        }
        let den = if b[i].norm() == 0.0 {
            Complex64::new(f64::EPSILON, 0.0)
        } else {
            b[i]
        };
        x[i] = acc / den;
    }
    x
}

/// Guided propagation constants for a complex index profile: finite
/// differences plus Rayleigh-quotient iteration (bilinear quotient, as
/// appropriate for a complex-symmetric operator), one per seed energy.
pub fn fd_guided_betas_complex(
    n_of_x: &dyn Fn(f64) -> Complex64,
    vacuum_wavelength: f64,
    box_length: f64,
    n_points: usize,
    seed_betas: &[f64],
) -> Vec<Complex64> {
    let k = 2.0 * std::f64::consts::PI / vacuum_wavelength;
    let h = box_length / (n_points + 1) as f64;
    let kin = 0.5 / (h * h);
    let d: Vec<Complex64> = (1..=n_points)
        .map(|i| {
            let x = -0.5 * box_length + h * i as f64;
            let n = n_of_x(x);
            -0.5 * k * k * n * n + 2.0 * kin
        })
        .collect();
    let e = -kin;
    let scale = d.iter().map(|z| z.norm()).fold(0.0, f64::max) + 2.0 * kin;

    let matvec = |y: &[Complex64]| -> Vec<Complex64> {
        let n = y.len();
        (0..n)
            .map(|i| {
                let mut acc = d[i] * y[i];
                if i > 0 {
                    acc += e * y[i - 1];
                }
                if i + 1 < n {
                    acc += e * y[i + 1];
                }
                acc
            })
            .collect()
    };

    seed_betas
        .iter()
        .map(|&beta0| {
            let mut mu = Complex64::new(-0.5 * beta0 * beta0, 0.0);
            let mut y: Vec<Complex64> = (0..n_points)
                .map(|i| Complex64::new(1.0 + (i as f64 * 0.7).sin() * 0.1, 0.0))
                .collect();
            for _ in 0..60 {
                let z = tridiag_solve(&d, e, mu, &y);
                let zn = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
                y = z.iter().map(|w| w / zn).collect();
                let ty = matvec(&y);
                let num: Complex64 = y.iter().zip(&ty).map(|(a, b)| a * b).sum();
                let den: Complex64 = y.iter().map(|a| a * a).sum();
                let mu_new = num / den;
                let resid: f64 = ty
                    .iter()
                    .zip(&y)
                    .map(|(t, v)| (t - mu_new * v).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                mu = mu_new;
                if resid < 1e-13 * scale {
                    break;
                }
            }
            let b = (-2.0 * mu).sqrt();
            if b.re < 0.0 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// Fundamental TE mode of the isolated symmetric slab (core index `n1`,
/// half-width `a`, background `n0`): solves u·tan(u) = √(V² − u²) with
/// V = k·a·√(n1² − n0²) by bisection and returns β.
pub fn slab_fundamental_beta(n0: f64, n1: f64, a: f64, vacuum_wavelength: f64) -> f64 {
    let k = 2.0 * std::f64::consts::PI / vacuum_wavelength;
    let v = k * a * (n1 * n1 - n0 * n0).sqrt();
    let f = |u: f64| u * u.tan() - (v * v - u * u).sqrt();
    let mut lo = 0.0;
    let mut hi = v.min(std::f64::consts::FRAC_PI_2 - 1e-12);
    debug_assert!(f(lo + 1e-15) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    (k * k * n1 * n1 - (u / a) * (u / a)).sqrt()
}

/// Taylor coefficients E⁽ⁿ⁾ of the 2×2 ground-state branch −√(k² + λ²) in
/// powers of λ, through order `n_max` inclusive. Odd orders are zero;
/// E⁽²ⁱ⁾ = −k·binom(½, i)·k^(−2i).
pub fn sqrt_taylor_coeffs(k: f64, n_max: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; n_max + 1];
    let mut b = 1.0; // binom(1/2, i)
    for i in 0..=(n_max / 2) {
        coeffs[2 * i] = -k * b * k.powi(-2 * (i as i32));
        b *= (0.5 - i as f64) / (i as f64 + 1.0);
    }
    coeffs
}

/// Closed-form eigenvalues ±√(k² − γ²) of [[iγ, k], [k, −iγ]], sorted by
/// (Re, Im).
pub fn pt2_eigenvalues(gamma: f64, k: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(k * k - gamma * gamma, 0.0).sqrt();
    let (a, b) = (-disc, disc);
    if (a.re, a.im) <= (b.re, b.im) {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_on_known_matrix() {
        // tridiag(-1, 2, -1) of size 4: eigenvalues 2 - 2cos(m pi / 5)
        let d = vec![2.0; 4];
        let eigs: Vec<f64> = (1..=4)
            .map(|m| 2.0 - 2.0 * (m as f64 * std::f64::consts::PI / 5.0).cos())
            .collect();
        for (i, ev) in eigs.iter().enumerate() {
            assert_eq!(sturm_count(&d, -1.0, ev - 1e-9), i);
            assert_eq!(sturm_count(&d, -1.0, ev + 1e-9), i + 1);
        }
    }

    #[test]
    fn tridiag_solver_roundtrip() {
        let n = 50;
        let d: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(3.0 + (i as f64).sin(), 0.3 * (i as f64).cos()))
            .collect();
        let e = -1.2;
        let shift = Complex64::new(0.7, 0.1);
        let x_true: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.3).cos(), (i as f64 * 0.11).sin()))
            .collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            rhs[i] = (d[i] - shift) * x_true[i];
            if i > 0 {
                rhs[i] += e * x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] += e * x_true[i + 1];
            }
        }
        let x = tridiag_solve(&d, e, shift, &rhs);
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn sqrt_coeffs_first_terms() {
        let c = sqrt_taylor_coeffs(1.0, 8);
        assert_eq!(c[0], -1.0);
        assert_eq!(c[1], 0.0);
        assert!((c[2] - (-0.5)).abs() < 1e-15);
        assert!((c[4] - 0.125).abs() < 1e-15);
        assert!((c[6] - (-1.0 / 16.0)).abs() < 1e-15);
        assert!((c[8] - 5.0 / 128.0).abs() < 1e-15);
    }
}
