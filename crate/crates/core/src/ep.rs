//! Gain/loss sweeps and exceptional-point location.
//!
//! Below the critical contrast the two guided propagation constants are real
//! and approach each other as Δα grows; at the branch point they coalesce
//! and beyond it they form a complex-conjugate pair. The critical value is
//! located by bisection on the reality of the guided pair — a predicate the
//! solver computes robustly — and the local square-root law
//! E = E_bp ± D √(|λ_bp|² − |λ|²) is fitted to the splitting just below it.
//!
//! The perturbation strength is normalized as λ ≡ κ (the imaginary index
//! amplitude), so the reported |λ_bp| equals the convention-independent κ_c
//! and is directly comparable with the radius of convergence estimated by
//! the perturbation engine.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{
    assemble_hamiltonian, solve_modes_targeted, track_modes, ModeSet, SineBasis,
};
use crate::waveguide::{build_index_profile, potential_from_index, CouplerGeometry};

/// One sweep sample: tracked guided pair at a given Δα.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub delta_alpha: f64,
    /// Propagation constant of the branch labeled even at the sweep start.
    pub beta_even: Complex64,
    /// Propagation constant of the branch labeled odd at the sweep start.
    pub beta_odd: Complex64,
    /// Δβ = β_even − β_odd (positive real below the critical point).
    pub splitting: Complex64,
    pub energy_even: Complex64,
    pub energy_odd: Complex64,
    /// min over the pair of |(ψ|ψ)|/⟨ψ|ψ⟩; → 0 at the exceptional point.
    pub self_orthogonality: f64,
}

/// Result of sweeping Δα over a geometry.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub geometry: CouplerGeometry,
    pub basis: SineBasis,
}

/// Square-root-law fit of the splitting below the critical point.
#[derive(Clone, Copy, Debug)]
pub struct SquareRootFit {
    /// Prefactor D of ½(E_odd − E_even) = D·√(κ_c² − κ²).
    pub amplitude_d: f64,
    /// RMS residual of the fixed-exponent fit.
    pub residual: f64,
    /// Diagnostic free exponent; ½ for a clean branch point.
    pub exponent: f64,
    pub n_points: usize,
}

/// Critical-point report.
#[derive(Clone, Copy, Debug)]
pub struct EpReport {
    /// Critical gain/loss contrast, 1/cm.
    pub delta_alpha_c: f64,
    /// Critical imaginary index amplitude (convention independent).
    pub kappa_c: f64,
    /// Coalesced energy, sampled just above the critical point.
    pub e_bp: Complex64,
    /// Minimal self-orthogonality ratio observed near the critical point.
    pub self_orthogonality_min: f64,
    pub fit: Option<SquareRootFit>,
}

impl EpReport {
    /// |λ_bp| in the λ ≡ κ normalization.
    pub fn lambda_bp_abs(&self) -> f64 {
        self.kappa_c
    }
}

fn solve_at(g: &CouplerGeometry, basis: &SineBasis, delta_alpha: f64) -> Result<ModeSet> {
    let geom = CouplerGeometry {
        delta_alpha,
        ..*g
    };
    let profile = build_index_profile(&geom)?;
    let potential = potential_from_index(&profile);
    let h = assemble_hamiltonian(&potential, basis)?;
    solve_modes_targeted(&h, basis, &geom)
}

fn attach_alpha<T>(r: Result<T>, delta_alpha: f64) -> Result<T> {
    r.map_err(|e| Error::SweepPoint {
        delta_alpha,
        source: Box::new(e),
    })
}

/// Solve the guided pair at each Δα, tracking mode identity across points.
pub fn sweep_alpha(
    g: &CouplerGeometry,
    alphas: &[f64],
    basis: &SineBasis,
) -> Result<SweepResult> {
    if alphas.is_empty() {
        return Err(Error::NonIncreasingSweep { index: 0 });
    }
    for (i, w) in alphas.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::NonIncreasingSweep { index: i + 1 });
        }
    }
    let sets: Vec<Result<ModeSet>> = alphas
        .par_iter()
        .map(|&a| solve_at(g, basis, a))
        .collect();

    let mut points = Vec::with_capacity(alphas.len());
    let mut prev: Option<ModeSet> = None;
    for (&alpha, set) in alphas.iter().zip(sets) {
        let set = attach_alpha(set, alpha)?;
        if set.modes.len() != 2 {
            return attach_alpha(
                Err(Error::ModeCount {
                    found: set.modes.len(),
                }),
                alpha,
            );
        }
        let tracked = match &prev {
            Some(p) => track_modes(p, &set),
            None => set,
        };
        let me = &tracked.modes[0];
        let mo = &tracked.modes[1];
        points.push(SweepPoint {
            delta_alpha: alpha,
            beta_even: me.beta,
            beta_odd: mo.beta,
            splitting: me.beta - mo.beta,
            energy_even: me.energy,
            energy_odd: mo.energy,
            self_orthogonality: me.self_orthogonality().min(mo.self_orthogonality()),
        });
        prev = Some(tracked);
    }
    Ok(SweepResult {
        points,
        geometry: *g,
        basis: *basis,
    })
}

/// Bisection on a boolean predicate that flips exactly once in the bracket.
/// The predicate must hold at `lo` and fail at `hi`; otherwise the bracket is
/// scanned and reported.
pub fn bisect_critical(
    lo: f64,
    hi: f64,
    tol: f64,
    predicate: impl Fn(f64) -> Result<bool>,
) -> Result<f64> {
    if !(hi > lo) || !(tol > 0.0) {
        return Err(Error::BadBracket {
            reason: format!("bracket [{lo}, {hi}] with tol {tol} is malformed"),
            samples: vec![],
        });
    }
    let p_lo = predicate(lo)?;
    let p_hi = predicate(hi)?;
    if !p_lo || p_hi {
        let mut samples = Vec::new();
        for i in 0..9 {
            let x = lo + (hi - lo) * (i as f64) / 8.0;
            samples.push((x, predicate(x)?));
        }
        let reason = if !p_lo && p_hi {
            "predicate inverted in bracket (complex at lo, real at hi)"
        } else if !p_lo {
            "no sign change: predicate already false at lo"
        } else {
            "no sign change: predicate still true at hi"
        };
        return Err(Error::BadBracket {
            reason: reason.to_string(),
            samples,
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        if predicate(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Is the guided pair real at this Δα?
fn pair_is_real(g: &CouplerGeometry, basis: &SineBasis, alpha: f64) -> Result<bool> {
    let set = attach_alpha(solve_at(g, basis, alpha), alpha)?;
    if set.modes.len() != 2 {
        return attach_alpha(
            Err(Error::ModeCount {
                found: set.modes.len(),
            }),
            alpha,
        );
    }
    Ok(set.modes.iter().all(|m| m.is_beta_real()))
}

/// Locate the critical Δα by bisection on the reality of the guided pair.
///
/// `bracket` is (lo, hi) in 1/cm with a real pair at lo and a complex pair at
/// hi; `tol` is the bracket width at which bisection stops (1/cm).
pub fn find_critical_alpha(
    g: &CouplerGeometry,
    bracket: (f64, f64),
    tol: f64,
    basis: &SineBasis,
) -> Result<EpReport> {
    let alpha_c = bisect_critical(bracket.0, bracket.1, tol, |a| pair_is_real(g, basis, a))?;
    let kappa_c = kappa_of(g, alpha_c);

    // self-orthogonality sampled within 0.1% below the critical point
    let near = attach_alpha(solve_at(g, basis, alpha_c * (1.0 - 1e-3)), alpha_c)?;
    let self_orthogonality_min = near
        .modes
        .iter()
        .map(|m| m.self_orthogonality())
        .fold(f64::INFINITY, f64::min);

    // coalesced energy from just above, where the pair is conjugate and the
    // mean is its common real part
    let above = attach_alpha(solve_at(g, basis, alpha_c * (1.0 + 1e-3)), alpha_c)?;
    let e_bp = above
        .modes
        .iter()
        .map(|m| m.energy)
        .sum::<Complex64>()
        / above.modes.len() as f64;

    Ok(EpReport {
        delta_alpha_c: alpha_c,
        kappa_c,
        e_bp,
        self_orthogonality_min,
        fit: None,
    })
}

fn kappa_of(g: &CouplerGeometry, alpha: f64) -> f64 {
    crate::waveguide::kappa_from_delta_alpha(alpha, g.vacuum_wavelength)
}

/// Fit the square-root law to sweep points just below the critical value.
///
/// The fixed-exponent fit uses points within 10% below Δα_c and returns the
/// prefactor D of ½(E_odd − E_even) = D √(κ_c² − κ²); the free exponent p is
/// fitted on points with (1 − Δα/Δα_c) ∈ [1e-3, 1e-1] as a diagnostic and
/// should land at ½.
pub fn fit_square_root(sweep: &SweepResult, ep: &EpReport) -> Result<EpReport> {
    let g = &sweep.geometry;
    let kc2 = ep.kappa_c * ep.kappa_c;

    let mut xs = Vec::new(); // kappa_c^2 - kappa^2
    let mut ys = Vec::new(); // half splitting in energy
    for p in &sweep.points {
        if p.delta_alpha >= ep.delta_alpha_c || p.delta_alpha < 0.9 * ep.delta_alpha_c {
            continue;
        }
        let kap = kappa_of(g, p.delta_alpha);
        let x = kc2 - kap * kap;
        if x <= 0.0 {
            continue;
        }
        xs.push(x);
        ys.push(0.5 * (p.energy_odd.re - p.energy_even.re));
    }
    if xs.len() < 5 {
        return Err(Error::InsufficientPoints {
            have: xs.len(),
            need: 5,
        });
    }

    // least squares through the origin: y = D sqrt(x)
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| y * x.sqrt()).sum();
    let den: f64 = xs.iter().sum();
    if den == 0.0 {
        return Err(Error::SingularFit {
            reason: "all fit abscissae vanish".into(),
        });
    }
    let d = num / den;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - d * x.sqrt();
            r * r
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();

    // free-exponent diagnostic on the asymptotic window
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for p in &sweep.points {
        let t = 1.0 - p.delta_alpha / ep.delta_alpha_c;
        if !(1e-3..=1e-1).contains(&t) {
            continue;
        }
        let kap = kappa_of(g, p.delta_alpha);
        let x = kc2 - kap * kap;
        let y = 0.5 * (p.energy_odd.re - p.energy_even.re);
        if x > 0.0 && y > 0.0 {
            lx.push(x.ln());
            ly.push(y.ln());
        }
    }
    if lx.len() < 2 {
        return Err(Error::InsufficientPoints {
            have: lx.len(),
            need: 2,
        });
    }
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::SingularFit {
            reason: "degenerate abscissae in exponent fit".into(),
        });
    }
    let exponent = sxy / sxx;

    Ok(EpReport {
        fit: Some(SquareRootFit {
            amplitude_d: d,
            residual,
            exponent,
            n_points: xs.len(),
        }),
        ..*ep
    })
}

/// CSV table of a sweep (full double precision, round-trip exact).
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::from(
        "delta_alpha,re_beta1,im_beta1,re_beta2,im_beta2,self_orthogonality\n",
    );
    for p in &sweep.points {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e}\n",
            p.delta_alpha,
            p.beta_even.re,
            p.beta_even.im,
            p.beta_odd.re,
            p.beta_odd.im,
            p.self_orthogonality
        ));
    }
    out
}

/// Structured text rendering of an [`EpReport`].
pub fn render_report(ep: &EpReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("delta_alpha_c_per_cm = {:e}\n", ep.delta_alpha_c));
    out.push_str(&format!("kappa_c = {:e}\n", ep.kappa_c));
    out.push_str(&format!("lambda_bp_abs = {:e}\n", ep.lambda_bp_abs()));
    out.push_str(&format!("e_bp_re = {:e}\n", ep.e_bp.re));
    out.push_str(&format!("e_bp_im = {:e}\n", ep.e_bp.im));
    out.push_str(&format!(
        "self_orthogonality_min = {:e}\n",
        ep.self_orthogonality_min
    ));
    if let Some(fit) = &ep.fit {
        out.push_str(&format!("d_fit = {:e}\n", fit.amplitude_d));
        out.push_str(&format!("fit_residual = {:e}\n", fit.residual));
        out.push_str(&format!("p_exponent = {:e}\n", fit.exponent));
        out.push_str(&format!("fit_points = {}\n", fit.n_points));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, ComplexMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt2(gamma: f64, k: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(0.0, gamma), c(k, 0.0)],
            vec![c(k, 0.0), c(0.0, -gamma)],
        ])
        .unwrap()
    }

    fn pt2_real(gamma: f64) -> Result<bool> {
        let vals = eigenvalues(&pt2(gamma, 1.0))?;
        Ok(vals.iter().all(|e| e.im.abs() <= 1e-12 * e.norm().max(1.0)))
    }

    #[test]
    fn two_by_two_splittings() {
        for (gamma, expect) in [(0.0, 2.0), (0.5, 1.7320508075688772), (0.99, 0.28213471959331896)]
        {
            let vals = eigenvalues(&pt2(gamma, 1.0)).unwrap();
            let split = (vals[1] - vals[0]).norm();
            assert!(
                (split - expect).abs() < 1e-10,
                "gamma={gamma}: {split} vs {expect}"
            );
        }
    }

    #[test]
    fn two_by_two_bisection_finds_unit_critical_point() {
        let gc = bisect_critical(0.5, 1.5, 1e-10, pt2_real).unwrap();
        assert!((gc - 1.0).abs() <= 1e-10, "gamma_c = {gc}");
    }

    #[test]
    fn bisection_bracket_independence() {
        let a = bisect_critical(0.5, 1.5, 1e-9, pt2_real).unwrap();
        let b = bisect_critical(0.8, 1.9, 1e-9, pt2_real).unwrap();
        assert!((a - b).abs() <= 2e-9);
    }

    #[test]
    fn bad_bracket_lists_samples() {
        match bisect_critical(0.1, 0.5, 1e-6, pt2_real) {
            Err(Error::BadBracket { samples, .. }) => {
                assert_eq!(samples.len(), 9);
                assert!(samples.iter().all(|&(_, r)| r));
            }
            other => panic!("expected BadBracket, got {other:?}"),
        }
    }

    #[test]
    fn fit_recovers_exact_square_root_model() {
        // synthetic sweep straight from the closed form E± = ±sqrt(k²-γ²)
        let g = CouplerGeometry::default();
        let basis = SineBasis::new(30.0, 16).unwrap();
        let kap_c = kappa_of(&g, 10.0);
        let mut points = Vec::new();
        for i in 0..12 {
            let alpha = 10.0 * (0.90 + 0.0995 * (i as f64) / 11.0);
            let kap = kappa_of(&g, alpha);
            let s = (kap_c * kap_c - kap * kap).sqrt();
            points.push(SweepPoint {
                delta_alpha: alpha,
                beta_even: c(1.0, 0.0),
                beta_odd: c(1.0, 0.0),
                splitting: c(0.0, 0.0),
                energy_even: c(-s, 0.0),
                energy_odd: c(s, 0.0),
                self_orthogonality: 1.0,
            });
        }
        let sweep = SweepResult {
            points,
            geometry: g,
            basis,
        };
        let ep = EpReport {
            delta_alpha_c: 10.0,
            kappa_c: kap_c,
            e_bp: c(0.0, 0.0),
            self_orthogonality_min: 0.0,
            fit: None,
        };
        let fitted = fit_square_root(&sweep, &ep).unwrap().fit.unwrap();
        assert!((fitted.amplitude_d - 1.0).abs() < 1e-8, "D = {}", fitted.amplitude_d);
        assert!((fitted.exponent - 0.5).abs() < 1e-8, "p = {}", fitted.exponent);
        assert!(fitted.residual < 1e-12);
    }

    #[test]
    fn fit_tolerates_small_noise() {
        let g = CouplerGeometry::default();
        let basis = SineBasis::new(30.0, 16).unwrap();
        let kap_c = kappa_of(&g, 10.0);
        let mut points = Vec::new();
        let mut state = 0x5deece66du64;
        for i in 0..12 {
            let alpha = 10.0 * (0.901 + 0.098 * (i as f64) / 11.0);
            let kap = kappa_of(&g, alpha);
            state = state.wrapping_mul(6364136223846793005).wrapping_add(11);
            let noise = 1e-9 * (((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5);
            let s = (kap_c * kap_c - kap * kap).sqrt() + noise;
            points.push(SweepPoint {
                delta_alpha: alpha,
                beta_even: c(1.0, 0.0),
                beta_odd: c(1.0, 0.0),
                splitting: c(0.0, 0.0),
                energy_even: c(-s, 0.0),
                energy_odd: c(s, 0.0),
                self_orthogonality: 1.0,
            });
        }
        let sweep = SweepResult {
            points,
            geometry: g,
            basis,
        };
        let ep = EpReport {
            delta_alpha_c: 10.0,
            kappa_c: kap_c,
            e_bp: c(0.0, 0.0),
            self_orthogonality_min: 0.0,
            fit: None,
        };
        let fitted = fit_square_root(&sweep, &ep).unwrap().fit.unwrap();
        assert!((fitted.amplitude_d - 1.0).abs() < 1e-6, "D = {}", fitted.amplitude_d);
    }

    #[test]
    fn insufficient_fit_points_rejected() {
        let g = CouplerGeometry::default();
        let basis = SineBasis::new(30.0, 16).unwrap();
        let sweep = SweepResult {
            points: vec![],
            geometry: g,
            basis,
        };
        let ep = EpReport {
            delta_alpha_c: 10.0,
            kappa_c: kappa_of(&g, 10.0),
            e_bp: c(0.0, 0.0),
            self_orthogonality_min: 0.0,
            fit: None,
        };
        assert!(matches!(
            fit_square_root(&sweep, &ep),
            Err(Error::InsufficientPoints { .. })
        ));
    }

    #[test]
    fn non_increasing_sweep_rejected() {
        let g = CouplerGeometry::default();
        let basis = SineBasis::new(30.0, 16).unwrap();
        assert!(matches!(
            sweep_alpha(&g, &[0.0, 0.0], &basis),
            Err(Error::NonIncreasingSweep { index: 1 })
        ));
        assert!(matches!(
            sweep_alpha(&g, &[], &basis),
            Err(Error::NonIncreasingSweep { .. })
        ));
    }
}
