//! Sine-basis spectral solver for the Schrödinger-analog wave equation.
//!
//! The Hamiltonian H = −½∂²/∂x² + V(x) is assembled in the orthonormal
//! hard-wall basis φ_m(x) = √(2/L)·sin(mπ(x + L/2)/L) on [−L/2, L/2]. The
//! kinetic part is diagonal; the piecewise-constant potential contributes
//! closed-form sin·sin integrals per interval, so there is no quadrature
//! error anywhere in the assembly. Guided modes are the eigenpairs whose
//! effective index n_eff = Re(β)/k falls between the background and core
//! indices, with β = √(−2E) on the forward-propagating branch (Re β > 0).
//!
//! φ_m is even about x = 0 for odd m and odd for even m, which is what makes
//! the PT block structure visible in the assembled matrix: the real part of H
//! couples only equal-parity indices, the imaginary part only opposite-parity
//! ones.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c_normalize, eig_complex_symmetric, shift_invert_eigs, ComplexMatrix,
};
use crate::waveguide::{CouplerGeometry, PotentialProfile};

/// Relative |Im β| below which a propagation constant counts as real.
pub const BETA_REALITY_TOL: f64 = 1e-9;

/// Overlap dominance required to label a mode's parity.
const PARITY_DOMINANCE: f64 = 0.99;

/// Residual tolerance (relative to ‖H‖_F) for the shift-invert path.
const TARGETED_TOL: f64 = 1e-11;

/// Hard-wall sine basis on [−L/2, L/2].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineBasis {
    box_length: f64,
    n_funcs: usize,
}

impl Default for SineBasis {
    /// L = 90 µm, 900 functions: converged to < 1e-8 relative in the guided
    /// propagation constants under both box and basis doubling for the
    /// reference geometry.
    fn default() -> Self {
        Self {
            box_length: 90.0,
            n_funcs: 900,
        }
    }
}

/// Mode parity classification (of the real part of the transverse field).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
            Parity::None => write!(f, "none"),
        }
    }
}

impl SineBasis {
    pub fn new(box_length: f64, n_funcs: usize) -> Result<Self> {
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidBasis {
                reason: format!("box_length must be positive, got {box_length}"),
            });
        }
        if n_funcs < 16 {
            return Err(Error::InvalidBasis {
                reason: format!("n_funcs must be at least 16, got {n_funcs}"),
            });
        }
        Ok(Self {
            box_length,
            n_funcs,
        })
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn n_funcs(&self) -> usize {
        self.n_funcs
    }

    /// φ_m(x), 1-based m.
    pub fn eval(&self, m: usize, x: f64) -> f64 {
        let l = self.box_length;
        (2.0 / l).sqrt() * ((m as f64) * std::f64::consts::PI * (x + 0.5 * l) / l).sin()
    }

    /// Kinetic eigenvalue ½(mπ/L)² of φ_m.
    pub fn kinetic(&self, m: usize) -> f64 {
        let w = (m as f64) * std::f64::consts::PI / self.box_length;
        0.5 * w * w
    }

    /// Parity of φ_m about x = 0: even for odd m, odd for even m.
    pub fn parity_of_index(&self, m: usize) -> Parity {
        if m % 2 == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// ∫ φ_m φ_m' dx over [x1, x2], closed form.
    pub fn overlap_integral(&self, m: usize, mp: usize, x1: f64, x2: f64) -> f64 {
        let l = self.box_length;
        let pi = std::f64::consts::PI;
        let (u1, u2) = (x1 + 0.5 * l, x2 + 0.5 * l);
        if m == mp {
            let f = |u: f64| u / l - (2.0 * (m as f64) * pi * u / l).sin() / (2.0 * (m as f64) * pi);
            f(u2) - f(u1)
        } else {
            let d = (m as f64) - (mp as f64);
            let s = (m as f64) + (mp as f64);
            let f = |u: f64| (d * pi * u / l).sin() / (d * pi) - (s * pi * u / l).sin() / (s * pi);
            f(u2) - f(u1)
        }
    }
}

/// Assemble the sine-basis Hamiltonian H = T + V for a piecewise-constant
/// potential. The result is complex symmetric by construction.
pub fn assemble_hamiltonian(p: &PotentialProfile, b: &SineBasis) -> Result<ComplexMatrix> {
    let l = b.box_length;
    let half = 0.5 * l;
    for &(x1, x2, _) in p.intervals() {
        if !(x1 < x2) || x1 <= -half || x2 >= half {
            return Err(Error::IntervalOutsideBox {
                x1,
                x2,
                lo: -half,
                hi: half,
            });
        }
    }
    let n = b.n_funcs;
    let mut h = ComplexMatrix::zeros(n);
    let vbg = p.background();
    for i in 0..n {
        h[(i, i)] = Complex64::new(b.kinetic(i + 1), 0.0) + vbg;
    }
    for &(x1, x2, v) in p.intervals() {
        let dv = v - vbg;
        for i in 0..n {
            for j in i..n {
                let w = dv * b.overlap_integral(i + 1, j + 1, x1, x2);
                h[(i, j)] += w;
                if j != i {
                    h[(j, i)] += w;
                }
            }
        }
    }
    Ok(h)
}

/// A guided mode: forward propagation constant, energy, c-normalized field
/// coefficients, parity label, and a tracking id.
#[derive(Clone, Debug)]
pub struct Mode {
    pub beta: Complex64,
    pub energy: Complex64,
    pub field: Vec<Complex64>,
    pub parity: Parity,
    pub label: usize,
}

impl Mode {
    /// Real-β test: |Im β| < 1e-9·|Re β|.
    pub fn is_beta_real(&self) -> bool {
        self.beta.im.abs() < BETA_REALITY_TOL * self.beta.re.abs()
    }

    /// Transverse field value Σ_m c_m φ_m(x).
    pub fn field_at(&self, basis: &SineBasis, x: f64) -> Complex64 {
        self.field
            .iter()
            .enumerate()
            .map(|(i, c)| c * basis.eval(i + 1, x))
            .sum()
    }

    /// |(v|v)| / ⟨v|v⟩ of the field coefficients; → 0 at an exceptional point.
    pub fn self_orthogonality(&self) -> f64 {
        linalg::self_orthogonality(&self.field)
    }
}

/// Guided modes of one solve, together with the basis they live in.
#[derive(Clone, Debug)]
pub struct ModeSet {
    pub modes: Vec<Mode>,
    pub basis: SineBasis,
    /// Set when tracking had to reset labels (cardinality mismatch).
    pub tracking_reset: bool,
}

/// β = √(−2E), forward-propagating branch (Re β > 0).
pub fn beta_from_energy(e: Complex64) -> Complex64 {
    let b = (-2.0 * e).sqrt();
    if b.re < 0.0 {
        -b
    } else {
        b
    }
}

fn classify_parity(basis: &SineBasis, field: &[Complex64]) -> Parity {
    let mut w_even = 0.0;
    let mut w_odd = 0.0;
    for (i, c) in field.iter().enumerate() {
        let r = c.re * c.re;
        match basis.parity_of_index(i + 1) {
            Parity::Even => w_even += r,
            Parity::Odd => w_odd += r,
            Parity::None => unreachable!(),
        }
    }
    let total = w_even + w_odd;
    if total <= 0.0 {
        return Parity::None;
    }
    if w_even / total >= PARITY_DOMINANCE {
        Parity::Even
    } else if w_odd / total >= PARITY_DOMINANCE {
        Parity::Odd
    } else {
        Parity::None
    }
}

fn guided_window(g: &CouplerGeometry) -> (f64, f64) {
    (g.n0, g.n0 + g.delta_n)
}

fn modes_from_pairs(
    pairs: Vec<(Complex64, Vec<Complex64>)>,
    basis: &SineBasis,
    g: &CouplerGeometry,
) -> Result<ModeSet> {
    let k = g.wavenumber();
    let (lo, hi) = guided_window(g);
    let mut guided = Vec::new();
    let mut rejected_neff = Vec::new();
    for (e, vec) in pairs {
        let beta = beta_from_energy(e);
        let neff = beta.re / k;
        if neff > lo && neff < hi {
            // c-normalize; near an EP the field is self-orthogonal and the
            // conventional unit norm is kept instead
            let field = match c_normalize(&vec) {
                Ok(f) => f,
                Err(Error::SelfOrthogonal { .. }) => linalg::unit_normalize(&vec),
                Err(e) => return Err(e),
            };
            let parity = classify_parity(basis, &field);
            guided.push(Mode {
                beta,
                energy: e,
                field,
                parity,
                label: 0,
            });
        } else {
            rejected_neff.push(neff);
        }
    }
    if guided.is_empty() {
        rejected_neff.sort_by(|a, b| {
            let da = (a - 0.5 * (lo + hi)).abs();
            let db = (b - 0.5 * (lo + hi)).abs();
            da.partial_cmp(&db).unwrap()
        });
        rejected_neff.truncate(4);
        return Err(Error::NoGuidedModes {
            hint: "box too small or basis too coarse".into(),
            candidates: rejected_neff,
        });
    }
    guided.sort_by(|a, b| {
        a.energy
            .re
            .partial_cmp(&b.energy.re)
            .unwrap()
            .then(a.energy.im.partial_cmp(&b.energy.im).unwrap())
    });
    for (i, m) in guided.iter_mut().enumerate() {
        m.label = i;
    }
    Ok(ModeSet {
        modes: guided,
        basis: *basis,
        tracking_reset: false,
    })
}

/// Extract guided modes from a full eigendecomposition of `h`.
pub fn solve_modes(h: &ComplexMatrix, b: &SineBasis, g: &CouplerGeometry) -> Result<ModeSet> {
    let sol = eig_complex_symmetric(h)?;
    let pairs = (0..h.dim())
        .map(|i| (sol.eigenvalues[i], sol.eigenvectors.column(i)))
        .collect();
    modes_from_pairs(pairs, b, g)
}

/// Shift below the deepest potential the coupler can reach; every eigenvalue
/// then sits above it, and distance from the shift orders the guided window
/// contiguously.
pub fn guided_shift(g: &CouplerGeometry) -> Complex64 {
    let k = g.wavenumber();
    let ncore = g.n0 + g.delta_n;
    let floor = -0.5 * k * k * ncore * ncore;
    let depth = 0.5 * k * k * (ncore * ncore - g.n0 * g.n0);
    Complex64::new(floor - 0.1 * depth, 0.0)
}

/// Extract guided modes via shift-invert Arnoldi targeted at the guided
/// window. Same postconditions as [`solve_modes`]; each returned pair is
/// residual-verified against `h`.
pub fn solve_modes_targeted(
    h: &ComplexMatrix,
    b: &SineBasis,
    g: &CouplerGeometry,
) -> Result<ModeSet> {
    let k = g.wavenumber();
    let e_top = -0.5 * k * k * g.n0 * g.n0;
    let sigma = guided_shift(g);
    let mut n_want = 4usize;
    loop {
        let t = shift_invert_eigs(h, sigma, n_want.min(h.dim()), TARGETED_TOL)?;
        let complete = t
            .values
            .iter()
            .any(|e| e.re > e_top)
            || t.values.len() < n_want;
        if complete || n_want >= 32 || n_want >= h.dim() {
            let pairs = t.values.into_iter().zip(t.vectors).collect();
            return modes_from_pairs(pairs, b, g);
        }
        n_want *= 2;
    }
}

/// Relabel `next` so labels line up with `prev` by maximizing total
/// |c-product| overlap. Deterministic; resets labels (with a flag) when the
/// cardinalities differ.
pub fn track_modes(prev: &ModeSet, next: &ModeSet) -> ModeSet {
    let n = next.modes.len();
    if prev.modes.len() != n || n == 0 {
        let mut out = next.clone();
        out.tracking_reset = true;
        for (i, m) in out.modes.iter_mut().enumerate() {
            m.label = i;
        }
        return out;
    }

    // overlap[i][j] = |(prev_i | next_j)|
    let overlap: Vec<Vec<f64>> = prev
        .modes
        .iter()
        .map(|pm| {
            next.modes
                .iter()
                .map(|nm| {
                    linalg::c_product(&pm.field, &nm.field)
                        .map(|z| z.norm())
                        .unwrap_or(0.0)
                })
                .collect()
        })
        .collect();

    // exhaustive assignment; mode counts here are tiny
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = f64::NEG_INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let score: f64 = (0..n).map(|i| overlap[i][p[i]]).sum();
        // strict improvement keeps the tie-break deterministic: the first
        // permutation in lexicographic order wins ties
        if score > best + 1e-30 {
            best = score;
            best_perm = p.to_vec();
        }
    });

    let mut out = next.clone();
    out.tracking_reset = false;
    for (i, &j) in best_perm.iter().enumerate() {
        out.modes[j].label = prev.modes[i].label;
    }
    out.modes.sort_by_key(|m| m.label);
    out
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveguide::{build_index_profile, potential_from_index, IndexInterval, IndexProfile};

    fn small_basis() -> SineBasis {
        SineBasis::new(40.0, 200).unwrap()
    }

    #[test]
    fn basis_validation() {
        assert!(SineBasis::new(0.0, 100).is_err());
        assert!(SineBasis::new(60.0, 8).is_err());
        assert!(SineBasis::new(60.0, 16).is_ok());
    }

    #[test]
    fn overlap_integrals_match_quadrature() {
        let b = SineBasis::new(23.0, 64).unwrap();
        let simpson = |m: usize, mp: usize, x1: f64, x2: f64| {
            let n = 4001;
            let h = (x2 - x1) / ((n - 1) as f64);
            let mut s = 0.0;
            for i in 0..n {
                let x = x1 + h * i as f64;
                let w = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                s += w * b.eval(m, x) * b.eval(mp, x);
            }
            s * h / 3.0
        };
        for &(m, mp) in &[(1, 1), (1, 2), (3, 7), (5, 5), (10, 11)] {
            let exact = b.overlap_integral(m, mp, -4.0, 2.5);
            let approx = simpson(m, mp, -4.0, 2.5);
            assert!(
                (exact - approx).abs() < 1e-9,
                "({m},{mp}): {exact} vs {approx}"
            );
        }
        // orthonormality over the whole box
        for &(m, mp) in &[(1, 1), (2, 2), (1, 2), (4, 9)] {
            let full = b.overlap_integral(m, mp, -11.5 + 1e-12, 11.5 - 1e-12);
            let expect = if m == mp { 1.0 } else { 0.0 };
            assert!((full - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_potential_gives_shifted_kinetic_spectrum() {
        let g = CouplerGeometry::default();
        let profile = IndexProfile::from_parts(g.n0, vec![], g.vacuum_wavelength);
        let p = potential_from_index(&profile);
        let b = SineBasis::new(30.0, 24).unwrap();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let k = g.wavenumber();
        let vbg = -0.5 * k * k * g.n0 * g.n0;
        for i in 0..24 {
            for j in 0..24 {
                if i == j {
                    let expect = b.kinetic(i + 1) + vbg;
                    assert!((h[(i, i)].re - expect).abs() < 1e-10 * expect.abs());
                    assert!(h[(i, i)].im.abs() < 1e-14);
                } else {
                    assert!(h[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn hermitian_limit_is_real_symmetric() {
        let g = CouplerGeometry::default();
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = small_basis();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let scale = h.max_abs();
        for i in 0..b.n_funcs() {
            for j in 0..b.n_funcs() {
                assert!(h[(i, j)].im.abs() < 1e-15 * scale);
            }
        }
        assert_eq!(h.symmetry_defect(), 0.0);
    }

    #[test]
    fn pt_checkerboard_structure() {
        // Re(H) couples only equal-parity indices, Im(H) only opposite ones
        for alpha in [0.5, 4.0, 8.4, 15.0] {
            let g = CouplerGeometry {
                delta_alpha: alpha,
                ..CouplerGeometry::default()
            };
            let p = potential_from_index(&build_index_profile(&g).unwrap());
            let b = SineBasis::new(40.0, 48).unwrap();
            let h = assemble_hamiltonian(&p, &b).unwrap();
            let scale = h.max_abs();
            for i in 0..48 {
                for j in 0..48 {
                    let same_parity = (i + 1) % 2 == (j + 1) % 2;
                    if same_parity {
                        assert!(
                            h[(i, j)].im.abs() < 1e-13 * scale,
                            "Im on same-parity ({i},{j}) at alpha={alpha}"
                        );
                    } else {
                        assert!(
                            h[(i, j)].re.abs() < 1e-13 * scale,
                            "Re on opposite-parity ({i},{j}) at alpha={alpha}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn interval_outside_box_rejected() {
        let g = CouplerGeometry::default();
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = SineBasis::new(14.0, 32).unwrap(); // 6a = 15 > 14
        assert!(matches!(
            assemble_hamiltonian(&p, &b),
            Err(Error::IntervalOutsideBox { .. })
        ));
    }

    #[test]
    fn hermitian_coupler_has_two_real_guided_modes() {
        let g = CouplerGeometry::default();
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = small_basis();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let set = solve_modes(&h, &b, &g).unwrap();
        assert_eq!(set.modes.len(), 2);
        assert_eq!(set.modes[0].parity, Parity::Even);
        assert_eq!(set.modes[1].parity, Parity::Odd);
        for m in &set.modes {
            assert!(m.is_beta_real());
            let neff = m.beta.re / g.wavenumber();
            assert!(neff > 3.3 && neff < 3.301);
        }
        // even supermode is the more bound one
        assert!(set.modes[0].beta.re > set.modes[1].beta.re);
    }

    #[test]
    fn targeted_path_matches_full_decomposition() {
        let g = CouplerGeometry {
            delta_alpha: 4.0,
            ..CouplerGeometry::default()
        };
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = small_basis();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let full = solve_modes(&h, &b, &g).unwrap();
        let fast = solve_modes_targeted(&h, &b, &g).unwrap();
        assert_eq!(full.modes.len(), fast.modes.len());
        for (a, c) in full.modes.iter().zip(&fast.modes) {
            assert!((a.beta - c.beta).norm() < 1e-10);
            assert_eq!(a.parity, c.parity);
        }
    }

    #[test]
    fn far_above_critical_modes_localize() {
        let g = CouplerGeometry {
            delta_alpha: 17.0,
            ..CouplerGeometry::default()
        };
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = SineBasis::new(60.0, 300).unwrap();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let set = solve_modes_targeted(&h, &b, &g).unwrap();
        assert_eq!(set.modes.len(), 2);
        // conjugate pair
        let (b0, b1) = (set.modes[0].beta, set.modes[1].beta);
        assert!((b0 - b1.conj()).norm() < 1e-9 * b0.norm());
        assert!(!set.modes[0].is_beta_real());
        for m in &set.modes {
            assert_eq!(m.parity, Parity::None);
        }
        // each mode localizes in one core
        let core_power = |m: &Mode, sign: f64| {
            let mut s = 0.0;
            for i in 0..200 {
                let x = sign * (2.5 + 5.0 * (i as f64 + 0.5) / 200.0);
                s += m.field_at(&b, x).norm_sqr();
            }
            s
        };
        let m0_left = core_power(&set.modes[0], -1.0);
        let m0_right = core_power(&set.modes[0], 1.0);
        let m1_left = core_power(&set.modes[1], -1.0);
        let m1_right = core_power(&set.modes[1], 1.0);
        let r0 = m0_left / m0_right;
        let r1 = m1_left / m1_right;
        assert!(
            (r0 > 2.0 && r1 < 0.5) || (r0 < 0.5 && r1 > 2.0),
            "expected opposite localization, got {r0} {r1}"
        );
    }

    #[test]
    fn no_guided_modes_diagnostic() {
        // well too shallow for the coarse basis: kinetic floor pushes the
        // bound state out of the guided window
        let g = CouplerGeometry {
            delta_n: 1e-6,
            ..CouplerGeometry::default()
        };
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = SineBasis::new(30.0, 16).unwrap();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        match solve_modes(&h, &b, &g) {
            Err(Error::NoGuidedModes { candidates, .. }) => {
                assert!(!candidates.is_empty());
            }
            other => panic!("expected NoGuidedModes, got {other:?}"),
        }
    }

    #[test]
    fn isolated_slab_matches_dispersion_relation() {
        // single core in a box approximates the isolated symmetric slab
        let g = CouplerGeometry::default();
        let nr = g.n0 + g.delta_n;
        let profile = IndexProfile::from_parts(
            g.n0,
            vec![IndexInterval {
                x1: -g.half_width_a,
                x2: g.half_width_a,
                n: Complex64::new(nr, 0.0),
            }],
            g.vacuum_wavelength,
        );
        let p = potential_from_index(&profile);
        let b = SineBasis::new(90.0, 900).unwrap();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let set = solve_modes_targeted(&h, &b, &g).unwrap();
        assert_eq!(set.modes.len(), 1);
        let beta_oracle =
            ptdc_oracle::slab_fundamental_beta(g.n0, nr, g.half_width_a, g.vacuum_wavelength);
        let rel = (set.modes[0].beta.re - beta_oracle).abs() / beta_oracle;
        assert!(rel < 1e-6, "beta {} vs oracle {beta_oracle}: rel {rel}", set.modes[0].beta.re);
    }

    #[test]
    fn tracking_identity_swap_and_near_ep() {
        let g = CouplerGeometry::default();
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = small_basis();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let set = solve_modes(&h, &b, &g).unwrap();

        // identical sets: identity permutation
        let tracked = track_modes(&set, &set);
        assert_eq!(tracked.modes[0].label, 0);
        assert_eq!(tracked.modes[1].label, 1);
        assert!(!tracked.tracking_reset);

        // swapped order of the same two modes: transposition recovered
        let mut swapped = set.clone();
        swapped.modes.swap(0, 1);
        for (i, m) in swapped.modes.iter_mut().enumerate() {
            m.label = i;
        }
        let tracked = track_modes(&set, &swapped);
        assert_eq!(tracked.modes[0].label, 0);
        assert_eq!(tracked.modes[1].label, 1);
        assert!((tracked.modes[0].beta - set.modes[0].beta).norm() < 1e-14);

        // near-EP-like overlaps: brute force over both permutations agrees
        let mut perturbed = set.clone();
        for (i, c) in perturbed.modes[0].field.clone().iter().enumerate() {
            perturbed.modes[0].field[i] = 0.8 * c + 0.2 * set.modes[1].field[i];
        }
        let tracked = track_modes(&set, &perturbed);
        let score_id: f64 = (0..2)
            .map(|i| {
                linalg::c_product(&set.modes[i].field, &perturbed.modes[i].field)
                    .unwrap()
                    .norm()
            })
            .sum();
        let score_swap: f64 = (0..2)
            .map(|i| {
                linalg::c_product(&set.modes[i].field, &perturbed.modes[1 - i].field)
                    .unwrap()
                    .norm()
            })
            .sum();
        let labels: Vec<usize> = tracked.modes.iter().map(|m| m.label).collect();
        if score_id >= score_swap {
            assert_eq!(labels, vec![0, 1]);
        } else {
            assert_eq!(labels, vec![1, 0]);
        }
    }

    #[test]
    fn tracking_cardinality_mismatch_resets() {
        let g = CouplerGeometry::default();
        let p = potential_from_index(&build_index_profile(&g).unwrap());
        let b = small_basis();
        let h = assemble_hamiltonian(&p, &b).unwrap();
        let set = solve_modes(&h, &b, &g).unwrap();
        let mut one = set.clone();
        one.modes.truncate(1);
        let tracked = track_modes(&set, &one);
        assert!(tracked.tracking_reset);
        assert_eq!(tracked.modes[0].label, 0);
    }
}
