//! Rayleigh–Schrödinger machinery on a finite basis for Hamiltonian families
//! H(λ) = H₀ + λV with H₀ real symmetric and parity-even, V real symmetric
//! and parity-odd, probed on the imaginary axis λ = i|λ|.
//!
//! The wavefunction corrections follow the reduced-resolvent recurrence
//!   ψ⁽ⁿ⁾ = G₀′ V ψ⁽ⁿ⁻¹⁾ − Σ_{k=1}^{n-1} E⁽ᵏ⁾ G₀′ ψ⁽ⁿ⁻ᵏ⁾,
//!   G₀′ = Σ_{q≠j} |ψ_q⁰⟩⟨ψ_q⁰| / (E_j⁰ − E_q⁰),
//! under intermediate normalization ⟨ψ⁰|ψ⁽ⁿ⁾⟩ = 0, with energies
//! E⁽ⁿ⁾ = ⟨ψ⁰|V|ψ⁽ⁿ⁻¹⁾⟩ and the odd orders cross-checked against the
//! (2n+1)-rule form ⟨ψ⁽ⁿ⁾|V|ψ⁽ⁿ⁾⟩.
//!
//! Parity bookkeeping: a definite-parity ψ⁰ and a parity-odd V force
//! P ψ⁽ⁿ⁾ = p₀(−1)ⁿ ψ⁽ⁿ⁾, hence every odd-order energy vanishes and the
//! physical series Σ (−1)ⁿ|λ|²ⁿ E⁽²ⁿ⁾ is real term by term. Its radius of
//! convergence — estimated here by a Richardson-extrapolated root test — is
//! the branch point |λ_bp|, the same critical value the EP finder locates by
//! bisection.
//!
//! Coefficients are stored for the series in λ/`lambda_scale`; the scale is
//! fitted in a low-order pre-pass so that high orders stay inside f64 range
//! even when the radius is tiny (the waveguide's κ_c ~ 2e-4 would otherwise
//! overflow near order 40).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::spectral::{assemble_hamiltonian, Parity, SineBasis};
use crate::waveguide::{build_index_profile, potential_from_index, CouplerGeometry};

const MAX_ORDER_LIMIT: usize = 60;
const PRE_PASS_ORDER: usize = 10;

/// Dense real square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

fn parity_sign(p: Parity) -> f64 {
    match p {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
        Parity::None => 0.0,
    }
}

/// The split H(λ) = h₀ + λ·v with the parity of each basis index.
#[derive(Clone, Debug)]
pub struct HermitianSplit {
    h0: RealMatrix,
    v: RealMatrix,
    parity: Vec<Parity>,
}

impl HermitianSplit {
    /// Validating constructor: h₀ and v must be exactly symmetric, h₀
    /// parity-even (no entries between opposite-parity indices) and v
    /// parity-odd (no entries between equal-parity indices).
    pub fn new(h0: RealMatrix, v: RealMatrix, parity: Vec<Parity>) -> Result<Self> {
        let s = Self::new_unchecked(h0, v, parity)?;
        let n = s.h0.dim();
        for i in 0..n {
            for j in 0..n {
                let same = s.parity[i] == s.parity[j];
                if same && s.v[(i, j)] != 0.0 {
                    return Err(Error::NotPtStructured {
                        reason: format!("v couples equal-parity indices ({i},{j})"),
                    });
                }
                if !same && s.h0[(i, j)] != 0.0 {
                    return Err(Error::NotPtStructured {
                        reason: format!("h0 couples opposite-parity indices ({i},{j})"),
                    });
                }
            }
        }
        Ok(s)
    }

    /// Constructor without the parity-structure validation, for diagnostics
    /// on deliberately corrupted perturbations. Symmetry is still required.
    pub fn new_unchecked(h0: RealMatrix, v: RealMatrix, parity: Vec<Parity>) -> Result<Self> {
        if h0.dim() != v.dim() || h0.dim() != parity.len() {
            return Err(Error::NotPtStructured {
                reason: "h0, v, parity dimensions disagree".into(),
            });
        }
        if !h0.is_symmetric() {
            return Err(Error::NotPtStructured {
                reason: "h0 is not symmetric".into(),
            });
        }
        if !v.is_symmetric() {
            return Err(Error::NotPtStructured {
                reason: "v is not symmetric".into(),
            });
        }
        if parity.iter().any(|p| *p == Parity::None) {
            return Err(Error::NotPtStructured {
                reason: "basis parity map contains unclassified entries".into(),
            });
        }
        Ok(Self { h0, v, parity })
    }

    /// Extract the split from an assembled PT Hamiltonian H = h₀ + iκ·v:
    /// the real part lands in h₀ (equal-parity entries), the imaginary part
    /// divided by `kappa_ref` in v (opposite-parity entries). Entries outside
    /// that pattern must be rounding-level noise or the input is rejected.
    pub fn from_hamiltonian(
        h: &ComplexMatrix,
        kappa_ref: f64,
        parity: &[Parity],
    ) -> Result<Self> {
        let n = h.dim();
        if parity.len() != n {
            return Err(Error::NotPtStructured {
                reason: "parity map length does not match matrix".into(),
            });
        }
        if !(kappa_ref > 0.0) {
            return Err(Error::NotPtStructured {
                reason: "kappa_ref must be positive".into(),
            });
        }
        let scale_re = h.max_abs();
        let mut scale_im = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                scale_im = scale_im.max(h[(i, j)].im.abs());
            }
        }
        let mut h0 = RealMatrix::zeros(n);
        let mut v = RealMatrix::zeros(n);
        let mut dropped = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                if parity[i] == parity[j] {
                    h0[(i, j)] = z.re;
                    dropped = dropped.max(z.im.abs() / scale_im.max(f64::MIN_POSITIVE));
                } else {
                    v[(i, j)] = z.im / kappa_ref;
                    dropped = dropped.max(z.re.abs() / scale_re);
                }
            }
        }
        if dropped > 1e-11 {
            return Err(Error::NotPtStructured {
                reason: format!(
                    "off-pattern entries at relative magnitude {dropped:.3e} exceed 1e-11"
                ),
            });
        }
        // exact symmetry: the assembled sources are symmetric, so mirroring
        // the upper triangle changes nothing beyond the dropped noise
        for i in 0..n {
            for j in i + 1..n {
                h0[(j, i)] = h0[(i, j)];
                v[(j, i)] = v[(i, j)];
            }
        }
        Self::new(h0, v, parity.to_vec())
    }

    pub fn h0(&self) -> &RealMatrix {
        &self.h0
    }

    pub fn v(&self) -> &RealMatrix {
        &self.v
    }

    pub fn parity(&self) -> &[Parity] {
        &self.parity
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    /// Assemble H(i|λ|) = h₀ + i|λ|·v as a complex matrix.
    pub fn hamiltonian_at(&self, lambda_abs: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            Complex64::new(self.h0[(i, j)], lambda_abs * self.v[(i, j)])
        })
    }

    /// Apply P ψ (the basis parity signs).
    fn apply_parity(&self, psi: &[f64]) -> Vec<f64> {
        psi.iter()
            .zip(&self.parity)
            .map(|(x, p)| parity_sign(*p) * x)
            .collect()
    }
}

/// Build the waveguide split from two assemblies: h₀ from the hermitian
/// (Δα = 0) Hamiltonian, v from the imaginary part at a reference contrast
/// (exact, since Im H is linear in κ).
pub fn waveguide_split(
    g: &CouplerGeometry,
    basis: &SineBasis,
    alpha_ref: f64,
) -> Result<HermitianSplit> {
    if !(alpha_ref > 0.0) {
        return Err(Error::InvalidGeometry {
            reason: "alpha_ref must be positive".into(),
        });
    }
    let g0 = CouplerGeometry {
        delta_alpha: 0.0,
        ..*g
    };
    let gr = CouplerGeometry {
        delta_alpha: alpha_ref,
        ..*g
    };
    let h_ref = assemble_hamiltonian(&potential_from_index(&build_index_profile(&gr)?), basis)?;
    let h_zero = assemble_hamiltonian(&potential_from_index(&build_index_profile(&g0)?), basis)?;
    let parity: Vec<Parity> = (1..=basis.n_funcs())
        .map(|m| basis.parity_of_index(m))
        .collect();
    let kappa_ref = gr.kappa();
    // combine: real part from the hermitian assembly, imaginary from the
    // reference one
    let n = basis.n_funcs();
    let combined = ComplexMatrix::from_fn(n, |i, j| {
        Complex64::new(h_zero[(i, j)].re, h_ref[(i, j)].im)
    });
    HermitianSplit::from_hamiltonian(&combined, kappa_ref, &parity)
}

/// One order of the expansion: energy coefficient, wavefunction correction
/// (basis coordinates), and its parity label. Both are coefficients of the
/// series in λ/`lambda_scale`.
#[derive(Clone, Debug)]
pub struct ExpansionOrder {
    pub energy: f64,
    pub psi: Vec<f64>,
    pub parity: Parity,
}

/// Odd-order energy computed two ways: the direct RS formula and the
/// (2n+1)-rule form ⟨ψ⁽ⁿ⁾|V|ψ⁽ⁿ⁾⟩.
#[derive(Clone, Copy, Debug)]
pub struct OddOrderCheck {
    pub order: usize,
    pub direct: f64,
    pub wigner_form: f64,
}

/// Rayleigh–Schrödinger expansion of one target level.
#[derive(Clone, Debug)]
pub struct PerturbationExpansion {
    pub target_index: usize,
    /// Coefficients are for the series in λ/lambda_scale.
    pub lambda_scale: f64,
    pub orders: Vec<ExpansionOrder>,
    pub odd_order_checks: Vec<OddOrderCheck>,
    /// Parity of the unperturbed level.
    pub base_parity: Parity,
    parity_map: Vec<Parity>,
}

fn measure_parity(parity: &[Parity], psi: &[f64]) -> Parity {
    let norm: f64 = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Parity::None;
    }
    let mut even_viol = 0.0f64;
    let mut odd_viol = 0.0f64;
    for (x, p) in psi.iter().zip(parity) {
        let px = parity_sign(*p) * x;
        even_viol += (px - x) * (px - x);
        odd_viol += (px + x) * (px + x);
    }
    let (e, o) = (even_viol.sqrt() / norm, odd_viol.sqrt() / norm);
    if e < 1e-8 {
        Parity::Even
    } else if o < 1e-8 {
        Parity::Odd
    } else {
        Parity::None
    }
}

struct EigenContext {
    energies: Vec<f64>,
    /// Eigenvectors as columns, orthonormal.
    u: nalgebra::DMatrix<f64>,
}

fn symmetric_eigen(h0: &RealMatrix) -> EigenContext {
    let n = h0.dim();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| h0[(i, j)]);
    let se = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let energies: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut u = nalgebra::DMatrix::zeros(n, n);
    for (newcol, &oldcol) in order.iter().enumerate() {
        u.set_column(newcol, &se.eigenvectors.column(oldcol));
    }
    EigenContext { energies, u }
}

/// Run the RS recurrence for level `target_index` (energies sorted
/// ascending) through `max_order`.
pub fn rs_expand(
    hs: &HermitianSplit,
    target_index: usize,
    max_order: usize,
) -> Result<PerturbationExpansion> {
    if max_order > MAX_ORDER_LIMIT {
        return Err(Error::MaxOrderExceeded {
            requested: max_order,
            limit: MAX_ORDER_LIMIT,
        });
    }
    let n = hs.dim();
    assert!(target_index < n, "target index {target_index} out of range");
    let ctx = symmetric_eigen(&hs.h0);

    // nondegeneracy of the target level
    let e0 = ctx.energies[target_index];
    for (q, &eq) in ctx.energies.iter().enumerate() {
        if q != target_index && (eq - e0).abs() <= 1e-10 {
            return Err(Error::Degenerate {
                index: q,
                gap: (eq - e0).abs(),
            });
        }
    }

    // pre-pass estimates the natural λ scale from a low-order ratio test
    let pre = expand_with_scale(hs, &ctx, target_index, max_order.min(PRE_PASS_ORDER), 1.0);
    let mut scale = 1.0;
    let evens: Vec<(usize, f64)> = pre
        .orders
        .iter()
        .enumerate()
        .skip(2)
        .step_by(2)
        .map(|(i, o)| (i, o.energy.abs()))
        .filter(|(_, e)| *e > 0.0)
        .collect();
    if evens.len() >= 2 {
        let (_, ea) = evens[evens.len() - 2];
        let (_, eb) = evens[evens.len() - 1];
        let s = (ea / eb).sqrt();
        if s.is_finite() && s > 1e-12 && s < 1e12 {
            scale = s;
        }
    }
    let mut out = expand_with_scale(hs, &ctx, target_index, max_order, scale);
    out.lambda_scale = scale;
    Ok(out)
}

fn expand_with_scale(
    hs: &HermitianSplit,
    ctx: &EigenContext,
    j: usize,
    max_order: usize,
    scale: f64,
) -> PerturbationExpansion {
    let n = hs.dim();
    let e0 = ctx.energies[j];

    // reduced resolvent G0' applied in the eigenbasis: zero out the target
    // component, divide the rest by (E_j - E_q)
    let inv_gap: Vec<f64> = ctx
        .energies
        .iter()
        .enumerate()
        .map(|(q, &eq)| if q == j { 0.0 } else { 1.0 / (e0 - eq) })
        .collect();
    let apply_g0 = |w: &[f64]| -> Vec<f64> {
        let wv = nalgebra::DVector::from_column_slice(w);
        let mut coeffs = ctx.u.tr_mul(&wv);
        for (c, g) in coeffs.iter_mut().zip(&inv_gap) {
            *c *= *g;
        }
        (&ctx.u * coeffs).as_slice().to_vec()
    };

    let psi0: Vec<f64> = ctx.u.column(j).iter().copied().collect();
    let vs = |w: &[f64]| -> Vec<f64> {
        let mut out = hs.v.matvec(w);
        for x in out.iter_mut() {
            *x *= scale;
        }
        out
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let base_parity = measure_parity(&hs.parity, &psi0);
    let expected_parity = |order: usize| -> Parity {
        match base_parity {
            Parity::None => Parity::None,
            p => {
                if order % 2 == 0 {
                    p
                } else if p == Parity::Even {
                    Parity::Odd
                } else {
                    Parity::Even
                }
            }
        }
    };

    let mut energies = vec![e0];
    let mut psis: Vec<Vec<f64>> = vec![psi0.clone()];
    let mut orders = vec![ExpansionOrder {
        energy: e0,
        psi: psi0.clone(),
        parity: base_parity,
    }];

    for nn in 1..=max_order {
        let v_prev = vs(&psis[nn - 1]);
        let e_n = dot(&psi0, &v_prev);
        let mut rhs = v_prev;
        for k in 1..nn {
            let ek = energies[k];
            if ek != 0.0 {
                for (r, p) in rhs.iter_mut().zip(&psis[nn - k]) {
                    *r -= ek * p;
                }
            }
        }
        let psi_n = apply_g0(&rhs);
        energies.push(e_n);
        orders.push(ExpansionOrder {
            energy: e_n,
            psi: psi_n.clone(),
            parity: expected_parity(nn),
        });
        psis.push(psi_n);
    }

    // odd orders via the (2n+1)-rule form
    let mut odd_order_checks = Vec::new();
    for m in 0..=(max_order.saturating_sub(1)) / 2 {
        let order = 2 * m + 1;
        if order > max_order {
            break;
        }
        let w = dot(&psis[m], &vs(&psis[m]));
        odd_order_checks.push(OddOrderCheck {
            order,
            direct: energies[order],
            wigner_form: w,
        });
    }

    PerturbationExpansion {
        target_index: j,
        lambda_scale: scale,
        orders,
        odd_order_checks,
        base_parity,
        parity_map: hs.parity.clone(),
    }
}

/// Truncated physical series Eq-style sum Σ (−1)ⁿ |λ|²ⁿ E⁽²ⁿ⁾.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSum {
    pub value: f64,
    /// Magnitude of the last summed term: a truncation/divergence diagnostic.
    pub last_term_abs: f64,
    pub orders_used: usize,
}

/// Evaluate the even-order series at |λ| = `lambda_abs` (raw units, not the
/// internal scale), truncated at the highest available even order.
pub fn sum_series(pe: &PerturbationExpansion, lambda_abs: f64) -> SeriesSum {
    let x = lambda_abs / pe.lambda_scale;
    let x2 = x * x;
    let mut value = 0.0;
    let mut power = 1.0;
    let mut sign = 1.0;
    let mut last = 0.0;
    let mut used = 0;
    let mut m = 0;
    while 2 * m < pe.orders.len() {
        let term = sign * power * pe.orders[2 * m].energy;
        value += term;
        last = term.abs();
        used = 2 * m;
        power *= x2;
        sign = -sign;
        m += 1;
    }
    SeriesSum {
        value,
        last_term_abs: last,
        orders_used: used,
    }
}

/// Radius-of-convergence estimate.
#[derive(Clone, Copy, Debug)]
pub struct RadiusEstimate {
    /// Root test |E⁽²ⁿ⁾|^(−1/2n), Richardson-extrapolated over the last 4
    /// points (two elimination levels). The primary estimate.
    pub radius: f64,
    /// Ratio test √|E⁽²ⁿ⁾/E⁽²ⁿ⁺²⁾| with one Richardson level, reported
    /// alongside.
    pub ratio_estimate: f64,
    /// Number of nonzero even-order coefficients used.
    pub points_used: usize,
}

/// Estimate |λ_bp| from the even-order coefficients. Requires at least 6
/// nonzero even orders.
pub fn estimate_radius(pe: &PerturbationExpansion) -> Result<RadiusEstimate> {
    // (series index n, |E^(2n)|) for nonzero coefficients
    let evens: Vec<(f64, f64)> = pe
        .orders
        .iter()
        .enumerate()
        .filter(|(i, o)| *i >= 2 && i % 2 == 0 && o.energy != 0.0)
        .map(|(i, o)| ((i / 2) as f64, o.energy.abs()))
        .collect();
    if evens.len() < 6 {
        return Err(Error::TooFewCoefficients {
            have: evens.len(),
            need: 6,
        });
    }

    let roots: Vec<(f64, f64)> = evens
        .iter()
        .map(|&(n, e)| (n, e.powf(-1.0 / (2.0 * n))))
        .collect();
    let tail = &roots[roots.len() - 4..];
    let lvl1: Vec<(f64, f64)> = tail
        .windows(2)
        .map(|w| {
            let (n0, a0) = w[0];
            let (n1, a1) = w[1];
            (n1, (n1 * a1 - n0 * a0) / (n1 - n0))
        })
        .collect();
    let lvl2: Vec<f64> = lvl1
        .windows(2)
        .map(|w| {
            let (n0, b0) = w[0];
            let (n1, b1) = w[1];
            (n1 * b1 - n0 * b0) / (n1 - n0)
        })
        .collect();
    let radius = *lvl2.last().unwrap() * pe.lambda_scale;

    // ratio test over the last consecutive pairs
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    for w in evens.windows(2) {
        let (n0, e0) = w[0];
        let (n1, e1) = w[1];
        if (n1 - n0).abs() == 1.0 {
            ratios.push((n0, (e0 / e1).sqrt()));
        }
    }
    let ratio_estimate = if ratios.len() >= 2 {
        let (n0, r0) = ratios[ratios.len() - 2];
        let (n1, r1) = ratios[ratios.len() - 1];
        ((n1 * r1 - n0 * r0) / (n1 - n0)) * pe.lambda_scale
    } else {
        ratios.last().map(|&(_, r)| r).unwrap_or(f64::NAN) * pe.lambda_scale
    };

    Ok(RadiusEstimate {
        radius,
        ratio_estimate,
        points_used: evens.len(),
    })
}

/// Parity-rule and odd-order-vanishing report (diagnostic, never asserted
/// here: corrupted inputs are allowed to violate it).
#[derive(Clone, Debug)]
pub struct ParityOddnessReport {
    /// max over orders of ‖Pψ⁽ⁿ⁾ − p₀(−1)ⁿψ⁽ⁿ⁾‖ / ‖ψ⁽ⁿ⁾‖.
    pub max_parity_violation: f64,
    /// max over n of |E⁽²ⁿ⁺¹⁾| / max(|E⁽²ⁿ⁾|, |E⁽²ⁿ⁺²⁾|).
    pub max_odd_energy_ratio: f64,
    /// Per odd order: the relative magnitude above.
    pub odd_ratios: Vec<(usize, f64)>,
    /// Per order: relative parity violation.
    pub parity_violations: Vec<(usize, f64)>,
}

pub fn verify_parity_and_oddness(pe: &PerturbationExpansion) -> ParityOddnessReport {
    let base = parity_sign(pe.base_parity);
    let mut parity_violations = Vec::new();
    let mut max_parity_violation = 0.0f64;
    for (n, o) in pe.orders.iter().enumerate() {
        let norm: f64 = o.psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || base == 0.0 {
            continue;
        }
        let sign = base * if n % 2 == 0 { 1.0 } else { -1.0 };
        let viol: f64 = o
            .psi
            .iter()
            .zip(&pe.parity_map)
            .map(|(x, p)| {
                let d = parity_sign(*p) * x - sign * x;
                d * d
            })
            .sum::<f64>()
            .sqrt()
            / norm;
        parity_violations.push((n, viol));
        max_parity_violation = max_parity_violation.max(viol);
    }

    let mut odd_ratios = Vec::new();
    let mut max_odd_energy_ratio = 0.0f64;
    let norders = pe.orders.len();
    for odd in (1..norders).step_by(2) {
        let below = pe.orders[odd - 1].energy.abs();
        let above = if odd + 1 < norders {
            pe.orders[odd + 1].energy.abs()
        } else {
            0.0
        };
        let denom = below.max(above);
        if denom > 0.0 {
            let r = pe.orders[odd].energy.abs() / denom;
            odd_ratios.push((odd, r));
            max_odd_energy_ratio = max_odd_energy_ratio.max(r);
        }
    }

    ParityOddnessReport {
        max_parity_violation,
        max_odd_energy_ratio,
        odd_ratios,
        parity_violations,
    }
}

/// Partial-sum wavefunction χ⁽ⁿ⁾ = Σ_{k≤n} λᵏ ψ⁽ᵏ⁾ at real λ (raw units).
pub fn chi(pe: &PerturbationExpansion, lambda: f64, n: usize) -> Vec<f64> {
    let x = lambda / pe.lambda_scale;
    let dim = pe.orders[0].psi.len();
    let mut out = vec![0.0; dim];
    let mut power = 1.0;
    for k in 0..=n.min(pe.orders.len() - 1) {
        for (o, p) in out.iter_mut().zip(&pe.orders[k].psi) {
            *o += power * p;
        }
        power *= x;
    }
    out
}

/// Rayleigh quotient ⟨χ|h₀ + λv|χ⟩ / ⟨χ|χ⟩ at real λ.
pub fn rayleigh_quotient(hs: &HermitianSplit, lambda: f64, chi: &[f64]) -> f64 {
    let mut hchi = hs.h0.matvec(chi);
    let vchi = hs.v.matvec(chi);
    for (h, v) in hchi.iter_mut().zip(&vchi) {
        *h += lambda * v;
    }
    let num: f64 = chi.iter().zip(&hchi).map(|(a, b)| a * b).sum();
    let den: f64 = chi.iter().map(|a| a * a).sum();
    num / den
}

/// Coefficient table as CSV: order, energy coefficient (in the scaled
/// series), parity, and the norm of the wavefunction correction.
pub fn coefficients_csv(pe: &PerturbationExpansion) -> String {
    let mut out = format!("# lambda_scale = {:e}\n", pe.lambda_scale);
    out.push_str("order,e_coeff,parity,psi_norm\n");
    for (n, o) in pe.orders.iter().enumerate() {
        let norm: f64 = o.psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push_str(&format!("{},{:e},{},{:e}\n", n, o.energy, o.parity, norm));
    }
    out
}

/// The 2×2 analytic model in the eigenbasis of its hermitian part:
/// h₀ = diag(−k, k), v = σ_x, parity (even, odd). H(iγ) has eigenvalues
/// ±√(k² − γ²) and the ground-state series is the Taylor expansion of
/// −√(k² + λ²).
pub fn two_level_model(k: f64) -> HermitianSplit {
    let mut h0 = RealMatrix::zeros(2);
    h0[(0, 0)] = -k;
    h0[(1, 1)] = k;
    let mut v = RealMatrix::zeros(2);
    v[(0, 1)] = 1.0;
    v[(1, 0)] = 1.0;
    HermitianSplit::new(h0, v, vec![Parity::Even, Parity::Odd]).unwrap()
}
