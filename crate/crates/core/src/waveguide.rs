//! Geometry of the PT-symmetric directional coupler and its mapping to a
//! Schrödinger-analog potential.
//!
//! The structure is two slab cores of width 2a separated by 2a: the left core
//! carries gain (+iκ on the index), the right one the matching loss (−iκ), on
//! a common background n₀. By construction n(x) = n*(−x). The TE wave
//! equation (∂²/∂x² + k²n(x)²)ℰ = β²ℰ maps onto −½ℰ'' + V ℰ = Eℰ with
//! V(x) = −½k²n(x)² and E = −½β², which is the form the spectral solver
//! consumes.
//!
//! Internal length unit is µm. The gain/loss knob Δα is accepted in 1/cm as
//! an amplitude gain coefficient and converted through
//! κ = Δα·λ_vac/(2π) = Δα/k; this convention reproduces the critical contrast
//! Δα_c ≈ 8.4 cm⁻¹ of the reference geometry and is isolated in
//! [`kappa_from_delta_alpha`] so an alternative convention is a one-line
//! change.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical description of the two-slab PT coupler.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplerGeometry {
    /// Background refractive index.
    pub n0: f64,
    /// Real core-index step above background.
    pub delta_n: f64,
    /// Half width a in µm; core width and separation are both 2a.
    pub half_width_a: f64,
    /// Vacuum wavelength in µm.
    pub vacuum_wavelength: f64,
    /// Gain/loss amplitude coefficient in 1/cm.
    pub delta_alpha: f64,
}

impl Default for CouplerGeometry {
    /// Reference geometry: n₀ = 3.3, Δn = 10⁻³, 2a = 5 µm, λ = 1.55 µm,
    /// hermitian (Δα = 0).
    fn default() -> Self {
        Self {
            n0: 3.3,
            delta_n: 1e-3,
            half_width_a: 2.5,
            vacuum_wavelength: 1.55,
            delta_alpha: 0.0,
        }
    }
}

impl CouplerGeometry {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidGeometry {
            reason: reason.to_string(),
        };
        if !(self.n0 > 0.0) {
            return Err(bad("n0 must be positive"));
        }
        if !(self.delta_n > 0.0) {
            return Err(bad("delta_n must be positive"));
        }
        if !(self.half_width_a > 0.0) {
            return Err(bad("half_width_a must be positive"));
        }
        if !(self.vacuum_wavelength > 0.0) {
            return Err(bad("vacuum_wavelength must be positive"));
        }
        if !(self.delta_alpha >= 0.0) {
            return Err(bad("delta_alpha must be non-negative"));
        }
        Ok(())
    }

    /// Vacuum wavenumber k = 2π/λ in 1/µm.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.vacuum_wavelength
    }

    /// Imaginary index amplitude κ for this geometry's Δα.
    pub fn kappa(&self) -> f64 {
        kappa_from_delta_alpha(self.delta_alpha, self.vacuum_wavelength)
    }

    /// Δα (1/cm) corresponding to an imaginary index amplitude κ.
    pub fn delta_alpha_from_kappa(&self, kappa: f64) -> f64 {
        kappa * 2.0 * std::f64::consts::PI / (self.vacuum_wavelength * 1e-4)
    }
}

/// Convert an amplitude gain/loss coefficient Δα (1/cm) into the imaginary
/// index amplitude κ = Δα·λ_vac/(2π), with λ_vac in µm.
pub fn kappa_from_delta_alpha(delta_alpha_per_cm: f64, vacuum_wavelength_um: f64) -> f64 {
    delta_alpha_per_cm * (vacuum_wavelength_um * 1e-4) / (2.0 * std::f64::consts::PI)
}

/// One constant-index interval of a piecewise profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexInterval {
    pub x1: f64,
    pub x2: f64,
    pub n: Complex64,
}

/// Piecewise-constant complex refractive-index profile. Intervals override
/// the background; ties at interval edges resolve to the interval (closed
/// intervals), which keeps n(x) = n*(−x) valid at the interfaces of a
/// mirror-symmetric pair.
#[derive(Clone, Debug)]
pub struct IndexProfile {
    background: f64,
    intervals: Vec<IndexInterval>,
    vacuum_wavelength: f64,
}

impl IndexProfile {
    /// Build a custom profile (tests use this for asymmetric structures).
    pub fn from_parts(
        background: f64,
        intervals: Vec<IndexInterval>,
        vacuum_wavelength: f64,
    ) -> Self {
        Self {
            background,
            intervals,
            vacuum_wavelength,
        }
    }

    pub fn n_at(&self, x: f64) -> Complex64 {
        for iv in &self.intervals {
            if x >= iv.x1 && x <= iv.x2 {
                return iv.n;
            }
        }
        Complex64::new(self.background, 0.0)
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn intervals(&self) -> &[IndexInterval] {
        &self.intervals
    }

    pub fn vacuum_wavelength(&self) -> f64 {
        self.vacuum_wavelength
    }

    /// Largest |x| with structure, used to size symmetry scans.
    pub fn extent(&self) -> f64 {
        self.intervals
            .iter()
            .map(|iv| iv.x1.abs().max(iv.x2.abs()))
            .fold(0.0, f64::max)
    }
}

/// Schrödinger-analog potential V(x) = −½k²n(x)², 1/µm². Energy convention
/// E = −½β².
#[derive(Clone, Debug)]
pub struct PotentialProfile {
    background: Complex64,
    intervals: Vec<(f64, f64, Complex64)>,
    wavenumber: f64,
}

impl PotentialProfile {
    pub fn v_at(&self, x: f64) -> Complex64 {
        for &(x1, x2, v) in &self.intervals {
            if x >= x1 && x <= x2 {
                return v;
            }
        }
        self.background
    }

    pub fn background(&self) -> Complex64 {
        self.background
    }

    /// Constant-potential intervals overriding the background.
    pub fn intervals(&self) -> &[(f64, f64, Complex64)] {
        &self.intervals
    }

    /// Vacuum wavenumber k = 2π/λ in 1/µm.
    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }
}

/// Piecewise-constant profile of the coupler: gain core on [−3a, −a] with
/// n = n₀+Δn+iκ, bare background gap on (−a, a), loss core on [a, 3a] with
/// n = n₀+Δn−iκ.
pub fn build_index_profile(g: &CouplerGeometry) -> Result<IndexProfile> {
    g.validate()?;
    let a = g.half_width_a;
    let nr = g.n0 + g.delta_n;
    let kap = g.kappa();
    Ok(IndexProfile {
        background: g.n0,
        intervals: vec![
            IndexInterval {
                x1: -3.0 * a,
                x2: -a,
                n: Complex64::new(nr, kap),
            },
            IndexInterval {
                x1: a,
                x2: 3.0 * a,
                n: Complex64::new(nr, -kap),
            },
        ],
        vacuum_wavelength: g.vacuum_wavelength,
    })
}

/// Map an index profile to V(x) = −½k²n(x)².
pub fn potential_from_index(p: &IndexProfile) -> PotentialProfile {
    let k = 2.0 * std::f64::consts::PI / p.vacuum_wavelength;
    let v_of = |n: Complex64| -0.5 * k * k * n * n;
    PotentialProfile {
        background: v_of(Complex64::new(p.background, 0.0)),
        intervals: p
            .intervals
            .iter()
            .map(|iv| (iv.x1, iv.x2, v_of(iv.n)))
            .collect(),
        wavenumber: k,
    }
}

/// True iff max over a symmetric sample grid of |n(x) − n*(−x)| < 1e-14.
pub fn check_pt_symmetry(p: &IndexProfile, n_samples: usize) -> bool {
    assert!(n_samples >= 2);
    let span = (p.extent() * 1.25).max(1.0);
    (0..n_samples).all(|i| {
        let x = -span + 2.0 * span * (i as f64) / ((n_samples - 1) as f64);
        let defect = (p.n_at(x) - p.n_at(-x).conj()).norm();
        defect < 1e-14
    })
}
