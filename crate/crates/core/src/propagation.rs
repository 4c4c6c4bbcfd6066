//! Beat-length computation and sum-field power maps.
//!
//! The superposition of the two guided modes,
//! |E_y(x,z)|² = |(ℰ₁(x)e^{−iβ₁z} + ℰ₂(x)e^{−iβ₂z})/√2|²,
//! beats between the two cores with period L = 2π/Δβ while the pair is real;
//! as the gain/loss contrast approaches the critical value Δβ → 0 and the
//! beating slows down and stops. Past the critical point the pair is complex
//! conjugate, the modes co-propagate (one growing, one decaying), and no beat
//! length exists.

use num_complex::Complex64;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spectral::ModeSet;

/// Power distribution |E_y(x,z)|² of the equal-amplitude sum field.
#[derive(Clone, Debug)]
pub struct PowerMap {
    pub x_grid: Vec<f64>,
    pub z_grid: Vec<f64>,
    /// Row-major: power[ix * z_len + iz].
    pub power: Vec<f64>,
    pub delta_alpha: f64,
    pub beat_length: Option<f64>,
}

impl PowerMap {
    pub fn at(&self, ix: usize, iz: usize) -> f64 {
        self.power[ix * self.z_grid.len() + iz]
    }
}

/// L = 2π/|Re β₁ − Re β₂| for a real guided pair; `None` once the pair is
/// complex (beating ceases) or exactly degenerate.
pub fn beat_length(modes: &ModeSet) -> Result<Option<f64>> {
    if modes.modes.len() != 2 {
        return Err(Error::ModeCount {
            found: modes.modes.len(),
        });
    }
    let (m1, m2) = (&modes.modes[0], &modes.modes[1]);
    if !m1.is_beta_real() || !m2.is_beta_real() {
        return Ok(None);
    }
    let dbeta = (m1.beta.re - m2.beta.re).abs();
    if dbeta == 0.0 {
        return Ok(None);
    }
    Ok(Some(2.0 * std::f64::consts::PI / dbeta))
}

/// Evaluate the sum-field power on a grid. Fields are taken as stored on the
/// mode set (c-normalized by the solver); gain/loss growth appears naturally
/// when β is complex.
pub fn sum_field_power(
    modes: &ModeSet,
    x_grid: &[f64],
    z_grid: &[f64],
    delta_alpha: f64,
) -> Result<PowerMap> {
    if modes.modes.len() != 2 {
        return Err(Error::ModeCount {
            found: modes.modes.len(),
        });
    }
    if x_grid.is_empty() {
        return Err(Error::EmptyGrid { which: "x" });
    }
    if z_grid.is_empty() {
        return Err(Error::EmptyGrid { which: "z" });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let basis = &modes.basis;
    let f1: Vec<Complex64> = x_grid
        .iter()
        .map(|&x| modes.modes[0].field_at(basis, x))
        .collect();
    let f2: Vec<Complex64> = x_grid
        .iter()
        .map(|&x| modes.modes[1].field_at(basis, x))
        .collect();
    let (b1, b2) = (modes.modes[0].beta, modes.modes[1].beta);
    let ph1: Vec<Complex64> = z_grid
        .iter()
        .map(|&z| (-Complex64::i() * b1 * z).exp())
        .collect();
    let ph2: Vec<Complex64> = z_grid
        .iter()
        .map(|&z| (-Complex64::i() * b2 * z).exp())
        .collect();
    let mut power = Vec::with_capacity(x_grid.len() * z_grid.len());
    for ix in 0..x_grid.len() {
        for iz in 0..z_grid.len() {
            let e = inv_sqrt2 * (f1[ix] * ph1[iz] + f2[ix] * ph2[iz]);
            power.push(e.norm_sqr());
        }
    }
    Ok(PowerMap {
        x_grid: x_grid.to_vec(),
        z_grid: z_grid.to_vec(),
        power,
        delta_alpha,
        beat_length: beat_length(modes)?,
    })
}

/// Total sum-field power ∫|E_y|²dx over the whole basis box at propagation
/// distance z, computed exactly in coefficient space (the sine basis is
/// orthonormal over the box, so no quadrature enters).
pub fn total_power_at(modes: &ModeSet, z: f64) -> Result<f64> {
    if modes.modes.len() != 2 {
        return Err(Error::ModeCount {
            found: modes.modes.len(),
        });
    }
    let (m1, m2) = (&modes.modes[0], &modes.modes[1]);
    let p1 = (-Complex64::i() * m1.beta * z).exp();
    let p2 = (-Complex64::i() * m2.beta * z).exp();
    let total: f64 = m1
        .field
        .iter()
        .zip(&m2.field)
        .map(|(c1, c2)| (0.5f64).sqrt() * (c1 * p1 + c2 * p2))
        .map(|c| c.norm_sqr())
        .sum();
    Ok(total)
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write the map as `<stem>.csv` (columns x, z, power) and `<stem>.pgm`
/// (binary 8-bit grayscale, power max-normalized per map, width = z samples,
/// height = x samples). Output bytes are deterministic for fixed input.
pub fn export_power_map(pm: &PowerMap, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    let csv_path = dir.join(format!("{stem}.csv"));
    let pgm_path = dir.join(format!("{stem}.pgm"));

    // maps can run to millions of rows; stream instead of building a string
    let file = std::fs::File::create(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    let mut w = std::io::BufWriter::new(file);
    (|| -> std::io::Result<()> {
        w.write_all(b"x_um,z_um,power\n")?;
        for (ix, &x) in pm.x_grid.iter().enumerate() {
            for (iz, &z) in pm.z_grid.iter().enumerate() {
                writeln!(w, "{:e},{:e},{:e}", x, z, pm.at(ix, iz))?;
            }
        }
        w.flush()
    })()
    .map_err(|e| io_err(&csv_path, e))?;

    let maxp = pm.power.iter().copied().fold(0.0f64, f64::max);
    let w = pm.z_grid.len();
    let h = pm.x_grid.len();
    let mut pgm = Vec::with_capacity(32 + w * h);
    pgm.extend_from_slice(format!("P5\n{w} {h}\n255\n").as_bytes());
    for ix in 0..h {
        for iz in 0..w {
            let v = if maxp > 0.0 {
                (pm.at(ix, iz) / maxp * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            pgm.push(v);
        }
    }
    std::fs::write(&pgm_path, pgm).map_err(|e| io_err(&pgm_path, e))?;
    Ok((csv_path, pgm_path))
}
