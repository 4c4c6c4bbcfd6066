//! Flat key-value run configuration.
//!
//! The file format is one `section.key = value` per line, `#` comments,
//! no nesting. Every key has a default (the reference geometry); overrides
//! from a file and from repeated `--set key=value` flags apply in that order.
//! `render` writes the effective configuration back in the same format, so a
//! run can be reproduced from its own snapshot.

use anyhow::{anyhow, bail, Context, Result};
use ptdc_core::spectral::SineBasis;
use ptdc_core::waveguide::CouplerGeometry;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub geometry: CouplerGeometry,
    pub basis_box_length: f64,
    pub basis_n_funcs: usize,
    pub sweep_alpha_min: f64,
    pub sweep_alpha_max: f64,
    pub sweep_n_points: usize,
    pub ep_bracket_lo: f64,
    pub ep_bracket_hi: f64,
    pub ep_tol: f64,
    pub perturbation_target_index: usize,
    pub perturbation_max_order: usize,
    pub perturbation_lambda_fractions: Vec<f64>,
    pub propagation_alpha_fractions: Vec<f64>,
    pub propagation_x_min: f64,
    pub propagation_x_max: f64,
    pub propagation_x_points: usize,
    pub propagation_z_points: usize,
    pub propagation_z_max_beats: f64,
    pub output_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            geometry: CouplerGeometry::default(),
            basis_box_length: 90.0,
            basis_n_funcs: 900,
            sweep_alpha_min: 0.0,
            sweep_alpha_max: 12.0,
            sweep_n_points: 49,
            ep_bracket_lo: 6.0,
            ep_bracket_hi: 10.0,
            ep_tol: 1e-4,
            perturbation_target_index: 0,
            perturbation_max_order: 40,
            perturbation_lambda_fractions: vec![0.2, 0.4, 0.6, 0.8],
            propagation_alpha_fractions: vec![0.0, 0.6, 0.95],
            propagation_x_min: -15.0,
            propagation_x_max: 15.0,
            propagation_x_points: 601,
            propagation_z_points: 2001,
            propagation_z_max_beats: 4.0,
            output_dir: "out".to_string(),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| anyhow!("config: field {key}: not a number: {value:?}"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| anyhow!("config: field {key}: not a non-negative integer: {value:?}"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("config: field {key}: not a comma-separated number list: {value:?}"))
        })
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "geometry.n0" => self.geometry.n0 = parse_f64(key, value)?,
            "geometry.delta_n" => self.geometry.delta_n = parse_f64(key, value)?,
            "geometry.half_width_a" => self.geometry.half_width_a = parse_f64(key, value)?,
            "geometry.vacuum_wavelength" => {
                self.geometry.vacuum_wavelength = parse_f64(key, value)?
            }
            "geometry.delta_alpha" => self.geometry.delta_alpha = parse_f64(key, value)?,
            "basis.box_length" => self.basis_box_length = parse_f64(key, value)?,
            "basis.n_funcs" => self.basis_n_funcs = parse_usize(key, value)?,
            "sweep.alpha_min" => self.sweep_alpha_min = parse_f64(key, value)?,
            "sweep.alpha_max" => self.sweep_alpha_max = parse_f64(key, value)?,
            "sweep.n_points" => self.sweep_n_points = parse_usize(key, value)?,
            "ep.bracket_lo" => self.ep_bracket_lo = parse_f64(key, value)?,
            "ep.bracket_hi" => self.ep_bracket_hi = parse_f64(key, value)?,
            "ep.tol" => self.ep_tol = parse_f64(key, value)?,
            "perturbation.target_index" => {
                self.perturbation_target_index = parse_usize(key, value)?
            }
            "perturbation.max_order" => self.perturbation_max_order = parse_usize(key, value)?,
            "perturbation.lambda_fractions" => {
                self.perturbation_lambda_fractions = parse_list(key, value)?
            }
            "propagation.alpha_fractions" => {
                self.propagation_alpha_fractions = parse_list(key, value)?
            }
            "propagation.x_min" => self.propagation_x_min = parse_f64(key, value)?,
            "propagation.x_max" => self.propagation_x_max = parse_f64(key, value)?,
            "propagation.x_points" => self.propagation_x_points = parse_usize(key, value)?,
            "propagation.z_points" => self.propagation_z_points = parse_usize(key, value)?,
            "propagation.z_max_beats" => self.propagation_z_max_beats = parse_f64(key, value)?,
            "output.dir" => self.output_dir = value.to_string(),
            _ => bail!("config: field {key}: unknown key"),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config: line {}: expected key = value", lineno + 1))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("config: cannot read {}", path.display()))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry
            .validate()
            .map_err(|e| anyhow!("config: geometry: {e}"))?;
        if self.sweep_n_points < 1 {
            bail!("config: field sweep.n_points: must be at least 1");
        }
        if !(self.sweep_alpha_max > self.sweep_alpha_min) && self.sweep_n_points > 1 {
            bail!("config: field sweep.alpha_max: non-increasing sweep range");
        }
        if !(self.ep_bracket_hi > self.ep_bracket_lo) {
            bail!("config: field ep.bracket_hi: bracket must satisfy lo < hi");
        }
        if !(self.ep_tol > 0.0) {
            bail!("config: field ep.tol: must be positive");
        }
        if self.propagation_x_points < 2 || self.propagation_z_points < 2 {
            bail!("config: field propagation.*_points: need at least 2 samples");
        }
        if !(self.propagation_x_max > self.propagation_x_min) {
            bail!("config: field propagation.x_max: empty x range");
        }
        if !(self.propagation_z_max_beats > 0.0) {
            bail!("config: field propagation.z_max_beats: must be positive");
        }
        for f in &self.propagation_alpha_fractions {
            if !(*f >= 0.0) {
                bail!("config: field propagation.alpha_fractions: fractions must be >= 0");
            }
        }
        SineBasis::new(self.basis_box_length, self.basis_n_funcs)
            .map_err(|e| anyhow!("config: basis: {e}"))?;
        Ok(())
    }

    pub fn basis(&self) -> SineBasis {
        SineBasis::new(self.basis_box_length, self.basis_n_funcs)
            .expect("validated basis parameters")
    }

    /// Effective configuration in the input format, re-parseable.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let g = &self.geometry;
        s.push_str(&format!("geometry.n0 = {:e}\n", g.n0));
        s.push_str(&format!("geometry.delta_n = {:e}\n", g.delta_n));
        s.push_str(&format!("geometry.half_width_a = {:e}\n", g.half_width_a));
        s.push_str(&format!(
            "geometry.vacuum_wavelength = {:e}\n",
            g.vacuum_wavelength
        ));
        s.push_str(&format!("geometry.delta_alpha = {:e}\n", g.delta_alpha));
        s.push_str(&format!("basis.box_length = {:e}\n", self.basis_box_length));
        s.push_str(&format!("basis.n_funcs = {}\n", self.basis_n_funcs));
        s.push_str(&format!("sweep.alpha_min = {:e}\n", self.sweep_alpha_min));
        s.push_str(&format!("sweep.alpha_max = {:e}\n", self.sweep_alpha_max));
        s.push_str(&format!("sweep.n_points = {}\n", self.sweep_n_points));
        s.push_str(&format!("ep.bracket_lo = {:e}\n", self.ep_bracket_lo));
        s.push_str(&format!("ep.bracket_hi = {:e}\n", self.ep_bracket_hi));
        s.push_str(&format!("ep.tol = {:e}\n", self.ep_tol));
        s.push_str(&format!(
            "perturbation.target_index = {}\n",
            self.perturbation_target_index
        ));
        s.push_str(&format!(
            "perturbation.max_order = {}\n",
            self.perturbation_max_order
        ));
        s.push_str(&format!(
            "perturbation.lambda_fractions = {}\n",
            join_list(&self.perturbation_lambda_fractions)
        ));
        s.push_str(&format!(
            "propagation.alpha_fractions = {}\n",
            join_list(&self.propagation_alpha_fractions)
        ));
        s.push_str(&format!("propagation.x_min = {:e}\n", self.propagation_x_min));
        s.push_str(&format!("propagation.x_max = {:e}\n", self.propagation_x_max));
        s.push_str(&format!(
            "propagation.x_points = {}\n",
            self.propagation_x_points
        ));
        s.push_str(&format!(
            "propagation.z_points = {}\n",
            self.propagation_z_points
        ));
        s.push_str(&format!(
            "propagation.z_max_beats = {:e}\n",
            self.propagation_z_max_beats
        ));
        s.push_str(&format!("output.dir = {}\n", self.output_dir));
        s
    }
}

fn join_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:e}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_render_and_roundtrip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let text = cfg.render();
        let mut parsed = RunConfig::default();
        parsed.apply_text(&text).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn overrides_and_comments() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\n  geometry.delta_alpha = 8.0 # inline\n\nbasis.n_funcs = 321\n")
            .unwrap();
        assert_eq!(cfg.geometry.delta_alpha, 8.0);
        assert_eq!(cfg.basis_n_funcs, 321);
    }

    #[test]
    fn errors_name_field_and_reason() {
        let mut cfg = RunConfig::default();
        let err = cfg.set("geometry.n0", "abc").unwrap_err().to_string();
        assert!(err.contains("geometry.n0") && err.contains("not a number"), "{err}");
        let err = cfg.set("geometry.bogus", "1").unwrap_err().to_string();
        assert!(err.contains("unknown key"), "{err}");
        let err = cfg.apply_text("just nonsense\n").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        let mut cfg = RunConfig::default();
        cfg.sweep_alpha_max = cfg.sweep_alpha_min;
        cfg.sweep_n_points = 2;
        assert!(cfg.validate().is_err());

        let mut cfg = RunConfig::default();
        cfg.geometry.delta_n = -1.0;
        assert!(cfg.validate().is_err());
    }
}
