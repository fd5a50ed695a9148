//! Experiment configuration: TOML file, defaults, CLI overrides.

use std::path::{Path, PathBuf};

use kinlim_core::{classify_regime, RegimeClass, ScalingRegime};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Nonlinearity scaling exponent.
    pub r: f64,
    /// Collision (Knudsen) scaling exponent.
    pub q: f64,
    /// Strictly decreasing ladder of epsilon values, each in (0, 0.5].
    pub epsilons: Vec<f64>,
    /// Fourier modes per spatial axis (even, >= 4).
    pub spatial_modes: usize,
    /// Gauss-Hermite nodes per velocity axis (even, >= 4).
    pub velocity_nodes: usize,
    /// BGK collision frequency.
    pub nu0: f64,
    /// Source amplitude a in f = a (sin x2, 0), h = a sin x1.
    pub amplitude: f64,
    /// dt = dt_safety * epsilon * dx / v_max.
    pub dt_safety: f64,
    /// Relative time-derivative threshold for steady detection.
    pub steady_tol: f64,
    pub max_steps: usize,
    /// Quadratic collision source on/off.
    pub include_gamma: bool,
    /// Where sweep reports are written.
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            r: 0.5,
            q: 0.5,
            epsilons: vec![0.2, 0.1, 0.05],
            spatial_modes: 32,
            velocity_nodes: 8,
            nu0: 1.0,
            amplitude: 0.05,
            dt_safety: 0.5,
            steady_tol: 1e-7,
            max_steps: 500_000,
            include_gamma: true,
            output_dir: PathBuf::from("reports"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::File {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| HarnessError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Validate and classify; sweep commands additionally require an
    /// in-scope regime.
    pub fn validate(&self, require_in_scope: bool) -> Result<ScalingRegime, HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.epsilons.is_empty() {
            return bad("epsilon ladder is empty".into());
        }
        for w in self.epsilons.windows(2) {
            if w[1] >= w[0] {
                return bad(format!(
                    "epsilon ladder must be strictly decreasing, got {} then {}",
                    w[0], w[1]
                ));
            }
        }
        for &e in &self.epsilons {
            if !(e > 0.0 && e <= 0.5) {
                return bad(format!("epsilon values must lie in (0, 0.5], got {e}"));
            }
        }
        if self.spatial_modes < 4 || self.spatial_modes % 2 != 0 {
            return bad(format!(
                "spatial_modes must be even and >= 4, got {}",
                self.spatial_modes
            ));
        }
        if self.velocity_nodes < 4 || self.velocity_nodes % 2 != 0 {
            return bad(format!(
                "velocity_nodes must be even and >= 4, got {}",
                self.velocity_nodes
            ));
        }
        if !(self.nu0 > 0.0) {
            return bad(format!("nu0 must be positive, got {}", self.nu0));
        }
        if !(self.dt_safety > 0.0) {
            return bad(format!("dt_safety must be positive, got {}", self.dt_safety));
        }
        if !(self.steady_tol > 0.0) {
            return bad(format!("steady_tol must be positive, got {}", self.steady_tol));
        }
        if self.amplitude < 0.0 {
            return bad(format!("amplitude must be >= 0, got {}", self.amplitude));
        }
        let regime = classify_regime(self.r, self.q);
        if require_in_scope && regime.class == RegimeClass::OutOfScope {
            return bad(format!(
                "scaling pair (r = {}, q = {}) selects no limit system",
                self.r, self.q
            ));
        }
        Ok(regime)
    }
}

/// CLI override flags; every config key has one.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ConfigOverrides {
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated ladder, e.g. 0.2,0.1,0.05
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Option<Vec<f64>>,
    #[arg(long)]
    pub spatial_modes: Option<usize>,
    #[arg(long)]
    pub velocity_nodes: Option<usize>,
    #[arg(long)]
    pub nu0: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub dt_safety: Option<f64>,
    #[arg(long)]
    pub steady_tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Disable the quadratic collision source.
    #[arg(long)]
    pub no_gamma: bool,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            };
        }
        set!(r);
        set!(q);
        set!(epsilons);
        set!(spatial_modes);
        set!(velocity_nodes);
        set!(nu0);
        set!(amplitude);
        set!(dt_safety);
        set!(steady_tol);
        set!(max_steps);
        set!(output_dir);
        if self.no_gamma {
            cfg.include_gamma = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_nsf() {
        let cfg = ExperimentConfig::default();
        let regime = cfg.validate(true).unwrap();
        assert_eq!(regime.class, RegimeClass::NavierStokesFourier);
    }

    #[test]
    fn toml_round_trip_and_overrides() {
        let cfg = ExperimentConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.epsilons, cfg.epsilons);

        let mut cfg = ExperimentConfig::default();
        let ov = ConfigOverrides {
            q: Some(2.0),
            r: Some(0.5),
            epsilons: Some(vec![0.4, 0.2]),
            no_gamma: true,
            ..Default::default()
        };
        ov.apply(&mut cfg);
        assert_eq!(cfg.q, 2.0);
        assert_eq!(cfg.epsilons, vec![0.4, 0.2]);
        assert!(!cfg.include_gamma);
        assert_eq!(cfg.validate(true).unwrap().class, RegimeClass::Euler);
    }

    #[test]
    fn rejects_bad_ladders_and_out_of_scope() {
        let mut cfg = ExperimentConfig::default();
        cfg.epsilons = vec![0.1, 0.2];
        assert!(cfg.validate(true).is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.epsilons = vec![0.6, 0.3];
        assert!(cfg.validate(true).is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.r = 1.5;
        cfg.q = 1.5;
        assert!(cfg.validate(true).is_err());
        assert!(cfg.validate(false).is_ok());
    }
}
