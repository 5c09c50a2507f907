//! Layered experiment configuration: TOML file with one section per
//! experiment, command-line overrides for seed, workers, and output
//! directory. Defaults reproduce the acceptance settings.

use crate::{invalid, io_err, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub run: RunConfig,
    pub stats: StatsConfig,
    pub sample: SampleConfig,
    pub toeplitz: ToeplitzConfig,
    pub diff: DiffConfig,
    pub asymptotics: AsymptoticsConfig,
    pub fb: FbConfig,
    pub ck: CkConfig,
    pub mass: MassConfig,
    pub smoke: SmokeConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    /// Monte Carlo comparisons pass within this many standard errors.
    pub se_band: f64,
    /// Kolmogorov-Smirnov comparisons pass above this p-value.
    pub p_threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub n: usize,
    pub draws: u64,
    /// Trace moments E Tr U^j conj(Tr U^k) are checked for j, k up to here.
    pub max_mode: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToeplitzConfig {
    /// Empty path selects the built-in symbol corpus.
    pub corpus: PathBuf,
    pub bridge_n: usize,
    pub bridge_draws: u64,
    pub bridge_symbols: usize,
    /// Determinant identities are checked for all sizes up to here.
    pub max_size: usize,
    pub det_rel_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffConfig {
    pub n: usize,
    pub t_values: Vec<f64>,
    /// Indices into the symbol corpus.
    pub symbols: Vec<usize>,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticsConfig {
    pub theta: f64,
    pub theta_prime: f64,
    pub testimate_sizes: Vec<usize>,
    pub testimate_tol: f64,
    pub dik_sizes: Vec<usize>,
    pub dik_distances: Vec<f64>,
    pub dik_tol: f64,
    pub widom_n: usize,
    pub widom_s: Vec<f64>,
    pub widom_t: Vec<f64>,
    pub widom_tol: f64,
    pub logsum_power_lo: u32,
    pub logsum_power_hi: u32,
    pub logsum_deltas: usize,
    pub logsum_bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FbConfig {
    pub beta: f64,
    pub n: usize,
    pub draws: u64,
    pub grid_size: usize,
    /// Larger size rerun reported as a supplement, to show the finite-N gap closing.
    pub convergence_n: usize,
    pub convergence_grid: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CkConfig {
    pub beta: f64,
    pub n: usize,
    pub theta: f64,
    /// Mesoscopic window [window_lo_factor / n, window_hi].
    pub window_lo_factor: f64,
    pub window_hi: f64,
    pub points: usize,
    pub slope_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MassConfig {
    pub n: usize,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub m: usize,
    pub l_values: Vec<usize>,
    pub draws: u64,
    pub grid_size: usize,
    pub recon_tol: f64,
    pub gaussian_m: usize,
    pub gaussian_draws: u64,
    pub gaussian_angles: usize,
    pub gaussian_grid: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmokeConfig {
    pub n: usize,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub m: usize,
    pub l: usize,
    pub draws: u64,
    pub grid_size: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            run: RunConfig::default(),
            stats: StatsConfig::default(),
            sample: SampleConfig::default(),
            toeplitz: ToeplitzConfig::default(),
            diff: DiffConfig::default(),
            asymptotics: AsymptoticsConfig::default(),
            fb: FbConfig::default(),
            ck: CkConfig::default(),
            mass: MassConfig::default(),
            smoke: SmokeConfig::default(),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            workers: 1,
            out: PathBuf::from("out"),
        }
    }
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig {
            se_band: 4.0,
            p_threshold: 0.01,
        }
    }
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            n: 16,
            draws: 200_000,
            max_mode: 8,
        }
    }
}

impl Default for ToeplitzConfig {
    fn default() -> Self {
        ToeplitzConfig {
            corpus: PathBuf::new(),
            bridge_n: 8,
            bridge_draws: 200_000,
            bridge_symbols: 3,
            max_size: 64,
            det_rel_tol: 1e-8,
        }
    }
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            n: 8,
            t_values: vec![0.25, 0.5, 0.75],
            symbols: vec![0, 3],
            tol: 1e-4,
        }
    }
}

impl Default for AsymptoticsConfig {
    fn default() -> Self {
        AsymptoticsConfig {
            theta: 0.7,
            theta_prime: 2.3,
            testimate_sizes: vec![32, 64, 128, 256],
            testimate_tol: 0.05,
            dik_sizes: vec![64, 128, 256],
            dik_distances: vec![std::f64::consts::PI, std::f64::consts::FRAC_PI_2, 1.0],
            dik_tol: 0.02,
            widom_n: 256,
            widom_s: vec![0.3, -0.2],
            widom_t: vec![0.1, 0.25],
            widom_tol: 0.05,
            logsum_power_lo: 4,
            logsum_power_hi: 12,
            logsum_deltas: 64,
            logsum_bound: 3.0,
        }
    }
}

impl Default for FbConfig {
    fn default() -> Self {
        FbConfig {
            beta: 1.0,
            n: 64,
            draws: 2000,
            grid_size: 1 << 12,
            convergence_n: 512,
            convergence_grid: 1 << 13,
        }
    }
}

impl Default for CkConfig {
    fn default() -> Self {
        CkConfig {
            beta: std::f64::consts::SQRT_2,
            n: 256,
            theta: 0.7,
            window_lo_factor: 8.0,
            window_hi: 0.25,
            points: 8,
            slope_tol: 0.15,
        }
    }
}

impl Default for MassConfig {
    fn default() -> Self {
        MassConfig {
            n: 64,
            beta: 1.0,
            gamma: 1.2,
            delta: 0.2,
            m: 16,
            l_values: vec![2, 3, 4],
            draws: 1000,
            grid_size: 1 << 10,
            recon_tol: 1e-10,
            gaussian_m: 32,
            gaussian_draws: 100_000,
            gaussian_angles: 8,
            gaussian_grid: 256,
        }
    }
}

impl Default for SmokeConfig {
    fn default() -> Self {
        SmokeConfig {
            n: 8,
            beta: 1.0,
            gamma: 1.2,
            delta: 0.2,
            m: 4,
            l: 2,
            draws: 100,
            grid_size: 1 << 12,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let config: Config = toml::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.run.workers < 1 {
            return Err(invalid("worker count must be at least 1"));
        }
        for (name, draws) in [
            ("sample", self.sample.draws),
            ("toeplitz", self.toeplitz.bridge_draws),
            ("fb", self.fb.draws),
            ("mass", self.mass.draws),
            ("mass (gaussian)", self.mass.gaussian_draws),
            ("smoke", self.smoke.draws),
        ] {
            if draws == 0 {
                return Err(invalid(format!("{name} draw count must be positive")));
            }
        }
        if self.sample.n == 0 || self.toeplitz.bridge_n == 0 || self.fb.n == 0 {
            return Err(invalid("matrix sizes must be positive"));
        }
        if !(0.0 < self.fb.beta && self.fb.beta < 2.0) {
            return Err(invalid("the mass-law comparison needs β in (0, 2)"));
        }
        if self.asymptotics.widom_s.len() != self.asymptotics.widom_t.len() {
            return Err(invalid("widom weight sequences must have equal length"));
        }
        if self.asymptotics.logsum_power_lo > self.asymptotics.logsum_power_hi {
            return Err(invalid("logsum power range is reversed"));
        }
        if self.ck.points < 5 {
            return Err(invalid("the scaling regression needs at least 5 points"));
        }
        let lo = self.ck.window_lo_factor / self.ck.n as f64;
        if !(lo > 0.0 && lo < self.ck.window_hi && self.ck.window_hi < std::f64::consts::PI) {
            return Err(invalid("mesoscopic window must satisfy 0 < lo < hi < π"));
        }
        if !(0.0 < self.mass.delta && self.mass.delta < 1.0)
            || !(0.0 < self.smoke.delta && self.smoke.delta < 1.0)
        {
            return Err(invalid("scale-cutoff exponents must lie in (0, 1)"));
        }
        if self.mass.l_values.is_empty() {
            return Err(invalid("need at least one barrier base scale"));
        }
        Ok(())
    }
}
