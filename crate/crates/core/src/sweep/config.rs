//! Sweep experiment description and its flat key=value file form.

use crate::model::Topology;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Which site pairs to measure. Labels are 1-based, matching the column
/// names `N_i_j` in the CSV output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSelection {
    /// (1, j) for every j = 2..n.
    FirstToAll,
    /// Explicit 1-based (i, j) pairs.
    Pairs(Vec<(usize, usize)>),
}

impl PairSelection {
    /// Resolve to 0-based site index pairs.
    pub fn resolve(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            PairSelection::FirstToAll => (1..n).map(|j| (0, j)).collect(),
            PairSelection::Pairs(ps) => ps.iter().map(|&(i, j)| (i - 1, j - 1)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub min_scale: f64,
    pub max_scale: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let k = self.points;
        if k == 1 {
            return vec![self.min_scale];
        }
        (0..k)
            .map(|i| {
                self.min_scale + (self.max_scale - self.min_scale) * i as f64 / (k - 1) as f64
            })
            .collect()
    }
}

/// A field-sweep experiment over a first-neighbor XY chain with x-coupling
/// fixed to 1 as the energy unit and anisotropy vʸ/vˣ = 1 − δ/(2sn).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub twice_s: u32,
    pub delta: f64,
    pub topology: Topology,
    /// Solution family name in the registry: "uniform" or "alternating".
    pub field_mode: String,
    /// Even/odd field ratio η = b_e/b_o (alternating mode only).
    pub eta: Option<f64>,
    pub grid: GridSpec,
    /// One-sided offset ε for side-limit evaluation at scale 1 ∓ ε.
    pub epsilon_side: f64,
    pub pairs: PairSelection,
    pub seed: u64,
    /// Append a half-chain entanglement-entropy column.
    pub entropy_half: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 8,
            twice_s: 1,
            delta: 2.5,
            topology: Topology::Open,
            field_mode: "uniform".into(),
            eta: None,
            grid: GridSpec { min_scale: 0.05, max_scale: 1.5, points: 150 },
            epsilon_side: 1e-4,
            pairs: PairSelection::FirstToAll,
            seed: 1,
            entropy_half: false,
        }
    }
}

impl SweepConfig {
    /// Anisotropy ratio χ = vʸ/vˣ = 1 − δ/(2sn).
    pub fn chi(&self) -> f64 {
        1.0 - self.delta / (self.twice_s as f64 * self.n as f64)
    }

    /// Presets reproducing the published sweep figures.
    pub fn figure_preset(which: u8) -> Option<SweepConfig> {
        let base = SweepConfig::default();
        match which {
            1 => Some(base),
            2 => Some(SweepConfig { twice_s: 3, delta: 7.5, ..base }),
            3 => Some(SweepConfig {
                twice_s: 3,
                delta: 7.5,
                field_mode: "alternating".into(),
                eta: Some(10.0),
                ..base
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let chi = self.chi();
        if !(chi > 0.0 && chi < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "χ = 1 − δ/(2sn) must lie in (0, 1), got {chi}"
            )));
        }
        if self.grid.points < 2 {
            return Err(ConfigError::Invalid("grid needs at least 2 points".into()));
        }
        if self.grid.min_scale >= self.grid.max_scale {
            return Err(ConfigError::Invalid("grid_min must be below grid_max".into()));
        }
        if !(self.epsilon_side > 0.0 && self.epsilon_side <= 1e-2) {
            return Err(ConfigError::Invalid(format!(
                "epsilon_side must lie in (0, 1e-2], got {}",
                self.epsilon_side
            )));
        }
        if self.field_mode == "alternating" && self.eta.is_none() {
            return Err(ConfigError::MissingKey("eta"));
        }
        if let PairSelection::Pairs(ps) = &self.pairs {
            for &(i, j) in ps {
                // 1-based site labels
                if i == 0 || j == 0 || i > self.n || j > self.n || i == j {
                    return Err(ConfigError::Invalid(format!(
                        "pair ({i}, {j}) invalid for n = {} (labels are 1-based)",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse the flat `key = value` form. Unknown keys are rejected;
    /// omitted keys keep their defaults.
    pub fn parse_text(text: &str) -> Result<SweepConfig, ConfigError> {
        let mut cfg = SweepConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                msg: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| ConfigError::Parse { line, msg };
            match key {
                "n" => cfg.n = value.parse().map_err(|_| bad(format!("bad n `{value}`")))?,
                "twice_s" => {
                    cfg.twice_s =
                        value.parse().map_err(|_| bad(format!("bad twice_s `{value}`")))?
                }
                "delta" => {
                    cfg.delta = value.parse().map_err(|_| bad(format!("bad delta `{value}`")))?
                }
                "topology" => {
                    cfg.topology = match value {
                        "open" => Topology::Open,
                        "cyclic" => Topology::Cyclic,
                        other => return Err(bad(format!("unknown topology `{other}`"))),
                    }
                }
                "field_mode" => cfg.field_mode = value.to_string(),
                "eta" => {
                    cfg.eta =
                        Some(value.parse().map_err(|_| bad(format!("bad eta `{value}`")))?)
                }
                "grid_min" => {
                    cfg.grid.min_scale =
                        value.parse().map_err(|_| bad(format!("bad grid_min `{value}`")))?
                }
                "grid_max" => {
                    cfg.grid.max_scale =
                        value.parse().map_err(|_| bad(format!("bad grid_max `{value}`")))?
                }
                "grid_points" => {
                    cfg.grid.points =
                        value.parse().map_err(|_| bad(format!("bad grid_points `{value}`")))?
                }
                "epsilon_side" => {
                    cfg.epsilon_side =
                        value.parse().map_err(|_| bad(format!("bad epsilon_side `{value}`")))?
                }
                "pairs" => {
                    cfg.pairs = if value == "first-to-all" {
                        PairSelection::FirstToAll
                    } else {
                        let mut pairs = Vec::new();
                        for tok in value.split(',') {
                            let (a, b) = tok
                                .trim()
                                .split_once(':')
                                .ok_or_else(|| bad(format!("bad pair `{tok}` (use i:j)")))?;
                            let i =
                                a.parse().map_err(|_| bad(format!("bad pair index `{a}`")))?;
                            let j =
                                b.parse().map_err(|_| bad(format!("bad pair index `{b}`")))?;
                            pairs.push((i, j));
                        }
                        PairSelection::Pairs(pairs)
                    }
                }
                "seed" => {
                    cfg.seed = value.parse().map_err(|_| bad(format!("bad seed `{value}`")))?
                }
                "entropy_half" => {
                    cfg.entropy_half =
                        value.parse().map_err(|_| bad(format!("bad entropy_half `{value}`")))?
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Emit the flat key=value form (round-trips through [`SweepConfig::parse_text`]).
    pub fn to_text(&self) -> String {
        let topology = match self.topology {
            Topology::Open => "open",
            Topology::Cyclic => "cyclic",
        };
        let pairs = match &self.pairs {
            PairSelection::FirstToAll => "first-to-all".to_string(),
            PairSelection::Pairs(ps) => ps
                .iter()
                .map(|(i, j)| format!("{i}:{j}"))
                .collect::<Vec<_>>()
                .join(","),
        };
        let mut out = format!(
            "n = {}\ntwice_s = {}\ndelta = {}\ntopology = {}\nfield_mode = {}\n",
            self.n, self.twice_s, self.delta, topology, self.field_mode
        );
        if let Some(eta) = self.eta {
            out.push_str(&format!("eta = {eta}\n"));
        }
        out.push_str(&format!(
            "grid_min = {}\ngrid_max = {}\ngrid_points = {}\nepsilon_side = {}\npairs = {}\nseed = {}\nentropy_half = {}\n",
            self.grid.min_scale,
            self.grid.max_scale,
            self.grid.points,
            self.epsilon_side,
            pairs,
            self.seed,
            self.entropy_half
        ));
        out
    }
}
