//! Interchangeable separable-solution families behind a common trait,
//! registered by name and selected at runtime through the sweep config.

use super::config::SweepConfig;
use super::SweepError;
use crate::factor::{alternating_solution, uniform_solution, AlternatingDrive};
use crate::model::{CouplingTensor, ModelSpec};
use crate::spin::SpinValue;
use std::collections::BTreeMap;

/// One way of placing a chain on the separability manifold: it fixes the
/// couplings, the factorizing field profile (scale 1) and the product-state
/// angles there. Field profiles scale linearly, so a sweep point at scale λ
/// simply multiplies the factorizing profile.
pub trait SolutionFamily: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// The model at the separability point (scale 1).
    fn base_model(&self, cfg: &SweepConfig) -> Result<ModelSpec, SweepError>;

    /// Per-site angles of the separable pair at scale 1.
    fn separable_angles(&self, cfg: &SweepConfig) -> Result<Vec<f64>, SweepError>;

    /// The factorizing field in energy units (the sweep's scale unit).
    fn factorizing_field(&self, cfg: &SweepConfig) -> f64;

    /// CSV column names for the applied fields.
    fn field_headers(&self) -> Vec<&'static str>;

    /// CSV column values for the applied fields at one scale.
    fn field_values(&self, cfg: &SweepConfig, scale: f64) -> Vec<f64>;

    /// The model at an arbitrary scale: factorizing fields times λ, with
    /// border and sublattice ratios preserved.
    fn model_at(&self, cfg: &SweepConfig, scale: f64) -> Result<ModelSpec, SweepError> {
        let base = self.base_model(cfg)?;
        let fields = base.fields.scaled(scale);
        Ok(base.with_fields(fields))
    }
}

fn spin_of(cfg: &SweepConfig) -> Result<SpinValue, SweepError> {
    SpinValue::from_twice(cfg.twice_s)
        .ok_or_else(|| SweepError::Config(super::config::ConfigError::Invalid("2s must be ≥ 1".into())))
}

/// Common angle θ with cos²θ = χ; open-chain borders carry half the inner
/// field.
pub struct UniformFamily;

impl SolutionFamily for UniformFamily {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn base_model(&self, cfg: &SweepConfig) -> Result<ModelSpec, SweepError> {
        let s = spin_of(cfg)?;
        let bare = CouplingTensor::first_neighbor(cfg.n, cfg.topology, 1.0, 0.0, 0.0);
        let u = uniform_solution(&bare.vx, &bare.vz, cfg.chi(), &vec![s; cfg.n])?;
        Ok(ModelSpec::new(vec![s; cfg.n], u.couplings, u.fields))
    }

    fn separable_angles(&self, cfg: &SweepConfig) -> Result<Vec<f64>, SweepError> {
        Ok(vec![cfg.chi().sqrt().acos(); cfg.n])
    }

    fn factorizing_field(&self, cfg: &SweepConfig) -> f64 {
        cfg.twice_s as f64 * cfg.chi().sqrt()
    }

    fn field_headers(&self) -> Vec<&'static str> {
        vec!["b_inner"]
    }

    fn field_values(&self, cfg: &SweepConfig, scale: f64) -> Vec<f64> {
        vec![scale * self.factorizing_field(cfg)]
    }
}

/// Two-sublattice fields with fixed ratio η = b_e/b_o on the separability
/// curve b_e·b_o = (2s)²vˣvʸ; scale 1 sits at b_o = b_os = b_s/√η.
pub struct AlternatingFamily;

impl SolutionFamily for AlternatingFamily {
    fn name(&self) -> &'static str {
        "alternating"
    }

    fn base_model(&self, cfg: &SweepConfig) -> Result<ModelSpec, SweepError> {
        let s = spin_of(cfg)?;
        let sol = self.solution(cfg)?;
        Ok(ModelSpec::new(vec![s; cfg.n], sol.couplings, sol.fields))
    }

    fn separable_angles(&self, cfg: &SweepConfig) -> Result<Vec<f64>, SweepError> {
        Ok(self.solution(cfg)?.angles)
    }

    fn factorizing_field(&self, cfg: &SweepConfig) -> f64 {
        let b_s = cfg.twice_s as f64 * cfg.chi().sqrt();
        b_s / cfg.eta.unwrap_or(1.0).sqrt()
    }

    fn field_headers(&self) -> Vec<&'static str> {
        vec!["b_odd", "b_even"]
    }

    fn field_values(&self, cfg: &SweepConfig, scale: f64) -> Vec<f64> {
        let b_o = scale * self.factorizing_field(cfg);
        vec![b_o, cfg.eta.unwrap_or(1.0) * b_o]
    }
}

impl AlternatingFamily {
    fn solution(
        &self,
        cfg: &SweepConfig,
    ) -> Result<crate::factor::AlternatingSolution, SweepError> {
        let s = spin_of(cfg)?;
        let eta = cfg.eta.ok_or(SweepError::Config(
            super::config::ConfigError::MissingKey("eta"),
        ))?;
        Ok(alternating_solution(
            1.0,
            cfg.chi(),
            s,
            cfg.n,
            cfg.topology,
            AlternatingDrive::EvenOddRatio(eta),
        )?)
    }
}

/// Name-keyed registry of solution families.
pub struct FamilyRegistry {
    entries: BTreeMap<&'static str, Box<dyn SolutionFamily>>,
}

impl FamilyRegistry {
    pub fn with_builtins() -> Self {
        let mut reg = Self { entries: BTreeMap::new() };
        reg.register(Box::new(UniformFamily));
        reg.register(Box::new(AlternatingFamily));
        reg
    }

    pub fn register(&mut self, family: Box<dyn SolutionFamily>) {
        self.entries.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SolutionFamily> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}
