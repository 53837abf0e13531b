//! Versioned JSON project configuration: model parameters, curve
//! templates, constraint bounds, region-solver settings, and simulation
//! settings.

use std::collections::BTreeMap;

use beztraj_core::flat::quad::QuadParams;
use beztraj_core::flat::sigmoid::Sigmoid;
use beztraj_core::flat::vehicle::VehicleParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectConfig {
    pub version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub region: RegionSettings,
    #[serde(default)]
    pub simulation: SimSettings,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ModelConfig {
    Vehicle(VehicleModel),
    Quad(QuadModel),
}

/// Template of a Bezier flat-output curve: some control points pinned to
/// numbers, the rest free parameters named `{prefix}{index}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveTemplate {
    pub degree: usize,
    pub horizon: f64,
    /// Pinned control points by index (JSON object keys are strings).
    #[serde(default)]
    pub pinned: BTreeMap<String, f64>,
    /// Name prefix for the free control points.
    #[serde(default = "default_prefix")]
    pub prefix: String,
    /// Parameter box applied to every free control point.
    pub param_box: (f64, f64),
}

fn default_prefix() -> String {
    "a".to_string()
}

impl CurveTemplate {
    pub fn validate(&self, min_degree: usize) -> Result<(), CliError> {
        if self.degree < min_degree {
            return Err(CliError::config(format!(
                "curve degree {} below model minimum {min_degree}",
                self.degree
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CliError::config(format!("bad horizon {}", self.horizon)));
        }
        for i in self.pinned_map()?.keys() {
            if *i > self.degree {
                return Err(CliError::config(format!(
                    "pinned index {i} exceeds degree {}",
                    self.degree
                )));
            }
        }
        if !(self.param_box.0 < self.param_box.1) {
            return Err(CliError::config(format!(
                "empty parameter box {:?}",
                self.param_box
            )));
        }
        Ok(())
    }

    /// Pinned indices parsed to numbers.
    pub fn pinned_map(&self) -> Result<BTreeMap<usize, f64>, CliError> {
        self.pinned
            .iter()
            .map(|(k, &v)| {
                k.parse::<usize>()
                    .map(|i| (i, v))
                    .map_err(|_| CliError::config(format!("bad pinned index `{k}`")))
            })
            .collect()
    }

    /// Free control-point parameter names in index order.
    pub fn free_names(&self) -> Vec<String> {
        let pinned = self.pinned_map().unwrap_or_default();
        (0..=self.degree)
            .filter(|i| !pinned.contains_key(i))
            .map(|i| format!("{}{i}", self.prefix))
            .collect()
    }

    /// Numeric control points from the pins plus free values in index
    /// order.
    pub fn numeric_points(&self, free_values: &[f64]) -> Result<Vec<f64>, CliError> {
        let pinned = self.pinned_map()?;
        let free_count = self.degree + 1 - pinned.len();
        if free_values.len() != free_count {
            return Err(CliError::usage(format!(
                "expected {free_count} free control points, got {}",
                free_values.len()
            )));
        }
        let mut it = free_values.iter();
        Ok((0..=self.degree)
            .map(|i| match pinned.get(&i) {
                Some(&v) => v,
                None => *it.next().expect("count checked"),
            })
            .collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VehicleModel {
    #[serde(default = "VehicleParamsCfg::default")]
    pub params: VehicleParamsCfg,
    pub curve: CurveTemplate,
    /// Input band (lo, hi) imposed on every input control point.
    pub input_bounds: (f64, f64),
    #[serde(default = "default_true")]
    pub strict: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VehicleParamsCfg {
    pub mass: f64,
    pub wheel_radius: f64,
    pub aero_coeff: f64,
}

impl Default for VehicleParamsCfg {
    fn default() -> Self {
        let d = VehicleParams::default();
        Self {
            mass: d.mass,
            wheel_radius: d.wheel_radius,
            aero_coeff: d.aero_coeff,
        }
    }
}

impl VehicleModel {
    pub fn core_params(&self) -> VehicleParams {
        VehicleParams {
            mass: self.params.mass,
            wheel_radius: self.params.wheel_radius,
            aero_coeff: self.params.aero_coeff,
            horizon: self.curve.horizon,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadModel {
    #[serde(default = "QuadParamsCfg::default")]
    pub params: QuadParamsCfg,
    /// Horizontal reference template (constraint compilation target).
    pub x: CurveTemplate,
    /// Lateral numeric control points for simulation (shares x's horizon).
    #[serde(default)]
    pub y_points: Vec<f64>,
    /// Constant yaw reference.
    #[serde(default)]
    pub psi: f64,
    pub sigmoid: SigmoidCfg,
    /// Degree the acceleration curve is elevated to before bounding.
    #[serde(default = "default_elevation")]
    pub elevation: usize,
}

fn default_elevation() -> usize {
    16
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadParamsCfg {
    pub mass: f64,
    pub gravity: f64,
    pub inertia_x: f64,
    pub inertia_y: f64,
    pub inertia_z: f64,
    pub thrust_max: f64,
    pub theta_max: f64,
    pub phi_max: f64,
    pub torque_x_max: f64,
    pub torque_y_max: f64,
    pub torque_z_max: f64,
}

impl Default for QuadParamsCfg {
    fn default() -> Self {
        let d = QuadParams::default();
        Self {
            mass: d.mass,
            gravity: d.gravity,
            inertia_x: d.inertia_x,
            inertia_y: d.inertia_y,
            inertia_z: d.inertia_z,
            thrust_max: d.thrust_max,
            theta_max: d.theta_max,
            phi_max: d.phi_max,
            torque_x_max: d.torque_x_max,
            torque_y_max: d.torque_y_max,
            torque_z_max: d.torque_z_max,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmoidCfg {
    pub initial_alt: f64,
    pub final_alt: f64,
    pub slope: f64,
    pub takeoff_time: f64,
}

impl QuadModel {
    pub fn core_params(&self) -> QuadParams {
        QuadParams {
            mass: self.params.mass,
            gravity: self.params.gravity,
            inertia_x: self.params.inertia_x,
            inertia_y: self.params.inertia_y,
            inertia_z: self.params.inertia_z,
            thrust_max: self.params.thrust_max,
            theta_max: self.params.theta_max,
            phi_max: self.params.phi_max,
            torque_x_max: self.params.torque_x_max,
            torque_y_max: self.params.torque_y_max,
            torque_z_max: self.params.torque_z_max,
        }
    }

    pub fn core_sigmoid(&self) -> Result<Sigmoid, CliError> {
        Sigmoid::new(
            self.sigmoid.initial_alt,
            self.sigmoid.final_alt,
            self.sigmoid.slope,
            self.sigmoid.takeoff_time,
        )
        .map_err(|e| CliError::config(format!("sigmoid: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionSettings {
    pub min_width: f64,
    pub budget: usize,
    /// When present, a seeded Monte-Carlo cross-check is attached to the
    /// region statistics.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
}

fn default_mc_samples() -> usize {
    100_000
}

impl Default for RegionSettings {
    fn default() -> Self {
        Self {
            min_width: 1e-2,
            budget: 1_000_000,
            seed: None,
            mc_samples: default_mc_samples(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimSettings {
    #[serde(default = "default_law")]
    pub law: String,
    /// Vehicle proportional gain.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    /// Additive offset on the initial flat outputs (tracking-error seed).
    #[serde(default)]
    pub ic_offset: f64,
}

fn default_law() -> String {
    "open".to_string()
}

fn default_lambda() -> f64 {
    9.0
}

fn default_step() -> f64 {
    1e-3
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            law: default_law(),
            lambda: default_lambda(),
            step: default_step(),
            ic_offset: 0.0,
        }
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ProjectConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ProjectConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    if cfg.version != CONFIG_SCHEMA_VERSION {
        return Err(CliError::config(format!(
            "unsupported config version {}",
            cfg.version
        )));
    }
    match &cfg.model {
        ModelConfig::Vehicle(v) => {
            v.curve.validate(2)?;
            if !(v.input_bounds.0 < v.input_bounds.1) {
                return Err(CliError::config(format!(
                    "empty input band {:?}",
                    v.input_bounds
                )));
            }
        }
        ModelConfig::Quad(q) => {
            q.x.validate(4)?;
            // the elevation target applies to the degree-(N-2)
            // acceleration curve
            if q.elevation < q.x.degree - 2 {
                return Err(CliError::config(format!(
                    "elevation {} below acceleration degree {}",
                    q.elevation,
                    q.x.degree - 2
                )));
            }
            q.core_sigmoid()?;
        }
    }
    Ok(cfg)
}
