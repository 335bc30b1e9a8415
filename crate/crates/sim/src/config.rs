//! Experiment configuration: strict TOML parsing and default resolution.
//!
//! A config is one top-level table with optional `[model]`, `[operators]`,
//! `[time]`, `[sweep]`, `[haar]` and `[output]` sections. Every key that is
//! not set falls back to the scenario's reference parameters; keys that do
//! not apply to the chosen scenario are rejected.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use otoc_core::qops::Axis;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    FotocLmgBath,
    FotocCorrectedLmgBath,
    CompareTwoSpin,
    TfimLightcone,
    LmgClosed,
    Validate,
    HaarCheck,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::FotocLmgBath,
        Scenario::FotocCorrectedLmgBath,
        Scenario::CompareTwoSpin,
        Scenario::TfimLightcone,
        Scenario::LmgClosed,
        Scenario::Validate,
        Scenario::HaarCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::FotocLmgBath => "fotoc-lmg-bath",
            Scenario::FotocCorrectedLmgBath => "fotoc-corrected-lmg-bath",
            Scenario::CompareTwoSpin => "compare-two-spin",
            Scenario::TfimLightcone => "tfim-lightcone",
            Scenario::LmgClosed => "lmg-closed",
            Scenario::Validate => "validate",
            Scenario::HaarCheck => "haar-check",
        }
    }

    fn family(self) -> Family {
        match self {
            Scenario::FotocLmgBath | Scenario::FotocCorrectedLmgBath | Scenario::CompareTwoSpin => Family::IsingLmg,
            Scenario::TfimLightcone => Family::Tfim,
            Scenario::LmgClosed => Family::LmgClosed,
            Scenario::Validate | Scenario::HaarCheck => Family::None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| SimError::Config(format!("unknown scenario {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    IsingLmg,
    Tfim,
    LmgClosed,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `(√3/2 |0⟩ + 1/2 |1⟩)` on every system spin.
    ProductTilted,
    MaximallyMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BathKind {
    Thermal,
    MaximallyMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
    Z,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Axis {
        match a {
            AxisName::X => Axis::X,
            AxisName::Y => Axis::Y,
            AxisName::Z => Axis::Z,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<Scenario>,
    seed: Option<u64>,
    fast_path: Option<bool>,
    initial_state: Option<InitialState>,
    bath_state: Option<BathKind>,
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    operators: RawOperators,
    #[serde(default)]
    time: RawTime,
    sweep: Option<Sweep>,
    haar: Option<RawHaar>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    n_system: Option<usize>,
    n_bath: Option<usize>,
    n_spins: Option<usize>,
    omega: Option<f64>,
    j_coupling: Option<f64>,
    lambda: Option<f64>,
    lambda_tilde: Option<f64>,
    omega_c: Option<f64>,
    temperature: Option<f64>,
    b_field: Option<f64>,
    theta: Option<f64>,
    g: Option<f64>,
    gamma: Option<f64>,
    lambda_z: Option<f64>,
}

impl RawModel {
    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! check {
            ($($k:ident),*) => { $( if self.$k.is_some() { keys.push(stringify!($k)); } )* };
        }
        check!(n_system, n_bath, n_spins, omega, j_coupling, lambda, lambda_tilde, omega_c, temperature, b_field, theta, g, gamma, lambda_z);
        keys
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperators {
    axis_a: Option<AxisName>,
    axis_b: Option<AxisName>,
    site_b: Option<usize>,
    targets: Option<Vec<usize>>,
    partition_a: Option<usize>,
    threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_max: Option<f64>,
    steps: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHaar {
    dims: Option<Vec<usize>>,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// Fully resolved model parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ModelConfig {
    IsingLmg {
        n_system: usize,
        n_bath: usize,
        omega: f64,
        j_coupling: f64,
        lambda: f64,
        /// Follows `lambda` unless set.
        #[serde(skip_serializing_if = "Option::is_none")]
        lambda_tilde: Option<f64>,
        omega_c: f64,
        temperature: f64,
    },
    Tfim {
        n_system: usize,
        n_bath: usize,
        b_field: f64,
        j_coupling: f64,
        theta: f64,
        g: f64,
        gamma: f64,
        lambda_z: f64,
        temperature: f64,
    },
    LmgClosed {
        n_spins: usize,
        lambda: f64,
        gamma: f64,
        omega_c: f64,
    },
    None,
}

impl ModelConfig {
    /// Number of system spins, i.e. the sites operators may sit on.
    pub fn n_system(&self) -> usize {
        match self {
            ModelConfig::IsingLmg { n_system, .. } | ModelConfig::Tfim { n_system, .. } => *n_system,
            ModelConfig::LmgClosed { n_spins, .. } => *n_spins,
            ModelConfig::None => 0,
        }
    }

    /// Returns a copy with the real parameter `key` replaced.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self, SimError> {
        let mut m = self.clone();
        let slot: &mut f64 = match (&mut m, key) {
            (ModelConfig::IsingLmg { omega, .. }, "omega") => omega,
            (ModelConfig::IsingLmg { j_coupling, .. }, "j_coupling") => j_coupling,
            (ModelConfig::IsingLmg { lambda, .. }, "lambda") => lambda,
            (ModelConfig::IsingLmg { omega_c, .. }, "omega_c") => omega_c,
            (ModelConfig::IsingLmg { temperature, .. }, "temperature") => temperature,
            (ModelConfig::IsingLmg { lambda_tilde, .. }, "lambda_tilde") => lambda_tilde.insert(value),
            (ModelConfig::Tfim { b_field, .. }, "b_field") => b_field,
            (ModelConfig::Tfim { j_coupling, .. }, "j_coupling") => j_coupling,
            (ModelConfig::Tfim { theta, .. }, "theta") => theta,
            (ModelConfig::Tfim { g, .. }, "g") => g,
            (ModelConfig::Tfim { gamma, .. }, "gamma") => gamma,
            (ModelConfig::Tfim { lambda_z, .. }, "lambda_z") => lambda_z,
            (ModelConfig::Tfim { temperature, .. }, "temperature") => temperature,
            (ModelConfig::LmgClosed { lambda, .. }, "lambda") => lambda,
            (ModelConfig::LmgClosed { gamma, .. }, "gamma") => gamma,
            (ModelConfig::LmgClosed { omega_c, .. }, "omega_c") => omega_c,
            _ => return Err(SimError::Config(format!("`{key}` cannot be swept for this model"))),
        };
        *slot = value;
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Operators {
    pub axis_a: AxisName,
    pub axis_b: AxisName,
    /// Site of `B`.
    pub site_b: usize,
    /// Probe sites of `A`.
    pub targets: Vec<usize>,
    /// System spins in part A of the bipartite OTOC.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_a: Option<usize>,
    /// Light-cone onset threshold.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarSettings {
    pub dims: Vec<usize>,
    pub samples: usize,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_path: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bath_state: Option<BathKind>,
    pub model: ModelConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators: Option<Operators>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub haar: Option<HaarSettings>,
    /// Where results go; not part of the experiment, so not echoed.
    #[serde(skip)]
    pub output: PathBuf,
}

impl ScenarioConfig {
    /// The resolved config as TOML, as echoed in the metadata sidecar.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("resolved config is always representable")
    }

    /// Model variants in sweep order, labelled `parameter=value`.
    pub fn model_variants(&self) -> Result<Vec<(Option<String>, ModelConfig)>, SimError> {
        match &self.sweep {
            None => Ok(vec![(None, self.model.clone())]),
            Some(s) => s
                .values
                .iter()
                .map(|&v| Ok((Some(format!("{}={}", s.parameter, v)), self.model.with_param(&s.parameter, v)?)))
                .collect(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenario: Option<Scenario>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, SimError> {
    parse_config_with(text, &Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: &Overrides) -> Result<ScenarioConfig, SimError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| SimError::Config(e.message().trim().to_string()))?;
    resolve(raw, overrides)
}

fn cfg_err(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

struct Defaults {
    initial: InitialState,
    t_max: f64,
    steps: usize,
    /// Parameter swept when neither it nor a `[sweep]` is given.
    sweep: Option<(&'static str, Vec<f64>)>,
}

fn defaults(s: Scenario) -> Defaults {
    match s {
        Scenario::FotocLmgBath | Scenario::FotocCorrectedLmgBath => Defaults {
            initial: InitialState::ProductTilted,
            t_max: 5.0,
            steps: 200,
            sweep: Some(("lambda", vec![0.5, 1.0])),
        },
        Scenario::CompareTwoSpin => Defaults {
            initial: InitialState::MaximallyMixed,
            t_max: 10.0,
            steps: 200,
            sweep: Some(("omega_c", vec![2.0, 20.0])),
        },
        Scenario::TfimLightcone => Defaults {
            initial: InitialState::ProductTilted,
            t_max: 10.0,
            steps: 51,
            sweep: Some(("theta", vec![PI / 2.0, PI / 8.0])),
        },
        Scenario::LmgClosed => Defaults {
            initial: InitialState::ProductTilted,
            t_max: 30.0,
            steps: 3001,
            sweep: None,
        },
        Scenario::Validate | Scenario::HaarCheck => Defaults {
            initial: InitialState::ProductTilted,
            t_max: 1.0,
            steps: 2,
            sweep: None,
        },
    }
}

fn allowed_model_keys(f: Family) -> &'static [&'static str] {
    match f {
        Family::IsingLmg => &["n_system", "n_bath", "omega", "j_coupling", "lambda", "lambda_tilde", "omega_c", "temperature"],
        Family::Tfim => &["n_system", "n_bath", "b_field", "j_coupling", "theta", "g", "gamma", "lambda_z", "temperature"],
        Family::LmgClosed => &["n_spins", "lambda", "gamma", "omega_c"],
        Family::None => &[],
    }
}

fn resolve(raw: RawConfig, ov: &Overrides) -> Result<ScenarioConfig, SimError> {
    let scenario = ov
        .scenario
        .or(raw.scenario)
        .ok_or_else(|| cfg_err("missing required key `scenario`"))?;
    let family = scenario.family();
    let name = scenario.name();
    let d = defaults(scenario);

    let allowed = allowed_model_keys(family);
    for key in raw.model.present() {
        if !allowed.contains(&key) {
            return Err(cfg_err(format!("model key `{key}` does not apply to scenario {name}")));
        }
    }

    let open = matches!(family, Family::IsingLmg | Family::Tfim);
    if !open && raw.bath_state.is_some() {
        return Err(cfg_err(format!("`bath_state` does not apply to scenario {name}")));
    }
    if family != Family::IsingLmg && raw.fast_path.is_some() {
        return Err(cfg_err(format!("`fast_path` does not apply to scenario {name}; it covers the LMG bath only")));
    }
    if family == Family::None {
        let o = &raw.operators;
        if o.axis_a.is_some() || o.axis_b.is_some() || o.site_b.is_some() || o.targets.is_some() || o.partition_a.is_some() || o.threshold.is_some() {
            return Err(cfg_err(format!("`[operators]` does not apply to scenario {name}")));
        }
        if raw.time.t_max.is_some() || raw.time.steps.is_some() {
            return Err(cfg_err(format!("`[time]` does not apply to scenario {name}")));
        }
        if raw.initial_state.is_some() {
            return Err(cfg_err(format!("`initial_state` does not apply to scenario {name}")));
        }
        if raw.sweep.is_some() {
            return Err(cfg_err(format!("`[sweep]` does not apply to scenario {name}")));
        }
    }
    if scenario != Scenario::HaarCheck && raw.haar.is_some() {
        return Err(cfg_err(format!("`[haar]` does not apply to scenario {name}")));
    }
    if scenario != Scenario::CompareTwoSpin && raw.operators.partition_a.is_some() {
        return Err(cfg_err(format!("`partition_a` does not apply to scenario {name}")));
    }

    let m = &raw.model;
    // a swept key may stand in for a required one
    let default_sweep = match (&d.sweep, &raw.sweep) {
        (Some((key, values)), None) if !raw.model.present().contains(key) => Some(Sweep {
            parameter: (*key).to_string(),
            values: values.clone(),
        }),
        _ => None,
    };
    let placeholder = |key: &str| -> Option<f64> {
        let s = raw.sweep.as_ref().or(default_sweep.as_ref())?;
        (s.parameter == key).then(|| s.values.first().copied()).flatten()
    };
    let require = |value: Option<f64>, key: &str| -> Result<f64, SimError> {
        value
            .or_else(|| placeholder(key))
            .ok_or_else(|| cfg_err(format!("missing required key `model.{key}` for scenario {name}")))
    };
    let model = match family {
        Family::IsingLmg => {
            let (ns, nb, lambda, omega_c) = match scenario {
                Scenario::CompareTwoSpin => (2, 10, 1.0, 4.0),
                _ => (4, 5, 0.5, 4.0),
            };
            ModelConfig::IsingLmg {
                n_system: m.n_system.unwrap_or(ns),
                n_bath: m.n_bath.unwrap_or(nb),
                omega: m.omega.unwrap_or(2.0),
                j_coupling: m.j_coupling.unwrap_or(0.5),
                lambda: m.lambda.or_else(|| placeholder("lambda")).unwrap_or(lambda),
                lambda_tilde: m.lambda_tilde,
                omega_c: m.omega_c.or_else(|| placeholder("omega_c")).unwrap_or(omega_c),
                temperature: m.temperature.unwrap_or(10.0),
            }
        }
        Family::Tfim => ModelConfig::Tfim {
            n_system: m.n_system.unwrap_or(4),
            n_bath: m.n_bath.unwrap_or(6),
            b_field: m.b_field.unwrap_or(0.5),
            j_coupling: m.j_coupling.unwrap_or(0.5),
            theta: m.theta.or_else(|| placeholder("theta")).unwrap_or(PI / 2.0),
            g: m.g.unwrap_or(0.5),
            gamma: m.gamma.unwrap_or(0.5),
            lambda_z: m.lambda_z.unwrap_or(1.0),
            temperature: m.temperature.unwrap_or(10.0),
        },
        Family::LmgClosed => ModelConfig::LmgClosed {
            n_spins: m.n_spins.unwrap_or(6),
            lambda: m.lambda.or_else(|| placeholder("lambda")).unwrap_or(1.0),
            gamma: require(m.gamma, "gamma")?,
            omega_c: require(m.omega_c, "omega_c")?,
        },
        Family::None => ModelConfig::None,
    };
    check_model(&model)?;

    let sweep = raw.sweep.or(default_sweep);
    if let Some(s) = &sweep {
        if s.values.is_empty() {
            return Err(cfg_err("`sweep.values` must not be empty"));
        }
        if s.values.iter().any(|v| !v.is_finite()) {
            return Err(cfg_err("`sweep.values` must be finite"));
        }
        if m.present().contains(&s.parameter.as_str()) {
            return Err(cfg_err(format!("`{}` is both set in [model] and swept", s.parameter)));
        }
        for &v in &s.values {
            check_model(&model.with_param(&s.parameter, v)?)?;
        }
    }

    let n = model.n_system();
    let operators = if family == Family::None {
        None
    } else {
        let o = &raw.operators;
        let site_b = o.site_b.unwrap_or(0);
        let targets = match &o.targets {
            Some(t) => t.clone(),
            None => match scenario {
                Scenario::CompareTwoSpin => vec![n - 1],
                Scenario::LmgClosed => (1..n).collect(),
                _ => (0..n).collect(),
            },
        };
        if targets.is_empty() {
            return Err(cfg_err("`operators.targets` must not be empty"));
        }
        if let Some(&bad) = targets.iter().chain([&site_b]).find(|&&s| s >= n) {
            return Err(cfg_err(format!("site {bad} out of range for {n} system spins")));
        }
        if targets.iter().collect::<BTreeSet<_>>().len() != targets.len() {
            return Err(cfg_err("`operators.targets` contains duplicates"));
        }
        let partition_a = (scenario == Scenario::CompareTwoSpin).then(|| o.partition_a.unwrap_or(n / 2));
        if let Some(p) = partition_a {
            if p == 0 || p >= n {
                return Err(cfg_err(format!("`partition_a` must leave both parts nonempty, got {p} of {n}")));
            }
        }
        let threshold = o.threshold.unwrap_or(otoc_core::otoc::DEFAULT_ONSET_THRESHOLD);
        if !threshold.is_finite() {
            return Err(cfg_err("`operators.threshold` must be finite"));
        }
        Some(Operators {
            axis_a: o.axis_a.unwrap_or(AxisName::Z),
            axis_b: o.axis_b.unwrap_or(AxisName::Z),
            site_b,
            targets,
            partition_a,
            threshold,
        })
    };

    let time = if family == Family::None {
        None
    } else {
        let steps = raw.time.steps.unwrap_or(d.steps as i64);
        if steps < 2 {
            return Err(cfg_err(format!("time grid needs steps ≥ 2, got {steps}")));
        }
        let t_max = raw.time.t_max.unwrap_or(d.t_max);
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(cfg_err(format!("time grid needs t_max > 0, got {t_max}")));
        }
        Some(TimeGrid {
            t_max,
            steps: steps as usize,
        })
    };

    let haar = (scenario == Scenario::HaarCheck)
        .then(|| {
            let h = raw.haar.unwrap_or_default();
            let dims = h.dims.unwrap_or_else(|| vec![2, 4]);
            let samples = h.samples.unwrap_or(2000);
            if dims.is_empty() || dims.iter().any(|&d| d < 2 || d > 16) {
                return Err(cfg_err("`haar.dims` entries must lie in 2..=16"));
            }
            if samples < otoc_core::bipartite::MIN_SAMPLES {
                return Err(cfg_err(format!(
                    "`haar.samples` must be at least {}",
                    otoc_core::bipartite::MIN_SAMPLES
                )));
            }
            Ok(HaarSettings { dims, samples })
        })
        .transpose()?;

    Ok(ScenarioConfig {
        scenario,
        seed: ov.seed.or(raw.seed).unwrap_or(0),
        fast_path: (family == Family::IsingLmg).then(|| raw.fast_path.unwrap_or(false)),
        initial_state: (family != Family::None).then(|| raw.initial_state.unwrap_or(d.initial)),
        bath_state: open.then(|| raw.bath_state.unwrap_or(BathKind::Thermal)),
        model,
        operators,
        time,
        sweep,
        haar,
        output: ov
            .output
            .clone()
            .or(raw.output.dir)
            .unwrap_or_else(|| PathBuf::from("out")),
    })
}

fn check_model(m: &ModelConfig) -> Result<(), SimError> {
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(cfg_err(format!("`model.{name}` must be finite")))
        }
    };
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(cfg_err(format!("`model.{name}` must be positive, got {v}")))
        }
    };
    match *m {
        ModelConfig::IsingLmg { n_system, n_bath, omega, j_coupling, lambda, lambda_tilde, omega_c, temperature } => {
            if n_system == 0 || n_bath == 0 {
                return Err(cfg_err("`n_system` and `n_bath` must be at least 1"));
            }
            for (k, v) in [("omega", omega), ("j_coupling", j_coupling), ("lambda", lambda), ("omega_c", omega_c)] {
                finite(k, v)?;
            }
            if let Some(v) = lambda_tilde {
                finite("lambda_tilde", v)?;
            }
            positive("temperature", temperature)
        }
        ModelConfig::Tfim { n_system, n_bath, b_field, j_coupling, theta, g, gamma, lambda_z, temperature } => {
            if n_system == 0 {
                return Err(cfg_err("`n_system` must be at least 1"));
            }
            if n_bath < 2 {
                return Err(cfg_err("`n_bath` must be at least 2 for the bath ring"));
            }
            for (k, v) in [("b_field", b_field), ("j_coupling", j_coupling), ("theta", theta), ("g", g), ("gamma", gamma), ("lambda_z", lambda_z)] {
                finite(k, v)?;
            }
            positive("temperature", temperature)
        }
        ModelConfig::LmgClosed { n_spins, lambda, gamma, omega_c } => {
            if n_spins < 2 {
                return Err(cfg_err("`n_spins` must be at least 2"));
            }
            for (k, v) in [("lambda", lambda), ("gamma", gamma), ("omega_c", omega_c)] {
                finite(k, v)?;
            }
            Ok(())
        }
        ModelConfig::None => Ok(()),
    }
}
