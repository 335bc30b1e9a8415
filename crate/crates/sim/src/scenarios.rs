//! Scenario dispatch.
//!
//! Time points of a series are independent, so each scenario evaluates them
//! on the worker pool and collects them back in grid order; results do not
//! depend on the number of workers.

use std::time::Instant;

use otoc_core::bipartite::{bipartite_otoc_open, sample_rng, Bipartition, GValue};
use otoc_core::dynamics::{BathState, Direction, OpenDynamics, Sense};
use otoc_core::models::{build_lmg_closed, IsingLMGParams, LMGClosedParams, TFIMParams};
use otoc_core::otoc::{uniform_grid, OpenPoint, SeriesResult, SiteSweep, SweepSpec};
use otoc_core::qops::{maximally_mixed, product_state, TensorLayout};
use otoc_core::{Complex64, ComplexMatrix};
use rayon::prelude::*;

use crate::analysis::{max_deviation, min_value, recurrence_time, time_average, DEPARTURE_LEVEL, RECURRENCE_TOL};
use crate::config::{BathKind, InitialState, ModelConfig, Operators, Scenario, ScenarioConfig};
use crate::error::{Context, SimError};
use crate::output::{Cell, Check, Heatmap, RunResult, Table};
use crate::validate;

/// Largest joint Hilbert dimension the dense path accepts.
pub const DIMENSION_BUDGET: usize = 4096;

fn pow2(n: usize) -> usize {
    if n >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1 << n
    }
}

/// Dimension of the largest matrix that will be diagonalized.
pub fn estimated_dimension(cfg: &ScenarioConfig) -> usize {
    match cfg.model {
        ModelConfig::IsingLmg { n_system, n_bath, .. } => {
            if cfg.fast_path == Some(true) {
                pow2(n_system).saturating_mul(n_bath + 1)
            } else {
                pow2(n_system + n_bath)
            }
        }
        ModelConfig::Tfim { n_system, n_bath, .. } => pow2(n_system + n_bath),
        ModelConfig::LmgClosed { n_spins, .. } => pow2(n_spins),
        ModelConfig::None => 0,
    }
}

fn check_budget(cfg: &ScenarioConfig) -> Result<(), SimError> {
    let dim = estimated_dimension(cfg);
    if dim <= DIMENSION_BUDGET {
        return Ok(());
    }
    let hint = if cfg.fast_path == Some(false) {
        "; set fast_path = true to split the LMG bath into collective blocks"
    } else {
        ""
    };
    Err(SimError::Dimension(format!(
        "scenario {} needs Hilbert dimension {dim}, above the limit of {DIMENSION_BUDGET}{hint}",
        cfg.scenario
    )))
}

/// Runs `cfg` on a pool of `threads` workers (0 picks the machine default).
pub fn run_scenario(cfg: &ScenarioConfig, threads: usize) -> Result<RunResult, SimError> {
    check_budget(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::Config(format!("cannot start {threads} workers: {e}")))?;
    let start = Instant::now();
    let mut out = RunResult {
        series: Vec::new(),
        heatmaps: Vec::new(),
        tables: Vec::new(),
        checks: Vec::new(),
        metadata: cfg.clone(),
        wall_time: 0.0,
    };
    pool.install(|| match cfg.scenario {
        Scenario::FotocLmgBath => lmg_bath(cfg, false, &mut out),
        Scenario::FotocCorrectedLmgBath => lmg_bath(cfg, true, &mut out),
        Scenario::CompareTwoSpin => compare_two_spin(cfg, &mut out),
        Scenario::TfimLightcone => tfim_lightcone(cfg, &mut out),
        Scenario::LmgClosed => lmg_closed(cfg, &mut out),
        Scenario::Validate => {
            out.checks = validate::run_checks(cfg.seed)?;
            Ok(())
        }
        Scenario::HaarCheck => haar_check(cfg, &mut out),
    })?;
    out.wall_time = start.elapsed().as_secs_f64();
    Ok(out)
}

fn ops(cfg: &ScenarioConfig) -> &Operators {
    cfg.operators.as_ref().expect("model scenarios always resolve operators")
}

fn times(cfg: &ScenarioConfig) -> Result<Vec<f64>, SimError> {
    let t = cfg.time.as_ref().expect("model scenarios always resolve a grid");
    uniform_grid(t.t_max, t.steps).context(|| "time grid".into())
}

fn initial_state(cfg: &ScenarioConfig, n: usize) -> ComplexMatrix {
    match cfg.initial_state.unwrap_or(InitialState::ProductTilted) {
        InitialState::ProductTilted => tilted_state(n),
        InitialState::MaximallyMixed => maximally_mixed(pow2(n)),
    }
}

/// `(√3/2 |0⟩ + 1/2 |1⟩)^{⊗n}`.
pub fn tilted_state(n: usize) -> ComplexMatrix {
    product_state(n, Complex64::new(0.75f64.sqrt(), 0.0), Complex64::new(0.5, 0.0))
}

fn bath_state(cfg: &ScenarioConfig, temperature: f64) -> BathState {
    match cfg.bath_state.unwrap_or(BathKind::Thermal) {
        BathKind::Thermal => BathState::Thermal { temperature },
        BathKind::MaximallyMixed => BathState::MaximallyMixed,
    }
}

pub fn ising_params(m: &ModelConfig) -> Option<IsingLMGParams> {
    match *m {
        ModelConfig::IsingLmg { n_system, n_bath, omega, j_coupling, lambda, lambda_tilde, omega_c, temperature } => {
            let mut p = IsingLMGParams::uniform(n_system, n_bath, omega, j_coupling, lambda, omega_c, temperature);
            p.lambda_tilde = lambda_tilde.unwrap_or(lambda);
            Some(p)
        }
        _ => None,
    }
}

pub fn tfim_params(m: &ModelConfig) -> Option<TFIMParams> {
    match *m {
        ModelConfig::Tfim { n_system, n_bath, b_field, j_coupling, theta, g, gamma, lambda_z, temperature } => Some(TFIMParams {
            n_system,
            n_bath,
            b_field,
            j_coupling,
            theta,
            g,
            gamma,
            lambda_z,
            temperature,
        }),
        _ => None,
    }
}

pub fn lmg_closed_params(m: &ModelConfig) -> Option<LMGClosedParams> {
    match *m {
        ModelConfig::LmgClosed { n_spins, lambda, gamma, omega_c } => Some(LMGClosedParams { n_spins, lambda, gamma, omega_c }),
        _ => None,
    }
}

/// Builds the reduced dynamics of one model variant.
fn build_dynamics(cfg: &ScenarioConfig, model: &ModelConfig, tag: &str) -> Result<OpenDynamics, SimError> {
    let ctx = || format!("{} {tag}: building dynamics", cfg.scenario);
    if let Some(p) = ising_params(model) {
        return OpenDynamics::ising_lmg(&p, bath_state(cfg, p.temperature), cfg.fast_path == Some(true)).context(ctx);
    }
    if let Some(p) = tfim_params(model) {
        return OpenDynamics::tfim(&p, bath_state(cfg, p.temperature)).context(ctx);
    }
    if let Some(p) = lmg_closed_params(model) {
        let h = build_lmg_closed(&p).context(ctx)?;
        return OpenDynamics::closed(&TensorLayout::qubits(p.n_spins), &h).context(ctx);
    }
    unreachable!("scenario without a model has no dynamics")
}

fn sweep_spec(cfg: &ScenarioConfig, corrected: bool) -> SweepSpec {
    let o = ops(cfg);
    SweepSpec {
        axis_a: o.axis_a.into(),
        axis_b: o.axis_b.into(),
        base_site: o.site_b,
        targets: o.targets.clone(),
        corrected,
        threshold: o.threshold,
    }
}

/// Evaluates `f` at every grid time on the pool, in grid order.
fn par_times<T: Send>(
    times: &[f64],
    f: impl Fn(f64) -> otoc_core::Result<T> + Sync,
    ctx: impl Fn() -> String,
) -> Result<Vec<T>, SimError> {
    times.par_iter().map(|&t| f(t)).collect::<otoc_core::Result<Vec<T>>>().context(ctx)
}

fn site_sweep(
    cfg: &ScenarioConfig,
    dynamics: &OpenDynamics,
    spec: &SweepSpec,
    rho: &ComplexMatrix,
    times: &[f64],
    tag: &str,
) -> Result<SiteSweep, SimError> {
    let ctx = || format!("{} {tag}", cfg.scenario);
    let eval = spec.evaluator(dynamics, rho).context(ctx)?;
    let points: Vec<OpenPoint> = par_times(times, |t| eval.at(t), ctx)?;
    let mut sweep = spec.assemble(times, &points);
    for s in &mut sweep.series {
        s.label = series_label(&s.label, tag, s.site);
    }
    Ok(sweep)
}

fn series_label(base: &str, tag: &str, site: Option<usize>) -> String {
    let mut label = base.to_string();
    if !tag.is_empty() {
        label.push(' ');
        label.push_str(tag);
    }
    if let Some(k) = site {
        label.push_str(&format!(" site={k}"));
    }
    label
}

fn heatmap(name: &str, sweep: &SiteSweep, times: &[f64]) -> Heatmap {
    Heatmap {
        name: name.to_string(),
        times: times.to_vec(),
        sites: sweep.series.iter().map(|s| s.site.unwrap_or(0)).collect(),
        values: sweep.series.iter().map(|s| s.values.clone()).collect(),
    }
}

fn summary_table() -> Table {
    Table::new("summary", &["label", "site", "mean", "min", "onset", "recurrence"])
}

fn summarize(table: &mut Table, series: &SeriesResult, onset: Option<f64>) {
    table.push(vec![
        Cell::Text(series.label.clone()),
        series.site.map_or(Cell::Text(String::new()), |k| Cell::Int(k as u64)),
        Cell::Real(time_average(series)),
        Cell::Real(min_value(series)),
        Cell::Real(onset.unwrap_or(f64::INFINITY)),
        Cell::Real(recurrence_time(series, DEPARTURE_LEVEL, RECURRENCE_TOL).unwrap_or(f64::INFINITY)),
    ]);
}

fn push_sweep(out: &mut RunResult, summary: &mut Table, sweep: SiteSweep) {
    for (s, onset) in sweep.series.into_iter().zip(sweep.onsets) {
        summarize(summary, &s, onset);
        out.series.push(s);
    }
}

fn heatmap_name(base: &str, tag: &Option<String>) -> String {
    match tag {
        Some(t) => format!("{base}_{t}"),
        None => base.to_string(),
    }
}

fn lmg_bath(cfg: &ScenarioConfig, corrected: bool, out: &mut RunResult) -> Result<(), SimError> {
    let times = times(cfg)?;
    let rho = initial_state(cfg, cfg.model.n_system());
    let mut summary = summary_table();
    for (tag, model) in cfg.model_variants()? {
        let tag_str = tag.clone().unwrap_or_default();
        let dynamics = build_dynamics(cfg, &model, &tag_str)?;
        let plain = site_sweep(cfg, &dynamics, &sweep_spec(cfg, false), &rho, &times, &tag_str)?;
        if corrected {
            let fixed = site_sweep(cfg, &dynamics, &sweep_spec(cfg, true), &rho, &times, &tag_str)?;
            out.heatmaps.push(heatmap(&heatmap_name("F_c", &tag), &fixed, &times));
            push_sweep(out, &mut summary, plain);
            push_sweep(out, &mut summary, fixed);
        } else {
            out.heatmaps.push(heatmap(&heatmap_name("F", &tag), &plain, &times));
            push_sweep(out, &mut summary, plain);
        }
    }
    out.tables.push(summary);
    Ok(())
}

/// Splits the system spins into the first `partition_a` and the rest.
fn system_bipartition(cfg: &ScenarioConfig) -> Result<Bipartition, SimError> {
    let n = cfg.model.n_system();
    let a = ops(cfg).partition_a.unwrap_or(n / 2);
    Bipartition::new(pow2(a), pow2(n - a)).context(|| "bipartition".into())
}

fn compare_two_spin(cfg: &ScenarioConfig, out: &mut RunResult) -> Result<(), SimError> {
    let times = times(cfg)?;
    let rho = initial_state(cfg, cfg.model.n_system());
    let partition = system_bipartition(cfg)?;
    let spec = sweep_spec(cfg, false);
    let mut summary = summary_table();
    for (tag, model) in cfg.model_variants()? {
        let tag_str = tag.clone().unwrap_or_default();
        let dynamics = build_dynamics(cfg, &model, &tag_str)?;
        let eval = spec.evaluator(&dynamics, &rho).context(|| format!("{} {tag_str}", cfg.scenario))?;
        let points: Vec<(OpenPoint, GValue)> = par_times(
            &times,
            |t| {
                let f = eval.at(t)?;
                let rep = dynamics.kraus(t, Sense::Forward).superoperator(Direction::Adjoint);
                Ok((f, bipartite_otoc_open(&rep, partition)?))
            },
            || format!("{} {tag_str}", cfg.scenario),
        )?;
        let (f_points, g_values): (Vec<OpenPoint>, Vec<GValue>) = points.into_iter().unzip();
        let mut sweep = spec.assemble(&times, &f_points);
        for s in &mut sweep.series {
            s.label = series_label(&s.label, &tag_str, s.site);
        }
        push_sweep(out, &mut summary, sweep);
        let mut g = SeriesResult::new(series_label("G", &tag_str, None), times.clone(), g_values.iter().map(|g| g.value).collect());
        g.max_imag = g_values.iter().map(|g| g.raw.im.abs()).fold(0.0, f64::max);
        summarize(&mut summary, &g, None);
        out.series.push(g);
    }
    out.tables.push(summary);
    Ok(())
}

fn tfim_lightcone(cfg: &ScenarioConfig, out: &mut RunResult) -> Result<(), SimError> {
    let times = times(cfg)?;
    let rho = initial_state(cfg, cfg.model.n_system());
    let spec = sweep_spec(cfg, false);
    let mut summary = summary_table();
    let mut onsets = Table::new("onsets", &["variant", "site", "separation", "onset"]);
    let base = ops(cfg).site_b;
    for (tag, model) in cfg.model_variants()? {
        let tag_str = tag.clone().unwrap_or_default();
        let dynamics = build_dynamics(cfg, &model, &tag_str)?;
        let sweep = site_sweep(cfg, &dynamics, &spec, &rho, &times, &tag_str)?;
        out.heatmaps.push(heatmap(&heatmap_name("F", &tag), &sweep, &times));
        for (&site, onset) in spec.targets.iter().zip(&sweep.onsets) {
            onsets.push(vec![
                Cell::Text(tag_str.clone()),
                Cell::Int(site as u64),
                Cell::Int(site.abs_diff(base) as u64),
                Cell::Real(onset.unwrap_or(f64::INFINITY)),
            ]);
        }
        push_sweep(out, &mut summary, sweep);
    }
    out.tables.push(summary);
    out.tables.push(onsets);
    Ok(())
}

fn lmg_closed(cfg: &ScenarioConfig, out: &mut RunResult) -> Result<(), SimError> {
    let times = times(cfg)?;
    let rho = initial_state(cfg, cfg.model.n_system());
    let spec = sweep_spec(cfg, false);
    let mut summary = summary_table();
    let mut spread = Table::new("site_spread", &["variant", "max_deviation"]);
    for (tag, model) in cfg.model_variants()? {
        let tag_str = tag.clone().unwrap_or_default();
        let dynamics = build_dynamics(cfg, &model, &tag_str)?;
        let sweep = site_sweep(cfg, &dynamics, &spec, &rho, &times, &tag_str)?;
        let first = &sweep.series[0];
        let dev = sweep.series.iter().map(|s| max_deviation(first, s)).fold(0.0, f64::max);
        spread.push(vec![Cell::Text(tag_str.clone()), Cell::Real(dev)]);
        push_sweep(out, &mut summary, sweep);
    }
    out.tables.push(summary);
    out.tables.push(spread);
    Ok(())
}

fn haar_check(cfg: &ScenarioConfig, out: &mut RunResult) -> Result<(), SimError> {
    let h = cfg.haar.as_ref().expect("haar-check always resolves its settings");
    let bound = 5.0 / (h.samples as f64).sqrt();
    let mut table = Table::new("haar", &["dim", "samples", "max_error", "bound"]);
    let errors: Vec<f64> = h
        .dims
        .par_iter()
        .map(|&d| otoc_core::bipartite::haar_identity_check(d, h.samples, &mut sample_rng(cfg.seed, d)))
        .collect::<otoc_core::Result<_>>()
        .context(|| "haar-check".into())?;
    for (&d, &err) in h.dims.iter().zip(&errors) {
        table.push(vec![Cell::Int(d as u64), Cell::Int(h.samples as u64), Cell::Real(err), Cell::Real(bound)]);
        out.checks.push(Check::at_most(&format!("haar-identity-d{d}"), err, bound));
    }
    out.tables.push(table);
    Ok(())
}
