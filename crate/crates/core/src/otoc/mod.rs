//! The F-OTOC `F(t) = Re Tr[A†(t) B† A(t) B ρ]`, its open-system and corrected
//! forms, the commutator square, and site sweeps.
//!
//! For open systems the correlator is evaluated as
//! `Re Tr[(ξ_b†(t) B†) A (ξ_f(t)(B ρ_S)) A†]`. Both factors in parentheses
//! are independent of `A`, so a sweep over probe sites reuses them.

mod protocol;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{OpenDynamics, Sense};
use crate::error::{invalid, mismatch, Result};
use crate::qops::{eig_hermitian, pauli_at, Axis, ComplexMatrix, Spectrum, TensorLayout};

pub use protocol::{fotoc_protocol_closed, fotoc_protocol_open};

/// Below this `|F(t, I, B)|` the corrected F-OTOC is reported as NaN.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;

/// Default level for the light-cone onset time.
pub const DEFAULT_ONSET_THRESHOLD: f64 = 0.98;

/// Operators, state and time grid for one F-OTOC series.
#[derive(Debug, Clone)]
pub struct OtocRequest {
    pub op_a: ComplexMatrix,
    pub op_b: ComplexMatrix,
    pub site_a: usize,
    pub site_b: usize,
    pub initial_state: ComplexMatrix,
    pub times: Vec<f64>,
    pub corrected: bool,
}

impl OtocRequest {
    /// `A = σ^{axis_a}` at `site_a`, `B = σ^{axis_b}` at `site_b` on `layout`.
    pub fn pauli(
        layout: &TensorLayout,
        axis_a: Axis,
        site_a: usize,
        axis_b: Axis,
        site_b: usize,
        initial_state: ComplexMatrix,
        times: Vec<f64>,
    ) -> Result<Self> {
        Ok(Self {
            op_a: pauli_at(layout, site_a, axis_a)?,
            op_b: pauli_at(layout, site_b, axis_b)?,
            site_a,
            site_b,
            initial_state,
            times,
            corrected: false,
        })
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        for (name, m) in [("A", &self.op_a), ("B", &self.op_b), ("initial state", &self.initial_state)] {
            if m.rows() != dim || m.cols() != dim {
                return Err(mismatch!("{name} is {}x{}, system dimension is {dim}", m.rows(), m.cols()));
            }
        }
        check_grid(&self.times)
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(invalid!("time grid must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid!("time grid must be strictly increasing"));
    }
    Ok(())
}

/// `steps` equally spaced points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(invalid!("time grid needs t_max > 0 and at least two points"));
    }
    let dt = t_max / (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 * dt).collect())
}

/// One real time series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Probe site for series that belong to a site sweep.
    pub site: Option<usize>,
    /// Largest `|Im|` of the trace whose real part was taken.
    pub max_imag: f64,
}

impl SeriesResult {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            times,
            values,
            site: None,
            max_imag: 0.0,
        }
    }
}

/// `Tr[Q A P A†]`.
fn sandwich(q: &ComplexMatrix, a: &ComplexMatrix, p: &ComplexMatrix) -> Result<Complex64> {
    q.matmul(a)?.trace_product(&p.matmul(&a.adjoint())?)
}

/// Closed-system F-OTOC evaluated from one eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct ClosedFotoc {
    spectrum: Spectrum,
    a: ComplexMatrix,
    b: ComplexMatrix,
    rho: ComplexMatrix,
}

impl ClosedFotoc {
    pub fn new(h: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> Result<Self> {
        let d = h.rows();
        for (name, m) in [("A", a), ("B", b), ("state", rho)] {
            if m.rows() != d || m.cols() != d {
                return Err(mismatch!("{name} is {}x{}, Hamiltonian is {d}x{d}", m.rows(), m.cols()));
            }
        }
        Ok(Self {
            spectrum: eig_hermitian(h)?,
            a: a.clone(),
            b: b.clone(),
            rho: rho.clone(),
        })
    }

    /// `A(t) = U† A U`.
    pub fn heisenberg_a(&self, t: f64) -> ComplexMatrix {
        let u = self.spectrum.propagator(t);
        &(&u.adjoint() * &self.a) * &u
    }

    /// `Tr[A†(t) B† A(t) B ρ]` before taking the real part.
    pub fn trace_at(&self, t: f64) -> Complex64 {
        let at = self.heisenberg_a(t);
        let left = &(&at.adjoint() * &self.b.adjoint()) * &at;
        let right = &self.b * &self.rho;
        left.trace_product(&right).unwrap_or(Complex64::new(f64::NAN, 0.0))
    }

    /// `½ Tr([A(t), B]† [A(t), B] ρ)`.
    pub fn commutator_square_at(&self, t: f64) -> f64 {
        let at = self.heisenberg_a(t);
        let c = &(&at * &self.b) - &(&self.b * &at);
        let cc = &c.adjoint() * &c;
        0.5 * cc.trace_product(&self.rho).map(|z| z.re).unwrap_or(f64::NAN)
    }
}

/// `F(t) = Re Tr[A†(t) B† A(t) B ρ]` for unitary dynamics under `h_system`.
pub fn fotoc_closed(h_system: &ComplexMatrix, req: &OtocRequest) -> Result<SeriesResult> {
    req.validate(h_system.rows())?;
    let eval = ClosedFotoc::new(h_system, &req.op_a, &req.op_b, &req.initial_state)?;
    let traces: Vec<Complex64> = req.times.iter().map(|&t| eval.trace_at(t)).collect();
    Ok(real_series("F", &req.times, &traces))
}

/// `C(t) = ½ Tr([A(t), B]† [A(t), B] ρ)` for unitary dynamics.
pub fn commutator_square(h_system: &ComplexMatrix, req: &OtocRequest) -> Result<SeriesResult> {
    req.validate(h_system.rows())?;
    let eval = ClosedFotoc::new(h_system, &req.op_a, &req.op_b, &req.initial_state)?;
    let values = req.times.iter().map(|&t| eval.commutator_square_at(t)).collect();
    Ok(SeriesResult::new("C", req.times.clone(), values))
}

fn real_series(label: &str, times: &[f64], traces: &[Complex64]) -> SeriesResult {
    let mut s = SeriesResult::new(label, times.to_vec(), traces.iter().map(|z| z.re).collect());
    s.max_imag = traces.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    s
}

/// Open-system F-OTOC for a fixed `B` and any number of probe operators `A`.
#[derive(Debug, Clone)]
pub struct OpenFotoc<'a> {
    dynamics: &'a OpenDynamics,
    b_rho: ComplexMatrix,
    b_dag: ComplexMatrix,
    probes: Vec<ComplexMatrix>,
    corrected: bool,
}

/// Values of one time point of an [`OpenFotoc`].
#[derive(Debug, Clone, PartialEq)]
pub struct OpenPoint {
    /// `F(t, A_i, B)`, or `F_c` when correction is on (NaN when flagged).
    pub values: Vec<f64>,
    /// Largest `|Im|` among the traces taken.
    pub max_imag: f64,
}

impl<'a> OpenFotoc<'a> {
    pub fn new(
        dynamics: &'a OpenDynamics,
        op_b: &ComplexMatrix,
        initial_state: &ComplexMatrix,
        probes: Vec<ComplexMatrix>,
        corrected: bool,
    ) -> Result<Self> {
        let d = dynamics.system_dim();
        for m in probes.iter().chain([op_b, initial_state]) {
            if m.rows() != d || m.cols() != d {
                return Err(mismatch!("operator is {}x{}, system dimension is {d}", m.rows(), m.cols()));
            }
        }
        Ok(Self {
            dynamics,
            b_rho: op_b * initial_state,
            b_dag: op_b.adjoint(),
            probes,
            corrected,
        })
    }

    pub fn n_probes(&self) -> usize {
        self.probes.len()
    }

    /// Evaluates every probe at time `t`.
    pub fn at(&self, t: f64) -> Result<OpenPoint> {
        let p = self.dynamics.kraus(t, Sense::Forward).apply(&self.b_rho)?;
        let q = self.dynamics.kraus(t, Sense::Backward).apply_adjoint(&self.b_dag)?;
        let mut max_imag: f64 = 0.0;
        let denominator = if self.corrected {
            let z = q.trace_product(&p)?;
            max_imag = z.im.abs();
            Some(z.re)
        } else {
            None
        };
        let mut values = Vec::with_capacity(self.probes.len());
        for a in &self.probes {
            let z = sandwich(&q, a, &p)?;
            max_imag = max_imag.max(z.im.abs());
            values.push(match denominator {
                Some(den) if den.abs() < DENOMINATOR_FLOOR => f64::NAN,
                Some(den) => z.re / den,
                None => z.re,
            });
        }
        Ok(OpenPoint { values, max_imag })
    }
}

fn open_series(dynamics: &OpenDynamics, req: &OtocRequest, corrected: bool, label: &str) -> Result<SeriesResult> {
    req.validate(dynamics.system_dim())?;
    let eval = OpenFotoc::new(dynamics, &req.op_b, &req.initial_state, alloc::vec![req.op_a.clone()], corrected)?;
    let mut s = SeriesResult::new(label, req.times.clone(), Vec::with_capacity(req.times.len()));
    for &t in &req.times {
        let point = eval.at(t)?;
        s.values.push(point.values[0]);
        s.max_imag = s.max_imag.max(point.max_imag);
    }
    Ok(s)
}

/// `F(t) = Re Tr[(ξ_b†(t) B†) A (ξ_f(t)(B ρ_S)) A†]`.
pub fn fotoc_open(dynamics: &OpenDynamics, req: &OtocRequest) -> Result<SeriesResult> {
    open_series(dynamics, req, req.corrected, if req.corrected { "F_c" } else { "F" })
}

/// `F_c(t) = F(t, A, B) / F(t, I, B)`, NaN where the denominator is below
/// [`DENOMINATOR_FLOOR`].
pub fn fotoc_corrected(dynamics: &OpenDynamics, req: &OtocRequest) -> Result<SeriesResult> {
    open_series(dynamics, req, true, "F_c")
}

/// A family of series sharing `B`, one per probe site of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSweep {
    pub series: Vec<SeriesResult>,
    /// First time each series drops below the threshold.
    pub onsets: Vec<Option<f64>>,
    pub threshold: f64,
}

/// Probe-site sweep settings.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis_a: Axis,
    pub axis_b: Axis,
    pub base_site: usize,
    pub targets: Vec<usize>,
    pub corrected: bool,
    pub threshold: f64,
}

impl SweepSpec {
    /// The evaluator for one time point at a time; callers may run points in
    /// any order and reassemble with [`SweepSpec::assemble`].
    pub fn evaluator<'a>(&self, dynamics: &'a OpenDynamics, initial_state: &ComplexMatrix) -> Result<OpenFotoc<'a>> {
        let layout = dynamics.system_layout();
        let b = pauli_at(layout, self.base_site, self.axis_b)?;
        let probes = self
            .targets
            .iter()
            .map(|&k| pauli_at(layout, k, self.axis_a))
            .collect::<Result<Vec<_>>>()?;
        OpenFotoc::new(dynamics, &b, initial_state, probes, self.corrected)
    }

    /// Builds the sweep from per-time points in grid order.
    pub fn assemble(&self, times: &[f64], points: &[OpenPoint]) -> SiteSweep {
        let label = if self.corrected { "F_c" } else { "F" };
        let series: Vec<SeriesResult> = self
            .targets
            .iter()
            .enumerate()
            .map(|(i, &site)| {
                let mut s = SeriesResult::new(label, times.to_vec(), points.iter().map(|p| p.values[i]).collect());
                s.site = Some(site);
                s.max_imag = points.iter().map(|p| p.max_imag).fold(0.0, f64::max);
                s
            })
            .collect();
        let onsets = series.iter().map(|s| onset_time(s, self.threshold)).collect();
        SiteSweep {
            series,
            onsets,
            threshold: self.threshold,
        }
    }
}

/// Sequential site sweep: `B = σ^{axis_b}` at the base site, `A = σ^{axis_a}`
/// at each target.
pub fn fotoc_site_sweep(
    dynamics: &OpenDynamics,
    spec: &SweepSpec,
    initial_state: &ComplexMatrix,
    times: &[f64],
) -> Result<SiteSweep> {
    check_grid(times)?;
    let eval = spec.evaluator(dynamics, initial_state)?;
    let points = times.iter().map(|&t| eval.at(t)).collect::<Result<Vec<_>>>()?;
    Ok(spec.assemble(times, &points))
}

/// First grid time at which the series is below `threshold`.
pub fn onset_time(series: &SeriesResult, threshold: f64) -> Option<f64> {
    series
        .times
        .iter()
        .zip(&series.values)
        .find(|(_, v)| **v < threshold)
        .map(|(t, _)| *t)
}
