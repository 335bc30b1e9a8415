//! The oracle and invariant suite behind the `validate` scenario.
//!
//! Each check reports the largest error it measured against a tolerance.

use otoc_core::bipartite::{
    bipartite_otoc_closed, bipartite_otoc_open, build_swaps, haar_identity_check, haar_mc_sample, reduce_samples,
    sample_rng, Bipartition, McEstimate, MIN_SAMPLES,
};
use otoc_core::dynamics::{
    apply_channel, channel_superoperator, joint_propagators, BathState, Direction, OpenDynamics, Sense,
};
use otoc_core::models::{
    build_ising_chain, build_lmg_bath, build_lmg_closed, build_lmg_coupling, IsingLMGParams, LMGClosedParams,
};
use otoc_core::otoc::{
    commutator_square, fotoc_closed, fotoc_open, fotoc_protocol_closed, fotoc_protocol_open, uniform_grid, OtocRequest,
};
use otoc_core::qops::random::{random_density_matrix, random_hermitian, random_matrix};
use otoc_core::qops::{haar_unitary, partial_trace, propagator, sigma, thermal_state, Axis, TensorLayout};
use otoc_core::{Complex64, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Context, SimError};
use crate::output::Check;
use crate::scenarios::tilted_state;

/// Random instances per equivalence check.
pub const INSTANCES: usize = 20;

/// Haar samples for the identity and Monte Carlo checks.
pub const HAAR_SAMPLES: usize = 2000;

type Res<T> = Result<T, SimError>;

fn ctx(what: &'static str) -> impl Fn() -> String {
    move || format!("validate: {what}")
}

/// Runs every check; the seed drives all random instances.
pub fn run_checks(seed: u64) -> Res<Vec<Check>> {
    let mut checks = vec![analytic_single_qubit()?];
    checks.extend(closed_protocol_and_commutator(seed)?);
    checks.push(open_protocol(seed)?);
    checks.push(adjoint_duality(seed)?);
    checks.push(swap_algebra());
    checks.push(closed_bipartite_reference(seed)?);
    checks.push(open_closed_bipartite(seed)?);
    checks.extend(haar_identity(seed)?);
    checks.push(monte_carlo_vs_formula(seed)?);
    checks.push(fast_path_vs_dense()?);
    checks.push(closed_lmg_site_independence()?);
    Ok(checks)
}

/// `H = ωσ_z`, `A = B = σ_x`, `ρ = I/2` gives `F = cos 4ωt`.
pub fn analytic_single_qubit() -> Res<Check> {
    let omega = 0.8;
    let times = uniform_grid(3.0, 200).context(ctx("grid"))?;
    let req = OtocRequest {
        op_a: sigma(Axis::X),
        op_b: sigma(Axis::X),
        site_a: 0,
        site_b: 0,
        initial_state: ComplexMatrix::identity(2).scale_real(0.5),
        times: times.clone(),
        corrected: false,
    };
    let f = fotoc_closed(&sigma(Axis::Z).scale_real(omega), &req).context(ctx("analytic"))?;
    let err = times
        .iter()
        .zip(&f.values)
        .map(|(t, v)| (v - (4.0 * omega * t).cos()).abs())
        .fold(0.0, f64::max);
    Ok(Check::at_most("analytic-single-qubit", err, 1e-10))
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Closed protocol against the trace formula, and `C = 1 − Re F` for unitary
/// `A`, `B`, on random two-qubit instances.
pub fn closed_protocol_and_commutator(seed: u64) -> Res<[Check; 2]> {
    let mut rng = rng_for(seed, 1);
    let (mut protocol_err, mut identity_err) = (0.0f64, 0.0f64);
    for _ in 0..INSTANCES {
        let h = random_hermitian(4, &mut rng);
        let req = OtocRequest {
            op_a: haar_unitary(4, &mut rng).context(ctx("haar"))?,
            op_b: haar_unitary(4, &mut rng).context(ctx("haar"))?,
            site_a: 0,
            site_b: 1,
            initial_state: random_density_matrix(4, &mut rng),
            times: vec![0.0, 0.35, 1.2, 2.9],
            corrected: false,
        };
        let formula = fotoc_closed(&h, &req).context(ctx("closed formula"))?;
        let protocol = fotoc_protocol_closed(&h, &req).context(ctx("closed protocol"))?;
        let c = commutator_square(&h, &req).context(ctx("commutator square"))?;
        for k in 0..req.times.len() {
            protocol_err = protocol_err.max((formula.values[k] - protocol.values[k]).abs());
            identity_err = identity_err.max((c.values[k] - (1.0 - formula.values[k])).abs());
        }
    }
    Ok([
        Check::at_most("closed-protocol-vs-formula", protocol_err, 1e-10),
        Check::at_most("commutator-identity", identity_err, 1e-10),
    ])
}

/// A random Ising chain with an LMG bath, with every piece needed by the
/// register simulation.
struct DenseInstance {
    params: IsingLMGParams,
    layout: TensorLayout,
    h_s: ComplexMatrix,
    h_e: ComplexMatrix,
    h_se: ComplexMatrix,
    rho_e: ComplexMatrix,
}

fn random_instance<R: Rng>(rng: &mut R) -> Res<DenseInstance> {
    let n_system = rng.random_range(1..=2usize);
    let n_bath = rng.random_range(1..=2usize);
    let params = IsingLMGParams {
        n_system,
        n_bath,
        omegas: (0..n_system).map(|_| rng.random_range(0.5..3.0)).collect(),
        couplings: (1..n_system).map(|_| rng.random_range(-1.0..1.0)).collect(),
        lambda: rng.random_range(0.1..1.5),
        lambda_tilde: rng.random_range(0.1..1.5),
        omega_c: rng.random_range(0.5..5.0),
        temperature: rng.random_range(0.5..10.0),
    };
    dense_instance(params)
}

fn dense_instance(params: IsingLMGParams) -> Res<DenseInstance> {
    let layout = params.layout();
    let h_e = build_lmg_bath(&params, &layout).context(ctx("bath"))?;
    let bath_sites: Vec<usize> = layout.bath_sites().collect();
    let bath_only = partial_trace(&h_e, &layout, &bath_sites)
        .context(ctx("bath"))?
        .scale_real(1.0 / layout.system_dim() as f64);
    Ok(DenseInstance {
        h_s: build_ising_chain(&params, &layout).context(ctx("chain"))?,
        h_se: build_lmg_coupling(&params, &layout).context(ctx("coupling"))?,
        rho_e: thermal_state(&bath_only, params.temperature).context(ctx("bath state"))?,
        h_e,
        layout,
        params,
    })
}

impl DenseInstance {
    fn dynamics(&self, collective: bool) -> Res<OpenDynamics> {
        OpenDynamics::ising_lmg(&self.params, BathState::Thermal { temperature: self.params.temperature }, collective)
            .context(ctx("dynamics"))
    }
}

/// Full system ⊗ bath ⊗ control simulation against the reduced-map formula.
pub fn open_protocol(seed: u64) -> Res<Check> {
    let mut rng = rng_for(seed, 2);
    let mut err = 0.0f64;
    for _ in 0..INSTANCES {
        let inst = random_instance(&mut rng)?;
        let d = inst.layout.system_dim();
        let req = OtocRequest {
            op_a: haar_unitary(d, &mut rng).context(ctx("haar"))?,
            op_b: haar_unitary(d, &mut rng).context(ctx("haar"))?,
            site_a: 0,
            site_b: 0,
            initial_state: random_density_matrix(d, &mut rng),
            times: vec![0.0, 0.4, 1.3, 2.7],
            corrected: false,
        };
        let formula = fotoc_open(&inst.dynamics(false)?, &req).context(ctx("open formula"))?;
        let register = fotoc_protocol_open(&inst.layout, &inst.h_s, &inst.h_e, &inst.h_se, &inst.rho_e, &req)
            .context(ctx("open protocol"))?;
        for (x, y) in formula.values.iter().zip(&register.values) {
            err = err.max((x - y).abs());
        }
    }
    Ok(Check::at_most("open-protocol-vs-formula", err, 1e-10))
}

/// `Tr[A ξ(ρ)] = Tr[ξ†(A) ρ]`, with `ξ` from the explicit dilation and `ξ†`
/// from the Kraus engine.
pub fn adjoint_duality(seed: u64) -> Res<Check> {
    let mut rng = rng_for(seed, 3);
    let mut err = 0.0f64;
    for _ in 0..5 {
        let inst = random_instance(&mut rng)?;
        let dynamics = inst.dynamics(false)?;
        let d = inst.layout.system_dim();
        let t = rng.random_range(0.1..3.0);
        let jp = joint_propagators(&inst.h_s, &inst.h_e, &inst.h_se, &inst.layout, t).context(ctx("propagators"))?;
        let rho = random_density_matrix(d, &mut rng);
        let a = random_matrix(d, &mut rng);
        for sense in [Sense::Forward, Sense::Backward] {
            let evolved = apply_channel(&jp, &rho, &inst.rho_e, sense).context(ctx("channel"))?;
            let lhs = a.trace_product(&evolved).context(ctx("trace"))?;
            let dual = dynamics.kraus(t, sense).apply_adjoint(&a).context(ctx("adjoint"))?;
            let rhs = dual.trace_product(&rho).context(ctx("trace"))?;
            err = err.max((lhs - rhs).norm());
        }
    }
    Ok(Check::at_most("adjoint-duality", err, 1e-10))
}

pub fn swap_algebra() -> Check {
    let mut err = 0.0f64;
    for (da, db) in [(2, 2), (2, 4), (4, 2)] {
        let p = Bipartition::new(da, db).expect("valid dimensions");
        let s = build_swaps(p);
        let id = ComplexMatrix::identity(p.dim() * p.dim());
        for m in [&s.s_full, &s.s_aa, &s.s_bb] {
            err = err.max((m * m).max_abs_diff(&id));
        }
        err = err.max((&s.s_aa * &s.s_bb).max_abs_diff(&s.s_full));
    }
    Check::at_most("swap-algebra", err, 1e-12)
}

fn swap_gate() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let swapped = (r % 2) * 2 + r / 2;
        Complex64::new(if c == swapped { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `G(I) = 0`, `G(SWAP) = 3/4`, `G(U_A ⊗ U_B) = 0`.
pub fn closed_bipartite_reference(seed: u64) -> Res<Check> {
    let p = Bipartition::new(2, 2).expect("valid dimensions");
    let g = |u: &ComplexMatrix| bipartite_otoc_closed(u, p).map(|g| g.raw.re).context(ctx("closed G"));
    let mut err = g(&ComplexMatrix::identity(4))?.abs();
    err = err.max((g(&swap_gate())? - 0.75).abs());
    let mut rng = rng_for(seed, 4);
    for _ in 0..5 {
        let local = haar_unitary(2, &mut rng)
            .context(ctx("haar"))?
            .kron(&haar_unitary(2, &mut rng).context(ctx("haar"))?);
        err = err.max(g(&local)?.abs());
    }
    Ok(Check::at_most("closed-bipartite-reference", err, 1e-10))
}

/// The channel formula on `X ↦ U† X U` against the closed formula on `U`.
pub fn open_closed_bipartite(seed: u64) -> Res<Check> {
    let p = Bipartition::new(2, 2).expect("valid dimensions");
    let mut rng = rng_for(seed, 5);
    let mut err = 0.0f64;
    for _ in 0..5 {
        let u = propagator(&random_hermitian(4, &mut rng), rng.random_range(0.2..3.0)).context(ctx("propagator"))?;
        let rep = channel_superoperator(
            |x| Ok(&(&u.adjoint() * x) * &u),
            &TensorLayout::qubits(2),
            Direction::Adjoint,
            Sense::Forward,
        )
        .context(ctx("superoperator"))?;
        let open = bipartite_otoc_open(&rep, p).context(ctx("open G"))?;
        let closed = bipartite_otoc_closed(&u, p).context(ctx("closed G"))?;
        err = err.max((open.raw.re - closed.raw.re).abs());
    }
    Ok(Check::at_most("open-closed-bipartite", err, 1e-9))
}

pub fn haar_identity(seed: u64) -> Res<Vec<Check>> {
    let bound = 5.0 / (HAAR_SAMPLES as f64).sqrt();
    [2usize, 4]
        .iter()
        .map(|&d| {
            let e = haar_identity_check(d, HAAR_SAMPLES, &mut sample_rng(seed, d)).context(ctx("haar identity"))?;
            Ok(Check::at_most(&format!("haar-identity-d{d}"), e, bound))
        })
        .collect()
}

/// Parallel Monte Carlo estimate of the bipartite OTOC of `adjoint`.
///
/// Sample `i` draws from its own substream and the reduction runs in index
/// order, so the estimate equals the sequential one for any worker count.
pub fn bipartite_mc_parallel(
    adjoint: impl Fn(&ComplexMatrix) -> otoc_core::Result<ComplexMatrix> + Sync,
    p: Bipartition,
    samples: usize,
    seed: u64,
) -> otoc_core::Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(otoc_core::Error::InvalidParameter(format!(
            "at least {MIN_SAMPLES} samples are needed, got {samples}"
        )));
    }
    let values = (0..samples)
        .into_par_iter()
        .map(|i| haar_mc_sample(&adjoint, p, &mut sample_rng(seed, i)))
        .collect::<otoc_core::Result<Vec<f64>>>()?;
    Ok(reduce_samples(&values))
}

/// Two-spin system with a two-spin LMG bath.
pub fn two_spin_lmg() -> IsingLMGParams {
    IsingLMGParams::uniform(2, 2, 2.0, 0.5, 1.0, 4.0, 10.0)
}

/// Largest `|MC − exact| / stderr` over `t ∈ {0.5, 1, 2}`.
pub fn monte_carlo_vs_formula(seed: u64) -> Res<Check> {
    let dynamics = OpenDynamics::ising_lmg(&two_spin_lmg(), BathState::Thermal { temperature: 10.0 }, false)
        .context(ctx("dynamics"))?;
    let p = Bipartition::new(2, 2).expect("valid dimensions");
    let mut worst = 0.0f64;
    for (k, t) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let kraus = dynamics.kraus(t, Sense::Forward);
        let exact = bipartite_otoc_open(&kraus.superoperator(Direction::Adjoint), p).context(ctx("open G"))?;
        let est = bipartite_mc_parallel(|x| kraus.apply_adjoint(x), p, HAAR_SAMPLES, seed.wrapping_add(k as u64))
            .context(ctx("monte carlo"))?;
        worst = worst.max((est.mean - exact.raw.re).abs() / est.stderr.max(f64::MIN_POSITIVE));
    }
    Ok(Check::at_most("monte-carlo-vs-formula", worst, 3.0))
}

/// Collective-block engine against the dense one, for `F` and `G`.
pub fn fast_path_vs_dense() -> Res<Check> {
    let times = [0.0, 0.7, 1.9, 3.3];
    let p = Bipartition::new(2, 2).expect("valid dimensions");
    let layout = TensorLayout::qubits(2);
    let req = OtocRequest::pauli(&layout, Axis::Z, 1, Axis::Z, 0, tilted_state(2), times.to_vec()).context(ctx("request"))?;
    let mut err = 0.0f64;
    for n_bath in 1..=6 {
        let inst = IsingLMGParams::uniform(2, n_bath, 2.0, 0.5, 1.0, 4.0, 10.0);
        let bath = BathState::Thermal { temperature: 10.0 };
        let dense = OpenDynamics::ising_lmg(&inst, bath, false).context(ctx("dense"))?;
        let fast = OpenDynamics::ising_lmg(&inst, bath, true).context(ctx("collective"))?;
        let f_dense = fotoc_open(&dense, &req).context(ctx("dense F"))?;
        let f_fast = fotoc_open(&fast, &req).context(ctx("collective F"))?;
        for (x, y) in f_dense.values.iter().zip(&f_fast.values) {
            err = err.max((x - y).abs());
        }
        for &t in &times {
            let g = |d: &OpenDynamics| {
                bipartite_otoc_open(&d.kraus(t, Sense::Forward).superoperator(Direction::Adjoint), p).context(ctx("G"))
            };
            err = err.max((g(&dense)?.raw.re - g(&fast)?.raw.re).abs());
        }
    }
    Ok(Check::at_most("fast-path-vs-dense", err, 1e-8))
}

/// In the closed LMG model every probe site gives the same series.
pub fn closed_lmg_site_independence() -> Res<Check> {
    let layout = TensorLayout::qubits(6);
    let times = uniform_grid(10.0, 41).context(ctx("grid"))?;
    let mut err = 0.0f64;
    for (gamma, omega_c) in [(1.0, 0.5), (0.0, 0.5), (0.5, 1.5)] {
        let h = build_lmg_closed(&LMGClosedParams { n_spins: 6, lambda: 1.0, gamma, omega_c }).context(ctx("closed LMG"))?;
        let series = (1..6)
            .map(|k| {
                let req = OtocRequest::pauli(&layout, Axis::Z, k, Axis::Z, 0, tilted_state(6), times.clone())?;
                fotoc_closed(&h, &req)
            })
            .collect::<otoc_core::Result<Vec<_>>>()
            .context(ctx("closed F"))?;
        for s in &series[1..] {
            err = err.max(crate::analysis::max_deviation(&series[0], s));
        }
    }
    Ok(Check::at_most("closed-lmg-site-independence", err, 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use otoc_core::bipartite::bipartite_otoc_haar_mc;

    #[test]
    fn parallel_estimate_matches_sequential() {
        let p = Bipartition::new(2, 2).unwrap();
        let sw = swap_gate();
        let f = |x: &ComplexMatrix| Ok(&(&sw * x) * &sw);
        let seq = bipartite_otoc_haar_mc(f, p, 300, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let par = pool.install(|| bipartite_mc_parallel(f, p, 300, 11)).unwrap();
        assert_eq!(seq, par);
        assert!(bipartite_mc_parallel(f, p, 10, 1).is_err());
    }

    #[test]
    fn cheap_checks_pass() {
        assert!(analytic_single_qubit().unwrap().passed);
        assert!(swap_algebra().passed);
        assert!(closed_bipartite_reference(0).unwrap().passed);
        assert!(open_closed_bipartite(0).unwrap().passed);
        let [a, b] = closed_protocol_and_commutator(0).unwrap();
        assert!(a.passed && b.passed, "{a:?} {b:?}");
    }

    #[test]
    fn swap_gate_exchanges_qubits() {
        let s = swap_gate();
        assert_eq!(s[(1, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(s[(3, 3)], Complex64::new(1.0, 0.0));
        assert!(s.unitarity_error() < 1e-15);
    }
}
