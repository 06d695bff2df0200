//! Experiment drivers. Every driver fans independent tasks out over the
//! current rayon pool, collects results in task order and only then folds
//! statistics, so outputs do not depend on the worker count.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind};
use super::records::{Observable, RunRecord};
use super::stats::{ks_test, Histogram, SummaryStats};
use crate::analytics::{
    asymptotic_prediction, haar_mean_sp2, mean_sp2, mean_sp2_tilted, mean_sp2_tilted_exact, neg_log2,
    pe_moment_mean, pe_shannon_mean, porter_thomas_cdf, to_f64, variance_sp2,
};
use crate::error::{Error, Result};
use crate::hamiltonians::{
    build_csyk_sector, build_mfim, build_xxz_nnn, diagonalize, embed_eigenvector, extract_sector_block,
    mean_gap_ratio, midspectrum_filter, ChargeConvention, CouplingTensor, HamiltonianMatrix, SpectralWindow,
};
use crate::magic::{participation_moment, shannon_pe, stabilizer_purity_fast};
use crate::sampler::{sample_constrained, SeedPolicy};
use crate::sectors::{enumerate_sector, sector_dimension, Direction, Frame};
use crate::state::PureState;

/// Default sampling cap; [`ExperimentConfig::allow_large`] raises it to [`SAMPLING_HARD_MAX_QUBITS`].
pub const SAMPLING_MAX_QUBITS: usize = 12;
pub const SAMPLING_HARD_MAX_QUBITS: usize = 14;
/// Largest sector block handed to the dense eigensolver.
pub const SECTOR_DIM_CAP: usize = 4000;

fn check_sampling_size(cfg: &ExperimentConfig) -> Result<()> {
    let l = cfg.n_qubits;
    let cap = if cfg.allow_large { SAMPLING_HARD_MAX_QUBITS } else { SAMPLING_MAX_QUBITS };
    if l == 0 || l > cap {
        let hint = if l <= SAMPLING_HARD_MAX_QUBITS { "; pass allow_large to go up to 14" } else { "" };
        return Err(Error::CostGuard {
            what: format!("sampling at L = {l} (limit {cap}{hint})"),
            estimate: format!(
                "{:.1e} flops and {:.1e} bytes per sample",
                l as f64 * 4f64.powi(l as i32),
                16.0 * 2f64.powi(l as i32)
            ),
        });
    }
    Ok(())
}

fn check_sector(n_qubits: usize, charge: i64) -> Result<u128> {
    match sector_dimension(n_qubits, charge) {
        0 => Err(Error::EmptySector { n_qubits, charge }),
        d => Ok(d),
    }
}

/// Per-state observables of one sampled state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateObservables {
    pub xi2: f64,
    pub m2: f64,
    pub pe2: f64,
    pub s2: f64,
    pub shannon_pe: f64,
}

pub fn state_observables(state: &PureState) -> Result<StateObservables> {
    let xi2 = stabilizer_purity_fast(state, 2.0)?;
    let pe2 = participation_moment(state, 2.0);
    Ok(StateObservables {
        xi2,
        m2: 0.0 - xi2.log2(),
        pe2,
        s2: 0.0 - pe2.log2(),
        shannon_pe: shannon_pe(state),
    })
}

struct SampleTask {
    seed: u64,
    obs: StateObservables,
    /// `|c_x|²` of the first sector member, for the Porter–Thomas check.
    probe: f64,
}

fn sample_tasks(cfg: &ExperimentConfig, id: &str, charge: i64, frame: &Frame, probe: usize) -> Result<Vec<SampleTask>> {
    let policy = SeedPolicy::new(cfg.seed);
    (0..cfg.samples as u64)
        .into_par_iter()
        .map(|task| {
            let seed = policy.child_seed(id, task);
            let state = sample_constrained(cfg.n_qubits, charge, frame, cfg.path, seed)?;
            Ok(SampleTask {
                seed,
                obs: state_observables(&state)?,
                probe: state.amplitudes()[probe].norm_sqr(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub n_qubits: usize,
    pub charge: i64,
    pub frame: String,
    pub sector_dim: u128,
    pub xi2: SummaryStats,
    pub m2: SummaryStats,
    pub s2: SummaryStats,
    pub shannon_pe: SummaryStats,
    pub xi2_histogram: Histogram,
    /// Exact `𝔼Ξ₂` over the sector.
    pub analytic_mean: f64,
    pub analytic_variance: f64,
    /// `-log₂ 𝔼Ξ₂`.
    pub analytic_m2_bound: f64,
    /// Unconstrained Haar value `4/(2^L+3)`.
    pub haar_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleOutput {
    pub summaries: Vec<EnsembleSummary>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

fn ensemble_id(cfg: &ExperimentConfig, charge: i64) -> String {
    format!("{}/L{}/q{}/{}", cfg.kind, cfg.n_qubits, charge, cfg.frame)
}

/// Samples `cfg.samples` Haar×U(1) states per charge in `cfg.charges` and
/// records Ξ₂, M₂, S₂ and the Shannon PE of each.
pub fn run_ensemble_experiment(cfg: &ExperimentConfig) -> Result<EnsembleOutput> {
    check_sampling_size(cfg)?;
    let l = cfg.n_qubits;
    let mut summaries = vec![];
    let mut records = vec![];
    for &q in &cfg.charges {
        let d = check_sector(l, q)?;
        let id = ensemble_id(cfg, q);
        let tasks = sample_tasks(cfg, &id, q, &cfg.frame, 0)?;
        let mut st = [SummaryStats::new(); 4];
        let mut xi_values = Vec::with_capacity(tasks.len());
        for (i, t) in tasks.iter().enumerate() {
            let o = t.obs;
            for (k, (obs, v)) in [
                (Observable::Xi2, o.xi2),
                (Observable::M2, o.m2),
                (Observable::S2, o.s2),
                (Observable::ShannonPe, o.shannon_pe),
            ]
            .into_iter()
            .enumerate()
            {
                st[k].push(v);
                records.push(RunRecord::new(&id, cfg.seed, i as u64, l, Some(q), obs, v).with_aux(Some(t.seed), None));
            }
            xi_values.push(o.xi2);
        }
        let mean = mean_sp2(l, q)?;
        summaries.push(EnsembleSummary {
            n_qubits: l,
            charge: q,
            frame: cfg.frame.to_string(),
            sector_dim: d,
            xi2: st[0],
            m2: st[1],
            s2: st[2],
            shannon_pe: st[3],
            xi2_histogram: Histogram::from_values(&xi_values, Histogram::DEFAULT_BINS),
            analytic_mean: to_f64(&mean),
            analytic_variance: to_f64(&variance_sp2(l, q)?),
            analytic_m2_bound: neg_log2(&mean),
            haar_mean: to_f64(&haar_mean_sp2(l)),
        });
    }
    Ok(EnsembleOutput { summaries, records })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Checkpoint {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceConvergence {
    pub n_qubits: usize,
    pub charge: i64,
    pub exact_mean: f64,
    pub exact_variance: f64,
    /// Running statistics at 1-2-5 sample counts and at the final count.
    pub checkpoints: Vec<Checkpoint>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Running mean and variance of Ξ₂ against the exact moments (first charge only).
pub fn run_variance_convergence(cfg: &ExperimentConfig) -> Result<VarianceConvergence> {
    check_sampling_size(cfg)?;
    let l = cfg.n_qubits;
    let q = first_charge(cfg)?;
    check_sector(l, q)?;
    let id = ensemble_id(cfg, q);
    let tasks = sample_tasks(cfg, &id, q, &cfg.frame, 0)?;
    let mut marks: Vec<u64> = [1u64, 2, 5]
        .iter()
        .flat_map(|&m| (1..=12).map(move |e| m * 10u64.pow(e)))
        .filter(|&n| n < tasks.len() as u64)
        .collect();
    marks.push(tasks.len() as u64);
    marks.sort_unstable();
    let mut st = SummaryStats::new();
    let mut checkpoints = vec![];
    let mut records = vec![];
    for (i, t) in tasks.iter().enumerate() {
        st.push(t.obs.xi2);
        records.push(RunRecord::new(&id, cfg.seed, i as u64, l, Some(q), Observable::Xi2, t.obs.xi2).with_aux(Some(t.seed), None));
        if marks.binary_search(&st.count).is_ok() {
            checkpoints.push(Checkpoint {
                count: st.count,
                mean: st.mean,
                variance: st.variance(),
                std_error: st.std_error(),
            });
        }
    }
    Ok(VarianceConvergence {
        n_qubits: l,
        charge: q,
        exact_mean: to_f64(&mean_sp2(l, q)?),
        exact_variance: to_f64(&variance_sp2(l, q)?),
        checkpoints,
        records,
    })
}

fn first_charge(cfg: &ExperimentConfig) -> Result<i64> {
    cfg.charges
        .first()
        .copied()
        .ok_or_else(|| Error::Config("at least one charge is required".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Model {
    Csyk,
    Xxz,
    Mfim,
}

impl Model {
    pub fn from_kind(kind: ExperimentKind) -> Option<Model> {
        match kind {
            ExperimentKind::CsykSweep | ExperimentKind::SelfAveraging => Some(Model::Csyk),
            ExperimentKind::XxzSweep => Some(Model::Xxz),
            ExperimentKind::MfimSweep => Some(Model::Mfim),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Model::Csyk => "csyk",
            Model::Xxz => "xxz",
            Model::Mfim => "mfim",
        }
    }
}

/// Statistics of mid-spectrum eigenstates in one sector (or the full space).
#[derive(Debug, Clone, Serialize)]
pub struct SectorSweepSummary {
    /// `None` for a non-conserving model diagonalized on the full space.
    pub charge: Option<i64>,
    pub dim: usize,
    /// The block vanished identically in at least one realization.
    pub degenerate: bool,
    /// M₂ pooled over eigenstates and realizations.
    pub m2: SummaryStats,
    /// Per-realization mean M₂.
    pub realization_means: SummaryStats,
    /// Disorder relative variance `Var(realization means)/mean²`.
    pub disorder_relative_variance: f64,
    /// Per-realization mean adjacent-gap ratio inside the window.
    pub gap_ratio: SummaryStats,
    /// `-log₂ 𝔼Ξ₂` of the matching Haar×U(1) sector (q = 0 for full-space runs).
    pub haar_u1_m2: f64,
    pub skipped_realizations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub model: Model,
    pub n_qubits: usize,
    pub window: SpectralWindow,
    pub sectors: Vec<SectorSweepSummary>,
    /// `-log₂ 4/(2^L+3)`.
    pub haar_m2: f64,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

fn sweep_window(cfg: &ExperimentConfig, model: Model) -> SpectralWindow {
    match (cfg.window, cfg.fraction) {
        (Some(w), _) => SpectralWindow::EnergyDensity(w),
        (None, Some(f)) => SpectralWindow::CentralFraction(f),
        (None, None) => match model {
            Model::Csyk => SpectralWindow::CentralFraction(0.1),
            _ => SpectralWindow::EnergyDensity(0.25),
        },
    }
}

/// Mid-spectrum eigenstates of one block.
struct BlockResult {
    degenerate: bool,
    /// `(eigen index, energy, M₂)`.
    states: Vec<(usize, f64, f64)>,
    gap_ratio: Option<f64>,
}

fn analyze_block(h: &HamiltonianMatrix, window: SpectralWindow) -> Result<BlockResult> {
    let dim = h.dim();
    if dim > SECTOR_DIM_CAP {
        return Err(Error::CostGuard {
            what: format!("dense diagonalization of a {dim}-dimensional block (limit {SECTOR_DIM_CAP})"),
            estimate: format!("{:.1e} flops", 10.0 * (dim as f64).powi(3)),
        });
    }
    let degenerate = h.max_abs() == 0.0;
    let es = diagonalize(h)?;
    let keep = midspectrum_filter(&es.values, h.n_qubits, window);
    let kept: Vec<f64> = keep.iter().map(|&k| es.values[k]).collect();
    let mut states = Vec::with_capacity(keep.len());
    for &k in &keep {
        let v = es.vector(k);
        let state = match &h.sector {
            Some((_, map)) => embed_eigenvector(&v, map)?,
            None => PureState::from_amplitudes(h.n_qubits, v)?,
        };
        let xi = stabilizer_purity_fast(&state, 2.0)?;
        states.push((k, es.values[k], 0.0 - xi.log2()));
    }
    Ok(BlockResult {
        degenerate,
        states,
        gap_ratio: if degenerate { None } else { mean_gap_ratio(&kept) },
    })
}

/// Builds every block of one realization; `None` charge means full space.
fn realization_blocks(
    cfg: &ExperimentConfig,
    model: Model,
    coupling_seed: u64,
) -> Result<Vec<(Option<i64>, HamiltonianMatrix)>> {
    let l = cfg.n_qubits;
    match model {
        Model::Csyk => {
            let j = CouplingTensor::sample(l, coupling_seed)?;
            cfg.charges
                .iter()
                .map(|&q| Ok((Some(q), build_csyk_sector(&j, q)?)))
                .collect()
        }
        Model::Xxz => {
            let h = build_xxz_nnn(l, &cfg.xxz)?;
            if h.max_charge_violation() == 0.0 {
                cfg.charges
                    .iter()
                    .map(|&q| Ok((Some(q), extract_sector_block(&h, q)?)))
                    .collect()
            } else {
                Ok(vec![(None, h)])
            }
        }
        Model::Mfim => Ok(vec![(None, build_mfim(l, &cfg.mfim)?)]),
    }
}

fn model_sectors(cfg: &ExperimentConfig, model: Model) -> Result<Vec<Option<i64>>> {
    let l = cfg.n_qubits;
    let conserving = match model {
        Model::Csyk => true,
        Model::Xxz => cfg.xxz.h_x == 0.0,
        Model::Mfim => false,
    };
    if !conserving {
        return Ok(vec![None]);
    }
    if cfg.charges.is_empty() {
        return Err(Error::Config("at least one charge is required".into()));
    }
    for &q in &cfg.charges {
        check_sector(l, q)?;
    }
    Ok(cfg.charges.iter().map(|&q| Some(q)).collect())
}

/// Diagonalizes a model over disorder realizations and collects M₂ of
/// mid-spectrum eigenstates per sector. A realization whose eigensolver
/// contract fails is skipped and reported in `diagnostics`.
pub fn run_disorder_sweep(cfg: &ExperimentConfig, model: Model) -> Result<SweepOutput> {
    let l = cfg.n_qubits;
    let sectors = model_sectors(cfg, model)?;
    let window = sweep_window(cfg, model);
    // the spin chains carry no disorder
    let realizations = if model == Model::Csyk { cfg.realizations } else { 1 };
    if realizations == 0 {
        return Err(Error::Config("at least one realization is required".into()));
    }
    let id = format!("{}/L{}", model.name(), l);
    let policy = SeedPolicy::new(cfg.seed);

    let per_realization: Vec<Result<Vec<BlockResult>>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let blocks = realization_blocks(cfg, model, policy.child_seed(&id, r))?;
            blocks.iter().map(|(_, h)| analyze_block(h, window)).collect()
        })
        .collect();

    let mut diagnostics = vec![];
    let mut records = vec![];
    let convention = if model == Model::Csyk { ChargeConvention::Fermion } else { ChargeConvention::Spin };
    let mut summaries: Vec<SectorSweepSummary> = sectors
        .iter()
        .map(|&q| {
            let (dim, u1_charge) = match q {
                Some(q) => {
                    let pop = convention.popcount(l, q).expect("checked sector");
                    (enumerate_sector(l, l as i64 - 2 * pop as i64).len(), l as i64 - 2 * pop as i64)
                }
                None => (1usize << l, if l % 2 == 0 { 0 } else { 1 }),
            };
            Ok(SectorSweepSummary {
                charge: q,
                dim,
                degenerate: false,
                m2: SummaryStats::new(),
                realization_means: SummaryStats::new(),
                disorder_relative_variance: f64::NAN,
                gap_ratio: SummaryStats::new(),
                haar_u1_m2: neg_log2(&mean_sp2(l, u1_charge)?),
                skipped_realizations: 0,
            })
        })
        .collect::<Result<_>>()?;

    for (r, result) in per_realization.into_iter().enumerate() {
        let blocks = match result {
            Ok(b) => b,
            Err(e @ (Error::Numerical(_) | Error::InvalidInput(_))) => {
                let msg = format!("realization {r} skipped: {e}");
                log::warn!("{msg}");
                diagnostics.push(msg);
                summaries.iter_mut().for_each(|s| s.skipped_realizations += 1);
                continue;
            }
            Err(e) => return Err(e),
        };
        for (s, block) in summaries.iter_mut().zip(blocks) {
            s.degenerate |= block.degenerate;
            let mut local = SummaryStats::new();
            for &(k, e, m2) in &block.states {
                local.push(m2);
                let aux = (Some(k as u64), Some(e / l as f64));
                records.push(RunRecord::new(&id, cfg.seed, r as u64, l, s.charge, Observable::Energy, e).with_aux(aux.0, aux.1));
                records.push(RunRecord::new(&id, cfg.seed, r as u64, l, s.charge, Observable::M2, m2).with_aux(aux.0, aux.1));
            }
            s.m2 = s.m2.merge(&local);
            if local.count > 0 {
                s.realization_means.push(local.mean);
            }
            if let Some(g) = block.gap_ratio {
                s.gap_ratio.push(g);
            }
        }
    }
    for s in &mut summaries {
        s.disorder_relative_variance = s.realization_means.relative_variance();
    }
    Ok(SweepOutput {
        model,
        n_qubits: l,
        window,
        sectors: summaries,
        haar_m2: neg_log2(&haar_mean_sp2(l)),
        diagnostics,
        records,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfAveragingRow {
    pub n_qubits: usize,
    pub charge: i64,
    pub mean_m2: f64,
    pub disorder_relative_variance: f64,
    pub realizations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfAveragingOutput {
    pub rows: Vec<SelfAveragingRow>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Disorder relative variance of the mean cSYK eigenstate M₂ against `L`.
pub fn run_self_averaging(cfg: &ExperimentConfig) -> Result<SelfAveragingOutput> {
    let sizes = if cfg.sizes.is_empty() { vec![cfg.n_qubits] } else { cfg.sizes.clone() };
    let q = first_charge(cfg)?;
    let mut rows = vec![];
    let mut records = vec![];
    for l in sizes {
        let mut sub = cfg.clone();
        sub.n_qubits = l;
        // keep the charge density for odd L
        sub.charges = vec![if (l as i64 - q).rem_euclid(2) == 0 { q } else { q + 1 }];
        let out = run_disorder_sweep(&sub, Model::Csyk)?;
        let s = &out.sectors[0];
        rows.push(SelfAveragingRow {
            n_qubits: l,
            charge: s.charge.unwrap_or(0),
            mean_m2: s.m2.mean,
            disorder_relative_variance: s.disorder_relative_variance,
            realizations: s.realization_means.count,
        });
        records.extend(out.records);
    }
    Ok(SelfAveragingOutput { rows, records })
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseRow {
    pub n_qubits: usize,
    pub s_requested: f64,
    pub charge: i64,
    /// `q/L` after rounding `sL` to the parity of `L`.
    pub s: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub scaled_difference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaCollapseRow {
    pub n_qubits: usize,
    pub theta_sqrt_l: f64,
    pub theta: f64,
    /// `-log₂ 𝔼Ξ₂` at `q = 0` for `n̂ = (sin θ, 0, cos θ)`.
    pub exact: f64,
    pub exact_minus_l: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseOutput {
    pub rows: Vec<CollapseRow>,
    pub theta_rows: Vec<ThetaCollapseRow>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Nearest charge to `s·L` with the parity of `L`, clamped to `[-L, L]`.
pub fn nearest_valid_charge(n_qubits: usize, s: f64) -> i64 {
    let l = n_qubits as i64;
    let target = s * n_qubits as f64;
    let mut q = target.round() as i64;
    if (l - q).rem_euclid(2) != 0 {
        q += if target >= q as f64 { 1 } else { -1 };
    }
    q.clamp(-l, l)
}

/// Exact `-log₂ 𝔼Ξ₂(L, sL)` against `m(s)L + g(s)`, plus the tilted-charge table
/// at fixed `θ√L` when `cfg.thetas` is non-empty.
pub fn run_asymptotic_collapse(cfg: &ExperimentConfig) -> Result<CollapseOutput> {
    let sizes = if cfg.sizes.is_empty() { vec![cfg.n_qubits] } else { cfg.sizes.clone() };
    for &s in &cfg.densities {
        if !(0.0..=0.9).contains(&s) {
            return Err(Error::Config(format!("charge density {s} outside [0, 0.9]")));
        }
    }
    let grid: Vec<(usize, f64)> = sizes
        .iter()
        .flat_map(|&l| cfg.densities.iter().map(move |&s| (l, s)))
        .collect();
    let rows: Vec<CollapseRow> = grid
        .par_iter()
        .map(|&(l, s_req)| {
            let q = nearest_valid_charge(l, s_req);
            let s = q as f64 / l as f64;
            let exact = neg_log2(&mean_sp2(l, q)?);
            let asymptotic = asymptotic_prediction(s)?.neg_log2_mean(l);
            Ok(CollapseRow {
                n_qubits: l,
                s_requested: s_req,
                charge: q,
                s,
                exact,
                asymptotic,
                scaled_difference: l as f64 * (exact - asymptotic),
            })
        })
        .collect::<Result<_>>()?;

    let tgrid: Vec<(usize, f64)> = sizes
        .iter()
        .flat_map(|&l| cfg.thetas.iter().map(move |&t| (l, t)))
        .filter(|&(l, _)| l % 2 == 0)
        .collect();
    let theta_rows: Vec<ThetaCollapseRow> = tgrid
        .par_iter()
        .map(|&(l, x)| {
            let theta = x / (l as f64).sqrt();
            let exact = neg_log2(&mean_sp2_tilted_exact(l, 0, &Direction::from_theta(theta))?);
            Ok(ThetaCollapseRow {
                n_qubits: l,
                theta_sqrt_l: x,
                theta,
                exact,
                exact_minus_l: exact - l as f64,
            })
        })
        .collect::<Result<_>>()?;

    let id = "asymptotic-collapse";
    let mut records = vec![];
    for (i, r) in rows.iter().enumerate() {
        for (obs, v) in [
            (Observable::NegLog2Mean, r.exact),
            (Observable::Asymptotic, r.asymptotic),
            (Observable::ScaledDifference, r.scaled_difference),
        ] {
            records.push(RunRecord::new(id, cfg.seed, i as u64, r.n_qubits, Some(r.charge), obs, v).with_aux(None, Some(r.s)));
        }
    }
    for (i, r) in theta_rows.iter().enumerate() {
        records.push(
            RunRecord::new("theta-collapse", cfg.seed, i as u64, r.n_qubits, Some(0), Observable::NegLog2Mean, r.exact)
                .with_aux(None, Some(r.theta_sqrt_l)),
        );
    }
    Ok(CollapseOutput { rows, theta_rows, records })
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedChargeRow {
    pub theta: f64,
    pub exact_mean: f64,
    pub xi2: SummaryStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedChargeOutput {
    pub n_qubits: usize,
    pub charge: i64,
    pub rows: Vec<MixedChargeRow>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Ξ₂ of states constrained by the tilted charge `Σ_j (sin θ X_j + cos θ Z_j)`
/// across `cfg.thetas`, with the exact mean alongside.
pub fn run_mixed_charge(cfg: &ExperimentConfig) -> Result<MixedChargeOutput> {
    check_sampling_size(cfg)?;
    let l = cfg.n_qubits;
    let q = first_charge(cfg)?;
    check_sector(l, q)?;
    if cfg.thetas.is_empty() {
        return Err(Error::Config("mixed-charge run needs a theta grid".into()));
    }
    let mut rows = vec![];
    let mut records = vec![];
    for (ti, &theta) in cfg.thetas.iter().enumerate() {
        let dir = Direction::from_theta(theta);
        let id = format!("mixed-charge/L{l}/q{q}/theta{ti}");
        let tasks = sample_tasks(cfg, &id, q, &Frame::Tilted(dir), 0)?;
        let mut st = SummaryStats::new();
        for (i, t) in tasks.iter().enumerate() {
            st.push(t.obs.xi2);
            records.push(RunRecord::new(&id, cfg.seed, i as u64, l, Some(q), Observable::Xi2, t.obs.xi2).with_aux(Some(ti as u64), Some(theta)));
        }
        rows.push(MixedChargeRow {
            theta,
            exact_mean: mean_sp2_tilted(l, q, &dir)?,
            xi2: st,
        });
    }
    Ok(MixedChargeOutput {
        n_qubits: l,
        charge: q,
        rows,
        records,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PeCheckOutput {
    pub n_qubits: usize,
    pub charge: i64,
    pub sector_dim: u128,
    /// `Σ_x |c_x|⁴`.
    pub pe2: SummaryStats,
    /// `2/(d+1)`.
    pub pe2_exact: f64,
    /// Shannon PE in bits.
    pub shannon_pe: SummaryStats,
    /// `(H_d - 1)/ln 2`.
    pub shannon_pe_exact: f64,
    /// KS statistic and p-value of `d·|c_x|²` on one sector basis state against Porter–Thomas.
    pub ks_statistic: f64,
    pub ks_p_value: f64,
    /// Samples violating `M₂ ≤ 2·S₂`.
    pub sre_bound_violations: u64,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Participation-entropy statistics of sector-Haar states in the z basis.
pub fn run_pe_check(cfg: &ExperimentConfig) -> Result<PeCheckOutput> {
    check_sampling_size(cfg)?;
    let l = cfg.n_qubits;
    let q = first_charge(cfg)?;
    let d = check_sector(l, q)?;
    let probe = enumerate_sector(l, q).index(0);
    let id = format!("pe-check/L{l}/q{q}");
    let tasks = sample_tasks(cfg, &id, q, &Frame::Z, probe)?;
    let mut pe2 = SummaryStats::new();
    let mut sh = SummaryStats::new();
    let mut violations = 0;
    let mut records = vec![];
    let mut w = Vec::with_capacity(tasks.len());
    for (i, t) in tasks.iter().enumerate() {
        let o = t.obs;
        pe2.push(o.pe2);
        sh.push(o.shannon_pe);
        // rounding slack for the equality case of stabilizer states
        if o.m2 > 2.0 * o.s2 + 1e-12 {
            violations += 1;
        }
        w.push(d as f64 * t.probe);
        for (obs, v) in [
            (Observable::Pe2, o.pe2),
            (Observable::S2, o.s2),
            (Observable::ShannonPe, o.shannon_pe),
            (Observable::M2, o.m2),
        ] {
            records.push(RunRecord::new(&id, cfg.seed, i as u64, l, Some(q), obs, v).with_aux(Some(t.seed), None));
        }
    }
    let dd = u64::try_from(d).map_err(|_| Error::InvalidInput("sector too large".into()))?;
    let (ks_statistic, ks_p_value) = ks_test(&w, |x| porter_thomas_cdf(x, dd));
    Ok(PeCheckOutput {
        n_qubits: l,
        charge: q,
        sector_dim: d,
        pe2,
        pe2_exact: to_f64(&pe_moment_mean(dd, 2)),
        shannon_pe: sh,
        shannon_pe_exact: pe_shannon_mean(dd),
        ks_statistic,
        ks_p_value,
        sre_bound_violations: violations,
        records,
    })
}

/// Result of any experiment kind.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ExperimentOutput {
    Ensemble(EnsembleOutput),
    VarianceConvergence(VarianceConvergence),
    Sweep(SweepOutput),
    SelfAveraging(SelfAveragingOutput),
    Collapse(CollapseOutput),
    MixedCharge(MixedChargeOutput),
    PeCheck(PeCheckOutput),
}

impl ExperimentOutput {
    pub fn records(&self) -> &[RunRecord] {
        match self {
            ExperimentOutput::Ensemble(o) => &o.records,
            ExperimentOutput::VarianceConvergence(o) => &o.records,
            ExperimentOutput::Sweep(o) => &o.records,
            ExperimentOutput::SelfAveraging(o) => &o.records,
            ExperimentOutput::Collapse(o) => &o.records,
            ExperimentOutput::MixedCharge(o) => &o.records,
            ExperimentOutput::PeCheck(o) => &o.records,
        }
    }

    /// Pretty JSON of the summary part (records excluded).
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization")
    }
}

/// Dispatches on `cfg.kind` within the current thread pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    use ExperimentKind::*;
    Ok(match cfg.kind {
        Mean | Histogram => ExperimentOutput::Ensemble(run_ensemble_experiment(cfg)?),
        VarianceConvergence => ExperimentOutput::VarianceConvergence(run_variance_convergence(cfg)?),
        CsykSweep | XxzSweep | MfimSweep => {
            ExperimentOutput::Sweep(run_disorder_sweep(cfg, Model::from_kind(cfg.kind).expect("sweep kind"))?)
        }
        SelfAveraging => ExperimentOutput::SelfAveraging(run_self_averaging(cfg)?),
        AsymptoticCollapse => ExperimentOutput::Collapse(run_asymptotic_collapse(cfg)?),
        MixedCharge => ExperimentOutput::MixedCharge(run_mixed_charge(cfg)?),
        PeCheck => ExperimentOutput::PeCheck(run_pe_check(cfg)?),
    })
}
