//! Serializable report documents. Field names here are the public JSON
//! format described in `docs/report.schema.json`.

use contextuality_core::experiment::{
    luders_distribution, simulate, ChiResult, CorrelationResult, Mode, RunConfig, OUTCOME_LABELS,
};
use contextuality_core::nchv::{certify_bound, chi_of_assignment, enumerate_assignments, Assignment};
use contextuality_core::optics::{
    build_cascade, run_cascade, solve_preparation, DeviceBank, DeviceNetlist, PreparationParams, INSTRUMENT_TOL,
};
use contextuality_core::pm_square::{Label, CONTEXTS};
use contextuality_core::state_catalog::{catalog, classify, density, StateKind, StateSpec};
use contextuality_core::{experiment::NoiseModel, Error};
use serde::Serialize;

/// Optics-versus-reference tolerance in total variation.
pub const OPTICS_TV_TOL: f64 = 1e-9;

const QUANTUM_CHI: i32 = 6;

fn kind_name(kind: StateKind) -> &'static str {
    match kind {
        StateKind::Pure => "pure",
        StateKind::Mixed => "mixed",
    }
}

#[derive(Serialize, Debug)]
pub struct CatalogRow {
    pub index: usize,
    pub id: &'static str,
    pub label: String,
    pub kind: &'static str,
    pub definition: &'static str,
    pub chsh_max: f64,
    pub ppt_min_eig: f64,
    pub is_ppt_separable: bool,
    pub violates_chsh: bool,
    /// Optical settings producing the state; pure states only.
    pub preparation: Option<PreparationParams>,
}

pub fn catalog_rows() -> Result<Vec<CatalogRow>, Error> {
    catalog()
        .iter()
        .map(|spec| {
            let e = classify(&density(spec)?);
            let preparation = spec.pure_ket.as_ref().map(solve_preparation).transpose()?;
            Ok(CatalogRow {
                index: spec.index,
                id: spec.id,
                label: spec.pretty_id(),
                kind: kind_name(spec.kind),
                definition: spec.definition,
                chsh_max: e.chsh_max,
                ppt_min_eig: e.ppt_min_eig,
                is_ppt_separable: e.is_ppt_separable,
                violates_chsh: e.violates_chsh,
                preparation,
            })
        })
        .collect()
}

#[derive(Serialize, Debug)]
pub struct ConfigView {
    pub shots_per_context: u64,
    pub seed: u64,
    pub vis_phase_sensitive: f64,
    pub vis_phase_insensitive: f64,
    pub detection_efficiency: f64,
    pub mode: &'static str,
    pub mixed_states: &'static str,
}

impl ConfigView {
    fn new(cfg: &RunConfig, mode: Mode, direct: bool) -> Self {
        Self {
            shots_per_context: cfg.shots_per_context,
            seed: cfg.seed,
            vis_phase_sensitive: cfg.noise.vis_phase_sensitive,
            vis_phase_insensitive: cfg.noise.vis_phase_insensitive,
            detection_efficiency: cfg.noise.detection_efficiency,
            mode: match mode {
                Mode::Sampled => "sampled",
                Mode::Exact => "exact",
            },
            mixed_states: if direct { "direct" } else { "combined" },
        }
    }
}

/// One detector bin.
#[derive(Serialize, Debug)]
pub struct Bin {
    pub outcome: &'static str,
    pub count: Option<u64>,
    /// Model detection probability.
    pub probability: f64,
    /// Observed relative frequency.
    pub frequency: Option<f64>,
}

#[derive(Serialize, Debug)]
pub struct ContextView {
    pub context: String,
    pub labels: [&'static str; 3],
    pub sign: i8,
    pub expectation: f64,
    pub sd: f64,
    pub bins: Vec<Bin>,
}

impl ContextView {
    fn new(c: &CorrelationResult) -> Self {
        let frequencies = c.counts.and_then(|n| n.frequencies());
        let bins = (0..8)
            .map(|i| Bin {
                outcome: OUTCOME_LABELS[i],
                count: c.counts.map(|n| n.counts[i]),
                probability: c.probabilities.probabilities[i],
                frequency: frequencies.map(|f| f.probabilities[i]),
            })
            .collect();
        Self {
            context: c.context.name(),
            labels: c.context.ordered_labels.map(Label::ascii),
            sign: c.context.sign,
            expectation: c.expectation,
            sd: c.sd,
            bins,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct StateRun {
    pub id: &'static str,
    pub label: String,
    pub kind: &'static str,
    pub chi: f64,
    pub chi_sd: f64,
    pub sds_of_violation: Option<f64>,
    pub contexts: Vec<ContextView>,
}

/// A row of the summary table: the six correlations, their errors and χ.
#[derive(Serialize, Debug)]
pub struct TableRow {
    pub state: &'static str,
    pub label: String,
    pub expectations: Vec<f64>,
    pub sds: Vec<f64>,
    pub chi: f64,
    pub chi_sd: f64,
    pub sds_of_violation: Option<f64>,
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: &'static str,
    pub config: ConfigView,
    pub contexts: Vec<String>,
    pub table: Vec<TableRow>,
    pub states: Vec<StateRun>,
    pub pure_state_average_chi: Option<f64>,
    /// Every χ exceeds 4 by at least three standard deviations (or exceeds 4
    /// outright for exact runs).
    #[serde(skip)]
    pub all_violate: bool,
}

fn violates(r: &ChiResult) -> bool {
    r.chi - 4.0 > 3.0 * r.chi_sd
}

pub fn run(states: &[StateSpec], cfg: &RunConfig, mode: Mode, direct: bool) -> Result<RunReport, Error> {
    let bank = DeviceBank::compile()?;
    let results = states.iter().map(|s| simulate(&bank, s, cfg, mode, direct)).collect::<Result<Vec<_>, _>>()?;

    let table = states
        .iter()
        .zip(&results)
        .map(|(s, r)| TableRow {
            state: s.id,
            label: s.pretty_id(),
            expectations: r.per_context.iter().map(|c| c.expectation).collect(),
            sds: r.per_context.iter().map(|c| c.sd).collect(),
            chi: r.chi,
            chi_sd: r.chi_sd,
            sds_of_violation: r.sds_of_violation,
        })
        .collect();
    let runs = states
        .iter()
        .zip(&results)
        .map(|(s, r)| StateRun {
            id: s.id,
            label: s.pretty_id(),
            kind: kind_name(s.kind),
            chi: r.chi,
            chi_sd: r.chi_sd,
            sds_of_violation: r.sds_of_violation,
            contexts: r.per_context.iter().map(ContextView::new).collect(),
        })
        .collect();
    let pure: Vec<f64> =
        states.iter().zip(&results).filter(|(s, _)| s.kind == StateKind::Pure).map(|(_, r)| r.chi).collect();

    Ok(RunReport {
        command: "run",
        config: ConfigView::new(cfg, mode, direct),
        contexts: CONTEXTS.iter().map(|c| c.name()).collect(),
        table,
        states: runs,
        pure_state_average_chi: (!pure.is_empty()).then(|| pure.iter().sum::<f64>() / pure.len() as f64),
        all_violate: results.iter().all(violates),
    })
}

#[derive(Serialize, Debug)]
pub struct SweepRow {
    pub vis_ps: f64,
    pub vis_pi: f64,
    pub state: &'static str,
    pub chi: f64,
    pub chi_sd: f64,
}

pub fn sweep(states: &[StateSpec], configs: &[RunConfig], mode: Mode, direct: bool) -> Result<Vec<SweepRow>, Error> {
    let bank = DeviceBank::compile()?;
    let mut rows = Vec::new();
    for cfg in configs {
        for s in states {
            let r = simulate(&bank, s, cfg, mode, direct)?;
            rows.push(SweepRow {
                vis_ps: cfg.noise.vis_phase_sensitive,
                vis_pi: cfg.noise.vis_phase_insensitive,
                state: s.id,
                chi: r.chi,
                chi_sd: r.chi_sd,
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize, Debug)]
pub struct DeviceView {
    pub label: &'static str,
    pub netlist: DeviceNetlist,
    pub unitary_deviation: f64,
    pub instrument_deviation: f64,
    pub pass: bool,
}

#[derive(Serialize, Debug)]
pub struct OpticsCheck {
    pub state: &'static str,
    pub context: String,
    pub total_variation: f64,
    pub pass: bool,
}

#[derive(Serialize, Debug)]
pub struct OpticsReport {
    pub command: &'static str,
    pub devices: Vec<DeviceView>,
    pub checks: Vec<OpticsCheck>,
    pub max_total_variation: f64,
    pub max_instrument_deviation: f64,
    pub pass: bool,
}

pub fn verify_optics() -> Result<OpticsReport, Error> {
    let bank = DeviceBank::compile()?;
    let devices: Vec<DeviceView> = bank
        .iter()
        .map(|d| {
            let instrument_deviation = d.instrument_deviation();
            let unitary_deviation = d.analysis_unitary.unitary_deviation();
            DeviceView {
                label: d.label.ascii(),
                netlist: d.netlist.clone(),
                unitary_deviation,
                instrument_deviation,
                pass: instrument_deviation < INSTRUMENT_TOL && unitary_deviation < INSTRUMENT_TOL,
            }
        })
        .collect();
    let mut checks = Vec::new();
    for spec in catalog() {
        let rho = density(&spec)?;
        for ctx in CONTEXTS {
            let optics = run_cascade(&rho, &build_cascade(&bank, ctx), &NoiseModel::ideal());
            let total_variation = optics.total_variation(&luders_distribution(&rho, &ctx));
            checks.push(OpticsCheck {
                state: spec.id,
                context: ctx.name(),
                total_variation,
                pass: total_variation < OPTICS_TV_TOL,
            });
        }
    }
    let max_total_variation = checks.iter().map(|c| c.total_variation).fold(0.0, f64::max);
    let max_instrument_deviation = devices.iter().map(|d| d.instrument_deviation).fold(0.0, f64::max);
    let pass = devices.iter().all(|d| d.pass) && checks.iter().all(|c| c.pass);
    Ok(OpticsReport { command: "verify-optics", devices, checks, max_total_variation, max_instrument_deviation, pass })
}

#[derive(Serialize, Debug)]
pub struct AssignmentRow {
    pub index: usize,
    /// Values in the order A, B, C, a, b, c, α, β, γ.
    pub values: [i8; 9],
    pub chi: i32,
}

impl AssignmentRow {
    fn new(index: usize, a: &Assignment) -> Self {
        Self { index, values: a.values, chi: chi_of_assignment(a) }
    }
}

#[derive(Serialize, Debug)]
pub struct ClassicalReport {
    pub command: &'static str,
    pub assignments: usize,
    pub max_chi: i32,
    pub min_chi: i32,
    pub argmax_count: usize,
    pub quantum_chi: i32,
    pub quantum_gap: i32,
    pub maximizers: Vec<AssignmentRow>,
    /// Every assignment; only with `--table`.
    pub table: Option<Vec<AssignmentRow>>,
}

pub fn certify(with_table: bool) -> Result<ClassicalReport, Error> {
    let cert = certify_bound()?;
    let all = enumerate_assignments();
    let rows: Vec<AssignmentRow> = all.iter().enumerate().map(|(i, a)| AssignmentRow::new(i, a)).collect();
    let maximizers = rows
        .iter()
        .filter(|r| r.chi == cert.max_chi)
        .map(|r| AssignmentRow { index: r.index, values: r.values, chi: r.chi })
        .collect();
    Ok(ClassicalReport {
        command: "certify-classical",
        assignments: cert.assignments,
        max_chi: cert.max_chi,
        min_chi: cert.min_chi,
        argmax_count: cert.argmax_count(),
        quantum_chi: QUANTUM_CHI,
        quantum_gap: QUANTUM_CHI - cert.max_chi,
        maximizers,
        table: with_table.then_some(rows),
    })
}
