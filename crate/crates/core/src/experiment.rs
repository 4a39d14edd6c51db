//! Lüders reference semantics, the χ statistic and simulated photon counting.
//!
//! A run pushes the state through the optical cascade of every context, draws
//! a Poisson number of photons, splits them over the eight detectors, thins the
//! counts by the detection efficiency and estimates each correlation with
//! propagated Poisson errors.

use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::optics::{build_cascade, run_cascade, DeviceBank, MeasurementDevice};
use crate::pm_square::{Context, CONTEXTS};
use crate::qcore::{pm_projectors, ComplexMatrix, DensityMatrix};
use crate::state_catalog::{density, find, StateKind, StateSpec, Weight};

/// Classical bound of the inequality.
pub const NCHV_BOUND: f64 = 4.0;

/// Photons per context in the reference experiment.
pub const DEFAULT_SHOTS: u64 = 17_000_000;

/// Outcome triples in detector order: `+++, ++−, +−+, +−−, −++, −+−, −−+, −−−`.
pub const OUTCOME_SIGNS: [[i8; 3]; 8] = {
    let mut signs = [[0i8; 3]; 8];
    let mut i = 0;
    while i < 8 {
        let mut level = 0;
        while level < 3 {
            signs[i][level] = if (i >> (2 - level)) & 1 == 0 { 1 } else { -1 };
            level += 1;
        }
        i += 1;
    }
    signs
};

pub const OUTCOME_LABELS: [&str; 8] = ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"];

/// Product `o₁o₂o₃` of a detector's outcome triple.
pub fn outcome_parity(index: usize) -> f64 {
    f64::from(OUTCOME_SIGNS[index].iter().product::<i8>())
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseModel {
    pub vis_phase_sensitive: f64,
    pub vis_phase_insensitive: f64,
    pub detection_efficiency: f64,
}

impl NoiseModel {
    pub fn new(vis_phase_sensitive: f64, vis_phase_insensitive: f64, detection_efficiency: f64) -> Result<Self> {
        let model = Self { vis_phase_sensitive, vis_phase_insensitive, detection_efficiency };
        model.validate()?;
        Ok(model)
    }

    pub const fn ideal() -> Self {
        Self { vis_phase_sensitive: 1.0, vis_phase_insensitive: 1.0, detection_efficiency: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.vis_phase_sensitive) {
            return Err(Error::InvalidNoise("phase-sensitive visibility outside [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.vis_phase_insensitive) {
            return Err(Error::InvalidNoise("phase-insensitive visibility outside [0, 1]"));
        }
        if !(self.detection_efficiency > 0.0 && self.detection_efficiency <= 1.0) {
            return Err(Error::InvalidNoise("detection efficiency outside (0, 1]"));
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::ideal()
    }

    pub fn visibility(&self, phase_sensitive: bool) -> f64 {
        if phase_sensitive {
            self.vis_phase_sensitive
        } else {
            self.vis_phase_insensitive
        }
    }

    /// Probability that a device reports the wrong outcome.
    pub fn flip_probability(&self, phase_sensitive: bool) -> f64 {
        0.5 * (1.0 - self.visibility(phase_sensitive))
    }
}

impl Default for NoiseModel {
    /// Interferometer visibilities and detection efficiency typical of the
    /// laboratory setup.
    fn default() -> Self {
        Self { vis_phase_sensitive: 0.95, vis_phase_insensitive: 0.995, detection_efficiency: 0.5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunConfig {
    pub shots_per_context: u64,
    pub seed: u64,
    pub noise: NoiseModel,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots_per_context == 0 {
            return Err(Error::ZeroShots);
        }
        self.noise.validate()
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { shots_per_context: DEFAULT_SHOTS, seed: 0, noise: NoiseModel::default() }
    }
}

/// Detection probabilities of the eight detectors of a context.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OutcomeDistribution {
    pub probabilities: [f64; 8],
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self.probabilities.iter().zip(&other.probabilities).map(|(p, q)| (p - q).abs()).sum::<f64>()
    }
}

/// Photon counts of the eight detectors of a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OutcomeCounts {
    pub counts: [u64; 8],
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Relative frequencies; `None` for an empty record.
    pub fn frequencies(&self) -> Option<OutcomeDistribution> {
        let total = self.total();
        (total > 0).then(|| OutcomeDistribution { probabilities: self.counts.map(|n| n as f64 / total as f64) })
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationResult {
    pub context: Context,
    pub expectation: f64,
    pub sd: f64,
    /// Model detection probabilities (after noise, before sampling).
    pub probabilities: OutcomeDistribution,
    /// Detected photons; absent for exact runs.
    pub counts: Option<OutcomeCounts>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChiResult {
    pub per_context: Vec<CorrelationResult>,
    pub chi: f64,
    pub chi_sd: f64,
    /// `(χ − 4)/σ_χ`; absent when the result carries no statistical error.
    pub sds_of_violation: Option<f64>,
    pub config: RunConfig,
}

impl ChiResult {
    pub fn from_correlations(per_context: Vec<CorrelationResult>, config: RunConfig) -> Self {
        let chi = per_context.iter().map(|c| f64::from(c.context.sign) * c.expectation).sum::<f64>();
        let chi_sd = per_context.iter().map(|c| c.sd * c.sd).sum::<f64>().sqrt();
        let sds_of_violation = (chi_sd > 0.0).then(|| (chi - NCHV_BOUND) / chi_sd);
        Self { per_context, chi, chi_sd, sds_of_violation, config }
    }
}

/// `p(o₁,o₂,o₃) = Tr(P₃P₂P₁ ρ P₁P₂P₃)` for the context's projector chains.
pub fn luders_distribution(rho: &DensityMatrix, ctx: &Context) -> OutcomeDistribution {
    let projectors = ctx.ordered_labels.map(|l| {
        let (plus, minus) = pm_projectors(&l.operator()).expect("observables are involutions");
        [plus, minus]
    });
    let probabilities = core::array::from_fn(|leaf| {
        let chain = (0..3).fold(ComplexMatrix::identity(rho.matrix().dim()), |acc, level| {
            let bit = (leaf >> (2 - level)) & 1;
            &projectors[level][bit] * &acc
        });
        chain.conjugate(rho.matrix()).trace().re.max(0.0)
    });
    OutcomeDistribution { probabilities }
}

/// `Σ p(o₁,o₂,o₃)·o₁o₂o₃`.
pub fn correlation(d: &OutcomeDistribution) -> f64 {
    d.probabilities.iter().enumerate().map(|(i, p)| p * outcome_parity(i)).sum()
}

/// χ of a state under ideal sequential measurements.
pub fn chi_ideal(rho: &DensityMatrix) -> f64 {
    CONTEXTS.iter().map(|ctx| f64::from(ctx.sign) * correlation(&luders_distribution(rho, ctx))).sum()
}

/// Readout confusion: with probability `(1 − V)/2` the device reports the
/// other outcome, so each output carries a share of the opposite branch.
/// `V` is the visibility of the device's interferometer class.
pub fn apply_device_noise(
    branches: [ComplexMatrix; 2],
    device: &MeasurementDevice,
    noise: &NoiseModel,
) -> [ComplexMatrix; 2] {
    let f = noise.flip_probability(device.phase_sensitive);
    if f == 0.0 {
        return branches;
    }
    let [plus, minus] = branches;
    [&plus.scale_real(1.0 - f) + &minus.scale_real(f), &minus.scale_real(1.0 - f) + &plus.scale_real(f)]
}

/// Independent generator for one (seed, state, context) triple, so results do
/// not depend on the order runs are scheduled in.
pub fn context_rng(seed: u64, state_id: &str, context_index: usize) -> ChaCha8Rng {
    let mut hasher = FnvHasher::default();
    hasher.write(state_id.as_bytes());
    hasher.write_u64(context_index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(hasher.finish());
    rng
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("p in (0, 1)").sample(rng)
    }
}

/// Poisson-distributed photon number with mean `n`, split multinomially over
/// the detectors according to `d`.
pub fn sample_counts<R: Rng + ?Sized>(d: &OutcomeDistribution, n: u64, rng: &mut R) -> Result<OutcomeCounts> {
    if n == 0 {
        return Err(Error::ZeroShots);
    }
    let total = Poisson::new(n as f64).expect("positive mean").sample(rng) as u64;
    let mut counts = [0u64; 8];
    let mut remaining = total;
    let mut mass = d.total();
    for (bin, &p) in d.probabilities.iter().enumerate() {
        if bin == 7 {
            counts[bin] = if p > 0.0 { remaining } else { 0 };
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        counts[bin] = binomial(remaining, q, rng);
        remaining -= counts[bin];
        mass -= p;
    }
    Ok(OutcomeCounts { counts })
}

/// Keeps each photon with probability `efficiency`, bin by bin.
pub fn thin<R: Rng + ?Sized>(counts: &OutcomeCounts, efficiency: f64, rng: &mut R) -> OutcomeCounts {
    OutcomeCounts { counts: counts.counts.map(|n| binomial(n, efficiency, rng)) }
}

/// Emitted photons sampled from `d`, then thinned by the detection efficiency.
pub fn detect<R: Rng + ?Sized>(
    d: &OutcomeDistribution,
    shots: u64,
    efficiency: f64,
    rng: &mut R,
) -> Result<OutcomeCounts> {
    let emitted = sample_counts(d, shots, rng)?;
    Ok(thin(&emitted, efficiency, rng))
}

/// Correlation estimate `E = Σ s·n / T` and its propagated Poisson error
/// `√(Σ n (s − E)²) / T`.
pub fn estimate(counts: &OutcomeCounts) -> Result<(f64, f64)> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let t = total as f64;
    let e = counts.counts.iter().enumerate().map(|(i, &n)| outcome_parity(i) * n as f64).sum::<f64>() / t;
    let var = counts.counts.iter().enumerate().map(|(i, &n)| n as f64 * (outcome_parity(i) - e).powi(2)).sum::<f64>();
    Ok((e, var.sqrt() / t))
}

/// Simulated photon-counting run of one state over all six contexts.
/// Generator streams are keyed by `state_id`.
pub fn run_state(bank: &DeviceBank, state_id: &str, rho: &DensityMatrix, cfg: &RunConfig) -> Result<ChiResult> {
    cfg.validate()?;
    let per_context = CONTEXTS
        .iter()
        .enumerate()
        .map(|(k, ctx)| {
            let probabilities = run_cascade(rho, &build_cascade(bank, *ctx), &cfg.noise);
            let mut rng = context_rng(cfg.seed, state_id, k);
            let detected = detect(&probabilities, cfg.shots_per_context, cfg.noise.detection_efficiency, &mut rng)?;
            let (expectation, sd) = estimate(&detected)?;
            Ok(CorrelationResult { context: *ctx, expectation, sd, probabilities, counts: Some(detected) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChiResult::from_correlations(per_context, *cfg))
}

pub fn run_experiment(bank: &DeviceBank, spec: &StateSpec, cfg: &RunConfig) -> Result<ChiResult> {
    run_state(bank, spec.id, &density(spec)?, cfg)
}

/// Infinite-statistics result: expectations straight from the cascade
/// probabilities, zero error, no counts.
pub fn exact_result(bank: &DeviceBank, rho: &DensityMatrix, cfg: &RunConfig) -> Result<ChiResult> {
    cfg.validate()?;
    let per_context = CONTEXTS
        .iter()
        .map(|ctx| {
            let probabilities = run_cascade(rho, &build_cascade(bank, *ctx), &cfg.noise);
            CorrelationResult {
                context: *ctx,
                expectation: correlation(&probabilities),
                sd: 0.0,
                probabilities,
                counts: None,
            }
        })
        .collect();
    Ok(ChiResult::from_correlations(per_context, *cfg))
}

/// `Σ w·n` rounded half up, computed exactly over the common denominator.
fn weighted_count(weights: &[Weight], counts: &[u64]) -> u64 {
    let lcm = weights.iter().fold(1u128, |l, w| l.lcm(&u128::from(*w.denom())));
    let numerator: u128 = weights
        .iter()
        .zip(counts)
        .map(|(w, &n)| u128::from(*w.numer()) * (lcm / u128::from(*w.denom())) * u128::from(n))
        .sum();
    ((2 * numerator + lcm) / (2 * lcm)) as u64
}

/// Combines pure-state runs into a mixed-state result: per-context counts are
/// added with the mixing weights and re-estimated.
pub fn mix_results(results: &[ChiResult], weights: &[Weight]) -> Result<ChiResult> {
    let first = results.first().ok_or(Error::InvalidWeights)?;
    if results.len() != weights.len() {
        return Err(Error::InvalidWeights);
    }
    if weights.iter().copied().sum::<Weight>() != Weight::from_integer(1) {
        return Err(Error::InvalidWeights);
    }
    if results.iter().any(|r| r.config != first.config || r.per_context.len() != first.per_context.len()) {
        return Err(Error::MismatchedConfigs);
    }
    let wf: Vec<f64> = weights.iter().map(|w| crate::state_catalog::ratio_to_f64(*w)).collect();
    let per_context = (0..first.per_context.len())
        .map(|k| {
            let parts: Vec<&CorrelationResult> = results.iter().map(|r| &r.per_context[k]).collect();
            let context = parts[0].context;
            if parts.iter().any(|p| p.context != context) {
                return Err(Error::MismatchedConfigs);
            }
            let probabilities = OutcomeDistribution {
                probabilities: core::array::from_fn(|bin| {
                    parts.iter().zip(&wf).map(|(p, w)| w * p.probabilities.probabilities[bin]).sum()
                }),
            };
            let all_counts: Option<Vec<OutcomeCounts>> = parts.iter().map(|p| p.counts).collect();
            match all_counts {
                Some(all) => {
                    let counts = OutcomeCounts {
                        counts: core::array::from_fn(|bin| {
                            let column: Vec<u64> = all.iter().map(|c| c.counts[bin]).collect();
                            weighted_count(weights, &column)
                        }),
                    };
                    let (expectation, sd) = estimate(&counts)?;
                    Ok(CorrelationResult { context, expectation, sd, probabilities, counts: Some(counts) })
                }
                None if parts.iter().all(|p| p.counts.is_none()) => Ok(CorrelationResult {
                    context,
                    expectation: correlation(&probabilities),
                    sd: 0.0,
                    probabilities,
                    counts: None,
                }),
                None => Err(Error::MismatchedConfigs),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChiResult::from_correlations(per_context, first.config))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Mode {
    /// Poisson photon counting.
    #[default]
    Sampled,
    /// Infinite statistics.
    Exact,
}

/// Result for a catalog state. Mixed states are assembled from the runs of
/// their pure components unless `direct` is set, in which case the density
/// matrix itself is sent through the optics.
pub fn simulate(bank: &DeviceBank, spec: &StateSpec, cfg: &RunConfig, mode: Mode, direct: bool) -> Result<ChiResult> {
    let single = |id: &str, rho: &DensityMatrix| match mode {
        Mode::Sampled => run_state(bank, id, rho, cfg),
        Mode::Exact => exact_result(bank, rho, cfg),
    };
    match (&spec.kind, &spec.mixture) {
        (StateKind::Mixed, Some(components)) if !direct => {
            let runs = components
                .iter()
                .map(|(id, _)| {
                    let component = find(id)?;
                    single(component.id, &density(&component)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let weights: Vec<Weight> = components.iter().map(|(_, w)| *w).collect();
            mix_results(&runs, &weights)
        }
        _ => single(spec.id, &density(spec)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pm_square::Label;
    use crate::state_catalog::catalog;
    use num_complex::Complex64;

    fn rho_of(id: &str) -> DensityMatrix {
        density(&find(id).unwrap()).unwrap()
    }

    #[test]
    fn outcome_tables_agree() {
        for (signs, label) in OUTCOME_SIGNS.iter().zip(OUTCOME_LABELS) {
            let rendered: alloc::string::String = signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
            assert_eq!(rendered, label);
        }
    }

    #[test]
    fn luders_maximally_mixed_cab() {
        let d = luders_distribution(&DensityMatrix::maximally_mixed(), &CONTEXTS[0]);
        for (i, p) in d.probabilities.iter().enumerate() {
            let want = if outcome_parity(i) > 0.0 { 0.25 } else { 0.0 };
            assert!((p - want).abs() < 1e-12);
        }
    }

    #[test]
    fn luders_psi8_is_deterministic() {
        let d = luders_distribution(&rho_of("psi8"), &CONTEXTS[0]);
        assert!((d.probabilities[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn luders_oracle_by_state_vectors() {
        // Projector-chain oracle on kets: apply P₁, P₂, P₃ to |ψ⟩ and take the norm.
        let ket = find("psi17").unwrap().pure_ket.unwrap();
        for ctx in CONTEXTS {
            let d = luders_distribution(&rho_of("psi17"), &ctx);
            for leaf in 0..8 {
                let mut v: Vec<Complex64> = ket.amplitudes().to_vec();
                for level in 0..3 {
                    let (plus, minus) = pm_projectors(&ctx.ordered_labels[level].operator()).unwrap();
                    let p = if (leaf >> (2 - level)) & 1 == 0 { plus } else { minus };
                    v = p.apply(&v);
                }
                let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                assert!((norm - d.probabilities[leaf]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn correlation_signs() {
        let uniform = OutcomeDistribution { probabilities: [0.125; 8] };
        assert!(correlation(&uniform).abs() < 1e-15);
        let rho = rho_of("psi13");
        assert!((correlation(&luders_distribution(&rho, &CONTEXTS[0])) - 1.0).abs() < 1e-12);
        assert!((correlation(&luders_distribution(&rho, &CONTEXTS[5])) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_is_six_for_catalog() {
        for spec in catalog() {
            assert!((chi_ideal(&density(&spec).unwrap()) - 6.0).abs() < 1e-10, "{}", spec.id);
        }
    }

    #[test]
    fn estimate_closed_forms() {
        let mut c = OutcomeCounts::default();
        c.counts[0] = 100;
        assert_eq!(estimate(&c).unwrap(), (1.0, 0.0));
        let uniform = OutcomeCounts { counts: [1000; 8] };
        let (e, sd) = estimate(&uniform).unwrap();
        assert!(e.abs() < 1e-15);
        assert!((sd - 1.0 / 8000f64.sqrt()).abs() < 1e-15);
        assert!(matches!(estimate(&OutcomeCounts::default()), Err(Error::EmptyCounts)));
    }

    #[test]
    fn sampling_respects_support_and_seed() {
        let mut d = OutcomeDistribution { probabilities: [0.0; 8] };
        d.probabilities[3] = 1.0;
        let c = sample_counts(&d, 5000, &mut context_rng(1, "x", 0)).unwrap();
        assert_eq!(c.counts[3], c.total());
        assert!(matches!(sample_counts(&d, 0, &mut context_rng(1, "x", 0)), Err(Error::ZeroShots)));

        let ideal = luders_distribution(&rho_of("psi1"), &CONTEXTS[0]);
        let a = sample_counts(&ideal, DEFAULT_SHOTS, &mut context_rng(7, "psi1", 0)).unwrap();
        let b = sample_counts(&ideal, DEFAULT_SHOTS, &mut context_rng(7, "psi1", 0)).unwrap();
        assert_eq!(a, b);
        for i in 0..8 {
            if outcome_parity(i) < 0.0 {
                assert_eq!(a.counts[i], 0);
            }
        }
        let n = a.total() as f64;
        assert!((n - DEFAULT_SHOTS as f64).abs() < 6.0 * (DEFAULT_SHOTS as f64).sqrt());
    }

    #[test]
    fn streams_differ_by_state_and_context() {
        let x: u64 = context_rng(3, "psi1", 0).random();
        let y: u64 = context_rng(3, "psi1", 1).random();
        let z: u64 = context_rng(3, "psi2", 0).random();
        assert!(x != y && x != z && y != z);
    }

    #[test]
    fn device_noise_on_b_fringe() {
        // ⟨b⟩ on ψ₁₄ is the visibility itself: zero at V = 0, linear up to 1.
        let bank = DeviceBank::compile().unwrap();
        let device = bank.get(Label::SmallB);
        let rho = rho_of("psi14");
        for v in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let noise = NoiseModel::new(v, 1.0, 1.0).unwrap();
            let [plus, minus] = apply_device_noise(device.branches(rho.matrix()), device, &noise);
            let mean = plus.trace().re - minus.trace().re;
            assert!((mean - v).abs() < 1e-12, "V = {v}");
        }
    }

    #[test]
    fn noisy_chi_closed_form() {
        // Independent confusion per device scales every context by ΠV.
        let bank = DeviceBank::compile().unwrap();
        let noise = NoiseModel::new(0.92, 0.995, 0.5).unwrap();
        let cfg = RunConfig { noise, ..Default::default() };
        let (s, i) = (noise.vis_phase_sensitive, noise.vis_phase_insensitive);
        let want = 2.0 * s * i * i + 2.0 * s * s * i + 2.0 * s * s * s;
        for id in ["psi1", "psi9", "psi19", "rho6"] {
            let r = exact_result(&bank, &rho_of(id), &cfg).unwrap();
            assert!((r.chi - want).abs() < 1e-10, "{id}");
        }
    }

    #[test]
    fn exact_mode_without_noise_gives_six() {
        let bank = DeviceBank::compile().unwrap();
        let cfg = RunConfig { noise: NoiseModel::ideal(), ..Default::default() };
        let r = exact_result(&bank, &rho_of("rho20"), &cfg).unwrap();
        assert!((r.chi - 6.0).abs() < 1e-10);
        assert_eq!(r.sds_of_violation, None);
    }

    #[test]
    fn default_noise_run_statistics() {
        let bank = DeviceBank::compile().unwrap();
        let r = run_experiment(&bank, &find("psi1").unwrap(), &RunConfig::default()).unwrap();
        assert!((1e-4..=1e-3).contains(&r.chi_sd), "{}", r.chi_sd);
        assert!(r.sds_of_violation.unwrap() > 400.0);
        let direct: f64 = r.per_context.iter().map(|c| f64::from(c.context.sign) * c.expectation).sum();
        assert!((r.chi - direct).abs() < 1e-12);
    }

    #[test]
    fn ideal_sampling_converges_to_six() {
        let bank = DeviceBank::compile().unwrap();
        let cfg = RunConfig { noise: NoiseModel::ideal(), shots_per_context: 100_000, seed: 11 };
        let r = run_experiment(&bank, &find("psi16").unwrap(), &cfg).unwrap();
        // every ideal correlation is ±1 exactly, so sampling cannot move χ
        assert_eq!(r.chi, 6.0);
        assert_eq!(r.chi_sd, 0.0);
    }

    #[test]
    fn mixing_weights() {
        let bank = DeviceBank::compile().unwrap();
        let cfg = RunConfig { shots_per_context: 200_000, ..Default::default() };
        let runs: Vec<ChiResult> = ["psi1", "psi2", "psi3", "psi4"]
            .iter()
            .map(|id| run_experiment(&bank, &find(id).unwrap(), &cfg).unwrap())
            .collect();
        let one = Weight::from_integer(1);
        let zero = Weight::from_integer(0);
        let first = mix_results(&runs, &[one, zero, zero, zero]).unwrap();
        assert_eq!(first.per_context, runs[0].per_context);

        let bad = [Weight::new(1, 2), zero, zero, zero];
        assert!(matches!(mix_results(&runs, &bad), Err(Error::InvalidWeights)));

        let mut other = runs.clone();
        other[1].config.shots_per_context += 1;
        assert!(matches!(mix_results(&other, &[one, zero, zero, zero]), Err(Error::MismatchedConfigs)));
    }

    #[test]
    fn weighted_count_rounds_exactly() {
        let w = [Weight::new(13, 16), Weight::new(1, 16), Weight::new(1, 16), Weight::new(1, 16)];
        assert_eq!(weighted_count(&w, &[16, 0, 0, 0]), 13);
        assert_eq!(weighted_count(&w, &[1, 1, 1, 1]), 1);
        assert_eq!(weighted_count(&w, &[0, 8, 0, 0]), 1); // 0.5 rounds up
    }
}
