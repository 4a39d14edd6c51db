use contextuality_core::experiment::{
    exact_result, mix_results, run_experiment, simulate, Mode, NoiseModel, RunConfig,
};
use contextuality_core::optics::DeviceBank;
use contextuality_core::state_catalog::{catalog, density, find, StateKind};

#[test]
fn maximally_mixed_from_bell_runs_is_ideal() {
    let bank = DeviceBank::compile().unwrap();
    let cfg = RunConfig { noise: NoiseModel::ideal(), seed: 5, ..Default::default() };
    let r = simulate(&bank, &find("rho20").unwrap(), &cfg, Mode::Sampled, false).unwrap();
    assert!((r.chi - 6.0).abs() <= 3.0 * r.chi_sd + 1e-12);
}

#[test]
fn combined_and_direct_mixtures_agree() {
    let bank = DeviceBank::compile().unwrap();
    let cfg = RunConfig { seed: 2024, ..Default::default() };
    for id in ["rho5", "rho6", "rho7", "rho20"] {
        let spec = find(id).unwrap();
        let mixed = simulate(&bank, &spec, &cfg, Mode::Sampled, false).unwrap();
        let direct = run_experiment(&bank, &spec, &cfg).unwrap();
        assert!((mixed.chi - direct.chi).abs() < 3.0 * mixed.chi_sd, "{id}: {} vs {}", mixed.chi, direct.chi);
    }
}

#[test]
fn exact_mixing_is_linear() {
    let bank = DeviceBank::compile().unwrap();
    let cfg = RunConfig { noise: NoiseModel::new(0.7, 0.9, 1.0).unwrap(), ..Default::default() };
    for spec in catalog().into_iter().filter(|s| s.kind == StateKind::Mixed) {
        let combined = simulate(&bank, &spec, &cfg, Mode::Exact, false).unwrap();
        let direct = exact_result(&bank, &density(&spec).unwrap(), &cfg).unwrap();
        for (a, b) in combined.per_context.iter().zip(&direct.per_context) {
            assert!(a.probabilities.total_variation(&b.probabilities) < 1e-12, "{}", spec.id);
        }
    }
}

#[test]
fn mixing_sampled_with_exact_is_rejected() {
    let bank = DeviceBank::compile().unwrap();
    let cfg = RunConfig { shots_per_context: 1000, ..Default::default() };
    let psi1 = find("psi1").unwrap();
    let sampled = run_experiment(&bank, &psi1, &cfg).unwrap();
    let exact = exact_result(&bank, &density(&psi1).unwrap(), &cfg).unwrap();
    let half = num_rational::Ratio::new(1, 2);
    assert!(mix_results(&[sampled, exact], &[half, half]).is_err());
}

#[test]
fn runs_are_reproducible() {
    let bank = DeviceBank::compile().unwrap();
    let cfg = RunConfig { seed: 99, ..Default::default() };
    let spec = find("psi12").unwrap();
    assert_eq!(run_experiment(&bank, &spec, &cfg).unwrap(), run_experiment(&bank, &spec, &cfg).unwrap());
    let other = RunConfig { seed: 100, ..cfg };
    assert_ne!(run_experiment(&bank, &spec, &cfg).unwrap(), run_experiment(&bank, &spec, &other).unwrap());
}
