mod common;

use ehybrid_core::constants::two_pi;
use ehybrid_core::coupling::{
    build_er_hamiltonian, simulate_chain, ChainKind, ChainSpec, ErFrequencies, ErMode, RateCard,
};
use ehybrid_core::dynamics::{evolve_lindblad, EvolutionConfig, LindbladModel};
use ehybrid_core::quantum::{embed, mode_operators, HilbertSpace, QuantumState};

fn card(g_p: f64) -> RateCard {
    RateCard {
        y0: 0.0,
        q0: 0.0,
        g: 2.0 * g_p,
        g_p,
    }
}

#[test]
fn squeezer_creates_pairs_from_vacuum() {
    let g = two_pi(1.1e6);
    let dim = 10;
    let space = HilbertSpace::new(vec![dim, dim], vec!["electron", "bus"]).unwrap();
    let freqs = ErFrequencies::squeezer(two_pi(7e9), two_pi(500e6));
    let terms = build_er_hamiltonian(&card(g), &freqs, ErMode::RwaSqueezer, &space).unwrap();
    let model = LindbladModel::new(space.clone()).with_terms(terms);
    let n = mode_operators(dim).unwrap().n;
    let obs = vec![embed(&n, &space, 0).unwrap(), embed(&n, &space, 1).unwrap()];
    let t = 0.5 / g;
    let cfg = EvolutionConfig::rk4(t, t / 2000.0).with_observables(obs);
    let rho0 = QuantumState::basis(space, &[0, 0]).unwrap();
    let tr = evolve_lindblad(&model, &rho0, &cfg).unwrap();
    let (ny, nphi) = (*tr.observable_real(0).last().unwrap(), *tr.observable_real(1).last().unwrap());
    let oracle = (g * t).sinh().powi(2);
    assert!((ny - oracle).abs() < 1e-4, "{ny} vs {oracle}");
    assert!((ny - nphi).abs() < 1e-10);
}

#[test]
fn lossless_chain_follows_single_excitation_oracle() {
    let g = two_pi(1.1e6);
    for delta in [0.0, 0.7 * g, two_pi(1.8e6), 3.1 * g] {
        let mut spec = ChainSpec::magic(ChainKind::ElectronElectron, 1, g).unwrap().lossless();
        spec.delta = delta;
        spec.step = spec.step.min(ehybrid_core::dynamics::recommended_step(delta.max(g), spec.tau_swap));
        let out = simulate_chain(&spec).unwrap();
        let (end, bus) = common::chain_single_excitation(g, delta, spec.tau_swap);
        assert!((out.swap_fidelity - end).abs() < 1e-6, "delta {delta}: {} vs {end}", out.swap_fidelity);
        assert!((out.bus_population - bus).abs() < 1e-6, "delta {delta}: {} vs {bus}", out.bus_population);
    }
}

#[test]
fn heating_loss_is_linear_at_small_rates() {
    let g = two_pi(1.1e6);
    let loss = |heating: f64| {
        let mut spec = ChainSpec::magic(ChainKind::ElectronTransmon, 0, g).unwrap().lossless();
        spec.heating = heating;
        1.0 - simulate_chain(&spec).unwrap().swap_fidelity
    };
    let (l1, l2) = (loss(4000.0), loss(8000.0));
    assert!(loss(0.0) < 1e-9);
    assert!(l1 > 0.0 && (l2 / l1 - 2.0).abs() < 0.05, "{l1} {l2}");
}
