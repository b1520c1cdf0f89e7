use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};

use super::output::{Metric, ScenarioOutput, SolverReport, Table};
use super::spec::*;
use crate::circuit::{
    cpw_cavity_coupling, dress_and_reduce, effective_impedance, pickup_excitation, radiative_decay_estimate,
    required_cpw_impedance, adiabatic_coupling, CavityMode, CouplingMatrix4, CpwLine, PickupNetwork,
};
use crate::constants::{bose_occupation, HBAR};
use crate::coupling::{
    cooling_cross_check, magic_detuning, parametric_rate, rwa_validation, simulate_chain, simulate_cooling,
    spin_coherence, spin_motion_map_sim, spin_motion_rate, zeeman_splitting, ChainKind, ChainSpec, CoolingSpec,
    CouplingGeometry, DriveParams, ElectronParams, ResonatorParams,
};
use crate::error::{Error, Result};
use crate::noise::{
    cone_noise_factor_numeric, dipole_field_noise, electron_heating, ring_noise_factor, ring_noise_factor_numeric,
    tip_noise_factor, DipoleNoiseModel, IntegrationOptions, SurfaceGeometry,
};
use crate::par::Exec;
use crate::trap::{
    check_stability, driven_orbit_start, extract_spectrum, mathieu_edge, secular_frequency, spectral_run, stability_scan,
    StabilityOptions, TrapFieldModel,
};

fn metric(name: &str, value: f64, unit: &str) -> Metric {
    Metric {
        name: name.to_string(),
        value,
        unit: unit.to_string(),
    }
}

fn rk4(step: f64) -> SolverReport {
    SolverReport {
        method: "rk4-fixed".into(),
        step: Some(step),
        tolerance: None,
    }
}

fn closed_form() -> SolverReport {
    SolverReport {
        method: "closed-form".into(),
        ..Default::default()
    }
}

/// Run a scenario. The spec is resolved first, so the run never depends on
/// a default that is not recorded.
pub fn run_scenario(spec: &ScenarioSpec, exec: Exec) -> Result<ScenarioOutput> {
    let spec = spec.resolve()?;
    match &spec.experiment {
        Experiment::Chain(p) => run_chain(p),
        Experiment::Cooling(p) => run_cooling(p),
        Experiment::SpinMotion(p) => run_spin(p),
        Experiment::Rwa(p) => run_rwa(p),
        Experiment::TrapStability(p) => run_trap(p, exec),
        Experiment::Sidebands(p) => run_sidebands(p),
        Experiment::NoiseTip(p) => run_noise_tip(p, exec),
        Experiment::NoiseRing(p) => run_noise_ring(p, exec),
        Experiment::Heating(p) => run_heating(p),
        Experiment::Reduction(p) => run_reduction(p),
        Experiment::Pickup(p) => run_pickup(p),
        Experiment::CavityCoupling(p) => run_cavity(p),
        Experiment::Impedance(p) => run_impedance(p),
        Experiment::Rates(p) => run_rates(p),
    }
}

fn unresolved(name: &str) -> Error {
    Error::param(name, "was not resolved")
}

fn run_chain(p: &ChainParams) -> Result<ScenarioOutput> {
    let (_, tau_swap) = magic_detuning(p.n, p.g_p)?;
    let transmon = match (p.kind, p.transmon_tau1, p.transmon_tau2) {
        (ChainKind::ElectronTransmon, Some(t1), Some(t2)) => Some((t1, t2)),
        (ChainKind::ElectronTransmon, _, _) => {
            return Err(Error::param("transmon_tau1, transmon_tau2", "required for an electron-transmon chain"))
        }
        (ChainKind::ElectronElectron, _, _) => None,
    };
    let spec = ChainSpec {
        kind: p.kind,
        g_p: p.g_p,
        g_end: p.g_end,
        delta: p.delta.ok_or_else(|| unresolved("delta"))?,
        tau_swap,
        heating: p.heating,
        bus_tau1: p.bus_tau1,
        transmon,
        electron_dim: p.electron_dim,
        bus_dim: p.bus_dim,
        step: p.step.ok_or_else(|| unresolved("step"))?,
        record_every: p.record_every,
    };
    let out = simulate_chain(&spec)?;
    let tr = &out.trajectory;
    let mut table = Table::new("populations", &[("time", "s"), ("electron", "quanta"), ("bus", "quanta"), ("end", "quanta")]);
    let series: Vec<Vec<f64>> = (0..3).map(|k| tr.observable_real(k)).collect();
    for (i, &t) in tr.times.iter().enumerate() {
        table.push(vec![t.into(), series[0][i].into(), series[1][i].into(), series[2][i].into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![table],
        summary: vec![
            metric("n", p.n as f64, "1"),
            metric("delta", spec.delta, "rad/s"),
            metric("tau_swap", tau_swap, "s"),
            metric("swap_fidelity", out.swap_fidelity, "1"),
            metric("bell_time", tau_swap / 2.0, "s"),
            metric("bell_fidelity", out.bell_fidelity, "1"),
            metric("bus_population", out.bus_population, "quanta"),
            metric("max_trace_drift", tr.max_trace_drift, "1"),
        ],
        solver: rk4(spec.step),
    })
}

fn run_cooling(p: &CoolingParams) -> Result<ScenarioOutput> {
    let spec = CoolingSpec {
        g_p: p.g_p,
        nbar: bose_occupation(p.omega_y, p.temperature),
        heating: p.heating,
        resonator_tau1: p.resonator_tau1,
        duration: p.duration.ok_or_else(|| unresolved("duration"))?,
    };
    let out = simulate_cooling(&spec, p.samples.max(1))?;
    let mut table = Table::new("occupations", &[("time", "s"), ("electron", "quanta"), ("resonator", "quanta")]);
    for i in 0..out.times.len() {
        table.push(vec![out.times[i].into(), out.electron[i].into(), out.resonator[i].into()]);
    }
    let mut summary = vec![
        metric("initial_occupation", spec.nbar, "quanta"),
        metric("duration", spec.duration, "s"),
        metric("final_occupation", out.final_occupation, "quanta"),
        metric("ground_fidelity", out.ground_fidelity, "1"),
    ];
    if p.cross_check_dim > 0 {
        let diff = cooling_cross_check(&spec, p.cross_check_nbar, p.cross_check_dim)?;
        summary.push(metric("cross_check_difference", diff, "quanta"));
    }
    Ok(ScenarioOutput {
        tables: vec![table],
        summary,
        solver: SolverReport {
            method: "gaussian-moments".into(),
            ..Default::default()
        },
    })
}

fn run_spin(p: &SpinParams) -> Result<ScenarioOutput> {
    let electron = ElectronParams::electron([p.omega_x, p.omega_y, p.omega_z], p.b0);
    electron.validate()?;
    let coil = spin_motion_rate(p.coil_radius, p.coil_current, &electron)?;
    let omega_r = p.omega_r.ok_or_else(|| unresolved("omega_r"))?;
    let duration = p.duration.ok_or_else(|| unresolved("duration"))?;
    let map = spin_motion_map_sim(omega_r, p.heating, Some(duration), p.motion_dim)?;
    let t2 = spin_coherence(p.field_noise * p.field_noise)?;
    let mut table = Table::new("fidelities", &[("input", ""), ("fidelity", "1")]);
    table.push(vec!["|0>".into(), map.ground_fidelity.into()]);
    table.push(vec!["|1>".into(), map.excited_fidelity.into()]);
    table.push(vec!["average".into(), map.fidelity.into()]);
    Ok(ScenarioOutput {
        tables: vec![table],
        summary: vec![
            metric("gradient", coil.gradient, "T/m"),
            metric("coil_rabi_rate", coil.omega_r, "rad/s"),
            metric("drive_frequency", coil.drive_frequency, "rad/s"),
            metric("rabi_rate", omega_r, "rad/s"),
            metric("map_time", map.map_time, "s"),
            metric("map_fidelity", map.fidelity, "1"),
            metric("spin_t2", t2, "s"),
        ],
        solver: rk4(crate::dynamics::recommended_step(0.0, duration)),
    })
}

fn run_rwa(p: &RwaParams) -> Result<ScenarioOutput> {
    let out = rwa_validation(&p.spec())?;
    let mut table = Table::new("exchange", &[("time", "s"), ("bus", "quanta")]);
    for (t, n) in out.times.iter().zip(&out.full_series) {
        table.push(vec![(*t).into(), (*n).into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![table],
        summary: vec![
            metric("t_max", out.t_max, "s"),
            metric("rwa_population", out.rwa_population, "quanta"),
            metric("full_population", out.full_population, "quanta"),
            metric("relative_difference", out.relative_difference, "1"),
        ],
        solver: rk4(out.step),
    })
}

fn reference_trap(omega_tr: f64, omega_y: f64, omega_xz: f64, omega_d: f64, a_d: f64, phase: f64) -> Result<TrapFieldModel> {
    let mut m = TrapFieldModel::electron_trap(omega_tr, omega_y, omega_xz)?;
    m.drive_phase = phase;
    m.set_drive_amplitude(omega_d, a_d, omega_y);
    Ok(m)
}

/// `n_d Omega_d + n_t Omega_tr + s omega` with the lowest total order
/// within `tol` of `f`.
fn label_peak(f: f64, omega_d: f64, omega_tr: f64, omega: f64, max_order: i32, tol: f64) -> Option<String> {
    // ties go to the term with more drive quanta
    let mut best: Option<(i32, i32, String)> = None;
    for nd in -max_order..=max_order {
        for nt in -max_order..=max_order {
            for s in -1i32..=1 {
                let g = nd as f64 * omega_d + nt as f64 * omega_tr + s as f64 * omega;
                if (g - f).abs() > tol {
                    continue;
                }
                let order = nd.abs() + nt.abs() + s.abs();
                if best.as_ref().is_some_and(|(o, d, _)| *o < order || (*o == order && *d >= nd.abs())) {
                    continue;
                }
                let mut parts = String::new();
                for (n, sym) in [(nd, "Wd"), (nt, "Wtr"), (s, "w")] {
                    if n == 0 {
                        continue;
                    }
                    let sign = if n < 0 { "-" } else if parts.is_empty() { "" } else { "+" };
                    let k = if n.abs() == 1 { String::new() } else { n.abs().to_string() };
                    parts.push_str(&format!("{sign}{k}{sym}"));
                }
                best = Some((order, nd.abs(), parts));
            }
        }
    }
    best.map(|(_, _, s)| s)
}

/// Spectrum of the y motion started on the driven orbit, with labelled peaks.
fn driven_spectrum(model: &TrapFieldModel, omega_y: f64, periods: f64, threshold: f64, max_order: u32, table: &str) -> Result<(Table, Vec<Metric>)> {
    let (r0, v0) = driven_orbit_start(model, omega_y);
    let tr = spectral_run(model, r0, v0, periods)?;
    let spec = extract_spectrum(&tr, 1, threshold)?;
    let limit = 0.5 * model.omega_tr.min(model.omega_d);
    let secular = spec
        .peaks
        .iter()
        .filter(|p| p.frequency < limit)
        .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
        .map_or(f64::NAN, |p| p.frequency);
    let tol = 3.0 * spec.resolution;
    let mut t = Table::new(table, &[("frequency", "rad/s"), ("amplitude", "m"), ("label", "")]);
    let mut unlabelled = 0usize;
    for p in &spec.peaks {
        let label = label_peak(p.frequency, model.omega_d, model.omega_tr, secular, max_order as i32, tol);
        if label.is_none() {
            unlabelled += 1;
        }
        t.push(vec![p.frequency.into(), p.amplitude.into(), label.unwrap_or_else(|| "?".into()).into()]);
    }
    let driven = spec.near(model.omega_d, tol).map_or(0.0, |p| p.amplitude);
    let metrics = vec![
        metric("bounded", (!tr.escaped()) as u8 as f64, "1"),
        metric("growth", tr.max_excursion / tr.initial_envelope, "1"),
        metric("secular_frequency", secular, "rad/s"),
        metric("driven_amplitude", driven, "m"),
        metric("peak_count", spec.peaks.len() as f64, "1"),
        metric("unlabelled_peaks", unlabelled as f64, "1"),
        metric("resolution", spec.resolution, "rad/s"),
    ];
    Ok((t, metrics))
}

fn run_trap(p: &TrapParams, exec: Exec) -> Result<ScenarioOutput> {
    let model = reference_trap(p.omega_tr, p.omega_y, p.omega_xz, p.omega_tr, p.drive_amplitude, p.drive_phase)?;
    let (peaks, mut summary) = driven_spectrum(&model, p.omega_y, p.secular_periods, 1e-4, 3, "reference-peaks")?;
    let opts = StabilityOptions {
        secular_periods: p.secular_periods,
        escape_factor: p.escape_factor,
        offset: p.offset,
    };
    let (stable, growth) = check_stability(&model, &opts)?;
    summary.push(metric("reference_stable", stable as u8 as f64, "1"));
    summary.push(metric("reference_stability_growth", growth, "1"));

    let grid: Vec<(f64, f64)> = p.scan_q.iter().map(|&q| (p.scan_a, q)).collect();
    let rf = p.mathieu_rf;
    let points = stability_scan(exec, &grid, |a, q| TrapFieldModel::mathieu(a, q, rf), &opts)?;
    let mut scan = Table::new("scan", &[("a", "1"), ("q", "1"), ("stable", "1"), ("growth", "1")]);
    for pt in &points {
        scan.push(vec![pt.a.into(), pt.q.into(), pt.stable.into(), pt.growth.into()]);
    }
    let edge = mathieu_edge(p.scan_a, p.edge_bracket[0], p.edge_bracket[1], rf, p.edge_tolerance, &opts)?;
    summary.push(metric("stability_edge_q", edge, "1"));

    let betas = crate::par::try_map(exec, &p.secular_q, |&q| {
        let w = secular_frequency(&TrapFieldModel::mathieu(0.0, q, rf), 1)?;
        Ok::<_, Error>(2.0 * w / rf)
    })?;
    let mut secular = Table::new("secular", &[("q", "1"), ("beta", "1"), ("beta_lowest_order", "1")]);
    for (q, b) in p.secular_q.iter().zip(&betas) {
        secular.push(vec![(*q).into(), (*b).into(), (q / 2f64.sqrt()).into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![peaks, scan, secular],
        summary,
        solver: rk4(crate::trap::max_motion_step(&model)),
    })
}

fn run_sidebands(p: &SidebandParams) -> Result<ScenarioOutput> {
    let model = reference_trap(p.omega_tr, p.omega_y, p.omega_xz, p.omega_d, p.drive_amplitude, p.drive_phase)?
        .with_drive_quadrupole(p.drive_quadrupole);
    let (peaks, summary) = driven_spectrum(&model, p.omega_y, p.secular_periods, p.threshold, p.max_order, "peaks")?;
    Ok(ScenarioOutput {
        tables: vec![peaks],
        summary,
        solver: rk4(crate::trap::max_motion_step(&model)),
    })
}

fn integration(tolerance: f64, max_level: u32) -> (IntegrationOptions, SolverReport) {
    (
        IntegrationOptions { tolerance, max_level },
        SolverReport {
            method: "gauss-legendre-adaptive".into(),
            step: None,
            tolerance: Some(tolerance),
        },
    )
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn run_noise_tip(p: &NoiseTipParams, exec: Exec) -> Result<ScenarioOutput> {
    let (opts, solver) = integration(p.tolerance, p.max_level);
    let mut cone = Table::new("cone", &[("alpha", "rad"), ("numeric", "1"), ("closed_form", "1"), ("ratio", "1")]);
    for &alpha in &p.alphas {
        let numeric = cone_noise_factor_numeric(exec, p.r0, alpha, &opts)?;
        let closed = tip_noise_factor(alpha);
        cone.push(vec![alpha.into(), numeric.into(), closed.into(), (numeric / closed).into()]);
    }
    let mut plane = Table::new("plane", &[("distance", "m"), ("noise", "1/m^4"), ("closed_form", "1/m^4")]);
    let mut values = Vec::new();
    for &d in &p.plane_distances {
        let g = SurfaceGeometry::plane(d);
        let s = dipole_field_noise(exec, &g, g.reference_point(), &opts)?;
        plane.push(vec![d.into(), s.into(), (3.0 * PI / (4.0 * d.powi(4))).into()]);
        values.push(s);
    }
    let mut summary = Vec::new();
    if p.plane_distances.len() >= 2 {
        summary.push(metric("plane_exponent", log_slope(&p.plane_distances, &values), "1"));
    }
    Ok(ScenarioOutput {
        tables: vec![cone, plane],
        summary,
        solver,
    })
}

fn run_noise_ring(p: &NoiseRingParams, exec: Exec) -> Result<ScenarioOutput> {
    let (opts, solver) = integration(p.tolerance, p.max_level);
    let mut t = Table::new("ring", &[("thickness_ratio", "1"), ("numeric", "1"), ("closed_form", "1"), ("ratio", "1")]);
    let mut worst: f64 = 0.0;
    for &r in &p.thickness_ratios {
        let a = r * p.diameter;
        let numeric = ring_noise_factor_numeric(exec, p.diameter, a, &opts)?;
        let closed = ring_noise_factor(p.diameter, a)?;
        worst = worst.max((numeric / closed - 1.0).abs());
        t.push(vec![r.into(), numeric.into(), closed.into(), (numeric / closed).into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![t],
        summary: vec![metric("max_relative_deviation", worst, "1")],
        solver,
    })
}

fn run_heating(p: &HeatingParams) -> Result<ScenarioOutput> {
    let f_cal = p.calibration_frequency / (2.0 * PI);
    let mut t = Table::new(
        "rates",
        &[("beta", "1"), ("frequency", "rad/s"), ("s_e", "(V/m)^2/Hz"), ("rate", "quanta/s"), ("tau1", "s")],
    );
    let mut summary = Vec::new();
    for &beta in &p.betas {
        let model = DipoleNoiseModel::calibrate(beta, f_cal, p.calibration_rate, p.steep_rate)?;
        if summary.is_empty() {
            summary.push(metric("reference_frequency", model.f_ref, "Hz"));
            summary.push(metric("reference_noise", model.s_ref, "(V/m)^2/Hz"));
        }
        let at_cal = electron_heating(&model, p.calibration_frequency)?;
        summary.push(metric(&format!("rate_beta_{beta}"), at_cal.rate, "quanta/s"));
        for &w in &p.frequencies {
            let h = electron_heating(&model, w)?;
            t.push(vec![beta.into(), w.into(), h.s_e.into(), h.rate.into(), h.tau1.into()]);
        }
    }
    Ok(ScenarioOutput {
        tables: vec![t],
        summary,
        solver: closed_form(),
    })
}

fn sorted_eigenvalues(m: &[f64], n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = DMatrix::from_column_slice(n, n, m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn run_reduction(p: &ReductionParams) -> Result<ScenarioOutput> {
    let c4 = CouplingMatrix4::new(p.omega, p.delta, p.big_delta, p.omega_t, p.g_p, p.g_lc, p.g_tc);
    let red = dress_and_reduce(&c4)?;
    let full: Matrix4<f64> = c4.matrix;
    let mut full_eig = sorted_eigenvalues(full.as_slice(), 4);
    // drop the cavity-like eigenvalue
    let cavity = p.omega + p.big_delta;
    let k = (0..4)
        .min_by(|&i, &j| (full_eig[i] - cavity).abs().total_cmp(&(full_eig[j] - cavity).abs()))
        .expect("four eigenvalues");
    full_eig.remove(k);
    let reduced_eig = sorted_eigenvalues(red.reduced.as_slice(), 3);
    let mut t = Table::new("eigenvalues", &[("index", "1"), ("full", "rad/s"), ("reduced", "rad/s"), ("difference", "rad/s")]);
    let mut worst: f64 = 0.0;
    for (i, (f, r)) in full_eig.iter().zip(&reduced_eig).enumerate() {
        worst = worst.max((f - r).abs());
        t.push(vec![i.into(), (*f).into(), (*r).into(), (f - r).into()]);
    }
    let detuning = p.omega + p.big_delta - p.omega_t;
    let eps = p.g_tc / detuning;
    Ok(ScenarioOutput {
        tables: vec![t],
        summary: vec![
            metric("g_lt", red.g_lt, "rad/s"),
            metric("g_lt_formula", adiabatic_coupling(p.g_lc, p.g_tc, detuning), "rad/s"),
            metric("dressed_transmon", red.omega_t, "rad/s"),
            metric("transmon_shift", red.transmon_shift, "rad/s"),
            metric("line_shift", red.line_shift, "rad/s"),
            metric("dispersive_parameter", eps, "1"),
            metric("max_eigenvalue_error", worst, "rad/s"),
            metric("eigenvalue_bound", eps * eps * p.g_tc, "rad/s"),
            metric("example_g_lt", adiabatic_coupling(p.example_g_lc, p.example_g_tc, p.example_detuning), "rad/s"),
            metric("example_dispersive_ratio", p.example_detuning / p.example_g_tc, "1"),
        ],
        solver: closed_form(),
    })
}

fn run_pickup(p: &PickupParams) -> Result<ScenarioOutput> {
    let c_res = 1.0 / (p.omega * p.z);
    let q0 = (HBAR / (2.0 * p.z)).sqrt();
    let base = PickupNetwork {
        c_p: p.c_p,
        c_b: p.c_b,
        c_b_prime: p.c_b_prime,
        c_res,
        v_d: p.v_d,
        v_ft: 0.0,
        phi_ft: 0.0,
        detuning: p.detuning,
    };
    let naive = pickup_excitation(&base, q0, 1.0)?;
    let calibrated = pickup_excitation(&base, q0, p.transfer)?;
    let mut summary = vec![
        metric("naive_photons", naive.photons, "quanta"),
        metric("photons", calibrated.photons, "quanta"),
        metric("net_charge", calibrated.net_charge, "C"),
    ];
    if let Some((v, phi)) = base.cancelling_fine_tune() {
        let tuned = |dv: f64, dphi: f64| {
            pickup_excitation(&PickupNetwork { v_ft: v + dv, phi_ft: phi + dphi, ..base }, q0, p.transfer).map(|r| r.photons)
        };
        summary.push(metric("cancelling_amplitude", v, "V"));
        summary.push(metric("cancelling_phase", phi, "rad"));
        summary.push(metric("cancelled_photons", tuned(0.0, 0.0)?, "quanta"));
        summary.push(metric("amplitude_error_photons", tuned(p.amplitude_error, 0.0)?, "quanta"));
        summary.push(metric("phase_error_photons", tuned(0.0, p.phase_error)?, "quanta"));
    }
    summary.push(metric(
        "radiative_decay",
        radiative_decay_estimate(p.omega, p.coupling_capacitance, p.load_resistance, c_res),
        "1/s",
    ));
    let mut t = Table::new("imbalance", &[("imbalance", "F"), ("photons", "quanta")]);
    for &d in &p.imbalances {
        let net = PickupNetwork { c_b: p.c_p - d, c_b_prime: 0.0, ..base };
        t.push(vec![d.into(), pickup_excitation(&net, q0, p.transfer)?.photons.into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![t],
        summary,
        solver: closed_form(),
    })
}

fn run_cavity(p: &CavityParams) -> Result<ScenarioOutput> {
    let cavity = CavityMode::new(p.omega_c, p.volume)?;
    let line = CpwLine {
        z_cpw: p.z_cpw,
        mode: p.mode,
        wavelength: p.wavelength,
        d0: p.d0,
        l_eff: p.l_eff,
    };
    let c = cpw_cavity_coupling(&line, &cavity, p.z)?;
    let mut t = Table::new("d0-scan", &[("d0", "m"), ("g_lc", "rad/s"), ("g_lc_integral", "rad/s")]);
    for &d0 in &p.d0_scan {
        let r = cpw_cavity_coupling(&CpwLine { d0, ..line }, &cavity, p.z)?;
        t.push(vec![d0.into(), r.g_lc.into(), r.g_lc_integral.into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![t],
        summary: vec![
            metric("vacuum_field", cavity.e_c0, "V/m"),
            metric("g_lc", c.g_lc, "rad/s"),
            metric("g_lc_integral", c.g_lc_integral, "rad/s"),
            metric("relative_difference", (c.g_lc_integral / c.g_lc - 1.0).abs(), "1"),
            metric("effective_impedance", effective_impedance(p.z_cpw, p.mode)?, "ohm"),
        ],
        solver: SolverReport {
            method: "midpoint".into(),
            ..Default::default()
        },
    })
}

fn run_impedance(p: &ImpedanceParams) -> Result<ScenarioOutput> {
    let mut t = Table::new("modes", &[("z_cpw", "ohm"), ("mode", "1"), ("z_effective", "ohm")]);
    for &z in &p.z_cpw {
        for &n in &p.modes {
            t.push(vec![z.into(), n.into(), effective_impedance(z, n)?.into()]);
        }
    }
    let mut design = Table::new("design", &[("mode", "1"), ("target", "ohm"), ("z_cpw_required", "ohm")]);
    let mut summary = Vec::new();
    for &n in &p.modes {
        let z = required_cpw_impedance(p.target, n)?;
        design.push(vec![n.into(), p.target.into(), z.into()]);
        summary.push(metric(&format!("required_z_cpw_mode_{n}"), z, "ohm"));
    }
    Ok(ScenarioOutput {
        tables: vec![t, design],
        summary,
        solver: closed_form(),
    })
}

fn run_rates(p: &RatesParams) -> Result<ScenarioOutput> {
    let electron = ElectronParams::electron([p.omega_x, p.omega_y, p.omega_z], p.b0);
    electron.validate()?;
    let resonator = ResonatorParams::from_omega_z(p.omega, p.z, f64::INFINITY)?;
    let drive = DriveParams {
        a_d: p.a_d,
        ..DriveParams::reference()
    };
    let mut geometry = CouplingGeometry::reference();
    geometry.d2[crate::coupling::Y] = p.d2_y;
    let card = parametric_rate(&electron, &resonator, &drive, &geometry, p.calibration)?;
    let mut t = Table::new("magic", &[("n", "1"), ("delta", "rad/s"), ("tau_swap", "s")]);
    for &n in &p.magic_orders {
        let (d, tau) = magic_detuning(n, card.g_p)?;
        t.push(vec![n.into(), d.into(), tau.into()]);
    }
    Ok(ScenarioOutput {
        tables: vec![t],
        summary: vec![
            metric("y0", card.y0, "m"),
            metric("q0", card.q0, "C"),
            metric("g", card.g, "rad/s"),
            metric("g_p", card.g_p, "rad/s"),
            metric("spin_splitting", zeeman_splitting(p.b0), "rad/s"),
        ],
        solver: closed_form(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_prefer_low_orders() {
        let (wd, wt, w) = (5.0, 7.0, 0.5);
        assert_eq!(label_peak(5.5, wd, wt, w, 3, 1e-6).as_deref(), Some("Wd+w"));
        assert_eq!(label_peak(1.5, wd, wt, w, 3, 1e-6).as_deref(), Some("-Wd+Wtr-w"));
        assert_eq!(label_peak(0.5, wd, wt, w, 3, 1e-6).as_deref(), Some("w"));
        assert_eq!(label_peak(7.5, 7.0, 7.0, w, 3, 1e-6).as_deref(), Some("Wd+w"));
        assert_eq!(label_peak(0.123, wd, wt, w, 1, 1e-6), None);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(-4)).collect();
        assert!((log_slope(&xs, &ys) + 4.0).abs() < 1e-12);
    }
}
