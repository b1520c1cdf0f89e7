use serde::{Deserialize, Serialize};

use super::units;
use crate::constants::two_pi;
use crate::coupling::{magic_detuning, ChainKind, RwaSpec};
use crate::dynamics::recommended_step;
use crate::error::{Error, Result};

/// A named experiment with every physical input explicit, in SI units.
///
/// Optional inputs (`None`) stand for derived values; [`ScenarioSpec::resolve`]
/// expands them so the stored spec never relies on a run-time default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Chain(ChainParams),
    Cooling(CoolingParams),
    SpinMotion(SpinParams),
    Rwa(RwaParams),
    TrapStability(TrapParams),
    Sidebands(SidebandParams),
    NoiseTip(NoiseTipParams),
    NoiseRing(NoiseRingParams),
    Heating(HeatingParams),
    Reduction(ReductionParams),
    Pickup(PickupParams),
    CavityCoupling(CavityParams),
    Impedance(ImpedanceParams),
    Rates(RatesParams),
}

/// Three-system state transfer from `|1,0,0>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainParams {
    pub kind: ChainKind,
    /// Magic-detuning index; fixes the swap time.
    pub n: u32,
    #[serde(deserialize_with = "units::freq")]
    pub g_p: f64,
    #[serde(deserialize_with = "units::freq")]
    pub g_end: f64,
    /// Bus detuning; the magic value for `n` when absent.
    #[serde(default, deserialize_with = "units::freq_opt", skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(deserialize_with = "units::rate")]
    pub heating: f64,
    #[serde(deserialize_with = "units::time")]
    pub bus_tau1: f64,
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub transmon_tau1: Option<f64>,
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub transmon_tau2: Option<f64>,
    pub electron_dim: usize,
    pub bus_dim: usize,
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub record_every: usize,
}

/// Gaussian cooling swap of a thermal electron into a cold resonator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingParams {
    #[serde(deserialize_with = "units::freq")]
    pub g_p: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::temperature")]
    pub temperature: f64,
    #[serde(deserialize_with = "units::rate")]
    pub heating: f64,
    #[serde(deserialize_with = "units::time")]
    pub resonator_tau1: f64,
    /// Swap length; `pi / (2 g_p)` when absent.
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    pub samples: usize,
    /// Thermal occupation of the Fock-space cross-check.
    pub cross_check_nbar: f64,
    /// Fock truncation of the cross-check; 0 skips it.
    pub cross_check_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinParams {
    #[serde(deserialize_with = "units::length")]
    pub coil_radius: f64,
    #[serde(deserialize_with = "units::current")]
    pub coil_current: f64,
    #[serde(deserialize_with = "units::field")]
    pub b0: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_x: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_z: f64,
    /// Sideband rate used in the map; the coil value when absent.
    #[serde(default, deserialize_with = "units::freq_opt", skip_serializing_if = "Option::is_none")]
    pub omega_r: Option<f64>,
    #[serde(deserialize_with = "units::rate")]
    pub heating: f64,
    pub motion_dim: usize,
    /// Map length; `pi / (2 Omega_R)` when absent.
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Field noise amplitude density, T/sqrt(Hz).
    #[serde(deserialize_with = "units::density")]
    pub field_noise: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RwaParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::freq")]
    pub g_p: f64,
    pub electron_dim: usize,
    pub bus_dim: usize,
    #[serde(default, deserialize_with = "units::time_opt", skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub record_every: usize,
}

/// Reference trap check, Mathieu scan, edge and secular frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega_tr: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_xz: f64,
    #[serde(deserialize_with = "units::length")]
    pub drive_amplitude: f64,
    #[serde(deserialize_with = "units::angle")]
    pub drive_phase: f64,
    /// RF frequency of the bare Mathieu runs.
    #[serde(deserialize_with = "units::freq")]
    pub mathieu_rf: f64,
    pub scan_a: f64,
    pub scan_q: Vec<f64>,
    /// Stable and unstable `q` bracketing the edge.
    pub edge_bracket: [f64; 2],
    pub edge_tolerance: f64,
    pub secular_q: Vec<f64>,
    pub secular_periods: f64,
    pub escape_factor: f64,
    #[serde(deserialize_with = "units::length")]
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidebandParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega_tr: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_xz: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_d: f64,
    #[serde(deserialize_with = "units::length")]
    pub drive_amplitude: f64,
    #[serde(deserialize_with = "units::angle")]
    pub drive_phase: f64,
    /// Drive curvature as a Mathieu-like `q` in units of the trap RF.
    pub drive_quadrupole: f64,
    pub secular_periods: f64,
    /// Relative peak threshold.
    pub threshold: f64,
    /// Largest harmonic order tried when labelling peaks.
    pub max_order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseTipParams {
    #[serde(deserialize_with = "units::length")]
    pub r0: f64,
    /// Full cone opening angles.
    #[serde(deserialize_with = "units::angles")]
    pub alphas: Vec<f64>,
    #[serde(deserialize_with = "units::lengths")]
    pub plane_distances: Vec<f64>,
    pub tolerance: f64,
    pub max_level: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseRingParams {
    #[serde(deserialize_with = "units::length")]
    pub diameter: f64,
    /// Thickness over diameter.
    pub thickness_ratios: Vec<f64>,
    pub tolerance: f64,
    pub max_level: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatingParams {
    /// Electron frequency of the two calibration rates.
    #[serde(deserialize_with = "units::freq")]
    pub calibration_frequency: f64,
    /// Rate for `f^-1` noise.
    #[serde(deserialize_with = "units::rate")]
    pub calibration_rate: f64,
    /// Rate for `f^-3/2` noise.
    #[serde(deserialize_with = "units::rate")]
    pub steep_rate: f64,
    pub betas: Vec<f64>,
    #[serde(deserialize_with = "units::freqs")]
    pub frequencies: Vec<f64>,
}

/// Four-mode dressing and elimination of the cavity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega: f64,
    /// Line detuning from the electron.
    #[serde(deserialize_with = "units::freq")]
    pub delta: f64,
    /// Cavity detuning from the electron.
    #[serde(deserialize_with = "units::freq")]
    pub big_delta: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_t: f64,
    #[serde(deserialize_with = "units::freq")]
    pub g_p: f64,
    #[serde(deserialize_with = "units::freq")]
    pub g_lc: f64,
    #[serde(deserialize_with = "units::freq")]
    pub g_tc: f64,
    /// Product-formula example, evaluated without the matrix.
    #[serde(deserialize_with = "units::freq")]
    pub example_g_lc: f64,
    #[serde(deserialize_with = "units::freq")]
    pub example_g_tc: f64,
    #[serde(deserialize_with = "units::freq")]
    pub example_detuning: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickupParams {
    #[serde(deserialize_with = "units::capacitance")]
    pub c_p: f64,
    #[serde(deserialize_with = "units::capacitance")]
    pub c_b: f64,
    #[serde(deserialize_with = "units::capacitance")]
    pub c_b_prime: f64,
    /// Resonator frequency and impedance fix its capacitance and `q0`.
    #[serde(deserialize_with = "units::freq")]
    pub omega: f64,
    #[serde(deserialize_with = "units::resistance")]
    pub z: f64,
    #[serde(deserialize_with = "units::voltage")]
    pub v_d: f64,
    #[serde(deserialize_with = "units::freq")]
    pub detuning: f64,
    pub transfer: f64,
    /// Fine-tune amplitude error around the cancelling value.
    #[serde(deserialize_with = "units::voltage")]
    pub amplitude_error: f64,
    #[serde(deserialize_with = "units::angle")]
    pub phase_error: f64,
    /// `C_p - C_b` values of the imbalance table.
    #[serde(deserialize_with = "units::capacitances")]
    pub imbalances: Vec<f64>,
    #[serde(deserialize_with = "units::capacitance")]
    pub coupling_capacitance: f64,
    #[serde(deserialize_with = "units::resistance")]
    pub load_resistance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega_c: f64,
    #[serde(deserialize_with = "units::volume")]
    pub volume: f64,
    /// Line impedance seen by the charge, `q0 = sqrt(hbar / 2Z)`.
    #[serde(deserialize_with = "units::resistance")]
    pub z: f64,
    #[serde(deserialize_with = "units::resistance")]
    pub z_cpw: f64,
    pub mode: u32,
    #[serde(deserialize_with = "units::length")]
    pub wavelength: f64,
    #[serde(deserialize_with = "units::length")]
    pub d0: f64,
    #[serde(deserialize_with = "units::length")]
    pub l_eff: f64,
    #[serde(deserialize_with = "units::lengths")]
    pub d0_scan: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpedanceParams {
    #[serde(deserialize_with = "units::resistances")]
    pub z_cpw: Vec<f64>,
    pub modes: Vec<u32>,
    /// Impedance to design for.
    #[serde(deserialize_with = "units::resistance")]
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesParams {
    #[serde(deserialize_with = "units::freq")]
    pub omega_x: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_y: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega_z: f64,
    #[serde(deserialize_with = "units::field")]
    pub b0: f64,
    #[serde(deserialize_with = "units::freq")]
    pub omega: f64,
    #[serde(deserialize_with = "units::resistance")]
    pub z: f64,
    #[serde(deserialize_with = "units::length")]
    pub a_d: f64,
    #[serde(deserialize_with = "units::length")]
    pub d2_y: f64,
    pub calibration: f64,
    pub magic_orders: Vec<u32>,
}

impl ScenarioSpec {
    /// Parse a scenario from TOML. A run manifest is accepted as well; its
    /// `[parameters]` table is the resolved spec.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let value: toml::Table = toml::from_str(text).map_err(|e| config_error(text, &e))?;
        if value.contains_key("tool_version") {
            let manifest: ManifestView = toml::from_str(text).map_err(|e| config_error(text, &e))?;
            return Ok(manifest.parameters);
        }
        toml::from_str(text).map_err(|e| config_error(text, &e))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config {
            message: e.to_string(),
            line: None,
            field: None,
        })
    }

    /// Expand every derived input into an explicit value.
    pub fn resolve(&self) -> Result<Self> {
        let mut out = self.clone();
        match &mut out.experiment {
            Experiment::Chain(p) => {
                let (magic, tau) = magic_detuning(p.n, p.g_p)?;
                let delta = *p.delta.get_or_insert(magic);
                p.step.get_or_insert_with(|| recommended_step(delta.abs(), tau));
            }
            Experiment::Cooling(p) => {
                p.duration.get_or_insert(std::f64::consts::PI / (2.0 * p.g_p));
            }
            Experiment::SpinMotion(p) => {
                if p.omega_r.is_none() {
                    let electron = crate::coupling::ElectronParams::electron([p.omega_x, p.omega_y, p.omega_z], p.b0);
                    p.omega_r = Some(crate::coupling::spin_motion_rate(p.coil_radius, p.coil_current, &electron)?.omega_r);
                }
                let w = p.omega_r.unwrap_or_default();
                p.duration.get_or_insert(std::f64::consts::PI / (2.0 * w));
            }
            Experiment::Rwa(p) => {
                p.step = Some(p.spec().resolved_step());
            }
            _ => {}
        }
        Ok(out)
    }
}

impl RwaParams {
    pub(crate) fn spec(&self) -> RwaSpec {
        RwaSpec {
            omega: self.omega,
            omega_y: self.omega_y,
            g_p: self.g_p,
            electron_dim: self.electron_dim,
            bus_dim: self.bus_dim,
            step: self.step,
            record_every: self.record_every,
        }
    }
}

#[derive(Deserialize)]
struct ManifestView {
    parameters: ScenarioSpec,
}

/// Config error with the line of the offending span and the key on it.
fn config_error(text: &str, e: &toml::de::Error) -> Error {
    let (line, field) = match e.span() {
        Some(span) => {
            let start = span.start.min(text.len());
            let line_no = text[..start].matches('\n').count() + 1;
            let line_text = text.lines().nth(line_no - 1).unwrap_or("");
            let field = line_text
                .split_once('=')
                .map(|(k, _)| k.trim().trim_matches('"').to_string())
                .filter(|k| !k.is_empty() && !k.starts_with('['));
            (Some(line_no), field.or_else(|| missing_field(e.message())))
        }
        None => (None, missing_field(e.message())),
    };
    Error::Config {
        message: e.message().trim().to_string(),
        line,
        field,
    }
}

fn missing_field(message: &str) -> Option<String> {
    let rest = message.split_once("field `")?.1;
    Some(rest.split_once('`')?.0.to_string())
}

/// Names of the built-in scenarios.
pub const SCENARIOS: [&str; 19] = [
    "fig3-swap-n0",
    "fig3-swap-n1",
    "fig3-bell",
    "ee-swap-n0",
    "ee-swap-n1",
    "ee-bell",
    "cooling",
    "spin-motion-map",
    "rwa-validation",
    "trap-stability",
    "sidebands",
    "noise-tip-factor",
    "noise-ring-factor",
    "heating-rates",
    "appendixE-reduction",
    "appendixC-pickup",
    "appendixD-coupling",
    "impedance",
    "rates",
];

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Result<ScenarioSpec> {
    let g_p = two_pi(1.1e6);
    let chain = |kind: ChainKind, n: u32| ChainParams {
        kind,
        n,
        g_p,
        g_end: g_p,
        delta: None,
        heating: 8100.0,
        bus_tau1: 45e-6,
        transmon_tau1: (kind == ChainKind::ElectronTransmon).then_some(70e-6),
        transmon_tau2: (kind == ChainKind::ElectronTransmon).then_some(92e-6),
        electron_dim: 4,
        bus_dim: 4,
        step: None,
        record_every: 10,
    };
    let trap = |omega_d: f64| SidebandParams {
        omega_tr: two_pi(7e9),
        omega_y: two_pi(500e6),
        omega_xz: two_pi(400e6),
        omega_d,
        drive_amplitude: 350e-9,
        drive_phase: std::f64::consts::FRAC_PI_2,
        drive_quadrupole: 0.0,
        secular_periods: 200.0,
        threshold: 1e-4,
        max_order: 3,
    };
    let (description, experiment) = match name {
        "fig3-swap-n0" => ("Electron to transmon swap at delta_0", Experiment::Chain(chain(ChainKind::ElectronTransmon, 0))),
        "fig3-swap-n1" => ("Electron to transmon swap at delta_1", Experiment::Chain(chain(ChainKind::ElectronTransmon, 1))),
        "fig3-bell" => ("Electron-transmon Bell state at half the n = 1 swap", Experiment::Chain(chain(ChainKind::ElectronTransmon, 1))),
        "ee-swap-n0" => ("Electron to electron swap at delta_0", Experiment::Chain(chain(ChainKind::ElectronElectron, 0))),
        "ee-swap-n1" => ("Electron to electron swap at delta_1", Experiment::Chain(chain(ChainKind::ElectronElectron, 1))),
        "ee-bell" => ("Electron-electron Bell state at half the n = 1 swap", Experiment::Chain(chain(ChainKind::ElectronElectron, 1))),
        "cooling" => (
            "Swap a 1 K electron into a cold resonator",
            Experiment::Cooling(CoolingParams {
                g_p,
                omega_y: two_pi(500e6),
                temperature: 1.0,
                heating: 8100.0,
                resonator_tau1: 45e-6,
                duration: None,
                samples: 200,
                cross_check_nbar: 2.0,
                cross_check_dim: 12,
            }),
        ),
        "spin-motion-map" => (
            "Map a motional qubit onto the spin with a gradient coil",
            Experiment::SpinMotion(SpinParams {
                coil_radius: 50e-6,
                coil_current: 1.0,
                b0: 1e-3,
                omega_x: two_pi(400e6),
                omega_y: two_pi(500e6),
                omega_z: two_pi(400e6),
                omega_r: Some(two_pi(410e3)),
                heating: 8100.0,
                motion_dim: 4,
                duration: None,
                field_noise: 14e-12,
            }),
        ),
        "rwa-validation" => (
            "Full time-dependent exchange against the rotating-wave result",
            Experiment::Rwa(RwaParams {
                omega: two_pi(7e9),
                omega_y: two_pi(500e6),
                g_p,
                electron_dim: 4,
                bus_dim: 4,
                step: None,
                record_every: 1000,
            }),
        ),
        "trap-stability" => (
            "Reference trap, Mathieu scan, stability edge and secular frequencies",
            Experiment::TrapStability(TrapParams {
                omega_tr: two_pi(7e9),
                omega_y: two_pi(500e6),
                omega_xz: two_pi(400e6),
                drive_amplitude: 350e-9,
                drive_phase: std::f64::consts::FRAC_PI_2,
                mathieu_rf: two_pi(1e9),
                scan_a: 0.0,
                scan_q: (1..=20).map(|k| 0.05 * k as f64).collect(),
                edge_bracket: [0.85, 0.95],
                edge_tolerance: 5e-4,
                secular_q: vec![0.05, 0.1, 0.2, 0.3, 0.4],
                secular_periods: 200.0,
                escape_factor: 10.0,
                offset: 1e-7,
            }),
        ),
        "sidebands" => (
            "Motional sidebands with the drive offset from the trap RF",
            Experiment::Sidebands(SidebandParams {
                drive_quadrupole: 0.02,
                ..trap(two_pi(5.3e9))
            }),
        ),
        "noise-tip-factor" => (
            "Cone tip noise relative to a plane at the same distance",
            Experiment::NoiseTip(NoiseTipParams {
                r0: 50e-6,
                alphas: [20.0, 45.0, 90.0, 135.0, 180.0].map(f64::to_radians).to_vec(),
                plane_distances: vec![25e-6, 50e-6, 100e-6, 200e-6],
                tolerance: 1e-3,
                max_level: 6,
            }),
        ),
        "noise-ring-factor" => (
            "Ring electrode noise relative to a plane",
            Experiment::NoiseRing(NoiseRingParams {
                diameter: 100e-6,
                thickness_ratios: vec![0.0, 0.05, 0.1, 0.2, 0.3],
                tolerance: 1e-3,
                max_level: 6,
            }),
        ),
        "heating-rates" => (
            "Heating rates for f^-1 and f^-3/2 noise from one calibration",
            Experiment::Heating(HeatingParams {
                calibration_frequency: two_pi(500e6),
                calibration_rate: 8100.0,
                steep_rate: 690.0,
                betas: vec![1.0, 1.5],
                frequencies: [100e6, 200e6, 500e6, 1e9, 2e9].map(two_pi).to_vec(),
            }),
        ),
        "appendixE-reduction" => (
            "Four-mode coupling matrix reduced to three modes",
            Experiment::Reduction(ReductionParams {
                omega: two_pi(7e9),
                delta: two_pi(1.8e6),
                big_delta: two_pi(545.4e6),
                omega_t: two_pi(7e9),
                g_p,
                g_lc: two_pi(6e6),
                g_tc: two_pi(100e6),
                example_g_lc: two_pi(3e6),
                example_g_tc: two_pi(100e6),
                example_detuning: two_pi(272.7e6),
            }),
        ),
        "appendixC-pickup" => (
            "Drive pickup through electrode capacitances and its cancellation",
            Experiment::Pickup(PickupParams {
                c_p: 0.5e-15,
                c_b: 0.49e-15,
                c_b_prime: 10e-18,
                omega: two_pi(7e9),
                z: 1e3,
                v_d: 0.2,
                detuning: two_pi(500e6),
                transfer: crate::circuit::PICKUP_TRANSFER_FACTOR,
                amplitude_error: 0.4e-3,
                phase_error: 10f64.to_radians(),
                imbalances: vec![0.0, 2.5e-18, 5e-18, 10e-18, 20e-18, 40e-18],
                coupling_capacitance: 10e-18,
                load_resistance: 50.0,
            }),
        ),
        "appendixD-coupling" => (
            "CPW line coupled to a 3D cavity through its dipole density",
            Experiment::CavityCoupling(CavityParams {
                omega_c: two_pi(7e9),
                volume: crate::circuit::REFERENCE_CAVITY_VOLUME,
                z: 1e3,
                z_cpw: 785.4,
                mode: 1,
                wavelength: 0.0171,
                d0: 200e-6,
                l_eff: 0.0171 / 2.0,
                d0_scan: vec![50e-6, 100e-6, 200e-6, 400e-6],
            }),
        ),
        "impedance" => (
            "Effective impedance of CPW resonator modes",
            Experiment::Impedance(ImpedanceParams {
                z_cpw: vec![50.0, 100.0, 200.0, 785.4],
                modes: vec![1, 2, 3],
                target: 1e3,
            }),
        ),
        "rates" => (
            "Zero-point amplitudes, parametric rate and magic detunings",
            Experiment::Rates(RatesParams {
                omega_x: two_pi(400e6),
                omega_y: two_pi(500e6),
                omega_z: two_pi(400e6),
                b0: 1e-3,
                omega: two_pi(7e9),
                z: 1e3,
                a_d: 350e-9,
                d2_y: 7.3e-6,
                calibration: 1.0,
                magic_orders: vec![0, 1, 2, 3],
            }),
        ),
        _ => return Err(Error::UnknownScenario(name.to_string())),
    };
    Ok(ScenarioSpec {
        name: name.to_string(),
        description: description.to_string(),
        experiment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_round_trips() {
        for name in SCENARIOS {
            let spec = builtin(name).unwrap().resolve().unwrap();
            let text = spec.to_toml_string().unwrap();
            assert_eq!(ScenarioSpec::from_toml_str(&text).unwrap(), spec, "{name}");
        }
    }

    #[test]
    fn units_in_config() {
        let text = r#"
name = "custom"
[experiment.cooling]
g_p = "1.1 MHz"
omega_y = "500 MHz"
temperature = "1 K"
heating = "8100 quanta/s"
resonator_tau1 = "45 us"
samples = 10
cross_check_nbar = 2.0
cross_check_dim = 0
"#;
        let spec = ScenarioSpec::from_toml_str(text).unwrap();
        let Experiment::Cooling(p) = spec.experiment else { panic!() };
        assert!((p.g_p - two_pi(1.1e6)).abs() < 1e-6);
        assert_eq!(p.resonator_tau1, 45e-6);
    }

    #[test]
    fn errors_point_at_line_and_field() {
        let text = "name = \"x\"\n[experiment.cooling]\ng_p = \"1.1 MHz\"\nomega_y = \"500 mm\"\n";
        match ScenarioSpec::from_toml_str(text) {
            Err(Error::Config { line, field, .. }) => {
                assert_eq!(line, Some(4));
                assert_eq!(field.as_deref(), Some("omega_y"));
            }
            other => panic!("{other:?}"),
        }
        let typo = "name = \"x\"\n[experiment.cooling]\ng_pp = 1.0\n";
        assert!(matches!(ScenarioSpec::from_toml_str(typo), Err(Error::Config { line: Some(3), .. })));
        assert!(matches!(builtin("fig9"), Err(Error::UnknownScenario(_))));
    }
}
