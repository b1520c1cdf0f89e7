mod common;

use std::f64::consts::PI;

use ehybrid_core::circuit::{effective_impedance, pickup_excitation, required_cpw_impedance, PickupNetwork};
use ehybrid_core::coupling::{
    magic_detuning, parametric_rate, CouplingGeometry, DriveParams, ElectronParams, ResonatorParams,
};
use ehybrid_core::scenario::units::{parse_quantity, Dim};
use ehybrid_core::trap::TrapFieldModel;
use proptest::prelude::*;

fn network(imbalance: f64) -> PickupNetwork {
    PickupNetwork {
        c_p: 0.5e-15,
        c_b: 0.5e-15 - imbalance,
        c_b_prime: 0.0,
        c_res: 2.27e-14,
        v_d: 0.2,
        v_ft: 0.0,
        phi_ft: 0.0,
        detuning: 2.0 * PI * 500e6,
    }
}

proptest! {
    #[test]
    fn magic_detuning_returns_the_bus_empty(n in 0u32..5, g in 1e5f64..1e8) {
        let (delta, tau) = magic_detuning(n, g).unwrap();
        let (end, bus) = common::chain_single_excitation(g, delta, tau);
        prop_assert!(end > 1.0 - 1e-9, "end {end}");
        prop_assert!(bus < 1e-9, "bus {bus}");
        // both bright states pick up an odd multiple of pi against the dark state
        let half = (delta * delta + 8.0 * g * g).sqrt() / 2.0;
        prop_assert!(((half + delta / 2.0) * tau / (2.0 * PI) - (n as f64 + 0.5)).abs() < 1e-9);
        prop_assert!(((half - delta / 2.0) * tau / (2.0 * PI) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn parametric_rate_is_half_the_bare_rate(a_d in 1e-9f64..1e-6, cal in 0.1f64..10.0) {
        let drive = DriveParams { a_d, ..DriveParams::reference() };
        let card = parametric_rate(
            &ElectronParams::reference(),
            &ResonatorParams::reference(),
            &drive,
            &CouplingGeometry::reference(),
            cal,
        ).unwrap();
        prop_assert!((card.g_p - card.g / 2.0).abs() <= 1e-12 * card.g);
    }

    #[test]
    fn impedance_design_inverts(z in 1.0f64..5000.0, n in 1u32..8) {
        let back = required_cpw_impedance(effective_impedance(z, n).unwrap(), n).unwrap();
        prop_assert!((back / z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frequency_units_round_trip(x in 1e-3f64..1e4) {
        let mhz = parse_quantity(&format!("{x} MHz"), Dim::AngularFrequency).unwrap();
        let khz = parse_quantity(&format!("{} kHz", x * 1e3), Dim::AngularFrequency).unwrap();
        prop_assert!((mhz / (2.0 * PI * x * 1e6) - 1.0).abs() < 1e-14);
        prop_assert!((mhz / khz - 1.0).abs() < 1e-12);
        let um = parse_quantity(&format!("{x} um"), Dim::Length).unwrap();
        prop_assert!((um / (x * 1e-6) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pickup_is_quadratic_in_imbalance(d in 1e-19f64..4e-17, k in 0.1f64..10.0) {
        let n1 = pickup_excitation(&network(d), 2.3e-19, 0.2315).unwrap().photons;
        let nk = pickup_excitation(&network(k * d), 2.3e-19, 0.2315).unwrap().photons;
        prop_assert!((nk / (k * k * n1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trap_fields_satisfy_laplace(a in -0.05f64..0.05, q in 0.0f64..0.9, wy in 0.3e9f64..1.0e9) {
        let m = TrapFieldModel::mathieu(a, q, 2.0 * PI * 1e9);
        prop_assert!(m.validate().is_ok());
        let scale = m.rf_curvature.iter().chain(&m.static_curvature).fold(0.0f64, |s, c| s.max(c.abs())).max(1.0);
        prop_assert!(m.rf_curvature.iter().sum::<f64>().abs() <= 1e-12 * scale);
        prop_assert!(m.static_curvature.iter().sum::<f64>().abs() <= 1e-12 * scale);
        if let Ok(e) = TrapFieldModel::electron_trap(2.0 * PI * 7e9, 2.0 * PI * wy, 2.0 * PI * 0.8 * wy) {
            prop_assert!(e.validate().is_ok());
        }
    }
}

#[test]
fn non_positive_inputs_are_rejected() {
    assert!(magic_detuning(1, 0.0).is_err());
    assert!(effective_impedance(-1.0, 1).is_err());
    assert!(effective_impedance(50.0, 0).is_err());
    assert!(required_cpw_impedance(-5.0, 1).is_err());
    assert!(parse_quantity("3 MHz", Dim::Length).is_err());
    assert!(parse_quantity("fast", Dim::Time).is_err());
}
