//! Classical electron motion in the RF trap plus parametric drive.

mod integrate;
mod model;
mod spectrum;
mod stability;

pub use integrate::{integrate_motion, max_motion_step, MotionOptions, TrajectoryRecord};
pub use model::{MathieuParams, TrapFieldModel};
pub use spectrum::{extract_spectrum, Peak, SpectrumPeaks, MIN_SPECTRUM_SAMPLES};
pub use stability::{
    check_stability, driven_orbit_start, drive_pseudopotential_ratio, limiting_drive_frequency, mathieu_edge,
    secular_frequency, secular_period_estimate, simulated_pseudopotential_ratio, spectral_run, stability_scan,
    StabilityOptions, StabilityPoint, PSEUDOPOTENTIAL_BUDGET,
};
