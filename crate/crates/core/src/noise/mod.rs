//! Surface-dipole electric-field noise and the motional heating it causes.

mod heating;
mod surface;

pub use heating::{
    common_reference_frequency, electron_heating, extrapolate_noise, heating_rate, DipoleNoiseModel,
    HeatingResult, CALIBRATION_FREQUENCY, CALIBRATION_RATE, STEEP_SCALING_RATE,
};
pub use surface::{
    cone_noise_factor_numeric, dipole_field_noise, ring_noise_factor, ring_noise_factor_numeric,
    tip_noise_factor, DipoleOrientation, IntegrationOptions, SurfaceGeometry, SurfaceKind, CUTOFF,
};
