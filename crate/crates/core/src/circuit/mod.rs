//! Resonator engineering: CPW impedance, CPW–cavity coupling, four-mode
//! dressing, and classical pickup on the bus.

mod cavity;
mod dressing;
mod impedance;
mod pickup;

pub use cavity::{
    cpw_cavity_coupling, dipole_integral, CavityCoupling, CavityMode, CpwLine, INTEGRAL_TOLERANCE,
    REFERENCE_CAVITY_VOLUME,
};
pub use dressing::{adiabatic_coupling, dress_and_reduce, CouplingMatrix4, Reduction, MIN_DISPERSIVE_RATIO};
pub use impedance::{effective_impedance, required_cpw_impedance};
pub use pickup::{
    pickup_excitation, radiative_decay_estimate, PickupNetwork, PickupResult, PICKUP_TRANSFER_FACTOR,
};
