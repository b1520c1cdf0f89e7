//! Coupling rates and Hamiltonians.
//!
//! Parameter cards, zero-point amplitudes, the parametric electron–resonator
//! rate, magic detunings for three-system chains, Hamiltonian builders in
//! the interaction picture (rad/s), chain, cooling and spin–motion
//! simulations, the RWA check, and the spin coherence estimate.

mod chain;
mod cooling;
mod hamiltonian;
mod params;
mod rates;
mod rwa;
mod spin;

pub use chain::{bell_target, simulate_chain, ChainOutcome, ChainSpec};
pub use cooling::{cooling_cross_check, simulate_cooling, CoolingOutcome, CoolingSpec};
pub use hamiltonian::{
    build_chain_hamiltonian, build_er_hamiltonian, chain_space, ChainKind, ErFrequencies, ErMode,
};
pub use params::{
    zeeman_splitting, CouplingGeometry, DriveParams, ElectronParams, RateCard, ResonatorParams,
    TransmonParams, Y,
};
pub use rates::{magic_detuning, parametric_rate, zero_point_amplitudes};
pub use rwa::{rwa_validation, RwaOutcome, RwaSpec};
pub use spin::{spin_coherence, spin_motion_map_sim, spin_motion_rate, SpinMapOutcome, SpinMotionRate};
