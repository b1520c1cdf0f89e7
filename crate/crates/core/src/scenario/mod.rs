//! Named, fully resolved experiments and their outputs.
//!
//! A [`ScenarioSpec`] lists every physical input in SI units. Configs are
//! TOML where a quantity may be a bare SI number or a string with a unit
//! (`"500 MHz"`, `"7.3 um"`, `"8100 quanta/s"`). [`run_scenario`] returns
//! tables and summary metrics; [`write_run`] stores them as CSV next to a
//! manifest that reproduces the run. [`sweep`] repeats a scenario over the
//! values of one parameter.

mod output;
mod run;
mod spec;
mod sweep;
pub mod units;

pub use output::{sha256_hex, write_run, Cell, Column, Metric, RunManifest, ScenarioOutput, SolverReport, Table, MANIFEST_FILE};
pub use run::run_scenario;
pub use spec::{
    builtin, CavityParams, ChainParams, CoolingParams, Experiment, HeatingParams, ImpedanceParams, NoiseRingParams,
    NoiseTipParams, PickupParams, RatesParams, ReductionParams, RwaParams, ScenarioSpec, SidebandParams, SpinParams,
    TrapParams, SCENARIOS,
};
pub use sweep::{parse_value, set_parameter, sweep, SweepRecord};
