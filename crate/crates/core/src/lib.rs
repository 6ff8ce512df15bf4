//! Four-level tripod atom driven by probe, pump and trigger fields: dressed
//! states, optical Bloch equations, linear and cross-Kerr response, group
//! velocities, and the polarization phase gate built on top of them.
//!
//! Basis order is `(|0>, |1>, |2>, |3>)` everywhere. `|0>` is the excited
//! state; the probe drives `|1> <-> |0>`, the pump drives `|2> <-> |0>` and the
//! trigger drives `|3> <-> |0>`. Rates, detunings and Rabi frequencies are in
//! units of a reference decay rate `gamma` unless a name carries a physical
//! unit; the physical value of `gamma` lives in [`MediumSpec`].

pub mod bloch;
pub mod constants;
pub mod error;
pub mod gate;
pub mod model;
pub mod response;
pub mod search;

pub use num_complex::Complex64;

pub use crate::bloch::{
    build_liouvillian, coherence_ratio, evolve, steady_state, DensityMatrix, Liouvillian,
};
pub use crate::error::{Error, Result};
pub use crate::gate::{
    linear_phase, nonlinear_phase, overlap_factor, phase_ratio, truth_table, walkoff, GateReport,
    Polarization, PulseSpec, TruthRow, CONVENTION_ID,
};
pub use crate::model::{
    build_hamiltonian, dark_state_vector, dressed_states, ComplexDetunings, DarkState, EigenSystem,
    Leg, TripodParams,
};
pub use crate::response::{
    chi1, chi3, exact_response, group_index, group_velocity, group_velocity_approx, to_physical,
    MediumSpec, ReducedResponse, ResponseKind,
};
pub use crate::search::{
    sensitivity, solve_for_pi, sweep, Axis, DetuningTarget, FreeParameter, Observable,
    OperatingPoint, Perturbation, SensitivityReport, Spacing, SweepBase, SweepRow, SweepSpec,
    SweepTable,
};
