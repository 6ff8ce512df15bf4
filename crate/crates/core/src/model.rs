//! Tripod parameters, the interaction-picture Hamiltonian and its dressed states.
//!
//! The Hamiltonian is written in the frame where `|1>` has zero energy:
//! diagonal `(delta1, 0, delta1 - delta2, delta1 - delta3)` and real couplings
//! `omega_p` on `0<->1`, `omega_c` on `0<->2`, `omega_t` on `0<->3`. Only
//! `|Omega|^2` enters any observable, so Rabi frequencies are kept real.

use std::fmt;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which weak field a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    Probe,
    Trigger,
}

impl Leg {
    pub fn other(self) -> Leg {
        match self {
            Leg::Probe => Leg::Trigger,
            Leg::Trigger => Leg::Probe,
        }
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Leg::Probe => "probe",
            Leg::Trigger => "trigger",
        })
    }
}

/// Drive strengths, detunings and decay rates of the tripod, in units of gamma.
///
/// `gamma11`, `gamma22`, `gamma33` are population decay rates from `|0>` into
/// `|1>`, `|2>`, `|3>`. The ground rates `gamma12`, `gamma13`, `gamma23` damp the
/// ground coherences and also carry population `2 -> 1`, `3 -> 1`, `3 -> 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripodParams {
    pub omega_p: f64,
    pub omega_t: f64,
    pub omega_c: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub gamma10: f64,
    pub gamma20: f64,
    pub gamma30: f64,
    pub gamma11: f64,
    pub gamma22: f64,
    pub gamma33: f64,
    pub gamma12: f64,
    pub gamma13: f64,
    pub gamma23: f64,
}

impl Default for TripodParams {
    /// Fields off, on resonance, unit excited coherence decay split evenly
    /// into the three ground states, no ground relaxation.
    fn default() -> Self {
        TripodParams {
            omega_p: 0.0,
            omega_t: 0.0,
            omega_c: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            delta3: 0.0,
            gamma10: 1.0,
            gamma20: 1.0,
            gamma30: 1.0,
            gamma11: 2.0 / 3.0,
            gamma22: 2.0 / 3.0,
            gamma33: 2.0 / 3.0,
            gamma12: 0.0,
            gamma13: 0.0,
            gamma23: 0.0,
        }
    }
}

impl TripodParams {
    /// Default decay structure with the given fields and detunings.
    pub fn new(omega_p: f64, omega_t: f64, omega_c: f64, deltas: [f64; 3]) -> Self {
        TripodParams {
            omega_p,
            omega_t,
            omega_c,
            delta1: deltas[0],
            delta2: deltas[1],
            delta3: deltas[2],
            ..TripodParams::default()
        }
    }

    /// Sets all three ground rates to the same dephasing value.
    pub fn with_dephasing(mut self, gamma_d: f64) -> Self {
        self.gamma12 = gamma_d;
        self.gamma13 = gamma_d;
        self.gamma23 = gamma_d;
        self
    }

    /// Single-photon operating point: weak probe and trigger near 20 gamma.
    pub fn quantum() -> Self {
        TripodParams::new(0.1, 0.1, 1.0, [20.01, 20.0, 20.02]).with_dephasing(0.01)
    }

    /// Classical-pulse operating point near 10 gamma with a strong pump.
    pub fn semiclassical() -> Self {
        TripodParams::new(1.0, 1.0, 4.5, [10.01, 10.0, 10.02]).with_dephasing(0.01)
    }

    pub fn rabi(&self, leg: Leg) -> f64 {
        match leg {
            Leg::Probe => self.omega_p,
            Leg::Trigger => self.omega_t,
        }
    }

    pub fn set_rabi(&mut self, leg: Leg, value: f64) {
        match leg {
            Leg::Probe => self.omega_p = value,
            Leg::Trigger => self.omega_t = value,
        }
    }

    /// Relabels `|1> <-> |3>`: probe and trigger quantities trade places.
    pub fn mirrored(&self) -> Self {
        TripodParams {
            omega_p: self.omega_t,
            omega_t: self.omega_p,
            omega_c: self.omega_c,
            delta1: self.delta3,
            delta2: self.delta2,
            delta3: self.delta1,
            gamma10: self.gamma30,
            gamma20: self.gamma20,
            gamma30: self.gamma10,
            gamma11: self.gamma33,
            gamma22: self.gamma22,
            gamma33: self.gamma11,
            gamma12: self.gamma23,
            gamma13: self.gamma13,
            gamma23: self.gamma12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("omega_p", self.omega_p),
            ("omega_t", self.omega_t),
            ("omega_c", self.omega_c),
            ("gamma10", self.gamma10),
            ("gamma20", self.gamma20),
            ("gamma30", self.gamma30),
            ("gamma11", self.gamma11),
            ("gamma22", self.gamma22),
            ("gamma33", self.gamma33),
            ("gamma12", self.gamma12),
            ("gamma13", self.gamma13),
            ("gamma23", self.gamma23),
        ];
        for (name, value) in rates {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and non-negative, got {value}"),
                });
            }
        }
        for (name, value) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {value}"),
                });
            }
        }
        Ok(())
    }

    pub fn detunings(&self) -> ComplexDetunings {
        ComplexDetunings::from_params(self)
    }
}

/// Complex detunings of the optical and ground coherences.
///
/// `d_j0 = delta_j + i gamma_j0` and `d_ij = delta_i - delta_j + i gamma_ij`, so
/// that `i d(rho_ij)/dt = -d_ij rho_ij + ...` for every coherence with `i < j`
/// in the ground manifold. The reversed orderings follow from
/// `d_ji = -conj(d_ij)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDetunings {
    pub d10: Complex64,
    pub d20: Complex64,
    pub d30: Complex64,
    pub d12: Complex64,
    pub d13: Complex64,
    pub d23: Complex64,
}

impl ComplexDetunings {
    pub fn from_params(p: &TripodParams) -> Self {
        ComplexDetunings {
            d10: Complex64::new(p.delta1, p.gamma10),
            d20: Complex64::new(p.delta2, p.gamma20),
            d30: Complex64::new(p.delta3, p.gamma30),
            d12: Complex64::new(p.delta1 - p.delta2, p.gamma12),
            d13: Complex64::new(p.delta1 - p.delta3, p.gamma13),
            d23: Complex64::new(p.delta2 - p.delta3, p.gamma23),
        }
    }

    pub fn d21(&self) -> Complex64 {
        -self.d12.conj()
    }

    pub fn d31(&self) -> Complex64 {
        -self.d13.conj()
    }

    pub fn d32(&self) -> Complex64 {
        -self.d23.conj()
    }
}

/// Eigenvalues (ascending) and matching unit eigenvectors of the Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub energies: [f64; 4],
    pub states: [Vector4<Complex64>; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DarkState {
    E1,
    E2,
}

pub fn build_hamiltonian(p: &TripodParams) -> Matrix4<Complex64> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut h = Matrix4::from_diagonal(&Vector4::new(
        re(p.delta1),
        re(0.0),
        re(p.delta1 - p.delta2),
        re(p.delta1 - p.delta3),
    ));
    for (level, omega) in [(1, p.omega_p), (2, p.omega_c), (3, p.omega_t)] {
        h[(0, level)] = re(omega);
        h[(level, 0)] = re(omega);
    }
    h
}

/// Closed-form dark state, defined whenever `omega_p^2 + omega_t^2 > 0`.
///
/// `e1 = (omega_t |1> - omega_p |3>) / sqrt(omega_p^2 + omega_t^2)` and
/// `e2 = (omega_c omega_p |1> + omega_c omega_t |3> - (omega_p^2 + omega_t^2) |2>)`
/// normalized by `sqrt((omega_p^2 + omega_t^2)(omega_p^2 + omega_c^2 + omega_t^2))`.
/// Both have no `|0>` component and are eigenstates at equal detunings.
pub fn dark_state_vector(p: &TripodParams, which: DarkState) -> Result<Vector4<Complex64>> {
    let weak = p.omega_p * p.omega_p + p.omega_t * p.omega_t;
    if weak <= 0.0 {
        return Err(Error::DegenerateInput);
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let v = match which {
        DarkState::E1 => {
            let norm = weak.sqrt();
            Vector4::new(
                re(0.0),
                re(p.omega_t / norm),
                re(0.0),
                re(-p.omega_p / norm),
            )
        }
        DarkState::E2 => {
            let norm = (weak * (weak + p.omega_c * p.omega_c)).sqrt();
            Vector4::new(
                re(0.0),
                re(p.omega_c * p.omega_p / norm),
                re(-weak / norm),
                re(p.omega_c * p.omega_t / norm),
            )
        }
    };
    Ok(v)
}

const DEGENERACY_TOL: f64 = 1e-9;
const EQUAL_DETUNING_TOL: f64 = 1e-12;

pub fn dressed_states(p: &TripodParams) -> EigenSystem {
    let h = build_hamiltonian(p);
    let eig = h.symmetric_eigen();

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut energies = [0.0; 4];
    let mut states = [Vector4::zeros(); 4];
    for (slot, &k) in order.iter().enumerate() {
        energies[slot] = eig.eigenvalues[k];
        states[slot] = eig.eigenvectors.column(k).into_owned();
    }

    let equal = (p.delta1 - p.delta2).abs() <= EQUAL_DETUNING_TOL
        && (p.delta1 - p.delta3).abs() <= EQUAL_DETUNING_TOL;
    if equal {
        if let (Ok(e1), Ok(e2)) = (
            dark_state_vector(p, DarkState::E1),
            dark_state_vector(p, DarkState::E2),
        ) {
            // Dark pair sits at zero energy in this frame; take the two
            // eigenvalues closest to it.
            let mut by_distance = [0usize, 1, 2, 3];
            by_distance.sort_by(|&a, &b| energies[a].abs().total_cmp(&energies[b].abs()));
            let (mut first, mut second) = (by_distance[0], by_distance[1]);
            if first > second {
                std::mem::swap(&mut first, &mut second);
            }
            states[first] = e1;
            states[second] = e2;
        }
    }

    orthonormalize_clusters(&energies, &mut states);
    EigenSystem { energies, states }
}

fn orthonormalize_clusters(energies: &[f64; 4], states: &mut [Vector4<Complex64>; 4]) {
    for i in 0..4 {
        for j in 0..i {
            if (energies[i] - energies[j]).abs() < DEGENERACY_TOL {
                let overlap = states[j].dotc(&states[i]);
                let prev = states[j];
                states[i] -= prev * overlap;
            }
        }
        let norm = states[i].norm();
        if norm > 0.0 {
            states[i] /= Complex64::new(norm, 0.0);
        }
    }
}
