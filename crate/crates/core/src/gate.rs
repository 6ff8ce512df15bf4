//! Linear and cross-phase shifts of co-propagating Gaussian probe and trigger
//! pulses, and the polarization phase-gate truth table.
//!
//! Refraction follows `n = 1 + 2 pi chi`, so a beam crossing length `l`
//! picks up `k l (1 + 2 pi Re chi)`. With `n = 1 + chi/2` instead, every
//! susceptibility-driven phase would shrink by `4 pi`; [`CONVENTION_ID`] tags
//! reports with the convention in use.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::{Leg, TripodParams};
use crate::response::{
    check_regularized, chi1, chi3, div, group_velocity, group_velocity_approx, linear_kernels,
    to_physical, MediumSpec,
};

/// Identifies the refraction and pulse-overlap formulas behind every phase.
pub const CONVENTION_ID: &str = "gaussian-2pi-refraction/v1";

/// Pulse durations, s. Peak Rabi frequencies live in [`TripodParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub tau_p: f64,
    pub tau_t: f64,
}

impl PulseSpec {
    pub fn new(tau_p: f64, tau_t: f64) -> Result<Self> {
        let s = PulseSpec { tau_p, tau_t };
        s.validate()?;
        Ok(s)
    }

    /// Durations for which each pulse just fills the medium, `tau = l / v_g`,
    /// with the slow-light velocity estimate.
    pub fn fitted(p: &TripodParams, m: &MediumSpec) -> Result<Self> {
        let v = |leg| {
            let v = group_velocity_approx(p, m, leg);
            if v > 0.0 {
                Ok(v)
            } else {
                Err(Error::NonpositiveVelocity { leg })
            }
        };
        PulseSpec::new(m.length / v(Leg::Probe)?, m.length / v(Leg::Trigger)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("tau_p", self.tau_p), ("tau_t", self.tau_t)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {value}"),
                });
            }
        }
        Ok(())
    }

    pub fn duration(&self, leg: Leg) -> f64 {
        match leg {
            Leg::Probe => self.tau_p,
            Leg::Trigger => self.tau_t,
        }
    }
}

/// Photon polarization. Only a `sigma_plus` probe and a `sigma_minus` trigger
/// couple to the tripod.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    SigmaPlus,
    SigmaMinus,
}

/// One input of the gate and the total phase it acquires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub probe: Polarization,
    pub trigger: Polarization,
    /// Total phase including the vacuum `k l` terms, rad.
    pub phase: f64,
    /// Phase in excess of vacuum propagation, rad.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub convention: String,
    /// Rows in the order (-,-), (-,+), (+,+), (+,-) for (probe, trigger).
    pub rows: [TruthRow; 4],
    pub phi_conditional: f64,
    pub phi_conditional_over_pi: f64,
    pub phi_vacuum_p: f64,
    pub phi_vacuum_t: f64,
    pub phi_lin_p: f64,
    pub phi_lin_t: f64,
    pub phi_nlin_p: f64,
    pub phi_nlin_t: f64,
    pub ratio_p: f64,
    pub ratio_t: f64,
    pub zeta_p: f64,
    pub zeta_t: f64,
    pub overlap_p: f64,
    pub overlap_t: f64,
    /// Slow-light velocity estimates used for walk-off, m/s.
    pub vg_p: f64,
    pub vg_t: f64,
    /// Velocities from the full linear group index, m/s, when positive.
    pub vg_index_p: Option<f64>,
    pub vg_index_t: Option<f64>,
    /// Intensity transmission `exp(-k l 2 pi |Im chi|)`. With the leading minus
    /// of the physical susceptibility an absorbing medium has `Im chi < 0`.
    pub transmission_p: f64,
    pub transmission_t: f64,
}

/// `k l 2 pi Re chi`: the susceptibility part of the linear phase.
fn linear_excess(p: &TripodParams, m: &MediumSpec, leg: Leg) -> Result<Complex64> {
    let chi = to_physical(&chi1(p, leg)?, m);
    Ok(m.wavenumber(leg) * m.length * 2.0 * PI * chi)
}

/// `k l (1 + 2 pi Re chi1)`, rad.
pub fn linear_phase(p: &TripodParams, m: &MediumSpec, leg: Leg) -> Result<f64> {
    m.validate()?;
    Ok(m.wavenumber(leg) * m.length + linear_excess(p, m, leg)?.re)
}

/// `erf(zeta) / zeta`, even in `zeta`, equal to `2/sqrt(pi)` at the origin.
pub fn overlap_factor(zeta: f64) -> f64 {
    let two_over_sqrt_pi = 2.0 / PI.sqrt();
    if zeta.abs() < 1e-6 {
        two_over_sqrt_pi * (1.0 - zeta * zeta / 3.0)
    } else {
        libm::erf(zeta) / zeta
    }
}

fn velocity(p: &TripodParams, m: &MediumSpec, leg: Leg) -> Result<f64> {
    let v = group_velocity_approx(p, m, leg);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonpositiveVelocity { leg })
    }
}

/// Signed walk-off `(1 - v_leg / v_other) sqrt(2) l / (v_leg tau_other)`.
pub fn walkoff(p: &TripodParams, m: &MediumSpec, pulses: &PulseSpec, leg: Leg) -> Result<f64> {
    m.validate()?;
    pulses.validate()?;
    let v = velocity(p, m, leg)?;
    let v_other = velocity(p, m, leg.other())?;
    Ok((1.0 - v / v_other) * 2f64.sqrt() * m.length / (v * pulses.duration(leg.other())))
}

/// Cross-phase shift imprinted on `leg` by the other pulse,
/// `k l (pi^{3/2} hbar^2 |Omega_other|^2 / 4 |mu_other|^2) (erf(zeta)/zeta) Re chi3`.
pub fn nonlinear_phase(
    p: &TripodParams,
    m: &MediumSpec,
    pulses: &PulseSpec,
    leg: Leg,
) -> Result<f64> {
    let other = leg.other();
    let rabi = p.rabi(other) * m.gamma_phys;
    if rabi == 0.0 {
        return Ok(0.0);
    }
    let chi = to_physical(&chi3(p, leg)?, m);
    if chi.re == 0.0 {
        return Ok(0.0);
    }
    let zeta = walkoff(p, m, pulses, leg)?;
    let field2 = (HBAR * rabi / m.dipole(other)).powi(2);
    Ok(m.wavenumber(leg) * m.length * PI.powf(1.5) / 4.0 * field2 * overlap_factor(zeta) * chi.re)
}

/// Ratio of nonlinear to linear phase:
///
/// ```text
/// probe:   (T^2/4) Re[(L_P - conj L_T) / d13]
/// trigger: (P^2/4) Re[(L_T - conj L_P) / d31]
/// ```
///
/// with `L_P`, `L_T` the linear kernels of [`crate::response`].
pub fn phase_ratio(p: &TripodParams, leg: Leg) -> Result<f64> {
    p.validate()?;
    let (lp, lt) = linear_kernels(p)?;
    let d = p.detunings();
    let (diff, den, other) = match leg {
        Leg::Probe => (lp - lt.conj(), d.d13, p.omega_t),
        Leg::Trigger => (lt - lp.conj(), d.d31(), p.omega_p),
    };
    if diff == Complex64::new(0.0, 0.0) || other == 0.0 {
        return Ok(0.0);
    }
    check_regularized(p)?;
    Ok(other * other / 4.0 * div(diff, den, "d13")?.re)
}

pub fn truth_table(p: &TripodParams, m: &MediumSpec, pulses: &PulseSpec) -> Result<GateReport> {
    p.validate()?;
    m.validate()?;
    pulses.validate()?;

    let vac_p = m.wavenumber(Leg::Probe) * m.length;
    let vac_t = m.wavenumber(Leg::Trigger) * m.length;
    let lin_p = linear_excess(p, m, Leg::Probe)?;
    let lin_t = linear_excess(p, m, Leg::Trigger)?;
    let nlin_p = nonlinear_phase(p, m, pulses, Leg::Probe)?;
    let nlin_t = nonlinear_phase(p, m, pulses, Leg::Trigger)?;

    use Polarization::{SigmaMinus as M, SigmaPlus as P};
    let row = |probe, trigger, excess: f64| TruthRow {
        probe,
        trigger,
        phase: vac_p + vac_t + excess,
        excess,
    };
    let rows = [
        row(M, M, lin_t.re),
        row(M, P, 0.0),
        row(P, P, lin_p.re),
        row(P, M, (lin_p.re + nlin_p) + (lin_t.re + nlin_t)),
    ];
    // The row combination (+,-) - (+,+) - (-,-) + (-,+) reduces to the two
    // cross-phase shifts; summing them directly avoids cancelling the large
    // linear phases.
    let phi_conditional = nlin_p + nlin_t;

    let zeta_p = walkoff(p, m, pulses, Leg::Probe)?;
    let zeta_t = walkoff(p, m, pulses, Leg::Trigger)?;
    Ok(GateReport {
        convention: CONVENTION_ID.to_string(),
        rows,
        phi_conditional,
        phi_conditional_over_pi: phi_conditional / PI,
        phi_vacuum_p: vac_p,
        phi_vacuum_t: vac_t,
        phi_lin_p: vac_p + lin_p.re,
        phi_lin_t: vac_t + lin_t.re,
        phi_nlin_p: nlin_p,
        phi_nlin_t: nlin_t,
        ratio_p: phase_ratio(p, Leg::Probe)?,
        ratio_t: phase_ratio(p, Leg::Trigger)?,
        zeta_p,
        zeta_t,
        overlap_p: overlap_factor(zeta_p),
        overlap_t: overlap_factor(zeta_t),
        vg_p: velocity(p, m, Leg::Probe)?,
        vg_t: velocity(p, m, Leg::Trigger)?,
        vg_index_p: group_velocity(p, m, Leg::Probe).ok(),
        vg_index_t: group_velocity(p, m, Leg::Trigger).ok(),
        transmission_p: lin_p.im.exp(),
        transmission_t: lin_t.im.exp(),
    })
}
