//! Closed-form steady-state response of the tripod with `rho11 = rho33 = 1/2`.
//!
//! Every reduced quantity is a coherence divided by the Rabi frequency of its
//! own field, `rho_10 / omega_p` or `rho_30 / omega_t`, in units of `1/gamma`.
//! The physical susceptibility carries an overall minus sign and the density
//! and dipole prefactor, both applied only in [`to_physical`].
//!
//! Shorthands used below, with `d` the complex detunings of
//! [`ComplexDetunings`]:
//!
//! ```text
//! L_P = d12 / (d10 d12 - omega_c^2)
//! L_T = d32 / (d30 d32 - omega_c^2)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{
    EPSILON_0, HBAR, RB87_D2_WAVELENGTH, RB87_DIPOLE, RB87_GAMMA, SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};
use crate::model::{ComplexDetunings, Leg, TripodParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseKind {
    Exact,
    Linear,
    Kerr,
}

/// A reduced response value. `Exact` and `Linear` are in `1/gamma`; `Kerr` is
/// the coefficient of `omega_other^2` in the expansion of `Exact`, in
/// `1/gamma^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedResponse {
    pub value: Complex64,
    pub leg: Leg,
    pub kind: ResponseKind,
}

/// Atomic medium and the physical scale of the reduced units. SI throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    /// Atomic density, m^-3.
    pub density: f64,
    /// Probe transition dipole, C m.
    pub dipole_p: f64,
    /// Trigger transition dipole, C m.
    pub dipole_t: f64,
    /// Medium length, m.
    pub length: f64,
    pub lambda_p: f64,
    pub lambda_t: f64,
    /// Physical value of the unit rate, rad/s.
    pub gamma_phys: f64,
}

impl MediumSpec {
    /// Rb-87 D2 line constants with the given density (m^-3) and length (m).
    pub fn rb87(density: f64, length: f64) -> Self {
        MediumSpec {
            density,
            dipole_p: RB87_DIPOLE,
            dipole_t: RB87_DIPOLE,
            length,
            lambda_p: RB87_D2_WAVELENGTH,
            lambda_t: RB87_D2_WAVELENGTH,
            gamma_phys: RB87_GAMMA,
        }
    }

    /// 1.6 mm of 3e13 cm^-3.
    pub fn quantum() -> Self {
        MediumSpec::rb87(3e19, 1.6e-3)
    }

    /// 0.7 cm of 3e12 cm^-3.
    pub fn semiclassical() -> Self {
        MediumSpec::rb87(3e18, 7e-3)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("density", self.density),
            ("dipole_p", self.dipole_p),
            ("dipole_t", self.dipole_t),
            ("length", self.length),
            ("lambda_p", self.lambda_p),
            ("lambda_t", self.lambda_t),
            ("gamma_phys", self.gamma_phys),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and positive, got {value}"),
                });
            }
        }
        Ok(())
    }

    pub fn dipole(&self, leg: Leg) -> f64 {
        match leg {
            Leg::Probe => self.dipole_p,
            Leg::Trigger => self.dipole_t,
        }
    }

    pub fn wavelength(&self, leg: Leg) -> f64 {
        match leg {
            Leg::Probe => self.lambda_p,
            Leg::Trigger => self.lambda_t,
        }
    }

    /// Vacuum wavenumber, rad/m.
    pub fn wavenumber(&self, leg: Leg) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength(leg)
    }

    /// Carrier angular frequency, rad/s.
    pub fn angular_frequency(&self, leg: Leg) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber(leg)
    }

    /// `N |mu|^2 / (hbar eps0 gamma)`: reduced linear response to susceptibility.
    pub fn linear_scale(&self, leg: Leg) -> f64 {
        let mu = self.dipole(leg);
        self.density * mu * mu / (HBAR * EPSILON_0 * self.gamma_phys)
    }

    /// `N |mu_P|^2 |mu_T|^2 / (hbar^3 eps0 gamma^3)`: reduced Kerr response to
    /// susceptibility per squared field amplitude, m^2/V^2.
    pub fn kerr_scale(&self) -> f64 {
        let g = self.gamma_phys;
        self.density * self.dipole_p.powi(2) * self.dipole_t.powi(2)
            / (HBAR.powi(3) * EPSILON_0 * g * g * g)
    }
}

pub(crate) fn div(num: Complex64, den: Complex64, factor: &'static str) -> Result<Complex64> {
    if num == Complex64::new(0.0, 0.0) {
        Ok(num)
    } else if den == Complex64::new(0.0, 0.0) {
        Err(Error::SingularDenominator { factor })
    } else {
        Ok(num / den)
    }
}

fn sq(x: f64) -> Complex64 {
    Complex64::new(x * x, 0.0)
}

/// `L_P` and `L_T` of the module docs.
pub(crate) fn linear_kernels(p: &TripodParams) -> Result<(Complex64, Complex64)> {
    let d = p.detunings();
    let om2 = sq(p.omega_c);
    let lp = if p.omega_c == 0.0 {
        div(Complex64::new(1.0, 0.0), d.d10, "d10")?
    } else {
        div(d.d12, d.d10 * d.d12 - om2, "d10 d12 - omega_c^2")?
    };
    let d32 = d.d32();
    let lt = if p.omega_c == 0.0 {
        div(Complex64::new(1.0, 0.0), d.d30, "d30")?
    } else {
        div(d32, d.d30 * d32 - om2, "d30 d32 - omega_c^2")?
    };
    Ok((lp, lt))
}

/// Exact pinned-population response with the `rho_02` coherence neglected.
///
/// Solves the coupled equations for `x = rho_10` and `y = rho_03`:
///
/// ```text
/// (-d10 + W^2/d12 + T^2/d13) x - (P T/d13) y = P/2
/// (P T/d13) x + (-conj d30 + W^2/conj d32 - P^2/d13) y = T/2
/// ```
///
/// with `P`, `T`, `W` the probe, trigger and pump Rabi frequencies, and
/// returns `x/P` (probe) or `conj(y)/T` (trigger). Only ratios are formed, so
/// a vanishing own field is allowed.
pub fn exact_response(p: &TripodParams, leg: Leg) -> Result<ReducedResponse> {
    p.validate()?;
    let d = p.detunings();
    let zero = Complex64::new(0.0, 0.0);
    let wrap = |value| ReducedResponse {
        value,
        leg,
        kind: ResponseKind::Exact,
    };
    if d.d12 == zero && d.d13 == zero && d.d23 == zero {
        // Perfect dark resonance: no optical coherence survives.
        return Ok(wrap(zero));
    }

    let (op, ot, oc) = (p.omega_p, p.omega_t, p.omega_c);
    let a11 = -d.d10 + div(sq(oc), d.d12, "d12")? + div(sq(ot), d.d13, "d13")?;
    let cross = div(Complex64::new(op * ot, 0.0), d.d13, "d13")?;
    let a22 = -d.d30.conj() + div(sq(oc), d.d32().conj(), "d32")? - div(sq(op), d.d13, "d13")?;
    let det = a11 * a22 + cross * cross;
    let pump_t = div(sq(ot), d.d13, "d13")?;
    let pump_p = div(sq(op), d.d13, "d13")?;

    let value = match leg {
        Leg::Probe => div(a22 + pump_t, 2.0 * det, "pinned-population determinant")?,
        Leg::Trigger => div(a11 - pump_p, 2.0 * det, "pinned-population determinant")?.conj(),
    };
    Ok(wrap(value))
}

/// Linear response, `-L_P/2` (probe) or `-L_T/2` (trigger).
pub fn chi1(p: &TripodParams, leg: Leg) -> Result<ReducedResponse> {
    p.validate()?;
    let (lp, lt) = linear_kernels(p)?;
    let l = match leg {
        Leg::Probe => lp,
        Leg::Trigger => lt,
    };
    Ok(ReducedResponse {
        value: -0.5 * l,
        leg,
        kind: ResponseKind::Linear,
    })
}

pub(crate) fn check_regularized(p: &TripodParams) -> Result<()> {
    if p.gamma13 == 0.0 && (p.delta1 - p.delta3).abs() < 1e-12 {
        return Err(Error::RegularizationRequired);
    }
    Ok(())
}

/// Cross-Kerr response: the `omega_t^2` (probe) or `omega_p^2` (trigger)
/// coefficient of [`exact_response`].
///
/// ```text
/// probe:   -(1/2) (L_P / d13) (L_P - conj L_T)
/// trigger: -(1/2) (L_T / d31) (L_T - conj L_P)
/// ```
pub fn chi3(p: &TripodParams, leg: Leg) -> Result<ReducedResponse> {
    p.validate()?;
    let (lp, lt) = linear_kernels(p)?;
    let d = p.detunings();
    let zero = Complex64::new(0.0, 0.0);
    let value = match leg {
        Leg::Probe => {
            if lp == zero {
                zero
            } else {
                check_regularized(p)?;
                -0.5 * div(lp * (lp - lt.conj()), d.d13, "d13")?
            }
        }
        Leg::Trigger => {
            if lt == zero {
                zero
            } else {
                check_regularized(p)?;
                -0.5 * div(lt * (lt - lp.conj()), d.d31(), "d31")?
            }
        }
    };
    Ok(ReducedResponse {
        value,
        leg,
        kind: ResponseKind::Kerr,
    })
}

/// Dimensionless susceptibility from a reduced response. Kerr values come out
/// per squared field amplitude of the other beam (m^2/V^2).
pub fn to_physical(r: &ReducedResponse, m: &MediumSpec) -> Complex64 {
    let scale = match r.kind {
        ResponseKind::Exact | ResponseKind::Linear => m.linear_scale(r.leg),
        ResponseKind::Kerr => m.kerr_scale(),
    };
    -scale * r.value
}

/// `d chi1 / d delta_leg` in reduced units.
pub(crate) fn chi1_detuning_derivative(p: &TripodParams, leg: Leg) -> Result<Complex64> {
    let d: ComplexDetunings = p.detunings();
    let (dj0, dg) = match leg {
        Leg::Probe => (d.d10, d.d12),
        Leg::Trigger => (d.d30, d.d32()),
    };
    if p.omega_c == 0.0 {
        return div(Complex64::new(0.5, 0.0), dj0 * dj0, "d_j0");
    }
    let om2 = sq(p.omega_c);
    let den = dj0 * dg - om2;
    div(0.5 * (om2 + dg * dg), den * den, "d_j0 d_g - omega_c^2")
}

/// Group index from the linear susceptibility,
/// `Re chi / 2 + (omega / 2) d Re chi / d omega`, with the laser-frequency
/// derivative taken as `-(1/gamma) d/d delta`.
pub fn group_index(p: &TripodParams, m: &MediumSpec, leg: Leg) -> Result<f64> {
    m.validate()?;
    let f = chi1(p, leg)?.value;
    let df = chi1_detuning_derivative(p, leg)?;
    let scale = m.linear_scale(leg);
    let omega = m.angular_frequency(leg);
    Ok(-scale * f.re / 2.0 + omega * scale * df.re / (2.0 * m.gamma_phys))
}

/// `c / (1 + n_g)`, m/s.
pub fn group_velocity(p: &TripodParams, m: &MediumSpec, leg: Leg) -> Result<f64> {
    let n = group_index(p, m, leg)?;
    if 1.0 + n <= 0.0 {
        return Err(Error::NonpositiveVelocity { leg });
    }
    Ok(SPEED_OF_LIGHT / (1.0 + n))
}

/// Slow-light estimate at equal detunings,
/// `4 hbar c eps0 gamma^2 (omega_c^2 + omega_other^2) / (omega_leg N |mu_leg|^2)`.
pub fn group_velocity_approx(p: &TripodParams, m: &MediumSpec, leg: Leg) -> f64 {
    let other = p.rabi(leg.other());
    let g = m.gamma_phys;
    let mu = m.dipole(leg);
    4.0 * HBAR * SPEED_OF_LIGHT * EPSILON_0 * g * g * (p.omega_c.powi(2) + other * other)
        / (m.angular_frequency(leg) * m.density * mu * mu)
}
