//! Parameter sweeps, conditional-phase targeting and perturbation
//! sensitivity.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::steady_state;
use crate::error::{Error, Result};
use crate::gate::{phase_ratio, truth_table, GateReport, PulseSpec};
use crate::model::{Leg, TripodParams};
use crate::response::{
    chi1, chi3, exact_response, group_index, group_velocity, to_physical, MediumSpec,
};

/// A scalar knob of the model or the medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Axis {
    Delta1,
    Delta2,
    Delta3,
    OmegaP,
    OmegaT,
    OmegaC,
    Gamma10,
    Gamma20,
    Gamma30,
    Gamma11,
    Gamma22,
    Gamma33,
    Gamma12,
    Gamma13,
    Gamma23,
    /// All three ground rates at once.
    GammaD,
    Density,
    Length,
}

const AXES: [(Axis, &str); 18] = [
    (Axis::Delta1, "delta1"),
    (Axis::Delta2, "delta2"),
    (Axis::Delta3, "delta3"),
    (Axis::OmegaP, "omega_p"),
    (Axis::OmegaT, "omega_t"),
    (Axis::OmegaC, "omega_c"),
    (Axis::Gamma10, "gamma10"),
    (Axis::Gamma20, "gamma20"),
    (Axis::Gamma30, "gamma30"),
    (Axis::Gamma11, "gamma11"),
    (Axis::Gamma22, "gamma22"),
    (Axis::Gamma33, "gamma33"),
    (Axis::Gamma12, "gamma12"),
    (Axis::Gamma13, "gamma13"),
    (Axis::Gamma23, "gamma23"),
    (Axis::GammaD, "gamma_d"),
    (Axis::Density, "density"),
    (Axis::Length, "length"),
];

impl Axis {
    pub fn name(self) -> &'static str {
        AXES.iter()
            .find(|(a, _)| *a == self)
            .map(|(_, n)| *n)
            .unwrap_or("?")
    }

    pub fn unit(self) -> &'static str {
        match self {
            Axis::Density => "m^-3",
            Axis::Length => "m",
            _ => "gamma",
        }
    }

    pub fn needs_medium(self) -> bool {
        matches!(self, Axis::Density | Axis::Length)
    }

    /// Writes `value` into the point. Medium axes require a medium.
    pub fn apply(self, base: &SweepBase, value: f64) -> Result<SweepBase> {
        let mut out = *base;
        let p = &mut out.params;
        match self {
            Axis::Delta1 => p.delta1 = value,
            Axis::Delta2 => p.delta2 = value,
            Axis::Delta3 => p.delta3 = value,
            Axis::OmegaP => p.omega_p = value,
            Axis::OmegaT => p.omega_t = value,
            Axis::OmegaC => p.omega_c = value,
            Axis::Gamma10 => p.gamma10 = value,
            Axis::Gamma20 => p.gamma20 = value,
            Axis::Gamma30 => p.gamma30 = value,
            Axis::Gamma11 => p.gamma11 = value,
            Axis::Gamma22 => p.gamma22 = value,
            Axis::Gamma33 => p.gamma33 = value,
            Axis::Gamma12 => p.gamma12 = value,
            Axis::Gamma13 => p.gamma13 = value,
            Axis::Gamma23 => p.gamma23 = value,
            Axis::GammaD => *p = p.with_dephasing(value),
            Axis::Density | Axis::Length => {
                let m = out.medium.as_mut().ok_or_else(|| {
                    Error::InvalidSweep(format!("axis `{}` needs a medium", self.name()))
                })?;
                if self == Axis::Density {
                    m.density = value;
                } else {
                    m.length = value;
                }
            }
        }
        Ok(out)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AXES.iter()
            .find(|(_, n)| *n == s)
            .map(|(a, _)| *a)
            .ok_or_else(|| Error::InvalidAxis(s.to_string()))
    }
}

impl TryFrom<String> for Axis {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Axis> for String {
    fn from(a: Axis) -> String {
        a.name().to_string()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Pinned-population response of the sweep leg.
    ReChi,
    ImChi,
    /// Linear response of the sweep leg.
    ReChi1,
    ImChi1,
    /// Cross-Kerr response; two columns.
    Chi3,
    NG,
    VG,
    PhiConditional,
    Ratio,
    /// Bloch steady-state populations; four columns.
    Populations,
}

impl Observable {
    fn needs_medium(self) -> bool {
        matches!(
            self,
            Observable::NG | Observable::VG | Observable::PhiConditional
        )
    }

    fn headers(self, physical: bool) -> Vec<String> {
        let chi_unit = if physical { "1" } else { "1/gamma" };
        let kerr_unit = if physical { "m^2/V^2" } else { "1/gamma^3" };
        match self {
            Observable::ReChi => vec![format!("re_chi [{chi_unit}]")],
            Observable::ImChi => vec![format!("im_chi [{chi_unit}]")],
            Observable::ReChi1 => vec![format!("re_chi1 [{chi_unit}]")],
            Observable::ImChi1 => vec![format!("im_chi1 [{chi_unit}]")],
            Observable::Chi3 => {
                vec![
                    format!("re_chi3 [{kerr_unit}]"),
                    format!("im_chi3 [{kerr_unit}]"),
                ]
            }
            Observable::NG => vec!["n_g [1]".into()],
            Observable::VG => vec!["v_g [m/s]".into()],
            Observable::PhiConditional => vec!["phi_conditional [rad]".into()],
            Observable::Ratio => vec!["ratio [1]".into()],
            Observable::Populations => (0..4).map(|k| format!("rho{k}{k} [1]")).collect(),
        }
    }

    fn evaluate(self, point: &SweepBase, leg: Leg) -> Result<Vec<f64>> {
        let p = &point.params;
        let phys = |r| match &point.medium {
            Some(m) => to_physical(&r, m),
            None => r.value,
        };
        let medium = || {
            point
                .medium
                .ok_or_else(|| Error::InvalidSweep("observable needs a medium".into()))
        };
        Ok(match self {
            Observable::ReChi => vec![phys(exact_response(p, leg)?).re],
            Observable::ImChi => vec![phys(exact_response(p, leg)?).im],
            Observable::ReChi1 => vec![phys(chi1(p, leg)?).re],
            Observable::ImChi1 => vec![phys(chi1(p, leg)?).im],
            Observable::Chi3 => {
                let v = phys(chi3(p, leg)?);
                vec![v.re, v.im]
            }
            Observable::NG => vec![group_index(p, &medium()?, leg)?],
            Observable::VG => vec![group_velocity(p, &medium()?, leg)?],
            Observable::PhiConditional => {
                let m = medium()?;
                let pulses = match point.pulses {
                    Some(s) => s,
                    None => PulseSpec::fitted(p, &m)?,
                };
                vec![truth_table(p, &m, &pulses)?.phi_conditional]
            }
            Observable::Ratio => vec![phase_ratio(p, leg)?],
            Observable::Populations => steady_state(p)?.populations().to_vec(),
        })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::ReChi => "re_chi",
            Observable::ImChi => "im_chi",
            Observable::ReChi1 => "re_chi1",
            Observable::ImChi1 => "im_chi1",
            Observable::Chi3 => "chi3",
            Observable::NG => "n_g",
            Observable::VG => "v_g",
            Observable::PhiConditional => "phi_conditional",
            Observable::Ratio => "ratio",
            Observable::Populations => "populations",
        })
    }
}

/// Inputs shared by every grid point. Without pulses, each point uses
/// [`PulseSpec::fitted`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepBase {
    pub params: TripodParams,
    pub medium: Option<MediumSpec>,
    pub pulses: Option<PulseSpec>,
}

impl SweepBase {
    pub fn reduced(params: TripodParams) -> Self {
        SweepBase {
            params,
            medium: None,
            pulses: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    pub observables: Vec<Observable>,
    #[serde(default = "default_leg")]
    pub leg: Leg,
}

fn default_leg() -> Leg {
    Leg::Probe
}

impl SweepSpec {
    pub fn validate(&self, base: &SweepBase) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::InvalidSweep(format!(
                "range [{}, {}] must be finite with lo <= hi",
                self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidSweep(format!(
                "count must be at least 2, got {}",
                self.count
            )));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(Error::InvalidSweep("log spacing needs lo > 0".into()));
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidSweep("no observables requested".into()));
        }
        if base.medium.is_none() {
            if self.axis.needs_medium() {
                return Err(Error::InvalidSweep(format!(
                    "axis `{}` needs a medium",
                    self.axis
                )));
            }
            if let Some(o) = self.observables.iter().find(|o| o.needs_medium()) {
                return Err(Error::InvalidSweep(format!(
                    "observable `{o}` needs a medium"
                )));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == n - 1 {
                    return self.hi;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.lo + t * (self.hi - self.lo),
                    Spacing::Log => (self.lo.ln() + t * (self.hi.ln() - self.lo.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    /// One entry per column; `None` where the point failed.
    pub values: Vec<Option<f64>>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub headers: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Comma-separated text with a header line and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{:.16e}", row.x));
            for v in &row.values {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format!("{v:.16e}"));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn column(&self, index: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.values[index]).collect()
    }
}

pub fn sweep(base: &SweepBase, spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate(base)?;
    let physical = base.medium.is_some();
    let mut headers = vec![format!("{} [{}]", spec.axis, spec.axis.unit())];
    let widths: Vec<usize> = spec
        .observables
        .iter()
        .map(|o| {
            let h = o.headers(physical);
            let w = h.len();
            headers.extend(h);
            w
        })
        .collect();

    let rows = spec
        .grid()
        .into_par_iter()
        .map(|x| {
            let mut values = Vec::with_capacity(headers.len() - 1);
            let mut errors = Vec::new();
            let point = spec.axis.apply(base, x);
            for (o, &w) in spec.observables.iter().zip(&widths) {
                match point
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|pt| o.evaluate(pt, spec.leg))
                {
                    Ok(v) => values.extend(v.into_iter().map(Some)),
                    Err(e) => {
                        values.extend(std::iter::repeat(None).take(w));
                        errors.push(format!("{o}: {e}"));
                    }
                }
            }
            SweepRow { x, values, errors }
        })
        .collect();
    Ok(SweepTable { headers, rows })
}

/// A fully specified gate configuration and its evaluated report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub params: TripodParams,
    pub medium: MediumSpec,
    pub pulses: PulseSpec,
    pub report: GateReport,
}

impl OperatingPoint {
    pub fn evaluate(params: TripodParams, medium: MediumSpec, pulses: PulseSpec) -> Result<Self> {
        let report = truth_table(&params, &medium, &pulses)?;
        Ok(OperatingPoint {
            params,
            medium,
            pulses,
            report,
        })
    }

    pub fn phi(&self) -> f64 {
        self.report.phi_conditional
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeParameter {
    Length,
    Density,
}

impl FreeParameter {
    fn get(self, m: &MediumSpec) -> f64 {
        match self {
            FreeParameter::Length => m.length,
            FreeParameter::Density => m.density,
        }
    }

    fn set(self, m: &MediumSpec, value: f64) -> MediumSpec {
        let mut out = *m;
        match self {
            FreeParameter::Length => out.length = value,
            FreeParameter::Density => out.density = value,
        }
        out
    }
}

const SOLVE_TOL: f64 = 1e-6;
const BISECTION_ITERATIONS: usize = 80;
const BRACKET_DOUBLINGS: usize = 60;

/// Rescales the medium length or density so the conditional phase hits
/// `target`. `pulses = None` uses fitted pulses at every trial point, which
/// keeps the walk-off fixed and the phase exactly proportional to `N l`.
pub fn solve_for_pi(
    params: &TripodParams,
    medium: &MediumSpec,
    pulses: Option<PulseSpec>,
    free: FreeParameter,
    target: f64,
) -> Result<OperatingPoint> {
    let eval = |x: f64| -> Result<OperatingPoint> {
        let m = free.set(medium, x);
        let s = match pulses {
            Some(s) => s,
            None => PulseSpec::fitted(params, &m)?,
        };
        OperatingPoint::evaluate(*params, m, s)
    };
    let x0 = free.get(medium);
    let base = eval(x0)?;
    let phi0 = base.phi();
    if phi0 == 0.0 || !phi0.is_finite() || phi0.signum() != target.signum() {
        return Err(Error::NoSolution(format!(
            "conditional phase {phi0} rad cannot be scaled to {target} rad"
        )));
    }

    let matched = base.report.zeta_p == 0.0 && base.report.zeta_t == 0.0;
    if pulses.is_none() || matched {
        let point = eval(x0 * target / phi0)?;
        if (point.phi() - target).abs() <= SOLVE_TOL {
            return Ok(point);
        }
    }

    // g < 0 means the phase still falls short of the target; g(0) < 0
    // because the phase vanishes with the column density.
    let s = target.signum();
    let g = |pt: &OperatingPoint| s * (pt.phi() - target);
    let mut x = x0;
    let mut gx = g(&base);
    let (mut lo, mut hi) = if gx < 0.0 {
        let mut found = None;
        for _ in 0..BRACKET_DOUBLINGS {
            let next = 2.0 * x;
            let gn = g(&eval(next)?);
            if gn >= 0.0 {
                found = Some((x, next));
                break;
            }
            x = next;
            gx = gn;
        }
        found.ok_or_else(|| {
            Error::NoSolution(format!(
                "phase saturates below {target} rad (last {gx:+e} rad short of the target)"
            ))
        })?
    } else {
        let mut found = None;
        for _ in 0..BRACKET_DOUBLINGS {
            let next = 0.5 * x;
            if g(&eval(next)?) < 0.0 {
                found = Some((next, x));
                break;
            }
            x = next;
        }
        found.ok_or_else(|| Error::NoSolution(format!("no bracket for target {target} rad")))?
    };

    let mut best = base;
    for _ in 0..BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let pt = eval(mid)?;
        let gm = g(&pt);
        best = pt;
        if gm.abs() <= SOLVE_TOL {
            return Ok(best);
        }
        if gm >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if g(&best).abs() <= SOLVE_TOL {
        Ok(best)
    } else {
        Err(Error::NoSolution(format!(
            "bisection stalled at phase {} rad",
            best.phi()
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningTarget {
    All,
    Delta1,
    Delta2,
    Delta3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    /// Pump intensity scaled by `1 +- magnitude`.
    PumpIntensity,
    /// Detunings shifted by `+- magnitude` gamma.
    Detuning { target: DetuningTarget },
}

impl Perturbation {
    fn apply(self, p: &TripodParams, signed: f64) -> TripodParams {
        let mut out = *p;
        match self {
            Perturbation::PumpIntensity => out.omega_c = p.omega_c * (1.0 + signed).sqrt(),
            Perturbation::Detuning { target } => {
                let (a, b, c) = match target {
                    DetuningTarget::All => (true, true, true),
                    DetuningTarget::Delta1 => (true, false, false),
                    DetuningTarget::Delta2 => (false, true, false),
                    DetuningTarget::Delta3 => (false, false, true),
                };
                if a {
                    out.delta1 += signed;
                }
                if b {
                    out.delta2 += signed;
                }
                if c {
                    out.delta3 += signed;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub perturbation: Perturbation,
    pub magnitude: f64,
    pub phi_base: f64,
    /// Conditional phases under `+magnitude` and `-magnitude`.
    pub phi_plus: f64,
    pub phi_minus: f64,
    /// `max |delta phi| / |phi|` of the conditional phase.
    pub conditional: f64,
    /// Same measure on the excess phase of the interacting (+, -) row.
    pub row: f64,
}

/// Fractional change of the conditional phase under a `+-magnitude`
/// perturbation, keeping medium and pulses fixed.
pub fn sensitivity(
    point: &OperatingPoint,
    perturbation: Perturbation,
    magnitude: f64,
) -> Result<SensitivityReport> {
    if !(magnitude.is_finite() && magnitude >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "magnitude",
            reason: format!("must be finite and non-negative, got {magnitude}"),
        });
    }
    let base = &point.report;
    let row_base = base.rows[3].excess;
    let run = |s: f64| {
        truth_table(
            &perturbation.apply(&point.params, s),
            &point.medium,
            &point.pulses,
        )
    };
    let plus = run(magnitude)?;
    let minus = run(-magnitude)?;
    let frac = |a: f64, b: f64, base: f64| (a - base).abs().max((b - base).abs()) / base.abs();
    Ok(SensitivityReport {
        perturbation,
        magnitude,
        phi_base: base.phi_conditional,
        phi_plus: plus.phi_conditional,
        phi_minus: minus.phi_conditional,
        conditional: frac(
            plus.phi_conditional,
            minus.phi_conditional,
            base.phi_conditional,
        ),
        row: frac(plus.rows[3].excess, minus.rows[3].excess, row_base),
    })
}
