//! Run configuration: a TOML document with a `[system]` section and optional
//! `[medium]`, `[pulses]`, `[sweep]`, `[solve]` and `[sensitivity]` sections.
//!
//! Rates are in units of gamma; keys ending in `_si` are SI.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tripod_core::{
    Axis, DetuningTarget, FreeParameter, Leg, MediumSpec, Observable, Perturbation, PulseSpec,
    Spacing, SweepBase, SweepSpec, TripodParams,
};

pub const PRESET_DIR_VAR: &str = "TRIPOD_QPG_PRESET_DIR";

pub const PRESETS: [(&str, &str); 6] = [
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("quantum", include_str!("../presets/quantum.toml")),
    (
        "semiclassical",
        include_str!("../presets/semiclassical.toml"),
    ),
    ("kerr-free", include_str!("../presets/kerr-free.toml")),
];

/// A problem with the configuration itself: exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub medium: Option<MediumSection>,
    pub pulses: Option<PulsesSection>,
    pub sweep: Option<SweepSection>,
    pub solve: Option<SolveSection>,
    pub sensitivity: Option<SensitivitySection>,
}

/// Drive, detunings and decay rates, gamma. Unset decay rates keep the
/// library defaults; `gamma_d` sets the three ground rates at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega_p: f64,
    pub omega_t: f64,
    pub omega_c: f64,
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub delta2: f64,
    #[serde(default)]
    pub delta3: f64,
    pub gamma_d: Option<f64>,
    pub gamma10: Option<f64>,
    pub gamma20: Option<f64>,
    pub gamma30: Option<f64>,
    pub gamma11: Option<f64>,
    pub gamma22: Option<f64>,
    pub gamma33: Option<f64>,
    pub gamma12: Option<f64>,
    pub gamma13: Option<f64>,
    pub gamma23: Option<f64>,
}

/// Atomic medium. Only density and length are required; the rest default to
/// the Rb-87 D2 line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    /// m^-3
    pub density_si: f64,
    /// m
    pub length_si: f64,
    /// C m
    pub dipole_p_si: Option<f64>,
    pub dipole_t_si: Option<f64>,
    /// m
    pub lambda_p_si: Option<f64>,
    pub lambda_t_si: Option<f64>,
    /// rad/s
    pub gamma_phys_si: Option<f64>,
}

/// Either explicit durations in seconds or `fit_to_medium = true`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulsesSection {
    pub tau_p_si: Option<f64>,
    pub tau_t_si: Option<f64>,
    #[serde(default)]
    pub fit_to_medium: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    pub observables: Vec<Observable>,
    #[serde(default = "probe")]
    pub leg: Leg,
}

fn probe() -> Leg {
    Leg::Probe
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    #[serde(default = "length")]
    pub free: FreeParameter,
    /// Target conditional phase in units of pi.
    #[serde(default = "one")]
    pub target_over_pi: f64,
}

fn length() -> FreeParameter {
    FreeParameter::Length
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    PumpIntensity,
    Detuning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySection {
    pub perturbation: PerturbationKind,
    /// Fractional intensity change, or detuning shift in gamma.
    pub magnitude: f64,
    /// Which detunings move; only for `perturbation = "detuning"`.
    pub target: Option<DetuningTarget>,
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| config_error(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Looks `name` up in `$TRIPOD_QPG_PRESET_DIR` when set, else among the
    /// built-in presets.
    pub fn preset(name: &str) -> anyhow::Result<Self> {
        if let Some(dir) = std::env::var_os(PRESET_DIR_VAR) {
            let path = PathBuf::from(dir).join(format!("{name}.toml"));
            return Self::load(&path);
        }
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
                config_error(format!(
                    "unknown preset `{name}` (available: {})",
                    names.join(", ")
                ))
            })?;
        Self::parse(text, &format!("preset {name}"))
    }

    pub fn params(&self) -> anyhow::Result<TripodParams> {
        let s = &self.system;
        let mut p = TripodParams::new(
            s.omega_p,
            s.omega_t,
            s.omega_c,
            [s.delta1, s.delta2, s.delta3],
        );
        if let Some(g) = s.gamma_d {
            if s.gamma12.is_some() || s.gamma13.is_some() || s.gamma23.is_some() {
                return Err(config_error(
                    "system: `gamma_d` cannot be combined with `gamma12`, `gamma13` or `gamma23`",
                ));
            }
            p = p.with_dephasing(g);
        }
        let slots = [
            (s.gamma10, &mut p.gamma10),
            (s.gamma20, &mut p.gamma20),
            (s.gamma30, &mut p.gamma30),
            (s.gamma11, &mut p.gamma11),
            (s.gamma22, &mut p.gamma22),
            (s.gamma33, &mut p.gamma33),
            (s.gamma12, &mut p.gamma12),
            (s.gamma13, &mut p.gamma13),
            (s.gamma23, &mut p.gamma23),
        ];
        for (value, slot) in slots {
            if let Some(v) = value {
                *slot = v;
            }
        }
        p.validate()
            .map_err(|e| config_error(format!("system: {e}")))?;
        Ok(p)
    }

    pub fn medium(&self) -> anyhow::Result<Option<MediumSpec>> {
        let Some(s) = &self.medium else {
            return Ok(None);
        };
        let d = MediumSpec::rb87(s.density_si, s.length_si);
        let m = MediumSpec {
            dipole_p: s.dipole_p_si.unwrap_or(d.dipole_p),
            dipole_t: s.dipole_t_si.unwrap_or(d.dipole_t),
            lambda_p: s.lambda_p_si.unwrap_or(d.lambda_p),
            lambda_t: s.lambda_t_si.unwrap_or(d.lambda_t),
            gamma_phys: s.gamma_phys_si.unwrap_or(d.gamma_phys),
            ..d
        };
        m.validate()
            .map_err(|e| config_error(format!("medium: {e}")))?;
        Ok(Some(m))
    }

    pub fn require_medium(&self) -> anyhow::Result<MediumSpec> {
        self.medium()?
            .ok_or_else(|| config_error("missing [medium] section"))
    }

    /// `None` when the section is absent.
    pub fn pulses(&self, p: &TripodParams, m: &MediumSpec) -> anyhow::Result<Option<PulseSpec>> {
        let Some(s) = &self.pulses else {
            return Ok(None);
        };
        let spec =
            match (s.fit_to_medium, s.tau_p_si, s.tau_t_si) {
                (true, None, None) => PulseSpec::fitted(p, m)?,
                (false, Some(tp), Some(tt)) => {
                    PulseSpec::new(tp, tt).map_err(|e| config_error(format!("pulses: {e}")))?
                }
                _ => return Err(config_error(
                    "pulses: give either both `tau_p_si` and `tau_t_si` or `fit_to_medium = true`",
                )),
            };
        Ok(Some(spec))
    }

    pub fn require_pulses(&self, p: &TripodParams, m: &MediumSpec) -> anyhow::Result<PulseSpec> {
        self.pulses(p, m)?
            .ok_or_else(|| config_error("missing [pulses] section"))
    }

    /// Sweep base and spec. Medium-dependent observables use the `[pulses]`
    /// section only when it gives explicit durations.
    pub fn sweep(&self) -> anyhow::Result<(SweepBase, SweepSpec)> {
        let s = self
            .sweep
            .as_ref()
            .ok_or_else(|| config_error("missing [sweep] section"))?;
        let params = self.params()?;
        let medium = self.medium()?;
        let pulses = match (&self.pulses, medium) {
            (Some(ps), Some(m)) if !ps.fit_to_medium => self.pulses(&params, &m)?,
            _ => None,
        };
        let base = SweepBase {
            params,
            medium,
            pulses,
        };
        let spec = SweepSpec {
            axis: s.axis,
            lo: s.lo,
            hi: s.hi,
            count: s.count,
            spacing: s.spacing,
            observables: s.observables.clone(),
            leg: s.leg,
        };
        spec.validate(&base)
            .map_err(|e| config_error(format!("sweep: {e}")))?;
        Ok((base, spec))
    }

    pub fn solve(&self) -> SolveSection {
        self.solve.clone().unwrap_or(SolveSection {
            free: length(),
            target_over_pi: one(),
        })
    }

    pub fn perturbation(&self) -> anyhow::Result<(Perturbation, f64)> {
        let s = self
            .sensitivity
            .as_ref()
            .ok_or_else(|| config_error("missing [sensitivity] section"))?;
        let p = match (s.perturbation, s.target) {
            (PerturbationKind::PumpIntensity, None) => Perturbation::PumpIntensity,
            (PerturbationKind::PumpIntensity, Some(_)) => {
                return Err(config_error(
                    "sensitivity: `target` only applies to detuning perturbations",
                ))
            }
            (PerturbationKind::Detuning, t) => Perturbation::Detuning {
                target: t.unwrap_or(DetuningTarget::All),
            },
        };
        if !(s.magnitude.is_finite() && s.magnitude >= 0.0) {
            return Err(config_error(
                "sensitivity: `magnitude` must be finite and non-negative",
            ));
        }
        Ok((p, s.magnitude))
    }
}
