use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tripod_core::bloch::residual;
use tripod_core::{
    sensitivity, solve_for_pi, steady_state, sweep, truth_table, FreeParameter, OperatingPoint,
    SensitivityReport, SweepTable, CONVENTION_ID,
};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<tripod_core::Complex64> for Complex {
    fn from(z: tripod_core::Complex64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coherence {
    pub i: usize,
    pub j: usize,
    pub value: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateReport {
    pub populations: [f64; 4],
    /// Upper-triangle elements `rho_ij`, `i < j`.
    pub coherences: Vec<Coherence>,
    /// `rho_10 / omega_p`, 1/gamma; absent when the probe is off.
    pub rho10_over_omega_p: Option<Complex>,
    /// `rho_30 / omega_t`, 1/gamma; absent when the trigger is off.
    pub rho30_over_omega_t: Option<Complex>,
    /// Norm of `L rho`.
    pub residual: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub free: FreeParameter,
    pub target: f64,
    /// Solved length (m) or density (m^-3).
    pub value: f64,
    /// `|phi - target|` from an independent re-evaluation at the solution, rad.
    pub recheck_abs_error: f64,
    pub point: OperatingPoint,
}

/// What a command produced: the machine-readable document and an optional
/// note for stderr.
pub enum Output {
    Table(SweepTable),
    Report(serde_json::Value),
}

pub struct Outcome {
    pub output: Output,
    pub summary: Option<String>,
}

fn report<T: Serialize>(value: &T, summary: Option<String>) -> anyhow::Result<Outcome> {
    Ok(Outcome {
        output: Output::Report(serde_json::to_value(value)?),
        summary,
    })
}

pub fn steady(config: &RunConfig) -> anyhow::Result<Outcome> {
    let p = config.params()?;
    let rho = steady_state(&p)?;
    let mut coherences = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            coherences.push(Coherence {
                i,
                j,
                value: rho.get(i, j).into(),
            });
        }
    }
    let ratio = |level, omega: f64| (omega != 0.0).then(|| (rho.get(level, 0) / omega).into());
    let r = SteadyStateReport {
        populations: rho.populations(),
        coherences,
        rho10_over_omega_p: ratio(1, p.omega_p),
        rho30_over_omega_t: ratio(3, p.omega_t),
        residual: residual(&p, &rho),
        min_eigenvalue: rho.min_eigenvalue(),
    };
    report(&r, None)
}

pub fn sweep_table(config: &RunConfig) -> anyhow::Result<Outcome> {
    let (base, spec) = config.sweep()?;
    let table = sweep(&base, &spec)?;
    let mut notes = String::new();
    for row in &table.rows {
        for e in &row.errors {
            let _ = writeln!(notes, "{} = {:e}: {e}", spec.axis, row.x);
        }
    }
    Ok(Outcome {
        output: Output::Table(table),
        summary: (!notes.is_empty()).then_some(notes),
    })
}

fn gate_summary(point: &OperatingPoint) -> String {
    let r = &point.report;
    let mut s = String::new();
    let _ = writeln!(s, "convention        {}", r.convention);
    let _ = writeln!(
        s,
        "phi_conditional   {:.6e} rad = {:.6} pi",
        r.phi_conditional, r.phi_conditional_over_pi
    );
    let _ = writeln!(
        s,
        "phi_nlin p / t    {:.6e} / {:.6e} rad",
        r.phi_nlin_p, r.phi_nlin_t
    );
    let inv = |x: f64| {
        if x == 0.0 {
            "0".to_string()
        } else {
            format!("1/{:.2}", 1.0 / x)
        }
    };
    let _ = writeln!(
        s,
        "ratio p / t       {} / {}",
        inv(r.ratio_p),
        inv(r.ratio_t)
    );
    let _ = writeln!(s, "walk-off p / t    {:.4e} / {:.4e}", r.zeta_p, r.zeta_t);
    let _ = writeln!(s, "v_g p / t         {:.4e} / {:.4e} m/s", r.vg_p, r.vg_t);
    let _ = writeln!(
        s,
        "transmission p/t  {:.4e} / {:.4e}",
        r.transmission_p, r.transmission_t
    );
    for row in &r.rows {
        let _ = writeln!(
            s,
            "row {:?} {:?}  excess {:.6e} rad",
            row.probe, row.trigger, row.excess
        );
    }
    s
}

pub fn gate(config: &RunConfig) -> anyhow::Result<Outcome> {
    let p = config.params()?;
    let m = config.require_medium()?;
    let pulses = config.require_pulses(&p, &m)?;
    let point = OperatingPoint::evaluate(p, m, pulses)?;
    report(&point, Some(gate_summary(&point)))
}

pub fn solve(config: &RunConfig) -> anyhow::Result<Outcome> {
    let p = config.params()?;
    let m = config.require_medium()?;
    let pulses = config.pulses(&p, &m)?;
    let fixed = match &config.pulses {
        Some(s) if !s.fit_to_medium => pulses,
        _ => None,
    };
    let s = config.solve();
    let target = s.target_over_pi * PI;
    let point = solve_for_pi(&p, &m, fixed, s.free, target)?;
    let check = truth_table(&point.params, &point.medium, &point.pulses)?;
    let value = match s.free {
        FreeParameter::Length => point.medium.length,
        FreeParameter::Density => point.medium.density,
    };
    let r = SolveReport {
        free: s.free,
        target,
        value,
        recheck_abs_error: (check.phi_conditional - target).abs(),
        point,
    };
    let summary = format!(
        "{:?} = {:.6e}, phi = {:.9} pi, |phi - target| = {:.1e} rad\n",
        r.free, r.value, r.point.report.phi_conditional_over_pi, r.recheck_abs_error
    );
    report(&r, Some(summary))
}

pub fn sensitivity_report(config: &RunConfig) -> anyhow::Result<Outcome> {
    let p = config.params()?;
    let m = config.require_medium()?;
    let pulses = config.require_pulses(&p, &m)?;
    let (perturbation, magnitude) = config.perturbation()?;
    let point = OperatingPoint::evaluate(p, m, pulses)?;
    let r: SensitivityReport = sensitivity(&point, perturbation, magnitude)?;
    let summary = format!(
        "conditional phase {:.4}%, interacting row {:.4}%\n",
        100.0 * r.conditional,
        100.0 * r.row
    );
    report(&r, Some(summary))
}

/// `key,value` lines for a JSON document, keys joined with `.`.
pub fn flatten_csv(value: &serde_json::Value) -> String {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut String) {
        use serde_json::Value;
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, v)| walk(&key(k), v, out)),
            Value::Array(items) => items
                .iter()
                .enumerate()
                .for_each(|(i, v)| walk(&key(&i.to_string()), v, out)),
            Value::Number(n) => match n.as_f64() {
                Some(x) if n.is_f64() => {
                    let _ = writeln!(out, "{prefix},{x:.16e}");
                }
                _ => {
                    let _ = writeln!(out, "{prefix},{n}");
                }
            },
            Value::String(s) => {
                let _ = writeln!(out, "{prefix},{s}");
            }
            Value::Bool(b) => {
                let _ = writeln!(out, "{prefix},{b}");
            }
            Value::Null => {
                let _ = writeln!(out, "{prefix},");
            }
        }
    }
    let mut out = String::from("key,value\n");
    walk("", value, &mut out);
    out
}

pub fn convention() -> &'static str {
    CONVENTION_ID
}
