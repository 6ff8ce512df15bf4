use std::f64::consts::PI;

use approx::assert_relative_eq;
use tripod_core::{
    exact_response, sensitivity, solve_for_pi, sweep, Axis, DetuningTarget, Error, FreeParameter,
    Leg, MediumSpec, Observable, OperatingPoint, Perturbation, PulseSpec, Spacing, SweepBase,
    SweepSpec, TripodParams,
};

fn fitted(p: TripodParams, m: MediumSpec) -> OperatingPoint {
    OperatingPoint::evaluate(p, m, PulseSpec::fitted(&p, &m).unwrap()).unwrap()
}

fn spec(axis: Axis, lo: f64, hi: f64, observables: Vec<Observable>) -> SweepSpec {
    SweepSpec {
        axis,
        lo,
        hi,
        count: 41,
        spacing: Spacing::Linear,
        observables,
        leg: Leg::Probe,
    }
}

#[test]
fn sweeps_are_deterministic_and_match_direct_evaluation() {
    let base = SweepBase::reduced(TripodParams::new(0.1, 0.1, 1.0, [0.1; 3]).with_dephasing(1e-3));
    let s = spec(
        Axis::Delta1,
        -2.0,
        2.0,
        vec![Observable::ReChi, Observable::ImChi, Observable::Chi3],
    );
    let a = sweep(&base, &s).unwrap();
    let b = sweep(&base, &s).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.headers.len(), 5);
    for row in &a.rows {
        let p = TripodParams {
            delta1: row.x,
            ..base.params
        };
        let v = exact_response(&p, Leg::Probe).unwrap().value;
        assert_eq!(row.values[0], Some(v.re));
        assert_eq!(row.values[1], Some(v.im));
    }
}

#[test]
fn log_sweep_over_dephasing_grows_center_absorption() {
    let base = SweepBase::reduced(TripodParams::new(1.0, 1.0, 4.5, [0.0; 3]));
    let s = SweepSpec {
        spacing: Spacing::Log,
        ..spec(Axis::GammaD, 1e-4, 0.2, vec![Observable::ImChi])
    };
    let t = sweep(&base, &s).unwrap();
    let col: Vec<f64> = t.column(0).into_iter().map(Option::unwrap).collect();
    assert!(col.windows(2).all(|w| w[1] > w[0]));
    assert!(col[0] < 1e-3 * col[40]);
}

#[test]
fn failing_points_become_empty_cells() {
    // Without ground dephasing the Kerr and exact responses are singular where
    // the outer detunings meet; the linear response is not.
    let base = SweepBase::reduced(TripodParams::new(0.1, 0.1, 1.0, [0.0, 0.3, 0.0]));
    let t = sweep(
        &base,
        &spec(
            Axis::Delta1,
            -1.0,
            1.0,
            vec![Observable::ImChi1, Observable::Chi3],
        ),
    )
    .unwrap();
    let mid = &t.rows[20];
    assert_eq!(mid.x, 0.0);
    assert!(mid.values[0].is_some());
    assert_eq!(mid.values[1], None);
    assert_eq!(t.rows.iter().filter(|r| r.values[1].is_none()).count(), 1);
}

#[test]
fn solving_for_a_smaller_phase_shortens_the_medium() {
    let p = TripodParams::quantum();
    let m = MediumSpec::quantum();
    let pi = solve_for_pi(&p, &m, None, FreeParameter::Length, PI).unwrap();
    let half = solve_for_pi(&p, &m, None, FreeParameter::Length, PI / 2.0).unwrap();
    assert!((pi.phi() - PI).abs() <= 1e-6);
    assert_relative_eq!(
        half.medium.length,
        pi.medium.length / 2.0,
        max_relative = 1e-9
    );
    let dense = solve_for_pi(
        &p,
        &MediumSpec {
            density: 2.0 * m.density,
            ..m
        },
        None,
        FreeParameter::Length,
        PI,
    )
    .unwrap();
    assert_relative_eq!(
        dense.medium.length,
        pi.medium.length / 2.0,
        max_relative = 1e-9
    );
    let by_density = solve_for_pi(&p, &m, None, FreeParameter::Density, PI).unwrap();
    assert_relative_eq!(
        by_density.medium.density * m.length,
        m.density * pi.medium.length,
        max_relative = 1e-9
    );
}

#[test]
fn walk_off_takes_the_bracketing_path() {
    // A weaker probe dipole makes the probe faster than the trigger, so fixed
    // pulses walk off and the phase is no longer linear in the length.
    let p = TripodParams::quantum();
    let q = MediumSpec::quantum();
    let m = MediumSpec {
        dipole_p: 0.95 * q.dipole_p,
        ..q
    };
    let base = fitted(p, m);
    assert!(base.report.zeta_p != 0.0 && base.report.zeta_t != 0.0);
    let point = solve_for_pi(&p, &m, Some(base.pulses), FreeParameter::Length, PI).unwrap();
    assert!((point.phi() - PI).abs() <= 1e-6, "phi = {}", point.phi());
    assert_eq!(point.pulses, base.pulses);
    let scaled = base.medium.length * PI / base.phi();
    assert!((point.medium.length / scaled - 1.0).abs() > 1e-6);
}

#[test]
fn unreachable_targets_are_reported() {
    let p = TripodParams::quantum();
    let m = MediumSpec::quantum();
    assert!(matches!(
        solve_for_pi(&p, &m, None, FreeParameter::Length, -PI),
        Err(Error::NoSolution(_))
    ));
    let flat = TripodParams::new(0.1, 0.1, 1.0, [0.2; 3]).with_dephasing(0.01);
    assert!(matches!(
        solve_for_pi(&flat, &m, None, FreeParameter::Length, PI),
        Err(Error::NoSolution(_))
    ));
}

#[test]
fn pump_sensitivity_is_linear_for_small_drifts() {
    let point = fitted(TripodParams::semiclassical(), MediumSpec::semiclassical());
    let eps = [0.001, 0.002, 0.005, 0.01, 0.02];
    let s: Vec<f64> = eps
        .iter()
        .map(|&e| {
            sensitivity(&point, Perturbation::PumpIntensity, e)
                .unwrap()
                .conditional
                / e
        })
        .collect();
    for v in &s {
        assert!((v / s[0] - 1.0).abs() <= 0.2, "slopes {s:?}");
    }
}

#[test]
fn common_detuning_shift_matters_less_than_a_single_one() {
    let point = fitted(TripodParams::quantum(), MediumSpec::quantum());
    let run = |target| {
        sensitivity(&point, Perturbation::Detuning { target }, 1e-3)
            .unwrap()
            .conditional
    };
    assert!(run(DetuningTarget::All) < 0.1 * run(DetuningTarget::Delta1));
}

#[test]
fn zero_perturbation_changes_nothing() {
    let point = fitted(TripodParams::quantum(), MediumSpec::quantum());
    let r = sensitivity(&point, Perturbation::PumpIntensity, 0.0).unwrap();
    assert_eq!((r.conditional, r.row), (0.0, 0.0));
    assert!(sensitivity(&point, Perturbation::PumpIntensity, -1.0).is_err());
}

#[test]
fn operating_point_golden_values() {
    let q = fitted(TripodParams::quantum(), MediumSpec::quantum());
    assert_relative_eq!(
        q.report.phi_conditional_over_pi,
        1.328_798_732_13,
        max_relative = 1e-9
    );
    assert_relative_eq!(1.0 / q.report.ratio_p, -146.048, max_relative = 1e-4);
    let s = fitted(TripodParams::semiclassical(), MediumSpec::semiclassical());
    assert_relative_eq!(
        s.report.phi_conditional_over_pi,
        0.085_549_029_705_6,
        max_relative = 1e-9
    );
    assert_relative_eq!(1.0 / s.report.ratio_p, -53.2, max_relative = 2e-3);
    let r = sensitivity(&s, Perturbation::PumpIntensity, 0.01).unwrap();
    assert_relative_eq!(r.conditional, 0.020_485_537_825, max_relative = 1e-9);
}

#[test]
fn strong_walk_off_caps_the_phase() {
    // Once the pulses separate, a longer medium no longer adds phase.
    let p = TripodParams::quantum();
    let q = MediumSpec::quantum();
    let m = MediumSpec {
        dipole_p: q.dipole_p / 2f64.sqrt(),
        ..q
    };
    let pulses = fitted(p, m).pulses;
    assert!(matches!(
        solve_for_pi(&p, &m, Some(pulses), FreeParameter::Length, PI),
        Err(Error::NoSolution(_))
    ));
}
