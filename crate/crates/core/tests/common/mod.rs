#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tripod_core::TripodParams;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random drive, detunings and strictly positive decay rates.
pub fn random_params(rng: &mut StdRng) -> TripodParams {
    TripodParams {
        omega_p: rng.random_range(0.0..2.0),
        omega_t: rng.random_range(0.0..2.0),
        omega_c: rng.random_range(0.0..3.0),
        delta1: rng.random_range(-3.0..3.0),
        delta2: rng.random_range(-3.0..3.0),
        delta3: rng.random_range(-3.0..3.0),
        gamma10: rng.random_range(0.5..1.5),
        gamma20: rng.random_range(0.5..1.5),
        gamma30: rng.random_range(0.5..1.5),
        gamma11: rng.random_range(0.2..1.0),
        gamma22: rng.random_range(0.2..1.0),
        gamma33: rng.random_range(0.2..1.0),
        gamma12: rng.random_range(0.01..0.3),
        gamma13: rng.random_range(0.01..0.3),
        gamma23: rng.random_range(0.01..0.3),
    }
}

/// Default excited-state decay, random drive and detunings, equal ground
/// dephasing in `[0.001, 0.02]`.
pub fn regime_params(rng: &mut StdRng) -> TripodParams {
    TripodParams::new(
        rng.random_range(0.0..2.0),
        rng.random_range(0.0..2.0),
        rng.random_range(0.0..3.0),
        [
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        ],
    )
    .with_dephasing(rng.random_range(0.001..0.02))
}

/// Random Hermitian, unit-trace, positive density matrix.
pub fn random_density(rng: &mut StdRng) -> tripod_core::DensityMatrix {
    use nalgebra::Matrix4;
    use tripod_core::Complex64;
    let a = Matrix4::from_fn(|_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rho = a * a.adjoint();
    let tr = rho.trace();
    tripod_core::DensityMatrix::new(rho / tr)
}

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub mod strategies {
    use proptest::prelude::*;
    use tripod_core::TripodParams;

    /// Random drive, detunings and strictly positive decay rates.
    pub fn params() -> impl Strategy<Value = TripodParams> {
        let fields = (0.0..2.0f64, 0.0..2.0f64, 0.0..3.0f64);
        let detunings = (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64);
        let optical = (0.5..1.5f64, 0.5..1.5f64, 0.5..1.5f64);
        let excited = (0.2..1.0f64, 0.2..1.0f64, 0.2..1.0f64);
        let ground = (0.01..0.3f64, 0.01..0.3f64, 0.01..0.3f64);
        (fields, detunings, optical, excited, ground).prop_map(|(f, d, o, e, g)| TripodParams {
            omega_p: f.0,
            omega_t: f.1,
            omega_c: f.2,
            delta1: d.0,
            delta2: d.1,
            delta3: d.2,
            gamma10: o.0,
            gamma20: o.1,
            gamma30: o.2,
            gamma11: e.0,
            gamma22: e.1,
            gamma33: e.2,
            gamma12: g.0,
            gamma13: g.1,
            gamma23: g.2,
        })
    }

    /// Default decay structure with equal ground dephasing up to `max_gamma_d`.
    pub fn regime(max_gamma_d: f64) -> impl Strategy<Value = TripodParams> {
        (
            0.01..2.0f64,
            0.01..2.0f64,
            0.1..3.0f64,
            (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
            0.001..max_gamma_d,
        )
            .prop_map(|(p, t, c, d, g)| {
                TripodParams::new(p, t, c, [d.0, d.1, d.2]).with_dephasing(g)
            })
    }
}
