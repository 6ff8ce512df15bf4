//! Optical Bloch equations for the tripod: generator, steady state and time
//! evolution.
//!
//! The density matrix is column-stacked, so `rho_ij` sits at index `i + 4 j`.
//! The coherent part is `-i [H, rho]` with the Hamiltonian of
//! [`crate::model::build_hamiltonian`]. Relaxation is phenomenological: the
//! excited state decays into `|1>`, `|2>`, `|3>` at `gamma11`, `gamma22`,
//! `gamma33`; population flows `2 -> 1`, `3 -> 1`, `3 -> 2` at `gamma12`,
//! `gamma13`, `gamma23`; optical coherences `rho_j0` decay at `gamma_j0` and
//! ground coherences `rho_ij` at `gamma_ij`.

use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, Leg, TripodParams};

pub type Generator = SMatrix<Complex64, 16, 16>;
type StateVec = SVector<Complex64, 16>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn idx(i: usize, j: usize) -> usize {
    i + 4 * j
}

/// Density matrix in the `(|0>, |1>, |2>, |3>)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub rho: Matrix4<Complex64>,
}

impl DensityMatrix {
    pub fn new(rho: Matrix4<Complex64>) -> Self {
        DensityMatrix { rho }
    }

    /// Pure state `|k><k|`.
    pub fn basis(k: usize) -> Self {
        let mut rho = Matrix4::zeros();
        rho[(k, k)] = ONE;
        DensityMatrix { rho }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: [f64; 4]) -> Self {
        let mut rho = Matrix4::zeros();
        for (k, p) in populations.into_iter().enumerate() {
            rho[(k, k)] = Complex64::new(p, 0.0);
        }
        DensityMatrix { rho }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.rho[(k, k)].re)
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (self.rho - other.rho)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn to_vec(self) -> StateVec {
        StateVec::from_iterator(self.rho.iter().copied())
    }

    fn from_vec(v: &StateVec) -> Self {
        DensityMatrix {
            rho: Matrix4::from_iterator(v.iter().copied()),
        }
    }
}

/// Linear generator of the Bloch equations acting on the column-stacked
/// density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub matrix: Generator,
    pub note: &'static str,
}

impl Liouvillian {
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_vec(&(self.matrix * rho.to_vec()))
    }
}

pub fn build_liouvillian(p: &TripodParams) -> Liouvillian {
    let h = build_hamiltonian(p);
    let mut l = Generator::zeros();
    let mi = Complex64::new(0.0, -1.0);

    // -i (H rho - rho H)
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                l[(idx(i, j), idx(k, j))] += mi * h[(i, k)];
                l[(idx(i, j), idx(i, k))] -= mi * h[(k, j)];
            }
        }
    }

    let re = |x: f64| Complex64::new(x, 0.0);
    let excited_out = p.gamma11 + p.gamma22 + p.gamma33;
    l[(idx(0, 0), idx(0, 0))] -= re(excited_out);
    l[(idx(1, 1), idx(0, 0))] += re(p.gamma11);
    l[(idx(2, 2), idx(0, 0))] += re(p.gamma22);
    l[(idx(3, 3), idx(0, 0))] += re(p.gamma33);

    l[(idx(1, 1), idx(2, 2))] += re(p.gamma12);
    l[(idx(2, 2), idx(2, 2))] -= re(p.gamma12);
    l[(idx(1, 1), idx(3, 3))] += re(p.gamma13);
    l[(idx(2, 2), idx(3, 3))] += re(p.gamma23);
    l[(idx(3, 3), idx(3, 3))] -= re(p.gamma13 + p.gamma23);

    let coherence_rates = [
        (1, 0, p.gamma10),
        (2, 0, p.gamma20),
        (3, 0, p.gamma30),
        (1, 2, p.gamma12),
        (1, 3, p.gamma13),
        (2, 3, p.gamma23),
    ];
    for (i, j, rate) in coherence_rates {
        l[(idx(i, j), idx(i, j))] -= re(rate);
        l[(idx(j, i), idx(j, i))] -= re(rate);
    }

    Liouvillian {
        matrix: l,
        note: "coherent part -i[H, rho]; phenomenological population and coherence relaxation",
    }
}

/// Null-space dimension of the generator, from its singular values.
pub fn nullity(l: &Liouvillian) -> usize {
    let sv = l.matrix.singular_values();
    let scale = sv.max().max(f64::MIN_POSITIVE);
    sv.iter().filter(|&&s| s <= 1e-11 * scale).count()
}

pub fn steady_state(p: &TripodParams) -> Result<DensityMatrix> {
    p.validate()?;
    let l = build_liouvillian(p);
    let k = nullity(&l);
    if k != 1 {
        return Err(Error::SingularSystem { nullity: k });
    }

    // Diagonal rows sum to zero, so the rho00 equation is redundant and can
    // carry the trace condition instead.
    let mut a = l.matrix;
    let mut b = StateVec::zeros();
    for c in 0..16 {
        a[(0, c)] = ZERO;
    }
    for k in 0..4 {
        a[(0, idx(k, k))] = ONE;
    }
    b[0] = ONE;

    let x = a
        .full_piv_lu()
        .solve(&b)
        .ok_or(Error::SingularSystem { nullity: 1 })?;
    let rho = DensityMatrix::from_vec(&x);
    Ok(DensityMatrix {
        rho: (rho.rho + rho.rho.adjoint()) * Complex64::new(0.5, 0.0),
    })
}

/// `L rho` residual norm for a candidate stationary state.
pub fn residual(p: &TripodParams, rho: &DensityMatrix) -> f64 {
    let l = build_liouvillian(p);
    (l.matrix * rho.to_vec()).norm()
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates the Bloch equations from `rho0` to `t_final` with an adaptive
/// Dormand-Prince 5(4) pair. `tol` bounds the local error per component,
/// scaled by `1 + |y|`.
pub fn evolve(
    p: &TripodParams,
    rho0: &DensityMatrix,
    t_final: f64,
    tol: f64,
) -> Result<DensityMatrix> {
    p.validate()?;
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("must be finite and non-negative, got {t_final}"),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    if t_final == 0.0 {
        return Ok(*rho0);
    }

    let l = build_liouvillian(p).matrix;
    let mut y = rho0.to_vec();
    let mut t = 0.0;
    let rate = l.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
    let mut h = (0.01 / rate).min(t_final);
    let mut k = [StateVec::zeros(); 7];
    k[0] = l * y;

    while t < t_final {
        if t + h > t_final {
            h = t_final - t;
        }
        if h <= 1e-14 * t.max(1.0) {
            return Err(Error::StepFailure { t });
        }
        for s in 1..7 {
            let mut ys = y;
            for (r, a) in A[s].iter().enumerate().take(s) {
                if *a != 0.0 {
                    ys += k[r] * Complex64::new(h * a, 0.0);
                }
            }
            k[s] = l * ys;
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for (c, b5) in B5.iter().enumerate() {
            if *b5 != 0.0 {
                y5 += k[c] * Complex64::new(h * b5, 0.0);
            }
        }
        for i in 0..16 {
            let mut e = ZERO;
            for s in 0..7 {
                e += k[s][i] * (B5[s] - B4[s]);
            }
            let scale = tol * (1.0 + y[i].norm().max(y5[i].norm()));
            err = err.max((e * h).norm() / scale);
        }

        if err <= 1.0 {
            t += h;
            y = y5;
            // FSAL: the last stage is the derivative at the new point.
            k[0] = k[6];
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            0.9 * err.powf(-0.2)
        };
        h *= factor.clamp(0.2, 5.0);
    }
    Ok(DensityMatrix::from_vec(&y))
}

/// Steady-state `rho_10 / omega_p` (probe) or `rho_30 / omega_t` (trigger),
/// in units of `1/gamma`.
pub fn coherence_ratio(p: &TripodParams, leg: Leg) -> Result<Complex64> {
    let omega = p.rabi(leg);
    if omega == 0.0 {
        return Err(Error::DivisionByZero { leg });
    }
    let rho = steady_state(p)?;
    let level = match leg {
        Leg::Probe => 1,
        Leg::Trigger => 3,
    };
    Ok(rho.get(level, 0) / omega)
}
