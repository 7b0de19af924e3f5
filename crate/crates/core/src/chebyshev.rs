//! Fifth-order Chebyshev projection of odd restoring forces.
//!
//! An odd force `f_a` on `[-1, 1]` is replaced by `α1 T1 + α3 T3 + α5 T5` with
//! `αn = (2/π) ∫ Tn(s) f_a(s) / √(1 - s²) ds`, then rewritten in the monomial
//! basis as `-(c1 u + c3 u³ + c5 u⁵)`.
//!
//! Two independent routes produce the coefficients: Gauss–Chebyshev quadrature
//! of the inner products ([`project_odd_quintic`]) and closed forms built from
//! the moments `J2, J4, J6` and `w2 … w8` ([`model_coefficients`]).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_e, complete_k, Parameter};
use crate::error::{Error, Result};
use crate::models::{ModelKind, OscillatorModel};

/// Node count used when the caller does not choose one.
pub const DEFAULT_NODES: usize = 64;
pub const MIN_NODES: usize = 16;

/// `w_n = ∫_{-1}^{1} s^n / √(1 - s²) ds`.
pub const W2: f64 = PI / 2.0;
pub const W4: f64 = 3.0 * PI / 8.0;
pub const W6: f64 = 5.0 * PI / 16.0;
pub const W8: f64 = 35.0 * PI / 128.0;

/// Below this amplitude the closed forms for `J_n` lose digits to
/// cancellation (they carry `a^-6`), and the binomial series takes over.
const MOMENT_SERIES_CUTOFF: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevOdd {
    pub alpha1: f64,
    pub alpha3: f64,
    pub alpha5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Quadrature,
    ClosedForm,
    /// Supplied directly by the caller.
    Explicit,
}

/// Coefficients of the quintic force `-(c1 u + c3 u³ + c5 u⁵)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuinticCoefficients {
    pub c1: f64,
    pub c3: f64,
    pub c5: f64,
    pub provenance: Provenance,
}

impl QuinticCoefficients {
    pub fn new(c1: f64, c3: f64, c5: f64) -> Self {
        QuinticCoefficients {
            c1,
            c3,
            c5,
            provenance: Provenance::Explicit,
        }
    }

    /// The quintic force `-(c1 u + c3 u³ + c5 u⁵)`.
    pub fn force(&self, u: f64) -> f64 {
        let u2 = u * u;
        -u * (self.c1 + u2 * (self.c3 + u2 * self.c5))
    }

    /// Quintic potential `Φ(u) = -2 ∫_u^1 force`.
    pub fn potential(&self, u: f64) -> f64 {
        let v = u * u;
        (1.0 - v) * self.h2(v) / 6.0
    }

    /// `h2(s) = (6c1 + 3c3 + 2c5) + (3c3 + 2c5) s + 2c5 s²`.
    pub fn h2(&self, s: f64) -> f64 {
        (6.0 * self.c1 + 3.0 * self.c3 + 2.0 * self.c5)
            + (3.0 * self.c3 + 2.0 * self.c5) * s
            + 2.0 * self.c5 * s * s
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c3, self.c5]
    }

    pub fn with_c5(self, c5: f64) -> Self {
        QuinticCoefficients { c5, ..self }
    }

    /// Coefficients of the time-rescaled problem `t -> λ t`.
    pub fn scaled(self, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        QuinticCoefficients {
            c1: l2 * self.c1,
            c3: l2 * self.c3,
            c5: l2 * self.c5,
            ..self
        }
    }
}

/// Projects an odd force onto `T1, T3, T5` with an `nodes`-point
/// Gauss–Chebyshev rule, exact for polynomial integrands up to degree
/// `2 nodes - 1`.
pub fn project_odd_quintic<F>(force: F, nodes: usize) -> Result<ChebyshevOdd>
where
    F: Fn(f64) -> f64,
{
    if nodes < MIN_NODES {
        return Err(Error::domain("nodes", nodes as f64, "nodes >= 16"));
    }
    let mut alpha = [0.0_f64; 6];
    let step = PI / nodes as f64;
    for j in 0..nodes {
        let theta = (j as f64 + 0.5) * step;
        let s = theta.cos();
        let value = force(s);
        if !value.is_finite() {
            return Err(Error::NonFinite { abscissa: s, value });
        }
        for (n, a) in alpha.iter_mut().enumerate() {
            *a += (n as f64 * theta).cos() * value;
        }
    }
    let scale = 2.0 / nodes as f64;
    alpha.iter_mut().for_each(|a| *a *= scale);

    debug_assert!(
        {
            let size = alpha[1].abs() + alpha[3].abs() + alpha[5].abs() + 1.0;
            [alpha[0], alpha[2], alpha[4]]
                .iter()
                .all(|e| e.abs() <= 1e-9 * size)
        },
        "force is not odd: even Chebyshev coefficients {:?}",
        [alpha[0], alpha[2], alpha[4]]
    );

    Ok(ChebyshevOdd {
        alpha1: alpha[1],
        alpha3: alpha[3],
        alpha5: alpha[5],
    })
}

/// Expands `α1 T1 + α3 T3 + α5 T5` into `-(c1 u + c3 u³ + c5 u⁵)`.
pub fn to_monomial(alphas: &ChebyshevOdd, provenance: Provenance) -> QuinticCoefficients {
    let ChebyshevOdd {
        alpha1,
        alpha3,
        alpha5,
    } = *alphas;
    QuinticCoefficients {
        c1: -(alpha1 - 3.0 * alpha3 + 5.0 * alpha5),
        c3: -4.0 * (alpha3 - 5.0 * alpha5),
        c5: -16.0 * alpha5,
        provenance,
    }
}

/// `J_n(a) = ∫_{-1}^{1} s^n / √((1 - s²)(1 + a² s²)) ds` for `n = 2, 4, 6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticMoments {
    pub a: f64,
    pub j2: f64,
    pub j4: f64,
    pub j6: f64,
}

/// `w_n` for even `n`.
pub fn pi_moment(n: usize) -> f64 {
    debug_assert!(n.is_multiple_of(2));
    let mut w = PI;
    let mut k = 0;
    while k < n {
        w *= (k + 1) as f64 / (k + 2) as f64;
        k += 2;
    }
    w
}

fn moment_series(a: f64, n: usize) -> f64 {
    // (1 + a² s²)^(-1/2) = Σ binom(-1/2, k) a^(2k) s^(2k); alternating with
    // decreasing terms for a < 1.
    let a2 = a * a;
    let mut w = pi_moment(n);
    let mut coeff = 1.0;
    let mut sum = w;
    for k in 0..400 {
        let idx = n + 2 * k;
        w *= (idx + 1) as f64 / (idx + 2) as f64;
        coeff *= -((2 * k + 1) as f64) / (2 * k + 2) as f64 * a2;
        let term = coeff * w;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Closed-form moments through complete integrals with parameter
/// `m = a² / (1 + a²)`.
pub fn closed_form_moments(a: f64) -> Result<EllipticMoments> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("a", a, "a > 0"));
    }
    if a < MOMENT_SERIES_CUTOFF {
        return Ok(EllipticMoments {
            a,
            j2: moment_series(a, 2),
            j4: moment_series(a, 4),
            j6: moment_series(a, 6),
        });
    }
    moments_from_complete_integrals(a)
}

fn moments_from_complete_integrals(a: f64) -> Result<EllipticMoments> {
    let a2 = a * a;
    let root = (1.0 + a2).sqrt();
    let m = Parameter::new(a2 / (1.0 + a2));
    let e = root * complete_e(m)?;
    let k = complete_k(m)? / root;
    Ok(EllipticMoments {
        a,
        j2: 2.0 / a2 * (e - k),
        j4: 2.0 / (3.0 * a2 * a2) * (2.0 * (a2 - 1.0) * e - (a2 - 2.0) * k),
        j6: 2.0 / (15.0 * a2 * a2 * a2)
            * ((8.0 * a2 * a2 - 7.0 * a2 + 8.0) * e - (4.0 * a2 * a2 - 3.0 * a2 + 8.0) * k),
    })
}

// Given M_k = ∫ s^k (-f_a(s)) / √(1-s²) ds for k = 1, 3, 5, forms the
// Chebyshev coefficients with the constant -2/π.
fn alphas_from_moments(m1: f64, m3: f64, m5: f64) -> ChebyshevOdd {
    let c = -2.0 / PI;
    ChebyshevOdd {
        alpha1: c * m1,
        alpha3: c * (-3.0 * m1 + 4.0 * m3),
        alpha5: c * (5.0 * m1 - 20.0 * m3 + 16.0 * m5),
    }
}

/// Monomial coefficients `[u, u³, u⁵]` of the `T1, T3, T5` truncation of
/// `u^n`, from `u^n = 2^(1-n) Σ binom(n, (n-k)/2) T_k` for odd `n`.
fn truncated_power(n: usize) -> [f64; 3] {
    debug_assert!(n % 2 == 1);
    let scale = 2f64.powi(1 - n as i32);
    let alpha = |k: usize| -> f64 {
        if k > n {
            return 0.0;
        }
        let r = (n - k) / 2;
        (0..r).fold(scale, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    let (a1, a3, a5) = (alpha(1), alpha(3), alpha(5));
    [a1 - 3.0 * a3 + 5.0 * a5, 4.0 * a3 - 20.0 * a5, 16.0 * a5]
}

// Projection of u / √(1 + a² u²) term by term from its binomial series.
// Combining the O(1) moments instead would leave c5 ~ a⁴ at the mercy of
// cancellation for small a.
fn kernel_series(a: f64) -> [f64; 3] {
    let a2 = a * a;
    let mut beta = 1.0;
    let mut c = truncated_power(1);
    let mut floor = 0.0;
    for j in 1..400 {
        beta *= -((2 * j - 1) as f64) / (2 * j) as f64 * a2;
        if j == 2 {
            floor = 1e-18 * beta.abs();
        }
        let t = truncated_power(2 * j + 1);
        for (ci, ti) in c.iter_mut().zip(t) {
            *ci += beta * ti;
        }
        if j > 2 && beta.abs() < floor {
            break;
        }
    }
    c
}

/// Quintic coefficients of the square-root kernel `u / √(1 + a² u²)`.
fn kernel_coefficients(a: f64) -> Result<[f64; 3]> {
    if a < MOMENT_SERIES_CUTOFF {
        return Ok(kernel_series(a));
    }
    let j = moments_from_complete_integrals(a)?;
    Ok(to_monomial(
        &alphas_from_moments(j.j2, j.j4, j.j6),
        Provenance::ClosedForm,
    )
    .as_array())
}

/// Closed-form quintic coefficients of a model.
pub fn model_coefficients(model: &OscillatorModel) -> Result<QuinticCoefficients> {
    model.validate()?;
    let (a2, b) = (model.a * model.a, model.b);
    let [c1, c3, c5] = match model.kind {
        ModelKind::Relativistic => kernel_coefficients(model.a)?,
        ModelKind::CableMass => {
            let k = kernel_coefficients(model.a)?;
            [1.0 + b * k[0], b * k[1], b * k[2]]
        }
        ModelKind::DuffingRelativistic => {
            let k = kernel_coefficients(model.a)?;
            [1.0 + b * k[0], a2 + b * k[1], b * k[2]]
        }
        ModelKind::Generic => {
            let mut c = [0.0; 3];
            for (i, p) in model.normalised_polynomial().into_iter().enumerate() {
                for (ci, ti) in c.iter_mut().zip(truncated_power(2 * i + 1)) {
                    *ci -= p * ti;
                }
            }
            c
        }
    };
    Ok(QuinticCoefficients {
        c1,
        c3,
        c5,
        provenance: Provenance::ClosedForm,
    })
}

/// Quadrature-route quintic coefficients of a model.
pub fn model_coefficients_by_quadrature(
    model: &OscillatorModel,
    nodes: usize,
) -> Result<QuinticCoefficients> {
    model.validate()?;
    let alphas = project_odd_quintic(|u| model.restoring_force(u), nodes)?;
    Ok(to_monomial(&alphas, Provenance::Quadrature))
}

/// Node count giving full double precision for a model's force.
///
/// The square-root term has branch points at `u = ±i/a`, so the
/// Gauss–Chebyshev error decays like `ρ^(-2N)` with `ρ = 1/a + √(1 + 1/a²)`;
/// at large amplitudes 64 nodes are not enough.
pub fn recommended_nodes(model: &OscillatorModel) -> usize {
    let needed = match model.kind {
        ModelKind::Generic => {
            let degree = 2 * model.force.as_ref().map_or(0, Vec::len) + 5;
            degree.div_ceil(2)
        }
        _ => {
            let log_rho = (1.0 / model.a).asinh();
            (40.0 / (2.0 * log_rho)).ceil() as usize
        }
    };
    needed.max(DEFAULT_NODES).next_power_of_two()
}
