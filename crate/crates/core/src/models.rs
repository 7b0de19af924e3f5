//! The oscillator models, normalised to unit amplitude.
//!
//! A model `ẍ = f(x)` with `x(0) = a`, `ẋ(0) = 0` is rescaled by `u = x / a`
//! into `ü = f_a(u)`, `f_a(u) = f(a u) / a`, `u(0) = 1`. All quantities here
//! refer to the normalised problem.
//!
//! The potential `Φ(u) = -2 ∫_u^1 f_a` has simple zeros at `u = ±1`, so every
//! model factors it as `Φ(u) = (1 - u²) G(u)` with `G` smooth and positive.
//! The substitution `u = cos θ` then turns the period integral into the
//! regular integral `4 ∫_0^{π/2} dθ / √G(cos θ)`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elliptic::{complete_e, complete_k, complete_pi, incomplete_e, incomplete_f, Parameter};
use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `ẍ = -x / √(1 + x²)`
    Relativistic,
    /// `ẍ = -x - b x / √(1 + x²)`
    CableMass,
    /// `ẍ = -x - x³ - b x / √(1 + x²)`
    DuffingRelativistic,
    /// `ẍ = Σ q_i x^(2i+1)`, an odd polynomial force.
    Generic,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Relativistic => "relativistic",
            ModelKind::CableMass => "cable-mass",
            ModelKind::DuffingRelativistic => "duffing-relativistic",
            ModelKind::Generic => "generic",
        }
    }

    pub fn uses_b(self) -> bool {
        matches!(self, ModelKind::CableMass | ModelKind::DuffingRelativistic)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "relativistic" => Ok(ModelKind::Relativistic),
            "cable-mass" => Ok(ModelKind::CableMass),
            "duffing-relativistic" => Ok(ModelKind::DuffingRelativistic),
            "generic" => Ok(ModelKind::Generic),
            other => Err(format!(
                "unknown model `{other}` (expected relativistic, cable-mass, duffing-relativistic or generic)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorModel {
    pub kind: ModelKind,
    /// Initial displacement.
    pub a: f64,
    /// Strength of the square-root term; ignored by the relativistic and
    /// generic models.
    #[serde(default)]
    pub b: f64,
    /// Coefficients `q_1, q_3, q_5, …` of the un-normalised odd polynomial
    /// force, generic models only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub force: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodMethod {
    /// Complete integrals of the first and second kind.
    ClosedFormKe,
    /// Complete integrals of the first and third kind.
    ClosedFormPi,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactPeriod {
    pub value: f64,
    pub method: PeriodMethod,
}

/// Default relative tolerance for quadrature-based periods and time integrals.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-13;

/// Number of interior sample points used by the `Φ > 0` check.
const POSITIVITY_SAMPLES: usize = 1001;

impl OscillatorModel {
    pub fn relativistic(a: f64) -> Self {
        OscillatorModel {
            kind: ModelKind::Relativistic,
            a,
            b: 0.0,
            force: None,
        }
    }

    pub fn cable_mass(a: f64, b: f64) -> Self {
        OscillatorModel {
            kind: ModelKind::CableMass,
            a,
            b,
            force: None,
        }
    }

    pub fn duffing_relativistic(a: f64, b: f64) -> Self {
        OscillatorModel {
            kind: ModelKind::DuffingRelativistic,
            a,
            b,
            force: None,
        }
    }

    /// Generic odd polynomial force `f(x) = q[0] x + q[1] x³ + q[2] x⁵ + …`.
    pub fn generic(a: f64, odd_coefficients: Vec<f64>) -> Self {
        OscillatorModel {
            kind: ModelKind::Generic,
            a,
            b: 0.0,
            force: Some(odd_coefficients),
        }
    }

    fn sqrt_terms(&self, u: f64) -> (f64, f64) {
        let a2 = self.a * self.a;
        ((1.0 + a2).sqrt(), (1.0 + a2 * u * u).sqrt())
    }

    /// Normalised coefficients `p_i = q_i a^(2i)` of `f_a(u) = Σ p_i u^(2i+1)`.
    pub(crate) fn normalised_polynomial(&self) -> Vec<f64> {
        let a2 = self.a * self.a;
        let mut scale = 1.0;
        self.force
            .as_deref()
            .unwrap_or(&[])
            .iter()
            .map(|q| {
                let p = q * scale;
                scale *= a2;
                p
            })
            .collect()
    }

    /// Normalised restoring force `f_a(u)`.
    pub fn restoring_force(&self, u: f64) -> f64 {
        let a2 = self.a * self.a;
        let root = || (1.0 + a2 * u * u).sqrt();
        match self.kind {
            ModelKind::Relativistic => -u / root(),
            ModelKind::CableMass => -u - self.b * u / root(),
            ModelKind::DuffingRelativistic => -u - a2 * u * u * u - self.b * u / root(),
            ModelKind::Generic => {
                let u2 = u * u;
                let mut power = u;
                let mut sum = 0.0;
                for p in self.normalised_polynomial() {
                    sum += p * power;
                    power *= u2;
                }
                sum
            }
        }
    }

    /// `G(u) = Φ(u) / (1 - u²)`, smooth on `[-1, 1]`.
    pub fn reduced_potential(&self, u: f64) -> f64 {
        let (s, r) = self.sqrt_terms(u);
        let a2 = self.a * self.a;
        match self.kind {
            ModelKind::Relativistic => 2.0 / (s + r),
            ModelKind::CableMass => 1.0 + 2.0 * self.b / (s + r),
            ModelKind::DuffingRelativistic => {
                0.5 * (2.0 + a2 + a2 * u * u) + 2.0 * self.b / (s + r)
            }
            ModelKind::Generic => {
                // (1 - u^(2i+2)) / (1 - u²) = Σ_{j<=i} u^(2j)
                let u2 = u * u;
                let mut partial = 0.0;
                let mut power = 1.0;
                let mut sum = 0.0;
                for (i, p) in self.normalised_polynomial().into_iter().enumerate() {
                    partial += power;
                    power *= u2;
                    sum += p / (2 * i + 2) as f64 * partial;
                }
                -2.0 * sum
            }
        }
    }

    /// Potential `Φ(u) = -2 ∫_u^1 f_a(s) ds`.
    pub fn potential(&self, u: f64) -> f64 {
        (1.0 - u * u) * self.reduced_potential(u)
    }

    /// Checks the parameter domain and samples `Φ > 0` on `(-1, 1)` and
    /// `f_a < 0` on `(0, 1]`.
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::InvalidModel {
                condition: format!("amplitude a must be positive and finite, got {}", self.a),
                at_u: None,
            });
        }
        if self.kind.uses_b() && (!(self.b > 0.0) || !self.b.is_finite()) {
            return Err(Error::InvalidModel {
                condition: format!(
                    "parameter b must be positive for {}, got {}",
                    self.kind, self.b
                ),
                at_u: None,
            });
        }
        if self.kind == ModelKind::Generic {
            match self.force.as_deref() {
                None | Some([]) => {
                    return Err(Error::InvalidModel {
                        condition: "generic model needs at least one odd force coefficient".into(),
                        at_u: None,
                    })
                }
                Some(q) if q.iter().any(|c| !c.is_finite()) => {
                    return Err(Error::InvalidModel {
                        condition: "generic force coefficients must be finite".into(),
                        at_u: None,
                    })
                }
                _ => {}
            }
        }
        let step = 2.0 / (POSITIVITY_SAMPLES + 1) as f64;
        for i in 1..=POSITIVITY_SAMPLES {
            let u = -1.0 + step * i as f64;
            let phi = self.potential(u);
            if !(phi > 0.0) {
                return Err(Error::InvalidModel {
                    condition: format!("potential Phi must be positive on (-1, 1), found {phi}"),
                    at_u: Some(u),
                });
            }
            if u > 0.0 && !(self.restoring_force(u) < 0.0) {
                return Err(Error::InvalidModel {
                    condition: "restoring force must be negative on (0, 1]".into(),
                    at_u: Some(u),
                });
            }
        }
        if !(self.restoring_force(1.0) < 0.0) {
            return Err(Error::InvalidModel {
                condition: "restoring force must be negative at u = 1".into(),
                at_u: Some(1.0),
            });
        }
        Ok(())
    }

    /// Exact period of the normalised model: closed form where one exists,
    /// regularised quadrature otherwise.
    pub fn exact_period(&self) -> Result<ExactPeriod> {
        self.validate()?;
        let (s, _) = self.sqrt_terms(0.0);
        match self.kind {
            ModelKind::Relativistic => {
                // k = (√(1+a²) - 1) / a, written without cancellation
                let k = self.a / (s + 1.0);
                let m = Parameter::from_modulus(k);
                let big_a = (s + 1.0).sqrt();
                let value = 4.0 * SQRT_2 * (big_a * complete_e(m)? - complete_k(m)? / big_a);
                Ok(ExactPeriod {
                    value,
                    method: PeriodMethod::ClosedFormKe,
                })
            }
            ModelKind::CableMass => {
                let big_a = s + self.b;
                // N = (1 - √(1+a²)) / 2
                let n = -0.5 * self.a * self.a / (s + 1.0);
                // The printed modulus expression is the parameter m, and it is
                // negative for every a, b > 0.
                let m = Parameter::new(n * (self.b - n) / big_a);
                let value = 4.0 / big_a.sqrt() * ((1.0 + s) * complete_pi(n, m)? - complete_k(m)?);
                Ok(ExactPeriod {
                    value,
                    method: PeriodMethod::ClosedFormPi,
                })
            }
            ModelKind::DuffingRelativistic | ModelKind::Generic => Ok(ExactPeriod {
                value: self.period_by_quadrature(DEFAULT_QUADRATURE_TOL)?,
                method: PeriodMethod::Quadrature,
            }),
        }
    }

    /// Period `2 ∫_{-1}^{1} ds / √Φ(s)` by adaptive quadrature.
    pub fn period_by_quadrature(&self, rel_tol: f64) -> Result<f64> {
        self.validate()?;
        let quarter = quad::integrate(
            |theta: f64| 1.0 / self.reduced_potential(theta.cos()).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            0.0,
            rel_tol,
        )?;
        Ok(4.0 * quarter)
    }

    /// Time integral `Ψ(u) = ∫_u^1 ds / √Φ(s)`: the time needed to travel from
    /// the turning point `u = 1` down to `u`.
    pub fn time_integral(&self, u: f64) -> Result<f64> {
        if !(u.abs() <= 1.0) {
            return Err(Error::domain("u", u, "-1 <= u <= 1"));
        }
        self.validate()?;
        quad::integrate(
            |theta: f64| 1.0 / self.reduced_potential(theta.cos()).sqrt(),
            0.0,
            u.acos(),
            1e-15,
            DEFAULT_QUADRATURE_TOL,
        )
    }
}

/// Closed-form time integral of the relativistic model in terms of `F` and `E`.
pub fn relativistic_time_closed_form(a: f64, u: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("a", a, "a > 0"));
    }
    if !(u.abs() <= 1.0) {
        return Err(Error::domain("u", u, "-1 <= u <= 1"));
    }
    let s = (1.0 + a * a).sqrt();
    let big_a = (s + 1.0).sqrt();
    let m = Parameter::from_modulus(a / (s + 1.0));
    let time_from_top = |v: f64| -> Result<f64> {
        let r = (1.0 + a * a * v * v).sqrt();
        // (S - R) / (S - 1) without cancellation
        let ratio = ((1.0 - v * v) * (s + 1.0) / (s + r)).min(1.0);
        let phi = ratio.sqrt().asin();
        Ok(SQRT_2 * (big_a * incomplete_e(phi, m)? - incomplete_f(phi, m)? / big_a))
    };
    if u >= 0.0 {
        time_from_top(u)
    } else {
        let half = 2.0 * time_from_top(0.0)?;
        Ok(half - time_from_top(-u)?)
    }
}
