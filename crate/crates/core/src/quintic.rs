//! Exact solution of `ü = -(c1 u + c3 u³ + c5 u⁵)`, `u(0) = 1`, `u̇(0) = 0`.
//!
//! With `v = u²` the energy integral reads `u̇² = (1 - v) h2(v) / 6`, and the
//! sign of `Δ = 3c3² - 4c5(4c1 + c3 + c5)` decides which reduction to a
//! Jacobi function applies:
//!
//! * `Δ < 0`: `h2` has complex roots and `u²` is a rational function of
//!   `sin²(φ/2)` with `φ = am(2K - t/A)`;
//! * `Δ > 0`, `h2(0) > 0`: `h2` has two negative roots `s1 < s2` and
//!   `u² = -s1 cn² / (sn² - s1)` at argument `rate · t`.
//!
//! `Δ = 0` is handled by a relative nudge of `c5` into the neighbouring case.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chebyshev::QuinticCoefficients;
use crate::elliptic::{complete_k, jacobi_am, jacobi_sn_cn_dn, Parameter};
use crate::error::{Error, Result};

/// Relative size of the `c5` nudge applied to degenerate triples.
pub const DEGENERATE_NUDGE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discriminant {
    pub delta: f64,
}

impl Discriminant {
    /// Band inside which `Δ` counts as zero.
    pub fn tolerance(c: &QuinticCoefficients) -> f64 {
        1e-9 * (3.0 * c.c3 * c.c3).max(1.0)
    }
}

pub fn discriminant(c: &QuinticCoefficients) -> Discriminant {
    Discriminant {
        delta: 3.0 * c.c3 * c.c3 - 4.0 * c.c5 * (4.0 * c.c1 + c.c3 + c.c5),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    CaseI,
    CaseII,
    Degenerate,
    Unsupported,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::CaseI => "Case I",
            Case::CaseII => "Case II",
            Case::Degenerate => "Degenerate",
            Case::Unsupported => "Unsupported",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn q_value(c: &QuinticCoefficients) -> f64 {
    6.0 * c.c1 + 3.0 * c.c3 + 2.0 * c.c5
}

pub fn classify(c: &QuinticCoefficients) -> Case {
    if !(c.c5 > 0.0) || !c.c1.is_finite() || !c.c3.is_finite() || !c.c5.is_finite() {
        return Case::Unsupported;
    }
    let delta = discriminant(c).delta;
    if delta.abs() <= Discriminant::tolerance(c) {
        Case::Degenerate
    } else if delta < 0.0 {
        Case::CaseI
    } else if q_value(c) > 0.0 {
        Case::CaseII
    } else {
        Case::Unsupported
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIParameters {
    /// Time scale `A`.
    pub a_scale: f64,
    pub b: f64,
    pub m: Parameter,
    pub p: f64,
    pub q: f64,
    pub kappa: f64,
    pub period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIIParameters {
    pub s1: f64,
    pub s2: f64,
    pub m: Parameter,
    pub rate: f64,
    pub period: f64,
}

fn precondition(expected: Case, found: Case) -> Error {
    Error::Precondition(format!(
        "expected a {expected} triple, classified as {found}"
    ))
}

pub fn solve_case1(c: &QuinticCoefficients) -> Result<CaseIParameters> {
    let case = classify(c);
    if case != Case::CaseI {
        return Err(precondition(Case::CaseI, case));
    }
    case1_unchecked(c)
}

fn case1_unchecked(c: &QuinticCoefficients) -> Result<CaseIParameters> {
    let p = c.c1 + c.c3 + c.c5;
    let q = q_value(c);
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Construction(format!(
            "c1 + c3 + c5 = {p} and 6c1 + 3c3 + 2c5 = {q} must both be positive"
        )));
    }
    let kappa = 4.0 * c.c1 + 3.0 * c.c3 + 2.0 * c.c5;
    let pq = p * q;
    let a_scale = 6f64.powf(0.25) / (2.0 * pq.powf(0.25));
    let b = q / (6.0 * p);
    let m = 0.5 - 6f64.sqrt() / 8.0 * kappa / pq.sqrt();
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Construction(format!(
            "elliptic parameter {m} outside [0, 1)"
        )));
    }
    let m = Parameter::new(m);
    let period = 8.0 * a_scale * complete_k(m)?;
    Ok(CaseIParameters {
        a_scale,
        b,
        m,
        p,
        q,
        kappa,
        period,
    })
}

pub fn solve_case2(c: &QuinticCoefficients) -> Result<CaseIIParameters> {
    let case = classify(c);
    if case != Case::CaseII {
        return Err(precondition(Case::CaseII, case));
    }
    case2_unchecked(c)
}

/// Roots of the monic quadratic `s² + β s + γ`, ascending, without cancellation.
fn real_roots(beta: f64, gamma: f64) -> Option<(f64, f64)> {
    let disc = beta * beta - 4.0 * gamma;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (beta + beta.signum() * disc.sqrt());
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (r1, r2) = (q, gamma / q);
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

fn case2_unchecked(c: &QuinticCoefficients) -> Result<CaseIIParameters> {
    let two_c5 = 2.0 * c.c5;
    let (s1, s2) = real_roots((3.0 * c.c3 + 2.0 * c.c5) / two_c5, q_value(c) / two_c5)
        .ok_or_else(|| Error::Construction("h2 has no real roots".into()))?;
    if !(s1 < s2 && s2 < 0.0) {
        return Err(Error::Construction(format!(
            "roots of h2 must satisfy s1 < s2 < 0, got ({s1}, {s2})"
        )));
    }
    let m = (s2 - s1) / (s1 * (s2 - 1.0));
    let rate = (c.c5 * s1 * (s2 - 1.0) / 3.0).sqrt();
    let m = Parameter::new(m);
    let period = 4.0 * complete_k(m)? / rate;
    Ok(CaseIIParameters {
        s1,
        s2,
        m,
        rate,
        period,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CaseParameters {
    CaseI(CaseIParameters),
    CaseII(CaseIIParameters),
}

/// The `c5` actually solved for when the input triple was degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub relative: f64,
    pub c5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub coefficients: QuinticCoefficients,
    pub case: Case,
    pub parameters: CaseParameters,
    pub perturbation: Option<Perturbation>,
}

pub fn solve(c: &QuinticCoefficients) -> Result<ClosedFormSolution> {
    let case = classify(c);
    let (parameters, perturbation) = match case {
        Case::CaseI => (CaseParameters::CaseI(case1_unchecked(c)?), None),
        Case::CaseII => (CaseParameters::CaseII(case2_unchecked(c)?), None),
        Case::Degenerate => {
            // dΔ/dc5 = -4(4c1 + c3 + 2c5); step c5 so that Δ decreases.
            let slope = -4.0 * (4.0 * c.c1 + c.c3 + 2.0 * c.c5);
            let relative = if slope > 0.0 {
                -DEGENERATE_NUDGE
            } else {
                DEGENERATE_NUDGE
            };
            let nudged = c.with_c5(c.c5 * (1.0 + relative));
            let parameters = if discriminant(&nudged).delta < 0.0 {
                CaseParameters::CaseI(case1_unchecked(&nudged)?)
            } else {
                CaseParameters::CaseII(case2_unchecked(&nudged)?)
            };
            (
                parameters,
                Some(Perturbation {
                    relative,
                    c5: nudged.c5,
                }),
            )
        }
        Case::Unsupported => {
            let reason = if !(c.c5 > 0.0) {
                "c5 must be positive"
            } else {
                "positive discriminant requires 6c1 + 3c3 + 2c5 > 0"
            };
            return Err(Error::Unsupported {
                c1: c.c1,
                c3: c.c3,
                c5: c.c5,
                reason,
            });
        }
    };
    Ok(ClosedFormSolution {
        coefficients: *c,
        case,
        parameters,
        perturbation,
    })
}

impl ClosedFormSolution {
    pub fn period(&self) -> f64 {
        match &self.parameters {
            CaseParameters::CaseI(p) => p.period,
            CaseParameters::CaseII(p) => p.period,
        }
    }

    /// Coefficients whose ODE the closed form solves exactly; differs from
    /// the input only on the degenerate path.
    pub fn solved_coefficients(&self) -> QuinticCoefficients {
        match self.perturbation {
            Some(p) => self.coefficients.with_c5(p.c5),
            None => self.coefficients,
        }
    }

    fn fold(&self, t: f64) -> f64 {
        let period = self.period();
        let tau = t.rem_euclid(period);
        if tau >= period {
            0.0
        } else {
            tau
        }
    }

    /// `u²` at a folded time `tau ∈ [0, T)`.
    fn square(&self, tau: f64) -> f64 {
        let u2 = match &self.parameters {
            CaseParameters::CaseI(p) => {
                let k = complete_k(p.m).expect("parameter validated at construction");
                let phi = jacobi_am(2.0 * k - tau / p.a_scale, p.m)
                    .expect("parameter validated at construction");
                let half = 0.5 * phi;
                let s2 = half.sin().powi(2) * p.b.sqrt();
                let c2 = half.cos().powi(2);
                s2 / (s2 + c2)
            }
            CaseParameters::CaseII(p) => {
                let j = jacobi_sn_cn_dn(p.rate * tau, p.m)
                    .expect("parameter validated at construction");
                -p.s1 * j.cn * j.cn / (j.sn * j.sn - p.s1)
            }
        };
        u2.clamp(0.0, 1.0)
    }

    /// Signed trajectory `u(t)`, extended periodically.
    pub fn evaluate(&self, t: f64) -> f64 {
        let period = self.period();
        let tau = self.fold(t);
        let magnitude = self.square(tau).sqrt();
        if tau <= 0.25 * period || tau >= 0.75 * period {
            magnitude
        } else {
            -magnitude
        }
    }

    /// `u̇(t)` from the energy integral: negative on `(0, T/2)`.
    pub fn velocity(&self, t: f64) -> f64 {
        let period = self.period();
        let tau = self.fold(t);
        let u = self.evaluate(tau);
        let speed = self.solved_coefficients().potential(u).max(0.0).sqrt();
        if tau < 0.5 * period {
            -speed
        } else {
            speed
        }
    }

    /// `ü(t)` from the ODE itself.
    pub fn acceleration(&self, t: f64) -> f64 {
        self.solved_coefficients().force(self.evaluate(t))
    }
}
