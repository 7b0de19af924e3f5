//! Residuals, period ratios and an independent Runge–Kutta oracle.

use serde::{Deserialize, Serialize};

use crate::chebyshev::{model_coefficients, QuinticCoefficients};
use crate::error::{Error, Result};
use crate::models::{ModelKind, OscillatorModel};
use crate::quad;
use crate::quintic::{solve, ClosedFormSolution};

pub const DEFAULT_GRID: usize = 4001;
/// Grid used to confirm that a sup-norm has converged in the sampling.
pub const REFINED_GRID: usize = 16001;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-10;
pub const TABLE_TOLERANCE: f64 = 1e-5;
pub const REFINEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub model: OscillatorModel,
    pub coefficients: QuinticCoefficients,
    pub grid: usize,
    pub sup_norm: f64,
    pub argmax_t: f64,
    /// `(t, L u)` pairs on the uniform grid over `[0, T/4]`.
    pub samples: Vec<(f64, f64)>,
}

/// `L u = ü - f_a(u)` with `ü` taken from the quintic ODE, sampled
/// uniformly over the first quarter period.
pub fn residual_sup_norm(
    model: &OscillatorModel,
    solution: &ClosedFormSolution,
    grid: usize,
) -> Result<ResidualReport> {
    if grid < 2 {
        return Err(Error::domain("grid", grid as f64, "grid >= 2"));
    }
    let quarter = 0.25 * solution.period();
    let samples: Vec<(f64, f64)> = (0..grid)
        .map(|i| {
            let t = quarter * i as f64 / (grid - 1) as f64;
            (t, residual_at(model, solution, t))
        })
        .collect();
    let (argmax_t, sup_norm) = samples.iter().fold((0.0, 0.0_f64), |best, &(t, r)| {
        if r.abs() > best.1 {
            (t, r.abs())
        } else {
            best
        }
    });
    Ok(ResidualReport {
        model: model.clone(),
        coefficients: solution.coefficients,
        grid,
        sup_norm,
        argmax_t,
        samples,
    })
}

/// `L u(t)` for a single time.
pub fn residual_at(model: &OscillatorModel, solution: &ClosedFormSolution, t: f64) -> f64 {
    let u = solution.evaluate(t);
    solution.acceleration(t) - model.restoring_force(u)
}

/// Validates `model`, quinticates it with the closed-form coefficients and
/// solves the resulting quintic.
pub fn quinticate(model: &OscillatorModel) -> Result<(QuinticCoefficients, ClosedFormSolution)> {
    model.validate()?;
    let coefficients = model_coefficients(model)?;
    let solution = solve(&coefficients)?;
    Ok((coefficients, solution))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodComparison {
    pub exact: f64,
    pub approximate: f64,
    pub ratio: f64,
}

pub fn period_ratio(model: &OscillatorModel) -> Result<PeriodComparison> {
    let (_, solution) = quinticate(model)?;
    let exact = model.exact_period()?.value;
    let approximate = solution.period();
    Ok(PeriodComparison {
        exact,
        approximate,
        ratio: exact / approximate,
    })
}

/// Period of the quintic oscillator by quadrature of
/// `T = 2√6 ∫_0^π dφ / √h2((1 - cos φ) / 2)`.
pub fn quintic_period_by_quadrature(c: &QuinticCoefficients, rel_tol: f64) -> Result<f64> {
    let integrand = |phi: f64| 1.0 / c.h2(0.5 * (1.0 - phi.cos())).sqrt();
    let integral = quad::integrate(integrand, 0.0, std::f64::consts::PI, 0.0, rel_tol)?;
    Ok(2.0 * 6f64.sqrt() * integral)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub velocities: Vec<f64>,
    pub tolerance: f64,
}

impl OracleTrajectory {
    /// Largest deviation of `½ u̇² - ½ Φ(u)` from its initial value zero.
    pub fn energy_drift<P: Fn(f64) -> f64>(&self, potential: P) -> f64 {
        self.values
            .iter()
            .zip(&self.velocities)
            .map(|(&u, &v)| (0.5 * v * v - 0.5 * potential(u)).abs())
            .fold(0.0, f64::max)
    }

    pub fn end_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}

// Dormand–Prince 5(4) tableau. The system is autonomous, so the nodes
// `c_i` never enter; the last row doubles as the fifth-order weights.
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
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [f64; 2];

/// Integrates `ü = force(u)`, `u(0) = 1`, `u̇(0) = 0` on `[0, t_end]` and
/// records `samples` uniformly spaced states, endpoints included. Steps are
/// shortened to land on every output time, so no interpolation is involved.
pub fn rk_oracle<F: Fn(f64) -> f64>(
    force: F,
    t_end: f64,
    tol: f64,
    samples: usize,
) -> Result<OracleTrajectory> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::domain("tol", tol, "1e-13 <= tol <= 1e-6"));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain("t_end", t_end, "positive and finite"));
    }
    if samples < 2 {
        return Err(Error::domain("samples", samples as f64, "samples >= 2"));
    }
    let rhs = |y: &State| -> State { [y[1], force(y[0])] };

    let mut times = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    let mut velocities = Vec::with_capacity(samples);
    let mut y: State = [1.0, 0.0];
    let mut k_first = rhs(&y);
    let mut t = 0.0;
    let mut h = (1e-2 * tol.powf(0.2)).min(t_end / (samples - 1) as f64);
    let mut previous_error = 1.0_f64;
    times.push(0.0);
    values.push(y[0]);
    velocities.push(y[1]);

    for i in 1..samples {
        let t_out = if i == samples - 1 {
            t_end
        } else {
            t_end * i as f64 / (samples - 1) as f64
        };
        while t < t_out {
            let remaining = t_out - t;
            // Stretch by up to 0.1% rather than leave a sliver before t_out.
            let landing = h >= remaining || remaining - h < 1e-3 * h;
            let step = if landing { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) && !landing {
                return Err(Error::StepUnderflow { t, h: step });
            }

            let mut k = [[0.0; 2]; 7];
            k[0] = k_first;
            for s in 1..7 {
                let mut stage = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    stage[0] += step * A[s][j] * kj[0];
                    stage[1] += step * A[s][j] * kj[1];
                }
                k[s] = rhs(&stage);
            }
            let mut next = y;
            let mut err = [0.0; 2];
            for d in 0..2 {
                next[d] += step * (0..6).map(|s| A[6][s] * k[s][d]).sum::<f64>();
                err[d] = step * (0..7).map(|s| E[s] * k[s][d]).sum::<f64>();
            }
            let norm = (0..2)
                .map(|d| (err[d] / (tol + tol * y[d].abs().max(next[d].abs()))).powi(2))
                .sum::<f64>();
            let norm = (0.5 * norm).sqrt().max(1e-16);

            if norm <= 1.0 {
                t = if landing { t_out } else { t + step };
                y = next;
                k_first = k[6];
                let factor = 0.9 * norm.powf(-0.14) * previous_error.powf(0.08);
                let proposed = step * factor.clamp(0.2, 10.0);
                // A truncated landing step says little about the scale the
                // controller had settled on.
                h = if landing { proposed.max(h) } else { proposed };
                previous_error = norm.max(1e-4);
            } else {
                h = step * (0.9 * norm.powf(-0.2)).max(0.2);
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t, h });
                }
            }
        }
        times.push(t_out);
        values.push(y[0]);
        velocities.push(y[1]);
    }
    Ok(OracleTrajectory {
        times,
        values,
        velocities,
        tolerance: tol,
    })
}

/// `max_i |closed(t_i) - oracle(t_i)|` over the oracle's sample times.
pub fn compare_trajectories(closed: &ClosedFormSolution, oracle: &OracleTrajectory) -> Result<f64> {
    let period = closed.period();
    let start = oracle.times.first().copied().unwrap_or(f64::NAN);
    let end = oracle.end_time();
    if start != 0.0 || !((end - period).abs() <= 0.01 * period) {
        return Err(Error::SpanMismatch {
            closed: period,
            oracle: end - start,
        });
    }
    Ok(oracle
        .times
        .iter()
        .zip(&oracle.values)
        .map(|(&t, &u)| (closed.evaluate(t) - u).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub a: f64,
    pub b: Option<f64>,
    pub expected: f64,
}

const fn cell(a: f64, b: Option<f64>, expected: f64) -> TableCell {
    TableCell { a, b, expected }
}

/// Relativistic oscillator.
pub const TABLE1: [TableCell; 6] = [
    cell(1.0, None, 0.0013005),
    cell(2.0, None, 0.0109030),
    cell(3.0, None, 0.0219219),
    cell(8.0, None, 0.0375439),
    cell(20.0, None, 0.0278857),
    cell(30.0, None, 0.0216839),
];

/// Duffing-relativistic oscillator, negative discriminant side.
pub const TABLE2: [TableCell; 3] = [
    cell(0.95, Some(0.5), 0.000487249),
    cell(1.3, Some(0.7), 0.00229373),
    cell(1.69, Some(1.0), 0.00724625),
];

/// Duffing-relativistic oscillator, positive discriminant side.
pub const TABLE3: [TableCell; 3] = [
    cell(1.0, Some(0.5), 0.00064411),
    cell(1.4, Some(0.7), 0.00298016),
    cell(1.7, Some(1.0), 0.00737777),
];

pub fn table(which: u8) -> Result<&'static [TableCell]> {
    match which {
        1 => Ok(&TABLE1),
        2 => Ok(&TABLE2),
        3 => Ok(&TABLE3),
        other => Err(Error::domain("table", other as f64, "1, 2 or 3")),
    }
}

impl TableCell {
    pub fn model(&self) -> OscillatorModel {
        match self.b {
            None => OscillatorModel::relativistic(self.a),
            Some(b) => OscillatorModel::duffing_relativistic(self.a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub cell: TableCell,
    pub kind: ModelKind,
    pub computed: f64,
    /// Sup-norm on [`REFINED_GRID`], for the sampling-convergence check.
    pub refined: f64,
    pub abs_error: f64,
    pub pass: bool,
}

/// Recomputes every cell of a table; a cell passes when it is within
/// [`TABLE_TOLERANCE`] of the printed value and stable under grid refinement.
pub fn reproduce_table(which: u8, grid: usize) -> Result<Vec<CellOutcome>> {
    table(which)?
        .iter()
        .map(|cell| {
            let model = cell.model();
            let (_, solution) = quinticate(&model)?;
            let computed = residual_sup_norm(&model, &solution, grid)?.sup_norm;
            let refined = residual_sup_norm(&model, &solution, REFINED_GRID.max(grid))?.sup_norm;
            let abs_error = (computed - cell.expected).abs();
            Ok(CellOutcome {
                cell: *cell,
                kind: model.kind,
                computed,
                refined,
                abs_error,
                pass: abs_error <= TABLE_TOLERANCE
                    && (refined - computed).abs() <= REFINEMENT_TOLERANCE,
            })
        })
        .collect()
}
