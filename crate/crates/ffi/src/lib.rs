//! C ABI over the `quinticate` library.
//!
//! Every fallible function returns a [`QnStatus`] and writes its result through
//! an out-pointer. On failure the out-pointer is left untouched and
//! [`qn_last_error_message`] describes the error. Handles are opaque and must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quinticate::chebyshev::{model_coefficients, QuinticCoefficients};
use quinticate::models::OscillatorModel;
use quinticate::quintic::{classify, discriminant, solve, Case, ClosedFormSolution};
use quinticate::validation::residual_sup_norm;
use quinticate::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    InvalidModel = 4,
    Precondition = 5,
    Construction = 6,
    Unsupported = 7,
    NonFinite = 8,
    Quadrature = 9,
    StepUnderflow = 10,
    SpanMismatch = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnModelKind {
    Relativistic = 0,
    CableMass = 1,
    DuffingRelativistic = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnCase {
    CaseI = 0,
    CaseII = 1,
    Degenerate = 2,
    Unsupported = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QnCoefficients {
    pub c1: f64,
    pub c3: f64,
    pub c5: f64,
    pub discriminant: f64,
}

/// Opaque oscillator model.
pub struct QnModel(OscillatorModel);

/// Opaque closed-form solution of a quintic oscillator.
pub struct QnSolution(ClosedFormSolution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static VERSION: &CStr =
    match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };

struct Failure(QnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain { .. } => QnStatus::Domain,
            Error::NonFinite { .. } => QnStatus::NonFinite,
            Error::Precondition(_) => QnStatus::Precondition,
            Error::Construction(_) => QnStatus::Construction,
            Error::Unsupported { .. } => QnStatus::Unsupported,
            Error::InvalidModel { .. } => QnStatus::InvalidModel,
            Error::Quadrature { .. } => QnStatus::Quadrature,
            Error::StepUnderflow { .. } => QnStatus::StepUnderflow,
            Error::SpanMismatch { .. } => QnStatus::SpanMismatch,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QnStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            QnStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_case(c: Case) -> QnCase {
    match c {
        Case::CaseI => QnCase::CaseI,
        Case::CaseII => QnCase::CaseII,
        Case::Degenerate => QnCase::Degenerate,
        Case::Unsupported => QnCase::Unsupported,
    }
}

fn export(c: &QuinticCoefficients) -> QnCoefficients {
    QnCoefficients {
        c1: c.c1,
        c3: c.c3,
        c5: c.c5,
        discriminant: discriminant(c).delta,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qn_version() -> *const c_char {
    VERSION.as_ptr()
}

/// Message for the most recent failure on the calling thread, or null if the
/// last call succeeded. The pointer stays valid until the next call into the
/// library on the same thread.
#[no_mangle]
pub extern "C" fn qn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Creates a model with initial displacement `a`. `b` is ignored by the
/// relativistic model.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn qn_model_new(
    kind: QnModelKind,
    a: f64,
    b: f64,
    out: *mut *mut QnModel,
) -> QnStatus {
    guard(|| {
        let model = match kind {
            QnModelKind::Relativistic => OscillatorModel::relativistic(a),
            QnModelKind::CableMass => OscillatorModel::cable_mass(a, b),
            QnModelKind::DuffingRelativistic => OscillatorModel::duffing_relativistic(a, b),
        };
        model.validate()?;
        write(out, Box::into_raw(Box::new(QnModel(model))), "out")
    })
}

/// Creates a generic model with force `q[0] x + q[1] x^3 + q[2] x^5 + ...`.
///
/// # Safety
/// `q` must point to `len` readable doubles; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_model_new_generic(
    a: f64,
    q: *const f64,
    len: usize,
    out: *mut *mut QnModel,
) -> QnStatus {
    guard(|| {
        if q.is_null() {
            return Err(null("q"));
        }
        if len == 0 {
            return Err(Failure(
                QnStatus::InvalidArgument,
                "generic force needs at least one coefficient".into(),
            ));
        }
        let model = OscillatorModel::generic(a, std::slice::from_raw_parts(q, len).to_vec());
        model.validate()?;
        write(out, Box::into_raw(Box::new(QnModel(model))), "out")
    })
}

/// # Safety
/// `model` must be null or a handle from `qn_model_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_model_free(model: *mut QnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Closed-form quintic coefficients of a model.
///
/// # Safety
/// `model` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_model_coefficients(
    model: *const QnModel,
    out: *mut QnCoefficients,
) -> QnStatus {
    guard(|| {
        let model = deref(model, "model")?;
        write(out, export(&model_coefficients(&model.0)?), "out")
    })
}

/// Exact period of the original (unprojected) oscillator.
///
/// # Safety
/// `model` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_model_exact_period(model: *const QnModel, out: *mut f64) -> QnStatus {
    guard(|| {
        let model = deref(model, "model")?;
        write(out, model.0.exact_period()?.value, "out")
    })
}

/// Classification of a coefficient triple.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_classify(c1: f64, c3: f64, c5: f64, out: *mut QnCase) -> QnStatus {
    guard(|| {
        write(
            out,
            to_case(classify(&QuinticCoefficients::new(c1, c3, c5))),
            "out",
        )
    })
}

/// Closed-form solution of `u'' = -(c1 u + c3 u^3 + c5 u^5)`, `u(0) = 1`, `u'(0) = 0`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_new(
    c1: f64,
    c3: f64,
    c5: f64,
    out: *mut *mut QnSolution,
) -> QnStatus {
    guard(|| {
        let s = solve(&QuinticCoefficients::new(c1, c3, c5))?;
        write(out, Box::into_raw(Box::new(QnSolution(s))), "out")
    })
}

/// Closed-form solution of the quintic projection of a model.
///
/// # Safety
/// `model` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_from_model(
    model: *const QnModel,
    out: *mut *mut QnSolution,
) -> QnStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let s = solve(&model_coefficients(&model.0)?)?;
        write(out, Box::into_raw(Box::new(QnSolution(s))), "out")
    })
}

/// # Safety
/// `solution` must be null or a handle from `qn_solution_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_free(solution: *mut QnSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// # Safety
/// `solution` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_period(
    solution: *const QnSolution,
    out: *mut f64,
) -> QnStatus {
    guard(|| write(out, deref(solution, "solution")?.0.period(), "out"))
}

/// Case used to build the solution. A degenerate triple reports the case of
/// its perturbed coefficients.
///
/// # Safety
/// `solution` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_case(
    solution: *const QnSolution,
    out: *mut QnCase,
) -> QnStatus {
    guard(|| write(out, to_case(deref(solution, "solution")?.0.case), "out"))
}

/// Displacement and velocity at time `t`. Either output may be null.
///
/// # Safety
/// `solution` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_evaluate(
    solution: *const QnSolution,
    t: f64,
    u: *mut f64,
    u_dot: *mut f64,
) -> QnStatus {
    guard(|| {
        let s = &deref(solution, "solution")?.0;
        if !t.is_finite() {
            return Err(Failure(
                QnStatus::InvalidArgument,
                format!("t = {t} is not finite"),
            ));
        }
        if let Some(u) = u.as_mut() {
            *u = s.evaluate(t);
        }
        if let Some(v) = u_dot.as_mut() {
            *v = s.velocity(t);
        }
        Ok(())
    })
}

/// Displacements at `n` times; `u[i]` receives the value at `t[i]`.
///
/// # Safety
/// `t` must point to `n` readable doubles and `u` to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qn_solution_evaluate_many(
    solution: *const QnSolution,
    t: *const f64,
    n: usize,
    u: *mut f64,
) -> QnStatus {
    guard(|| {
        let s = &deref(solution, "solution")?.0;
        if n == 0 {
            return Ok(());
        }
        if t.is_null() || u.is_null() {
            return Err(null(if t.is_null() { "t" } else { "u" }));
        }
        let times = std::slice::from_raw_parts(t, n);
        if let Some(bad) = times.iter().find(|x| !x.is_finite()) {
            return Err(Failure(
                QnStatus::InvalidArgument,
                format!("t = {bad} is not finite"),
            ));
        }
        let values = std::slice::from_raw_parts_mut(u, n);
        for (v, &x) in values.iter_mut().zip(times) {
            *v = s.evaluate(x);
        }
        Ok(())
    })
}

/// Sup-norm of the original model's residual along the closed-form solution
/// of its projection, on `grid` uniform points over a quarter period.
///
/// # Safety
/// `model` and `solution` must be live handles; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qn_residual_sup_norm(
    model: *const QnModel,
    solution: *const QnSolution,
    grid: usize,
    out: *mut f64,
) -> QnStatus {
    guard(|| {
        let model = deref(model, "model")?;
        let solution = deref(solution, "solution")?;
        write(
            out,
            residual_sup_norm(&model.0, &solution.0, grid)?.sup_norm,
            "out",
        )
    })
}
