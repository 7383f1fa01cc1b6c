//! C interface to the argverdict engine.
//!
//! Frameworks and reports are opaque heap handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! [`ArgvStatus`]; on failure the message is available from
//! [`argv_last_error_message`] on the same thread. Strings returned by the
//! library are released with [`argv_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use argverdict::reward::{self, RewardSpec};
use argverdict::{build_ita_qbaf, evaluate, threshold, Error, Label, Qbaf, StrengthReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Range = 4,
    InvalidTarget = 5,
    UnsupportedStructure = 6,
    InvalidQbaf = 7,
    Parse = 8,
    NotFound = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgvLabel {
    True = 0,
    False = 1,
    Uncertain = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgvRelation {
    Support = 0,
    Attack = 1,
}

/// A claim-centred framework.
pub struct ArgvQbaf {
    qbaf: Qbaf,
    /// Leaf texts when the framework was built through this interface and
    /// may still grow.
    star: Option<(Vec<String>, Vec<String>)>,
}

/// Strengths, verdict and gradient from one evaluation.
pub struct ArgvReport(StrengthReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: ArgvStatus, msg: impl Into<String>) -> ArgvStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ArgvStatus {
    let status = match &e {
        Error::InvalidInput(_) => ArgvStatus::InvalidInput,
        Error::Range { .. } => ArgvStatus::Range,
        Error::InvalidTarget(_) => ArgvStatus::InvalidTarget,
        Error::UnsupportedStructure(_) => ArgvStatus::UnsupportedStructure,
        Error::InvalidQbaf(_) => ArgvStatus::InvalidQbaf,
        Error::Parse { .. } | Error::Json(_) => ArgvStatus::Parse,
        _ => ArgvStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ArgvStatus>) -> ArgvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ArgvStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ArgvStatus::Internal, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, ArgvStatus> {
    if p.is_null() {
        return Err(fail(ArgvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ArgvStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, ArgvStatus> {
    p.as_mut()
        .ok_or_else(|| fail(ArgvStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, ArgvStatus> {
    p.as_ref()
        .ok_or_else(|| fail(ArgvStatus::NullPointer, format!("{what} is null")))
}

fn to_c_string(s: String) -> Result<*mut c_char, ArgvStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(ArgvStatus::Internal, "string contains a NUL byte"))
}

fn label_to_c(l: Label) -> ArgvLabel {
    match l {
        Label::True => ArgvLabel::True,
        Label::False => ArgvLabel::False,
        Label::Uncertain => ArgvLabel::Uncertain,
    }
}

fn label_from_c(l: ArgvLabel) -> Label {
    match l {
        ArgvLabel::True => Label::True,
        ArgvLabel::False => Label::False,
        ArgvLabel::Uncertain => Label::Uncertain,
    }
}

/// Creates a framework holding only the claim (id `"c"`).
///
/// # Safety
/// `claim` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_new(claim: *const c_char, out: *mut *mut ArgvQbaf) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let claim = str_arg(claim, "claim")?;
        let qbaf = build_ita_qbaf::<&str, &str>(claim, &[], &[]).map_err(from_error)?;
        *out = Box::into_raw(Box::new(ArgvQbaf {
            qbaf,
            star: Some((Vec::new(), Vec::new())),
        }));
        Ok(())
    })
}

/// Adds a supporter (`s1`, `s2`, ...) or attacker (`t1`, `t2`, ...) of the
/// claim and writes its id, which the caller frees.
///
/// # Safety
/// `q` must come from this library; `text` must be a valid string; `out_id`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_add_argument(
    q: *mut ArgvQbaf,
    relation: ArgvRelation,
    text: *const c_char,
    out_id: *mut *mut c_char,
) -> ArgvStatus {
    guard(|| {
        let q = q
            .as_mut()
            .ok_or_else(|| fail(ArgvStatus::NullPointer, "framework is null"))?;
        let text = str_arg(text, "text")?.to_string();
        let Some((supports, attacks)) = q.star.as_mut() else {
            return Err(fail(
                ArgvStatus::UnsupportedStructure,
                "arguments can only be added to frameworks created with argv_qbaf_new",
            ));
        };
        let (mut s, mut t) = (supports.clone(), attacks.clone());
        let id = match relation {
            ArgvRelation::Support => {
                s.push(text);
                format!("s{}", s.len())
            }
            ArgvRelation::Attack => {
                t.push(text);
                format!("t{}", t.len())
            }
        };
        let rebuilt = build_ita_qbaf(&q.qbaf.claim().text, &s, &t)
            .and_then(|n| {
                let mut scores = q.qbaf.base_scores().clone();
                scores.remove(&q.qbaf.claim().id);
                n.set_base_scores(&scores)
            })
            .map_err(from_error)?;
        q.qbaf = rebuilt;
        q.star = Some((s, t));
        if !out_id.is_null() {
            *out_id = to_c_string(id)?;
        }
        Ok(())
    })
}

/// Sets the base score of a non-claim argument.
///
/// # Safety
/// `q` must come from this library; `id` must be a valid string.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_set_base_score(
    q: *mut ArgvQbaf,
    id: *const c_char,
    score: f64,
) -> ArgvStatus {
    guard(|| {
        let q = q
            .as_mut()
            .ok_or_else(|| fail(ArgvStatus::NullPointer, "framework is null"))?;
        let id = str_arg(id, "id")?;
        let scores = BTreeMap::from([(id.to_string(), score)]);
        q.qbaf = q.qbaf.set_base_scores(&scores).map_err(from_error)?;
        Ok(())
    })
}

/// Parses a framework from its JSON form.
///
/// # Safety
/// `json` must be a valid string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_from_json(json: *const c_char, out: *mut *mut ArgvQbaf) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let qbaf = Qbaf::from_json(str_arg(json, "json")?).map_err(from_error)?;
        *out = Box::into_raw(Box::new(ArgvQbaf { qbaf, star: None }));
        Ok(())
    })
}

/// Serialises a framework to JSON. Free the result with
/// [`argv_string_free`].
///
/// # Safety
/// `q` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_to_json(q: *const ArgvQbaf, out: *mut *mut c_char) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let q = handle(q, "framework")?;
        *out = to_c_string(q.qbaf.to_json().map_err(from_error)?)?;
        Ok(())
    })
}

/// # Safety
/// `q` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn argv_qbaf_free(q: *mut ArgvQbaf) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Evaluates the framework under DF-QuAD and thresholds the claim.
///
/// # Safety
/// `q` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_evaluate(q: *const ArgvQbaf, out: *mut *mut ArgvReport) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let q = handle(q, "framework")?;
        let report = evaluate(&q.qbaf).map_err(from_error)?;
        *out = Box::into_raw(Box::new(ArgvReport(report)));
        Ok(())
    })
}

/// Claim strength, or NaN for a null report.
///
/// # Safety
/// `r` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn argv_report_claim_strength(r: *const ArgvReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.claim_strength)
}

/// # Safety
/// `r` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_report_verdict(r: *const ArgvReport, out: *mut ArgvLabel) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = label_to_c(handle(r, "report")?.0.verdict);
        Ok(())
    })
}

/// Final strength of argument `id`.
///
/// # Safety
/// `r` must come from this library; `id` must be a valid string; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_report_strength(
    r: *const ArgvReport,
    id: *const c_char,
    out: *mut f64,
) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = handle(r, "report")?;
        let id = str_arg(id, "id")?;
        *out = *r
            .0
            .strengths
            .get(id)
            .ok_or_else(|| fail(ArgvStatus::NotFound, format!("no argument {id:?}")))?;
        Ok(())
    })
}

/// Derivative of the claim strength with respect to the base score of leaf
/// `id`. Available for depth-1 frameworks only.
///
/// # Safety
/// As for [`argv_report_strength`].
#[no_mangle]
pub unsafe extern "C" fn argv_report_gradient(
    r: *const ArgvReport,
    id: *const c_char,
    out: *mut f64,
) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = handle(r, "report")?;
        let id = str_arg(id, "id")?;
        *out = *r
            .0
            .gradient
            .get(id)
            .ok_or_else(|| fail(ArgvStatus::NotFound, format!("no gradient entry for {id:?}")))?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_report_to_json(r: *const ArgvReport, out: *mut *mut c_char) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let r = handle(r, "report")?;
        *out = to_c_string(r.0.to_json().map_err(from_error)?)?;
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn argv_report_free(r: *mut ArgvReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// The fixed threshold map from strength to verdict.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_threshold(strength: f64, out: *mut ArgvLabel) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = label_to_c(threshold(strength).map_err(from_error)?);
        Ok(())
    })
}

/// Argumentation reward for `strength` given the gold label and plateau
/// width `delta` in `[0, 1/3]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argv_reward(gold: ArgvLabel, strength: f64, delta: f64, out: *mut f64) -> ArgvStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec = RewardSpec::new(delta).map_err(from_error)?;
        *out = reward::reward(label_from_c(gold), strength, spec).map_err(from_error)?;
        Ok(())
    })
}

/// Group-normalised advantages of `n` rewards, written to `out` (room for
/// `n` values).
///
/// # Safety
/// `rewards` must point to `n` readable values and `out` to `n` writable
/// ones.
#[no_mangle]
pub unsafe extern "C" fn argv_group_advantages(rewards: *const f64, n: usize, out: *mut f64) -> ArgvStatus {
    guard(|| {
        if rewards.is_null() || out.is_null() {
            return Err(fail(ArgvStatus::NullPointer, "rewards or out is null"));
        }
        let input = std::slice::from_raw_parts(rewards, n);
        let adv = reward::group_advantages(input).map_err(from_error)?;
        std::slice::from_raw_parts_mut(out, n).copy_from_slice(&adv);
        Ok(())
    })
}

/// +100 when `parsed` is true and `predicted` equals `gold`, else −100.
#[no_mangle]
pub extern "C" fn argv_direct_reward(gold: ArgvLabel, predicted: ArgvLabel, parsed: bool) -> f64 {
    reward::direct_reward(label_from_c(gold), parsed.then(|| label_from_c(predicted)))
}

/// Copy of the last error message on this thread, or null. Free with
/// [`argv_string_free`].
#[no_mangle]
pub extern "C" fn argv_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |m| m.clone().into_raw())
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn argv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
