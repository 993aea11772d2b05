//! C ABI for the hmplan planner.
//!
//! A planner handle owns one grounded problem and the result of the most
//! recent solve. Every function returns an [`HmStatus`]; details of the last
//! failure are available from [`hm_planner_last_error`].

use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hmplan::error::PlanError;
use hmplan::idao::Stopping;
use hmplan::model::{Mode, Problem};
use hmplan::pddl;
use hmplan::pipeline::{run, BaseHeuristic, Pipeline, PlannerConfig, RunResult, Verdict};
use hmplan::rational::{Rational, INFINITY};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    Unsolvable = 1,
    NoSolutionWithin = 2,
    ResourceLimit = 3,
    ParseError = 4,
    InvalidArgument = 5,
    ConfigError = 6,
    NotSolved = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmPipeline {
    Tp4 = 0,
    Hspa = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmMode {
    /// Use the mode implied by the domain.
    Default = 0,
    Sequential = 1,
    Parallel = 2,
    Temporal = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmStop {
    Fixed = 0,
    NoAndNode = 1,
    Converged = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HmConfig {
    /// An `HmPipeline` value.
    pub pipeline: u32,
    /// An `HmMode` value.
    pub mode: u32,
    /// 1 or 2.
    pub base_m: u32,
    /// An `HmStop` value.
    pub stop: u32,
    /// The cap for `HmStop::Fixed`.
    pub stop_m: u32,
    pub tt_capacity: u64,
    pub solved_capacity: u64,
    pub round_durations: bool,
    pub right_shift: bool,
    pub validate: bool,
    /// 0 means unlimited.
    pub max_expansions: u64,
}

/// Opaque planner handle.
pub struct HmPlanner {
    problem: Problem,
    result: Option<RunResult>,
    last_error: CString,
}

impl HmPlanner {
    fn fail(&mut self, status: HmStatus, msg: impl Into<String>) -> HmStatus {
        let msg = msg.into().replace('\0', " ");
        self.last_error = CString::new(msg).unwrap_or_default();
        status
    }
}

fn guard(f: impl FnOnce() -> HmStatus) -> HmStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HmStatus::Internal)
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const libc::c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    // SAFETY: the caller guarantees a valid C string.
    unsafe { CStr::from_ptr(p) }.to_str().ok()
}

#[no_mangle]
pub extern "C" fn hm_config_default() -> HmConfig {
    HmConfig {
        pipeline: HmPipeline::Hspa as u32,
        mode: HmMode::Default as u32,
        base_m: 2,
        stop: HmStop::Fixed as u32,
        stop_m: 3,
        tt_capacity: 1 << 16,
        solved_capacity: 1 << 16,
        round_durations: false,
        right_shift: true,
        validate: true,
        max_expansions: 0,
    }
}

/// Parses and grounds a domain/problem pair. On success `*out` receives a
/// handle to release with [`hm_planner_free`]. On a parse error, `*out` is
/// still set when possible so that the message can be read.
///
/// # Safety
/// `domain` and `problem` must be valid NUL-terminated strings and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_new(
    domain: *const libc::c_char,
    problem: *const libc::c_char,
    out: *mut *mut HmPlanner,
) -> HmStatus {
    if out.is_null() {
        return HmStatus::InvalidArgument;
    }
    // SAFETY: `out` is non-null and valid per the contract.
    unsafe { *out = ptr::null_mut() };
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (Some(d), Some(p)) = (unsafe { str_arg(domain) }, unsafe { str_arg(problem) }) else {
            return HmStatus::InvalidArgument;
        };
        let (problem, status, msg) = match pddl::load(d, p) {
            Ok(pr) => (pr, HmStatus::Ok, String::new()),
            Err(e) => {
                let empty = Problem::new(Vec::new(), Vec::new(), Default::default(), Default::default(), Mode::Sequential)
                    .expect("empty problem is valid");
                (empty, HmStatus::ParseError, e.to_string())
            }
        };
        let mut h = Box::new(HmPlanner { problem, result: None, last_error: CString::default() });
        if status != HmStatus::Ok {
            h.fail(status, msg);
        }
        // SAFETY: as above.
        unsafe { *out = Box::into_raw(h) };
        status
    })
}

/// # Safety
/// `planner` must be null or a handle from [`hm_planner_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_free(planner: *mut HmPlanner) {
    if !planner.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(planner) });
    }
}

fn to_config(c: &HmConfig) -> Result<PlannerConfig, String> {
    let base_heuristic = match c.base_m {
        1 => BaseHeuristic::H1,
        2 => BaseHeuristic::H2,
        m => return Err(format!("base_m must be 1 or 2, got {m}")),
    };
    let pipeline = match c.pipeline {
        x if x == HmPipeline::Tp4 as u32 => Pipeline::Tp4,
        x if x == HmPipeline::Hspa as u32 => Pipeline::Hspa,
        x => return Err(format!("unknown pipeline {x}")),
    };
    let mode = match c.mode {
        x if x == HmMode::Default as u32 => None,
        x if x == HmMode::Sequential as u32 => Some(Mode::Sequential),
        x if x == HmMode::Parallel as u32 => Some(Mode::Parallel),
        x if x == HmMode::Temporal as u32 => Some(Mode::Temporal),
        x => return Err(format!("unknown mode {x}")),
    };
    let stopping = match c.stop {
        x if x == HmStop::Fixed as u32 => Stopping::Fixed(c.stop_m as usize),
        x if x == HmStop::NoAndNode as u32 => Stopping::NoAndNode,
        x if x == HmStop::Converged as u32 => Stopping::Converged,
        x => return Err(format!("unknown stopping condition {x}")),
    };
    Ok(PlannerConfig {
        pipeline,
        mode,
        base_heuristic,
        stopping,
        tt_capacity: c.tt_capacity as usize,
        solved_capacity: c.solved_capacity as usize,
        round_durations: c.round_durations,
        right_shift: c.right_shift,
        validate: c.validate,
        max_expansions: (c.max_expansions > 0).then_some(c.max_expansions),
        upper_limit: INFINITY,
        ..PlannerConfig::default()
    })
}

/// Runs the configured pipeline; `config` may be null for the defaults.
///
/// # Safety
/// `planner` must be a live handle; `config` null or valid.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_solve(planner: *mut HmPlanner, config: *const HmConfig) -> HmStatus {
    // SAFETY: caller contract.
    let Some(h) = (unsafe { planner.as_mut() }) else { return HmStatus::InvalidArgument };
    // SAFETY: caller contract.
    let c = unsafe { config.as_ref() }.copied().unwrap_or_else(|| hm_config_default());
    guard(|| {
        h.result = None;
        let cfg = match to_config(&c) {
            Ok(cfg) => cfg,
            Err(e) => return h.fail(HmStatus::ConfigError, e),
        };
        let problem = &h.problem;
        // Deep plans recurse deeply; give the search its own large stack.
        let outcome = std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(256 << 20)
                .spawn_scoped(s, || run(problem, &cfg))
                .map(|t| t.join())
        });
        let r = match outcome {
            Ok(Ok(Ok(r))) => r,
            Ok(Ok(Err(e @ PlanError::Config(_)))) => return h.fail(HmStatus::ConfigError, e.to_string()),
            Ok(Ok(Err(e))) => return h.fail(HmStatus::Internal, e.to_string()),
            Ok(Err(_)) => return h.fail(HmStatus::Internal, "planner panicked"),
            Err(e) => return h.fail(HmStatus::Internal, e.to_string()),
        };
        let status = match &r.verdict {
            Verdict::Solved(_) => HmStatus::Ok,
            Verdict::Unsolvable => h.fail(HmStatus::Unsolvable, "problem is unsolvable"),
            Verdict::NoSolutionWithin { limit, .. } => {
                h.fail(HmStatus::NoSolutionWithin, format!("no plan within {limit}"))
            }
            Verdict::ResourceLimit { .. } => h.fail(HmStatus::ResourceLimit, "expansion limit reached"),
        };
        h.result = Some(r);
        status
    })
}

fn solved(h: &HmPlanner) -> Option<(&RunResult, &hmplan::model::Plan)> {
    let r = h.result.as_ref()?;
    r.plan().map(|p| (r, p))
}

/// The optimal metric as a fraction `num / den`.
///
/// # Safety
/// `planner` must be a live handle; `num` and `den` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_metric(planner: *const HmPlanner, num: *mut i64, den: *mut i64) -> HmStatus {
    // SAFETY: caller contract.
    let Some(h) = (unsafe { planner.as_ref() }) else { return HmStatus::InvalidArgument };
    if num.is_null() || den.is_null() {
        return HmStatus::InvalidArgument;
    }
    let Some((_, plan)) = solved(h) else { return HmStatus::NotSolved };
    let (n, d) = match plan.metric {
        Rational::Finite(r) => (*r.numer(), *r.denom()),
        Rational::Infinity => return HmStatus::Internal,
    };
    // SAFETY: both pointers are non-null and valid per the contract.
    unsafe {
        *num = n;
        *den = d;
    }
    HmStatus::Ok
}

/// Number of steps in the plan, or 0 when there is none.
///
/// # Safety
/// `planner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_step_count(planner: *const HmPlanner) -> usize {
    // SAFETY: caller contract.
    unsafe { planner.as_ref() }.and_then(solved).map_or(0, |(_, p)| p.steps.len())
}

/// The plan in the CLI's text format. Release with [`hm_string_free`].
///
/// # Safety
/// `planner` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_plan_text(planner: *const HmPlanner, out: *mut *mut libc::c_char) -> HmStatus {
    // SAFETY: caller contract.
    let Some(h) = (unsafe { planner.as_ref() }) else { return HmStatus::InvalidArgument };
    if out.is_null() {
        return HmStatus::InvalidArgument;
    }
    let Some((r, plan)) = solved(h) else { return HmStatus::NotSolved };
    let text = CString::new(plan.render(&r.problem)).unwrap_or_default();
    // SAFETY: `out` is non-null and valid.
    unsafe { *out = text.into_raw() };
    HmStatus::Ok
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hm_string_free(s: *mut libc::c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failure on this handle; empty when none. Valid
/// until the next call on the same handle.
///
/// # Safety
/// `planner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hm_planner_last_error(planner: *const HmPlanner) -> *const libc::c_char {
    // SAFETY: caller contract.
    match unsafe { planner.as_ref() } {
        Some(h) => h.last_error.as_ptr(),
        None => c"null planner".as_ptr(),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hm_status_str(status: HmStatus) -> *const libc::c_char {
    let s: &'static CStr = match status {
        HmStatus::Ok => c"ok",
        HmStatus::Unsolvable => c"unsolvable",
        HmStatus::NoSolutionWithin => c"no solution within limit",
        HmStatus::ResourceLimit => c"resource limit",
        HmStatus::ParseError => c"parse error",
        HmStatus::InvalidArgument => c"invalid argument",
        HmStatus::ConfigError => c"configuration error",
        HmStatus::NotSolved => c"not solved",
        HmStatus::Internal => c"internal error",
    };
    s.as_ptr()
}
