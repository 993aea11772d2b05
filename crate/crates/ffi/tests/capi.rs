use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hmplan::fixtures::{CHAIN_DOMAIN, CHAIN_PROBLEM, SAT1_DOMAIN, SAT1_PROBLEM};
use hmplan_ffi::*;

struct Handle(*mut HmPlanner);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { hm_planner_free(self.0) };
    }
}

fn open(d: &str, p: &str) -> (HmStatus, Handle) {
    let (d, p) = (CString::new(d).unwrap(), CString::new(p).unwrap());
    let mut h = ptr::null_mut();
    let s = unsafe { hm_planner_new(d.as_ptr(), p.as_ptr(), &mut h) };
    (s, Handle(h))
}

fn last_error(h: &Handle) -> String {
    unsafe { CStr::from_ptr(hm_planner_last_error(h.0)) }.to_string_lossy().into_owned()
}

fn metric(h: &Handle) -> (i64, i64) {
    let (mut n, mut d) = (0, 0);
    assert_eq!(unsafe { hm_planner_metric(h.0, &mut n, &mut d) }, HmStatus::Ok);
    (n, d)
}

#[test]
fn solves_satellite_with_both_pipelines() {
    let (s, h) = open(SAT1_DOMAIN, SAT1_PROBLEM);
    assert_eq!(s, HmStatus::Ok);
    for pipeline in [HmPipeline::Tp4, HmPipeline::Hspa] {
        let cfg = HmConfig { pipeline: pipeline as u32, ..hm_config_default() };
        assert_eq!(unsafe { hm_planner_solve(h.0, &cfg) }, HmStatus::Ok);
        assert_eq!(metric(&h), (7, 1));
        assert_eq!(unsafe { hm_planner_step_count(h.0) }, 7);
    }
}

#[test]
fn plan_text_matches_cli_format() {
    let (_, h) = open(CHAIN_DOMAIN, CHAIN_PROBLEM);
    assert_eq!(unsafe { hm_planner_solve(h.0, ptr::null()) }, HmStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { hm_planner_plan_text(h.0, &mut text) }, HmStatus::Ok);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    unsafe { hm_string_free(text) };
    assert_eq!(s, "0: (make-b) [2]\n2: (make-c) [3]\n");
    assert_eq!(metric(&h), (5, 1));
}

#[test]
fn parse_errors_are_reported() {
    let (s, h) = open("(define (domain d)", SAT1_PROBLEM);
    assert_eq!(s, HmStatus::ParseError);
    assert!(last_error(&h).contains("syntax error"), "{}", last_error(&h));
}

#[test]
fn null_arguments_are_rejected() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { hm_planner_new(ptr::null(), ptr::null(), &mut h) }, HmStatus::InvalidArgument);
    assert!(h.is_null());
    assert_eq!(unsafe { hm_planner_solve(ptr::null_mut(), ptr::null()) }, HmStatus::InvalidArgument);
    assert_eq!(unsafe { hm_planner_step_count(ptr::null()) }, 0);
}

#[test]
fn bad_config_and_unsolved_queries() {
    let (_, h) = open(SAT1_DOMAIN, SAT1_PROBLEM);
    let (mut n, mut d) = (0, 0);
    assert_eq!(unsafe { hm_planner_metric(h.0, &mut n, &mut d) }, HmStatus::NotSolved);
    let cfg = HmConfig { mode: 42, ..hm_config_default() };
    assert_eq!(unsafe { hm_planner_solve(h.0, &cfg) }, HmStatus::ConfigError);
    assert!(last_error(&h).contains("mode"));
    let cfg = HmConfig { max_expansions: 1, ..hm_config_default() };
    assert_eq!(unsafe { hm_planner_solve(h.0, &cfg) }, HmStatus::ResourceLimit);
}

#[test]
fn unsolvable_problem() {
    let p = "(define (problem sat-x) (:domain satellite-small) (:objects d1 d2 - direction)
             (:init (point d1)) (:goal (img d2)))";
    let (_, h) = open(SAT1_DOMAIN, p);
    assert_eq!(unsafe { hm_planner_solve(h.0, ptr::null()) }, HmStatus::Unsolvable);
    let s = unsafe { CStr::from_ptr(hm_status_str(HmStatus::Unsolvable)) };
    assert_eq!(s.to_str().unwrap(), "unsolvable");
}

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libhmplan_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let exe = tmp.join("hmplan_smoke");
    let (dom, prob) = (tmp.join("sat1_domain.pddl"), tmp.join("sat1_problem.pddl"));
    std::fs::write(&dom, SAT1_DOMAIN).unwrap();
    std::fs::write(&prob, SAT1_PROBLEM).unwrap();
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).arg(&dom).arg(&prob).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("metric 7/1 steps 7\n"), "{text}");
}
