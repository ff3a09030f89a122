mod common;

use degdet::compare::{change_points, check_against_own_splitting, compare_traces, Claim};
use degdet::degdet::{solve_heap, solve_naive, SolveOptions};
use degdet::frank::frank_modified;
use degdet::trace::TraceEvent;

#[test]
fn change_points_agree_on_random_instances() {
    let mut bad = Vec::new();
    for (seed, inst) in common::corpus(250, 5, 10) {
        let wmi = solve_heap(&inst, SolveOptions::default()).unwrap();
        let frank = frank_modified(&inst, SolveOptions::default()).unwrap();
        let report = compare_traces(&wmi.trace, &frank.trace);
        if let Some(e) = report.first_mismatch() {
            bad.push(format!("seed {seed}: {e}"));
        }
        let own = check_against_own_splitting(&inst, &wmi.trace);
        if let Some(e) = own.first_mismatch() {
            bad.push(format!("seed {seed} own splitting: {e}"));
        }
    }
    assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad[..bad.len().min(10)].join("\n"));
}

#[test]
fn naive_and_modified_traces_also_agree() {
    for (seed, inst) in common::corpus(80, 4, 8) {
        let wmi = solve_naive(&inst, SolveOptions::default()).unwrap();
        let frank = frank_modified(&inst, SolveOptions::default()).unwrap();
        assert!(compare_traces(&wmi.trace, &frank.trace).is_consistent(), "seed {seed}");
    }
}

#[test]
fn example_has_matching_change_points() {
    let inst = common::fixture("worked.wmi");
    let wmi = solve_heap(&inst, SolveOptions::default()).unwrap();
    let frank = frank_modified(&inst, SolveOptions::default()).unwrap();
    let report = compare_traces(&wmi.trace, &frank.trace).into_result().unwrap();
    assert!(report.steps.len() >= 4);
    assert!(report.steps.iter().all(|s| Claim::ALL.iter().all(|&c| s.holds(c))));
}

#[test]
fn a_tampered_trace_is_caught() {
    let inst = common::fixture("worked.wmi");
    let wmi = solve_heap(&inst, SolveOptions::default()).unwrap();
    let frank = frank_modified(&inst, SolveOptions::default()).unwrap();
    let mut tampered = frank.trace.clone();
    let pos = tampered.iter().position(|e| matches!(e, TraceEvent::Graph(g) if !g.reachable.is_empty())).unwrap();
    if let TraceEvent::Graph(g) = &mut tampered[pos] {
        g.reachable.clear();
        g.sources.clear();
    }
    assert!(!compare_traces(&wmi.trace, &tampered).is_consistent());
    let points = change_points(&wmi.trace);
    assert!(!points.points.is_empty());
}
