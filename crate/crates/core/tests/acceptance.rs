//! Release gate: runs acceptance criteria 1-8 with their runtime limits and
//! prints one PASS/FAIL line per criterion. Criteria 1 and 2 are also
//! checked against brute-force oracles written here, so a red line can be
//! attributed either to the library or to the reference values.

use std::collections::BTreeSet;
use std::process::ExitCode;

use rmcodes::golden;
use rmcodes::verify::{self, Group, VerifyOptions};

fn ternary_weight(mut a: u64) -> u32 {
    let mut w = 0;
    while a > 0 {
        w += (a % 3 != 0) as u32;
        a /= 3;
    }
    w
}

/// Class minima and divisibility-maximal minima of `I(3,m,2)` by direct
/// multiplication by 3 modulo `3^m - 1`.
fn brute_r_m(m: u32) -> (Vec<u64>, Vec<u64>) {
    let n = 3u64.pow(m) - 1;
    let mut reps = BTreeSet::new();
    for a in (1..n).filter(|&a| ternary_weight(a) <= 2) {
        let mut min = a;
        let mut b = a * 3 % n;
        while b != a {
            min = min.min(b);
            b = b * 3 % n;
        }
        reps.insert(min);
    }
    let reps: Vec<u64> = reps.into_iter().collect();
    let maximal = reps
        .iter()
        .copied()
        .filter(|&a| !reps.iter().any(|&b| b != a && b % a == 0))
        .collect();
    (reps, maximal)
}

/// Order of `-a` modulo `e` by repeated multiplication.
fn brute_order_of_negative(a: u64, e: u64) -> u64 {
    let x = e - a % e;
    let mut y = x;
    let mut k = 1;
    while y != 1 {
        y = y * x % e;
        k += 1;
    }
    k
}

fn oracle_notes() -> Vec<String> {
    let mut notes = Vec::new();
    let (r4, m4) = brute_r_m(4);
    let (_, m6) = brute_r_m(6);
    let as_u64 = |v: &[u128]| v.iter().map(|&x| x as u64).collect::<Vec<_>>();
    notes.push(format!(
        "oracle: R(3,4,2) {} the printed set, M(3,4,2) {} the printed set",
        if r4 == as_u64(golden::R_3_4_2) { "matches" } else { "differs from" },
        if m4 == as_u64(golden::M_3_4_2) { "matches" } else { "differs from" },
    ));
    if m6 != as_u64(golden::M_3_6_2) {
        notes.push(format!(
            "oracle: brute force gives M(3,6,2) = {m6:?}; printed {:?} (wt_3(58) = {})",
            golden::M_3_6_2,
            ternary_weight(58)
        ));
    }
    for &(q, a, l, e) in golden::ORDER_TABLE_CELLS {
        let got = brute_order_of_negative(a, e);
        if got != l || e != q + a {
            notes.push(format!(
                "oracle: printed cell (q={q}, a={a}, l={l}, e={e}) but direct powering gives order {got}"
            ));
        }
    }
    notes
}

fn main() -> ExitCode {
    // Honour `cargo test -- <filter>` loosely: skip when filtered to other names.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str()) || a.starts_with("criterion")) {
        return ExitCode::SUCCESS;
    }

    let opts = VerifyOptions::default();
    let mut failed = 0;
    for group in Group::ALL {
        let outcome = verify::run_one(group, &opts);
        println!("{outcome}");
        failed += (!outcome.passed) as usize;
    }
    for note in oracle_notes() {
        println!("{note}");
    }
    println!(
        "acceptance: {} of {} criteria passed",
        Group::ALL.len() - failed,
        Group::ALL.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
