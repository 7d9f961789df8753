//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//! Every comparison is exact integer equality.

use std::collections::BTreeSet;
use std::time::Instant;

use cantor_kabelian::factors;
use cantor_kabelian::formulas::{self, KFastEvaluator, KIndexing};
use cantor_kabelian::kabelian;
use cantor_kabelian::regularity::{guess_representation, verify_representation};
use cantor_kabelian::sequence;
use cantor_kabelian::word::Word;
use num_bigint::BigInt;

fn conclude(id: u32, label: &str, started: Instant, failures: Vec<String>) {
    let elapsed = started.elapsed();
    if failures.is_empty() {
        println!("criterion {id} ({label}): PASS [{elapsed:.2?}]");
    } else {
        println!(
            "criterion {id} ({label}): FAIL ({} issues) [{elapsed:.2?}]",
            failures.len()
        );
        for f in failures.iter().take(10) {
            println!("  - {f}");
        }
        panic!("criterion {id} failed");
    }
}

#[test]
fn criterion_1_prefix_fidelity() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let expected = "101000101000000000101000101";
    let got = sequence::prefix(27).to_string();
    if got != expected {
        failures.push(format!("prefix(27) = {got}, expected {expected}"));
    }
    conclude(1, "prefix fidelity", started, failures);
}

#[test]
fn criterion_2_abelian_complexity() {
    let started = Instant::now();
    let mut failures = Vec::new();
    if formulas::abelian_complexity(1) != 2 || formulas::abelian_complexity(2) != 2 {
        failures.push("initial values are not (2, 2)".into());
    }
    for n in 1..=300u64 {
        let fast = formulas::abelian_complexity(n);
        let brute = kabelian::complexity_bruteforce(n as usize, 1)
            .unwrap()
            .class_count;
        if fast != brute {
            failures.push(format!("n = {n}: recurrence {fast} vs brute {brute}"));
        }
    }
    conclude(2, "abelian complexity", started, failures);
}

#[test]
fn criterion_3_two_abelian_closed_form() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=300u64 {
        let fast = formulas::two_abelian(n);
        let brute = kabelian::complexity_bruteforce(n as usize, 2)
            .unwrap()
            .class_count;
        if fast != brute {
            failures.push(format!("n = {n}: closed form {fast} vs brute {brute}"));
        }
        let cells = kabelian::cell_class_counts(n as usize, 2).unwrap();
        for x in 0..=1u8 {
            for y in 0..=1u8 {
                let key = (Word::letter_word(x), Word::letter_word(y));
                let brute_cell = cells.get(&key).copied().unwrap_or(0);
                let fast_cell = formulas::two_abelian_cell(n, x, y);
                if fast_cell != brute_cell {
                    failures.push(format!(
                        "n = {n}, cell ({x}, {y}): formula {fast_cell} vs brute {brute_cell}"
                    ));
                }
            }
        }
    }
    conclude(3, "2-abelian closed form", started, failures);
}

#[test]
fn criterion_4_cell_decomposition() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for k in [3u64, 4, 5] {
        let idx = KIndexing::new(k).unwrap();
        for n in idx.threshold..=idx.threshold + 4 * idx.block {
            let fast = formulas::fast_cell_counts(n, k).unwrap().unwrap();
            let brute = kabelian::cell_class_counts(n as usize, k as usize).unwrap();
            for (cell, fv) in &fast {
                let bv = brute.get(cell).copied().unwrap_or(0);
                if *fv != bv {
                    failures.push(format!(
                        "k = {k}, n = {n}, cell ({}, {}): formula {fv} vs brute {bv}",
                        cell.0, cell.1
                    ));
                }
            }
            let fast_total: u64 = fast.values().sum();
            let brute_total: u64 = brute.values().sum();
            if fast_total != brute_total {
                failures.push(format!(
                    "k = {k}, n = {n}: totals {fast_total} vs {brute_total}"
                ));
            }
        }
    }
    conclude(4, "cell decomposition for k in {3,4,5}", started, failures);
}

#[test]
fn criterion_5_reduction_to_abelian() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=4usize {
        for n in 1..=100usize {
            let report = kabelian::verify_reduction(k, n).unwrap();
            for c in report.counterexamples {
                failures.push(format!("k = {k}, n = {n}: {c}"));
            }
        }
    }
    conclude(5, "equivalence reduces to 1-count", started, failures);
}

#[test]
fn criterion_6_identity_sweeps() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for i in 0..=2u32 {
        let report = kabelian::verify_delta_congruences(i, 100).unwrap();
        for c in report.counterexamples {
            failures.push(format!("defect congruence, i = {i}: {c}"));
        }
    }
    for k in [1usize, 2, 3, 4, 10] {
        let report = kabelian::verify_occurrence_identities(k, 100).unwrap();
        for c in report.counterexamples {
            failures.push(format!("occurrence identity, k = {k}: {c}"));
        }
    }
    for k in [2u64, 4, 10] {
        let report = kabelian::verify_linear_system(k, 100).unwrap();
        for c in report.counterexamples {
            failures.push(format!("linear system, k = {k}: {c}"));
        }
    }
    conclude(6, "occurrence and defect identities", started, failures);
}

#[test]
fn criterion_7_special_factors() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=81usize {
        let rs = factors::right_special(n);
        let rs_closed = factors::closed_right_special(n).unwrap();
        if rs != rs_closed {
            failures.push(format!("right, n = {n}: {rs:?} vs {rs_closed:?}"));
        }
        let ls = factors::left_special(n);
        let ls_closed = factors::closed_left_special(n).unwrap();
        if ls != ls_closed {
            failures.push(format!("left, n = {n}: {ls:?} vs {ls_closed:?}"));
        }
    }
    conclude(7, "special factors", started, failures);
}

#[test]
fn criterion_8_gap_and_type_structure() {
    let started = Instant::now();
    let mut failures = Vec::new();

    // Gap lengths against runs read off an explicit prefix.
    let head = sequence::prefix(3usize.pow(9));
    let ones: Vec<usize> = head
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i)
        .collect();
    for j in 1..=500usize {
        let run = (ones[j] - ones[j - 1] - 1) as u64;
        if formulas::gap(j as u64) != run {
            failures.push(format!("gap({j}) = {} vs run {run}", formulas::gap(j as u64)));
        }
    }

    // Span recurrences and defining sum.
    for i in 1..=100u64 {
        for j in 1..=100u64 {
            let direct: u64 = j + (i..i + j).map(formulas::gap).sum::<u64>();
            if formulas::f_span(i, j) != direct {
                failures.push(format!("f_span({i}, {j}) != defining sum"));
            }
            if formulas::f_span(2 * i, 2 * j) != 3 * formulas::f_span(i, j)
                || formulas::f_span(2 * i, 2 * j + 1) != 3 * formulas::f_span(i, j + 1) - 2
                || formulas::f_span(2 * i + 1, 2 * j) != 3 * formulas::f_span(i + 1, j)
                || formulas::f_span(2 * i + 1, 2 * j + 1) != 3 * formulas::f_span(i + 1, j) + 2
            {
                failures.push(format!("span parity identity fails at ({i}, {j})"));
            }
        }
    }

    // Type cardinalities: singletons past one block, at most two one level up.
    for level in 1..=3u32 {
        let block = 3usize.pow(level);
        for n in (block + 1)..=(3 * block + 5) {
            for u in factors::factors(n).unwrap().words() {
                if u.is_zero_word() {
                    continue;
                }
                let card = factors::type_set(level, u).unwrap().residues.len();
                if card != 1 {
                    failures.push(format!("level {level}, |u| = {n}: card {card} != 1"));
                }
            }
        }
        for n in (block + 1)..=(3 * block) {
            for u in factors::factors(n).unwrap().words() {
                if u.is_zero_word() {
                    continue;
                }
                let card = factors::type_set(level + 1, u).unwrap().residues.len();
                if !(1..=2).contains(&card) {
                    failures.push(format!(
                        "level {}, |u| = {n}: card {card} outside 1..=2",
                        level + 1
                    ));
                }
            }
        }
    }
    conclude(8, "gap and type structure", started, failures);
}

#[test]
fn criterion_9_regularity_certificates() {
    let started = Instant::now();
    let mut failures = Vec::new();
    const TRAIN: usize = 2000;
    const TEST_END: u64 = 30_000;

    let targets: Vec<(&str, Box<dyn Fn(u64) -> BigInt>, usize)> = vec![
        (
            "max window sum",
            Box::new(|n| BigInt::from(formulas::max_sum(n))),
            8,
        ),
        (
            "abelian complexity",
            Box::new(|n| BigInt::from(formulas::abelian_complexity(n))),
            8,
        ),
        (
            "2-abelian complexity",
            Box::new(|n| BigInt::from(formulas::two_abelian(n))),
            12,
        ),
        (
            "3-abelian complexity",
            {
                let eval = KFastEvaluator::new(3).unwrap();
                Box::new(move |n| BigInt::from(eval.eval(n)))
            },
            20,
        ),
    ];

    for (name, oracle, max_rank) in &targets {
        match guess_representation(oracle.as_ref(), 3, *max_rank, TRAIN) {
            Ok(found) => {
                let report = verify_representation(&found.rep, oracle.as_ref(), 0, TEST_END);
                if let Some(m) = report.first_mismatch {
                    failures.push(format!(
                        "{name}: representation of rank {} disagrees at n = {} ({} vs {})",
                        found.rep.rank, m.n, m.expected, m.got
                    ));
                } else {
                    println!(
                        "  {name}: rank {} verified on [0, {TEST_END}]",
                        found.rep.rank
                    );
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }

    // Negative control: a sequence that is not base-3 regular must fail.
    let factorial = |n: u64| (1..=n).map(BigInt::from).product::<BigInt>();
    if guess_representation(&factorial, 3, 6, 200).is_ok() {
        failures.push("factorial control unexpectedly produced a representation".into());
    }

    conclude(9, "regularity certificates", started, failures);
}

#[test]
fn reported_sets_are_deterministic() {
    // Repeated queries produce identical listings; guards the golden-file
    // contract the command line interface builds on.
    let a: Vec<String> = factors::factors(9).unwrap().words().map(|w| w.to_string()).collect();
    let b: Vec<String> = factors::factors(9).unwrap().words().map(|w| w.to_string()).collect();
    assert_eq!(a, b);
    let mut sorted = a.clone();
    sorted.sort();
    assert_eq!(a, sorted);

    let t1 = factors::type_set(2, &"101".parse().unwrap()).unwrap();
    let t2 = factors::type_set(2, &"101".parse().unwrap()).unwrap();
    let r1: BTreeSet<u64> = t1.residues;
    assert_eq!(r1, t2.residues);
}
