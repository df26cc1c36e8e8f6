//! Acceptance gate: one PASS/FAIL line per criterion, with pinned runtime limits.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use oscillator_core::grid::Grid;
use oscillator_core::verify::{find_suites, Check, Report, SuiteConfig};

struct Criterion {
    id: u32,
    title: &'static str,
    suite: &'static str,
    qs: Option<&'static [u64]>,
    grid: &'static str,
    /// Only checks with these names count; empty keeps all.
    names: &'static [&'static str],
    limit_secs: u64,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "star product vs composition, 100 random pairs per configuration",
        suite: "star",
        qs: Some(&[3, 5]),
        grid: "pairs=100",
        names: &["homomorphism"],
        limit_secs: 10,
    },
    Criterion {
        id: 2,
        title: "reflection law and action, all anisotropic λ, q=3, n ≤ 3",
        suite: "generators",
        qs: Some(&[3]),
        grid: "part=reflection",
        names: &[],
        limit_secs: 30,
    },
    Criterion {
        id: 3,
        title: "isotropic idempotents up to k=2, q=3, n ≤ 5",
        suite: "generators",
        qs: Some(&[3]),
        grid: "part=idempotent",
        names: &[],
        limit_secs: 60,
    },
    Criterion {
        id: 4,
        title: "SL2 generators column by column, closure order q(q²−1)",
        suite: "generators",
        qs: None,
        grid: "part=sl2",
        names: &[],
        limit_secs: 60,
    },
    Criterion {
        id: 5,
        title: "appendix identity, q ∈ {3,5,7,9}, n ≤ 3, all t ∉ {0,1}",
        suite: "appendix",
        qs: Some(&[3, 5, 7, 9]),
        grid: "",
        names: &[],
        limit_secs: 120,
    },
    Criterion {
        id: 6,
        title: "Gauss sums, Hasse-Davenport, K(c) closed form",
        suite: "generators",
        qs: None,
        grid: "part=gauss",
        names: &[],
        limit_secs: 30,
    },
    Criterion {
        id: 7,
        title: "orbit counts: descriptors = closed form = Burnside",
        suite: "orbits",
        qs: None,
        grid: "part=counts",
        names: &[],
        limit_secs: 300,
    },
    Criterion {
        id: 8,
        title: "q-binomial lemma (p ≤ 5, b < r ≤ 7) and tranche identity (k, p ≤ 5)",
        suite: "identities",
        qs: None,
        grid: "identity=lemma32|tranche",
        names: &[],
        limit_secs: 30,
    },
    Criterion {
        id: 9,
        title: "dimension matching and shifted Hom identities, q ∈ {3,5}, n ≤ 6, N ≤ 3",
        suite: "identities",
        qs: Some(&[3, 5]),
        grid: "identity=thm1|prop31|cor32|halving",
        names: &[],
        limit_secs: 60,
    },
    Criterion {
        id: 10,
        title: "group orders by closure",
        suite: "orbits",
        qs: None,
        grid: "part=groups",
        names: &[],
        limit_secs: 60,
    },
];

fn run(c: &Criterion) -> (bool, Duration, Vec<Check>, String) {
    let start = Instant::now();
    let config = SuiteConfig {
        qs: c.qs.map(<[u64]>::to_vec),
        grid: c.grid.parse::<Grid>().expect("criterion grid parses"),
        seed: 0,
    };
    let report = find_suites(c.suite).and_then(|s| Report::run(&s, &config));
    let elapsed = start.elapsed();
    match report {
        Ok(r) => {
            let checks: Vec<Check> =
                r.checks.into_iter().filter(|k| c.names.is_empty() || c.names.contains(&k.name.as_str())).collect();
            let asserted = checks.iter().filter(|k| !k.info).count();
            let failed = checks.iter().filter(|k| k.failed()).count();
            let in_time = elapsed <= Duration::from_secs(c.limit_secs);
            let pass = asserted > 0 && failed == 0 && in_time;
            let note = format!("{asserted} assertions, {failed} failed{}", if in_time { "" } else { ", over time" });
            (pass, elapsed, checks, note)
        }
        Err(e) => (false, elapsed, Vec::new(), format!("error: {e}")),
    }
}

fn main() -> ExitCode {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut all = true;
    for c in &CRITERIA {
        if filter.as_ref().is_some_and(|f| !c.title.contains(f.as_str()) && *f != c.id.to_string()) {
            continue;
        }
        let (pass, elapsed, checks, note) = run(c);
        all &= pass;
        println!(
            "{} criterion {:>2}: {} [{:.2}s, limit {}s; {}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit_secs,
            note
        );
        for k in checks.iter().filter(|k| k.failed()).take(10) {
            println!("      {}/{} {:?} {}", k.suite, k.name, k.params, k.detail);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
