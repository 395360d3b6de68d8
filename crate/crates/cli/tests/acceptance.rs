//! One line per acceptance criterion. Each criterion runs its self-test
//! suites and its batch of problem files through the front end, and fails
//! on any failed check, an unmet expectation, too few checks or a blown
//! time limit.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use entrolab::run::{run_path, Options, Outcome};
use entrolab::selftest::{run_suite, select, SuiteReport};

struct Criterion {
    id: u32,
    about: &'static str,
    suites: &'static [&'static str],
    /// Fewest checks the suites must make in total.
    min_checks: u64,
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, about: "shift entropies over Z(2), Z(3), Z(4), Z(2)^2", suites: &["shifts/values"], min_checks: 16, limit: Some(Duration::from_secs(5)) },
    Criterion { id: 2, about: "B_n(left, N_m) = N_{m+n-1} for m ≤ 4, n ≤ 6", suites: &["shifts/cotrajectory-law"], min_checks: 96, limit: None },
    Criterion { id: 3, about: "Bernoulli certificates up to m = 5, n = 5", suites: &["certificates/bernoulli"], min_checks: 50, limit: Some(Duration::from_secs(10)) },
    Criterion { id: 4, about: "cover oracle on random instances, h_top of the left shift", suites: &["oracle/cover", "oracle/htop"], min_checks: 112, limit: None },
    Criterion { id: 5, about: "bridge identities on shifts and on all endomorphisms of order ≤ 16", suites: &["bridge/shifts", "bridge/finite-exhaustive"], min_checks: 60_000, limit: None },
    Criterion { id: 6, about: "character duality on all groups of order ≤ 36", suites: &["duality"], min_checks: 500_000, limit: None },
    Criterion {
        id: 7,
        about: "logarithmic, inverse, additivity, conjugation, dense-subgroup and monotonicity laws",
        suites: &["laws/logarithmic", "laws/inverse", "laws/additivity", "laws/conjugation", "laws/dense-subgroup", "laws/monotonicity"],
        min_checks: 800,
        limit: None,
    },
    Criterion { id: 8, about: "identity, zero, doubling on Z and residual subgroups", suites: &["laws/degenerate"], min_checks: 150, limit: None },
];

fn main() -> ExitCode {
    let problems = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let mut all = true;
    for c in CRITERIA {
        let start = Instant::now();
        let reports: Vec<SuiteReport> = c.suites.iter().flat_map(|s| select(Some(s))).map(run_suite).collect();
        let file = run_path(&problems.join(format!("criterion-{}.json", c.id)), &Options::default());
        let elapsed = start.elapsed();

        let checked: u64 = reports.iter().map(|r| r.checked).sum();
        let mut why = Vec::new();
        for r in reports.iter().filter(|r| !r.passed()) {
            why.push(format!("{}: {} of {} checks failed", r.name, r.failed, r.checked));
            why.extend(r.failures.iter().take(3).map(|f| format!("  {f}")));
        }
        if checked < c.min_checks {
            why.push(format!("{checked} checks, expected at least {}", c.min_checks));
        }
        if file.outcome != Outcome::Ok {
            why.push(format!("criterion-{}.json exited with {}", c.id, file.outcome.exit_code()));
        }
        if let Some(limit) = c.limit.filter(|l| elapsed > *l) {
            why.push(format!("took {:.2}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
        }
        let pass = why.is_empty();
        all &= pass;
        println!("criterion {} {}: {} ({checked} checks, {:.2}s)", c.id, if pass { "PASS" } else { "FAIL" }, c.about, elapsed.as_secs_f64());
        for w in &why {
            println!("    {w}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
