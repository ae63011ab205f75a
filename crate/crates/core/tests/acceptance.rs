//! Acceptance run: one PASS/FAIL line per criterion, exact equality only.
//! Built with `harness = false`; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use pmotion::catalog::{Params, Registry, Side};
use pmotion::combinatorics::FlatteningOrder;
use pmotion::verify::{
    bijection_suite_with, compare_sides, difference_law, explicit_motion_suite, mutation_suite, parity_suite, sweep,
    wbar_collapse, BijectionConfig, MotionGrid, Mutation, Report,
};

struct Outcome {
    reports: Vec<Report>,
    notes: Vec<String>,
    /// Checks made outside the reports.
    extra: u64,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            reports: Vec::new(),
            notes: Vec::new(),
            extra: 0,
        }
    }

    fn note_unless(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.notes.push(msg.into());
        }
    }

    fn failed(&self) -> Vec<String> {
        self.reports
            .iter()
            .filter(|r| !r.passed())
            .map(Report::line)
            .chain(self.notes.iter().cloned())
            .collect()
    }
}

/// Partitions of `n` whose parts all lie in `allowed`, by plain recursion.
fn count_partitions(n: u32, max_part: u32, allowed: &dyn Fn(u32) -> bool) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n))
        .filter(|&p| allowed(p))
        .map(|p| count_partitions(n - p, p, allowed))
        .sum()
}

fn p(s: &str) -> Params {
    s.parse().expect("params")
}

fn criterion_1(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    out.reports = sweep(reg, &["rr"], 1, 60, 60).expect("rr sweep");
    out.note_unless(out.reports.len() == 2, "rr grid is not a ∈ {0, 1}");
    let sum = reg.get("rr").unwrap().evaluate(Side::Sum, &p("a=0"), 60).unwrap();
    let oracle = count_partitions(8, 8, &|x| x % 5 == 2 || x % 5 == 3);
    let got = sum.coefficient(8).unwrap();
    out.note_unless(oracle == 3, format!("partition oracle gives {oracle}"));
    out.note_unless(
        got == oracle.into(),
        format!("q^8 coefficient {got} vs oracle {oracle}"),
    );
    for (a, res) in [(0, [2, 3]), (1, [1, 4])] {
        let series = reg
            .get("rr")
            .unwrap()
            .evaluate(Side::Sum, &p(&format!("a={a}")), 30)
            .unwrap();
        for n in 0..=30u32 {
            let want = count_partitions(n, n, &|x| res.contains(&(x % 5)));
            out.note_unless(
                series.coefficient(n as i64).unwrap() == want.into(),
                format!("rr a={a} at q^{n} disagrees with the partition oracle"),
            );
        }
    }
    let secs = started.elapsed().as_secs_f64();
    out.note_unless(secs < 1.0, format!("took {secs:.2}s"));
    out
}

fn criterion_2(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    out.reports = sweep(reg, &["main"], 4, 40, 25).expect("main sweep");
    out.note_unless(out.reports.len() == 34, format!("{} main instances", out.reports.len()));
    out.note_unless(
        out.reports.iter().all(|r| r.checked == 10),
        "not all five sides compared",
    );
    let secs = started.elapsed().as_secs_f64();
    out.note_unless(secs < 120.0, format!("took {secs:.1}s"));
    out
}

fn criterion_3(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    out.reports = sweep(reg, &["even1", "even2"], 4, 40, 25).expect("even sweep");
    out.reports
        .extend(sweep(reg, &["splitting-even2"], 4, 25, 25).expect("splitting sweep"));
    out.note_unless(out.reports.len() > 10, "empty grid");
    out
}

fn criterion_4(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    out.reports = sweep(reg, &["w-unified", "wbar-unified"], 4, 40, 25).expect("unified sweep");
    for k in 1..=4 {
        for a in (1..=k).step_by(2) {
            out.reports.push(wbar_collapse(k, a, 20).expect("collapse"));
            let id = reg.get("wbar-unified").unwrap();
            let hi = Params::new().with("k", k).with("a", a);
            let lo = Params::new().with("k", k).with("a", a - 1);
            for side in id.sides() {
                let x = id.evaluate(*side, &hi, 25).unwrap();
                let y = id.evaluate(*side, &lo, 25).unwrap();
                out.note_unless(x == y, format!("W̄ {side} side differs at k={k}, a={a}"));
            }
        }
    }
    out
}

fn criterion_5(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    let ids = ["cor-odd", "cor-even", "ak-cor2", "ak-binom", "ak-nform", "ak-modified"];
    out.reports = sweep(reg, &ids, 4, 40, 25).expect("ak sweep");
    let (binom, nform) = (reg.get("ak-binom").unwrap(), reg.get("ak-nform").unwrap());
    for params in binom.grid(4) {
        out.reports
            .push(compare_sides((binom, Side::Sum), (nform, Side::Sum), &params, 40).expect("forms"));
    }
    for k in 1..=4 {
        for a in 0..k {
            out.reports.push(difference_law(reg, k, a, 40).expect("difference law"));
        }
    }
    out
}

fn criterion_6(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    let background = ["ag", "stanton", "bressoud-even", "bressoud-33", "stanton-binomial"];
    out.reports = sweep(reg, &background, 4, 40, 25).expect("background sweep");
    out.reports.extend(sweep(reg, &["open1"], 4, 30, 25).expect("open1"));
    out.reports.extend(sweep(reg, &["open2"], 3, 30, 25).expect("open2"));
    let secs = started.elapsed().as_secs_f64();
    out.note_unless(secs < 300.0, format!("took {secs:.1}s"));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    for k in 1..=3u32 {
        for u in -1..=1i64 {
            for j in 0..=k {
                for r in 0..=k - j {
                    let cfg = BijectionConfig {
                        lambda_weight: 18,
                        phi_weight: 14,
                        shift_weight: 12,
                        tilde_weight: 14,
                        flattening: FlatteningOrder::Standard,
                    };
                    out.reports
                        .push(bijection_suite_with(j, r, k, u, cfg).expect("bijection"));
                }
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    for k in 1..=3 {
        for u in -2..=1 {
            out.reports.push(parity_suite(k, u, 14).expect("parity"));
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    out.reports
        .push(explicit_motion_suite(MotionGrid::default()).expect("motion"));
    out
}

fn criterion_10(reg: &Registry) -> Outcome {
    let mut out = Outcome::new();
    for m in Mutation::ALL {
        let reports = mutation_suite(m, reg, 3, 30, 12).expect("mutation");
        out.extra += reports.len() as u64;
        out.note_unless(
            reports.iter().any(|r| !r.passed()),
            format!("mutation {} went undetected", m.name()),
        );
    }
    out
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let reg = Registry::standard();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("Rogers-Ramanujan through order 60", Box::new(|| criterion_1(&reg))),
        ("main identity, all five sides, k ≤ 4", Box::new(|| criterion_2(&reg))),
        ("even identities and splitting, k ≤ 4", Box::new(|| criterion_3(&reg))),
        (
            "unified W and W̄ identities with collapse",
            Box::new(|| criterion_4(&reg)),
        ),
        (
            "corollaries, Ariki-Koike forms and difference law",
            Box::new(|| criterion_5(&reg)),
        ),
        ("background and open identities", Box::new(|| criterion_6(&reg))),
        ("bijection suites k ≤ 3", Box::new(criterion_7)),
        ("parity lemmas k ≤ 3, weight ≤ 14", Box::new(criterion_8)),
        ("explicit motion on the default grid", Box::new(criterion_9)),
        ("mutation sensitivity", Box::new(|| criterion_10(&reg))),
    ];
    let mut all = true;
    for (n, (title, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let failed = outcome.failed();
        let checked: u64 = outcome.extra + outcome.reports.iter().map(|r| r.checked).sum::<u64>();
        let secs = started.elapsed().as_secs_f64();
        if failed.is_empty() {
            println!("PASS criterion {}: {title} ({checked} checks, {secs:.2}s)", n + 1);
        } else {
            all = false;
            println!("FAIL criterion {}: {title} ({secs:.2}s)", n + 1);
            for line in failed.iter().take(5) {
                println!("    {line}");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
