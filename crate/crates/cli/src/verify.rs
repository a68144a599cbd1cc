//! Self-check suites behind `octacount verify`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use octacount::oracle::{self, count_nw, count_sw};
use octacount::{
    build_m, build_p, elnitsky_a1c1, elnitsky_ab11, elnitsky_simplified, iterate_x, iterate_y,
    lower_bound, reference_count, theorem1_count, Sides,
};

/// Largest term count a suite will evaluate.
const TERM_BUDGET: u64 = 100_000_000;

pub struct SuiteResult {
    pub name: &'static str,
    pub checks: u64,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

struct Counts {
    workers: usize,
    cache: BTreeMap<[u32; 4], BigUint>,
    determinants: u64,
}

impl Counts {
    fn get(&mut self, s: Sides) -> Result<BigUint, String> {
        if let Some(v) = self.cache.get(&s.as_array()) {
            return Ok(v.clone());
        }
        let r = theorem1_count(&s, self.workers).map_err(|e| format!("sides {s}: {e}"))?;
        if r.zero_determinants > 0 {
            return Err(format!("sides {s}: {} zero determinants in the sum", r.zero_determinants));
        }
        self.determinants += r.determinants_evaluated;
        self.cache.insert(s.as_array(), r.count.clone());
        Ok(r.count)
    }
}

fn sides_up_to(max: u32) -> Vec<Sides> {
    let mut out = Vec::new();
    for a in 1..=max {
        for b in 1..=max {
            for c in 1..=max {
                for d in 1..=max {
                    out.push(Sides::new(a, b, c, d).expect("positive sides"));
                }
            }
        }
    }
    out
}

fn within_budget(s: &Sides) -> bool {
    octacount::count_x(s) * octacount::count_y(s) <= BigUint::from(TERM_BUDGET)
}

type Check = Result<u64, String>;
type Suite = fn(&mut Counts, u32) -> Check;

fn table1(counts: &mut Counts, max_side: u32) -> Check {
    let mut n_checks = 0;
    for n in 1..=max_side.min(5) {
        let s = Sides::new(n, n, n, n).expect("positive");
        if !within_budget(&s) {
            continue;
        }
        let want = reference_count(&s).expect("diagonal reference");
        let got = counts.get(s)?;
        if got != want {
            return Err(format!("sides {s}: sum {got}, table {want}"));
        }
        n_checks += 1;
    }
    Ok(n_checks)
}

fn closed_forms(counts: &mut Counts, max_side: u32) -> Check {
    let mut n_checks = 0;
    for p in 1..=max_side {
        for q in 1..=max_side {
            let s = Sides::new(p, 1, q, 1).expect("positive");
            let sum = counts.get(s)?;
            let first = elnitsky_a1c1(p, q);
            let simplified = elnitsky_simplified(p, q).map_err(|e| e.to_string())?;
            if sum != first || first != simplified {
                return Err(format!("sides {s}: sum {sum}, a1c1 {first}, simplified {simplified}"));
            }
            let s = Sides::new(p, q, 1, 1).expect("positive");
            let sum = counts.get(s)?;
            let second = elnitsky_ab11(p, q).map_err(|e| e.to_string())?;
            if sum != second {
                return Err(format!("sides {s}: sum {sum}, ab11 {second}"));
            }
            n_checks += 2;
        }
    }
    Ok(n_checks)
}

fn oracle_sweep(counts: &mut Counts, max_side: u32) -> Check {
    let mut n_checks = 0;
    for s in sides_up_to(max_side.min(2)) {
        let ys: Vec<_> = iterate_y(&s).collect();
        for x in iterate_x(&s) {
            for y in &ys {
                for u in 1..=s.d() as usize + 1 {
                    let (o, m) = (BigInt::from(count_sw(u, &x, y, &s)), build_m(u, &x, y, &s).det());
                    if o != m {
                        return Err(format!("sides {s} {x} {y} u={u}: enumerated {o}, det M {m}"));
                    }
                    n_checks += 1;
                }
                for v in 1..=s.b() as usize + 1 {
                    let (o, p) = (BigInt::from(count_nw(v, &x, y, &s)), build_p(v, &x, y, &s).det());
                    if o != p {
                        return Err(format!("sides {s} {x} {y} v={v}: enumerated {o}, det P {p}"));
                    }
                    n_checks += 1;
                }
            }
        }
        let total = oracle::oracle_total(&s).map_err(|e| format!("sides {s}: {e}"))?.count;
        let sum = counts.get(s)?;
        if total != sum {
            return Err(format!("sides {s}: oracle total {total}, sum {sum}"));
        }
        n_checks += 1;
    }
    Ok(n_checks)
}

fn bounds(counts: &mut Counts, max_side: u32) -> Check {
    let mut n_checks = 0;
    for s in sides_up_to(max_side) {
        if !within_budget(&s) {
            continue;
        }
        let bound = lower_bound(&s);
        let sum = counts.get(s)?;
        if bound >= sum {
            return Err(format!("sides {s}: hexagon bound {bound} not below {sum}"));
        }
        n_checks += 1;
    }
    Ok(n_checks)
}

fn symmetry(counts: &mut Counts, max_side: u32) -> Check {
    let mut n_checks = 0;
    for s in sides_up_to(max_side.min(2)) {
        let base = counts.get(s)?;
        for image in [s.rotated(), s.reversed()] {
            let other = counts.get(image)?;
            if other != base {
                return Err(format!("sides {s}: {base}, relabeled {image}: {other}"));
            }
            n_checks += 1;
        }
    }
    Ok(n_checks)
}

/// Runs every suite; stops collecting checks in a suite at its first
/// failure.
pub fn run(max_side: u32, workers: usize) -> Vec<SuiteResult> {
    let mut counts = Counts { workers, cache: BTreeMap::new(), determinants: 0 };
    let suites: [(&'static str, Suite); 5] = [
        ("table1", table1),
        ("closed-forms", closed_forms),
        ("oracle", oracle_sweep),
        ("lower-bound", bounds),
        ("symmetry", symmetry),
    ];
    let mut results: Vec<SuiteResult> = suites
        .iter()
        .map(|(name, suite)| match suite(&mut counts, max_side) {
            Ok(checks) => SuiteResult { name, checks, failure: None },
            Err(msg) => SuiteResult { name, checks: 0, failure: Some(msg) },
        })
        .collect();
    // Any zero or negative determinant surfaces as an error from Counts::get.
    results.push(SuiteResult { name: "positivity", checks: counts.determinants, failure: None });
    results
}

pub fn summary(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    for r in results {
        match &r.failure {
            None => writeln!(out, "[PASS] {:<13} {} checks", r.name, r.checks),
            Some(msg) => writeln!(out, "[FAIL] {:<13} {msg}", r.name),
        }
        .expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_run_passes() {
        let results = run(1, 1);
        assert!(results.iter().all(|r| r.failure.is_none()), "{}", summary(&results));
        assert!(summary(&results).contains("[PASS] table1"));
    }
}
