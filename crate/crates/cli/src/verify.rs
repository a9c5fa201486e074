//! The `verify` suites: every identity is checked against brute-force
//! evaluation (or structurally, for cross-path checks) and reported in a
//! fixed order.

use harmsum::{
    harmonic, mhs_prefix, parse_poly, reduce, reduce_via_theorem, spiess_form, structure_check,
    structured_to_closed, sum_power, sum_power_shifted, sum_product, Composition, Format,
    Polynomial, Rational, SpiessKind,
};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::query::Suite;
use crate::run::{Outcome, EXIT_MISMATCH, EXIT_OK};

/// One identity and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub identity: String,
    pub pass: bool,
    pub detail: String,
}

type Job = Box<dyn Fn() -> Result<(), String> + Send + Sync>;

fn job(f: impl Fn() -> Result<(), String> + Send + Sync + 'static) -> Job {
    Box::new(f)
}

fn err(e: harmsum::Error) -> String {
    e.to_string()
}

const SUM_POLYS: [&str; 7] = ["1", "m", "m^2", "m^3", "2*m-1", "3*m^2-5*m+2", "-7*m^3+m/2-4"];
const FACTOR_SETS: [&[(u32, u32)]; 4] = [&[(1, 1), (2, 1)], &[(2, 2)], &[(1, 2), (2, 1)], &[(1, 1), (3, 1)]];

fn first_mismatch(got: &[Rational], want: &[Rational]) -> Result<(), String> {
    match got.iter().zip(want).position(|(a, b)| a != b) {
        None if got.len() == want.len() => Ok(()),
        None => Err(format!("length {} vs {}", got.len(), want.len())),
        Some(n) => Err(format!("n={n}: closed form {} vs direct {}", got[n], want[n])),
    }
}

/// Prefix table of `Σ_{m=lo..n} F(m)·Π harmonic(m - shift, order)^mult`.
fn direct_sums(f: &Polynomial, factors: &[(u32, u32)], shifted: bool, max_n: u64) -> Vec<Rational> {
    let mut acc = Rational::zero();
    let mut out = Vec::with_capacity(max_n as usize + 1);
    for n in 0..=max_n {
        let h_arg = if shifted { Some(n) } else { n.checked_sub(1) };
        if let (Some(hn), true) = (h_arg, shifted || n >= 1) {
            let prod = factors.iter().fold(Rational::one(), |acc, &(order, mult)| {
                acc * num_traits::pow(harmonic(hn, order), mult as usize)
            });
            acc += f.eval_int(n as i64) * prod;
        }
        out.push(acc.clone());
    }
    out
}

fn reduce_jobs(max_n: u64) -> Vec<(String, Job)> {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    let mut comps = vec![Composition::empty()];
    comps.extend(Composition::all_proper(5, 3));
    for p in 0..=6u32 {
        for k in &comps {
            let k = k.clone();
            let target = k.prepend(-(p as i64));
            jobs.push((
                format!("reduce H{target} = closed form for n <= {max_n}"),
                job(move || {
                    let cf = reduce(p, &k).map_err(err)?;
                    first_mismatch(
                        &cf.eval_range(max_n).map_err(err)?,
                        &mhs_prefix(max_n, &target).map_err(err)?,
                    )
                }),
            ));
        }
    }
    for p in 0..=4u32 {
        for k in Composition::all_proper(4, 4) {
            let target = k.prepend(-(p as i64));
            jobs.push((
                format!("theorem path H{target} equals recurrence path"),
                job(move || {
                    let a = reduce(p, &k).map_err(err)?;
                    let b = reduce_via_theorem(p, &k).map_err(err)?;
                    if a == b {
                        return Ok(());
                    }
                    let oracle = mhs_prefix(max_n.max(50), &target).map_err(err)?;
                    let numeric = b.eval_range(max_n.max(50)).map_err(err)? == oracle;
                    Err(format!(
                        "structural mismatch; theorem path evaluates correctly: {numeric}; difference {}",
                        (&a - &b).render(Format::Text)
                    ))
                }),
            ));
        }
    }
    jobs
}

fn sums_jobs(max_n: u64) -> Vec<(String, Job)> {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    let polys: Vec<(String, Polynomial)> = SUM_POLYS
        .iter()
        .map(|s| (s.to_string(), parse_poly(s).expect("fixed polynomial")))
        .collect();
    for (name, f) in &polys {
        for t in 0..=4u32 {
            let f1 = f.clone();
            jobs.push((
                format!("sum_{{m=1..n}} ({name})*H_{{m-1}}^{t} for n <= {max_n}"),
                job(move || {
                    let cf = sum_power(&f1, t).map_err(err)?;
                    first_mismatch(&cf.eval_range(max_n).map_err(err)?, &direct_sums(&f1, &[(1, t)], false, max_n))
                }),
            ));
            let f2 = f.clone();
            jobs.push((
                format!("sum_{{m=0..n}} ({name})*H_m^{t} for n <= {max_n}"),
                job(move || {
                    let cf = sum_power_shifted(&f2, t).map_err(err)?;
                    first_mismatch(&cf.eval_range(max_n).map_err(err)?, &direct_sums(&f2, &[(1, t)], true, max_n))
                }),
            ));
            let f3 = f.clone();
            jobs.push((
                format!("structure of sum ({name})*H_{{m-1}}^{t}"),
                job(move || {
                    let r = structure_check(&f3, t).map_err(err)?;
                    if r.passes {
                        Ok(())
                    } else {
                        Err(format!("{} offending terms", r.offending_terms.len()))
                    }
                }),
            ));
        }
        for factors in FACTOR_SETS {
            let f4 = f.clone();
            let label: Vec<String> = factors.iter().map(|(o, m)| format!("H_{{m-1}}({o})^{m}")).collect();
            jobs.push((
                format!("sum_{{m=1..n}} ({name})*{} for n <= {max_n}", label.join("*")),
                job(move || {
                    let cf = sum_product(&f4, factors).map_err(err)?;
                    first_mismatch(&cf.eval_range(max_n).map_err(err)?, &direct_sums(&f4, factors, false, max_n))
                }),
            ));
        }
    }
    let mut kinds: Vec<SpiessKind> = Vec::new();
    for p in 0..=4 {
        kinds.extend([SpiessKind::hn2(p), SpiessKind::hn3(p), SpiessKind::mixed(p)]);
    }
    for s in ["1", "m", "m^2", "2*m-1", "3*m^2-5*m+2"] {
        kinds.push(SpiessKind::Hn4(parse_poly(s).expect("fixed polynomial")));
    }
    for kind in kinds {
        jobs.push((
            format!("explicit presentation {} expands to the generic sum", kind_label(&kind)),
            job(move || {
                let s = spiess_form(&kind).map_err(err)?;
                if structured_to_closed(&s) == kind.generic().map_err(err)? {
                    Ok(())
                } else {
                    Err("structural mismatch".into())
                }
            }),
        ));
    }
    jobs
}

fn kind_label(kind: &SpiessKind) -> String {
    let (name, f) = match kind {
        SpiessKind::Hn1(f) => ("hn1", f),
        SpiessKind::Hn2(f) => ("hn2", f),
        SpiessKind::Hn3(f) => ("hn3", f),
        SpiessKind::Mixed(f) => ("mixed", f),
        SpiessKind::Hn4(f) => ("hn4", f),
    };
    format!("{name}({})", f.render("m"))
}

/// Runs `suite` for `n <= max_n`; identities are evaluated in parallel and
/// reported in a fixed order.
pub fn check_suite(suite: Suite, max_n: u64) -> Vec<CheckResult> {
    let mut jobs = Vec::new();
    if matches!(suite, Suite::Reduce | Suite::All) {
        jobs.extend(reduce_jobs(max_n));
    }
    if matches!(suite, Suite::Sums | Suite::All) {
        jobs.extend(sums_jobs(max_n));
    }
    jobs.par_iter()
        .map(|(identity, f)| {
            let r = f();
            CheckResult {
                identity: identity.clone(),
                pass: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect()
}

pub fn run_verify(suite: Suite, max_n: u64, format: Format) -> Outcome {
    let mut out = Outcome::default();
    if max_n == 0 {
        out.stderr = "warning: --max-n 0 leaves nothing to check beyond n = 0\n".into();
    }
    let results = check_suite(suite, max_n);
    let failed = results.iter().filter(|r| !r.pass).count();
    let passed = results.len() - failed;
    out.stdout = match format {
        Format::Json => {
            let rows: Vec<_> = results
                .iter()
                .map(|r| json!({"identity": r.identity, "pass": r.pass, "detail": r.detail}))
                .collect();
            format!(
                "{}\n",
                json!({"max_n": max_n, "passed": passed, "failed": failed, "results": rows})
            )
        }
        Format::Text | Format::Latex => {
            let mut s = String::new();
            for r in &results {
                if r.pass {
                    s.push_str(&format!("PASS {}\n", r.identity));
                } else {
                    s.push_str(&format!("FAIL {}: {}\n", r.identity, r.detail));
                }
            }
            s.push_str(&format!("{passed} passed, {failed} failed\n"));
            s
        }
    };
    out.code = if failed == 0 { EXIT_OK } else { EXIT_MISMATCH };
    out
}
