//! Subcommand execution. Every command returns its full output so that
//! emission is deterministic and testable.

use harmsum::rational::{fmt_rational, latex_rational, rational_to_json};
use harmsum::{
    bernoulli, mhs_eval, reduce, reduce_with, spiess_form, spiess_form_shifted, structure_check,
    sum_power, sum_power_shifted, sum_product, sum_product_shifted, Composition, Format, Method,
    Rational, SpiessKind,
};
use rayon::prelude::*;

use crate::query::{Command, Factors, PolyExpr, Query};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Buffered result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn usage(message: String) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_USAGE }
    }
}

fn line(s: String) -> String {
    format!("{s}\n")
}

pub fn run(q: &Query) -> Outcome {
    let format = Format::from(q.format);
    let result = match &q.command {
        Command::Reduce { p, comp, method } => run_reduce(*p, comp, (*method).into(), format),
        Command::Sum { poly, power, factors, shifted, structured } => {
            run_sum(poly, *power, factors.as_ref(), *shifted, *structured, format)
        }
        Command::Eval { n, comp } => mhs_eval(*n, comp).map(|v| Outcome::ok(line(render_rational(&v, format)))),
        Command::Check { poly, power } => run_check(poly, *power),
        Command::Bernoulli { max, convention } => Ok(Outcome::ok(bernoulli_csv(*max, (*convention).into()))),
        Command::Table { p_max, weight_max, n } => Ok(run_table(*p_max, *weight_max, *n)),
        Command::Verify { suite, max_n } => Ok(verify::run_verify(*suite, *max_n, format)),
    };
    result.unwrap_or_else(|e| Outcome::usage(e.to_string()))
}

pub fn render_rational(v: &Rational, format: Format) -> String {
    match format {
        Format::Text => fmt_rational(v),
        Format::Latex => latex_rational(v),
        Format::Json => rational_to_json(v).to_string(),
    }
}

fn run_reduce(p: u32, k: &Composition, method: Method, format: Format) -> harmsum::Result<Outcome> {
    let (primary, secondary) = reduce_with(p, k, method)?;
    let target = k.prepend(-(p as i64));
    match secondary {
        Some(other) if other != primary => {
            let n_max = 50;
            let oracle = harmsum::mhs_prefix(n_max, &target)?;
            let rec_ok = primary.eval_range(n_max)? == oracle;
            let thm_ok = other.eval_range(n_max)? == oracle;
            let diff = &primary - &other;
            let stdout = format!(
                "structural mismatch for H{target}\n\
                 recurrence: {}\n\
                 theorem:    {}\n\
                 difference: {}\n\
                 recurrence matches brute force for n <= {n_max}: {}\n\
                 theorem matches brute force for n <= {n_max}: {}\n",
                primary.render(format),
                other.render(format),
                diff.render(format),
                yes_no(rec_ok),
                yes_no(thm_ok),
            );
            Ok(Outcome {
                stdout,
                stderr: format!("error: the two reduction paths disagree for H{target}\n"),
                code: EXIT_MISMATCH,
            })
        }
        _ => Ok(Outcome::ok(line(primary.render(format)))),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn spiess_kind(poly: &PolyExpr, power: Option<u32>, factors: Option<&Factors>) -> Option<SpiessKind> {
    let f = poly.poly.clone();
    let mixed = [(1, 1), (2, 1)];
    match (power, factors) {
        (Some(1), _) => Some(SpiessKind::Hn1(f)),
        (Some(2), _) => Some(SpiessKind::Hn2(f)),
        (Some(3), _) => Some(SpiessKind::Hn3(f)),
        (Some(4), _) => Some(SpiessKind::Hn4(f)),
        (None, Some(fs)) => match fs.0.as_slice() {
            [(1, 1)] => Some(SpiessKind::Hn1(f)),
            [(1, 2)] => Some(SpiessKind::Hn2(f)),
            [(1, 3)] => Some(SpiessKind::Hn3(f)),
            [(1, 4)] => Some(SpiessKind::Hn4(f)),
            fs if fs == mixed => Some(SpiessKind::Mixed(f)),
            _ => None,
        },
        _ => None,
    }
}

fn run_sum(
    poly: &PolyExpr,
    power: Option<u32>,
    factors: Option<&Factors>,
    shifted: bool,
    structured: bool,
    format: Format,
) -> harmsum::Result<Outcome> {
    let f = &poly.poly;
    if structured {
        let Some(kind) = spiess_kind(poly, power, factors) else {
            return Ok(Outcome::usage(
                "--structured supports --power 1..4 and --factors 1^1,2^1".to_string(),
            ));
        };
        let s = if shifted { spiess_form_shifted(&kind)? } else { spiess_form(&kind)? };
        return Ok(Outcome::ok(line(s.render(format))));
    }
    let cf = match (power, factors) {
        (Some(t), _) if shifted => sum_power_shifted(f, t)?,
        (Some(t), _) => sum_power(f, t)?,
        (None, Some(fs)) if shifted => sum_product_shifted(f, &fs.0)?,
        (None, Some(fs)) => sum_product(f, &fs.0)?,
        (None, None) => return Ok(Outcome::usage("one of --power or --factors is required".into())),
    };
    Ok(Outcome::ok(line(cf.render(format))))
}

fn run_check(poly: &PolyExpr, power: u32) -> harmsum::Result<Outcome> {
    let report = structure_check(&poly.poly, power)?;
    Ok(Outcome {
        stdout: line(report.to_json().to_string()),
        stderr: String::new(),
        code: if report.passes { EXIT_OK } else { EXIT_MISMATCH },
    })
}

pub fn bernoulli_csv(max: usize, convention: harmsum::Convention) -> String {
    let mut out = String::from("index,numerator,denominator\n");
    for i in 0..=max {
        let b = bernoulli(i, convention);
        out.push_str(&format!("{i},{},{}\n", b.numer(), b.denom()));
    }
    out
}

pub const TABLE_HEADER: &str = "p,composition,n,oracle_num,oracle_den,closed_num,closed_den,match";

fn run_table(p_max: u32, weight_max: u32, n: u64) -> Outcome {
    let mut comps = vec![Composition::empty()];
    comps.extend(Composition::all_proper(weight_max as i64, weight_max as usize));
    let jobs: Vec<(u32, Composition)> = (0..=p_max)
        .flat_map(|p| comps.iter().map(move |k| (p, k.clone())))
        .collect();
    let rows: Vec<Result<(String, bool), String>> = jobs
        .par_iter()
        .map(|(p, k)| {
            let target = k.prepend(-(*p as i64));
            let oracle = mhs_eval(n, &target).map_err(|e| e.to_string())?;
            let closed = reduce(*p, k)
                .and_then(|cf| cf.eval(n))
                .map_err(|e| e.to_string())?;
            let hit = oracle == closed;
            let comp: Vec<String> = k.entries().iter().map(i64::to_string).collect();
            Ok((
                format!(
                    "{p},{},{n},{},{},{},{},{hit}",
                    comp.join(";"),
                    oracle.numer(),
                    oracle.denom(),
                    closed.numer(),
                    closed.denom()
                ),
                hit,
            ))
        })
        .collect();
    let mut out = Outcome::ok(format!("{TABLE_HEADER}\n"));
    for row in rows {
        match row {
            Ok((text, hit)) => {
                out.stdout.push_str(&text);
                out.stdout.push('\n');
                if !hit {
                    out.code = EXIT_MISMATCH;
                }
            }
            Err(e) => {
                out.stderr.push_str(&format!("error: {e}\n"));
                out.code = EXIT_MISMATCH;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run_args(args: &[&str]) -> Outcome {
        run(&Query::try_parse_from(std::iter::once("harmsum").chain(args.iter().copied())).unwrap())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(run_args(&["eval", "--n", "4", "--comp", "1"]).stdout, "25/12\n");
        assert_eq!(run_args(&["eval", "--n", "3", "--comp", "0,1"]).stdout, "5/2\n");
        assert_eq!(run_args(&["--format", "json", "eval", "--n", "2", "--comp", "2"]).stdout, "[5,4]\n");
        assert_eq!(run_args(&["--format", "latex", "eval", "--n", "2", "--comp", "2"]).stdout, "\\frac{5}{4}\n");
        let bad = run_args(&["eval", "--n", "3", "--comp", "1,-1"]);
        assert_eq!(bad.code, EXIT_USAGE);
        assert!(bad.stderr.starts_with("error:"));
    }

    #[test]
    fn reduce_outputs() {
        let out = run_args(&["reduce", "-p", "0", "--comp", "1,2", "--method", "both"]);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout, "H(1) - n*H(2) + n*H(1,2)\n");
        let out = run_args(&["--format", "latex", "reduce", "-p", "0", "--comp", "2,1"]);
        assert_eq!(out.stdout, "-H_n(1,1)+nH_n(2,1)\n");
        assert_eq!(run_args(&["reduce", "-p", "1", "--comp", "0,1"]).code, EXIT_USAGE);
    }

    #[test]
    fn sum_outputs() {
        let out = run_args(&["sum", "--poly", "1", "--power", "2", "--structured"]);
        assert_eq!(out.stdout, "n*H^2 - (2*n + 1)*H + 2*n\n");
        let a = run_args(&["sum", "--poly", "1", "--power", "2"]);
        let b = run_args(&["sum", "--poly", "1", "--factors", "1^2"]);
        assert_eq!(a, b);
        let out = run_args(&["sum", "--poly", "m", "--factors", "1^1,2^1", "--structured"]);
        assert!(out.stdout.ends_with("+ 3/4*n\n"), "{}", out.stdout);
        let out = run_args(&["sum", "--poly", "m", "--factors", "3^1", "--structured"]);
        assert_eq!(out.code, EXIT_USAGE);
        let out = run_args(&["sum", "--poly", "1", "--power", "0", "--shifted"]);
        assert_eq!(out.stdout, "n + 1\n");
    }

    #[test]
    fn check_emits_json() {
        let out = run_args(&["check", "--poly", "1", "--power", "2"]);
        assert_eq!(out.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["passes"], serde_json::json!(true));
        assert_eq!(v["offending_terms"], serde_json::json!([]));
    }

    #[test]
    fn bernoulli_table() {
        let out = run_args(&["bernoulli", "--max", "4", "--convention", "minus"]);
        assert_eq!(
            out.stdout,
            "index,numerator,denominator\n0,1,1\n1,-1,2\n2,1,6\n3,0,1\n4,-1,30\n"
        );
        let plus = run_args(&["bernoulli", "--max", "1"]);
        assert_eq!(plus.stdout, "index,numerator,denominator\n0,1,1\n1,1,2\n");
    }

    #[test]
    fn table_rows() {
        let out = run_args(&["table", "--p-max", "1", "--weight-max", "3", "--n", "5"]);
        assert_eq!(out.code, EXIT_OK);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines[0], TABLE_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 8);
        assert!(lines.iter().skip(1).all(|l| l.ends_with(",true")));
        assert!(lines.contains(&"0,,5,5,1,5,1,true"));
        assert!(lines.contains(&"1,,5,15,1,15,1,true"));
        // both value columns of the (1,(2,1)) row equal the printed H_n(-1,2,1) form at n = 5
        let row = lines.iter().find(|l| l.starts_with("1,2;1,5,")).unwrap();
        let h = |k: &[i64]| mhs_eval(5, &Composition::from(k)).unwrap();
        let h1 = h(&[1]);
        let printed = Rational::from_integer(15.into()) * h(&[2, 1])
            - (&h1 * &h1 - h(&[2])) / Rational::from_integer(4.into())
            - Rational::new(5.into(), 2.into()) * &h1
            + Rational::new(5.into(), 2.into());
        assert!(row.contains(&format!(",{},{},", printed.numer(), printed.denom())), "{row}");
    }

    #[test]
    fn emitters_are_deterministic() {
        let args = ["--threads", "3", "table", "--p-max", "2", "--weight-max", "3", "--n", "9"];
        assert_eq!(run_args(&args), run_args(&args));
    }
}
