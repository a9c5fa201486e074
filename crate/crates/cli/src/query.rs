//! Parsed command lines and their canonical flag form.

use std::fmt;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use harmsum::{parse_poly, Composition, Convention, Error, Format, Method, Polynomial};

/// A parsed invocation.
#[derive(Parser, Clone, Debug, PartialEq, Eq)]
#[command(name = "harmsum", version, about = "Exact closed forms for extended multiple harmonic sums")]
pub struct Query {
    /// Output format for symbolic results.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for `verify` and `table`.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Closed form of H_n(-p, k).
    Reduce {
        #[arg(short = 'p')]
        p: u32,
        /// Proper tail composition, e.g. "1,2"; "" for H_n(-p).
        #[arg(long, value_parser = parse_composition)]
        comp: Composition,
        #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
        method: MethodArg,
    },
    /// Closed form of Σ F(m)·H_{m-1}^t or Σ F(m)·Π H_{m-1}(order)^mult.
    Sum {
        #[arg(long, allow_hyphen_values = true)]
        poly: PolyExpr,
        #[arg(long, required_unless_present = "factors", conflicts_with = "factors")]
        power: Option<u32>,
        /// Harmonic factors as order^multiplicity, e.g. "1^1,2^1".
        #[arg(long)]
        factors: Option<Factors>,
        /// Sum over m = 0..n against H_m instead of m = 1..n against H_{m-1}.
        #[arg(long)]
        shifted: bool,
        /// Print the presentation by powers of H_n.
        #[arg(long)]
        structured: bool,
    },
    /// Exact value of H_n(k); the first entry may be ≤ 0.
    Eval {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_composition)]
        comp: Composition,
    },
    /// Checks the structure of Σ F(m)·H_{m-1}^t; prints a JSON report.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        poly: PolyExpr,
        #[arg(long)]
        power: u32,
    },
    /// Bernoulli numbers as CSV.
    Bernoulli {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Plus)]
        convention: ConventionArg,
    },
    /// Oracle against closed form for every p ≤ p-max and weight ≤ weight-max, as CSV.
    Table {
        #[arg(long)]
        p_max: u32,
        #[arg(long)]
        weight_max: u32,
        #[arg(long)]
        n: u64,
    },
    /// Runs the identity suites against brute-force evaluation.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 25)]
        max_n: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Latex => Format::Latex,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Recurrence,
    Theorem,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Recurrence => Method::Recurrence,
            MethodArg::Theorem => Method::Theorem,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    Plus,
    Minus,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Plus => Convention::Plus,
            ConventionArg::Minus => Convention::Minus,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Reduce,
    Sums,
    All,
}

/// A polynomial argument; equality ignores the source spelling.
#[derive(Clone, Debug)]
pub struct PolyExpr {
    pub source: String,
    pub poly: Polynomial,
}

impl PartialEq for PolyExpr {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for PolyExpr {}

impl FromStr for PolyExpr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_poly(s)
            .map(|poly| PolyExpr { source: s.to_string(), poly })
            .map_err(describe)
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.render("m"))
    }
}

/// `(order, multiplicity)` pairs, merged by order and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factors(pub Vec<(u32, u32)>);

impl FromStr for Factors {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (order, mult) = item.split_once('^').unwrap_or((item, "1"));
            let order: u32 = order
                .trim()
                .parse()
                .map_err(|_| format!("bad harmonic order in `{item}`"))?;
            let mult: u32 = mult
                .trim()
                .parse()
                .map_err(|_| format!("bad multiplicity in `{item}`"))?;
            if order == 0 {
                return Err(format!("harmonic order must be positive in `{item}`"));
            }
            match out.iter_mut().find(|(o, _)| *o == order) {
                Some((_, m)) => *m += mult,
                None => out.push((order, mult)),
            }
        }
        out.retain(|&(_, m)| m > 0);
        out.sort_unstable();
        Ok(Factors(out))
    }
}

impl fmt::Display for Factors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(o, m)| format!("{o}^{m}")).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse::<Composition>().map_err(describe)
}

fn describe(e: Error) -> String {
    match e {
        Error::Parse { offset, message } => format!("at byte {offset}: {message}"),
        other => other.to_string(),
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

impl Query {
    /// Canonical argument vector, without the program name.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = vec!["--format".into(), value_name(&self.format)];
        if let Some(t) = self.threads {
            a.extend(["--threads".into(), t.to_string()]);
        }
        match &self.command {
            Command::Reduce { p, comp, method } => {
                a.extend(["reduce".into(), "-p".into(), p.to_string()]);
                a.extend(["--comp".into(), comp.to_flag()]);
                a.extend(["--method".into(), value_name(method)]);
            }
            Command::Sum { poly, power, factors, shifted, structured } => {
                a.extend(["sum".into(), "--poly".into(), poly.to_string()]);
                if let Some(t) = power {
                    a.extend(["--power".into(), t.to_string()]);
                }
                if let Some(f) = factors {
                    a.extend(["--factors".into(), f.to_string()]);
                }
                if *shifted {
                    a.push("--shifted".into());
                }
                if *structured {
                    a.push("--structured".into());
                }
            }
            Command::Eval { n, comp } => {
                a.extend(["eval".into(), "--n".into(), n.to_string()]);
                a.extend(["--comp".into(), comp.to_flag()]);
            }
            Command::Check { poly, power } => {
                a.extend(["check".into(), "--poly".into(), poly.to_string()]);
                a.extend(["--power".into(), power.to_string()]);
            }
            Command::Bernoulli { max, convention } => {
                a.extend(["bernoulli".into(), "--max".into(), max.to_string()]);
                a.extend(["--convention".into(), value_name(convention)]);
            }
            Command::Table { p_max, weight_max, n } => {
                a.extend(["table".into(), "--p-max".into(), p_max.to_string()]);
                a.extend(["--weight-max".into(), weight_max.to_string()]);
                a.extend(["--n".into(), n.to_string()]);
            }
            Command::Verify { suite, max_n } => {
                a.extend(["verify".into(), "--suite".into(), value_name(suite)]);
                a.extend(["--max-n".into(), max_n.to_string()]);
            }
        }
        a
    }

    /// [`Query::to_args`] as one shell-quoted line.
    pub fn to_flag_string(&self) -> String {
        self.to_args()
            .iter()
            .map(|s| shell_quote(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b"-_.,/^=+:".contains(&b));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}
