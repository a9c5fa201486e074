//! Bernoulli numbers in both conventions and umbral evaluation at `B`.
//!
//! `Plus` is the convention of `t e^t / (e^t - 1)` (B₁ = 1/2), `Minus` the one
//! of `t / (e^t - 1)` (B̃₁ = -1/2). They agree at every other index.
//!
//! Values come from Σ_{j=0..m} C(m+1, j)·B̃_j = 0 (m ≥ 1), B̃₀ = 1, and are
//! memoized in an append-only table.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::poly::Polynomial;
use crate::rational::{binomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// B₁ = 1/2.
    Plus,
    /// B̃₁ = -1/2.
    Minus,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Plus => "plus",
            Convention::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" => Ok(Convention::Plus),
            "minus" => Ok(Convention::Minus),
            other => Err(format!("unknown convention `{other}` (expected plus or minus)")),
        }
    }
}

/// A growable table of Bernoulli numbers for one convention.
///
/// Owned tables need `&mut self` to grow; the free function [`bernoulli`]
/// shares a process-wide table behind a lock instead.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    convention: Convention,
    minus: Vec<Rational>,
}

impl BernoulliTable {
    pub fn new(convention: Convention) -> Self {
        BernoulliTable {
            convention,
            minus: vec![Rational::one()],
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn get(&mut self, n: usize) -> Rational {
        extend_minus(&mut self.minus, n);
        apply_convention(&self.minus[n], n, self.convention)
    }

    /// B₀..=B_max in this table's convention.
    pub fn values(&mut self, max: usize) -> Vec<Rational> {
        (0..=max).map(|n| self.get(n)).collect()
    }
}

fn extend_minus(table: &mut Vec<Rational>, n: usize) {
    while table.len() <= n {
        let m = table.len();
        // C(m+1, m)·B̃_m = -Σ_{j<m} C(m+1, j)·B̃_j
        let s = table
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .map(|(j, b)| b * Rational::from_integer(binomial(m as i64 + 1, j as i64)))
            .fold(Rational::zero(), |a, b| a + b);
        table.push(-s / Rational::from_integer((m as i64 + 1).into()));
    }
}

fn apply_convention(minus_value: &Rational, n: usize, convention: Convention) -> Rational {
    if n == 1 && convention == Convention::Plus {
        -minus_value.clone()
    } else {
        minus_value.clone()
    }
}

fn shared_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// B_n in the requested convention, from the shared memo table.
pub fn bernoulli(n: usize, convention: Convention) -> Rational {
    {
        let table = shared_table().read().expect("bernoulli table poisoned");
        if let Some(v) = table.get(n) {
            return apply_convention(v, n, convention);
        }
    }
    let mut table = shared_table().write().expect("bernoulli table poisoned");
    extend_minus(&mut table, n);
    apply_convention(&table[n], n, convention)
}

/// Plus-convention B_n.
pub fn bplus(n: usize) -> Rational {
    bernoulli(n, Convention::Plus)
}

/// B_i for a possibly negative index, taken as zero there.
///
/// Products like `p·B_{p-1}` and `p(p-1)·B_{p-2}` only reach a negative index
/// when their integer prefactor already vanishes.
pub fn bplus_signed(i: i64) -> Rational {
    if i < 0 {
        Rational::zero()
    } else {
        bplus(i as usize)
    }
}

/// `P(B)`: replace every `x^i` by the `i`-th Bernoulli number.
pub fn umbral_eval(p: &Polynomial, convention: Convention) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * bernoulli(i, convention))
        .fold(Rational::zero(), |a, b| a + b)
}

/// Flags `(P(B̃) = 0, P(B - 1) = 0)`. They always agree.
pub fn check_two_bs(p: &Polynomial) -> (bool, bool) {
    let minus_is_zero = umbral_eval(p, Convention::Minus).is_zero();
    let shifted = p.shift(&-Rational::one());
    let shifted_plus_is_zero = umbral_eval(&shifted, Convention::Plus).is_zero();
    (minus_is_zero, shifted_plus_is_zero)
}
