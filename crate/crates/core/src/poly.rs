//! Dense univariate polynomials over [`Rational`].
//!
//! The indeterminate is read as `n` or `x` depending on context; rendering
//! takes the variable name as an argument. Coefficients are stored in
//! ascending degree with trailing zeros trimmed, so structural equality is
//! polynomial equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, fmt_rational, latex_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * x^exp`.
    pub fn monomial(c: Rational, exp: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); exp + 1];
        coeffs[exp] = c;
        Self::new(coeffs)
    }

    /// Integer coefficients in ascending degree, mostly for tests.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(x.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `Q(x) = P(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        // Q_k = sum_{i >= k} C(i, k) P_i c^{i-k}
        let deg = self.coeffs.len();
        let mut powers = Vec::with_capacity(deg);
        let mut acc = Rational::one();
        for _ in 0..deg {
            powers.push(acc.clone());
            acc *= c;
        }
        let coeffs = (0..deg)
            .map(|k| {
                (k..deg)
                    .map(|i| {
                        &self.coeffs[i]
                            * Rational::from_integer(binomial(i as i64, k as i64))
                            * &powers[i - k]
                    })
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// `Q` with `x * Q(x) = P(x)`; fails when the constant term is nonzero.
    pub fn divide_x(&self) -> Result<Self> {
        match self.coeffs.first() {
            None => Ok(Self::zero()),
            Some(c0) if !c0.is_zero() => Err(Error::NotDivisibleByX(fmt_rational(c0))),
            Some(_) => Ok(Polynomial {
                coeffs: self.coeffs[1..].to_vec(),
            }),
        }
    }

    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// The polynomial `S` with `S(n) = F(1) + ... + F(n)` for every `n >= 0`.
    pub fn discrete_sum(&self) -> Self {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| crate::reducer::faulhaber(p as u32).scale(c))
            .fold(Self::zero(), |a, b| a + b)
    }

    /// Canonical text form, highest degree first, e.g. `1/2*n^2 - 3*n + 1`.
    ///
    /// [`crate::parse::parse_poly`] reads it back to the same polynomial.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let var_part = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if var_part.is_empty() {
                out.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{}*{var_part}", fmt_rational(&mag)));
            }
        }
        out
    }

    /// LaTeX form, highest degree first, e.g. `\frac{1}{2}n^{2}+\frac{1}{2}n`.
    pub fn render_latex(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = c.abs();
            let var_part = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{{{i}}}"),
            };
            if var_part.is_empty() || !mag.is_one() {
                out.push_str(&latex_rational(&mag));
            }
            out.push_str(&var_part);
        }
        out
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
