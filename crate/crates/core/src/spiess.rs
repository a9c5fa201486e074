//! Closed forms for sums of polynomials against powers and products of
//! harmonic numbers.
//!
//! The generic pipeline writes `Σ_{m=1..n} F(m)·Π H_{m-1}(…)` as a stuffle
//! combination `Σ c_ℓ·H_{m-1}(ℓ)`, uses
//! `Σ_{m=1..n} m^p·H_{m-1}(ℓ) = H_n(-p, ℓ)` and reduces each extended sum.
//!
//! [`spiess_form`] builds the same sums in the presentation by powers of
//! `H_n` (plus `H_n(2)`, `H_n(2,1)`, `H_n(3)`) from the coefficient
//! polynomials `C^{(p)}` and the umbral constants; [`structured_to_closed`]
//! expands that presentation back to the flat basis for comparison.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::bernoulli::{bplus, bplus_signed, umbral_eval, Convention};
use crate::closed_form::{join_signed, signed_pieces, ClosedForm, Format};
use crate::composition::Composition;
use crate::error::Result;
use crate::poly::Polynomial;
use crate::rational::{int, rational_to_json, rat, Rational};
use crate::reducer::{c_poly, d_poly, d_umbral, reduce, CIndex};
use crate::stuffle::{expand_power, product_combinations, MhsCombination};

/// `Σ_{m=1..n} F(m)·Σ_ℓ c_ℓ·H_{m-1}(ℓ)`.
pub fn sum_against(f: &Polynomial, combo: &MhsCombination) -> Result<ClosedForm> {
    let mut out = ClosedForm::zero();
    for (p, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (l, c) in combo.iter() {
            out.add_scaled(&reduce(p as u32, l)?, &(a * c));
        }
    }
    Ok(out)
}

/// `Σ_{m=1..n} F(m)·H_{m-1}^t`.
pub fn sum_power(f: &Polynomial, t: u32) -> Result<ClosedForm> {
    sum_against(f, &expand_power(1, t))
}

/// `Σ_{m=0..n} F(m)·H_m^t = F(n)·H_n^t + Σ_{m=1..n} F(m-1)·H_{m-1}^t`.
pub fn sum_power_shifted(f: &Polynomial, t: u32) -> Result<ClosedForm> {
    let head = ClosedForm::from_combination(&expand_power(1, t)).scale(f);
    Ok(&head + &sum_power(&f.shift(&-int(1)), t)?)
}

/// `Π H(order)^mult` as a flat combination.
pub fn product_of_powers(factors: &[(u32, u32)]) -> MhsCombination {
    factors
        .iter()
        .fold(MhsCombination::one(), |acc, &(order, mult)| {
            product_combinations(&acc, &expand_power(order, mult))
        })
}

/// `Σ_{m=1..n} F(m)·Π H_{m-1}(orderᵢ)^{multᵢ}`.
pub fn sum_product(f: &Polynomial, factors: &[(u32, u32)]) -> Result<ClosedForm> {
    sum_against(f, &product_of_powers(factors))
}

/// `Σ_{m=0..n} F(m)·Π H_m(orderᵢ)^{multᵢ}`.
pub fn sum_product_shifted(f: &Polynomial, factors: &[(u32, u32)]) -> Result<ClosedForm> {
    let combo = product_of_powers(factors);
    let head = ClosedForm::from_combination(&combo).scale(f);
    Ok(&head + &sum_against(&f.shift(&-int(1)), &combo)?)
}

/// What the leading coefficient of a [`StructuredForm`] multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeadingBlock {
    /// `H_n^t`.
    Power(u32),
    /// `H_n·H_n(2)`.
    HarmonicTimesOrderTwo,
}

/// A sum presented as
/// `leading·[block] + Σ_i q_i(n)·H_n^i + c2(n)·H_n(2) + c21·H_n(2,1) + c3·H_n(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredForm {
    pub block: LeadingBlock,
    pub leading: Polynomial,
    /// `q[i]` multiplies `H_n^i`.
    pub q: Vec<Polynomial>,
    pub c2: Polynomial,
    pub c21: Rational,
    pub c3: Rational,
}

impl StructuredForm {
    fn zero(block: LeadingBlock, q_len: usize) -> Self {
        StructuredForm {
            block,
            leading: Polynomial::zero(),
            q: vec![Polynomial::zero(); q_len],
            c2: Polynomial::zero(),
            c21: Rational::zero(),
            c3: Rational::zero(),
        }
    }

    fn add_scaled(&mut self, other: &StructuredForm, a: &Rational) {
        debug_assert_eq!(self.block, other.block);
        self.leading = &self.leading + &other.leading.scale(a);
        if self.q.len() < other.q.len() {
            self.q.resize(other.q.len(), Polynomial::zero());
        }
        for (mine, theirs) in self.q.iter_mut().zip(&other.q) {
            *mine = &*mine + &theirs.scale(a);
        }
        self.c2 = &self.c2 + &other.c2.scale(a);
        self.c21 += &other.c21 * a;
        self.c3 += &other.c3 * a;
    }

    /// Largest degree among all polynomial slots except `leading`.
    pub fn lower_degree(&self) -> i64 {
        self.q
            .iter()
            .chain(std::iter::once(&self.c2))
            .map(Polynomial::degree)
            .max()
            .unwrap_or(-1)
    }

    /// Terms as (coefficient, text label, LaTeX label), leading block first,
    /// then descending powers of `H_n`, the fixed sums, and the constant.
    fn labelled_terms(&self) -> Vec<(Polynomial, String, String)> {
        let (text, latex) = match self.block {
            LeadingBlock::Power(t) => power_labels(t),
            LeadingBlock::HarmonicTimesOrderTwo => ("H*H(2)".into(), "H_nH_n(2)".into()),
        };
        let mut out = vec![(self.leading.clone(), text, latex)];
        for (i, q) in self.q.iter().enumerate().skip(1).rev() {
            let (text, latex) = power_labels(i as u32);
            out.push((q.clone(), text, latex));
        }
        out.push((self.c2.clone(), "H(2)".into(), "H_n(2)".into()));
        out.push((Polynomial::constant(self.c21.clone()), "H(2,1)".into(), "H_n(2,1)".into()));
        out.push((Polynomial::constant(self.c3.clone()), "H(3)".into(), "H_n(3)".into()));
        if let Some(q0) = self.q.first() {
            out.push((q0.clone(), String::new(), String::new()));
        }
        out.retain(|(p, _, _)| !p.is_zero());
        out
    }

    pub fn render(&self, format: Format) -> String {
        let terms = self.labelled_terms();
        let out = match format {
            Format::Text => join_signed(
                terms.iter().flat_map(|(p, h, _)| {
                    signed_pieces(p, h, "*", |q| q.render("n"), "(", ")")
                }),
                " + ",
                " - ",
                "-",
            ),
            Format::Latex => join_signed(
                terms.iter().flat_map(|(p, _, h)| {
                    signed_pieces(p, h, "", |q| q.render_latex("n"), "\\left(", "\\right)")
                }),
                "+",
                "-",
                "-",
            ),
            Format::Json => return self.to_json().to_string(),
        };
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }

    pub fn to_json(&self) -> Value {
        let poly = |p: &Polynomial| p.coeffs().iter().map(rational_to_json).collect::<Vec<_>>();
        let block = match self.block {
            LeadingBlock::Power(t) => json!({ "power": t }),
            LeadingBlock::HarmonicTimesOrderTwo => json!("H*H(2)"),
        };
        json!({
            "block": block,
            "leading": poly(&self.leading),
            "q": self.q.iter().map(poly).collect::<Vec<_>>(),
            "c2": poly(&self.c2),
            "c21": rational_to_json(&self.c21),
            "c3": rational_to_json(&self.c3),
        })
    }
}

fn power_labels(i: u32) -> (String, String) {
    match i {
        0 => (String::new(), String::new()),
        1 => ("H".into(), "H_n".into()),
        _ => (format!("H^{i}"), format!("H_n^{{{i}}}")),
    }
}

/// The presentations that have an explicit form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpiessKind {
    /// `Σ F(m)·H_{m-1}`.
    Hn1(Polynomial),
    /// `Σ F(m)·H_{m-1}²`.
    Hn2(Polynomial),
    /// `Σ F(m)·H_{m-1}³`.
    Hn3(Polynomial),
    /// `Σ F(m)·H_{m-1}·H_{m-1}(2)`.
    Mixed(Polynomial),
    /// `Σ F(m)·H_{m-1}⁴`.
    Hn4(Polynomial),
}

impl SpiessKind {
    pub fn hn2(p: u32) -> Self {
        SpiessKind::Hn2(Polynomial::monomial(int(1), p as usize))
    }

    pub fn hn3(p: u32) -> Self {
        SpiessKind::Hn3(Polynomial::monomial(int(1), p as usize))
    }

    pub fn mixed(p: u32) -> Self {
        SpiessKind::Mixed(Polynomial::monomial(int(1), p as usize))
    }

    pub fn polynomial(&self) -> &Polynomial {
        match self {
            SpiessKind::Hn1(f)
            | SpiessKind::Hn2(f)
            | SpiessKind::Hn3(f)
            | SpiessKind::Mixed(f)
            | SpiessKind::Hn4(f) => f,
        }
    }

    fn block(&self) -> LeadingBlock {
        match self {
            SpiessKind::Hn1(_) => LeadingBlock::Power(1),
            SpiessKind::Hn2(_) => LeadingBlock::Power(2),
            SpiessKind::Hn3(_) => LeadingBlock::Power(3),
            SpiessKind::Mixed(_) => LeadingBlock::HarmonicTimesOrderTwo,
            SpiessKind::Hn4(_) => LeadingBlock::Power(4),
        }
    }

    fn with_polynomial(&self, f: Polynomial) -> Self {
        match self {
            SpiessKind::Hn1(_) => SpiessKind::Hn1(f),
            SpiessKind::Hn2(_) => SpiessKind::Hn2(f),
            SpiessKind::Hn3(_) => SpiessKind::Hn3(f),
            SpiessKind::Mixed(_) => SpiessKind::Mixed(f),
            SpiessKind::Hn4(_) => SpiessKind::Hn4(f),
        }
    }

    /// The matching generic-pipeline sum over `m = 1..n`.
    pub fn generic(&self) -> Result<ClosedForm> {
        let f = self.polynomial();
        match self {
            SpiessKind::Hn1(_) => sum_power(f, 1),
            SpiessKind::Hn2(_) => sum_power(f, 2),
            SpiessKind::Hn3(_) => sum_power(f, 3),
            SpiessKind::Mixed(_) => sum_product(f, &[(1, 1), (2, 1)]),
            SpiessKind::Hn4(_) => sum_power(f, 4),
        }
    }

    /// The matching generic-pipeline sum over `m = 0..n`.
    pub fn generic_shifted(&self) -> Result<ClosedForm> {
        let f = self.polynomial();
        match self {
            SpiessKind::Hn1(_) => sum_power_shifted(f, 1),
            SpiessKind::Hn2(_) => sum_power_shifted(f, 2),
            SpiessKind::Hn3(_) => sum_power_shifted(f, 3),
            SpiessKind::Mixed(_) => sum_product_shifted(f, &[(1, 1), (2, 1)]),
            SpiessKind::Hn4(_) => sum_power_shifted(f, 4),
        }
    }
}

/// Per-exponent constants shared by the presentations.
struct MonomialData {
    p: u32,
    d_b: Rational,
    b_p: Rational,
    /// `p·B_{p-1}`
    pb1: Rational,
    /// `p(p-1)·B_{p-2}`
    pb2: Rational,
}

impl MonomialData {
    fn new(p: u32) -> Result<Self> {
        let pi = p as i64;
        Ok(MonomialData {
            p,
            d_b: d_umbral(&CIndex::new(p, &[]))?,
            b_p: bplus(p as usize),
            pb1: int(pi) * bplus_signed(pi - 1),
            pb2: int(pi * (pi - 1)) * bplus_signed(pi - 2),
        })
    }

    fn c(&self, a: &[u32]) -> Polynomial {
        c_poly(&CIndex::new(self.p, a))
    }

    fn k(v: Rational) -> Polynomial {
        Polynomial::constant(v)
    }

    fn hn1(&self) -> StructuredForm {
        let c = |a: &[u32]| self.c(a);
        let mut s = StructuredForm::zero(LeadingBlock::Power(1), 1);
        s.leading = c(&[]);
        s.q[0] = -c(&[0]);
        s
    }

    fn hn2(&self) -> StructuredForm {
        let c = |a: &[u32]| self.c(a);
        let mut s = StructuredForm::zero(LeadingBlock::Power(2), 2);
        s.leading = c(&[]);
        s.q[1] = -(c(&[0]).scale(&int(2)) + Self::k(self.b_p.clone()));
        s.q[0] = c(&[0, 0]).scale(&int(2)) - c(&[1]);
        s
    }

    fn mixed(&self) -> StructuredForm {
        let c = |a: &[u32]| self.c(a);
        let half = rat(1, 2);
        let mut s = StructuredForm::zero(LeadingBlock::HarmonicTimesOrderTwo, 3);
        s.leading = c(&[]);
        s.q[2] = Self::k(-&self.b_p * &half);
        s.q[1] = Self::k(&self.d_b - &self.pb1 * &half) - c(&[1]);
        s.c2 = -(c(&[0]) + Self::k(&self.b_p * &half));
        s.q[0] = c(&[0, 1]) + c(&[1, 1]) - c(&[2]);
        s
    }

    fn hn3(&self) -> StructuredForm {
        let c = |a: &[u32]| self.c(a);
        let half = rat(1, 2);
        let mut s = StructuredForm::zero(LeadingBlock::Power(3), 3);
        s.leading = c(&[]);
        s.q[2] = (c(&[0]) + Self::k(&self.b_p * &half)).scale(&int(-3));
        s.c2 = Self::k(&self.b_p * &half);
        s.q[1] = c(&[0, 0]).scale(&int(6)) - c(&[1]).scale(&int(3))
            + Self::k(&self.d_b * int(3) - &self.pb1 * &half);
        s.q[0] = c(&[0, 0, 0]).scale(&int(-6)) + c(&[0, 1]).scale(&int(3))
            + c(&[1, 1]).scale(&int(3))
            - c(&[2]);
        s
    }

    fn hn4(&self) -> Result<StructuredForm> {
        let c = |a: &[u32]| self.c(a);
        let p = self.p;
        let d_poly0 = d_poly(&CIndex::new(p, &[]))?;
        // D'(B) and ((D(x) - B_p)/x)(B); D(0) = B_p makes the quotient exact
        let d_prime_b = umbral_eval(&d_poly0.derivative(), Convention::Plus);
        let d_quot_b = umbral_eval(
            &(&d_poly0 - &Self::k(self.b_p.clone())).divide_x()?,
            Convention::Plus,
        );
        let d0_b = d_umbral(&CIndex::new(p, &[0]))?;

        let mut s = StructuredForm::zero(LeadingBlock::Power(4), 4);
        s.leading = c(&[]);
        // H_n(2) coefficient: the H_n(-p,1,3) contribution is the constant D^{(p)}(B)
        s.c2 = Self::k(&self.d_b * int(-6) + &self.d_b * int(4) + &self.pb1 * rat(1, 2));
        s.q[0] = c(&[0, 0, 0, 0]).scale(&int(24))
            - c(&[0, 0, 1]).scale(&int(12))
            - c(&[0, 1, 1]).scale(&int(12))
            - c(&[1, 1, 1]).scale(&int(12))
            + c(&[0, 2]).scale(&int(4))
            + c(&[1, 2]).scale(&int(6))
            + c(&[2, 2]).scale(&int(4))
            - c(&[3]);
        s.q[1] = c(&[0, 0, 0]).scale(&int(-24))
            + c(&[0, 1]).scale(&int(12))
            + c(&[1, 1]).scale(&int(12))
            - c(&[2]).scale(&int(4))
            + Self::k(
                d0_b * int(-12) + d_prime_b * int(2) + d_quot_b * int(6) - &self.pb2 * rat(1, 6),
            );
        s.q[2] = c(&[0, 0]).scale(&int(12)) - c(&[1]).scale(&int(6))
            + Self::k(&self.d_b * int(6) - &self.pb1);
        s.q[3] = c(&[0]).scale(&int(-4)) - Self::k(&self.b_p * int(2));
        s.c21 = &self.b_p * int(2);
        s.c3 = self.b_p.clone();
        Ok(s)
    }
}

/// The explicit presentation of `kind`, assembled monomial by monomial
/// from `C^{(p)}`, `D^{(p)}(B)` and Bernoulli numbers.
///
/// For `Hn4` the scalars on `H_n(2,1)` and `H_n(3)` are `2F(B)` and `F(B)`.
pub fn spiess_form(kind: &SpiessKind) -> Result<StructuredForm> {
    let f = kind.polynomial();
    let q_len = match kind {
        SpiessKind::Hn1(_) => 1,
        SpiessKind::Hn2(_) => 2,
        SpiessKind::Hn3(_) | SpiessKind::Mixed(_) => 3,
        SpiessKind::Hn4(_) => 4,
    };
    let mut out = StructuredForm::zero(kind.block(), q_len);
    for (p, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let m = MonomialData::new(p as u32)?;
        let piece = match kind {
            SpiessKind::Hn1(_) => m.hn1(),
            SpiessKind::Hn2(_) => m.hn2(),
            SpiessKind::Hn3(_) => m.hn3(),
            SpiessKind::Mixed(_) => m.mixed(),
            SpiessKind::Hn4(_) => m.hn4()?,
        };
        out.add_scaled(&piece, a);
    }
    Ok(out)
}

/// The presentation of the `m = 0..n` variant: `F(n)·[block]` plus the
/// form for `F(m-1)`.
pub fn spiess_form_shifted(kind: &SpiessKind) -> Result<StructuredForm> {
    let f = kind.polynomial().clone();
    let mut s = spiess_form(&kind.with_polynomial(f.shift(&-int(1))))?;
    s.leading = &s.leading + &f;
    Ok(s)
}

/// Expands a presentation into the flat basis.
pub fn structured_to_closed(s: &StructuredForm) -> ClosedForm {
    let block = match s.block {
        LeadingBlock::Power(t) => expand_power(1, t),
        LeadingBlock::HarmonicTimesOrderTwo => {
            product_combinations(&expand_power(1, 1), &expand_power(2, 1))
        }
    };
    let mut out = ClosedForm::from_combination(&block).scale(&s.leading);
    for (i, q) in s.q.iter().enumerate() {
        out = &out + &ClosedForm::from_combination(&expand_power(1, i as u32)).scale(q);
    }
    out.add_term(Composition::from([2]), s.c2.clone());
    out.add_term(Composition::from([2, 1]), Polynomial::constant(s.c21.clone()));
    out.add_term(Composition::from([3]), Polynomial::constant(s.c3.clone()));
    out
}

/// Outcome of [`structure_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub passes: bool,
    /// Remainder terms whose depth is ≥ t or whose degree exceeds deg F + 1.
    pub offending_terms: Vec<(Composition, Polynomial)>,
    /// `Σ F(m)·H_{m-1}^t - S_n(F)·H_n^t`, flat.
    pub remainder: ClosedForm,
    pub depth_bound: usize,
    pub degree_bound: i64,
}

impl StructureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "passes": self.passes,
            "depth_bound": self.depth_bound,
            "degree_bound": self.degree_bound,
            "offending_terms": self.offending_terms.iter().map(|(k, p)| json!({
                "composition": k.entries(),
                "coeff": p.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "remainder": self.remainder.to_json(),
        })
    }
}

/// Checks that `Σ_{m=1..n} F(m)·H_{m-1}^t - S_n(F)·H_n^t` only involves sums
/// of depth `< t` with coefficients of degree `≤ deg F + 1`.
pub fn structure_check(f: &Polynomial, t: u32) -> Result<StructureReport> {
    let leading = ClosedForm::from_combination(&expand_power(1, t)).scale(&f.discrete_sum());
    let remainder = &sum_power(f, t)? - &leading;
    let depth_bound = t as usize;
    let degree_bound = f.degree() + 1;
    let offending_terms: Vec<_> = remainder
        .iter()
        .filter(|(k, p)| k.depth() >= depth_bound || p.degree() > degree_bound)
        .map(|(k, p)| (k.clone(), p.clone()))
        .collect();
    Ok(StructureReport {
        passes: offending_terms.is_empty(),
        offending_terms,
        remainder,
        depth_bound,
        degree_bound,
    })
}
