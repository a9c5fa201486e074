//! Closed forms: finite `Q[n]`-linear combinations of proper multiple
//! harmonic sums.
//!
//! A [`ClosedForm`] maps compositions to polynomial coefficients and stands
//! for `Σ_k poly_k(n)·H_n(k)`. The empty composition carries the pure
//! polynomial part. Equality is structural on the canonical map.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::oracle::mhs_prefix;
use crate::poly::Polynomial;
use crate::rational::{rational_from_json, rational_to_json, Rational};
use crate::stuffle::MhsCombination;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Latex => "latex",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text, latex or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosedForm {
    terms: BTreeMap<Composition, Polynomial>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A pure polynomial.
    pub fn polynomial(p: Polynomial) -> Self {
        Self::term(Composition::empty(), p)
    }

    pub fn term(k: Composition, p: Polynomial) -> Self {
        let mut c = Self::zero();
        c.add_term(k, p);
        c
    }

    /// Adds `p(n)·H_n(k)`. Panics on an improper `k`.
    pub fn add_term(&mut self, k: Composition, p: Polynomial) {
        assert!(k.is_proper(), "closed forms hold proper compositions only: {k}");
        if p.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ClosedForm, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, p) in other.iter() {
            self.add_term(k.clone(), p.scale(c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order (weight, depth, lexicographic).
    pub fn iter(&self) -> impl Iterator<Item = (&Composition, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &Composition) -> Polynomial {
        self.terms.get(k).cloned().unwrap_or_else(Polynomial::zero)
    }

    /// Largest coefficient degree, -1 for the zero form.
    pub fn max_degree(&self) -> i64 {
        self.terms.values().map(Polynomial::degree).max().unwrap_or(-1)
    }

    pub fn max_depth(&self) -> usize {
        self.terms.keys().map(Composition::depth).max().unwrap_or(0)
    }

    /// Multiplies every coefficient by `p`.
    pub fn scale(&self, p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (k, q) in self.iter() {
            out.add_term(k.clone(), q * p);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Constant-coefficient embedding of a combination.
    pub fn from_combination(m: &MhsCombination) -> Self {
        let mut out = Self::zero();
        for (k, c) in m.iter() {
            out.add_term(k.clone(), Polynomial::constant(c.clone()));
        }
        out
    }

    pub fn eval(&self, n: u64) -> Result<Rational> {
        Ok(self.eval_range(n)?.pop().expect("range is never empty"))
    }

    /// Values at `n = 0..=n_max`, sharing one oracle pass per composition.
    pub fn eval_range(&self, n_max: u64) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); n_max as usize + 1];
        for (k, p) in self.iter() {
            let h = mhs_prefix(n_max, k)?;
            for (n, (slot, hn)) in out.iter_mut().zip(&h).enumerate() {
                if !hn.is_zero() {
                    *slot += p.eval_int(n as i64) * hn;
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Latex => self.render_latex(),
            Format::Json => self.to_json().to_string(),
        }
    }

    fn render_text(&self) -> String {
        let pieces = self.iter().flat_map(|(k, p)| {
            let h = if k.is_empty() {
                String::new()
            } else {
                format!("H({})", k.to_flag())
            };
            signed_pieces(p, &h, "*", |q| q.render("n"), "(", ")")
        });
        join_signed(pieces, " + ", " - ", "-")
    }

    fn render_latex(&self) -> String {
        let pieces = self.iter().flat_map(|(k, p)| {
            let h = latex_mhs(k);
            signed_pieces(p, &h, "", |q| q.render_latex("n"), "\\left(", "\\right)")
        });
        join_signed(pieces, "+", "-", "-")
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .iter()
            .map(|(k, p)| {
                json!({
                    "composition": k.entries(),
                    "coeff": p.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing `terms` array".into()))?;
        let mut out = Self::zero();
        for t in terms {
            let comp = t
                .get("composition")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Json(format!("term without `composition`: {t}")))?
                .iter()
                .map(|e| {
                    e.as_i64()
                        .ok_or_else(|| Error::Json(format!("composition entry {e} is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            let comp = Composition::new(comp);
            if !comp.is_proper() {
                return Err(Error::Json(format!("composition {comp} is not proper")));
            }
            let coeffs = t
                .get("coeff")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Json(format!("term without `coeff`: {t}")))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()?;
            out.add_term(comp, Polynomial::new(coeffs));
        }
        Ok(out)
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

/// `H_n`, `H_n(2,1)`, or nothing for the empty composition.
pub fn latex_mhs(k: &Composition) -> String {
    match k.entries() {
        [] => String::new(),
        [1] => "H_n".to_string(),
        _ => format!("H_n({})", k.to_flag()),
    }
}

/// Splits `p·h` into (negative?, magnitude-text) pieces.
///
/// A bare polynomial (`h` empty) contributes one piece per monomial; a
/// monomial coefficient is written inline; anything longer is bracketed with
/// its leading sign pulled out.
pub(crate) fn signed_pieces(
    p: &Polynomial,
    h: &str,
    times: &str,
    render: impl Fn(&Polynomial) -> String,
    open: &str,
    close: &str,
) -> Vec<(bool, String)> {
    let monomial_piece = |i: usize, c: &Rational| -> (bool, String) {
        let mono = Polynomial::monomial(c.abs(), i);
        let body = render(&mono);
        let text = if h.is_empty() {
            body
        } else if i == 0 && c.abs().is_one() {
            h.to_string()
        } else {
            format!("{body}{times}{h}")
        };
        (c.is_negative(), text)
    };
    if h.is_empty() {
        return p
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| monomial_piece(i, c))
            .collect();
    }
    if p.term_count() == 1 {
        let (i, c) = p
            .coeffs()
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .expect("one nonzero term");
        return vec![monomial_piece(i, c)];
    }
    let lead_negative = p.coeffs().last().is_some_and(Signed::is_negative);
    let shown = if lead_negative { -p } else { p.clone() };
    vec![(lead_negative, format!("{open}{}{close}{times}{h}", render(&shown)))]
}

pub(crate) fn join_signed(
    pieces: impl Iterator<Item = (bool, String)>,
    plus: &str,
    minus: &str,
    leading_minus: &str,
) -> String {
    let mut out = String::new();
    for (neg, text) in pieces {
        if out.is_empty() {
            if neg {
                out.push_str(leading_minus);
            }
        } else {
            out.push_str(if neg { minus } else { plus });
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

impl Add<&ClosedForm> for &ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        for (k, p) in rhs.iter() {
            out.add_term(k.clone(), p.clone());
        }
        out
    }
}

impl Add for ClosedForm {
    type Output = ClosedForm;

    fn add(self, rhs: ClosedForm) -> ClosedForm {
        &self + &rhs
    }
}

impl Neg for &ClosedForm {
    type Output = ClosedForm;

    fn neg(self) -> ClosedForm {
        ClosedForm {
            terms: self.terms.iter().map(|(k, p)| (k.clone(), -p)).collect(),
        }
    }
}

impl Sub<&ClosedForm> for &ClosedForm {
    type Output = ClosedForm;

    fn sub(self, rhs: &ClosedForm) -> ClosedForm {
        self + &(-rhs)
    }
}

impl Sub for ClosedForm {
    type Output = ClosedForm;

    fn sub(self, rhs: ClosedForm) -> ClosedForm {
        &self - &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{harmonic, mhs_eval};
    use crate::rational::{int, rat};
    use crate::stuffle::{expand_power, stuffle};
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Composition {
        Composition::from(v)
    }

    fn p(v: &[i64]) -> Polynomial {
        Polynomial::from_ints(v)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ClosedForm::polynomial(p(&[0, 1])).eval(7).unwrap(), int(7));
        assert_eq!(ClosedForm::term(c(&[1]), p(&[0, 1])).eval(3).unwrap(), rat(11, 2));
        let mut f = ClosedForm::term(c(&[1, 2]), p(&[0, 1]));
        f.add_term(c(&[2]), p(&[0, -1]));
        f.add_term(c(&[1]), p(&[1]));
        assert_eq!(f.eval(4).unwrap(), mhs_eval(4, &c(&[0, 1, 2])).unwrap());
    }

    #[test]
    fn add_and_scale_identities() {
        let a = ClosedForm::term(c(&[2, 1]), p(&[3, 1]));
        assert_eq!(&a + &ClosedForm::zero(), a);
        assert_eq!(a.scale(&Polynomial::one()), a);
        assert!((&a - &a).is_zero());
        let scaled = ClosedForm::term(c(&[2]), p(&[1])).scale(&p(&[0, 1, 1]));
        assert_eq!(scaled.eval(3).unwrap(), rat(49, 3));
    }

    #[test]
    fn from_combination_examples() {
        assert!(ClosedForm::from_combination(&MhsCombination::zero()).is_zero());
        let sq = ClosedForm::from_combination(&expand_power(1, 2));
        assert_eq!(sq.coeff(&c(&[1, 1])), p(&[2]));
        assert_eq!(sq.coeff(&c(&[2])), p(&[1]));
        assert_eq!(sq.eval(5).unwrap(), harmonic(5, 1) * harmonic(5, 1));
    }

    #[test]
    fn render_examples() {
        assert_eq!(ClosedForm::zero().render(Format::Text), "0");
        assert_eq!(ClosedForm::zero().render(Format::Latex), "0");
        assert_eq!(
            ClosedForm::term(c(&[2, 1]), Polynomial::one()).render(Format::Latex),
            "H_n(2,1)"
        );
        let mut f = ClosedForm::polynomial(p(&[0, 2]));
        f.add_term(c(&[1]), p(&[-1, -2]));
        f.add_term(c(&[2]), p(&[0, 1]));
        assert_eq!(f.render(Format::Text), "2*n - (2*n + 1)*H(1) + n*H(2)");
        assert_eq!(f.render(Format::Latex), "2n-\\left(2n+1\\right)H_n+nH_n(2)");
        let g = ClosedForm::term(c(&[1]), Polynomial::constant(rat(-3, 4)));
        assert_eq!(g.render(Format::Text), "-3/4*H(1)");
        assert_eq!(
            ClosedForm::term(c(&[1]), Polynomial::constant(int(-1))).render(Format::Text),
            "-H(1)"
        );
    }

    #[test]
    fn json_schema() {
        let mut f = ClosedForm::polynomial(Polynomial::new(vec![int(0), rat(1, 2)]));
        f.add_term(c(&[2, 1]), p(&[1]));
        assert_eq!(
            f.render(Format::Json),
            r#"{"terms":[{"composition":[],"coeff":[[0,1],[1,2]]},{"composition":[2,1],"coeff":[[1,1]]}]}"#
        );
        assert_eq!(ClosedForm::parse_json(&f.render(Format::Json)).unwrap(), f);
        assert!(ClosedForm::parse_json(r#"{"terms":[{"composition":[0,1],"coeff":[[1,1]]}]}"#).is_err());
        assert!(ClosedForm::parse_json(r#"{"nope":[]}"#).is_err());
    }

    fn arb_form() -> impl Strategy<Value = ClosedForm> {
        let comp = prop::collection::vec(1i64..=3, 0..=3).prop_map(Composition::new);
        let poly = prop::collection::vec((-9i64..=9, 1i64..=4), 0..=3)
            .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(a, b)| rat(a, b)).collect()));
        prop::collection::vec((comp, poly), 0..=4).prop_map(|ts| {
            let mut f = ClosedForm::zero();
            for (k, q) in ts {
                f.add_term(k, q);
            }
            f
        })
    }

    proptest! {
        #[test]
        fn eval_is_linear(a in arb_form(), b in arb_form(), n in 0u64..=12) {
            prop_assert_eq!((&a + &b).eval(n).unwrap(), a.eval(n).unwrap() + b.eval(n).unwrap());
        }

        #[test]
        fn json_round_trip(a in arb_form()) {
            prop_assert_eq!(ClosedForm::parse_json(&a.render(Format::Json)).unwrap(), a);
        }

        #[test]
        fn stuffle_embeds(x in prop::collection::vec(1i64..=3, 0..=3), y in prop::collection::vec(1i64..=3, 0..=2), n in 0u64..=10) {
            let (x, y) = (Composition::new(x), Composition::new(y));
            let f = ClosedForm::from_combination(&stuffle(&x, &y));
            prop_assert_eq!(f.eval(n).unwrap(), mhs_eval(n, &x).unwrap() * mhs_eval(n, &y).unwrap());
        }
    }
}
