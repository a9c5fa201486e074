//! The quasi-shuffle (stuffle) product on compositions.
//!
//! For proper compositions `a`, `b` the product `H_n(a)·H_n(b)` is an integer
//! combination of multiple harmonic sums, for every `n` at once:
//!
//! `(a₁, a') ⋆ (b₁, b') = (a₁, a' ⋆ b) + (b₁, a ⋆ b') + (a₁+b₁, a' ⋆ b')`
//!
//! with the empty composition as unit.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::Add;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::Result;
use crate::oracle::mhs_eval;
use crate::rational::Rational;

/// A finite rational combination of proper multiple harmonic sums.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MhsCombination {
    terms: BTreeMap<Composition, Rational>,
}

impl MhsCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1·H(∅)`.
    pub fn one() -> Self {
        Self::term(Composition::empty(), Rational::one())
    }

    pub fn term(k: Composition, c: Rational) -> Self {
        let mut m = Self::zero();
        m.add_term(k, c);
        m
    }

    /// Adds `c·H(k)`. Panics on an improper `k`.
    pub fn add_term(&mut self, k: Composition, c: Rational) {
        assert!(k.is_proper(), "combinations hold proper compositions only: {k}");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
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

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Composition, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &Composition) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MhsCombination {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Σ c_ℓ·H_n(ℓ).
    pub fn eval(&self, n: u64) -> Result<Rational> {
        self.terms.iter().try_fold(Rational::zero(), |acc, (k, c)| {
            Ok(acc + c * mhs_eval(n, k)?)
        })
    }

    /// Puts `head` in front of every composition.
    fn prepend_all(&self, head: i64) -> Self {
        MhsCombination {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.prepend(head), c.clone()))
                .collect(),
        }
    }
}

impl Add<&MhsCombination> for &MhsCombination {
    type Output = MhsCombination;

    fn add(self, rhs: &MhsCombination) -> MhsCombination {
        let mut out = self.clone();
        for (k, c) in rhs.iter() {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Add for MhsCombination {
    type Output = MhsCombination;

    fn add(self, rhs: MhsCombination) -> MhsCombination {
        &self + &rhs
    }
}

/// `a ⋆ b`. Both must be proper.
pub fn stuffle(a: &Composition, b: &Composition) -> MhsCombination {
    assert!(a.is_proper() && b.is_proper(), "stuffle of {a} and {b}");
    let mut memo = HashMap::new();
    stuffle_rec(a.entries(), b.entries(), &mut memo)
}

fn stuffle_rec<'a>(
    a: &'a [i64],
    b: &'a [i64],
    memo: &mut HashMap<(&'a [i64], &'a [i64]), MhsCombination>,
) -> MhsCombination {
    if a.is_empty() {
        return MhsCombination::term(b.into(), Rational::one());
    }
    if b.is_empty() {
        return MhsCombination::term(a.into(), Rational::one());
    }
    if let Some(hit) = memo.get(&(a, b)) {
        return hit.clone();
    }
    let (a1, at) = (a[0], &a[1..]);
    let (b1, bt) = (b[0], &b[1..]);
    let mut out = stuffle_rec(at, b, memo).prepend_all(a1);
    out = &out + &stuffle_rec(a, bt, memo).prepend_all(b1);
    out = &out + &stuffle_rec(at, bt, memo).prepend_all(a1 + b1);
    memo.insert((a, b), out.clone());
    out
}

/// Bilinear extension of [`stuffle`].
pub fn product_combinations(a: &MhsCombination, b: &MhsCombination) -> MhsCombination {
    let mut out = MhsCombination::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            let coeff = ca * cb;
            for (k, c) in stuffle(ka, kb).iter() {
                out.add_term(k.clone(), c * &coeff);
            }
        }
    }
    out
}

fn power_cache() -> &'static Mutex<HashMap<(u32, u32), MhsCombination>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), MhsCombination>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `H_n(order)^t` in the flat basis; `t = 0` gives `1·H(∅)`.
pub fn expand_power(order: u32, t: u32) -> MhsCombination {
    assert!(order >= 1, "harmonic order must be positive");
    if t == 0 {
        return MhsCombination::one();
    }
    if let Some(hit) = power_cache().lock().expect("power cache poisoned").get(&(order, t)) {
        return hit.clone();
    }
    let base = MhsCombination::term(Composition::new(vec![order as i64]), Rational::one());
    let out = product_combinations(&expand_power(order, t - 1), &base);
    power_cache()
        .lock()
        .expect("power cache poisoned")
        .insert((order, t), out.clone());
    out
}
