//! Reduction of extended sums `H_n(-p, k₁, …, k_r)` to closed forms.
//!
//! Two independent routes produce the same [`ClosedForm`]:
//!
//! * [`reduce`] applies the one-step recurrence
//!   `H_n(-p,k) = H_n(-p)·H_n(k) - Σ_{j=0..p} C(p+1,j)·B_j/(p+1)·H_n(k₁+j-p-1, k₂, …)`
//!   and recurses whenever the new first index is ≤ 0. This is the
//!   authoritative path.
//! * [`reduce_via_theorem`] writes down the fully unrolled three-block
//!   formula directly (polynomial × tail sums, proper sums that split off,
//!   and the pure polynomial remainder).
//!
//! Bernoulli numbers are in the plus convention (B₁ = 1/2) throughout.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::bernoulli::{bernoulli, bplus, umbral_eval, Convention};
use crate::closed_form::ClosedForm;
use crate::composition::Composition;
use crate::error::Result;
use crate::poly::Polynomial;
use crate::rational::{binomial, Rational};

/// `C(p+1, j)·B_j / (p+1)`, the weight of `n^{p+1-j}` in Σ_{m≤n} m^p.
fn faulhaber_weight(p: i64, j: i64) -> Rational {
    let top = p + 1;
    Rational::from_integer(binomial(top, j)) * bplus(j as usize) / Rational::from_integer(top.into())
}

fn faulhaber_cache() -> &'static Mutex<HashMap<u32, Polynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The polynomial equal to `1^p + 2^p + … + n^p` at every `n ≥ 0`:
/// `(1/(p+1))·Σ_{j=0..p} C(p+1, j)·B_j·n^{p+1-j}`.
pub fn faulhaber(p: u32) -> Polynomial {
    if let Some(hit) = faulhaber_cache().lock().expect("faulhaber cache poisoned").get(&p) {
        return hit.clone();
    }
    let p_i = p as i64;
    let out = (0..=p_i)
        .map(|j| Polynomial::monomial(faulhaber_weight(p_i, j), (p_i + 1 - j) as usize))
        .fold(Polynomial::zero(), |a, b| a + b);
    faulhaber_cache()
        .lock()
        .expect("faulhaber cache poisoned")
        .insert(p, out.clone());
    out
}

/// The same polynomial through the minus convention:
/// `n^p - 0^p + (1/(p+1))·Σ_{j=0..p} C(p+1, j)·B̃_j·n^{p+1-j}` with `0^0 = 1`.
pub fn faulhaber_minus_form(p: u32) -> Polynomial {
    let p_i = p as i64;
    let denom = Rational::from_integer((p_i + 1).into());
    (0..=p_i)
        .map(|j| {
            let c = Rational::from_integer(binomial(p_i + 1, j))
                * bernoulli(j as usize, Convention::Minus)
                / &denom;
            Polynomial::monomial(c, (p_i + 1 - j) as usize)
        })
        .fold(
            Polynomial::monomial(Rational::one(), p as usize) - Polynomial::constant(Rational::from_integer((p == 0).into())),
            |a, b| a + b,
        )
}

/// Index of a coefficient polynomial `C^{(p)}_{a₂,…,a_r}(x)`; `a₁ = 0` is
/// implicit, so `a` holds `a₂..a_r` and may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CIndex {
    pub p: u32,
    pub a: Vec<u32>,
}

impl CIndex {
    pub fn new(p: u32, a: &[u32]) -> Self {
        CIndex { p, a: a.to_vec() }
    }
}

/// `C^{(p)}_{a₂,…,a_r}(x)`:
///
/// `Σ_{j₁+…+j_r ≤ p-a_r} Π_{i=1..r} C(tᵢ, jᵢ)·B_{jᵢ}/tᵢ · x^{p+1-a_r-j₁-…-j_r}`
/// with `tᵢ = p+1-aᵢ-j₁-…-j_{i-1}`.
///
/// Summands with some `tᵢ ≤ 0` (only possible for decreasing subscripts) are
/// dropped; an empty region gives the zero polynomial. Every surviving
/// monomial has exponent ≥ 1.
pub fn c_poly(idx: &CIndex) -> Polynomial {
    let p = idx.p as i64;
    let a: Vec<i64> = std::iter::once(0)
        .chain(idx.a.iter().map(|&v| v as i64))
        .collect();
    let budget = p - a[a.len() - 1];
    let mut coeffs: HashMap<usize, Rational> = HashMap::new();

    fn go(
        p: i64,
        a: &[i64],
        level: usize,
        used: i64,
        budget: i64,
        weight: Rational,
        coeffs: &mut HashMap<usize, Rational>,
    ) {
        if level == a.len() {
            let exp = (p + 1 - a[a.len() - 1] - used) as usize;
            *coeffs.entry(exp).or_insert_with(Rational::zero) += weight;
            return;
        }
        let top = p + 1 - a[level] - used;
        if top <= 0 {
            return;
        }
        for j in 0..=(budget - used) {
            let b = bplus(j as usize);
            if b.is_zero() {
                continue;
            }
            let w = &weight * Rational::from_integer(binomial(top, j)) * b
                / Rational::from_integer(top.into());
            go(p, a, level + 1, used + j, budget, w, coeffs);
        }
    }

    if budget >= 0 {
        go(p, &a, 0, 0, budget, Rational::one(), &mut coeffs);
    }
    coeffs
        .into_iter()
        .map(|(e, c)| Polynomial::monomial(c, e))
        .fold(Polynomial::zero(), |x, y| x + y)
}

/// `D^{(p)}_{a}(B)`: `C^{(p)}_{a}(x)/x` evaluated umbrally at `B`.
pub fn d_umbral(idx: &CIndex) -> Result<Rational> {
    Ok(umbral_eval(&c_poly(idx).divide_x()?, Convention::Plus))
}

/// `D^{(p)}_{a}(x) = C^{(p)}_{a}(x)/x` as a polynomial.
pub fn d_poly(idx: &CIndex) -> Result<Polynomial> {
    c_poly(idx).divide_x()
}

/// Which reduction route to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Recurrence,
    Theorem,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::Theorem => "theorem",
            Method::Both => "both",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "recurrence" => Ok(Method::Recurrence),
            "theorem" => Ok(Method::Theorem),
            "both" => Ok(Method::Both),
            other => Err(format!(
                "unknown method `{other}` (expected recurrence, theorem or both)"
            )),
        }
    }
}

fn reduce_cache() -> &'static Mutex<HashMap<(u32, Composition), ClosedForm>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, Composition), ClosedForm>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Closed form of `H_n(-p, k)` by the recurrence. `k` must be proper; an
/// empty `k` gives the Faulhaber polynomial.
pub fn reduce(p: u32, k: &Composition) -> Result<ClosedForm> {
    k.require_proper()?;
    Ok(reduce_proper(p, k))
}

fn reduce_proper(p: u32, k: &Composition) -> ClosedForm {
    let key = (p, k.clone());
    if let Some(hit) = reduce_cache().lock().expect("reduce cache poisoned").get(&key) {
        return hit.clone();
    }
    let out = match k.first() {
        None => ClosedForm::polynomial(faulhaber(p)),
        Some(k1) => {
            let tail = k.tail();
            let p_i = p as i64;
            let mut out = ClosedForm::term(k.clone(), faulhaber(p));
            for j in 0..=p_i {
                let w = faulhaber_weight(p_i, j);
                if w.is_zero() {
                    continue;
                }
                let q = k1 + j - p_i - 1;
                if q >= 1 {
                    out.add_term(tail.prepend(q), Polynomial::constant(-w));
                } else {
                    // H_n(q, tail) with q ≤ 0 is itself an extended sum
                    out.add_scaled(&reduce_proper((-q) as u32, &tail), &-w);
                }
            }
            out
        }
    };
    reduce_cache()
        .lock()
        .expect("reduce cache poisoned")
        .insert(key, out.clone());
    out
}

/// Closed form of `H_n(-p, k)` from the unrolled three-block formula.
///
/// With `|k_i| = k₁+…+kᵢ`, `|j_i| = j₁+…+jᵢ`, and level weights
/// `C(t_h, j_{h+1})·B_{j_{h+1}}/t_h`, `t_h = p+h+1-|k_h|-|j_h|`, block `l`
/// (1 ≤ l ≤ r) ranges over prefixes `j₁..j_{l-1}` with
/// `jᵢ ≤ p+i-|kᵢ|-|j_{i-1}|` and then over its last index `j_l`:
///
/// * first block, `0 ≤ j_l ≤ p+l-1-|k_{l-1}|-|j_{l-1}|`, contributes
///   `-(-1)^l·W·n^{p+l-|k_{l-1}|-|j_l|}·H_n(k_l,…,k_r)`;
/// * second block, `p+l+1-|k_l| ≤ |j_l| ≤ p+l-1-|k_{l-1}|`, contributes
///   `(-1)^l·W·H_n(|k_l|+|j_l|-l-p, k_{l+1},…,k_r)`;
///
/// and the third block runs `j_{r+1} ≤ p+r-|k_r|-|j_r|` for
/// `(-1)^r·W·n^{p+r+1-|k_r|-|j_{r+1}|}`. The bound on the last index of
/// each block treats that position's entry as 1.
pub fn reduce_via_theorem(p: u32, k: &Composition) -> Result<ClosedForm> {
    k.require_proper()?;
    let p = p as i64;
    let ks = k.entries();
    let r = ks.len();
    // cum[i] = |k_i|, cum[0] = 0
    let mut cum = vec![0i64; r + 1];
    for i in 0..r {
        cum[i + 1] = cum[i] + ks[i];
    }
    let sign = |e: usize| if e.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let level_weight = |h: usize, used: i64, j: i64| -> Rational {
        let top = p + h as i64 + 1 - cum[h] - used;
        debug_assert!(top >= 1);
        let b = bplus(j as usize);
        if b.is_zero() {
            return b;
        }
        Rational::from_integer(binomial(top, j)) * b / Rational::from_integer(top.into())
    };

    let mut out = ClosedForm::zero();
    // (h, |j_h|, Π weights) for every admissible prefix j₁..j_h
    let mut stack: Vec<(usize, i64, Rational)> = vec![(0, 0, Rational::one())];
    while let Some((h, used, w)) = stack.pop() {
        if w.is_zero() {
            continue;
        }
        if h == r {
            let s = sign(r);
            let hi = p + r as i64 - cum[r] - used;
            for j in 0..=hi {
                let c = &s * &w * level_weight(r, used, j);
                let exp = (p + r as i64 + 1 - cum[r] - used - j) as usize;
                out.add_term(Composition::empty(), Polynomial::monomial(c, exp));
            }
            continue;
        }
        let l = h + 1;
        let li = l as i64;
        let tail_from_l = Composition::from(&ks[l - 1..]);
        let tail_after_l = Composition::from(&ks[l..]);

        let first_hi = p + li - 1 - cum[l - 1] - used;
        let s_first = -sign(l);
        for j in 0..=first_hi {
            let c = &s_first * &w * level_weight(h, used, j);
            let exp = (p + li - cum[l - 1] - used - j) as usize;
            out.add_term(tail_from_l.clone(), Polynomial::monomial(c, exp));
        }

        let second_lo = (p + li + 1 - cum[l] - used).max(0);
        let s_second = sign(l);
        for j in second_lo..=first_hi {
            let c = &s_second * &w * level_weight(h, used, j);
            let q = cum[l] + used + j - li - p;
            out.add_term(tail_after_l.prepend(q), Polynomial::constant(c));
        }

        let deeper_hi = p + li - cum[l] - used;
        for j in 0..=deeper_hi {
            stack.push((l, used + j, &w * level_weight(h, used, j)));
        }
    }
    Ok(out)
}

/// Reduction by the chosen route. `Both` runs the recurrence and the
/// closed formula and returns them as a pair.
pub fn reduce_with(p: u32, k: &Composition, method: Method) -> Result<(ClosedForm, Option<ClosedForm>)> {
    match method {
        Method::Recurrence => Ok((reduce(p, k)?, None)),
        Method::Theorem => Ok((reduce_via_theorem(p, k)?, None)),
        Method::Both => Ok((reduce(p, k)?, Some(reduce_via_theorem(p, k)?))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::mhs_prefix;
    use crate::rational::{int, rat};
    use crate::stuffle::expand_power;

    fn c(v: &[i64]) -> Composition {
        Composition::from(v)
    }

    fn poly(v: &[(i64, i64)]) -> Polynomial {
        Polynomial::new(v.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    fn extended(p: u32, k: &Composition) -> Composition {
        k.prepend(-(p as i64))
    }

    fn oracle_agrees(f: &ClosedForm, target: &Composition, n_max: u64) {
        assert_eq!(f.eval_range(n_max).unwrap(), mhs_prefix(n_max, target).unwrap(), "{target}");
    }

    #[test]
    fn faulhaber_examples() {
        assert_eq!(faulhaber(0), Polynomial::x());
        assert_eq!(faulhaber(1), poly(&[(0, 1), (1, 2), (1, 2)]));
        assert_eq!(faulhaber(3), poly(&[(0, 1), (0, 1), (1, 4), (1, 2), (1, 4)]));
        for n in 0..=20i64 {
            assert_eq!(faulhaber(3).eval_int(n), int((1..=n).map(|m| m.pow(3)).sum()));
        }
    }

    #[test]
    fn faulhaber_forms_agree() {
        for p in 0..=10 {
            assert_eq!(faulhaber(p), faulhaber_minus_form(p), "p={p}");
        }
    }

    #[test]
    fn c_poly_examples() {
        for p in 0..=6 {
            assert_eq!(c_poly(&CIndex::new(p, &[])), faulhaber(p));
        }
        assert_eq!(c_poly(&CIndex::new(0, &[0])), Polynomial::x());
        assert_eq!(c_poly(&CIndex::new(1, &[0])), poly(&[(0, 1), (3, 4), (1, 4)]));
    }

    #[test]
    fn c_poly_cross_checks() {
        // Σ_{m≤n} H_{m-1} = n·H_n - n and Σ_{m≤n} m·H_{m-1} = n(n+1)/2·H_n - (n²+3n)/4
        let h = mhs_prefix(20, &c(&[1])).unwrap();
        let s0 = mhs_prefix(20, &c(&[0, 1])).unwrap();
        let s1 = mhs_prefix(20, &c(&[-1, 1])).unwrap();
        let c0 = c_poly(&CIndex::new(0, &[0]));
        let c1 = c_poly(&CIndex::new(1, &[0]));
        for n in 0..=20usize {
            let ni = n as i64;
            assert_eq!(s0[n], int(ni) * &h[n] - c0.eval_int(ni));
            assert_eq!(s1[n], faulhaber(1).eval_int(ni) * &h[n] - c1.eval_int(ni));
        }
    }

    #[test]
    fn c_poly_zero_constant_term_and_linear_coefficient() {
        for p in 0..=10u32 {
            let cp = c_poly(&CIndex::new(p, &[]));
            assert!(cp.coeff(0).is_zero());
            assert_eq!(cp.coeff(1), bplus(p as usize), "p={p}");
        }
        for p in 0..=5 {
            for a in [&[0u32][..], &[1], &[0, 1], &[1, 2], &[0, 0, 1], &[2, 2], &[3]] {
                assert!(c_poly(&CIndex::new(p, a)).coeff(0).is_zero());
            }
        }
    }

    #[test]
    fn c_poly_empty_region() {
        assert!(c_poly(&CIndex::new(1, &[2])).is_zero());
        assert!(c_poly(&CIndex::new(0, &[0, 1])).is_zero());
    }

    #[test]
    fn d_umbral_examples() {
        assert_eq!(d_umbral(&CIndex::new(0, &[])).unwrap(), int(1));
        assert_eq!(d_umbral(&CIndex::new(1, &[0])).unwrap(), rat(7, 8));
    }

    #[test]
    fn reduce_printed_examples() {
        let n = Polynomial::x();
        let mut want = ClosedForm::term(c(&[1, 2]), n.clone());
        want.add_term(c(&[2]), -&n);
        want.add_term(c(&[1]), Polynomial::one());
        assert_eq!(reduce(0, &c(&[1, 2])).unwrap(), want);

        let mut want = ClosedForm::term(c(&[2, 1]), poly(&[(0, 1), (1, 2), (1, 2)]));
        want.add_term(c(&[1, 1]), Polynomial::constant(rat(-1, 2)));
        want.add_term(c(&[1]), poly(&[(0, 1), (-1, 2)]));
        want.add_term(Composition::empty(), poly(&[(0, 1), (1, 2)]));
        assert_eq!(reduce(1, &c(&[2, 1])).unwrap(), want);

        for p in 0..=5 {
            assert_eq!(
                reduce(p, &Composition::empty()).unwrap(),
                ClosedForm::polynomial(faulhaber(p))
            );
        }
    }

    #[test]
    fn reduce_rejects_improper() {
        assert!(reduce(1, &c(&[0, 1])).is_err());
        assert!(reduce_via_theorem(1, &c(&[2, -1])).is_err());
    }

    #[test]
    fn reduce_matches_oracle() {
        for p in 0..=4 {
            for k in Composition::all_proper(4, 3) {
                oracle_agrees(&reduce(p, &k).unwrap(), &extended(p, &k), 20);
            }
        }
    }

    #[test]
    fn theorem_matches_recurrence() {
        for p in 0..=4 {
            for k in Composition::all_proper(4, 4) {
                assert_eq!(
                    reduce_via_theorem(p, &k).unwrap(),
                    reduce(p, &k).unwrap(),
                    "p={p} k={k}"
                );
            }
        }
    }

    #[test]
    fn single_entry_specialization() {
        // H_n(-1, 1) = n(n+1)/2·H_n - C^{(1)}_0(n)
        let mut want = ClosedForm::term(c(&[1]), faulhaber(1));
        want.add_term(Composition::empty(), -c_poly(&CIndex::new(1, &[0])));
        assert_eq!(reduce(1, &c(&[1])).unwrap(), want);
        assert_eq!(reduce_via_theorem(1, &c(&[1])).unwrap(), want);
    }

    #[test]
    fn ones_specialization() {
        // H_n(-p, {1}_r) = H_n(-p)·H_n({1}_r) + Σ_i (-1)^i·C^{(p)}_{0^i}(n)·H_n({1}_{r-i})
        for p in 0..=4u32 {
            for r in 1..=4usize {
                let mut want = ClosedForm::term(Composition::ones(r), faulhaber(p));
                for i in 1..=r {
                    let cp = c_poly(&CIndex::new(p, &vec![0; i]));
                    let cp = if i % 2 == 1 { -cp } else { cp };
                    want.add_term(Composition::ones(r - i), cp);
                }
                assert_eq!(reduce(p, &Composition::ones(r)).unwrap(), want, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn depth_two_ones_with_power_expansion() {
        // H_n(-p,1,1) = ½·H_n(-p)(H_n² - H_n(2)) - C_0(n)·H_n + C_{0,0}(n)
        for p in 0..=4u32 {
            let sq = ClosedForm::from_combination(&expand_power(1, 2));
            let mut want = (&sq - &ClosedForm::term(c(&[2]), Polynomial::one()))
                .scale(&faulhaber(p))
                .scale_rational(&rat(1, 2));
            want.add_term(c(&[1]), -c_poly(&CIndex::new(p, &[0])));
            want.add_term(Composition::empty(), c_poly(&CIndex::new(p, &[0, 0])));
            assert_eq!(reduce(p, &c(&[1, 1])).unwrap(), want);
            assert_eq!(reduce_via_theorem(p, &c(&[1, 1])).unwrap(), want);
        }
    }

    #[test]
    fn depth_two_mixed_specializations() {
        for p in 0..=4u32 {
            let f = faulhaber(p);
            let cp = |a: &[u32]| c_poly(&CIndex::new(p, a));
            // H_n(-p,1,2) = H_n(-p)H_n(1,2) + D^{(p)}(B)·H_n - C_0(n)·H_n(2) + C_{0,1}(n)
            let mut want = ClosedForm::term(c(&[1, 2]), f.clone());
            want.add_term(c(&[1]), Polynomial::constant(d_umbral(&CIndex::new(p, &[])).unwrap()));
            want.add_term(c(&[2]), -cp(&[0]));
            want.add_term(Composition::empty(), cp(&[0, 1]));
            assert_eq!(reduce(p, &c(&[1, 2])).unwrap(), want, "(1,2) p={p}");

            // H_n(-p,2,1) = H_n(-p)H_n(2,1) - B_p·H_n(1,1) - C_1(n)·H_n + C_{1,1}(n)
            let mut want = ClosedForm::term(c(&[2, 1]), f);
            want.add_term(c(&[1, 1]), Polynomial::constant(-bplus(p as usize)));
            want.add_term(c(&[1]), -cp(&[1]));
            want.add_term(Composition::empty(), cp(&[1, 1]));
            assert_eq!(reduce(p, &c(&[2, 1])).unwrap(), want, "(2,1) p={p}");
        }
    }

    #[test]
    fn degree_bound() {
        for p in 0..=6u32 {
            for k in Composition::all_proper(5, 3) {
                assert!(reduce(p, &k).unwrap().max_degree() <= p as i64 + 1);
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Recurrence, Method::Theorem, Method::Both] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        let (a, b) = reduce_with(2, &c(&[1, 2]), Method::Both).unwrap();
        assert_eq!(Some(a), b);
    }
}
