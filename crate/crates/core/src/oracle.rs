//! Brute-force evaluation of (extended) multiple harmonic sums.
//!
//! This is the ground truth every symbolic path is checked against. It uses
//! nothing but exact rational arithmetic over the defining nested sum:
//!
//! `H_n(k₁,…,k_r) = Σ_{n ≥ n₁ > … > n_r > 0} Π nᵢ^{-kᵢ}`
//!
//! evaluated by dynamic programming over suffixes, one pass per entry.

use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::rational::{pow_i, Rational};

fn check_shape(k: &Composition) -> Result<()> {
    if k.is_extended() {
        Ok(())
    } else {
        Err(Error::UnsupportedShape(format!(
            "{k}: only the first entry may be <= 0"
        )))
    }
}

/// `[H_0(k), H_1(k), …, H_{n_max}(k)]`.
pub fn mhs_prefix(n_max: u64, k: &Composition) -> Result<Vec<Rational>> {
    check_shape(k)?;
    let len = n_max as usize + 1;
    // suffix sums for the empty composition are 1 everywhere
    let mut vals = vec![Rational::one(); len];
    for &e in k.entries().iter().rev() {
        let mut next = Vec::with_capacity(len);
        next.push(Rational::zero());
        for m in 1..len {
            let term = pow_i(&Rational::from_integer((m as i64).into()), -e) * &vals[m - 1];
            let acc = &next[m - 1] + term;
            next.push(acc);
        }
        vals = next;
    }
    Ok(vals)
}

/// `H_n(k)`. `H_n(∅) = 1`; zero when `n` is below the depth.
pub fn mhs_eval(n: u64, k: &Composition) -> Result<Rational> {
    Ok(mhs_prefix(n, k)?.pop().expect("prefix is never empty"))
}

/// `H_n(order) = Σ_{j=1..n} 1/j^order`.
pub fn harmonic(n: u64, order: u32) -> Rational {
    mhs_eval(n, &Composition::new(vec![order as i64])).expect("depth-one is always supported")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::rational::{int, rat};
    use crate::reducer::faulhaber;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Composition {
        Composition::from(v)
    }

    /// Literal nested loops over n ≥ n₁ > … > n_r > 0.
    fn nested(n: i64, k: &[i64]) -> Rational {
        fn go(upper: i64, k: &[i64]) -> Rational {
            match k.split_first() {
                None => Rational::one(),
                Some((&e, rest)) => (1..=upper)
                    .map(|m| pow_i(&int(m), -e) * go(m - 1, rest))
                    .fold(Rational::zero(), |a, b| a + b),
            }
        }
        go(n, k)
    }

    #[test]
    fn examples() {
        assert_eq!(mhs_eval(7, &Composition::empty()).unwrap(), int(1));
        assert_eq!(mhs_eval(0, &Composition::empty()).unwrap(), int(1));
        assert_eq!(mhs_eval(2, &c(&[1, 1, 1])).unwrap(), int(0));
        assert_eq!(mhs_eval(3, &c(&[1, 1])).unwrap(), int(1));
        assert_eq!(mhs_eval(4, &c(&[2])).unwrap(), rat(205, 144));
        assert_eq!(mhs_eval(0, &c(&[2])).unwrap(), int(0));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(3, 1), rat(11, 6));
        assert_eq!(harmonic(0, 5), int(0));
        assert_eq!(harmonic(2, 3), rat(9, 8));
    }

    #[test]
    fn rejects_inner_nonpositive() {
        assert!(matches!(
            mhs_eval(3, &c(&[1, -1])),
            Err(Error::UnsupportedShape(_))
        ));
        assert!(matches!(
            mhs_eval(3, &c(&[2, 0])),
            Err(Error::UnsupportedShape(_))
        ));
        assert!(mhs_eval(3, &c(&[-3, 1])).is_ok());
    }

    #[test]
    fn dp_matches_nested_loops() {
        for k in [&[1, 2][..], &[-2, 1, 1], &[0, 3], &[2, 1, 1], &[-1]] {
            for n in 0..=9 {
                assert_eq!(mhs_eval(n as u64, &c(k)).unwrap(), nested(n, k), "{k:?} n={n}");
            }
        }
    }

    #[test]
    fn power_sums_match_faulhaber() {
        for p in 0..=8u32 {
            let f: Polynomial = faulhaber(p);
            let vals = mhs_prefix(30, &c(&[-(p as i64)])).unwrap();
            for (n, v) in vals.iter().enumerate() {
                assert_eq!(&f.eval_int(n as i64), v);
            }
        }
    }

    fn arb_extended() -> impl Strategy<Value = Composition> {
        (-3i64..=3, prop::collection::vec(1i64..=3, 0..=3)).prop_map(|(h, t)| {
            Composition::new(std::iter::once(h).chain(t).collect())
        })
    }

    proptest! {
        #[test]
        fn telescoping_step(k in arb_extended()) {
            let vals = mhs_prefix(15, &k).unwrap();
            let tail = mhs_prefix(15, &k.tail()).unwrap();
            let head = k.first().unwrap();
            for n in 1..=15usize {
                let step = pow_i(&int(n as i64), -head) * &tail[n - 1];
                prop_assert_eq!(&vals[n] - &vals[n - 1], step);
            }
        }

        #[test]
        fn monotone_for_proper(k in prop::collection::vec(1i64..=3, 0..=3)) {
            let vals = mhs_prefix(20, &Composition::new(k)).unwrap();
            prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
