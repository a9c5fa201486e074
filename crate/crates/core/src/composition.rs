//! Integer sequences indexing multiple harmonic sums.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `(k₁, …, k_r)`, possibly empty.
///
/// *Proper* compositions have every entry ≥ 1. *Extended* ones may have a
/// first entry ≤ 0 (the shape `H_n(-p, k₂, …)`), everything after it ≥ 1.
///
/// Ordering is by weight, then depth, then lexicographic on entries; this is
/// the canonical term order for every combination and closed form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Composition(Vec<i64>);

impl Composition {
    pub fn new(entries: Vec<i64>) -> Self {
        Composition(entries)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    /// `(1, 1, …, 1)` with `r` ones.
    pub fn ones(r: usize) -> Self {
        Composition(vec![1; r])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_proper(&self) -> bool {
        self.0.iter().all(|&k| k >= 1)
    }

    /// Proper, or proper after its first entry.
    pub fn is_extended(&self) -> bool {
        self.0.iter().skip(1).all(|&k| k >= 1)
    }

    pub fn first(&self) -> Option<i64> {
        self.0.first().copied()
    }

    /// Everything after the first entry.
    pub fn tail(&self) -> Composition {
        Composition(self.0.iter().skip(1).copied().collect())
    }

    /// `(head, self...)`.
    pub fn prepend(&self, head: i64) -> Composition {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(head);
        v.extend_from_slice(&self.0);
        Composition(v)
    }

    /// `self` concatenated with `other`.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Composition(v)
    }

    pub fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::NotProper(self.to_string()))
        }
    }

    /// Every proper composition with weight in `1..=max_weight` and depth at
    /// most `max_depth`, in canonical order. The empty composition is not
    /// included.
    pub fn all_proper(max_weight: i64, max_depth: usize) -> Vec<Composition> {
        fn go(prefix: &mut Vec<i64>, left: i64, max_depth: usize, out: &mut Vec<Composition>) {
            if !prefix.is_empty() {
                out.push(Composition(prefix.clone()));
            }
            if prefix.len() == max_depth {
                return;
            }
            for k in 1..=left {
                prefix.push(k);
                go(prefix, left - k, max_depth, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), max_weight, max_depth, &mut out);
        out.sort();
        out
    }

    /// Comma-separated entries without brackets: `1,2,1`.
    pub fn to_flag(&self) -> String {
        self.0
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.depth().cmp(&other.depth()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_flag())
    }
}

impl From<Vec<i64>> for Composition {
    fn from(v: Vec<i64>) -> Self {
        Composition(v)
    }
}

impl From<&[i64]> for Composition {
    fn from(v: &[i64]) -> Self {
        Composition(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for Composition {
    fn from(v: [i64; N]) -> Self {
        Composition(v.to_vec())
    }
}

/// Parses `"1,2,3"`, `"(1, 2)"` or `""` (the empty composition).
impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(inner)
            .trim();
        if inner.is_empty() {
            return Ok(Composition::empty());
        }
        inner
            .split([',', ';'])
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidComposition(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Composition)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_depth_shape() {
        let k = Composition::from([-2, 1, 3]);
        assert_eq!(k.weight(), 2);
        assert_eq!(k.depth(), 3);
        assert!(!k.is_proper());
        assert!(k.is_extended());
        assert!(!Composition::from([1, 0]).is_extended());
        assert!(Composition::empty().is_proper());
    }

    #[test]
    fn canonical_order() {
        let mut v: Vec<Composition> = vec![
            [3].into(),
            [1, 2].into(),
            [2, 1].into(),
            [1].into(),
            Composition::empty(),
            [1, 1, 1].into(),
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["()", "(1)", "(3)", "(1,2)", "(2,1)", "(1,1,1)"]);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("1,2,3".parse::<Composition>().unwrap(), [1, 2, 3].into());
        assert_eq!("(-1, 2)".parse::<Composition>().unwrap(), [-1, 2].into());
        assert_eq!("".parse::<Composition>().unwrap(), Composition::empty());
        assert!("1,x".parse::<Composition>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        // compositions of w are 2^(w-1)
        assert_eq!(Composition::all_proper(4, 4).len(), 1 + 2 + 4 + 8);
        let capped = Composition::all_proper(5, 3);
        assert!(capped.iter().all(|c| c.depth() <= 3 && c.weight() <= 5));
        assert!(capped.windows(2).all(|w| w[0] < w[1]));
    }
}
