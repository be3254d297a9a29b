//! Partitions, tolerances, and pair sets over a finite universe, together
//! with the compatibility test that singles out congruences.

mod partition;
mod tolerance;
mod union_find;

pub use partition::Partition;
pub use tolerance::{all_tolerances, Tolerance, ENUMERATION_CAP};

pub(crate) use union_find::UnionFind;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::FiniteAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("universe size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("element {value} out of range for universe of size {size}")]
    OutOfRange { value: usize, size: usize },
    #[error("element {0} appears in more than one block")]
    DuplicateElement(usize),
    #[error("expected an element, found {token:?}")]
    BadToken { token: String },
    #[error("cannot enumerate tolerances on {n} elements (cap is {cap})")]
    TooLargeToEnumerate { n: usize, cap: usize },
    #[error("tolerance is not transitive")]
    NotTransitive,
}

/// An ordered set of pairs over `{0, .., n-1}`, used as generators for
/// congruence closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new(n: usize) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        Ok(PairSet {
            n,
            pairs: BTreeSet::new(),
        })
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = PairSet::new(n)?;
        for (x, y) in pairs {
            set.insert(x, y)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<bool, RelationError> {
        for v in [x, y] {
            if v >= self.n {
                return Err(RelationError::OutOfRange {
                    value: v,
                    size: self.n,
                });
            }
        }
        Ok(self.pairs.insert((x, y)))
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

/// Whether `p` is compatible with every operation of `a`, i.e. a congruence.
///
/// Compatibility is checked one argument position at a time: for related
/// `x, y` and any fixed other arguments, `f(..x..)` must relate to
/// `f(..y..)`. For an equivalence relation this is equivalent to the
/// definition over whole related tuples, by chaining substitutions through
/// transitivity.
pub fn is_congruence(a: &FiniteAlgebra, p: &Partition) -> Result<bool, RelationError> {
    if p.n() != a.size {
        return Err(RelationError::SizeMismatch {
            left: p.n(),
            right: a.size,
        });
    }
    let n = a.size;
    let pairs = p.nontrivial_pairs();
    let mut args = Vec::new();
    for op in &a.ops {
        let k = op.arity;
        if k == 0 {
            continue;
        }
        let rest_count = n.pow((k - 1) as u32);
        for &(x, y) in &pairs {
            for pos in 0..k {
                for rest in 0..rest_count {
                    args.clear();
                    args.resize(k, 0);
                    let mut r = rest;
                    for i in (0..k).rev() {
                        if i == pos {
                            continue;
                        }
                        args[i] = r % n;
                        r /= n;
                    }
                    args[pos] = x;
                    let fx = op.value(n, &args);
                    args[pos] = y;
                    let fy = op.value(n, &args);
                    if !p.related(fx, fy) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn pair_set_validates_bounds() {
        let mut s = PairSet::new(3).unwrap();
        assert!(s.insert(0, 2).unwrap());
        assert!(!s.insert(0, 2).unwrap());
        assert_eq!(
            s.insert(0, 3),
            Err(RelationError::OutOfRange { value: 3, size: 3 })
        );
        assert_eq!(PairSet::new(0), Err(RelationError::EmptyUniverse));
    }

    #[test]
    fn congruences_of_the_four_element_cyclic_group() {
        let z4 = catalog::cyclic_group(4);
        let good = Partition::parse("0 2|1 3", 4).unwrap();
        let bad = Partition::parse("0 1|2 3", 4).unwrap();
        assert!(is_congruence(&z4, &good).unwrap());
        assert!(!is_congruence(&z4, &bad).unwrap());
        assert!(is_congruence(&z4, &Partition::zero(4).unwrap()).unwrap());
        assert!(is_congruence(&z4, &Partition::one(4).unwrap()).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error_not_a_verdict() {
        let z4 = catalog::cyclic_group(4);
        let p = Partition::zero(3).unwrap();
        assert_eq!(
            is_congruence(&z4, &p),
            Err(RelationError::SizeMismatch { left: 3, right: 4 })
        );
    }
}
