//! Tolerances: reflexive symmetric binary relations on `{0, .., n-1}`.
//!
//! Partitions embed into tolerances (every equivalence relation is a
//! transitive tolerance), and a transitive tolerance converts back without
//! loss. The closure operator in `crate::commutator` acts on these.

use super::{Partition, RelationError};
use crate::algebra::FiniteAlgebra;

/// Largest universe for which `all_tolerances` will enumerate; there are
/// `2^(n(n-1)/2)` tolerances on `n` elements.
pub const ENUMERATION_CAP: usize = 5;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tolerance {
    n: usize,
    adj: Vec<bool>, // n*n, symmetric with true diagonal
}

impl Tolerance {
    /// The diagonal relation (the tolerance of the zero partition).
    pub fn diagonal(n: usize) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        let mut t = Tolerance {
            n,
            adj: vec![false; n * n],
        };
        for x in 0..n {
            t.adj[x * n + x] = true;
        }
        Ok(t)
    }

    /// The full relation.
    pub fn full(n: usize) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        Ok(Tolerance {
            n,
            adj: vec![true; n * n],
        })
    }

    /// Smallest tolerance containing the listed pairs: their symmetric
    /// closure plus the diagonal.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut t = Tolerance::diagonal(n)?;
        for (x, y) in pairs {
            for v in [x, y] {
                if v >= n {
                    return Err(RelationError::OutOfRange { value: v, size: n });
                }
            }
            t.insert(x, y);
        }
        Ok(t)
    }

    pub fn from_partition(p: &Partition) -> Self {
        let n = p.n();
        let mut adj = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                adj[x * n + y] = p.related(x, y);
            }
        }
        Tolerance { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.adj[x * self.n + y]
    }

    /// Adds a pair together with its mirror image.
    pub fn insert(&mut self, x: usize, y: usize) {
        self.adj[x * self.n + y] = true;
        self.adj[y * self.n + x] = true;
    }

    /// Related pairs `(x, y)` with `x < y`.
    pub fn nontrivial_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                if self.related(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn check_sizes(&self, other: &Tolerance) -> Result<(), RelationError> {
        if self.n != other.n {
            return Err(RelationError::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Containment of relations.
    pub fn leq(&self, other: &Tolerance) -> Result<bool, RelationError> {
        self.check_sizes(other)?;
        Ok(self
            .adj
            .iter()
            .zip(&other.adj)
            .all(|(&a, &b)| !a || b))
    }

    /// Intersection; tolerances are closed under it.
    pub fn meet(&self, other: &Tolerance) -> Result<Tolerance, RelationError> {
        self.check_sizes(other)?;
        Ok(Tolerance {
            n: self.n,
            adj: self
                .adj
                .iter()
                .zip(&other.adj)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    pub fn is_transitive(&self) -> bool {
        for x in 0..self.n {
            for y in 0..self.n {
                if !self.related(x, y) {
                    continue;
                }
                for z in 0..self.n {
                    if self.related(y, z) && !self.related(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Reads a transitive tolerance back as a partition.
    pub fn to_partition(&self) -> Result<Partition, RelationError> {
        if !self.is_transitive() {
            return Err(RelationError::NotTransitive);
        }
        Partition::from_pairs(self.n, self.nontrivial_pairs())
    }

    /// Whether every operation of `a` maps pointwise related tuples to
    /// related values. Tolerances are not transitive, so this enumerates
    /// whole related tuple pairs rather than single-position substitutions.
    pub fn is_compatible(&self, a: &FiniteAlgebra) -> Result<bool, RelationError> {
        if self.n != a.size {
            return Err(RelationError::SizeMismatch {
                left: self.n,
                right: a.size,
            });
        }
        let n = self.n;
        for op in &a.ops {
            let k = op.arity;
            let tuples = n.pow(k as u32);
            for s in 0..tuples {
                for t in 0..tuples {
                    let (mut xs, mut ys) = (s, t);
                    let mut related = true;
                    // Decode both tuples last-digit-first in lockstep.
                    for _ in 0..k {
                        let (x, y) = (xs % n, ys % n);
                        xs /= n;
                        ys /= n;
                        if !self.related(x, y) {
                            related = false;
                            break;
                        }
                    }
                    if related && !self.related(op.table[s], op.table[t]) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Every tolerance on `{0, .., n-1}`, diagonal first, in the order given by
/// bitmasks over the `n(n-1)/2` unordered off-diagonal pairs.
pub fn all_tolerances(n: usize) -> Result<impl Iterator<Item = Tolerance>, RelationError> {
    if n == 0 {
        return Err(RelationError::EmptyUniverse);
    }
    if n > ENUMERATION_CAP {
        return Err(RelationError::TooLargeToEnumerate {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
        .collect();
    let count: u64 = 1 << slots.len();
    Ok((0..count).map(move |mask| {
        let mut t = Tolerance::diagonal(n).expect("n >= 1");
        for (bit, &(x, y)) in slots.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                t.insert(x, y);
            }
        }
        t
    }))
}
