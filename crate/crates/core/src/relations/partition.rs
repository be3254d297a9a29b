//! Partitions of the universe `{0, .., n-1}`, viewed interchangeably as
//! equivalence relations.
//!
//! The canonical encoding is the representative array: `rep[x]` is the least
//! element of the block containing `x`, so `rep[rep[x]] == rep[x]` and
//! `rep[x] <= x`. Equality of partitions is equality of arrays.
//!
//! The text form writes blocks separated by `|` and elements separated by
//! spaces, e.g. `0 2|1 3` on a four-element universe. The parser accepts
//! blocks and elements in any order and treats unmentioned elements as
//! singletons; the printer emits every block, sorted by least element.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::union_find::UnionFind;
use super::RelationError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    /// The identity relation: every element in its own block.
    pub fn zero(n: usize) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        Ok(Partition {
            rep: (0..n).collect(),
        })
    }

    /// The full relation: one block containing everything.
    pub fn one(n: usize) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        Ok(Partition { rep: vec![0; n] })
    }

    /// Smallest partition relating every listed pair (their equivalence
    /// closure).
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        let mut uf = UnionFind::new(n);
        for (x, y) in pairs {
            for v in [x, y] {
                if v >= n {
                    return Err(RelationError::OutOfRange { value: v, size: n });
                }
            }
            uf.union(x, y);
        }
        Ok(Partition {
            rep: uf.canonical_reps(),
        })
    }

    /// Wraps an already-canonical representative array.
    pub(crate) fn from_canonical_reps(rep: Vec<usize>) -> Self {
        let p = Partition { rep };
        debug_assert!(p.verify(), "partition invariant violated");
        p
    }

    /// Builds a partition from explicit blocks; unmentioned elements become
    /// singletons. Rejects duplicates and out-of-range elements.
    pub fn from_blocks<B>(n: usize, blocks: B) -> Result<Self, RelationError>
    where
        B: IntoIterator,
        B::Item: IntoIterator<Item = usize>,
    {
        if n == 0 {
            return Err(RelationError::EmptyUniverse);
        }
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            let mut first = None;
            for x in block {
                if x >= n {
                    return Err(RelationError::OutOfRange { value: x, size: n });
                }
                if seen[x] {
                    return Err(RelationError::DuplicateElement(x));
                }
                seen[x] = true;
                match first {
                    None => first = Some(x),
                    Some(f) => {
                        uf.union(f, x);
                    }
                }
            }
        }
        Ok(Partition {
            rep: uf.canonical_reps(),
        })
    }

    /// Parses the `0 2|1 3` text form over a universe of size `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self, RelationError> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for chunk in text.split('|') {
            let mut block = Vec::new();
            for token in chunk.split_whitespace() {
                let x: usize = token.parse().map_err(|_| RelationError::BadToken {
                    token: token.to_string(),
                })?;
                block.push(x);
            }
            if !block.is_empty() {
                blocks.push(block);
            }
        }
        Partition::from_blocks(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.rep.len()
    }

    /// Least element of the block containing `x`.
    pub fn rep(&self, x: usize) -> usize {
        self.rep[x]
    }

    pub fn as_reps(&self) -> &[usize] {
        &self.rep
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    /// The block containing `x`, ascending.
    pub fn class_of(&self, x: usize) -> Vec<usize> {
        let r = self.rep[x];
        (0..self.n()).filter(|&y| self.rep[y] == r).collect()
    }

    /// All blocks, sorted by least element; elements ascend within a block.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut by_rep: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            by_rep[self.rep[x]].push(x);
        }
        by_rep.into_iter().filter(|b| !b.is_empty()).collect()
    }

    pub fn num_blocks(&self) -> usize {
        (0..self.n()).filter(|&x| self.rep[x] == x).count()
    }

    fn check_sizes(&self, other: &Partition) -> Result<(), RelationError> {
        if self.n() != other.n() {
            return Err(RelationError::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Intersection as relations: blocks are pairwise intersections.
    pub fn meet(&self, other: &Partition) -> Result<Partition, RelationError> {
        self.check_sizes(other)?;
        let n = self.n();
        // First element seen with a given rep pair is the least of its block.
        let mut least: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut rep = vec![0; n];
        for (x, slot) in rep.iter_mut().enumerate() {
            let key = (self.rep[x], other.rep[x]);
            *slot = *least.entry(key).or_insert(x);
        }
        Ok(Partition { rep })
    }

    /// Join in the partition lattice: transitive closure of the union of the
    /// two relations.
    pub fn join(&self, other: &Partition) -> Result<Partition, RelationError> {
        self.check_sizes(other)?;
        let n = self.n();
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        Ok(Partition {
            rep: uf.canonical_reps(),
        })
    }

    /// Refinement order: `self <= other` iff every block of `self` lies
    /// inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool, RelationError> {
        self.check_sizes(other)?;
        Ok((0..self.n()).all(|x| other.rep[x] == other.rep[self.rep[x]]))
    }

    /// Related pairs `(x, y)` with `x < y`.
    pub fn nontrivial_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if self.related(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// All related ordered pairs, diagonal included.
    pub fn ordered_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.related(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The relation `self * other` on the product universe, where `(a, b)` is
    /// encoded as `a * other.n() + b`: two codes are related iff their first
    /// coordinates are `self`-related and their second coordinates are
    /// `other`-related. The block of `(a, b)` is the rectangle
    /// `a/self x b/other`.
    pub fn pairwise_product(&self, other: &Partition) -> Partition {
        let m = self.n();
        let n = other.n();
        let mut rep = Vec::with_capacity(m * n);
        for a in 0..m {
            for b in 0..n {
                // The least code in the rectangle pairs the two least reps.
                rep.push(self.rep[a] * n + other.rep[b]);
            }
        }
        let p = Partition { rep };
        debug_assert!(p.verify(), "partition invariant violated");
        p
    }

    /// The same product relation materialized as a set of pair-of-pairs,
    /// sorted. Quadratic in the relation sizes; meant for cross-checks.
    pub fn relation_product(
        &self,
        other: &Partition,
    ) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (a, b) in self.ordered_pairs() {
            for (c, d) in other.ordered_pairs() {
                out.push(((a, c), (b, d)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks the representative-array invariants.
    pub fn verify(&self) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(x, &r)| r <= x && self.rep[r] == r)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        for (i, block) in blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

// The wire form is `{"blocks": [[0, 2], [1, 3]]}` with every block listed.
impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Partition", 1)?;
        s.serialize_field("blocks", &self.blocks())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            blocks: Vec<Vec<usize>>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let n = wire
            .blocks
            .iter()
            .flatten()
            .map(|&x| x + 1)
            .max()
            .unwrap_or(0);
        let covered: usize = wire.blocks.iter().map(|b| b.len()).sum();
        if covered != n {
            return Err(D::Error::custom("blocks must cover the universe"));
        }
        Partition::from_blocks(n, wire.blocks).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_one_reject_empty_universe() {
        assert_eq!(Partition::zero(0), Err(RelationError::EmptyUniverse));
        assert_eq!(Partition::one(0), Err(RelationError::EmptyUniverse));
    }

    #[test]
    fn zero_is_all_singletons_and_one_is_a_single_block() {
        let z = Partition::zero(3).unwrap();
        let o = Partition::one(3).unwrap();
        assert_eq!(z.blocks(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(o.blocks(), vec![vec![0, 1, 2]]);
        assert_eq!(z.num_blocks(), 3);
        assert_eq!(o.num_blocks(), 1);
    }

    #[test]
    fn parse_accepts_any_block_and_element_order() {
        let p = Partition::parse("3 1|2 0", 4).unwrap();
        let q = Partition::parse("0 2|1 3", 4).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "0 2|1 3");
    }

    #[test]
    fn parse_implies_singletons() {
        let p = Partition::parse("1 2", 4).unwrap();
        assert_eq!(p.blocks(), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(Partition::parse("", 3).unwrap(), Partition::zero(3).unwrap());
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(
            Partition::parse("0 4", 4),
            Err(RelationError::OutOfRange { value: 4, size: 4 })
        );
        assert_eq!(
            Partition::parse("0 1|1 2", 4),
            Err(RelationError::DuplicateElement(1))
        );
        assert!(matches!(
            Partition::parse("0 x", 4),
            Err(RelationError::BadToken { .. })
        ));
    }

    #[test]
    fn display_prints_singleton_blocks() {
        let p = Partition::parse("1 3", 4).unwrap();
        assert_eq!(p.to_string(), "0|1 3|2");
    }

    #[test]
    fn meet_intersects_blocks() {
        let p = Partition::parse("0 1|2 3", 4).unwrap();
        let q = Partition::parse("0 1 2|3", 4).unwrap();
        assert_eq!(p.meet(&q).unwrap(), Partition::parse("0 1|2|3", 4).unwrap());
    }

    #[test]
    fn join_closes_transitively() {
        let p = Partition::parse("0 1|2|3", 4).unwrap();
        let q = Partition::parse("1 2|0|3", 4).unwrap();
        assert_eq!(p.join(&q).unwrap(), Partition::parse("0 1 2|3", 4).unwrap());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let p = Partition::zero(3).unwrap();
        let q = Partition::zero(4).unwrap();
        assert_eq!(
            p.meet(&q),
            Err(RelationError::SizeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn leq_is_block_refinement() {
        let p = Partition::parse("0 2|1 3", 4).unwrap();
        let zero = Partition::zero(4).unwrap();
        let one = Partition::one(4).unwrap();
        assert!(zero.leq(&p).unwrap());
        assert!(p.leq(&one).unwrap());
        assert!(!p.leq(&zero).unwrap());
        assert!(!one.leq(&p).unwrap());
    }

    #[test]
    fn product_block_is_a_rectangle_of_classes() {
        // {0,1|2} * {0|1} on codes (a, b) -> 2a + b.
        let p = Partition::parse("0 1|2", 3).unwrap();
        let q = Partition::zero(2).unwrap();
        let prod = p.pairwise_product(&q);
        assert_eq!(prod.n(), 6);
        assert_eq!(prod.class_of(0), vec![0, 2]);
        // Same rectangle computed elementwise.
        for a in 0..3 {
            for b in 0..2 {
                for c in 0..3 {
                    for d in 0..2 {
                        assert_eq!(
                            prod.related(a * 2 + b, c * 2 + d),
                            p.related(a, c) && q.related(b, d)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn product_coherence_with_materialized_relation() {
        let p = Partition::parse("0 1|2", 3).unwrap();
        let q = Partition::parse("0 1", 2).unwrap();
        let prod = p.pairwise_product(&q);
        let rel = p.relation_product(&q);
        for a in 0..3 {
            for b in 0..2 {
                for c in 0..3 {
                    for d in 0..2 {
                        let in_rel = rel.binary_search(&((a, b), (c, d))).is_ok();
                        assert_eq!(in_rel, prod.related(a * 2 + b, c * 2 + d));
                    }
                }
            }
        }
    }

    #[test]
    fn class_formula_for_products() {
        // (a, b)/(p * q) = a/p x b/q.
        let p = Partition::parse("0 2|1 3", 4).unwrap();
        let q = Partition::parse("0 1|2", 3).unwrap();
        let prod = p.pairwise_product(&q);
        for a in 0..4 {
            for b in 0..3 {
                let mut expect: Vec<usize> = p
                    .class_of(a)
                    .into_iter()
                    .flat_map(|x| q.class_of(b).into_iter().map(move |y| x * 3 + y))
                    .collect();
                expect.sort_unstable();
                assert_eq!(prod.class_of(a * 3 + b), expect);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = Partition::parse("0 2|1 3", 4).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"blocks":[[0,2],[1,3]]}"#);
        let back: Partition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
