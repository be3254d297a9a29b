//! The pair algebra of a congruence: the subalgebra of `A x A` whose
//! universe is the set of related pairs, with operations acting
//! coordinatewise.
//!
//! Pairs are listed in lexicographic order and addressed by their position
//! in that list, so the pair algebra is itself an ordinary `FiniteAlgebra`
//! and everything downstream (congruence closure, witness chains) runs on it
//! unchanged.

use thiserror::Error;

use super::{FiniteAlgebra, Operation};
use crate::relations::{is_congruence, Partition, RelationError};

#[derive(Clone, Debug)]
pub struct PairAlgebra {
    base: FiniteAlgebra,
    universe: Vec<(usize, usize)>,
    index: Vec<Option<usize>>, // lex code a*n + b -> universe position
    induced: FiniteAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PairAlgebraError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("relation {relation} is not a congruence of the algebra")]
    NotACongruence { relation: String },
}

impl PairAlgebra {
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    /// Related pairs in lexicographic order.
    pub fn universe(&self) -> &[(usize, usize)] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.universe[i]
    }

    pub fn index_of(&self, x: usize, y: usize) -> Option<usize> {
        self.index[x * self.base.size + y]
    }

    /// The pair algebra presented as a plain algebra over pair indices.
    pub fn induced(&self) -> &FiniteAlgebra {
        &self.induced
    }
}

/// Builds the pair algebra of `beta`, which must be a congruence of `a`.
/// Induced tables are materialized eagerly; the universe has
/// `sum of block sizes squared` elements, at most `n^2`.
pub fn make_pair_algebra(
    a: &FiniteAlgebra,
    beta: &Partition,
) -> Result<PairAlgebra, PairAlgebraError> {
    if !is_congruence(a, beta)? {
        return Err(PairAlgebraError::NotACongruence {
            relation: beta.to_string(),
        });
    }
    let n = a.size;
    let mut universe = Vec::new();
    let mut index = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            if beta.related(x, y) {
                index[x * n + y] = Some(universe.len());
                universe.push((x, y));
            }
        }
    }
    let m = universe.len();
    let mut ops = Vec::with_capacity(a.ops.len());
    let mut args_l = Vec::new();
    let mut args_r = Vec::new();
    for op in &a.ops {
        let k = op.arity;
        let len = m
            .checked_pow(u32::try_from(k).expect("validated arity"))
            .expect("induced table too large");
        let mut table = Vec::with_capacity(len);
        for code in 0..len {
            args_l.clear();
            args_r.clear();
            args_l.resize(k, 0);
            args_r.resize(k, 0);
            let mut c = code;
            for i in (0..k).rev() {
                let (x, y) = universe[c % m];
                args_l[i] = x;
                args_r[i] = y;
                c /= m;
            }
            let l = op.value(n, &args_l);
            let r = op.value(n, &args_r);
            // Compatibility of beta guarantees the result pair is in the
            // universe.
            let idx = index[l * n + r].expect("congruence closed under ops");
            table.push(idx);
        }
        ops.push(Operation::new(op.name.clone(), k, table));
    }
    let induced = FiniteAlgebra { size: m, ops };
    debug_assert!(induced.validate().is_ok());
    Ok(PairAlgebra {
        base: a.clone(),
        universe,
        index,
        induced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::relations::Partition;

    #[test]
    fn universe_size_is_the_sum_of_squared_block_sizes() {
        let z4 = catalog::cyclic_group(4);
        let beta = Partition::parse("0 2|1 3", 4).unwrap();
        let pa = make_pair_algebra(&z4, &beta).unwrap();
        assert_eq!(pa.size(), 8); // 2^2 + 2^2
        let full = make_pair_algebra(&z4, &Partition::one(4).unwrap()).unwrap();
        assert_eq!(full.size(), 16);
    }

    #[test]
    fn universe_is_lexicographically_sorted_and_indexed() {
        let z4 = catalog::cyclic_group(4);
        let beta = Partition::parse("0 2|1 3", 4).unwrap();
        let pa = make_pair_algebra(&z4, &beta).unwrap();
        let mut sorted = pa.universe().to_vec();
        sorted.sort_unstable();
        assert_eq!(pa.universe(), &sorted[..]);
        for (i, &(x, y)) in pa.universe().iter().enumerate() {
            assert_eq!(pa.index_of(x, y), Some(i));
        }
        assert_eq!(pa.index_of(0, 1), None);
    }

    #[test]
    fn operations_act_coordinatewise() {
        let z4 = catalog::cyclic_group(4);
        let beta = Partition::parse("0 2|1 3", 4).unwrap();
        let pa = make_pair_algebra(&z4, &beta).unwrap();
        for i in 0..pa.size() {
            for j in 0..pa.size() {
                let (a, b) = pa.pair(i);
                let (c, d) = pa.pair(j);
                let out = pa.induced().eval(0, &[i, j]).unwrap();
                let l = z4.eval(0, &[a, c]).unwrap();
                let r = z4.eval(0, &[b, d]).unwrap();
                assert_eq!(pa.pair(out), (l, r));
            }
        }
    }

    #[test]
    fn zero_congruence_gives_a_copy_of_the_algebra() {
        let z4 = catalog::cyclic_group(4);
        let pa = make_pair_algebra(&z4, &Partition::zero(4).unwrap()).unwrap();
        assert_eq!(pa.size(), 4);
        for (i, &(x, y)) in pa.universe().iter().enumerate() {
            assert_eq!((x, y), (i, i));
        }
        for x in 0..4 {
            for y in 0..4 {
                let diag = pa.induced().eval(0, &[x, y]).unwrap();
                assert_eq!(diag, z4.eval(0, &[x, y]).unwrap());
            }
        }
    }

    #[test]
    fn non_congruences_are_rejected() {
        let z4 = catalog::cyclic_group(4);
        let bad = Partition::parse("0 1|2 3", 4).unwrap();
        match make_pair_algebra(&z4, &bad) {
            Err(PairAlgebraError::NotACongruence { relation }) => {
                assert_eq!(relation, "0 1|2 3");
            }
            other => panic!("expected NotACongruence, got {other:?}"),
        }
    }
}
