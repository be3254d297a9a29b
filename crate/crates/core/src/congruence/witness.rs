//! Witness chains: checkable certificates that two elements lie in a
//! generated congruence.
//!
//! A chain from `x` to `y` is a sequence of links. Each link names a
//! generator pair `(u, v)` (a seed pair or the reverse of one) and a list of
//! translation steps; applying the steps innermost-first to `u` must give
//! the link's `from` and applying them to `v` must give its `to`.
//! Consecutive links share endpoints. `replay` re-derives every claim
//! against the algebra and the seed set, so a chain can be validated without
//! trusting the code that produced it.
//!
//! The JSON form is
//!
//! ```json
//! {"endpoints": [1, 3],
//!  "links": [{"from": 1, "to": 3, "generator": [0, 2],
//!             "translations": [{"op": 0, "pos": 0, "args": [1]}]}]}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{EvalError, FiniteAlgebra};
use crate::relations::PairSet;

/// One elementary translation: apply operation `op_index` with the open
/// argument at `position` and the remaining arguments fixed to
/// `fixed_args` (in argument order, skipping the open slot).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationStep {
    #[serde(rename = "op")]
    pub op_index: usize,
    #[serde(rename = "pos")]
    pub position: usize,
    #[serde(rename = "args")]
    pub fixed_args: Vec<usize>,
}

impl TranslationStep {
    pub fn apply(&self, a: &FiniteAlgebra, x: usize) -> Result<usize, EvalError> {
        let op = a.ops.get(self.op_index).ok_or(EvalError::OpIndex {
            index: self.op_index,
            count: a.ops.len(),
        })?;
        if self.position >= op.arity || self.fixed_args.len() + 1 != op.arity {
            return Err(EvalError::Arity {
                name: op.name.clone(),
                expected: op.arity,
                got: self.fixed_args.len() + 1,
            });
        }
        let mut args = Vec::with_capacity(op.arity);
        let mut fixed = self.fixed_args.iter();
        for i in 0..op.arity {
            if i == self.position {
                args.push(x);
            } else {
                args.push(*fixed.next().expect("length checked above"));
            }
        }
        a.eval(self.op_index, &args)
    }
}

/// Applies a whole translation list, first step innermost.
pub fn apply_translations(
    a: &FiniteAlgebra,
    steps: &[TranslationStep],
    x: usize,
) -> Result<usize, EvalError> {
    let mut value = x;
    if value >= a.size {
        return Err(EvalError::Domain {
            value,
            size: a.size,
        });
    }
    for step in steps {
        value = step.apply(a, value)?;
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainLink {
    pub from: usize,
    pub to: usize,
    pub generator: (usize, usize),
    pub translations: Vec<TranslationStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessChain {
    pub endpoints: (usize, usize),
    pub links: Vec<ChainLink>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("a chain with no links must have equal endpoints, got ({0}, {1})")]
    EmptyChain(usize, usize),
    #[error("link {index} starts at {found}, expected {expected}")]
    Discontinuous {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("chain ends at {found}, target is {expected}")]
    WrongTerminus { expected: usize, found: usize },
    #[error("link {index}: generator ({u}, {v}) is not a seed pair or the reverse of one")]
    ForeignGenerator { index: usize, u: usize, v: usize },
    #[error("link {index}: translations carry the generator to ({got_from}, {got_to}), link claims ({from}, {to})")]
    Unfaithful {
        index: usize,
        from: usize,
        to: usize,
        got_from: usize,
        got_to: usize,
    },
    #[error("link {index}: malformed translation: {source}")]
    BadTranslation {
        index: usize,
        #[source]
        source: EvalError,
    },
}

/// Re-derives every link of `chain` against `a` and `seed`. `Ok(())` means
/// the chain is a valid derivation of its endpoints; the error names the
/// first failing link.
pub fn replay(
    a: &FiniteAlgebra,
    chain: &WitnessChain,
    seed: &PairSet,
) -> Result<(), ReplayError> {
    let (x, y) = chain.endpoints;
    if chain.links.is_empty() {
        if x == y {
            return Ok(());
        }
        return Err(ReplayError::EmptyChain(x, y));
    }
    let mut expected = x;
    for (index, link) in chain.links.iter().enumerate() {
        if link.from != expected {
            return Err(ReplayError::Discontinuous {
                index,
                expected,
                found: link.from,
            });
        }
        let (u, v) = link.generator;
        if !seed.contains(u, v) && !seed.contains(v, u) {
            return Err(ReplayError::ForeignGenerator { index, u, v });
        }
        let got_from = apply_translations(a, &link.translations, u)
            .map_err(|source| ReplayError::BadTranslation { index, source })?;
        let got_to = apply_translations(a, &link.translations, v)
            .map_err(|source| ReplayError::BadTranslation { index, source })?;
        if got_from != link.from || got_to != link.to {
            return Err(ReplayError::Unfaithful {
                index,
                from: link.from,
                to: link.to,
                got_from,
                got_to,
            });
        }
        expected = link.to;
    }
    if expected != y {
        return Err(ReplayError::WrongTerminus {
            expected: y,
            found: expected,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z4_seed() -> PairSet {
        PairSet::from_pairs(4, [(0, 2)]).unwrap()
    }

    fn plus_one() -> TranslationStep {
        TranslationStep {
            op_index: 0,
            position: 0,
            fixed_args: vec![1],
        }
    }

    #[test]
    fn translations_apply_innermost_first() {
        let z4 = catalog::cyclic_group(4);
        let steps = vec![plus_one(), plus_one()];
        assert_eq!(apply_translations(&z4, &steps, 1).unwrap(), 3);
    }

    #[test]
    fn a_hand_written_chain_replays() {
        let z4 = catalog::cyclic_group(4);
        let chain = WitnessChain {
            endpoints: (1, 3),
            links: vec![ChainLink {
                from: 1,
                to: 3,
                generator: (0, 2),
                translations: vec![plus_one()],
            }],
        };
        assert_eq!(replay(&z4, &chain, &z4_seed()), Ok(()));
    }

    #[test]
    fn reversed_generators_are_accepted() {
        let z4 = catalog::cyclic_group(4);
        let chain = WitnessChain {
            endpoints: (3, 1),
            links: vec![ChainLink {
                from: 3,
                to: 1,
                generator: (2, 0),
                translations: vec![plus_one()],
            }],
        };
        assert_eq!(replay(&z4, &chain, &z4_seed()), Ok(()));
    }

    #[test]
    fn replay_flags_the_first_broken_claim() {
        let z4 = catalog::cyclic_group(4);
        let seed = z4_seed();

        let empty = WitnessChain {
            endpoints: (0, 2),
            links: vec![],
        };
        assert_eq!(replay(&z4, &empty, &seed), Err(ReplayError::EmptyChain(0, 2)));

        let foreign = WitnessChain {
            endpoints: (1, 3),
            links: vec![ChainLink {
                from: 1,
                to: 3,
                generator: (1, 3),
                translations: vec![],
            }],
        };
        assert_eq!(
            replay(&z4, &foreign, &seed),
            Err(ReplayError::ForeignGenerator { index: 0, u: 1, v: 3 })
        );

        let unfaithful = WitnessChain {
            endpoints: (1, 3),
            links: vec![ChainLink {
                from: 1,
                to: 3,
                generator: (0, 2),
                translations: vec![],
            }],
        };
        assert_eq!(
            replay(&z4, &unfaithful, &seed),
            Err(ReplayError::Unfaithful {
                index: 0,
                from: 1,
                to: 3,
                got_from: 0,
                got_to: 2
            })
        );

        let truncated = WitnessChain {
            endpoints: (1, 0),
            links: vec![ChainLink {
                from: 1,
                to: 3,
                generator: (0, 2),
                translations: vec![plus_one()],
            }],
        };
        assert_eq!(
            replay(&z4, &truncated, &seed),
            Err(ReplayError::WrongTerminus { expected: 0, found: 3 })
        );
    }

    #[test]
    fn chain_json_matches_the_documented_shape() {
        let chain = WitnessChain {
            endpoints: (1, 3),
            links: vec![ChainLink {
                from: 1,
                to: 3,
                generator: (0, 2),
                translations: vec![plus_one()],
            }],
        };
        let json = serde_json::to_string(&chain).unwrap();
        assert_eq!(
            json,
            r#"{"endpoints":[1,3],"links":[{"from":1,"to":3,"generator":[0,2],"translations":[{"op":0,"pos":0,"args":[1]}]}]}"#
        );
        let back: WitnessChain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, chain);
    }
}
