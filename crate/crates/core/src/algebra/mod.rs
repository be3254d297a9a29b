//! Finite algebras as flat operation tables, plus the JSON document format
//! they are exchanged in.
//!
//! The universe of an algebra of size `n` is always `{0, .., n-1}`. An
//! operation of arity `k` stores its table row-major with the last argument
//! varying fastest: the value at `(a_1, .., a_k)` sits at index
//! `a_1 * n^(k-1) + .. + a_k`. A nullary operation has a one-entry table.
//!
//! A document looks like
//!
//! ```json
//! {"size": 4, "ops": [{"name": "+", "arity": 2, "table": [0,1,2,3, 1,2,3,0, 2,3,0,1, 3,0,1,2]}]}
//! ```
//!
//! The serializer writes `size` before `ops` and keeps operations in input
//! order, so parse and print round-trip exactly.

mod pair;

pub use pair::{make_pair_algebra, PairAlgebra, PairAlgebraError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    /// Table lookup that trusts its arguments: `args` must have length
    /// `arity` with entries below `n`. Use `FiniteAlgebra::eval` for the
    /// checked version.
    pub fn value(&self, n: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * n + a);
        self.table[idx]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteAlgebra {
    pub size: usize,
    pub ops: Vec<Operation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("op {op:?}: table has {got} entries, arity {arity} over size {size} needs {expected}")]
    TableLength {
        op: String,
        arity: usize,
        size: usize,
        expected: usize,
        got: usize,
    },
    #[error("op {op:?}: table entry {value} at index {index} is out of range for size {size}")]
    EntryOutOfRange {
        op: String,
        index: usize,
        value: usize,
        size: usize,
    },
    #[error("op name {name:?} is used more than once")]
    DuplicateName { name: String },
    #[error("op {op:?}: table of arity {arity} over size {size} does not fit in memory")]
    TableTooLarge { op: String, arity: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no operation at index {index}; the algebra has {count}")]
    OpIndex { index: usize, count: usize },
    #[error("operation {name:?} takes {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {value} out of range for universe of size {size}")]
    Domain { value: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("invalid algebra: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl FiniteAlgebra {
    /// Builds and validates in one step.
    pub fn new(size: usize, ops: Vec<Operation>) -> Result<Self, Vec<Violation>> {
        let a = FiniteAlgebra { size, ops };
        a.validate()?;
        Ok(a)
    }

    /// Checks every structural invariant and reports all violations at once:
    /// nonempty universe, table lengths of `size^arity`, entries in range,
    /// and unique operation names.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        if self.size == 0 {
            out.push(Violation::EmptyUniverse);
        }
        let mut names = std::collections::HashSet::new();
        for op in &self.ops {
            if !names.insert(op.name.as_str()) {
                out.push(Violation::DuplicateName {
                    name: op.name.clone(),
                });
            }
            let expected = match u32::try_from(op.arity)
                .ok()
                .and_then(|k| self.size.checked_pow(k))
            {
                Some(e) => e,
                None => {
                    out.push(Violation::TableTooLarge {
                        op: op.name.clone(),
                        arity: op.arity,
                        size: self.size,
                    });
                    continue;
                }
            };
            if op.table.len() != expected {
                out.push(Violation::TableLength {
                    op: op.name.clone(),
                    arity: op.arity,
                    size: self.size,
                    expected,
                    got: op.table.len(),
                });
                continue;
            }
            for (index, &value) in op.table.iter().enumerate() {
                if value >= self.size {
                    out.push(Violation::EntryOutOfRange {
                        op: op.name.clone(),
                        index,
                        value,
                        size: self.size,
                    });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Applies the operation at `op_index` to `args`, checking everything.
    pub fn eval(&self, op_index: usize, args: &[usize]) -> Result<usize, EvalError> {
        let op = self.ops.get(op_index).ok_or(EvalError::OpIndex {
            index: op_index,
            count: self.ops.len(),
        })?;
        if args.len() != op.arity {
            return Err(EvalError::Arity {
                name: op.name.clone(),
                expected: op.arity,
                got: args.len(),
            });
        }
        for &a in args {
            if a >= self.size {
                return Err(EvalError::Domain {
                    value: a,
                    size: self.size,
                });
            }
        }
        Ok(op.value(self.size, args))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra serialization cannot fail")
    }
}

/// Parses a JSON algebra document and validates it.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, ParseError> {
    let a: FiniteAlgebra = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if a.size == 0 {
        return Err(ParseError::EmptyUniverse);
    }
    a.validate().map_err(ParseError::Invalid)?;
    Ok(a)
}
