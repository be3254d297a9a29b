//! The term-condition commutator of two congruences.
//!
//! For congruences `alpha` and `beta` of a finite algebra `A`, build the
//! pair algebra `B` of `beta` and generate the congruence `delta` of `B`
//! from the diagonal image of `alpha`, i.e. from every pair
//! `((a, a), (b, b))` with `a alpha b`. That congruence induces a map on
//! tolerances of `A`:
//!
//! ```text
//! psi(T) = T  union  { (x, y) : (a, b) delta (x, y) for some (a, b) in T
//!                               with a beta b }
//! ```
//!
//! `psi` is extensive, monotone, and idempotent. Applying it once to the
//! diagonal already gives its least fixed point, and that fixed point is the
//! commutator `[alpha, beta]`: the union of the delta-classes of the
//! diagonal pairs, read back as a relation on `A`. `lfp_by_meet` recomputes
//! the same fixed point by brute force, as the meet of every psi-closed
//! tolerance, and exists purely as an independent cross-check.
//!
//! The commutator is the least congruence `gamma` for which the centrality
//! condition `C(alpha, beta; gamma)` holds. `term_condition` decides that
//! condition through `delta` (membership in `gamma` must be constant on
//! every delta-class), while `term_condition_bounded` checks the textbook
//! definition directly by enumerating polynomial functions up to a small
//! environment arity.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{make_pair_algebra, FiniteAlgebra, PairAlgebra, PairAlgebraError};
use crate::congruence::{cg, con_lattice, witness_chain, CongruenceError, WitnessChain};
use crate::relations::{
    all_tolerances, is_congruence, PairSet, Partition, RelationError, Tolerance,
};

/// Largest universe `lfp_by_meet` will enumerate tolerances for.
pub const MEET_ORACLE_CAP: usize = 5;

/// Largest environment arity `term_condition_bounded` accepts.
pub const ENV_ARITY_CAP: usize = 2;

/// Cap on the number of distinct polynomial functions the bounded checker
/// will collect before giving up.
pub const POLYNOMIAL_BUDGET: usize = 200_000;

/// Cap on the number of compositions the bounded checker will perform; rich
/// clones (a random groupoid is usually one) exhaust this long before the
/// function budget.
pub const COMPOSITION_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CommutatorError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("{which} is not a congruence of the algebra: {relation}")]
    NotACongruence {
        which: &'static str,
        relation: String,
    },
    #[error("{what} is capped at size {cap}; got {n}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        n: usize,
    },
    #[error("environment arity is capped at {cap}; got {got}")]
    ArityCap { cap: usize, got: usize },
    #[error("({x}, {y}) is not in the commutator")]
    NotInCommutator { x: usize, y: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl From<PairAlgebraError> for CommutatorError {
    fn from(e: PairAlgebraError) -> Self {
        match e {
            PairAlgebraError::Relation(r) => CommutatorError::Relation(r),
            PairAlgebraError::NotACongruence { relation } => CommutatorError::NotACongruence {
                which: "beta",
                relation,
            },
        }
    }
}

impl From<CongruenceError> for CommutatorError {
    fn from(e: CongruenceError) -> Self {
        match e {
            CongruenceError::Relation(r) => CommutatorError::Relation(r),
            CongruenceError::NotInCongruence { x, y } => CommutatorError::InternalInvariant(
                format!("({x}, {y}) vanished from a congruence it was derived in"),
            ),
        }
    }
}

/// Everything derived from one `(alpha, beta)` pair: the pair algebra of
/// `beta`, the diagonal generators, and their generated congruence `delta`.
/// Computing `delta` dominates the cost, so it is done once here and shared
/// by `psi`, the commutator read-back, witnesses, and the term condition.
pub struct DeltaContext {
    pair: PairAlgebra,
    alpha: Partition,
    beta: Partition,
    generators: PairSet,
    delta: Partition,
    diagonal: Vec<usize>,      // a -> index of (a, a)
    blocks: Vec<Vec<usize>>,   // delta-classes as index lists
    block_of: Vec<usize>,      // pair index -> position in `blocks`
}

fn check_congruence(
    a: &FiniteAlgebra,
    p: &Partition,
    which: &'static str,
) -> Result<(), CommutatorError> {
    if !is_congruence(a, p)? {
        return Err(CommutatorError::NotACongruence {
            which,
            relation: p.to_string(),
        });
    }
    Ok(())
}

fn diagonal_generators(pair: &PairAlgebra, alpha: &Partition) -> PairSet {
    let n = pair.base().size;
    let diag = |x: usize| {
        pair.index_of(x, x)
            .expect("diagonal pairs are in every congruence")
    };
    let mut gens = PairSet::new(pair.size()).expect("pair universe contains the diagonal");
    for a in 0..n {
        for b in 0..n {
            if alpha.related(a, b) {
                gens.insert(diag(a), diag(b)).expect("indices in range");
            }
        }
    }
    gens
}

impl DeltaContext {
    pub fn new(
        a: &FiniteAlgebra,
        alpha: &Partition,
        beta: &Partition,
    ) -> Result<Self, CommutatorError> {
        check_congruence(a, alpha, "alpha")?;
        check_congruence(a, beta, "beta")?;
        let pair = make_pair_algebra(a, beta)?;
        let generators = diagonal_generators(&pair, alpha);
        let delta = cg(pair.induced(), &generators)?;
        let diagonal = (0..a.size)
            .map(|x| pair.index_of(x, x).expect("diagonal is beta-related"))
            .collect();
        let blocks = delta.blocks();
        let mut block_of = vec![0; pair.size()];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                block_of[i] = b;
            }
        }
        Ok(DeltaContext {
            pair,
            alpha: alpha.clone(),
            beta: beta.clone(),
            generators,
            delta,
            diagonal,
            blocks,
            block_of,
        })
    }

    pub fn pair_algebra(&self) -> &PairAlgebra {
        &self.pair
    }

    pub fn alpha(&self) -> &Partition {
        &self.alpha
    }

    pub fn beta(&self) -> &Partition {
        &self.beta
    }

    /// The diagonal image of alpha, as pairs of pair-algebra indices.
    pub fn generators(&self) -> &PairSet {
        &self.generators
    }

    /// The congruence of the pair algebra generated by the diagonal image.
    pub fn delta(&self) -> &Partition {
        &self.delta
    }

    /// Index of the diagonal pair `(x, x)`.
    pub fn diagonal_index(&self, x: usize) -> usize {
        self.diagonal[x]
    }

    /// The closure step: adds to `t` every pair delta-related to a
    /// beta-related pair of `t`.
    pub fn psi(&self, t: &Tolerance) -> Result<Tolerance, RelationError> {
        let n = self.beta.n();
        if t.n() != n {
            return Err(RelationError::SizeMismatch {
                left: t.n(),
                right: n,
            });
        }
        let mut out = t.clone();
        let mut visited = vec![false; self.blocks.len()];
        for x in 0..n {
            for y in 0..n {
                if !t.related(x, y) || !self.beta.related(x, y) {
                    continue;
                }
                let i = self
                    .pair
                    .index_of(x, y)
                    .expect("beta-related pairs are in the universe");
                let b = self.block_of[i];
                if visited[b] {
                    continue;
                }
                visited[b] = true;
                for &j in &self.blocks[b] {
                    let (p, q) = self.pair.pair(j);
                    out.insert(p, q);
                }
            }
        }
        Ok(out)
    }

    /// The commutator: the union of the delta-classes of diagonal pairs,
    /// read back as a relation on the base universe. The read-back is an
    /// equivalence relation; `commutator_checked` verifies that.
    pub fn commutator(&self) -> Partition {
        self.read_back().0
    }

    fn read_back(&self) -> (Partition, Vec<(usize, usize)>) {
        let n = self.beta.n();
        let mut pairs = Vec::new();
        let mut visited = vec![false; self.blocks.len()];
        for x in 0..n {
            let b = self.block_of[self.diagonal[x]];
            if visited[b] {
                continue;
            }
            visited[b] = true;
            for &j in &self.blocks[b] {
                pairs.push(self.pair.pair(j));
            }
        }
        let p = Partition::from_pairs(n, pairs.iter().copied())
            .expect("pairs come from the universe");
        (p, pairs)
    }

    /// Recomputes the commutator and verifies the read-back really is the
    /// relation it claims to be: already transitive (the union-find closure
    /// added nothing) and compatible with every operation.
    pub fn commutator_checked(&self) -> Result<Partition, CommutatorError> {
        let (p, pairs) = self.read_back();
        let n = p.n();
        let set: std::collections::HashSet<(usize, usize)> = pairs.into_iter().collect();
        for x in 0..n {
            for y in 0..n {
                if p.related(x, y) != set.contains(&(x, y)) {
                    return Err(CommutatorError::InternalInvariant(format!(
                        "diagonal-class union is not an equivalence relation at ({x}, {y})"
                    )));
                }
            }
        }
        match is_congruence(self.pair.base(), &p) {
            Ok(true) => Ok(p),
            Ok(false) => Err(CommutatorError::InternalInvariant(format!(
                "commutator read-back {p} is not compatible with the operations"
            ))),
            Err(e) => Err(e.into()),
        }
    }

    /// A replayable chain deriving `(x, y)` as a commutator pair: a path in
    /// the pair algebra from some diagonal pair to `(x, y)` using only the
    /// diagonal generators.
    pub fn witness(&self, x: usize, y: usize) -> Result<WitnessChain, CommutatorError> {
        let n = self.beta.n();
        for v in [x, y] {
            if v >= n {
                return Err(RelationError::OutOfRange { value: v, size: n }.into());
            }
        }
        let target = match self.pair.index_of(x, y) {
            Some(i) => i,
            None => return Err(CommutatorError::NotInCommutator { x, y }),
        };
        let start = (0..n)
            .map(|a| self.diagonal[a])
            .find(|&d| self.delta.related(d, target))
            .ok_or(CommutatorError::NotInCommutator { x, y })?;
        let chain = witness_chain(self.pair.induced(), &self.generators, (start, target))?;
        Ok(chain)
    }

    /// Whether membership in `gamma` is constant on every delta-class; this
    /// is exactly the centrality condition `C(alpha, beta; gamma)`. Each
    /// delta-link arises from substituting alpha-related values into the
    /// first slot of a polynomial whose other slots move within beta, so a
    /// class is one chained family of such substitution instances, and the
    /// centrality biconditional holds iff gamma cannot split any class.
    pub fn term_condition_holds(&self, gamma: &Partition) -> Result<bool, CommutatorError> {
        check_congruence(self.pair.base(), gamma, "gamma")?;
        for block in &self.blocks {
            let (p0, q0) = self.pair.pair(block[0]);
            let first = gamma.related(p0, q0);
            for &j in &block[1..] {
                let (p, q) = self.pair.pair(j);
                if gamma.related(p, q) != first {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

// Serialized as the delta partition over pair indices, with the pair list
// alongside so the document stands on its own.
impl Serialize for DeltaContext {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DeltaContext", 2)?;
        s.serialize_field("universe", self.pair.universe())?;
        s.serialize_field("delta", &self.delta)?;
        s.end()
    }
}

/// The diagonal image of `alpha` in the pair algebra of `beta`: all pairs
/// `(index(a, a), index(b, b))` with `a alpha b`.
pub fn d_alpha(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<PairSet, CommutatorError> {
    check_congruence(a, alpha, "alpha")?;
    let pair = make_pair_algebra(a, beta)?;
    Ok(diagonal_generators(&pair, alpha))
}

/// Builds the full context: pair algebra, generators, and `delta`.
pub fn delta(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<DeltaContext, CommutatorError> {
    DeltaContext::new(a, alpha, beta)
}

/// The commutator `[alpha, beta]`. Debug builds verify the read-back
/// invariants; use `commutator_checked` to verify in any build.
pub fn commutator(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<Partition, CommutatorError> {
    let ctx = DeltaContext::new(a, alpha, beta)?;
    if cfg!(debug_assertions) {
        ctx.commutator_checked()
    } else {
        Ok(ctx.commutator())
    }
}

/// The commutator with the internal invariants verified unconditionally.
pub fn commutator_checked(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<Partition, CommutatorError> {
    DeltaContext::new(a, alpha, beta)?.commutator_checked()
}

/// Brute-force fixed point: the meet of every tolerance `T` with
/// `psi(T) <= T`. Agrees with `commutator` (as a relation) and exists as an
/// independent oracle; enumeration caps the universe at `MEET_ORACLE_CAP`.
pub fn lfp_by_meet(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<Tolerance, CommutatorError> {
    if a.size > MEET_ORACLE_CAP {
        return Err(CommutatorError::SizeCap {
            what: "the tolerance-meet oracle",
            cap: MEET_ORACLE_CAP,
            n: a.size,
        });
    }
    let ctx = DeltaContext::new(a, alpha, beta)?;
    let mut acc = Tolerance::full(a.size).map_err(CommutatorError::from)?;
    for t in all_tolerances(a.size).map_err(CommutatorError::from)? {
        if ctx.psi(&t)?.leq(&t)? {
            acc = acc.meet(&t)?;
        }
    }
    Ok(acc)
}

/// Whether the centrality condition `C(alpha, beta; gamma)` holds, decided
/// through the delta-class test.
pub fn term_condition(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
) -> Result<bool, CommutatorError> {
    DeltaContext::new(a, alpha, beta)?.term_condition_holds(gamma)
}

/// All operation tables of functions `A^arity -> A` built from projections,
/// constants, and the basic operations.
fn polynomial_tables(
    a: &FiniteAlgebra,
    arity: usize,
) -> Result<Vec<Vec<usize>>, CommutatorError> {
    polynomial_tables_with_budgets(a, arity, POLYNOMIAL_BUDGET, COMPOSITION_BUDGET)
}

fn polynomial_tables_with_budgets(
    a: &FiniteAlgebra,
    arity: usize,
    max_functions: usize,
    max_compositions: usize,
) -> Result<Vec<Vec<usize>>, CommutatorError> {
    let n = a.size;
    let dom = n.pow(arity as u32);
    let mut seen = std::collections::HashSet::new();
    let mut funcs: Vec<Vec<usize>> = Vec::new();
    for i in 0..arity {
        // Projection onto slot i: decode digit i of the argument code.
        let stride = n.pow((arity - 1 - i) as u32);
        let table: Vec<usize> = (0..dom).map(|code| code / stride % n).collect();
        if seen.insert(table.clone()) {
            funcs.push(table);
        }
    }
    for c in 0..n {
        let table = vec![c; dom];
        if seen.insert(table.clone()) {
            funcs.push(table);
        }
    }
    // Close under the basic operations; each round only composes tuples that
    // touch at least one function from the previous round.
    let mut compositions = 0usize;
    let mut old = 0;
    loop {
        let len = funcs.len();
        let mut fresh: Vec<Vec<usize>> = Vec::new();
        for op in &a.ops {
            let k = op.arity;
            if k == 0 {
                continue;
            }
            let mut tuple = vec![0usize; k];
            'tuples: loop {
                if tuple.iter().any(|&g| g >= old) {
                    compositions += 1;
                    if compositions > max_compositions {
                        return Err(CommutatorError::SizeCap {
                            what: "polynomial closure work",
                            cap: max_compositions,
                            n: compositions,
                        });
                    }
                    let mut args = vec![0usize; k];
                    let table: Vec<usize> = (0..dom)
                        .map(|code| {
                            for (slot, &g) in tuple.iter().enumerate() {
                                args[slot] = funcs[g][code];
                            }
                            op.value(n, &args)
                        })
                        .collect();
                    if seen.insert(table.clone()) {
                        if seen.len() > max_functions {
                            return Err(CommutatorError::SizeCap {
                                what: "polynomial closure",
                                cap: max_functions,
                                n: seen.len(),
                            });
                        }
                        fresh.push(table);
                    }
                }
                // Odometer over function tuples.
                let mut slot = k;
                loop {
                    if slot == 0 {
                        break 'tuples;
                    }
                    slot -= 1;
                    tuple[slot] += 1;
                    if tuple[slot] < len {
                        break;
                    }
                    tuple[slot] = 0;
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        old = len;
        funcs.extend(fresh);
    }
    Ok(funcs)
}

/// Checks the centrality condition `C(alpha, beta; gamma)` directly from its
/// definition, for every polynomial `t(x, u_1, .., u_m)` with
/// `m <= max_env_arity`: whenever `a alpha b` and `u_i beta v_i`,
///
/// ```text
/// t(a, us) gamma t(a, vs)   iff   t(b, us) gamma t(b, vs)
/// ```
///
/// A `false` is definitive; a `true` is evidence up to the arity bound.
/// Universe caps keep the enumeration finite: size 3 with two environment
/// arguments, size 4 below that.
pub fn term_condition_bounded(
    a: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
    gamma: &Partition,
    max_env_arity: usize,
) -> Result<bool, CommutatorError> {
    if max_env_arity > ENV_ARITY_CAP {
        return Err(CommutatorError::ArityCap {
            cap: ENV_ARITY_CAP,
            got: max_env_arity,
        });
    }
    let cap = if max_env_arity == 2 { 3 } else { 4 };
    if a.size > cap {
        return Err(CommutatorError::SizeCap {
            what: "the bounded term-condition check",
            cap,
            n: a.size,
        });
    }
    check_congruence(a, alpha, "alpha")?;
    check_congruence(a, beta, "beta")?;
    check_congruence(a, gamma, "gamma")?;
    let n = a.size;
    let alpha_pairs = alpha.nontrivial_pairs();
    let beta_pairs = beta.ordered_pairs();
    for m in 0..=max_env_arity {
        let polys = polynomial_tables(a, 1 + m)?;
        let span = n.pow(m as u32);
        let mut env = vec![0usize; m]; // indices into beta_pairs
        'envs: loop {
            // Argument codes for (slot0, u1..um) and (slot0, v1..vm).
            let (mut us, mut vs) = (0usize, 0usize);
            for &e in &env {
                let (u, v) = beta_pairs[e];
                us = us * n + u;
                vs = vs * n + v;
            }
            for &(x, y) in &alpha_pairs {
                for t in &polys {
                    let t_xu = t[x * span + us];
                    let t_xv = t[x * span + vs];
                    let t_yu = t[y * span + us];
                    let t_yv = t[y * span + vs];
                    if gamma.related(t_xu, t_xv) != gamma.related(t_yu, t_yv) {
                        return Ok(false);
                    }
                }
            }
            // Odometer over environment pair choices.
            let mut slot = m;
            loop {
                if slot == 0 {
                    break 'envs;
                }
                slot -= 1;
                env[slot] += 1;
                if env[slot] < beta_pairs.len() {
                    break;
                }
                env[slot] = 0;
            }
        }
    }
    Ok(true)
}

/// Whether the algebra is abelian: `[1, 1] = 0`.
pub fn is_abelian(a: &FiniteAlgebra) -> Result<bool, CommutatorError> {
    let one = Partition::one(a.size).map_err(CommutatorError::from)?;
    let zero = Partition::zero(a.size).map_err(CommutatorError::from)?;
    Ok(commutator(a, &one, &one)? == zero)
}

/// The commutator of every pair of congruences. `congruences` is the full
/// congruence lattice in canonical order and `cells[i][j]` indexes the value
/// of `[congruences[i], congruences[j]]` back into that list.
pub struct CommutatorTable {
    pub congruences: Vec<Partition>,
    pub cells: Vec<Vec<usize>>,
}

pub fn commutator_table(a: &FiniteAlgebra) -> Result<CommutatorTable, CommutatorError> {
    let congruences = con_lattice(a)?;
    let position: HashMap<&[usize], usize> = congruences
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_reps(), i))
        .collect();
    let mut cells = Vec::with_capacity(congruences.len());
    for alpha in &congruences {
        let mut row = Vec::with_capacity(congruences.len());
        for beta in &congruences {
            let c = commutator(a, alpha, beta)?;
            let idx = *position.get(c.as_reps()).ok_or_else(|| {
                CommutatorError::InternalInvariant(format!(
                    "commutator {c} is missing from the congruence lattice"
                ))
            })?;
            row.push(idx);
        }
        cells.push(row);
    }
    Ok(CommutatorTable {
        congruences,
        cells,
    })
}
