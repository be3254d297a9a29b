//! Congruence generation by closure under elementary translations.
//!
//! `cg(a, seed)` computes the least congruence relating every seed pair: a
//! union-find is seeded with the pairs, and a FIFO worklist re-examines each
//! freshly merged pair `(x, y)` under every elementary translation (one
//! operation with one argument position open and all others fixed), merging
//! `f(..x..)` with `f(..y..)` until nothing changes. Processing only the
//! pairs that actually merged suffices: any two equivalent elements are
//! joined by a chain of processed merges, and translations of congruent
//! elements stay congruent by transitivity along that chain.

mod witness;

pub use witness::{replay, ChainLink, ReplayError, TranslationStep, WitnessChain};

use std::collections::VecDeque;

use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::relations::{PairSet, Partition, RelationError, UnionFind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("({x}, {y}) is not in the generated congruence")]
    NotInCongruence { x: usize, y: usize },
}

/// One recorded merge: applying `translations` (innermost first) to the two
/// components of `generator` produced the merged pair.
#[derive(Clone, Debug)]
struct Edge {
    x: usize,
    y: usize,
    generator: (usize, usize),
    translations: Vec<TranslationStep>,
}

/// The merge forest left behind by a closure run; every class is spanned by
/// its edges, so any two congruent elements are connected.
#[derive(Clone, Debug)]
pub struct Provenance {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>, // element -> incident edge indices
    partition: Partition,
}

impl Provenance {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// A chain of links from `x` to `y`, each link replaying one recorded
    /// merge in the direction of travel.
    pub fn chain(&self, x: usize, y: usize) -> Result<WitnessChain, CongruenceError> {
        let n = self.partition.n();
        for v in [x, y] {
            if v >= n {
                return Err(RelationError::OutOfRange { value: v, size: n }.into());
            }
        }
        if !self.partition.related(x, y) {
            return Err(CongruenceError::NotInCongruence { x, y });
        }
        if x == y {
            return Ok(WitnessChain {
                endpoints: (x, y),
                links: Vec::new(),
            });
        }
        // BFS over the merge forest from x to y.
        let mut from_edge: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut queue = VecDeque::from([x]);
        visited[x] = true;
        while let Some(u) = queue.pop_front() {
            if u == y {
                break;
            }
            for &e in &self.adjacency[u] {
                let edge = &self.edges[e];
                let v = if edge.x == u { edge.y } else { edge.x };
                if !visited[v] {
                    visited[v] = true;
                    from_edge[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        debug_assert!(visited[y], "related elements share a forest component");
        let mut links = Vec::new();
        let mut cur = y;
        while cur != x {
            let e = from_edge[cur].expect("BFS reached y, so the path is recorded");
            let edge = &self.edges[e];
            let (from, to, generator) = if edge.y == cur {
                (edge.x, edge.y, edge.generator)
            } else {
                // Traversed against the recorded direction; swap the
                // generator so the link still replays forward.
                (edge.y, edge.x, (edge.generator.1, edge.generator.0))
            };
            links.push(ChainLink {
                from,
                to,
                generator,
                translations: edge.translations.clone(),
            });
            cur = from;
        }
        links.reverse();
        Ok(WitnessChain {
            endpoints: (x, y),
            links,
        })
    }
}

// A merged pair together with the derivation that produced it: the edge it
// was translated from and the steps applied. None marks a seed pair.
type Merged = (usize, usize, Option<(usize, Vec<TranslationStep>)>);

struct Closure<'a> {
    a: &'a FiniteAlgebra,
    uf: UnionFind,
    queue: VecDeque<Merged>,
    record: bool,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    seeds: Vec<(usize, usize)>,
}

impl<'a> Closure<'a> {
    fn new(a: &'a FiniteAlgebra, record: bool) -> Self {
        Closure {
            a,
            uf: UnionFind::new(a.size),
            queue: VecDeque::new(),
            record,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); if record { a.size } else { 0 }],
            seeds: Vec::new(),
        }
    }

    fn merge(
        &mut self,
        x: usize,
        y: usize,
        reason: Option<(usize, Vec<TranslationStep>)>,
    ) {
        if x == y || !self.uf.union(x, y) {
            return;
        }
        if self.record {
            let (seed_idx, translations) = reason.clone().expect("recording runs carry reasons");
            let generator = self.seeds[seed_idx];
            let e = self.edges.len();
            self.edges.push(Edge {
                x,
                y,
                generator,
                translations,
            });
            self.adjacency[x].push(e);
            self.adjacency[y].push(e);
        }
        self.queue.push_back((x, y, reason));
    }

    fn run(&mut self, seed: &PairSet) {
        for (u, v) in seed.iter() {
            let seed_idx = self.seeds.len();
            self.seeds.push((u, v));
            let reason = self.record.then(|| (seed_idx, Vec::new()));
            self.merge(u, v, reason);
        }
        let n = self.a.size;
        let mut args = Vec::new();
        while let Some((x, y, reason)) = self.queue.pop_front() {
            for (op_index, op) in self.a.ops.iter().enumerate() {
                let k = op.arity;
                if k == 0 {
                    continue;
                }
                let rest_count = n.pow((k - 1) as u32);
                for position in 0..k {
                    for rest in 0..rest_count {
                        args.clear();
                        args.resize(k, 0);
                        let mut r = rest;
                        for i in (0..k).rev() {
                            if i == position {
                                continue;
                            }
                            args[i] = r % n;
                            r /= n;
                        }
                        args[position] = x;
                        let fx = op.value(n, &args);
                        args[position] = y;
                        let fy = op.value(n, &args);
                        if fx == fy || self.uf.find(fx) == self.uf.find(fy) {
                            continue;
                        }
                        let next_reason = reason.as_ref().map(|(seed_idx, steps)| {
                            let mut extended = steps.clone();
                            extended.push(TranslationStep {
                                op_index,
                                position,
                                fixed_args: args
                                    .iter()
                                    .enumerate()
                                    .filter(|&(i, _)| i != position)
                                    .map(|(_, &v)| v)
                                    .collect(),
                            });
                            (*seed_idx, extended)
                        });
                        self.merge(fx, fy, next_reason);
                    }
                }
            }
        }
    }
}

fn check_seed(a: &FiniteAlgebra, seed: &PairSet) -> Result<(), CongruenceError> {
    if seed.n() != a.size {
        return Err(RelationError::SizeMismatch {
            left: seed.n(),
            right: a.size,
        }
        .into());
    }
    Ok(())
}

/// Least congruence of `a` relating every pair in `seed`.
pub fn cg(a: &FiniteAlgebra, seed: &PairSet) -> Result<Partition, CongruenceError> {
    check_seed(a, seed)?;
    let mut closure = Closure::new(a, false);
    closure.run(seed);
    Ok(Partition::from_canonical_reps(closure.uf.canonical_reps()))
}

/// Like `cg`, but also returns the merge forest for witness extraction.
pub fn cg_with_provenance(
    a: &FiniteAlgebra,
    seed: &PairSet,
) -> Result<(Partition, Provenance), CongruenceError> {
    check_seed(a, seed)?;
    let mut closure = Closure::new(a, true);
    closure.run(seed);
    let partition = Partition::from_canonical_reps(closure.uf.canonical_reps());
    let provenance = Provenance {
        edges: closure.edges,
        adjacency: closure.adjacency,
        partition: partition.clone(),
    };
    Ok((partition, provenance))
}

/// The principal congruence collapsing `x` and `y`.
pub fn principal(a: &FiniteAlgebra, x: usize, y: usize) -> Result<Partition, CongruenceError> {
    let seed = PairSet::from_pairs(a.size, [(x, y)]).map_err(CongruenceError::from)?;
    cg(a, &seed)
}

/// A chain from `x` to `y` through the congruence generated by `seed`,
/// every link labelled by a generator and the translations that carry it to
/// the link's endpoints. Fails with `NotInCongruence` when no chain exists.
pub fn witness_chain(
    a: &FiniteAlgebra,
    seed: &PairSet,
    target: (usize, usize),
) -> Result<WitnessChain, CongruenceError> {
    let (_, provenance) = cg_with_provenance(a, seed)?;
    provenance.chain(target.0, target.1)
}

/// Every congruence of `a`: all principal congruences, closed under join,
/// plus the identity. Sorted coarsest-last: descending block count, ties by
/// representative arrays.
pub fn con_lattice(a: &FiniteAlgebra) -> Result<Vec<Partition>, CongruenceError> {
    let n = a.size;
    let zero = Partition::zero(n).map_err(CongruenceError::from)?;
    let mut found: Vec<Partition> = vec![zero];
    let mut seen: std::collections::HashSet<Vec<usize>> =
        found.iter().map(|p| p.as_reps().to_vec()).collect();
    for x in 0..n {
        for y in (x + 1)..n {
            let p = principal(a, x, y)?;
            if seen.insert(p.as_reps().to_vec()) {
                found.push(p);
            }
        }
    }
    // Close under pairwise joins; every congruence is a join of principals.
    let mut frontier: Vec<Partition> = found.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for p in &frontier {
            for q in &found {
                let j = p.join(q).expect("uniform size");
                if seen.insert(j.as_reps().to_vec()) {
                    fresh.push(j);
                }
            }
        }
        found.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    found.sort_by(|p, q| {
        q.num_blocks()
            .cmp(&p.num_blocks())
            .then_with(|| p.as_reps().cmp(q.as_reps()))
    });
    Ok(found)
}
