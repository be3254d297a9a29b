//! Brute-force oracles and corpus builders shared by the integration suites.
//! Everything here recomputes results from definitions, independently of the
//! library's algorithms, so agreement is meaningful.
#![allow(dead_code)]

use commutator_kit::algebra::FiniteAlgebra;
use commutator_kit::catalog;
use commutator_kit::relations::Partition;

/// Every partition of `{0, .., n-1}`, via restricted growth strings: the
/// block label of element `i` is at most one past the largest label used
/// before it, so each partition is produced exactly once.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(i: usize, used: usize, labels: &mut [usize], out: &mut Vec<Partition>) {
        let n = labels.len();
        if i == n {
            let mut first = vec![usize::MAX; n];
            let mut pairs = Vec::new();
            for (x, &l) in labels.iter().enumerate() {
                if first[l] == usize::MAX {
                    first[l] = x;
                } else {
                    pairs.push((first[l], x));
                }
            }
            out.push(Partition::from_pairs(n, pairs).unwrap());
            return;
        }
        for l in 0..=used {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), labels, out);
        }
    }
    assert!(n >= 1);
    let mut labels = vec![0usize; n];
    let mut out = Vec::new();
    rec(1, 1, &mut labels, &mut out);
    out
}

fn decode(mut code: usize, k: usize, n: usize) -> Vec<usize> {
    let mut args = vec![0usize; k];
    for slot in (0..k).rev() {
        args[slot] = code % n;
        code /= n;
    }
    args
}

/// Compatibility straight from the definition: for every operation and every
/// pair of pointwise-related argument tuples, the results are related.
pub fn is_congruence_oracle(a: &FiniteAlgebra, p: &Partition) -> bool {
    let n = a.size;
    for op in &a.ops {
        let k = op.arity;
        let total = n.pow(k as u32);
        for cx in 0..total {
            let xs = decode(cx, k, n);
            for cy in 0..total {
                let ys = decode(cy, k, n);
                if xs.iter().zip(&ys).all(|(&u, &v)| p.related(u, v))
                    && !p.related(op.value(n, &xs), op.value(n, &ys))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// The congruence lattice by filtering every partition.
pub fn congruences_by_filter(a: &FiniteAlgebra) -> Vec<Partition> {
    all_partitions(a.size)
        .into_iter()
        .filter(|p| is_congruence_oracle(a, p))
        .collect()
}

/// The least congruence relating every listed pair, as the meet of all
/// congruences that do. The cheap containment test runs before the
/// compatibility scan.
pub fn least_congruence_containing(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Partition {
    all_partitions(a.size)
        .into_iter()
        .filter(|p| pairs.iter().all(|&(x, y)| p.related(x, y)))
        .filter(|p| is_congruence_oracle(a, p))
        .reduce(|acc, p| acc.meet(&p).unwrap())
        .expect("the full relation always qualifies")
}

/// The five fixed algebras every suite exercises.
pub fn named_corpus() -> Vec<(String, FiniteAlgebra)> {
    vec![
        ("z2".into(), catalog::cyclic_group(2)),
        ("z4".into(), catalog::cyclic_group(4)),
        ("s3".into(), catalog::symmetric_group_s3()),
        ("semilattice2".into(), catalog::two_element_semilattice()),
        ("n5".into(), catalog::n5_lattice()),
    ]
}

/// Seeded random one-binary-op algebras on two and three elements.
pub fn random_corpus(count: usize, seed: u64) -> Vec<(String, FiniteAlgebra)> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 2;
            let a = catalog::random_groupoid(n, seed.wrapping_add(i as u64));
            (format!("groupoid{n}_{i}"), a)
        })
        .collect()
}

/// The algebra relabelled along a permutation `sigma` of the universe:
/// `f'(sigma(x)..) = sigma(f(x..))`.
pub fn relabel(a: &FiniteAlgebra, sigma: &[usize]) -> FiniteAlgebra {
    let n = a.size;
    assert_eq!(sigma.len(), n);
    let mut inv = vec![0usize; n];
    for (x, &sx) in sigma.iter().enumerate() {
        inv[sx] = x;
    }
    let ops = a
        .ops
        .iter()
        .map(|op| {
            let k = op.arity;
            let total = n.pow(k as u32);
            let table = (0..total)
                .map(|code| {
                    let args: Vec<usize> =
                        decode(code, k, n).into_iter().map(|v| inv[v]).collect();
                    sigma[op.value(n, &args)]
                })
                .collect();
            commutator_kit::algebra::Operation::new(op.name.clone(), k, table)
        })
        .collect();
    FiniteAlgebra::new(n, ops).unwrap()
}

/// The partition relabelled along `sigma`.
pub fn relabel_partition(p: &Partition, sigma: &[usize]) -> Partition {
    let pairs: Vec<(usize, usize)> = p
        .ordered_pairs()
        .into_iter()
        .map(|(x, y)| (sigma[x], sigma[y]))
        .collect();
    Partition::from_pairs(p.n(), pairs).unwrap()
}
