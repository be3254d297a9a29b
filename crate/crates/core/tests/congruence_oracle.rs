//! Congruence generation against brute-force oracles: the compatibility test
//! against full tuple expansion, `cg` against filtered partition meets, the
//! lattice enumeration against filtering, and witness chains against replay.

mod common;

use commutator_kit::catalog;
use commutator_kit::congruence::{cg, cg_with_provenance, con_lattice, principal, replay};
use commutator_kit::relations::{is_congruence, PairSet, Partition};

#[test]
fn compatibility_test_agrees_with_full_expansion_on_two_elements() {
    for a in catalog::all_binary_tables(2) {
        for p in common::all_partitions(2) {
            assert_eq!(
                is_congruence(&a, &p).unwrap(),
                common::is_congruence_oracle(&a, &p),
                "table {:?} partition {p}",
                a.ops[0].table
            );
        }
    }
}

#[test]
fn compatibility_test_agrees_with_full_expansion_on_three_elements() {
    let partitions = common::all_partitions(3);
    for a in catalog::all_binary_tables(3) {
        for p in &partitions {
            assert_eq!(
                is_congruence(&a, p).unwrap(),
                common::is_congruence_oracle(&a, p),
                "table {:?} partition {p}",
                a.ops[0].table
            );
        }
    }
}

#[test]
fn compatibility_test_agrees_on_the_named_algebras() {
    for (name, a) in common::named_corpus() {
        if a.size > 5 {
            continue;
        }
        for p in common::all_partitions(a.size) {
            assert_eq!(
                is_congruence(&a, &p).unwrap(),
                common::is_congruence_oracle(&a, &p),
                "{name}: {p}"
            );
        }
    }
}

#[test]
fn principal_congruences_match_the_filter_oracle() {
    let mut corpus = common::named_corpus();
    corpus.extend(common::random_corpus(40, 7150));
    for (name, a) in corpus {
        if a.size > 5 {
            continue;
        }
        for x in 0..a.size {
            for y in x + 1..a.size {
                let direct = principal(&a, x, y).unwrap();
                let filtered = common::least_congruence_containing(&a, &[(x, y)]);
                assert_eq!(direct, filtered, "{name}: Cg({x}, {y})");
            }
        }
    }
}

#[test]
fn generated_congruences_match_the_filter_oracle_on_pair_sets() {
    let mut corpus = common::named_corpus();
    corpus.extend(common::random_corpus(20, 2214));
    for (name, a) in corpus {
        if a.size > 5 {
            continue;
        }
        let n = a.size;
        let seeds: Vec<Vec<(usize, usize)>> = vec![
            vec![],
            vec![(0, n - 1)],
            vec![(0, 1), (1, n - 1)],
            (0..n - 1).map(|x| (x, x + 1)).collect(),
        ];
        for pairs in seeds {
            let seed = PairSet::from_pairs(n, pairs.iter().copied()).unwrap();
            let direct = cg(&a, &seed).unwrap();
            let filtered = common::least_congruence_containing(&a, &pairs);
            assert_eq!(direct, filtered, "{name}: Cg({pairs:?})");
        }
    }
}

#[test]
fn lattice_enumeration_matches_the_filter_oracle() {
    let mut corpus = common::named_corpus();
    corpus.extend(common::random_corpus(40, 40));
    for (name, a) in corpus {
        let direct = con_lattice(&a).unwrap();
        let mut filtered = common::congruences_by_filter(&a);
        filtered.sort_by(|p, q| {
            q.num_blocks()
                .cmp(&p.num_blocks())
                .then_with(|| p.as_reps().cmp(q.as_reps()))
        });
        assert_eq!(direct, filtered, "{name}");
    }
}

#[test]
fn known_lattice_sizes() {
    let sizes: Vec<(String, usize)> = common::named_corpus()
        .into_iter()
        .map(|(name, a)| (name, con_lattice(&a).unwrap().len()))
        .collect();
    let expect = |key: &str| sizes.iter().find(|(n, _)| n == key).unwrap().1;
    assert_eq!(expect("z2"), 2);
    assert_eq!(expect("z4"), 3);
    assert_eq!(expect("s3"), 3);
    assert_eq!(expect("semilattice2"), 2);
}

#[test]
fn provenance_partition_matches_plain_generation() {
    let mut corpus = common::named_corpus();
    corpus.extend(common::random_corpus(30, 99));
    for (name, a) in corpus {
        let n = a.size;
        let seed = PairSet::from_pairs(n, [(0, n - 1)]).unwrap();
        let plain = cg(&a, &seed).unwrap();
        let (partition, prov) = cg_with_provenance(&a, &seed).unwrap();
        assert_eq!(plain, partition, "{name}");
        assert_eq!(&plain, prov.partition(), "{name}");
    }
}

#[test]
fn every_generated_pair_has_a_replayable_chain() {
    let mut corpus = common::named_corpus();
    corpus.extend(common::random_corpus(30, 123));
    for (name, a) in corpus {
        let n = a.size;
        for pairs in [vec![(0, n - 1)], vec![(0, 1), (1, n - 1)]] {
            let seed = PairSet::from_pairs(n, pairs.iter().copied()).unwrap();
            let (_, prov) = cg_with_provenance(&a, &seed).unwrap();
            for x in 0..n {
                for y in 0..n {
                    if !prov.partition().related(x, y) {
                        assert!(prov.chain(x, y).is_err(), "{name}: ({x}, {y})");
                        continue;
                    }
                    let chain = prov.chain(x, y).unwrap();
                    assert_eq!(chain.endpoints, (x, y), "{name}");
                    replay(&a, &chain, &seed).unwrap_or_else(|e| {
                        panic!("{name}: chain for ({x}, {y}) does not replay: {e}")
                    });
                }
            }
        }
    }
}

#[test]
fn generation_is_stable_under_relabelling() {
    for (name, a) in common::random_corpus(20, 5150) {
        let n = a.size;
        let sigma: Vec<usize> = (0..n).rev().collect();
        let b = common::relabel(&a, &sigma);
        let p = principal(&a, 0, n - 1).unwrap();
        let q = principal(&b, sigma[0], sigma[n - 1]).unwrap();
        assert_eq!(common::relabel_partition(&p, &sigma), q, "{name}");
    }
}

#[test]
fn pentagon_lattice_congruences_include_the_bounds() {
    let n5 = catalog::n5_lattice();
    let con = con_lattice(&n5).unwrap();
    assert_eq!(con.len(), common::congruences_by_filter(&n5).len());
    assert!(con.contains(&Partition::zero(5).unwrap()));
    assert!(con.contains(&Partition::one(5).unwrap()));
}
