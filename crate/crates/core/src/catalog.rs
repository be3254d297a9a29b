//! A small stock of concrete algebras: cyclic groups, the symmetric group
//! on three letters, the two-element semilattice, the pentagon lattice, and
//! seeded random groupoids. Handy for tests, docs, and quick experiments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAlgebra, Operation};

/// The cyclic group of order `n` as a groupoid `(Z_n, +)`.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    assert!(n >= 1, "a group needs at least one element");
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push((i + j) % n);
        }
    }
    FiniteAlgebra::new(n, vec![Operation::new("+", 2, table)])
        .expect("cyclic group table is valid")
}

/// The two-element meet semilattice `({0, 1}, min)`.
pub fn two_element_semilattice() -> FiniteAlgebra {
    FiniteAlgebra::new(2, vec![Operation::new("meet", 2, vec![0, 0, 0, 1])])
        .expect("semilattice table is valid")
}

/// The symmetric group on `{0, 1, 2}` as a groupoid. Elements are the six
/// permutations in lexicographic order of their one-line notation, so the
/// even permutations (the alternating subgroup) sit at indices 0, 3, 4.
pub fn symmetric_group_s3() -> FiniteAlgebra {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let mut table = Vec::with_capacity(36);
    for p in &perms {
        for q in &perms {
            // Composition acts left-to-right on points: (p * q)(x) = p[q[x]].
            let composed = [p[q[0]], p[q[1]], p[q[2]]];
            table.push(index_of(&composed));
        }
    }
    FiniteAlgebra::new(6, vec![Operation::new("*", 2, table)])
        .expect("composition table is valid")
}

/// Indices of the even permutations in `symmetric_group_s3`.
pub fn s3_even_elements() -> Vec<usize> {
    vec![0, 3, 4]
}

/// The pentagon: the five-element nonmodular lattice with chains
/// `0 < 1 < 2 < 4` and `0 < 3 < 4`, as an algebra with meet and join.
pub fn n5_lattice() -> FiniteAlgebra {
    let below: [&[usize]; 5] = [&[0], &[0, 1], &[0, 1, 2], &[0, 3], &[0, 1, 2, 3, 4]];
    let le = |x: usize, y: usize| below[y].contains(&x);
    let mut meet = Vec::with_capacity(25);
    let mut join = Vec::with_capacity(25);
    for x in 0..5 {
        for y in 0..5 {
            let glb = (0..5)
                .filter(|&z| le(z, x) && le(z, y))
                .max_by_key(|&z| below[z].len())
                .unwrap();
            let lub = (0..5)
                .filter(|&z| le(x, z) && le(y, z))
                .min_by_key(|&z| below[z].len())
                .unwrap();
            meet.push(glb);
            join.push(lub);
        }
    }
    FiniteAlgebra::new(
        5,
        vec![
            Operation::new("meet", 2, meet),
            Operation::new("join", 2, join),
        ],
    )
    .expect("lattice tables are valid")
}

/// A groupoid with one uniformly random binary operation, reproducible from
/// the seed.
pub fn random_groupoid(n: usize, seed: u64) -> FiniteAlgebra {
    assert!(n >= 1, "universe must be nonempty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..n * n).map(|_| rng.gen_range(0..n)).collect();
    FiniteAlgebra::new(n, vec![Operation::new("f", 2, table)])
        .expect("random table is valid by construction")
}

/// Every groupoid on `n` elements, one binary operation, in table order.
/// There are `n^(n^2)` of them; meant for `n <= 3`.
pub fn all_binary_tables(n: usize) -> impl Iterator<Item = FiniteAlgebra> {
    assert!((1..=3).contains(&n), "enumeration is meant for n in 1..=3");
    let cells = n * n;
    let count = n.pow(cells as u32);
    (0..count).map(move |code| {
        let mut table = vec![0; cells];
        let mut c = code;
        for slot in (0..cells).rev() {
            table[slot] = c % n;
            c /= n;
        }
        FiniteAlgebra::new(n, vec![Operation::new("f", 2, table)])
            .expect("enumerated table is valid")
    })
}
