//! Minimal union-find used by partition joins and congruence closure.

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        // Path halving: every other node on the walk is re-pointed at its
        // grandparent, which keeps trees shallow without a second pass.
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `x` and `y`. Returns false if they already
    /// coincided.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        true
    }

    /// Least-representative array: entry `x` is the smallest element sharing
    /// a class with `x`.
    pub(crate) fn canonical_reps(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut least = vec![usize::MAX; n];
        let mut rep = vec![0; n];
        for (x, slot) in rep.iter_mut().enumerate() {
            let r = self.find(x);
            if least[r] == usize::MAX {
                least[r] = x; // ascending scan, so the first hit is the least
            }
            *slot = least[r];
        }
        rep
    }
}
