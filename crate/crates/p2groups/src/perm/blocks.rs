use serde::Serialize;

use super::Permutation;

/// A partition of the points into blocks, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockSystem {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut block_of = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        BlockSystem { blocks, block_of }
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            blocks[l].push(x);
        }
        blocks.retain(|b| !b.is_empty());
        Self::from_blocks(blocks)
    }

    /// Residue classes mod `p` on `p^2` points: blocks `{a + b p : b}`.
    pub fn standard(p: usize) -> Self {
        Self::from_blocks((0..p).map(|a| (0..p).map(|b| a + b * p).collect()).collect())
    }

    /// Blocks `{a + b p : a}` for each `b`.
    pub fn rows(p: usize) -> Self {
        Self::from_blocks((0..p).map(|b| (0..p).map(|a| a + b * p).collect()).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn degree(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        self.blocks.iter().all(|b| {
            let t = self.block_of[g.apply(b[0])];
            b.iter().all(|&x| self.block_of[g.apply(x)] == t)
        })
    }

    /// Action of `g` on block indices, if `g` preserves the system.
    pub fn induced(&self, g: &Permutation) -> Option<Permutation> {
        if !self.is_preserved_by(g) {
            return None;
        }
        let img: Vec<usize> = self
            .blocks
            .iter()
            .map(|b| self.block_of[g.apply(b[0])])
            .collect();
        Permutation::from_images(img).ok()
    }

    /// Image of the system under `g`.
    pub fn image(&self, g: &Permutation) -> BlockSystem {
        Self::from_blocks(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&x| g.apply(x)).collect())
                .collect(),
        )
    }

    /// Two systems are transverse when every block of one meets every block
    /// of the other in exactly one point.
    pub fn is_transverse_to(&self, other: &BlockSystem) -> bool {
        self.blocks.iter().all(|b| {
            let mut seen = vec![false; other.num_blocks()];
            b.iter().all(|&x| !std::mem::replace(&mut seen[other.block_of(x)], true))
        }) && self.num_blocks() == other.blocks[0].len()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Finest partition invariant under `gens` in which all of `seed` lie together.
pub(crate) fn minimal_partition(degree: usize, gens: &[Permutation], seed: &[usize]) -> Vec<usize> {
    let mut uf = UnionFind::new(degree);
    let mut queue = Vec::new();
    for w in seed.windows(2) {
        if uf.union(w[0], w[1]) {
            queue.push((w[0], w[1]));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for g in gens {
            let (x, y) = (g.apply(a), g.apply(b));
            if uf.union(x, y) {
                queue.push((x, y));
            }
        }
    }
    let mut label = vec![usize::MAX; degree];
    let mut next = 0;
    let mut out = vec![0; degree];
    for x in 0..degree {
        let r = uf.find(x);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[x] = label[r];
    }
    out
}
