/// An equivalence relation on `0..n`, stored as blocks.
///
/// Blocks are numbered in order of their smallest member and each block lists
/// its members in increasing order, so two equal relations are equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups `0..n` by the value of `key`.
    pub fn from_key<K: Eq + std::hash::Hash>(n: usize, mut key: impl FnMut(usize) -> K) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut block_of = Vec::with_capacity(n);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            let next = blocks.len();
            let id = *ids.entry(key(s)).or_insert(next);
            if id == next {
                blocks.push(Vec::new());
            }
            blocks[id].push(s);
            block_of.push(id);
        }
        Partition { block_of, blocks }
    }

    /// Builds a partition from explicit blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut owner = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &s in b {
                if s >= n || owner[s] != usize::MAX {
                    return None;
                }
                owner[s] = i;
            }
        }
        if owner.iter().any(|&o| o == usize::MAX) {
            return None;
        }
        Some(Self::from_key(n, |s| owner[s]))
    }

    pub fn universal(n: usize) -> Self {
        Self::from_key(n, |_| ())
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_key(n, |s| s)
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_index(&self, s: usize) -> usize {
        self.block_of[s]
    }

    /// Members of the block containing `s`.
    pub fn block(&self, s: usize) -> &[usize] {
        &self.blocks[self.block_of[s]]
    }

    pub fn related(&self, s: usize, w: usize) -> bool {
        self.block_of[s] == self.block_of[w]
    }

    /// The coarsest common refinement of `self` and `other`.
    pub fn intersect(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len(), "partitions over different sets");
        Self::from_key(self.len(), |s| (self.block_of[s], other.block_of[s]))
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&s| other.related(b[0], s)))
    }

    /// The relation restricted to `kept` (old indices, increasing), renumbered `0..kept.len()`.
    pub fn restrict(&self, kept: &[usize]) -> Partition {
        Self::from_key(kept.len(), |i| self.block_of[kept[i]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_are_canonical() {
        let p = Partition::from_blocks(4, &[vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p, Partition::from_key(4, |s| s % 2));
    }

    #[test]
    fn bad_blocks_are_rejected() {
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_none());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_none());
    }

    #[test]
    fn intersection_and_refinement() {
        let p = Partition::from_key(6, |s| s % 2);
        let q = Partition::from_key(6, |s| s / 3);
        let r = p.intersect(&q);
        assert_eq!(r.num_blocks(), 4);
        assert!(r.refines(&p) && r.refines(&q));
        assert!(!p.refines(&q));
        assert!(Partition::discrete(6).refines(&r));
        assert!(r.refines(&Partition::universal(6)));
    }

    #[test]
    fn restriction_renumbers() {
        let p = Partition::from_key(5, |s| s % 2);
        let r = p.restrict(&[1, 2, 3]);
        assert_eq!(r.blocks(), &[vec![0, 2], vec![1]]);
    }
}
