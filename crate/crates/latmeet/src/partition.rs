//! Set partitions and disjoint-set machinery for the equivalence-relation
//! view of knowledge: near-linear intersection and equality of partitions.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("blocks do not form a partition: {0}")]
    NotAPartition(String),
    #[error("operands cover different ground sets ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

/// Union-find over `0..n` with path compression and union by rank.
/// `finds`/`unions` count calls (unions count their two internal finds too),
/// which is what the scaling checks measure.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
    pub finds: u64,
    pub unions: u64,
}

impl DisjointSet {
    pub fn new(n: usize) -> DisjointSet {
        assert!(n <= u32::MAX as usize, "indices are packed into 32 bits");
        DisjointSet {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            finds: 0,
            unions: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, i: usize) -> usize {
        self.finds += 1;
        let mut root = i as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // second pass: point the whole path at the root
        let mut cur = i as u32;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root as usize
    }

    /// Merge the classes of `a` and `b`; false if already together.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        self.unions += 1;
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (ra, rb) = if self.rank[ra] < self.rank[rb] { (rb, ra) } else { (ra, rb) };
        self.parent[rb] = ra as u32;
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] += 1;
        }
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of classes.
    pub fn class_count(&mut self) -> usize {
        (0..self.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Coarsest common refinement of two disjoint sets over the same ground set:
/// classes are the nonempty pairwise block intersections. Each element is
/// keyed by its pair of representatives (packed into one 64-bit word); the
/// last element seen with a given pair becomes the class representative, and
/// the resulting pointer array is idempotent, so it already is a valid
/// one-level forest.
pub fn intersection(r1: &mut DisjointSet, r2: &mut DisjointSet) -> Result<DisjointSet, PartitionError> {
    if r1.len() != r2.len() {
        return Err(PartitionError::SizeMismatch(r1.len(), r2.len()));
    }
    let n = r1.len();
    let mut pair_rep: HashMap<u64, u32> = HashMap::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    for i in 0..n {
        let key = (r1.find(i) as u64) << 32 | r2.find(i) as u64;
        keys.push(key);
        pair_rep.insert(key, i as u32);
    }
    let mut out = DisjointSet::new(n);
    for i in 0..n {
        let rep = pair_rep[&keys[i]];
        out.parent[i] = rep;
        if rep != i as u32 {
            out.rank[rep as usize] = 1;
        }
    }
    Ok(out)
}

/// Canonical pointer array: every element points at the least element of its
/// class, so `canon[i] <= i` and two disjoint sets describe the same
/// partition iff their canonical arrays are equal.
pub fn canonical(r: &mut DisjointSet) -> Vec<usize> {
    let n = r.len();
    let mut least = vec![u32::MAX; n];
    for i in 0..n {
        let root = r.find(i);
        if least[root] == u32::MAX {
            least[root] = i as u32; // ascending scan: first hit is the min
        }
    }
    (0..n).map(|i| least[r.find(i)] as usize).collect()
}

/// Partition equality via canonical arrays.
pub fn equal(r1: &mut DisjointSet, r2: &mut DisjointSet) -> Result<bool, PartitionError> {
    if r1.len() != r2.len() {
        return Err(PartitionError::SizeMismatch(r1.len(), r2.len()));
    }
    Ok(canonical(r1) == canonical(r2))
}

/// A validated partition of `0..n`, normalized: blocks ordered by their
/// least element, elements ascending inside each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Partition, PartitionError> {
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(PartitionError::NotAPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= n {
                    return Err(PartitionError::NotAPartition(format!(
                        "element {x} out of range for n = {n}"
                    )));
                }
                if seen[x] {
                    return Err(PartitionError::NotAPartition(format!("element {x} repeated")));
                }
                seen[x] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(PartitionError::NotAPartition(format!(
                "{covered} of {n} elements covered"
            )));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }
}

pub fn partition_to_ds(p: &Partition) -> DisjointSet {
    let mut ds = DisjointSet::new(p.n());
    for block in p.blocks() {
        for pair in block.windows(2) {
            ds.union(pair[0], pair[1]);
        }
    }
    ds
}

pub fn ds_to_partition(ds: &mut DisjointSet) -> Partition {
    let n = ds.len();
    let canon = canonical(ds);
    let mut by_rep: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        by_rep.entry(canon[i]).or_default().push(i);
    }
    let mut blocks: Vec<Vec<usize>> = by_rep.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    Partition { n, blocks }
}
