use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Binary Huffman code over a vocabulary, as used by the hierarchical
/// softmax. Internal nodes are numbered `0..len - 1`, the root last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuffmanTree {
    codes: Vec<Vec<u8>>,
    /// Internal nodes from the root down to the leaf's parent.
    paths: Vec<Vec<u32>>,
}

impl HuffmanTree {
    /// Builds the tree from word counts. Equal counts are merged in index
    /// order, so the tree is deterministic.
    pub fn build(counts: &[u64]) -> Self {
        let n = counts.len();
        if n <= 1 {
            return HuffmanTree {
                codes: vec![Vec::new(); n],
                paths: vec![Vec::new(); n],
            };
        }

        // Node ids: leaves 0..n, internal nodes n..2n-1.
        let mut parent = vec![0usize; 2 * n - 1];
        let mut bit = vec![0u8; 2 * n - 1];
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| Reverse((c, i)))
            .collect();
        let mut next = n;
        while heap.len() > 1 {
            let Reverse((c0, a)) = heap.pop().expect("two nodes");
            let Reverse((c1, b)) = heap.pop().expect("two nodes");
            parent[a] = next;
            parent[b] = next;
            bit[a] = 0;
            bit[b] = 1;
            heap.push(Reverse((c0 + c1, next)));
            next += 1;
        }
        let root = 2 * n - 2;

        let mut codes = Vec::with_capacity(n);
        let mut paths = Vec::with_capacity(n);
        for leaf in 0..n {
            let mut code = Vec::new();
            let mut path = Vec::new();
            let mut node = leaf;
            while node != root {
                code.push(bit[node]);
                node = parent[node];
                path.push((node - n) as u32);
            }
            code.reverse();
            path.reverse();
            codes.push(code);
            paths.push(path);
        }
        HuffmanTree { codes, paths }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn internal_nodes(&self) -> usize {
        self.codes.len().saturating_sub(1)
    }

    /// Code bits of a word, root first.
    pub fn code(&self, word: usize) -> &[u8] {
        &self.codes[word]
    }

    /// Internal nodes visited from the root to `word`.
    pub fn path(&self, word: usize) -> &[u32] {
        &self.paths[word]
    }
}
