//! Per-sentence dependency trees and the distance, neighborhood and
//! ancestor queries used by date extraction and negation detection.
//!
//! Nodes are the 1-based token indices of one sentence. The directed view
//! follows CoNLL-U head → dependent edges; the undirected view is the same
//! edge set with direction dropped.

use std::collections::VecDeque;

use crate::corpus::Token;
use crate::error::{Error, Result};

/// Checks that `tokens` form a single-rooted dependency tree.
pub fn validate_tree(tokens: &[Token]) -> Result<(), String> {
    let n = tokens.len();
    let mut roots = 0;
    for (pos, t) in tokens.iter().enumerate() {
        if t.index != pos + 1 {
            return Err(format!(
                "token at position {} has index {}",
                pos + 1,
                t.index
            ));
        }
        if t.head > n {
            return Err(format!(
                "token {} has head {} outside 0..={n}",
                t.index, t.head
            ));
        }
        if t.head == t.index {
            return Err(format!("token {} is its own head", t.index));
        }
        if t.head == 0 {
            roots += 1;
        }
    }
    if n > 0 && roots != 1 {
        return Err(format!("expected exactly one root, found {roots}"));
    }
    // Every chain of heads must reach the root within n steps.
    for t in tokens {
        let mut current = t.index;
        let mut steps = 0;
        while current != 0 {
            current = tokens[current - 1].head;
            steps += 1;
            if steps > n {
                return Err(format!("cycle through token {}", t.index));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepGraph {
    /// `heads[i - 1]` is the head of token `i`; 0 marks the root.
    heads: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl DepGraph {
    /// Builds the graph for one sentence: one edge per non-root token, from
    /// its head to it.
    pub fn build(tokens: &[Token]) -> Result<Self> {
        validate_tree(tokens).map_err(|message| Error::Structure {
            sentence: 0,
            message,
        })?;
        let heads: Vec<usize> = tokens.iter().map(|t| t.head).collect();
        let mut children = vec![Vec::new(); heads.len()];
        for (i, &h) in heads.iter().enumerate() {
            if h > 0 {
                children[h - 1].push(i + 1);
            }
        }
        Ok(DepGraph { heads, children })
    }

    pub fn node_count(&self) -> usize {
        self.heads.len()
    }

    pub fn contains(&self, node: usize) -> bool {
        node >= 1 && node <= self.heads.len()
    }

    fn check(&self, node: usize) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::TokenNotInGraph(node))
        }
    }

    /// Directed `(head, dependent)` edges.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.heads
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(i, &h)| (h, i + 1))
    }

    pub fn head(&self, node: usize) -> Result<Option<usize>> {
        self.check(node)?;
        let h = self.heads[node - 1];
        Ok((h > 0).then_some(h))
    }

    pub fn children(&self, node: usize) -> Result<&[usize]> {
        self.check(node)?;
        Ok(&self.children[node - 1])
    }

    fn adjacent(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        let head = self.heads[node - 1];
        (head > 0)
            .then_some(head)
            .into_iter()
            .chain(self.children[node - 1].iter().copied())
    }

    /// Tokens adjacent to `node` in the undirected view, ascending.
    pub fn neighbors(&self, node: usize) -> Result<Vec<usize>> {
        self.check(node)?;
        let mut out: Vec<usize> = self.adjacent(node).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Nodes with a directed path to `node`; on a tree, its ancestors from
    /// the head up to the root.
    pub fn predecessors(&self, node: usize) -> Result<Vec<usize>> {
        self.check(node)?;
        let mut out = Vec::new();
        let mut current = self.heads[node - 1];
        while current != 0 {
            out.push(current);
            current = self.heads[current - 1];
        }
        Ok(out)
    }

    /// Undirected shortest-path lengths from `source` to every node
    /// (index `i - 1` holds the distance to token `i`).
    pub fn distances_from(&self, source: usize) -> Result<Vec<usize>> {
        self.check(source)?;
        let mut dist = vec![usize::MAX; self.heads.len()];
        let mut queue = VecDeque::new();
        dist[source - 1] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u - 1] + 1;
            for v in self.adjacent(u) {
                if dist[v - 1] == usize::MAX {
                    dist[v - 1] = next;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Number of edges on the shortest undirected path between two tokens.
    pub fn dependency_distance(&self, source: usize, target: usize) -> Result<usize> {
        self.check(target)?;
        Ok(self.distances_from(source)?[target - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(heads: &[usize]) -> Vec<Token> {
        heads
            .iter()
            .enumerate()
            .map(|(i, &h)| {
                Token::new(
                    i + 1,
                    format!("w{}", i + 1),
                    format!("w{}", i + 1),
                    h,
                    "dep",
                )
            })
            .collect()
    }

    #[test]
    fn single_token() {
        let g = DepGraph::build(&tree(&[0])).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edges().count(), 0);
        assert!(g.neighbors(1).unwrap().is_empty());
        assert!(g.predecessors(1).unwrap().is_empty());
        assert_eq!(g.dependency_distance(1, 1).unwrap(), 0);
    }

    #[test]
    fn two_roots_rejected() {
        assert!(DepGraph::build(&tree(&[0, 0])).is_err());
    }

    #[test]
    fn cycle_rejected() {
        // 1 is root; 2 -> 3 -> 2.
        assert!(DepGraph::build(&tree(&[0, 3, 2])).is_err());
    }

    #[test]
    fn leaf_neighbors_are_its_head() {
        let g = DepGraph::build(&tree(&[0, 1, 2, 2])).unwrap();
        assert_eq!(g.neighbors(4).unwrap(), vec![2]);
        assert_eq!(g.neighbors(2).unwrap(), vec![1, 3, 4]);
    }

    #[test]
    fn predecessors_walk_to_root() {
        let g = DepGraph::build(&tree(&[0, 1, 2, 2])).unwrap();
        assert_eq!(g.predecessors(4).unwrap(), vec![2, 1]);
        assert!(g.predecessors(1).unwrap().is_empty());
    }

    #[test]
    fn distances_through_common_ancestor() {
        let g = DepGraph::build(&tree(&[0, 1, 2, 2, 1])).unwrap();
        assert_eq!(g.dependency_distance(3, 5).unwrap(), 3);
        assert_eq!(g.dependency_distance(3, 4).unwrap(), 2);
        assert_eq!(g.edges().count(), 4);
    }

    #[test]
    fn unknown_token_errors() {
        let g = DepGraph::build(&tree(&[0, 1])).unwrap();
        assert!(matches!(g.neighbors(3), Err(Error::TokenNotInGraph(3))));
        assert!(matches!(
            g.dependency_distance(1, 0),
            Err(Error::TokenNotInGraph(0))
        ));
        assert!(g.predecessors(9).is_err());
    }
}
