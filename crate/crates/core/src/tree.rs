//! Rooted weighted binary phylogenies stored as flat arenas.
//!
//! Every internal vertex has exactly two children, leaves carry the labels
//! `0..n`, and each non-root vertex stores the length of the edge to its
//! parent. Degenerate trees (a single leaf, or a root joining two leaves)
//! are valid everywhere.

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Length of the edge to the parent; 0.0 and unused at the root.
    pub branch_length: f64,
    /// Leaf label in `0..n_leaves`; `None` on internal vertices.
    pub leaf_label: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Phylogeny {
    nodes: Vec<Node>,
    root: NodeId,
    /// Node id of each leaf, indexed by label.
    leaves: Vec<NodeId>,
}

impl Phylogeny {
    /// Validates an arena and wires up the label -> node index.
    ///
    /// Requirements: exactly one parentless node (`root`), every internal
    /// vertex has two children, leaf labels form a bijection with `0..n`,
    /// branch lengths are finite and nonnegative. Zero-length edges are
    /// accepted; they arise only from subtree completion, never from tree
    /// generation.
    pub fn from_parts(nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("empty node arena".into()));
        }
        if root >= nodes.len() {
            return Err(Error::InvalidInput(format!("root id {root} out of bounds")));
        }
        if nodes[root].parent.is_some() {
            return Err(Error::InvalidInput("root must not have a parent".into()));
        }

        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![root];
        let mut n_leaves = 0usize;
        while let Some(v) = stack.pop() {
            if seen[v] {
                return Err(Error::InvalidInput(format!("node {v} reached twice")));
            }
            seen[v] = true;
            let node = &nodes[v];
            if v != root {
                if !node.branch_length.is_finite() || node.branch_length < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "branch length of node {v} must be finite and >= 0"
                    )));
                }
            }
            match (node.children.len(), node.leaf_label) {
                (0, Some(_)) => n_leaves += 1,
                (0, None) => {
                    return Err(Error::InvalidInput(format!("leaf {v} has no label")));
                }
                (2, None) => {}
                (2, Some(_)) => {
                    return Err(Error::InvalidInput(format!("internal node {v} has a leaf label")));
                }
                (c, _) => {
                    return Err(Error::InvalidInput(format!(
                        "node {v} has {c} children; phylogenies are binary"
                    )));
                }
            }
            for &c in &node.children {
                if c >= nodes.len() {
                    return Err(Error::InvalidInput(format!("child id {c} out of bounds")));
                }
                if nodes[c].parent != Some(v) {
                    return Err(Error::InvalidInput(format!(
                        "node {c} does not point back to parent {v}"
                    )));
                }
                stack.push(c);
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidInput("arena contains nodes unreachable from the root".into()));
        }

        let mut leaves = vec![usize::MAX; n_leaves];
        for (id, node) in nodes.iter().enumerate() {
            if let Some(label) = node.leaf_label {
                if label >= n_leaves {
                    return Err(Error::InvalidInput(format!(
                        "leaf label {label} out of range for {n_leaves} leaves"
                    )));
                }
                if leaves[label] != usize::MAX {
                    return Err(Error::InvalidInput(format!("duplicate leaf label {label}")));
                }
                leaves[label] = id;
            }
        }
        Ok(Phylogeny { nodes, root, leaves })
    }

    /// Complete binary tree with `h` levels above the leaves and every edge
    /// of length `weight`. Leaves are labeled left to right.
    pub fn balanced(h: u32, weight: f64) -> Self {
        let mut b = PhylogenyBuilder::new();
        let mut level: Vec<NodeId> = (0..1usize << h).map(|label| b.leaf(label)).collect();
        while level.len() > 1 {
            level = level
                .chunks(2)
                .map(|pair| b.internal(pair[0], pair[1], weight, weight))
                .collect();
        }
        b.finish(level[0]).expect("balanced construction is valid")
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn leaf_node(&self, label: usize) -> Option<NodeId> {
        self.leaves.get(label).copied()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Parent, children, root-distance bookkeeping.
    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn branch_length(&self, id: NodeId) -> f64 {
        self.nodes[id].branch_length
    }

    /// Vertices in preorder (parents before children).
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.nodes[v].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Vertices in postorder (children before parents).
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder();
        out.reverse();
        out
    }

    /// Number of edges between `v` and the root.
    pub fn depth(&self, v: NodeId) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.nodes[cur].parent {
            cur = p;
            d += 1;
        }
        d
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (mut a, mut b) = (u, v);
        let (mut da, mut db) = (self.depth(a), self.depth(b));
        while da > db {
            a = self.nodes[a].parent.unwrap();
            da -= 1;
        }
        while db > da {
            b = self.nodes[b].parent.unwrap();
            db -= 1;
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Sum of branch lengths along the path between any two vertices.
    pub fn path_length(&self, u: NodeId, v: NodeId) -> f64 {
        let anc = self.lca(u, v);
        let mut total = 0.0;
        let mut cur = u;
        while cur != anc {
            total += self.nodes[cur].branch_length;
            cur = self.nodes[cur].parent.unwrap();
        }
        cur = v;
        while cur != anc {
            total += self.nodes[cur].branch_length;
            cur = self.nodes[cur].parent.unwrap();
        }
        total
    }

    /// Vertices on the path from `u` to `v` inclusive, in path order.
    pub fn path_vertices(&self, u: NodeId, v: NodeId) -> Vec<NodeId> {
        let anc = self.lca(u, v);
        let mut up = Vec::new();
        let mut cur = u;
        while cur != anc {
            up.push(cur);
            cur = self.nodes[cur].parent.unwrap();
        }
        up.push(anc);
        let mut down = Vec::new();
        cur = v;
        while cur != anc {
            down.push(cur);
            cur = self.nodes[cur].parent.unwrap();
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Edges on the path between `u` and `v`, each keyed as (parent, child).
    pub fn path_edges(&self, u: NodeId, v: NodeId) -> Vec<(NodeId, NodeId)> {
        let verts = self.path_vertices(u, v);
        verts
            .windows(2)
            .map(|w| {
                if self.nodes[w[1]].parent == Some(w[0]) {
                    (w[0], w[1])
                } else {
                    (w[1], w[0])
                }
            })
            .collect()
    }

    /// Labels of the leaves in the subtree rooted at `v`, ascending.
    pub fn leaf_labels_below(&self, v: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            match self.nodes[x].leaf_label {
                Some(l) => out.push(l),
                None => stack.extend_from_slice(&self.nodes[x].children),
            }
        }
        out.sort_unstable();
        out
    }

    /// Smallest leaf label in the subtree of each vertex; used for canonical
    /// child ordering.
    pub fn min_label_below(&self) -> Vec<usize> {
        let mut min = vec![usize::MAX; self.nodes.len()];
        for v in self.postorder() {
            min[v] = match self.nodes[v].leaf_label {
                Some(l) => l,
                None => self.nodes[v].children.iter().map(|&c| min[c]).min().unwrap(),
            };
        }
        min
    }
}

/// Bottom-up construction: create leaves, join pairs, then `finish` at the
/// final join.
#[derive(Debug, Default)]
pub struct PhylogenyBuilder {
    nodes: Vec<Node>,
}

impl PhylogenyBuilder {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn leaf(&mut self, label: usize) -> NodeId {
        self.nodes.push(Node {
            parent: None,
            children: Vec::new(),
            branch_length: 0.0,
            leaf_label: Some(label),
        });
        self.nodes.len() - 1
    }

    /// Joins two parentless vertices under a new internal vertex with the
    /// given edge lengths.
    pub fn internal(&mut self, left: NodeId, right: NodeId, left_len: f64, right_len: f64) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: None,
            children: vec![left, right],
            branch_length: 0.0,
            leaf_label: None,
        });
        self.nodes[left].parent = Some(id);
        self.nodes[left].branch_length = left_len;
        self.nodes[right].parent = Some(id);
        self.nodes[right].branch_length = right_len;
        id
    }

    pub fn finish(self, root: NodeId) -> Result<Phylogeny> {
        Phylogeny::from_parts(self.nodes, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four-leaf tree: ((0,1),(2,3)) with pendant edges 0.1, 0.2, 0.3, 0.4
    /// and internal edges 0.5 (left) and 0.6 (right).
    fn sample_tree() -> Phylogeny {
        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(1);
        let l2 = b.leaf(2);
        let l3 = b.leaf(3);
        let left = b.internal(l0, l1, 0.1, 0.2);
        let right = b.internal(l2, l3, 0.3, 0.4);
        let root = b.internal(left, right, 0.5, 0.6);
        b.finish(root).unwrap()
    }

    #[test]
    fn builder_produces_valid_tree() {
        let t = sample_tree();
        assert_eq!(t.n_leaves(), 4);
        assert_eq!(t.len(), 7);
        assert_eq!(t.children(t.root()).len(), 2);
    }

    #[test]
    fn path_lengths_sum_branch_weights() {
        let t = sample_tree();
        let a = t.leaf_node(0).unwrap();
        let b = t.leaf_node(1).unwrap();
        let c = t.leaf_node(3).unwrap();
        assert!((t.path_length(a, b) - 0.3).abs() < 1e-15);
        assert!((t.path_length(a, c) - (0.1 + 0.5 + 0.6 + 0.4)).abs() < 1e-15);
        assert_eq!(t.path_length(a, a), 0.0);
        // vertex-to-vertex, not only leaf-to-leaf
        let left = t.parent(a).unwrap();
        assert!((t.path_length(left, c) - (0.5 + 0.6 + 0.4)).abs() < 1e-15);
    }

    #[test]
    fn path_vertices_and_edges_are_ordered() {
        let t = sample_tree();
        let a = t.leaf_node(0).unwrap();
        let c = t.leaf_node(2).unwrap();
        let verts = t.path_vertices(a, c);
        assert_eq!(verts.first(), Some(&a));
        assert_eq!(verts.last(), Some(&c));
        assert_eq!(verts.len(), 5);
        assert_eq!(t.path_edges(a, c).len(), 4);
    }

    #[test]
    fn degenerate_trees_are_accepted() {
        let mut b = PhylogenyBuilder::new();
        let l = b.leaf(0);
        let single = b.finish(l).unwrap();
        assert_eq!(single.n_leaves(), 1);
        assert!(single.is_leaf(single.root()));

        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(1);
        let r = b.internal(l0, l1, 0.4, 0.6);
        let two = b.finish(r).unwrap();
        assert_eq!(two.n_leaves(), 2);
        let (a, c) = (two.leaf_node(0).unwrap(), two.leaf_node(1).unwrap());
        assert!((two.path_length(a, c) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_unary_and_mislabeled_nodes() {
        // unary internal vertex
        let nodes = vec![
            Node { parent: None, children: vec![1], branch_length: 0.0, leaf_label: None },
            Node { parent: Some(0), children: vec![], branch_length: 1.0, leaf_label: Some(0) },
        ];
        assert!(Phylogeny::from_parts(nodes, 0).is_err());

        // duplicate labels
        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(0);
        let r = b.internal(l0, l1, 1.0, 1.0);
        assert!(b.finish(r).is_err());

        // negative branch length
        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(1);
        let r = b.internal(l0, l1, -0.5, 1.0);
        assert!(b.finish(r).is_err());
    }

    #[test]
    fn balanced_tree_has_uniform_depth() {
        let t = Phylogeny::balanced(3, 0.25);
        assert_eq!(t.n_leaves(), 8);
        for label in 0..8 {
            let v = t.leaf_node(label).unwrap();
            assert_eq!(t.depth(v), 3);
        }
        let a = t.leaf_node(0).unwrap();
        let b = t.leaf_node(7).unwrap();
        assert!((t.path_length(a, b) - 6.0 * 0.25).abs() < 1e-15);
    }

    #[test]
    fn leaf_labels_below_collects_subtree() {
        let t = sample_tree();
        let right = t.parent(t.leaf_node(2).unwrap()).unwrap();
        assert_eq!(t.leaf_labels_below(right), vec![2, 3]);
        assert_eq!(t.leaf_labels_below(t.root()), vec![0, 1, 2, 3]);
    }
}
