//! Topological restriction of a phylogeny to a vertex subset, and the
//! disjointness classification of pairs of rooted restricted subtrees.
//!
//! The restriction keeps the minimal spanning (Steiner) subtree of the
//! chosen vertices and contracts every degree-2 vertex that was not
//! explicitly kept; contracted edges carry the summed length of the host
//! path they replace. The result keeps host vertex ids, so junction points
//! of two subtrees are meaningful in the host.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::tree::{NodeId, Phylogeny};

#[derive(Debug, Clone)]
pub struct RestrictedSubtree {
    /// All host vertices of the spanning subtree, contracted ones included.
    steiner: BTreeSet<NodeId>,
    /// Surviving vertices with their incident restricted edges.
    adj: BTreeMap<NodeId, Vec<(NodeId, f64)>>,
    kept: BTreeSet<NodeId>,
    root: NodeId,
    /// Parent of each surviving vertex under the current rooting.
    parent: BTreeMap<NodeId, Option<NodeId>>,
}

/// Restricts `tree` to the minimal subtree spanning `keep`. Vertices in
/// `keep` always survive contraction; the root defaults to the surviving
/// vertex nearest the host root.
pub fn restrict(tree: &Phylogeny, keep: &[NodeId]) -> Result<RestrictedSubtree> {
    if keep.is_empty() {
        return Err(Error::InvalidInput("restriction to an empty vertex set".into()));
    }
    for &v in keep {
        if v >= tree.len() {
            return Err(Error::InvalidInput(format!("vertex {v} out of bounds")));
        }
    }
    let kept: BTreeSet<NodeId> = keep.iter().copied().collect();

    let mut anchor = *keep.first().unwrap();
    for &v in &kept {
        anchor = tree.lca(anchor, v);
    }
    let mut steiner = BTreeSet::new();
    for &v in &kept {
        steiner.extend(tree.path_vertices(v, anchor));
    }

    // Degree within the spanning subtree decides who survives contraction.
    let degree = |v: NodeId| -> usize {
        let mut d = 0;
        if let Some(p) = tree.parent(v) {
            if steiner.contains(&p) {
                d += 1;
            }
        }
        d + tree.children(v).iter().filter(|c| steiner.contains(c)).count()
    };
    let survivors: BTreeSet<NodeId> = steiner
        .iter()
        .copied()
        .filter(|&v| kept.contains(&v) || degree(v) >= 3)
        .collect();

    let steiner_neighbors = |v: NodeId| -> Vec<(NodeId, f64)> {
        let mut out = Vec::new();
        if let Some(p) = tree.parent(v) {
            if steiner.contains(&p) {
                out.push((p, tree.branch_length(v)));
            }
        }
        for &c in tree.children(v) {
            if steiner.contains(&c) {
                out.push((c, tree.branch_length(c)));
            }
        }
        out
    };

    let mut adj: BTreeMap<NodeId, Vec<(NodeId, f64)>> = BTreeMap::new();
    for &s in &survivors {
        let mut edges = Vec::new();
        for (first, first_len) in steiner_neighbors(s) {
            let (mut prev, mut cur, mut len) = (s, first, first_len);
            while !survivors.contains(&cur) {
                let (next, next_len) = steiner_neighbors(cur)
                    .into_iter()
                    .find(|&(u, _)| u != prev)
                    .expect("contracted vertex has exactly two spanning neighbors");
                prev = cur;
                cur = next;
                len += next_len;
            }
            edges.push((cur, len));
        }
        adj.insert(s, edges);
    }

    let root = survivors
        .iter()
        .copied()
        .min_by_key(|&v| (tree.depth(v), v))
        .expect("at least one kept vertex survives");
    let mut sub = RestrictedSubtree { steiner, adj, kept, root, parent: BTreeMap::new() };
    sub.reorient();
    Ok(sub)
}

impl RestrictedSubtree {
    fn reorient(&mut self) {
        self.parent.clear();
        self.parent.insert(self.root, None);
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            let p = self.parent[&v];
            for &(u, _) in &self.adj[&v] {
                if Some(u) != p {
                    self.parent.insert(u, Some(v));
                    queue.push_back(u);
                }
            }
        }
    }

    /// Re-designates the root; any surviving vertex qualifies, legality is
    /// judged separately.
    pub fn rooted_at(&self, v: NodeId) -> Result<Self> {
        if !self.adj.contains_key(&v) {
            return Err(Error::InvalidInput(format!(
                "vertex {v} is not in the restricted subtree"
            )));
        }
        let mut out = self.clone();
        out.root = v;
        out.reorient();
        Ok(out)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn kept(&self) -> &BTreeSet<NodeId> {
        &self.kept
    }

    /// Host vertices of the uncontracted spanning subtree.
    pub fn steiner_vertices(&self) -> &BTreeSet<NodeId> {
        &self.steiner
    }

    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn parent_of(&self, v: NodeId) -> Option<NodeId> {
        self.parent.get(&v).copied().flatten()
    }

    /// Children of `v` with restricted edge lengths, ordered by vertex id.
    pub fn children(&self, v: NodeId) -> Vec<(NodeId, f64)> {
        let p = self.parent.get(&v).copied().flatten();
        let mut kids: Vec<(NodeId, f64)> = self.adj[&v]
            .iter()
            .copied()
            .filter(|&(u, _)| Some(u) != p)
            .collect();
        kids.sort_by_key(|&(u, _)| u);
        kids
    }

    /// Vertices with no children under the current rooting. A single-vertex
    /// subtree consists of one leaf.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.adj
            .keys()
            .copied()
            .filter(|&v| self.children(v).is_empty())
            .collect()
    }

    /// Sum of restricted edge lengths between two surviving vertices.
    pub fn path_length(&self, u: NodeId, v: NodeId) -> Result<f64> {
        if !self.contains(u) || !self.contains(v) {
            return Err(Error::InvalidInput("path endpoints must survive restriction".into()));
        }
        let mut dist: BTreeMap<NodeId, f64> = BTreeMap::new();
        dist.insert(u, 0.0);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Ok(dist[&x]);
            }
            let dx = dist[&x];
            for &(y, len) in &self.adj[&x] {
                dist.entry(y).or_insert_with(|| {
                    queue.push_back(y);
                    dx + len
                });
            }
        }
        unreachable!("restricted subtree is connected")
    }

    /// A legal rooted subtree is a single vertex, or a full binary tree:
    /// root of degree 2, every other vertex of degree 1 or 3.
    pub fn is_legal(&self) -> bool {
        if self.adj.len() == 1 {
            return true;
        }
        if self.adj[&self.root].len() != 2 {
            return false;
        }
        self.adj
            .iter()
            .all(|(&v, edges)| v == self.root || matches!(edges.len(), 1 | 3))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubtreePairClassification {
    /// No host edge lies on leaf-to-leaf paths of both subtrees.
    pub edge_disjoint: bool,
    /// Some root choice for the host, outside both subtrees, orients both
    /// designated roots upward. Only edge-disjoint pairs can be dangling.
    pub dangling: bool,
    /// Where the connecting path meets each spanning subtree; `None` when
    /// the pair shares edges.
    pub junctions: Option<(NodeId, NodeId)>,
}

/// Classifies a pair of legal rooted restricted subtrees of `host`.
pub fn classify_subtree_pair(
    host: &Phylogeny,
    t1: &RestrictedSubtree,
    t2: &RestrictedSubtree,
) -> Result<SubtreePairClassification> {
    for (i, t) in [(1, t1), (2, t2)] {
        if !t.is_legal() {
            return Err(Error::InvalidInput(format!("subtree {i} is not a legal rooted subtree")));
        }
        if t.vertices().any(|v| v >= host.len()) {
            return Err(Error::InvalidInput(format!("subtree {i} references vertices outside the host")));
        }
    }

    let e1 = leaf_path_edges(host, t1);
    let e2 = leaf_path_edges(host, t2);
    if e1.intersection(&e2).next().is_some() {
        return Ok(SubtreePairClassification { edge_disjoint: false, dangling: false, junctions: None });
    }

    let entry1 = entry_map(host, t1.steiner_vertices());
    let entry2 = entry_map(host, t2.steiner_vertices());
    let w1 = entry1[t2.root()];
    let w2 = entry2[t1.root()];

    let in_either =
        |v: NodeId| t1.steiner_vertices().contains(&v) || t2.steiner_vertices().contains(&v);
    let consistent = |r1: NodeId, r2: NodeId| r1 == t1.root() && r2 == t2.root();

    let mut dangling = (0..host.len())
        .any(|v| !in_either(v) && consistent(entry1[v], entry2[v]));

    if !dangling {
        // Subdividing an edge that belongs to neither subtree also yields a
        // valid root choice. The side of the cut containing each subtree
        // decides which endpoint's entry point applies.
        let s1 = steiner_path_edges(host, t1);
        let s2 = steiner_path_edges(host, t2);
        dangling = (0..host.len()).any(|child| {
            if host.parent(child).is_none() || s1.contains(&child) || s2.contains(&child) {
                return false;
            }
            let parent = host.parent(child).unwrap();
            let pick = |t: &RestrictedSubtree, entry: &[NodeId]| {
                if is_ancestor_or_self(host, child, t.root()) {
                    entry[child]
                } else {
                    entry[parent]
                }
            };
            consistent(pick(t1, &entry1), pick(t2, &entry2))
        });
    }

    Ok(SubtreePairClassification { edge_disjoint: true, dangling, junctions: Some((w1, w2)) })
}

/// Host edges lying on a path between two leaves of the subtree, keyed by
/// child endpoint.
fn leaf_path_edges(host: &Phylogeny, t: &RestrictedSubtree) -> BTreeSet<NodeId> {
    let leaves = t.leaves();
    let mut edges = BTreeSet::new();
    for (i, &a) in leaves.iter().enumerate() {
        for &b in &leaves[i + 1..] {
            for (p, c) in host.path_edges(a, b) {
                debug_assert_eq!(host.parent(c), Some(p));
                edges.insert(c);
            }
        }
    }
    edges
}

/// Host edges of the full spanning subtree, keyed by child endpoint.
fn steiner_path_edges(host: &Phylogeny, t: &RestrictedSubtree) -> BTreeSet<NodeId> {
    t.steiner_vertices()
        .iter()
        .copied()
        .filter(|&v| {
            host.parent(v)
                .is_some_and(|p| t.steiner_vertices().contains(&p))
        })
        .collect()
}

/// For every host vertex, the first vertex of `set` met on the path toward
/// `set`. Members map to themselves.
fn entry_map(host: &Phylogeny, set: &BTreeSet<NodeId>) -> Vec<NodeId> {
    let mut entry = vec![usize::MAX; host.len()];
    let mut queue = VecDeque::new();
    for &v in set {
        entry[v] = v;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        let mut neighbors: Vec<NodeId> = host.children(v).to_vec();
        if let Some(p) = host.parent(v) {
            neighbors.push(p);
        }
        for u in neighbors {
            if entry[u] == usize::MAX {
                entry[u] = if set.contains(&u) { u } else { entry[v] };
                queue.push_back(u);
            }
        }
    }
    entry
}

fn is_ancestor_or_self(host: &Phylogeny, anc: NodeId, mut v: NodeId) -> bool {
    loop {
        if v == anc {
            return true;
        }
        match host.parent(v) {
            Some(p) => v = p,
            None => return false,
        }
    }
}
