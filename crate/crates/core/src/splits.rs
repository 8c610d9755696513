//! Leaf bipartitions of the unrooted view of a phylogeny, used for topology
//! comparison. A split is stored canonically as the side that does not
//! contain leaf 0.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::tree::Phylogeny;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split(Vec<usize>);

impl Split {
    /// Canonicalizes one side of a bipartition of `0..n`.
    pub fn new(mut side: Vec<usize>, n: usize) -> Self {
        side.sort_unstable();
        side.dedup();
        if side.first() == Some(&0) {
            let inside: BTreeSet<usize> = side.into_iter().collect();
            Split((0..n).filter(|l| !inside.contains(l)).collect())
        } else {
            Split(side)
        }
    }

    pub fn side(&self) -> &[usize] {
        &self.0
    }
}

/// Every edge of the unrooted view keyed by its split, with the edge length
/// as value. The two edges at the root merge into one unrooted edge whose
/// length is their sum. Pendant edges are included.
pub fn unrooted_edge_weights(tree: &Phylogeny) -> BTreeMap<Split, f64> {
    let n = tree.n_leaves();
    let mut map: BTreeMap<Split, f64> = BTreeMap::new();
    for v in tree.preorder() {
        if v == tree.root() {
            continue;
        }
        let split = Split::new(tree.leaf_labels_below(v), n);
        *map.entry(split).or_insert(0.0) += tree.branch_length(v);
    }
    map
}

/// Splits cut by internal edges of the unrooted view (both sides of size
/// at least 2). Trees on three or fewer leaves have none.
pub fn nontrivial_splits(tree: &Phylogeny) -> BTreeSet<Split> {
    let n = tree.n_leaves();
    unrooted_edge_weights(tree)
        .into_keys()
        .filter(|s| s.side().len() >= 2 && s.side().len() <= n.saturating_sub(2))
        .collect()
}

/// Topological equality of the unrooted views. Degenerate trees (n <= 3
/// leaves of matching label sets) compare equal.
pub fn unrooted_equal(a: &Phylogeny, b: &Phylogeny) -> Result<bool> {
    if a.n_leaves() != b.n_leaves() {
        return Err(Error::InvalidInput(format!(
            "leaf sets differ: {} vs {} leaves",
            a.n_leaves(),
            b.n_leaves()
        )));
    }
    Ok(nontrivial_splits(a) == nontrivial_splits(b))
}

/// Robinson-Foulds distance: size of the symmetric difference of the
/// nontrivial split sets.
pub fn robinson_foulds(a: &Phylogeny, b: &Phylogeny) -> Result<usize> {
    if a.n_leaves() != b.n_leaves() {
        return Err(Error::InvalidInput(format!(
            "leaf sets differ: {} vs {} leaves",
            a.n_leaves(),
            b.n_leaves()
        )));
    }
    let sa = nontrivial_splits(a);
    let sb = nontrivial_splits(b);
    let shared = sa.intersection(&sb).count();
    Ok(sa.len() + sb.len() - 2 * shared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::PhylogenyBuilder;

    fn quartet(split_left: [usize; 2], split_right: [usize; 2]) -> Phylogeny {
        let mut b = PhylogenyBuilder::new();
        let a0 = b.leaf(split_left[0]);
        let a1 = b.leaf(split_left[1]);
        let c0 = b.leaf(split_right[0]);
        let c1 = b.leaf(split_right[1]);
        let l = b.internal(a0, a1, 0.1, 0.1);
        let r = b.internal(c0, c1, 0.1, 0.1);
        let root = b.internal(l, r, 0.2, 0.2);
        b.finish(root).unwrap()
    }

    #[test]
    fn split_canonical_side_excludes_leaf_zero() {
        assert_eq!(Split::new(vec![2, 1], 4).side(), &[1, 2]);
        assert_eq!(Split::new(vec![0, 1], 4).side(), &[2, 3]);
    }

    #[test]
    fn quartet_topologies_compare_correctly() {
        let ab = quartet([0, 1], [2, 3]);
        let ab2 = quartet([2, 3], [0, 1]);
        let ac = quartet([0, 2], [1, 3]);
        assert!(unrooted_equal(&ab, &ab2).unwrap());
        assert!(!unrooted_equal(&ab, &ac).unwrap());
        assert_eq!(robinson_foulds(&ab, &ab2).unwrap(), 0);
        assert_eq!(robinson_foulds(&ab, &ac).unwrap(), 2);
    }

    #[test]
    fn rerooting_does_not_change_the_unrooted_view() {
        // ((0,1),(2,3)) vs (0,(1,(2,3))): same unrooted quartet.
        let a = quartet([0, 1], [2, 3]);
        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(1);
        let l2 = b.leaf(2);
        let l3 = b.leaf(3);
        let cd = b.internal(l2, l3, 0.1, 0.1);
        let bcd = b.internal(l1, cd, 0.1, 0.4);
        let root = b.internal(l0, bcd, 0.05, 0.05);
        let rerooted = b.finish(root).unwrap();
        assert!(unrooted_equal(&a, &rerooted).unwrap());
    }

    #[test]
    fn degenerate_trees_equal_iff_leaf_sets_match() {
        let mut b = PhylogenyBuilder::new();
        let l0 = b.leaf(0);
        let l1 = b.leaf(1);
        let r = b.internal(l0, l1, 1.0, 2.0);
        let t2 = b.finish(r).unwrap();

        let mut b = PhylogenyBuilder::new();
        let l1 = b.leaf(1);
        let l0 = b.leaf(0);
        let r = b.internal(l1, l0, 5.0, 5.0);
        let t2b = b.finish(r).unwrap();
        assert!(unrooted_equal(&t2, &t2b).unwrap());

        let mut b = PhylogenyBuilder::new();
        let l = b.leaf(0);
        let t1 = b.finish(l).unwrap();
        assert!(unrooted_equal(&t2, &t1).is_err());
    }

    #[test]
    fn root_edges_merge_in_weight_map() {
        let t = quartet([0, 1], [2, 3]);
        let w = unrooted_edge_weights(&t);
        // pendant edges + one internal edge
        assert_eq!(w.len(), 5);
        let internal = Split::new(vec![2, 3], 4);
        assert!((w[&internal] - 0.4).abs() < 1e-15);
    }
}
