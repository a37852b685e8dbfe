//! Canonical minimum spanning trees and the graphic-matroid rank function.
//!
//! The follower prefers blue edges to red edges of equal weight. We realize
//! this as Kruskal's algorithm with the edge order (weight ascending, blue
//! before red, input index ascending); the resulting tree is lexicographically
//! minimal under (total weight, -blue count), and the final index tie-break
//! makes the edge set itself deterministic.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::Zero;

use crate::dsu::UnionFind;
use crate::instance::{PriceAssignment, Rat, StackInstance};

/// Reference to an edge of an instance by color and position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeRef {
    Red(usize),
    Blue(usize),
}

impl EdgeRef {
    pub fn endpoints(&self, inst: &StackInstance) -> (usize, usize) {
        match *self {
            EdgeRef::Red(i) => {
                let e = &inst.red_edges()[i];
                (e.u, e.v)
            }
            EdgeRef::Blue(i) => {
                let e = &inst.blue_edges()[i];
                (e.u, e.v)
            }
        }
    }
}

/// A canonical minimum spanning tree together with its revenue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MstResult {
    pub tree_edges: Vec<EdgeRef>,
    pub total_weight: Rat,
    pub revenue: Rat,
    pub blue_ids: BTreeSet<usize>,
}

/// Kruskal with the blue-over-red tie-break. Unpriced blue edges and loops
/// never enter the tree. The red spanning assumption guarantees feasibility.
pub fn min_spanning_tree(inst: &StackInstance, prices: &PriceAssignment) -> MstResult {
    debug_assert_eq!(prices.len(), inst.blue_count());
    // (weight, color rank, input index); blue sorts before red at equal weight.
    let mut candidates: Vec<(&Rat, u8, usize)> = Vec::new();
    for (id, _) in inst.blue_edges().iter().enumerate() {
        if let Some(p) = prices.finite(id) {
            candidates.push((p, 0, id));
        }
    }
    for (i, e) in inst.red_edges().iter().enumerate() {
        candidates.push((&e.cost, 1, i));
    }
    candidates.sort_by(|a, b| match a.0.cmp(b.0) {
        Ordering::Equal => (a.1, a.2).cmp(&(b.1, b.2)),
        ord => ord,
    });

    let mut uf = UnionFind::new(inst.vertex_count());
    let mut tree_edges = Vec::new();
    let mut total_weight = Rat::zero();
    let mut revenue = Rat::zero();
    let mut blue_ids = BTreeSet::new();
    for (w, color, idx) in candidates {
        let edge = if color == 0 {
            EdgeRef::Blue(idx)
        } else {
            EdgeRef::Red(idx)
        };
        let (u, v) = edge.endpoints(inst);
        if uf.union(u, v) {
            total_weight += w;
            if color == 0 {
                revenue += w;
                blue_ids.insert(idx);
            }
            tree_edges.push(edge);
        }
    }
    debug_assert_eq!(tree_edges.len(), inst.vertex_count() - 1);
    MstResult {
        tree_edges,
        total_weight,
        revenue,
        blue_ids,
    }
}

/// Graphic-matroid rank of an edge set: vertex count minus the number of
/// components of the subgraph it spans.
pub fn rank(inst: &StackInstance, edge_set: &[EdgeRef]) -> usize {
    let mut uf = UnionFind::new(inst.vertex_count());
    let mut merged = 0;
    for e in edge_set {
        let (u, v) = e.endpoints(inst);
        if uf.union(u, v) {
            merged += 1;
        }
    }
    merged
}

/// Number of blue edges in the MST when every blue edge has price `c`.
pub fn uniform_blue_count(inst: &StackInstance, c: &Rat) -> usize {
    let prices = PriceAssignment::uniform(inst.blue_count(), c.clone());
    min_spanning_tree(inst, &prices).blue_ids.len()
}
