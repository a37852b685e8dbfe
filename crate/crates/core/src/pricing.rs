//! Min-max pricing of an acyclic blue forest and necessary-condition checks
//! on claimed optimal price assignments.

use std::collections::{BTreeSet, VecDeque};

use num::Zero;

use crate::dsu::UnionFind;
use crate::instance::{Price, PriceAssignment, Rat, StackInstance};
use crate::mst::{min_spanning_tree, EdgeRef};
use crate::{Error, Result};

/// An acyclic, loop-free set of blue edge ids: the set of blue edges the
/// leader intends to place in the follower's tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlueForest {
    ids: BTreeSet<usize>,
}

impl BlueForest {
    pub fn new(inst: &StackInstance, ids: BTreeSet<usize>) -> Result<Self> {
        let mut uf = UnionFind::new(inst.vertex_count());
        for &id in &ids {
            if id >= inst.blue_count() {
                return Err(Error::Argument(format!("blue id {} out of range", id)));
            }
            let e = inst.blue_edges()[id];
            if e.u == e.v {
                return Err(Error::Argument(format!(
                    "blue edge {} is a loop and cannot appear in any tree",
                    id
                )));
            }
            if !uf.union(e.u, e.v) {
                return Err(Error::Argument(format!(
                    "blue edge set is not acyclic (edge {} closes a cycle)",
                    id
                )));
            }
        }
        Ok(BlueForest { ids })
    }

    pub fn empty() -> Self {
        BlueForest {
            ids: BTreeSet::new(),
        }
    }

    pub fn ids(&self) -> &BTreeSet<usize> {
        &self.ids
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.contains(&id)
    }
}

/// Highest price edge `e` of the forest can carry while staying in every MST:
/// the minimum over cycles through `e` in the red edges plus the forest of the
/// maximum red cost on the cycle.
///
/// Computed by a threshold scan over the cost ladder: with the other forest
/// edges always merged, the answer is the smallest red cost level at which the
/// endpoints of `e` become connected. If the endpoints are already connected
/// by forest edges alone the result is defined as 0 (such a forest is not
/// realizable at a positive price; it only arises from non-acyclic inputs,
/// which [`BlueForest::new`] rejects).
pub fn minmax_price(inst: &StackInstance, forest: &BlueForest, e: usize) -> Result<Rat> {
    if !forest.contains(e) {
        return Err(Error::Argument(format!(
            "blue edge {} is not in the forest",
            e
        )));
    }
    Ok(minmax_price_unchecked(inst, forest.ids(), e))
}

pub(crate) fn minmax_price_unchecked(
    inst: &StackInstance,
    forest_ids: &BTreeSet<usize>,
    e: usize,
) -> Rat {
    let target = inst.blue_edges()[e];
    let mut uf = UnionFind::new(inst.vertex_count());
    for &id in forest_ids {
        if id == e {
            continue;
        }
        let b = inst.blue_edges()[id];
        uf.union(b.u, b.v);
    }
    if uf.connected(target.u, target.v) {
        return Rat::zero();
    }
    // Red edges grouped by ascending cost; merge one level at a time.
    let ladder = inst.cost_ladder();
    for c in ladder.costs() {
        for r in inst.red_edges() {
            if r.cost == *c {
                uf.union(r.u, r.v);
            }
        }
        if uf.connected(target.u, target.v) {
            return c.clone();
        }
    }
    unreachable!("red subgraph spans every vertex pair");
}

/// Prices every forest edge at its min-max value and leaves the rest
/// unpriced. The canonical MST under the result uses exactly the forest's
/// blue edges.
pub fn price_forest(inst: &StackInstance, forest: &BlueForest) -> PriceAssignment {
    let mut prices = PriceAssignment::all_unpriced(inst.blue_count());
    for &id in forest.ids() {
        let p = minmax_price_unchecked(inst, forest.ids(), id);
        prices.set(id, Price::Finite(p));
    }
    prices
}

/// A failed necessary condition on a price assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub detail: String,
}

/// Checks that every blue edge of the canonical MST is priced at some red
/// cost. Optimal assignments always satisfy this; a priced tree edge outside
/// the red-cost set means the price can be raised.
pub fn check_price_support(inst: &StackInstance, prices: &PriceAssignment) -> Vec<Violation> {
    let red_costs: BTreeSet<&Rat> = inst.red_edges().iter().map(|e| &e.cost).collect();
    let mst = min_spanning_tree(inst, prices);
    let mut violations = Vec::new();
    for &id in &mst.blue_ids {
        let p = prices.finite(id).expect("tree edge has a finite price");
        if !red_costs.contains(p) {
            violations.push(Violation {
                detail: format!(
                    "blue tree edge {} priced {} outside the red-cost set",
                    id,
                    crate::instance::format_rational(p)
                ),
            });
        }
    }
    violations
}

/// Checks the swap obstruction every optimal assignment satisfies: for each
/// red tree edge `e` and priced blue non-tree edge `f` whose tree cycle
/// contains `e`, some other blue edge `f'` on that cycle must have
/// `c(e) < p(f') <= p(f)`. Otherwise the leader could reprice and swap `f`
/// for `e`, increasing revenue.
pub fn check_obstruction(inst: &StackInstance, prices: &PriceAssignment) -> Vec<Violation> {
    let mst = min_spanning_tree(inst, prices);
    // Tree adjacency for cycle recovery.
    let mut adj: Vec<Vec<(usize, EdgeRef)>> = vec![Vec::new(); inst.vertex_count()];
    for &edge in &mst.tree_edges {
        let (u, v) = edge.endpoints(inst);
        adj[u].push((v, edge));
        adj[v].push((u, edge));
    }
    let tree_path = |a: usize, b: usize| -> Vec<EdgeRef> {
        if a == b {
            return Vec::new();
        }
        let mut prev: Vec<Option<(usize, EdgeRef)>> = vec![None; inst.vertex_count()];
        let mut seen = vec![false; inst.vertex_count()];
        let mut queue = VecDeque::new();
        seen[a] = true;
        queue.push_back(a);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, edge) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, edge));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = b;
        while cur != a {
            let (par, edge) = prev[cur].expect("tree connects all vertices");
            path.push(edge);
            cur = par;
        }
        path
    };

    let mut violations = Vec::new();
    for (f, blue) in inst.blue_edges().iter().enumerate() {
        if mst.blue_ids.contains(&f) || blue.u == blue.v {
            continue;
        }
        let pf = match prices.finite(f) {
            Some(p) => p,
            None => continue,
        };
        let cycle = tree_path(blue.u, blue.v);
        for &edge in &cycle {
            let red_idx = match edge {
                EdgeRef::Red(i) => i,
                EdgeRef::Blue(_) => continue,
            };
            let ce = &inst.red_edges()[red_idx].cost;
            let witnessed = cycle.iter().any(|&other| match other {
                EdgeRef::Blue(fp) if fp != f => {
                    let pfp = prices.finite(fp).expect("tree edge has a finite price");
                    ce < pfp && pfp <= pf
                }
                _ => false,
            });
            if !witnessed {
                violations.push(Violation {
                    detail: format!(
                        "red tree edge {} (cost {}) on the cycle of blue edge {} has no blue witness",
                        red_idx,
                        crate::instance::format_rational(ce),
                        f
                    ),
                });
            }
        }
    }
    violations
}
