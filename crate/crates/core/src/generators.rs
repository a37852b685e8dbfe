//! Deterministic constructors for the instance families used in the hardness
//! reductions and the tightness / integrality-gap analyses, plus a seeded
//! random generator.

use std::collections::BTreeSet;

use num::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{rat, BlueEdge, Rat, RedEdge, StackInstance};
use crate::mst::{min_spanning_tree, EdgeRef};
use crate::solvers::Solution;
use crate::{Error, Result};

/// A set-cover instance with elements 1..=universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub sets: Vec<BTreeSet<usize>>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<BTreeSet<usize>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::Argument("empty universe".into()));
        }
        if sets.is_empty() {
            return Err(Error::Argument("no sets".into()));
        }
        for (j, s) in sets.iter().enumerate() {
            for &u in s {
                if u == 0 || u > universe {
                    return Err(Error::Argument(format!(
                        "set {} contains element {} outside 1..={}",
                        j + 1,
                        u,
                        universe
                    )));
                }
            }
        }
        Ok(SetCoverInstance { universe, sets })
    }
}

/// Adds one fresh element shared by every set, establishing the normalization
/// the reduction requires. Callers with already-normalized data skip this.
pub fn normalize_setcover(sc: &SetCoverInstance) -> SetCoverInstance {
    let shared = sc.universe + 1;
    SetCoverInstance {
        universe: shared,
        sets: sc
            .sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.insert(shared);
                s
            })
            .collect(),
    }
}

/// Maps blue edges of a reduced instance back to (element, set) incidences.
/// Elements and sets are 1-based, matching [`SetCoverInstance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMeta {
    pub n: usize,
    pub m: usize,
    /// `blue_incidence[id] = (element, set)`.
    pub blue_incidence: Vec<(usize, usize)>,
}

/// Set-cover reduction: a path of cost-1 red edges over the element vertices,
/// a path of cost-2 red edges chaining the last element to all set vertices,
/// and one blue edge per (element, set) incidence. Requires the last element
/// to belong to every set. A cover of size t corresponds exactly to revenue
/// n + 2m - t - 1.
pub fn gen_setcover(sc: &SetCoverInstance) -> Result<(StackInstance, ReductionMeta)> {
    let n = sc.universe;
    let m = sc.sets.len();
    for (j, s) in sc.sets.iter().enumerate() {
        if !s.contains(&n) {
            return Err(Error::Argument(format!(
                "set {} does not contain the shared element {}; normalize first",
                j + 1,
                n
            )));
        }
    }
    // Vertices: elements u_1..u_n are 0..n-1, sets S_1..S_m are n..n+m-1.
    let mut red_edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        red_edges.push(RedEdge {
            u: i,
            v: i + 1,
            cost: rat(1, 1),
        });
    }
    for j in 0..m {
        red_edges.push(RedEdge {
            u: n + j - 1,
            v: n + j,
            cost: rat(2, 1),
        });
    }
    let mut blue_edges = Vec::new();
    let mut blue_incidence = Vec::new();
    for (j, s) in sc.sets.iter().enumerate() {
        for &u in s {
            blue_edges.push(BlueEdge {
                u: u - 1,
                v: n + j,
            });
            blue_incidence.push((u, j + 1));
        }
    }
    let inst = StackInstance::new(n + m, red_edges, blue_edges)?;
    Ok((inst, ReductionMeta { n, m, blue_incidence }))
}

/// Exchanges one red tree edge for a repriced blue pair: with T the canonical
/// MST, the two components of T - e are reconnected by some non-tree blue
/// edge f (the blue subgraph of a reduced instance is connected through u_n),
/// and on the tree path closing the cycle with f sits a blue edge f' with
/// c(e) < p(f') <= p(f). Setting both prices to c(e) keeps the revenue and
/// strictly lowers the red count of the MST. Returns false when the tree is
/// already all blue.
fn reduce_red_tree_edges(
    inst: &StackInstance,
    prices: &mut crate::instance::PriceAssignment,
) -> Result<bool> {
    let mst = min_spanning_tree(inst, prices);
    let Some(red) = mst.tree_edges.iter().find_map(|e| match e {
        EdgeRef::Red(i) => Some(*i),
        EdgeRef::Blue(_) => None,
    }) else {
        return Ok(false);
    };
    let cost = &inst.red_edges()[red].cost;
    // Vertex bipartition of T - e.
    let mut side = crate::dsu::UnionFind::new(inst.vertex_count());
    let mut tree_adj: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); inst.vertex_count()];
    for e in &mst.tree_edges {
        let (u, v) = e.endpoints(inst);
        if !matches!(e, EdgeRef::Red(i) if *i == red) {
            side.union(u, v);
        }
        let blue_id = match e {
            EdgeRef::Blue(id) => Some(*id),
            EdgeRef::Red(_) => None,
        };
        tree_adj[u].push((v, blue_id));
        tree_adj[v].push((u, blue_id));
    }
    let crossing = inst.blue_edges().iter().enumerate().find(|(id, b)| {
        !mst.blue_ids.contains(id) && b.u != b.v && !side.connected(b.u, b.v)
    });
    let Some((f, fe)) = crossing else {
        return Err(Error::Argument(
            "non-canonical optimal solution: tree contains a red edge".into(),
        ));
    };
    let p_f = prices.finite(f).cloned();
    // Walk the unique tree path between f's endpoints.
    let mut pred: Vec<Option<(usize, Option<usize>)>> = vec![None; inst.vertex_count()];
    let mut stack = vec![fe.u];
    let mut seen = vec![false; inst.vertex_count()];
    seen[fe.u] = true;
    while let Some(v) = stack.pop() {
        for &(w, blue_id) in &tree_adj[v] {
            if !seen[w] {
                seen[w] = true;
                pred[w] = Some((v, blue_id));
                stack.push(w);
            }
        }
    }
    let mut swap = None;
    let mut cur = fe.v;
    while let Some((prev, blue_id)) = pred[cur] {
        if let Some(id) = blue_id {
            let p = prices.finite(id).expect("tree blue edges are priced");
            let above = p > cost;
            let below_f = p_f.as_ref().map_or(true, |pf| p <= pf);
            if above && below_f {
                swap = Some(id);
                break;
            }
        }
        cur = prev;
    }
    let Some(f_prime) = swap else {
        return Err(Error::Argument(
            "non-canonical optimal solution: tree contains a red edge".into(),
        ));
    };
    prices.set(f, crate::instance::Price::Finite(cost.clone()));
    prices.set(f_prime, crate::instance::Price::Finite(cost.clone()));
    Ok(true)
}

/// Reads a set cover off an optimal solution of a reduced instance: the sets
/// incident to a price-1 blue tree edge. The solution is first canonicalized
/// into one whose MST is all blue by the red-edge exchange argument; checks
/// the revenue arithmetic and the covering property.
pub fn cover_from_solution(
    inst: &StackInstance,
    meta: &ReductionMeta,
    sol: &Solution,
) -> Result<BTreeSet<usize>> {
    let mut prices = sol.prices.clone();
    // Each exchange lowers the MST's red count, so this terminates.
    for _ in 0..inst.vertex_count() {
        if !reduce_red_tree_edges(inst, &mut prices)? {
            break;
        }
    }
    let mst = min_spanning_tree(inst, &prices);
    if mst.tree_edges.iter().any(|e| matches!(e, EdgeRef::Red(_))) {
        return Err(Error::Argument(
            "non-canonical optimal solution: tree contains a red edge".into(),
        ));
    }
    if mst.revenue != sol.revenue {
        return Err(Error::Argument(
            "canonicalization changed the revenue; input was not optimal".into(),
        ));
    }
    let one = Rat::one();
    let mut cover = BTreeSet::new();
    if meta.n == 1 {
        // Degenerate universe: there are no cost-1 red edges, so every tree
        // edge is priced 2 and any set it touches covers the lone element.
        for &id in &mst.blue_ids {
            cover.insert(meta.blue_incidence[id].1);
        }
    } else {
        for &id in &mst.blue_ids {
            let price = prices.finite(id).expect("tree edge priced");
            if *price == one {
                cover.insert(meta.blue_incidence[id].1);
            }
        }
        let expected = (meta.n + 2 * meta.m) as i64 - 1 - cover.len() as i64;
        if Rat::from_integer(expected.into()) != sol.revenue {
            return Err(Error::Argument(format!(
                "revenue {} does not match cover size {}",
                sol.revenue,
                cover.len()
            )));
        }
    }
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for &j in &cover {
        covered.extend(meta.blue_incidence.iter().filter_map(|&(u, s)| {
            if s == j {
                Some(u)
            } else {
                None
            }
        }));
    }
    if covered.len() != meta.n {
        return Err(Error::Argument("extracted sets do not cover the universe".into()));
    }
    Ok(cover)
}

/// Vertex-cover reduction for graphs of maximum degree 3: elements are the
/// edges of `edges` plus a dummy shared element, sets are the vertices, and
/// the set-cover reduction is chained. Cover size s corresponds to revenue
/// n + 2m - s - 1.
pub fn gen_vertexcover(
    vertices: usize,
    edges: &[(usize, usize)],
) -> Result<(StackInstance, ReductionMeta)> {
    if vertices == 0 {
        return Err(Error::Argument("empty graph".into()));
    }
    if edges.len() < vertices {
        return Err(Error::Argument(
            "graph must have at least as many edges as vertices".into(),
        ));
    }
    let mut degree = vec![0usize; vertices];
    let mut uf = crate::dsu::UnionFind::new(vertices);
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u >= vertices || v >= vertices {
            return Err(Error::Argument("edge endpoint out of range".into()));
        }
        if u == v {
            return Err(Error::Argument("graph must be simple (loop found)".into()));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Argument("graph must be simple (parallel edge found)".into()));
        }
        degree[u] += 1;
        degree[v] += 1;
        uf.union(u, v);
    }
    if degree.iter().any(|&d| d > 3) {
        return Err(Error::Argument("maximum degree exceeds 3".into()));
    }
    if uf.components() != 1 {
        return Err(Error::Argument("graph must be connected".into()));
    }
    // Element e+1 per edge index e; dummy element |E|+1 in every set.
    let n = edges.len() + 1;
    let sets: Vec<BTreeSet<usize>> = (0..vertices)
        .map(|v| {
            let mut s: BTreeSet<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(e, _)| e + 1)
                .collect();
            s.insert(n);
            s
        })
        .collect();
    let sc = SetCoverInstance::new(n, sets)?;
    gen_setcover(&sc)
}

/// Path of k red edges with costs 1, 1/2, ..., 1/k, each doubled by a blue
/// edge. The optimum prices each blue at its parallel red cost (revenue H_k);
/// every uniform price yields revenue exactly 1.
pub fn gen_harmonic(k: usize) -> Result<StackInstance> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let mut red_edges = Vec::new();
    let mut blue_edges = Vec::new();
    for i in 1..=k {
        red_edges.push(RedEdge {
            u: i - 1,
            v: i,
            cost: rat(1, i as i64),
        });
        blue_edges.push(BlueEdge { u: i - 1, v: i });
    }
    StackInstance::new(k + 1, red_edges, blue_edges)
}

/// Path with a^{k-i} red edges of cost a^{i-1} for each i, each doubled by a
/// blue edge. The optimum is k * a^{k-1}; the uniform price c_i yields
/// a^{i-1} (a^{k-i+1} - 1) / (a - 1).
pub fn gen_geometric(k: usize, a: u64) -> Result<StackInstance> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if a < 2 {
        return Err(Error::Argument("a must be at least 2".into()));
    }
    let mut red_edges = Vec::new();
    let mut blue_edges = Vec::new();
    let mut vertex = 0usize;
    for i in 1..=k {
        let cost = Rat::from_integer(num::BigInt::from(a).pow((i - 1) as u32));
        let count = u64::pow(a, (k - i) as u32);
        for _ in 0..count {
            red_edges.push(RedEdge {
                u: vertex,
                v: vertex + 1,
                cost: cost.clone(),
            });
            blue_edges.push(BlueEdge {
                u: vertex,
                v: vertex + 1,
            });
            vertex += 1;
        }
    }
    StackInstance::new(vertex + 1, red_edges, blue_edges)
}

/// Integrality-gap family: vertex 0 joined by blue star edges to vertices
/// 1..=a^{k-1}; for each level i < k, red cliques of cost a^{i-1} over
/// consecutive blocks of a^i vertices; one red edge of cost a^{k-1} from 0 to
/// 1. Optional padding duplicates the first blue edge until exactly
/// `pad_to_b` blue edges exist.
pub fn gen_gap(k: usize, a: u64, pad_to_b: Option<usize>) -> Result<StackInstance> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if a < 2 {
        return Err(Error::Argument("a must be at least 2".into()));
    }
    let star = u64::pow(a, (k - 1) as u32) as usize;
    let vertex_count = star + 1;
    let mut blue_edges = Vec::new();
    for v in 1..=star {
        blue_edges.push(BlueEdge { u: 0, v });
    }
    if let Some(b) = pad_to_b {
        if b < star {
            return Err(Error::Argument(format!(
                "pad_to_b {} is below the {} star edges",
                b, star
            )));
        }
        let first = blue_edges[0];
        for _ in star..b {
            blue_edges.push(first);
        }
    }
    let mut red_edges = Vec::new();
    for i in 1..k {
        let cost = Rat::from_integer(num::BigInt::from(a).pow((i - 1) as u32));
        let block = u64::pow(a, i as u32) as usize;
        let mut base = 1;
        while base + block <= star + 1 {
            for x in base..base + block {
                for y in (x + 1)..base + block {
                    red_edges.push(RedEdge {
                        u: x,
                        v: y,
                        cost: cost.clone(),
                    });
                }
            }
            base += block;
        }
    }
    red_edges.push(RedEdge {
        u: 0,
        v: 1,
        cost: Rat::from_integer(num::BigInt::from(a).pow((k - 1) as u32)),
    });
    StackInstance::new(vertex_count, red_edges, blue_edges)
}

/// Seeded random instance: a random red spanning tree plus `red_extra` random
/// red edges, all costed from `cost_pool`, and `b` random blue edges. The
/// stream cipher PRNG (ChaCha8) makes seeds portable across platforms.
pub fn gen_random(
    n: usize,
    red_extra: usize,
    b: usize,
    cost_pool: &[Rat],
    seed: u64,
) -> Result<StackInstance> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if cost_pool.is_empty() || cost_pool.iter().any(|c| !c.is_positive()) {
        return Err(Error::Argument("cost pool must be nonempty and positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick_cost = |rng: &mut ChaCha8Rng| cost_pool[rng.gen_range(0..cost_pool.len())].clone();
    let mut red_edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let cost = pick_cost(&mut rng);
        red_edges.push(RedEdge { u, v, cost });
    }
    for _ in 0..red_extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let cost = pick_cost(&mut rng);
        red_edges.push(RedEdge { u, v, cost });
    }
    let mut blue_edges = Vec::new();
    for _ in 0..b {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        blue_edges.push(BlueEdge { u, v });
    }
    StackInstance::new(n, red_edges, blue_edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{best_out_of_k, solve_exact, Budget};

    /// The worked reduction example: universe of 6, three sets sharing u_6.
    pub fn example_setcover() -> SetCoverInstance {
        SetCoverInstance::new(
            6,
            vec![
                [1, 2, 3, 4, 6].into(),
                [3, 4, 6].into(),
                [5, 6].into(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_reduction_shape() {
        let (inst, meta) = gen_setcover(&example_setcover()).unwrap();
        assert_eq!(inst.vertex_count(), 9);
        assert_eq!(inst.red_edges().len(), 8);
        assert_eq!(inst.blue_count(), 10);
        assert_eq!(meta.n, 6);
        assert_eq!(meta.m, 3);
        assert!(inst.validate().is_ok());
        assert_eq!(inst.cost_ladder().costs(), &[rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn setcover_requires_shared_element() {
        let sc = SetCoverInstance::new(2, vec![[1].into(), [2].into()]).unwrap();
        assert!(gen_setcover(&sc).is_err());
        let normalized = normalize_setcover(&sc);
        assert_eq!(normalized.universe, 3);
        assert!(gen_setcover(&normalized).is_ok());
    }

    #[test]
    fn single_set_single_element() {
        // Degenerate universe: no cost-1 red edges, the lone blue edge is
        // priced 2 and the extracted cover is the set it touches.
        let sc = SetCoverInstance::new(1, vec![[1].into()]).unwrap();
        let (inst, meta) = gen_setcover(&sc).unwrap();
        assert_eq!(inst.vertex_count(), 2);
        assert_eq!(inst.red_edges().len(), 1);
        assert_eq!(inst.blue_count(), 1);
        let sol = solve_exact(&inst, &Budget::default()).unwrap();
        assert_eq!(sol.revenue, rat(2, 1));
        let cover = cover_from_solution(&inst, &meta, &sol).unwrap();
        assert_eq!(cover, BTreeSet::from([1]));
    }

    #[test]
    fn red_tree_edge_is_exchanged_away() {
        // n = 2 with one set: the lexicographically smallest optimal forest
        // keeps a red edge in the tree; canonicalization exchanges it for a
        // repriced blue pair before the cover is read off.
        let sc = SetCoverInstance::new(2, vec![[1, 2].into()]).unwrap();
        let (inst, meta) = gen_setcover(&sc).unwrap();
        let sol = solve_exact(&inst, &Budget::default()).unwrap();
        assert_eq!(sol.revenue, rat(2, 1)); // n + 2m - t - 1 with t = 1
        let mst = min_spanning_tree(&inst, &sol.prices);
        assert!(mst.tree_edges.iter().any(|e| matches!(e, EdgeRef::Red(_))));
        let cover = cover_from_solution(&inst, &meta, &sol).unwrap();
        assert_eq!(cover, BTreeSet::from([1]));
    }

    #[test]
    fn vertexcover_rejects_bad_graphs() {
        // Path on 3 vertices: fewer edges than vertices.
        assert!(gen_vertexcover(3, &[(0, 1), (1, 2)]).is_err());
        // Degree 4.
        assert!(gen_vertexcover(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]
        )
        .is_err());
    }

    #[test]
    fn vertexcover_triangle_dimensions() {
        let (inst, meta) = gen_vertexcover(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(meta.n, 4);
        assert_eq!(meta.m, 3);
        assert!(inst.validate().is_ok());
    }

    #[test]
    fn harmonic_small_cases() {
        let inst = gen_harmonic(1).unwrap();
        assert_eq!(inst.vertex_count(), 2);
        let sol = solve_exact(&inst, &Budget::default()).unwrap();
        assert_eq!(sol.revenue, rat(1, 1));

        let inst = gen_harmonic(4).unwrap();
        assert_eq!(
            inst.cost_ladder().costs(),
            &[rat(1, 4), rat(1, 3), rat(1, 2), rat(1, 1)]
        );
        assert_eq!(inst.cost_ladder().max_ratio(), Some(rat(4, 1)));
    }

    #[test]
    fn geometric_small_cases() {
        let inst = gen_geometric(2, 2).unwrap();
        assert_eq!(inst.vertex_count(), 4);
        let sol = solve_exact(&inst, &Budget::default()).unwrap();
        assert_eq!(sol.revenue, rat(4, 1));
        let (bok, _) = best_out_of_k(&inst).unwrap();
        assert_eq!(bok.revenue, rat(3, 1));
    }

    #[test]
    fn gap_small_cases() {
        let inst = gen_gap(2, 2, None).unwrap();
        assert_eq!(inst.vertex_count(), 3);
        assert_eq!(inst.blue_count(), 2);
        assert_eq!(inst.red_edges().len(), 2);
        let sol = solve_exact(&inst, &Budget::default()).unwrap();
        assert_eq!(sol.revenue, rat(2, 1));

        let padded = gen_gap(3, 2, Some(7)).unwrap();
        assert_eq!(padded.blue_count(), 7);
        assert!(gen_gap(2, 2, Some(1)).is_err());
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let pool = [rat(1, 1), rat(2, 1), rat(5, 2)];
        let a = gen_random(6, 3, 5, &pool, 7).unwrap();
        let b = gen_random(6, 3, 5, &pool, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
        let c = gen_random(6, 3, 5, &pool, 8).unwrap();
        assert_ne!(a, c);
    }
}
