//! Independent oracles for the integration tests: brute-force spanning-tree
//! enumeration, cycle-based min-max pricing, exhaustive cover search, and the
//! shared random corpus. Everything here is deliberately naive so it cannot
//! share bugs with the library implementations.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num::{BigInt, One, Zero};

use stackmst::instance::{rat, Price, PriceAssignment, Rat, StackInstance};
use stackmst::generators::{gen_random, SetCoverInstance};
use stackmst::mst::EdgeRef;

/// One spanning tree found by exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct EnumTree {
    pub edges: Vec<EdgeRef>,
    pub weight: Rat,
    pub blue_count: usize,
    pub revenue: Rat,
}

fn edge_data(inst: &StackInstance, prices: &PriceAssignment) -> Vec<(EdgeRef, usize, usize, Rat)> {
    let mut out = Vec::new();
    for (id, e) in inst.blue_edges().iter().enumerate() {
        if e.u == e.v {
            continue;
        }
        if let Some(p) = prices.finite(id) {
            out.push((EdgeRef::Blue(id), e.u, e.v, p.clone()));
        }
    }
    for (i, e) in inst.red_edges().iter().enumerate() {
        if e.u != e.v {
            out.push((EdgeRef::Red(i), e.u, e.v, e.cost.clone()));
        }
    }
    out
}

/// Every spanning tree of the priced graph, by choosing n-1 edges at a time.
pub fn all_spanning_trees(inst: &StackInstance, prices: &PriceAssignment) -> Vec<EnumTree> {
    let n = inst.vertex_count();
    let edges = edge_data(inst, prices);
    let mut trees = Vec::new();
    if n == 1 {
        trees.push(EnumTree {
            edges: Vec::new(),
            weight: Rat::zero(),
            blue_count: 0,
            revenue: Rat::zero(),
        });
        return trees;
    }
    let m = edges.len();
    let want = n - 1;
    if want > m {
        return trees;
    }
    let mut choice: Vec<usize> = (0..want).collect();
    loop {
        let mut uf = vec![usize::MAX; n];
        fn find(uf: &mut Vec<usize>, v: usize) -> usize {
            if uf[v] == usize::MAX {
                v
            } else {
                let r = find(uf, uf[v]);
                uf[v] = r;
                r
            }
        }
        let mut acyclic = true;
        for &c in &choice {
            let (_, u, v, _) = edges[c];
            let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
            if ru == rv {
                acyclic = false;
                break;
            }
            uf[ru] = rv;
        }
        if acyclic {
            let mut weight = Rat::zero();
            let mut blue_count = 0;
            let mut revenue = Rat::zero();
            let mut tree = Vec::new();
            for &c in &choice {
                let (r, _, _, ref w) = edges[c];
                weight += w;
                if matches!(r, EdgeRef::Blue(_)) {
                    blue_count += 1;
                    revenue += w;
                }
                tree.push(r);
            }
            trees.push(EnumTree {
                edges: tree,
                weight,
                blue_count,
                revenue,
            });
        }
        // Next combination in lexicographic order.
        let mut i = want;
        loop {
            if i == 0 {
                return trees;
            }
            i -= 1;
            if choice[i] != i + m - want {
                break;
            }
        }
        choice[i] += 1;
        for j in i + 1..want {
            choice[j] = choice[j - 1] + 1;
        }
    }
}

/// The canonically minimal trees: lexicographic minimum of
/// (total weight, -blue count) over all spanning trees.
pub fn minimal_trees(inst: &StackInstance, prices: &PriceAssignment) -> Vec<EnumTree> {
    let trees = all_spanning_trees(inst, prices);
    let best = trees
        .iter()
        .map(|t| (t.weight.clone(), -(t.blue_count as i64)))
        .min();
    match best {
        None => Vec::new(),
        Some(key) => trees
            .into_iter()
            .filter(|t| (t.weight.clone(), -(t.blue_count as i64)) == key)
            .collect(),
    }
}

/// Min over all simple paths between the endpoints of blue edge `e` in
/// (R ∪ F) − e of the maximum red cost on the path; 0 when some path uses no
/// red edge at all.
pub fn minmax_oracle(inst: &StackInstance, forest: &BTreeSet<usize>, e: usize) -> Option<Rat> {
    let blue = &inst.blue_edges()[e];
    let (source, target) = (blue.u, blue.v);
    if source == target {
        return Some(Rat::zero());
    }
    // Adjacency over red edges and the other forest edges.
    let mut adj: Vec<Vec<(usize, Option<Rat>)>> = vec![Vec::new(); inst.vertex_count()];
    for r in inst.red_edges() {
        if r.u != r.v {
            adj[r.u].push((r.v, Some(r.cost.clone())));
            adj[r.v].push((r.u, Some(r.cost.clone())));
        }
    }
    for &id in forest {
        if id == e {
            continue;
        }
        let b = &inst.blue_edges()[id];
        if b.u != b.v {
            adj[b.u].push((b.v, None));
            adj[b.v].push((b.u, None));
        }
    }
    let mut best: Option<Rat> = None;
    let mut visited = vec![false; inst.vertex_count()];
    visited[source] = true;
    fn dfs(
        adj: &Vec<Vec<(usize, Option<Rat>)>>,
        visited: &mut Vec<bool>,
        best: &mut Option<Rat>,
        v: usize,
        target: usize,
        path_max: &Rat,
    ) {
        if v == target {
            if best.is_none() || path_max < best.as_ref().unwrap() {
                *best = Some(path_max.clone());
            }
            return;
        }
        for (w, cost) in &adj[v] {
            if visited[*w] {
                continue;
            }
            let next_max = match cost {
                Some(c) if c > path_max => c.clone(),
                _ => path_max.clone(),
            };
            visited[*w] = true;
            dfs(adj, visited, best, *w, target, &next_max);
            visited[*w] = false;
        }
    }
    dfs(&adj, &mut visited, &mut best, source, target, &Rat::zero());
    best
}

/// Exhaustive minimum set cover size; None when the sets cannot cover.
pub fn min_setcover(sc: &SetCoverInstance) -> Option<usize> {
    let m = sc.sets.len();
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << m) {
        let mut covered = BTreeSet::new();
        for (j, s) in sc.sets.iter().enumerate() {
            if mask & (1 << j) != 0 {
                covered.extend(s.iter().copied());
            }
        }
        if covered.len() == sc.universe {
            let size = mask.count_ones() as usize;
            if best.is_none() || size < best.unwrap() {
                best = Some(size);
            }
        }
    }
    best
}

/// Exhaustive minimum vertex cover size.
pub fn min_vertexcover(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut best = vertices;
    for mask in 0u32..(1 << vertices) {
        if edges
            .iter()
            .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
        {
            best = best.min(mask.count_ones() as usize);
        }
    }
    best
}

/// Most violated partition inequality at level j over ALL vertex subsets of
/// the contracted graph (not just blue-incident ones). Returns the violation
/// amount x_j(S) - (|S| - 1) of the best subset, when positive.
pub fn partition_violation_oracle(inst: &StackInstance, x: &[Rat], j: usize) -> Option<Rat> {
    let ladder = inst.cost_ladder();
    let b = inst.blue_count();
    // Contract red edges of cost <= c_{j-1}.
    let mut label: Vec<usize> = (0..inst.vertex_count()).collect();
    fn find(label: &mut Vec<usize>, v: usize) -> usize {
        if label[v] == v {
            v
        } else {
            let r = find(label, label[v]);
            label[v] = r;
            r
        }
    }
    if j >= 2 {
        let threshold = ladder.cost(j - 1).clone();
        for r in inst.red_edges() {
            if r.cost <= threshold {
                let (a, c) = (find(&mut label, r.u), find(&mut label, r.v));
                label[a] = c;
            }
        }
    }
    let mut names = Vec::new();
    let mut comp = vec![usize::MAX; inst.vertex_count()];
    for v in 0..inst.vertex_count() {
        let r = find(&mut label, v);
        if comp[r] == usize::MAX {
            comp[r] = names.len();
            names.push(r);
        }
        comp[v] = comp[r];
    }
    let t = names.len();
    assert!(t <= 20, "oracle subset search limit");
    let mut best: Option<Rat> = None;
    for mask in 1u32..(1 << t) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let mut inside = Rat::zero();
        for (e, edge) in inst.blue_edges().iter().enumerate() {
            let (cu, cv) = (comp[edge.u], comp[edge.v]);
            if cu != cv && mask & (1 << cu) != 0 && mask & (1 << cv) != 0 {
                inside += &x[(j - 1) * b + e];
            }
        }
        let violation = inside - Rat::from_integer(BigInt::from(size as i64 - 1));
        if violation > Rat::zero()
            && (best.is_none() || violation > *best.as_ref().unwrap())
        {
            best = Some(violation);
        }
    }
    best
}

/// The shared random corpus: `count` connected instances with at most 7
/// vertices, 8 blue edges, and 3 distinct red costs.
pub fn random_corpus(count: usize, seed_base: u64) -> Vec<StackInstance> {
    let pools: [Vec<Rat>; 4] = [
        vec![rat(1, 1), rat(2, 1), rat(3, 1)],
        vec![rat(1, 2), rat(1, 1)],
        vec![rat(1, 1), rat(5, 2), rat(4, 1)],
        vec![rat(2, 1)],
    ];
    let mut corpus = Vec::with_capacity(count);
    let mut seed = seed_base;
    while corpus.len() < count {
        let i = corpus.len();
        let n = 2 + (seed as usize + i) % 6; // 2..=7
        let b = 1 + (i * 3 + 1) % 8; // 1..=8
        let red_extra = i % 3;
        let pool = &pools[i % pools.len()];
        let inst = gen_random(n, red_extra, b, pool, seed).expect("valid corpus parameters");
        corpus.push(inst);
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    }
    corpus
}

/// A price assignment with every blue edge priced from the ladder, chosen
/// deterministically from `salt`.
pub fn pseudo_prices(inst: &StackInstance, salt: u64) -> PriceAssignment {
    let ladder = inst.cost_ladder();
    let k = ladder.k();
    let mut prices = PriceAssignment::all_unpriced(inst.blue_count());
    let mut state = salt.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    for id in 0..inst.blue_count() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let roll = (state >> 33) as usize % (k + 2);
        if roll < k {
            prices.set(id, Price::Finite(ladder.cost(roll + 1).clone()));
        } else if roll == k {
            prices.set(id, Price::Finite(Rat::one()));
        } // else leave unpriced
    }
    prices
}
