//! Integer-programming model of StackMST and its LP relaxation, solved
//! exactly by cutting planes.
//!
//! Variables x_{j,e} (j over the cost ladder, e over blue edges) mean "blue
//! edge e is in the tree with price at least c_j"; the objective sums
//! (c_j - c_{j-1}) x_{j,e}. Two cut families are separated at each fractional
//! optimum: forest-partition cuts over the components of the red subgraph
//! below level j, and path cuts forbidding a priced edge whose endpoints are
//! joined by a cheap alternative path.

use std::collections::HashSet;

use num::{One, Signed, Zero};

use crate::instance::{format_rational, CostLadder, Rat, StackInstance};
use crate::simplex;
use crate::solvers::{solve_exact, Budget, GuaranteeBounds, Solution};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutKind {
    /// x_{j,e} >= 0, stored as -x <= 0.
    LowerBound { j: usize, e: usize },
    /// x_{j,e} <= 1.
    UpperBound { j: usize, e: usize },
    /// x_{j+1,e} - x_{j,e} <= 0.
    Chain { j: usize, e: usize },
    /// x_{1,e} <= 0 for a blue loop, which can never be a tree edge.
    BlueLoop { e: usize },
    /// Forest-partition cut over `t` components at level j.
    Partition { j: usize, t: usize },
    /// Path cut for blue edge f at level j.
    Path { j: usize, f: usize },
}

/// One inequality `coeffs . x <= rhs`, valid for every integral solution.
#[derive(Clone, Debug)]
pub struct Cut {
    pub kind: CutKind,
    pub coeffs: Vec<(usize, Rat)>,
    pub rhs: Rat,
}

/// The active model: objective plus a monotonically growing cut list.
pub struct LpModel {
    pub k: usize,
    pub blue_count: usize,
    pub ladder: CostLadder,
    pub objective: Vec<Rat>,
    pub cuts: Vec<Cut>,
    seen: HashSet<(Vec<(usize, Rat)>, Rat)>,
}

/// Column of x_{j,e} (j is 1-based).
pub fn var_index(blue_count: usize, j: usize, e: usize) -> usize {
    (j - 1) * blue_count + e
}

fn normalize(coeffs: &[(usize, Rat)], rhs: &Rat) -> (Vec<(usize, Rat)>, Rat) {
    let mut c = coeffs.to_vec();
    c.sort_by_key(|&(v, _)| v);
    (c, rhs.clone())
}

impl LpModel {
    pub fn var(&self, j: usize, e: usize) -> usize {
        var_index(self.blue_count, j, e)
    }

    /// Adds a cut unless an identical row is already present.
    pub fn add_cut(&mut self, cut: Cut) -> bool {
        let key = normalize(&cut.coeffs, &cut.rhs);
        if !self.seen.insert(key) {
            return false;
        }
        self.cuts.push(cut);
        true
    }

    pub fn rows(&self) -> Vec<(Vec<(usize, Rat)>, Rat)> {
        self.cuts
            .iter()
            .map(|c| (c.coeffs.clone(), c.rhs.clone()))
            .collect()
    }

    /// Human-readable listing of the model (format `lpdump v1`).
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let b = self.blue_count;
        let name = |var: usize| format!("x_{}_{}", var / b + 1, var % b);
        let mut out = String::from("lpdump v1\n");
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| format!("{} {}", format_rational(c), name(v)))
            .collect();
        let _ = writeln!(out, "max {}", obj.join(" + "));
        for cut in &self.cuts {
            let lhs: Vec<String> = cut
                .coeffs
                .iter()
                .map(|(v, c)| {
                    if c.is_one() {
                        name(*v)
                    } else {
                        format!("{} {}", format_rational(c), name(*v))
                    }
                })
                .collect();
            let _ = writeln!(
                out,
                "{} <= {}  # {:?}",
                lhs.join(" + "),
                format_rational(&cut.rhs),
                cut.kind
            );
        }
        out
    }
}

/// Builds the model with bounds and chain constraints only. Requires
/// positive red costs; contract zero-cost red edges first.
pub fn build_base_lp(inst: &StackInstance) -> Result<LpModel> {
    inst.validate()?;
    if inst.red_edges().iter().any(|e| e.cost.is_zero()) {
        return Err(Error::Argument(
            "zero-cost red edge present; contract zero-cost red edges first".into(),
        ));
    }
    let ladder = inst.cost_ladder();
    let k = ladder.k();
    let b = inst.blue_count();
    let mut objective = vec![Rat::zero(); k * b];
    for j in 1..=k {
        let prev = if j == 1 {
            Rat::zero()
        } else {
            ladder.cost(j - 1).clone()
        };
        let coeff = ladder.cost(j) - prev;
        for e in 0..b {
            objective[var_index(b, j, e)] = coeff.clone();
        }
    }
    let mut model = LpModel {
        k,
        blue_count: b,
        ladder,
        objective,
        cuts: Vec::new(),
        seen: HashSet::new(),
    };
    let one = Rat::one();
    for j in 1..=k {
        for e in 0..b {
            let v = model.var(j, e);
            model.add_cut(Cut {
                kind: CutKind::UpperBound { j, e },
                coeffs: vec![(v, one.clone())],
                rhs: one.clone(),
            });
            model.add_cut(Cut {
                kind: CutKind::LowerBound { j, e },
                coeffs: vec![(v, -one.clone())],
                rhs: Rat::zero(),
            });
        }
    }
    for j in 1..k {
        for e in 0..b {
            model.add_cut(Cut {
                kind: CutKind::Chain { j, e },
                coeffs: vec![
                    (model.var(j + 1, e), one.clone()),
                    (model.var(j, e), -one.clone()),
                ],
                rhs: Rat::zero(),
            });
        }
    }
    if k > 0 {
        for (e, edge) in inst.blue_edges().iter().enumerate() {
            if edge.u == edge.v {
                model.add_cut(Cut {
                    kind: CutKind::BlueLoop { e },
                    coeffs: vec![(model.var(1, e), one.clone())],
                    rhs: Rat::zero(),
                });
            }
        }
    }
    Ok(model)
}

/// Component label per vertex after contracting red edges of cost at most
/// c_{j-1} (none when j = 1).
fn contracted_components(inst: &StackInstance, ladder: &CostLadder, j: usize) -> Vec<usize> {
    let mut uf = crate::dsu::UnionFind::new(inst.vertex_count());
    if j >= 2 {
        let threshold = ladder.cost(j - 1);
        for r in inst.red_edges() {
            if r.cost <= *threshold {
                uf.union(r.u, r.v);
            }
        }
    }
    let mut label = vec![usize::MAX; inst.vertex_count()];
    let mut next = 0;
    for v in 0..inst.vertex_count() {
        let root = uf.find(v);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        label[v] = label[root];
    }
    label
}

/// Exact separation of the forest-partition cuts at level `j`: contracts the
/// red subgraph below the level, drops blue loops, and searches the vertex
/// subset maximizing x_j(inside blue edges) - (|S| - 1) by exhaustive
/// enumeration over the blue-incident contracted vertices.
pub fn separate_partition(
    inst: &StackInstance,
    x: &[Rat],
    j: usize,
    max_subset_vertices: usize,
) -> Result<Option<Cut>> {
    let ladder = inst.cost_ladder();
    let b = inst.blue_count();
    let label = contracted_components(inst, &ladder, j);
    // Blue edges surviving contraction, with their component endpoints.
    let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (blue id, cu, cv)
    let mut incident: Vec<usize> = Vec::new();
    for (e, edge) in inst.blue_edges().iter().enumerate() {
        let (cu, cv) = (label[edge.u], label[edge.v]);
        if cu != cv {
            edges.push((e, cu, cv));
            incident.push(cu);
            incident.push(cv);
        }
    }
    incident.sort_unstable();
    incident.dedup();
    if incident.len() > max_subset_vertices {
        return Err(Error::Separation(format!(
            "partition separation at level {} needs subset search over {} contracted vertices (limit {})",
            j,
            incident.len(),
            max_subset_vertices
        )));
    }
    if incident.len() < 2 {
        return Ok(None);
    }
    // Bitmask per edge over the positions of its endpoints in `incident`.
    let pos = |c: usize| incident.binary_search(&c).unwrap();
    let masks: Vec<(usize, u32)> = edges
        .iter()
        .map(|&(e, cu, cv)| (e, (1u32 << pos(cu)) | (1u32 << pos(cv))))
        .collect();
    let mut best: Option<(Rat, u32)> = None;
    for subset in 1u32..(1u32 << incident.len()) {
        let t = subset.count_ones() as i64;
        if t < 2 {
            continue;
        }
        let mut inside = Rat::zero();
        for &(e, mask) in &masks {
            if mask & subset == mask {
                inside += &x[var_index(b, j, e)];
            }
        }
        let violation = inside - Rat::from_integer((t - 1).into());
        if violation.is_positive() {
            let better = match &best {
                Some((v, _)) => violation > *v,
                None => true,
            };
            if better {
                best = Some((violation, subset));
            }
        }
    }
    Ok(best.map(|(_, subset)| {
        let t = subset.count_ones() as usize;
        let coeffs: Vec<(usize, Rat)> = masks
            .iter()
            .filter(|&&(_, mask)| mask & subset == mask)
            .map(|&(e, _)| (var_index(b, j, e), Rat::one()))
            .collect();
        Cut {
            kind: CutKind::Partition { j, t },
            coeffs,
            rhs: Rat::from_integer(((t - 1) as i64).into()),
        }
    }))
}

/// Exact separation of the path cuts for blue edge `f` at level `j >= 2`:
/// shortest path between f's endpoints avoiding f, where red edges below the
/// level weigh 0 and blue edge e weighs 1 - x_{1,e}. Violated when the
/// distance is below x_{j,f}.
pub fn separate_path(inst: &StackInstance, x: &[Rat], j: usize, f: usize) -> Option<Cut> {
    debug_assert!(j >= 2);
    let b = inst.blue_count();
    let xjf = &x[var_index(b, j, f)];
    if !xjf.is_positive() {
        return None;
    }
    let ladder = inst.cost_ladder();
    let threshold = ladder.cost(j - 1);
    let target = inst.blue_edges()[f];
    let (a, bb) = (target.u, target.v);

    // Loop edge: the empty path already certifies x_{j,f} <= 0.
    if a == bb {
        return Some(Cut {
            kind: CutKind::Path { j, f },
            coeffs: vec![(var_index(b, j, f), Rat::one())],
            rhs: Rat::zero(),
        });
    }

    #[derive(Clone)]
    enum Pred {
        None,
        Red(usize),         // previous vertex
        Blue(usize, usize), // (blue id, previous vertex)
    }
    let n = inst.vertex_count();
    let mut dist: Vec<Option<Rat>> = vec![None; n];
    let mut pred: Vec<Pred> = vec![Pred::None; n];
    let mut done = vec![false; n];
    dist[a] = Some(Rat::zero());
    // O(V^2) Dijkstra; instances are desk-scale.
    loop {
        let mut cur: Option<usize> = None;
        for v in 0..n {
            if done[v] || dist[v].is_none() {
                continue;
            }
            if cur.is_none() || dist[v] < dist[cur.unwrap()] {
                cur = Some(v);
            }
        }
        let u = match cur {
            Some(u) => u,
            None => break,
        };
        done[u] = true;
        if u == bb {
            break;
        }
        let du = dist[u].clone().unwrap();
        let mut relax = |v: usize, w: Rat, p: Pred| {
            let cand = &du + w;
            if dist[v].is_none() || cand < *dist[v].as_ref().unwrap() {
                dist[v] = Some(cand);
                pred[v] = p;
            }
        };
        for r in inst.red_edges() {
            if r.cost > *threshold || r.u == r.v {
                continue;
            }
            if r.u == u {
                relax(r.v, Rat::zero(), Pred::Red(u));
            } else if r.v == u {
                relax(r.u, Rat::zero(), Pred::Red(u));
            }
        }
        for (e, edge) in inst.blue_edges().iter().enumerate() {
            if e == f || edge.u == edge.v {
                continue;
            }
            let w = Rat::one() - &x[var_index(b, 1, e)];
            debug_assert!(!w.is_negative());
            if edge.u == u {
                relax(edge.v, w, Pred::Blue(e, u));
            } else if edge.v == u {
                relax(edge.u, w.clone(), Pred::Blue(e, u));
            }
        }
    }
    let d = dist[bb].clone()?;
    if d >= *xjf {
        return None;
    }
    // Recover the blue edges on the path.
    let mut blue_path = Vec::new();
    let mut cur = bb;
    while cur != a {
        match pred[cur].clone() {
            Pred::Red(prev) => cur = prev,
            Pred::Blue(e, prev) => {
                blue_path.push(e);
                cur = prev;
            }
            Pred::None => unreachable!("predecessor chain reaches the source"),
        }
    }
    let mut coeffs: Vec<(usize, Rat)> = blue_path
        .iter()
        .map(|&e| (var_index(b, 1, e), Rat::one()))
        .collect();
    coeffs.push((var_index(b, j, f), Rat::one()));
    Some(Cut {
        kind: CutKind::Path { j, f },
        coeffs,
        rhs: Rat::from_integer((blue_path.len() as i64).into()),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions {
    /// Cutting-plane round cap.
    pub iteration_cap: usize,
    /// Subset-search size limit for partition separation.
    pub max_subset_vertices: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            iteration_cap: 10_000,
            max_subset_vertices: 20,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rat,
    pub point: Vec<Rat>,
    /// Cuts added by separation (base rows excluded).
    pub cut_count: usize,
    pub rounds: usize,
    pub pivots: u64,
}

/// Runs both separators on a point; returns every violated cut found, in the
/// fixed order (partition for j = 1..k, then path for j = 2..k and each f).
pub fn separate_all(
    inst: &StackInstance,
    x: &[Rat],
    opts: &LpOptions,
) -> Result<Vec<Cut>> {
    let k = inst.cost_ladder().k();
    let mut cuts = Vec::new();
    for j in 1..=k {
        if let Some(cut) = separate_partition(inst, x, j, opts.max_subset_vertices)? {
            cuts.push(cut);
        }
    }
    for j in 2..=k {
        for f in 0..inst.blue_count() {
            if let Some(cut) = separate_path(inst, x, j, f) {
                cuts.push(cut);
            }
        }
    }
    Ok(cuts)
}

/// Cutting-plane loop: exact simplex, separate at the optimum, add every
/// violated cut found, repeat until both separators certify feasibility.
pub fn solve_lp(inst: &StackInstance, opts: &LpOptions) -> Result<LpSolution> {
    let mut model = build_base_lp(inst)?;
    let mut pivots = 0u64;
    let mut added = 0usize;
    for round in 1..=opts.iteration_cap {
        let res = simplex::maximize(&model.objective, &model.rows())?;
        pivots += res.pivots;
        let cuts = separate_all(inst, &res.point, opts)?;
        if cuts.is_empty() {
            return Ok(LpSolution {
                value: res.value,
                point: res.point,
                cut_count: added,
                rounds: round,
                pivots,
            });
        }
        for cut in cuts {
            if model.add_cut(cut) {
                added += 1;
            }
        }
    }
    Err(Error::IterationCap(opts.iteration_cap))
}

/// The 0/1 point of a solution: x_{j,e} = 1 iff e is a tree edge priced at
/// least c_j. Its objective value equals the solution revenue.
pub fn embed_solution(inst: &StackInstance, sol: &Solution) -> Vec<Rat> {
    let ladder = inst.cost_ladder();
    let k = ladder.k();
    let b = inst.blue_count();
    let mut x = vec![Rat::zero(); k * b];
    for &e in &sol.forest {
        let price = sol
            .prices
            .finite(e)
            .expect("forest edges carry finite prices");
        for j in 1..=k {
            if *ladder.cost(j) <= *price {
                x[var_index(b, j, e)] = Rat::one();
            }
        }
    }
    x
}

/// Objective value of a point under the instance's ladder coefficients.
pub fn objective_value(inst: &StackInstance, x: &[Rat]) -> Rat {
    let ladder = inst.cost_ladder();
    let k = ladder.k();
    let b = inst.blue_count();
    let mut total = Rat::zero();
    for j in 1..=k {
        let prev = if j == 1 {
            Rat::zero()
        } else {
            ladder.cost(j - 1).clone()
        };
        let coeff = ladder.cost(j) - prev;
        for e in 0..b {
            total += &coeff * &x[var_index(b, j, e)];
        }
    }
    total
}

/// LP value against the exact integer optimum, with the guarantee bounds.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub lp: Rat,
    pub ip: Rat,
    /// lp / ip; 1 when both are zero.
    pub ratio: Rat,
    pub bounds: GuaranteeBounds,
    /// ip <= lp and lp <= min-bound * ip.
    pub within_bounds: bool,
    pub cut_count: usize,
    pub rounds: usize,
}

pub fn gap_report(inst: &StackInstance, budget: &Budget, opts: &LpOptions) -> Result<GapReport> {
    let lp_sol = solve_lp(inst, opts)?;
    let ip = solve_exact(inst, budget)?.revenue;
    let ratio = if ip.is_zero() {
        debug_assert!(lp_sol.value.is_zero());
        Rat::one()
    } else {
        &lp_sol.value / &ip
    };
    let bounds = GuaranteeBounds::for_instance(inst);
    let upper_ok = match Rat::from_float(bounds.min_bound) {
        Some(bound) => ratio <= bound,
        None => true,
    };
    let within_bounds = ratio >= Rat::one() && upper_ok;
    Ok(GapReport {
        lp: lp_sol.value,
        ip,
        ratio,
        bounds,
        within_bounds,
        cut_count: lp_sol.cut_count,
        rounds: lp_sol.rounds,
    })
}
