//! Exact optimization by acyclic-forest enumeration, an independent
//! brute-force oracle over price vectors, and the Best-out-of-k
//! approximation with its ratio report.

use std::collections::BTreeSet;

use num::{One, ToPrimitive, Zero};

use crate::dsu::RollbackUnionFind;
use crate::instance::{Price, PriceAssignment, Rat, StackInstance};
use crate::mst::min_spanning_tree;
use crate::pricing::{minmax_price_unchecked, price_forest, BlueForest};
use crate::{Error, Result};

/// Enumeration caps. Exceeding a cap is a hard error, never a silent
/// approximation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum nodes of the forest-enumeration search tree.
    pub forest_nodes: u64,
    /// Maximum price vectors evaluated by the brute-force oracle.
    pub oracle_evals: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            forest_nodes: 1 << 24,
            oracle_evals: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Oracle,
    BestOutOfK,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Oracle => "oracle",
            Algorithm::BestOutOfK => "bok",
        }
    }
}

/// A priced solution: the assignment, the blue set of the canonical MST under
/// it, and the revenue of that tree.
#[derive(Clone, Debug)]
pub struct Solution {
    pub prices: PriceAssignment,
    pub forest: BTreeSet<usize>,
    pub revenue: Rat,
    pub algorithm: Algorithm,
    /// Search nodes or oracle evaluations consumed.
    pub work: u64,
}

struct ForestSearch<'a> {
    inst: &'a StackInstance,
    budget: u64,
    nodes: u64,
    current: Vec<usize>,
    best_ids: Vec<usize>,
    best_value: Rat,
}

impl<'a> ForestSearch<'a> {
    fn evaluate(&mut self) {
        let ids: BTreeSet<usize> = self.current.iter().copied().collect();
        let mut value = Rat::zero();
        for &id in &ids {
            value += minmax_price_unchecked(self.inst, &ids, id);
        }
        if value > self.best_value
            || (value == self.best_value && self.current < self.best_ids)
        {
            self.best_value = value;
            self.best_ids = self.current.clone();
        }
    }

    fn run(&mut self, idx: usize, uf: &mut RollbackUnionFind) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!(
                "forest enumeration exceeded {} nodes",
                self.budget
            )));
        }
        if idx == self.inst.blue_count() {
            self.evaluate();
            return Ok(());
        }
        let e = inst_edge(self.inst, idx);
        // Include the edge when it keeps the blue set acyclic.
        if e.0 != e.1 && !uf.connected(e.0, e.1) {
            uf.union(e.0, e.1);
            self.current.push(idx);
            self.run(idx + 1, uf)?;
            self.current.pop();
            uf.rollback();
        }
        self.run(idx + 1, uf)
    }
}

fn inst_edge(inst: &StackInstance, id: usize) -> (usize, usize) {
    let e = inst.blue_edges()[id];
    (e.u, e.v)
}

/// Global optimum by enumerating every acyclic blue subset and pricing it at
/// its min-max values. Exponential only in the number of blue edges; ties are
/// broken toward the lexicographically smallest id set.
pub fn solve_exact(inst: &StackInstance, budget: &Budget) -> Result<Solution> {
    inst.validate()?;
    let mut search = ForestSearch {
        inst,
        budget: budget.forest_nodes,
        nodes: 0,
        current: Vec::new(),
        best_ids: Vec::new(),
        best_value: Rat::zero(),
    };
    // Seed with the empty forest so a zero-revenue instance yields empty ids.
    search.evaluate();
    let mut uf = RollbackUnionFind::new(inst.vertex_count());
    search.run(0, &mut uf)?;

    let ids: BTreeSet<usize> = search.best_ids.iter().copied().collect();
    let forest = BlueForest::new(inst, ids).expect("search emits acyclic sets");
    let prices = price_forest(inst, &forest);
    let mst = min_spanning_tree(inst, &prices);
    debug_assert_eq!(&mst.blue_ids, forest.ids());
    debug_assert_eq!(mst.revenue, search.best_value);
    Ok(Solution {
        prices,
        forest: mst.blue_ids,
        revenue: mst.revenue,
        algorithm: Algorithm::Exact,
        work: search.nodes,
    })
}

/// Independent correctness oracle: exhaustively evaluates every price vector
/// with entries in the distinct red costs plus "unpriced". Optimal
/// assignments never need other prices, so the maximum found is the true
/// optimum.
pub fn solve_oracle(inst: &StackInstance, budget: &Budget) -> Result<Solution> {
    inst.validate()?;
    let ladder = inst.cost_ladder();
    let k = ladder.k();
    let b = inst.blue_count();
    let options = (k + 1) as u64;
    let mut total: u64 = 1;
    for _ in 0..b {
        total = total
            .checked_mul(options)
            .filter(|&t| t <= budget.oracle_evals)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "oracle would evaluate more than {} price vectors",
                    budget.oracle_evals
                ))
            })?;
    }

    // Odometer over digits 0..=k per blue edge; digit k means unpriced.
    let mut digits = vec![0usize; b];
    let mut best: Option<Solution> = None;
    let mut evals = 0u64;
    loop {
        let mut prices = PriceAssignment::all_unpriced(b);
        for (id, &d) in digits.iter().enumerate() {
            if d < k {
                prices.set(id, Price::Finite(ladder.costs()[d].clone()));
            }
        }
        let mst = min_spanning_tree(inst, &prices);
        evals += 1;
        let better = match &best {
            Some(s) => mst.revenue > s.revenue,
            None => true,
        };
        if better {
            best = Some(Solution {
                prices,
                forest: mst.blue_ids,
                revenue: mst.revenue,
                algorithm: Algorithm::Oracle,
                work: 0,
            });
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == b {
                let mut sol = best.expect("at least one vector evaluated");
                sol.work = evals;
                return Ok(sol);
            }
            digits[pos] += 1;
            if digits[pos] <= k {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// One row of the Best-out-of-k table: the uniform price, the blue count of
/// the resulting tree, and the revenue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BokRow {
    pub cost: Rat,
    pub blue_count: usize,
    pub revenue: Rat,
}

/// Prices all blue edges uniformly at each distinct red cost and keeps the
/// best outcome. Requires positive red costs; contract zero-cost red edges
/// first.
pub fn best_out_of_k(inst: &StackInstance) -> Result<(Solution, Vec<BokRow>)> {
    inst.validate()?;
    if inst.red_edges().iter().any(|e| e.cost.is_zero()) {
        return Err(Error::Argument(
            "zero-cost red edge present; contract zero-cost red edges first".into(),
        ));
    }
    let ladder = inst.cost_ladder();
    let b = inst.blue_count();
    let mut table = Vec::with_capacity(ladder.k());
    let mut best: Option<Solution> = None;
    for c in ladder.costs() {
        let prices = PriceAssignment::uniform(b, c.clone());
        let mst = min_spanning_tree(inst, &prices);
        let row = BokRow {
            cost: c.clone(),
            blue_count: mst.blue_ids.len(),
            revenue: mst.revenue.clone(),
        };
        let better = match &best {
            Some(s) => row.revenue > s.revenue,
            None => true,
        };
        if better {
            best = Some(Solution {
                prices,
                forest: mst.blue_ids,
                revenue: mst.revenue,
                algorithm: Algorithm::BestOutOfK,
                work: 0,
            });
        }
        table.push(row);
    }
    let best = best.unwrap_or(Solution {
        prices: PriceAssignment::all_unpriced(b),
        forest: BTreeSet::new(),
        revenue: Rat::zero(),
        algorithm: Algorithm::BestOutOfK,
        work: 0,
    });
    Ok((best, table))
}

/// Next representable float above `x`; used so logarithmic bounds are always
/// rounded up before comparison.
pub fn up_ulp(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    if x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// The three approximation bounds min{k, 1 + ln b, 1 + ln W}. Logarithms are
/// evaluated in floating point and rounded up one ulp so a guarantee check
/// can never fail spuriously due to rounding down.
#[derive(Clone, Copy, Debug)]
pub struct GuaranteeBounds {
    pub k: usize,
    pub blue_count: usize,
    pub bound_k: f64,
    pub bound_ln_b: f64,
    /// None when `W = c_k / c_1` is undefined (no red edges, or a zero cost).
    pub bound_ln_w: Option<f64>,
    pub min_bound: f64,
}

impl GuaranteeBounds {
    pub fn for_instance(inst: &StackInstance) -> Self {
        let ladder = inst.cost_ladder();
        let k = ladder.k();
        let b = inst.blue_count();
        let bound_k = k as f64;
        let bound_ln_b = up_ulp(1.0 + (b as f64).ln());
        let bound_ln_w = ladder
            .max_ratio()
            .map(|w| up_ulp(1.0 + rat_to_f64(&w).ln()));
        let mut min_bound = bound_k.min(bound_ln_b);
        if let Some(w) = bound_ln_w {
            min_bound = min_bound.min(w);
        }
        GuaranteeBounds {
            k,
            blue_count: b,
            bound_k,
            bound_ln_b,
            bound_ln_w,
            min_bound,
        }
    }
}

/// Exact optimum versus the Best-out-of-k revenue, with the approximation
/// bounds.
#[derive(Clone, Debug)]
pub struct RatioReport {
    pub opt: Rat,
    pub bok: Rat,
    /// opt / bok; 1 when both revenues are zero.
    pub ratio: Rat,
    pub bounds: GuaranteeBounds,
    pub within_bound: bool,
}

pub fn ratio_report(inst: &StackInstance, budget: &Budget) -> Result<RatioReport> {
    let contracted = inst.contract_zero_red();
    let opt = solve_exact(&contracted, budget)?.revenue;
    let (bok_sol, _) = best_out_of_k(&contracted)?;
    let bok = bok_sol.revenue;
    let ratio = if bok.is_zero() {
        debug_assert!(opt.is_zero());
        Rat::one()
    } else {
        &opt / &bok
    };
    let bounds = GuaranteeBounds::for_instance(&contracted);
    let within_bound = match Rat::from_float(bounds.min_bound) {
        Some(bound) => ratio <= bound,
        None => true, // infinite bound
    };
    Ok(RatioReport {
        opt,
        bok,
        ratio,
        bounds,
        within_bound,
    })
}
