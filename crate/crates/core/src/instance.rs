//! Instance model: bicolored multigraphs with exact rational red costs,
//! validation, zero-cost contraction, the distinct-cost ladder, and the
//! `stackmst v1` text format.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::dsu::UnionFind;
use crate::{Error, Result};

/// Exact rational number; always stored in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rat {
    assert!(denom != 0, "zero denominator");
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `p` or `p/q` with a positive integer `q`.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(numer.trim()).ok()?;
    let denom = BigInt::from_str(denom.trim()).ok()?;
    if denom <= BigInt::zero() {
        return None;
    }
    Some(Rat::new(numer, denom))
}

/// Renders a rational as `p/q`, omitting `/q` when the denominator is 1.
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedEdge {
    pub u: usize,
    pub v: usize,
    pub cost: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlueEdge {
    pub u: usize,
    pub v: usize,
}

/// An immutable StackMST instance. Blue edge ids are positions in the blue
/// edge list. Loops and parallel edges are permitted; a loop can never join
/// two components, so MST code simply skips it. The red subgraph must span
/// all vertices, otherwise some cut consists of blue edges only and the
/// optimal revenue is unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackInstance {
    vertex_count: usize,
    red_edges: Vec<RedEdge>,
    blue_edges: Vec<BlueEdge>,
}

impl StackInstance {
    pub fn new(
        vertex_count: usize,
        red_edges: Vec<RedEdge>,
        blue_edges: Vec<BlueEdge>,
    ) -> Result<Self> {
        let inst = StackInstance {
            vertex_count,
            red_edges,
            blue_edges,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn red_edges(&self) -> &[RedEdge] {
        &self.red_edges
    }

    pub fn blue_edges(&self) -> &[BlueEdge] {
        &self.blue_edges
    }

    pub fn blue_count(&self) -> usize {
        self.blue_edges.len()
    }

    /// Checks every structural invariant: positive vertex count, indices in
    /// range, nonnegative costs, and a spanning all-red subgraph.
    pub fn validate(&self) -> Result<()> {
        if self.vertex_count == 0 {
            return Err(Error::Invalid("vertex count must be positive".into()));
        }
        for (i, e) in self.red_edges.iter().enumerate() {
            if e.u >= self.vertex_count || e.v >= self.vertex_count {
                return Err(Error::Invalid(format!(
                    "red edge {} has a vertex index out of range",
                    i
                )));
            }
            if e.cost.is_negative() {
                return Err(Error::Invalid(format!("red edge {} has negative cost", i)));
            }
        }
        for (i, e) in self.blue_edges.iter().enumerate() {
            if e.u >= self.vertex_count || e.v >= self.vertex_count {
                return Err(Error::Invalid(format!(
                    "blue edge {} has a vertex index out of range",
                    i
                )));
            }
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.red_edges {
            uf.union(e.u, e.v);
        }
        if uf.components() != 1 {
            return Err(Error::Invalid("red subgraph not spanning".into()));
        }
        Ok(())
    }

    /// Contracts every red edge of cost zero (endpoints merged, resulting
    /// loops and parallel edges kept). The optimal revenue is unchanged.
    /// Returns a clone of the input when there is nothing to contract.
    pub fn contract_zero_red(&self) -> StackInstance {
        if !self.red_edges.iter().any(|e| e.cost.is_zero()) {
            return self.clone();
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.red_edges {
            if e.cost.is_zero() {
                uf.union(e.u, e.v);
            }
        }
        // Renumber components by first appearance in old vertex order.
        let mut map = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if map[r] == usize::MAX {
                map[r] = next;
                next += 1;
            }
            map[v] = map[r];
        }
        let red_edges = self
            .red_edges
            .iter()
            .filter(|e| !e.cost.is_zero())
            .map(|e| RedEdge {
                u: map[e.u],
                v: map[e.v],
                cost: e.cost.clone(),
            })
            .collect();
        let blue_edges = self
            .blue_edges
            .iter()
            .map(|e| BlueEdge {
                u: map[e.u],
                v: map[e.v],
            })
            .collect();
        StackInstance {
            vertex_count: next,
            red_edges,
            blue_edges,
        }
    }

    /// Sorted distinct red costs.
    pub fn cost_ladder(&self) -> CostLadder {
        let set: BTreeSet<&Rat> = self.red_edges.iter().map(|e| &e.cost).collect();
        CostLadder {
            costs: set.into_iter().cloned().collect(),
        }
    }
}

/// The strictly increasing list of distinct red costs `c_1 < ... < c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostLadder {
    costs: Vec<Rat>,
}

impl CostLadder {
    pub fn costs(&self) -> &[Rat] {
        &self.costs
    }

    pub fn k(&self) -> usize {
        self.costs.len()
    }

    /// 1-based access: `cost(i)` is the i-th smallest distinct red cost.
    pub fn cost(&self, i: usize) -> &Rat {
        &self.costs[i - 1]
    }

    /// `W = c_k / c_1`; defined only when all costs are positive.
    pub fn max_ratio(&self) -> Option<Rat> {
        let first = self.costs.first()?;
        if first.is_zero() || first.is_negative() {
            return None;
        }
        Some(self.costs.last().unwrap() / first)
    }
}

/// Price of a blue edge; `Unpriced` behaves like an infinite price, i.e. the
/// edge is effectively deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Price {
    Finite(Rat),
    Unpriced,
}

/// Total map from blue edge id to price.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceAssignment {
    prices: Vec<Price>,
}

impl PriceAssignment {
    pub fn all_unpriced(blue_count: usize) -> Self {
        PriceAssignment {
            prices: vec![Price::Unpriced; blue_count],
        }
    }

    pub fn uniform(blue_count: usize, price: Rat) -> Self {
        PriceAssignment {
            prices: vec![Price::Finite(price); blue_count],
        }
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn set(&mut self, blue_id: usize, price: Price) {
        self.prices[blue_id] = price;
    }

    pub fn get(&self, blue_id: usize) -> &Price {
        &self.prices[blue_id]
    }

    pub fn finite(&self, blue_id: usize) -> Option<&Rat> {
        match &self.prices[blue_id] {
            Price::Finite(r) => Some(r),
            Price::Unpriced => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Price)> {
        self.prices.iter().enumerate()
    }
}

fn parse_vertex(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v: usize = tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad vertex index `{}`", tok),
    })?;
    if v >= n {
        return Err(Error::Parse {
            line,
            message: format!("vertex index {} out of range (vertices {})", v, n),
        });
    }
    Ok(v)
}

/// Parses the `stackmst v1` text format. `#` starts a comment; blank lines
/// are ignored. Blue ids are assigned in order of appearance.
pub fn parse_instance(text: &str) -> Result<StackInstance> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if !line.is_empty() {
            lines.push((idx + 1, line));
        }
    }
    let mut it = lines.into_iter();
    match it.next() {
        Some((_, "stackmst v1")) => {}
        Some((line, other)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected `stackmst v1` header, found `{}`", other),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty input".into(),
            })
        }
    }
    let (vline, vdecl) = it.next().ok_or(Error::Parse {
        line: 2,
        message: "missing `vertices <n>` line".into(),
    })?;
    let vertex_count = match vdecl.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["vertices", n] => n.parse::<usize>().map_err(|_| Error::Parse {
            line: vline,
            message: format!("bad vertex count `{}`", n),
        })?,
        _ => {
            return Err(Error::Parse {
                line: vline,
                message: format!("expected `vertices <n>`, found `{}`", vdecl),
            })
        }
    };
    let mut red_edges = Vec::new();
    let mut blue_edges = Vec::new();
    for (line, decl) in it {
        let toks: Vec<&str> = decl.split_whitespace().collect();
        match toks.as_slice() {
            ["red", u, v, cost] => {
                let u = parse_vertex(u, line, vertex_count)?;
                let v = parse_vertex(v, line, vertex_count)?;
                let cost = parse_rational(cost).ok_or(Error::Parse {
                    line,
                    message: format!("bad cost `{}`", cost),
                })?;
                if cost.is_negative() {
                    return Err(Error::Parse {
                        line,
                        message: "negative cost".into(),
                    });
                }
                red_edges.push(RedEdge { u, v, cost });
            }
            ["blue", u, v] => {
                let u = parse_vertex(u, line, vertex_count)?;
                let v = parse_vertex(v, line, vertex_count)?;
                blue_edges.push(BlueEdge { u, v });
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unrecognized line `{}`", decl),
                })
            }
        }
    }
    StackInstance::new(vertex_count, red_edges, blue_edges)
}

/// Canonical serialization: header, vertex count, red edges in input order,
/// then blue edges in input order, rationals as `p/q` with `/q` omitted when
/// the denominator is 1.
pub fn serialize_instance(inst: &StackInstance) -> String {
    let mut out = String::new();
    out.push_str("stackmst v1\n");
    let _ = writeln!(out, "vertices {}", inst.vertex_count());
    for e in inst.red_edges() {
        let _ = writeln!(out, "red {} {} {}", e.u, e.v, format_rational(&e.cost));
    }
    for e in inst.blue_edges() {
        let _ = writeln!(out, "blue {} {}", e.u, e.v);
    }
    out
}

/// Parses `price <blue_id> <rational|inf>` lines. Every blue id keeps its
/// default `inf` unless a line overrides it; duplicate ids take the last line.
pub fn parse_prices(text: &str, blue_count: usize) -> Result<PriceAssignment> {
    let mut prices = PriceAssignment::all_unpriced(blue_count);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let decl = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let decl = decl.trim();
        if decl.is_empty() {
            continue;
        }
        let toks: Vec<&str> = decl.split_whitespace().collect();
        match toks.as_slice() {
            ["price", id, val] => {
                let id: usize = id.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad blue id `{}`", id),
                })?;
                if id >= blue_count {
                    return Err(Error::Parse {
                        line,
                        message: format!("blue id {} out of range ({} blue edges)", id, blue_count),
                    });
                }
                let price = if *val == "inf" {
                    Price::Unpriced
                } else {
                    Price::Finite(parse_rational(val).ok_or(Error::Parse {
                        line,
                        message: format!("bad price `{}`", val),
                    })?)
                };
                prices.set(id, price);
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unrecognized line `{}`", decl),
                })
            }
        }
    }
    Ok(prices)
}

pub fn serialize_prices(prices: &PriceAssignment) -> String {
    let mut out = String::new();
    for (id, p) in prices.iter() {
        match p {
            Price::Finite(r) => {
                let _ = writeln!(out, "price {} {}", id, format_rational(r));
            }
            Price::Unpriced => {
                let _ = writeln!(out, "price {} inf", id);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_smallest_valid_instance() {
        let inst = parse_instance("stackmst v1\nvertices 2\nred 0 1 5\nblue 0 1\n").unwrap();
        assert_eq!(inst.vertex_count(), 2);
        assert_eq!(inst.red_edges().len(), 1);
        assert_eq!(inst.red_edges()[0].cost, rat(5, 1));
        assert_eq!(inst.blue_count(), 1);
    }

    #[test]
    fn parse_rejects_blue_only_cut() {
        let err = parse_instance("stackmst v1\nvertices 2\nblue 0 1\n").unwrap_err();
        assert!(err.to_string().contains("red subgraph not spanning"));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_instance("stackmst v1\nvertices 2\nred 0 7 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_negative_cost() {
        let err = parse_instance("stackmst v1\nvertices 2\nred 0 1 -1\n").unwrap_err();
        assert!(err.to_string().contains("negative cost"));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "stackmst v1\n# a comment\n\nvertices 2\nred 0 1 1/2 # trailing\nblue 0 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.red_edges()[0].cost, rat(1, 2));
    }

    #[test]
    fn serialize_parse_roundtrip() {
        let text = "stackmst v1\nvertices 3\nred 0 1 1\nred 1 2 3/2\nblue 0 2\nblue 1 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
        let reparsed = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(reparsed, inst);
    }

    #[test]
    fn single_vertex_is_valid() {
        let inst = parse_instance("stackmst v1\nvertices 1\n").unwrap();
        assert!(inst.validate().is_ok());
        assert_eq!(inst.cost_ladder().k(), 0);
    }

    #[test]
    fn ladder_dedups_and_sorts() {
        let inst = StackInstance::new(
            3,
            vec![
                RedEdge { u: 0, v: 1, cost: rat(2, 1) },
                RedEdge { u: 1, v: 2, cost: rat(1, 1) },
                RedEdge { u: 0, v: 2, cost: rat(2, 1) },
            ],
            vec![],
        )
        .unwrap();
        let ladder = inst.cost_ladder();
        assert_eq!(ladder.costs(), &[rat(1, 1), rat(2, 1)]);
        assert_eq!(ladder.k(), 2);
        assert_eq!(ladder.max_ratio(), Some(rat(2, 1)));
    }

    #[test]
    fn contract_zero_red_noop() {
        let inst = parse_instance("stackmst v1\nvertices 2\nred 0 1 5\nblue 0 1\n").unwrap();
        assert_eq!(inst.contract_zero_red(), inst);
    }

    #[test]
    fn contract_zero_red_merges_path() {
        // Path a-b-c with red a-b cost 0, red b-c cost 3, blue a-c.
        let inst = parse_instance(
            "stackmst v1\nvertices 3\nred 0 1 0\nred 1 2 3\nblue 0 2\n",
        )
        .unwrap();
        let contracted = inst.contract_zero_red();
        assert_eq!(contracted.vertex_count(), 2);
        assert_eq!(contracted.red_edges().len(), 1);
        assert_eq!(contracted.red_edges()[0].cost, rat(3, 1));
        // The blue edge now parallels the surviving red edge.
        let b = contracted.blue_edges()[0];
        let r = &contracted.red_edges()[0];
        assert_ne!(b.u, b.v);
        assert_eq!(
            (b.u.min(b.v), b.u.max(b.v)),
            (r.u.min(r.v), r.u.max(r.v))
        );
        assert!(contracted.validate().is_ok());
    }

    #[test]
    fn contract_all_zero_triangle_leaves_blue_loop() {
        let inst = parse_instance(
            "stackmst v1\nvertices 3\nred 0 1 0\nred 1 2 0\nred 0 2 0\nblue 0 2\n",
        )
        .unwrap();
        let contracted = inst.contract_zero_red();
        assert_eq!(contracted.vertex_count(), 1);
        assert!(contracted.red_edges().is_empty());
        let b = contracted.blue_edges()[0];
        assert_eq!(b.u, b.v);
        assert!(contracted.validate().is_ok());
    }

    #[test]
    fn prices_roundtrip() {
        let mut prices = PriceAssignment::all_unpriced(3);
        prices.set(0, Price::Finite(rat(5, 2)));
        prices.set(2, Price::Finite(rat(4, 1)));
        let text = serialize_prices(&prices);
        assert_eq!(text, "price 0 5/2\nprice 1 inf\nprice 2 4\n");
        assert_eq!(parse_prices(&text, 3).unwrap(), prices);
    }
}
