//! Exact order-dimension solver.
//!
//! Dimension is computed per comparability component by iterative deepening
//! on the number of colour classes: every ordered incomparable pair must be
//! reversed by some class, and a class stays valid while the poset relations
//! plus its reversal arcs remain acyclic. Classes carry an incrementally
//! maintained transitive closure, so the acyclicity test for a candidate
//! assignment is a single bit probe. Pairs are attacked in order of
//! decreasing conflict degree (number of 2-cycle partners), ties broken
//! lexicographically; the greedy conflict clique gives the starting depth,
//! and interchangeable classes are broken by never opening more than one
//! fresh class per pair. Component results combine as
//! `max(2, max component dimension)` with ascending/descending component
//! concatenations as witnesses.

use crate::poset::{Poset, Realiser, TotalOrder};
use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Default search budget: desk-scale instances stay well below this.
pub const DEFAULT_K_MAX: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimensionError {
    #[error("pair ({x}, {y}) is not an incomparable pair of the poset")]
    PairNotIncomparable { x: usize, y: usize },
    #[error("element label {label} out of range 1..={n}")]
    IndexOutOfRange { label: usize, n: usize },
}

/// All ordered incomparable pairs of a poset, lexicographically sorted.
/// Both orientations of each unordered pair are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncPairSet {
    pub pairs: Vec<(usize, usize)>,
}

impl IncPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn incomparable_pairs(p: &Poset) -> IncPairSet {
    let n = p.n();
    let mut pairs = Vec::new();
    for x in 1..=n {
        for y in 1..=n {
            if x != y && !p.comparable(x, y) {
                pairs.push((x, y));
            }
        }
    }
    IncPairSet { pairs }
}

/// True iff the digraph of the poset's relations plus the reversal arcs
/// `y -> x` for each `(x, y)` in `set` is acyclic.
pub fn is_reversible(p: &Poset, set: &[(usize, usize)]) -> Result<bool, DimensionError> {
    let n = p.n();
    for &(x, y) in set {
        if x < 1 || x > n {
            return Err(DimensionError::IndexOutOfRange { label: x, n });
        }
        if y < 1 || y > n {
            return Err(DimensionError::IndexOutOfRange { label: y, n });
        }
        if p.comparable(x, y) {
            return Err(DimensionError::PairNotIncomparable { x, y });
        }
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (x, y) in p.relations() {
        succ[x - 1].push(y - 1);
        indeg[y - 1] += 1;
    }
    for &(x, y) in set {
        succ[y - 1].push(x - 1);
        indeg[x - 1] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    Ok(seen == n)
}

/// Outcome of the exact solver.
#[derive(Debug, Clone)]
pub enum DimensionResult {
    /// Minimum realiser size, with a verified witness realiser of that size.
    Exact { dim: usize, witness: Realiser },
    /// The dimension exceeds the search budget `k_max`.
    Exceeded { k_max: usize },
}

impl DimensionResult {
    pub fn dim(&self) -> Option<usize> {
        match self {
            DimensionResult::Exact { dim, .. } => Some(*dim),
            DimensionResult::Exceeded { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Realiser> {
        match self {
            DimensionResult::Exact { witness, .. } => Some(witness),
            DimensionResult::Exceeded { .. } => None,
        }
    }
}

/// Exact dimension with a search budget. Chains and singletons (and the
/// empty poset) have dimension 1 by convention.
pub fn exact_dimension(p: &Poset, k_max: usize) -> DimensionResult {
    assert!(k_max >= 1, "k_max must be at least 1");
    let n = p.n();
    if n == 0 {
        let witness = Realiser::new(vec![TotalOrder::new(vec![])]);
        return DimensionResult::Exact { dim: 1, witness };
    }
    let comps = comparability_components(p);
    let mut solved = Vec::with_capacity(comps.len());
    for comp in &comps {
        let (local, map) = p.induced_allow_empty(comp);
        match solve_component(&local, k_max) {
            Some((dim, orders)) => solved.push((dim, orders, map)),
            None => return DimensionResult::Exceeded { k_max },
        }
    }
    let dim = if solved.len() == 1 {
        solved[0].0
    } else {
        solved.iter().map(|s| s.0).max().unwrap().max(2)
    };
    if dim > k_max {
        return DimensionResult::Exceeded { k_max };
    }
    // Assemble global orders: component blocks ascending in the first order,
    // descending in the rest, so cross-component pairs appear both ways.
    let mut orders = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut seq = Vec::with_capacity(n);
        let emit =
            |seq: &mut Vec<usize>,
             (d, local_orders, map): &(usize, Vec<TotalOrder>, Vec<usize>)| {
                let pick = j.min(d - 1);
                seq.extend(local_orders[pick].seq().iter().map(|&l| map[l - 1]));
            };
        if j == 0 {
            for s in &solved {
                emit(&mut seq, s);
            }
        } else {
            for s in solved.iter().rev() {
                emit(&mut seq, s);
            }
        }
        orders.push(TotalOrder::new(seq));
    }
    let witness = Realiser::new(orders);
    assert!(
        p.is_realiser(&witness).unwrap(),
        "internal error: solver witness failed realiser verification"
    );
    DimensionResult::Exact { dim, witness }
}

fn comparability_components(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (x, y) in p.relations() {
        let (a, b) = (find(&mut parent, x - 1), find(&mut parent, y - 1));
        if a != b {
            parent[a] = b;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(v + 1);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Solves one comparability component given in local labels. Returns the
/// dimension and a witness family of linear extensions, or `None` when the
/// dimension exceeds `k_max`.
fn solve_component(p: &Poset, k_max: usize) -> Option<(usize, Vec<TotalOrder>)> {
    let n = p.n();
    let pairs = incomparable_pairs(p).pairs;
    if pairs.is_empty() {
        return Some((1, vec![topological_order(&closure_rows(p), n)]));
    }
    // Conflict: two ordered pairs whose reversal arcs close a 2-cycle through
    // the poset relations; such pairs can never share a class.
    let m = pairs.len();
    let conflicts = |a: (usize, usize), b: (usize, usize)| -> bool {
        let ((x, y), (u, v)) = (a, b);
        p.leq(x, v) && p.leq(u, y)
    };
    let mut degree = vec![0usize; m];
    for i in 0..m {
        for j in (i + 1)..m {
            if conflicts(pairs[i], pairs[j]) {
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(degree[i]), pairs[i]));
    let sorted_pairs: Vec<(usize, usize)> = order.iter().map(|&i| pairs[i]).collect();
    // Greedy conflict clique: a valid lower bound for the starting depth.
    let mut clique: Vec<(usize, usize)> = Vec::new();
    for &pr in &sorted_pairs {
        if clique.iter().all(|&q| conflicts(pr, q)) {
            clique.push(pr);
        }
    }
    let lower = clique.len().max(2);
    if lower > k_max {
        return None;
    }
    let base = closure_rows(p);
    for k in lower..=k_max {
        let mut classes = vec![base.clone(); k];
        if dfs(&sorted_pairs, &mut classes, 0, k) {
            let orders: Vec<TotalOrder> = classes.iter().map(|c| topological_order(c, n)).collect();
            return Some((k, orders));
        }
    }
    None
}

/// `rows[u]` bit `v`: element `u+1` is forced before `v+1`.
fn closure_rows(p: &Poset) -> Vec<FixedBitSet> {
    (1..=p.n()).map(|x| p.up_row(x).clone()).collect()
}

fn dfs(pairs: &[(usize, usize)], classes: &mut [Vec<FixedBitSet>], used: usize, k: usize) -> bool {
    // Next unsatisfied pair in the static fail-first order.
    let next = pairs
        .iter()
        .find(|&&(x, y)| !classes.iter().any(|c| c[y - 1].contains(x - 1)));
    let &(x, y) = match next {
        Some(pr) => pr,
        None => return true,
    };
    let limit = k.min(used + 1);
    for ci in 0..limit {
        if classes[ci][x - 1].contains(y - 1) {
            continue; // y -> x would close a cycle
        }
        let snapshot = classes[ci].clone();
        add_arc(&mut classes[ci], y - 1, x - 1);
        if dfs(pairs, classes, used.max(ci + 1), k) {
            return true;
        }
        classes[ci] = snapshot;
    }
    false
}

/// Adds the arc `from -> to` to a transitively closed relation and restores
/// closure: everything at or before `from` now precedes `to` and its
/// successors.
fn add_arc(rows: &mut [FixedBitSet], from: usize, to: usize) {
    let mut gain = rows[to].clone();
    gain.insert(to);
    for (u, row) in rows.iter_mut().enumerate() {
        if u == from || row.contains(from) {
            row.union_with(&gain);
        }
    }
}

/// Any topological order of a transitively closed DAG: ascending predecessor
/// count (ties by label) works because closure makes counts strictly
/// monotone along arcs.
fn topological_order(rows: &[FixedBitSet], n: usize) -> TotalOrder {
    let mut preds = vec![0usize; n];
    for row in rows.iter() {
        for v in row.ones() {
            preds[v] += 1;
        }
    }
    let mut seq: Vec<usize> = (1..=n).collect();
    seq.sort_by_key(|&v| (preds[v - 1], v));
    TotalOrder::new(seq)
}
