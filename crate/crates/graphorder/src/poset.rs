//! Finite partial orders with dense bitset relation storage.
//!
//! Elements are labelled `1..=n`. The strict relation is kept as one bitset
//! row per element in both directions (up-sets and down-sets), so closure
//! queries, restriction and realiser verification are word-parallel.

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation digraph contains a cycle")]
    CycleDetected,
    #[error("element label {label} out of range 1..={n}")]
    IndexOutOfRange { label: usize, n: usize },
    #[error("element set is empty")]
    EmptyElementSet,
    #[error("order has {found} elements, poset has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("realiser contains no orders")]
    EmptyRealiser,
    #[error("relations do not form a bipartite height-1 order")]
    NotBipartite,
}

/// Whether a set query includes the seed elements themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetClosure {
    /// `U[S]` / `D[S]`: every element comparable-or-equal on the given side.
    Closed,
    /// `U(S)` / `D(S)`: the closed set minus the seed.
    Open,
}

/// A finite poset on `1..=n` given by its strict order relation.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// `up[i]` holds bit `j` iff `i+1 < j+1` in the order.
    up: Vec<FixedBitSet>,
    /// Transpose of `up`, maintained together with it.
    down: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, relations={:?})", self.n, self.relations())
    }
}

impl Poset {
    /// Builds the poset generated by `arcs`: the reflexive-free transitive
    /// closure of the digraph `u -> v` meaning `u < v`.
    pub fn from_dag(n: usize, arcs: &[(usize, usize)]) -> Result<Poset, PosetError> {
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(u, v) in arcs {
            check_label(u, n)?;
            check_label(v, n)?;
            if u == v {
                return Err(PosetError::CycleDetected);
            }
            succ[u - 1].push(v - 1);
            indeg[v - 1] += 1;
        }
        // Kahn topological order; anything left over sits on a cycle.
        let mut topo = Vec::with_capacity(n);
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() != n {
            return Err(PosetError::CycleDetected);
        }
        // Accumulate reachability in reverse topological order.
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            let mut row = up[v].clone();
            for &w in &succ[v] {
                row.insert(w);
                row.union_with(&up[w]);
            }
            up[v] = row;
        }
        let down = transpose(&up, n);
        Ok(Poset { n, up, down })
    }

    /// The antichain on `n` elements.
    pub fn antichain(n: usize) -> Poset {
        Poset::from_dag(n, &[]).unwrap()
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Poset {
        let arcs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Poset::from_dag(n, &arcs).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Strict comparison `x < y`.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        debug_assert!(x >= 1 && x <= self.n && y >= 1 && y <= self.n);
        self.up[x - 1].contains(y - 1)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y) || self.lt(y, x)
    }

    /// All strict relations `(x, y)` with `x < y`, lexicographically sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.up[x].ones() {
                out.push((x + 1, y + 1));
            }
        }
        out
    }

    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|r| r.count_ones(..)).sum()
    }

    pub(crate) fn up_row(&self, x: usize) -> &FixedBitSet {
        &self.up[x - 1]
    }

    pub(crate) fn down_row(&self, x: usize) -> &FixedBitSet {
        &self.down[x - 1]
    }

    /// `|D[x] ∪ U[x]|`, the number of elements comparable to `x` including `x`.
    pub fn updown_size(&self, x: usize) -> usize {
        self.up[x - 1].count_ones(..) + self.down[x - 1].count_ones(..) + 1
    }

    /// Up-set of a seed set, as sorted labels.
    pub fn up_set(&self, seed: &[usize], closure: SetClosure) -> Result<Vec<usize>, PosetError> {
        self.side_set(seed, closure, true)
    }

    /// Down-set of a seed set, as sorted labels.
    pub fn down_set(&self, seed: &[usize], closure: SetClosure) -> Result<Vec<usize>, PosetError> {
        self.side_set(seed, closure, false)
    }

    fn side_set(
        &self,
        seed: &[usize],
        closure: SetClosure,
        upward: bool,
    ) -> Result<Vec<usize>, PosetError> {
        let mut acc = FixedBitSet::with_capacity(self.n);
        for &x in seed {
            check_label(x, self.n)?;
            let row = if upward {
                &self.up[x - 1]
            } else {
                &self.down[x - 1]
            };
            acc.union_with(row);
            if closure == SetClosure::Closed {
                acc.insert(x - 1);
            }
        }
        if closure == SetClosure::Open {
            for &x in seed {
                acc.remove(x - 1);
            }
        }
        Ok(acc.ones().map(|i| i + 1).collect())
    }

    /// The order with all relations reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Sub-poset induced on `elements`. Returns the new poset (labelled
    /// `1..=k` in ascending original-label order) plus the label map:
    /// `map[i]` is the original label of new element `i+1`.
    pub fn induced(&self, elements: &[usize]) -> Result<(Poset, Vec<usize>), PosetError> {
        if elements.is_empty() {
            return Err(PosetError::EmptyElementSet);
        }
        Ok(self.induced_allow_empty(elements))
    }

    pub(crate) fn induced_allow_empty(&self, elements: &[usize]) -> (Poset, Vec<usize>) {
        let mut map: Vec<usize> = elements.to_vec();
        map.sort_unstable();
        map.dedup();
        for &x in &map {
            assert!(x >= 1 && x <= self.n, "label {} out of range", x);
        }
        let k = map.len();
        let mut inv = vec![usize::MAX; self.n];
        for (i, &x) in map.iter().enumerate() {
            inv[x - 1] = i;
        }
        let mut up = vec![FixedBitSet::with_capacity(k); k];
        for (i, &x) in map.iter().enumerate() {
            for y in self.up[x - 1].ones() {
                if inv[y] != usize::MAX {
                    up[i].insert(inv[y]);
                }
            }
        }
        let down = transpose(&up, k);
        (Poset { n: k, up, down }, map)
    }

    /// Cover relation: pairs `(x, y)` with `x < y` and nothing strictly
    /// between, lexicographically sorted.
    pub fn cover_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.up[x].ones() {
                if self.up[x].ones().all(|z| !self.down[y].contains(z)) {
                    out.push((x + 1, y + 1));
                }
            }
        }
        out
    }

    /// Undirected cover (Hasse) graph; the orientation is recoverable from
    /// the order itself via [`Poset::lt`].
    pub fn cover_graph(&self) -> crate::graph::Graph {
        crate::graph::Graph::from_edges(self.n, &self.cover_arcs())
    }

    /// Undirected comparability graph.
    pub fn comparability_graph(&self) -> crate::graph::Graph {
        crate::graph::Graph::from_edges(self.n, &self.relations())
    }

    /// Width (largest antichain), via Dilworth duality: `n` minus a maximum
    /// matching of the split bipartite graph of the comparability relation.
    pub fn width(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        // Kuhn's augmenting-path matching: left copy x matched to right copy
        // y over arcs x < y; the matching size equals n minus the minimum
        // number of chains covering the order.
        let n = self.n;
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        let mut match_left: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![0u32; n];
        let mut stamp = 0u32;
        fn augment(
            x: usize,
            up: &[FixedBitSet],
            match_right: &mut [Option<usize>],
            match_left: &mut [Option<usize>],
            visited: &mut [u32],
            stamp: u32,
        ) -> bool {
            for y in up[x].ones() {
                if visited[y] == stamp {
                    continue;
                }
                visited[y] = stamp;
                if match_right[y].is_none()
                    || augment(
                        match_right[y].unwrap(),
                        up,
                        match_right,
                        match_left,
                        visited,
                        stamp,
                    )
                {
                    match_right[y] = Some(x);
                    match_left[x] = Some(y);
                    return true;
                }
            }
            false
        }
        let mut matched = 0;
        for x in 0..n {
            stamp += 1;
            if augment(
                x,
                &self.up,
                &mut match_right,
                &mut match_left,
                &mut visited,
                stamp,
            ) {
                matched += 1;
            }
        }
        n - matched
    }

    /// True iff `order` is a permutation of the elements respecting every
    /// relation of the poset.
    pub fn is_linear_extension(&self, order: &TotalOrder) -> bool {
        if order.len() != self.n {
            return false;
        }
        let pos = match order.positions(self.n) {
            Some(p) => p,
            None => return false,
        };
        for x in 0..self.n {
            for y in self.up[x].ones() {
                if pos[x] >= pos[y] {
                    return false;
                }
            }
        }
        true
    }

    /// Realiser check: every order is a linear extension and every ordered
    /// incomparable pair is reversed by at least one order.
    pub fn is_realiser(&self, realiser: &Realiser) -> Result<bool, PosetError> {
        if realiser.orders().is_empty() {
            return Err(PosetError::EmptyRealiser);
        }
        let mut positions = Vec::with_capacity(realiser.len());
        for order in realiser.orders() {
            if order.len() != self.n {
                return Err(PosetError::SizeMismatch {
                    expected: self.n,
                    found: order.len(),
                });
            }
            match order.positions(self.n) {
                Some(p) => positions.push(p),
                None => {
                    return Err(PosetError::SizeMismatch {
                        expected: self.n,
                        found: order.len(),
                    })
                }
            }
        }
        for order in realiser.orders() {
            if !self.is_linear_extension(order) {
                return Ok(false);
            }
        }
        // Incomparable (x, y) needs some order placing y before x; scanning
        // both orientations covers the pair both ways.
        for x in 0..self.n {
            for y in 0..self.n {
                if x == y || self.up[x].contains(y) || self.down[x].contains(y) {
                    continue;
                }
                if !positions.iter().any(|p| p[y] < p[x]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn transpose(rows: &[FixedBitSet], n: usize) -> Vec<FixedBitSet> {
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in rows.iter().enumerate() {
        for j in row.ones() {
            out[j].insert(i);
        }
    }
    out
}

pub(crate) fn check_label(x: usize, n: usize) -> Result<(), PosetError> {
    if x >= 1 && x <= n {
        Ok(())
    } else {
        Err(PosetError::IndexOutOfRange { label: x, n })
    }
}

/// A total order on `1..=n`, stored as the sequence of labels from least to
/// greatest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TotalOrder {
    seq: Vec<usize>,
}

impl TotalOrder {
    pub fn new(seq: Vec<usize>) -> TotalOrder {
        TotalOrder { seq }
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn reversed(&self) -> TotalOrder {
        TotalOrder {
            seq: self.seq.iter().rev().copied().collect(),
        }
    }

    /// `pos[label-1]` = index of `label` in the sequence, or `None` if the
    /// sequence is not a permutation of `1..=n`.
    pub fn positions(&self, n: usize) -> Option<Vec<usize>> {
        if self.seq.len() != n {
            return None;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in self.seq.iter().enumerate() {
            if x < 1 || x > n || pos[x - 1] != usize::MAX {
                return None;
            }
            pos[x - 1] = i;
        }
        Some(pos)
    }

    /// Subsequence of labels contained in `keep` (order preserved).
    pub fn restrict(&self, keep: &[usize]) -> Vec<usize> {
        let set: std::collections::BTreeSet<usize> = keep.iter().copied().collect();
        self.seq
            .iter()
            .copied()
            .filter(|x| set.contains(x))
            .collect()
    }
}

/// A family of total orders intended to intersect to a poset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realiser {
    orders: Vec<TotalOrder>,
}

impl Realiser {
    pub fn new(orders: Vec<TotalOrder>) -> Realiser {
        Realiser { orders }
    }

    pub fn orders(&self) -> &[TotalOrder] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }
}

/// Which side of a bipartite order an element belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Part {
    A,
    B,
}

/// A height-1 order: all relations run from part A to part B. Both parts are
/// antichains by construction.
#[derive(Clone, Debug)]
pub struct BipartiteOrder {
    poset: Poset,
    part: Vec<Part>,
}

impl BipartiteOrder {
    pub fn new(poset: Poset, part: Vec<Part>) -> Result<BipartiteOrder, PosetError> {
        if part.len() != poset.n() {
            return Err(PosetError::SizeMismatch {
                expected: poset.n(),
                found: part.len(),
            });
        }
        for (x, y) in poset.relations() {
            if part[x - 1] != Part::A || part[y - 1] != Part::B {
                return Err(PosetError::NotBipartite);
            }
        }
        Ok(BipartiteOrder { poset, part })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn part(&self, x: usize) -> Part {
        self.part[x - 1]
    }

    /// Labels of part A, ascending.
    pub fn a(&self) -> Vec<usize> {
        (1..=self.poset.n())
            .filter(|&x| self.part[x - 1] == Part::A)
            .collect()
    }

    /// Labels of part B, ascending.
    pub fn b(&self) -> Vec<usize> {
        (1..=self.poset.n())
            .filter(|&x| self.part[x - 1] == Part::B)
            .collect()
    }

    /// Dual order: relations reversed, parts swapped.
    pub fn dual(&self) -> BipartiteOrder {
        let part = self
            .part
            .iter()
            .map(|p| match p {
                Part::A => Part::B,
                Part::B => Part::A,
            })
            .collect();
        BipartiteOrder {
            poset: self.poset.dual(),
            part,
        }
    }
}
