//! Simple undirected graphs on `1..=n` plus the component taxonomy used for
//! cover-graph structure statistics.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex label {label} out of range 1..={n}")]
    IndexOutOfRange { label: usize, n: usize },
    #[error("vertex set is not a single connected component")]
    DisconnectedInput,
}

/// Component class by edge surplus: a connected component on `v` vertices and
/// `e` edges is a tree (`e = v-1`), unicyclic (`e = v`), bicyclic (`e = v+1`)
/// or multicyclic (`e >= v+2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphClass {
    Tree,
    Unicyclic,
    Bicyclic,
    Multicyclic,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Tree => "tree",
            GraphClass::Unicyclic => "unicyclic",
            GraphClass::Bicyclic => "bicyclic",
            GraphClass::Multicyclic => "multicyclic",
        }
    }
}

/// Classification of one connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    pub class: GraphClass,
    /// For bicyclic components: whether the 2-core has the expected degree
    /// profile (exactly two degree-3 vertices, or one degree-4 vertex, all
    /// others degree 2). `None` for other classes.
    pub bicyclic_profile: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a simple graph from an edge list (duplicates collapsed,
    /// self-loops rejected by panic — callers construct from cover arcs or
    /// sampled pairs, which never loop).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(
                u >= 1 && u <= n && v >= 1 && v <= n && u != v,
                "bad edge ({u},{v})"
            );
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        Graph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u - 1].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for &v in &self.adj[u - 1] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s + 1];
            seen[s] = true;
            let mut stack = vec![s + 1];
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if !seen[w - 1] {
                        seen[w - 1] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Classifies the component spanned by `vertices`; the set must be
    /// connected (and in practice a whole component).
    pub fn classify_component(&self, vertices: &[usize]) -> Result<ComponentClass, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::DisconnectedInput);
        }
        let mut inside = vec![false; self.n];
        for &v in vertices {
            if v < 1 || v > self.n {
                return Err(GraphError::IndexOutOfRange {
                    label: v,
                    n: self.n,
                });
            }
            inside[v - 1] = true;
        }
        // Connectivity within the set.
        let mut seen = vec![false; self.n];
        let mut stack = vec![vertices[0]];
        seen[vertices[0] - 1] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if inside[w - 1] && !seen[w - 1] {
                    seen[w - 1] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        let distinct: std::collections::BTreeSet<usize> = vertices.iter().copied().collect();
        if reached != distinct.len() {
            return Err(GraphError::DisconnectedInput);
        }
        let v = distinct.len();
        let e = distinct
            .iter()
            .map(|&u| self.neighbors(u).iter().filter(|&&w| inside[w - 1]).count())
            .sum::<usize>()
            / 2;
        let class = if e + 1 == v {
            GraphClass::Tree
        } else if e == v {
            GraphClass::Unicyclic
        } else if e == v + 1 {
            GraphClass::Bicyclic
        } else {
            GraphClass::Multicyclic
        };
        let bicyclic_profile = if class == GraphClass::Bicyclic {
            let core = self.two_core_within(&distinct);
            let mut deg3 = 0;
            let mut deg4 = 0;
            let mut ok = true;
            for &u in &core {
                let d = self
                    .neighbors(u)
                    .iter()
                    .filter(|&&w| core.contains(&w))
                    .count();
                match d {
                    2 => {}
                    3 => deg3 += 1,
                    4 => deg4 += 1,
                    _ => ok = false,
                }
            }
            ok &= (deg3 == 2 && deg4 == 0) || (deg3 == 0 && deg4 == 1);
            Some(ok)
        } else {
            None
        };
        Ok(ComponentClass {
            class,
            bicyclic_profile,
        })
    }

    /// Iteratively strips degree-1 vertices within `set`; what remains is the
    /// 2-core (the cycle, for a unicyclic component).
    fn two_core_within(
        &self,
        set: &std::collections::BTreeSet<usize>,
    ) -> std::collections::BTreeSet<usize> {
        let mut core = set.clone();
        loop {
            let leaves: Vec<usize> = core
                .iter()
                .copied()
                .filter(|&u| {
                    self.neighbors(u)
                        .iter()
                        .filter(|&&w| core.contains(&w))
                        .count()
                        <= 1
                })
                .collect();
            if leaves.is_empty() {
                return core;
            }
            for u in leaves {
                core.remove(&u);
            }
        }
    }

    /// For a connected unicyclic vertex set: its unique cycle, listed in
    /// traversal order around the cycle. `None` if the 2-core is empty.
    pub fn unique_cycle(&self, vertices: &[usize]) -> Option<Vec<usize>> {
        let set: std::collections::BTreeSet<usize> = vertices.iter().copied().collect();
        let core = self.two_core_within(&set);
        let &start = core.iter().next()?;
        let mut cycle = vec![start];
        let mut prev = 0usize;
        let mut cur = start;
        loop {
            let next = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| core.contains(&w) && w != prev)
                .expect("2-core vertex has two core neighbours");
            if next == start {
                return Some(cycle);
            }
            cycle.push(next);
            prev = cur;
            cur = next;
        }
    }
}
