//! Random graph order models and threshold-set machinery.
//!
//! Both models are label-respecting: sampled relations only ever point from a
//! smaller label to a larger one, so the identity order is always a linear
//! extension. Sampling is a pure function of the spec (model, n, edge
//! probability, seed): pair Bernoulli draws are consumed in a fixed
//! lexicographic pair order from a ChaCha12 stream seeded with the spec seed,
//! which keeps outputs bit-identical across runs and thread counts.

use crate::graph::Graph;
use crate::poset::{BipartiteOrder, Part, Poset, PosetError, TotalOrder};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default threshold constant; any value above `32 e^2 ≈ 236.5` is admissible.
pub const DEFAULT_K: f64 = 240.0;

#[derive(Debug, Error, PartialEq)]
pub enum RandomError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("threshold mode does not match the supplied order")]
    ModeMismatch,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Gnp,
    Bipartite,
}

/// Parameters of one sampled order. Exactly one of `c` (mean degree, p=c/n)
/// and `p` (edge probability) must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub seed: u64,
}

impl ModelSpec {
    pub fn gnp_c(n: usize, c: f64, seed: u64) -> ModelSpec {
        ModelSpec {
            model: Model::Gnp,
            n,
            c: Some(c),
            p: None,
            seed,
        }
    }

    pub fn gnp_p(n: usize, p: f64, seed: u64) -> ModelSpec {
        ModelSpec {
            model: Model::Gnp,
            n,
            c: None,
            p: Some(p),
            seed,
        }
    }

    pub fn bipartite_c(n: usize, c: f64, seed: u64) -> ModelSpec {
        ModelSpec {
            model: Model::Bipartite,
            n,
            c: Some(c),
            p: None,
            seed,
        }
    }

    pub fn bipartite_p(n: usize, p: f64, seed: u64) -> ModelSpec {
        ModelSpec {
            model: Model::Bipartite,
            n,
            p: Some(p),
            c: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), RandomError> {
        if self.n == 0 {
            return Err(RandomError::InvalidParameter("n must be at least 1".into()));
        }
        match (self.c, self.p) {
            (Some(c), None) => {
                if !c.is_finite() || c < 0.0 {
                    return Err(RandomError::InvalidParameter(format!("c={c} must be >= 0")));
                }
            }
            (None, Some(p)) => {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(RandomError::InvalidParameter(format!(
                        "p={p} must be in [0,1]"
                    )));
                }
            }
            _ => {
                return Err(RandomError::InvalidParameter(
                    "exactly one of c and p must be given".into(),
                ))
            }
        }
        Ok(())
    }

    /// Edge probability, plus a flag reporting whether `c/n` had to be
    /// clamped into `[0,1]` (i.e. `c > n`).
    pub fn edge_probability(&self) -> (f64, bool) {
        match (self.c, self.p) {
            (Some(c), None) => {
                let raw = c / self.n as f64;
                (raw.clamp(0.0, 1.0), raw > 1.0)
            }
            (None, Some(p)) => (p, false),
            _ => (f64::NAN, false),
        }
    }

    /// Copy of this spec with a different seed (used for per-trial splits).
    pub fn with_seed(&self, seed: u64) -> ModelSpec {
        ModelSpec {
            seed,
            ..self.clone()
        }
    }
}

/// SplitMix64 output step: the per-trial seed derivation
/// `trial_seed = splitmix64(master + (index+1) * GAMMA)`.
pub fn split_seed(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Samples the random graph order of G(n, p): an edge `{i, j}` with `i < j`
/// becomes the relation `i < j` and the order is the transitive closure.
/// Returns the order together with the sampled (undirected) graph.
pub fn sample_gnp_order(spec: &ModelSpec) -> Result<(Poset, Graph), RandomError> {
    spec.validate()?;
    if spec.model != Model::Gnp {
        return Err(RandomError::ModeMismatch);
    }
    let (p, _) = spec.edge_probability();
    let n = spec.n;
    let mut rng = rng_for(spec.seed);
    let mut arcs = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if rng.gen_bool(p) {
                arcs.push((i, j));
            }
        }
    }
    let graph = Graph::from_edges(n, &arcs);
    let poset = Poset::from_dag(n, &arcs)?;
    Ok((poset, graph))
}

/// Samples the bipartite random graph order of B(n, n, p): parts
/// `A = 1..=n` and `B = n+1..=2n`, with `a < b` exactly when `{a, b}` is an
/// edge. No transitive compositions arise, so relations equal edges.
pub fn sample_bipartite_order(spec: &ModelSpec) -> Result<(BipartiteOrder, Graph), RandomError> {
    spec.validate()?;
    if spec.model != Model::Bipartite {
        return Err(RandomError::ModeMismatch);
    }
    let (p, _) = spec.edge_probability();
    let n = spec.n;
    let mut rng = rng_for(spec.seed);
    let mut arcs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if rng.gen_bool(p) {
                arcs.push((i, n + j));
            }
        }
    }
    let graph = Graph::from_edges(2 * n, &arcs);
    let poset = Poset::from_dag(2 * n, &arcs)?;
    let part = (0..2 * n)
        .map(|i| if i < n { Part::A } else { Part::B })
        .collect();
    Ok((BipartiteOrder::new(poset, part)?, graph))
}

/// The standard example S_m: `a_i < b_j` iff `i != j`, with
/// `a_i = i` and `b_j = m + j`. Its dimension is exactly `m`.
pub fn standard_example(m: usize) -> Result<BipartiteOrder, RandomError> {
    if m < 2 {
        return Err(RandomError::InvalidParameter(format!(
            "standard example needs m >= 2, got {m}"
        )));
    }
    let mut arcs = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            if i != j {
                arcs.push((i, m + j));
            }
        }
    }
    let poset = Poset::from_dag(2 * m, &arcs)?;
    let part = (0..2 * m)
        .map(|i| if i < m { Part::A } else { Part::B })
        .collect();
    Ok(BipartiteOrder::new(poset, part)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Bipartite,
    Gnp,
}

/// Threshold constants. The derived cut `alpha` is `K*c` in bipartite mode
/// and `K*c*e^c` otherwise; the non-bipartite element cut is `10*K*c*alpha`.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdParams {
    pub k: f64,
    pub c: f64,
    pub mode: ThresholdMode,
}

impl ThresholdParams {
    pub fn new(k: f64, c: f64, mode: ThresholdMode) -> Result<ThresholdParams, RandomError> {
        if !k.is_finite() || k <= 0.0 {
            return Err(RandomError::InvalidParameter(format!(
                "K={k} must be positive"
            )));
        }
        if !c.is_finite() || c < 0.0 {
            return Err(RandomError::InvalidParameter(format!("c={c} must be >= 0")));
        }
        Ok(ThresholdParams { k, c, mode })
    }

    pub fn alpha(&self) -> f64 {
        match self.mode {
            ThresholdMode::Bipartite => self.k * self.c,
            ThresholdMode::Gnp => self.k * self.c * self.c.exp(),
        }
    }

    /// Cut on `|D[x] ∪ U[x]|` in non-bipartite mode.
    pub fn gnp_cutoff(&self) -> f64 {
        10.0 * self.k * self.c * self.alpha()
    }
}

/// High-degree vertex sets of a bipartite order: elements of each part with
/// graph degree at least `alpha`.
pub fn bipartite_threshold_sets(
    order: &BipartiteOrder,
    graph: &Graph,
    params: &ThresholdParams,
) -> Result<(Vec<usize>, Vec<usize>), RandomError> {
    if params.mode != ThresholdMode::Bipartite {
        return Err(RandomError::ModeMismatch);
    }
    let alpha = params.alpha();
    let pick = |side: Vec<usize>| -> Vec<usize> {
        side.into_iter()
            .filter(|&x| graph.degree(x) as f64 >= alpha)
            .collect()
    };
    Ok((pick(order.a()), pick(order.b())))
}

/// High-connectivity element set of a general order: elements whose combined
/// up+down set size reaches the cut `10*K*c*alpha`.
pub fn gnp_threshold_set(
    poset: &Poset,
    params: &ThresholdParams,
) -> Result<Vec<usize>, RandomError> {
    if params.mode != ThresholdMode::Gnp {
        return Err(RandomError::ModeMismatch);
    }
    let cutoff = params.gnp_cutoff();
    Ok((1..=poset.n())
        .filter(|&x| poset.updown_size(x) as f64 >= cutoff)
        .collect())
}

/// Complement structure of a bipartite order: elements comparable to the whole
/// opposite part, and isolated edges of the bipartite complement graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementStats {
    /// Components of order exactly 2 in the complement: pairs (a, b) not
    /// related in P whose complement degrees are both 1.
    pub isolated_edges: usize,
    /// Elements of A comparable to every element of B.
    pub a_prime: Vec<usize>,
    /// Elements of B comparable to every element of A.
    pub b_prime: Vec<usize>,
}

pub fn bipartite_complement_stats(order: &BipartiteOrder, graph: &Graph) -> ComplementStats {
    let a = order.a();
    let b = order.b();
    let a_prime: Vec<usize> = a
        .iter()
        .copied()
        .filter(|&x| graph.degree(x) == b.len())
        .collect();
    let b_prime: Vec<usize> = b
        .iter()
        .copied()
        .filter(|&y| graph.degree(y) == a.len())
        .collect();
    let mut isolated = 0usize;
    for &x in &a {
        if b.len() - graph.degree(x) != 1 {
            continue;
        }
        // The unique complement-neighbour of x.
        let y = b
            .iter()
            .copied()
            .find(|&y| !graph.has_edge(x, y))
            .expect("complement degree 1 implies a missing edge");
        if a.len() - graph.degree(y) == 1 {
            isolated += 1;
        }
    }
    ComplementStats {
        isolated_edges: isolated,
        a_prime,
        b_prime,
    }
}

/// Linear extension sampled by topological sort with uniformly random
/// tie-breaking among currently minimal elements (not uniform over all
/// extensions).
pub fn random_linear_extension<R: Rng>(poset: &Poset, rng: &mut R) -> TotalOrder {
    let n = poset.n();
    let mut remaining_preds: Vec<usize> =
        (1..=n).map(|x| poset.down_row(x).count_ones(..)).collect();
    let mut available: Vec<usize> = (1..=n).filter(|&x| remaining_preds[x - 1] == 0).collect();
    let mut seq = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while !available.is_empty() {
        let idx = rng.gen_range(0..available.len());
        let x = available.swap_remove(idx);
        placed[x - 1] = true;
        seq.push(x);
        for y in poset.up_row(x).ones().map(|i| i + 1) {
            if placed[y - 1] {
                continue;
            }
            remaining_preds[y - 1] -= 1;
            if remaining_preds[y - 1] == 0 && poset.down_row(y).ones().all(|i| placed[i]) {
                available.push(y);
            }
        }
    }
    debug_assert_eq!(seq.len(), n);
    TotalOrder::new(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::SetClosure;

    #[test]
    fn model_spec_json_round_trip() {
        let text = r#"{"model":"gnp","n":100,"c":2.0,"seed":7}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.model, Model::Gnp);
        assert_eq!(spec.n, 100);
        assert_eq!(spec.c, Some(2.0));
        spec.validate().unwrap();
        let back = serde_json::to_string(&spec).unwrap();
        assert_eq!(back, r#"{"model":"gnp","n":100,"c":2.0,"seed":7}"#);
        let bip: ModelSpec =
            serde_json::from_str(r#"{"model":"bipartite","n":5,"p":0.25,"seed":1}"#).unwrap();
        bip.validate().unwrap();
        assert!(
            serde_json::from_str::<ModelSpec>(r#"{"model":"gnp","n":5,"seed":1,"x":2}"#).is_err()
        );
        let both = ModelSpec {
            model: Model::Gnp,
            n: 5,
            c: Some(1.0),
            p: Some(0.5),
            seed: 0,
        };
        assert!(both.validate().is_err());
        let neither = ModelSpec {
            model: Model::Gnp,
            n: 5,
            c: None,
            p: None,
            seed: 0,
        };
        assert!(neither.validate().is_err());
    }

    #[test]
    fn edge_probability_clamps_large_c() {
        let spec = ModelSpec::gnp_c(10, 25.0, 0);
        assert_eq!(spec.edge_probability(), (1.0, true));
        let spec = ModelSpec::gnp_c(10, 5.0, 0);
        assert_eq!(spec.edge_probability(), (0.5, false));
    }

    #[test]
    fn gnp_extremes() {
        let (p0, g0) = sample_gnp_order(&ModelSpec::gnp_p(8, 0.0, 3)).unwrap();
        assert_eq!(p0, Poset::antichain(8));
        assert_eq!(g0.edge_count(), 0);
        let (p1, g1) = sample_gnp_order(&ModelSpec::gnp_p(8, 1.0, 3)).unwrap();
        assert_eq!(p1, Poset::chain(8));
        assert_eq!(g1.edge_count(), 28);
    }

    #[test]
    fn gnp_is_label_respecting_and_deterministic() {
        let spec = ModelSpec::gnp_c(40, 3.0, 99);
        let (p, g) = sample_gnp_order(&spec).unwrap();
        let (p2, g2) = sample_gnp_order(&spec).unwrap();
        assert_eq!(p, p2);
        assert_eq!(g, g2);
        for (x, y) in p.relations() {
            assert!(x < y);
        }
        let (p3, _) = sample_gnp_order(&spec.with_seed(100)).unwrap();
        assert_ne!(p, p3, "different seeds should differ at this size");
    }

    #[test]
    fn bipartite_extremes_and_edge_identity() {
        let (b1, g1) = sample_bipartite_order(&ModelSpec::bipartite_p(4, 1.0, 5)).unwrap();
        assert_eq!(b1.poset().relation_count(), 16);
        assert_eq!(g1.edge_count(), 16);
        let (b0, _) = sample_bipartite_order(&ModelSpec::bipartite_p(4, 0.0, 5)).unwrap();
        assert_eq!(b0.poset().relation_count(), 0);
        let (b, g) = sample_bipartite_order(&ModelSpec::bipartite_p(9, 0.4, 11)).unwrap();
        // Relations coincide with edges.
        assert_eq!(b.poset().relation_count(), g.edge_count());
        for (x, y) in b.poset().relations() {
            assert!(g.has_edge(x, y));
            assert!(x <= 9 && y > 9);
        }
    }

    #[test]
    fn mode_mismatch_is_reported() {
        let spec = ModelSpec::bipartite_p(4, 0.5, 1);
        assert_eq!(
            sample_gnp_order(&spec).unwrap_err(),
            RandomError::ModeMismatch
        );
        let spec = ModelSpec::gnp_c(4, 1.0, 1);
        assert_eq!(
            sample_bipartite_order(&spec).unwrap_err(),
            RandomError::ModeMismatch
        );
    }

    #[test]
    fn standard_example_structure() {
        let s2 = standard_example(2).unwrap();
        // Cover graph of the m=2 example: complete bipartite minus a perfect
        // matching, i.e. the two crossing edges a1-b2 and a2-b1.
        let g = s2.poset().cover_graph();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 4) && g.has_edge(2, 3) && !g.has_edge(1, 3));
        let s3 = standard_example(3).unwrap();
        assert_eq!(
            s3.poset().up_set(&[1], SetClosure::Open).unwrap(),
            vec![5, 6] // a_1 < b_2, b_3
        );
        assert!(standard_example(1).is_err());
    }

    #[test]
    fn threshold_sets_bipartite() {
        let (b, g) = sample_bipartite_order(&ModelSpec::bipartite_p(3, 1.0, 2)).unwrap();
        // Complete bipartite order, alpha = K*c = 2 with K=1, c=2.
        let params = ThresholdParams::new(1.0, 2.0, ThresholdMode::Bipartite).unwrap();
        let (sa, sb) = bipartite_threshold_sets(&b, &g, &params).unwrap();
        assert_eq!(sa, vec![1, 2, 3]);
        assert_eq!(sb, vec![4, 5, 6]);
        let (b0, g0) = sample_bipartite_order(&ModelSpec::bipartite_p(3, 0.0, 2)).unwrap();
        let (sa, sb) = bipartite_threshold_sets(&b0, &g0, &params).unwrap();
        assert!(sa.is_empty() && sb.is_empty());
        assert_eq!(
            gnp_threshold_set(b.poset(), &params).unwrap_err(),
            RandomError::ModeMismatch
        );
    }

    #[test]
    fn threshold_set_gnp_chain() {
        // Chain on 10 elements: |D[x] ∪ U[x]| = 10 for every x. Pick K, c so
        // the cutoff lands at 5: 10*K*c*(K*c*e^c) = 5 with c = 1.
        let chain = Poset::chain(10);
        let k = (5.0 / (10.0 * 1.0f64.exp())).sqrt();
        let params = ThresholdParams::new(k, 1.0, ThresholdMode::Gnp).unwrap();
        assert!((params.gnp_cutoff() - 5.0).abs() < 1e-9);
        let s = gnp_threshold_set(&chain, &params).unwrap();
        assert_eq!(s, (1..=10).collect::<Vec<_>>());
        // Antichain: |D[x] ∪ U[x]| = 1 < 5 everywhere.
        assert!(gnp_threshold_set(&Poset::antichain(10), &params)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn complement_stats_extremes() {
        let params = ModelSpec::bipartite_p(4, 1.0, 7);
        let (b, g) = sample_bipartite_order(&params).unwrap();
        let stats = bipartite_complement_stats(&b, &g);
        assert_eq!(stats.isolated_edges, 0);
        assert_eq!(stats.a_prime, vec![1, 2, 3, 4]);
        assert_eq!(stats.b_prime, vec![5, 6, 7, 8]);
        let (b0, g0) = sample_bipartite_order(&ModelSpec::bipartite_p(4, 0.0, 7)).unwrap();
        let stats = bipartite_complement_stats(&b0, &g0);
        assert_eq!(stats.isolated_edges, 0);
        assert!(stats.a_prime.is_empty() && stats.b_prime.is_empty());
    }

    #[test]
    fn complement_isolated_edge_counted() {
        // n = 2, single missing edge (1, 4): complement degrees of 1 and 4 are
        // both 1, so the complement has exactly one isolated edge.
        let poset = Poset::from_dag(4, &[(1, 3), (2, 3), (2, 4)]).unwrap();
        let order = BipartiteOrder::new(poset, vec![Part::A, Part::A, Part::B, Part::B]).unwrap();
        let graph = Graph::from_edges(4, &[(1, 3), (2, 3), (2, 4)]);
        let stats = bipartite_complement_stats(&order, &graph);
        assert_eq!(stats.isolated_edges, 1);
    }

    #[test]
    fn split_seed_spreads() {
        let s: std::collections::BTreeSet<u64> = (0..1000).map(|i| split_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(split_seed(42, 0), split_seed(43, 0));
    }

    #[test]
    fn random_extension_is_linear_extension() {
        let mut rng = rng_for(5);
        for seed in 0..20u64 {
            let (p, _) = sample_gnp_order(&ModelSpec::gnp_c(30, 2.0, seed)).unwrap();
            let ext = random_linear_extension(&p, &mut rng);
            assert!(p.is_linear_extension(&ext));
        }
    }
}
