//! Acceptance suite: one test per shipping criterion, tolerances pinned in
//! the assertions. Each test prints a single PASS line (visible with
//! `--nocapture`; the per-test ok/FAILED line in cargo's output carries the
//! same information).
//!
//! Criterion 11 asserts a closed-form limit gap that the formula
//! γ(c) = 1/6 − 1/ln c − ln(2 ln c)/c cannot meet at any double-precision c
//! (the 1/ln c term alone exceeds the stated 0.001 tolerance until
//! c > e^1000 ≈ 10^434, past the f64 range). The assertion is kept as
//! stated rather than weakened, so that test is expected to fail.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use graphorder::construct::{
    bipartite_split, cosparse_reduction, general_split_first, general_split_second,
    leftshift_realiser, sub_realiser, unicyclic_realiser, HookFamily,
};
use graphorder::dimension::{exact_dimension, DimensionResult};
use graphorder::experiment::{
    check_ds_structure, run_experiment, verify_pmf_exhaustive, CheckKind, ExperimentConfig,
};
use graphorder::graph::{Graph, GraphClass};
use graphorder::numerics::{
    bipartite_lower_curve, dilog, gnp_gamma, solve_alpha, sup_f_check, SupOutcome,
};
use graphorder::poset::{Poset, Realiser, SetClosure, TotalOrder};
use graphorder::random::{
    bipartite_complement_stats, rng_for, sample_bipartite_order, sample_gnp_order, split_seed,
    standard_example, ModelSpec, ThresholdMode, ThresholdParams, DEFAULT_K,
};

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn criterion_01_alpha_at_two_is_one() {
    let start = Instant::now();
    let alpha = solve_alpha(2.0);
    let elapsed = start.elapsed();
    let residual =
        ((std::f64::consts::E.powi(2) / (alpha * alpha)) * (-2.0 * alpha).exp() - 1.0).abs();
    assert!((alpha - 1.0).abs() < 1e-10, "alpha(2) = {alpha}");
    assert!(residual < 1e-12, "substitution residual {residual}");
    assert!(elapsed.as_millis() < 1, "took {elapsed:?}");
    println!("criterion 01 PASS: alpha(2) = {alpha:.15}, residual {residual:.2e}, {elapsed:?}");
}

#[test]
fn criterion_02_dilog_basel_and_reflection() {
    let start = Instant::now();
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    let li_one = dilog(1.0).unwrap();
    assert!((li_one - basel).abs() < 1e-11, "Li2(1) = {li_one}");
    let mut worst = 0.0f64;
    for i in 1..1000 {
        let z = i as f64 / 1000.0;
        let residual =
            (dilog(z).unwrap() + dilog(1.0 - z).unwrap() + z.ln() * (1.0 - z).ln() - basel).abs();
        worst = worst.max(residual);
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-11, "worst reflection residual {worst}");
    assert!(elapsed.as_millis() < 10, "took {elapsed:?}");
    println!(
        "criterion 02 PASS: Li2(1) within {:.2e}, reflection residual {worst:.2e}, {elapsed:?}",
        (li_one - basel).abs()
    );
}

#[test]
fn criterion_03_bipartite_curve_shape() {
    let start = Instant::now();
    let first = bipartite_lower_curve(2.0);
    assert!((first - 0.5).abs() < 1e-12, "curve(2) = {first}");
    let mut prev = first;
    let mut i = 1;
    loop {
        let c = 2.0 + 0.1 * i as f64;
        if c > 30.0 + 1e-9 {
            break;
        }
        let value = bipartite_lower_curve(c);
        assert!(value > prev, "not strictly increasing at c = {c}");
        prev = value;
        i += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}");
    println!("criterion 03 PASS: curve(2) = 0.5, strictly increasing to curve(30) = {prev:.6}, {elapsed:?}");
}

#[test]
fn criterion_04_upset_distribution_exact() {
    let start = Instant::now();
    let mut cases = 0;
    for size_v in 1..=6usize {
        for size_u in 1..=(7 - size_v) {
            for q in [rational(1, 3), rational(1, 2), rational(2, 3)] {
                let report = verify_pmf_exhaustive(size_v, size_u, &q).unwrap();
                assert!(
                    report.pass,
                    "enumeration mismatch at |V| = {size_v}, |U| = {size_u}, q = {q}"
                );
                assert_eq!(report.max_abs_error, 0.0);
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("criterion 04 PASS: {cases} exhaustive cases, zero rational error, {elapsed:?}");
}

#[test]
fn criterion_05_standard_example_dimensions() {
    let start = Instant::now();
    for m in 2..=5usize {
        let order = standard_example(m).unwrap();
        match exact_dimension(order.poset(), 8) {
            DimensionResult::Exact { dim, .. } => {
                assert_eq!(dim, m, "standard example m = {m}");
            }
            DimensionResult::Exceeded { k_max } => {
                panic!("solver exceeded k_max = {k_max} on the m = {m} example")
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("criterion 05 PASS: dim(S_m) = m for m in 2..=5, {elapsed:?}");
}

/// Random tree on `n` vertices from a Prüfer sequence.
fn random_tree(n: usize, rng: &mut ChaCha12Rng) -> Vec<(usize, usize)> {
    assert!(n >= 2);
    if n == 2 {
        return vec![(1, 2)];
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &v in &prufer {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<usize> =
        (1..=n).filter(|&v| degree[v] == 1).collect();
    for &v in &prufer {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let mut last = leaves.into_iter();
    let (u, v) = (last.next().unwrap(), last.next().unwrap());
    edges.push((u, v));
    edges
}

/// Orients each undirected edge uniformly at random; for a forest every arc
/// stays a cover arc of the resulting order.
fn orient(edges: &[(usize, usize)], rng: &mut ChaCha12Rng) -> Vec<(usize, usize)> {
    edges
        .iter()
        .map(|&(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
        .collect()
}

fn random_tree_poset(n: usize, rng: &mut ChaCha12Rng) -> Poset {
    let arcs = orient(&random_tree(n, rng), rng);
    Poset::from_dag(n, &arcs).unwrap()
}

/// Tree plus one extra edge, re-drawn until the cover graph of the sampled
/// order is connected and unicyclic (a cycle arc can be transitively implied
/// and vanish from the cover graph, so rejection is needed).
fn random_unicyclic_poset(n: usize, rng: &mut ChaCha12Rng) -> Poset {
    assert!(n >= 3);
    for _ in 0..500 {
        let mut edges = random_tree(n, rng);
        let extra = loop {
            let u = rng.gen_range(1..=n);
            let v = rng.gen_range(1..=n);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                break key;
            }
        };
        edges.push(extra);
        // A random orientation of the unique cycle may be directed; reject.
        let Ok(poset) = Poset::from_dag(n, &orient(&edges, rng)) else {
            continue;
        };
        let cover = poset.cover_graph();
        let components = cover.components();
        if components.len() != 1 {
            continue;
        }
        if cover.classify_component(&components[0]).unwrap().class == GraphClass::Unicyclic {
            return poset;
        }
    }
    panic!("rejection sampling failed to produce a unicyclic cover graph");
}

#[test]
fn criterion_06_forest_and_unicyclic_bounds() {
    let start = Instant::now();
    let mut rng = rng_for(0x06);
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let poset = random_tree_poset(n, &mut rng);
        match exact_dimension(&poset, 3) {
            DimensionResult::Exact { dim, .. } => assert!(dim <= 3),
            DimensionResult::Exceeded { .. } => panic!("tree cover order of dimension > 3"),
        }
    }
    for _ in 0..500 {
        let n = rng.gen_range(4..=12);
        let poset = random_unicyclic_poset(n, &mut rng);
        match exact_dimension(&poset, 4) {
            DimensionResult::Exact { dim, .. } => assert!(dim <= 4),
            DimensionResult::Exceeded { .. } => panic!("unicyclic cover order of dimension > 4"),
        }
        let realiser = unicyclic_realiser(&poset).unwrap();
        assert!(
            realiser.len() <= 4,
            "construction emitted {} orders",
            realiser.len()
        );
        assert_eq!(poset.is_realiser(&realiser), Ok(true));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    println!("criterion 06 PASS: 500 forest orders dim <= 3, 500 unicyclic dim <= 4 with verified constructions, {elapsed:?}");
}

#[test]
fn criterion_07_construction_contracts() {
    let start = Instant::now();
    let mut rng = rng_for(0x07);

    // bipartite_split: |R| = |R1| + |R2|.
    for trial in 0..200u64 {
        let n = rng.gen_range(3..=8);
        let p = rng.gen_range(0.2..0.7);
        let spec = ModelSpec::bipartite_p(n, p, split_seed(0x0701, trial));
        let (order, _) = sample_bipartite_order(&spec).unwrap();
        let poset = order.poset();
        let a = order.a();
        let take = rng.gen_range(0..=a.len());
        let mut s_a = a.clone();
        s_a.shuffle(&mut rng);
        s_a.truncate(take);
        s_a.sort_unstable();
        let ground1 = poset.up_set(&s_a, SetClosure::Closed).unwrap();
        let mut ground2: Vec<usize> = a.iter().copied().filter(|x| !s_a.contains(x)).collect();
        ground2.extend(order.b());
        let r1 = sub_realiser(poset, &ground1, 8).unwrap();
        let r2 = sub_realiser(poset, &ground2, 8).unwrap();
        let result = bipartite_split(&order, &s_a, &r1, &r2).unwrap();
        assert_eq!(result.len(), r1.len() + r2.len());
        assert_eq!(poset.is_realiser(&result), Ok(true));
    }

    // general_split_first: |R| = 2(|R1| + |R2|).
    for trial in 0..200u64 {
        let n = rng.gen_range(6..=14);
        let spec = ModelSpec::gnp_c(n, 2.0, split_seed(0x0702, trial));
        let (poset, _) = sample_gnp_order(&spec).unwrap();
        let size = rng.gen_range(1..=2.min(n));
        let mut set: Vec<usize> = (1..=n).collect();
        set.shuffle(&mut rng);
        set.truncate(size);
        set.sort_unstable();
        let us = poset.up_set(&set, SetClosure::Closed).unwrap();
        let ds = poset.down_set(&set, SetClosure::Closed).unwrap();
        let mut ground1 = [us.clone(), ds.clone()].concat();
        ground1.sort_unstable();
        ground1.dedup();
        let ground2: Vec<usize> = (1..=n).filter(|x| !set.contains(x)).collect();
        let r1 = sub_realiser(&poset, &ground1, 8).unwrap();
        let r2 = sub_realiser(&poset, &ground2, 8).unwrap();
        let result = general_split_first(&poset, &set, &r1, &r2).unwrap();
        assert_eq!(result.len(), 2 * (r1.len() + r2.len()));
        assert_eq!(poset.is_realiser(&result), Ok(true));

        // general_split_second on the same instance: |R| = |R1|+|R2|+|R3|,
        // realising the suborder on D[S] ∪ U[S] (parent labels).
        let mut ground3 = ground1.clone();
        ground3.retain(|x| !set.contains(x));
        let r1 = sub_realiser(&poset, &ds, 8).unwrap();
        let r2 = sub_realiser(&poset, &us, 8).unwrap();
        let r3 = sub_realiser(&poset, &ground3, 8).unwrap();
        let result = general_split_second(&poset, &set, &r1, &r2, &r3).unwrap();
        assert_eq!(result.len(), r1.len() + r2.len() + r3.len());
        let (sub, map) = poset.induced(&ground1).unwrap();
        let mut inv = vec![0usize; n + 1];
        for (i, &x) in map.iter().enumerate() {
            inv[x] = i + 1;
        }
        let local = Realiser::new(
            result
                .orders()
                .iter()
                .map(|o| TotalOrder::new(o.seq().iter().map(|&x| inv[x]).collect()))
                .collect(),
        );
        assert_eq!(sub.is_realiser(&local), Ok(true));
    }

    // cosparse_reduction + assemble: |R| = d + 1.
    for trial in 0..200u64 {
        let n = rng.gen_range(2..=7);
        let p = rng.gen_range(0.6..0.95);
        let spec = ModelSpec::bipartite_p(n, p, split_seed(0x0703, trial));
        let (order, _) = sample_bipartite_order(&spec).unwrap();
        let reduction = cosparse_reduction(&order);
        let sub = match exact_dimension(reduction.reduced().poset(), 8) {
            DimensionResult::Exact { witness, .. } => witness,
            DimensionResult::Exceeded { .. } => panic!("tiny reduced order exceeded budget"),
        };
        let result = reduction.assemble(&sub).unwrap();
        assert_eq!(result.len(), sub.len() + 1);
        assert_eq!(order.poset().is_realiser(&result), Ok(true));
    }

    // leftshift_realiser: |output| = |F|; a realiser is always a hook family.
    for trial in 0..200u64 {
        let n = rng.gen_range(3..=10);
        let spec = ModelSpec::gnp_c(n, 1.5, split_seed(0x0704, trial));
        let (poset, _) = sample_gnp_order(&spec).unwrap();
        let witness = match exact_dimension(&poset, 8) {
            DimensionResult::Exact { witness, .. } => witness,
            DimensionResult::Exceeded { .. } => panic!("small order exceeded budget"),
        };
        let family = HookFamily::new(witness.orders().to_vec());
        let shifted = leftshift_realiser(&poset, &family).unwrap();
        assert_eq!(shifted.len(), family.len());
        assert_eq!(poset.is_realiser(&shifted), Ok(true));
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    println!("criterion 07 PASS: 200 instances per construction, size contracts and realiser checks hold, {elapsed:?}");
}

#[test]
fn criterion_08_isolated_edge_mean() {
    let start = Instant::now();
    let n = 100usize;
    let q = 0.01f64; // absence probability; edges appear with 1 − q
    let trials = 10_000u64;
    let expected = (n * n) as f64 * q * (1.0 - q).powi(2 * (n as i32 - 1));
    let mut counts = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let spec = ModelSpec::bipartite_p(n, 1.0 - q, split_seed(0x08, trial));
        let (order, graph) = sample_bipartite_order(&spec).unwrap();
        counts.push(bipartite_complement_stats(&order, &graph).isolated_edges as f64);
    }
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64).sqrt();
    let elapsed = start.elapsed();
    assert!(
        (mean - expected).abs() < 3.0 * se,
        "mean {mean} vs expected {expected} (3 se = {})",
        3.0 * se
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 08 PASS: mean {mean:.4} vs n²q(1-q)^(2(n-1)) = {expected:.4} within {:.4}, {elapsed:?}",
        3.0 * se
    );
}

#[test]
fn criterion_09_cover_subgraph_property() {
    let start = Instant::now();
    let params = ThresholdParams::new(DEFAULT_K, 2.0, ThresholdMode::Gnp).unwrap();
    let mut passes = 0;
    for trial in 0..100u64 {
        let spec = ModelSpec::gnp_c(2000, 2.0, split_seed(0x09, trial));
        let (poset, graph) = sample_gnp_order(&spec).unwrap();
        let (_classes, cover_ok) = check_ds_structure(&poset, &graph, &params).unwrap();
        if cover_ok {
            passes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(
        passes,
        100,
        "cover-subgraph property failed in {} trials",
        100 - passes
    );
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("criterion 09 PASS: cover graph of P[D[S]] inside the sampled graph in 100/100 trials at n = 2000, {elapsed:?}");
}

#[test]
fn criterion_10_subcritical_dimension_cap() {
    let start = Instant::now();
    for trial in 0..200u64 {
        let spec = ModelSpec::gnp_c(200, 0.8, split_seed(0x10, trial));
        let (poset, _) = sample_gnp_order(&spec).unwrap();
        match exact_dimension(&poset, 4) {
            DimensionResult::Exact { dim, .. } => {
                assert!(dim <= 4, "trial {trial}: dimension {dim}")
            }
            DimensionResult::Exceeded { .. } => panic!("trial {trial}: dimension exceeds 4"),
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("criterion 10 PASS: dimension <= 4 in 200/200 subcritical trials (c = 0.8, n = 200), {elapsed:?}");
}

#[test]
fn criterion_11_asymptotic_proxies() {
    // Negativity of the rate function at the large-c parameter choice.
    let c: f64 = 500.0;
    let xi = 1.0 / c.ln();
    let beta = (-c / 6.0 + c / c.ln()).exp();
    match sup_f_check(c, xi, beta).unwrap() {
        SupOutcome::Evaluated { sup, feasible, .. } => {
            assert!(feasible, "sup f = {sup} not negative at the large-c choice");
        }
        other => panic!("unexpected geometry failure: {other:?}"),
    }

    // Exploratory dimension histogram just above the phase transition.
    let mut histogram = std::collections::BTreeMap::new();
    for trial in 0..50u64 {
        let spec = ModelSpec::gnp_c(30, 1.2, split_seed(0x11, trial));
        let (poset, _) = sample_gnp_order(&spec).unwrap();
        if let DimensionResult::Exact { dim, .. } = exact_dimension(&poset, 8) {
            *histogram.entry(dim).or_insert(0u64) += 1;
        }
    }
    assert!(!histogram.is_empty());
    println!("criterion 11 exploratory dimension histogram at c = 1.2, n = 30: {histogram:?}");

    // Closed-form limit check as stated: |γ(10⁶) − 1/6| < 0.001. The gap is
    // dominated by 1/ln c ≈ 0.0724 at c = 10⁶ (and stays above 0.001 for
    // every double-precision c), so this assertion fails; see the module
    // docs. Left unweakened on purpose.
    let gamma = gnp_gamma(1e6);
    let gap = (gamma - 1.0 / 6.0).abs();
    println!("criterion 11 gamma(1e6) = {gamma:.6}, |gap to 1/6| = {gap:.6} (required < 0.001)");
    assert!(
        gap < 0.001,
        "criterion 11 FAIL (expected): |gamma(1e6) - 1/6| = {gap:.6} >= 0.001; \
         the 1/ln c term alone is 0.0724 at c = 1e6"
    );
}

#[test]
fn criterion_12_experiment_determinism() {
    let start = Instant::now();
    let stem_a = std::env::temp_dir().join(format!("acc12-a-{}", std::process::id()));
    let stem_b = std::env::temp_dir().join(format!("acc12-b-{}", std::process::id()));
    let config = |stem: &std::path::Path| ExperimentConfig {
        schema: 1,
        spec: ModelSpec::gnp_c(15, 1.0, 2024),
        trials: 60,
        checks: vec![
            CheckKind::Dim,
            CheckKind::Width,
            CheckKind::IncPairs,
            CheckKind::MaxUpdown,
        ],
        k_max: 6,
        threshold_k: DEFAULT_K,
        xi: None,
        extension_samples: 10,
        epsilon: 0.1,
        output: stem.to_str().unwrap().to_owned(),
    };

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    single.install(|| run_experiment(&config(&stem_a)).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap();
    many.install(|| run_experiment(&config(&stem_b)).unwrap());

    let records_a = std::fs::read(stem_a.with_extension("jsonl")).unwrap();
    let records_b = std::fs::read(stem_b.with_extension("jsonl")).unwrap();
    assert!(!records_a.is_empty());
    assert_eq!(
        records_a, records_b,
        "records differ across parallelism degrees"
    );
    let summary_a = std::fs::read(format!("{}_summary.csv", stem_a.display())).unwrap();
    let summary_b = std::fs::read(format!("{}_summary.csv", stem_b.display())).unwrap();
    assert_eq!(summary_a, summary_b);

    for stem in [&stem_a, &stem_b] {
        let _ = std::fs::remove_file(stem.with_extension("jsonl"));
        let _ = std::fs::remove_file(format!("{}_summary.csv", stem.display()));
    }
    let elapsed = start.elapsed();
    println!("criterion 12 PASS: byte-identical records at 1 and 8 threads, {elapsed:?}");
}

/// The graph import is exercised indirectly everywhere; keep a direct hook so
/// the suite fails loudly if the classification API drifts.
#[test]
fn support_graph_classification_sanity() {
    let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
    let components = g.components();
    assert_eq!(components.len(), 1);
    assert_eq!(
        g.classify_component(&components[0]).unwrap().class,
        GraphClass::Unicyclic
    );
}
