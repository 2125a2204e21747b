//! Constructive realiser decompositions.
//!
//! The central device is the *hook condition* on a family of total orders F:
//! for every ordered pair with `x ≰ y` some member of F must place `y`
//! strictly before the whole closed up-set `U[x]`. Such a family is not
//! itself a realiser, but [`leftshift_realiser`] converts it into one of the
//! same size by re-sorting each member on the position of the earliest
//! element of `U[x]`.
//!
//! The split constructions assemble hook families out of realisers of
//! induced suborders (block concatenations of restricted orders) and then
//! left-shift, so their size contracts are exact:
//!
//! * [`bipartite_split`]: `|R1| + |R2|` for a height-1 order split along a
//!   subset of the bottom part;
//! * [`general_split_first`]: `2(|R1| + |R2|)` for an arbitrary order split
//!   along any subset S;
//! * [`general_split_second`]: `|R1| + |R2| + |R3|`, realising the suborder
//!   on `D[S] ∪ U[S]`;
//! * [`unicyclic_realiser`]: ≤ 4 orders for a connected unicyclic cover
//!   graph, built directly (no hook detour) from 3-realisers of the two
//!   sides of the cycle's top vertex;
//! * [`cosparse_reduction`]: strips elements comparable to a whole part and
//!   lifts any realiser of the remainder, adding one order.
//!
//! Sub-realisers are given in the labels of the parent poset (the order
//! sequences list original labels). Every entry point verifies its inputs
//! with `is_realiser` on the induced suborder and its output with
//! `is_realiser` on the target, so a wrong reading of a construction fails
//! loudly rather than silently.

use crate::dimension::{exact_dimension, DimensionResult};
use crate::poset::{BipartiteOrder, Part, Poset, PosetError, Realiser, SetClosure, TotalOrder};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("family contains no orders")]
    EmptyFamily,
    #[error("order {index} in the family is not a permutation of the ground set")]
    NotPermutation { index: usize },
    #[error("hook condition fails at ({x}, {y}): no order places {y} before all of U[{x}]")]
    HookViolation { x: usize, y: usize },
    #[error("label {label} is not in part {part} of the bipartite order")]
    NotInPart { label: usize, part: char },
    #[error("supplied realiser does not realise the {which} suborder")]
    SubRealiserInvalid { which: String },
    #[error("cover graph is disconnected")]
    CoverGraphDisconnected,
    #[error("cover graph is not unicyclic")]
    CoverGraphNotUnicyclic,
    #[error("dimension of the {which} suborder exceeds the budget k_max = {k_max}")]
    BudgetExceeded { which: String, k_max: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A family of total orders over a poset's full ground set — candidate input
/// for [`leftshift_realiser`]. Members need not be linear extensions.
#[derive(Debug, Clone)]
pub struct HookFamily {
    orders: Vec<TotalOrder>,
}

impl HookFamily {
    pub fn new(orders: Vec<TotalOrder>) -> HookFamily {
        HookFamily { orders }
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

/// The linear extension that repeatedly takes the smallest-labelled minimal
/// element. Equals the identity permutation whenever the identity is itself
/// an extension (true for all sampled orders, which respect labels), and
/// stays a valid extension on arbitrarily labelled posets.
pub fn natural_extension(p: &Poset) -> TotalOrder {
    let n = p.n();
    let mut indeg: Vec<usize> = (1..=n).map(|x| p.down_row(x).count_ones(..)).collect();
    let mut ready: std::collections::BTreeSet<usize> =
        (1..=n).filter(|&x| indeg[x - 1] == 0).collect();
    let mut seq = Vec::with_capacity(n);
    while let Some(&x) = ready.iter().next() {
        ready.remove(&x);
        seq.push(x);
        for y in p.up_row(x).ones() {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert(y + 1);
            }
        }
    }
    debug_assert_eq!(seq.len(), n);
    TotalOrder::new(seq)
}

/// Per order: element positions and the position of the earliest element of
/// each closed up-set.
type OrderKeys = (Vec<usize>, Vec<usize>);

/// Position tables plus, per order, the position of the earliest element of
/// each closed up-set. Shared by the hook check and the left shift.
fn up_set_keys(p: &Poset, family: &HookFamily) -> Result<Vec<OrderKeys>, ConstructError> {
    if family.is_empty() {
        return Err(ConstructError::EmptyFamily);
    }
    let n = p.n();
    let mut tables = Vec::with_capacity(family.len());
    for (index, order) in family.orders().iter().enumerate() {
        let pos = order
            .positions(n)
            .ok_or(ConstructError::NotPermutation { index })?;
        let mut key = vec![usize::MAX; n];
        for x in 1..=n {
            let mut m = pos[x - 1];
            for u in p.up_row(x).ones() {
                m = m.min(pos[u]);
            }
            key[x - 1] = m;
        }
        tables.push((pos, key));
    }
    Ok(tables)
}

/// Exhaustive hook-condition check: for every ordered pair with `x ≰ y`,
/// some order must place `y` before every element of `U[x]`. The first
/// violation in ascending `(x, y)` scan order is reported.
pub fn check_hook_condition(p: &Poset, family: &HookFamily) -> Result<(), ConstructError> {
    let tables = up_set_keys(p, family)?;
    let n = p.n();
    for x in 1..=n {
        for y in 1..=n {
            if x == y || p.leq(x, y) {
                continue;
            }
            let hooked = tables.iter().any(|(pos, key)| pos[y - 1] < key[x - 1]);
            if !hooked {
                return Err(ConstructError::HookViolation { x, y });
            }
        }
    }
    Ok(())
}

/// Turns a hook family into a realiser of the same size: each order is
/// re-sorted
/// ascending on the position of the earliest element of `U[x]`, ties broken
/// by a fixed base extension. Output orders are always linear extensions
/// (up-set keys are monotone under `x < y`), and every hooked pair ends up
/// reversed, so the result is a realiser; this is asserted before returning.
pub fn leftshift_realiser(p: &Poset, family: &HookFamily) -> Result<Realiser, ConstructError> {
    check_hook_condition(p, family)?;
    let tables = up_set_keys(p, family)?;
    let n = p.n();
    let base = natural_extension(p);
    let base_pos = base.positions(n).expect("extension is a permutation");
    let mut orders = Vec::with_capacity(tables.len());
    for (_, key) in &tables {
        let mut seq: Vec<usize> = (1..=n).collect();
        seq.sort_by_key(|&x| (key[x - 1], base_pos[x - 1]));
        orders.push(TotalOrder::new(seq));
    }
    let realiser = Realiser::new(orders);
    assert!(
        p.is_realiser(&realiser)
            .expect("left-shift output is well-formed"),
        "internal error: left-shift output failed realiser verification"
    );
    Ok(realiser)
}

// ── shared plumbing for the split constructions ──────────────────────────

/// Concatenates blocks into one sequence; when an element occurs in more
/// than one block the **last** occurrence wins. This is the overlap policy
/// for the bipartite split, whose middle block may repeat elements of the
/// trailing sub-realiser block.
fn concat_keep_last(blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut rev = Vec::new();
    for block in blocks.iter().rev() {
        for &x in block.iter().rev() {
            if seen.insert(x) {
                rev.push(x);
            }
        }
    }
    rev.reverse();
    rev
}

/// Concatenates provably disjoint blocks; a repeated element here would mean
/// a construction bug, so it panics rather than deduplicating.
fn concat_disjoint(blocks: &[Vec<usize>]) -> Vec<usize> {
    let seq: Vec<usize> = blocks.iter().flatten().copied().collect();
    let mut sorted = seq.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(
        sorted.len(),
        seq.len(),
        "internal error: overlapping blocks"
    );
    seq
}

/// Checks that `r` realises the suborder induced on `ground` (orders given
/// in parent labels). Returns the induced poset and its label map.
fn validate_sub_realiser(
    p: &Poset,
    ground: &[usize],
    r: &Realiser,
    which: &str,
) -> Result<(Poset, Vec<usize>), ConstructError> {
    let invalid = || ConstructError::SubRealiserInvalid {
        which: which.to_string(),
    };
    let (q, map) = p.induced_allow_empty(ground);
    let mut inv = vec![usize::MAX; p.n() + 1];
    for (i, &x) in map.iter().enumerate() {
        inv[x] = i + 1;
    }
    let mut local = Vec::with_capacity(r.len());
    for order in r.orders() {
        let mut seq = Vec::with_capacity(order.len());
        for &x in order.seq() {
            if x > p.n() || inv[x] == usize::MAX {
                return Err(invalid());
            }
            seq.push(inv[x]);
        }
        local.push(TotalOrder::new(seq));
    }
    match q.is_realiser(&Realiser::new(local)) {
        Ok(true) => Ok((q, map)),
        _ => Err(invalid()),
    }
}

fn relabel(orders: &[TotalOrder], map: &[usize]) -> Vec<TotalOrder> {
    orders
        .iter()
        .map(|o| TotalOrder::new(o.seq().iter().map(|&l| map[l - 1]).collect()))
        .collect()
}

/// Exact realiser of the suborder induced on `ground`, written in parent
/// labels. Plumbing for feeding the split constructions from the solver.
pub fn sub_realiser(p: &Poset, ground: &[usize], k_max: usize) -> Result<Realiser, ConstructError> {
    let (q, map) = p.induced_allow_empty(ground);
    match exact_dimension(&q, k_max) {
        DimensionResult::Exact { witness, .. } => {
            Ok(Realiser::new(relabel(witness.orders(), &map)))
        }
        DimensionResult::Exceeded { k_max } => Err(ConstructError::BudgetExceeded {
            which: "induced".to_string(),
            k_max,
        }),
    }
}

fn sorted_set(labels: &[usize]) -> Vec<usize> {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

// ── bipartite split ──────────────────────────────────────────────────────

/// Splits a height-1 order along `s_a ⊆ A`: with `A₁ = s_a`, `A₂ = A∖A₁`,
/// `B₁ = U(A₁)`, `B₂ = U(A₂)`, the hook family consists of
/// `L̂|_{A∖Aᵢ} ++ L̂|_{B∖Bᵢ} ++ Lⱼⁱ` over both sub-realisers, with repeated
/// elements resolved in favour of the sub-realiser block (keep-last).
///
/// `r1` must realise the suborder on `U[s_a]`, `r2` the suborder on
/// `(A ∪ B) ∖ s_a`; the output realises the whole order with exactly
/// `|r1| + |r2|` orders.
pub fn bipartite_split(
    order: &BipartiteOrder,
    s_a: &[usize],
    r1: &Realiser,
    r2: &Realiser,
) -> Result<Realiser, ConstructError> {
    let p = order.poset();
    let n = p.n();
    for &x in s_a {
        if x < 1 || x > n {
            return Err(PosetError::IndexOutOfRange { label: x, n }.into());
        }
        if order.part(x) != Part::A {
            return Err(ConstructError::NotInPart {
                label: x,
                part: 'A',
            });
        }
    }
    let a1 = sorted_set(s_a);
    let ground1 = p.up_set(&a1, SetClosure::Closed)?;
    let a2: Vec<usize> = order.a().into_iter().filter(|x| !a1.contains(x)).collect();
    let b2 = p.up_set(&a2, SetClosure::Open)?;
    let mut ground2 = a2.clone();
    ground2.extend(order.b());
    validate_sub_realiser(p, &ground1, r1, "U[S_A]")?;
    validate_sub_realiser(p, &ground2, r2, "complement")?;

    let lhat = natural_extension(p);
    let in_ground1: Vec<bool> = membership(n, &ground1);
    let in_b2: Vec<bool> = membership(n, &b2);
    let b_minus_b1: Vec<usize> = order
        .b()
        .into_iter()
        .filter(|&x| !in_ground1[x - 1]) // B₁ = U(A₁) is exactly ground1 ∩ B
        .collect();
    let b_minus_b2: Vec<usize> = order.b().into_iter().filter(|&x| !in_b2[x - 1]).collect();

    let mut family = Vec::with_capacity(r1.len() + r2.len());
    let prefix1 = lhat.restrict(&a2);
    let mid1 = lhat.restrict(&b_minus_b1);
    for sub in r1.orders() {
        family.push(TotalOrder::new(concat_keep_last(&[
            prefix1.clone(),
            mid1.clone(),
            sub.seq().to_vec(),
        ])));
    }
    let prefix2 = lhat.restrict(&a1);
    let mid2 = lhat.restrict(&b_minus_b2);
    for sub in r2.orders() {
        family.push(TotalOrder::new(concat_keep_last(&[
            prefix2.clone(),
            mid2.clone(),
            sub.seq().to_vec(),
        ])));
    }
    leftshift_realiser(p, &HookFamily::new(family))
}

/// Mirror of [`bipartite_split`] that splits along a subset of the top part:
/// `r1` realises the suborder on `D[s_b]`, `r2` the suborder on
/// `(A ∪ B) ∖ s_b`. Implemented on the dual order (where `s_b` is a bottom
/// set) with every order reversed on the way in and out.
pub fn bipartite_split_dual(
    order: &BipartiteOrder,
    s_b: &[usize],
    r1: &Realiser,
    r2: &Realiser,
) -> Result<Realiser, ConstructError> {
    for &x in s_b {
        if x >= 1 && x <= order.poset().n() && order.part(x) != Part::B {
            return Err(ConstructError::NotInPart {
                label: x,
                part: 'B',
            });
        }
    }
    let dual = order.dual();
    let reversed = bipartite_split(&dual, s_b, &reverse_all(r1), &reverse_all(r2))?;
    let out = reverse_all(&reversed);
    assert!(
        order.poset().is_realiser(&out).expect("well-formed output"),
        "internal error: dual split output failed realiser verification"
    );
    Ok(out)
}

fn reverse_all(r: &Realiser) -> Realiser {
    Realiser::new(r.orders().iter().map(TotalOrder::reversed).collect())
}

fn membership(n: usize, labels: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &x in labels {
        m[x - 1] = true;
    }
    m
}

// ── general splits ───────────────────────────────────────────────────────

/// Splits an arbitrary order along any `s ⊆ V`. With `W` the elements
/// incomparable-or-unrelated to `s` (outside `U[s] ∪ D[s]`), the hook family
/// is, for every order `L¹ⱼ` of `r1` and `L²ᵢ` of `r2`:
/// `L²₁|_W ++ L¹ⱼ`, `L¹ⱼ ++ L²₁|_W`, `L¹₁|_s ++ L²ᵢ`, `L²ᵢ ++ L¹₁|_s`.
///
/// `r1` must realise the suborder on `D[s] ∪ U[s]`, `r2` the suborder on
/// `V ∖ s`; the output realises the whole order with `2(|r1| + |r2|)`
/// orders.
pub fn general_split_first(
    p: &Poset,
    s: &[usize],
    r1: &Realiser,
    r2: &Realiser,
) -> Result<Realiser, ConstructError> {
    let set = sorted_set(s);
    let us = p.up_set(&set, SetClosure::Closed)?;
    let ds = p.down_set(&set, SetClosure::Closed)?;
    let ground1 = sorted_set(&[us.clone(), ds.clone()].concat());
    let in_ground1 = membership(p.n(), &ground1);
    let in_set = membership(p.n(), &set);
    let ground2: Vec<usize> = (1..=p.n()).filter(|&x| !in_set[x - 1]).collect();
    let w: Vec<usize> = (1..=p.n()).filter(|&x| !in_ground1[x - 1]).collect();
    validate_sub_realiser(p, &ground1, r1, "D[S] ∪ U[S]")?;
    validate_sub_realiser(p, &ground2, r2, "V ∖ S")?;

    let w_block = r2.orders()[0].restrict(&w);
    let s_block = r1.orders()[0].restrict(&set);
    let mut family = Vec::with_capacity(2 * (r1.len() + r2.len()));
    for sub in r1.orders() {
        family.push(TotalOrder::new(concat_disjoint(&[
            w_block.clone(),
            sub.seq().to_vec(),
        ])));
        family.push(TotalOrder::new(concat_disjoint(&[
            sub.seq().to_vec(),
            w_block.clone(),
        ])));
    }
    for sub in r2.orders() {
        family.push(TotalOrder::new(concat_disjoint(&[
            s_block.clone(),
            sub.seq().to_vec(),
        ])));
        family.push(TotalOrder::new(concat_disjoint(&[
            sub.seq().to_vec(),
            s_block.clone(),
        ])));
    }
    leftshift_realiser(p, &HookFamily::new(family))
}

/// Realises the suborder on `D[s] ∪ U[s]` from realisers of three smaller
/// pieces: `r1` on `D[s]`, `r2` on `U[s]`, and `r3` on
/// `(U[s] ∖ s) ∪ (D[s] ∖ s)`. The hook family (over the induced suborder)
/// is `L¹₁|_{D[s]∖U[s]} ++ L²ⱼ`, `L¹ᵢ ++ L²₁|_{U[s]∖D[s]}`, and
/// `L³ₖ ++ L¹₁|_s`. Output orders are written in parent labels; the size is
/// exactly `|r1| + |r2| + |r3|`.
pub fn general_split_second(
    p: &Poset,
    s: &[usize],
    r1: &Realiser,
    r2: &Realiser,
    r3: &Realiser,
) -> Result<Realiser, ConstructError> {
    let set = sorted_set(s);
    let us = p.up_set(&set, SetClosure::Closed)?;
    let ds = p.down_set(&set, SetClosure::Closed)?;
    let in_us = membership(p.n(), &us);
    let in_ds = membership(p.n(), &ds);
    let in_set = membership(p.n(), &set);
    let ground3: Vec<usize> = (1..=p.n())
        .filter(|&x| (in_us[x - 1] || in_ds[x - 1]) && !in_set[x - 1])
        .collect();
    validate_sub_realiser(p, &ds, r1, "D[S]")?;
    validate_sub_realiser(p, &us, r2, "U[S]")?;
    validate_sub_realiser(p, &ground3, r3, "open U ∪ D")?;

    let union: Vec<usize> = (1..=p.n())
        .filter(|&x| in_us[x - 1] || in_ds[x - 1])
        .collect();
    let d_minus_u: Vec<usize> = ds.iter().copied().filter(|&x| !in_us[x - 1]).collect();
    let u_minus_d: Vec<usize> = us.iter().copied().filter(|&x| !in_ds[x - 1]).collect();
    let d_block = r1.orders()[0].restrict(&d_minus_u);
    let u_block = r2.orders()[0].restrict(&u_minus_d);
    let s_block = r1.orders()[0].restrict(&set);
    let mut family = Vec::with_capacity(r1.len() + r2.len() + r3.len());
    for sub in r2.orders() {
        family.push(concat_disjoint(&[d_block.clone(), sub.seq().to_vec()]));
    }
    for sub in r1.orders() {
        family.push(concat_disjoint(&[sub.seq().to_vec(), u_block.clone()]));
    }
    for sub in r3.orders() {
        family.push(concat_disjoint(&[sub.seq().to_vec(), s_block.clone()]));
    }

    // The hook check and left shift run on the induced suborder, then the
    // finished orders are mapped back to parent labels.
    let (q, map) = p.induced_allow_empty(&union);
    let mut inv = vec![usize::MAX; p.n() + 1];
    for (i, &x) in map.iter().enumerate() {
        inv[x] = i + 1;
    }
    let local = HookFamily::new(
        family
            .iter()
            .map(|seq| TotalOrder::new(seq.iter().map(|&x| inv[x]).collect()))
            .collect(),
    );
    let local_realiser = leftshift_realiser(&q, &local)?;
    Ok(Realiser::new(relabel(local_realiser.orders(), &map)))
}

// ── unicyclic cover graphs ───────────────────────────────────────────────

/// Realiser of size ≤ 4 for a poset whose cover graph is connected and
/// unicyclic. Removing the top vertex `x` of the unique cycle splits the
/// cover graph into the components above `x` (grouped as `W[x]`) and the
/// rest `R`, both with forest cover graphs; 3-realisers of the two sides
/// (from the exact solver — guaranteed to exist) concatenate as `R`-side
/// then `W`-side, and a fourth order interleaves the four blocks
/// `W[x]∖U[x]`, `D(x)`, `U[x]`, `R∖D(x)` to reverse the cross pairs the
/// concatenations cannot.
pub fn unicyclic_realiser(p: &Poset) -> Result<Realiser, ConstructError> {
    use crate::graph::GraphClass;
    let g = p.cover_graph();
    let comps = g.components();
    if comps.len() != 1 {
        return Err(ConstructError::CoverGraphDisconnected);
    }
    let class = g
        .classify_component(&comps[0])
        .expect("component is connected");
    if class.class != GraphClass::Unicyclic {
        return Err(ConstructError::CoverGraphNotUnicyclic);
    }
    let cycle = g
        .unique_cycle(&comps[0])
        .expect("unicyclic component has a cycle");
    // Top of the cycle: smallest-labelled cycle vertex with no cycle element
    // above it. Its two cycle neighbours are then both below it.
    let x = *cycle
        .iter()
        .filter(|&&v| cycle.iter().all(|&u| !p.lt(v, u)))
        .min()
        .expect("a finite cycle has a maximal element");

    let up_neighbours: Vec<usize> = g
        .neighbors(x)
        .iter()
        .copied()
        .filter(|&u| p.lt(x, u))
        .collect();
    // Components of the cover graph minus x, found by BFS avoiding x.
    let n = p.n();
    let mut in_w = vec![false; n];
    in_w[x - 1] = true;
    for &u in &up_neighbours {
        if in_w[u - 1] {
            continue;
        }
        let mut stack = vec![u];
        in_w[u - 1] = true;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if w != x && !in_w[w - 1] {
                    in_w[w - 1] = true;
                    stack.push(w);
                }
            }
        }
    }
    let w_side: Vec<usize> = (1..=n).filter(|&v| in_w[v - 1]).collect();
    let r_side: Vec<usize> = (1..=n).filter(|&v| !in_w[v - 1]).collect();

    let pad3 = |r: Realiser| -> Vec<TotalOrder> {
        let mut orders = r.orders().to_vec();
        while orders.len() < 3 {
            orders.push(orders.last().expect("non-empty realiser").clone());
        }
        orders
    };
    let w_orders = pad3(sub_realiser(p, &w_side, 3).map_err(|e| match e {
        ConstructError::BudgetExceeded { k_max, .. } => ConstructError::BudgetExceeded {
            which: "cycle-top side".to_string(),
            k_max,
        },
        other => other,
    })?);
    let r_orders = pad3(sub_realiser(p, &r_side, 3).map_err(|e| match e {
        ConstructError::BudgetExceeded { k_max, .. } => ConstructError::BudgetExceeded {
            which: "remainder side".to_string(),
            k_max,
        },
        other => other,
    })?);

    let mut orders = Vec::with_capacity(4);
    for i in 0..3 {
        orders.push(TotalOrder::new(concat_disjoint(&[
            r_orders[i].seq().to_vec(),
            w_orders[i].seq().to_vec(),
        ])));
    }
    let lhat = natural_extension(p);
    let u_closed = membership(n, &p.up_set(&[x], SetClosure::Closed)?);
    let d_open = membership(n, &p.down_set(&[x], SetClosure::Open)?);
    let block = |keep: &dyn Fn(usize) -> bool| -> Vec<usize> {
        lhat.seq().iter().copied().filter(|&v| keep(v)).collect()
    };
    let pi4 = concat_disjoint(&[
        block(&|v| in_w[v - 1] && !u_closed[v - 1]),
        block(&|v| d_open[v - 1]),
        block(&|v| u_closed[v - 1]),
        block(&|v| !in_w[v - 1] && !d_open[v - 1]),
    ]);
    orders.push(TotalOrder::new(pi4));
    let realiser = Realiser::new(orders);
    assert!(
        p.is_realiser(&realiser).expect("well-formed output"),
        "internal error: unicyclic construction failed realiser verification"
    );
    Ok(realiser)
}

// ── co-sparse reduction ──────────────────────────────────────────────────

/// Outcome of [`cosparse_reduction`]: the reduced order (relabelled
/// `1..=k`), the label map back to the parent, and the stripped sets.
#[derive(Debug, Clone)]
pub struct CosparseReduction {
    parent: BipartiteOrder,
    reduced: BipartiteOrder,
    map: Vec<usize>,
    a_prime: Vec<usize>,
    b_prime: Vec<usize>,
}

impl CosparseReduction {
    /// The reduced order `P'` on `(A ∖ A') ∪ (B ∖ B')`, labels `1..=k`.
    pub fn reduced(&self) -> &BipartiteOrder {
        &self.reduced
    }

    /// `map()[i]` is the parent label of reduced element `i + 1`.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Bottom elements comparable to the whole top part, ascending.
    pub fn a_prime(&self) -> &[usize] {
        &self.a_prime
    }

    /// Top elements comparable to the whole bottom part, ascending.
    pub fn b_prime(&self) -> &[usize] {
        &self.b_prime
    }

    /// Lifts a realiser of the reduced order (in reduced labels) to a
    /// realiser of the parent of size `d + 1`: each order gains `A'` in
    /// front and `B'` behind, and one extra order reverses `A'` and `B'`
    /// internally while flipping their positions against the rest.
    pub fn assemble(&self, sub: &Realiser) -> Result<Realiser, ConstructError> {
        let invalid = || ConstructError::SubRealiserInvalid {
            which: "reduced".to_string(),
        };
        if self.reduced.poset().is_realiser(sub) != Ok(true) {
            return Err(invalid());
        }
        let p = self.parent.poset();
        let lifted_sub = relabel(sub.orders(), &self.map);
        let lhat = natural_extension(p);
        let front = lhat.restrict(&self.a_prime);
        let back = lhat.restrict(&self.b_prime);
        let mut orders = Vec::with_capacity(sub.len() + 1);
        for order in &lifted_sub {
            orders.push(TotalOrder::new(concat_disjoint(&[
                front.clone(),
                order.seq().to_vec(),
                back.clone(),
            ])));
        }
        let rev = lhat.reversed();
        let a_rest: Vec<usize> = self
            .parent
            .a()
            .into_iter()
            .filter(|x| !self.a_prime.contains(x))
            .collect();
        let b_rest: Vec<usize> = self
            .parent
            .b()
            .into_iter()
            .filter(|x| !self.b_prime.contains(x))
            .collect();
        orders.push(TotalOrder::new(concat_disjoint(&[
            lifted_sub[0].restrict(&a_rest),
            rev.restrict(&self.a_prime),
            rev.restrict(&self.b_prime),
            lifted_sub[0].restrict(&b_rest),
        ])));
        let realiser = Realiser::new(orders);
        assert!(
            p.is_realiser(&realiser).expect("well-formed output"),
            "internal error: co-sparse lift failed realiser verification"
        );
        Ok(realiser)
    }
}

/// Strips the bottom elements comparable to all of `B` and the top elements
/// comparable to all of `A`; any realiser of the remainder lifts back with
/// one extra order via [`CosparseReduction::assemble`].
pub fn cosparse_reduction(order: &BipartiteOrder) -> CosparseReduction {
    let p = order.poset();
    let a = order.a();
    let b = order.b();
    let a_prime: Vec<usize> = a
        .iter()
        .copied()
        .filter(|&x| p.up_row(x).count_ones(..) == b.len())
        .collect();
    let b_prime: Vec<usize> = b
        .iter()
        .copied()
        .filter(|&x| p.down_row(x).count_ones(..) == a.len())
        .collect();
    let keep: Vec<usize> = (1..=p.n())
        .filter(|&x| !a_prime.contains(&x) && !b_prime.contains(&x))
        .collect();
    let (q, map) = p.induced_allow_empty(&keep);
    let part = map.iter().map(|&x| order.part(x)).collect();
    let reduced = BipartiteOrder::new(q, part).expect("induced suborder stays height-1");
    CosparseReduction {
        parent: order.clone(),
        reduced,
        map,
        a_prime,
        b_prime,
    }
}
