//! Scalar bound machinery: the sparse-regime root α_c, the dilogarithm, the
//! large-deviation rate function f, the two lower-bound curves, and the
//! closed-form distributions of up/down-set sizes in height-1 orders.
//!
//! Everything here is a pure function of its arguments. Floating-point
//! evaluation targets absolute accuracy around 1e−12; the up/down-set
//! distributions additionally have an exact rational mode used by the
//! enumeration tests.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("parameter {name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("no β on the search grid passes the negativity check at c = {c}")]
    InfeasibleAtC { c: f64 },
}

fn domain(name: &'static str, value: f64, dom: &'static str) -> NumericsError {
    NumericsError::Domain {
        name,
        value,
        domain: dom,
    }
}

/// Unique positive root of (e²/x²)·e^{−cx} = 1, found by bisection on the
/// strictly decreasing left-hand side. Absolute tolerance 1e−12; α₂ = 1.
pub fn solve_alpha(c: f64) -> f64 {
    assert!(c > 0.0 && c.is_finite(), "c must be positive");
    // Work with the log form 2 − 2·ln x − c·x, decreasing and sign-matching.
    let g = |x: f64| 2.0 - 2.0 * x.ln() - c * x;
    let mut lo = 1e-12;
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Li₂ on [0, 1] to ~1e−12: direct series for z ≤ 1/2, the reflection
/// identity Li₂(z) + Li₂(1−z) = π²/6 − ln(z)·ln(1−z) above.
pub fn dilog(z: f64) -> Result<f64, NumericsError> {
    if !(0.0..=1.0).contains(&z) || z.is_nan() {
        return Err(domain("z", z, "[0, 1]"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    if z == 1.0 {
        return Ok(basel);
    }
    if z > 0.5 {
        return Ok(basel - z.ln() * (1.0 - z).ln() - dilog(1.0 - z)?);
    }
    let mut sum = 0.0;
    let mut zk = z;
    let mut k = 1u32;
    loop {
        sum += zk / f64::from(k * k);
        let k1 = f64::from(k + 1);
        // Geometric tail bound: Σ_{j>k} z^j/j² ≤ z^{k+1}/((k+1)²(1−z)).
        if zk * z / (k1 * k1 * (1.0 - z)) < 1e-15 {
            return Ok(sum);
        }
        zk *= z;
        k += 1;
    }
}

/// Arguments of the rate function [`f_eval`]. The geometry must satisfy
/// 1/2 − ξ − t > 0 so all exponents stay negative; β is unconstrained above
/// (the large-c parameter choices push it past ξ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericParams {
    c: f64,
    xi: f64,
    beta: f64,
    t: f64,
}

impl NumericParams {
    pub fn new(c: f64, xi: f64, beta: f64, t: f64) -> Result<NumericParams, NumericsError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(domain("c", c, "(0, ∞)"));
        }
        if !(xi > 0.0 && xi < 0.5) {
            return Err(domain("xi", xi, "(0, 1/2)"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(domain("beta", beta, "(0, ∞)"));
        }
        if !(0.0..0.5).contains(&t) {
            return Err(domain("t", t, "[0, 1/2)"));
        }
        if 0.5 - xi - t <= 0.0 {
            return Err(domain("t", t, "1/2 − ξ − t > 0"));
        }
        Ok(NumericParams { c, xi, beta, t })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// The exponential growth rate governing the existence of large expanding
/// sets:
///
/// ```text
/// f(c,ξ,β,t) = β·ln(eξ/β) − cβ(1/2−ξ−t)
///            + (1/c)·(Li₂(1) − Li₂(e^{−ct}))
///            + (1/c)·(Li₂(e^{−cβ−ct}) − Li₂(e^{−cβ})
///                     + Li₂(e^{−c(1/2−ξ−t)−ct}) − Li₂(e^{−c(1/2−ξ−t)}))
/// ```
///
/// At t = 0 every dilogarithm difference vanishes.
pub fn f_eval(params: &NumericParams) -> Result<f64, NumericsError> {
    let NumericParams { c, xi, beta, t } = *params;
    let s = 0.5 - xi - t;
    let li = |z: f64| dilog(z).expect("e^{-x} with x ≥ 0 lies in (0, 1]");
    let head = beta * (std::f64::consts::E * xi / beta).ln() - c * beta * s;
    let first = li(1.0) - li((-c * t).exp());
    let second = li((-c * beta - c * t).exp()) - li((-c * beta).exp()) + li((-c * s - c * t).exp())
        - li((-c * s).exp());
    Ok(head + (first + second) / c)
}

/// Result of maximizing f over t ∈ [0, α_c] for fixed (c, ξ, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupOutcome {
    /// The maximum over the grid plus local refinement. `feasible` means the
    /// supremum is strictly negative (and the geometry constraint held).
    Evaluated {
        sup: f64,
        argmax_t: f64,
        feasible: bool,
    },
    /// ξ + α_c ≥ 1/2: the domain of f does not contain [0, α_c].
    InfeasibleGeometry { xi: f64, alpha_c: f64 },
}

impl SupOutcome {
    pub fn feasible(&self) -> bool {
        matches!(self, SupOutcome::Evaluated { feasible: true, .. })
    }
}

/// Maximizes f over t ∈ [0, α_c] on a 10⁴-point grid, then refines the best
/// bracket by ternary search down to 1e−10 in t.
pub fn sup_f_check(c: f64, xi: f64, beta: f64) -> Result<SupOutcome, NumericsError> {
    // Validate (c, ξ, β) once via the t = 0 corner.
    NumericParams::new(c, xi, beta, 0.0)?;
    let alpha = solve_alpha(c);
    if xi + alpha >= 0.5 {
        return Ok(SupOutcome::InfeasibleGeometry { xi, alpha_c: alpha });
    }
    let eval = |t: f64| -> f64 {
        let p = NumericParams::new(c, xi, beta, t).expect("grid stays inside the domain");
        f_eval(&p).expect("parameters validated")
    };
    const GRID: usize = 10_000;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let t = alpha * i as f64 / GRID as f64;
        let v = eval(t);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = alpha * best_i.saturating_sub(1) as f64 / GRID as f64;
    let mut hi = alpha * (best_i + 1).min(GRID) as f64 / GRID as f64;
    while hi - lo > 1e-10 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval(m1) < eval(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let argmax_t = 0.5 * (lo + hi);
    let sup = best.max(eval(argmax_t));
    Ok(SupOutcome::Evaluated {
        sup,
        argmax_t,
        feasible: sup < 0.0,
    })
}

/// The height-1 lower-bound curve 1/(2·α_c), plotted for c ∈ [2, 30].
pub fn bipartite_lower_curve(c: f64) -> f64 {
    assert!(c >= 2.0, "curve is defined for c ≥ 2");
    1.0 / (2.0 * solve_alpha(c))
}

/// Closed form γ(c) = 1/6 − 1/ln c − ln(2 ln c)/c; tends to 1/6 as c → ∞.
pub fn gnp_gamma(c: f64) -> f64 {
    assert!(c > 1.0, "γ needs ln c > 0");
    1.0 / 6.0 - 1.0 / c.ln() - (2.0 * c.ln()).ln() / c
}

/// How ξ (and possibly β) are chosen when tracing the lower-bound curve for
/// the triangle-free random order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiRule {
    /// ξ = 1/(15·ln c); meaningful on c ∈ (10, 50). β is grid-searched.
    Inv15Log,
    /// ξ = 1/ln c with β pinned to exp(−c/6 + c/ln c); the large-c regime.
    LargeC,
}

/// Lower-bound curve value ξ/(2β) at mean degree c, together with γ(c).
/// Under [`XiRule::Inv15Log`] the smallest β passing [`sup_f_check`] on a
/// two-stage descending log-grid wins (maximizing the bound); under
/// [`XiRule::LargeC`] β is pinned and only checked.
pub fn gnp_lower_curve(c: f64, rule: XiRule) -> Result<(f64, f64), NumericsError> {
    let gamma = match rule {
        XiRule::Inv15Log => {
            if !(c > 10.0 && c < 50.0) {
                return Err(domain("c", c, "(10, 50) for this ξ rule"));
            }
            gnp_gamma(c)
        }
        XiRule::LargeC => {
            if c <= std::f64::consts::E.powi(2) {
                return Err(domain("c", c, "(e², ∞) for this ξ rule"));
            }
            gnp_gamma(c)
        }
    };
    match rule {
        XiRule::Inv15Log => {
            let xi = 1.0 / (15.0 * c.ln());
            let feasible = |beta: f64| -> bool {
                sup_f_check(c, xi, beta)
                    .map(|o| o.feasible())
                    .unwrap_or(false)
            };
            // Coarse pass: 5 points per decade, 12 decades below ξ.
            let coarse = |k: usize| xi * 10f64.powf(-(k as f64) / 5.0);
            let mut smallest = None;
            for k in 0..=60 {
                if feasible(coarse(k)) {
                    smallest = Some(k);
                }
            }
            let k = smallest.ok_or(NumericsError::InfeasibleAtC { c })?;
            // Fine pass: 50 points per decade between the last feasible
            // coarse point and its infeasible neighbour.
            let base = coarse(k);
            let mut beta = base;
            for j in 1..=10 {
                let candidate = base * 10f64.powf(-(j as f64) / 50.0);
                if feasible(candidate) {
                    beta = candidate;
                }
            }
            Ok((xi / (2.0 * beta), gamma))
        }
        XiRule::LargeC => {
            let xi = 1.0 / c.ln();
            let beta = (-c / 6.0 + c / c.ln()).exp();
            match sup_f_check(c, xi, beta)? {
                SupOutcome::Evaluated { feasible: true, .. } => Ok((xi / (2.0 * beta), gamma)),
                _ => Err(NumericsError::InfeasibleAtC { c }),
            }
        }
    }
}

// ── up/down-set size distributions ───────────────────────────────────────

fn check_pmf_args(measured: usize, seed: usize, q: f64, s: usize) -> Result<(), NumericsError> {
    if seed == 0 {
        return Err(domain("seed size", seed as f64, "≥ 1"));
    }
    if s > measured {
        return Err(domain("s", s as f64, "0 ≤ s ≤ measured size"));
    }
    if !(0.0..=1.0).contains(&q) || q.is_nan() {
        return Err(domain("q", q, "[0, 1]"));
    }
    Ok(())
}

/// Probability that the closed up-set of the bottom part reaches exactly `s`
/// of the `size_u` top elements, each potential edge missing independently
/// with probability `q`:
///
/// ```text
/// q^{|V|(|U|−s)} · ∏_{j=0}^{s−1}(1 − q^{j+|V|}) · ∏_{i=1}^{s} (1 − q^{|U|−s+i})/(1 − q^i)
/// ```
///
/// Evaluated in log-space so the long products stay stable for q near 1.
pub fn upset_pmf(size_u: usize, size_v: usize, q: f64, s: usize) -> Result<f64, NumericsError> {
    check_pmf_args(size_u, size_v, q, s)?;
    if q == 1.0 {
        return Ok(if s == 0 { 1.0 } else { 0.0 });
    }
    if q == 0.0 {
        return Ok(if s == size_u { 1.0 } else { 0.0 });
    }
    let ln_q = q.ln();
    let pow = |k: usize| (k as f64 * ln_q).exp();
    let mut log_p = (size_v * (size_u - s)) as f64 * ln_q;
    for j in 0..s {
        log_p += (-pow(j + size_v)).ln_1p();
    }
    for i in 1..=s {
        log_p += (-pow(size_u - s + i)).ln_1p() - (-pow(i)).ln_1p();
    }
    Ok(log_p.exp())
}

/// Probability that the closed down-set of the top part reaches exactly `s`
/// of the `size_v` bottom elements. By duality this is the same closed form
/// with the measured and seeding sizes swapped.
pub fn downset_pmf(size_v: usize, size_u: usize, q: f64, s: usize) -> Result<f64, NumericsError> {
    upset_pmf(size_v, size_u, q, s)
}

fn rat_pow(q: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

/// Exact-rational form of [`upset_pmf`] for enumeration tests.
pub fn upset_pmf_exact(
    size_u: usize,
    size_v: usize,
    q: &BigRational,
    s: usize,
) -> Result<BigRational, NumericsError> {
    let qf = q.to_f64().unwrap_or(f64::NAN);
    check_pmf_args(size_u, size_v, qf, s)?;
    if q.is_negative() || q > &BigRational::one() {
        return Err(domain("q", qf, "[0, 1]"));
    }
    if q.is_one() {
        return Ok(if s == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    let one = BigRational::one();
    let mut p = rat_pow(q, size_v * (size_u - s));
    for j in 0..s {
        p *= &one - rat_pow(q, j + size_v);
    }
    for i in 1..=s {
        p *= &one - rat_pow(q, size_u - s + i);
        p /= &one - rat_pow(q, i);
    }
    Ok(p)
}

/// Exact-rational form of [`downset_pmf`].
pub fn downset_pmf_exact(
    size_v: usize,
    size_u: usize,
    q: &BigRational,
    s: usize,
) -> Result<BigRational, NumericsError> {
    upset_pmf_exact(size_v, size_u, q, s)
}

/// Expected number of ascending paths of the given length between two fixed
/// labels `gap` apart: C(gap−1, length−1)·(c/n)^length. Also returns the
/// coarser closed-form ceiling k·c^k/(n·k!) for comparison.
pub fn path_expectation(
    gap: usize,
    length: usize,
    c: f64,
    n: usize,
) -> Result<(f64, f64), NumericsError> {
    if length < 1 {
        return Err(domain("length", length as f64, "≥ 1"));
    }
    if gap < length {
        return Err(domain("gap", gap as f64, "≥ length"));
    }
    if n < 1 {
        return Err(domain("n", n as f64, "≥ 1"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("c", c, "(0, ∞)"));
    }
    let p = c / n as f64;
    // Binomial via incremental products to dodge factorial overflow.
    let mut exact = p;
    for i in 1..length {
        exact *= p * (gap - length + i) as f64 / i as f64;
    }
    let mut bound = length as f64 / n as f64;
    for i in 1..=length {
        bound *= c / i as f64;
    }
    Ok((exact, bound))
}
