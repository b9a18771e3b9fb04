//! Closed-form sink statistics, the degree-sum identity, Monte Carlo
//! estimation, and round-count projections.
//!
//! For a graph whose edges are oriented by independent fair coins, the sink
//! count `X` satisfies `E[X] = sum_v 2^(-d(v))` exactly (each vertex is a
//! sink iff all `d(v)` incident coins point inward). On top of that identity
//! the standard graph families admit closed forms, some exact and some
//! one-sided bounds; each result carries a [`Relation`] saying which kind it
//! is, so callers can decide whether to test for equality or dominance.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::coins::CoinSchedule;
use crate::graph::{Graph, GraphClass};
use crate::{Error, Result};

/// Which statistic of the sink count a value describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// E[X], the expected number of sinks in one round.
    ExpectedSinks,
    /// Pr[X > 0], the probability that a round grants anyone at all.
    ProbPositive,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::ExpectedSinks => "expected_sinks",
            Statistic::ProbPositive => "prob_positive",
        }
    }
}

/// How a closed-form value relates to the true statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The value is the statistic, exactly.
    Equals,
    /// The statistic is at least this value.
    AtLeast,
    /// Asymptotic approximation; no error bound is claimed.
    Approximately,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equals => "=",
            Relation::AtLeast => ">=",
            Relation::Approximately => "~",
        }
    }
}

/// A closed-form value: exact rational where the formula is rational,
/// floating point where it involves `e` or a zeta-style series.
#[derive(Clone, Debug, PartialEq)]
pub enum StatValue {
    Rational(BigRational),
    Real(f64),
}

impl StatValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            StatValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            StatValue::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            StatValue::Rational(r) => Some(r),
            StatValue::Real(_) => None,
        }
    }
}

/// A closed-form statistic for a graph class at a given size.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub statistic: Statistic,
    pub relation: Relation,
    pub value: StatValue,
}

impl ClosedForm {
    fn exact(statistic: Statistic, numer: BigInt, denom: BigInt) -> ClosedForm {
        ClosedForm {
            statistic,
            relation: Relation::Equals,
            value: StatValue::Rational(BigRational::new(numer, denom)),
        }
    }
}

fn pow2(bits: usize) -> BigInt {
    BigInt::one() << bits
}

/// Closed form for E[X] on a graph class, where one is known.
///
/// Exact values: path `(n + 2) / 4` (n >= 2), star `(n - 1) / 2 + 2^-(n-1)`,
/// cycle `n / 4`, complete `n * 2^-(n-1)`. Bounds: max degree k gives
/// `n * 2^-k`; degree exponent `a` gives `n / (2 * delta(a, n))`. The sparse
/// random family gets the approximation `n * e^(-z/2)` with `z = (n - 1) p`.
pub fn expected_sinks_closed_form(class: &GraphClass, n: usize) -> Result<ClosedForm> {
    use Statistic::ExpectedSinks as E;
    match *class {
        GraphClass::Path => {
            if n == 1 {
                // Degenerate path: a single vertex is always its own sink.
                Ok(ClosedForm::exact(E, BigInt::one(), BigInt::one()))
            } else {
                Ok(ClosedForm::exact(E, BigInt::from(n + 2), BigInt::from(4)))
            }
        }
        GraphClass::Star => {
            // (n - 1) / 2 + 2^-(n-1), on a common denominator 2^(n-1).
            let numer = BigInt::from(n - 1) * pow2(n.saturating_sub(2)) + BigInt::one();
            Ok(ClosedForm::exact(E, numer, pow2(n - 1)))
        }
        GraphClass::Tree => Err(Error::NoClosedForm(
            "expected sinks of a tree depend on its degree sequence; \
             use the degree-sum identity on the instance"
                .into(),
        )),
        GraphClass::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
            }
            Ok(ClosedForm::exact(E, BigInt::from(n), BigInt::from(4)))
        }
        GraphClass::Complete => Ok(ClosedForm::exact(E, BigInt::from(n), pow2(n - 1))),
        GraphClass::BoundedDegree { k } => Ok(ClosedForm {
            statistic: E,
            relation: Relation::AtLeast,
            value: StatValue::Rational(BigRational::new(BigInt::from(n), pow2(k as usize))),
        }),
        GraphClass::Gnp { p } => {
            let z = (n as f64 - 1.0) * p;
            Ok(ClosedForm {
                statistic: E,
                relation: Relation::Approximately,
                value: StatValue::Real(n as f64 * (-z / 2.0).exp()),
            })
        }
        GraphClass::PowerLaw { a } => Ok(ClosedForm {
            statistic: E,
            relation: Relation::AtLeast,
            value: StatValue::Real(n as f64 / (2.0 * delta(a, n))),
        }),
    }
}

/// A deliberately coarser lower bound for max-degree-k graphs,
/// `ceil(n / (k + 1)) * 2^-k`: a greedy independent set has at least
/// `ceil(n / (k + 1))` members and each is a sink with probability at
/// least `2^-k`.
pub fn bounded_degree_expected_sinks_coarse(n: usize, k: u32) -> ClosedForm {
    let independent = n.div_ceil(k as usize + 1);
    ClosedForm {
        statistic: Statistic::ExpectedSinks,
        relation: Relation::AtLeast,
        value: StatValue::Rational(BigRational::new(independent.into(), pow2(k as usize))),
    }
}

/// Closed form for Pr[X > 0] on a graph class, where one is known.
///
/// Every orientation of a forest is acyclic and so has a sink, giving
/// probability exactly 1 for paths, stars, and trees. A cycle misses a sink
/// only on its 2 rotations: `1 - 2^-(n-1)`. A complete graph has at most one
/// sink, so Pr[X > 0] = E[X]. Max degree k gives the independent-set bound
/// `1 - (1 - 2^-k)^ceil(n/(k+1))`; degree exponent `a` gives
/// `1 - (1 - (2 - sqrt(2)) / (2 delta(a, n)))^n`. The sparse random family
/// has no closed form (the probability vanishes as n grows).
pub fn prob_positive_closed_form(class: &GraphClass, n: usize) -> Result<ClosedForm> {
    use Statistic::ProbPositive as P;
    match *class {
        GraphClass::Path | GraphClass::Star | GraphClass::Tree => {
            Ok(ClosedForm::exact(P, BigInt::one(), BigInt::one()))
        }
        GraphClass::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
            }
            Ok(ClosedForm::exact(P, pow2(n - 1) - 1, pow2(n - 1)))
        }
        GraphClass::Complete => Ok(ClosedForm::exact(P, BigInt::from(n), pow2(n - 1))),
        GraphClass::BoundedDegree { k } => {
            let miss = 1.0 - 0.5f64.powi(k as i32);
            let independent = n.div_ceil(k as usize + 1) as f64;
            Ok(ClosedForm {
                statistic: P,
                relation: Relation::AtLeast,
                value: StatValue::Real(1.0 - miss.powf(independent)),
            })
        }
        GraphClass::Gnp { .. } => Err(Error::NoClosedForm(
            "for sparse random graphs the probability of granting in a given \
             round tends to zero; estimate it by simulation"
                .into(),
        )),
        GraphClass::PowerLaw { a } => {
            let miss = 1.0 - (2.0 - 2.0f64.sqrt()) / (2.0 * delta(a, n));
            Ok(ClosedForm {
                statistic: P,
                relation: Relation::AtLeast,
                value: StatValue::Real(1.0 - miss.powf(n as f64)),
            })
        }
    }
}

/// Number of terms summed directly before switching to the analytic tail.
const DELTA_DIRECT_TERMS: usize = 1_000_000;

/// Partial zeta sum `delta(a, n) = sum_{j=1}^{n-1} j^-a`, the normalizing
/// constant of the degree-exponent-a distribution on n vertices.
///
/// Direct summation up to a million terms; beyond that the tail is
/// integral-corrected (`sum_{j=N+1}^{M} j^-a` equals the integral from N to M
/// plus half the endpoint difference, up to an error below f64 resolution
/// for a >= 2 and N = 10^6).
pub fn delta(a: f64, n: usize) -> f64 {
    debug_assert!(a >= 2.0);
    if n <= 1 {
        return 0.0;
    }
    let last = n - 1;
    let cut = last.min(DELTA_DIRECT_TERMS);
    // Small terms first so the f64 accumulation loses nothing.
    let mut sum = 0.0;
    for j in (1..=cut).rev() {
        sum += (j as f64).powf(-a);
    }
    if last > cut {
        let (lo, hi) = (cut as f64, last as f64);
        let integral = (lo.powf(1.0 - a) - hi.powf(1.0 - a)) / (a - 1.0);
        sum += integral + (hi.powf(-a) - lo.powf(-a)) / 2.0;
    }
    sum
}

/// Limit of [`delta`] as n grows, i.e. the zeta value `sum_{j>=1} j^-a`.
pub fn delta_limit(a: f64) -> f64 {
    debug_assert!(a >= 2.0);
    let cut = DELTA_DIRECT_TERMS as f64;
    let mut sum = 0.0;
    for j in (1..=DELTA_DIRECT_TERMS).rev() {
        sum += (j as f64).powf(-a);
    }
    sum + cut.powf(1.0 - a) / (a - 1.0) - cut.powf(-a) / 2.0
}

/// The degree-sum identity `E[X] = sum_v 2^(-d(v))`, exact for any graph.
pub fn degree_sum_expected(graph: &Graph) -> BigRational {
    let dmax = graph.max_degree();
    let mut numer = BigInt::zero();
    for v in 0..graph.vertex_count() as u32 {
        numer += pow2(dmax - graph.degree(v));
    }
    BigRational::new(numer, pow2(dmax))
}

/// A Monte Carlo estimate of a sink statistic.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub statistic: Statistic,
    /// Sample mean over all trials.
    pub point: f64,
    /// Standard error of the mean (Bessel-corrected); 0 when trials < 2.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Estimates a sink statistic by sampling `trials` independent orientations.
///
/// Trial `t` uses exactly the coins an engine would draw in round `t` under
/// the same seed, so estimates are replayable and consistent with the
/// simulators.
pub fn monte_carlo(graph: &Graph, statistic: Statistic, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let schedule = CoinSchedule::new(seed);
    let edges = graph.edges();
    let mut out_deg = vec![0u32; graph.vertex_count()];
    let mut sum: u64 = 0;
    let mut sum_sq: u64 = 0;
    for t in 0..trials {
        let coins = schedule.round_coins(t, edges.len());
        out_deg.fill(0);
        for (i, &(u, v)) in edges.iter().enumerate() {
            let from = if coins[i] { v } else { u };
            out_deg[from as usize] += 1;
        }
        let sinks = out_deg.iter().filter(|&&d| d == 0).count() as u64;
        let x = match statistic {
            Statistic::ExpectedSinks => sinks,
            Statistic::ProbPositive => u64::from(sinks > 0),
        };
        sum += x;
        sum_sq += x * x;
    }
    let t = trials as f64;
    let point = sum as f64 / t;
    let std_error = if trials < 2 {
        0.0
    } else {
        // Sample variance via sum of squares, guarded against negative
        // rounding residue.
        let var = (sum_sq as f64 - sum as f64 * point) / (t - 1.0);
        (var.max(0.0) / t).sqrt()
    };
    Ok(Estimate {
        statistic,
        point,
        std_error,
        trials,
        seed,
    })
}

/// Iteration floor: a projected per-round grant rate below this is treated
/// as "never finishes" rather than ground out numerically.
pub const ROUNDS_RATE_FLOOR: f64 = 1e-9;

const ROUNDS_ITERATION_CAP: usize = 10_000_000;

/// Projects how many rounds clearing `n` processes takes when a round with
/// `x` of them left is expected to grant `per_round(x)`.
///
/// Deterministic fixed-point iteration `x <- x - per_round(x)`, stopping
/// with one cleanup round once fewer than one process (or less than one
/// round of work) remains; errs with [`Error::Stalled`] if the rate falls
/// below [`ROUNDS_RATE_FLOOR`] while processes remain.
pub fn expected_rounds(n: f64, mut per_round: impl FnMut(f64) -> f64) -> Result<f64> {
    let mut x = n;
    let mut rounds = 0.0;
    for _ in 0..ROUNDS_ITERATION_CAP {
        // Below one survivor the rate model is meaningless: any straggler
        // sits isolated in the remaining conflict graph and is granted in
        // its next round. Without this stop, proportional rates like `x/4`
        // decay geometrically and never reach zero.
        if x < 1.0 {
            return Ok(rounds + 1.0);
        }
        let rate = per_round(x);
        if rate >= x {
            return Ok(rounds + 1.0);
        }
        if rate < ROUNDS_RATE_FLOOR {
            return Err(Error::Stalled {
                x,
                decrement: rate,
                floor: ROUNDS_RATE_FLOOR,
            });
        }
        x -= rate;
        rounds += 1.0;
    }
    Err(Error::Stalled {
        x,
        decrement: per_round(x),
        floor: ROUNDS_RATE_FLOOR,
    })
}

/// The per-round grant-rate model used by [`expected_rounds_projection`].
///
/// Complete graphs shrink to smaller complete graphs, so their rate is exact
/// at every step; the other families only start in their class, and the rate
/// reuses the initial class form at the current size as a projection. The
/// degree-exponent family keeps `delta(a, n)` frozen at the initial size.
pub fn class_round_rate(class: &GraphClass, n: usize) -> Result<impl Fn(f64) -> f64> {
    let class = *class;
    let frozen_delta = match class {
        GraphClass::PowerLaw { a } => delta(a, n),
        _ => 0.0,
    };
    match class {
        GraphClass::Tree => Err(Error::NoClosedForm(
            "trees have no size-only rate model; simulate the instance".into(),
        )),
        _ => Ok(move |x: f64| match class {
            GraphClass::Path => (x + 2.0) / 4.0,
            GraphClass::Star => (x - 1.0) / 2.0 + (2.0f64).powf(1.0 - x).min(1.0),
            GraphClass::Tree => unreachable!(),
            GraphClass::Cycle => x / 4.0,
            GraphClass::Complete => x * (2.0f64).powf(1.0 - x).min(1.0),
            GraphClass::BoundedDegree { k } => x * 0.5f64.powi(k as i32),
            GraphClass::Gnp { p } => x * (-(x - 1.0) * p / 2.0).exp(),
            GraphClass::PowerLaw { .. } => x / (2.0 * frozen_delta),
        }),
    }
}

/// Projected rounds to drain a class instance of size n; see
/// [`class_round_rate`] for the model.
pub fn expected_rounds_projection(class: &GraphClass, n: usize) -> Result<f64> {
    let rate = class_round_rate(class, n)?;
    expected_rounds(n as f64, rate)
}

/// Formats with a fixed number of significant digits, locale-free, for
/// byte-stable report output. Moderate magnitudes print in plain decimal
/// notation, extremes in scientific.
pub fn format_significant(x: f64, digits: usize) -> String {
    debug_assert!(digits >= 1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // `{:e}` normalizes the mantissa, so the exponent reflects the value
    // after rounding to the requested precision.
    let sci = format!("{:.*e}", digits - 1, x);
    let (_, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 + 2 {
        return sci;
    }
    // Reformatting the already-rounded value at the same digit position
    // cannot round again.
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let rounded: f64 = sci.parse().expect("rounded float");
    format!("{rounded:.decimals$}")
}

/// Formats an exact rational as `numer/denom` (always with the slash).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphClassSpec};
    use crate::orientation::enumerate_exact;

    fn exact_value(form: &ClosedForm) -> &BigRational {
        form.value.exact().expect("expected an exact rational form")
    }

    #[test]
    fn path_form_matches_enumeration() {
        for n in 2..=8 {
            let g = generate(&GraphClassSpec::new(GraphClass::Path, n, 0)).unwrap();
            let stats = enumerate_exact(&g).unwrap();
            let e = expected_sinks_closed_form(&GraphClass::Path, n).unwrap();
            assert_eq!(exact_value(&e), &stats.expected_sinks, "path n={n}");
            let p = prob_positive_closed_form(&GraphClass::Path, n).unwrap();
            assert_eq!(exact_value(&p), &stats.prob_positive);
        }
    }

    #[test]
    fn star_form_matches_enumeration() {
        for n in 1..=7 {
            let g = generate(&GraphClassSpec::new(GraphClass::Star, n, 0)).unwrap();
            let stats = enumerate_exact(&g).unwrap();
            let e = expected_sinks_closed_form(&GraphClass::Star, n).unwrap();
            assert_eq!(exact_value(&e), &stats.expected_sinks, "star n={n}");
        }
    }

    #[test]
    fn cycle_forms_match_enumeration() {
        for n in 3..=9 {
            let g = generate(&GraphClassSpec::new(GraphClass::Cycle, n, 0)).unwrap();
            let stats = enumerate_exact(&g).unwrap();
            let e = expected_sinks_closed_form(&GraphClass::Cycle, n).unwrap();
            assert_eq!(exact_value(&e), &stats.expected_sinks, "cycle n={n}");
            let p = prob_positive_closed_form(&GraphClass::Cycle, n).unwrap();
            assert_eq!(exact_value(&p), &stats.prob_positive);
        }
    }

    #[test]
    fn complete_graph_grant_chance_equals_expectation() {
        for n in 2..=6 {
            let g = generate(&GraphClassSpec::new(GraphClass::Complete, n, 0)).unwrap();
            let stats = enumerate_exact(&g).unwrap();
            let e = expected_sinks_closed_form(&GraphClass::Complete, n).unwrap();
            let p = prob_positive_closed_form(&GraphClass::Complete, n).unwrap();
            assert_eq!(exact_value(&e), &stats.expected_sinks);
            assert_eq!(exact_value(&p), &stats.prob_positive);
            assert_eq!(exact_value(&e), exact_value(&p));
        }
    }

    #[test]
    fn degree_sum_identity_equals_enumeration() {
        for seed in 0..25 {
            let spec = GraphClassSpec::new(GraphClass::Gnp { p: 0.35 }, 7, seed);
            let g = generate(&spec).unwrap();
            if g.edge_count() > 20 {
                continue;
            }
            let stats = enumerate_exact(&g).unwrap();
            assert_eq!(degree_sum_expected(&g), stats.expected_sinks, "seed {seed}");
        }
    }

    #[test]
    fn bounded_degree_bounds_hold() {
        for seed in 0..15 {
            let spec = GraphClassSpec::new(GraphClass::BoundedDegree { k: 3 }, 9, seed);
            let g = generate(&spec).unwrap();
            let truth = degree_sum_expected(&g);
            let fine = expected_sinks_closed_form(&spec.class, 9).unwrap();
            let coarse = bounded_degree_expected_sinks_coarse(9, 3);
            assert_eq!(fine.relation, Relation::AtLeast);
            assert!(exact_value(&fine) <= &truth);
            assert!(exact_value(&coarse) <= exact_value(&fine));
        }
    }

    #[test]
    fn tree_probability_is_one_and_expectation_defers() {
        let p = prob_positive_closed_form(&GraphClass::Tree, 10).unwrap();
        assert_eq!(exact_value(&p), &BigRational::one());
        assert!(matches!(
            expected_sinks_closed_form(&GraphClass::Tree, 10),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn gnp_probability_has_no_closed_form() {
        assert!(matches!(
            prob_positive_closed_form(&GraphClass::Gnp { p: 0.1 }, 50),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn delta_matches_reference_values() {
        // Direct sum for a small cutoff.
        let direct: f64 = (1..10).map(|j| (j as f64).powf(-2.0)).sum();
        assert!((delta(2.0, 10) - direct).abs() < 1e-14);
        // Zeta limits.
        assert!((delta_limit(2.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        assert!((delta_limit(3.0) - 1.202_056_903_159_594_2).abs() < 1e-10);
        // The analytic tail agrees with brute-force summation past the
        // direct-term cutoff.
        let brute: f64 = (1..2_000_000u64).rev().map(|j| (j as f64).powf(-2.5)).sum();
        assert!((delta(2.5, 2_000_000) - brute).abs() < 1e-9);
        // Monotone in n, bounded by the limit.
        assert!(delta(2.0, 100) < delta(2.0, 1000));
        assert!(delta(2.0, 1000) < delta_limit(2.0));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_consistent() {
        let g = generate(&GraphClassSpec::new(GraphClass::Path, 3, 0)).unwrap();
        let a = monte_carlo(&g, Statistic::ExpectedSinks, 20_000, 11).unwrap();
        let b = monte_carlo(&g, Statistic::ExpectedSinks, 20_000, 11).unwrap();
        assert_eq!(a, b);
        assert!((a.point - 1.25).abs() <= 4.0 * a.std_error);
        let p = monte_carlo(&g, Statistic::ProbPositive, 500, 11).unwrap();
        assert_eq!(p.point, 1.0, "paths always have a sink");
        assert_eq!(p.std_error, 0.0);
        let single = monte_carlo(&g, Statistic::ExpectedSinks, 1, 3).unwrap();
        assert_eq!(single.std_error, 0.0);
    }

    #[test]
    fn monte_carlo_trials_reuse_round_coins() {
        // Trial t must see the same orientation round t of a simulation sees.
        let g = generate(&GraphClassSpec::new(GraphClass::Cycle, 6, 0)).unwrap();
        let seed = 42;
        let mut total = 0usize;
        for t in 0..64 {
            let o = crate::orientation::random_orientation_in_round(&g, seed, t);
            total += crate::orientation::sinks(&o).len();
        }
        let est = monte_carlo(&g, Statistic::ExpectedSinks, 64, seed).unwrap();
        assert_eq!(est.point, total as f64 / 64.0);
    }

    #[test]
    fn expected_rounds_terminates_linear_and_geometric() {
        // Constant rate 1: exactly n rounds.
        assert_eq!(expected_rounds(5.0, |_| 1.0).unwrap(), 5.0);
        // A rate covering the remainder means one final round.
        assert_eq!(expected_rounds(1.0, |_| 4.0).unwrap(), 1.0);
        // Proportional rates decay geometrically and rely on the
        // below-one-survivor stop; 8 * (3/4)^8 is the first value below 1.
        assert_eq!(expected_rounds(8.0, |x| x / 4.0).unwrap(), 9.0);
    }

    #[test]
    fn expected_rounds_stalls_below_floor() {
        match expected_rounds(10.0, |_| 1e-12) {
            Err(Error::Stalled { x, decrement, .. }) => {
                assert_eq!(x, 10.0);
                assert_eq!(decrement, 1e-12);
            }
            other => panic!("expected stall, got {other:?}"),
        }
    }

    #[test]
    fn round_projections_are_sane() {
        let path = expected_rounds_projection(&GraphClass::Path, 100).unwrap();
        assert!(path > 1.0 && path < 400.0, "path projection {path}");
        let small = expected_rounds_projection(&GraphClass::Path, 10).unwrap();
        assert!(small < path);
        let complete = expected_rounds_projection(&GraphClass::Complete, 5).unwrap();
        assert!(complete > 3.0, "complete projection {complete}");
        assert!(expected_rounds_projection(&GraphClass::Tree, 10).is_err());
    }

    #[test]
    fn formatting_is_pinned() {
        assert_eq!(format_significant(1.25, 12), "1.25000000000");
        assert_eq!(format_significant(1.25, 3), "1.25");
        assert_eq!(format_significant(0.0001234, 3), "0.000123");
        assert_eq!(format_significant(0.00001234, 3), "1.23e-5");
        assert_eq!(format_significant(0.001234, 3), "0.00123");
        assert_eq!(format_significant(1234.5, 3), "1230");
        assert_eq!(format_significant(-0.35, 3), "-0.350");
        assert_eq!(format_significant(9.6e9, 3), "9.60e9");
        assert_eq!(format_significant(0.0, 3), "0");
        assert_eq!(format_significant(0.9999, 3), "1.00");
        let r = BigRational::new(5.into(), 4.into());
        assert_eq!(format_rational(&r), "5/4");
        assert_eq!(format_rational(&BigRational::one()), "1/1");
    }
}
