use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::division::{cousin_divide, cousin_divide_randomized, Division, DEFAULT_MAX_DEPTH};
use crate::error::Result;
use crate::gauge::{refinement_gauge, Gauge};
use crate::integral::{gauge_integrate, GaugeFamily};
use crate::integrand::IntegrandHandle;
use crate::interval::{Interval, Partition};

/// A function of (cell, tag) pairs, e.g. h(I,x) = f(x)·|I| − (F(v)−F(u)).
#[derive(Clone)]
pub struct IntervalPointFn {
    eval: Arc<dyn Fn(Interval, f64) -> f64 + Send + Sync>,
    label: String,
}

impl std::fmt::Debug for IntervalPointFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntervalPointFn")
            .field("label", &self.label)
            .finish()
    }
}

impl IntervalPointFn {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(Interval, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        IntervalPointFn {
            eval: Arc::new(eval),
            label: label.into(),
        }
    }

    /// h(I,x) = |I| (cell length, tag ignored).
    pub fn cell_length() -> Self {
        IntervalPointFn::new("m(I)", |cell, _| cell.width())
    }

    /// h(I,x) = f(x)·|I|.
    pub fn weighted_length(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        IntervalPointFn::new("f(x)m(I)", move |cell, x| f(x) * cell.width())
    }

    /// h(I,x) = f(x)·|I| − (F(v) − F(u)).
    pub fn sum_minus_increment(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        big_f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        IntervalPointFn::new("f(x)m(I)-F(I)", move |cell, x| {
            f(x) * cell.width() - (big_f(cell.hi()) - big_f(cell.lo()))
        })
    }

    pub fn eval(&self, cell: Interval, tag: f64) -> f64 {
        (self.eval)(cell, tag)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Membership oracle for a set of reals.
#[derive(Clone)]
pub struct PointSet {
    indicator: Arc<dyn Fn(f64) -> bool + Send + Sync>,
    label: String,
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointSet").field("label", &self.label).finish()
    }
}

impl PointSet {
    pub fn new(
        label: impl Into<String>,
        indicator: impl Fn(f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        PointSet {
            indicator: Arc::new(indicator),
            label: label.into(),
        }
    }

    pub fn full() -> Self {
        PointSet::new("R", |_| true)
    }

    pub fn empty() -> Self {
        PointSet::new("∅", |_| false)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.indicator)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// A certified LOWER bound of V(h; g; span): a true supremum over all g-fine
/// divisions is not computable, so this reports the best value seen over
/// randomized trials with greedy per-cell tag choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationEstimate {
    pub lower_bound: f64,
    pub divisions_tried: u32,
}

fn division_variation_sum(h: &IntervalPointFn, d: &Division, g: &Gauge, x_set: Option<&PointSet>) -> Result<f64> {
    // Greedy: for each cell try both endpoints; keep the larger |h| among the
    // tags admissible under g (open containment).
    let mut total = 0.0;
    for t in d.items() {
        let mut best = 0.0f64;
        let mut any = false;
        for tag in [t.cell.lo(), t.cell.hi()] {
            let delta = g.value_at(tag)?;
            if t.cell.lo() > tag - delta && t.cell.hi() < tag + delta {
                let restricted = match x_set {
                    Some(s) if !s.contains(tag) => 0.0,
                    _ => h.eval(t.cell, tag).abs(),
                };
                best = best.max(restricted);
                any = true;
            }
        }
        if !any {
            // fall back to the tag the division was built with
            let restricted = match x_set {
                Some(s) if !s.contains(t.tag) => 0.0,
                _ => h.eval(t.cell, t.tag).abs(),
            };
            best = restricted;
        }
        total += best;
    }
    Ok(total)
}

/// Best Σ|h(I,x)| over `trials` randomized g-fine divisions of span.
pub fn variation_estimate(
    h: &IntervalPointFn,
    g: &Gauge,
    span: Interval,
    trials: u32,
    seed: u64,
) -> Result<VariationEstimate> {
    variation_estimate_restricted(h, None, g, span, trials, seed)
}

/// As variation_estimate, with h(I,x) multiplied by the indicator of X at the tag.
pub fn restricted_variation(
    h: &IntervalPointFn,
    x_set: &PointSet,
    g: &Gauge,
    span: Interval,
    trials: u32,
    seed: u64,
) -> Result<VariationEstimate> {
    variation_estimate_restricted(h, Some(x_set), g, span, trials, seed)
}

fn variation_estimate_restricted(
    h: &IntervalPointFn,
    x_set: Option<&PointSet>,
    g: &Gauge,
    span: Interval,
    trials: u32,
    seed: u64,
) -> Result<VariationEstimate> {
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
        let d = cousin_divide_randomized(g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
        best = best.max(division_variation_sum(h, &d, g, x_set)?);
    }
    Ok(VariationEstimate {
        lower_bound: best,
        divisions_tried: trials,
    })
}

/// Trace of variation estimates down an eps schedule, with the verdict that
/// every estimate stayed within k_factor·eps.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationZeroReport {
    pub trace: Vec<(f64, f64)>,
    pub k_factor: f64,
    pub is_variation_zero: bool,
}

pub const DEFAULT_VARIATION_K: f64 = 4.0;

pub fn variation_zero_test(
    h: &IntervalPointFn,
    gf: &GaugeFamily,
    eps_schedule: &[f64],
    trials: u32,
    k_factor: f64,
    seed: u64,
) -> Result<VariationZeroReport> {
    let mut trace = Vec::with_capacity(eps_schedule.len());
    let mut ok = true;
    for (i, &eps) in eps_schedule.iter().enumerate() {
        let g = gf.at(eps);
        let est = variation_estimate(h, &g, gf.span(), trials, seed ^ (i as u64))?;
        ok &= est.lower_bound <= k_factor * eps;
        trace.push((eps, est.lower_bound));
    }
    Ok(VariationZeroReport {
        trace,
        k_factor,
        is_variation_zero: ok,
    })
}

/// Shared-division comparison of the union's restricted sum against the sum
/// of per-set restricted sums. On any single division the inequality
/// Σ|h|χ_∪ ≤ Σ_j Σ|h|χ_j holds pointwise, so violations indicate a bug.
#[derive(Debug, Clone, PartialEq)]
pub struct SubadditivityReport {
    pub union_sum: f64,
    pub part_sums: Vec<f64>,
    pub holds: bool,
}

pub fn subadditivity_check(
    h: &IntervalPointFn,
    sets: &[PointSet],
    g: &Gauge,
    span: Interval,
    trials: u32,
    seed: u64,
) -> Result<SubadditivityReport> {
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<SubadditivityReport> = None;
    for _ in 0..trials.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
        let d = cousin_divide_randomized(g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
        let mut union_sum = 0.0;
        let mut part_sums = vec![0.0; sets.len()];
        for t in d.items() {
            let v = h.eval(t.cell, t.tag).abs();
            if sets.iter().any(|s| s.contains(t.tag)) {
                union_sum += v;
            }
            for (j, s) in sets.iter().enumerate() {
                if s.contains(t.tag) {
                    part_sums[j] += v;
                }
            }
        }
        let holds = union_sum <= part_sums.iter().sum::<f64>() + 1e-12;
        let rep = SubadditivityReport {
            union_sum,
            part_sums,
            holds,
        };
        if worst.as_ref().map_or(true, |w| w.holds && !rep.holds) {
            worst = Some(rep);
        }
    }
    Ok(worst.expect("at least one trial"))
}

/// Shared-division restricted sums along an increasing sequence of sets:
/// non-decreasing in n and bounded by the union's sum.
pub fn monotone_sets_limit_check(
    h: &IntervalPointFn,
    sets: &[PointSet],
    g: &Gauge,
    span: Interval,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cousin_divide_randomized(g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
    let mut trace = Vec::with_capacity(sets.len());
    for s in sets {
        let mut sum = 0.0;
        for t in d.items() {
            if s.contains(t.tag) {
                sum += h.eval(t.cell, t.tag).abs();
            }
        }
        trace.push(sum);
    }
    Ok(trace)
}

/// V(F; span) estimated on refinement ladders against the gauge integral of |f|.
#[derive(Debug, Clone, PartialEq)]
pub struct BvReport {
    pub variation_of_primitive: f64,
    pub integral_of_abs: f64,
    pub gap: f64,
}

pub fn bv_abs_integrability_check(
    h: &IntegrandHandle,
    gf: &GaugeFamily,
    eps_schedule: &[f64],
    seed: u64,
) -> Result<BvReport> {
    let span = gf.span();
    // Σ|F(v)−F(u)| is monotone under refinement: climb a uniform dyadic
    // ladder. Deterministic bisection is required — its midpoints land
    // exactly on the dyadic partition points where the refinement gauge
    // pinches to zero.
    let mut v_best = 0.0f64;
    for k in [8usize, 32, 128, 512, 2048] {
        let p = Partition::uniform(span, k)?;
        let g = refinement_gauge(&p);
        let d = cousin_divide(&g, span, DEFAULT_MAX_DEPTH)?;
        let mut sum = 0.0;
        for t in d.items() {
            sum += h.primitive_increment("bv_abs_integrability_check", t.cell)?.abs();
        }
        v_best = v_best.max(sum);
    }
    let habs = {
        let hh = h.clone();
        IntegrandHandle::new(format!("|{}|", h.name()), move |x| hh.eval(x).abs())
    };
    let report = gauge_integrate(&habs, gf, eps_schedule, 4, seed)?;
    Ok(BvReport {
        variation_of_primitive: v_best,
        integral_of_abs: report.value,
        gap: (v_best - report.value).abs(),
    })
}
