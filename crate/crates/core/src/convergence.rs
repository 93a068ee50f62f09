use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::division::{cousin_divide_randomized, Division, DEFAULT_MAX_DEPTH};
use crate::error::{GaugeError, Result};
use crate::gauge::Gauge;
use crate::integral::{gauge_integrate, GaugeFamily, GaugeIntegralReport};
use crate::integrand::IntegrandHandle;
use crate::interval::Partition;
use crate::variation::IntervalPointFn;
use crate::variation::variation_estimate;

type PointFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A sequence s_n(x), n ≥ 1, with optional exact side information: the
/// pointwise limit, an (inf, sup)-over-n oracle, and a per-n gauge recipe
/// tuned to integrate each term.
#[derive(Clone)]
pub struct FunctionSequence {
    term: Arc<dyn Fn(u32, f64) -> f64 + Send + Sync>,
    pointwise_limit: Option<PointFn>,
    env_oracle: Option<Arc<dyn Fn(f64, u32, u32) -> (f64, f64) + Send + Sync>>,
    per_n_gauge: Option<Arc<dyn Fn(u32, f64) -> Gauge + Send + Sync>>,
    label: String,
}

impl std::fmt::Debug for FunctionSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionSequence")
            .field("label", &self.label)
            .finish()
    }
}

impl FunctionSequence {
    pub fn new(
        label: impl Into<String>,
        term: impl Fn(u32, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionSequence {
            term: Arc::new(term),
            pointwise_limit: None,
            env_oracle: None,
            per_n_gauge: None,
            label: label.into(),
        }
    }

    pub fn with_pointwise_limit(
        mut self,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.pointwise_limit = Some(Arc::new(f));
        self
    }

    /// Oracle for (inf, sup) of s_n(x) over n ∈ [lo_n, hi_n].
    pub fn with_env_oracle(
        mut self,
        env: impl Fn(f64, u32, u32) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.env_oracle = Some(Arc::new(env));
        self
    }

    /// Gauge recipe (n, eps) → gauge for integrating the n-th term.
    pub fn with_per_n_gauge(
        mut self,
        g: impl Fn(u32, f64) -> Gauge + Send + Sync + 'static,
    ) -> Self {
        self.per_n_gauge = Some(Arc::new(g));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn term(&self, n: u32, x: f64) -> f64 {
        (self.term)(n, x)
    }

    pub fn term_handle(&self, n: u32) -> IntegrandHandle {
        let t = self.term.clone();
        IntegrandHandle::new(format!("{}[n={}]", self.label, n), move |x| t(n, x))
    }

    pub fn pointwise_limit(&self) -> Option<IntegrandHandle> {
        self.pointwise_limit.as_ref().map(|f| {
            let f = f.clone();
            IntegrandHandle::new(format!("lim {}", self.label), move |x| f(x))
        })
    }

    /// (inf, sup) of s_n(x) over n ∈ [lo_n, hi_n]; brute scan unless an oracle
    /// is attached.
    pub fn envelope(&self, x: f64, lo_n: u32, hi_n: u32) -> (f64, f64) {
        if let Some(env) = &self.env_oracle {
            return env(x, lo_n, hi_n);
        }
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        for n in lo_n..=hi_n {
            let v = (self.term)(n, x);
            inf = inf.min(v);
            sup = sup.max(v);
        }
        (inf, sup)
    }

    /// Gauge family for the n-th term: the per-n recipe when present,
    /// otherwise the fallback family.
    pub fn term_family(&self, n: u32, fallback: &GaugeFamily) -> GaugeFamily {
        match &self.per_n_gauge {
            Some(g) => {
                let g = g.clone();
                GaugeFamily::new(
                    format!("{}[n={}]", self.label, n),
                    fallback.span(),
                    move |eps| g(n, eps),
                )
            }
            None => fallback.clone(),
        }
    }
}

/// A two-parameter family s(x; y) on a rectangle.
#[derive(Clone)]
pub struct ParametricFamily {
    value: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    label: String,
}

impl std::fmt::Debug for ParametricFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametricFamily")
            .field("label", &self.label)
            .finish()
    }
}

impl ParametricFamily {
    pub fn new(
        label: impl Into<String>,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ParametricFamily {
            value: Arc::new(value),
            label: label.into(),
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.value)(x, y)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Freeze one variable: x ↦ s(x, y0).
    pub fn slice_x(&self, y0: f64) -> IntegrandHandle {
        let v = self.value.clone();
        IntegrandHandle::new(format!("{}(·;{})", self.label, y0), move |x| v(x, y0))
    }

    /// Freeze the other: y ↦ s(x0, y).
    pub fn slice_y(&self, x0: f64) -> IntegrandHandle {
        let v = self.value.clone();
        IntegrandHandle::new(format!("{}({};·)", self.label, x0), move |y| v(x0, y))
    }
}

/// Exact bounds on all Riemann sums with per-tag index choices n(x) ∈
/// [N(x), n_max]: the choice decouples across tags, so summing per-tag
/// inf/sup gives the attainable extremes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeReport {
    pub lo_sum: f64,
    pub hi_sum: f64,
}

impl EnvelopeReport {
    pub fn spread(&self) -> f64 {
        self.hi_sum - self.lo_sum
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo_sum + self.hi_sum)
    }
}

pub fn index_envelope(
    seq: &FunctionSequence,
    n_fn: &dyn Fn(f64) -> u32,
    d: &Division,
    n_max: u32,
) -> Result<EnvelopeReport> {
    let mut lo_sum = 0.0;
    let mut hi_sum = 0.0;
    for t in d.items() {
        let n0 = n_fn(t.tag).max(1).min(n_max);
        let (inf, sup) = seq.envelope(t.tag, n0, n_max);
        if inf.is_nan() || sup.is_nan() {
            return Err(GaugeError::NonFiniteSample {
                name: seq.label.clone(),
                x: t.tag,
                value: f64::NAN,
            });
        }
        lo_sum += inf * t.width();
        hi_sum += sup * t.width();
    }
    Ok(EnvelopeReport { lo_sum, hi_sum })
}

/// Evidence report for the index-envelope integrability condition.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitIntegrabilityReport {
    /// (eps, max spread over trials, mean midpoint) per schedule level.
    pub eps_levels: Vec<(f64, f64, f64)>,
    pub spreads_ok: bool,
    pub midpoints_cauchy: bool,
    /// (n, S_n) per-term gauge integrals.
    pub per_n_trace: Vec<(u32, f64)>,
    pub per_n_cauchy: bool,
    pub limit_integral: Option<GaugeIntegralReport>,
    pub holds: bool,
}

/// Samples the envelope condition at every eps, integrates each term, and
/// couples the verdict with a direct integral of the pointwise limit when one
/// is attached. All three legs must cohere for `holds`.
pub fn check_limit_integrability(
    seq: &FunctionSequence,
    n_fn: &dyn Fn(f64) -> u32,
    gf: &GaugeFamily,
    eps_schedule: &[f64],
    trials: u32,
    n_max: u32,
    n_trace: u32,
    seed: u64,
) -> Result<LimitIntegrabilityReport> {
    let span = gf.span();
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut eps_levels = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let g = gf.at(eps);
        let mut max_spread = 0.0f64;
        let mut mid_acc = 0.0;
        for _ in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
            let d = cousin_divide_randomized(&g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
            let env = index_envelope(seq, n_fn, &d, n_max)?;
            max_spread = max_spread.max(env.spread());
            mid_acc += env.midpoint();
        }
        eps_levels.push((eps, max_spread, mid_acc / trials as f64));
    }
    let spreads_ok = eps_levels.iter().all(|&(eps, s, _)| s <= eps);
    let midpoints_cauchy = eps_levels
        .windows(2)
        .all(|w| (w[1].2 - w[0].2).abs() <= 2.0 * (w[0].0 + w[1].0));

    let term_eps = *eps_schedule.last().unwrap();
    let mut per_n_trace = Vec::new();
    for n in 1..=n_trace {
        let fam = seq.term_family(n, gf);
        let r = gauge_integrate(&seq.term_handle(n), &fam, &[term_eps], 2, seed ^ n as u64)?;
        per_n_trace.push((n, r.value));
    }
    let per_n_cauchy = per_n_trace
        .windows(2)
        .rev()
        .take(3)
        .all(|w| (w[1].1 - w[0].1).abs() <= 4.0 * term_eps);

    let limit_integral = match seq.pointwise_limit() {
        Some(h) => Some(gauge_integrate(&h, gf, eps_schedule, trials.max(2), seed ^ 0xABCD)?),
        None => None,
    };
    let limit_ok = limit_integral.as_ref().map_or(true, |r| r.converged);
    let holds = spreads_ok && midpoints_cauchy && per_n_cauchy && limit_ok;
    Ok(LimitIntegrabilityReport {
        eps_levels,
        spreads_ok,
        midpoints_cauchy,
        per_n_trace,
        per_n_cauchy,
        limit_integral,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterchangeVerdict {
    pub holds: bool,
    pub witness_n: Option<u32>,
    pub limit_value: Option<f64>,
    pub per_n_values: Vec<(u32, f64)>,
}

/// Searches for an N such that every sampled term integral with n ≥ N lies
/// within eps of the limit integral F.
pub fn check_value_interchange(
    seq: &FunctionSequence,
    gf: &GaugeFamily,
    eps: f64,
    n_search_max: u32,
    seed: u64,
) -> Result<InterchangeVerdict> {
    let limit = match seq.pointwise_limit() {
        Some(h) => gauge_integrate(&h, gf, &[eps / 2.0], 4, seed)?,
        None => {
            return Ok(InterchangeVerdict {
                holds: false,
                witness_n: None,
                limit_value: None,
                per_n_values: vec![],
            })
        }
    };
    let f_val = limit.value;
    let mut per_n_values = Vec::new();
    for n in 1..=n_search_max {
        let fam = seq.term_family(n, gf);
        let r = gauge_integrate(&seq.term_handle(n), &fam, &[eps / 2.0], 2, seed ^ n as u64)?;
        per_n_values.push((n, r.value));
    }
    // witness: first N from which every later sampled value stays within eps
    let mut witness_n = None;
    'outer: for (i, &(n, _)) in per_n_values.iter().enumerate() {
        for &(_, v) in &per_n_values[i..] {
            if (v - f_val).abs() >= eps {
                continue 'outer;
            }
        }
        witness_n = Some(n);
        break;
    }
    Ok(InterchangeVerdict {
        holds: witness_n.is_some(),
        witness_n,
        limit_value: Some(f_val),
        per_n_values,
    })
}

/// Envelope condition for a continuous parameter y → ∞, sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCheckReport {
    /// (eps, spread with function-valued y(x), spread with the best constant y).
    pub levels: Vec<(f64, f64, f64)>,
    pub function_condition_ok: bool,
    pub constant_condition_ok: bool,
}

pub fn continuous_param_check(
    fam: &ParametricFamily,
    y_floor: &dyn Fn(f64) -> f64,
    gf: &GaugeFamily,
    eps_schedule: &[f64],
    y_max: f64,
    grid: u32,
    trials: u32,
    seed: u64,
) -> Result<ParamCheckReport> {
    let span = gf.span();
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = Vec::new();
    for &eps in eps_schedule {
        let g = gf.at(eps);
        let mut spread_fn = 0.0f64;
        let mut spread_const = 0.0f64;
        for _ in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
            let d = cousin_divide_randomized(&g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
            // function-valued y(x): per-tag grid over [Y(x), y_max]
            let (mut lo, mut hi) = (0.0, 0.0);
            for t in d.items() {
                let y0 = y_floor(t.tag).min(y_max);
                let (mut inf, mut sup) = (f64::INFINITY, f64::NEG_INFINITY);
                for k in 0..=grid {
                    let y = y0 + (y_max - y0) * k as f64 / grid as f64;
                    let v = fam.value(t.tag, y);
                    inf = inf.min(v);
                    sup = sup.max(v);
                }
                lo += inf * t.width();
                hi += sup * t.width();
            }
            spread_fn = spread_fn.max(hi - lo);
            // constant y: spread of whole sums across the grid from the max floor
            let y_base = d
                .items()
                .iter()
                .map(|t| y_floor(t.tag))
                .fold(f64::NEG_INFINITY, f64::max)
                .min(y_max);
            let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
            for k in 0..=grid {
                let y = y_base + (y_max - y_base) * k as f64 / grid as f64;
                let mut s = 0.0;
                for t in d.items() {
                    s += fam.value(t.tag, y) * t.width();
                }
                smin = smin.min(s);
                smax = smax.max(s);
            }
            spread_const = spread_const.max(smax - smin);
        }
        levels.push((eps, spread_fn, spread_const));
    }
    let function_condition_ok = levels.iter().all(|&(eps, s, _)| s <= eps);
    let constant_condition_ok = levels.iter().all(|&(eps, _, s)| s <= eps);
    Ok(ParamCheckReport {
        levels,
        function_condition_ok,
        constant_condition_ok,
    })
}

/// Both sides of d/dy ∫ s(x;y) dx = ∫ ∂s/∂y dx at y0, by central differences.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffUnderIntegralReport {
    pub derivative_of_integral: f64,
    pub integral_of_derivative: f64,
    pub gap: f64,
    pub holds: bool,
}

pub fn diff_under_integral_check(
    fam: &ParametricFamily,
    y0: f64,
    h_schedule: &[f64],
    gf: &GaugeFamily,
    eps: f64,
    seed: u64,
) -> Result<DiffUnderIntegralReport> {
    let h = *h_schedule.last().expect("non-empty h schedule");
    // Both slices on identical divisions (same seed): independent sampling
    // error would be amplified by 1/h in the difference quotient.
    let hi = gauge_integrate(&fam.slice_x(y0 + h), gf, &[eps / 4.0], 2, seed)?.value;
    let lo = gauge_integrate(&fam.slice_x(y0 - h), gf, &[eps / 4.0], 2, seed)?.value;
    let derivative_of_integral = (hi - lo) / (2.0 * h);
    let fam2 = fam.clone();
    let dsdy = IntegrandHandle::new(format!("d/dy {}", fam.label()), move |x| {
        (fam2.value(x, y0 + h) - fam2.value(x, y0 - h)) / (2.0 * h)
    });
    let integral_of_derivative = gauge_integrate(&dsdy, gf, &[eps / 4.0], 2, seed ^ 2)?.value;
    let gap = (derivative_of_integral - integral_of_derivative).abs();
    Ok(DiffUnderIntegralReport {
        derivative_of_integral,
        integral_of_derivative,
        gap,
        holds: gap < eps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneConvergenceReport {
    pub trace: Vec<(u32, f64)>,
    /// Supremum of the trace: 1/n-extrapolated when the trace is increasing
    /// with a resolvable tail, otherwise the sampled maximum.
    pub fitted_sup: f64,
    pub limit_integral: Option<f64>,
    pub monotone_sampled: bool,
}

/// S_n trace for an increasing sequence, its supremum fit, and the direct
/// limit integral when the pointwise limit is attached.
pub fn monotone_convergence(
    seq: &FunctionSequence,
    gf: &GaugeFamily,
    eps: f64,
    n_list: &[u32],
    seed: u64,
) -> Result<MonotoneConvergenceReport> {
    // sampled monotonicity check
    let span = gf.span();
    let mut monotone_sampled = true;
    for k in 0..=32 {
        let x = span.lo() + span.width() * k as f64 / 32.0;
        for w in n_list.windows(2) {
            if seq.term(w[1], x) < seq.term(w[0], x) - 1e-12 {
                monotone_sampled = false;
            }
        }
    }
    let mut trace = Vec::new();
    for &n in n_list {
        let fam = seq.term_family(n, gf);
        let r = gauge_integrate(&seq.term_handle(n), &fam, &[eps], 2, seed ^ n as u64)?;
        trace.push((n, r.value));
    }
    // Supremum fit: a genuinely increasing trace with a c/n tail is
    // extrapolated from its last two points (exact when S_n = S - c/n);
    // flat or noise-dominated traces fall back to the sampled maximum.
    let raw_max = trace.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let fitted_sup = if trace.len() >= 2 {
        let (m, sm) = trace[trace.len() - 2];
        let (n, sn) = trace[trace.len() - 1];
        let increasing = trace.windows(2).all(|w| w[1].1 >= w[0].1);
        let step = sn - sm;
        if increasing && n > m && step > 4.0 * eps {
            let c = step / (1.0 / m as f64 - 1.0 / n as f64);
            (sn + c / n as f64).max(raw_max)
        } else {
            raw_max
        }
    } else {
        raw_max
    };
    let limit_integral = match seq.pointwise_limit() {
        Some(h) => Some(gauge_integrate(&h, gf, &[eps], 4, seed ^ 0xBEEF)?.value),
        None => None,
    };
    Ok(MonotoneConvergenceReport {
        trace,
        fitted_sup,
        limit_integral,
        monotone_sampled,
    })
}

/// Residual of term-by-term integration of a truncated series:
/// |Σ_{n≤N} ∫s_n − ∫ Σ_{n≤N} s_n|.
pub fn series_integration_check(
    seq: &FunctionSequence,
    gf: &GaugeFamily,
    n_trunc: u32,
    eps: f64,
    seed: u64,
) -> Result<f64> {
    let mut sum_of_integrals = 0.0;
    for n in 1..=n_trunc {
        let fam = seq.term_family(n, gf);
        sum_of_integrals +=
            gauge_integrate(&seq.term_handle(n), &fam, &[eps], 2, seed ^ n as u64)?.value;
    }
    let s2 = seq.clone();
    let partial = IntegrandHandle::new(format!("Σ_{{n≤{n_trunc}}} {}", seq.label()), move |x| {
        (1..=n_trunc).map(|n| s2.term(n, x)).sum()
    });
    // reuse the first term's divisions so a single-term series agrees exactly
    let integral_of_sum = gauge_integrate(&partial, gf, &[eps], 2, seed ^ 1)?.value;
    Ok((sum_of_integrals - integral_of_sum).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinFunctionReport {
    pub value: f64,
    /// Σ_cells min_n (F_n(v)−F_n(u)) per refinement rung, when all handles
    /// carry primitives: non-increasing under refinement.
    pub refinement_trace: Option<Vec<f64>>,
}

/// Gauge integral of x ↦ min over the handles, plus the refinement
/// monotonicity of the per-cell minimum of primitive increments.
pub fn min_function_integral(
    handles: &[IntegrandHandle],
    gf: &GaugeFamily,
    eps: f64,
    seed: u64,
) -> Result<MinFunctionReport> {
    assert!(!handles.is_empty());
    let hs: Vec<IntegrandHandle> = handles.to_vec();
    let min_h = IntegrandHandle::new("min(...)", move |x| {
        hs.iter().map(|h| h.eval(x)).fold(f64::INFINITY, f64::min)
    });
    let value = gauge_integrate(&min_h, gf, &[eps.max(1e-4), eps], 4, seed)?.value;
    let refinement_trace = if handles.iter().all(|h| h.has_primitive()) {
        let mut trace = Vec::new();
        for k in [4usize, 8, 16, 32] {
            let p = Partition::uniform(gf.span(), k)?;
            let mut s = 0.0;
            for cell in p.cells() {
                let m = handles
                    .iter()
                    .map(|h| h.primitive_increment("min_function_integral", cell))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                s += m;
            }
            trace.push(s);
        }
        Some(trace)
    } else {
        None
    };
    Ok(MinFunctionReport {
        value,
        refinement_trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FatouReport {
    pub integral_of_liminf: f64,
    pub liminf_of_integrals: f64,
    pub holds: bool,
}

/// ∫ liminf s_n vs liminf ∫ s_n, both truncated at n_max.
pub fn fatou_check(
    seq: &FunctionSequence,
    gf: &GaugeFamily,
    n_max: u32,
    eps: f64,
    seed: u64,
) -> Result<FatouReport> {
    // A pointwise-convergent sequence has liminf = limit, so an attached
    // limit is used directly; the finite window [n_tail, n_max] can otherwise
    // retain escaping mass (indices beyond n_max are invisible to the inf).
    let n_tail = (n_max / 2).max(1);
    let s2 = seq.clone();
    let liminf_fn = match seq.pointwise_limit() {
        Some(h) => h,
        None => IntegrandHandle::new(format!("liminf {}", seq.label()), move |x| {
            s2.envelope(x, n_tail, n_max).0
        }),
    };
    let integral_of_liminf = gauge_integrate(&liminf_fn, gf, &[eps], 2, seed)?.value;
    let mut tail_vals = Vec::new();
    for n in n_tail..=n_max {
        let fam = seq.term_family(n, gf);
        tail_vals.push(gauge_integrate(&seq.term_handle(n), &fam, &[eps], 2, seed ^ n as u64)?.value);
    }
    let liminf_of_integrals = tail_vals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FatouReport {
        integral_of_liminf,
        liminf_of_integrals,
        holds: integral_of_liminf <= liminf_of_integrals + 4.0 * eps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominatedConvergenceReport {
    /// Per sampled division: (lo_sum, hi_sum) of the full index envelope.
    pub envelope_samples: Vec<(f64, f64)>,
    pub envelope_ok: bool,
    pub lim_of_integrals: f64,
    pub integral_of_limit: Option<f64>,
    pub interchange_gap: Option<f64>,
    pub holds: bool,
}

/// Two-sided bound P ≤ all index-mixed sums ≤ Q, then the interchange of
/// limit and integral.
pub fn dominated_convergence(
    seq: &FunctionSequence,
    p_bound: f64,
    q_bound: f64,
    gf: &GaugeFamily,
    eps: f64,
    n_max: u32,
    trials: u32,
    seed: u64,
) -> Result<DominatedConvergenceReport> {
    let span = gf.span();
    let g = gf.at(eps);
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut envelope_samples = Vec::new();
    let mut envelope_ok = true;
    for _ in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
        let d = cousin_divide_randomized(&g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
        let env = index_envelope(seq, &|_| 1, &d, n_max)?;
        envelope_ok &= env.lo_sum >= p_bound - eps && env.hi_sum <= q_bound + eps;
        envelope_samples.push((env.lo_sum, env.hi_sum));
    }
    let mut last = f64::NAN;
    for n in [n_max / 2, (3 * n_max) / 4, n_max] {
        let n = n.max(1);
        let fam = seq.term_family(n, gf);
        last = gauge_integrate(&seq.term_handle(n), &fam, &[eps], 2, seed ^ n as u64)?.value;
    }
    let lim_of_integrals = last;
    let integral_of_limit = match seq.pointwise_limit() {
        Some(h) => Some(gauge_integrate(&h, gf, &[eps], 2, seed ^ 0xD07)?.value),
        None => None,
    };
    let interchange_gap = integral_of_limit.map(|v| (lim_of_integrals - v).abs());
    let holds = envelope_ok && interchange_gap.map_or(false, |g| g <= 4.0 * eps);
    Ok(DominatedConvergenceReport {
        envelope_samples,
        envelope_ok,
        lim_of_integrals,
        integral_of_limit,
        interchange_gap,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BartleVerdict {
    pub holds: bool,
    pub witness_n: Option<u32>,
}

/// Same-division closeness |Σ s_n(x)(v−u) − Σ f(x)(v−u)| < eps for all n ≥ N,
/// N searched up to n_search_max.
pub fn bartle_condition_check(
    seq: &FunctionSequence,
    f: &IntegrandHandle,
    gf: &GaugeFamily,
    eps: f64,
    n_search_max: u32,
    trials: u32,
    seed: u64,
) -> Result<BartleVerdict> {
    let span = gf.span();
    let mut worst: Vec<f64> = Vec::with_capacity(n_search_max as usize);
    for n in 1..=n_search_max {
        let fam = seq.term_family(n, gf);
        let g = fam.at(eps);
        let mut seeder = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let mut w = 0.0f64;
        for _ in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
            let d = cousin_divide_randomized(&g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
            let mut diff = 0.0;
            for t in d.items() {
                diff += (seq.term(n, t.tag) - f.eval(t.tag)) * t.width();
            }
            w = w.max(diff.abs());
        }
        worst.push(w);
    }
    let mut witness_n = None;
    for start in 0..worst.len() {
        if worst[start..].iter().all(|&w| w < eps) {
            witness_n = Some(start as u32 + 1);
            break;
        }
    }
    Ok(BartleVerdict {
        holds: witness_n.is_some(),
        witness_n,
    })
}

/// Variation lower-bound trace along paired (y, eps) rungs; "limit variation
/// zero" when the trace falls below k_factor·eps at each rung.
pub fn limit_variation_estimate(
    h_at: &dyn Fn(f64) -> IntervalPointFn,
    y_schedule: &[f64],
    gf: &GaugeFamily,
    eps_schedule: &[f64],
    trials: u32,
    k_factor: f64,
    seed: u64,
) -> Result<(Vec<(f64, f64, f64)>, bool)> {
    assert_eq!(y_schedule.len(), eps_schedule.len());
    let span = gf.span();
    let mut trace = Vec::new();
    let mut ok = true;
    for (i, (&y, &eps)) in y_schedule.iter().zip(eps_schedule).enumerate() {
        let h = h_at(y);
        let g = gf.at(eps);
        let est = variation_estimate(&h, &g, span, trials, seed ^ i as u64)?;
        ok &= est.lower_bound <= k_factor * eps;
        trace.push((y, eps, est.lower_bound));
    }
    Ok((trace, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::TaggedInterval;
    use crate::interval::Interval;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn uniform_division(n: usize) -> Division {
        let items = (0..n)
            .map(|j| {
                let u = j as f64 / n as f64;
                let v = (j + 1) as f64 / n as f64;
                TaggedInterval::new(Interval::new(u, v).unwrap(), u).unwrap()
            })
            .collect();
        Division::new(items).unwrap()
    }

    fn xn_seq() -> FunctionSequence {
        FunctionSequence::new("x^n", |n, x| x.powi(n as i32))
            .with_pointwise_limit(|x| if x == 1.0 { 1.0 } else { 0.0 })
            .with_env_oracle(|x, lo, hi| (x.powi(hi as i32), x.powi(lo as i32)))
    }

    #[test]
    fn envelope_constant_sequence_zero_spread() {
        let seq = FunctionSequence::new("const", |_, x| x);
        let d = uniform_division(8);
        let env = index_envelope(&seq, &|_| 1, &d, 10).unwrap();
        assert_eq!(env.spread(), 0.0);
    }

    #[test]
    fn envelope_xn_matches_monotone_formula() {
        // monotone in n: spread = Σ (x^N − x^n_max)(tag)·w exactly
        let seq = xn_seq();
        let d = uniform_division(6);
        let n_max = 50;
        let env = index_envelope(&seq, &|_| 1, &d, n_max).unwrap();
        let mut expect_lo = 0.0;
        let mut expect_hi = 0.0;
        for t in d.items() {
            expect_lo += t.tag.powi(n_max as i32) * t.width();
            expect_hi += t.tag.powi(1) * t.width();
        }
        assert!((env.lo_sum - expect_lo).abs() < 1e-15);
        assert!((env.hi_sum - expect_hi).abs() < 1e-15);
    }

    #[test]
    fn envelope_matches_exhaustive_bruteforce() {
        // every index assignment n: tags → [N, n_max] on a small instance
        let seq = FunctionSequence::new("mix", |n, x| ((n as f64) * x).sin());
        let d = uniform_division(4);
        let n_max = 4;
        let env = index_envelope(&seq, &|_| 1, &d, n_max).unwrap();
        let tags: Vec<(f64, f64)> = d.items().iter().map(|t| (t.tag, t.width())).collect();
        let k = tags.len();
        let mut brute_lo = f64::INFINITY;
        let mut brute_hi = f64::NEG_INFINITY;
        for code in 0..(n_max as usize).pow(k as u32) {
            let mut c = code;
            let mut s = 0.0;
            for &(tag, w) in &tags {
                let n = (c % n_max as usize) as u32 + 1;
                c /= n_max as usize;
                s += seq.term(n, tag) * w;
            }
            brute_lo = brute_lo.min(s);
            brute_hi = brute_hi.max(s);
        }
        assert_eq!(env.lo_sum, brute_lo);
        assert_eq!(env.hi_sum, brute_hi);
    }

    #[test]
    fn interchange_xn_family() {
        let gf = GaugeFamily::constant(unit());
        let v = check_value_interchange(&xn_seq(), &gf, 5e-2, 40, 3).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(v.limit_value.unwrap().abs() < 5e-2);
        // ∫x^n = 1/(n+1) < eps needs n ≥ 1/eps − 1 = 19
        assert!(v.witness_n.unwrap() >= 15, "{v:?}");
    }

    #[test]
    fn interchange_constant_sequence_witness_one() {
        let seq = FunctionSequence::new("const-seq", |_, x| x).with_pointwise_limit(|x| x);
        let gf = GaugeFamily::constant(unit());
        let v = check_value_interchange(&seq, &gf, 1e-2, 5, 4).unwrap();
        assert_eq!(v.witness_n, Some(1), "{v:?}");
    }

    #[test]
    fn param_check_saturating_family() {
        let fam = ParametricFamily::new("x(1-e^-y)", |x, y| x * (1.0 - (-y).exp()));
        let gf = GaugeFamily::constant(unit());
        let r = continuous_param_check(
            &fam,
            &|_| 8.0,
            &gf,
            &[1e-1, 1e-2],
            40.0,
            16,
            2,
            5,
        )
        .unwrap();
        // e^-8 ≈ 3e-4, spreads ≤ (b−a)·e^{-Y} ≪ eps
        assert!(r.function_condition_ok, "{r:?}");
        assert!(r.constant_condition_ok, "{r:?}");
    }

    #[test]
    fn param_check_oscillating_family_fails() {
        let fam = ParametricFamily::new("sin(xy)", |x, y| (x * y).sin());
        let gf = GaugeFamily::constant(unit());
        let r =
            continuous_param_check(&fam, &|_| 1.0, &gf, &[1e-1, 1e-2], 50.0, 24, 2, 5).unwrap();
        assert!(!r.function_condition_ok, "{r:?}");
    }

    #[test]
    fn param_check_constant_in_y() {
        let fam = ParametricFamily::new("x", |x, _| x);
        let gf = GaugeFamily::constant(unit());
        let r = continuous_param_check(&fam, &|_| 1.0, &gf, &[1e-1], 10.0, 8, 2, 5).unwrap();
        assert_eq!(r.levels[0].1, 0.0);
        assert_eq!(r.levels[0].2, 0.0);
    }

    #[test]
    fn diff_under_integral_bilinear() {
        let fam = ParametricFamily::new("xy", |x, y| x * y);
        let gf = GaugeFamily::constant(unit());
        let r = diff_under_integral_check(&fam, 1.0, &[1e-3], &gf, 1e-2, 3).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.derivative_of_integral - 0.5).abs() < 1e-2);
        assert!((r.integral_of_derivative - 0.5).abs() < 1e-2);
    }

    #[test]
    fn diff_under_integral_exponential() {
        let fam = ParametricFamily::new("e^-xy", |x, y| (-x * y).exp());
        let gf = GaugeFamily::constant(unit());
        let r = diff_under_integral_check(&fam, 1.0, &[1e-4], &gf, 1e-2, 9).unwrap();
        let expect = 2.0 / std::f64::consts::E - 1.0;
        assert!(r.holds, "{r:?}");
        assert!((r.derivative_of_integral - expect).abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn diff_under_integral_y_independent() {
        let fam = ParametricFamily::new("x", |x, _| x);
        let gf = GaugeFamily::constant(unit());
        let r = diff_under_integral_check(&fam, 1.0, &[1e-3], &gf, 1e-3, 4).unwrap();
        assert!(r.derivative_of_integral.abs() < 1e-6);
        assert!(r.integral_of_derivative.abs() < 1e-6);
    }

    #[test]
    fn monotone_constant_sequence() {
        let seq = FunctionSequence::new("const-seq", |_, x| x).with_pointwise_limit(|x| x);
        let gf = GaugeFamily::constant(unit());
        let r = monotone_convergence(&seq, &gf, 1e-3, &[1, 2, 3], 5).unwrap();
        assert!(r.monotone_sampled);
        for w in r.trace.windows(2) {
            assert!((w[0].1 - w[1].1).abs() < 2e-3);
        }
        assert!((r.fitted_sup - 0.5).abs() < 2e-3);
    }

    #[test]
    fn series_geometric_terms() {
        // s_n = x^n/2^n: Σ ∫ = Σ 1/((n+1)2^n)
        let seq = FunctionSequence::new("x^n/2^n", |n, x| (x / 2.0).powi(n as i32));
        let gf = GaugeFamily::constant(unit());
        let r = series_integration_check(&seq, &gf, 8, 1e-3, 5).unwrap();
        assert!(r < 5e-2, "residual {r}");
    }

    #[test]
    fn series_single_term() {
        let seq = FunctionSequence::new("x", |_, x| x);
        let gf = GaugeFamily::constant(unit());
        let r = series_integration_check(&seq, &gf, 1, 1e-3, 5).unwrap();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn series_alternating_constants() {
        // s_n = (−1)^n 2^{−n}: Σ = −1/3, both ways
        let seq = FunctionSequence::new("(-1)^n 2^-n", |n, _| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * (2.0f64).powi(-(n as i32))
        });
        let gf = GaugeFamily::constant(unit());
        let r = series_integration_check(&seq, &gf, 20, 1e-4, 5).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn min_function_tent() {
        let a = IntegrandHandle::new("x", |x| x).with_primitive(|x| x * x / 2.0);
        let b = IntegrandHandle::new("1-x", |x| 1.0 - x).with_primitive(|x| x - x * x / 2.0);
        let gf = GaugeFamily::constant(unit());
        let r = min_function_integral(&[a, b], &gf, 1e-3, 7).unwrap();
        assert!((r.value - 0.25).abs() < 2e-3, "{r:?}");
        let trace = r.refinement_trace.unwrap();
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "not refinement-monotone: {trace:?}");
        }
    }

    #[test]
    fn min_function_singleton() {
        let a = IntegrandHandle::new("x", |x| x);
        let gf = GaugeFamily::constant(unit());
        let r = min_function_integral(std::slice::from_ref(&a), &gf, 1e-3, 7).unwrap();
        assert!((r.value - 0.5).abs() < 2e-3);
    }

    #[test]
    fn min_function_dominated_pair() {
        let a = IntegrandHandle::new("x", |x| x);
        let b = IntegrandHandle::new("x^2", |x| x * x);
        let gf = GaugeFamily::constant(unit());
        let r = min_function_integral(&[a, b], &gf, 1e-3, 7).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 2e-3, "{r:?}");
    }

    #[test]
    fn fatou_constant_sequence_equality() {
        let seq = FunctionSequence::new("const-seq", |_, x| x);
        let gf = GaugeFamily::constant(unit());
        let r = fatou_check(&seq, &gf, 8, 1e-3, 3).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.integral_of_liminf - r.liminf_of_integrals).abs() < 4e-3);
    }

    #[test]
    fn fatou_alternating_pair() {
        // alternating between f=x and g=x+1 ≥ f: lhs = ∫f, rhs = min(∫f, ∫g) = ∫f
        let seq = FunctionSequence::new("alt", |n, x| if n % 2 == 0 { x + 1.0 } else { x });
        let gf = GaugeFamily::constant(unit());
        let r = fatou_check(&seq, &gf, 8, 1e-3, 3).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.integral_of_liminf - 0.5).abs() < 4e-3);
        assert!((r.liminf_of_integrals - 0.5).abs() < 4e-3);
    }

    #[test]
    fn dominated_convergence_xn() {
        let gf = GaugeFamily::constant(unit());
        let r = dominated_convergence(&xn_seq(), 0.0, 1.0, &gf, 1e-2, 400, 3, 11).unwrap();
        assert!(r.envelope_ok, "{r:?}");
        assert!(r.holds, "{r:?}");
        assert!(r.lim_of_integrals.abs() < 1e-2);
        assert!(r.integral_of_limit.unwrap().abs() < 1e-2);
    }

    #[test]
    fn bartle_shifted_constant() {
        let f = IntegrandHandle::new("x", |x| x);
        let seq = FunctionSequence::new("x+1/n", |n, x| x + 1.0 / n as f64);
        let gf = GaugeFamily::constant(unit());
        let v = bartle_condition_check(&seq, &f, &gf, 1e-2, 300, 2, 3).unwrap();
        assert!(v.holds, "{v:?}");
        // |Σ (1/n)w| = 1/n < eps needs n > 100
        assert!(v.witness_n.unwrap() > 90, "{v:?}");
    }

    #[test]
    fn limit_variation_uniform_rate() {
        // h_y(I,x) = (1/y)·m(I): variation = (b−a)/y → 0
        let gf = GaugeFamily::constant(unit());
        let h_at = |y: f64| IntervalPointFn::new("m/y", move |c: Interval, _| c.width() / y);
        let (trace, ok) = limit_variation_estimate(
            &h_at,
            &[10.0, 100.0, 1000.0],
            &gf,
            &[1e-1, 1e-2, 1e-3],
            2,
            4.0,
            3,
        )
        .unwrap();
        assert!(ok, "{trace:?}");
    }

    #[test]
    fn limit_variation_pinned_positive() {
        let gf = GaugeFamily::constant(unit());
        let h_at = |_: f64| IntervalPointFn::cell_length();
        let (trace, ok) =
            limit_variation_estimate(&h_at, &[10.0, 100.0], &gf, &[1e-1, 1e-2], 2, 4.0, 3)
                .unwrap();
        assert!(!ok, "{trace:?}");
    }
}
