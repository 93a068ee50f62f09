//! Integration over half-lines and the whole line. A division of [a, +inf)
//! is a finite-part division of [a, B] plus the tail [B, +inf), whose
//! contribution is identically zero; the tail is fine once B clears an
//! eps-dependent threshold.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::division::{Division, DEFAULT_MAX_DEPTH};
use crate::error::{GaugeError, Result};
use crate::gauge::Gauge;
use crate::integral::{randomized_sum, EpsTraceEntry, GaugeFamily, GaugeIntegralReport};
use crate::integrand::IntegrandHandle;
use crate::interval::{Interval, Partition};
use crate::riemann::riemann_sum;

/// Division of [a, +inf): a finite-part division of [a, tail_cut] together
/// with the zero-contribution tail beyond the cut.
#[derive(Debug, Clone)]
pub struct HalfLineDivision {
    pub finite_part: Division,
    pub tail_cut: f64,
}

impl HalfLineDivision {
    pub fn new(finite_part: Division, tail_cut: f64) -> Result<Self> {
        if finite_part.span().hi() != tail_cut {
            return Err(GaugeError::InvalidArgument(format!(
                "finite part ends at {}, not at the tail cut {tail_cut}",
                finite_part.span().hi()
            )));
        }
        Ok(HalfLineDivision {
            finite_part,
            tail_cut,
        })
    }

    /// Riemann sum: the finite part only, the tail adds zero.
    pub fn sum(&self, h: &IntegrandHandle) -> Result<f64> {
        Ok(riemann_sum(h, &self.finite_part)?.value)
    }
}

/// eps-indexed gauges for a half-line [origin, +inf): a finite-evaluation
/// inner gauge plus a threshold the tail cut must clear at each eps.
#[derive(Clone)]
pub struct TailGauge {
    inner: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    tail_threshold: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    origin: f64,
    divergence_bound: f64,
    label: String,
}

pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1e12;

impl TailGauge {
    /// `inner(eps, x)` is the gauge value at x for level eps;
    /// `tail_threshold(eps)` is the least admissible tail cut.
    pub fn new(
        label: impl Into<String>,
        origin: f64,
        inner: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        tail_threshold: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TailGauge {
            inner: Arc::new(inner),
            tail_threshold: Arc::new(tail_threshold),
            origin,
            divergence_bound: DEFAULT_DIVERGENCE_BOUND,
            label: label.into(),
        }
    }

    /// Constant inner gauge delta = eps.
    pub fn constant_inner(
        label: impl Into<String>,
        origin: f64,
        tail_threshold: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        TailGauge::new(label, origin, |eps, _x| eps, tail_threshold)
    }

    pub fn with_divergence_bound(mut self, bound: f64) -> Self {
        self.divergence_bound = bound;
        self
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn divergence_bound(&self) -> f64 {
        self.divergence_bound
    }

    pub fn tail_threshold(&self, eps: f64) -> f64 {
        (self.tail_threshold)(eps).max(self.origin)
    }

    /// The inner gauge at level eps, restricted to [origin, cut].
    pub fn gauge_at(&self, eps: f64, cut: f64) -> Result<Gauge> {
        let span = Interval::new(self.origin, cut)?;
        let inner = self.inner.clone();
        Ok(Gauge::new(
            format!("{}(eps={eps})", self.label),
            span,
            move |x| inner(eps, x),
        ))
    }
}

/// Gauge integral over [origin, +inf): per eps level, several randomized
/// tail cuts beyond the threshold, each with a randomized fine division of
/// the finite part. Convergence uses the same trace criteria as the compact
/// case; the spread additionally exercises tail-cut invariance because every
/// trial draws its own cut.
pub fn halfline_gauge_integrate(
    h: &IntegrandHandle,
    tg: &TailGauge,
    eps_schedule: &[f64],
    trials_per_eps: u32,
    seed: u64,
) -> Result<GaugeIntegralReport> {
    assert!(!eps_schedule.is_empty() && trials_per_eps >= 1);
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut trace: Vec<EpsTraceEntry> = Vec::with_capacity(eps_schedule.len());
    let mut means: Vec<f64> = Vec::new();
    for &eps in eps_schedule {
        let threshold = tg.tail_threshold(eps);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut total = 0.0;
        let mut max_cells = 0usize;
        for _ in 0..trials_per_eps {
            let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
            let cut = threshold + rng.gen_range(0.0..(threshold - tg.origin).abs().max(1.0));
            let g = tg.gauge_at(eps, cut)?;
            let span = Interval::new(tg.origin, cut)?;
            let (sum, n_cells) = randomized_sum(h, &g, span, DEFAULT_MAX_DEPTH, &mut rng)?;
            lo = lo.min(sum);
            hi = hi.max(sum);
            total += sum;
            max_cells = max_cells.max(n_cells);
        }
        let mean = total / trials_per_eps as f64;
        trace.push(EpsTraceEntry {
            eps,
            sum: mean,
            n_cells: max_cells,
            spread: hi - lo,
        });
        means.push(mean);
        let monotone = means.windows(2).all(|w| w[1] > w[0])
            || means.windows(2).all(|w| w[1] < w[0]);
        if means.len() >= 2 && monotone && mean.abs() > tg.divergence_bound() {
            return Err(GaugeError::DivergenceDetected {
                last: mean,
                bound: tg.divergence_bound(),
            });
        }
    }
    let spreads_ok = trace.iter().all(|t| t.spread <= 2.0 * t.eps);
    let sums_cauchy = trace
        .windows(2)
        .all(|w| (w[0].sum - w[1].sum).abs() <= w[0].eps + w[1].eps);
    Ok(GaugeIntegralReport {
        value: means[means.len() - 1],
        eps_trace: trace,
        converged: spreads_ok && sums_cauchy,
    })
}

/// Integral over a compact [a, c] with trouble at the right endpoint c:
/// compute the integrals up to each cut b < c, fit the limit, and compare
/// against the direct run with the singular gauge on all of [a, c].
#[derive(Debug, Clone)]
pub struct CauchyExtensionReport {
    /// (cut b, integral over [a, b], converged)
    pub cut_trace: Vec<(f64, f64, bool)>,
    pub fitted_limit: Option<f64>,
    /// consecutive cut values kept moving by more than tol
    pub oscillating: bool,
    pub direct: GaugeIntegralReport,
    /// |direct − fitted| when both exist
    pub residual: Option<f64>,
}

pub fn cauchy_extension_check(
    h: &IntegrandHandle,
    base_family: &GaugeFamily,
    cut_schedule: &[f64],
    eps_schedule: &[f64],
    trials_per_eps: u32,
    tol: f64,
    seed: u64,
) -> Result<CauchyExtensionReport> {
    let span = base_family.span();
    if cut_schedule.is_empty()
        || cut_schedule
            .iter()
            .any(|&b| b <= span.lo() || b >= span.hi())
    {
        return Err(GaugeError::InvalidArgument(
            "cut schedule must be nonempty and interior to the span".into(),
        ));
    }
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut cut_trace = Vec::with_capacity(cut_schedule.len());
    for &b in cut_schedule {
        let sub = Interval::new(span.lo(), b)?;
        let parent = base_family.clone();
        let sub_family = GaugeFamily::new(
            format!("{}|[,{b}]", base_family.label()),
            sub,
            move |eps| parent.at(eps).restrict(sub),
        );
        let report =
            crate::integral::gauge_integrate(h, &sub_family, eps_schedule, trials_per_eps, seeder.gen())?;
        cut_trace.push((b, report.value, report.converged));
    }
    let n = cut_trace.len();
    let (fitted_limit, oscillating) = if n >= 2 {
        let last_step = (cut_trace[n - 1].1 - cut_trace[n - 2].1).abs();
        let prev_step = if n >= 3 {
            (cut_trace[n - 2].1 - cut_trace[n - 3].1).abs()
        } else {
            last_step
        };
        if last_step <= tol {
            (Some(cut_trace[n - 1].1), false)
        } else {
            (None, prev_step > tol)
        }
    } else {
        (Some(cut_trace[0].1), false)
    };
    let direct =
        crate::integral::gauge_integrate(h, base_family, eps_schedule, trials_per_eps, seeder.gen())?;
    let residual = fitted_limit.map(|g| (direct.value - g).abs());
    Ok(CauchyExtensionReport {
        cut_trace,
        fitted_limit,
        oscillating,
        direct,
        residual,
    })
}

/// Simple integrability over [a, +inf): Riemann sums on uniform partitions
/// of [a, b_i] at mesh_i, with b_i growing and mesh_i shrinking jointly.
#[derive(Debug, Clone)]
pub struct SimpleIntegrabilityReport {
    /// (b, mesh, midpoint-tagged uniform Riemann sum over [a, b])
    pub trace: Vec<(f64, f64, f64)>,
    pub cauchy: bool,
    pub limit: Option<f64>,
}

pub fn simple_integrability_check(
    h: &IntegrandHandle,
    origin: f64,
    b_schedule: &[f64],
    mesh_schedule: &[f64],
    tol: f64,
) -> Result<SimpleIntegrabilityReport> {
    if b_schedule.len() != mesh_schedule.len() || b_schedule.is_empty() {
        return Err(GaugeError::InvalidArgument(
            "b and mesh schedules must be nonempty and equal length".into(),
        ));
    }
    let mut trace = Vec::with_capacity(b_schedule.len());
    for (&b, &mesh) in b_schedule.iter().zip(mesh_schedule) {
        let span = Interval::new(origin, b)?;
        let n = (span.width() / mesh).ceil().max(1.0) as usize;
        let p = Partition::uniform(span, n)?;
        let mut sum = 0.0;
        for cell in p.cells() {
            sum += h.eval_checked(cell.midpoint())? * cell.width();
        }
        trace.push((b, p.mesh(), sum));
    }
    let cauchy = trace.windows(2).all(|w| (w[1].2 - w[0].2).abs() <= tol);
    let limit = cauchy.then(|| trace[trace.len() - 1].2);
    Ok(SimpleIntegrabilityReport {
        trace,
        cauchy,
        limit,
    })
}

/// The two halves of the uniform Riemann condition on [origin, +inf):
/// worst sampled oscillation sum on [origin, b] at mesh below delta, and
/// worst sampled |Riemann sum| over far segments [b, b'] with b' > b > big_b.
#[derive(Debug, Clone)]
pub struct UniformRiemannReport {
    pub osc_part: f64,
    pub tail_part: f64,
    pub eps: f64,
    pub passes: bool,
}

pub fn uniform_riemann_condition_check(
    h: &IntegrandHandle,
    origin: f64,
    big_b: f64,
    delta: f64,
    eps: f64,
    trials: u32,
    seed: u64,
) -> Result<UniformRiemannReport> {
    if !(big_b > origin) || !(delta > 0.0) {
        return Err(GaugeError::InvalidArgument(
            "uniform Riemann condition needs big_b > origin and delta > 0".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut osc_part = 0.0f64;
    let mut tail_part = 0.0f64;
    for _ in 0..trials.max(1) {
        // oscillation sum over [origin, b] for a sampled admissible b
        let b = big_b * (1.0 + rng.gen_range(0.0..1.0));
        let span = Interval::new(origin, b)?;
        let n = (span.width() / delta).ceil().max(1.0) as usize;
        let jitter = rng.gen_range(0..4usize);
        let p = Partition::uniform(span, n + jitter)?;
        let mut osum = 0.0;
        for cell in p.cells() {
            let (inf, sup) = h.osc("uniform_riemann_condition_check", cell)?;
            osum += (sup - inf) * cell.width();
        }
        osc_part = osc_part.max(osum);

        // far-segment Riemann sum beyond big_b
        let b1 = big_b * (1.0 + rng.gen_range(0.0..2.0));
        let b2 = b1 + big_b * rng.gen_range(0.1..2.0);
        let seg = Interval::new(b1, b2)?;
        let m = (seg.width() / delta).ceil().max(1.0) as usize;
        let ps = Partition::uniform(seg, m)?;
        let mut sum = 0.0;
        for cell in ps.cells() {
            sum += h.eval_checked(cell.midpoint())? * cell.width();
        }
        tail_part = tail_part.max(sum.abs());
    }
    Ok(UniformRiemannReport {
        osc_part,
        tail_part,
        eps,
        passes: osc_part < eps && tail_part < eps,
    })
}

/// Whole-line integral as the sum of two independent half-line runs, the
/// negative half handled by reflection. The two cuts are always drawn
/// independently (different seeds), never as a symmetric pair.
#[derive(Debug, Clone)]
pub struct WholeLineReport {
    pub negative_half: GaugeIntegralReport,
    pub positive_half: GaugeIntegralReport,
    pub value: f64,
    pub converged: bool,
}

pub fn wholeline_gauge_integrate(
    h: &IntegrandHandle,
    tg_negative: &TailGauge,
    tg_positive: &TailGauge,
    eps_schedule: &[f64],
    trials_per_eps: u32,
    seed: u64,
) -> Result<WholeLineReport> {
    let hh = h.clone();
    let reflected = IntegrandHandle::new(format!("{}(-x)", h.name()), move |x: f64| {
        hh.eval(-x)
    });
    let negative_half = halfline_gauge_integrate(
        &reflected,
        tg_negative,
        eps_schedule,
        trials_per_eps,
        seed ^ 0x9e3779b97f4a7c15,
    )?;
    let positive_half =
        halfline_gauge_integrate(h, tg_positive, eps_schedule, trials_per_eps, seed)?;
    Ok(WholeLineReport {
        value: negative_half.value + positive_half.value,
        converged: negative_half.converged && positive_half.converged,
        negative_half,
        positive_half,
    })
}

/// Diagnostic for a regulating function g: the ratios b_n / g(mesh_n) along
/// a joint schedule, and whether they tended to zero (last below tol).
pub fn regulated_ratio_trace(
    b_schedule: &[f64],
    mesh_schedule: &[f64],
    g: &dyn Fn(f64) -> f64,
    tol: f64,
) -> (Vec<f64>, bool) {
    let ratios: Vec<f64> = b_schedule
        .iter()
        .zip(mesh_schedule)
        .map(|(&b, &m)| b / g(m))
        .collect();
    let tends = ratios.last().map(|r| r.abs() < tol).unwrap_or(false);
    (ratios, tends)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::cousin_divide;
    use crate::integral::gauge_integrate;

    fn exp_decay() -> IntegrandHandle {
        IntegrandHandle::new("exp(-x)", |x: f64| (-x).exp())
            .with_osc_oracle(|cell: Interval| ((-cell.hi()).exp(), (-cell.lo()).exp()))
            .with_primitive(|x: f64| -(-x).exp())
    }

    fn exp_tail_gauge() -> TailGauge {
        TailGauge::constant_inner("exp-tail", 0.0, |eps: f64| (1.0 / eps).ln() + 1.0)
    }

    #[test]
    fn halfline_exp_decay_is_one() {
        let report = halfline_gauge_integrate(
            &exp_decay(),
            &exp_tail_gauge(),
            &[1e-1, 1e-2, 1e-3],
            4,
            3,
        )
        .unwrap();
        assert!(report.converged, "trace {:?}", report.eps_trace);
        assert!((report.value - 1.0).abs() < 1e-3, "value {}", report.value);
    }

    #[test]
    fn halfline_inverse_square_is_one() {
        let h = IntegrandHandle::new("x^-2", |x: f64| 1.0 / (x * x));
        let tg = TailGauge::new(
            "inv-square-tail",
            1.0,
            |eps, x| (0.5 * eps * x).max(f64::MIN_POSITIVE),
            |eps| 2.0 / eps,
        );
        let report = halfline_gauge_integrate(&h, &tg, &[1e-1, 1e-2, 1e-3], 4, 17).unwrap();
        assert!(report.converged, "trace {:?}", report.eps_trace);
        assert!((report.value - 1.0).abs() < 1e-3, "value {}", report.value);
    }

    #[test]
    fn halfline_harmonic_diverges() {
        let h = IntegrandHandle::new("1/x", |x: f64| 1.0 / x);
        let tg = TailGauge::new(
            "harmonic-tail",
            1.0,
            |eps, x| (0.5 * eps * x).max(f64::MIN_POSITIVE),
            |eps| (1.6 / eps).exp(),
        )
        .with_divergence_bound(15.0);
        let err = halfline_gauge_integrate(&h, &tg, &[0.4, 0.2, 0.1], 2, 23).unwrap_err();
        assert!(matches!(err, GaugeError::DivergenceDetected { .. }), "{err}");
    }

    #[test]
    fn halfline_tail_cut_invariance() {
        // same eps, disjoint cut ranges via different thresholds
        let h = exp_decay();
        let mut values = Vec::new();
        for extra in [0.0, 3.0, 9.0] {
            let tg =
                TailGauge::constant_inner("exp-tail", 0.0, move |eps: f64| {
                    (1.0 / eps).ln() + 1.0 + extra
                });
            let r = halfline_gauge_integrate(&h, &tg, &[1e-3], 2, 29).unwrap();
            values.push(r.value);
        }
        for w in values.windows(2) {
            assert!((w[0] - w[1]).abs() < 2e-3, "{values:?}");
        }
    }

    #[test]
    fn halfline_compact_support_matches_compact_integral() {
        let bump = IntegrandHandle::new("bump", |x: f64| {
            if (0.0..=2.0).contains(&x) {
                x * (2.0 - x)
            } else {
                0.0
            }
        });
        let tg = TailGauge::constant_inner("bump-tail", 0.0, |_eps| 5.0);
        let half = halfline_gauge_integrate(&bump, &tg, &[1e-2, 1e-3], 3, 31).unwrap();
        let span = Interval::new(0.0, 2.0).unwrap();
        let compact = gauge_integrate(
            &bump,
            &GaugeFamily::constant(span),
            &[1e-2, 1e-3],
            3,
            31,
        )
        .unwrap();
        assert!(half.converged && compact.converged);
        assert!((half.value - compact.value).abs() < 2e-3);
        assert!((half.value - 4.0 / 3.0).abs() < 2e-3);
    }

    #[test]
    fn halfline_division_sum_drops_tail() {
        let g = Gauge::constant(Interval::new(0.0, 4.0).unwrap(), 0.5);
        let d = cousin_divide(&g, Interval::new(0.0, 4.0).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
        let hd = HalfLineDivision::new(d.clone(), 4.0).unwrap();
        let one = IntegrandHandle::new("1", |_| 1.0);
        assert_eq!(hd.sum(&one).unwrap(), riemann_sum(&one, &d).unwrap().value);
        assert!(HalfLineDivision::new(d, 5.0).is_err());
    }

    #[test]
    fn cauchy_extension_matches_direct_for_sqrt_recip() {
        // right-endpoint singularity via x -> 1 - x
        let h = IntegrandHandle::new("(1-x)^-1/2", |x: f64| {
            if x < 1.0 {
                1.0 / (1.0 - x).sqrt()
            } else {
                0.0
            }
        });
        let span = Interval::new(0.0, 1.0).unwrap();
        let family = GaugeFamily::new("right-endpoint", span, move |eps| {
            crate::gauge::endpoint_gauge(
                span,
                crate::gauge::EndpointSide::Right,
                eps * 0.5,
                (eps * 0.25) * (eps * 0.25),
            )
            .unwrap()
        });
        let report = cauchy_extension_check(
            &h,
            &family,
            &[0.9, 0.99, 0.999, 0.9999, 0.99999, 1.0 - 1e-6, 1.0 - 1e-7],
            &[1e-2, 1e-3],
            3,
            1e-2,
            41,
        )
        .unwrap();
        let fitted = report.fitted_limit.expect("limit fit");
        assert!((fitted - 2.0).abs() < 1e-2, "fitted {fitted}");
        assert!(report.direct.converged);
        assert!((report.direct.value - 2.0).abs() < 1e-3);
        assert!(report.residual.unwrap() < 1.5e-2);
    }

    #[test]
    fn cauchy_extension_continuous_case() {
        let h = IntegrandHandle::new("x", |x: f64| x);
        let span = Interval::new(0.0, 1.0).unwrap();
        let family = GaugeFamily::constant(span);
        let report = cauchy_extension_check(
            &h,
            &family,
            &[0.99, 0.999, 0.9999],
            &[1e-3, 1e-4],
            2,
            1e-3,
            43,
        )
        .unwrap();
        let fitted = report.fitted_limit.unwrap();
        assert!((fitted - 0.5).abs() < 1e-2);
        assert!((report.direct.value - 0.5).abs() < 1e-3);
    }

    #[test]
    fn cauchy_extension_oscillating_staircase() {
        let e = crate::corpus::lookup("staircase-4-1-1").unwrap();
        let f = e.sequence().unwrap().pointwise_limit().unwrap();
        let span = Interval::new(0.0, 2.0).unwrap();
        let family = GaugeFamily::constant(span);
        // cuts at 2 - 1/n land exactly on block edges: the cut integrals
        // alternate near 0 and 1
        let cuts: Vec<f64> = (2..=7).map(|n| 2.0 - 1.0 / n as f64).collect();
        let report =
            cauchy_extension_check(&f, &family, &cuts, &[1e-2, 1e-3], 2, 1e-2, 47).unwrap();
        assert!(report.fitted_limit.is_none());
        assert!(report.oscillating);
    }

    #[test]
    fn simple_integrability_exp_decay() {
        let r = simple_integrability_check(
            &exp_decay(),
            0.0,
            &[10.0, 20.0, 30.0, 40.0],
            &[1e-2, 5e-3, 2e-3, 1e-3],
            1e-3,
        )
        .unwrap();
        assert!(r.cauchy);
        assert!((r.limit.unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn simple_integrability_constant_fails() {
        let one = IntegrandHandle::new("1", |_| 1.0);
        let r = simple_integrability_check(
            &one,
            0.0,
            &[10.0, 20.0, 40.0],
            &[1e-2, 1e-2, 1e-2],
            1e-3,
        )
        .unwrap();
        assert!(!r.cauchy);
        assert!(r.limit.is_none());
    }

    #[test]
    fn uniform_riemann_exp_decay_tail_is_tiny() {
        let r =
            uniform_riemann_condition_check(&exp_decay(), 0.0, 20.0, 1e-2, 1e-3, 8, 53).unwrap();
        assert!(r.tail_part < 1e-8, "tail {}", r.tail_part);
    }

    #[test]
    fn uniform_riemann_constant_tail_fails() {
        let one = IntegrandHandle::new("1", |_| 1.0).with_osc_oracle(|_| (1.0, 1.0));
        let r = uniform_riemann_condition_check(&one, 0.0, 10.0, 1e-1, 1e-3, 4, 59).unwrap();
        assert!(r.tail_part > 1.0);
        assert!(!r.passes);
    }

    #[test]
    fn uniform_riemann_dense_oscillation_fails_osc_part() {
        // ideally-oscillating oracle extended periodically: osc 1 on every cell
        let h = IntegrandHandle::new("dense", |_| 0.0).with_osc_oracle(|_| (0.0, 1.0));
        let r = uniform_riemann_condition_check(&h, 0.0, 5.0, 1e-1, 1e-3, 4, 61).unwrap();
        assert!(r.osc_part >= 5.0, "osc {}", r.osc_part);
        assert!(!r.passes);
    }

    #[test]
    fn wholeline_two_sided_exp() {
        let h = IntegrandHandle::new("exp(-|x|)", |x: f64| (-x.abs()).exp());
        let tg = exp_tail_gauge();
        let r = wholeline_gauge_integrate(&h, &tg, &tg, &[1e-1, 1e-2, 1e-3], 3, 67).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 2e-3, "value {}", r.value);
    }

    #[test]
    fn regulated_ratio_diagnostic() {
        let (ratios, tends) = regulated_ratio_trace(
            &[10.0, 100.0, 1000.0],
            &[1e-2, 1e-4, 1e-6],
            &|m| 1.0 / m,
            0.01,
        );
        assert_eq!(ratios, vec![0.1, 0.01, 0.001]);
        assert!(tends);
    }
}
