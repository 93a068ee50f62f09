use std::sync::Arc;

use crate::error::{GaugeError, Result};
use crate::interval::{Interval, Partition};

/// A positive function delta(x) on a domain, controlling how fine a division
/// must be near each point. Positivity is checked at every evaluation.
#[derive(Clone)]
pub struct Gauge {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: Interval,
    label: String,
}

impl std::fmt::Debug for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gauge")
            .field("domain", &self.domain)
            .field("label", &self.label)
            .finish()
    }
}

impl Gauge {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Gauge {
            eval: Arc::new(eval),
            domain,
            label: label.into(),
        }
    }

    pub fn constant(domain: Interval, value: f64) -> Self {
        Gauge::new(format!("const({value})"), domain, move |_| value)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same evaluation rule on a different (typically smaller) domain.
    pub fn restrict(&self, domain: Interval) -> Gauge {
        Gauge {
            eval: self.eval.clone(),
            domain,
            label: self.label.clone(),
        }
    }

    /// Evaluate the gauge, rejecting non-positive or non-finite values.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let v = (self.eval)(x);
        if !(v > 0.0) || !v.is_finite() {
            return Err(GaugeError::GaugeNotPositive {
                label: self.label.clone(),
                x,
                value: v,
            });
        }
        Ok(v)
    }
}

/// Pointwise minimum of two gauges on the intersection of their domains.
pub fn min_gauge(g1: &Gauge, g2: &Gauge) -> Result<Gauge> {
    let domain = g1.domain().intersect(&g2.domain()).ok_or_else(|| {
        GaugeError::DomainMismatch {
            a_lo: g1.domain().lo(),
            a_hi: g1.domain().hi(),
            b_lo: g2.domain().lo(),
            b_hi: g2.domain().hi(),
        }
    })?;
    let e1 = g1.eval.clone();
    let e2 = g2.eval.clone();
    let label = format!("min({}, {})", g1.label(), g2.label());
    Ok(Gauge::new(label, domain, move |x| e1(x).min(e2(x))))
}

pub enum EndpointSide {
    Left,
    Right,
}

/// delta(x) = c*(x-a) for x > a with a positive floor at the endpoint itself
/// (left side; the right side mirrors with c*(b-x)). Forces cells near the
/// chosen endpoint to be tagged at it.
pub fn endpoint_gauge(
    span: Interval,
    side: EndpointSide,
    c: f64,
    floor_at_endpoint: f64,
) -> Result<Gauge> {
    if !(c > 0.0) || !(floor_at_endpoint > 0.0) {
        return Err(GaugeError::InvalidArgument(
            "endpoint gauge needs c > 0 and floor > 0".into(),
        ));
    }
    let (a, b) = (span.lo(), span.hi());
    let (label, eval): (String, Box<dyn Fn(f64) -> f64 + Send + Sync>) = match side {
        EndpointSide::Left => (
            format!("endpoint-left(c={c}, floor={floor_at_endpoint})"),
            Box::new(move |x: f64| {
                if x > a {
                    c * (x - a)
                } else {
                    floor_at_endpoint
                }
            }),
        ),
        EndpointSide::Right => (
            format!("endpoint-right(c={c}, floor={floor_at_endpoint})"),
            Box::new(move |x: f64| {
                if x < b {
                    c * (b - x)
                } else {
                    floor_at_endpoint
                }
            }),
        ),
    };
    Ok(Gauge::new(label, span, move |x| eval(x)))
}

/// The largest gauge under which every fine division refines the partition:
/// 2*delta(x) = distance from x to the nearest partition point strictly inside
/// a cell; at an interior partition point, half the shorter adjacent cell; at
/// the span endpoints, half the adjacent cell.
pub fn refinement_gauge(p: &Partition) -> Gauge {
    let points: Vec<f64> = p.points().to_vec();
    let span = p.span();
    Gauge::new("refinement", span, move |x| {
        // nearest index with points[i] <= x
        let i = match points.binary_search_by(|q| q.partial_cmp(&x).unwrap()) {
            Ok(i) => {
                // x is a partition point
                let left = if i > 0 { points[i] - points[i - 1] } else { f64::INFINITY };
                let right = if i + 1 < points.len() {
                    points[i + 1] - points[i]
                } else {
                    f64::INFINITY
                };
                return left.min(right) / 2.0;
            }
            Err(i) => i,
        };
        if i == 0 || i >= points.len() {
            // outside the partition's span: fall back to the edge cell width
            let w = if i == 0 {
                points[1] - points[0]
            } else {
                points[points.len() - 1] - points[points.len() - 2]
            };
            return w / 2.0;
        }
        ((points[i] - x).min(x - points[i - 1])) / 2.0
    })
}

/// delta(x) = max(half the distance to the nearest breakpoint, floor).
/// Cells away from every breakpoint cannot straddle one; a cell that does
/// straddle a breakpoint must have width below the floor, so the floor bounds
/// the misclassified length per breakpoint. The floor also guarantees
/// bisection terminates when the breakpoints are not dyadic.
pub fn breakpoint_gauge(span: Interval, mut breakpoints: Vec<f64>, floor: f64) -> Result<Gauge> {
    if !(floor > 0.0) {
        return Err(GaugeError::InvalidArgument(
            "breakpoint gauge needs floor > 0".into(),
        ));
    }
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();
    if breakpoints.is_empty() {
        return Ok(Gauge::constant(span, span.width()));
    }
    Ok(Gauge::new(
        format!("breakpoints(n={}, floor={floor})", breakpoints.len()),
        span,
        move |x| {
            let i = breakpoints
                .partition_point(|&b| b < x);
            let left = if i > 0 { x - breakpoints[i - 1] } else { f64::INFINITY };
            let right = if i < breakpoints.len() {
                breakpoints[i] - x
            } else {
                f64::INFINITY
            };
            (left.min(right) / 2.0).max(floor)
        },
    ))
}
