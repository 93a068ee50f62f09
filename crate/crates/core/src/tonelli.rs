//! Double Riemann sums over nested one-dimensional divisions: iterated
//! integration of a two-parameter family, one axis at a time, plus the
//! sampled interchange conditions comparing the two orders.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::ParametricFamily;
use crate::division::{cousin_divide_randomized, Division, TaggedInterval, DEFAULT_MAX_DEPTH};
use crate::error::{GaugeError, Result};
use crate::gauge::Gauge;
use crate::integral::{gauge_integrate, GaugeFamily, GaugeIntegralReport};
use crate::integrand::IntegrandHandle;
use crate::interval::{Interval, Partition};

/// Gauges for a rectangle, one family per axis, with optional tag-adapted
/// inner gauges: when the x axis is outer, the inner y gauge may depend on
/// the outer tag (and symmetrically). Families with singularities on the
/// axes need that dependence; smooth families get by with the plain pair.
#[derive(Clone)]
pub struct ProductGauge {
    x: GaugeFamily,
    y: GaugeFamily,
    y_given_x: Option<Arc<dyn Fn(f64, f64) -> Gauge + Send + Sync>>,
    x_given_y: Option<Arc<dyn Fn(f64, f64) -> Gauge + Send + Sync>>,
}

impl ProductGauge {
    pub fn new(x: GaugeFamily, y: GaugeFamily) -> Self {
        ProductGauge {
            x,
            y,
            y_given_x: None,
            x_given_y: None,
        }
    }

    pub fn symmetric(f: GaugeFamily) -> Self {
        ProductGauge::new(f.clone(), f)
    }

    /// Inner y gauge as a function of (eps, outer x tag).
    pub fn with_y_given_x(
        mut self,
        g: impl Fn(f64, f64) -> Gauge + Send + Sync + 'static,
    ) -> Self {
        self.y_given_x = Some(Arc::new(g));
        self
    }

    /// Inner x gauge as a function of (eps, outer y tag).
    pub fn with_x_given_y(
        mut self,
        g: impl Fn(f64, f64) -> Gauge + Send + Sync + 'static,
    ) -> Self {
        self.x_given_y = Some(Arc::new(g));
        self
    }

    pub fn x_family(&self) -> &GaugeFamily {
        &self.x
    }

    pub fn y_family(&self) -> &GaugeFamily {
        &self.y
    }

    pub fn inner_y(&self, eps: f64, x_tag: f64) -> Gauge {
        match &self.y_given_x {
            Some(g) => g(eps, x_tag),
            None => self.y.at(eps),
        }
    }

    pub fn inner_x(&self, eps: f64, y_tag: f64) -> Gauge {
        match &self.x_given_y {
            Some(g) => g(eps, y_tag),
            None => self.x.at(eps),
        }
    }
}

/// One sampled nested division of a rectangle: a division of the outer axis
/// and, for each outer cell, its own division of the inner axis.
#[derive(Debug, Clone)]
pub struct ProductDivisionSample {
    outer: Division,
    /// aligned with outer.items()
    inner: Vec<Division>,
}

impl ProductDivisionSample {
    pub fn new(outer: Division, inner: Vec<Division>, inner_span: Interval) -> Result<Self> {
        if inner.len() != outer.n_cells() {
            return Err(GaugeError::InvalidArgument(format!(
                "{} inner divisions for {} outer cells",
                inner.len(),
                outer.n_cells()
            )));
        }
        for d in &inner {
            if d.span() != inner_span {
                return Err(GaugeError::InvalidArgument(format!(
                    "inner division spans {:?}, expected {:?}",
                    d.span(),
                    inner_span
                )));
            }
        }
        Ok(ProductDivisionSample { outer, inner })
    }

    pub fn outer(&self) -> &Division {
        &self.outer
    }

    pub fn inner(&self) -> &[Division] {
        &self.inner
    }

    /// Uniform n-by-n sample with every tag at the left endpoint of its cell.
    pub fn uniform_left_tagged(
        outer_span: Interval,
        inner_span: Interval,
        n: usize,
    ) -> Result<Self> {
        let outer = left_tagged(&Partition::uniform(outer_span, n)?)?;
        let inner_d = left_tagged(&Partition::uniform(inner_span, n)?)?;
        let inner = vec![inner_d; outer.n_cells()];
        ProductDivisionSample::new(outer, inner, inner_span)
    }

    /// Uniform n-by-n sample with midpoint tags (a tensor Riemann reference).
    pub fn uniform_midpoint_tagged(
        outer_span: Interval,
        inner_span: Interval,
        n: usize,
    ) -> Result<Self> {
        let outer = midpoint_tagged(&Partition::uniform(outer_span, n)?)?;
        let inner_d = midpoint_tagged(&Partition::uniform(inner_span, n)?)?;
        let inner = vec![inner_d; outer.n_cells()];
        ProductDivisionSample::new(outer, inner, inner_span)
    }

    /// Randomized fine sample: the outer axis under g_outer, then for every
    /// outer cell an independent fine division of the inner axis under the
    /// gauge assigned to that cell's tag.
    pub fn randomized(
        g_outer: &Gauge,
        outer_span: Interval,
        inner_at: &dyn Fn(f64) -> Gauge,
        inner_span: Interval,
        rng: &mut dyn rand::RngCore,
    ) -> Result<Self> {
        let outer = cousin_divide_randomized(g_outer, outer_span, DEFAULT_MAX_DEPTH, rng)?;
        let mut inner = Vec::with_capacity(outer.n_cells());
        for item in outer.items() {
            inner.push(cousin_divide_randomized(
                &inner_at(item.tag),
                inner_span,
                DEFAULT_MAX_DEPTH,
                rng,
            )?);
        }
        ProductDivisionSample::new(outer, inner, inner_span)
    }
}

fn left_tagged(p: &Partition) -> Result<Division> {
    Division::new(
        p.cells()
            .map(|cell| TaggedInterval {
                cell,
                tag: cell.lo(),
            })
            .collect(),
    )
}

fn midpoint_tagged(p: &Partition) -> Result<Division> {
    Division::new(
        p.cells()
            .map(|cell| TaggedInterval {
                cell,
                tag: cell.midpoint(),
            })
            .collect(),
    )
}

/// Outer sum over x, inner sums over y:
/// sum over outer cells of (v-u) * sum over that cell's inner division of
/// s(x_tag; y_tag)(beta-alpha).
pub fn double_sum_xy(fam: &ParametricFamily, p: &ProductDivisionSample) -> f64 {
    let mut total = 0.0;
    for (ti, d) in p.outer.items().iter().zip(&p.inner) {
        let mut inner_sum = 0.0;
        for tj in d.items() {
            inner_sum += fam.value(ti.tag, tj.tag) * tj.width();
        }
        total += inner_sum * ti.width();
    }
    total
}

/// Mirror of double_sum_xy with the roles of the axes swapped: the outer
/// division runs over y and each inner division over x.
pub fn double_sum_yx(fam: &ParametricFamily, p: &ProductDivisionSample) -> f64 {
    let mut total = 0.0;
    for (ti, d) in p.outer.items().iter().zip(&p.inner) {
        let mut inner_sum = 0.0;
        for tj in d.items() {
            inner_sum += fam.value(tj.tag, ti.tag) * tj.width();
        }
        total += inner_sum * ti.width();
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOrder {
    /// integrate over y for fixed x, then over x
    Xy,
    /// integrate over x for fixed y, then over y
    Yx,
}

/// How many cached inner integrals iterated_integrate keeps before clearing.
pub const INNER_CACHE_CAP: usize = 200_000;

/// Iterated integral: for each outer tag the inner slice is gauge-integrated
/// (cached per tag bit pattern, since the seed and schedule are fixed), and
/// the resulting one-variable function is gauge-integrated on the outer axis.
pub fn iterated_integrate(
    fam: &ParametricFamily,
    order: IterationOrder,
    pg: &ProductGauge,
    eps_schedule: &[f64],
    trials_per_eps: u32,
    seed: u64,
) -> Result<GaugeIntegralReport> {
    let cache: Arc<Mutex<HashMap<u64, f64>>> = Arc::new(Mutex::new(HashMap::new()));
    let fam = fam.clone();
    let pg2 = pg.clone();
    let schedule: Vec<f64> = eps_schedule.to_vec();
    let outer_family = match order {
        IterationOrder::Xy => pg.x_family().clone(),
        IterationOrder::Yx => pg.y_family().clone(),
    };
    let inner_span = match order {
        IterationOrder::Xy => pg.y_family().span(),
        IterationOrder::Yx => pg.x_family().span(),
    };
    let outer_h = IntegrandHandle::new(
        format!("iterated({}, {:?})", fam.label(), order),
        move |t: f64| {
            let key = t.to_bits();
            if let Some(&v) = cache.lock().unwrap().get(&key) {
                return v;
            }
            // Xy: outer tag is an x value, the inner slice runs over y
            let slice = match order {
                IterationOrder::Xy => fam.slice_y(t),
                IterationOrder::Yx => fam.slice_x(t),
            };
            let pg3 = pg2.clone();
            let inner_family = GaugeFamily::new("inner-slice", inner_span, move |eps| match order
            {
                IterationOrder::Xy => pg3.inner_y(eps, t),
                IterationOrder::Yx => pg3.inner_x(eps, t),
            });
            let inner_seed = seed ^ key.rotate_left(17);
            let v = match gauge_integrate(&slice, &inner_family, &schedule, 1, inner_seed) {
                Ok(r) => r.value,
                // surfaces as NonFiniteSample at the outer tag
                Err(_) => f64::NAN,
            };
            let mut c = cache.lock().unwrap();
            if c.len() >= INNER_CACHE_CAP {
                c.clear();
            }
            c.insert(key, v);
            v
        },
    );
    gauge_integrate(&outer_h, &outer_family, eps_schedule, trials_per_eps, seed)
}

/// One schedule level of the sampled interchange conditions.
#[derive(Debug, Clone, Copy)]
pub struct TonelliLevel {
    pub eps: f64,
    pub spread_xy: f64,
    pub spread_yx: f64,
    pub mid_xy: f64,
    pub mid_yx: f64,
}

/// Verdict pair for the two double-sum conditions, plus the final-level
/// cross-order interval intersection.
#[derive(Debug, Clone)]
pub struct TonelliReport {
    pub levels: Vec<TonelliLevel>,
    /// spreads of x-outer double sums stayed within eps at every level
    pub xy_holds: bool,
    pub yx_holds: bool,
    /// intersection of the final-level eps-intervals around the two orders
    pub intersection: Option<(f64, f64)>,
    /// both conditions hold and the intervals meet
    pub interchange: bool,
}

pub fn tonelli_condition_check(
    fam: &ParametricFamily,
    pg: &ProductGauge,
    eps_schedule: &[f64],
    trials_per_eps: u32,
    seed: u64,
) -> Result<TonelliReport> {
    assert!(!eps_schedule.is_empty() && trials_per_eps >= 2);
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let gx = pg.x_family().at(eps);
        let gy = pg.y_family().at(eps);
        let (mut lo_xy, mut hi_xy) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut lo_yx, mut hi_yx) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..trials_per_eps {
            let mut rng = ChaCha8Rng::seed_from_u64(seeder.gen());
            let pxy = ProductDivisionSample::randomized(
                &gx,
                pg.x_family().span(),
                &|x_tag| pg.inner_y(eps, x_tag),
                pg.y_family().span(),
                &mut rng,
            )?;
            let s = double_sum_xy(fam, &pxy);
            lo_xy = lo_xy.min(s);
            hi_xy = hi_xy.max(s);
            let pyx = ProductDivisionSample::randomized(
                &gy,
                pg.y_family().span(),
                &|y_tag| pg.inner_x(eps, y_tag),
                pg.x_family().span(),
                &mut rng,
            )?;
            let s = double_sum_yx(fam, &pyx);
            lo_yx = lo_yx.min(s);
            hi_yx = hi_yx.max(s);
        }
        levels.push(TonelliLevel {
            eps,
            spread_xy: hi_xy - lo_xy,
            spread_yx: hi_yx - lo_yx,
            mid_xy: (lo_xy + hi_xy) * 0.5,
            mid_yx: (lo_yx + hi_yx) * 0.5,
        });
    }
    let xy_holds = levels.iter().all(|l| l.spread_xy <= l.eps);
    let yx_holds = levels.iter().all(|l| l.spread_yx <= l.eps);
    let last = levels[levels.len() - 1];
    let ia = (last.mid_xy - last.eps, last.mid_xy + last.eps);
    let ib = (last.mid_yx - last.eps, last.mid_yx + last.eps);
    let lo = ia.0.max(ib.0);
    let hi = ia.1.min(ib.1);
    let intersection = (lo <= hi).then_some((lo, hi));
    Ok(TonelliReport {
        xy_holds,
        yx_holds,
        interchange: xy_holds && yx_holds && intersection.is_some(),
        intersection,
        levels,
    })
}

/// Gauges suited to the order-dependence witness: plain constant gauges on
/// the outer axis, with the inner gauge pinching toward the axis singularity
/// at a rate set by the outer tag. The per-slice error grows like
/// eps*log(1/tag), which integrates to O(eps) against the outer cells. At
/// tag 0 the slice is identically zero, so any gauge serves.
pub fn axis_pinch_product_gauge(span: Interval, scale: f64) -> ProductGauge {
    let slice_gauge = move |eps: f64, tag: f64| {
        if tag == 0.0 {
            Gauge::constant(span, span.width())
        } else {
            Gauge::new("axis-pinch-slice", span, move |t: f64| {
                (scale * eps * (tag + t)).max(f64::MIN_POSITIVE)
            })
        }
    };
    ProductGauge::symmetric(GaugeFamily::constant(span))
        .with_y_given_x(slice_gauge)
        .with_x_given_y(slice_gauge)
}
