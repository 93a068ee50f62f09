//! Registry of named integrands, function sequences, and two-parameter
//! families, each bundled with exact oracles (oscillation data, primitives,
//! closed-form values) and a hand-built gauge recipe where one is known.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convergence::{FunctionSequence, ParametricFamily};
use crate::error::{GaugeError, Result};
use crate::gauge::{breakpoint_gauge, endpoint_gauge, EndpointSide, Gauge};
use crate::integral::GaugeFamily;
use crate::integrand::IntegrandHandle;
use crate::interval::Interval;
use crate::report::F17;

/// What a registry entry carries: a single function, a sequence of functions,
/// or a two-parameter family.
#[derive(Clone, Debug)]
pub enum CorpusPayload {
    Integrand(IntegrandHandle),
    Sequence(FunctionSequence),
    Family(ParametricFamily),
}

impl CorpusPayload {
    pub fn kind(&self) -> &'static str {
        match self {
            CorpusPayload::Integrand(_) => "integrand",
            CorpusPayload::Sequence(_) => "sequence",
            CorpusPayload::Family(_) => "family",
        }
    }
}

/// A numeric fact about an entry, with a human-readable statement of where
/// the number comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownValue {
    pub description: String,
    pub value: f64,
    pub provenance: String,
}

impl KnownValue {
    fn new(description: &str, value: f64, provenance: &str) -> Self {
        KnownValue {
            description: description.into(),
            value,
            provenance: provenance.into(),
        }
    }
}

#[derive(Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub payload: CorpusPayload,
    pub known_values: Vec<KnownValue>,
    /// eps-indexed gauges tailored to the entry (for sequences: to the
    /// pointwise limit; per-term gauges live on the sequence itself).
    pub gauge_recipe: Option<GaugeFamily>,
    /// For sequences: recommended point-indexed truncation level N(x) such
    /// that the terms are settled at x from index N(x) on.
    pub index_fn: Option<Arc<dyn Fn(f64) -> u32 + Send + Sync>>,
    pub notes: String,
}

impl std::fmt::Debug for CorpusEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusEntry")
            .field("name", &self.name)
            .field("kind", &self.payload.kind())
            .finish()
    }
}

impl CorpusEntry {
    pub fn kind(&self) -> &'static str {
        self.payload.kind()
    }

    pub fn integrand(&self) -> Result<IntegrandHandle> {
        match &self.payload {
            CorpusPayload::Integrand(h) => Ok(h.clone()),
            _ => Err(GaugeError::InvalidArgument(format!(
                "corpus entry '{}' is a {}, not an integrand",
                self.name,
                self.kind()
            ))),
        }
    }

    pub fn sequence(&self) -> Result<FunctionSequence> {
        match &self.payload {
            CorpusPayload::Sequence(s) => Ok(s.clone()),
            _ => Err(GaugeError::InvalidArgument(format!(
                "corpus entry '{}' is a {}, not a sequence",
                self.name,
                self.kind()
            ))),
        }
    }

    pub fn family(&self) -> Result<ParametricFamily> {
        match &self.payload {
            CorpusPayload::Family(f) => Ok(f.clone()),
            _ => Err(GaugeError::InvalidArgument(format!(
                "corpus entry '{}' is a {}, not a family",
                self.name,
                self.kind()
            ))),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The first `count` rationals in [0, 1], enumerated by increasing
/// denominator (then increasing numerator, reduced fractions only):
/// 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
pub fn enumerate_rationals(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut q: u64 = 1;
    while out.len() < count {
        for p in 0..=q {
            if gcd(p, q) == 1 {
                out.push(p as f64 / q as f64);
                if out.len() == count {
                    break;
                }
            }
        }
        q += 1;
    }
    out
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

/// How many enumerated rationals the rational-indicator entry carries.
pub const RATIONAL_INDICATOR_COUNT: usize = 10_000;

fn dirichlet_entry() -> CorpusEntry {
    let points = enumerate_rationals(RATIONAL_INDICATOR_COUNT);
    let index: Arc<HashMap<u64, usize>> = Arc::new(
        points
            .iter()
            .enumerate()
            .map(|(k, r)| (r.to_bits(), k))
            .collect(),
    );
    let set = index.clone();
    let f = IntegrandHandle::new("dirichlet", move |x: f64| {
        if set.contains_key(&x.to_bits()) {
            1.0
        } else {
            0.0
        }
    })
    // Oscillation answers for the ideal indicator of ALL rationals: every
    // cell contains both a rational and an irrational.
    .with_osc_oracle(|_cell| (0.0, 1.0))
    .with_primitive(|_x| 0.0);

    let idx = index.clone();
    let recipe = GaugeFamily::new("dirichlet", unit(), move |eps| {
        let idx = idx.clone();
        Gauge::new(format!("dirichlet(eps={eps})"), unit(), move |x| {
            match idx.get(&x.to_bits()) {
                // Length tagged at the k-th enumerated rational is below
                // 2*eps*2^(-k-2); summed over k this stays below eps.
                Some(&k) => (eps * 2f64.powi(-(k as i32) - 2)).max(f64::MIN_POSITIVE),
                None => 1.0,
            }
        })
    });

    CorpusEntry {
        name: "dirichlet".into(),
        payload: CorpusPayload::Integrand(f),
        known_values: vec![
            KnownValue::new(
                "gauge integral on [0,1]",
                0.0,
                "indicator of a countable set; the gauge recipe pins the total length tagged at enumerated points below eps",
            ),
            KnownValue::new(
                "Darboux upper-minus-lower gap on [0,1], any mesh",
                1.0,
                "analytic oscillation oracle: inf 0, sup 1 on every cell",
            ),
        ],
        gauge_recipe: Some(recipe),
        index_fn: None,
        notes: format!(
            "Indicator of the first {RATIONAL_INDICATOR_COUNT} rationals enumerated by denominator. \
             Point evaluation uses the finite enumerated set (every float is rational, so the \
             ideal indicator is not evaluable); the oscillation oracle answers for the ideal \
             indicator of all rationals, so Darboux sums keep a gap of 1 at every mesh while \
             the gauge integral is 0. Both faces are intentional and documented here."
        ),
    }
}

fn osc_derivative_entry() -> CorpusEntry {
    let primitive = |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            x * x * (1.0 / (x * x)).sin()
        }
    };
    let f = IntegrandHandle::new("osc-derivative", |x: f64| {
        if x == 0.0 {
            0.0
        } else {
            let inv2 = 1.0 / (x * x);
            2.0 * x * inv2.sin() - (2.0 / x) * inv2.cos()
        }
    })
    .with_osc_oracle(|cell: Interval| {
        let (u, v) = (cell.lo(), cell.hi());
        if u > 0.0 {
            let m = 2.0 * v + 2.0 / u;
            (-m, m)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    })
    .with_primitive(primitive);

    let recipe = GaugeFamily::new("osc-derivative", unit(), move |eps| {
        Gauge::new(format!("osc-derivative(eps={eps})"), unit(), move |x| {
            if x > 0.0 {
                (0.5 * eps * x * x * x).max(f64::MIN_POSITIVE)
            } else {
                eps.sqrt() * 0.5
            }
        })
    });

    CorpusEntry {
        name: "osc-derivative".into(),
        payload: CorpusPayload::Integrand(f),
        known_values: vec![KnownValue::new(
            "gauge integral on [0,1]",
            1f64.sin(),
            "difference of the primitive x^2 sin(1/x^2) at the endpoints",
        )],
        gauge_recipe: Some(recipe),
        index_fn: None,
        notes: "Everywhere-defined derivative of x^2 sin(1/x^2), unbounded near 0. \
                Gauge-integrable with value sin(1); not Riemann integrable on any \
                interval containing 0. The oscillation oracle is the conservative \
                envelope |f| <= 2x + 2/x on cells away from 0 and unbounded otherwise."
            .into(),
    }
}

fn sqrt_recip_gauge_family() -> GaugeFamily {
    GaugeFamily::new("sqrt-recip", unit(), move |eps| {
        endpoint_gauge(
            unit(),
            EndpointSide::Left,
            eps * 0.5,
            (eps * 0.25) * (eps * 0.25),
        )
        .expect("positive parameters")
    })
}

fn sqrt_recip_entry() -> CorpusEntry {
    let f = IntegrandHandle::new("sqrt-recip", |x: f64| {
        if x > 0.0 {
            1.0 / x.sqrt()
        } else {
            0.0
        }
    })
    .with_osc_oracle(|cell: Interval| {
        let (u, v) = (cell.lo(), cell.hi());
        if u > 0.0 {
            (1.0 / v.sqrt(), 1.0 / u.sqrt())
        } else {
            (0.0, f64::INFINITY)
        }
    })
    .with_primitive(|x: f64| 2.0 * x.max(0.0).sqrt());

    CorpusEntry {
        name: "sqrt-recip".into(),
        payload: CorpusPayload::Integrand(f),
        known_values: vec![KnownValue::new(
            "gauge integral on [0,1]",
            2.0,
            "difference of the primitive 2*sqrt(x) at the endpoints",
        )],
        gauge_recipe: Some(sqrt_recip_gauge_family()),
        index_fn: None,
        notes: "1/sqrt(x) with value 0 at x = 0, unbounded at the left endpoint. \
                The gauge delta(x) = (eps/2)(x - 0) forces cells near 0 to be \
                tagged at 0, where the integrand vanishes."
            .into(),
    }
}

/// Step function taking value r^n on (r^n, r^(n-1)], n = 1, 2, ..., and 0 at 0.
pub fn geometric_step(r: f64) -> IntegrandHandle {
    assert!(r > 0.0 && r < 1.0, "geometric-step needs 0 < r < 1");
    let f = move |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            let n = (x.ln() / r.ln()).floor().max(0.0) + 1.0;
            r.powf(n)
        }
    };
    let g = f;
    IntegrandHandle::new(format!("geometric-step(r={r})"), f)
        // nondecreasing, so the envelope on a cell is the endpoint values
        .with_osc_oracle(move |cell: Interval| (g(cell.lo()), g(cell.hi())))
}

fn geometric_breakpoints(r: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut p = 1.0;
    while p >= 1e-18 {
        pts.push(p);
        p *= r;
    }
    pts
}

fn geometric_step_entry() -> CorpusEntry {
    let r = 0.5;
    let pts = geometric_breakpoints(r);
    let recipe = GaugeFamily::new("geometric-step", unit(), move |eps| {
        breakpoint_gauge(unit(), pts.clone(), eps * 0.125).expect("positive floor")
    });
    CorpusEntry {
        name: "geometric-step".into(),
        payload: CorpusPayload::Integrand(geometric_step(r)),
        known_values: vec![KnownValue::new(
            "integral on [0,1] (r = 1/2)",
            r / (1.0 + r),
            "geometric series: sum of r^n * (r^(n-1) - r^n) = r/(1+r)",
        )],
        gauge_recipe: Some(recipe),
        index_fn: None,
        notes: "Nondecreasing step function with steps at the powers of r; \
                registered at r = 1/2 (use geometric_step(r) for other ratios). \
                Riemann integrable; integral r/(1+r)."
            .into(),
    }
}

/// How many series terms the random-jump entry keeps.
pub const OSC_SUM_TERMS: usize = 2_000;
const OSC_SUM_SEED: u64 = 0x05C5;

struct OscSumData {
    /// jump locations sorted ascending, paired with prefix sums of weights:
    /// prefix[i] = sum of s_j/j^2 over the first i sorted jumps.
    jumps: Vec<f64>,
    prefix: Vec<f64>,
    total: f64,
}

fn osc_sum_data() -> &'static OscSumData {
    static DATA: OnceLock<OscSumData> = OnceLock::new();
    DATA.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(OSC_SUM_SEED);
        let mut pairs: Vec<(f64, f64, f64)> = (1..=OSC_SUM_TERMS)
            .map(|j| {
                let s: f64 = rng.gen_range(0.0..1.0);
                let jj = (j * j) as f64;
                (s, s / jj, s * (1.0 - s) / jj)
            })
            .collect();
        let total = pairs.iter().map(|p| p.2).sum();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut prefix = Vec::with_capacity(pairs.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for p in &pairs {
            acc += p.1;
            prefix.push(acc);
        }
        OscSumData {
            jumps: pairs.iter().map(|p| p.0).collect(),
            prefix,
            total,
        }
    })
}

fn osc_sum_entry() -> CorpusEntry {
    let f = move |x: f64| {
        let d = osc_sum_data();
        // sum of s_j/j^2 over the jumps strictly below x
        d.prefix[d.jumps.partition_point(|&s| s < x)]
    };
    let handle = IntegrandHandle::new("osc-sum", f)
        .with_osc_oracle(move |cell: Interval| (f(cell.lo()), f(cell.hi())));
    let recipe = GaugeFamily::new("osc-sum", unit(), move |eps| {
        breakpoint_gauge(unit(), osc_sum_data().jumps.clone(), eps * 0.125)
            .expect("positive floor")
    });
    let tail_bound = 1.0 / OSC_SUM_TERMS as f64;
    CorpusEntry {
        name: "osc-sum".into(),
        payload: CorpusPayload::Integrand(handle),
        known_values: vec![
            KnownValue::new(
                "integral on [0,1] (truncated)",
                osc_sum_data().total,
                "termwise closed form: each jump s_j of size s_j/j^2 contributes s_j(1-s_j)/j^2",
            ),
            KnownValue::new(
                "truncation tail bound",
                tail_bound,
                "sum of 1/j^2 over the dropped terms is below 1/J",
            ),
        ],
        gauge_recipe: Some(recipe),
        index_fn: None,
        notes: format!(
            "Nondecreasing saltus function: f(x) = sum of s_j/j^2 over the j <= {OSC_SUM_TERMS} \
             with s_j < x, where s_j is a fixed seeded pseudo-random sequence in (0,1). \
             Riemann integrable with a dense set of jump points."
        ),
    }
}

fn span02() -> Interval {
    Interval::new(0.0, 2.0).unwrap()
}

/// Block index p for x in [1, 2): the block [2 - 1/p, 2 - 1/(p+1)).
fn staircase_block(x: f64) -> u32 {
    (1.0 / (2.0 - x)).floor() as u32
}

fn staircase_value(p: u32) -> f64 {
    let pf = p as f64;
    let v = pf * (pf + 1.0);
    if p % 2 == 0 {
        v
    } else {
        -v
    }
}

fn staircase_entry() -> CorpusEntry {
    let term = |n: u32, x: f64| {
        if x < 1.0 {
            if x < 0.0 {
                0.0
            } else {
                1.0
            }
        } else if x >= 2.0 {
            0.0
        } else {
            let p = staircase_block(x);
            if p <= n {
                staircase_value(p)
            } else {
                0.0
            }
        }
    };
    let seq = FunctionSequence::new("staircase-4-1-1", term)
        .with_pointwise_limit(|x: f64| {
            if x < 1.0 {
                if x < 0.0 {
                    0.0
                } else {
                    1.0
                }
            } else if x >= 2.0 {
                0.0
            } else {
                staircase_value(staircase_block(x))
            }
        })
        .with_env_oracle(move |x, lo_n, hi_n| {
            if x < 1.0 || x >= 2.0 {
                let v = term(lo_n, x);
                (v, v)
            } else {
                let p = staircase_block(x);
                let v = staircase_value(p);
                if p <= lo_n {
                    (v, v)
                } else if p <= hi_n {
                    (v.min(0.0), v.max(0.0))
                } else {
                    (0.0, 0.0)
                }
            }
        })
        .with_per_n_gauge(|n, _eps| {
            let mut pts = vec![1.0];
            for p in 1..=(n + 1) {
                pts.push(2.0 - 1.0 / (p as f64 + 1.0));
            }
            breakpoint_gauge(span02(), pts, 1e-13).expect("positive floor")
        });
    CorpusEntry {
        name: "staircase-4-1-1".into(),
        payload: CorpusPayload::Sequence(seq),
        known_values: vec![
            KnownValue::new(
                "integral of every odd-index term over [0,2]",
                0.0,
                "each block [2-1/p, 2-1/(p+1)) has width 1/(p(p+1)) and height +-p(p+1), so blocks contribute alternating +-1",
            ),
            KnownValue::new(
                "integral of every even-index term over [0,2]",
                1.0,
                "same telescoping block areas, one more cancelling pair",
            ),
        ],
        gauge_recipe: Some(GaugeFamily::constant(span02())),
        index_fn: Some(Arc::new(|x: f64| {
            if (1.0..2.0).contains(&x) {
                staircase_block(x).max(1)
            } else {
                1
            }
        })),
        notes: "Step sequence on [0,2]: 1 on [0,1), then value (-1)^p p(p+1) on the \
                p-th block [2-1/p, 2-1/(p+1)) for p <= n, 0 beyond. Converges pointwise \
                everywhere, but the term integrals alternate between 0 and 1 and have no \
                limit; the pointwise limit is unbounded near 2 and its division sums \
                stay inside [0,1]. The recipe is only a constant fallback (per-term \
                gauges live on the sequence); no gauge integrates the limit to a value."
            .into(),
    }
}

/// How many enumerated rationals seed the open cover of the tent construction.
pub const TENT_COVER_COUNT: usize = 200;

#[derive(Clone, Debug)]
struct TentComponent {
    /// merged open component of the cover
    lo: f64,
    hi: f64,
    /// concentric closed tent support of length (hi - lo)^2
    i_lo: f64,
    i_hi: f64,
    center: f64,
    half_len: f64,
    /// integral of f over everything up to and including this component
    area_through: f64,
}

struct TentData {
    components: Vec<TentComponent>,
}

impl TentData {
    fn build(m: usize) -> TentData {
        let centers = enumerate_rationals(m);
        let mut opens: Vec<(f64, f64)> = centers
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let h = 2f64.powi(-(i as i32) - 3);
                (x - h, x + h)
            })
            .collect();
        opens.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in opens {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        let mut components = Vec::with_capacity(merged.len());
        let mut acc = 0.0;
        for (lo, hi) in merged {
            let s = hi - lo;
            let len = s * s;
            let center = lo + s * 0.5;
            acc += len * 0.5; // tent area: base * height / 2, height 1
            components.push(TentComponent {
                lo,
                hi,
                i_lo: center - len * 0.5,
                i_hi: center + len * 0.5,
                center,
                half_len: len * 0.5,
                area_through: acc,
            });
        }
        TentData { components }
    }

    fn tent(c: &TentComponent, x: f64) -> f64 {
        if c.half_len == 0.0 {
            return if x == c.center { 1.0 } else { 0.0 };
        }
        (1.0 - (x - c.center).abs() / c.half_len).max(0.0)
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.components.partition_point(|c| c.hi < x);
        match self.components.get(i) {
            Some(c) if x >= c.i_lo && x <= c.i_hi => Self::tent(c, x),
            _ => 0.0,
        }
    }

    fn primitive(&self, x: f64) -> f64 {
        let i = self.components.partition_point(|c| c.i_hi <= x);
        let full = if i > 0 {
            self.components[i - 1].area_through
        } else {
            0.0
        };
        match self.components.get(i) {
            Some(c) if x > c.i_lo && c.half_len > 0.0 => {
                let len = 2.0 * c.half_len;
                let t = (x - c.i_lo).min(len);
                let partial = if t <= c.half_len {
                    t * t / len
                } else {
                    len * 0.5 - (len - t) * (len - t) / len
                };
                full + partial
            }
            _ => full,
        }
    }

    fn osc(&self, cell: Interval) -> (f64, f64) {
        let (u, v) = (cell.lo(), cell.hi());
        let lo_i = self.components.partition_point(|c| c.hi < u);
        let mut sup = 0.0f64;
        let mut inside_single = false;
        for c in &self.components[lo_i..] {
            if c.lo > v {
                break;
            }
            if c.i_hi < u || c.i_lo > v {
                continue;
            }
            sup = sup.max(Self::tent(c, c.center.clamp(u, v)));
            if u >= c.i_lo && v <= c.i_hi {
                inside_single = true;
            }
        }
        let inf = if inside_single {
            self.eval(u).min(self.eval(v))
        } else {
            0.0
        };
        (inf, sup)
    }
}

fn tent_data() -> &'static TentData {
    static DATA: OnceLock<TentData> = OnceLock::new();
    DATA.get_or_init(|| TentData::build(TENT_COVER_COUNT))
}

fn goffman_entry() -> CorpusEntry {
    let f = IntegrandHandle::new("goffman-truncated", |x: f64| tent_data().eval(x))
        .with_osc_oracle(|cell: Interval| tent_data().osc(cell))
        .with_primitive(|x: f64| tent_data().primitive(x));
    let recipe = GaugeFamily::new("goffman-truncated", unit(), move |eps| {
        let mut pts = Vec::new();
        for c in &tent_data().components {
            pts.push(c.i_lo);
            pts.push(c.center);
            pts.push(c.i_hi);
        }
        breakpoint_gauge(unit(), pts, eps * 1e-4).expect("positive floor")
    });
    let total = tent_data()
        .components
        .last()
        .map(|c| c.area_through)
        .unwrap_or(0.0);
    CorpusEntry {
        name: "goffman-truncated".into(),
        payload: CorpusPayload::Integrand(f),
        known_values: vec![KnownValue::new(
            "integral of f over the whole cover",
            total,
            "closed-form tent areas: each tent of base L has area L/2",
        )],
        gauge_recipe: Some(recipe),
        index_fn: None,
        notes: format!(
            "Tent construction over an open cover of the first {TENT_COVER_COUNT} enumerated \
             rationals: the n-th rational gets an open interval of length 2^(-n-2); the cover \
             components each carry one concentric tent of base (component length)^2, height 1. \
             f is the everywhere-defined derivative of the piecewise-quadratic primitive F \
             (bounded, 0 <= f <= 1), yet on meshes like 1/16 the Darboux gap stays above the \
             black-interval bound: cells not inside the cover have inf 0 and contain a tent apex."
        ),
    }
}

fn xn_powers_entry() -> CorpusEntry {
    let seq = FunctionSequence::new("xn-powers", |n: u32, x: f64| x.powi(n as i32))
        .with_pointwise_limit(|x: f64| if x >= 1.0 { 1.0 } else { 0.0 })
        .with_env_oracle(|x: f64, lo_n, hi_n| {
            // x^n decreases in n on [0,1]
            (x.powi(hi_n as i32), x.powi(lo_n as i32))
        })
        .with_per_n_gauge(|n, eps| {
            Gauge::constant(unit(), (eps / n.max(1) as f64).max(f64::MIN_POSITIVE))
        });
    CorpusEntry {
        name: "xn-powers".into(),
        payload: CorpusPayload::Sequence(seq),
        known_values: vec![
            KnownValue::new(
                "integral of the pointwise limit on [0,1]",
                0.0,
                "limit differs from zero only at x = 1",
            ),
            KnownValue::new("integral of term 1", 0.5, "closed form x^2/2"),
        ],
        gauge_recipe: Some(GaugeFamily::constant(unit())),
        index_fn: None,
        notes: "x^n on [0,1]: monotone decreasing to the indicator of {1}. \
                Term integrals 1/(n+1) -> 0 = integral of the limit."
            .into(),
    }
}

fn escaping_bump_entry() -> CorpusEntry {
    let term = |n: u32, x: f64| {
        let nf = n as f64;
        if x > 0.0 && x < 1.0 / nf {
            nf
        } else {
            0.0
        }
    };
    let seq = FunctionSequence::new("escaping-bump", term)
        .with_pointwise_limit(|_x: f64| 0.0)
        .with_env_oracle(|x: f64, lo_n, hi_n| {
            if x <= 0.0 {
                return (0.0, 0.0);
            }
            // largest n with x < 1/n
            let m = (1.0 / x).ceil() - 1.0;
            if m < lo_n as f64 {
                (0.0, 0.0)
            } else {
                let sup = m.min(hi_n as f64);
                let inf = if m >= hi_n as f64 { lo_n as f64 } else { 0.0 };
                (inf, sup)
            }
        })
        .with_per_n_gauge(|n, eps| {
            let nf = n.max(1) as f64;
            breakpoint_gauge(unit(), vec![0.0, 1.0 / nf], eps / (4.0 * nf))
                .expect("positive floor")
        });
    CorpusEntry {
        name: "escaping-bump".into(),
        payload: CorpusPayload::Sequence(seq),
        known_values: vec![
            KnownValue::new(
                "integral of every term",
                1.0,
                "bump of height n over an interval of width 1/n",
            ),
            KnownValue::new("integral of the pointwise limit", 0.0, "the limit is 0"),
        ],
        gauge_recipe: Some(GaugeFamily::constant(unit())),
        index_fn: None,
        notes: "n on (0, 1/n), 0 elsewhere: converges pointwise to 0 but every term \
                integrates to 1, so integral and limit cannot be interchanged."
            .into(),
    }
}

fn min_sqrt_clip_entry() -> CorpusEntry {
    let term = |n: u32, x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            (1.0 / x.sqrt()).min(n as f64)
        }
    };
    let seq = FunctionSequence::new("min-sqrt-clip", term)
        .with_pointwise_limit(|x: f64| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 })
        .with_env_oracle(move |x, lo_n, hi_n| (term(lo_n, x), term(hi_n, x)))
        .with_per_n_gauge(|n, eps| {
            let nf = n.max(1) as f64;
            Gauge::new(format!("min-sqrt-clip(n={n})"), unit(), move |x| {
                (eps * x.max(1.0 / (nf * nf)).powf(1.5)).max(f64::MIN_POSITIVE)
            })
        });
    CorpusEntry {
        name: "min-sqrt-clip".into(),
        payload: CorpusPayload::Sequence(seq),
        known_values: vec![
            KnownValue::new(
                "integral of term n over [0,1]",
                f64::NAN,
                "per-term closed form 2 - 1/n (n-dependent; see term-1 and limit entries)",
            ),
            KnownValue::new("integral of term 1", 1.0, "min(1, 1/sqrt(x)) = 1 on [0,1]"),
            KnownValue::new(
                "integral of the pointwise limit",
                2.0,
                "difference of the primitive 2*sqrt(x) at the endpoints",
            ),
        ],
        gauge_recipe: Some(sqrt_recip_gauge_family()),
        index_fn: Some(Arc::new(|x: f64| {
            if x <= 0.0 {
                1
            } else {
                (1.0 / x.sqrt()).ceil().min(u32::MAX as f64) as u32
            }
        })),
        notes: "min(n, 1/sqrt(x)) with value 0 at x = 0: a nondecreasing sequence of \
                bounded functions whose term integrals 2 - 1/n increase to the \
                unbounded limit's integral 2. Terms are settled at x once n is at \
                least 1/sqrt(x), so index envelopes have zero spread."
            .into(),
    }
}

fn separable_entry() -> CorpusEntry {
    CorpusEntry {
        name: "separable-xy".into(),
        payload: CorpusPayload::Family(ParametricFamily::new("separable-xy", |x, y| x * y)),
        known_values: vec![KnownValue::new(
            "iterated integral over the unit square (either order)",
            0.25,
            "product of two closed-form integrals 1/2 * 1/2",
        )],
        gauge_recipe: Some(GaugeFamily::constant(unit())),
        index_fn: None,
        notes: "x*y on the unit square: both iterated orders agree by symmetry.".into(),
    }
}

fn pi4_entry() -> CorpusEntry {
    let fam = ParametricFamily::new("pi4-witness", |x: f64, y: f64| {
        if x == 0.0 || y == 0.0 {
            0.0
        } else {
            let d = x * x + y * y;
            (x * x - y * y) / (d * d)
        }
    });
    CorpusEntry {
        name: "pi4-witness".into(),
        payload: CorpusPayload::Family(fam),
        known_values: vec![
            KnownValue::new(
                "inner-y then outer-x iterated integral on the unit square",
                std::f64::consts::FRAC_PI_4,
                "inner antiderivative y/(x^2+y^2) gives 1/(x^2+1); outer arctan",
            ),
            KnownValue::new(
                "inner-x then outer-y iterated integral on the unit square",
                -std::f64::consts::FRAC_PI_4,
                "antisymmetry under swapping x and y",
            ),
        ],
        gauge_recipe: Some(GaugeFamily::constant(unit())),
        index_fn: None,
        notes: "(x^2 - y^2)/(x^2 + y^2)^2, 0 on the axes: both iterated integrals \
                exist but differ (pi/4 vs -pi/4), so order of integration matters \
                and no joint-integrability conclusion is available."
            .into(),
    }
}

fn registry() -> &'static BTreeMap<String, CorpusEntry> {
    static REG: OnceLock<BTreeMap<String, CorpusEntry>> = OnceLock::new();
    REG.get_or_init(|| {
        let entries = vec![
            dirichlet_entry(),
            osc_derivative_entry(),
            sqrt_recip_entry(),
            geometric_step_entry(),
            osc_sum_entry(),
            staircase_entry(),
            goffman_entry(),
            xn_powers_entry(),
            escaping_bump_entry(),
            min_sqrt_clip_entry(),
            separable_entry(),
            pi4_entry(),
        ];
        entries.into_iter().map(|e| (e.name.clone(), e)).collect()
    })
}

pub fn lookup(name: &str) -> Result<CorpusEntry> {
    registry()
        .get(name)
        .cloned()
        .ok_or_else(|| GaugeError::UnknownCorpusEntry(name.to_string()))
}

/// (name, kind, notes) for every entry, alphabetical by name.
pub fn list_entries() -> Vec<(String, &'static str, String)> {
    registry()
        .values()
        .map(|e| (e.name.clone(), e.kind(), e.notes.clone()))
        .collect()
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct KnownValueWire {
    pub description: String,
    pub value: F17,
    pub provenance: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CorpusEntryWire {
    pub name: String,
    pub kind: String,
    pub notes: String,
    pub known_values: Vec<KnownValueWire>,
    pub has_gauge_recipe: bool,
}

/// JSON view of the registry; numeric values are 17-significant-digit decimal
/// strings that round-trip bit-exactly.
pub fn export_wire() -> Vec<CorpusEntryWire> {
    registry()
        .values()
        .map(|e| CorpusEntryWire {
            name: e.name.clone(),
            kind: e.kind().to_string(),
            notes: e.notes.clone(),
            known_values: e
                .known_values
                .iter()
                .map(|kv| KnownValueWire {
                    description: kv.description.clone(),
                    value: F17(kv.value),
                    provenance: kv.provenance.clone(),
                })
                .collect(),
            has_gauge_recipe: e.gauge_recipe.is_some(),
        })
        .collect()
}

pub fn export_json() -> String {
    serde_json::to_string_pretty(&export_wire()).expect("registry serializes")
}
