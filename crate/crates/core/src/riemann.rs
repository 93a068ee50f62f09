use crate::division::Division;
use crate::error::Result;
use crate::integrand::{IntegrandHandle, SumReport};
use crate::interval::{Interval, Partition};

/// Σ f(tag)·(v-u) over the division, with mesh and cell count.
pub fn riemann_sum(h: &IntegrandHandle, d: &Division) -> Result<SumReport> {
    let mut value = 0.0;
    let mut mesh = 0.0f64;
    for t in d.items() {
        value += h.eval_checked(t.tag)? * t.width();
        mesh = mesh.max(t.width());
    }
    Ok(SumReport {
        value,
        mesh,
        n_cells: d.n_cells(),
    })
}

/// (upper, lower) Darboux sums over the partition cells, from the exact
/// inf/sup oracle. Infinite envelopes propagate as infinite sums.
pub fn darboux_sums(h: &IntegrandHandle, p: &Partition) -> Result<(f64, f64)> {
    let mut upper = 0.0;
    let mut lower = 0.0;
    for cell in p.cells() {
        let (inf, sup) = h.osc("darboux_sums", cell)?;
        upper += sup * cell.width();
        lower += inf * cell.width();
    }
    Ok((upper, lower))
}

/// One record of the mesh-limit trace: uniform partition at the given mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshRecord {
    pub mesh: f64,
    pub upper: f64,
    pub lower: f64,
}

impl MeshRecord {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }
}

/// Outcome of driving meshes down a schedule: either a common limit of the
/// Darboux brackets, or a verdict that no limit exists, carrying the final gap.
/// The failing verdict is a value, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum RiemannVerdict {
    Integrable { value: f64, trace: Vec<MeshRecord> },
    NotRiemannIntegrable { gap: f64, trace: Vec<MeshRecord> },
}

impl RiemannVerdict {
    pub fn trace(&self) -> &[MeshRecord] {
        match self {
            RiemannVerdict::Integrable { trace, .. } => trace,
            RiemannVerdict::NotRiemannIntegrable { trace, .. } => trace,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            RiemannVerdict::Integrable { value, .. } => Some(*value),
            RiemannVerdict::NotRiemannIntegrable { .. } => None,
        }
    }
}

/// Darboux sums on uniform partitions at every mesh of the schedule. The
/// common limit is accepted when the finest gap is below `tol` and the
/// bracket midpoints are Cauchy within `tol` between consecutive meshes.
/// The whole schedule is always evaluated; no early abort.
pub fn mesh_limit_riemann(
    h: &IntegrandHandle,
    span: Interval,
    mesh_schedule: &[f64],
    tol: f64,
) -> Result<RiemannVerdict> {
    let mut trace = Vec::with_capacity(mesh_schedule.len());
    for &mesh in mesh_schedule {
        let n = (span.width() / mesh).ceil().max(1.0) as usize;
        let p = Partition::uniform(span, n)?;
        let (upper, lower) = darboux_sums(h, &p)?;
        trace.push(MeshRecord {
            mesh: p.mesh(),
            upper,
            lower,
        });
    }
    let last = *trace.last().expect("schedule is non-empty");
    // Cauchy is judged at the tail: the final consecutive pair of bracket
    // midpoints must agree within tol (early coarse meshes are allowed to wander).
    let tail_cauchy = match trace.len() {
        0 | 1 => true,
        n => (trace[n - 1].midpoint() - trace[n - 2].midpoint()).abs() < tol,
    };
    if last.gap() < tol && tail_cauchy {
        Ok(RiemannVerdict::Integrable {
            value: last.midpoint(),
            trace,
        })
    } else {
        Ok(RiemannVerdict::NotRiemannIntegrable {
            gap: last.gap(),
            trace,
        })
    }
}

/// Per-mesh total length of cells whose oscillation exceeds `eps`, plus the
/// verdict that those lengths shrink below `length_tol` by the end of the
/// schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub eps: f64,
    pub lengths: Vec<(f64, f64)>,
    pub integrable: bool,
}

pub fn oscillation_criterion(
    h: &IntegrandHandle,
    span: Interval,
    eps: f64,
    mesh_schedule: &[f64],
    length_tol: f64,
) -> Result<OscillationReport> {
    let mut lengths = Vec::with_capacity(mesh_schedule.len());
    for &mesh in mesh_schedule {
        let n = (span.width() / mesh).ceil().max(1.0) as usize;
        let p = Partition::uniform(span, n)?;
        let mut total = 0.0;
        for cell in p.cells() {
            let (inf, sup) = h.osc("oscillation_criterion", cell)?;
            if sup - inf > eps {
                total += cell.width();
            }
        }
        lengths.push((p.mesh(), total));
    }
    let integrable = lengths.last().map_or(false, |&(_, l)| l <= length_tol);
    Ok(OscillationReport {
        eps,
        lengths,
        integrable,
    })
}

/// Side-by-side trace of a sequence expr(j) against the mesh-limit integral
/// of `h` over `span`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitComparison {
    pub expr_trace: Vec<(u64, f64)>,
    pub integral: RiemannVerdict,
    /// expr at the largest j minus the integral value, when the latter exists.
    pub difference: Option<f64>,
}

pub fn limit_as_riemann_sum(
    expr: impl Fn(u64) -> f64,
    h: &IntegrandHandle,
    span: Interval,
    j_schedule: &[u64],
    mesh_schedule: &[f64],
    tol: f64,
) -> Result<LimitComparison> {
    let expr_trace: Vec<(u64, f64)> = j_schedule.iter().map(|&j| (j, expr(j))).collect();
    let integral = mesh_limit_riemann(h, span, mesh_schedule, tol)?;
    let difference = match (&integral, expr_trace.last()) {
        (RiemannVerdict::Integrable { value, .. }, Some(&(_, e))) => Some(e - value),
        _ => None,
    };
    Ok(LimitComparison {
        expr_trace,
        integral,
        difference,
    })
}

/// Dyadic mesh schedule 2^-1, 2^-2, …, 2^-k.
pub fn dyadic_meshes(k: u32) -> Vec<f64> {
    (1..=k).map(|j| (2.0f64).powi(-(j as i32))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{Division, TaggedInterval};
    use crate::interval::Interval;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn uniform_tagged(n: usize, right: bool) -> Division {
        let items = (0..n)
            .map(|j| {
                let u = j as f64 / n as f64;
                let v = (j + 1) as f64 / n as f64;
                let cell = Interval::new(u, v).unwrap();
                TaggedInterval::new(cell, if right { v } else { u }).unwrap()
            })
            .collect();
        Division::new(items).unwrap()
    }

    #[test]
    fn riemann_sum_constant() {
        let h = IntegrandHandle::new("c", |_| 3.0);
        let r = riemann_sum(&h, &uniform_tagged(7, false)).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn riemann_sum_left_tagged_identity() {
        let h = IntegrandHandle::new("id", |x| x);
        let r = riemann_sum(&h, &uniform_tagged(4, false)).unwrap();
        assert!((r.value - 0.375).abs() < 1e-15);
        assert_eq!(r.n_cells, 4);
        assert!((r.mesh - 0.25).abs() < 1e-15);
    }

    #[test]
    fn darboux_identity_gap() {
        let h = IntegrandHandle::new("id", |x| x).with_osc_oracle(|c| (c.lo(), c.hi()));
        for n in [4usize, 16, 64] {
            let p = Partition::uniform(unit(), n).unwrap();
            let (u, l) = darboux_sums(&h, &p).unwrap();
            assert!((u - l - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn darboux_constant() {
        let h = IntegrandHandle::new("c", |_| 2.5).with_osc_oracle(|_| (2.5, 2.5));
        let p = Partition::uniform(unit(), 5).unwrap();
        let (u, l) = darboux_sums(&h, &p).unwrap();
        assert_eq!(u, l);
        assert!((u - 2.5).abs() < 1e-12);
    }

    #[test]
    fn darboux_brackets_riemann_sum() {
        let h = IntegrandHandle::new("sq", |x| x * x)
            .with_osc_oracle(|c| (c.lo() * c.lo(), c.hi() * c.hi()));
        let p = Partition::uniform(unit(), 8).unwrap();
        let (u, l) = darboux_sums(&h, &p).unwrap();
        for right in [false, true] {
            let s = riemann_sum(&h, &uniform_tagged(8, right)).unwrap().value;
            assert!(l <= s + 1e-12 && s <= u + 1e-12);
        }
    }

    #[test]
    fn darboux_refinement_monotone() {
        let h = IntegrandHandle::new("sq", |x| x * x)
            .with_osc_oracle(|c| (c.lo() * c.lo(), c.hi() * c.hi()));
        let mut last_u = f64::INFINITY;
        let mut last_l = f64::NEG_INFINITY;
        for n in [2usize, 4, 8, 16] {
            let p = Partition::uniform(unit(), n).unwrap();
            let (u, l) = darboux_sums(&h, &p).unwrap();
            assert!(u <= last_u + 1e-12);
            assert!(l >= last_l - 1e-12);
            last_u = u;
            last_l = l;
        }
    }

    #[test]
    fn darboux_additive_over_abutting_spans() {
        let h = IntegrandHandle::new("sq", |x| x * x)
            .with_osc_oracle(|c| (c.lo() * c.lo(), c.hi() * c.hi()));
        let pl = Partition::uniform(Interval::new(0.0, 0.5).unwrap(), 8).unwrap();
        let pr = Partition::uniform(Interval::new(0.5, 1.0).unwrap(), 8).unwrap();
        let p = Partition::uniform(unit(), 16).unwrap();
        let (u, _) = darboux_sums(&h, &p).unwrap();
        let (ul, _) = darboux_sums(&h, &pl).unwrap();
        let (ur, _) = darboux_sums(&h, &pr).unwrap();
        assert!((u - (ul + ur)).abs() < 1e-12);
    }

    #[test]
    fn mesh_limit_identity() {
        let h = IntegrandHandle::new("id", |x| x).with_osc_oracle(|c| (c.lo(), c.hi()));
        let v = mesh_limit_riemann(&h, unit(), &dyadic_meshes(21), 1e-6).unwrap();
        let val = v.value().expect("integrable");
        assert!((val - 0.5).abs() < 1e-6);
    }

    #[test]
    fn mesh_limit_dirichlet_style_gap_one() {
        // indicator of a dense set with exact envelope (inf 0, sup 1 everywhere)
        let h = IntegrandHandle::new("dense-indicator", |_| 0.0).with_osc_oracle(|_| (0.0, 1.0));
        let v = mesh_limit_riemann(&h, unit(), &dyadic_meshes(10), 1e-6).unwrap();
        match v {
            RiemannVerdict::NotRiemannIntegrable { gap, .. } => {
                assert!((gap - 1.0).abs() < 1e-12)
            }
            _ => panic!("expected no Riemann integral"),
        }
    }

    #[test]
    fn oscillation_step_function() {
        // 0 on [0, 0.5), 1 on [0.5, 1]: one straddling cell per mesh
        let h = IntegrandHandle::new("step", |x| if x < 0.5 { 0.0 } else { 1.0 }).with_osc_oracle(
            |c| {
                if c.hi() < 0.5 {
                    (0.0, 0.0)
                } else if c.lo() >= 0.5 {
                    (1.0, 1.0)
                } else {
                    (0.0, 1.0)
                }
            },
        );
        let meshes = dyadic_meshes(12);
        let r = oscillation_criterion(&h, unit(), 0.5, &meshes, 1e-3).unwrap();
        assert!(r.integrable);
        // straddling length is at most one cell per mesh, and 0 when a
        // partition point lands exactly on 0.5 (dyadic meshes do)
        for &(mesh, len) in &r.lengths {
            assert!(len <= mesh + 1e-15);
        }
    }

    #[test]
    fn oscillation_dense_indicator_never_shrinks() {
        let h = IntegrandHandle::new("dense-indicator", |_| 0.0).with_osc_oracle(|_| (0.0, 1.0));
        let r = oscillation_criterion(&h, unit(), 0.5, &dyadic_meshes(8), 1e-3).unwrap();
        assert!(!r.integrable);
        for &(_, len) in &r.lengths {
            assert!((len - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oscillation_continuous_zero_lengths() {
        let h = IntegrandHandle::new("id", |x| x).with_osc_oracle(|c| (c.lo(), c.hi()));
        let r = oscillation_criterion(&h, unit(), 0.5, &[0.25, 0.125], 1e-9).unwrap();
        assert!(r.integrable);
        for &(_, len) in &r.lengths {
            assert_eq!(len, 0.0);
        }
    }

    #[test]
    fn sum_limit_arctan_style() {
        // sum_{r=1}^{j} r/(j^2+r^2) -> integral of x/(1+x^2) = ln(2)/2
        let expr = |j: u64| {
            (1..=j)
                .map(|r| r as f64 / ((j * j + r * r) as f64))
                .sum::<f64>()
        };
        let h = IntegrandHandle::new("x/(1+x^2)", |x| x / (1.0 + x * x)).with_osc_oracle(|c| {
            // increasing on [0,1]
            (c.lo() / (1.0 + c.lo() * c.lo()), c.hi() / (1.0 + c.hi() * c.hi()))
        });
        let cmp = limit_as_riemann_sum(expr, &h, unit(), &[100, 10_000], &dyadic_meshes(18), 1e-4)
            .unwrap();
        let val = cmp.integral.value().expect("integrable");
        let closed = 0.5 * (2.0f64).ln();
        assert!((val - closed).abs() < 1e-4);
        assert!(cmp.difference.unwrap().abs() < 1e-3);
    }

    #[test]
    fn sum_limit_fifth_power() {
        // sum_{k=1}^{j} (2k-1)^5 / (2^5 j^6): midpoint sums of x^5.
        // Oracle: brute-force evaluation at large j pins the limit at 1/6
        // before the assertion against the mesh-limit integral.
        let expr = |j: u64| {
            (1..=j)
                .map(|k| {
                    let t = (2 * k - 1) as f64 / (2 * j) as f64;
                    t.powi(5) / j as f64
                })
                .sum::<f64>()
        };
        let brute = expr(100_000);
        assert!((brute - 1.0 / 6.0).abs() < 1e-5, "brute-force limit {brute}");
        let h = IntegrandHandle::new("x^5", |x| x.powi(5))
            .with_osc_oracle(|c| (c.lo().powi(5), c.hi().powi(5)));
        let cmp = limit_as_riemann_sum(expr, &h, unit(), &[1_000], &dyadic_meshes(18), 1e-4)
            .unwrap();
        let val = cmp.integral.value().expect("integrable");
        assert!((val - 1.0 / 6.0).abs() < 1e-4);
        assert!(cmp.difference.unwrap().abs() < 1e-4);
    }

    #[test]
    fn sum_limit_constant_expr() {
        let h = IntegrandHandle::new("c", |_| 2.0).with_osc_oracle(|_| (2.0, 2.0));
        let cmp =
            limit_as_riemann_sum(|_| 2.0, &h, unit(), &[10], &dyadic_meshes(6), 1e-9).unwrap();
        assert_eq!(cmp.difference.unwrap(), 0.0);
    }
}
