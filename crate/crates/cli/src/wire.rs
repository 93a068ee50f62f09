//! Serialization shapes for reports. Every computed real is emitted as a
//! 17-significant-digit decimal string so reports round-trip bit-exactly and
//! identical runs produce byte-identical output.

use gaugequad::{
    CauchyExtensionReport, F17, GaugeIntegralReport, MeshRecord, RiemannVerdict,
    SimpleIntegrabilityReport, TonelliReport, UniformRiemannReport,
};
use serde::Serialize;

/// Envelope common to every JSON report: what ran, with which inputs, under
/// which eps schedule, built from which sources.
#[derive(Serialize)]
pub struct Report<C: Serialize, B: Serialize> {
    pub version: String,
    pub command: &'static str,
    pub config: C,
    pub schedule: Vec<F17>,
    pub result: B,
}

pub fn version_string() -> String {
    format!(
        "{}+{}",
        env!("CARGO_PKG_VERSION"),
        env!("GAUGEQUAD_GIT_DESCRIBE")
    )
}

pub fn wrap<C: Serialize, B: Serialize>(
    command: &'static str,
    config: C,
    schedule: &[f64],
    result: B,
) -> Report<C, B> {
    Report {
        version: version_string(),
        command,
        config,
        schedule: schedule.iter().map(|&e| F17(e)).collect(),
        result,
    }
}

#[derive(Serialize)]
pub struct EpsTraceWire {
    pub eps: F17,
    pub sum: F17,
    pub spread: F17,
    pub n_cells: usize,
}

#[derive(Serialize)]
pub struct IntegralWire {
    pub value: F17,
    pub converged: bool,
    pub eps_trace: Vec<EpsTraceWire>,
}

impl From<&GaugeIntegralReport> for IntegralWire {
    fn from(r: &GaugeIntegralReport) -> Self {
        IntegralWire {
            value: F17(r.value),
            converged: r.converged,
            eps_trace: r
                .eps_trace
                .iter()
                .map(|t| EpsTraceWire {
                    eps: F17(t.eps),
                    sum: F17(t.sum),
                    spread: F17(t.spread),
                    n_cells: t.n_cells,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct MeshRowWire {
    pub mesh: F17,
    pub upper: F17,
    pub lower: F17,
    pub gap: F17,
    pub osc_length: F17,
}

pub fn mesh_rows(trace: &[MeshRecord], osc_lengths: &[(f64, f64)]) -> Vec<MeshRowWire> {
    trace
        .iter()
        .zip(osc_lengths)
        .map(|(m, &(_, len))| MeshRowWire {
            mesh: F17(m.mesh),
            upper: F17(m.upper),
            lower: F17(m.lower),
            gap: F17(m.gap()),
            osc_length: F17(len),
        })
        .collect()
}

#[derive(Serialize)]
pub struct DarbouxWire {
    pub rows: Vec<MeshRowWire>,
    pub integrable: bool,
    pub value: Option<F17>,
    pub final_gap: F17,
    pub osc_lengths_shrink: bool,
}

pub fn darboux_wire(v: &RiemannVerdict, rows: Vec<MeshRowWire>, osc_ok: bool) -> DarbouxWire {
    let trace = v.trace();
    let final_gap = trace.last().map_or(f64::NAN, |m| m.gap());
    DarbouxWire {
        rows,
        integrable: matches!(v, RiemannVerdict::Integrable { .. }),
        value: v.value().map(F17),
        final_gap: F17(final_gap),
        osc_lengths_shrink: osc_ok,
    }
}

#[derive(Serialize)]
pub struct VariationWire {
    pub trace: Vec<(F17, F17)>,
    pub k_factor: F17,
    pub is_variation_zero: bool,
}

#[derive(Serialize)]
pub struct CauchyWire {
    pub cut_trace: Vec<CutRowWire>,
    pub fitted_limit: Option<F17>,
    pub oscillating: bool,
    pub direct: IntegralWire,
    pub residual: Option<F17>,
}

#[derive(Serialize)]
pub struct CutRowWire {
    pub cut: F17,
    pub value: F17,
    pub converged: bool,
}

impl From<&CauchyExtensionReport> for CauchyWire {
    fn from(r: &CauchyExtensionReport) -> Self {
        CauchyWire {
            cut_trace: r
                .cut_trace
                .iter()
                .map(|&(b, v, c)| CutRowWire {
                    cut: F17(b),
                    value: F17(v),
                    converged: c,
                })
                .collect(),
            fitted_limit: r.fitted_limit.map(F17),
            oscillating: r.oscillating,
            direct: (&r.direct).into(),
            residual: r.residual.map(F17),
        }
    }
}

#[derive(Serialize)]
pub struct SimpleWire {
    pub trace: Vec<(F17, F17, F17)>,
    pub cauchy: bool,
    pub limit: Option<F17>,
}

impl From<&SimpleIntegrabilityReport> for SimpleWire {
    fn from(r: &SimpleIntegrabilityReport) -> Self {
        SimpleWire {
            trace: r
                .trace
                .iter()
                .map(|&(b, m, s)| (F17(b), F17(m), F17(s)))
                .collect(),
            cauchy: r.cauchy,
            limit: r.limit.map(F17),
        }
    }
}

#[derive(Serialize)]
pub struct UniformWire {
    pub osc_part: F17,
    pub tail_part: F17,
    pub eps: F17,
    pub passes: bool,
}

impl From<&UniformRiemannReport> for UniformWire {
    fn from(r: &UniformRiemannReport) -> Self {
        UniformWire {
            osc_part: F17(r.osc_part),
            tail_part: F17(r.tail_part),
            eps: F17(r.eps),
            passes: r.passes,
        }
    }
}

#[derive(Serialize)]
pub struct TonelliLevelWire {
    pub eps: F17,
    pub spread_xy: F17,
    pub spread_yx: F17,
    pub mid_xy: F17,
    pub mid_yx: F17,
}

#[derive(Serialize)]
pub struct TonelliWire {
    pub levels: Vec<TonelliLevelWire>,
    pub xy_holds: bool,
    pub yx_holds: bool,
    pub intersection: Option<(F17, F17)>,
    pub interchange: bool,
}

impl From<&TonelliReport> for TonelliWire {
    fn from(r: &TonelliReport) -> Self {
        TonelliWire {
            levels: r
                .levels
                .iter()
                .map(|l| TonelliLevelWire {
                    eps: F17(l.eps),
                    spread_xy: F17(l.spread_xy),
                    spread_yx: F17(l.spread_yx),
                    mid_xy: F17(l.mid_xy),
                    mid_yx: F17(l.mid_yx),
                })
                .collect(),
            xy_holds: r.xy_holds,
            yx_holds: r.yx_holds,
            intersection: r.intersection.map(|(a, b)| (F17(a), F17(b))),
            interchange: r.interchange,
        }
    }
}
