//! Gauge (Henstock–Kurzweil) integration on compact and half-line domains:
//! tagged divisions under arbitrary gauges, Riemann/Darboux machinery,
//! variation of interval-point functions, convergence-theorem harnesses,
//! iterated integration checks, and a corpus of worked integrands.

pub mod convergence;
pub mod corpus;
pub mod division;
pub mod error;
pub mod gauge;
pub mod improper;
pub mod integral;
pub mod integrand;
pub mod interval;
pub mod report;
pub mod riemann;
pub mod tonelli;
pub mod variation;

pub use convergence::{
    bartle_condition_check, check_limit_integrability, check_value_interchange,
    continuous_param_check, diff_under_integral_check, dominated_convergence, fatou_check,
    index_envelope, limit_variation_estimate, min_function_integral, monotone_convergence,
    series_integration_check, BartleVerdict, DiffUnderIntegralReport,
    DominatedConvergenceReport, EnvelopeReport, FatouReport, FunctionSequence,
    InterchangeVerdict, LimitIntegrabilityReport, MinFunctionReport, MonotoneConvergenceReport,
    ParamCheckReport, ParametricFamily,
};
pub use corpus::{
    enumerate_rationals, export_json, export_wire, geometric_step, list_entries, lookup,
    CorpusEntry, CorpusEntryWire, CorpusPayload, KnownValue, KnownValueWire,
    OSC_SUM_TERMS, RATIONAL_INDICATOR_COUNT, TENT_COVER_COUNT,
};
pub use division::{
    cousin_divide, cousin_divide_randomized, cousin_fold, cousin_fold_randomized, is_delta_fine,
    Division, TaggedInterval, DEFAULT_MAX_DEPTH,
};
pub use error::{GaugeError, Result};
pub use gauge::{breakpoint_gauge, endpoint_gauge, min_gauge, refinement_gauge, EndpointSide, Gauge};
pub use improper::{
    cauchy_extension_check, halfline_gauge_integrate, regulated_ratio_trace,
    simple_integrability_check, uniform_riemann_condition_check, wholeline_gauge_integrate,
    CauchyExtensionReport, HalfLineDivision, SimpleIntegrabilityReport, TailGauge,
    UniformRiemannReport, WholeLineReport, DEFAULT_DIVERGENCE_BOUND,
};
pub use integral::{
    additivity_check, derivative_gauge, gauge_integrate, linearity_check, probe_schedule,
    saks_henstock_residual, EpsTraceEntry, GaugeFamily, GaugeIntegralReport,
    DEFAULT_EPS_SCHEDULE, DEFAULT_TRIALS_PER_EPS,
};
pub use integrand::{IntegrandHandle, SumReport};
pub use interval::{geometric_partition, Interval, Partition};
pub use report::F17;
pub use riemann::{
    darboux_sums, dyadic_meshes, limit_as_riemann_sum, mesh_limit_riemann, oscillation_criterion,
    riemann_sum, LimitComparison, MeshRecord, OscillationReport, RiemannVerdict,
};
pub use tonelli::{
    axis_pinch_product_gauge, double_sum_xy, double_sum_yx, iterated_integrate,
    tonelli_condition_check, IterationOrder, ProductDivisionSample, ProductGauge,
    TonelliLevel, TonelliReport, INNER_CACHE_CAP,
};
pub use variation::{
    bv_abs_integrability_check, monotone_sets_limit_check, restricted_variation,
    subadditivity_check, variation_estimate, variation_zero_test, BvReport, IntervalPointFn,
    PointSet, SubadditivityReport, VariationEstimate, VariationZeroReport,
    DEFAULT_VARIATION_K,
};
