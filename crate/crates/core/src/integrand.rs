use std::sync::Arc;

use crate::error::{GaugeError, Result};
use crate::interval::Interval;

type PointFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type OscFn = Arc<dyn Fn(Interval) -> (f64, f64) + Send + Sync>;

/// An integrand plus whatever exact side information is available for it:
/// an interval inf/sup oracle (needed for Darboux sums) and/or a primitive
/// (needed for residual checks against F(v) - F(u)).
#[derive(Clone)]
pub struct IntegrandHandle {
    f: PointFn,
    osc_oracle: Option<OscFn>,
    primitive: Option<PointFn>,
    name: String,
}

impl std::fmt::Debug for IntegrandHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegrandHandle")
            .field("name", &self.name)
            .field("has_osc_oracle", &self.osc_oracle.is_some())
            .field("has_primitive", &self.primitive.is_some())
            .finish()
    }
}

impl IntegrandHandle {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        IntegrandHandle {
            f: Arc::new(f),
            osc_oracle: None,
            primitive: None,
            name: name.into(),
        }
    }

    pub fn with_osc_oracle(
        mut self,
        oracle: impl Fn(Interval) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.osc_oracle = Some(Arc::new(oracle));
        self
    }

    pub fn with_primitive(mut self, prim: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.primitive = Some(Arc::new(prim));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Raw evaluation, no finiteness check.
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Evaluation that rejects NaN/inf samples.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let v = (self.f)(x);
        if !v.is_finite() {
            return Err(GaugeError::NonFiniteSample {
                name: self.name.clone(),
                x,
                value: v,
            });
        }
        Ok(v)
    }

    pub fn has_osc_oracle(&self) -> bool {
        self.osc_oracle.is_some()
    }

    /// (inf, sup) of f over the cell; may return infinities for unbounded f.
    pub fn osc(&self, op_name: &'static str, cell: Interval) -> Result<(f64, f64)> {
        match &self.osc_oracle {
            Some(o) => Ok(o(cell)),
            None => Err(GaugeError::OracleRequired {
                op: op_name,
                what: "interval inf/sup oracle",
                name: self.name.clone(),
            }),
        }
    }

    pub fn has_primitive(&self) -> bool {
        self.primitive.is_some()
    }

    pub fn primitive_at(&self, op_name: &'static str, x: f64) -> Result<f64> {
        match &self.primitive {
            Some(p) => Ok(p(x)),
            None => Err(GaugeError::OracleRequired {
                op: op_name,
                what: "primitive",
                name: self.name.clone(),
            }),
        }
    }

    /// F(v) - F(u) when a primitive is attached.
    pub fn primitive_increment(&self, op_name: &'static str, cell: Interval) -> Result<f64> {
        Ok(self.primitive_at(op_name, cell.hi())? - self.primitive_at(op_name, cell.lo())?)
    }
}

/// Value of one Riemann sum together with the division's shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumReport {
    pub value: f64,
    pub mesh: f64,
    pub n_cells: usize,
}
