//! Parametric swap-failure models `p(q)`: the probability that an AMM
//! swap of size `q` lands before the opportunity is gone.
//!
//! Every family satisfies `p(0) = 1` and is strictly decreasing until a
//! small positive floor takes over. The default families are also concave
//! (`p'' <= 0`); a convex decay can still be expressed as an interpolation
//! table, which [`validate_assumptions`] will flag.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ConfigError, ModelError};

pub const DEFAULT_FLOOR: f64 = 1e-6;
pub const MAX_FLOOR: f64 = 0.01;

/// Tolerance applied to second differences when checking concavity.
pub const CONCAVITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum FailureFamily {
    /// `1 - slope * q`. A zero slope gives the degenerate always-succeeds model.
    LinearClamped { slope: f64 },
    /// `1 - (q / q_max)^alpha` with `alpha >= 1`.
    PowerConcave { q_max: f64, alpha: f64 },
    /// `1 - slope * q - curvature * q^2`.
    QuadraticConcave { slope: f64, curvature: f64 },
    /// Piecewise-linear through `(q, p)` knots starting at `(0, 1)`.
    TableInterpolated { points: Vec<(f64, f64)> },
}

/// A failure family plus the floor `ε` that keeps `p(q)` strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FailureModelConfig", into = "FailureModelConfig")]
pub struct FailureModel {
    family: FailureFamily,
    floor: f64,
}

impl FailureModel {
    pub fn new(family: FailureFamily, floor: f64) -> Result<Self, ModelError> {
        if !(floor > 0.0 && floor <= MAX_FLOOR) {
            return Err(ModelError::InvalidFailureModel(format!(
                "floor must lie in (0, {MAX_FLOOR}], got {floor}"
            )));
        }
        validate_family(&family)?;
        Ok(Self { family, floor })
    }

    pub fn linear(slope: f64) -> Result<Self, ModelError> {
        Self::new(FailureFamily::LinearClamped { slope }, DEFAULT_FLOOR)
    }

    pub fn power(q_max: f64, alpha: f64) -> Result<Self, ModelError> {
        Self::new(FailureFamily::PowerConcave { q_max, alpha }, DEFAULT_FLOOR)
    }

    pub fn quadratic(slope: f64, curvature: f64) -> Result<Self, ModelError> {
        Self::new(FailureFamily::QuadraticConcave { slope, curvature }, DEFAULT_FLOOR)
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        Self::new(FailureFamily::TableInterpolated { points }, DEFAULT_FLOOR)
    }

    /// `p ≡ 1`: the boundary model in which every swap lands.
    pub fn certain() -> Self {
        Self {
            family: FailureFamily::LinearClamped { slope: 0.0 },
            floor: DEFAULT_FLOOR,
        }
    }

    pub fn family(&self) -> &FailureFamily {
        &self.family
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Upper end of the domain, if the family has one.
    pub fn domain_end(&self) -> Option<f64> {
        match &self.family {
            FailureFamily::TableInterpolated { points } => points.last().map(|p| p.0),
            _ => None,
        }
    }

    fn check_domain(&self, q: f64) -> Result<(), ModelError> {
        if !q.is_finite() || q < 0.0 {
            return Err(ModelError::domain("q", q, "q >= 0"));
        }
        if let Some(end) = self.domain_end() {
            if q > end {
                return Err(ModelError::domain("q", q, "q within the table range"));
            }
        }
        Ok(())
    }

    /// The family value before the floor is applied.
    fn raw(&self, q: f64) -> f64 {
        match &self.family {
            FailureFamily::LinearClamped { slope } => 1.0 - slope * q,
            FailureFamily::PowerConcave { q_max, alpha } => 1.0 - (q / q_max).powf(*alpha),
            FailureFamily::QuadraticConcave { slope, curvature } => 1.0 - slope * q - curvature * q * q,
            FailureFamily::TableInterpolated { points } => {
                let (i, t) = table_segment(points, q);
                let (q0, p0) = points[i];
                let (q1, p1) = points[i + 1];
                p0 + (p1 - p0) * (t - q0) / (q1 - q0)
            }
        }
    }

    fn raw_derivative(&self, q: f64) -> f64 {
        match &self.family {
            FailureFamily::LinearClamped { slope } => -slope,
            FailureFamily::PowerConcave { q_max, alpha } => {
                if q == 0.0 && *alpha > 1.0 {
                    0.0
                } else {
                    -alpha * q.powf(alpha - 1.0) / q_max.powf(*alpha)
                }
            }
            FailureFamily::QuadraticConcave { slope, curvature } => -slope - 2.0 * curvature * q,
            FailureFamily::TableInterpolated { points } => {
                let (i, _) = table_segment(points, q);
                let (q0, p0) = points[i];
                let (q1, p1) = points[i + 1];
                (p1 - p0) / (q1 - q0)
            }
        }
    }

    fn floor_binds(&self, q: f64) -> bool {
        self.raw(q) <= self.floor
    }

    /// Success probability `p(q)`, in `[floor, 1]`.
    pub fn prob(&self, q: f64) -> Result<f64, ModelError> {
        self.check_domain(q)?;
        if q == 0.0 {
            return Ok(1.0);
        }
        Ok(self.raw(q).clamp(self.floor, 1.0))
    }

    /// `p'(q)`; zero wherever the floor binds. At a table knot the slope of
    /// the segment to the right is returned (left at the final knot).
    pub fn prob_derivative(&self, q: f64) -> Result<f64, ModelError> {
        self.check_domain(q)?;
        if self.floor_binds(q) {
            return Ok(0.0);
        }
        Ok(self.raw_derivative(q))
    }
}

/// Index of the segment containing `q` and `q` itself (clamped to the table).
fn table_segment(points: &[(f64, f64)], q: f64) -> (usize, f64) {
    let last = points.len() - 2;
    let idx = points.partition_point(|&(knot, _)| knot <= q);
    (idx.saturating_sub(1).min(last), q)
}

fn positive(name: &str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidFailureModel(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidFailureModel(format!(
            "{name} must be non-negative, got {v}"
        )))
    }
}

fn validate_family(family: &FailureFamily) -> Result<(), ModelError> {
    match family {
        FailureFamily::LinearClamped { slope } => non_negative("slope", *slope),
        FailureFamily::PowerConcave { q_max, alpha } => {
            positive("q_max", *q_max)?;
            if !(alpha.is_finite() && *alpha >= 1.0) {
                return Err(ModelError::InvalidFailureModel(format!(
                    "alpha must be >= 1, got {alpha}"
                )));
            }
            Ok(())
        }
        FailureFamily::QuadraticConcave { slope, curvature } => {
            non_negative("slope", *slope)?;
            positive("curvature", *curvature)
        }
        FailureFamily::TableInterpolated { points } => {
            if points.len() < 2 {
                return Err(ModelError::InvalidFailureModel(
                    "table needs at least two points".into(),
                ));
            }
            if points[0] != (0.0, 1.0) {
                return Err(ModelError::InvalidFailureModel("table must start at (0, 1)".into()));
            }
            for (i, w) in points.windows(2).enumerate() {
                let ((q0, p0), (q1, p1)) = (w[0], w[1]);
                if !(q1.is_finite() && q1 > q0) {
                    return Err(ModelError::InvalidFailureModel(format!(
                        "table q values must strictly increase (point {})",
                        i + 1
                    )));
                }
                if !(p1.is_finite() && p1 < p0 && p1 >= 0.0) {
                    return Err(ModelError::InvalidFailureModel(format!(
                        "table probabilities must strictly decrease within [0, 1] (point {})",
                        i + 1
                    )));
                }
            }
            Ok(())
        }
    }
}

/// File form of a failure model: a family name plus its parameter map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureModelConfig {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

impl FailureModelConfig {
    pub fn build(&self) -> Result<FailureModel, ConfigError> {
        let allowed: &[&str] = match self.family.as_str() {
            "linear_clamped" => &["slope"],
            "power_concave" => &["q_max", "alpha"],
            "quadratic_concave" => &["slope", "curvature"],
            "table_interpolated" => &["points"],
            other => {
                return Err(ConfigError::new(
                    "family",
                    format!(
                        "unknown failure family `{other}` (expected linear_clamped, \
                         power_concave, quadratic_concave or table_interpolated)"
                    ),
                ))
            }
        };
        if let Some(key) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(ConfigError::new(
                format!("params.{key}"),
                format!("unknown parameter for {}", self.family),
            ));
        }
        let num = |key: &str| -> Result<f64, ConfigError> {
            let v = self
                .params
                .get(key)
                .ok_or_else(|| ConfigError::new(format!("params.{key}"), "missing parameter"))?;
            v.as_f64()
                .ok_or_else(|| ConfigError::new(format!("params.{key}"), "expected a number"))
        };
        let family = match self.family.as_str() {
            "linear_clamped" => FailureFamily::LinearClamped { slope: num("slope")? },
            "power_concave" => FailureFamily::PowerConcave {
                q_max: num("q_max")?,
                alpha: num("alpha")?,
            },
            "quadratic_concave" => FailureFamily::QuadraticConcave {
                slope: num("slope")?,
                curvature: num("curvature")?,
            },
            _ => {
                let raw = self
                    .params
                    .get("points")
                    .ok_or_else(|| ConfigError::new("params.points", "missing parameter"))?;
                let points: Vec<(f64, f64)> = serde_json::from_value(raw.clone())
                    .map_err(|e| ConfigError::new("params.points", format!("expected [[q, p], ...]: {e}")))?;
                FailureFamily::TableInterpolated { points }
            }
        };
        FailureModel::new(family, self.floor.unwrap_or(DEFAULT_FLOOR))
            .map_err(|e| ConfigError::new("params", e.to_string()))
    }
}

impl TryFrom<FailureModelConfig> for FailureModel {
    type Error = ConfigError;

    fn try_from(cfg: FailureModelConfig) -> Result<Self, Self::Error> {
        cfg.build()
    }
}

impl From<FailureModel> for FailureModelConfig {
    fn from(model: FailureModel) -> Self {
        let mut params = BTreeMap::new();
        let family = match model.family {
            FailureFamily::LinearClamped { slope } => {
                params.insert("slope".into(), Value::from(slope));
                "linear_clamped"
            }
            FailureFamily::PowerConcave { q_max, alpha } => {
                params.insert("q_max".into(), Value::from(q_max));
                params.insert("alpha".into(), Value::from(alpha));
                "power_concave"
            }
            FailureFamily::QuadraticConcave { slope, curvature } => {
                params.insert("slope".into(), Value::from(slope));
                params.insert("curvature".into(), Value::from(curvature));
                "quadratic_concave"
            }
            FailureFamily::TableInterpolated { points } => {
                let pts = points
                    .into_iter()
                    .map(|(q, p)| Value::from(vec![q, p]))
                    .collect::<Vec<_>>();
                params.insert("points".into(), Value::from(pts));
                "table_interpolated"
            }
        };
        FailureModelConfig {
            family: family.into(),
            params,
            floor: Some(model.floor),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// `p(0) = 1`.
    UnitAtZero,
    /// `p'(q) < 0` for `q > 0`.
    StrictlyDecreasing,
    /// `p''(q) <= 0`, checked with second differences.
    Concave,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    pub passed: bool,
    pub first_violation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub q_lo: f64,
    pub q_hi: f64,
    pub checks: Vec<AssumptionCheck>,
}

impl ValidityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, assumption: Assumption) -> &AssumptionCheck {
        self.checks
            .iter()
            .find(|c| c.assumption == assumption)
            .expect("every assumption is checked")
    }
}

/// Check the hypotheses the splitting analysis relies on over a uniform
/// grid of `grid` points on `[q_lo, q_hi]`.
pub fn validate_assumptions(
    model: &FailureModel,
    q_lo: f64,
    q_hi: f64,
    grid: usize,
) -> Result<ValidityReport, ModelError> {
    if !(q_lo >= 0.0 && q_hi > q_lo && q_hi.is_finite()) {
        return Err(ModelError::domain("q_hi", q_hi, "0 <= q_lo < q_hi"));
    }
    if grid < 3 {
        return Err(ModelError::domain("grid", grid as f64, "grid >= 3"));
    }
    let step = (q_hi - q_lo) / (grid - 1) as f64;
    let qs: Vec<f64> = (0..grid)
        .map(|i| if i == grid - 1 { q_hi } else { q_lo + step * i as f64 })
        .collect();
    let ps = qs.iter().map(|&q| model.prob(q)).collect::<Result<Vec<_>, _>>()?;

    let unit = model.prob(0.0)?;
    let unit_check = AssumptionCheck {
        assumption: Assumption::UnitAtZero,
        passed: unit == 1.0,
        first_violation: (unit != 1.0).then_some(0.0),
    };

    let mut decreasing_violation = None;
    for &q in qs.iter().filter(|&&q| q > 0.0) {
        if model.prob_derivative(q)? >= 0.0 {
            decreasing_violation = Some(q);
            break;
        }
    }

    let concave_violation = (1..grid - 1)
        .find(|&i| ps[i + 1] - 2.0 * ps[i] + ps[i - 1] > CONCAVITY_TOLERANCE)
        .map(|i| qs[i]);

    Ok(ValidityReport {
        q_lo,
        q_hi,
        checks: vec![
            unit_check,
            AssumptionCheck {
                assumption: Assumption::StrictlyDecreasing,
                passed: decreasing_violation.is_none(),
                first_violation: decreasing_violation,
            },
            AssumptionCheck {
                assumption: Assumption::Concave,
                passed: concave_violation.is_none(),
                first_violation: concave_violation,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_examples() {
        let m = FailureModel::linear(0.001).unwrap();
        assert_eq!(m.prob(0.0).unwrap(), 1.0);
        assert!((m.prob(500.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.prob_derivative(500.0).unwrap(), -0.001);
    }

    #[test]
    fn power_examples() {
        let m = FailureModel::power(1000.0, 2.0).unwrap();
        assert!((m.prob(500.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((m.prob_derivative(500.0).unwrap() + 0.001).abs() < 1e-18);
    }

    #[test]
    fn floor_region_is_flat() {
        let models = [
            FailureModel::linear(0.001).unwrap(),
            FailureModel::power(1000.0, 2.0).unwrap(),
            FailureModel::quadratic(0.0, 1e-6).unwrap(),
            FailureModel::table(vec![(0.0, 1.0), (10.0, 0.0)]).unwrap(),
        ];
        for m in &models {
            let q = m.domain_end().unwrap_or(5000.0);
            assert_eq!(m.prob(q).unwrap(), m.floor());
            assert_eq!(m.prob_derivative(q).unwrap(), 0.0);
        }
    }

    #[test]
    fn certain_model_never_fails() {
        let m = FailureModel::certain();
        for q in [0.0, 1.0, 1e9] {
            assert_eq!(m.prob(q).unwrap(), 1.0);
            assert_eq!(m.prob_derivative(q).unwrap(), 0.0);
        }
    }

    #[test]
    fn domain_errors() {
        let m = FailureModel::linear(0.001).unwrap();
        assert!(m.prob(-1.0).is_err());
        let t = FailureModel::table(vec![(0.0, 1.0), (100.0, 0.5)]).unwrap();
        assert!(t.prob(100.0).is_ok());
        assert!(t.prob(100.1).is_err());
        assert!(t.prob_derivative(101.0).is_err());
    }

    #[test]
    fn table_interpolates_and_reports_segment_slope() {
        let t = FailureModel::table(vec![(0.0, 1.0), (100.0, 0.8), (200.0, 0.4)]).unwrap();
        assert!((t.prob(50.0).unwrap() - 0.9).abs() < 1e-15);
        assert!((t.prob(150.0).unwrap() - 0.6).abs() < 1e-15);
        assert!((t.prob_derivative(50.0).unwrap() + 0.002).abs() < 1e-15);
        assert!((t.prob_derivative(100.0).unwrap() + 0.004).abs() < 1e-15);
        assert!((t.prob_derivative(200.0).unwrap() + 0.004).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(FailureModel::linear(-1.0).is_err());
        assert!(FailureModel::power(1000.0, 0.5).is_err());
        assert!(FailureModel::power(0.0, 2.0).is_err());
        assert!(FailureModel::quadratic(0.1, 0.0).is_err());
        assert!(FailureModel::table(vec![(0.0, 1.0)]).is_err());
        assert!(FailureModel::table(vec![(0.0, 0.9), (1.0, 0.5)]).is_err());
        assert!(FailureModel::table(vec![(0.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(FailureModel::table(vec![(0.0, 1.0), (0.0, 0.5)]).is_err());
        assert!(FailureModel::new(FailureFamily::LinearClamped { slope: 0.1 }, 0.0).is_err());
        assert!(FailureModel::new(FailureFamily::LinearClamped { slope: 0.1 }, 0.02).is_err());
    }

    #[test]
    fn linear_region_passes_all_checks() {
        let m = FailureModel::linear(0.001).unwrap();
        let report = validate_assumptions(&m, 0.0, 900.0, 101).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn power_below_cap_passes_all_checks() {
        let m = FailureModel::power(1000.0, 2.0).unwrap();
        let report = validate_assumptions(&m, 0.0, 999.0, 1001).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn exponential_table_fails_concavity() {
        let lambda = 0.01;
        let points: Vec<(f64, f64)> = (0..=10)
            .map(|i| {
                let q = 50.0 * i as f64;
                (q, (-lambda * q).exp())
            })
            .collect();
        let m = FailureModel::table(points).unwrap();
        let report = validate_assumptions(&m, 0.0, 500.0, 101).unwrap();
        assert!(report.check(Assumption::UnitAtZero).passed);
        assert!(report.check(Assumption::StrictlyDecreasing).passed);
        let concave = report.check(Assumption::Concave);
        assert!(!concave.passed);
        // The first grid point straddling the knot at q = 50.
        assert_eq!(concave.first_violation, Some(50.0));
    }

    #[test]
    fn clamp_kink_is_reported() {
        let m = FailureModel::linear(0.01).unwrap();
        let report = validate_assumptions(&m, 0.0, 200.0, 41).unwrap();
        assert!(!report.check(Assumption::StrictlyDecreasing).passed);
        assert_eq!(
            report.check(Assumption::StrictlyDecreasing).first_violation,
            Some(100.0)
        );
        assert!(!report.check(Assumption::Concave).passed);
    }

    #[test]
    fn validate_rejects_bad_grid() {
        let m = FailureModel::linear(0.001).unwrap();
        assert!(validate_assumptions(&m, 0.0, 1.0, 2).is_err());
        assert!(validate_assumptions(&m, 1.0, 1.0, 10).is_err());
        assert!(validate_assumptions(&m, -1.0, 1.0, 10).is_err());
    }

    #[test]
    fn config_roundtrip_and_errors() {
        let cfg: FailureModelConfig =
            serde_json::from_str(r#"{"family":"power_concave","params":{"q_max":1000,"alpha":2}}"#).unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m, FailureModel::power(1000.0, 2.0).unwrap());
        let back: FailureModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);

        let bad = FailureModelConfig {
            family: "power_concave".into(),
            params: [
                ("q_max".to_string(), Value::from(10.0)),
                ("beta".into(), Value::from(1.0)),
            ]
            .into_iter()
            .collect(),
            floor: None,
        };
        assert_eq!(bad.build().unwrap_err().path, "params.beta");

        let unknown = FailureModelConfig {
            family: "exponential".into(),
            params: BTreeMap::new(),
            floor: None,
        };
        assert_eq!(unknown.build().unwrap_err().path, "family");

        let table: FailureModel = serde_json::from_str(
            r#"{"family":"table_interpolated","params":{"points":[[0,1],[10,0.5]]},"floor":0.001}"#,
        )
        .unwrap();
        assert_eq!(table.floor(), 0.001);
    }
}
