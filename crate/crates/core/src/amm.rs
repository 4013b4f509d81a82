//! Constant-product pool mechanics with the fee charged on the input side.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Largest trade-to-reserve ratio accepted before `x + (1-f)q` stops
/// resolving the reserve to ~1e-9 relative precision.
pub const MAX_TRADE_TO_RESERVE: f64 = 1e12;

/// Reserves `(x, y)` of a constant-product pool and its input fee `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPool")]
pub struct PoolState {
    reserve_x: f64,
    reserve_y: f64,
    fee: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPool {
    reserve_x: f64,
    reserve_y: f64,
    fee: f64,
}

impl TryFrom<RawPool> for PoolState {
    type Error = ModelError;

    fn try_from(raw: RawPool) -> Result<Self, Self::Error> {
        PoolState::new(raw.reserve_x, raw.reserve_y, raw.fee)
    }
}

impl PoolState {
    pub fn new(reserve_x: f64, reserve_y: f64, fee: f64) -> Result<Self, ModelError> {
        if !(reserve_x.is_finite() && reserve_x > 0.0) {
            return Err(ModelError::InvalidPool(format!(
                "reserve_x must be positive and finite, got {reserve_x}"
            )));
        }
        if !(reserve_y.is_finite() && reserve_y > 0.0) {
            return Err(ModelError::InvalidPool(format!(
                "reserve_y must be positive and finite, got {reserve_y}"
            )));
        }
        if !(0.0..1.0).contains(&fee) {
            return Err(ModelError::InvalidPool(format!("fee must lie in [0, 1), got {fee}")));
        }
        Ok(Self {
            reserve_x,
            reserve_y,
            fee,
        })
    }

    pub fn reserve_x(&self) -> f64 {
        self.reserve_x
    }

    pub fn reserve_y(&self) -> f64 {
        self.reserve_y
    }

    pub fn fee(&self) -> f64 {
        self.fee
    }

    fn effective_in(&self, q: f64) -> Result<f64, ModelError> {
        if !q.is_finite() || q < 0.0 {
            return Err(ModelError::domain("q", q, "q >= 0"));
        }
        if q / self.reserve_x > MAX_TRADE_TO_RESERVE {
            return Err(ModelError::PrecisionLoss {
                q,
                reserve: self.reserve_x,
            });
        }
        Ok((1.0 - self.fee) * q)
    }

    /// Amount of Y received for selling `q` units of X:
    /// `y(1-f)q / (x + (1-f)q)`. Defined as 0 at `q = 0`.
    pub fn swap_out(&self, q: f64) -> Result<f64, ModelError> {
        let q_eff = self.effective_in(q)?;
        if q_eff == 0.0 {
            return Ok(0.0);
        }
        Ok(self.reserve_y * q_eff / (self.reserve_x + q_eff))
    }

    /// First derivative of [`swap_out`](Self::swap_out) in `q`:
    /// `y(1-f)x / (x + (1-f)q)^2`.
    pub fn marginal_out(&self, q: f64) -> Result<f64, ModelError> {
        let q_eff = self.effective_in(q)?;
        let denom = self.reserve_x + q_eff;
        Ok(self.reserve_y * (1.0 - self.fee) * self.reserve_x / (denom * denom))
    }

    /// Second derivative of the payout; strictly negative.
    pub fn payout_curvature(&self, q: f64) -> Result<f64, ModelError> {
        let q_eff = self.effective_in(q)?;
        let g = 1.0 - self.fee;
        let denom = self.reserve_x + q_eff;
        Ok(-2.0 * self.reserve_y * g * g * self.reserve_x / (denom * denom * denom))
    }

    /// Reserves after a successful sale of `q` units of X.
    pub fn apply_swap(&self, q: f64) -> Result<PoolState, ModelError> {
        if q <= 0.0 {
            return Err(ModelError::domain("q", q, "q > 0"));
        }
        let out = self.swap_out(q)?;
        Ok(PoolState {
            reserve_x: self.reserve_x + (1.0 - self.fee) * q,
            reserve_y: self.reserve_y - out,
            fee: self.fee,
        })
    }

    /// Pool price `y / x` in Y per X.
    pub fn spot_price(&self) -> f64 {
        self.reserve_y / self.reserve_x
    }

    /// Trade size at which the average execution price falls to `price`,
    /// i.e. the `q` solving `swap_out(q) = price * q`. Zero when the pool's
    /// marginal price is already at or below `price`.
    pub fn size_at_average_price(&self, price: f64) -> f64 {
        let g = 1.0 - self.fee;
        (self.reserve_y / price - self.reserve_x / g).max(0.0)
    }
}
