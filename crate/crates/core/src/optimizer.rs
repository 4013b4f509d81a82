//! Expected-profit model for selling a CEX-bought inventory `D` into a
//! constant-product pool in `n` equal chunks, and the chunk-size rule that
//! maximizes it.
//!
//! With `π(q)` the expected profit of one swap of size `q` and
//! `Π(n) = n π(D/n)`, the optimal chunk solves `π(q) = q π'(q)`. The gap
//! `g(q) = π(q) - q π'(q)` is strictly increasing whenever `π'` is strictly
//! decreasing, starts at `g(0+) = -c_g` and ends at `g(D) = θ - c_g`, so an
//! interior root exists exactly when `c_g < θ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amm::PoolState;
use crate::error::ModelError;
use crate::failure::FailureModel;

/// Default relative tolerance of the chunk-size root.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Number of geometric grid points used to bracket the root.
pub const BRACKET_GRID: usize = 10_000;
/// Lower end of the bracketing grid as a fraction of `D`.
pub const BRACKET_FLOOR: f64 = 1e-9;

const MAX_BISECTIONS: usize = 400;

/// One arbitrage instance: inventory `D`, CEX price `P_c`, per-swap
/// overhead `c_g` and liquidation penalty `φ` on a failed swap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ArbParams {
    pub total_size: f64,
    pub cex_price: f64,
    pub gas_overhead: f64,
    pub liquidation_penalty: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    total_size: f64,
    cex_price: f64,
    gas_overhead: f64,
    liquidation_penalty: f64,
}

impl TryFrom<RawParams> for ArbParams {
    type Error = ModelError;

    fn try_from(r: RawParams) -> Result<Self, Self::Error> {
        ArbParams::new(r.total_size, r.cex_price, r.gas_overhead, r.liquidation_penalty)
    }
}

impl ArbParams {
    pub fn new(
        total_size: f64,
        cex_price: f64,
        gas_overhead: f64,
        liquidation_penalty: f64,
    ) -> Result<Self, ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidParams(msg));
        if !(total_size.is_finite() && total_size > 0.0) {
            return bad(format!("total_size must be positive, got {total_size}"));
        }
        if !(cex_price.is_finite() && cex_price > 0.0) {
            return bad(format!("cex_price must be positive, got {cex_price}"));
        }
        if !(gas_overhead.is_finite() && gas_overhead >= 0.0) {
            return bad(format!("gas_overhead must be non-negative, got {gas_overhead}"));
        }
        if !(liquidation_penalty.is_finite() && liquidation_penalty >= 0.0) {
            return bad(format!(
                "liquidation_penalty must be non-negative, got {liquidation_penalty}"
            ));
        }
        Ok(Self {
            total_size,
            cex_price,
            gas_overhead,
            liquidation_penalty,
        })
    }

    pub fn with_gas_overhead(self, gas_overhead: f64) -> Self {
        Self { gas_overhead, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    SingleSwap,
    InteriorRoot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    /// Root `q*` of the optimality condition, or `D` on the single-swap branch.
    pub chunk_size: f64,
    /// Number of equal swaps to execute.
    pub num_chunks: u64,
    /// `⌈D / q*⌉`; `num_chunks` is this or one less, whichever earns more.
    pub ceil_chunks: u64,
    pub expected_total_profit: f64,
    pub branch: Branch,
    pub threshold_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl SplitPlan {
    /// Size of each executed swap, `D / n*`.
    pub fn executed_chunk(&self, total_size: f64) -> f64 {
        total_size / self.num_chunks as f64
    }
}

/// Outcome of the root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChunkRoot {
    /// `c_g >= θ`: no interior root, sell everything in one swap.
    SingleSwap,
    Interior(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "no sign change of the optimality residual on [{lowest_q:e}, {total_size}]; \
         residual at the lowest grid point is {residual:e} (optimal chunk is below the grid, \
         splitting is unbounded)"
    )]
    NoRoot {
        lowest_q: f64,
        total_size: f64,
        residual: f64,
    },
    #[error("bisection stalled at q = {q} with residual {residual:e}")]
    NotConverged { q: f64, residual: f64 },
}

/// Both sides of the optimality condition at one chunk size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalitySides {
    /// `q [M(q) + P_c]`
    pub lhs: f64,
    /// `p(q) [Δy(q) + φ] - (c_g + φ)`
    pub rhs: f64,
}

impl OptimalitySides {
    pub fn gap(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// A pool, an arbitrage instance and a failure model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitProblem {
    pub pool: PoolState,
    pub params: ArbParams,
    pub model: FailureModel,
}

impl SplitProblem {
    pub fn new(pool: PoolState, params: ArbParams, model: FailureModel) -> Self {
        Self { pool, params, model }
    }

    fn check_chunk(&self, q: f64) -> Result<(), ModelError> {
        if !(q > 0.0 && q <= self.params.total_size) {
            return Err(ModelError::domain("q", q, "0 < q <= total_size"));
        }
        Ok(())
    }

    /// Expected profit of one attempted swap of size `q`:
    /// `p Δy - P_c q - (1 - p) φ - c_g`.
    pub fn per_swap_profit(&self, q: f64) -> Result<f64, ModelError> {
        self.check_chunk(q)?;
        let p = self.model.prob(q)?;
        let out = self.pool.swap_out(q)?;
        let ArbParams {
            cex_price,
            gas_overhead,
            liquidation_penalty,
            ..
        } = self.params;
        Ok(p * out - cex_price * q - (1.0 - p) * liquidation_penalty - gas_overhead)
    }

    /// `π'(q) = p'(q)[Δy + φ] + p Δy' - P_c`.
    pub fn marginal_benefit(&self, q: f64) -> Result<f64, ModelError> {
        self.check_chunk(q)?;
        let p = self.model.prob(q)?;
        let dp = self.model.prob_derivative(q)?;
        let out = self.pool.swap_out(q)?;
        let dout = self.pool.marginal_out(q)?;
        Ok(dp * (out + self.params.liquidation_penalty) + p * dout - self.params.cex_price)
    }

    /// Overhead level at and above which a single swap is optimal:
    /// `θ = p(D)[Δy(D) + φ] - φ - D[M(D) + P_c]`.
    pub fn threshold(&self) -> Result<f64, ModelError> {
        let d = self.params.total_size;
        let phi = self.params.liquidation_penalty;
        let p = self.model.prob(d)?;
        let out = self.pool.swap_out(d)?;
        let m = self.marginal_benefit(d)?;
        Ok(p * (out + phi) - phi - d * (m + self.params.cex_price))
    }

    pub fn optimality_sides(&self, q: f64) -> Result<OptimalitySides, ModelError> {
        let m = self.marginal_benefit(q)?;
        let p = self.model.prob(q)?;
        let out = self.pool.swap_out(q)?;
        let phi = self.params.liquidation_penalty;
        Ok(OptimalitySides {
            lhs: q * (m + self.params.cex_price),
            rhs: p * (out + phi) - (self.params.gas_overhead + phi),
        })
    }

    /// Root of the optimality condition on `(0, D)`, or
    /// [`ChunkRoot::SingleSwap`] when `c_g >= θ`.
    ///
    /// The root is bracketed by the first sign change of `rhs - lhs` on a
    /// geometric grid over `[D·1e-9, D]` and refined by bisection until
    /// `|lhs - rhs| <= rel_tol (1 + |rhs|)`. If the bracket collapses onto a
    /// jump of the residual (a knot of a table model) the jump location is
    /// returned.
    pub fn solve_chunk(&self, rel_tol: f64) -> Result<ChunkRoot, SolveError> {
        if rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(ModelError::domain("rel_tol", rel_tol, "rel_tol > 0").into());
        }
        let theta = self.threshold()?;
        if self.params.gas_overhead >= theta {
            return Ok(ChunkRoot::SingleSwap);
        }
        let d = self.params.total_size;
        let gap = |q: f64| -> Result<OptimalitySides, ModelError> { self.optimality_sides(q) };

        let lo_q = d * BRACKET_FLOOR;
        let ratio = (1.0 / BRACKET_FLOOR).powf(1.0 / (BRACKET_GRID - 1) as f64);
        let mut prev_q = lo_q;
        let mut prev = gap(prev_q)?.gap();
        if prev >= 0.0 {
            if prev == 0.0 {
                return Ok(ChunkRoot::Interior(prev_q));
            }
            return Err(SolveError::NoRoot {
                lowest_q: lo_q,
                total_size: d,
                residual: prev,
            });
        }
        let mut bracket = None;
        for i in 1..BRACKET_GRID {
            let q = if i == BRACKET_GRID - 1 {
                d
            } else {
                (lo_q * ratio.powi(i as i32)).min(d)
            };
            let g = gap(q)?.gap();
            if prev < 0.0 && g >= 0.0 {
                bracket = Some((prev_q, q));
                break;
            }
            prev_q = q;
            prev = g;
        }
        let Some((mut lo, mut hi)) = bracket else {
            return Err(SolveError::NoRoot {
                lowest_q: lo_q,
                total_size: d,
                residual: prev,
            });
        };

        let converged = |s: &OptimalitySides| s.gap().abs() <= rel_tol * (1.0 + s.rhs.abs());
        let hi_sides = gap(hi)?;
        if converged(&hi_sides) {
            return Ok(ChunkRoot::Interior(hi));
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let sides = gap(mid)?;
            if converged(&sides) {
                return Ok(ChunkRoot::Interior(mid));
            }
            if sides.gap() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Adjacent floats still straddle a sign change: the residual jumps here.
        let lo_gap = gap(lo)?.gap();
        let hi_gap = gap(hi)?.gap();
        if lo_gap < 0.0 && hi_gap >= 0.0 && hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(ChunkRoot::Interior(hi));
        }
        Err(SolveError::NotConverged {
            q: hi,
            residual: hi_gap,
        })
    }

    /// `Π(n) = n π(D / n)`.
    pub fn total_profit(&self, n: u64) -> Result<f64, ModelError> {
        if n == 0 {
            return Err(ModelError::domain("n", 0.0, "n >= 1"));
        }
        let q = if n == 1 {
            self.params.total_size
        } else {
            self.params.total_size / n as f64
        };
        Ok(n as f64 * self.per_swap_profit(q)?)
    }

    /// Optimal number of equal swaps.
    ///
    /// On the interior branch `Π(n)` is concave in `n` with its continuous
    /// maximum at `D / q*`, so the integer optimum is `⌈D/q*⌉` or the integer
    /// below it; both are evaluated and the better one is kept (ties go to
    /// fewer swaps).
    pub fn plan(&self, rel_tol: f64) -> Result<SplitPlan, SolveError> {
        let theta = self.threshold()?;
        let d = self.params.total_size;
        match self.solve_chunk(rel_tol)? {
            ChunkRoot::SingleSwap => Ok(SplitPlan {
                chunk_size: d,
                num_chunks: 1,
                ceil_chunks: 1,
                expected_total_profit: self.total_profit(1)?,
                branch: Branch::SingleSwap,
                threshold_value: theta,
                warning: None,
            }),
            ChunkRoot::Interior(q_star) => {
                let ratio = d / q_star;
                if ratio > u64::MAX as f64 / 2.0 {
                    return Err(SolveError::NoRoot {
                        lowest_q: q_star,
                        total_size: d,
                        residual: 0.0,
                    });
                }
                let ceil = (ratio.ceil() as u64).max(1);
                let mut best = (ceil, self.total_profit(ceil)?);
                if ceil > 1 {
                    let below = ceil - 1;
                    let profit = self.total_profit(below)?;
                    if profit >= best.1 {
                        best = (below, profit);
                    }
                }
                Ok(SplitPlan {
                    chunk_size: q_star,
                    num_chunks: best.0,
                    ceil_chunks: ceil,
                    expected_total_profit: best.1,
                    branch: Branch::InteriorRoot,
                    threshold_value: theta,
                    warning: None,
                })
            }
        }
    }

    /// Exhaustive search of `Π(n)` over `n ∈ [1, n_max]`, ties toward smaller `n`.
    /// A maximizer at `n_max` (with `n_max > 1`) carries a truncation warning.
    pub fn brute_force_plan(&self, n_max: u64) -> Result<SplitPlan, ModelError> {
        if n_max == 0 {
            return Err(ModelError::domain("n_max", 0.0, "n_max >= 1"));
        }
        let mut best = (1, self.total_profit(1)?);
        for n in 2..=n_max {
            let profit = self.total_profit(n)?;
            if profit > best.1 {
                best = (n, profit);
            }
        }
        let (n, profit) = best;
        let warning = (n == n_max && n_max > 1).then(|| {
            let msg = format!("profit still increasing at n_max = {n_max}; search truncated");
            log::warn!("{msg}");
            msg
        });
        Ok(SplitPlan {
            chunk_size: self.params.total_size / n as f64,
            num_chunks: n,
            ceil_chunks: n,
            expected_total_profit: profit,
            branch: if n == 1 {
                Branch::SingleSwap
            } else {
                Branch::InteriorRoot
            },
            threshold_value: self.threshold()?,
            warning,
        })
    }

    /// `Π(n)` for `n = 1..=n_max`.
    pub fn profit_curve(&self, n_max: u64) -> Result<Vec<(u64, f64)>, ModelError> {
        (1..=n_max).map(|n| Ok((n, self.total_profit(n)?))).collect()
    }
}
