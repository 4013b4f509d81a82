#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitmev_core::failure::FailureModel;
use splitmev_core::optimizer::{ArbParams, SplitProblem};
use splitmev_core::PoolState;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(rel: &str) -> PathBuf {
    repo_root().join("fixtures").join(rel)
}

pub fn read(path: &PathBuf) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub const FEES: [f64; 4] = [0.0, 0.0005, 0.003, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Linear,
    Power,
    Quadratic,
    Table,
}

pub const SMOOTH: [Family; 3] = [Family::Linear, Family::Power, Family::Quadratic];
pub const ALL: [Family; 4] = [Family::Linear, Family::Power, Family::Quadratic, Family::Table];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// A decreasing, concave model whose floor does not bind on `[0, d]`.
pub fn sample_model(rng: &mut ChaCha8Rng, family: Family, d: f64) -> FailureModel {
    match family {
        Family::Linear => FailureModel::linear(rng.random_range(0.1..0.9) / d).unwrap(),
        Family::Power => FailureModel::power(d * rng.random_range(1.2..10.0), rng.random_range(1.0..4.0)).unwrap(),
        Family::Quadratic => {
            FailureModel::quadratic(rng.random_range(0.0..0.4) / d, rng.random_range(0.1..0.5) / (d * d)).unwrap()
        }
        Family::Table => {
            let knots = rng.random_range(2..7);
            let span = d * rng.random_range(1.05..2.0);
            // Increasing drops per segment keep the interpolant concave.
            let mut drops: Vec<f64> = (0..knots).map(|_| rng.random_range(0.01..1.0)).collect();
            drops.sort_by(f64::total_cmp);
            let total: f64 = drops.iter().sum();
            let budget = rng.random_range(0.2..0.9);
            let mut p = 1.0;
            let mut points = vec![(0.0, 1.0)];
            for (i, drop) in drops.iter().enumerate() {
                p -= budget * drop / total;
                points.push((span * (i + 1) as f64 / knots as f64, p));
            }
            FailureModel::table(points).unwrap()
        }
    }
}

/// Pool, inventory and price drawn from the acceptance ranges, with no
/// overhead or penalty yet.
pub fn sample_base(rng: &mut ChaCha8Rng, family: Family) -> SplitProblem {
    let x = log_uniform(rng, 1e2, 1e7);
    let y = log_uniform(rng, 1e2, 1e7);
    let fee = FEES[rng.random_range(0..FEES.len())];
    let pool = PoolState::new(x, y, fee).unwrap();
    let cex = pool.spot_price() * rng.random_range(0.8..1.2);
    let d = x * log_uniform(rng, 1e-3, 0.5);
    let model = sample_model(rng, family, d);
    SplitProblem::new(pool, ArbParams::new(d, cex, 0.0, 0.0).unwrap(), model)
}

/// Full instance: `φ ∈ [0, 2θ₀]` with `θ₀` the threshold at `φ = 0`, then
/// `c_g ∈ [0, 2θ]`.
pub fn sample_instance(rng: &mut ChaCha8Rng, family: Family) -> SplitProblem {
    let mut prob = sample_base(rng, family);
    let theta0 = prob.threshold().unwrap();
    prob.params.liquidation_penalty = rng.random_range(0.0..=2.0 * theta0);
    let theta = prob.threshold().unwrap();
    prob.params.gas_overhead = rng.random_range(0.0..=2.0 * theta);
    prob
}
