//! Prior optimization on the probability simplex.
//!
//! Exponentiated-gradient ascent (multiplicative updates, backtracking by step
//! halving) from several starting points. Concavity of the objective in the
//! prior is not assumed, so small alphabets also get a grid certificate.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::Prior;
use crate::config::AnalysisConfig;
use crate::divergence::PriorObjective;
use crate::error::Result;
use crate::math;

/// Outcome of maximizing `p ↦ I_α(N, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub value: f64,
    pub arg_prior: Prior,
    /// Iterations spent by the winning start.
    pub iterations: usize,
    pub converged: bool,
    pub multistart_count: usize,
}

struct Run {
    p: Vec<f64>,
    value: f64,
    iterations: usize,
    stationarity: f64,
}

const MAX_STEP: f64 = 1e4;
const MIN_STEP: f64 = 1e-14;

/// `sqrt(Σ p_x (g_x − ḡ)²)`: zero exactly at stationary points of the simplex-restricted objective.
fn stationarity(p: &[f64], g: &[f64]) -> f64 {
    let mean: f64 = p.iter().zip(g).map(|(w, v)| w * v).sum();
    let var: f64 = p.iter().zip(g).map(|(w, v)| w * (v - mean) * (v - mean)).sum();
    math::sqrt(var.max(0.0))
}

fn eg_step(p: &[f64], g: &[f64], eta: f64) -> Vec<f64> {
    let gmax = p.iter().zip(g).filter(|(w, _)| **w > 0.0).map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let mut next: Vec<f64> =
        p.iter().zip(g).map(|(w, v)| if *w > 0.0 { w * math::exp(eta * (v - gmax)) } else { 0.0 }).collect();
    let sum: f64 = next.iter().sum();
    next.iter_mut().for_each(|w| *w /= sum);
    next
}

fn ascend(objective: &PriorObjective, start: Vec<f64>, config: &AnalysisConfig) -> Result<Run> {
    let mut p = start;
    let (mut value, mut grad) = objective.value_and_gradient(&p)?;
    let mut peak = value;
    let mut eta = 1.0;
    let mut iterations = 0;
    let mut stat = stationarity(&p, &grad);
    while iterations < config.max_iterations && stat > config.gradient_tolerance {
        iterations += 1;
        let mut accepted = false;
        while eta >= MIN_STEP {
            let cand = eg_step(&p, &grad, eta);
            let (cv, cg) = objective.value_and_gradient(&cand)?;
            // Below roundoff the value is flat; let stationarity decide.
            let flat = cv >= peak - 4.0 * f64::EPSILON * peak.abs().max(1.0);
            if cv > value || (flat && stationarity(&cand, &cg) < stat) {
                p = cand;
                value = cv;
                peak = peak.max(cv);
                grad = cg;
                stat = stationarity(&p, &grad);
                eta = (eta * 1.5).min(MAX_STEP);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(Run { p, value, iterations, stationarity: stat })
}

fn random_simplex_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| -math::ln(1.0 - rng.gen::<f64>())).collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    w
}

/// All points of the simplex grid with spacing `1/steps`.
fn simplex_grid(k: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(k, left - c, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, steps, steps, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Maximizes the objective over the simplex.
pub fn maximize_prior(objective: &PriorObjective, config: &AnalysisConfig) -> Result<OptimizationReport> {
    let k = objective.alphabet_size();
    if k == 1 {
        let value = objective.value(&[1.0])?;
        return Ok(OptimizationReport {
            value,
            arg_prior: Prior::from_raw(vec![1.0]),
            iterations: 0,
            converged: true,
            multistart_count: 1,
        });
    }

    let mut starts = vec![vec![1.0 / k as f64; k]];
    for a in 0..k {
        let mut v = vec![0.0; k];
        v[a] = 1.0;
        starts.push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while starts.len() < config.multistarts {
        starts.push(random_simplex_point(&mut rng, k));
    }

    let mut count = 0;
    let mut best: Option<Run> = None;
    for s in starts {
        let run = ascend(objective, s, config)?;
        count += 1;
        if best.as_ref().map_or(true, |b| run.value > b.value) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one start");

    if k <= config.certificate_max_alphabet && config.certificate_step > 0.0 {
        let steps = math::round(1.0 / config.certificate_step) as usize;
        let mut grid_best: Option<(f64, Vec<f64>)> = None;
        for g in simplex_grid(k, steps) {
            let v = objective.value(&g)?;
            if grid_best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                grid_best = Some((v, g));
            }
        }
        if let Some((gv, gp)) = grid_best {
            if gv > best.value + 1e-12 {
                let run = ascend(objective, gp, config)?;
                count += 1;
                if run.value > best.value {
                    best = run;
                }
            }
        }
    }

    Ok(OptimizationReport {
        value: best.value,
        converged: best.stationarity <= config.converged_tolerance,
        arg_prior: Prior::from_raw(best.p),
        iterations: best.iterations,
        multistart_count: count,
    })
}
