//! Petz Rényi divergence and the information quantities built on it.
//!
//! All values are in bits. `α = 1` is a separate code path using von Neumann
//! quantities, never a numerical limit.

use alloc::vec::Vec;

use crate::channel::{CQChannel, CQState, Prior};
use crate::error::{Error, Result};
use crate::math;
use crate::operator::{von_neumann_entropy, DensityMatrix, HermitianMatrix};

/// Relative eigenvalue cutoff for the support condition `ρ ≪ σ`.
pub const SUPPORT_CONDITION_CUTOFF: f64 = 1e-10;

/// Order parameter of a Rényi quantity, `0 ≤ α ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const ONE: Alpha = Alpha(1.0);
    pub const HALF: Alpha = Alpha(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=2.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    fn require_positive(self) -> Result<Self> {
        if self.0 > 0.0 {
            Ok(self)
        } else {
            Err(Error::InvalidAlpha(self.0))
        }
    }
}

/// Divergence value in bits; `finite == false` means `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult {
    pub value: f64,
    pub finite: bool,
}

impl DivergenceResult {
    pub const INFINITE: DivergenceResult = DivergenceResult { value: f64::INFINITY, finite: false };

    fn finite(value: f64) -> Self {
        Self { value, finite: true }
    }
}

/// Weight of `rho` outside the support of `sigma`.
fn support_leak(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    let ker = sigma.kernel_projector(SUPPORT_CONDITION_CUTOFF)?;
    Ok(rho.trace_product(&ker))
}

/// Petz Rényi divergence `D_α(ρ‖σ) = log₂ tr[ρ^α σ^{1−α}] / (α − 1)`.
///
/// Accepts any PSD operators; `σ` need not be normalized. When `ρ` has weight
/// outside `supp σ` the result is `+∞` rather than an error.
pub fn petz_divergence(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    alpha: Alpha,
) -> Result<DivergenceResult> {
    let (rho, sigma) = (rho.as_ref(), sigma.as_ref());
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionError { expected: rho.dim(), found: sigma.dim() });
    }
    if support_leak(rho, sigma)? > SUPPORT_CONDITION_CUTOFF * rho.trace().max(1.0) {
        return Ok(DivergenceResult::INFINITE);
    }
    if alpha.is_one() {
        let log_rho = rho.map_support(math::log2)?;
        let log_sigma = sigma.map_support(math::log2)?;
        let value = rho.trace_product(&log_rho) - rho.trace_product(&log_sigma);
        return Ok(DivergenceResult::finite(value));
    }
    let a = alpha.value();
    let q = rho.power(a)?.trace_product(&sigma.power(1.0 - a)?);
    if !(q > 0.0) {
        return Ok(DivergenceResult::INFINITE);
    }
    Ok(DivergenceResult::finite(math::log2(q) / (a - 1.0)))
}

/// `α/(1−α) · log₂ tr[X^{1/α}]`, the optimized value over `σ_B` given `X = tr_A[…]`.
fn sibson_log_norm(x: &HermitianMatrix, alpha: f64) -> Result<f64> {
    let inv = 1.0 / alpha;
    let norm = x.map_support(|l| math::pow(l, inv))?.trace();
    Ok(math::log2(norm))
}

/// Conditional entropy `H↑_α(A|B) = max_σ −D_α(ρ_AB ‖ 1_A ⊗ σ_B)` of a bipartite
/// operator with subsystem dimensions `dims = [d_A, d_B]`.
pub fn conditional_renyi_up(rho_ab: &impl AsRef<HermitianMatrix>, dims: [usize; 2], alpha: Alpha) -> Result<f64> {
    let rho_ab = rho_ab.as_ref();
    let alpha = alpha.require_positive()?;
    if alpha.is_one() {
        let joint = DensityMatrix::normalized(rho_ab.clone())?;
        let b = DensityMatrix::normalized(rho_ab.partial_trace(&dims, &[1])?)?;
        return Ok(von_neumann_entropy(&joint) - von_neumann_entropy(&b));
    }
    let a = alpha.value();
    let x = rho_ab.power(a)?.partial_trace(&dims, &[1])?;
    Ok(a / (1.0 - a) * sibson_log_norm(&x, a)?)
}

/// [`conditional_renyi_up`] for a CQ state, using `tr_X ρ_XB^α = Σ_x p_x^α ρ_x^α`.
pub fn conditional_renyi_up_cq(state: &CQState, alpha: Alpha) -> Result<f64> {
    let alpha = alpha.require_positive()?;
    if alpha.is_one() {
        let s_b = von_neumann_entropy(&state.b_marginal());
        let s_x: f64 = -state.blocks().map(|(p, _)| math::xlog2x(p)).sum::<f64>();
        let s_b_given_x: f64 = state.blocks().map(|(p, rho)| p * von_neumann_entropy(rho)).sum();
        return Ok(s_x + s_b_given_x - s_b);
    }
    let a = alpha.value();
    let mut x = HermitianMatrix::zeros(state.output_dim());
    for (p, rho) in state.blocks() {
        if p > 0.0 {
            x.add_scaled(math::pow(p, a), &rho.as_hermitian().power(a)?);
        }
    }
    Ok(a / (1.0 - a) * sibson_log_norm(&x, a)?)
}

/// Closed-form minimizer of `σ_B ↦ D_α(ρ_AB ‖ τ_A ⊗ σ_B)`:
/// the normalized `(tr_A[τ_A^{1−α} ρ_AB^α])^{1/α}`.
pub fn sibson_minimizer(
    rho_ab: &impl AsRef<HermitianMatrix>,
    tau_a: &impl AsRef<HermitianMatrix>,
    alpha: Alpha,
    dims: [usize; 2],
) -> Result<DensityMatrix> {
    let (rho_ab, tau_a) = (rho_ab.as_ref(), tau_a.as_ref());
    if tau_a.dim() != dims[0] {
        return Err(Error::DimensionError { expected: dims[0], found: tau_a.dim() });
    }
    let rho_a = rho_ab.partial_trace(&dims, &[0])?;
    if support_leak(&rho_a, tau_a)? > SUPPORT_CONDITION_CUTOFF {
        return Err(Error::InfiniteDivergence);
    }
    let alpha = alpha.require_positive()?;
    if alpha.is_one() {
        return DensityMatrix::normalized(rho_ab.partial_trace(&dims, &[1])?);
    }
    let a = alpha.value();
    // tr_A[(τ^{1−α} ⊗ 1) ρ^α] = tr_A[(τ^{(1−α)/2} ⊗ 1) ρ^α (τ^{(1−α)/2} ⊗ 1)]
    let half = tau_a.power((1.0 - a) / 2.0)?.tensor(&HermitianMatrix::identity(dims[1]));
    let x = half.sandwich(&rho_ab.power(a)?).partial_trace(&dims, &[1])?;
    DensityMatrix::normalized(x.power(1.0 / a)?)
}

/// `I_α(ρ_AB ‖ τ_A) = min_σ D_α(ρ_AB ‖ τ_A ⊗ σ_B)`, evaluated at the Sibson minimizer.
pub fn renyi_mutual_info_state(
    rho_ab: &impl AsRef<HermitianMatrix>,
    tau_a: &impl AsRef<HermitianMatrix>,
    alpha: Alpha,
    dims: [usize; 2],
) -> Result<DivergenceResult> {
    let sigma_b = match sibson_minimizer(rho_ab, tau_a, alpha, dims) {
        Ok(s) => s,
        Err(Error::InfiniteDivergence) => return Ok(DivergenceResult::INFINITE),
        Err(e) => return Err(e),
    };
    let reference = tau_a.as_ref().tensor(sigma_b.as_hermitian());
    petz_divergence(rho_ab, &reference, alpha)
}

/// Holevo information `χ(N, p) = S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`.
pub fn holevo_information(channel: &CQChannel, prior: &Prior) -> Result<f64> {
    PriorObjective::new(channel, Alpha::ONE)?.checked_value(prior)
}

/// `I_α(N, p) = α/(α−1) · log₂ tr[(Σ_x p_x ρ_x^α)^{1/α}]`; `α = 1` gives the Holevo information.
pub fn renyi_mi_channel_prior(channel: &CQChannel, prior: &Prior, alpha: Alpha) -> Result<f64> {
    PriorObjective::new(channel, alpha)?.checked_value(prior)
}

/// `p ↦ I_α(N, p)` with the letter powers `ρ_x^α` precomputed, plus its gradient.
#[derive(Debug, Clone)]
pub struct PriorObjective {
    alpha: Alpha,
    /// `ρ_x^α` for `α ≠ 1`, `ρ_x` otherwise.
    letters: Vec<HermitianMatrix>,
    /// `S(ρ_x)`; only used on the `α = 1` path.
    entropies: Vec<f64>,
}

impl PriorObjective {
    pub fn new(channel: &CQChannel, alpha: Alpha) -> Result<Self> {
        let alpha = alpha.require_positive()?;
        let (letters, entropies) = if alpha.is_one() {
            (
                channel.outputs().iter().map(|o| o.as_hermitian().clone()).collect(),
                channel.outputs().iter().map(von_neumann_entropy).collect(),
            )
        } else {
            let letters =
                channel.outputs().iter().map(|o| o.as_hermitian().power(alpha.value())).collect::<Result<Vec<_>>>()?;
            (letters, Vec::new())
        };
        Ok(Self { alpha, letters, entropies })
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    fn checked_value(&self, prior: &Prior) -> Result<f64> {
        if prior.len() != self.letters.len() {
            return Err(Error::DimensionError { expected: self.letters.len(), found: prior.len() });
        }
        self.value(prior.weights())
    }

    fn mixture(&self, p: &[f64]) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(self.letters[0].dim());
        for (w, m) in p.iter().zip(&self.letters) {
            if *w != 0.0 {
                acc.add_scaled(*w, m);
            }
        }
        acc
    }

    /// Objective value at weights `p` (assumed on the simplex).
    pub fn value(&self, p: &[f64]) -> Result<f64> {
        let mix = self.mixture(p);
        if self.alpha.is_one() {
            let s_mix: f64 = -mix.eigenvalues().into_iter().map(math::xlog2x).sum::<f64>();
            let s_cond: f64 = p.iter().zip(&self.entropies).map(|(w, s)| w * s).sum();
            return Ok(s_mix - s_cond);
        }
        let a = self.alpha.value();
        Ok(a / (a - 1.0) * sibson_log_norm(&mix, a)?)
    }

    /// Value and gradient `∂I/∂p_x` at `p`.
    ///
    /// For `α ≠ 1`: `∂I/∂p_x = tr[A^{(1−α)/α} ρ_x^α] / ((α−1) ln 2 · tr A^{1/α})` with
    /// `A = Σ p_x ρ_x^α`. For `α = 1`: `−tr[ρ_x log₂ ρ̄] − S(ρ_x) − 1/ln 2`.
    pub fn value_and_gradient(&self, p: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mix = self.mixture(p);
        if self.alpha.is_one() {
            let log_mix = mix.map_support(math::log2)?;
            let s_mix = -mix.trace_product(&log_mix);
            let s_cond: f64 = p.iter().zip(&self.entropies).map(|(w, s)| w * s).sum();
            let grad = self
                .letters
                .iter()
                .zip(&self.entropies)
                .map(|(rho, s)| -rho.trace_product(&log_mix) - s - 1.0 / math::LN_2)
                .collect();
            return Ok((s_mix - s_cond, grad));
        }
        let a = self.alpha.value();
        let norm = mix.map_support(|l| math::pow(l, 1.0 / a))?.trace();
        let kernel = mix.map_support(|l| math::pow(l, (1.0 - a) / a))?;
        let scale = 1.0 / ((a - 1.0) * math::LN_2 * norm);
        let grad = self.letters.iter().map(|m| kernel.trace_product(m) * scale).collect();
        Ok((a / (a - 1.0) * math::log2(norm), grad))
    }
}
