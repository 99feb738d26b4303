//! Desk-scale channel coding: random codebooks, pretty-good-measurement
//! decoding, and exact average error probabilities.
//!
//! All probabilities are exact traces; nothing is sampled except the codebooks.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::ChannelAnalyzer;
use crate::channel::{CQChannel, Prior};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::math;
use crate::operator::{HermitianMatrix, PSD_TOLERANCE, SUPPORT_CUTOFF};
use crate::types::{Sequence, TypeClass};

/// Commutators larger than this reject a channel as non-classical.
pub const COMMUTE_TOLERANCE: f64 = 1e-10;

/// Allowed `‖Σ Λ_m − 1‖` for a measurement.
pub const COMPLETENESS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum CodebookMode {
    /// Letters drawn independently from a prior.
    Iid(Prior),
    /// Codewords drawn uniformly from one type class.
    ConstantComposition(TypeClass),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeTag {
    Iid,
    ConstantComposition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    alphabet_size: usize,
    codewords: Vec<Sequence>,
}

impl Codebook {
    pub fn new(n: usize, alphabet_size: usize, codewords: Vec<Sequence>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::InvalidType("codebook must hold at least one codeword"));
        }
        for w in &codewords {
            if w.len() != n {
                return Err(Error::DimensionError { expected: n, found: w.len() });
            }
            if let Some(&letter) = w.letters().iter().find(|&&l| l >= alphabet_size) {
                return Err(Error::InvalidSequence { letter, alphabet_size });
            }
        }
        Ok(Self { n, alphabet_size, codewords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Sequence] {
        &self.codewords
    }

    /// `log₂ M / n` bits per channel use.
    pub fn rate(&self) -> f64 {
        math::log2(self.len() as f64) / self.n as f64
    }
}

/// A decoding measurement: PSD operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianMatrix>,
}

impl Povm {
    /// Validates dimensions, positivity and completeness (`1e-8` in operator norm).
    pub fn new(elements: Vec<HermitianMatrix>) -> Result<Self> {
        let first = elements.first().ok_or(Error::InvalidType("a POVM needs at least one element"))?;
        let dim = first.dim();
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionError { expected: dim, found: bad.dim() });
        }
        let povm = Self { elements };
        let min = povm.min_eigenvalue();
        if min < -PSD_TOLERANCE {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let deviation = povm.completeness_error();
        if deviation > COMPLETENESS_TOLERANCE {
            return Err(Error::InvalidOperator { deviation });
        }
        Ok(povm)
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Operator norm of `Σ Λ_m − 1`.
    pub fn completeness_error(&self) -> f64 {
        let mut sum = HermitianMatrix::identity(self.dim()).scale(-1.0);
        for e in &self.elements {
            sum.add_scaled(1.0, e);
        }
        sum.operator_norm()
    }

    /// Smallest eigenvalue over all elements.
    pub fn min_eigenvalue(&self) -> f64 {
        self.elements.iter().map(|e| e.min_eigenvalue()).fold(f64::INFINITY, f64::min)
    }
}

/// Exact error probabilities of one code.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub pe: f64,
    pub per_message: Vec<f64>,
    pub n: usize,
    pub m: usize,
}

/// `M = round(2^{n r})`, at least one.
pub fn codebook_size(n: usize, rate: f64) -> usize {
    (math::round(math::exp2(n as f64 * rate)) as usize).max(1)
}

/// RNG for one trial; the stream depends only on `(seed, n, trial, mode)`.
pub fn trial_rng(seed: u64, n: usize, trial: usize, mode: ModeTag) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = match mode {
        ModeTag::Iid => 0,
        ModeTag::ConstantComposition => 1,
    };
    rng.set_stream(((n as u64) << 40) ^ ((trial as u64) << 1) ^ tag);
    rng
}

/// Draws `m` codewords of length `n` from a seeded generator.
pub fn generate_codebook(
    alphabet_size: usize,
    n: usize,
    m: usize,
    mode: &CodebookMode,
    seed: u64,
    limits: &Limits,
) -> Result<Codebook> {
    generate_codebook_with(alphabet_size, n, m, mode, &mut ChaCha8Rng::seed_from_u64(seed), limits)
}

/// Draws `m` codewords of length `n`. Duplicates are allowed.
pub fn generate_codebook_with<R: Rng + ?Sized>(
    alphabet_size: usize,
    n: usize,
    m: usize,
    mode: &CodebookMode,
    rng: &mut R,
    limits: &Limits,
) -> Result<Codebook> {
    let letters = (n as u128).saturating_mul(m as u128);
    if letters > limits.max_enumeration {
        return Err(Error::TooLarge { what: "codebook", size: letters, cap: limits.max_enumeration });
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidType("codebook needs n ≥ 1 and M ≥ 1"));
    }
    let codewords = match mode {
        CodebookMode::Iid(prior) => {
            if prior.len() != alphabet_size {
                return Err(Error::DimensionError { expected: alphabet_size, found: prior.len() });
            }
            let w = prior.weights();
            let last = w.iter().rposition(|&p| p > 0.0).unwrap_or(0);
            (0..m)
                .map(|_| {
                    Sequence(
                        (0..n)
                            .map(|_| {
                                let u: f64 = rng.gen();
                                let mut acc = 0.0;
                                for (a, &p) in w.iter().enumerate() {
                                    acc += p;
                                    if u < acc && p > 0.0 {
                                        return a;
                                    }
                                }
                                last
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        CodebookMode::ConstantComposition(t) => {
            if t.n() != n || t.alphabet_size() != alphabet_size {
                return Err(Error::DimensionError { expected: n, found: t.n() });
            }
            let base: Vec<usize> =
                t.counts().iter().enumerate().flat_map(|(a, &c)| core::iter::repeat(a).take(c)).collect();
            (0..m)
                .map(|_| {
                    let mut w = base.clone();
                    w.shuffle(rng);
                    Sequence(w)
                })
                .collect()
        }
    };
    Codebook::new(n, alphabet_size, codewords)
}

fn check_codebook(channel: &CQChannel, codebook: &Codebook, limits: &Limits) -> Result<usize> {
    if codebook.alphabet_size() != channel.alphabet_size() {
        return Err(Error::DimensionError { expected: channel.alphabet_size(), found: codebook.alphabet_size() });
    }
    match channel.output_dim().checked_pow(codebook.n() as u32) {
        Some(dim) if dim <= limits.max_block_dim => Ok(dim),
        other => Err(Error::TooLarge {
            what: "n-fold output dimension",
            size: other.map_or(u128::MAX, |v| v as u128),
            cap: limits.max_block_dim as u128,
        }),
    }
}

fn codeword_states(channel: &CQChannel, codebook: &Codebook) -> Vec<HermitianMatrix> {
    codebook.codewords().iter().map(|w| channel.sequence_state(w.letters())).collect()
}

/// Pretty-good (square-root) measurement `Λ_m = S^{−1/2} ρ_m S^{−1/2}`, `S = Σ_m ρ_m`.
///
/// The projector onto `ker S` is added to the first element so the POVM is complete;
/// codeword states have no weight there, so error probabilities are unaffected.
pub fn pgm_decoder(channel: &CQChannel, codebook: &Codebook, limits: &Limits) -> Result<Povm> {
    let dim = check_codebook(channel, codebook, limits)?;
    if codebook.len() == 1 {
        return Ok(Povm { elements: vec![HermitianMatrix::identity(dim)] });
    }
    let states = codeword_states(channel, codebook);
    let mut total = HermitianMatrix::zeros(dim);
    for s in &states {
        total.add_scaled(1.0, s);
    }
    let inv_sqrt = total.power(-0.5)?;
    let mut elements: Vec<HermitianMatrix> = states.iter().map(|s| inv_sqrt.sandwich(s)).collect();
    let kernel = total.kernel_projector(SUPPORT_CUTOFF)?;
    elements[0].add_scaled(1.0, &kernel);
    Ok(Povm { elements })
}

/// `P_e = 1 − (1/M) Σ_m tr Λ_m ρ_m`, computed exactly.
pub fn average_error(channel: &CQChannel, codebook: &Codebook, povm: &Povm, limits: &Limits) -> Result<ErrorReport> {
    let dim = check_codebook(channel, codebook, limits)?;
    if povm.len() != codebook.len() {
        return Err(Error::DimensionError { expected: codebook.len(), found: povm.len() });
    }
    if povm.dim() != dim {
        return Err(Error::DimensionError { expected: dim, found: povm.dim() });
    }
    let per_message: Vec<f64> = codebook
        .codewords()
        .iter()
        .zip(povm.elements())
        .map(|(w, e)| (1.0 - e.trace_product(&channel.sequence_state(w.letters()))).clamp(0.0, 1.0))
        .collect();
    let pe = per_message.iter().sum::<f64>() / per_message.len() as f64;
    Ok(ErrorReport { pe, per_message, n: codebook.n(), m: codebook.len() })
}

/// Transition matrix `W[x][y]` of a channel whose outputs commute, in their common eigenbasis.
pub fn classical_transition(channel: &CQChannel) -> Result<Vec<Vec<f64>>> {
    if channel.is_diagonal() {
        return Ok(channel.outputs().iter().map(|o| o.as_hermitian().diagonal()).collect());
    }
    let outs: Vec<&HermitianMatrix> = channel.outputs().iter().map(|o| o.as_hermitian()).collect();
    for (i, a) in outs.iter().enumerate() {
        for b in &outs[i + 1..] {
            if a.commutator_norm(b) > COMMUTE_TOLERANCE {
                return Err(Error::NotClassical);
            }
        }
    }
    // A generic combination of commuting operators shares their eigenbasis.
    let mut combo = HermitianMatrix::zeros(channel.output_dim());
    for (x, o) in outs.iter().enumerate() {
        combo.add_scaled(1.0 + (x as f64 + 1.0) * core::f64::consts::FRAC_1_SQRT_2, o);
    }
    let basis = combo.eig().vectors;
    let adjoint = basis.adjoint();
    let mut w = Vec::with_capacity(outs.len());
    for o in outs {
        let rotated = &adjoint * o.matrix() * &basis;
        let d = rotated.nrows();
        for i in 0..d {
            for j in 0..d {
                if i != j && rotated[(i, j)].norm_sqr() > 1e-16 {
                    return Err(Error::NotClassical);
                }
            }
        }
        w.push((0..d).map(|i| rotated[(i, i)].re.max(0.0)).collect());
    }
    Ok(w)
}

fn ml_error_from_transition(w: &[Vec<f64>], codebook: &Codebook) -> f64 {
    let d = w[0].len();
    let n = codebook.n();
    let outputs = d.pow(n as u32);
    let mut digits = vec![0usize; n];
    let mut correct = 0.0;
    for y in 0..outputs {
        let mut rem = y;
        for i in (0..n).rev() {
            digits[i] = rem % d;
            rem /= d;
        }
        let best = codebook
            .codewords()
            .iter()
            .map(|c| c.letters().iter().zip(&digits).map(|(&x, &yy)| w[x][yy]).product::<f64>())
            .fold(0.0, f64::max);
        correct += best;
    }
    (1.0 - correct / codebook.len() as f64).clamp(0.0, 1.0)
}

/// Minimal average error (maximum-likelihood decoding) for a channel with commuting outputs.
pub fn ml_error_classical(channel: &CQChannel, codebook: &Codebook, limits: &Limits) -> Result<f64> {
    check_codebook(channel, codebook, limits)?;
    let w = classical_transition(channel)?;
    Ok(ml_error_from_transition(&w, codebook))
}

/// Codebook sources used at one blocklength.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub n: usize,
    pub m: usize,
    pub iid: CodebookMode,
    pub constant_composition: CodebookMode,
}

impl TrialPlan {
    /// IID at `prior`, constant composition at the type nearest to `prior`.
    pub fn new(n: usize, rate: f64, prior: &Prior) -> Result<Self> {
        Ok(Self {
            n,
            m: codebook_size(n, rate),
            iid: CodebookMode::Iid(prior.clone()),
            constant_composition: CodebookMode::ConstantComposition(TypeClass::nearest(prior, n)?),
        })
    }

    pub fn mode(&self, tag: ModeTag) -> &CodebookMode {
        match tag {
            ModeTag::Iid => &self.iid,
            ModeTag::ConstantComposition => &self.constant_composition,
        }
    }
}

/// Error probabilities of one random code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub mode: ModeTag,
    /// Exact error of the pretty-good measurement.
    pub pe: f64,
    /// Exact maximum-likelihood error, for commuting channels.
    pub ml_pe: Option<f64>,
}

/// Runs one trial: draws a codebook and evaluates it exactly.
pub fn simulate_trial(
    channel: &CQChannel,
    plan: &TrialPlan,
    mode: ModeTag,
    seed: u64,
    trial: usize,
    transition: Option<&[Vec<f64>]>,
    limits: &Limits,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, plan.n, trial, mode);
    let codebook = generate_codebook_with(channel.alphabet_size(), plan.n, plan.m, plan.mode(mode), &mut rng, limits)?;
    let povm = pgm_decoder(channel, &codebook, limits)?;
    let report = average_error(channel, &codebook, &povm, limits)?;
    let ml_pe = transition.map(|w| ml_error_from_transition(w, &codebook));
    Ok(TrialOutcome { trial, mode, pe: report.pe, ml_pe })
}

/// Best-of-trials statistics at one blocklength.
#[derive(Debug, Clone, PartialEq)]
pub struct BlocklengthSummary {
    pub n: usize,
    pub m: usize,
    pub best_pe: f64,
    pub mean_pe: f64,
    /// `−log₂(best_pe)/n`; `+∞` when the best code is error-free.
    pub implied_exponent: f64,
    pub trials: Vec<TrialOutcome>,
}

/// Folds trial outcomes (in the given order) into a summary.
pub fn summarize(n: usize, m: usize, trials: Vec<TrialOutcome>) -> BlocklengthSummary {
    let best_pe = trials.iter().map(|t| t.pe).fold(f64::INFINITY, f64::min);
    let mean_pe = trials.iter().map(|t| t.pe).sum::<f64>() / trials.len() as f64;
    let implied_exponent = if best_pe > 0.0 { -math::log2(best_pe) / n as f64 } else { f64::INFINITY };
    BlocklengthSummary { n, m, best_pe, mean_pe, implied_exponent, trials }
}

/// Prior used for random codes at rate `r`: the maximizer of `I_α(N, ·)` at the
/// α attaining the achievability bound.
pub fn simulation_prior(analyzer: &mut ChannelAnalyzer<'_>, rate: f64) -> Result<Prior> {
    let alpha = analyzer.error_exponent_lower(rate)?.alpha;
    Ok(analyzer.renyi_mi_channel(alpha)?.arg_prior)
}

/// Runs `trials` random codes per mode at each blocklength and reports the best exact error.
pub fn estimate_exponent(
    analyzer: &mut ChannelAnalyzer<'_>,
    rate: f64,
    blocklengths: &[usize],
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<BlocklengthSummary>> {
    if trials == 0 {
        return Err(Error::InvalidType("at least one trial is required"));
    }
    let prior = simulation_prior(analyzer, rate)?;
    let channel = analyzer.channel();
    let transition = classical_transition(channel).ok();
    let mut out = Vec::with_capacity(blocklengths.len());
    for &n in blocklengths {
        let plan = TrialPlan::new(n, rate, &prior)?;
        let mut outcomes = Vec::with_capacity(2 * trials);
        for trial in 0..trials {
            for mode in [ModeTag::Iid, ModeTag::ConstantComposition] {
                outcomes.push(simulate_trial(channel, &plan, mode, seed, trial, transition.as_deref(), limits)?);
            }
        }
        out.push(summarize(n, plan.m, outcomes));
    }
    Ok(out)
}
