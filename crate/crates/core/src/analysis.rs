//! Channel-level quantities: Rényi information and capacity, the two exponent
//! bounds, the critical rate, the reliability function, and the Rényi
//! information of constant-composition inputs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::channel::CQChannel;
use crate::config::{AlphaRanges, AnalysisConfig, Limits};
use crate::divergence::{Alpha, PriorObjective};
use crate::error::{Error, Result};
use crate::math;
use crate::operator::{von_neumann_entropy, HermitianMatrix};
use crate::optimize::{maximize_prior, OptimizationReport};
use crate::types::{enumerate_types, TypeClass};

/// Rates at or above `r_c − RATE_SLACK` count as "at or above the critical rate".
pub const RATE_SLACK: f64 = 1e-9;

/// Bounds above the critical rate must agree to this tolerance.
pub const EXACT_TOLERANCE: f64 = 1e-7;

/// A supremum over α together with its maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub alpha: f64,
    /// The maximizer sits on the lowest admissible α; the true supremum may be larger.
    pub saturated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReliabilityKind {
    /// The bounds coincide and determine `E(r)`.
    Exact,
    /// Only `lower ≤ E(r) ≤ upper` is known.
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reliability {
    pub kind: ReliabilityKind,
    pub lower: BoundValue,
    pub upper: BoundValue,
}

impl Reliability {
    /// `E(r)` when it is determined.
    pub fn exact_value(&self) -> Option<f64> {
        match self.kind {
            ReliabilityKind::Exact => Some(self.lower.value),
            ReliabilityKind::Interval => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Exact,
    Interval,
    AboveCapacity,
}

/// One rate of an [`ExponentCurve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRow {
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub status: RowStatus,
    pub saturated: bool,
}

impl ExponentRow {
    /// Whether the two bounds coincide (above capacity both are zero).
    pub fn equal(&self) -> bool {
        matches!(self.status, RowStatus::Exact | RowStatus::AboveCapacity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentCurve {
    pub rows: Vec<ExponentRow>,
    pub capacity: f64,
    pub critical_rate: f64,
}

/// Caches `I_α(N)` per α so that sweeps over rates share prior optimizations.
#[derive(Debug, Clone)]
pub struct ChannelAnalyzer<'a> {
    channel: &'a CQChannel,
    config: AnalysisConfig,
    cache: BTreeMap<u64, OptimizationReport>,
    critical: Option<f64>,
}

impl<'a> ChannelAnalyzer<'a> {
    pub fn new(channel: &'a CQChannel, config: AnalysisConfig) -> Result<Self> {
        let k = channel.alphabet_size();
        if k > config.max_alphabet {
            return Err(Error::TooLarge { what: "alphabet", size: k as u128, cap: config.max_alphabet as u128 });
        }
        Ok(Self { channel, config, cache: BTreeMap::new(), critical: None })
    }

    pub fn channel(&self) -> &'a CQChannel {
        self.channel
    }

    pub fn config(&self) -> &AnalysisConfig {
        &self.config
    }

    /// `I_α(N) = max_p I_α(N, p)` for `α ∈ (0, 1]`.
    pub fn renyi_mi_channel(&mut self, alpha: f64) -> Result<OptimizationReport> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if let Some(hit) = self.cache.get(&alpha.to_bits()) {
            return Ok(hit.clone());
        }
        let objective = PriorObjective::new(self.channel, Alpha::new(alpha)?)?;
        let report = maximize_prior(&objective, &self.config)?;
        self.cache.insert(alpha.to_bits(), report.clone());
        Ok(report)
    }

    /// Holevo capacity `C(N) = max_p χ(N, p)`.
    pub fn holevo_capacity(&mut self) -> Result<OptimizationReport> {
        self.renyi_mi_channel(1.0)
    }

    pub fn capacity(&mut self) -> Result<f64> {
        Ok(self.holevo_capacity()?.value)
    }

    /// `(1−α)/α · (I_α(N) − r)`.
    pub fn exponent_objective(&mut self, alpha: f64, r: f64) -> Result<f64> {
        if alpha == 1.0 {
            return Ok(0.0);
        }
        let info = self.renyi_mi_channel(alpha)?.value;
        Ok((1.0 - alpha) / alpha * (info - r))
    }

    fn alpha_grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let m = self.config.alpha_grid_points.max(2);
        (0..m).map(|i| if i + 1 == m { hi } else { lo + (hi - lo) * i as f64 / (m - 1) as f64 }).collect()
    }

    /// Supremum of the objective over `α ∈ [lo, hi]`: grid scan, then
    /// golden-section refinement around the best grid point.
    fn sup_over_alpha(&mut self, r: f64, lo: f64, hi: f64) -> Result<BoundValue> {
        let grid = self.alpha_grid(lo, hi);
        let m = grid.len();
        let mut best_i = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, &a) in grid.iter().enumerate() {
            let v = self.exponent_objective(a, r)?;
            if v > best_v {
                best_v = v;
                best_i = i;
            }
        }
        let mut best = (grid[best_i], best_v);

        let (mut a, mut b) = (grid[best_i.saturating_sub(1)], grid[(best_i + 1).min(m - 1)]);
        let inv_phi = (math::sqrt(5.0) - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.exponent_objective(c, r)?;
        let mut fd = self.exponent_objective(d, r)?;
        while b - a > self.config.alpha_tolerance {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.exponent_objective(c, r)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.exponent_objective(d, r)?;
            }
        }
        for (x, v) in [(c, fc), (d, fd)] {
            if v > best.1 {
                best = (x, v);
            }
        }
        let saturated = best.0 <= lo + self.config.alpha_tolerance && lo < 0.5;
        Ok(BoundValue { value: best.1, alpha: best.0, saturated })
    }

    fn check_rate(r: f64) -> Result<()> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidRate(r));
        }
        Ok(())
    }

    fn lower_range(&self) -> (f64, f64) {
        match self.config.ranges {
            AlphaRanges::Standard => (0.5, 1.0),
            AlphaRanges::Swapped => (self.config.alpha_min, 1.0),
        }
    }

    fn upper_range(&self) -> (f64, f64) {
        match self.config.ranges {
            AlphaRanges::Standard => (self.config.alpha_min, 1.0),
            AlphaRanges::Swapped => (0.5, 1.0),
        }
    }

    /// Random-coding (achievability) bound: sup over the lower α-range.
    pub fn error_exponent_lower(&mut self, r: f64) -> Result<BoundValue> {
        Self::check_rate(r)?;
        let (lo, hi) = self.lower_range();
        self.sup_over_alpha(r, lo, hi)
    }

    /// Sphere-packing bound: sup over the upper α-range.
    pub fn sphere_packing_upper(&mut self, r: f64) -> Result<BoundValue> {
        Self::check_rate(r)?;
        let (lo, hi) = self.upper_range();
        let mut upper = self.sup_over_alpha(r, lo, hi)?;
        if self.config.ranges == AlphaRanges::Standard {
            // The achievability range is a subset of this one.
            let lower = self.error_exponent_lower(r)?;
            if lower.value >= upper.value {
                upper = lower;
            }
        }
        Ok(upper)
    }

    /// `r_c = d/ds [s · I_{1/(1+s)}(N)]` at `s = 1`, by central differences with a
    /// Richardson consistency check.
    pub fn critical_rate(&mut self) -> Result<f64> {
        if let Some(rc) = self.critical {
            return Ok(rc);
        }
        let h = self.config.critical_rate_step;
        let mut g = |s: f64| -> Result<f64> { Ok(s * self.renyi_mi_channel(1.0 / (1.0 + s))?.value) };
        let d_h = (g(1.0 + h)? - g(1.0 - h)?) / (2.0 * h);
        let d_half = (g(1.0 + h / 2.0)? - g(1.0 - h / 2.0)?) / h;
        if (d_h - d_half).abs() > self.config.richardson_tolerance {
            return Err(Error::NumericalInstability("critical-rate finite differences disagree"));
        }
        self.critical = Some(d_h);
        Ok(d_h)
    }

    /// Reliability function at `0 < r < C`: exact above the critical rate, an interval below.
    pub fn reliability_function(&mut self, r: f64) -> Result<Reliability> {
        if !(r > 0.0) {
            return Err(Error::InvalidRate(r));
        }
        let capacity = self.capacity()?;
        if r >= capacity {
            return Err(Error::RateAboveCapacity { rate: r, capacity });
        }
        let rc = self.critical_rate()?;
        let lower = self.error_exponent_lower(r)?;
        let upper = self.sphere_packing_upper(r)?;
        if r >= rc - RATE_SLACK {
            if (upper.value - lower.value).abs() > EXACT_TOLERANCE {
                return Err(Error::NumericalInstability("bounds disagree above the critical rate"));
            }
            return Ok(Reliability { kind: ReliabilityKind::Exact, lower, upper });
        }
        Ok(Reliability { kind: ReliabilityKind::Interval, lower, upper })
    }

    /// Bounds at one rate. Rates at or above capacity get zero bounds and
    /// [`RowStatus::AboveCapacity`].
    pub fn exponent_row(&mut self, rate: f64) -> Result<ExponentRow> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidRate(rate));
        }
        if rate >= self.capacity()? {
            return Ok(ExponentRow {
                rate,
                lower: 0.0,
                upper: 0.0,
                alpha_lower: 1.0,
                alpha_upper: 1.0,
                status: RowStatus::AboveCapacity,
                saturated: false,
            });
        }
        let rel = self.reliability_function(rate)?;
        Ok(ExponentRow {
            rate,
            lower: rel.lower.value,
            upper: rel.upper.value,
            alpha_lower: rel.lower.alpha,
            alpha_upper: rel.upper.alpha,
            status: match rel.kind {
                ReliabilityKind::Exact => RowStatus::Exact,
                ReliabilityKind::Interval => RowStatus::Interval,
            },
            saturated: rel.upper.saturated,
        })
    }

    /// Bounds on a strictly increasing grid of positive rates.
    pub fn exponent_curve(&mut self, rates: &[f64]) -> Result<ExponentCurve> {
        if rates.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || rates.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid);
        }
        let capacity = self.capacity()?;
        let critical_rate = self.critical_rate()?;
        let rows = rates.iter().map(|&r| self.exponent_row(r)).collect::<Result<Vec<_>>>()?;
        Ok(ExponentCurve { rows, capacity, critical_rate })
    }

    /// Fills the cache with capacity, the critical rate and every α-grid point, so
    /// clones can evaluate rows independently without repeating that work.
    pub fn warm_up(&mut self) -> Result<()> {
        self.capacity()?;
        self.critical_rate()?;
        for (lo, hi) in [self.lower_range(), self.upper_range()] {
            for a in self.alpha_grid(lo, hi) {
                if a < 1.0 {
                    self.renyi_mi_channel(a)?;
                }
            }
        }
        Ok(())
    }
}

fn check_block_dim(d: usize, n: usize, limits: &Limits) -> Result<usize> {
    match d.checked_pow(n as u32) {
        Some(dim) if dim <= limits.max_block_dim => Ok(dim),
        other => Err(Error::TooLarge {
            what: "n-fold output dimension",
            size: other.map_or(u128::MAX, |v| v as u128),
            cap: limits.max_block_dim as u128,
        }),
    }
}

/// `Σ_{x^n ∈ T} ⊗_i letters[x_i]`, built by peeling off the first letter and memoizing on counts.
fn type_class_sum(letters: &[HermitianMatrix], counts: &[usize]) -> HermitianMatrix {
    fn rec(
        letters: &[HermitianMatrix],
        counts: &mut Vec<usize>,
        memo: &mut BTreeMap<Vec<usize>, HermitianMatrix>,
    ) -> HermitianMatrix {
        if let Some(hit) = memo.get(counts) {
            return hit.clone();
        }
        let result = if counts.iter().all(|&c| c == 0) {
            HermitianMatrix::identity(1)
        } else {
            let mut acc: Option<HermitianMatrix> = None;
            for a in 0..counts.len() {
                if counts[a] == 0 {
                    continue;
                }
                counts[a] -= 1;
                let tail = rec(letters, counts, memo);
                counts[a] += 1;
                let term = letters[a].tensor(&tail);
                acc = Some(match acc {
                    Some(s) => s.add(&term),
                    None => term,
                });
            }
            acc.expect("non-empty type")
        };
        memo.insert(counts.clone(), result.clone());
        result
    }
    rec(letters, &mut counts.to_vec(), &mut BTreeMap::new())
}

/// Per-use Rényi information of the uniform input over one type class:
/// `(1/n) · I_α(N^{⊗n}, uniform on T_n^t)`.
pub fn constant_composition_mi(channel: &CQChannel, t: &TypeClass, alpha: Alpha, limits: &Limits) -> Result<f64> {
    if t.alphabet_size() != channel.alphabet_size() {
        return Err(Error::DimensionError { expected: channel.alphabet_size(), found: t.alphabet_size() });
    }
    if !(alpha.value() > 0.0) {
        return Err(Error::InvalidAlpha(alpha.value()));
    }
    let n = t.n();
    check_block_dim(channel.output_dim(), n, limits)?;
    let size = t.class_size_f64();
    if alpha.is_one() {
        let letters: Vec<HermitianMatrix> = channel.outputs().iter().map(|o| o.as_hermitian().clone()).collect();
        let avg = type_class_sum(&letters, t.counts()).scale(1.0 / size);
        let s_avg: f64 = -avg.eigenvalues().into_iter().map(math::xlog2x).sum::<f64>();
        let s_cond: f64 =
            t.counts().iter().zip(channel.outputs()).map(|(&c, o)| c as f64 * von_neumann_entropy(o)).sum();
        return Ok((s_avg - s_cond) / n as f64);
    }
    let a = alpha.value();
    let letters = channel.outputs().iter().map(|o| o.as_hermitian().power(a)).collect::<Result<Vec<_>>>()?;
    let avg = type_class_sum(&letters, t.counts()).scale(1.0 / size);
    let norm = avg.map_support(|l| math::pow(l, 1.0 / a))?.trace();
    Ok(a / (a - 1.0) * math::log2(norm) / n as f64)
}

/// The type maximizing [`constant_composition_mi`] at blocklength `n`
/// (first in enumeration order on ties).
pub fn best_type(channel: &CQChannel, n: usize, alpha: Alpha, limits: &Limits) -> Result<(TypeClass, f64)> {
    check_block_dim(channel.output_dim(), n, limits)?;
    let mut best: Option<(TypeClass, f64)> = None;
    for t in enumerate_types(n, channel.alphabet_size(), limits)? {
        let v = constant_composition_mi(channel, &t, alpha, limits)?;
        if best.as_ref().map_or(true, |(_, bv)| v > *bv) {
            best = Some((t, v));
        }
    }
    best.ok_or(Error::InvalidType("blocklength must be positive"))
}
