//! Classical-quantum channels, input priors and the block-diagonal CQ state they induce.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, HermitianMatrix};

/// Tolerance on prior normalization.
pub const PRIOR_TOLERANCE: f64 = 1e-10;

/// A finite-alphabet classical-quantum channel `x ↦ ρ_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CQChannel {
    alphabet: Vec<String>,
    outputs: Vec<DensityMatrix>,
}

impl CQChannel {
    pub fn new(alphabet: Vec<String>, outputs: Vec<DensityMatrix>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidChannel("alphabet must be non-empty"));
        }
        if alphabet.len() != outputs.len() {
            return Err(Error::InvalidChannel("alphabet and outputs differ in length"));
        }
        let d = outputs[0].dim();
        if let Some(bad) = outputs.iter().find(|o| o.dim() != d) {
            return Err(Error::DimensionError { expected: d, found: bad.dim() });
        }
        Ok(Self { alphabet, outputs })
    }

    /// Channel with labels `"0"`, `"1"`, ….
    pub fn from_outputs(outputs: Vec<DensityMatrix>) -> Result<Self> {
        let alphabet = (0..outputs.len()).map(|i| format!("{i}")).collect();
        Self::new(alphabet, outputs)
    }

    /// Classical channel from a row-stochastic matrix `W[x][y]`, embedded as diagonal states.
    pub fn from_stochastic_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let outputs = rows.iter().map(|r| DensityMatrix::diagonal(r)).collect::<Result<Vec<_>>>()?;
        Self::from_outputs(outputs)
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::from_stochastic_matrix(&[alloc::vec![1.0 - flip, flip], alloc::vec![flip, 1.0 - flip]])
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn output(&self, x: usize) -> &DensityMatrix {
        &self.outputs[x]
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    /// True when every output is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.outputs.iter().all(|o| o.as_hermitian().is_diagonal())
    }

    /// Product channel `(x, y) ↦ ρ_x ⊗ σ_y`, letters ordered `x * |Y| + y`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut alphabet = Vec::with_capacity(self.alphabet_size() * other.alphabet_size());
        let mut outputs = Vec::with_capacity(alphabet.capacity());
        for (a, rho) in self.alphabet.iter().zip(&self.outputs) {
            for (b, sigma) in other.alphabet.iter().zip(&other.outputs) {
                alphabet.push(format!("{a}{b}"));
                outputs.push(rho.tensor(sigma));
            }
        }
        Self { alphabet, outputs }
    }

    /// Output state of a letter sequence, `ρ_{x_1} ⊗ … ⊗ ρ_{x_n}`.
    pub fn sequence_state(&self, letters: &[usize]) -> HermitianMatrix {
        crate::operator::tensor_all(letters.iter().map(|&x| self.outputs[x].as_hermitian()))
    }
}

/// A probability distribution over the input alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior {
    weights: Vec<f64>,
}

impl Prior {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPrior("empty weight vector"));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPrior("weights must be finite and non-negative"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > PRIOR_TOLERANCE {
            return Err(Error::InvalidPrior("weights must sum to 1"));
        }
        Ok(Self { weights })
    }

    /// Rescales non-negative weights to sum to one.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidPrior("weights must have positive mass"));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Self::new(weights)
    }

    pub fn uniform(k: usize) -> Self {
        Self { weights: alloc::vec![1.0 / k as f64; k] }
    }

    pub fn point_mass(k: usize, a: usize) -> Self {
        let mut weights = alloc::vec![0.0; k];
        weights[a] = 1.0;
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn from_raw(weights: Vec<f64>) -> Self {
        Self { weights }
    }
}

/// `ρ_XB = Σ_x p_x |x⟩⟨x| ⊗ ρ_x`, stored block by block since `X` is classical.
#[derive(Debug, Clone)]
pub struct CQState {
    prior: Prior,
    blocks: Vec<DensityMatrix>,
}

impl CQState {
    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    /// `(p_x, ρ_x)` pairs.
    pub fn blocks(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.prior.weights.iter().copied().zip(self.blocks.iter())
    }

    pub fn alphabet_size(&self) -> usize {
        self.blocks.len()
    }

    pub fn output_dim(&self) -> usize {
        self.blocks[0].dim()
    }

    /// Subsystem dimensions `[|X|, d]` of the dense representation.
    pub fn dims(&self) -> [usize; 2] {
        [self.alphabet_size(), self.output_dim()]
    }

    /// Marginal on `B`: `Σ_x p_x ρ_x`.
    pub fn b_marginal(&self) -> DensityMatrix {
        let mut acc = HermitianMatrix::zeros(self.output_dim());
        for (p, rho) in self.blocks() {
            acc.add_scaled(p, rho.as_hermitian());
        }
        DensityMatrix::normalized(acc).expect("convex mixture of states is a state")
    }

    /// Dense block-diagonal matrix on `X ⊗ B`.
    pub fn to_matrix(&self) -> DensityMatrix {
        let k = self.alphabet_size();
        let d = self.output_dim();
        let mut m = DMatrix::from_element(k * d, k * d, Complex64::new(0.0, 0.0));
        for (x, (p, rho)) in self.blocks().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    m[(x * d + i, x * d + j)] = rho.as_hermitian().get(i, j) * p;
                }
            }
        }
        DensityMatrix::new(HermitianMatrix::hermitized(m)).expect("block-diagonal CQ state is a state")
    }
}

/// Assembles the CQ state of `channel` driven by `prior`.
pub fn cq_state(channel: &CQChannel, prior: &Prior) -> Result<CQState> {
    if prior.len() != channel.alphabet_size() {
        return Err(Error::DimensionError { expected: channel.alphabet_size(), found: prior.len() });
    }
    Ok(CQState { prior: prior.clone(), blocks: channel.outputs.clone() })
}
