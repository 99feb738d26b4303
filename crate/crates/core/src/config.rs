/// Which α-ranges the two exponent bounds are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaRanges {
    /// Achievability over `α ∈ [1/2, 1]`, sphere packing over `α ∈ [α_min, 1]`.
    #[default]
    Standard,
    /// The swapped assignment: lower bound over `[α_min, 1]`, upper over `[1/2, 1]`.
    Swapped,
}

/// Numerical settings for channel-level optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Multistarts per prior optimization (uniform, vertices, then random).
    pub multistarts: usize,
    pub max_iterations: usize,
    /// Stop once the simplex stationarity measure falls below this.
    pub gradient_tolerance: f64,
    /// A run counts as converged when its final stationarity is below this.
    pub converged_tolerance: f64,
    /// Grid step of the certificate search for small alphabets.
    pub certificate_step: f64,
    pub certificate_max_alphabet: usize,
    pub alpha_grid_points: usize,
    pub alpha_tolerance: f64,
    /// Lower α endpoint of the sphere-packing search.
    pub alpha_min: f64,
    pub critical_rate_step: f64,
    pub richardson_tolerance: f64,
    pub max_alphabet: usize,
    pub seed: u64,
    pub ranges: AlphaRanges,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            multistarts: 16,
            max_iterations: 10_000,
            gradient_tolerance: 1e-9,
            converged_tolerance: 1e-6,
            certificate_step: 0.02,
            certificate_max_alphabet: 3,
            alpha_grid_points: 64,
            alpha_tolerance: 1e-10,
            alpha_min: 0.01,
            critical_rate_step: 1e-4,
            richardson_tolerance: 1e-5,
            max_alphabet: 8,
            seed: 0,
            ranges: AlphaRanges::Standard,
        }
    }
}

/// Resource caps for constructions on `n` channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest dense dimension `d^n` of an n-fold output operator.
    pub max_block_dim: usize,
    /// Largest number of types or sequences an enumeration may produce.
    pub max_enumeration: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_block_dim: 256, max_enumeration: 1_000_000 }
    }
}
