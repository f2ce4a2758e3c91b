use crate::Complex64;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Basis vectors are collinear (or one of them is zero).
    #[error("degenerate basis: omega1 and omega2 are R-linearly dependent")]
    DegenerateBasis,
    /// Evaluation requested at (or indistinguishably close to) a lattice
    /// point where the function has a pole.
    #[error("pole: z = {0} lies on the lattice")]
    Pole(Complex64),
    /// Eisenstein exponent too small for absolute convergence.
    #[error("divergent sum: Eisenstein series needs 2n >= 4, got 2n = {0}")]
    DivergentSum(u32),
    /// Coefficient table does not extend far enough.
    #[error("coefficient table exhausted: r = {r} > max_r = {max_r}")]
    TableExhausted { r: u32, max_r: u32 },
    /// Unsupported parameter for a special-function evaluation.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(&'static str),
    /// A normalizing lattice sum is numerically indistinguishable from zero.
    #[error("degenerate normalization: |H_0| = {magnitude:e} below noise floor {floor:e}")]
    DegenerateNormalization { magnitude: f64, floor: f64 },
    /// A term overflowed or produced a non-finite value.
    #[error("non-finite term encountered in lattice sum")]
    NonFiniteTerm,
}
