use thiserror::Error;

use crate::analytic::ConvergenceCertificate;
use crate::padic::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least 1 digit, got {0}")]
    InvalidPrecision(u32),
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: all significant digits cancelled")]
    PrecisionExhausted,
    #[error("not a p-adic integer (valuation {0})")]
    NotIntegral(i64),

    #[error("unit law violated at c[{i}][{j}][{k}]")]
    UnitLaw { i: usize, j: usize, k: usize },
    #[error("structure constants not commutative at c[{i}][{j}][{k}]")]
    NonCommutative { i: usize, j: usize, k: usize },
    #[error("structure constants not associative at (i, j, k, r) = ({i}, {j}, {k}, {r})")]
    NonAssociative { i: usize, j: usize, k: usize, r: usize },
    #[error("ideal not nilpotent: basis element {basis} is not nilpotent")]
    NotNilpotent { basis: usize },
    #[error("ideal not closed: alpha_{i} * alpha_{j} has a nonzero unit component")]
    IdealNotClosed { i: usize, j: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not invertible (zero projection)")]
    NotInvertible,

    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("series centers or contexts differ")]
    CenterMismatch,
    #[error("series does not converge at the evaluation radius (witness degree {:?})", .0.witness_degree)]
    Convergence(Box<ConvergenceCertificate>),

    #[error("degenerate curve: discriminant vanishes at working precision")]
    DegenerateCurve,
    #[error("Weierstrass coefficient {0} is not integral")]
    NonIntegralCurve(&'static str),
    #[error("argument outside the formal-group domain (valuation {0:?}, need >= 1)")]
    OutsideFormalGroup(Valuation),
    #[error("truncation degree {0} too small")]
    InvalidDegree(u32),

    #[error("system coefficient is not integral")]
    NonIntegralSystem,
    #[error("point is not a solution: equation {equation} has residual valuation {valuation:?}")]
    NotASolution { equation: usize, valuation: Valuation },
    #[error("matrix is singular at working precision")]
    Singular,
    #[error("Jacobian is not a unit at the seed")]
    NonUnitJacobian,
    #[error("seed is not an approximate root: equation {equation} has residual valuation {valuation:?}")]
    NotApproximateRoot { equation: usize, valuation: Valuation },
    #[error("Newton iteration did not reach precision in {0} steps")]
    NoConvergence(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
