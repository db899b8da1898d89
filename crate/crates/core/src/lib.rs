//! p-adic arithmetic and Weil-algebra jet calculus.
//!
//! Layers, bottom up: [`padic`] (capped relative-precision Q_p), [`weil`]
//! (Weil algebras by structure constants), [`analytic`] (truncated power
//! series and the lifting functor), [`mahler`], [`bundle`] (chart-level
//! Weil bundles), [`elliptic`] (formal group laws on dual-number jets) and
//! [`diophantine`] (tangent spaces and Hensel lifting).

pub mod analytic;
pub mod bundle;
pub mod diophantine;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mahler;
pub mod padic;
pub mod scalar;
pub mod weil;

pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber, Valuation};
pub use scalar::Scalar;

pub type PadicAlgebra = std::sync::Arc<weil::WeilAlgebra<PadicNumber>>;
pub type PadicElement = weil::WeilElement<PadicNumber>;
pub type PadicSeries = analytic::PowerSeries<PadicNumber>;
pub type RationalSeries = analytic::PowerSeries<num_rational::BigRational>;
