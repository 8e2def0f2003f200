//! Nevanlinna heights, incomplete and archimedean radicals, and abc
//! inequality checks for triples of meromorphic functions on the line
//! a + b + c = 0, together with the analogous exact test for integer
//! triples over Q.
//!
//! The toolkit has two halves:
//!
//! - **Function side.** Exact rational-function algebra over the Gaussian
//!   rationals ([`ratfun`], [`triple`]), root finding with exact
//!   multiplicities ([`roots`]), circle quadrature ([`quadrature`]) and the
//!   height/radical pipeline ([`nevanlinna`]): the Poisson–Jensen residual,
//!   heights, the incomplete radical, the archimedean radical
//!   built from the logarithmic-derivative coordinates, the inequality
//!   h <= r_na + r_arch for rho >= 1, the proximity function, and radius
//!   scans against the bound 2 log h + C log log h.
//! - **Number side.** Exact heights and radicals of integer abc triples,
//!   the Artin–Whaples product-formula residual, the psi(h) = 4 sqrt(h)
//!   test and exhaustive scans ([`ntabc`]).
//!
//! Everything upstream of evaluation is exact; floats appear only on the
//! integration circle and in reported values. Reports serialize to a stable
//! JSON/CSV schema ([`report`]).

pub mod config;
pub mod error;
pub mod gaussian;
pub mod nevanlinna;
pub mod ntabc;
pub mod parser;
pub mod poly;
pub mod quadrature;
pub mod ratfun;
pub mod report;
pub mod roots;
pub mod triple;

pub use config::NumericConfig;
pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use poly::Polynomial;
pub use ratfun::RationalFunction;
pub use triple::{FunctionModel, MeroTriple, MeromorphicOracle};
