//! Exact computations with jets of formal diffeomorphisms and formal vector
//! fields over the cyclotomic field Q(z8), together with the finite and
//! semidirect groups used to exhibit solvable groups of prescribed derived length.

pub mod cli;
pub mod coeff;
pub mod diffeo;
pub mod error;
pub mod examples;
pub mod jetrep;
pub mod json;
pub mod linalg;
pub mod matgroup;
pub mod render;
pub mod series;
pub mod vfield;

pub use coeff::CycRational;
pub use diffeo::JetDiffeo;
pub use error::{Error, Result};
pub use jetrep::JetOperator;
pub use linalg::Matrix;
pub use series::{Monomial, TruncSeries};
pub use vfield::JetVectorField;
