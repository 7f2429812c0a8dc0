//! Web/foam calculus for gl(2) link homology.
//!
//! The crate is organized around a single exact oracle: the evaluation of
//! closed foams to elements of `Z[h,t]` ([`foam::evaluate`]). Everything else
//! — the planar calculus of completed webs ([`planar`]), the signed
//! diagrammatic TQFT ([`moves`]), web algebras ([`algebra`]), platform
//! subquotients ([`extended`]) and the cube-of-resolutions tangle homology
//! ([`bracket`]) — is checked against that oracle through the combinatorial
//! foam assembler ([`assembler`]).

pub mod coefficients;
pub mod foam;
pub mod planar;

pub use coefficients::{GroundElem, LaurentQ, Specialization};
pub use foam::{ClosedFoamData, evaluate};
