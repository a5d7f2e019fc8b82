//! One-dimensional two-state quantum walks.
//!
//! Walks are stored in the standard gauge ([`walk`]), realized as banded
//! matrices on finite windows ([`window`]), reduced to canonical forms by
//! explicit gauge transformations ([`canonical`]), compared for unitary
//! equivalence ([`equivalence`]) and evolved ([`evolve`]).

pub mod canonical;
pub mod equivalence;
pub mod error;
pub mod evolve;
pub mod gauge;
pub mod phase;
pub mod tolerance;
pub mod walk;
pub mod window;

pub use error::{Result, WalkError};
pub use phase::Phase;
pub use tolerance::Tolerances;
pub use walk::{coeffs_from_vectors, C2Vector, CoeffSite, SiteVectors, VectorWalkSpec, WalkSpec};
pub use window::{build_window_operator, check_unitary, WindowOperator};
