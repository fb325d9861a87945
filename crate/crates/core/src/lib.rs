//! Decision procedures for cobordism and concordance of surfaces in
//! 4-manifolds, together with the double-point diagram calculus used to
//! certify almost-extendability.

pub mod homology;
pub mod decide;
pub mod diagrams;
pub mod framing;
pub mod json;
pub mod surfaces;
