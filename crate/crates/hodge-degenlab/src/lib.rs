//! Degeneration laboratory.  Builds instance corpora and classifies
//! one-parameter monomial paths into the boundary, at the three levels
//! of identification the library knows about (face plus orbit, ratio
//! chain, valuative refinement), together with numeric traces along
//! the way.

pub mod corpus;
pub mod degen;
