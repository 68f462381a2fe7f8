//! Verbalize RDF triple sets with prompt-driven text completion and score
//! the outputs with self-contained MT metrics.

pub mod corpus;
pub mod lang;
pub mod metrics;
pub mod postprocess;
pub mod promptgen;
