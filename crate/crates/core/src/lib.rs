//! Quantifier elimination by the ε-definitions `∃x.A → A{x ↦ εx.A}` and
//! `∀x.A → A{x ↦ εx.¬A}`, together with tooling to check that the rewrite
//! system is confluent and strongly normalizing.

pub mod ars;
pub mod check;
pub mod exec;
pub mod gen;
pub mod rewrite;
pub mod strategy;
pub mod subst;
pub mod syntax;
pub mod textio;
