//! Norm-behavior analysis for automated driving scenarios.
//!
//! The crate reads an ontology of traffic concepts, a catalog of Horn rules
//! linked to passages of legal sources, and scenes of functional scenarios.
//! Forward chaining over a scene yields the scenario-specific required
//! behavior together with a derivation trace for every inferred fact; the
//! verification harness compares that behavior with expert expectations and
//! sorts failures into rule faults, concept gaps and source gaps.
//!
//! Modules map onto the pipeline:
//!
//! * [`ontology`]: classes, properties, scenes, taxonomy closure, consistency
//! * [`rules`]: the rule language, vocabulary validation and lints
//! * [`engine`]: semi-naive and naive fixpoint evaluation, explanations
//! * [`provenance`]: sources, passages, assumptions and trace reports
//! * [`verify`]: expectations, verdicts and catalog reports
//! * [`project`] and [`cli`]: project configuration and the `nba` commands

pub mod cli;
pub mod engine;
pub mod fact;
pub mod ontology;
pub mod project;
pub mod provenance;
pub mod rules;
pub mod syntax;
pub mod verify;

pub use fact::{FactKind, GroundFact, Literal, LiteralKind, Value};
pub use syntax::ParseError;
