//! May-must argumentation frameworks: arguments carry nuance tuples that say
//! how many rejected attackers allow or force acceptance and how many
//! accepted attackers allow or force rejection.
//!
//! The crate enumerates exact and maximally proper labellings, builds the
//! maxi semantics family on top of them, solves depth by depth over strongly
//! connected components, evaluates the consensus-operator semantics, and
//! embeds classical Dung frameworks.

pub mod adf;
pub mod check;
pub mod designation;
pub mod dung;
pub mod error;
pub mod framework;
pub mod generate;
pub mod io;
pub mod scc;
pub mod semantics;
pub mod solver;

pub use error::{Error, Result};
pub use framework::{
    build_framework, compose, labelling_leq, labelling_meet, restrict, Fraction, Framework, Label,
    Labelling, NuanceTuple, RatioPreset,
};
pub use semantics::{Engine, Search, SemanticsName, SemanticsResult};
pub use solver::solve;
