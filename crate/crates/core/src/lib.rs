//! Structural extinction analysis for discrete-state chemical reaction
//! networks.
//!
//! A network is expanded with domination edges, and unbalanced exterior
//! forests of the expansion certify that every complex outside an absorbing
//! set is eventually switched off. Every verdict carries exact certificates
//! that can be re-checked without trusting the search, and [`oracle`]
//! explores the state space directly to cross-check verdicts on small inputs.

pub mod domination;
pub mod engine;
pub mod forest;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod scc;

pub use domination::{DomCrn, DominationEdge};
pub use graph::{EdgeLabel, Partition, ReactionGraph};
pub use lp::{FarkasCertificate, Feasibility, LinearSystem, Q};
pub use model::{Complex, ModelError, Reaction, ReactionNetwork, Species, State, StoichMatrix};
