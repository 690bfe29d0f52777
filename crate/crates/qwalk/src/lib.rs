//! Exact desk-scale simulation of quantum random walks and their classical
//! counterparts: the coined discrete-time walk, the continuous-time walk
//! generated by the graph Laplacian, Markov-chain analysis, decoherence
//! channels interpolating between the two regimes, and the post-selected
//! displacement effect that motivated the model.

pub mod analysis;
pub mod classical;
pub mod coin;
pub mod ctqw;
pub mod decoherence;
pub mod dist;
pub mod dtqw;
pub mod error;
pub mod graph;
pub mod postselect;

pub use coin::{Coin, CoinKind};
pub use dist::{total_variation, Distribution};
pub use dtqw::{absorb_at, AbsorptionRecord, CoinAssignment, CoinedWalk, Register, WalkState};
pub use error::{Error, Result};
pub use graph::{BiasedChain, Family, LabeledGraph};
