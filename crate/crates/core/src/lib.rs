//! Exact solving and experiments for Maker-Breaker clique and tournament
//! games on graphs.

pub mod cli;
pub mod collections;
pub mod error;
pub mod experiments;
pub mod game;
pub mod graph;
pub mod solver;
pub mod strategies;
pub mod verify;

pub use error::{Error, Result};
