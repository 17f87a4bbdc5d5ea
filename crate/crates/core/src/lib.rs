//! Algorithmic building blocks for first-order model checking on nowhere
//! dense graph classes: fraternal augmentations, weak colouring orders,
//! sparse neighbourhood covers, the splitter game, distance independent
//! sets and a small FO⁺ layer with EF⁺ games.

pub mod augment;
pub mod cover;
pub mod fo;
pub mod graph;
pub mod indepset;
pub mod order;
pub mod splitter;

pub use graph::{ColoredGraph, DiGraph, Graph, GraphError};
