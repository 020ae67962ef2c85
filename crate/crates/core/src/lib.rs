//! Universal graphs, Zielonka trees and memory bounds for infinite-duration games.
//!
//! The crate is organised bottom-up:
//! [`graph`] holds colored graphs and morphisms, [`order`] partial orders and
//! chain decompositions, [`objective`] winning conditions with lasso semantics,
//! [`zielonka`] Zielonka trees, [`universal`] the universal-graph constructions
//! and [`game`] solvers, strategies and the brute-force memory search.

pub mod error;
pub mod game;
pub mod graph;
pub mod io;
pub mod objective;
pub mod order;
pub mod parity;
pub mod random;
pub mod report;
pub mod memsearch;
pub mod solve;
pub mod universal;
pub mod zielonka;

mod scc;

pub use error::{Error, Result};
pub use graph::{Color, ColoredGraph, GraphBuilder, GraphKind, Owner, RootedTree, VertexMap};
pub use objective::{LassoWord, Objective};
pub use order::{ChromaticTag, EpsSeparatedGraph, OrderedGraph};
pub use zielonka::ZielonkaTree;

