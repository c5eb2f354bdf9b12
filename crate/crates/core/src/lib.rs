//! Distance and beer-distance queries on weighted graphs with a set of
//! beer vertices, answered from precomputed tables over an SPQR tree or a
//! supplied tree decomposition.
//!
//! ```
//! use beerpath::{Edge, IntGraph, IntTriIndex, Strategy};
//!
//! // a 4-cycle 1-2-3-4 with a beer vertex at 3 (0-based: 2)
//! let edges = vec![
//!     Edge::undirected(0, 1, 1),
//!     Edge::undirected(1, 2, 1),
//!     Edge::undirected(2, 3, 1),
//!     Edge::undirected(3, 0, 1),
//! ];
//! let g = IntGraph::new(4, edges, &[2], false).unwrap();
//! let idx = IntTriIndex::build(g, Strategy::F1234R).unwrap();
//! let d = idx.query(0, 1).unwrap();
//! assert_eq!(d.dist.finite(), Some(1));
//! assert_eq!(d.beer.finite(), Some(3));
//! ```

pub mod algebra;
pub mod bench;
mod connectivity;
pub mod gen;
pub mod graph;
pub mod persist;
pub mod shortest;
pub mod spqr;
pub mod structures;
pub mod td;
pub mod tri;
pub mod weight;

pub use graph::{BeerGraph, Edge, GraphError};
pub use shortest::{oracle_dist_pair, Oracle};
pub use spqr::{SpqrError, SpqrTree};
pub use td::{TdError, TdIndex, TreeDecomposition};
pub use tri::{QueryError, QueryStats, Strategy, TriIndex};
pub use weight::{DistPair, Scalar, Weight};

pub type IntGraph = BeerGraph<i64>;
pub type RealGraph = BeerGraph<f64>;
pub type IntTriIndex = TriIndex<i64>;
pub type RealTriIndex = TriIndex<f64>;
pub type IntTdIndex = TdIndex<i64>;
pub type RealTdIndex = TdIndex<f64>;
