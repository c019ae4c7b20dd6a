//! Grounded-Laplacian eigenfunctions on weighted graphs and the descent
//! paths they induce, symmetry quotients, three families of graphs on
//! which those paths stretch without bound, and spread paths, which never
//! stretch.
//!
//! ```
//! use specpath::{families::gen_weighted_cycle, spectral_path};
//!
//! let g = gen_weighted_cycle(5, 2).unwrap();
//! let from = g.find_vertex("x_4_1").unwrap();
//! let to = g.find_vertex("u").unwrap();
//! let p = spectral_path(&g, from, to).unwrap();
//! assert!(p.length >= p.endpoint_distance);
//! ```

pub mod eigen;
mod error;
pub mod experiments;
pub mod families;
mod graph;
pub mod io;
mod path;
pub mod quotient;
pub mod spectral;
pub mod spread;

pub use error::{Connectivity, Error, Result};
pub use families::{Connector, Family, FamilyParams};
pub use graph::{Edge, WeightedGraph};
pub use path::PathRecord;
pub use quotient::{Partition, QuotientGraph};
pub use spectral::{
    grounded_eigenfunction, spectral_path, spectral_tree, symmetric_spectral_path, PotentialFunction, PotentialKind,
    SpectralTree,
};
pub use spread::{spread_function, spread_path, SpreadSolution};
