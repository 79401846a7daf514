//! Exact magnitude homology and cohomology of finite quasimetric spaces and
//! digraphs.
//!
//! Two independent pipelines are provided:
//!
//! * [`chain`] builds the normalized magnitude chain and cochain complexes
//!   grade by grade and reads off homology with [`linalg`].
//! * [`algebra`] builds the distance algebra, the bar resolutions of its
//!   semisimple quotient `S`, and computes bigraded Tor and Ext.
//!
//! [`ring`] adds the cup product and the Yoneda product on magnitude
//! cohomology, [`distmod`] the coefficient modules, and [`cli`] the
//! command-line driver used by the `maghom` binary.

pub mod algebra;
pub mod chain;
pub mod cli;
pub mod distmod;
pub mod error;
pub mod io;
pub mod linalg;
pub mod ring;
pub mod space;
pub mod suite;

pub use error::{Error, Result};
pub use linalg::{Field, FieldKind, Homology, HomologySummary, PrimeField, Rationals, SparseIntMatrix};
pub use space::{between, digraph_to_space, validate_space, Digraph, ExtDist, Grade, QuasimetricSpace};
