//! Exact models of homogeneous spaces `G/K` of compact Lie groups, with
//! certificates for formality and equivariant formality of the isotropy action.

pub mod cartanmodel;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod exactpoly;
pub mod groebner;
pub mod liegroups;
pub mod linalg;
pub mod space;

pub use error::{Error, Result};
pub use space::{check_space, oracle_space, BorelBase, OracleResult, SpaceQuery};
