//! Computations with lattice-valued subgroups of finite groups.
//!
//! The crate is organized around five pieces: finite bounded [`lattice`]s
//! built from cover data, finite [`group`]s by table or permutation
//! generators, lattice-valued subsets ([`lsubset`]) of a group, the theory
//! of lattice-valued subgroups ([`lsubgroup`]: generation, conjugation by
//! points, normalizers, pronormality, closures, chains, maximality), and a
//! randomized verification harness ([`verify`]) whose registered checks run
//! the theory's facts against generated instances and definition-level
//! oracles.

pub mod group;
pub mod lattice;
pub mod lsubgroup;
pub mod lsubset;
pub mod sample;
pub mod verify;

pub use group::{FiniteGroup, GroupError, GroupHom};
pub use lattice::{Lattice, LatticeError};
pub use lsubgroup::{SeriesReport, TheoryError, Verdict};
pub use lsubset::{LPoint, LSubset, SubsetError};
