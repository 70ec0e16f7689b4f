//! Combinatorial machinery of generalized Boolean dynamical systems.
//!
//! A system couples a finite Boolean algebra with a family of actions
//! (Boolean homomorphisms) indexed by a label alphabet, plus one declared
//! ideal per label containing the action's range. From that seed the crate
//! builds, entirely symbolically:
//!
//! * the finite Boolean algebra itself, its ideals, filters, and
//!   ultrafilters ([`stone`]);
//! * the inverse semigroup of shift triples and its idempotent filters,
//!   including the tight ones ([`semigroup`]);
//! * the labelled correspondence and boundary path space ([`paths`]), with a
//!   normal form for compact open subsets ([`openset`]);
//! * the induced partial action of the free group on the boundary
//!   ([`action`]), with the covariance relations checked at the level of
//!   bisections;
//! * two groupoid models and the degree-preserving isomorphism between them
//!   ([`groupoid`]);
//! * reconstruction of a system from a finite partial action together with a
//!   conjugacy certificate ([`reconstruct`]);
//! * invariant open subsets and the system restricted to one ([`ideal`]).
//!
//! Check drivers return structured [`report::CheckReport`]s rather than
//! panicking, so the same machinery backs tests, the CLI, and benches. The
//! heavier drivers take an [`exec::Strategy`] to pick between the rayon
//! data-parallel path and a sequential one.

pub mod error;
pub mod exec;
pub mod report;

pub mod stone;

pub mod gbds;

pub mod semigroup;

pub mod paths;

pub mod openset;

pub mod action;

pub mod groupoid;

pub mod reconstruct;

pub mod ideal;

pub mod fixtures;
pub mod sample;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use report::{CheckItem, CheckReport};
