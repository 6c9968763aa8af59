//! Maximal subgroups of free idempotent generated semigroups, computed
//! topologically.
//!
//! The pipeline: idempotents of a finite regular semigroup ([`linmonoid`] for
//! M_n(GF(q)), or a multiplication table) form a biordered set
//! ([`biorder`]); its Graham-Houghton 2-complex ([`complex`]) has one vertex
//! per R-class and L-class, one edge per idempotent and one square 2-cell per
//! singular E-square. The fundamental group of a component is the maximal
//! subgroup of IG(E) there. A group-labelled cover ([`cover`]) that turns out
//! simply connected identifies that group.

#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod biorder;
pub mod budget;
pub mod cli;
pub mod complex;
pub mod cover;
pub mod gf;
pub mod grouppres;
pub mod linmonoid;
pub mod smith;
