//! Twisted tensor products of finite-dimensional graded C*-algebras over
//! finite abelian groups, computed with complex matrices.

pub mod abgroup;
pub mod apps;
pub mod boxtimes;
pub mod coact;
pub mod heis;
pub mod matspan;
pub mod qgroup;
pub mod report;
pub mod spec;
pub mod suite;
