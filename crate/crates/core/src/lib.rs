//! Scheduling transactions that share mobile objects on a weighted network.
//!
//! Transactions and objects both move, objects at a higher price per unit
//! distance. The crate builds a hierarchy of sparse partitions over the
//! network, elects super-leaders where transactions crowd, and routes each
//! object along a tour of the surviving leaders. It also provides a
//! message-level simulation of the same scheduler, brute-force optima for
//! small instances, and a harness that tabulates runs as CSV.

pub mod distsim;
pub mod harness;
pub mod hierarchy;
pub mod metric;
pub mod multi;
pub mod oracle;
pub mod schedule;
pub mod single;
pub mod tours;
