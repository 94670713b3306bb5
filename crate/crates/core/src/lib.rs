//! Deterministic near-linear all-targets subset sum, plus the all-capacities
//! 0-1 knapsack reduction to max-plus convolution.
//!
//! The pipeline: elements are bucketed by scale, each bucket is solved by a
//! divide-and-conquer over cardinality that splits multisets with a
//! discrepancy-based halver and finishes small instances with a layered
//! dyadic-interval construction, and the bucket answers are combined with
//! clipped Boolean convolutions. Witness mode retains enough structure to
//! reconstruct an achieving sub-multiset for any reported sum.

pub mod counters;
pub mod discrepancy;
pub mod error;
pub mod gen;
pub mod halver;
pub mod instance;
pub mod knapsack;
pub mod layered;
pub mod oracle;
pub mod solver;
pub mod sumset;

pub use counters::WorkCounters;
pub use error::{Error, Result};
pub use instance::{Instance, Multiset, Witness};
pub use knapsack::{knapsack_all_capacities, KnapsackConfig, KnapsackItem, ParetoProfile};
pub use solver::{all_targets, decide, dnc_sums, SolveReport, Solved, SolverConfig, SplitPolicy};
pub use sumset::{Backend, ConvConfig, SumsetBitmap, ValueWindow};
