//! Voltage graphs over finite groups and their regular lifts.

pub mod group;
pub mod lift;

pub use group::{FiniteGroup, GroupError};
pub use lift::{enumerate_lifts, lift, BaseGraph, FoundLift, LiftError, LiftOptions, VoltageAssignment};
