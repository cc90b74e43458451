//! Group-agent social network simulation engine.
//!
//! Agents represent population segments rather than individual users. Each
//! simulated day every agent perceives the shared event state, updates its
//! emotions and attitudes through a pluggable oracle, mixes the result with
//! its previous state and memory, decides on an action, and emits engagement
//! counts (views/likes/comments/shares) scaled by its population weight. The
//! aggregated counts feed the next day's perception.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! additionally enables the multi-threaded day executor. IO, file formats,
//! and the command-line harness live in the companion `groupsim-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod action;
pub mod hierarchy;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod reasoning;
pub mod runtime;

pub(crate) mod float;
pub(crate) mod hashing;
