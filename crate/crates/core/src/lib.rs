//! Entanglement-generation rates of nested quantum-repeater chains with
//! dephasing memories.
//!
//! A repeater link of length `L` is split into `2^n` elementary sublinks of
//! length `L0 = L / 2^n`, with a bank of `N` memories at each sublink end.
//! Elementary entanglement is distributed heralded with success probability
//! `P_S` per attempt, Bell-state measurements (BSMs) connect neighbouring
//! pairs with success probability `P_M`, and stored qubits dephase with
//! coherence time `tau_c`. The partial nesting protocol of depth `m` performs
//! informed (classically confirmed) BSMs up through nesting level `m` and
//! blind BSMs above it, trading BSM success odds against waiting-time decay.
//!
//! The crate provides
//!
//! * [`chain`]: topology, channel and timing primitives,
//! * [`bellstate`]: Bell-diagonal two-qubit algebra (dephasing, swapping,
//!   purification fidelity cap) plus a dense density-matrix oracle,
//! * [`measures`]: binary entropy, entanglement cost and distillable
//!   entanglement of the decayed states,
//! * [`rates`]: closed-form per-memory rates for the ideal, no-purification,
//!   purified and one-way-hashing variants,
//! * [`optimize`]: exhaustive `(n, m)` optimization, closed-form asymptotics
//!   and scaling-law fits,
//! * [`sim`]: a cycle-accurate Monte-Carlo simulator of the protocol with
//!   finite memory banks.
//!
//! All quantities are strict SI (meters, seconds) unless a name says
//! otherwise. The crate is `no_std`-compatible (`alloc` required); disable
//! default features and enable `libm` for builds without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

mod error;
pub(crate) mod math;

pub mod bellstate;
pub mod chain;
pub mod measures;
pub mod optimize;
pub mod rates;
pub mod sim;

pub use bellstate::BellDiagonalState;
pub use chain::{ChannelModel, RepeaterConfig, TimingModel};
pub use error::{Error, Result};
pub use measures::MeasureKind;
pub use optimize::{OptimizationResult, Physics, ScalingFit};
pub use rates::{RateResult, RateVariant};
pub use sim::{SimConfig, SimStats};
