//! Link-level capacity analysis for ambient-backscatter networks riding on a
//! multicarrier legacy system.
//!
//! The library models a four-node network: a legacy transmitter/receiver pair
//! (nodes 1 and 3), a passive backscatter transmitter (node 2) that reflects
//! the legacy signal by load modulation, and a backscatter receiver (node 4,
//! or node 1 itself when the receiver is co-located with the legacy
//! transmitter). It provides:
//!
//! * [`oracle`] — a time-domain block oracle that propagates whole frames
//!   through the dense Toeplitz channel matrices; the ground truth against
//!   which every diagonal frequency-domain shortcut is tested,
//! * [`legacy`] — ergodic capacity, capacity-gain asymptotes, and outage of
//!   the legacy link,
//! * [`colocated`] / [`separated`] — capacity upper and lower bounds of the
//!   backscatter link for the two receiver placements,
//! * shared plumbing: special functions ([`numerics`]), the reflection
//!   front-end ([`frontend`]), Rayleigh link models ([`channel`]), a
//!   reproducible Monte-Carlo runner ([`mc`]), and scenario configuration
//!   ([`scenario`]).

// nalgebra appears in the oracle's public signatures
pub use nalgebra;

pub mod channel;
pub mod colocated;
pub mod frontend;
pub mod legacy;
pub mod mc;
pub mod numerics;
pub mod oracle;
pub mod scenario;
pub mod separated;

pub use channel::{ChannelDraw, LinkSpec, NetworkGeometry};
pub use frontend::Constellation;
pub use mc::{CapacityEstimate, TrialPlan};
pub use scenario::{SamplingMode, Scenario};
