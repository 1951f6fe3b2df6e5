//! Symbolic dynamics of exponential maps `z ↦ e^z + a`.
//!
//! The crate has two halves that talk to each other:
//!
//! * a combinatorial half built on *external addresses* (one-sided integer
//!   sequences ordered lexicographically, completed by intermediate addresses
//!   ending in `∞`): shift/translate arithmetic, the cyclic order at infinity,
//!   itineraries and kneading sequences relative to a partition address,
//!   unlinkedness of address sets and an exhaustive refutation search for
//!   wandering triangles;
//! * a numerical half built on the growth function `F(t) = e^t − 1` and the
//!   model map `(t, s) ↦ (F(t) − 2π|s₁|, σ(s))`: certified two-sided bounds
//!   for minimal potentials, membership certificates for the invariant set and
//!   its sub-fans, and a dynamic-ray tracer for the actual plane maps
//!   `f_a(z) = e^z + a` with conjugacy, vertical-order and landing checks.
//!
//! Everything numerical returns explicit certificates ([`model::CertInterval`],
//! [`model::Membership`]) instead of bare floats; comparisons are inflated by a
//! configurable epsilon so that a certificate never overclaims.

pub mod address;
pub mod combinatorics;
pub mod itinerary;
pub mod model;
pub mod parse;
pub mod rays;
pub mod verify;

pub use address::{Entry, ExtendedAddress, ExternalAddress};
pub use model::{CertInterval, ModelPoint};
