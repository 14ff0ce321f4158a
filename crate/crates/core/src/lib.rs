//! Sorting, selection and maximal-element search when each comparison has a
//! public price drawn at random and the hidden order is a uniform permutation.
//!
//! Three price models are supported: uniform on `[0, 1)`, boolean (free with
//! probability `p`, else 1), and unit/infinite (1 with probability `p`, else
//! forbidden). Every algorithm works through a [`ProbeState`], which charges
//! for comparisons and keeps the transitive closure of what has been learned,
//! and returns a [`Certificate`] that can be checked independently.

mod bits;
pub mod boolean;
pub mod bounds;
pub mod certificate;
mod error;
pub mod extensions;
pub mod instance;
pub mod json;
pub mod poset;
pub mod probe;
pub mod uniform;

pub use certificate::{CertEdge, Certificate, CertificateKind};
pub use error::{Error, Result};
pub use instance::{generate_instance, CostModel, Instance, RngStream};
pub use probe::ProbeState;
