//! Parametrical neural networks: associative memories built from vector
//! neurons whose states are signed or unsigned unit vectors of `R^q`.
//!
//! - [`network`]: PNN2 / PNN3 / Hopfield memories, fields, update rule, energy
//! - [`patterns`]: seeded pattern ensembles and noise channels
//! - [`dpnn`]: the decorrelating pipeline for (correlated) binary patterns
//! - [`identifier`]: one-pass pattern identification via enumerated digits
//! - [`theory`]: closed-form error bounds and capacities

pub mod dpnn;
pub mod error;
pub mod identifier;
pub mod network;
pub mod patterns;
pub mod rng;
pub mod state;
pub mod theory;

pub use error::{Error, Result};
pub use network::{neuron_update, FieldAmplitudes, Memory, RetrievalResult, Session, UpdateOrder};
pub use rng::SeededRng;
pub use state::{NetworkKind, NeuronState, Pattern};
