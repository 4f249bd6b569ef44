//! Map-based multi-agent driving simulation at desk scale: procedural lane
//! networks, heuristic scenario generation, a deterministic closed-loop
//! simulator with delta-pose actions, an actor-critic policy trained by
//! behavior cloning and KL-regularized self-play PPO, and distribution-based
//! realism evaluation with Pareto checkpoint selection.

pub mod error;
pub mod geom;
pub mod map;
pub mod par;
pub mod rng;

pub use error::{Error, Result};
