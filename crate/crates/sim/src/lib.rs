//! Deterministic 2D arena with differential-drive robots, synthetic
//! sensoria (first-person camera, proximity ring), noise injection and
//! contact-stop collision handling.
//!
//! Everything downstream of this crate — imitation, internal models,
//! storytelling — runs on top of the arena stepper and the event stream
//! defined here.

pub mod arena;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod noise;
pub mod sensors;
pub mod telemetry;

pub use arena::{Arena, Robot, RobotBody, DEFAULT_DT};
pub use error::SimError;
pub use geometry::{normalize_angle, Point, Segment};
pub use kinematics::{integrate, Command, Pose};
pub use noise::{derive_seed, NoiseProfile, RngStreams};
pub use sensors::{observe, range_from_apparent_size, read_proximity, ObservationSample};
