//! Unicycle kinematics shared by the arena stepper and any internal model.
//!
//! Keeping the integrator in one place means a robot that simulates itself
//! uses exactly the motion code the arena does.

use crate::geometry::{normalize_angle, Point};
use serde::{Deserialize, Serialize};

/// Planar pose. `theta` is always kept in `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Bearing of `target` in this pose's body frame.
    pub fn bearing_to(&self, target: Point) -> f64 {
        normalize_angle((target.y - self.y).atan2(target.x - self.x) - self.theta)
    }
}

/// Velocity command: forward speed in m/s, turn rate in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Command {
    pub v: f64,
    pub w: f64,
}

impl Command {
    pub const STOP: Command = Command { v: 0.0, w: 0.0 };

    pub const fn new(v: f64, w: f64) -> Self {
        Self { v, w }
    }
}

/// Advance a pose by `(v, w)` over `dt` using the exact unicycle arc.
pub fn integrate(pose: Pose, cmd: Command, dt: f64) -> Pose {
    if cmd.w.abs() < 1e-9 {
        Pose::new(
            pose.x + cmd.v * dt * pose.theta.cos(),
            pose.y + cmd.v * dt * pose.theta.sin(),
            pose.theta + cmd.w * dt,
        )
    } else {
        let r = cmd.v / cmd.w;
        let theta1 = pose.theta + cmd.w * dt;
        Pose::new(
            pose.x + r * (theta1.sin() - pose.theta.sin()),
            pose.y - r * (theta1.cos() - pose.theta.cos()),
            theta1,
        )
    }
}
