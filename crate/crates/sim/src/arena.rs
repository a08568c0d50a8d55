//! The arena: robot bodies, wall geometry and the deterministic stepper.

use crate::error::SimError;
use crate::geometry::{normalize_angle, Point, Segment};
use crate::kinematics::{integrate, Command, Pose};
use crate::noise::{NoiseProfile, RngStreams};
use crate::telemetry::{ContactWith, Event};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Physical description of one robot. Defaults are at e-puck scale: a small
/// two-wheeled disc with a single forward camera and eight proximity sensors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotBody {
    pub id: u8,
    pub radius: f64,
    pub wheel_base: f64,
    pub max_speed: f64,
    pub camera_fov: f64,
    pub camera_resolution: u32,
    pub ir_count: usize,
    pub ir_range: f64,
}

impl RobotBody {
    pub fn new(id: u8) -> Self {
        Self {
            id,
            radius: 0.037,
            wheel_base: 0.053,
            max_speed: 0.128,
            camera_fov: 1.0,
            camera_resolution: 640,
            ir_count: 8,
            ir_range: 0.05,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.radius <= 0.0 {
            return Err(SimError::Config("robot radius must be positive".into()));
        }
        if self.ir_count != 8 {
            return Err(SimError::Config("ir_count is fixed at 8".into()));
        }
        if self.camera_fov <= 0.0 || self.camera_fov >= std::f64::consts::PI {
            return Err(SimError::Config("camera_fov must lie in (0, pi)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Robot {
    pub body: RobotBody,
    pub pose: Pose,
    /// Velocity actually applied during the last step (zero after a
    /// collision stop). Internal models read this as the robot's current
    /// motion.
    pub velocity: Command,
}

/// Deterministic 2D world. Owns the per-robot RNG streams so that a given
/// (config, seed) pair always replays identically.
#[derive(Debug, Clone)]
pub struct Arena {
    pub width: f64,
    pub height: f64,
    pub walls: Vec<Segment>,
    pub robots: Vec<Robot>,
    pub time: f64,
    pub dt: f64,
    pub noise: NoiseProfile,
    streams: RngStreams,
    rngs: Vec<ChaCha8Rng>,
}

pub const DEFAULT_DT: f64 = 0.05;

impl Arena {
    /// Empty rectangular arena with boundary walls.
    pub fn new(width: f64, height: f64, dt: f64, noise: NoiseProfile) -> Self {
        let corners = [
            Point::new(0.0, 0.0),
            Point::new(width, 0.0),
            Point::new(width, height),
            Point::new(0.0, height),
        ];
        let walls = (0..4)
            .map(|i| Segment::new(corners[i], corners[(i + 1) % 4]))
            .collect();
        let streams = RngStreams::new(noise.rng_seed);
        Self {
            width,
            height,
            walls,
            robots: Vec::new(),
            time: 0.0,
            dt,
            noise,
            streams,
            rngs: Vec::new(),
        }
    }

    pub fn add_obstacle(&mut self, seg: Segment) {
        self.walls.push(seg);
    }

    pub fn add_robot(&mut self, body: RobotBody, pose: Pose) -> Result<(), SimError> {
        body.validate()?;
        if self.robots.iter().any(|r| r.body.id == body.id) {
            return Err(SimError::DuplicateRobot(body.id));
        }
        for other in &self.robots {
            if other.pose.position().distance(pose.position())
                < other.body.radius + body.radius
            {
                return Err(SimError::InvalidPlacement(body.id));
            }
        }
        for wall in &self.walls {
            if wall.distance_to_point(pose.position()) < body.radius {
                return Err(SimError::InvalidPlacement(body.id));
            }
        }
        let rng = self.streams.robot(body.id);
        self.robots.push(Robot {
            body,
            pose,
            velocity: Command::STOP,
        });
        self.rngs.push(rng);
        Ok(())
    }

    pub fn robot(&self, id: u8) -> Result<&Robot, SimError> {
        self.robots
            .iter()
            .find(|r| r.body.id == id)
            .ok_or(SimError::UnknownRobot(id))
    }

    pub fn robot_index(&self, id: u8) -> Result<usize, SimError> {
        self.robots
            .iter()
            .position(|r| r.body.id == id)
            .ok_or(SimError::UnknownRobot(id))
    }

    /// Move a robot without stepping time (scenario-level repositioning).
    pub fn place_robot(&mut self, id: u8, pose: Pose) -> Result<(), SimError> {
        let idx = self.robot_index(id)?;
        self.robots[idx].pose = pose;
        self.robots[idx].velocity = Command::STOP;
        Ok(())
    }

    pub(crate) fn rng_for(&mut self, id: u8) -> Result<&mut ChaCha8Rng, SimError> {
        let idx = self.robot_index(id)?;
        Ok(&mut self.rngs[idx])
    }

    pub fn scenario_rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.streams.scenario
    }

    /// Advance the world by one `dt`, one command per robot (same order as
    /// `robots`). Commands are clamped to wheel limits, never rejected.
    /// Collisions stop the robots involved at the moment of contact; every
    /// contact is returned as a collision event.
    pub fn step(&mut self, commands: &[Command]) -> Vec<Event> {
        assert_eq!(
            commands.len(),
            self.robots.len(),
            "one command per robot required"
        );
        let n = self.robots.len();
        let dt = self.dt;

        // Clamp to wheel speed limits, then apply multiplicative slip.
        let mut applied: Vec<Command> = Vec::with_capacity(n);
        for (i, cmd) in commands.iter().enumerate() {
            let body = &self.robots[i].body;
            let half_base = body.wheel_base / 2.0;
            let mut left = cmd.v - cmd.w * half_base;
            let mut right = cmd.v + cmd.w * half_base;
            left = left.clamp(-body.max_speed, body.max_speed);
            right = right.clamp(-body.max_speed, body.max_speed);
            if self.noise.wheel_slip_sigma > 0.0 {
                let slip = Normal::new(0.0, self.noise.wheel_slip_sigma).unwrap();
                left *= 1.0 + slip.sample(&mut self.rngs[i]);
                right *= 1.0 + slip.sample(&mut self.rngs[i]);
            }
            applied.push(Command::new(
                (left + right) / 2.0,
                (right - left) / body.wheel_base,
            ));
        }

        // Each robot follows its arc until dt or until frozen by a contact.
        let start: Vec<Pose> = self.robots.iter().map(|r| r.pose).collect();
        let mut freeze: Vec<f64> = vec![dt; n];
        let mut collided: Vec<bool> = vec![false; n];
        let pose_at = |i: usize, tau: f64, freeze: &[f64]| -> Pose {
            integrate(start[i], applied[i], tau.min(freeze[i]))
        };

        let mut events: Vec<(f64, u8, ContactWith)> = Vec::new();
        loop {
            // Earliest unresolved contact under the current freeze times.
            let mut earliest: Option<(f64, usize, ContactWith)> = None;
            for i in 0..n {
                let p_end = pose_at(i, dt, &freeze);
                let radius = self.robots[i].body.radius;
                for (w_idx, wall) in self.walls.iter().enumerate() {
                    if wall.distance_to_point(p_end.position()) < radius {
                        let tau = bisect_contact(freeze[i], |tau| {
                            wall.distance_to_point(pose_at(i, tau, &freeze).position()) - radius
                        });
                        if earliest.map_or(true, |(t, _, _)| tau < t) {
                            earliest = Some((tau, i, ContactWith::Wall));
                        }
                        let _ = w_idx;
                    }
                }
                for j in (i + 1)..n {
                    let q_end = pose_at(j, dt, &freeze);
                    let limit = radius + self.robots[j].body.radius;
                    if p_end.position().distance(q_end.position()) < limit {
                        let tau = bisect_contact(freeze[i].max(freeze[j]), |tau| {
                            pose_at(i, tau, &freeze)
                                .position()
                                .distance(pose_at(j, tau, &freeze).position())
                                - limit
                        });
                        if earliest.map_or(true, |(t, _, _)| tau < t) {
                            earliest =
                                Some((tau, i, ContactWith::Robot(self.robots[j].body.id)));
                        }
                    }
                }
            }
            let Some((tau, i, with)) = earliest else { break };
            match with {
                ContactWith::Wall => {
                    freeze[i] = tau;
                    collided[i] = true;
                    events.push((self.time + tau, self.robots[i].body.id, ContactWith::Wall));
                }
                ContactWith::Robot(j_id) => {
                    let j = self.robot_index(j_id).expect("pair index");
                    freeze[i] = freeze[i].min(tau);
                    freeze[j] = freeze[j].min(tau);
                    collided[i] = true;
                    collided[j] = true;
                    events.push((self.time + tau, self.robots[i].body.id, with));
                    events.push((
                        self.time + tau,
                        self.robots[j].body.id,
                        ContactWith::Robot(self.robots[i].body.id),
                    ));
                }
            }
        }

        for i in 0..n {
            self.robots[i].pose = pose_at(i, dt, &freeze);
            self.robots[i].velocity = if collided[i] { Command::STOP } else { applied[i] };
        }
        self.time += dt;

        events.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then_with(|| a.1.cmp(&b.1))
        });
        events
            .into_iter()
            .map(|(t, robot, with)| Event::Collision { t, robot, with })
            .collect()
    }

    /// Unordered robot pairs within `r_enc` of each other that can also see
    /// each other, sorted by (min id, max id).
    pub fn encounter_pairs(&self, r_enc: f64) -> Vec<(u8, u8)> {
        assert!(r_enc > 0.0, "encounter radius must be positive");
        let mut pairs = Vec::new();
        for i in 0..self.robots.len() {
            for j in (i + 1)..self.robots.len() {
                let a = &self.robots[i];
                let b = &self.robots[j];
                if a.pose.position().distance(b.pose.position()) >= r_enc {
                    continue;
                }
                if self.visible(a, b) && self.visible(b, a) {
                    let (lo, hi) = if a.body.id < b.body.id {
                        (a.body.id, b.body.id)
                    } else {
                        (b.body.id, a.body.id)
                    };
                    pairs.push((lo, hi));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Geometric visibility: target centre inside the observer's field of
    /// view and not hidden by a third robot or a wall.
    pub fn visible(&self, observer: &Robot, target: &Robot) -> bool {
        let bearing = observer.pose.bearing_to(target.pose.position());
        if bearing.abs() > observer.body.camera_fov / 2.0 {
            return false;
        }
        !self.line_of_sight_blocked(observer, target)
    }

    pub(crate) fn line_of_sight_blocked(&self, observer: &Robot, target: &Robot) -> bool {
        let a = observer.pose.position();
        let b = target.pose.position();
        if self.noise.occlusion_enabled {
            for other in &self.robots {
                if other.body.id == observer.body.id || other.body.id == target.body.id {
                    continue;
                }
                if crate::geometry::segment_intersects_circle(
                    a,
                    b,
                    other.pose.position(),
                    other.body.radius,
                ) {
                    return true;
                }
            }
        }
        // Walls always block sight (interior obstacles; boundary walls can
        // never lie between two robots inside the rectangle).
        for wall in &self.walls {
            if segments_cross(a, b, wall) {
                return true;
            }
        }
        false
    }
}

fn segments_cross(a: Point, b: Point, seg: &Segment) -> bool {
    let d = |p: Point, q: Point, r: Point| (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    let d1 = d(a, b, seg.a);
    let d2 = d(a, b, seg.b);
    let d3 = d(seg.a, seg.b, a);
    let d4 = d(seg.a, seg.b, b);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Find the contact time of a constraint `g` that is non-negative at 0 and
/// negative at `hi`, to float precision. Returns the last known safe time.
fn bisect_contact<F: Fn(f64) -> f64>(hi: f64, g: F) -> f64 {
    let mut lo = 0.0;
    let mut hi = hi;
    debug_assert!(g(lo) >= -1e-9, "start of step already penetrating");
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Angles (body frame) of the eight proximity sensors, front first, evenly
/// spaced around the body.
pub fn ir_angles() -> [f64; 8] {
    let mut angles = [0.0; 8];
    for (k, slot) in angles.iter_mut().enumerate() {
        *slot = normalize_angle(k as f64 * std::f64::consts::FRAC_PI_4);
    }
    angles
}
