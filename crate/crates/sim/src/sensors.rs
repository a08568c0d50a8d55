//! Synthetic sensoria: the first-person camera model and the proximity ring.

use crate::arena::{ir_angles, Arena};
use crate::error::SimError;
use crate::geometry::{ray_circle_intersection, ray_segment_intersection};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// One camera reading of another robot: where it appears in the field of
/// view and how large it looks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationSample {
    pub t: f64,
    /// Radians in the observer's body frame, quantised to camera pixels.
    pub bearing: f64,
    /// Angular diameter of the target disc, radians.
    pub apparent_size: f64,
}

/// Observe `target_id` from `observer_id`'s camera.
///
/// Returns `None` when the target is outside the field of view or the line
/// of sight is blocked. Bearing carries Gaussian noise and is quantised to
/// the camera's pixel pitch; apparent size carries multiplicative noise.
pub fn observe(
    arena: &mut Arena,
    observer_id: u8,
    target_id: u8,
) -> Result<Option<ObservationSample>, SimError> {
    if observer_id == target_id {
        return Err(SimError::SelfObservation(observer_id));
    }
    let observer = arena.robot(observer_id)?.clone();
    let target = arena.robot(target_id)?.clone();

    let bearing_true = observer.pose.bearing_to(target.pose.position());
    let half_fov = observer.body.camera_fov / 2.0;
    if bearing_true.abs() > half_fov {
        return Ok(None);
    }
    if arena.line_of_sight_blocked(&observer, &target) {
        return Ok(None);
    }

    let range = observer.pose.position().distance(target.pose.position());
    let size_true = 2.0 * (target.body.radius / range).atan();

    let (bearing_sigma, size_sigma) = (arena.noise.bearing_sigma, arena.noise.size_sigma);
    let rng = arena.rng_for(observer_id)?;
    let mut bearing = bearing_true;
    if bearing_sigma > 0.0 {
        bearing += Normal::new(0.0, bearing_sigma).unwrap().sample(rng);
    }
    let mut size = size_true;
    if size_sigma > 0.0 {
        size *= 1.0 + Normal::new(0.0, size_sigma).unwrap().sample(rng);
    }

    // Camera resolution is the dominant perception error: snap the bearing
    // to the pixel grid and keep it inside the field of view.
    let pixel = observer.body.camera_fov / observer.body.camera_resolution as f64;
    bearing = (bearing / pixel).round() * pixel;
    bearing = bearing.clamp(-half_fov, half_fov);
    size = size.max(1e-6);

    Ok(Some(ObservationSample {
        t: arena.time,
        bearing,
        apparent_size: size,
    }))
}

/// Invert the camera projection: range to a target of known radius.
pub fn range_from_apparent_size(radius: f64, apparent_size: f64) -> f64 {
    radius / (apparent_size / 2.0).tan()
}

/// Eight proximity ranges measured from the body surface, front sensor
/// first, counter-clockwise. Misses read as `ir_range`.
pub fn read_proximity(arena: &mut Arena, robot_id: u8) -> Result<[f64; 8], SimError> {
    let robot = arena.robot(robot_id)?.clone();
    let origin = robot.pose.position();
    let others: Vec<_> = arena
        .robots
        .iter()
        .filter(|r| r.body.id != robot_id)
        .map(|r| (r.pose.position(), r.body.radius))
        .collect();

    let mut ranges = [robot.body.ir_range; 8];
    for (k, angle) in ir_angles().iter().enumerate() {
        let theta = robot.pose.theta + angle;
        let mut best = f64::INFINITY;
        for wall in &arena.walls {
            if let Some(d) = ray_segment_intersection(origin, theta, wall) {
                best = best.min(d);
            }
        }
        for (centre, radius) in &others {
            if let Some(d) = ray_circle_intersection(origin, theta, *centre, *radius) {
                best = best.min(d);
            }
        }
        if best.is_finite() {
            ranges[k] = (best - robot.body.radius).clamp(0.0, robot.body.ir_range);
        }
    }

    let sigma = arena.noise.ir_sigma;
    if sigma > 0.0 {
        let ir_range = robot.body.ir_range;
        let normal = Normal::new(0.0, sigma).unwrap();
        let rng = arena.rng_for(robot_id)?;
        for r in ranges.iter_mut() {
            *r = (*r * (1.0 + normal.sample(rng))).clamp(0.0, ir_range);
        }
    }
    Ok(ranges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{RobotBody, DEFAULT_DT};
    use crate::kinematics::Pose;
    use crate::noise::NoiseProfile;
    use std::f64::consts::PI;

    fn arena_with(poses: &[(u8, Pose)]) -> Arena {
        let mut arena = Arena::new(2.5, 2.0, DEFAULT_DT, NoiseProfile::zero(11));
        for (id, pose) in poses {
            arena.add_robot(RobotBody::new(*id), *pose).unwrap();
        }
        arena
    }

    #[test]
    fn target_dead_ahead_geometry() {
        let mut arena = arena_with(&[
            (0, Pose::new(1.0, 1.0, 0.0)),
            (1, Pose::new(1.5, 1.0, 0.0)),
        ]);
        let s = observe(&mut arena, 0, 1).unwrap().expect("in view");
        assert!(s.bearing.abs() < 1e-12);
        let expected = 2.0 * (0.037_f64 / 0.5).atan();
        assert!((s.apparent_size - expected).abs() < 1e-12);
        // Projection inverts exactly at zero noise.
        let range = range_from_apparent_size(0.037, s.apparent_size);
        assert!((range - 0.5).abs() < 1e-9);
    }

    #[test]
    fn target_behind_is_unseen() {
        let mut arena = arena_with(&[
            (0, Pose::new(1.0, 1.0, 0.0)),
            (1, Pose::new(0.5, 1.0, 0.0)),
        ]);
        assert_eq!(observe(&mut arena, 0, 1).unwrap(), None);
    }

    #[test]
    fn third_robot_occludes_line_of_sight() {
        let mut arena = arena_with(&[
            (0, Pose::new(0.5, 1.0, 0.0)),
            (1, Pose::new(1.5, 1.0, 0.0)),
            (2, Pose::new(1.0, 1.0, 0.0)),
        ]);
        assert_eq!(observe(&mut arena, 0, 1).unwrap(), None);
        // Same geometry with occlusion disabled sees through.
        arena.noise.occlusion_enabled = false;
        assert!(observe(&mut arena, 0, 1).unwrap().is_some());
    }

    #[test]
    fn unknown_ids_are_errors() {
        let mut arena = arena_with(&[(0, Pose::new(1.0, 1.0, 0.0))]);
        assert!(observe(&mut arena, 0, 9).is_err());
        assert!(observe(&mut arena, 9, 0).is_err());
        assert!(read_proximity(&mut arena, 9).is_err());
    }

    #[test]
    fn proximity_open_space_reads_full_range() {
        let mut arena = arena_with(&[(0, Pose::new(1.25, 1.0, 0.0))]);
        let ranges = read_proximity(&mut arena, 0).unwrap();
        for r in ranges {
            assert!((r - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn proximity_sees_wall_ahead() {
        // Front of body 0.02 m from the x=2.5 wall.
        let mut arena = arena_with(&[(0, Pose::new(2.5 - 0.037 - 0.02, 1.0, 0.0))]);
        let ranges = read_proximity(&mut arena, 0).unwrap();
        assert!((ranges[0] - 0.02).abs() < 1e-9, "front: {}", ranges[0]);
        assert!((ranges[4] - 0.05).abs() < 1e-12, "rear: {}", ranges[4]);
    }

    #[test]
    fn proximity_matches_ray_march_oracle_for_robot_pair() {
        let mut arena = arena_with(&[
            (0, Pose::new(1.0, 1.0, 0.3)),
            (1, Pose::new(1.09, 1.02, PI / 2.0)),
        ]);
        let ranges = read_proximity(&mut arena, 0).unwrap();
        // Brute-force ray march at 1e-5 resolution.
        for (k, angle) in ir_angles().iter().enumerate() {
            let theta = 0.3 + angle;
            let mut d = 0.0;
            let mut hit = arena.robots[0].body.ir_range + 0.037;
            while d < hit {
                let x = 1.0 + d * theta.cos();
                let y = 1.0 + d * theta.sin();
                let to_other = ((x - 1.09_f64).powi(2) + (y - 1.02).powi(2)).sqrt();
                if to_other <= 0.037 {
                    hit = d;
                    break;
                }
                d += 1e-5;
            }
            let expected = (hit - 0.037).clamp(0.0, 0.05);
            assert!(
                (ranges[k] - expected).abs() < 2e-5,
                "sensor {k}: got {} expected {expected}",
                ranges[k]
            );
        }
    }
}
