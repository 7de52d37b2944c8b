//! Deterministic synthetic scene generator.
//!
//! Roads are straight or constant-curvature multi-lane segments with an
//! optional crosswalk and at most one signalized stop line — the smallest
//! road family that exercises every rule in the hierarchy. Agents are placed
//! on lanes (pedestrians on the crosswalk) by rejection sampling so that no
//! two footprints overlap initially. Generation is a pure function of
//! `(seed, config)`.

use crate::error::{CoreError, Result};
use crate::geom::{ArcPolyline, Vec2};
use crate::scene::{
    backfill_history, pedestrian_state, vehicle_state, AgentTrack, Lane, LightState, RoadGraph,
    Scene, TrafficLight,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Scene generation parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    /// Number of parallel lanes, 1..=4. Lane 0 carries the route.
    pub lanes: u32,
    pub lane_width: f64,
    /// Road arc length, meters.
    pub length: f64,
    /// Inclusive range of non-ego agent counts.
    pub agents: (u32, u32),
    /// Per-road speed limit range, m/s.
    pub speed_limit: (f64, f64),
    /// Unsigned curvature range, 1/m; sign is randomized.
    pub curvature: (f64, f64),
    /// Probability that a generated agent is a pedestrian (requires a
    /// crosswalk; otherwise it falls back to a vehicle).
    pub pedestrian_prob: f64,
    pub crosswalk_prob: f64,
    pub traffic_light_prob: f64,
    /// History timestep, seconds.
    pub dt: f64,
    /// History length in steps (1 s at the default dt).
    pub history_steps: u32,
    /// Future horizon, seconds.
    pub horizon: f64,
    /// Ego arc-length position along the route.
    pub ego_arc: f64,
    /// Ego speed as a fraction of the speed limit.
    pub ego_speed_frac: (f64, f64),
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            lanes: 2,
            lane_width: 3.5,
            length: 150.0,
            agents: (0, 8),
            speed_limit: (6.0, 12.0),
            curvature: (0.0, 0.006),
            pedestrian_prob: 0.1,
            crosswalk_prob: 0.3,
            traffic_light_prob: 0.3,
            dt: 0.1,
            history_steps: 10,
            horizon: 3.0,
            ego_arc: 30.0,
            ego_speed_frac: (0.6, 0.95),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lanes == 0 || self.lanes > 4 {
            return Err(CoreError::InvalidConfig(format!(
                "lane count {} outside [1, 4]",
                self.lanes
            )));
        }
        if !(self.dt > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "dt {} must be > 0",
                self.dt
            )));
        }
        if self.agents.0 > self.agents.1 || self.agents.1 > 8 {
            return Err(CoreError::InvalidConfig(format!(
                "agent range {:?} outside [0, 8]",
                self.agents
            )));
        }
        if !(self.speed_limit.0 > 0.0) || self.speed_limit.0 > self.speed_limit.1 {
            return Err(CoreError::InvalidConfig("bad speed limit range".into()));
        }
        if self.curvature.0 < 0.0 || self.curvature.0 > self.curvature.1 {
            return Err(CoreError::InvalidConfig("bad curvature range".into()));
        }
        if self.history_steps == 0 || !(self.horizon > 0.0) || !(self.length > 20.0) {
            return Err(CoreError::InvalidConfig("bad history/horizon/length".into()));
        }
        Ok(())
    }
}

/// Generate a valid scene, deterministic in `seed`.
pub fn generate_scene(seed: u64, cfg: &GenConfig) -> Result<Scene> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Base arc: start at the origin heading +x; positive curvature bends left.
    let kappa_mag = sample_range(&mut rng, cfg.curvature);
    let kappa = if kappa_mag < 1e-9 {
        0.0
    } else if rng.random::<bool>() {
        kappa_mag
    } else {
        -kappa_mag
    };
    let base_pts = arc_points(kappa, cfg.length);
    let base = ArcPolyline::new(&base_pts);

    let speed_limit = sample_range(&mut rng, cfg.speed_limit);
    let lanes: Vec<Lane> = (0..cfg.lanes)
        .map(|i| Lane {
            centerline: base.offset(i as f64 * cfg.lane_width),
            speed_limit,
        })
        .collect();
    let route = lanes[0].centerline.clone();

    // One drivable band spanning all lanes.
    let right = base.offset(-cfg.lane_width / 2.0);
    let left = base.offset((cfg.lanes as f64 - 0.5) * cfg.lane_width);
    let mut drivable = right;
    drivable.extend(left.into_iter().rev());

    let crosswalk = if rng.random::<f64>() < cfg.crosswalk_prob {
        let s_cw = rng.random_range(40.0..cfg.length - 40.0);
        Some((s_cw, crosswalk_polygon(&base, s_cw, cfg)))
    } else {
        None
    };

    let traffic_lights = if rng.random::<f64>() < cfg.traffic_light_prob {
        let s_li = rng.random_range(cfg.ego_arc + 15.0..(cfg.ego_arc + 60.0).min(cfg.length - 10.0));
        let route_arc = ArcPolyline::new(&route);
        let (p, _) = route_arc.point_at(s_li);
        let state = if rng.random::<bool>() {
            LightState::Red
        } else {
            LightState::Green
        };
        vec![TrafficLight {
            stop_line: p,
            state,
        }]
    } else {
        vec![]
    };

    let road = RoadGraph {
        lanes,
        drivable_area: vec![drivable],
        crosswalks: crosswalk.iter().map(|(_, p)| p.clone()).collect(),
        route,
        traffic_lights,
    };

    // Ego on the route centerline, aligned with its tangent.
    let route_arc = ArcPolyline::new(&road.route);
    let (ego_pos, ego_tan) = route_arc.point_at(cfg.ego_arc);
    let ego_speed = sample_range(&mut rng, cfg.ego_speed_frac) * speed_limit;
    let ego_state = vehicle_state(ego_pos.x, ego_pos.y, ego_tan, ego_speed);
    let ego = AgentTrack {
        id: "ego".into(),
        states: backfill_history(ego_state, cfg.history_steps as usize, cfg.dt),
    };

    // Agents by rejection sampling against footprint overlap.
    let n_agents = rng.random_range(cfg.agents.0..=cfg.agents.1);
    let mut placed: Vec<AgentTrack> = Vec::new();
    let lane_arcs: Vec<ArcPolyline> = road
        .lanes
        .iter()
        .map(|l| ArcPolyline::new(&l.centerline))
        .collect();
    for i in 0..n_agents {
        let mut ok = None;
        for _attempt in 0..50 {
            let want_ped = crosswalk.is_some() && rng.random::<f64>() < cfg.pedestrian_prob;
            let state = if want_ped {
                let (s_cw, _) = crosswalk.as_ref().unwrap();
                let lat = rng.random_range(
                    -cfg.lane_width / 2.0..(cfg.lanes as f64 - 0.5) * cfg.lane_width,
                );
                let (p, tan) = base.point_at(*s_cw);
                let n = Vec2::new(-tan.sin(), tan.cos());
                let pos = p + n * lat;
                let crossing = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let heading = tan + crossing * std::f64::consts::FRAC_PI_2;
                pedestrian_state(pos.x, pos.y, heading, rng.random_range(0.8..1.6))
            } else {
                let lane_idx = rng.random_range(0..lane_arcs.len());
                let s = rng.random_range(5.0..cfg.length - 5.0);
                let (p, tan) = lane_arcs[lane_idx].point_at(s);
                let v = rng.random_range(0.3..1.0) * speed_limit;
                vehicle_state(p.x, p.y, tan, v)
            };
            let candidate = state.obb();
            let clear = !candidate.intersects(&ego_state.obb())
                && placed.iter().all(|t| !candidate.intersects(&t.last().obb()));
            if clear {
                ok = Some(state);
                break;
            }
        }
        // Crowded configs may fail placement; skip rather than overlap.
        if let Some(state) = ok {
            placed.push(AgentTrack {
                id: format!("a{i}"),
                states: backfill_history(state, cfg.history_steps as usize, cfg.dt),
            });
        }
    }

    let scene = Scene {
        dt: cfg.dt,
        horizon: cfg.horizon,
        ego,
        agents: placed,
        road,
    };
    scene.validate()?;
    Ok(scene)
}

fn sample_range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Constant-curvature arc sampled every meter, starting at the origin with
/// heading +x.
fn arc_points(kappa: f64, length: f64) -> Vec<Vec2> {
    let n = length.ceil() as usize;
    (0..=n)
        .map(|i| {
            let s = (i as f64).min(length);
            if kappa.abs() < 1e-12 {
                Vec2::new(s, 0.0)
            } else {
                Vec2::new((kappa * s).sin() / kappa, (1.0 - (kappa * s).cos()) / kappa)
            }
        })
        .collect()
}

fn crosswalk_polygon(base: &ArcPolyline, s_cw: f64, cfg: &GenConfig) -> Vec<Vec2> {
    let half = 1.5;
    let lat_lo = -cfg.lane_width / 2.0;
    let lat_hi = (cfg.lanes as f64 - 0.5) * cfg.lane_width;
    let mut poly = Vec::with_capacity(4);
    for (s, lat) in [
        (s_cw - half, lat_lo),
        (s_cw + half, lat_lo),
        (s_cw + half, lat_hi),
        (s_cw - half, lat_hi),
    ] {
        let (p, tan) = base.point_at(s);
        let n = Vec2::new(-tan.sin(), tan.cos());
        poly.push(p + n * lat);
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_agents_config() {
        let cfg = GenConfig {
            agents: (0, 0),
            ..GenConfig::default()
        };
        let s = generate_scene(7, &cfg).unwrap();
        assert!(s.agents.is_empty());
        assert!(s.validate().is_ok());
        assert!(s.road.lanes.len() == 2);
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = GenConfig::default();
        let a = generate_scene(7, &cfg).unwrap();
        let b = generate_scene(7, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let c = generate_scene(8, &cfg).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn rejects_bad_configs() {
        let zero_lanes = GenConfig {
            lanes: 0,
            ..GenConfig::default()
        };
        assert!(generate_scene(1, &zero_lanes).is_err());
        let bad_dt = GenConfig {
            dt: 0.0,
            ..GenConfig::default()
        };
        assert!(generate_scene(1, &bad_dt).is_err());
    }

    #[test]
    fn no_initial_overlap_over_seed_sweep() {
        // Full sweep (1000 seeds) runs in the acceptance-adjacent suite; a
        // 200-seed sweep keeps the unit test fast while covering the dense
        // 8-agent configuration.
        let cfg = GenConfig {
            agents: (8, 8),
            ..GenConfig::default()
        };
        for seed in 0..200 {
            let s = generate_scene(seed, &cfg).unwrap();
            let mut boxes: Vec<_> = s.agents.iter().map(|t| t.last().obb()).collect();
            boxes.push(s.ego.last().obb());
            for i in 0..boxes.len() {
                for j in i + 1..boxes.len() {
                    assert!(
                        !boxes[i].intersects(&boxes[j]),
                        "seed {seed}: footprints {i} and {j} overlap"
                    );
                }
            }
        }
    }

    #[test]
    fn ego_sits_on_route_centerline() {
        let cfg = GenConfig::default();
        for seed in 0..20 {
            let s = generate_scene(seed, &cfg).unwrap();
            let route = ArcPolyline::new(&s.road.route);
            let proj = route.project(s.ego.last().pos());
            assert!(proj.dist < 1e-9, "seed {seed}: ego {} m off route", proj.dist);
        }
    }

    #[test]
    fn curved_roads_generate_valid_scenes() {
        let cfg = GenConfig {
            curvature: (0.006, 0.006),
            lanes: 4,
            agents: (4, 8),
            ..GenConfig::default()
        };
        for seed in 0..20 {
            let s = generate_scene(seed, &cfg).unwrap();
            s.validate().unwrap();
        }
    }
}
