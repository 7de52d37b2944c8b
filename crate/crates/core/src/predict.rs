//! Non-ego agent forecasting: lane-keep for vehicles, constant velocity for
//! pedestrians (and for vehicles with no lane within association range).

use crate::geom::{angle_diff, ArcPolyline, Vec2};
use crate::scene::{AgentKind, AgentState, AgentTrack, RoadGraph, Scene};

/// Maximum point-to-centerline distance for lane association, meters.
pub const LANE_ASSOC_RANGE: f64 = 5.0;

/// Forecast of one agent over the horizon at fixed dt; `states[k]` is the
/// state at time `(k + 1) * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedTrack {
    pub id: String,
    pub states: Vec<AgentState>,
}

/// Forecast a single agent `horizon / dt` steps ahead.
///
/// Vehicles are projected onto the nearest lane centerline (ties broken by
/// smaller heading difference) and advanced along it at constant speed with
/// tangent headings; pedestrians and off-lane vehicles continue straight at
/// constant velocity.
pub fn predict_agent(
    track: &AgentTrack,
    road: &RoadGraph,
    horizon: f64,
    dt: f64,
) -> PredictedTrack {
    let last = *track.last();
    let steps = (horizon / dt).round() as usize;
    let states = match last.kind {
        AgentKind::Pedestrian => constant_velocity(last, steps, dt),
        AgentKind::Vehicle => match associate_lane(road, &last) {
            Some(lane) => lane_keep(&lane, last, steps, dt),
            None => constant_velocity(last, steps, dt),
        },
    };
    PredictedTrack {
        id: track.id.clone(),
        states,
    }
}

/// Element-wise [`predict_agent`] over every agent, order preserved.
pub fn predict_all(scene: &Scene) -> Vec<PredictedTrack> {
    scene
        .agents
        .iter()
        .map(|t| predict_agent(t, &scene.road, scene.horizon, scene.dt))
        .collect()
}

fn constant_velocity(last: AgentState, steps: usize, dt: f64) -> Vec<AgentState> {
    let dir = Vec2::new(last.theta.cos(), last.theta.sin());
    (1..=steps)
        .map(|k| {
            let d = dir * (last.v * dt * k as f64);
            AgentState {
                x: last.x + d.x,
                y: last.y + d.y,
                ..last
            }
        })
        .collect()
}

fn lane_keep(lane: &ArcPolyline, last: AgentState, steps: usize, dt: f64) -> Vec<AgentState> {
    let s0 = lane.project(last.pos()).s;
    (1..=steps)
        .map(|k| {
            let (p, tan) = lane.point_at(s0 + last.v * dt * k as f64);
            AgentState {
                x: p.x,
                y: p.y,
                theta: tan,
                ..last
            }
        })
        .collect()
}

fn associate_lane(road: &RoadGraph, state: &AgentState) -> Option<ArcPolyline> {
    let mut best: Option<(f64, f64, usize)> = None;
    for (idx, lane) in road.lanes.iter().enumerate() {
        let arc = ArcPolyline::new(&lane.centerline);
        let proj = arc.project(state.pos());
        if proj.dist > LANE_ASSOC_RANGE {
            continue;
        }
        let hdiff = angle_diff(state.theta, proj.tangent).abs();
        let key = (proj.dist, hdiff, idx);
        let better = match best {
            None => true,
            Some(b) => (key.0, key.1, key.2) < b,
        };
        if better {
            best = Some(key);
        }
    }
    best.map(|(_, _, idx)| ArcPolyline::new(&road.lanes[idx].centerline))
}
