//! Scene domain types and editing primitives.
//!
//! A [`Scene`] is a world snapshot: the ego track, surrounding agent tracks,
//! and the road graph, all sampled at a fixed timestep. Scenes are immutable
//! values; the editing operations ([`remove_agent`], [`add_agent`]) return
//! new scenes and never touch their input.
//!
//! The JSON schema (see `Scene::to_json` / `Scene::from_json`) uses
//! `[x, y, theta, v]` rows for state histories and `[x, y]` pairs for
//! polylines. Export/import round-trips bit-exactly for finite values.

use crate::error::{CoreError, Result};
use crate::geom::{wrap_angle, Obb, Vec2};
use serde::{Deserialize, Serialize};

/// Default vehicle footprint half-dimensions, meters.
pub const VEHICLE_HALF_LEN: f64 = 2.3;
pub const VEHICLE_HALF_WID: f64 = 1.0;
/// Default pedestrian footprint half-dimensions, meters.
pub const PEDESTRIAN_HALF: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Vehicle,
    Pedestrian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub half_len: f64,
    pub half_wid: f64,
}

impl Footprint {
    pub fn vehicle() -> Self {
        Footprint {
            half_len: VEHICLE_HALF_LEN,
            half_wid: VEHICLE_HALF_WID,
        }
    }

    pub fn pedestrian() -> Self {
        Footprint {
            half_len: PEDESTRIAN_HALF,
            half_wid: PEDESTRIAN_HALF,
        }
    }
}

/// Kinematic state of one agent at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    /// Heading in `(-pi, pi]`.
    pub theta: f64,
    /// Speed, m/s, non-negative.
    pub v: f64,
    pub kind: AgentKind,
    pub footprint: Footprint,
}

impl AgentState {
    pub fn pos(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn obb(&self) -> Obb {
        Obb {
            center: self.pos(),
            heading: self.theta,
            half_len: self.footprint.half_len,
            half_wid: self.footprint.half_wid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.x.is_finite() && self.y.is_finite() && self.theta.is_finite();
        if !finite || !self.v.is_finite() {
            return Err(CoreError::InvalidScene("non-finite agent state".into()));
        }
        if self.v < 0.0 {
            return Err(CoreError::InvalidScene(format!(
                "negative speed {}",
                self.v
            )));
        }
        if self.theta <= -std::f64::consts::PI || self.theta > std::f64::consts::PI {
            return Err(CoreError::InvalidScene(format!(
                "heading {} outside (-pi, pi]",
                self.theta
            )));
        }
        if self.footprint.half_len <= 0.0 || self.footprint.half_wid <= 0.0 {
            return Err(CoreError::InvalidScene("non-positive footprint".into()));
        }
        Ok(())
    }
}

/// An agent identity plus its state history at fixed timestep (most recent
/// last). All states of a track share kind and footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentTrack {
    pub id: String,
    pub states: Vec<AgentState>,
}

impl AgentTrack {
    pub fn last(&self) -> &AgentState {
        self.states.last().expect("track history is non-empty")
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(CoreError::InvalidScene(format!(
                "track `{}` has empty history",
                self.id
            )));
        }
        let first = &self.states[0];
        for s in &self.states {
            s.validate()?;
            if s.kind != first.kind || s.footprint != first.footprint {
                return Err(CoreError::InvalidScene(format!(
                    "track `{}` mixes kinds or footprints",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightState {
    Red,
    Green,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficLight {
    pub stop_line: Vec2,
    pub state: LightState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lane {
    pub centerline: Vec<Vec2>,
    /// m/s, positive.
    pub speed_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadGraph {
    pub lanes: Vec<Lane>,
    /// Drivable-area boundary polygons (implicitly closed).
    pub drivable_area: Vec<Vec<Vec2>>,
    pub crosswalks: Vec<Vec<Vec2>>,
    /// Route centerline the ego is expected to follow.
    pub route: Vec<Vec2>,
    pub traffic_lights: Vec<TrafficLight>,
}

impl RoadGraph {
    pub fn validate(&self) -> Result<()> {
        for lane in &self.lanes {
            if lane.centerline.len() < 2 {
                return Err(CoreError::InvalidScene("lane with < 2 points".into()));
            }
            if !(lane.speed_limit > 0.0) {
                return Err(CoreError::InvalidScene(format!(
                    "non-positive speed limit {}",
                    lane.speed_limit
                )));
            }
        }
        if self.route.len() < 2 {
            return Err(CoreError::InvalidScene("route with < 2 points".into()));
        }
        for poly in self.drivable_area.iter().chain(self.crosswalks.iter()) {
            if poly.len() < 3 {
                return Err(CoreError::InvalidScene("polygon with < 3 points".into()));
            }
        }
        Ok(())
    }
}

/// World snapshot: ego, agents, road, and the time base shared by all tracks.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    /// Timestep between history samples, seconds.
    pub dt: f64,
    /// Planning/evaluation horizon, seconds.
    pub horizon: f64,
    pub ego: AgentTrack,
    pub agents: Vec<AgentTrack>,
    pub road: RoadGraph,
}

impl Scene {
    /// Number of future steps covered by the horizon.
    pub fn horizon_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn agent(&self, id: &str) -> Option<&AgentTrack> {
        self.agents.iter().find(|t| t.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(CoreError::InvalidScene(format!("dt {} must be > 0", self.dt)));
        }
        if !(self.horizon > 0.0) {
            return Err(CoreError::InvalidScene(format!(
                "horizon {} must be > 0",
                self.horizon
            )));
        }
        self.ego.validate()?;
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.agents {
            t.validate()?;
            if !seen.insert(t.id.as_str()) {
                return Err(CoreError::InvalidScene(format!(
                    "duplicate agent id `{}`",
                    t.id
                )));
            }
        }
        self.road.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&json::SceneJson::from(self)).expect("scene serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&json::SceneJson::from(self)).expect("scene serializes")
    }

    pub fn from_json(s: &str) -> Result<Scene> {
        let raw: json::SceneJson = serde_json::from_str(s)?;
        let scene = Scene::try_from(raw)?;
        scene.validate()?;
        Ok(scene)
    }
}

/// Report from the component-level perception monitor: a possibly-missed
/// agent. `state` is present iff a failure was reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorInput {
    pub present: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<AgentState>,
}

impl MonitorInput {
    pub fn none() -> Self {
        MonitorInput {
            present: false,
            state: None,
        }
    }

    pub fn missed(state: AgentState) -> Self {
        MonitorInput {
            present: true,
            state: Some(state),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.present, &self.state) {
            (true, Some(s)) => s.validate(),
            (false, None) => Ok(()),
            _ => Err(CoreError::InvalidScene(
                "monitor input present flag and state disagree".into(),
            )),
        }
    }
}

/// Ids of agents whose most recent position is within `radius` of `point`.
pub fn agents_near(scene: &Scene, point: Vec2, radius: f64) -> Vec<String> {
    assert!(radius > 0.0, "radius must be positive");
    scene
        .agents
        .iter()
        .filter(|t| t.last().pos().dist(point) <= radius)
        .map(|t| t.id.clone())
        .collect()
}

/// Copy of `scene` without the named track. Unknown ids signal a caller bug.
pub fn remove_agent(scene: &Scene, id: &str) -> Result<Scene> {
    if scene.agent(id).is_none() {
        return Err(CoreError::UnknownAgent(id.to_string()));
    }
    let mut out = scene.clone();
    out.agents.retain(|t| t.id != id);
    Ok(out)
}

/// Copy of `scene` with a new track at `state`, history back-filled by
/// constant-velocity extrapolation to match the ego history length. The new
/// track gets a fresh id that collides with no existing one.
pub fn add_agent(scene: &Scene, state: AgentState) -> Scene {
    let mut out = scene.clone();
    let id = fresh_agent_id(scene);
    out.agents.push(AgentTrack {
        id,
        states: backfill_history(state, scene.ego.states.len(), scene.dt),
    });
    out
}

/// Constant-velocity backward extrapolation producing `len` states ending at
/// `state`.
pub fn backfill_history(state: AgentState, len: usize, dt: f64) -> Vec<AgentState> {
    let dir = Vec2::new(state.theta.cos(), state.theta.sin());
    (0..len)
        .map(|i| {
            let back = (len - 1 - i) as f64 * dt * state.v;
            AgentState {
                x: state.x - dir.x * back,
                y: state.y - dir.y * back,
                ..state
            }
        })
        .collect()
}

fn fresh_agent_id(scene: &Scene) -> String {
    let mut n = scene.agents.len();
    loop {
        let candidate = format!("a{n}");
        if scene.agent(&candidate).is_none() && scene.ego.id != candidate {
            return candidate;
        }
        n += 1;
    }
}

/// Build a vehicle state with wrapped heading and clamped speed.
pub fn vehicle_state(x: f64, y: f64, theta: f64, v: f64) -> AgentState {
    AgentState {
        x,
        y,
        theta: wrap_angle(theta),
        v: v.max(0.0),
        kind: AgentKind::Vehicle,
        footprint: Footprint::vehicle(),
    }
}

pub fn pedestrian_state(x: f64, y: f64, theta: f64, v: f64) -> AgentState {
    AgentState {
        x,
        y,
        theta: wrap_angle(theta),
        v: v.max(0.0),
        kind: AgentKind::Pedestrian,
        footprint: Footprint::pedestrian(),
    }
}

mod json {
    //! Wire representation of the scene schema.

    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct SceneJson {
        pub dt: f64,
        pub horizon: f64,
        pub ego: TrackJson,
        pub agents: Vec<TrackJson>,
        pub road: RoadGraph,
    }

    #[derive(Serialize, Deserialize)]
    pub struct TrackJson {
        pub id: String,
        pub kind: AgentKind,
        pub half_len: f64,
        pub half_wid: f64,
        /// `[x, y, theta, v]` rows, most recent last.
        pub history: Vec<[f64; 4]>,
    }

    impl From<&AgentTrack> for TrackJson {
        fn from(t: &AgentTrack) -> Self {
            let first = &t.states[0];
            TrackJson {
                id: t.id.clone(),
                kind: first.kind,
                half_len: first.footprint.half_len,
                half_wid: first.footprint.half_wid,
                history: t.states.iter().map(|s| [s.x, s.y, s.theta, s.v]).collect(),
            }
        }
    }

    impl TryFrom<TrackJson> for AgentTrack {
        type Error = CoreError;
        fn try_from(t: TrackJson) -> Result<AgentTrack> {
            if t.history.is_empty() {
                return Err(CoreError::InvalidScene(format!(
                    "track `{}` has empty history",
                    t.id
                )));
            }
            let footprint = Footprint {
                half_len: t.half_len,
                half_wid: t.half_wid,
            };
            Ok(AgentTrack {
                id: t.id,
                states: t
                    .history
                    .into_iter()
                    .map(|[x, y, theta, v]| AgentState {
                        x,
                        y,
                        theta,
                        v,
                        kind: t.kind,
                        footprint,
                    })
                    .collect(),
            })
        }
    }

    impl From<&Scene> for SceneJson {
        fn from(s: &Scene) -> Self {
            SceneJson {
                dt: s.dt,
                horizon: s.horizon,
                ego: (&s.ego).into(),
                agents: s.agents.iter().map(Into::into).collect(),
                road: s.road.clone(),
            }
        }
    }

    impl TryFrom<SceneJson> for Scene {
        type Error = CoreError;
        fn try_from(s: SceneJson) -> Result<Scene> {
            Ok(Scene {
                dt: s.dt,
                horizon: s.horizon,
                ego: s.ego.try_into()?,
                agents: s
                    .agents
                    .into_iter()
                    .map(TryInto::try_into)
                    .collect::<Result<_>>()?,
                road: s.road,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenegen::{generate_scene, GenConfig};

    fn tiny_scene(agent_states: &[AgentState]) -> Scene {
        let road = RoadGraph {
            lanes: vec![Lane {
                centerline: vec![Vec2::new(-50.0, 0.0), Vec2::new(100.0, 0.0)],
                speed_limit: 10.0,
            }],
            drivable_area: vec![vec![
                Vec2::new(-50.0, -3.0),
                Vec2::new(100.0, -3.0),
                Vec2::new(100.0, 3.0),
                Vec2::new(-50.0, 3.0),
            ]],
            crosswalks: vec![],
            route: vec![Vec2::new(-50.0, 0.0), Vec2::new(100.0, 0.0)],
            traffic_lights: vec![],
        };
        let ego = AgentTrack {
            id: "ego".into(),
            states: backfill_history(vehicle_state(0.0, 0.0, 0.0, 5.0), 10, 0.1),
        };
        let agents = agent_states
            .iter()
            .enumerate()
            .map(|(i, s)| AgentTrack {
                id: format!("a{i}"),
                states: backfill_history(*s, 10, 0.1),
            })
            .collect();
        Scene {
            dt: 0.1,
            horizon: 3.0,
            ego,
            agents,
            road,
        }
    }

    #[test]
    fn agents_near_zero_distance() {
        let s = tiny_scene(&[vehicle_state(0.0, 0.0, 0.0, 0.0)]);
        assert_eq!(agents_near(&s, Vec2::ZERO, 5.0), vec!["a0".to_string()]);
    }

    #[test]
    fn agents_near_outside_radius() {
        let s = tiny_scene(&[vehicle_state(10.0, 0.0, 0.0, 0.0)]);
        assert!(agents_near(&s, Vec2::ZERO, 5.0).is_empty());
    }

    #[test]
    fn agents_near_boundary_cases() {
        let s = tiny_scene(&[
            vehicle_state(1.0, 0.0, 0.0, 0.0),
            vehicle_state(4.9, 0.0, 0.0, 0.0),
            vehicle_state(5.1, 0.0, 0.0, 0.0),
        ]);
        let ids = agents_near(&s, Vec2::ZERO, 5.0);
        assert_eq!(ids.len(), 2);
        assert!(ids.contains(&"a0".to_string()) && ids.contains(&"a1".to_string()));
    }

    #[test]
    fn remove_agent_drops_exactly_one() {
        let s = tiny_scene(&[
            vehicle_state(10.0, 0.0, 0.0, 0.0),
            vehicle_state(20.0, 0.0, 0.0, 0.0),
        ]);
        let out = remove_agent(&s, "a0").unwrap();
        assert_eq!(out.agents.len(), s.agents.len() - 1);
        assert!(out.agent("a0").is_none());
        assert!(out.agent("a1").is_some());
        // input untouched
        assert_eq!(s.agents.len(), 2);
        assert!(matches!(
            remove_agent(&s, "ghost"),
            Err(CoreError::UnknownAgent(_))
        ));
    }

    #[test]
    fn remove_commutes_up_to_ordering() {
        let s = tiny_scene(&[
            vehicle_state(10.0, 0.0, 0.0, 1.0),
            vehicle_state(20.0, 0.0, 0.0, 2.0),
            vehicle_state(30.0, 0.0, 0.0, 3.0),
        ]);
        let ab = remove_agent(&remove_agent(&s, "a0").unwrap(), "a1").unwrap();
        let ba = remove_agent(&remove_agent(&s, "a1").unwrap(), "a0").unwrap();
        let mut ids_ab: Vec<_> = ab.agents.iter().map(|t| t.id.clone()).collect();
        let mut ids_ba: Vec<_> = ba.agents.iter().map(|t| t.id.clone()).collect();
        ids_ab.sort();
        ids_ba.sort();
        assert_eq!(ids_ab, ids_ba);
    }

    #[test]
    fn add_agent_to_empty_scene() {
        let s = tiny_scene(&[]);
        let out = add_agent(&s, vehicle_state(5.0, 1.0, 0.0, 2.0));
        assert_eq!(out.agents.len(), 1);
        assert_eq!(out.agents[0].states.len(), s.ego.states.len());
    }

    #[test]
    fn add_agent_at_rest_has_constant_history() {
        let s = tiny_scene(&[]);
        let out = add_agent(&s, vehicle_state(5.0, 1.0, 0.3, 0.0));
        let states = &out.agents[0].states;
        assert!(states.iter().all(|st| st == states.last().unwrap()));
    }

    #[test]
    fn add_agent_backfills_constant_velocity() {
        // v = 2 m/s heading 0, dt = 0.1, history length 10:
        // earliest sample sits 9 steps * 0.2 m = 1.8 m behind.
        let s = tiny_scene(&[]);
        let out = add_agent(&s, vehicle_state(5.0, 1.0, 0.0, 2.0));
        let states = &out.agents[0].states;
        assert_eq!(states.len(), 10);
        assert!((states[0].x - (5.0 - 1.8)).abs() < 1e-12);
        assert!((states[0].y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn add_then_remove_restores_count() {
        let s = tiny_scene(&[vehicle_state(10.0, 0.0, 0.0, 0.0)]);
        let added = add_agent(&s, vehicle_state(30.0, 0.0, 0.0, 1.0));
        let fresh_id = added.agents.last().unwrap().id.clone();
        let restored = remove_agent(&added, &fresh_id).unwrap();
        assert_eq!(restored.agents.len(), s.agents.len());
    }

    #[test]
    fn fresh_ids_never_collide() {
        let mut s = tiny_scene(&[vehicle_state(10.0, 0.0, 0.0, 0.0)]);
        for _ in 0..5 {
            s = add_agent(&s, vehicle_state(40.0, 2.0, 0.0, 1.0));
        }
        let mut ids: Vec<_> = s.agents.iter().map(|t| t.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), s.agents.len());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let scene = generate_scene(7, &GenConfig::default()).unwrap();
        let j1 = scene.to_json();
        let back = Scene::from_json(&j1).unwrap();
        assert_eq!(scene, back);
        assert_eq!(j1, back.to_json());
    }

    #[test]
    fn monitor_input_validation() {
        assert!(MonitorInput::none().validate().is_ok());
        assert!(MonitorInput::missed(vehicle_state(0.0, 0.0, 0.0, 1.0))
            .validate()
            .is_ok());
        let bad = MonitorInput {
            present: true,
            state: None,
        };
        assert!(bad.validate().is_err());
    }
}
