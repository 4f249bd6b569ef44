//! Procedural synthetic maps: straight corridors, curves, T-intersections and
//! 4-way intersections, in left- or right-hand driving variants.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::map::{LaneId, LaneNetwork, LanePolyline, OrientedPolyline};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapFamily {
    StraightCorridor,
    Curve,
    TIntersection,
    FourWay,
}

impl std::str::FromStr for MapFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "straight" | "straight-corridor" | "corridor" => Ok(MapFamily::StraightCorridor),
            "curve" => Ok(MapFamily::Curve),
            "t" | "t-intersection" => Ok(MapFamily::TIntersection),
            "4way" | "four-way" | "fourway" => Ok(MapFamily::FourWay),
            other => Err(format!("unknown map family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DrivingSide {
    Left,
    Right,
}

impl std::str::FromStr for DrivingSide {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "left" => Ok(DrivingSide::Left),
            "right" => Ok(DrivingSide::Right),
            other => Err(format!("unknown driving side `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapFamilySpec {
    pub family: MapFamily,
    pub lane_width: f64,
    pub lanes_per_direction: u32,
    pub side: DrivingSide,
    pub speed_limit_mps: f64,
}

impl MapFamilySpec {
    fn validate(&self) -> Result<()> {
        if !(self.lane_width > 0.0) {
            return Err(Error::InvalidSpec("lane width must be positive".into()));
        }
        if self.lanes_per_direction == 0 {
            return Err(Error::InvalidSpec("lanes per direction must be >= 1".into()));
        }
        if !(self.speed_limit_mps > 0.0) {
            return Err(Error::InvalidSpec("speed limit must be positive".into()));
        }
        Ok(())
    }
}

const POLYLINE_STEP: f64 = 5.0;

fn sampled_line(from: Vec2, to: Vec2) -> Vec<Vec2> {
    let len = from.distance(to);
    let n = (len / POLYLINE_STEP).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| from + (to - from) * (i as f64 / n as f64))
        .collect()
}

fn sampled_arc(center: Vec2, radius: f64, a0: f64, a1: f64) -> Vec<Vec2> {
    let arc_len = radius * (a1 - a0).abs();
    let n = (arc_len / 3.0).ceil().max(2.0) as usize;
    (0..=n)
        .map(|i| {
            let a = a0 + (a1 - a0) * (i as f64 / n as f64);
            center + Vec2::from_angle(a) * radius
        })
        .collect()
}

/// Quadratic Bezier from p0 (tangent t0) to p2 (tangent t2), used for
/// intersection connector lanes.
fn connector_points(p0: Vec2, t0: Vec2, p2: Vec2, t2: Vec2) -> Vec<Vec2> {
    // control point: intersection of the two tangent lines, if well-defined
    let denom = t0.cross(t2);
    let ctrl = if denom.abs() > 1e-6 {
        let s = (p2 - p0).cross(t2) / denom;
        p0 + t0 * s
    } else {
        (p0 + p2) * 0.5
    };
    let n = 10usize;
    (0..=n)
        .map(|i| {
            let u = i as f64 / n as f64;
            let a = p0 + (ctrl - p0) * u;
            let b = ctrl + (p2 - ctrl) * u;
            a + (b - a) * u
        })
        .collect()
}

/// Build a synthetic map from a family spec. The rng only jitters overall
/// extent; the topology is deterministic in the spec.
pub fn make_synthetic_map(
    spec: &MapFamilySpec,
    rng: &mut RandomStream,
    map_id: &str,
) -> Result<LaneNetwork> {
    spec.validate()?;
    let jitter = rng.gen_range(0.9..1.1);
    match spec.family {
        MapFamily::StraightCorridor => corridor(spec, jitter, map_id),
        MapFamily::Curve => curve(spec, jitter, map_id),
        MapFamily::TIntersection => intersection(spec, jitter, map_id, &[0, 2, 3]),
        MapFamily::FourWay => intersection(spec, jitter, map_id, &[0, 1, 2, 3]),
    }
}

/// Lateral offset (in multiples of the lane width, along the left normal of
/// the travel direction) of lane k for the given driving side.
fn lane_offset(side: DrivingSide, k: u32, w: f64) -> f64 {
    let off = (k as f64 + 0.5) * w;
    match side {
        DrivingSide::Right => -off,
        DrivingSide::Left => off,
    }
}

fn corridor(spec: &MapFamilySpec, jitter: f64, map_id: &str) -> Result<LaneNetwork> {
    let half = 100.0 * jitter;
    let w = spec.lane_width;
    let n = spec.lanes_per_direction;
    let mut lanes = Vec::new();
    for k in 0..n {
        // forward direction +x; left normal is +y
        let y = lane_offset(spec.side, k, w);
        lanes.push(LanePolyline::new(
            lanes.len() as LaneId,
            sampled_line(Vec2::new(-half, y), Vec2::new(half, y)),
        )?);
        // backward direction -x; left normal is -y
        lanes.push(LanePolyline::new(
            lanes.len() as LaneId,
            sampled_line(Vec2::new(half, -y), Vec2::new(-half, -y)),
        )?);
    }
    let b = n as f64 * w;
    let road_edges = vec![
        // bottom edge, drivable above: traverse +x
        OrientedPolyline {
            points: sampled_line(Vec2::new(-half, -b), Vec2::new(half, -b)),
            drivable_left: true,
        },
        // top edge, drivable below: traverse -x
        OrientedPolyline {
            points: sampled_line(Vec2::new(half, b), Vec2::new(-half, b)),
            drivable_left: true,
        },
    ];
    LaneNetwork::new(lanes, BTreeMap::new(), road_edges, spec.speed_limit_mps, map_id.into())
}

fn curve(spec: &MapFamilySpec, jitter: f64, map_id: &str) -> Result<LaneNetwork> {
    let radius = 50.0 * jitter;
    let w = spec.lane_width;
    let n = spec.lanes_per_direction;
    let c = Vec2::ZERO;
    let quarter = std::f64::consts::FRAC_PI_2;
    let mut lanes = Vec::new();
    for k in 0..n {
        // forward = counterclockwise; its left normal points inward (smaller
        // radius), so a positive left offset shrinks the radius
        let r_fwd = radius - lane_offset(spec.side, k, w);
        lanes.push(LanePolyline::new(
            lanes.len() as LaneId,
            sampled_arc(c, r_fwd, 0.0, quarter),
        )?);
        // backward = clockwise; left normal points outward
        let r_bwd = radius + lane_offset(spec.side, k, w);
        lanes.push(LanePolyline::new(
            lanes.len() as LaneId,
            sampled_arc(c, r_bwd, quarter, 0.0),
        )?);
    }
    let b = n as f64 * w;
    let road_edges = vec![
        // left of counterclockwise travel points toward the center, so the
        // inner edge (drivable outward) is traversed clockwise and the outer
        // edge (drivable inward) counterclockwise
        OrientedPolyline {
            points: sampled_arc(c, radius - b, quarter, 0.0),
            drivable_left: true,
        },
        OrientedPolyline {
            points: sampled_arc(c, radius + b, 0.0, quarter),
            drivable_left: true,
        },
    ];
    LaneNetwork::new(lanes, BTreeMap::new(), road_edges, spec.speed_limit_mps, map_id.into())
}

/// Arm directions indexed 0..4: east, north, west, south.
fn arm_dir(i: usize) -> Vec2 {
    match i % 4 {
        0 => Vec2::new(1.0, 0.0),
        1 => Vec2::new(0.0, 1.0),
        2 => Vec2::new(-1.0, 0.0),
        _ => Vec2::new(0.0, -1.0),
    }
}

fn intersection(
    spec: &MapFamilySpec,
    jitter: f64,
    map_id: &str,
    arms: &[usize],
) -> Result<LaneNetwork> {
    let w = spec.lane_width;
    let n = spec.lanes_per_direction;
    let c = n as f64 * w; // central box half-size
    let arm_len = 80.0 * jitter;
    let mut lanes: Vec<LanePolyline> = Vec::new();
    let mut successors: BTreeMap<LaneId, Vec<LaneId>> = BTreeMap::new();
    let mut next_id: LaneId = 0;
    let mut alloc = |points: Vec<Vec2>, lanes: &mut Vec<LanePolyline>| -> Result<LaneId> {
        let id = next_id;
        next_id += 1;
        lanes.push(LanePolyline::new(id, points)?);
        Ok(id)
    };

    // per arm and lane index: (inbound lane id, end pose) and (outbound id, start pose)
    let mut inbound: BTreeMap<(usize, u32), (LaneId, Vec2, Vec2)> = BTreeMap::new();
    let mut outbound: BTreeMap<(usize, u32), (LaneId, Vec2, Vec2)> = BTreeMap::new();

    for &a in arms {
        let u = arm_dir(a);
        let left = u.perp();
        for k in 0..n {
            // outbound: travels +u from the box boundary to the arm end
            let off = lane_offset(spec.side, k, w);
            let start = u * c + left * off;
            let end = u * arm_len + left * off;
            let id = alloc(sampled_line(start, end), &mut lanes)?;
            outbound.insert((a, k), (id, start, u));
            // inbound: travels -u from the arm end to the box boundary
            let start_in = u * arm_len - left * off;
            let end_in = u * c - left * off;
            let id_in = alloc(sampled_line(start_in, end_in), &mut lanes)?;
            inbound.insert((a, k), (id_in, end_in, -u));
        }
    }

    // connectors: through, left turn, right turn where the target arm exists
    for &a in arms {
        for k in 0..n {
            let (in_id, p_in, t_in) = inbound[&(a, k)];
            // t_in = -u_a; through target has u_t = t_in => arm (a+2)%4;
            // left turn: u_t = rot90ccw(t_in) => arm (a+3)%4;
            // right turn: u_t = rot90cw(t_in) => arm (a+1)%4
            for target in [(a + 2) % 4, (a + 3) % 4, (a + 1) % 4] {
                if !arms.contains(&target) {
                    continue;
                }
                let (out_id, p_out, t_out) = outbound[&(target, k)];
                let id = alloc(connector_points(p_in, t_in, p_out, t_out), &mut lanes)?;
                successors.entry(in_id).or_default().push(id);
                successors.entry(id).or_default().push(out_id);
            }
        }
    }

    // road edges: corner chains between adjacent existing arms, straight
    // closures where an arm is missing. Canonical corner between arm `a`
    // and arm `a+1` (counterclockwise neighbor), e.g. east/north:
    // (arm_len, c) -> (c, c) -> (c, arm_len), drivable on the left.
    let mut road_edges = Vec::new();
    for a in 0..4usize {
        let b = (a + 1) % 4;
        let rot = |p: Vec2| -> Vec2 {
            // rotate canonical (east/north) corner by a*90deg
            match a {
                0 => p,
                1 => Vec2::new(-p.y, p.x),
                2 => Vec2::new(-p.x, -p.y),
                _ => Vec2::new(p.y, -p.x),
            }
        };
        match (arms.contains(&a), arms.contains(&b)) {
            (true, true) => {
                let mut pts = sampled_line(rot(Vec2::new(arm_len, c)), rot(Vec2::new(c, c)));
                pts.extend(sampled_line(rot(Vec2::new(c, c)), rot(Vec2::new(c, arm_len))).into_iter().skip(1));
                road_edges.push(OrientedPolyline { points: pts, drivable_left: true });
            }
            (true, false) => {
                // arm a exists, neighbor missing: straight edge along arm a's
                // counterclockwise side up to the box, then close across the
                // missing arm's mouth
                let mut pts = sampled_line(rot(Vec2::new(arm_len, c)), rot(Vec2::new(c, c)));
                pts.extend(sampled_line(rot(Vec2::new(c, c)), rot(Vec2::new(-c, c))).into_iter().skip(1));
                road_edges.push(OrientedPolyline { points: pts, drivable_left: true });
            }
            (false, true) => {
                // missing arm's mouth was closed by the previous pair; emit
                // the remaining side of arm b out to its end
                road_edges.push(OrientedPolyline {
                    points: sampled_line(rot(Vec2::new(c, c)), rot(Vec2::new(c, arm_len))),
                    drivable_left: true,
                });
            }
            (false, false) => {}
        }
    }

    LaneNetwork::new(lanes, successors, road_edges, spec.speed_limit_mps, map_id.into())
}
