//! Lane-level map representation: centerline polylines, a successor graph for
//! lane-to-lane connectivity, and oriented road edges bounding the drivable
//! area. The drivable side of a road edge lies to the LEFT of its traversal
//! direction.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, OrientedRect, Vec2};
use crate::rng::RandomStream;

pub mod synth;

pub type LaneId = u32;

#[derive(Debug, Clone, PartialEq)]
pub struct LanePolyline {
    pub id: LaneId,
    pub points: Vec<Vec2>,
    /// Cumulative arc length per point; `cum[0] == 0`.
    cum: Vec<f64>,
}

impl LanePolyline {
    pub fn new(id: LaneId, points: Vec<Vec2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidNetwork(format!(
                "lane {id} has fewer than 2 points"
            )));
        }
        let mut cum = Vec::with_capacity(points.len());
        cum.push(0.0);
        for w in points.windows(2) {
            let seg = w[0].distance(w[1]);
            if seg <= 0.0 {
                return Err(Error::InvalidNetwork(format!(
                    "lane {id} has duplicate consecutive points"
                )));
            }
            cum.push(cum.last().unwrap() + seg);
        }
        Ok(LanePolyline { id, points, cum })
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    /// Point at arc offset, clamped to [0, length].
    pub fn point_at(&self, offset: f64) -> Vec2 {
        let (i, t) = self.locate(offset);
        self.points[i] + (self.points[i + 1] - self.points[i]) * t
    }

    /// Local tangent heading at arc offset.
    pub fn heading_at(&self, offset: f64) -> f64 {
        let (i, _) = self.locate(offset);
        (self.points[i + 1] - self.points[i]).angle()
    }

    fn locate(&self, offset: f64) -> (usize, f64) {
        let s = offset.clamp(0.0, self.length());
        // binary search for segment containing s
        let i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(self.points.len() - 2),
            Err(i) => i - 1,
        };
        let seg_len = self.cum[i + 1] - self.cum[i];
        (i, (s - self.cum[i]) / seg_len)
    }

    /// Arc offset of the point on this lane closest to `p`, with its distance.
    pub fn project(&self, p: Vec2) -> (f64, f64) {
        let mut best_off = 0.0;
        let mut best_dist = f64::INFINITY;
        for i in 0..self.points.len() - 1 {
            let a = self.points[i];
            let b = self.points[i + 1];
            let ab = b - a;
            let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
            let q = a + ab * t;
            let d = p.distance(q);
            if d < best_dist {
                best_dist = d;
                best_off = self.cum[i] + ab.norm() * t;
            }
        }
        (best_off, best_dist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedPolyline {
    pub points: Vec<Vec2>,
    /// True when the drivable area lies to the left of the traversal direction.
    pub drivable_left: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaneNetwork {
    pub lanes: Vec<LanePolyline>,
    pub successors: BTreeMap<LaneId, Vec<LaneId>>,
    pub road_edges: Vec<OrientedPolyline>,
    pub speed_limit_mps: f64,
    pub map_id: String,
    lane_index: BTreeMap<LaneId, usize>,
}

impl LaneNetwork {
    pub fn new(
        lanes: Vec<LanePolyline>,
        successors: BTreeMap<LaneId, Vec<LaneId>>,
        road_edges: Vec<OrientedPolyline>,
        speed_limit_mps: f64,
        map_id: String,
    ) -> Result<Self> {
        let mut lane_index = BTreeMap::new();
        for (i, lane) in lanes.iter().enumerate() {
            if lane_index.insert(lane.id, i).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate lane id {}", lane.id)));
            }
        }
        for (from, tos) in &successors {
            if !lane_index.contains_key(from) {
                return Err(Error::InvalidNetwork(format!("successor key {from} unknown")));
            }
            for to in tos {
                if !lane_index.contains_key(to) {
                    return Err(Error::InvalidNetwork(format!(
                        "successor {to} of lane {from} unknown"
                    )));
                }
            }
        }
        for edge in &road_edges {
            if edge.points.len() < 2 {
                return Err(Error::InvalidNetwork("road edge with < 2 points".into()));
            }
        }
        if !(speed_limit_mps > 0.0) {
            return Err(Error::InvalidNetwork("speed limit must be positive".into()));
        }
        Ok(LaneNetwork {
            lanes,
            successors,
            road_edges,
            speed_limit_mps,
            map_id,
            lane_index,
        })
    }

    pub fn lane(&self, id: LaneId) -> Option<&LanePolyline> {
        self.lane_index.get(&id).map(|&i| &self.lanes[i])
    }

    pub fn successors_of(&self, id: LaneId) -> &[LaneId] {
        self.successors.get(&id).map_or(&[], |v| v.as_slice())
    }

    /// Lane closest to `p` together with the arc offset of the projection and
    /// its distance.
    pub fn nearest_lane(&self, p: Vec2) -> Option<(LaneId, f64, f64)> {
        let mut best: Option<(LaneId, f64, f64)> = None;
        for lane in &self.lanes {
            let (off, dist) = lane.project(p);
            if best.map_or(true, |(_, _, d)| dist < d) {
                best = Some((lane.id, off, dist));
            }
        }
        best
    }
}

/// Sum of per-lane arc lengths in meters.
pub fn total_lane_length(net: &LaneNetwork) -> f64 {
    net.lanes.iter().map(|l| l.length()).sum()
}

/// A position sampled uniformly over the network's total arc length.
#[derive(Debug, Clone, Copy)]
pub struct SampledLanePosition {
    pub lane: LaneId,
    pub offset: f64,
    pub position: Vec2,
    pub heading: f64,
}

/// Sample a lane position with probability proportional to segment length:
/// pick a polyline segment weighted by its length, then a uniform offset
/// within it.
pub fn sample_lane_position(
    net: &LaneNetwork,
    rng: &mut RandomStream,
) -> Result<SampledLanePosition> {
    let total = total_lane_length(net);
    if net.lanes.is_empty() || total <= 0.0 {
        return Err(Error::EmptyNetwork);
    }
    let mut target = rng.gen_range(0.0..total);
    for lane in &net.lanes {
        if target < lane.length() {
            // locate segment containing `target`, then uniform within it is
            // exactly what the arc-length coordinate already gives us
            let offset = target;
            return Ok(SampledLanePosition {
                lane: lane.id,
                offset,
                position: lane.point_at(offset),
                heading: lane.heading_at(offset),
            });
        }
        target -= lane.length();
    }
    // floating-point edge: fall back to the end of the last lane
    let lane = net.lanes.last().unwrap();
    let offset = lane.length();
    Ok(SampledLanePosition {
        lane: lane.id,
        offset,
        position: lane.point_at(offset),
        heading: lane.heading_at(offset),
    })
}

/// Result of a graph traversal: final point plus the route taken.
#[derive(Debug, Clone)]
pub struct GraphTraversal {
    pub point: Vec2,
    /// Arc distance actually traversed (<= requested when a dead end stops us).
    pub traveled: f64,
    /// Lane ids visited in order, with the arc offset where traversal ends on
    /// the final lane.
    pub route: Vec<LaneId>,
    pub final_offset: f64,
}

/// Advance `distance` meters along the lane graph from `(lane, offset)`.
/// At branches a successor is chosen uniformly at random; at dead ends the
/// traversal stops at the lane's terminal point.
pub fn advance_on_graph_detailed(
    net: &LaneNetwork,
    start_lane: LaneId,
    start_offset: f64,
    distance: f64,
    rng: &mut RandomStream,
) -> Result<GraphTraversal> {
    let mut lane = net.lane(start_lane).ok_or(Error::EmptyNetwork)?;
    let mut offset = start_offset.clamp(0.0, lane.length());
    let mut remaining = distance.max(0.0);
    let mut route = vec![lane.id];
    loop {
        let available = lane.length() - offset;
        if remaining <= available {
            let end = offset + remaining;
            return Ok(GraphTraversal {
                point: lane.point_at(end),
                traveled: distance.max(0.0),
                route,
                final_offset: end,
            });
        }
        remaining -= available;
        let succ = net.successors_of(lane.id);
        if succ.is_empty() {
            let end = lane.length();
            return Ok(GraphTraversal {
                point: lane.point_at(end),
                traveled: distance.max(0.0) - remaining,
                route,
                final_offset: end,
            });
        }
        let next = succ[rng.gen_range(0..succ.len())];
        lane = net.lane(next).ok_or(Error::EmptyNetwork)?;
        offset = 0.0;
        route.push(next);
    }
}

/// Centerline point reached by traversing `distance` meters from `start`.
pub fn advance_on_graph(
    net: &LaneNetwork,
    start_lane: LaneId,
    start_offset: f64,
    distance: f64,
    rng: &mut RandomStream,
) -> Result<Vec2> {
    advance_on_graph_detailed(net, start_lane, start_offset, distance, rng).map(|t| t.point)
}

/// Signed distance from a point to the nearest road edge: positive when the
/// point is on the drivable side (left of edge traversal), negative otherwise.
pub fn signed_distance_point(net: &LaneNetwork, p: Vec2) -> f64 {
    if net.road_edges.is_empty() {
        return f64::INFINITY;
    }
    let mut best_dist = f64::INFINITY;
    let mut best_sign = 1.0;
    for edge in &net.road_edges {
        for w in edge.points.windows(2) {
            let d = point_segment_distance(p, w[0], w[1]);
            if d < best_dist {
                best_dist = d;
                let left = (w[1] - w[0]).cross(p - w[0]) >= 0.0;
                best_sign = if left == edge.drivable_left { 1.0 } else { -1.0 };
            }
        }
    }
    best_sign * best_dist
}

/// Minimum over a footprint's corners of the signed point-to-edge distance.
/// Negative means some corner is off the drivable area. Returns +infinity
/// when the map has no road edges (unbounded drivable area).
pub fn signed_distance_to_road_edge(net: &LaneNetwork, footprint: &OrientedRect) -> f64 {
    footprint
        .corners()
        .into_iter()
        .map(|c| signed_distance_point(net, c))
        .fold(f64::INFINITY, f64::min)
}

/// Reflect the map across the x-axis, turning right-hand geometry into
/// left-hand geometry. Lane point order is preserved; road-edge traversal
/// order is reversed so the drivable area stays on the left of traversal.
pub fn mirror_map(net: &LaneNetwork) -> LaneNetwork {
    let lanes = net
        .lanes
        .iter()
        .map(|l| {
            let pts = l.points.iter().map(|p| Vec2::new(p.x, -p.y)).collect();
            LanePolyline::new(l.id, pts).expect("mirrored lane stays valid")
        })
        .collect();
    let road_edges = net
        .road_edges
        .iter()
        .map(|e| {
            let mut pts: Vec<Vec2> = e.points.iter().map(|p| Vec2::new(p.x, -p.y)).collect();
            pts.reverse();
            OrientedPolyline {
                points: pts,
                drivable_left: e.drivable_left,
            }
        })
        .collect();
    LaneNetwork::new(
        lanes,
        net.successors.clone(),
        road_edges,
        net.speed_limit_mps,
        net.map_id.clone(),
    )
    .expect("mirrored network stays valid")
}

// --- JSON serialization -----------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LaneFile {
    id: LaneId,
    points: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    map_id: String,
    speed_limit_mps: f64,
    lanes: Vec<LaneFile>,
    successors: BTreeMap<String, Vec<LaneId>>,
    road_edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    points: Vec<(f64, f64)>,
    drivable_left: bool,
}

impl LaneNetwork {
    pub fn to_json(&self) -> serde_json::Value {
        let file = MapFile {
            map_id: self.map_id.clone(),
            speed_limit_mps: self.speed_limit_mps,
            lanes: self
                .lanes
                .iter()
                .map(|l| LaneFile {
                    id: l.id,
                    points: l.points.iter().map(|p| (p.x, p.y)).collect(),
                })
                .collect(),
            successors: self
                .successors
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            road_edges: self
                .road_edges
                .iter()
                .map(|e| EdgeFile {
                    points: e.points.iter().map(|p| (p.x, p.y)).collect(),
                    drivable_left: e.drivable_left,
                })
                .collect(),
        };
        serde_json::to_value(file).expect("map serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: MapFile = serde_json::from_value(value.clone())?;
        let lanes = file
            .lanes
            .into_iter()
            .map(|l| {
                LanePolyline::new(l.id, l.points.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut successors = BTreeMap::new();
        for (k, v) in file.successors {
            let id: LaneId = k
                .parse()
                .map_err(|_| Error::InvalidNetwork(format!("bad successor key {k}")))?;
            successors.insert(id, v);
        }
        let road_edges = file
            .road_edges
            .into_iter()
            .map(|e| OrientedPolyline {
                points: e.points.into_iter().map(|(x, y)| Vec2::new(x, y)).collect(),
                drivable_left: e.drivable_left,
            })
            .collect();
        LaneNetwork::new(lanes, successors, road_edges, file.speed_limit_mps, file.map_id)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(&self.to_json())?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;

    fn straight_lane(id: LaneId, from: Vec2, to: Vec2) -> LanePolyline {
        LanePolyline::new(id, vec![from, to]).unwrap()
    }

    fn simple_net(lanes: Vec<LanePolyline>) -> LaneNetwork {
        LaneNetwork::new(lanes, BTreeMap::new(), vec![], 15.0, "test".into()).unwrap()
    }

    #[test]
    fn total_length_empty_is_zero() {
        let net = simple_net(vec![]);
        assert_eq!(total_lane_length(&net), 0.0);
    }

    #[test]
    fn total_length_single_and_sum() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0))]);
        assert_relative_eq!(total_lane_length(&net), 100.0);
        let net2 = simple_net(vec![
            straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0)),
            straight_lane(1, Vec2::new(0.0, 5.0), Vec2::new(50.0, 5.0)),
        ]);
        assert_relative_eq!(total_lane_length(&net2), 150.0);
    }

    #[test]
    fn sample_on_straight_lane_has_zero_heading() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0))]);
        let mut rng = stream(1);
        for _ in 0..100 {
            let s = sample_lane_position(&net, &mut rng).unwrap();
            assert_eq!(s.heading, 0.0);
            assert!(s.offset >= 0.0 && s.offset <= 100.0);
            assert_eq!(s.position.y, 0.0);
        }
    }

    #[test]
    fn sample_frequency_matches_length_weights() {
        let net = simple_net(vec![
            straight_lane(0, Vec2::ZERO, Vec2::new(90.0, 0.0)),
            straight_lane(1, Vec2::new(0.0, 5.0), Vec2::new(10.0, 5.0)),
        ]);
        let mut rng = stream(2);
        let n = 1_000_000;
        let mut first = 0usize;
        for _ in 0..n {
            if sample_lane_position(&net, &mut rng).unwrap().lane == 0 {
                first += 1;
            }
        }
        let freq = first as f64 / n as f64;
        assert!((freq - 0.9).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn sample_empty_network_errors() {
        let net = simple_net(vec![]);
        assert!(matches!(
            sample_lane_position(&net, &mut stream(0)),
            Err(Error::EmptyNetwork)
        ));
    }

    #[test]
    fn advance_zero_distance_is_identity() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0))]);
        let p = advance_on_graph(&net, 0, 20.0, 0.0, &mut stream(0)).unwrap();
        assert_relative_eq!(p.x, 20.0);
    }

    #[test]
    fn advance_within_lane() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0))]);
        let p = advance_on_graph(&net, 0, 20.0, 30.0, &mut stream(0)).unwrap();
        assert_relative_eq!(p.x, 50.0);
    }

    #[test]
    fn advance_crosses_successor() {
        let mut successors = BTreeMap::new();
        successors.insert(0, vec![1]);
        let net = LaneNetwork::new(
            vec![
                straight_lane(0, Vec2::ZERO, Vec2::new(40.0, 0.0)),
                straight_lane(1, Vec2::new(40.0, 0.0), Vec2::new(140.0, 0.0)),
            ],
            successors,
            vec![],
            15.0,
            "t".into(),
        )
        .unwrap();
        // start at offset 30 on A (40 m), advance 20 -> offset 10 on B
        let p = advance_on_graph(&net, 0, 30.0, 20.0, &mut stream(0)).unwrap();
        assert_relative_eq!(p.x, 50.0, epsilon = 1e-12);
    }

    #[test]
    fn advance_stops_at_dead_end() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(100.0, 0.0))]);
        let t = advance_on_graph_detailed(&net, 0, 90.0, 50.0, &mut stream(0)).unwrap();
        assert_relative_eq!(t.point.x, 100.0);
        assert_relative_eq!(t.traveled, 10.0);
    }

    fn corridor_with_edge() -> LaneNetwork {
        // single straight edge along x at y = 0, drivable above (left of +x)
        LaneNetwork::new(
            vec![straight_lane(0, Vec2::new(0.0, 5.0), Vec2::new(100.0, 5.0))],
            BTreeMap::new(),
            vec![OrientedPolyline {
                points: vec![Vec2::ZERO, Vec2::new(100.0, 0.0)],
                drivable_left: true,
            }],
            15.0,
            "edge".into(),
        )
        .unwrap()
    }

    #[test]
    fn corner_on_edge_is_zero() {
        let net = corridor_with_edge();
        // unit square whose lowest corner sits exactly on the edge
        let rect = OrientedRect::new(Vec2::new(50.0, 0.5), 0.0, 1.0, 1.0);
        assert_relative_eq!(signed_distance_to_road_edge(&net, &rect), 0.0);
    }

    #[test]
    fn square_inside_positive() {
        let net = corridor_with_edge();
        let rect = OrientedRect::new(Vec2::new(50.0, 5.0), 0.0, 1.0, 1.0);
        assert_relative_eq!(signed_distance_to_road_edge(&net, &rect), 4.5);
    }

    #[test]
    fn square_outside_negative() {
        let net = corridor_with_edge();
        let rect = OrientedRect::new(Vec2::new(50.0, -1.0), 0.0, 1.0, 1.0);
        assert!(signed_distance_to_road_edge(&net, &rect) < 0.0);
    }

    #[test]
    fn no_edges_gives_infinite_clearance() {
        let net = simple_net(vec![straight_lane(0, Vec2::ZERO, Vec2::new(10.0, 0.0))]);
        let rect = OrientedRect::new(Vec2::ZERO, 0.0, 1.0, 1.0);
        assert_eq!(signed_distance_to_road_edge(&net, &rect), f64::INFINITY);
    }

    #[test]
    fn mirror_reflects_points() {
        let net = corridor_with_edge();
        let m = mirror_map(&net);
        assert_eq!(m.lanes[0].points[0], Vec2::new(0.0, -5.0));
    }

    #[test]
    fn mirror_is_involution() {
        let net = corridor_with_edge();
        let mm = mirror_map(&mirror_map(&net));
        assert_eq!(net, mm);
        assert_eq!(
            total_lane_length(&net).to_bits(),
            total_lane_length(&mirror_map(&net)).to_bits()
        );
    }

    #[test]
    fn json_roundtrip() {
        let net = corridor_with_edge();
        let back = LaneNetwork::from_json(&net.to_json()).unwrap();
        assert_eq!(net, back);
    }
}
