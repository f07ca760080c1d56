//! Waypoint maps: loading, validation, line of sight and shortest paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geom::{distance, segments_intersect, Point};

/// Index of a waypoint. Waypoints are stored sorted by name, so comparing
/// indices compares names.
pub type WpId = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    SpawnCt,
    SpawnT,
    HostagePoint,
    RescueZone,
    HidingSpot,
    AmbushPoint,
}

impl Tag {
    pub const ALL: [Tag; 6] = [
        Tag::SpawnCt,
        Tag::SpawnT,
        Tag::HostagePoint,
        Tag::RescueZone,
        Tag::HidingSpot,
        Tag::AmbushPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::SpawnCt => "spawn_ct",
            Tag::SpawnT => "spawn_t",
            Tag::HostagePoint => "hostage_point",
            Tag::RescueZone => "rescue_zone",
            Tag::HidingSpot => "hiding_spot",
            Tag::AmbushPoint => "ambush_point",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Waypoint {
    pub name: String,
    pub pos: Point,
    pub tags: Vec<Tag>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub a: WpId,
    pub b: WpId,
    /// Traversal length in millimetres.
    pub cost: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HostageSpec {
    pub name: String,
    pub waypoint: WpId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub a: Point,
    pub b: Point,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("map file: {0}")]
    Parse(String),
    #[error("duplicate waypoint `{0}`")]
    DuplicateWaypoint(String),
    #[error("{context} refers to unknown waypoint `{name}`")]
    UnknownWaypoint { context: String, name: String },
    #[error("unknown tag `{tag}` on waypoint `{waypoint}`")]
    UnknownTag { waypoint: String, tag: String },
    #[error("edge {a}-{b}: {reason}")]
    BadEdge { a: String, b: String, reason: String },
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("no waypoint tagged {0}")]
    MissingTag(Tag),
    #[error("hostage `{hostage}` is on `{waypoint}`, which is not a hostage_point")]
    HostageOffPoint { hostage: String, waypoint: String },
    #[error("no hostages defined")]
    NoHostages,
    #[error("visibility: {0}")]
    BadVisibility(String),
    #[error("visibility is asymmetric between `{0}` and `{1}`")]
    AsymmetricVisibility(String, String),
    #[error("waypoint `{0}` does not see itself")]
    NotSelfVisible(String),
}

/// Undirected weighted graph with all-pairs shortest-path tables.
#[derive(Clone, Debug, PartialEq)]
pub struct NavGraph {
    n: usize,
    adjacency: Vec<Vec<(WpId, i64)>>,
    dist: Vec<Option<i64>>,
    next_hop: Vec<Option<WpId>>,
}

/// A shortest path: node sequence (both ends included) and total cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub nodes: Vec<WpId>,
    pub cost: i64,
}

impl NavGraph {
    /// `edges` are undirected `(a, b, cost)`; parallel edges keep the cheapest.
    pub fn new(n: usize, edges: &[(WpId, WpId, i64)]) -> Self {
        let mut adjacency: Vec<Vec<(WpId, i64)>> = vec![Vec::new(); n];
        for &(a, b, c) in edges {
            for (x, y) in [(a, b), (b, a)] {
                match adjacency[x].iter_mut().find(|(m, _)| *m == y) {
                    Some(slot) => slot.1 = slot.1.min(c),
                    None => adjacency[x].push((y, c)),
                }
            }
        }
        for list in &mut adjacency {
            list.sort();
        }
        let mut g = NavGraph {
            n,
            adjacency,
            dist: vec![None; n * n],
            next_hop: vec![None; n * n],
        };
        for target in 0..n {
            g.fill_toward(target);
        }
        g
    }

    /// Dijkstra from `target`, then for every node the smallest-index
    /// neighbour lying on some shortest path toward it. Following those
    /// hops gives the lexicographically smallest shortest path.
    fn fill_toward(&mut self, target: WpId) {
        let n = self.n;
        let mut d: Vec<Option<i64>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        d[target] = Some(0);
        heap.push(Reverse((0i64, target)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if d[u] != Some(du) {
                continue;
            }
            for &(v, w) in &self.adjacency[u] {
                let nd = du + w;
                if d[v].is_none_or(|old| nd < old) {
                    d[v] = Some(nd);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        for x in 0..n {
            self.dist[x * n + target] = d[x];
            if x == target {
                continue;
            }
            if let Some(dx) = d[x] {
                self.next_hop[x * n + target] = self.adjacency[x]
                    .iter()
                    .find(|&&(m, w)| d[m] == Some(dx - w))
                    .map(|&(m, _)| m);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn neighbours(&self, w: WpId) -> &[(WpId, i64)] {
        &self.adjacency[w]
    }

    pub fn edge_cost(&self, a: WpId, b: WpId) -> Option<i64> {
        self.adjacency[a].iter().find(|(m, _)| *m == b).map(|&(_, c)| c)
    }

    pub fn distance(&self, from: WpId, to: WpId) -> Option<i64> {
        self.dist[from * self.n + to]
    }

    /// First step from `from` toward `to`; `None` when already there or
    /// unreachable.
    pub fn next_hop(&self, from: WpId, to: WpId) -> Option<WpId> {
        self.next_hop[from * self.n + to]
    }

    pub fn shortest_path(&self, from: WpId, to: WpId) -> Option<PathResult> {
        let cost = self.distance(from, to)?;
        let mut nodes = vec![from];
        let mut at = from;
        while at != to {
            at = self.next_hop(at, to)?;
            nodes.push(at);
        }
        Some(PathResult { nodes, cost })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapDefinition {
    pub name: String,
    pub waypoints: Vec<Waypoint>,
    pub edges: Vec<Edge>,
    pub hostages: Vec<HostageSpec>,
    pub walls: Vec<Wall>,
    visibility: Vec<bool>,
    graph: NavGraph,
    index: HashMap<String, WpId>,
}

/// How line of sight is specified when building a map.
#[derive(Clone, Debug)]
pub enum Visibility {
    /// Derived: two waypoints see each other unless the segment between
    /// them touches a wall.
    Walls(Vec<Wall>),
    /// Explicit rows of 0/1 in the given waypoint order.
    Matrix(Vec<Vec<bool>>),
}

/// Plain description of a map before validation.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: String,
    /// `(name, position, tags)`
    pub waypoints: Vec<(String, Point, Vec<Tag>)>,
    /// `(a, b, cost in mm or None for the straight-line length)`
    pub edges: Vec<(String, String, Option<i64>)>,
    /// `(hostage name, waypoint name)`
    pub hostages: Vec<(String, String)>,
    pub visibility: Visibility,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    name: String,
    #[serde(default)]
    waypoint: Vec<RawWaypoint>,
    #[serde(default)]
    edge: Vec<RawEdge>,
    #[serde(default)]
    hostage: Vec<RawHostage>,
    #[serde(default)]
    wall: Vec<RawWall>,
    visibility: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWaypoint {
    id: String,
    x: f64,
    y: f64,
    #[serde(default)]
    tags: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    a: String,
    b: String,
    cost: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHostage {
    id: String,
    waypoint: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWall {
    from: [f64; 2],
    to: [f64; 2],
}

pub const WAREHOUSE_SRC: &str = include_str!("../../assets/maps/warehouse.toml");
pub const AIRPLANE_SRC: &str = include_str!("../../assets/maps/airplane.toml");

impl MapDefinition {
    /// Parses a map file's text (TOML; positions and costs in metres).
    pub fn parse(text: &str) -> Result<MapDefinition, MapError> {
        let raw: RawMap = toml::from_str(text).map_err(|e| MapError::Parse(e.to_string()))?;
        if !raw.wall.is_empty() && raw.visibility.is_some() {
            return Err(MapError::BadVisibility(
                "give either walls or a visibility matrix, not both".into(),
            ));
        }
        let mut waypoints = Vec::new();
        for w in raw.waypoint {
            let mut tags = Vec::new();
            for t in &w.tags {
                let tag = Tag::from_name(t).ok_or_else(|| MapError::UnknownTag {
                    waypoint: w.id.clone(),
                    tag: t.clone(),
                })?;
                tags.push(tag);
            }
            waypoints.push((w.id, Point::from_metres(w.x, w.y), tags));
        }
        let visibility = match raw.visibility {
            Some(rows) => {
                let mut matrix = Vec::new();
                for row in rows {
                    let bits: Result<Vec<bool>, MapError> = row
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            other => Err(MapError::BadVisibility(format!(
                                "unexpected character `{other}` in matrix"
                            ))),
                        })
                        .collect();
                    matrix.push(bits?);
                }
                Visibility::Matrix(matrix)
            }
            None => Visibility::Walls(
                raw.wall
                    .iter()
                    .map(|w| Wall {
                        a: Point::from_metres(w.from[0], w.from[1]),
                        b: Point::from_metres(w.to[0], w.to[1]),
                    })
                    .collect(),
            ),
        };
        MapDefinition::build(MapSpec {
            name: raw.name,
            waypoints,
            edges: raw
                .edge
                .into_iter()
                .map(|e| (e.a, e.b, e.cost.map(|c| (c * 1000.0).round() as i64)))
                .collect(),
            hostages: raw.hostage.into_iter().map(|h| (h.id, h.waypoint)).collect(),
            visibility,
        })
    }

    pub fn load(path: &Path) -> Result<MapDefinition, MapError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MapError::Parse(format!("{}: {e}", path.display())))?;
        MapDefinition::parse(&text)
    }

    /// Bundled fixture by name (`warehouse` or `airplane`).
    pub fn fixture(name: &str) -> Option<MapDefinition> {
        let src = match name {
            "warehouse" => WAREHOUSE_SRC,
            "airplane" => AIRPLANE_SRC,
            _ => return None,
        };
        Some(MapDefinition::parse(src).expect("bundled map is valid"))
    }

    /// Validates and indexes a map description.
    pub fn build(spec: MapSpec) -> Result<MapDefinition, MapError> {
        let file_order: Vec<String> = spec.waypoints.iter().map(|w| w.0.clone()).collect();
        let mut wps: Vec<Waypoint> = spec
            .waypoints
            .into_iter()
            .map(|(name, pos, mut tags)| {
                tags.sort();
                tags.dedup();
                Waypoint { name, pos, tags }
            })
            .collect();
        wps.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in wps.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(MapError::DuplicateWaypoint(pair[0].name.clone()));
            }
        }
        let index: HashMap<String, WpId> =
            wps.iter().enumerate().map(|(i, w)| (w.name.clone(), i)).collect();
        let lookup = |context: String, name: &str| {
            index.get(name).copied().ok_or_else(|| MapError::UnknownWaypoint {
                context,
                name: name.to_string(),
            })
        };

        let mut edges = Vec::new();
        for (a, b, cost) in &spec.edges {
            let ia = lookup(format!("edge {a}-{b}"), a)?;
            let ib = lookup(format!("edge {a}-{b}"), b)?;
            let bad = |reason: &str| MapError::BadEdge {
                a: a.clone(),
                b: b.clone(),
                reason: reason.into(),
            };
            if ia == ib {
                return Err(bad("self loop"));
            }
            let cost = cost.unwrap_or_else(|| distance(wps[ia].pos, wps[ib].pos));
            if cost <= 0 {
                return Err(bad("cost must be positive"));
            }
            edges.push(Edge { a: ia, b: ib, cost });
        }

        let n = wps.len();
        for tag in [Tag::SpawnCt, Tag::SpawnT, Tag::HostagePoint, Tag::RescueZone] {
            if !wps.iter().any(|w| w.tags.contains(&tag)) {
                return Err(MapError::MissingTag(tag));
            }
        }
        let graph = NavGraph::new(
            n,
            &edges.iter().map(|e| (e.a, e.b, e.cost)).collect::<Vec<_>>(),
        );
        if let Some(far) = (0..n).find(|&i| graph.distance(0, i).is_none()) {
            return Err(MapError::Disconnected(wps[far].name.clone(), wps[0].name.clone()));
        }

        let mut hostages = Vec::new();
        for (h, w) in &spec.hostages {
            let iw = lookup(format!("hostage {h}"), w)?;
            if !wps[iw].tags.contains(&Tag::HostagePoint) {
                return Err(MapError::HostageOffPoint {
                    hostage: h.clone(),
                    waypoint: w.clone(),
                });
            }
            hostages.push(HostageSpec {
                name: h.clone(),
                waypoint: iw,
            });
        }
        if hostages.is_empty() {
            return Err(MapError::NoHostages);
        }
        hostages.sort_by(|a, b| a.name.cmp(&b.name));

        let (visibility, walls) = match spec.visibility {
            Visibility::Walls(walls) => {
                let mut vis = vec![false; n * n];
                for i in 0..n {
                    for j in 0..n {
                        vis[i * n + j] = i == j
                            || !walls
                                .iter()
                                .any(|w| segments_intersect(wps[i].pos, wps[j].pos, w.a, w.b));
                    }
                }
                (vis, walls)
            }
            Visibility::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(MapError::BadVisibility(format!(
                        "matrix must be {n}x{n} in waypoint order"
                    )));
                }
                let mut vis = vec![false; n * n];
                for (fi, row) in rows.iter().enumerate() {
                    for (fj, &seen) in row.iter().enumerate() {
                        vis[index[&file_order[fi]] * n + index[&file_order[fj]]] = seen;
                    }
                }
                for i in 0..n {
                    if !vis[i * n + i] {
                        return Err(MapError::NotSelfVisible(wps[i].name.clone()));
                    }
                    for j in 0..i {
                        if vis[i * n + j] != vis[j * n + i] {
                            return Err(MapError::AsymmetricVisibility(
                                wps[j].name.clone(),
                                wps[i].name.clone(),
                            ));
                        }
                    }
                }
                (vis, Vec::new())
            }
        };

        Ok(MapDefinition {
            name: spec.name,
            waypoints: wps,
            edges,
            hostages,
            walls,
            visibility,
            graph,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn waypoint(&self, name: &str) -> Option<WpId> {
        self.index.get(name).copied()
    }

    pub fn name_of(&self, w: WpId) -> &str {
        &self.waypoints[w].name
    }

    pub fn pos(&self, w: WpId) -> Point {
        self.waypoints[w].pos
    }

    pub fn has_tag(&self, w: WpId, tag: Tag) -> bool {
        self.waypoints[w].tags.contains(&tag)
    }

    /// Waypoints carrying `tag`, in name order.
    pub fn tagged(&self, tag: Tag) -> impl Iterator<Item = WpId> + '_ {
        (0..self.len()).filter(move |&w| self.has_tag(w, tag))
    }

    pub fn visible(&self, a: WpId, b: WpId) -> bool {
        self.visibility[a * self.len() + b]
    }

    pub fn graph(&self) -> &NavGraph {
        &self.graph
    }

    pub fn shortest_path(&self, from: WpId, to: WpId) -> Option<PathResult> {
        self.graph.shortest_path(from, to)
    }

    pub fn path_cost(&self, from: WpId, to: WpId) -> Option<i64> {
        self.graph.distance(from, to)
    }
}
