//! Tropical genus-one curves with edge lengths in `N^r`.
//!
//! Covers the core, the radius function `lambda`, radial and central
//! alignment, the semistable modification that puts a vertex on every edge
//! crossing a circle level, the resulting layers `L_0..L_m` with their
//! smoothing parameters, and multidegrees of piecewise linear functions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of `Z^r`; an element of the monoid `N^r` when every entry is
/// nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonoidElt(pub Vec<i64>);

impl MonoidElt {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// In the monoid `N^r`.
    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// `self <= other` iff `other - self` lies in `N^r`.
    pub fn le(&self, other: &Self) -> bool {
        other.sub(self).is_nonneg()
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.le(other) && self != other
    }

    pub fn comparable(&self, other: &Self) -> bool {
        self.le(other) || other.le(self)
    }

    /// `k` with `self = k * unit`, if any.
    pub fn ratio(&self, unit: &Self) -> Option<i64> {
        let (i, &u) = unit.0.iter().enumerate().find(|(_, &u)| u != 0)?;
        if self.0[i] % u != 0 {
            return None;
        }
        let k = self.0[i] / u;
        (unit.scale(k) == *self).then_some(k)
    }
}

impl fmt::Display for MonoidElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub type VertexId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: VertexId,
    pub genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub ends: [VertexId; 2],
    pub length: MonoidElt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Leg {
    pub vertex: VertexId,
    pub marking: u32,
}

/// A tropical curve; edge lengths live in `N^monoid_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropicalCurve {
    pub monoid_rank: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub legs: Vec<Leg>,
}

impl TropicalCurve {
    /// Parses and validates a curve file.
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id) {
                return Err(Error::InvalidCurve(format!("duplicate vertex id {}", v.id)));
            }
        }
        if ids.is_empty() {
            return Err(Error::InvalidCurve("no vertices".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            for end in e.ends {
                if !ids.contains(&end) {
                    return Err(Error::InvalidCurve(format!("edge {i} ends at unknown vertex {end}")));
                }
            }
            if e.length.rank() != self.monoid_rank {
                return Err(Error::InvalidCurve(format!(
                    "edge {i} has length of rank {}, expected {}",
                    e.length.rank(),
                    self.monoid_rank
                )));
            }
            if !e.length.is_nonneg() || e.length.is_zero() {
                return Err(Error::InvalidCurve(format!(
                    "edge {i} length {} is not a nonzero monoid element",
                    e.length
                )));
            }
        }
        let mut markings = BTreeSet::new();
        for l in &self.legs {
            if !ids.contains(&l.vertex) {
                return Err(Error::InvalidCurve(format!("leg at unknown vertex {}", l.vertex)));
            }
            if !markings.insert(l.marking) {
                return Err(Error::InvalidCurve(format!("duplicate marking {}", l.marking)));
            }
        }
        if markings.iter().copied().ne(1..=markings.len() as u32) {
            return Err(Error::InvalidCurve("markings must be 1..n".into()));
        }
        let start = *ids.iter().next().expect("nonempty");
        let reached = self.reachable_from(&[start], &BTreeSet::new());
        if reached.len() != ids.len() {
            return Err(Error::InvalidCurve("graph is disconnected".into()));
        }
        Ok(())
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    /// First Betti number of the underlying graph.
    pub fn betti(&self) -> u64 {
        (self.edges.len() as i64 - self.vertices.len() as i64 + 1).max(0) as u64
    }

    pub fn genus(&self) -> u64 {
        self.vertices.iter().map(|v| v.genus as u64).sum::<u64>() + self.betti()
    }

    /// Number of half-edges and legs at `v`; a loop counts twice.
    pub fn valence(&self, v: VertexId) -> usize {
        let half_edges: usize = self
            .edges
            .iter()
            .map(|e| e.ends.iter().filter(|&&x| x == v).count())
            .sum();
        half_edges + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    fn reachable_from(&self, start: &[VertexId], skip_edges: &BTreeSet<usize>) -> BTreeSet<VertexId> {
        let mut seen: BTreeSet<VertexId> = start.iter().copied().collect();
        let mut queue: VecDeque<VertexId> = start.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if skip_edges.contains(&i) {
                    continue;
                }
                if let Some(w) = other_end(e, v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }
}

fn other_end(e: &Edge, v: VertexId) -> Option<VertexId> {
    match e.ends {
        [a, b] if a == v => Some(b),
        [a, b] if b == v => Some(a),
        _ => None,
    }
}

/// The minimal genus-one subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Core {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<usize>,
}

/// The unique genus-one vertex, or the unique cycle.
pub fn core(curve: &TropicalCurve) -> Result<Core> {
    let g = curve.genus();
    if g != 1 {
        return Err(Error::WrongGenus(g));
    }
    if let Some(v) = curve.vertices.iter().find(|v| v.genus == 1) {
        return Ok(Core {
            vertices: BTreeSet::from([v.id]),
            edges: BTreeSet::new(),
        });
    }
    // strip leaves until only the cycle remains
    let mut alive_v: BTreeSet<VertexId> = curve.vertex_ids().into_iter().collect();
    let mut alive_e: BTreeSet<usize> = (0..curve.edges.len()).collect();
    loop {
        let leaf = alive_v.iter().copied().find(|&v| {
            alive_e
                .iter()
                .map(|&i| curve.edges[i].ends.iter().filter(|&&x| x == v).count())
                .sum::<usize>()
                <= 1
        });
        let Some(leaf) = leaf else { break };
        alive_v.remove(&leaf);
        alive_e.retain(|&i| !curve.edges[i].ends.contains(&leaf));
    }
    Ok(Core {
        vertices: alive_v,
        edges: alive_e,
    })
}

/// A piecewise linear function: values at vertices, integer slopes on edges
/// (oriented from the lower to the higher vertex id) and natural slopes on
/// legs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PLFunction {
    pub values: BTreeMap<VertexId, MonoidElt>,
    pub edge_slopes: Vec<i64>,
    pub leg_slopes: Vec<u64>,
}

impl PLFunction {
    pub fn constant(curve: &TropicalCurve, value: MonoidElt) -> Self {
        Self {
            values: curve.vertex_ids().into_iter().map(|v| (v, value.clone())).collect(),
            edge_slopes: vec![0; curve.edges.len()],
            leg_slopes: vec![0; curve.legs.len()],
        }
    }

    /// Checks `f(hi) - f(lo) = m(e) l(e)` on every edge.
    pub fn validate(&self, curve: &TropicalCurve) -> Result<()> {
        if self.edge_slopes.len() != curve.edges.len() || self.leg_slopes.len() != curve.legs.len() {
            return Err(Error::InvalidPL("slope count does not match the graph".into()));
        }
        for v in &curve.vertices {
            match self.values.get(&v.id) {
                Some(x) if x.rank() == curve.monoid_rank => {}
                _ => {
                    return Err(Error::InvalidPL(format!(
                        "no value of rank {} at vertex {}",
                        curve.monoid_rank, v.id
                    )))
                }
            }
        }
        for (i, e) in curve.edges.iter().enumerate() {
            let (lo, hi) = oriented(e);
            let diff = self.values[&hi].sub(&self.values[&lo]);
            if diff != e.length.scale(self.edge_slopes[i]) {
                return Err(Error::InvalidPL(format!(
                    "edge {i}: f({hi}) - f({lo}) = {diff} is not {} times {}",
                    self.edge_slopes[i], e.length
                )));
            }
        }
        Ok(())
    }

    /// Slope of `e` leaving `v`; a loop contributes both directions.
    pub fn outgoing_slope(&self, curve: &TropicalCurve, edge: usize, v: VertexId) -> i64 {
        let e = &curve.edges[edge];
        let (lo, hi) = oriented(e);
        let m = self.edge_slopes[edge];
        (if lo == v { m } else { 0 }) + (if hi == v { -m } else { 0 })
    }
}

fn oriented(e: &Edge) -> (VertexId, VertexId) {
    let [a, b] = e.ends;
    (a.min(b), a.max(b))
}

/// The radius function: distance from the core along the unique path.
pub fn lambda(curve: &TropicalCurve) -> Result<PLFunction> {
    let c = core(curve)?;
    let r = curve.monoid_rank;
    let mut values: BTreeMap<VertexId, MonoidElt> = c.vertices.iter().map(|&v| (v, MonoidElt::zero(r))).collect();
    let mut queue: VecDeque<VertexId> = c.vertices.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for (i, e) in curve.edges.iter().enumerate() {
            if c.edges.contains(&i) {
                continue;
            }
            if let Some(w) = other_end(e, v) {
                if !values.contains_key(&w) {
                    values.insert(w, values[&v].add(&e.length));
                    queue.push_back(w);
                }
            }
        }
    }
    let edge_slopes = curve
        .edges
        .iter()
        .map(|e| {
            let (lo, hi) = oriented(e);
            if values[&hi] == values[&lo] {
                0
            } else if values[&hi].lt(&values[&lo]) {
                -1
            } else {
                1
            }
        })
        .collect();
    Ok(PLFunction {
        values,
        edge_slopes,
        leg_slopes: vec![0; curve.legs.len()],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadialAlignment {
    Aligned,
    Incomparable(VertexId, VertexId),
}

/// Whether all values of `lambda` are pairwise comparable.
pub fn is_radially_aligned(curve: &TropicalCurve) -> Result<RadialAlignment> {
    let lam = lambda(curve)?;
    Ok(match first_incomparable(&lam, &curve.vertex_ids()) {
        Some((a, b)) => RadialAlignment::Incomparable(a, b),
        None => RadialAlignment::Aligned,
    })
}

fn first_incomparable(lam: &PLFunction, ids: &[VertexId]) -> Option<(VertexId, VertexId)> {
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if !lam.values[&a].comparable(&lam.values[&b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Where a vertex of a subdivided curve came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Original,
    Subdivision { edge: usize, level: MonoidElt },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    pub curve: TropicalCurve,
    pub provenance: BTreeMap<VertexId, Provenance>,
    /// Original edge of each new edge.
    pub edge_origin: Vec<usize>,
}

impl Subdivision {
    pub fn inserted(&self) -> usize {
        self.provenance
            .values()
            .filter(|p| matches!(p, Provenance::Subdivision { .. }))
            .count()
    }
}

/// Inserts a genus-0 vertex on every non-core edge at each level of
/// `levels` strictly between the radii of its ends.
pub fn subdivide_at_levels(curve: &TropicalCurve, levels: &[MonoidElt]) -> Result<Subdivision> {
    let c = core(curve)?;
    let lam = lambda(curve)?;
    let mut levels: Vec<MonoidElt> = levels.to_vec();
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i + 1..] {
            if !a.comparable(b) {
                return Err(Error::InvalidCurve(format!("levels {a} and {b} are incomparable")));
            }
        }
    }
    sort_chain(&mut levels);

    let mut next_id = curve.vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1;
    let mut out = TropicalCurve {
        monoid_rank: curve.monoid_rank,
        vertices: curve.vertices.clone(),
        edges: Vec::new(),
        legs: curve.legs.clone(),
    };
    let mut provenance: BTreeMap<VertexId, Provenance> = curve
        .vertex_ids()
        .into_iter()
        .map(|v| (v, Provenance::Original))
        .collect();
    let mut edge_origin = Vec::new();

    for (i, e) in curve.edges.iter().enumerate() {
        if c.edges.contains(&i) {
            out.edges.push(e.clone());
            edge_origin.push(i);
            continue;
        }
        let [x, y] = e.ends;
        let (parent, child) = if lam.values[&x].le(&lam.values[&y]) {
            (x, y)
        } else {
            (y, x)
        };
        let base = &lam.values[&parent];
        let mut cuts: Vec<(MonoidElt, MonoidElt)> = Vec::new();
        for level in &levels {
            if !base.lt(level) {
                continue;
            }
            let dist = level.sub(base);
            if dist.lt(&e.length) {
                cuts.push((level.clone(), dist));
            } else if !e.length.le(&dist) {
                return Err(Error::NonAligned {
                    edge: i,
                    distance: dist.to_string(),
                    reason: format!("incomparable with the edge length {}", e.length),
                });
            }
        }
        let mut prev = parent;
        let mut prev_dist = MonoidElt::zero(curve.monoid_rank);
        for (level, dist) in cuts {
            let id = next_id;
            next_id += 1;
            out.vertices.push(Vertex {
                id,
                genus: 0,
                name: None,
            });
            provenance.insert(id, Provenance::Subdivision { edge: i, level });
            out.edges.push(Edge {
                ends: [prev, id],
                length: dist.sub(&prev_dist),
            });
            edge_origin.push(i);
            prev = id;
            prev_dist = dist;
        }
        out.edges.push(Edge {
            ends: [prev, child],
            length: e.length.sub(&prev_dist),
        });
        edge_origin.push(i);
    }
    Ok(Subdivision {
        curve: out,
        provenance,
        edge_origin,
    })
}

/// The distinct radii `<= delta`, as a chain from 0 up to `delta`.
fn circle_levels(curve: &TropicalCurve, lam: &PLFunction, delta: &MonoidElt) -> Result<Vec<MonoidElt>> {
    let inside: Vec<VertexId> = curve
        .vertex_ids()
        .into_iter()
        .filter(|v| lam.values[v].le(delta))
        .collect();
    if let Some((a, b)) = first_incomparable(lam, &inside) {
        return Err(Error::NotRadiallyAligned(a, b));
    }
    let mut levels: Vec<MonoidElt> = inside.iter().map(|v| lam.values[v].clone()).collect();
    sort_chain(&mut levels);
    Ok(levels)
}

/// Sorts and dedups pairwise comparable elements.
fn sort_chain(levels: &mut Vec<MonoidElt>) {
    levels.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if a.le(b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    levels.dedup();
}

/// Subdivides every edge crossing a circle level `<= delta`.
pub fn semistable_modification(curve: &TropicalCurve, delta: &MonoidElt) -> Result<Subdivision> {
    let lam = lambda(curve)?;
    let levels = circle_levels(curve, &lam, delta)?;
    subdivide_at_levels(curve, &levels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub index: usize,
    pub level: MonoidElt,
    pub vertices: Vec<VertexId>,
    /// Symbol `t_i` of the nodes joining this layer to the previous one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    /// The common length of those nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<MonoidElt>,
}

/// A node joining the outermost layer to the one below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OuterNode {
    /// Index into the edges of the modified curve.
    pub edge: usize,
    pub inner: VertexId,
    pub branch: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    pub circle_vertex: VertexId,
    pub core: Core,
    pub lambda: PLFunction,
    pub delta: MonoidElt,
    pub layers: Vec<Layer>,
    pub parameters: Vec<String>,
    /// `t1*...*tm`, or `1` when there is a single layer.
    pub product: String,
    pub outer_nodes: Vec<OuterNode>,
    pub modification: Subdivision,
    /// `delta = 0`: the circle is the core itself.
    pub trivial: bool,
}

impl AlignmentReport {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// Radius function of the modified curve.
    pub fn modified_lambda(&self) -> Result<PLFunction> {
        lambda(&self.modification.curve)
    }
}

/// Checks that the circle of radius `lambda(vertex)` is radially aligned and
/// that its interior is stable, and extracts the layers.
///
/// Stability counts every half-edge at an interior vertex, including
/// those leaving the circle, plus legs: genus 0 needs 3, genus 1 needs 1.
pub fn check_central_alignment(curve: &TropicalCurve, vertex: VertexId) -> Result<AlignmentReport> {
    curve.validate()?;
    let c = core(curve)?;
    let lam = lambda(curve)?;
    let delta = lam
        .values
        .get(&vertex)
        .cloned()
        .ok_or_else(|| Error::InvalidCurve(format!("unknown vertex {vertex}")))?;
    let levels = circle_levels(curve, &lam, &delta)?;

    for v in &curve.vertices {
        if lam.values[&v.id].lt(&delta) {
            let need = if v.genus == 0 { 3 } else { 1 };
            if curve.valence(v.id) < need {
                return Err(Error::NotStable(v.id));
            }
        }
    }

    let modification = subdivide_at_levels(curve, &levels)?;
    let mlam = lambda(&modification.curve)?;
    let mut layers: Vec<Layer> = levels
        .iter()
        .enumerate()
        .map(|(i, level)| Layer {
            index: i,
            level: level.clone(),
            vertices: modification
                .curve
                .vertex_ids()
                .into_iter()
                .filter(|v| &mlam.values[v] == level)
                .collect(),
            parameter: (i > 0).then(|| format!("t{i}")),
            step: (i > 0).then(|| level.sub(&levels[i - 1])),
        })
        .collect();
    for layer in &mut layers {
        layer.vertices.sort_unstable();
    }

    // nodes between consecutive layers all have the layer step as length
    let layer_of: BTreeMap<VertexId, usize> = layers
        .iter()
        .flat_map(|l| l.vertices.iter().map(move |&v| (v, l.index)))
        .collect();
    let mut outer_nodes = Vec::new();
    let m = layers.len() - 1;
    for (i, e) in modification.curve.edges.iter().enumerate() {
        let [a, b] = e.ends;
        let (Some(&la), Some(&lb)) = (layer_of.get(&a), layer_of.get(&b)) else {
            continue;
        };
        if la == lb {
            continue;
        }
        let (inner, branch, hi) = if la < lb { (a, b, lb) } else { (b, a, la) };
        let step = layers[hi].step.as_ref().expect("positive layer");
        if &e.length != step {
            return Err(Error::InvalidCurve(format!(
                "edge {i} between layers {} and {hi} has length {}, expected {step}",
                hi - 1,
                e.length
            )));
        }
        if hi == m {
            outer_nodes.push(OuterNode { edge: i, inner, branch });
        }
    }

    let parameters: Vec<String> = (1..=m).map(|i| format!("t{i}")).collect();
    let product = if parameters.is_empty() {
        "1".to_string()
    } else {
        parameters.join("*")
    };
    Ok(AlignmentReport {
        circle_vertex: vertex,
        core: c,
        lambda: lam,
        trivial: delta.is_zero(),
        delta,
        layers,
        parameters,
        product,
        outer_nodes,
        modification,
    })
}

/// Degree of `O(f)` on each component: the sum of outgoing slopes along
/// edges and legs.
pub fn multidegree(curve: &TropicalCurve, f: &PLFunction) -> Result<BTreeMap<VertexId, i64>> {
    f.validate(curve)?;
    let mut deg: BTreeMap<VertexId, i64> = curve.vertex_ids().into_iter().map(|v| (v, 0)).collect();
    for (i, e) in curve.edges.iter().enumerate() {
        let (lo, hi) = oriented(e);
        *deg.get_mut(&lo).expect("vertex") += f.outgoing_slope(curve, i, lo);
        if hi != lo {
            *deg.get_mut(&hi).expect("vertex") += f.outgoing_slope(curve, i, hi);
        }
    }
    for (leg, &s) in curve.legs.iter().zip(&f.leg_slopes) {
        *deg.get_mut(&leg.vertex).expect("vertex") += s as i64;
    }
    Ok(deg)
}

/// Graphviz rendering. Vertices show genus and radius; subdivision
/// vertices are dashed.
pub fn to_dot(
    curve: &TropicalCurve,
    lam: Option<&PLFunction>,
    provenance: Option<&BTreeMap<VertexId, Provenance>>,
) -> String {
    let mut s = String::from("graph tropical {\n");
    for v in &curve.vertices {
        let name = v.name.clone().unwrap_or_else(|| v.id.to_string());
        let mut label = format!("{name}\\ng={}", v.genus);
        if let Some(l) = lam.and_then(|l| l.values.get(&v.id)) {
            let _ = write!(label, "\\nλ={l}");
        }
        let sub = provenance
            .and_then(|p| p.get(&v.id))
            .is_some_and(|p| matches!(p, Provenance::Subdivision { .. }));
        let style = if sub {
            ", style=dashed, shape=circle"
        } else if v.genus > 0 {
            ", shape=doublecircle"
        } else {
            ", shape=circle"
        };
        let _ = writeln!(s, "  v{} [label=\"{label}\"{style}];", v.id);
    }
    for e in &curve.edges {
        let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.ends[0], e.ends[1], e.length);
    }
    for l in &curve.legs {
        let _ = writeln!(s, "  leg{} [shape=none, label=\"{}\"];", l.marking, l.marking);
        let _ = writeln!(s, "  v{} -- leg{};", l.vertex, l.marking);
    }
    s.push_str("}\n");
    s
}

/// Random leg-free genus-one curve whose radii form a chain: a genus-one
/// vertex or a cycle, with a random tree attached. Lengths are positive
/// multiples of one direction in `N^rank`, so every pair of radii is
/// comparable.
pub fn random_aligned_curve<R: Rng + ?Sized>(rng: &mut R, rank: usize, tree_vertices: usize) -> TropicalCurve {
    let dir: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=2)).collect();
    let dir = if dir.iter().all(|&x| x == 0) {
        vec![1; rank]
    } else {
        dir
    };
    let dir = MonoidElt(dir);
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut next = if rng.gen_bool(0.5) {
        vertices.push(Vertex {
            id: 0,
            genus: 1,
            name: None,
        });
        1
    } else {
        let k = rng.gen_range(1..=3);
        for i in 0..k {
            vertices.push(Vertex {
                id: i,
                genus: 0,
                name: None,
            });
        }
        for i in 0..k {
            edges.push(Edge {
                ends: [i, (i + 1) % k],
                length: dir.scale(rng.gen_range(1..=3)),
            });
        }
        k
    };
    for _ in 0..tree_vertices {
        let parent = rng.gen_range(0..next);
        vertices.push(Vertex {
            id: next,
            genus: 0,
            name: None,
        });
        edges.push(Edge {
            ends: if rng.gen_bool(0.5) {
                [parent, next]
            } else {
                [next, parent]
            },
            length: dir.scale(rng.gen_range(1..=3)),
        });
        next += 1;
    }
    TropicalCurve {
        monoid_rank: rank,
        vertices,
        edges,
        legs: Vec::new(),
    }
}
