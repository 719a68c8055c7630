//! File formats for curve models and jets, plus the standard models used by
//! the tests and the self-test battery.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::artin::{ElementLiteral, RingDescriptor, RingElement, RingSpec};
use crate::contract::{CurveModel, JetFunction, NodeChart, DEFAULT_JET_ORDER};
use crate::error::{Error, Result};
use crate::laurent::{Differential, LaurentSeries, SeriesLiteral};
use crate::tropical::{check_central_alignment, Edge, MonoidElt, TropicalCurve, Vertex, VertexId};

pub const FORMAT_VERSION: u32 = 1;

pub mod fixtures {
    pub const LAYERS1: &str = include_str!("../fixtures/layers1.json");
    pub const SEMISTABLE: &str = include_str!("../fixtures/semistable.json");
    pub const INCOMPARABLE: &str = include_str!("../fixtures/incomparable.json");
    pub const TACNODE: &str = include_str!("../fixtures/tacnode.json");
    pub const TACNODE_MEMBER: &str = include_str!("../fixtures/tacnode_member.json");
    pub const TACNODE_NONMEMBER: &str = include_str!("../fixtures/tacnode_nonmember.json");
    pub const TACNODE_K: &str = include_str!("../fixtures/tacnode_k.json");
    pub const DLOG: &str = include_str!("../fixtures/dlog.json");
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn parse_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartLiteral {
    pub branch: VertexId,
    pub coeffs: Vec<ElementLiteral>,
}

fn default_jet_order() -> usize {
    DEFAULT_JET_ORDER
}

/// A curve model on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub ring: RingSpec,
    pub curve: TropicalCurve,
    /// The vertex whose radius is the circle radius.
    pub circle_vertex: VertexId,
    pub parameters: BTreeMap<String, ElementLiteral>,
    pub charts: Vec<ChartLiteral>,
    #[serde(default = "default_jet_order")]
    pub jet_order: usize,
}

impl ScenarioFile {
    pub fn parse(s: &str) -> Result<Self> {
        let f: Self = parse_json(s)?;
        check_version(f.version)?;
        Ok(f)
    }

    pub fn ring(&self) -> Result<Arc<RingDescriptor>> {
        RingDescriptor::from_spec(&self.ring)
    }

    /// Builds the model. The twisting sheaf is taken to inject when every
    /// assigned parameter is nonzero, i.e. comes from a non-zero-divisor of
    /// the power series ring over `k`.
    pub fn model(&self) -> Result<CurveModel> {
        let ring = self.ring()?;
        self.curve.validate()?;
        let report = check_central_alignment(&self.curve, self.circle_vertex)?;
        let assignment: BTreeMap<String, RingElement> = self
            .parameters
            .iter()
            .map(|(k, v)| Ok((k.clone(), RingElement::from_literal(&ring, v)?)))
            .collect::<Result<_>>()?;
        let injective = assignment.values().all(|t| !t.is_zero());
        let charts = self
            .charts
            .iter()
            .map(|c| {
                let coeffs = c
                    .coeffs
                    .iter()
                    .map(|l| RingElement::from_literal(&ring, l))
                    .collect::<Result<Vec<_>>>()?;
                NodeChart::new(c.branch, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        CurveModel::new(&ring, report, assignment, charts, self.jet_order, injective)
    }

    pub fn from_model(model: &CurveModel, curve: &TropicalCurve) -> Self {
        Self {
            version: FORMAT_VERSION,
            ring: model.ring().to_spec(),
            curve: curve.clone(),
            circle_vertex: model.report().circle_vertex,
            parameters: model
                .assignment()
                .iter()
                .map(|(k, v)| (k.clone(), v.to_literal()))
                .collect(),
            charts: model
                .charts()
                .iter()
                .map(|c| ChartLiteral {
                    branch: c.branch,
                    coeffs: c.coeffs.iter().map(RingElement::to_literal).collect(),
                })
                .collect(),
            jet_order: model.jet_order(),
        }
    }
}

/// A jet on disk; `level` selects `A_level` of the scenario's tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetFile {
    pub version: u32,
    #[serde(default)]
    pub level: Option<usize>,
    pub constant: ElementLiteral,
    pub tails: Vec<ChartLiteral>,
}

impl JetFile {
    pub fn parse(s: &str) -> Result<Self> {
        let f: Self = parse_json(s)?;
        check_version(f.version)?;
        Ok(f)
    }

    /// The jet in `model`'s ring; tails are padded with zeros to the jet
    /// order.
    pub fn jet(&self, model: &CurveModel) -> Result<JetFunction> {
        let ring = model.ring();
        let mut f = JetFunction::constant(model, RingElement::from_literal(ring, &self.constant)?);
        for t in &self.tails {
            let i = model
                .report()
                .outer_nodes
                .iter()
                .position(|n| n.branch == t.branch)
                .ok_or_else(|| Error::InvalidModel(format!("branch {} is not outer", t.branch)))?;
            if t.coeffs.len() > model.jet_order() - 1 {
                return Err(Error::InvalidModel(format!(
                    "branch {} has {} tail coefficients, jet order {} allows {}",
                    t.branch,
                    t.coeffs.len(),
                    model.jet_order(),
                    model.jet_order() - 1
                )));
            }
            for (k, l) in t.coeffs.iter().enumerate() {
                f.tails[i][k] = RingElement::from_literal(ring, l)?;
            }
        }
        Ok(f)
    }

    pub fn from_jet(model: &CurveModel, f: &JetFunction, level: Option<usize>) -> Self {
        Self {
            version: FORMAT_VERSION,
            level,
            constant: f.constant.to_literal(),
            tails: model
                .report()
                .outer_nodes
                .iter()
                .zip(&f.tails)
                .map(|(n, t)| ChartLiteral {
                    branch: n.branch,
                    coeffs: t.iter().map(RingElement::to_literal).collect(),
                })
                .collect(),
        }
    }
}

/// A differential on disk, for residue computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialFile {
    pub version: u32,
    pub ring: RingSpec,
    pub differential: SeriesLiteral,
}

impl DifferentialFile {
    pub fn parse(s: &str) -> Result<Self> {
        let f: Self = parse_json(s)?;
        check_version(f.version)?;
        Ok(f)
    }

    pub fn differential(&self) -> Result<Differential> {
        let ring = RingDescriptor::from_spec(&self.ring)?;
        Ok(Differential::new(LaurentSeries::from_literal(
            &ring,
            &self.differential,
        )?))
    }
}

fn vertex(id: VertexId, genus: u32, name: &str) -> Vertex {
    Vertex {
        id,
        genus,
        name: Some(name.into()),
    }
}

fn unit_edge(a: VertexId, b: VertexId) -> Edge {
    Edge {
        ends: [a, b],
        length: MonoidElt(vec![1]),
    }
}

fn charts_for(branches: &[VertexId], leads: &[RingElement], jet_order: usize) -> Result<Vec<NodeChart>> {
    branches
        .iter()
        .zip(leads)
        .map(|(&b, g)| {
            let mut coeffs = vec![g.clone()];
            coeffs.extend((1..jet_order).map(|_| RingElement::zero(g.ring())));
            NodeChart::new(b, coeffs)
        })
        .collect()
}

/// A genus-one core `E` with `n` rational branches at unit length;
/// one layer with `t1 -> t`.
pub fn star_curve(n: usize) -> TropicalCurve {
    let mut vertices = vec![vertex(0, 1, "E")];
    let mut edges = Vec::new();
    for i in 1..=n as u32 {
        vertices.push(vertex(i, 0, &format!("R{i}")));
        edges.push(unit_edge(0, i));
    }
    TropicalCurve {
        monoid_rank: 1,
        vertices,
        edges,
        legs: Vec::new(),
    }
}

pub fn star_model(
    ring: &Arc<RingDescriptor>,
    t: &RingElement,
    leads: &[RingElement],
    jet_order: usize,
) -> Result<CurveModel> {
    let curve = star_curve(leads.len());
    let report = check_central_alignment(&curve, 1)?;
    let branches: Vec<VertexId> = (1..=leads.len() as u32).collect();
    CurveModel::new(
        ring,
        report,
        BTreeMap::from([("t1".to_string(), t.clone())]),
        charts_for(&branches, leads, jet_order)?,
        jet_order,
        !t.is_zero(),
    )
}

/// Core `X`, a bridge `T`, and `n >= 2` branches on `T`; two layers.
pub fn two_layer_curve(n: usize) -> TropicalCurve {
    let mut vertices = vec![vertex(0, 1, "X"), vertex(1, 0, "T")];
    let mut edges = vec![unit_edge(0, 1)];
    for i in 0..n as u32 {
        vertices.push(vertex(i + 2, 0, &format!("R{}", i + 1)));
        edges.push(unit_edge(1, i + 2));
    }
    TropicalCurve {
        monoid_rank: 1,
        vertices,
        edges,
        legs: Vec::new(),
    }
}

pub fn two_layer_model(
    ring: &Arc<RingDescriptor>,
    t1: &RingElement,
    t2: &RingElement,
    leads: &[RingElement],
    jet_order: usize,
) -> Result<CurveModel> {
    let curve = two_layer_curve(leads.len());
    let report = check_central_alignment(&curve, 2)?;
    let branches: Vec<VertexId> = (2..2 + leads.len() as u32).collect();
    CurveModel::new(
        ring,
        report,
        BTreeMap::from([("t1".to_string(), t1.clone()), ("t2".to_string(), t2.clone())]),
        charts_for(&branches, leads, jet_order)?,
        jet_order,
        !t1.is_zero() && !t2.is_zero(),
    )
}

/// Two branches over `k[u]/...` with `t1 = t2 = u`, so `t = u^2`.
pub fn tacnode_model(ring: &Arc<RingDescriptor>, leads: &[RingElement], jet_order: usize) -> Result<CurveModel> {
    let u = RingElement::var(ring, 0);
    two_layer_model(ring, &u, &u, leads, jet_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contract::is_in_contraction;

    #[test]
    fn tacnode_fixture_files() {
        let s = ScenarioFile::parse(fixtures::TACNODE).unwrap();
        let m = s.model().unwrap();
        assert_eq!(m.nodes(), 2);
        assert!(m.injective());
        let yes = JetFile::parse(fixtures::TACNODE_MEMBER).unwrap().jet(&m).unwrap();
        assert!(is_in_contraction(&m, &yes).unwrap());
        let no = JetFile::parse(fixtures::TACNODE_NONMEMBER).unwrap().jet(&m).unwrap();
        assert!(!is_in_contraction(&m, &no).unwrap());
        let k = m.at_level(0).unwrap();
        let j = JetFile::parse(fixtures::TACNODE_K).unwrap().jet(&k).unwrap();
        assert!(is_in_contraction(&k, &j).unwrap());
    }

    #[test]
    fn round_trips() {
        {
            let src = fixtures::TACNODE;
            let s = ScenarioFile::parse(src).unwrap();
            let again = ScenarioFile::parse(&serde_json::to_string(&s).unwrap()).unwrap();
            assert_eq!(again, s);
            let m = s.model().unwrap();
            let rebuilt = ScenarioFile::from_model(&m, &s.curve).model().unwrap();
            assert_eq!(rebuilt.charts(), m.charts());
        }
        for src in [
            fixtures::TACNODE_MEMBER,
            fixtures::TACNODE_NONMEMBER,
            fixtures::TACNODE_K,
        ] {
            let j = JetFile::parse(src).unwrap();
            assert_eq!(JetFile::parse(&serde_json::to_string(&j).unwrap()).unwrap(), j);
        }
        for src in [fixtures::LAYERS1, fixtures::SEMISTABLE, fixtures::INCOMPARABLE] {
            let c = TropicalCurve::from_json(src).unwrap();
            assert_eq!(
                TropicalCurve::from_json(&serde_json::to_string(&c).unwrap()).unwrap(),
                c
            );
        }
        let d = DifferentialFile::parse(fixtures::DLOG).unwrap();
        assert_eq!(DifferentialFile::parse(&serde_json::to_string(&d).unwrap()).unwrap(), d);
        assert!(d.differential().unwrap().residue().unwrap().is_one());
    }

    #[test]
    fn strict_parsing() {
        let bad_version = fixtures::TACNODE.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(ScenarioFile::parse(&bad_version), Err(Error::Parse(_))));
        let extra = fixtures::TACNODE.replace("\"jet_order\": 4", "\"jet_order\": 4, \"colour\": 1");
        assert!(matches!(ScenarioFile::parse(&extra), Err(Error::Parse(_))));
        let zero_lead =
            fixtures::TACNODE.replace("[{\"0\": \"1\"}, {\"0\": \"2\"}, {\"1\": \"1\"}]", "[{\"1\": \"1\"}]");
        assert!(matches!(
            ScenarioFile::parse(&zero_lead).unwrap().model(),
            Err(Error::ChartInvariant(_))
        ));
    }
}
