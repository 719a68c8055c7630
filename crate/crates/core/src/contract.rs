//! Twisted residues at the outer nodes of a centrally aligned curve, the
//! residue condition cutting out functions on the contraction, and lifting
//! such functions through the tower `A_n = A/m^{n+1}`.
//!
//! Near the outermost layer `L_m` the generating differential is recorded by
//! its chart at each node `p_i` on the branch `R_i`:
//! `[t](g_{-2} x^{-2} + g_0 + g_1 x + ...) dx` with `t = t_1...t_m` kept as a
//! formal twist. A function near the contracted point is a jet
//! `c + c_1^i x + c_2^i x^2 + ...` with a shared constant `c`.
//!
//! The genus-one core enters only through its residue pairing: principal
//! parts on `L_0` come from a function iff their total residue vanishes.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::artin::{same_ring, RingDescriptor, RingElement};
use crate::error::{Error, Result};
use crate::laurent::{Differential, LaurentSeries};
use crate::singular::SingularityPresentation;
use crate::tropical::{AlignmentReport, MonoidElt, VertexId};

pub const DEFAULT_JET_ORDER: usize = 4;

/// The differential near one outer node, on its outer branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeChart {
    pub branch: VertexId,
    /// `g_{-2}, g_0, g_1, ...`; there is no `x^{-1}` term.
    pub coeffs: Vec<RingElement>,
}

impl NodeChart {
    pub fn new(branch: VertexId, coeffs: Vec<RingElement>) -> Result<Self> {
        let Some(lead) = coeffs.first() else {
            return Err(Error::ChartInvariant(format!("chart on {branch} is empty")));
        };
        if !lead.is_unit() {
            return Err(Error::ChartInvariant(format!(
                "leading coefficient {lead} on branch {branch} is not a unit"
            )));
        }
        let ring = lead.ring();
        if coeffs.iter().any(|c| !same_ring(c.ring(), ring)) {
            return Err(Error::MixedRings);
        }
        Ok(Self { branch, coeffs })
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        self.coeffs[0].ring()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `g_{-2}`.
    pub fn lead(&self) -> &RingElement {
        &self.coeffs[0]
    }

    /// Coefficient series of the differential without its twist; known below
    /// `x^{order-2}`.
    pub fn series(&self) -> LaurentSeries {
        let terms = self.coeffs.iter().enumerate().map(|(k, c)| {
            let e = if k == 0 { -2 } else { k as i64 - 1 };
            (e, c.clone())
        });
        LaurentSeries::new(self.ring(), terms, Some(self.order() as i64 - 1)).expect("single ring")
    }

    pub fn transfer(&self, ring: &Arc<RingDescriptor>) -> Self {
        Self {
            branch: self.branch,
            coeffs: self.coeffs.iter().map(|c| c.transfer(ring)).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, branch: VertexId, order: usize, rng: &mut R) -> Self {
        let mut coeffs = vec![RingElement::random_unit(ring, rng)];
        coeffs.extend((1..order).map(|_| RingElement::random(ring, rng)));
        Self { branch, coeffs }
    }
}

/// A function near the contracted point, seen in the outer branch charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetFunction {
    pub constant: RingElement,
    /// `tails[i][k]` is `c_{k+1}` at the `i`-th outer node.
    pub tails: Vec<Vec<RingElement>>,
}

impl JetFunction {
    pub fn constant(model: &CurveModel, c: RingElement) -> Self {
        let zero = RingElement::zero(&model.ring);
        Self {
            constant: c,
            tails: vec![vec![zero; model.jet_order - 1]; model.nodes()],
        }
    }

    pub fn zero(model: &CurveModel) -> Self {
        Self::constant(model, RingElement::zero(&model.ring))
    }

    pub fn random<R: Rng + ?Sized>(model: &CurveModel, rng: &mut R) -> Self {
        Self {
            constant: RingElement::random(&model.ring, rng),
            tails: (0..model.nodes())
                .map(|_| {
                    (1..model.jet_order)
                        .map(|_| RingElement::random(&model.ring, rng))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        self.constant.ring()
    }

    /// Number of known coefficients per branch, constant included.
    pub fn order(&self) -> usize {
        1 + self.tails.iter().map(Vec::len).min().unwrap_or(usize::MAX - 1)
    }

    /// `c_1` at node `i`.
    pub fn c1(&self, i: usize) -> Result<&RingElement> {
        self.tails[i].first().ok_or(Error::JetTooShort { need: 2, have: 1 })
    }

    /// The expansion at node `i`, known below `x^order`.
    pub fn series(&self, i: usize) -> LaurentSeries {
        let tail = &self.tails[i];
        let terms = std::iter::once((0, self.constant.clone()))
            .chain(tail.iter().enumerate().map(|(k, c)| (k as i64 + 1, c.clone())));
        LaurentSeries::new(self.ring(), terms, Some(tail.len() as i64 + 1)).expect("single ring")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.checked_add(b))
    }

    /// Branchwise product, truncated at the shorter order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.tails.len() != other.tails.len() {
            return Err(Error::InvalidModel("jets have different node counts".into()));
        }
        let constant = self.constant.checked_mul(&other.constant)?;
        let tails = (0..self.tails.len())
            .map(|i| {
                let p = self.series(i).mul(&other.series(i))?;
                let top = p.prec().expect("truncated jets");
                (1..top).map(|k| p.coeff(k)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self { constant, tails })
    }

    fn zip(&self, other: &Self, op: impl Fn(&RingElement, &RingElement) -> Result<RingElement>) -> Result<Self> {
        if self.tails.len() != other.tails.len() {
            return Err(Error::InvalidModel("jets have different node counts".into()));
        }
        Ok(Self {
            constant: op(&self.constant, &other.constant)?,
            tails: self
                .tails
                .iter()
                .zip(&other.tails)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| op(x, y)).collect())
                .collect::<Result<_>>()?,
        })
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        Self {
            constant: f(&self.constant),
            tails: self.tails.iter().map(|t| t.iter().map(&f).collect()).collect(),
        }
    }

    /// Image under the quotient map, or the monomial section when `ring`
    /// is a thickening.
    pub fn transfer(&self, ring: &Arc<RingDescriptor>) -> Self {
        self.map(|c| c.transfer(ring))
    }
}

/// `[t_1...t_layer] * payload`, an element of `O_S(-twist)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedValue {
    pub twist: MonoidElt,
    pub layer: usize,
    #[serde(serialize_with = "ser_element")]
    pub payload: RingElement,
}

impl TwistedValue {
    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }
}

fn ser_element<S: serde::Serializer>(e: &RingElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    e.to_literal().serialize(s)
}

/// Everything needed to evaluate the residue condition near the contracted
/// point.
#[derive(Clone, Debug)]
pub struct CurveModel {
    ring: Arc<RingDescriptor>,
    report: AlignmentReport,
    assignment: BTreeMap<String, RingElement>,
    /// One chart per outer node, in the order of `report.outer_nodes`.
    charts: Vec<NodeChart>,
    jet_order: usize,
    injective: bool,
}

impl CurveModel {
    /// `injective` records that the twisting sheaf injects into the
    /// structure sheaf; it is asserted by the caller, not checked.
    pub fn new(
        ring: &Arc<RingDescriptor>,
        report: AlignmentReport,
        assignment: BTreeMap<String, RingElement>,
        charts: Vec<NodeChart>,
        jet_order: usize,
        injective: bool,
    ) -> Result<Self> {
        if jet_order < 2 {
            return Err(Error::JetTooShort {
                need: 2,
                have: jet_order,
            });
        }
        for (name, v) in &assignment {
            if !report.parameters.contains(name) {
                return Err(Error::InvalidModel(format!(
                    "{name} is not a smoothing parameter of this circle"
                )));
            }
            if !same_ring(v.ring(), ring) {
                return Err(Error::MixedRings);
            }
        }
        let mut ordered = Vec::with_capacity(report.outer_nodes.len());
        for node in &report.outer_nodes {
            let mut found = charts.iter().filter(|c| c.branch == node.branch);
            let (Some(chart), None) = (found.next(), found.next()) else {
                return Err(Error::InvalidModel(format!(
                    "need exactly one chart on outer branch {}",
                    node.branch
                )));
            };
            if !same_ring(chart.ring(), ring) {
                return Err(Error::MixedRings);
            }
            if !chart.lead().is_unit() {
                return Err(Error::ChartInvariant(format!(
                    "leading coefficient on branch {} is not a unit",
                    chart.branch
                )));
            }
            if chart.order() < 1 {
                return Err(Error::ChartInvariant("empty chart".into()));
            }
            ordered.push(chart.clone());
        }
        if charts.len() != ordered.len() {
            return Err(Error::InvalidModel("chart on a branch that is not outer".into()));
        }
        Ok(Self {
            ring: Arc::clone(ring),
            report,
            assignment,
            charts: ordered,
            jet_order,
            injective,
        })
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn report(&self) -> &AlignmentReport {
        &self.report
    }

    pub fn charts(&self) -> &[NodeChart] {
        &self.charts
    }

    pub fn assignment(&self) -> &BTreeMap<String, RingElement> {
        &self.assignment
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    pub fn injective(&self) -> bool {
        self.injective
    }

    /// Number of outer nodes.
    pub fn nodes(&self) -> usize {
        self.charts.len()
    }

    pub fn depth(&self) -> usize {
        self.report.depth()
    }

    /// `t_1 ... t_layer`.
    pub fn twist_product(&self, layer: usize) -> Result<RingElement> {
        let mut t = RingElement::one(&self.ring);
        for name in &self.report.parameters[..layer] {
            let v = self
                .assignment
                .get(name)
                .ok_or_else(|| Error::UnassignedParameter(name.clone()))?;
            t = &t * v;
        }
        Ok(t)
    }

    /// `t = t_1 ... t_m`.
    pub fn t(&self) -> Result<RingElement> {
        self.twist_product(self.depth())
    }

    /// The same curve over `A_n`, with charts and parameters projected.
    pub fn at_level(&self, n: usize) -> Result<Self> {
        let ring = self.ring.truncation(n);
        Self::new(
            &ring,
            self.report.clone(),
            self.assignment
                .iter()
                .map(|(k, v)| (k.clone(), v.transfer(&ring)))
                .collect(),
            self.charts.iter().map(|c| c.transfer(&ring)).collect(),
            self.jet_order,
            self.injective,
        )
    }

    /// Replaces the charts, keeping everything else.
    pub fn with_charts(&self, charts: Vec<NodeChart>) -> Result<Self> {
        Self::new(
            &self.ring,
            self.report.clone(),
            self.assignment.clone(),
            charts,
            self.jet_order,
            self.injective,
        )
    }

    /// Levels of the tower `A_0, A_1, ...` up to the ring itself.
    pub fn tower_height(&self) -> usize {
        self.ring.nilpotency_bound().saturating_sub(1)
    }

    fn check_jet(&self, f: &JetFunction) -> Result<()> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::MixedRings);
        }
        if f.tails.len() != self.nodes() {
            return Err(Error::InvalidModel(format!(
                "jet has {} branches, model has {} outer nodes",
                f.tails.len(),
                self.nodes()
            )));
        }
        Ok(())
    }
}

/// Residue of `f * chart` at the node, without the twist.
pub fn chart_residue(chart: &NodeChart, f: &JetFunction, node: usize) -> Result<RingElement> {
    if f.order() < 2 {
        return Err(Error::JetTooShort {
            need: 2,
            have: f.order(),
        });
    }
    if chart.order() < 1 {
        return Err(Error::JetTooShort {
            need: 1,
            have: chart.order(),
        });
    }
    Differential::new(f.series(node).mul(&chart.series())?).residue()
}

/// Twisted residue of `f * phi` at the `node`-th outer node.
pub fn res_twisted(model: &CurveModel, f: &JetFunction, node: usize) -> Result<TwistedValue> {
    model.check_jet(f)?;
    Ok(TwistedValue {
        twist: model.report.delta.clone(),
        layer: model.depth(),
        payload: chart_residue(&model.charts[node], f, node)?,
    })
}

/// Image of a twisted value in `A`.
pub fn untwist(v: &TwistedValue, model: &CurveModel) -> Result<RingElement> {
    v.payload.checked_mul(&model.twist_product(v.layer)?)
}

/// Sum of the twisted residues over the outer nodes.
pub fn res_m(model: &CurveModel, f: &JetFunction) -> Result<TwistedValue> {
    model.check_jet(f)?;
    let mut payload = RingElement::zero(&model.ring);
    for i in 0..model.nodes() {
        payload = &payload + &res_twisted(model, f, i)?.payload;
    }
    Ok(TwistedValue {
        twist: model.report.delta.clone(),
        layer: model.depth(),
        payload,
    })
}

/// The residue condition: the twisted payload vanishes, which is stronger
/// than vanishing after untwisting.
pub fn is_in_contraction(model: &CurveModel, f: &JetFunction) -> Result<bool> {
    Ok(res_m(model, f)?.is_zero())
}

/// Jet with twisted residue `[t] a` for `a` in `Ann(t)`.
pub fn split(model: &CurveModel, a: &RingElement) -> Result<JetFunction> {
    if !same_ring(a.ring(), &model.ring) {
        return Err(Error::MixedRings);
    }
    if !a.annihilates(&model.t()?) {
        return Err(Error::NotInAnnihilator);
    }
    let mut f = JetFunction::zero(model);
    if let Some(first) = model.charts.first() {
        f.tails[0][0] = a.checked_mul(&first.lead().invert()?)?;
    } else if !a.is_zero() {
        return Err(Error::InvalidModel("no outer nodes".into()));
    }
    Ok(f)
}

/// Total residue on the core: the outer residues pass inward through each
/// layer of nodes with one net sign change.
pub fn core_total_residue(model: &CurveModel, f: &JetFunction) -> Result<RingElement> {
    Ok(untwist(&res_m(model, f)?, model)?.negate())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    Lifted(JetFunction),
    /// The residue condition fails; `core_residue` is the total core residue
    /// of the canonical lift at the next level, which may still vanish when
    /// the payload is killed by `t` there.
    Obstruction {
        residue: TwistedValue,
        core_residue: RingElement,
    },
}

/// Whether `lower` is the image of `upper` under some truncation.
fn is_quotient_of(lower: &Arc<RingDescriptor>, upper: &Arc<RingDescriptor>) -> bool {
    (0..upper.nilpotency_bound()).any(|k| same_ring(&upper.truncation(k), lower))
}

/// Lifts `f` from `model` to `next`, whose ring is the next thickening and
/// whose charts reduce to those of `model`.
///
/// Coefficients are lifted by the monomial section. Each `c_1^i` is then
/// corrected by `-v^i c_1^i / g^i`, where `v^i` is the change in the
/// chart's leading coefficient, and what remains of `sum g^i c_1^i` (an
/// element of the kernel of the projection) is absorbed into `c_1^1`.
pub fn lift(model: &CurveModel, f: &JetFunction, next: &CurveModel) -> Result<LiftOutcome> {
    model.check_jet(f)?;
    if !is_quotient_of(&model.ring, &next.ring) {
        return Err(Error::IncompatibleCharts(
            "rings are not consecutive levels of one tower".into(),
        ));
    }
    if next.nodes() != model.nodes() || next.report.outer_nodes != model.report.outer_nodes {
        return Err(Error::IncompatibleCharts("outer nodes differ".into()));
    }
    for (lo, hi) in model.charts.iter().zip(&next.charts) {
        if hi.transfer(&model.ring) != *lo {
            return Err(Error::IncompatibleCharts(format!(
                "chart on branch {} does not truncate",
                lo.branch
            )));
        }
    }
    let residue = res_m(model, f)?;
    let mut g = f.transfer(&next.ring);
    if !residue.is_zero() {
        let core_residue = core_total_residue(next, &g)?;
        return Ok(LiftOutcome::Obstruction { residue, core_residue });
    }
    if f.order() < 2 {
        return Ok(LiftOutcome::Lifted(g));
    }
    let mut leftover = RingElement::zero(&next.ring);
    for (i, (lo, hi)) in model.charts.iter().zip(&next.charts).enumerate() {
        let c1 = g.tails[i][0].clone();
        let lifted_lead = lo.lead().transfer(&next.ring);
        let v = hi.lead() - &lifted_lead;
        let inv = hi.lead().invert()?;
        g.tails[i][0] = &c1 - &(&(&v * &c1) * &inv);
        leftover = &leftover + &(&lifted_lead * &c1);
    }
    if let Some(first) = next.charts.first() {
        let fix = &leftover * &first.lead().invert()?;
        g.tails[0][0] = &g.tails[0][0] - &fix;
    }
    debug_assert!(is_in_contraction(next, &g)?);
    Ok(LiftOutcome::Lifted(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerLift {
    /// `jets[k]` lives at level `from + k`.
    Lifted(Vec<JetFunction>),
    Obstructed {
        level: usize,
        outcome: LiftOutcome,
    },
}

/// Lifts a jet at level `from` of the tower of `top` up to level `to`.
pub fn lift_through(top: &CurveModel, f: &JetFunction, from: usize, to: usize) -> Result<TowerLift> {
    if to < from || to > top.tower_height() {
        return Err(Error::PreconditionFailed(format!(
            "cannot lift from level {from} to level {to} in a tower of height {}",
            top.tower_height()
        )));
    }
    let mut model = top.at_level(from)?;
    let mut jets = vec![f.clone()];
    for level in from..to {
        let next = top.at_level(level + 1)?;
        match lift(&model, jets.last().expect("nonempty"), &next)? {
            LiftOutcome::Lifted(g) => jets.push(g),
            outcome => return Ok(TowerLift::Obstructed { level, outcome }),
        }
        model = next;
    }
    Ok(TowerLift::Lifted(jets))
}

/// Exhaustive search for compatible lifts of `f` (at level `from`) through
/// every level up to the top of the tower, over a finite field.
///
/// A jet at level `k` is a function near the contracted subcurve iff its
/// untwisted total residue on the core vanishes in `A_k`; the residues are
/// computed from the untwisted charts `t g(x) dx`, independently of the
/// twisted payload.
pub fn brute_force_liftable(top: &CurveModel, f: &JetFunction, from: usize) -> Result<bool> {
    let height = top.tower_height();
    let levels: Vec<CurveModel> = (from..=height).map(|k| top.at_level(k)).collect::<Result<_>>()?;
    levels[0].check_jet(f)?;
    search_lifts(&levels, 0, f)
}

fn is_global(model: &CurveModel, f: &JetFunction) -> Result<bool> {
    let t = model.t()?;
    let mut total = RingElement::zero(&model.ring);
    for (i, chart) in model.charts.iter().enumerate() {
        let untwisted = chart.series().scale(&t)?;
        let r = Differential::new(f.series(i).mul(&untwisted)?).residue()?;
        total = &total + &r;
    }
    Ok(total.is_zero())
}

fn search_lifts(levels: &[CurveModel], k: usize, f: &JetFunction) -> Result<bool> {
    if !is_global(&levels[k], f)? {
        return Ok(false);
    }
    if k + 1 == levels.len() {
        return Ok(true);
    }
    let next = &levels[k + 1];
    let kernel = kernel_elements(&levels[k].ring, &next.ring)?;
    let base = f.transfer(&next.ring);
    let slots = 1 + base.tails.iter().map(Vec::len).sum::<usize>();
    let mut choice = vec![0usize; slots];
    loop {
        let mut g = base.clone();
        g.constant = &g.constant + &kernel[choice[0]];
        let mut s = 1;
        for tail in &mut g.tails {
            for c in tail.iter_mut() {
                *c = &*c + &kernel[choice[s]];
                s += 1;
            }
        }
        if search_lifts(levels, k + 1, &g)? {
            return Ok(true);
        }
        // odometer over kernel^slots
        let mut i = 0;
        loop {
            if i == slots {
                return Ok(false);
            }
            choice[i] += 1;
            if choice[i] < kernel.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All elements of `ker(upper -> lower)`.
fn kernel_elements(lower: &Arc<RingDescriptor>, upper: &Arc<RingDescriptor>) -> Result<Vec<RingElement>> {
    let field = upper.field();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::WrongCharacteristic {
            expected: "a prime".into(),
            found: 0,
        });
    }
    let extra: Vec<usize> = upper
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, m)| lower.index_of(m).is_none())
        .map(|(i, _)| i)
        .collect();
    let mut out = vec![RingElement::zero(upper)];
    for &i in &extra {
        let mut grown = Vec::with_capacity(out.len() * p as usize);
        for e in &out {
            for c in 0..p {
                let mut coeffs = e.coeffs().to_vec();
                coeffs[i] = field.from_i64(c as i64);
                grown.push(RingElement::from_coeffs(upper, coeffs));
            }
        }
        out = grown;
    }
    Ok(out)
}

/// Presentation of the local ring of the contracted point over the residue
/// field: constants agree and `sum_i g_{-2}^i f_i'(0) = 0`.
pub fn contraction_ring(model: &CurveModel, jet_order: usize) -> Result<SingularityPresentation> {
    if model.ring.nilpotency_bound() != 1 {
        return Err(Error::NotResidueLevel(model.ring.nilpotency_bound()));
    }
    let weights: Vec<_> = model.charts.iter().map(|c| c.lead().constant_term().clone()).collect();
    SingularityPresentation::derivative_condition(model.ring.field(), &weights, jet_order)
}

/// A differential near a node `xy = t`, written `g(x, y) dx/x` with `g` a
/// polynomial.
#[derive(Clone, Debug)]
pub struct NodeLocal {
    pub t: RingElement,
    /// `(a, b) -> g_ab`, the coefficient of `x^a y^b`.
    pub g: BTreeMap<(u32, u32), RingElement>,
}

impl NodeLocal {
    /// Restriction to the `x` branch: `sum g_ab t^b x^{a-b-1} dx`.
    pub fn on_x(&self) -> Result<Differential> {
        let ring = self.t.ring();
        let terms = self
            .g
            .iter()
            .map(|(&(a, b), c)| (a as i64 - b as i64 - 1, c * &self.t.pow(b)));
        Ok(Differential::new(LaurentSeries::new(ring, terms, None)?))
    }

    /// Restriction to the `y` branch. `dx/x = -dy/y` on `xy = t`, so this is
    /// `-sum g_ab t^a y^{b-a-1} dy`.
    pub fn on_y(&self) -> Result<Differential> {
        let ring = self.t.ring();
        let terms = self
            .g
            .iter()
            .map(|(&(a, b), c)| (b as i64 - a as i64 - 1, (c * &self.t.pow(a)).negate()));
        Ok(Differential::new(LaurentSeries::new(ring, terms, None)?))
    }

    pub fn random<R: Rng + ?Sized>(t: &RingElement, degree: u32, rng: &mut R) -> Self {
        let ring = t.ring();
        let mut g = BTreeMap::new();
        for a in 0..=degree {
            for b in 0..=degree {
                g.insert((a, b), RingElement::random(ring, rng));
            }
        }
        Self { t: t.clone(), g }
    }
}

/// Moves an exact differential from one branch of `xy = t` to the other by
/// `x = t y^{-1}`, `x^j dx -> -t^{j+1} y^{-j-2} dy`. Poles of order two or
/// more need `t` to be a unit.
pub fn transfer_across_node(omega: &Differential, t: &RingElement) -> Result<Differential> {
    let coeff = omega.coefficient();
    if !coeff.is_exact() {
        return Err(Error::PreconditionFailed(
            "node transfer needs an exact differential".into(),
        ));
    }
    let t_inv = if t.is_unit() { Some(t.invert()?) } else { None };
    let mut terms = Vec::new();
    for (j, a) in coeff.terms() {
        let k = j + 1;
        let power = if k >= 0 {
            t.pow(k as u32)
        } else {
            match &t_inv {
                Some(inv) => inv.pow((-k) as u32),
                None => {
                    return Err(Error::PreconditionFailed(format!(
                        "x^{j} dx has a pole of order {} and t is not a unit",
                        -j
                    )))
                }
            }
        };
        terms.push((-j - 2, (a * &power).negate()));
    }
    Ok(Differential::new(LaurentSeries::new(coeff.ring(), terms, None)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::RingDescriptor;
    use crate::field::Field;
    use crate::scenario::{star_model, tacnode_model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(ring: &Arc<RingDescriptor>, terms: &[(u32, i64)]) -> RingElement {
        let f = ring.field();
        terms.iter().fold(RingElement::zero(ring), |acc, &(e, c)| {
            &acc + &RingElement::monomial(ring, &[e], f.from_i64(c))
        })
    }

    fn jet(model: &CurveModel, c: RingElement, c1: &[RingElement]) -> JetFunction {
        let mut f = JetFunction::constant(model, c);
        for (i, x) in c1.iter().enumerate() {
            f.tails[i][0] = x.clone();
        }
        f
    }

    #[test]
    fn single_node_residue() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let m = star_model(&a, &el(&a, &[(2, 1)]), &[RingElement::one(&a)], 4).unwrap();
        let f = jet(&m, RingElement::from_i64(&a, 7), &[RingElement::from_i64(&a, 3)]);
        assert_eq!(res_twisted(&m, &f, 0).unwrap().payload, RingElement::from_i64(&a, 3));
        let c = JetFunction::constant(&m, RingElement::from_i64(&a, 2));
        assert!(res_m(&m, &c).unwrap().is_zero());

        let m2 = star_model(&a, &el(&a, &[(2, 1)]), &[RingElement::from_i64(&a, 2)], 4).unwrap();
        let c1 = el(&a, &[(0, 1), (1, 1)]);
        let f = jet(&m2, RingElement::zero(&a), std::slice::from_ref(&c1));
        assert_eq!(res_m(&m2, &f).unwrap().payload, c1.mul_i64(2));
    }

    #[test]
    fn untwist_examples() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let m = star_model(&a, &el(&a, &[(2, 1)]), &[RingElement::one(&a)], 4).unwrap();
        let v = TwistedValue {
            twist: m.report().delta.clone(),
            layer: 1,
            payload: RingElement::from_i64(&a, 3),
        };
        assert_eq!(untwist(&v, &m).unwrap(), el(&a, &[(2, 3)]));
        let v = TwistedValue {
            payload: el(&a, &[(1, 1)]),
            ..v
        };
        assert!(untwist(&v, &m).unwrap().is_zero());
        assert!(!v.is_zero());
    }

    #[test]
    fn tacnode_condition() {
        let f5 = Field::prime(5).unwrap();
        let a = RingDescriptor::truncated_polynomial(f5, 3);
        let g = [RingElement::from_i64(&a, 2), RingElement::from_i64(&a, 3)];
        let m = tacnode_model(&a, &g, 4).unwrap();
        assert_eq!(m.t().unwrap(), el(&a, &[(2, 1)]));
        let c1 = [RingElement::from_i64(&a, 3), RingElement::from_i64(&a, 3)];
        let f = jet(&m, RingElement::one(&a), &c1);
        // 2*3 + 3*3 = 15 = 0
        assert!(is_in_contraction(&m, &f).unwrap());
        let f = jet(&m, RingElement::one(&a), &[c1[0].clone(), RingElement::one(&a)]);
        let r = res_m(&m, &f).unwrap();
        assert_eq!(r.payload, RingElement::from_i64(&a, 9));
        assert_eq!(core_total_residue(&m, &f).unwrap(), el(&a, &[(2, -9)]));
        assert!(!is_in_contraction(&m, &f).unwrap());
    }

    #[test]
    fn cusp_condition_and_split() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let t = el(&a, &[(2, 1)]);
        let m = star_model(&a, &t, &[RingElement::one(&a)], 3).unwrap();
        let u = el(&a, &[(1, 1)]);
        let s = split(&m, &u).unwrap();
        assert_eq!(s.tails[0][0], u);
        assert_eq!(res_m(&m, &s).unwrap().payload, u);
        assert_eq!(split(&m, &RingElement::one(&a)), Err(Error::NotInAnnihilator));
        assert_eq!(split(&m, &RingElement::zero(&a)).unwrap(), JetFunction::zero(&m));
        let f = jet(&m, RingElement::zero(&a), &[RingElement::one(&a)]);
        assert_eq!(core_total_residue(&m, &f).unwrap(), el(&a, &[(2, -1)]));
    }

    #[test]
    fn lift_tacnode_tower() {
        let f5 = Field::prime(5).unwrap();
        let a = RingDescriptor::truncated_polynomial(f5, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g: Vec<RingElement> = (0..2).map(|_| RingElement::random_unit(&a, &mut rng)).collect();
            let top = tacnode_model(&a, &g, 3).unwrap();
            let m0 = top.at_level(0).unwrap();
            let mut f = JetFunction::random(&m0, &mut rng);
            let fix = &(&m0.charts()[1].lead().negate() * &f.tails[1][0]) * &m0.charts()[0].lead().invert().unwrap();
            f.tails[0][0] = fix;
            assert!(is_in_contraction(&m0, &f).unwrap());
            let TowerLift::Lifted(jets) = lift_through(&top, &f, 0, 2).unwrap() else {
                panic!("obstructed")
            };
            for (k, j) in jets.iter().enumerate() {
                let mk = top.at_level(k).unwrap();
                assert!(is_in_contraction(&mk, j).unwrap());
                if k > 0 {
                    assert_eq!(j.transfer(&top.at_level(k - 1).unwrap().ring().clone()), jets[k - 1]);
                }
            }
        }
    }

    #[test]
    fn lift_reports_obstruction() {
        let f5 = Field::prime(5).unwrap();
        let a = RingDescriptor::truncated_polynomial(f5, 3);
        let top = tacnode_model(&a, &[RingElement::one(&a), RingElement::one(&a)], 2).unwrap();
        let m0 = top.at_level(0).unwrap();
        let b = m0.ring().clone();
        let f = jet(
            &m0,
            RingElement::zero(&b),
            &[RingElement::one(&b), RingElement::zero(&b)],
        );
        match lift_through(&top, &f, 0, 2).unwrap() {
            TowerLift::Obstructed {
                level: 0,
                outcome: LiftOutcome::Obstruction { residue, .. },
            } => {
                assert_eq!(residue.payload, RingElement::one(&b))
            }
            other => panic!("{other:?}"),
        }
        let m1 = top.at_level(1).unwrap();
        let wrong = m1.with_charts(vec![
            NodeChart::new(m1.charts()[0].branch, vec![RingElement::from_i64(m1.ring(), 2)]).unwrap(),
            m1.charts()[1].clone(),
        ]);
        let wrong = wrong.unwrap();
        let ok = jet(
            &m0,
            RingElement::zero(&b),
            &[RingElement::zero(&b), RingElement::zero(&b)],
        );
        assert!(matches!(lift(&m0, &ok, &wrong), Err(Error::IncompatibleCharts(_))));
    }

    #[test]
    fn brute_force_matches_on_small_tower() {
        let f2 = Field::prime(2).unwrap();
        let a = RingDescriptor::truncated_polynomial(f2, 3);
        let top = tacnode_model(&a, &[RingElement::one(&a), el(&a, &[(0, 1), (1, 1)])], 2).unwrap();
        let m0 = top.at_level(0).unwrap();
        let b = m0.ring().clone();
        for x in 0..2 {
            for y in 0..2 {
                let f = jet(
                    &m0,
                    RingElement::zero(&b),
                    &[RingElement::from_i64(&b, x), RingElement::from_i64(&b, y)],
                );
                assert_eq!(
                    brute_force_liftable(&top, &f, 0).unwrap(),
                    is_in_contraction(&m0, &f).unwrap()
                );
            }
        }
    }

    #[test]
    fn contraction_ring_needs_residue_field() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let m = star_model(&a, &el(&a, &[(2, 1)]), &[RingElement::one(&a)], 3).unwrap();
        assert_eq!(contraction_ring(&m, 4), Err(Error::NotResidueLevel(3)));
        let k = m.at_level(0).unwrap();
        let p = contraction_ring(&k, 4).unwrap();
        assert_eq!(p.invariants().unwrap().delta, 1);
    }

    #[test]
    fn chart_invariants() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 2);
        let u = el(&a, &[(1, 1)]);
        assert!(matches!(NodeChart::new(1, vec![u]), Err(Error::ChartInvariant(_))));
        assert!(matches!(NodeChart::new(1, vec![]), Err(Error::ChartInvariant(_))));
    }

    #[test]
    fn node_sign_on_both_branches() {
        let f3 = Field::prime(3).unwrap();
        let a = RingDescriptor::truncated_polynomial(f3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in [RingElement::zero(&a), el(&a, &[(1, 1)]), el(&a, &[(1, 2), (2, 1)])] {
            let n = NodeLocal::random(&t, 3, &mut rng);
            let rx = n.on_x().unwrap().residue().unwrap();
            let ry = n.on_y().unwrap().residue().unwrap();
            assert_eq!(rx, ry.negate());
        }
    }

    #[test]
    fn node_transfer_examples() {
        let a = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let t = el(&a, &[(1, 1)]);
        let dlog = Differential::dlog_x(&a);
        let moved = transfer_across_node(&dlog, &t).unwrap();
        assert_eq!(moved.residue().unwrap(), RingElement::from_i64(&a, -1));
        let x2 = Differential::new(LaurentSeries::from_ints(&a, &[(-2, 1)]));
        assert!(transfer_across_node(&x2, &t).is_err());
        // t = 1 is inversion on the projective line: residues at 0 and infinity cancel
        let omega = Differential::new(LaurentSeries::from_ints(&a, &[(-3, 2), (-1, 5), (2, 1)]));
        let at_inf = transfer_across_node(&omega, &RingElement::one(&a)).unwrap();
        assert_eq!(at_inf.residue().unwrap(), RingElement::from_i64(&a, -5));
    }
}
