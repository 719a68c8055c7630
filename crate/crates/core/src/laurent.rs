//! Truncated Laurent series `A((x))` over a local artinian ring and
//! differentials `g(x) dx`.
//!
//! A series stores finitely many coefficients together with a precision
//! `P`: coefficients at exponents `>= P` are unknown. Exact series (finite
//! Laurent polynomials) carry no precision bound.
//!
//! Substitution and inversion rely on one bound throughout. If `w` has
//! valuation 0 and its negative part has pole order `d`, every product of
//! powers of `w` and `w^{-1}` has lowest exponent `>= -(N-1)d`, where `N`
//! is the nilpotency bound of the coefficient ring: a coefficient built
//! from `N` or more nilpotent negative-tail coefficients vanishes. We call
//! `(N-1)d` the nil shift of `w`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::artin::{same_ring, ElementLiteral, RingDescriptor, RingElement};
use crate::error::{Error, Result};

/// Window used when an exact input has an infinite expansion and the
/// caller did not ask for a specific precision.
pub const DEFAULT_WINDOW: i64 = 8;

type Terms = BTreeMap<i64, RingElement>;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    ring: Arc<RingDescriptor>,
    terms: Terms,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn mul_terms(a: &Terms, b: &Terms, cap: Option<i64>) -> Terms {
    let mut out: Terms = BTreeMap::new();
    for (&i, x) in a {
        for (&j, y) in b {
            if cap.is_some_and(|c| i + j >= c) {
                continue;
            }
            let p = x * y;
            if p.is_zero() {
                continue;
            }
            match out.get_mut(&(i + j)) {
                Some(acc) => *acc = &*acc + &p,
                None => {
                    out.insert(i + j, p);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl LaurentSeries {
    pub fn new(
        ring: &Arc<RingDescriptor>,
        terms: impl IntoIterator<Item = (i64, RingElement)>,
        prec: Option<i64>,
    ) -> Result<Self> {
        let mut map: Terms = BTreeMap::new();
        for (e, c) in terms {
            if !same_ring(c.ring(), ring) {
                return Err(Error::MixedRings);
            }
            match map.get_mut(&e) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        Ok(Self::from_terms(ring, map, prec))
    }

    fn from_terms(ring: &Arc<RingDescriptor>, mut terms: Terms, prec: Option<i64>) -> Self {
        terms.retain(|&e, c| !c.is_zero() && prec.is_none_or(|p| e < p));
        Self {
            ring: Arc::clone(ring),
            terms,
            prec,
        }
    }

    pub fn zero(ring: &Arc<RingDescriptor>) -> Self {
        Self::from_terms(ring, BTreeMap::new(), None)
    }

    pub fn one(ring: &Arc<RingDescriptor>) -> Self {
        Self::constant(RingElement::one(ring))
    }

    pub fn constant(c: RingElement) -> Self {
        let ring = Arc::clone(c.ring());
        Self::from_terms(&ring, BTreeMap::from([(0, c)]), None)
    }

    /// `c x^e`, exact.
    pub fn monomial(e: i64, c: RingElement) -> Self {
        let ring = Arc::clone(c.ring());
        Self::from_terms(&ring, BTreeMap::from([(e, c)]), None)
    }

    /// The coordinate `x`.
    pub fn x(ring: &Arc<RingDescriptor>) -> Self {
        Self::monomial(1, RingElement::one(ring))
    }

    /// Exact series from integer coefficients.
    pub fn from_ints(ring: &Arc<RingDescriptor>, terms: &[(i64, i64)]) -> Self {
        Self::from_terms(
            ring,
            terms
                .iter()
                .map(|&(e, c)| (e, RingElement::from_i64(ring, c)))
                .collect(),
            None,
        )
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    /// `None` means exact.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RingElement)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Lowest exponent with a stored (nonzero) coefficient.
    pub fn lowest(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn highest(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Every coefficient below this exponent is known to vanish.
    /// `None` only for the exact zero series.
    fn valuation_bound(&self) -> Option<i64> {
        self.lowest().or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^e`, if it is determined.
    pub fn coeff(&self, e: i64) -> Result<RingElement> {
        if let Some(p) = self.prec {
            if e >= p {
                return Err(Error::InsufficientPrecision {
                    needed: e + 1,
                    available: p,
                });
            }
        }
        Ok(self
            .terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(&self.ring)))
    }

    /// Forgets coefficients at exponents `>= p`.
    pub fn truncated(&self, p: i64) -> Self {
        Self::from_terms(&self.ring, self.terms.clone(), min_prec(self.prec, Some(p)))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (&e, c) in &other.terms {
            match terms.get_mut(&e) {
                Some(acc) => *acc = &*acc + c,
                None => {
                    terms.insert(e, c.clone());
                }
            }
        }
        Ok(Self::from_terms(&self.ring, terms, min_prec(self.prec, other.prec)))
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(&e, c)| (e, c.negate())).collect(),
            self.prec,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product; the result is known below
    /// `min(P_a + v(b), P_b + v(a))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (va, vb) = match (self.valuation_bound(), other.valuation_bound()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Self::zero(&self.ring)),
        };
        let prec = min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        Ok(Self::from_terms(
            &self.ring,
            mul_terms(&self.terms, &other.terms, prec),
            prec,
        ))
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        if !same_ring(c.ring(), &self.ring) {
            return Err(Error::MixedRings);
        }
        Ok(Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(&e, a)| (e, a * c)).collect(),
            self.prec,
        ))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
            self.prec.map(|p| p + k),
        )
    }

    /// `d/dx`, as a series (see [`LaurentSeries::d`] for the differential).
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(&e, c)| (e - 1, c.mul_i64(e))).collect(),
            self.prec.map(|p| p - 1),
        )
    }

    /// The exterior derivative `d f = f'(x) dx`.
    pub fn d(&self) -> Differential {
        Differential::new(self.derivative())
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The stored terms, regarded as an exact Laurent polynomial.
    pub(crate) fn forget_prec(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.clone(), None)
    }

    /// Product of the stored terms with exponents `>= cap` dropped; the
    /// caller is responsible for the precision bookkeeping.
    pub(crate) fn stored_product(&self, other: &Self, cap: Option<i64>) -> Self {
        Self::from_terms(&self.ring, mul_terms(&self.terms, &other.terms, cap), None)
    }

    /// Whether the two series agree on every coefficient both determine.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = min_prec(self.prec, other.prec);
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.filter(|&&e| p.is_none_or(|p| e < p)).all(|&e| {
            let zero = RingElement::zero(&self.ring);
            self.terms.get(&e).unwrap_or(&zero) == other.terms.get(&e).unwrap_or(&zero)
        })
    }

    /// The exponent `N` with `a_N` a unit and all lower coefficients nilpotent.
    pub fn nu(&self) -> Result<i64> {
        self.terms
            .iter()
            .find(|(_, c)| c.is_unit())
            .map(|(&e, _)| e)
            .ok_or_else(|| {
                Error::NotALaurentUnit(match self.prec {
                    Some(p) => format!("no unit coefficient below x^{p}"),
                    None => "every coefficient is nilpotent".into(),
                })
            })
    }

    pub fn unit_decompose(&self) -> Result<UnitDecomposition> {
        let n = self.nu()?;
        Ok(UnitDecomposition {
            valuation: n,
            nil_unit: self.shift(-n),
        })
    }

    /// `(N-1) d` for a valuation-0 series `w` whose negative tail has pole
    /// order `d`.
    fn nil_shift(&self) -> i64 {
        let d = (-self.lowest().unwrap_or(0)).max(0);
        (self.ring.nilpotency_bound() as i64 - 1) * d
    }

    /// Inverse of a Laurent unit, known at least below `want` (exact when
    /// the expansion terminates).
    pub fn inverse_to(&self, want: i64) -> Result<Self> {
        let UnitDecomposition { valuation, nil_unit: w } = self.unit_decompose()?;
        let w_inv = w.nil_unit_inverse(want + valuation)?;
        Ok(w_inv.shift(-valuation))
    }

    fn nil_unit_inverse(&self, want: i64) -> Result<Self> {
        Ok(self.nil_unit_neg_powers(1, want)?.remove(0))
    }

    /// `w^{-1}, ..., w^{-count}` for a valuation-0 series `w = P + M`, with
    /// `P` its part in `A[[x]]` and `M` its polar part, from
    /// `w^{-j} = sum_k binom(-j, k) M^k P^{-j-k}`. The sum stops at `k = N - 1`
    /// since `M^N = 0`, and `M^k` reaches down to `x^{-(N-1)d}`, so the
    /// powers of `P^{-1}` are carried that much further than `want`.
    fn nil_unit_neg_powers(&self, count: usize, want: i64) -> Result<Vec<Self>> {
        let ring = &self.ring;
        let n = ring.nilpotency_bound();
        let shift = self.nil_shift();
        let a0_inv = self.coeff(0)?.invert()?;
        let (polar, series): (Terms, Terms) = self
            .terms
            .iter()
            .map(|(&e, c)| (e, c.clone()))
            .partition(|(e, _)| *e < 0);

        let terminates = self.is_exact() && series.keys().all(|&e| e == 0);
        let (prec, cap) = if terminates {
            (None, None)
        } else {
            let mut p = want;
            if let Some(pw) = self.prec {
                p = p.min(pw - shift);
            }
            (Some(p), Some(p + shift))
        };

        // P^{-m} for m = 0 .. count + N - 1, by repeated division
        let mut p_inv: Vec<Terms> = vec![BTreeMap::from([(0, RingElement::one(ring))])];
        for _ in 0..count + n - 1 {
            let q = p_inv.last().expect("nonempty");
            let next = match cap {
                None => q.iter().map(|(&e, c)| (e, c * &a0_inv)).collect(),
                Some(cap) => {
                    let mut b: Terms = BTreeMap::new();
                    for j in 0..cap {
                        let mut acc = q.get(&j).cloned().unwrap_or_else(|| RingElement::zero(ring));
                        for (&i, a) in series.range(1..).take_while(|(&i, _)| i <= j) {
                            if let Some(bj) = b.get(&(j - i)) {
                                acc = &acc - &(a * bj);
                            }
                        }
                        let bj = &acc * &a0_inv;
                        if !bj.is_zero() {
                            b.insert(j, bj);
                        }
                    }
                    b
                }
            };
            p_inv.push(next);
        }

        let mut m_pow: Vec<Terms> = vec![BTreeMap::from([(0, RingElement::one(ring))])];
        for _ in 1..n {
            let next = mul_terms(m_pow.last().expect("nonempty"), &polar, None);
            if next.is_empty() {
                break;
            }
            m_pow.push(next);
        }

        (1..=count)
            .map(|j| {
                let mut out: Terms = BTreeMap::new();
                for (k, mk) in m_pow.iter().enumerate() {
                    let binom = binomial(j + k - 1, k);
                    let c = RingElement::from_i64(ring, if k % 2 == 0 { binom } else { -binom });
                    for (e, x) in mul_terms(mk, &p_inv[j + k], prec) {
                        let y = &c * &x;
                        match out.get_mut(&e) {
                            Some(acc) => *acc = &*acc + &y,
                            None => {
                                out.insert(e, y);
                            }
                        }
                    }
                }
                out.retain(|_, c| !c.is_zero());
                Ok(Self::from_terms(ring, out, prec))
            })
            .collect()
    }

    /// Composition `self ∘ phi` for a continuous endomorphism `x ↦ phi`.
    ///
    /// Exact when both inputs are exact and `self` has no negative powers;
    /// otherwise the window is chosen from the input precisions, or
    /// [`DEFAULT_WINDOW`] for exact inputs with an infinite expansion.
    pub fn substitute(&self, phi: &Self) -> Result<Self> {
        self.substitute_impl(phi, None)
    }

    /// Composition certified at least below `want` (or less, if the inputs
    /// do not determine that many coefficients).
    pub fn substitute_to(&self, phi: &Self, want: i64) -> Result<Self> {
        self.substitute_impl(phi, Some(want))
    }

    fn substitute_impl(&self, phi: &Self, want: Option<i64>) -> Result<Self> {
        self.check(phi)?;
        if validate_endomorphism(phi)? == EndomorphismKind::Invalid {
            return Err(Error::NotAnEndomorphism(phi.nu()?));
        }
        let ring = &self.ring;
        let UnitDecomposition {
            valuation: nu,
            nil_unit: w,
        } = phi.unit_decompose()?;
        let shift = w.nil_shift();
        let lowest = self.lowest().unwrap_or(0);

        let exact = self.is_exact() && phi.is_exact() && lowest >= 0;
        let mut prec: Option<i64> = if exact {
            want
        } else {
            let natural = self.prec.map(|p| nu * p - shift);
            Some(match (want, natural) {
                (Some(w), Some(n)) => w.min(n),
                (Some(w), None) => w,
                (None, Some(n)) => n,
                (None, None) => self.highest().unwrap_or(0).max(0) * nu + DEFAULT_WINDOW,
            })
        };
        if let Some(pp) = self.prec {
            prec = min_prec(prec, Some(nu * pp - shift));
        }
        if let Some(pphi) = phi.prec {
            if self.highest().is_some_and(|h| h > 0) || self.prec.is_some_and(|p| p > 0) {
                prec = min_prec(prec, Some(pphi - shift));
            }
        }

        // negative powers through phi^{-j} = x^{-j nu} w^{-j}
        let max_neg = (-lowest).max(0);
        let neg_powers = if max_neg > 0 {
            let target = prec.expect("negative powers need a window") + max_neg * nu;
            let powers = w.nil_unit_neg_powers(max_neg as usize, target)?;
            if let Some(pp) = powers[0].prec {
                prec = min_prec(prec, Some(pp - max_neg * nu));
            }
            powers
        } else {
            Vec::new()
        };

        let mut out: Terms = BTreeMap::new();
        let mut accumulate = |c: &RingElement, power: &Terms| {
            for (e, x) in power {
                let y = c * x;
                match out.get_mut(e) {
                    Some(acc) => *acc = &*acc + &y,
                    None => {
                        out.insert(*e, y);
                    }
                }
            }
        };

        let c0 = self.coeff(0).unwrap_or_else(|_| RingElement::zero(ring));
        accumulate(&c0, &BTreeMap::from([(0, RingElement::one(ring))]));

        let max_pos = self.highest().unwrap_or(0).max(0);
        let work_cap = prec.map(|p| p + shift);
        let mut power: Terms = BTreeMap::from([(0, RingElement::one(ring))]);
        for i in 1..=max_pos {
            power = mul_terms(&power, &phi.terms, work_cap);
            if let Some(c) = self.terms.get(&i) {
                accumulate(c, &power);
            }
        }

        for (j, power) in neg_powers.iter().enumerate() {
            let j = j as i64 + 1;
            if let Some(c) = self.terms.get(&-j) {
                accumulate(c, &power.shift(-j * nu).terms);
            }
        }

        Ok(Self::from_terms(ring, out, prec))
    }

    pub fn to_literal(&self) -> SeriesLiteral {
        SeriesLiteral {
            coeffs: self
                .terms
                .iter()
                .map(|(e, c)| (e.to_string(), c.to_literal()))
                .collect(),
            prec: match self.prec {
                Some(p) => PrecLiteral::Finite(p),
                None => PrecLiteral::Infinite("inf".into()),
            },
        }
    }

    pub fn from_literal(ring: &Arc<RingDescriptor>, lit: &SeriesLiteral) -> Result<Self> {
        let prec = match &lit.prec {
            PrecLiteral::Finite(p) => Some(*p),
            PrecLiteral::Infinite(s) if s == "inf" => None,
            PrecLiteral::Infinite(s) => {
                return Err(Error::Parse(format!(
                    "precision must be an integer or \"inf\", got {s:?}"
                )))
            }
        };
        let mut terms = Vec::new();
        for (k, v) in &lit.coeffs {
            let e: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
            if prec.is_some_and(|p| e >= p) {
                return Err(Error::Parse(format!(
                    "coefficient at x^{e} lies at or beyond the precision bound"
                )));
            }
            terms.push((e, RingElement::from_literal(ring, v)?));
        }
        Self::new(ring, terms, prec)
    }
}

/// The decomposition `s = x^N · w` with `w` in `A((x))^nil`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub valuation: i64,
    pub nil_unit: LaurentSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndomorphismKind {
    Endomorphism,
    Automorphism,
    Invalid,
}

/// Classifies `x ↦ phi`: an endomorphism iff `nu(phi) > 0`, an
/// automorphism iff `nu(phi) = 1`.
pub fn validate_endomorphism(phi: &LaurentSeries) -> Result<EndomorphismKind> {
    Ok(match phi.nu()? {
        1 => EndomorphismKind::Automorphism,
        n if n > 1 => EndomorphismKind::Endomorphism,
        _ => EndomorphismKind::Invalid,
    })
}

/// A differential `g(x) dx`.
#[derive(Clone, PartialEq, Eq)]
pub struct Differential {
    coeff: LaurentSeries,
}

impl Differential {
    pub fn new(coeff: LaurentSeries) -> Self {
        Self { coeff }
    }

    /// `dx / x`.
    pub fn dlog_x(ring: &Arc<RingDescriptor>) -> Self {
        Self::new(LaurentSeries::monomial(-1, RingElement::one(ring)))
    }

    pub fn coefficient(&self) -> &LaurentSeries {
        &self.coeff
    }

    pub fn into_coefficient(self) -> LaurentSeries {
        self.coeff
    }

    pub fn prec(&self) -> Option<i64> {
        self.coeff.prec
    }

    /// The coefficient of `x^{-1} dx`.
    pub fn residue(&self) -> Result<RingElement> {
        self.coeff.coeff(-1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.coeff.add(&other.coeff)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.coeff.sub(&other.coeff)?))
    }

    /// Pullback `g(phi(x)) phi'(x) dx`, with the window chosen as in
    /// [`LaurentSeries::substitute`].
    pub fn pullback(&self, phi: &LaurentSeries) -> Result<Self> {
        self.pullback_impl(phi, None)
    }

    /// Pullback certified at least below `want` when the inputs allow it.
    pub fn pullback_to(&self, phi: &LaurentSeries, want: i64) -> Result<Self> {
        self.pullback_impl(phi, Some(want))
    }

    fn pullback_impl(&self, phi: &LaurentSeries, want: Option<i64>) -> Result<Self> {
        let dphi = phi.derivative();
        let dip = (-dphi.valuation_bound().unwrap_or(0)).max(0);
        let g = match want {
            Some(w) => self.coeff.substitute_to(phi, w + dip)?,
            None => self.coeff.substitute(phi)?,
        };
        Ok(Self::new(g.mul(&dphi)?))
    }
}

/// `ds / s` for a Laurent unit `s`.
pub fn d_log(s: &LaurentSeries) -> Result<Differential> {
    let want = match s.prec {
        Some(p) => p - 1,
        None => DEFAULT_WINDOW,
    };
    d_log_to(s, want)
}

pub fn d_log_to(s: &LaurentSeries, want: i64) -> Result<Differential> {
    let n = s.nu()?;
    let ds = s.derivative();
    let extra = (-ds.valuation_bound().unwrap_or(0)).max(0) + n.abs();
    let inv = s.inverse_to(want + extra)?;
    Ok(Differential::new(ds.mul(&inv)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrecLiteral {
    Finite(i64),
    Infinite(String),
}

/// Wire form: `{"coeffs": {"-2": elem, ...}, "prec": int | "inf"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLiteral {
    pub coeffs: BTreeMap<String, ElementLiteral>,
    pub prec: PrecLiteral,
}

/// Exact Laurent polynomial with random coefficients on `[low, high]`.
pub fn random_laurent_polynomial<R: Rng + ?Sized>(
    ring: &Arc<RingDescriptor>,
    rng: &mut R,
    low: i64,
    high: i64,
) -> LaurentSeries {
    let terms = (low..=high).map(|e| (e, RingElement::random(ring, rng)));
    LaurentSeries::new(ring, terms, None).expect("single ring")
}

/// Random exact automorphism datum `x ↦ x·w` with `w` in `A((x))^nil`:
/// unit constant term, nilpotent negative tail of order `<= pole`, and
/// positive part up to `x^high`.
pub fn random_automorphism<R: Rng + ?Sized>(
    ring: &Arc<RingDescriptor>,
    rng: &mut R,
    pole: i64,
    high: i64,
) -> LaurentSeries {
    let mut terms = vec![(0, RingElement::random_unit(ring, rng))];
    for e in 1..=pole {
        terms.push((-e, RingElement::random_nilpotent(ring, rng)));
    }
    for e in 1..=high {
        terms.push((e, RingElement::random(ring, rng)));
    }
    LaurentSeries::new(ring, terms, None).expect("single ring").shift(1)
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        match self.prec {
            Some(p) => write!(f, " + O(x^{p})"),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] dx", self.coeff)
    }
}
