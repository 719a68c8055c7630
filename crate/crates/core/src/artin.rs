//! Local artinian rings `k[u_1..u_r]/I` with `I` a monomial ideal.
//!
//! Elements are stored densely over the standard-monomial basis, so
//! equality is structural. Multiplication goes through a precomputed
//! table of basis products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::linalg;

pub type Monomial = Vec<u32>;

/// Presentation of `A = k[u_1..u_r]/I` together with its standard monomials.
#[derive(Debug)]
pub struct RingDescriptor {
    field: Field,
    vars: Vec<String>,
    ideal: Vec<Monomial>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    degrees: Vec<u32>,
    products: Vec<Vec<Option<usize>>>,
    nilpotency: usize,
}

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.basis == other.basis
    }
}

impl Eq for RingDescriptor {}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl RingDescriptor {
    /// Builds `field[vars]/(ideal)`. Every variable needs a pure power in the ideal.
    pub fn new(field: Field, vars: Vec<String>, ideal: Vec<Monomial>) -> Result<Arc<Self>> {
        let r = vars.len();
        if let Some(g) = ideal.iter().find(|g| g.len() != r) {
            return Err(Error::Parse(format!(
                "ideal generator {g:?} has {} exponents, ring has {r} variables",
                g.len()
            )));
        }
        if ideal.iter().any(|g| g.iter().all(|&e| e == 0)) {
            return Err(Error::Parse("ideal contains 1; the zero ring is not local".into()));
        }
        let mut bounds = Vec::with_capacity(r);
        for (i, name) in vars.iter().enumerate() {
            let pure = ideal
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|g| g[i])
                .min();
            match pure {
                Some(k) => bounds.push(k),
                None => return Err(Error::NotArtinian(name.clone())),
            }
        }

        let mut basis = Vec::new();
        let mut m = vec![0u32; r];
        'outer: loop {
            if !ideal.iter().any(|g| divides(g, &m)) {
                basis.push(m.clone());
            }
            for i in 0..r {
                m[i] += 1;
                if m[i] < bounds[i] {
                    continue 'outer;
                }
                m[i] = 0;
            }
            break;
        }
        basis.sort_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a)));

        let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degrees: Vec<u32> = basis.iter().map(|m| degree(m)).collect();
        let products = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let prod: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&prod).copied()
                    })
                    .collect()
            })
            .collect();
        let nilpotency = degrees.iter().max().map_or(1, |&d| d as usize + 1);
        Ok(Arc::new(Self {
            field,
            vars,
            ideal,
            basis,
            index,
            degrees,
            products,
            nilpotency,
        }))
    }

    /// `make_ring` with generated variable names (`u`, or `u1..ur`).
    pub fn with_rank(field: Field, r: usize, ideal: Vec<Monomial>) -> Result<Arc<Self>> {
        let vars = if r == 1 {
            vec!["u".to_string()]
        } else {
            (1..=r).map(|i| format!("u{i}")).collect()
        };
        Self::new(field, vars, ideal)
    }

    /// `k[u]/(u^n)`.
    pub fn truncated_polynomial(field: Field, n: u32) -> Arc<Self> {
        Self::with_rank(field, 1, vec![vec![n]]).expect("u^n is artinian")
    }

    /// The residue field itself, as a ring with no generators.
    pub fn residue_field(field: Field) -> Arc<Self> {
        Self::new(field, vec![], vec![]).expect("a field is artinian")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn ideal(&self) -> &[Monomial] {
        &self.ideal
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Least `N` with `m^N = 0`.
    pub fn nilpotency_bound(&self) -> usize {
        self.nilpotency
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// `A_n = A/m^{n+1}`.
    pub fn truncation(self: &Arc<Self>, n: usize) -> Arc<Self> {
        if n + 1 >= self.nilpotency {
            return Arc::clone(self);
        }
        let r = self.vars.len();
        let mut ideal = self.ideal.clone();
        // all monomials of degree n+1
        let mut stack: Vec<(usize, Monomial, u32)> = vec![(0, vec![0; r], (n + 1) as u32)];
        while let Some((i, m, left)) = stack.pop() {
            if i + 1 == r {
                let mut m = m;
                m[i] = left;
                ideal.push(m);
                continue;
            }
            for e in 0..=left {
                let mut m2 = m.clone();
                m2[i] = e;
                stack.push((i + 1, m2, left - e));
            }
        }
        Self::new(self.field, self.vars.clone(), ideal).expect("quotient of artinian ring")
    }

    pub fn tower_level(self: &Arc<Self>, n: usize) -> TowerLevel {
        TowerLevel {
            source: Arc::clone(self),
            level: n,
            quotient: self.truncation(n),
        }
    }

    pub fn to_spec(&self) -> RingSpec {
        RingSpec {
            field: self.field.into(),
            vars: self.vars.clone(),
            ideal: self.ideal.clone(),
        }
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Arc<Self>> {
        Self::new(spec.field.to_field()?, spec.vars.clone(), spec.ideal.clone())
    }

    pub(crate) fn monomial_name(&self, m: &[u32]) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(m)
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        parts.join("*")
    }
}

pub fn same_ring(a: &Arc<RingDescriptor>, b: &Arc<RingDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// One level of the tower `A -> A/m^{n+1}`.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub source: Arc<RingDescriptor>,
    pub level: usize,
    pub quotient: Arc<RingDescriptor>,
}

impl TowerLevel {
    pub fn project(&self, a: &RingElement) -> Result<RingElement> {
        if !same_ring(&a.ring, &self.source) {
            return Err(Error::MixedRings);
        }
        Ok(a.transfer(&self.quotient))
    }
}

/// Wire form of a ring descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ideal: Vec<Monomial>,
}

/// Wire form of an element: `{"e1,e2,...": "num/den"}`.
pub type ElementLiteral = BTreeMap<String, String>;

/// An element of a [`RingDescriptor`].
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<RingDescriptor>,
    coeffs: Vec<Scalar>,
}

impl RingElement {
    pub fn zero(ring: &Arc<RingDescriptor>) -> Self {
        Self {
            ring: Arc::clone(ring),
            coeffs: vec![ring.field.zero(); ring.dim()],
        }
    }

    pub fn one(ring: &Arc<RingDescriptor>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<RingDescriptor>, c: Scalar) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[0] = c;
        z
    }

    pub fn from_i64(ring: &Arc<RingDescriptor>, n: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(n))
    }

    /// `c * u^m`, which is zero when `m` lies in the ideal.
    pub fn monomial(ring: &Arc<RingDescriptor>, m: &[u32], c: Scalar) -> Self {
        let mut z = Self::zero(ring);
        if let Some(i) = ring.index_of(m) {
            z.coeffs[i] = c;
        }
        z
    }

    /// The generator `u_i`.
    pub fn var(ring: &Arc<RingDescriptor>, i: usize) -> Self {
        let mut m = vec![0; ring.vars.len()];
        m[i] = 1;
        Self::monomial(ring, &m, ring.field.one())
    }

    pub fn from_coeffs(ring: &Arc<RingDescriptor>, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), ring.dim());
        Self {
            ring: Arc::clone(ring),
            coeffs,
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Scalar::is_zero)
    }

    /// Nonzero terms as (monomial, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.ring.basis.iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero())
    }

    /// Lowest total degree of a nonzero term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.ring.degrees[i])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.negate()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![self.ring.field.zero(); self.ring.dim()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.ring.products[i][j] {
                    out[k] = out[k].add(&a.mul(b));
                }
            }
        }
        Self {
            ring: Arc::clone(&self.ring),
            coeffs: out,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Self {
        Self {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.scalar_mul(&self.ring.field.from_i64(n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            if acc.is_zero() {
                break;
            }
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Units are exactly the elements with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Least `e >= 1` with `a^e = 0`.
    pub fn nilpotency_index(&self) -> Result<usize> {
        if self.is_unit() {
            return Err(Error::NotNilpotent);
        }
        let mut e = 1;
        let mut p = self.clone();
        while !p.is_zero() {
            p = p.mul_unchecked(self);
            e += 1;
        }
        Ok(e)
    }

    /// Inverse via `a = c(1 + n)`, `(1 + n)^{-1} = sum (-n)^k`.
    pub fn invert(&self) -> Result<Self> {
        let c = self.coeffs[0].inverse().ok_or(Error::NotAUnit)?;
        let one = Self::one(&self.ring);
        let n = self.scalar_mul(&c).add_unchecked(&one.negate());
        let minus_n = n.negate();
        let mut term = one.clone();
        let mut sum = one;
        for _ in 1..self.ring.nilpotency {
            term = term.mul_unchecked(&minus_n);
            if term.is_zero() {
                break;
            }
            sum = sum.add_unchecked(&term);
        }
        Ok(sum.scalar_mul(&c))
    }

    /// Multiplication-by-`self` as a matrix (rows indexed by output basis).
    fn multiplication_matrix(&self) -> Vec<Vec<Scalar>> {
        let d = self.ring.dim();
        let mut rows = vec![vec![self.ring.field.zero(); d]; d];
        for j in 0..d {
            let col = Self::unit_vector(&self.ring, j).mul_unchecked(self);
            for (i, c) in col.coeffs.into_iter().enumerate() {
                rows[i][j] = c;
            }
        }
        rows
    }

    fn unit_vector(ring: &Arc<RingDescriptor>, i: usize) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[i] = ring.field.one();
        z
    }

    /// A k-basis of `Ann_A(self)`. Empty when the annihilator is zero.
    pub fn annihilator(&self) -> Vec<Self> {
        let d = self.ring.dim();
        linalg::kernel(self.ring.field, self.multiplication_matrix(), d)
            .into_iter()
            .map(|v| Self::from_coeffs(&self.ring, v))
            .collect()
    }

    pub fn annihilates(&self, t: &Self) -> bool {
        self.mul_unchecked(t).is_zero()
    }

    /// Image in `A/m^{n+1}`.
    pub fn truncate(&self, n: usize) -> Self {
        self.transfer(&self.ring.truncation(n))
    }

    /// Reinterprets the coefficients in `target`, keeping monomials that are
    /// standard there and dropping the rest. This is the quotient map when
    /// `target` is a quotient of this ring and the monomial section when it
    /// is a thickening.
    pub fn transfer(&self, target: &Arc<RingDescriptor>) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in self.terms() {
            if let Some(i) = target.index_of(m) {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }

    pub fn to_literal(&self) -> ElementLiteral {
        self.terms()
            .map(|(m, c)| {
                let key = m.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                (key, c.to_literal())
            })
            .collect()
    }

    pub fn from_literal(ring: &Arc<RingDescriptor>, lit: &ElementLiteral) -> Result<Self> {
        let r = ring.vars.len();
        let mut out = Self::zero(ring);
        for (key, val) in lit {
            let m: Monomial = if key.trim().is_empty() {
                vec![]
            } else {
                key.split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("bad monomial key {key:?}")))?
            };
            let m = if m.is_empty() && r > 0 { vec![0; r] } else { m };
            if m.len() != r {
                return Err(Error::Parse(format!(
                    "monomial key {key:?} has {} exponents, ring has {r} variables",
                    m.len()
                )));
            }
            let c = ring.field.parse(val)?;
            if let Some(i) = ring.index_of(&m) {
                out.coeffs[i] = out.coeffs[i].add(&c);
            }
        }
        Ok(out)
    }

    /// Random element with small coefficients.
    pub fn random<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, rng: &mut R) -> Self {
        let coeffs = (0..ring.dim()).map(|_| random_scalar(ring.field, rng)).collect();
        Self::from_coeffs(ring, coeffs)
    }

    pub fn random_unit<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, rng: &mut R) -> Self {
        let mut a = Self::random(ring, rng);
        while a.coeffs[0].is_zero() {
            a.coeffs[0] = random_scalar(ring.field, rng);
        }
        a
    }

    pub fn random_nilpotent<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, rng: &mut R) -> Self {
        let mut a = Self::random(ring, rng);
        a.coeffs[0] = ring.field.zero();
        a
    }
}

pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Rationals => field.from_i64(rng.gen_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

/// Every element of a ring over a prime field (for brute-force checks).
pub fn enumerate_elements(ring: &Arc<RingDescriptor>) -> Vec<RingElement> {
    let Field::Prime(p) = ring.field else {
        panic!("enumeration needs a finite field");
    };
    let d = ring.dim();
    let total = (p as usize).pow(d as u32);
    (0..total)
        .map(|mut code| {
            let coeffs = (0..d)
                .map(|_| {
                    let v = code % p as usize;
                    code /= p as usize;
                    ring.field.from_i64(v as i64)
                })
                .collect();
            RingElement::from_coeffs(ring, coeffs)
        })
        .collect()
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let name = self.ring.monomial_name(m);
            let neg = c.is_negative_rational();
            let mag = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (name.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "{mag}*{name}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            /// Panics if the operands live in different rings.
            fn $method(self, rhs: &RingElement) -> RingElement {
                assert!(same_ring(&self.ring, &rhs.ring), "mixed rings");
                $body(self, rhs)
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RingElement, b: &RingElement| a.add_unchecked(b));
forward_binop!(Sub, sub, |a: &RingElement, b: &RingElement| a
    .add_unchecked(&b.negate()));
forward_binop!(Mul, mul, |a: &RingElement, b: &RingElement| a.mul_unchecked(b));

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.negate()
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_u(n: u32) -> Arc<RingDescriptor> {
        RingDescriptor::truncated_polynomial(Field::Rationals, n)
    }

    fn elem(ring: &Arc<RingDescriptor>, coeffs: &[i64]) -> RingElement {
        let u = RingElement::var(ring, 0);
        coeffs.iter().enumerate().fold(RingElement::zero(ring), |acc, (i, &c)| {
            &acc + &u.pow(i as u32).mul_i64(c)
        })
    }

    #[test]
    fn make_ring_examples() {
        let a = q_u(3);
        assert_eq!(a.basis(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(a.nilpotency_bound(), 3);

        let f2 = Field::prime(2).unwrap();
        let b = RingDescriptor::with_rank(f2, 2, vec![vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.nilpotency_bound(), 2);

        assert!(matches!(
            RingDescriptor::with_rank(Field::Rationals, 1, vec![]),
            Err(Error::NotArtinian(_))
        ));
        assert!(matches!(
            RingDescriptor::with_rank(Field::Rationals, 2, vec![vec![3, 0]]),
            Err(Error::NotArtinian(_))
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let a = q_u(3);
        let one_u = elem(&a, &[1, 1]);
        assert_eq!(&one_u * &one_u, elem(&a, &[1, 2, 1]));
        let u = RingElement::var(&a, 0);
        assert!((&u.pow(2) * &u).is_zero());

        let f2 = RingDescriptor::truncated_polynomial(Field::prime(2).unwrap(), 2);
        let x = elem(&f2, &[1, 1]);
        assert!((&x * &x).is_one());
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = q_u(3);
        let b = q_u(4);
        assert_eq!(
            RingElement::one(&a).checked_add(&RingElement::one(&b)),
            Err(Error::MixedRings)
        );
    }

    #[test]
    fn unit_and_nilpotent() {
        let a = q_u(3);
        let u = RingElement::var(&a, 0);
        assert!(u.is_nilpotent());
        assert_eq!(u.nilpotency_index().unwrap(), 3);
        assert!(elem(&a, &[1, 1]).is_unit());
        assert_eq!(RingElement::zero(&a).nilpotency_index().unwrap(), 1);
        assert_eq!(RingElement::one(&a).nilpotency_index(), Err(Error::NotNilpotent));
    }

    #[test]
    fn inversion() {
        let a = q_u(3);
        let inv = elem(&a, &[1, 1]).invert().unwrap();
        assert_eq!(inv, elem(&a, &[1, -1, 1]));
        assert!((&inv * &elem(&a, &[1, 1])).is_one());

        let half = RingElement::from_i64(&a, 2).invert().unwrap();
        assert_eq!(half.constant_term(), &Field::Rationals.parse("1/2").unwrap());

        let f2 = Field::prime(2).unwrap();
        let b = RingDescriptor::with_rank(f2, 2, vec![vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        let x = &(&RingElement::one(&b) + &RingElement::var(&b, 0)) + &RingElement::var(&b, 1);
        let inv = x.invert().unwrap();
        assert_eq!(inv, x);
        assert!((&x * &x).is_one());

        assert_eq!(RingElement::var(&a, 0).invert(), Err(Error::NotAUnit));
    }

    #[test]
    fn annihilators() {
        let a = q_u(3);
        let u = RingElement::var(&a, 0);
        let ann = u.pow(2).annihilator();
        assert_eq!(ann.len(), 2);
        for x in &ann {
            assert!(x.is_nilpotent());
            assert!((x * &u.pow(2)).is_zero());
        }
        // kernel of the 3x3 matrix of multiplication by u^2 is span{u, u^2}
        let span_check = |v: &RingElement| v.coeffs()[0].is_zero();
        assert!(ann.iter().all(span_check));
        assert!(RingElement::one(&a).annihilator().is_empty());
        assert_eq!(RingElement::zero(&a).annihilator().len(), 3);
    }

    #[test]
    fn truncation() {
        let a = q_u(3);
        let x = elem(&a, &[1, 1, 1]);
        let t = x.truncate(1);
        assert_eq!(t.ring().dim(), 2);
        assert_eq!(t, elem(&q_u(2), &[1, 1]));
        assert_eq!(x.truncate(2), x);
        assert_eq!(x.truncate(5), x);
        let z = RingElement::var(&a, 0).truncate(0);
        assert!(z.is_zero());
        assert_eq!(z.ring().dim(), 1);

        let lvl = a.tower_level(1);
        assert_eq!(lvl.project(&x).unwrap(), t);
    }

    #[test]
    fn literal_round_trip() {
        let a = q_u(3);
        let x = elem(&a, &[1, -2, 3]).scalar_mul(&Field::Rationals.parse("1/3").unwrap());
        let lit = x.to_literal();
        assert_eq!(lit.get("1").unwrap(), "-2/3");
        assert_eq!(RingElement::from_literal(&a, &lit).unwrap(), x);
        assert_eq!(format!("{x}"), "1/3 - 2/3*u + u^2");
    }

    #[test]
    fn ring_spec_json() {
        let spec: RingSpec =
            serde_json::from_str(r#"{"field": {"Fp": 2}, "vars": ["u", "v"], "ideal": [[2,0],[0,2],[1,1]]}"#).unwrap();
        let r = RingDescriptor::from_spec(&spec).unwrap();
        assert_eq!(r.dim(), 3);
        assert_eq!(r.to_spec(), spec);
        assert!(serde_json::from_str::<RingSpec>(r#"{"field":"Q","vars":[],"ideal":[],"x":1}"#).is_err());
    }
}
