//! Constructive witnesses that residues do not depend on the coordinate.
//!
//! In characteristic 0, `d log u` of a nil-unit is exact: it is `d F(v)` for
//! the formal logarithm `F`. In characteristic `p` the residue is the
//! `d log x` coefficient of the quotient by `sum_n p^{-n} d A((x^{p^n}))`;
//! nil-units are first split into a polar and a regular factor by solving a
//! banded linear system whose off-diagonal part is nilpotent.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::artin::{RingDescriptor, RingElement};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{Differential, LaurentSeries};

fn pole_order(s: &LaurentSeries) -> i64 {
    (-s.lowest().unwrap_or(0)).max(0)
}

/// Checks `nu(u) = 0` and returns `(a_0, v)` with `u = a_0 (1 + v)`.
fn normalize_nil_unit(u: &LaurentSeries) -> Result<(RingElement, LaurentSeries)> {
    let n = u.nu().map_err(|e| Error::NotNilUnit(e.to_string()))?;
    if n != 0 {
        return Err(Error::NotNilUnit(format!("nu(u) = {n}, expected 0")));
    }
    let a0 = u.coeff(0)?;
    let scaled = u.scale(&a0.invert()?)?;
    let v = scaled.sub(&LaurentSeries::one(u.ring()))?;
    Ok((a0, v))
}

/// The formal logarithm `F(v) = sum (-1)^{i+1} v^i / i` of
/// `u = a_0 (1 + v)`, determined at least below `want`.
///
/// `d F(v) = d log u`. The sum is finite when `v` has no positive part: a
/// product of `N` nilpotent coefficients vanishes.
pub fn char0_log(u: &LaurentSeries, want: i64) -> Result<LaurentSeries> {
    let ring = u.ring();
    let field = ring.field();
    if field.characteristic() != 0 {
        return Err(Error::WrongCharacteristic {
            expected: "0".into(),
            found: field.characteristic(),
        });
    }
    let (_, v) = normalize_nil_unit(u)?;
    let n = ring.nilpotency_bound() as i64;
    let d = pole_order(&v);
    let shift = (n - 1) * d;
    let terminates = v.is_exact() && v.highest().is_none_or(|h| h < 0);

    let (prec, rounds) = if terminates {
        (None, n - 1)
    } else {
        let mut p = want;
        if let Some(pv) = v.prec() {
            p = p.min(pv - shift);
        }
        // v^i lives at exponents >= i - (N-1)(d+1)
        (Some(p), (p + (n - 1) * (d + 1) - 1).max(n - 1))
    };
    let cap = prec.map(|p| p + shift);
    let v_known = v.forget_prec();

    let mut sum = LaurentSeries::zero(ring);
    let mut power = LaurentSeries::one(ring);
    for i in 1..=rounds {
        power = power.stored_product(&v_known, cap);
        if power.is_zero() {
            break;
        }
        let coeff = field
            .from_rational(&num_rational::BigRational::new(
                BigInt::from(if i % 2 == 1 { 1 } else { -1 }),
                BigInt::from(i),
            ))
            .expect("characteristic 0");
        sum = sum.add(&power.scale(&RingElement::constant(ring, coeff))?)?;
    }
    Ok(match prec {
        Some(p) => sum.truncated(p),
        None => sum,
    })
}

/// `g` and `f` with `g u = 1 + x^{-1} f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilUnitSplit {
    /// In `A[[x]]`, with constant term `1 mod m`.
    pub g: LaurentSeries,
    /// In `A[x^{-1}]` with nilpotent coefficients.
    pub f: LaurentSeries,
}

/// Solves `g u = 1 + x^{-1} f` for a nil-unit `u` with constant term 1,
/// with `g` determined at least below `x^want`.
///
/// With `g` normalized to constant term 1 the constant term of `g u` is
/// `1 + sum a_j c_j`, generally not 1, so `g` is rescaled by that unit.
///
/// The unknowns `c_1, c_2, ...` of `g` satisfy the banded system whose
/// `k`-th row reads off the coefficient of `x^k` in `g u`. Forward
/// elimination keeps the diagonal a unit because every entry above it is
/// nilpotent; the remaining unipotent system is solved in rounds, each
/// round pushing the correction one power of the tail ideal deeper, so
/// nilpotency-bound many rounds suffice.
pub fn split_nil_unit(u: &LaurentSeries, want: i64) -> Result<NilUnitSplit> {
    let ring = u.ring();
    let one = RingElement::one(ring);
    let a0 = u.coeff(0)?;
    if !a0.is_one() {
        return Err(Error::NotNilUnit(format!("constant term is {a0}, expected 1")));
    }
    if let Some((e, c)) = u.terms().find(|(e, c)| *e < 0 && !c.is_nilpotent()) {
        return Err(Error::NotNilUnit(format!("coefficient {c} of x^{e} is not nilpotent")));
    }
    let nneg = pole_order(u);
    let n = ring.nilpotency_bound() as i64;

    // truncating to m unknowns perturbs the last nneg rows by elements of
    // the tail ideal; each round of back substitution moves that error up
    // by at most nneg rows and one power deeper
    let mut m = (want - 1 + n * nneg).max((n + 1) * nneg).max(1);
    if let Some(p) = u.prec() {
        m = m.min(p - 1);
        if m < (n + 1) * nneg {
            return Err(Error::InsufficientPrecision {
                needed: (n + 1) * nneg + 1,
                available: p,
            });
        }
    }
    let m = m.max(0) as usize;
    let g_prec = m as i64 - n * nneg + 1;

    let entry = |k: i64, j: i64| -> RingElement {
        // coefficient of x^k in c_j x^j u
        u.coeff(k - j).unwrap_or_else(|_| RingElement::zero(ring))
    };
    let mut mat: Vec<Vec<RingElement>> = (1..=m as i64)
        .map(|k| (1..=m as i64).map(|j| entry(k, j)).collect())
        .collect();
    let mut rhs: Vec<RingElement> = (1..=m as i64)
        .map(|k| {
            u.coeff(k)
                .map(|b| b.negate())
                .unwrap_or_else(|_| RingElement::zero(ring))
        })
        .collect();

    for col in 0..m {
        let pivot_inv = mat[col][col].invert()?;
        for row in col + 1..m {
            if mat[row][col].is_zero() {
                continue;
            }
            let factor = &mat[row][col] * &pivot_inv;
            for j in col..m {
                if !mat[col][j].is_zero() {
                    let d = &factor * &mat[col][j];
                    mat[row][j] = &mat[row][j] - &d;
                }
            }
            let d = &factor * &rhs[col];
            rhs[row] = &rhs[row] - &d;
        }
    }
    for row in 0..m {
        let inv = mat[row][row].invert()?;
        for j in row..m {
            mat[row][j] = &mat[row][j] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
    }

    let mut c = rhs.clone();
    for _ in 0..n {
        let next: Vec<RingElement> = (0..m)
            .map(|row| {
                let mut acc = rhs[row].clone();
                for j in row + 1..m {
                    if !mat[row][j].is_zero() {
                        acc = &acc - &(&mat[row][j] * &c[j]);
                    }
                }
                acc
            })
            .collect();
        if next == c {
            break;
        }
        c = next;
    }

    // the rows only fix the positive coefficients of g u; its constant term
    // is the unit 1 + sum a_j c_j, which we divide out
    let mut c0 = one.clone();
    for j in 1..=nneg.min(m as i64) {
        c0 = &c0 + &(&c[j as usize - 1] * &u.coeff(-j)?);
    }
    let mut terms = vec![(0, one)];
    terms.extend(c.into_iter().enumerate().map(|(j, cj)| (j as i64 + 1, cj)));
    let g = LaurentSeries::new(ring, terms, Some(g_prec))?.scale(&c0.invert()?)?;

    // x^{-1} f is the polar part of g u; it only involves c_0 .. c_{nneg-1}
    let polar: Vec<(i64, RingElement)> = (1..=nneg)
        .map(|k| {
            let mut acc = RingElement::zero(ring);
            for j in 0..=(nneg - k).min(g_prec - 1) {
                acc = &acc
                    + &(&g.coeff(j).expect("exact low coefficient") * &u.coeff(-(k + j)).expect("polar part known"));
            }
            (1 - k, acc)
        })
        .collect();
    let f = LaurentSeries::new(ring, polar, None)?;
    Ok(NilUnitSplit { g, f })
}

/// A series in `A((x^{p^n}))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnForm {
    p: u64,
    n: u32,
    series: LaurentSeries,
}

impl PnForm {
    pub fn new(p: u64, n: u32, series: LaurentSeries) -> Result<Self> {
        let modulus = (p as i64).pow(n);
        if let Some((e, _)) = series.terms().find(|(e, _)| e % modulus != 0) {
            return Err(Error::SupportNotDivisible { exponent: e, modulus });
        }
        Ok(Self { p, n, series })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn series(&self) -> &LaurentSeries {
        &self.series
    }
}

/// The derivation `p^{-n} d`: `x^{p^n q} ↦ q x^{p^n q - 1} dx`.
pub fn p_minus_n_d(s: &PnForm) -> Differential {
    let modulus = (s.p as i64).pow(s.n);
    let ring = s.series.ring();
    let terms = s
        .series
        .terms()
        .map(|(e, c)| (e - 1, c.mul_i64(e / modulus)))
        .collect::<Vec<_>>();
    Differential::new(LaurentSeries::new(ring, terms, s.series.prec().map(|p| p - 1)).expect("single ring"))
}

fn require_char_p(ring: &Arc<RingDescriptor>) -> Result<u64> {
    match ring.field() {
        Field::Prime(p) => Ok(p),
        Field::Rationals => Err(Error::WrongCharacteristic {
            expected: "p > 0".into(),
            found: 0,
        }),
    }
}

/// Reduces `omega` modulo `sum_n p^{-n} d A((x^{p^n}))`. Returns the
/// primitives subtracted (one per monomial `x^m d log x`, `m != 0`) and the
/// surviving `d log x` coefficient.
pub fn char_p_reduction(omega: &Differential) -> Result<(Vec<PnForm>, RingElement)> {
    let g = omega.coefficient();
    let ring = g.ring();
    let p = require_char_p(ring)?;
    match omega.prec() {
        Some(prec) if prec < 0 => {
            return Err(Error::InsufficientPrecision {
                needed: 0,
                available: prec,
            })
        }
        _ => {}
    }
    let mut rest = g.clone();
    let mut primitives = Vec::new();
    for (e, c) in g.terms() {
        let m = e + 1;
        if m == 0 {
            continue;
        }
        let (mut n, mut q) = (0u32, m);
        while q % p as i64 == 0 {
            q /= p as i64;
            n += 1;
        }
        let q_inv = RingElement::from_i64(ring, q).invert()?;
        let prim = PnForm::new(p, n, LaurentSeries::monomial(m, c * &q_inv))?;
        rest = rest.sub(p_minus_n_d(&prim).coefficient())?;
        primitives.push(prim);
    }
    if let Some((e, _)) = rest.terms().find(|(e, _)| *e != -1) {
        return Err(Error::PreconditionFailed(format!("reduction left a term at x^{e}")));
    }
    Ok((primitives, rest.coeff(-1)?))
}

/// The `d log x` coefficient of `omega` in the characteristic-`p` quotient.
pub fn canonical_form_char_p(omega: &Differential) -> Result<RingElement> {
    Ok(char_p_reduction(omega)?.1)
}

/// Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntLaurentSeries {
    coeffs: BTreeMap<i64, BigInt>,
}

impl IntLaurentSeries {
    pub fn new(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    pub fn from_i64(terms: &[(i64, i64)]) -> Self {
        Self::new(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BigInt> {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                *out.entry(i + j).or_default() += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::from_i64(&[(0, 1)]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `min_n ord_p(a_n) + ord_p(n)`, with `ord_p(0) = ∞`; `None` means ∞.
    pub fn weight(&self, p: u64) -> Option<u64> {
        self.coeffs
            .iter()
            .filter(|(&n, _)| n != 0)
            .map(|(&n, a)| ord_p(a, p) + ord_p(&BigInt::from(n), p))
            .min()
    }

    /// Random support on `[low, high]` satisfying the weight bound `r`:
    /// each coefficient is scaled by `p^{max(0, r - ord_p(n))}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, p: u64, r: u64, low: i64, high: i64) -> Self {
        Self::new((low..=high).map(|n| {
            let need = r.saturating_sub(ord_p(&BigInt::from(n), p));
            let scale = num_traits::pow(BigInt::from(p), need as usize);
            (n, BigInt::from(rng.gen_range(-4i64..=4)) * scale)
        }))
    }
}

/// p-adic valuation of a nonzero integer; `u64::MAX` for zero.
pub fn ord_p(a: &BigInt, p: u64) -> u64 {
    if a.is_zero() {
        return u64::MAX;
    }
    let p = BigInt::from(p);
    let mut a = a.abs();
    let mut k = 0;
    while a.is_multiple_of(&p) {
        a /= &p;
        k += 1;
    }
    k
}

/// Given `ord_p(a_n) + ord_p(n) >= r` for all `n`, computes `u^p` exactly
/// and reports whether its coefficients satisfy the bound `r + 1`.
pub fn verify_ord_bound(u: &IntLaurentSeries, r: u64, p: u64) -> Result<bool> {
    if Field::prime(p).is_err() {
        return Err(Error::PreconditionFailed(format!("{p} is not a prime")));
    }
    if let Some(w) = u.weight(p) {
        if w < r {
            return Err(Error::PreconditionFailed(format!(
                "input has ord_p(a_n) + ord_p(n) = {w} < {r}"
            )));
        }
    }
    Ok(u.pow(p).weight(p).is_none_or(|w| w > r))
}
