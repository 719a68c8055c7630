//! Invariants of curve singularities given by jet presentations.
//!
//! A presentation describes a subspace `V` of `k[x_1]/(x_1^N) x ... x
//! k[x_n]/(x_n^N)` by linear conditions on low-order coefficients. The local
//! ring is the subalgebra generated by `V`; its codimension is the delta
//! invariant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{rref, RowSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityPresentation {
    field: Field,
    branches: usize,
    jet_order: usize,
    /// Conditions only involve coefficients of degree `< support`.
    support: usize,
    /// Row-reduced functionals; coordinate `(i, k)` sits at `i * support + k`.
    conditions: Vec<Vec<Scalar>>,
}

impl SingularityPresentation {
    /// Adds the equal-constant-terms conditions to `extra` and row reduces.
    pub fn new(
        field: Field,
        branches: usize,
        jet_order: usize,
        support: usize,
        extra: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if branches == 0 {
            return Err(Error::PreconditionFailed(
                "a singularity needs at least one branch".into(),
            ));
        }
        let support = support.max(1);
        if jet_order < support {
            return Err(Error::JetTooShort {
                need: support,
                have: jet_order,
            });
        }
        let width = branches * support;
        let mut rows = Vec::new();
        for i in 1..branches {
            let mut r = vec![field.zero(); width];
            r[0] = field.one();
            r[i * support] = field.one().neg();
            rows.push(r);
        }
        for r in extra {
            if r.len() != width {
                return Err(Error::PreconditionFailed(format!(
                    "condition has {} entries, expected {width}",
                    r.len()
                )));
            }
            rows.push(r);
        }
        let (conditions, _) = rref(rows, width);
        Ok(Self {
            field,
            branches,
            jet_order,
            support,
            conditions,
        })
    }

    /// `n` smooth branches glued at one point: only the constants agree.
    pub fn transversal_branches(field: Field, branches: usize, jet_order: usize) -> Result<Self> {
        Self::new(field, branches, jet_order, 1, Vec::new())
    }

    /// Constants agree and `sum_i w_i f_i'(0) = 0`.
    pub fn derivative_condition(field: Field, weights: &[Scalar], jet_order: usize) -> Result<Self> {
        let n = weights.len();
        let mut row = vec![field.zero(); 2 * n];
        for (i, w) in weights.iter().enumerate() {
            row[2 * i + 1] = w.clone();
        }
        Self::new(field, n, jet_order, 2, vec![row])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    pub fn conditions(&self) -> &[Vec<Scalar>] {
        &self.conditions
    }

    pub fn with_jet_order(&self, jet_order: usize) -> Result<Self> {
        if jet_order < self.support {
            return Err(Error::JetTooShort {
                need: self.support,
                have: jet_order,
            });
        }
        Ok(Self {
            jet_order,
            ..self.clone()
        })
    }

    /// Basis of the conditioned subspace at truncation order `n`.
    fn conditioned_basis(&self, n: usize) -> Vec<Vec<Scalar>> {
        let width = self.branches * n;
        let rows: Vec<Vec<Scalar>> = self
            .conditions
            .iter()
            .map(|c| {
                let mut r = vec![self.field.zero(); width];
                for i in 0..self.branches {
                    for k in 0..self.support {
                        r[i * n + k] = c[i * self.support + k].clone();
                    }
                }
                r
            })
            .collect();
        crate::linalg::kernel(self.field, rows, width)
    }

    /// Codimension of the generated subalgebra at order `n`.
    pub fn codimension_at(&self, n: usize) -> usize {
        subalgebra_codim(self.field, self.branches, n, self.conditioned_basis(n))
    }

    /// `dim_k(normalization / local ring)`, certified by agreement at the
    /// jet order and one more.
    pub fn delta_invariant(&self) -> Result<usize> {
        let n = self.jet_order;
        let (a, b) = (self.codimension_at(n), self.codimension_at(n + 1));
        if a != b {
            return Err(Error::NotStabilized {
                n,
                at_n: a,
                next: n + 1,
                at_next: b,
            });
        }
        Ok(a)
    }

    pub fn branch_count(&self) -> usize {
        self.branches
    }

    pub fn genus(&self) -> Result<i64> {
        Ok(self.delta_invariant()? as i64 - self.branches as i64 + 1)
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let delta = self.delta_invariant()?;
        Ok(Invariants {
            m: self.branches,
            delta,
            genus: delta as i64 - self.branches as i64 + 1,
        })
    }

    /// Smallest order in `[support, max]` at which delta is stable, and the
    /// presentation at that order.
    pub fn stabilize(&self, max: usize) -> Result<Self> {
        let mut last = None;
        for n in self.support.max(2)..=max {
            let p = self.with_jet_order(n)?;
            match p.delta_invariant() {
                Ok(_) => return Ok(p),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or(Error::JetTooShort {
            need: self.support.max(2),
            have: max,
        }))
    }
}

/// Codimension in `prod_i k[x_i]/(x_i^n)` of the unital algebra generated by
/// `generators` (vectors with coordinate `(i, k)` at `i * n + k`).
pub fn subalgebra_codim(field: Field, branches: usize, n: usize, generators: Vec<Vec<Scalar>>) -> usize {
    let width = branches * n;
    let mut one = vec![field.zero(); width];
    for i in 0..branches {
        one[i * n] = field.one();
    }
    let mut space = RowSpace::new(width);
    let mut fresh = Vec::new();
    for g in std::iter::once(one).chain(generators) {
        if space.insert(g.clone()) {
            fresh.push(g);
        }
    }
    let mut all: Vec<Vec<Scalar>> = fresh.clone();
    while let Some(g) = fresh.pop() {
        for h in all.clone() {
            let p = branchwise_product(field, branches, n, &g, &h);
            if space.insert(p.clone()) {
                fresh.push(p.clone());
                all.push(p);
            }
        }
    }
    width - space.dim()
}

fn branchwise_product(field: Field, branches: usize, n: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); branches * n];
    for i in 0..branches {
        for j in 0..n {
            let x = &a[i * n + j];
            if x.is_zero() {
                continue;
            }
            for k in 0..n - j {
                let y = &b[i * n + k];
                if !y.is_zero() {
                    out[i * n + j + k] = out[i * n + j + k].add(&x.mul(y));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub m: usize,
    pub delta: usize,
    pub genus: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenusOneClass {
    Cusp,
    Tacnode,
    Lines(usize),
    NotGenusOne,
}

impl GenusOneClass {
    pub fn label(&self) -> String {
        match self {
            Self::Cusp => "cusp".into(),
            Self::Tacnode => "tacnode".into(),
            Self::Lines(n) => format!("n-lines({n})"),
            Self::NotGenusOne => "not-genus-one".into(),
        }
    }

    /// Standard model of the singularity.
    pub fn model(&self) -> Option<String> {
        match self {
            Self::Cusp => Some("V(y^2 - x^3)".into()),
            Self::Tacnode => Some("V(y^2 - y x^2)".into()),
            Self::Lines(n) => Some(format!("{n} general lines through the origin in A^{}", n - 1)),
            Self::NotGenusOne => None,
        }
    }
}

/// Genus-one singularities are determined by their number of branches.
pub fn classify_genus_one(p: &SingularityPresentation) -> Result<GenusOneClass> {
    let inv = p.invariants()?;
    Ok(match (inv.genus, inv.m) {
        (1, 1) => GenusOneClass::Cusp,
        (1, 2) => GenusOneClass::Tacnode,
        (1, m) => GenusOneClass::Lines(m),
        _ => GenusOneClass::NotGenusOne,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub m: usize,
    pub delta: usize,
    pub genus: i64,
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub jet_order: usize,
}

pub fn report(p: &SingularityPresentation) -> Result<SingularityReport> {
    let inv = p.invariants()?;
    let class = classify_genus_one(p)?;
    Ok(SingularityReport {
        m: inv.m,
        delta: inv.delta,
        genus: inv.genus,
        class: class.label(),
        model: class.model(),
        jet_order: p.jet_order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(f: Field, n: usize) -> Vec<Scalar> {
        vec![f.one(); n]
    }

    /// Branch images of the coordinate functions of a parametrized curve.
    fn param(f: Field, n: usize, coords: &[Vec<Vec<i64>>]) -> Vec<Vec<Scalar>> {
        coords
            .iter()
            .map(|branches| {
                let mut v = vec![f.zero(); branches.len() * n];
                for (i, b) in branches.iter().enumerate() {
                    for (k, &c) in b.iter().enumerate().take(n) {
                        v[i * n + k] = f.from_i64(c);
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn cusp_tacnode_node() {
        let q = Field::Rationals;
        let cusp = SingularityPresentation::derivative_condition(q, &ones(q, 1), 4).unwrap();
        assert_eq!(
            cusp.invariants().unwrap(),
            Invariants {
                m: 1,
                delta: 1,
                genus: 1
            }
        );
        assert_eq!(classify_genus_one(&cusp).unwrap(), GenusOneClass::Cusp);

        let tac = SingularityPresentation::derivative_condition(q, &ones(q, 2), 5).unwrap();
        assert_eq!(
            tac.invariants().unwrap(),
            Invariants {
                m: 2,
                delta: 2,
                genus: 1
            }
        );
        assert_eq!(classify_genus_one(&tac).unwrap(), GenusOneClass::Tacnode);

        let node = SingularityPresentation::transversal_branches(q, 2, 4).unwrap();
        assert_eq!(
            node.invariants().unwrap(),
            Invariants {
                m: 2,
                delta: 1,
                genus: 0
            }
        );
        assert_eq!(classify_genus_one(&node).unwrap(), GenusOneClass::NotGenusOne);
    }

    #[test]
    fn parametrized_models_agree() {
        let f = Field::prime(5).unwrap();
        let n = 6;
        // cusp t -> (t^2, t^3)
        let cusp = param(f, n, &[vec![vec![0, 0, 1]], vec![vec![0, 0, 0, 1]]]);
        assert_eq!(subalgebra_codim(f, 1, n, cusp), 1);
        // tacnode: y = 0 and y = x^2
        let tac = param(f, n, &[vec![vec![0, 1], vec![0, 1]], vec![vec![], vec![0, 0, 1]]]);
        assert_eq!(subalgebra_codim(f, 2, n, tac), 2);
        // three lines in A^2 along e1, e2, e1 + e2
        let lines = param(
            f,
            n,
            &[
                vec![vec![0, 1], vec![], vec![0, 1]],
                vec![vec![], vec![0, 1], vec![0, 1]],
            ],
        );
        assert_eq!(subalgebra_codim(f, 3, n, lines), 3);
        let p = SingularityPresentation::derivative_condition(f, &ones(f, 3), n).unwrap();
        assert_eq!(
            p.invariants().unwrap(),
            Invariants {
                m: 3,
                delta: 3,
                genus: 1
            }
        );
    }

    #[test]
    fn conditions_are_row_reduced() {
        let f = Field::prime(3).unwrap();
        let p = SingularityPresentation::new(
            f,
            2,
            3,
            2,
            vec![
                vec![f.zero(), f.one(), f.zero(), f.one()],
                vec![f.zero(), f.from_i64(2), f.zero(), f.from_i64(2)],
            ],
        )
        .unwrap();
        assert_eq!(p.conditions().len(), 2);
    }

    #[test]
    fn unstable_order_is_reported() {
        // f'(0) = 0 and f''(0) = 0 at order 2 cannot see the second condition
        let q = Field::Rationals;
        let p = SingularityPresentation::new(
            q,
            1,
            3,
            3,
            vec![vec![q.zero(), q.one(), q.zero()], vec![q.zero(), q.zero(), q.one()]],
        )
        .unwrap();
        assert_eq!(p.invariants().unwrap().delta, 2);
        assert!(p.with_jet_order(2).is_err());
        let report = report(&SingularityPresentation::derivative_condition(q, &ones(q, 4), 3).unwrap()).unwrap();
        assert_eq!(report.class, "n-lines(4)");
        assert_eq!(report.delta, 4);
    }
}
