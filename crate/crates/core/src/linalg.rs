//! Dense exact linear algebra over a [`Field`].

use crate::field::{Field, Scalar};

/// Row-reduced echelon form of a row list. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    if !rows[r][j].is_zero() {
                        let d = factor.mul(&rows[r][j]);
                        rows[i][j] = rows[i][j].sub(&d);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<Scalar>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{v : M v = 0}` for the matrix given by its rows.
pub fn kernel(field: Field, rows: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = row[f].neg();
            }
            v
        })
        .collect()
}

/// Incrementally maintained row space, used for span closure computations.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let factor = v[pc].clone();
                for j in 0..self.ncols {
                    if !row[j].is_zero() {
                        v[j] = v[j].sub(&factor.mul(&row[j]));
                    }
                }
            }
        }
        v
    }

    /// Inserts `v`; returns whether the span grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let v = self.reduce(v);
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pc].inverse().expect("nonzero");
        let v: Vec<Scalar> = v.iter().map(|x| x.mul(&inv)).collect();
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !row[pc].is_zero() {
                let factor = row[pc].clone();
                for j in 0..self.ncols {
                    if !v[j].is_zero() {
                        row[j] = row[j].sub(&factor.mul(&v[j]));
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Field::Rationals.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let f = Field::Rationals;
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(f, m.clone(), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot = row.iter().zip(v).fold(f.zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn row_space_tracks_dimension() {
        let f = Field::prime(2).unwrap();
        let mut s = RowSpace::new(3);
        let v = |a: i64, b: i64, c: i64| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        assert!(s.insert(v(1, 1, 0)));
        assert!(s.insert(v(0, 1, 1)));
        assert!(!s.insert(v(1, 0, 1)));
        assert_eq!(s.dim(), 2);
        assert_eq!(rank(vec![v(1, 1, 0), v(0, 1, 1), v(1, 0, 1)], 3), 2);
    }
}
