//! Exact Gaussian elimination over a [`FieldSpec`].

use crate::field::{FieldSpec, Scalar};

/// An incrementally maintained reduced row echelon form.
///
/// Rows are inserted one at a time; each stored row has a unit pivot and
/// every pivot column is zero in all other stored rows.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Self { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Scalar>>>(field: FieldSpec, ncols: usize, rows: I) -> Self {
        let mut ech = Self::new(field, ncols);
        for r in rows {
            ech.insert(r);
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    fn reduce(&self, row: &mut [Scalar]) {
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            if row[pc].is_zero() {
                continue;
            }
            let c = row[pc].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        self.reduce(&mut row);
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inv().expect("nonzero pivot");
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for r in self.rows.iter_mut() {
            if r[pc].is_zero() {
                continue;
            }
            let c = r[pc].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(Scalar::is_zero)
    }

    /// A basis of `{x : row · x = 0 for every stored row}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.ncols];
                v[free] = self.field.one();
                for (r, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&r[free];
                }
                v
            })
            .collect()
    }
}

pub fn rank(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> usize {
    RowEchelon::from_rows(field, ncols, rows.iter().cloned()).rank()
}

/// True iff the two families span the same subspace.
pub fn same_span(field: FieldSpec, ncols: usize, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    let ea = RowEchelon::from_rows(field, ncols, a.iter().cloned());
    let eb = RowEchelon::from_rows(field, ncols, b.iter().cloned());
    ea.rank() == eb.rank() && b.iter().all(|r| ea.contains(r)) && a.iter().all(|r| eb.contains(r))
}
