//! Reduced echelon spans over a coefficient field, indexed by
//! `(exponent, branch)` columns.
//!
//! A [`Span`] is a canonical basis of a subspace of the truncated product
//! space `K[[t]]^r` restricted to a window `[lo, hi)` of exponents. Rows are
//! kept monic at their pivot and fully reduced against one another, so two
//! spans are equal as subspaces iff their row data are identical.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{MultiBranch, TruncSeries};

/// Column key: exponent first, then branch, matching the monomial order.
pub type Col = (i64, usize);

/// Sparse row over the window columns.
pub type Row<K> = BTreeMap<Col, K>;

#[derive(Clone, Debug)]
pub struct Span<K: Scalar> {
    branches: usize,
    lo: i64,
    hi: i64,
    /// pivot column -> monic reduced row
    rows: BTreeMap<Col, Row<K>>,
}

impl<K: Scalar> Span<K> {
    pub fn new(branches: usize, lo: i64, hi: i64) -> Self {
        assert!(lo < hi, "empty window [{}, {})", lo, hi);
        Span {
            branches,
            lo,
            hi,
            rows: BTreeMap::new(),
        }
    }

    /// Build a span from elements; the window is the widest one on which
    /// every element is fully known, capped above by `cap_hi`.
    pub fn from_elements(
        branches: usize,
        elems: &[MultiBranch<K>],
        cap_hi: i64,
    ) -> Result<Self> {
        let lo = elems
            .iter()
            .filter_map(|e| e.low())
            .min()
            .unwrap_or(0)
            .min(0);
        let hi = elems
            .iter()
            .map(|e| e.prec())
            .min()
            .unwrap_or(cap_hi)
            .min(cap_hi);
        if hi <= lo {
            return Err(Error::WindowMismatch);
        }
        let mut span = Span::new(branches, lo, hi);
        for e in elems {
            span.insert_elem(e)?;
        }
        Ok(span)
    }

    pub fn branches(&self) -> usize {
        self.branches
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Dimension of the full window space.
    pub fn ambient_dim(&self) -> usize {
        ((self.hi - self.lo) as usize) * self.branches
    }

    /// Codimension of the span inside the window space.
    pub fn colength(&self) -> usize {
        self.ambient_dim() - self.rank()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Col> {
        self.rows.keys()
    }

    pub fn has_pivot(&self, col: Col) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row<K>> {
        self.rows.values()
    }

    fn elem_to_row(&self, elem: &MultiBranch<K>) -> Result<Row<K>> {
        if elem.branch_count() != self.branches {
            return Err(Error::WindowMismatch);
        }
        let mut row = Row::new();
        for (b, s) in elem.branches().iter().enumerate() {
            if s.prec() < self.hi {
                return Err(Error::PrecisionExceeded {
                    wanted: self.hi - 1,
                    prec: s.prec(),
                });
            }
            for (e, c) in s.terms() {
                if *e < self.lo {
                    return Err(Error::WindowMismatch);
                }
                if *e < self.hi {
                    row.insert((*e, b), c.clone());
                }
            }
        }
        Ok(row)
    }

    /// Reduce a row against the basis. Single ascending pass is enough
    /// because stored rows are zero at one another's pivot columns.
    pub fn reduce(&self, mut row: Row<K>) -> Row<K> {
        for (piv, prow) in &self.rows {
            if let Some(c) = row.get(piv).cloned() {
                if !c.is_zero() {
                    sub_scaled(&mut row, &c, prow);
                }
            }
        }
        row
    }

    /// Insert a row; returns whether it added a new pivot.
    pub fn insert_row(&mut self, row: Row<K>) -> bool {
        let mut r = self.reduce(row);
        let piv = match r.keys().next() {
            None => return false,
            Some(p) => *p,
        };
        let lead = r.get(&piv).unwrap().clone();
        let inv = lead.inv().expect("pivot coefficient must be invertible");
        for v in r.values_mut() {
            *v = v.mul_ref(&inv);
        }
        // eliminate the new pivot column from stored rows
        for prow in self.rows.values_mut() {
            if let Some(c) = prow.get(&piv).cloned() {
                if !c.is_zero() {
                    sub_scaled(prow, &c, &r);
                }
            }
        }
        self.rows.insert(piv, r);
        true
    }

    pub fn insert_elem(&mut self, elem: &MultiBranch<K>) -> Result<bool> {
        let row = self.elem_to_row(elem)?;
        Ok(self.insert_row(row))
    }

    pub fn contains_row(&self, row: Row<K>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Membership of an element in the span, within the window.
    pub fn contains_elem(&self, elem: &MultiBranch<K>) -> Result<bool> {
        // support below the window means the element is outside the space
        if let Some(l) = elem.low() {
            if l < self.lo {
                return Ok(false);
            }
        }
        let row = self.elem_to_row(elem)?;
        Ok(self.contains_row(row))
    }

    pub fn contains_monomial(&self, exp: i64, branch: usize) -> bool {
        if exp < self.lo || exp >= self.hi {
            return false;
        }
        let mut row = Row::new();
        row.insert((exp, branch), K::one());
        self.contains_row(row)
    }

    /// Reconstruct basis rows as elements, known exactly on the window.
    pub fn row_elements(&self) -> Vec<MultiBranch<K>> {
        self.rows
            .values()
            .map(|row| self.row_to_element(row))
            .collect()
    }

    pub fn row_to_element(&self, row: &Row<K>) -> MultiBranch<K> {
        let mut per: Vec<Vec<(i64, K)>> = vec![vec![]; self.branches];
        for ((e, b), c) in row {
            per[*b].push((*e, c.clone()));
        }
        MultiBranch::new(
            per.into_iter()
                .map(|v| TruncSeries::from_terms(v, self.hi))
                .collect(),
        )
    }

    /// Truncate the window from above; canonical form is preserved.
    pub fn restricted(&self, new_hi: i64) -> Result<Self> {
        if new_hi > self.hi || new_hi <= self.lo {
            return Err(Error::WindowMismatch);
        }
        let mut rows = BTreeMap::new();
        for (piv, row) in &self.rows {
            if piv.0 >= new_hi {
                continue;
            }
            let r: Row<K> = row
                .iter()
                .filter(|((e, _), _)| *e < new_hi)
                .map(|(k, v)| (*k, v.clone()))
                .collect();
            rows.insert(*piv, r);
        }
        Ok(Span {
            branches: self.branches,
            lo: self.lo,
            hi: new_hi,
            rows,
        })
    }

    /// Widen the window from below (rows are zero there anyway).
    pub fn widened_lo(&self, new_lo: i64) -> Self {
        assert!(new_lo <= self.lo);
        let mut s = self.clone();
        s.lo = new_lo;
        s
    }

    /// Equality as subspaces of the *same* window.
    pub fn equal_rows(&self, other: &Self) -> bool {
        self.branches == other.branches && self.rows == other.rows
    }

    /// Per-branch saturation exponent: least `s` such that every pure
    /// monomial with exponent in `[s, hi)` lies in the span. Equals `hi`
    /// when even the topmost monomial is missing.
    pub fn saturation_exponents(&self) -> Vec<i64> {
        (0..self.branches)
            .map(|b| {
                let mut s = self.hi;
                let mut e = self.hi - 1;
                while e >= self.lo {
                    if self.contains_monomial(e, b) {
                        s = e;
                        e -= 1;
                    } else {
                        break;
                    }
                }
                s
            })
            .collect()
    }

    /// Projection of the span to a single branch, re-echelonized.
    pub fn project_branch(&self, b: usize) -> Span<K> {
        let mut out = Span::new(1, self.lo, self.hi);
        for row in self.rows.values() {
            let r: Row<K> = row
                .iter()
                .filter(|((_, rb), _)| *rb == b)
                .map(|((e, _), c)| ((*e, 0usize), c.clone()))
                .collect();
            out.insert_row(r);
        }
        out
    }

    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L + Copy) -> Span<L> {
        // structure is preserved: monic pivots map to monic pivots for
        // field embeddings, which is the only use
        let mut rows = BTreeMap::new();
        for (piv, row) in &self.rows {
            let r: Row<L> = row.iter().map(|(k, v)| (*k, f(v))).collect();
            rows.insert(*piv, r);
        }
        Span {
            branches: self.branches,
            lo: self.lo,
            hi: self.hi,
            rows,
        }
    }
}

/// `row -= c * other`
fn sub_scaled<K: Scalar>(row: &mut Row<K>, c: &K, other: &Row<K>) {
    for (col, v) in other {
        let delta = c.mul_ref(v);
        if delta.is_zero() {
            continue;
        }
        match row.get_mut(col) {
            Some(entry) => {
                *entry = entry.sub_ref(&delta);
                if entry.is_zero() {
                    row.remove(col);
                }
            }
            None => {
                row.insert(*col, delta.neg_ref());
            }
        }
    }
}

/// Nullspace of a small dense matrix (rows of length `ncols`), returned as
/// a basis of coefficient vectors.
pub fn nullspace<K: Scalar>(matrix: &[Vec<K>], ncols: usize) -> Vec<Vec<K>> {
    // RREF with pivot bookkeeping
    let mut rows: Vec<Vec<K>> = matrix.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rref: Vec<(usize, Vec<K>)> = Vec::new(); // (pivot col, row)
    for mut row in rows.drain(..) {
        for (pc, prow) in &rref {
            let c = row[*pc].clone();
            if !c.is_zero() {
                for j in 0..ncols {
                    let d = c.mul_ref(&prow[j]);
                    if !d.is_zero() {
                        row[j] = row[j].sub_ref(&d);
                    }
                }
            }
        }
        if let Some(pc) = (0..ncols).find(|j| !row[*j].is_zero()) {
            let inv = row[pc].inv().unwrap();
            for v in row.iter_mut() {
                if !v.is_zero() {
                    *v = v.mul_ref(&inv);
                }
            }
            for (_, prow) in rref.iter_mut() {
                let c = prow[pc].clone();
                if !c.is_zero() {
                    for j in 0..ncols {
                        let d = c.mul_ref(&row[j]);
                        if !d.is_zero() {
                            prow[j] = prow[j].sub_ref(&d);
                        }
                    }
                }
            }
            pivot_of_col[pc] = Some(rref.len());
            rref.push((pc, row));
        }
    }
    // free columns generate the kernel
    let mut basis = Vec::new();
    for j in 0..ncols {
        if pivot_of_col[j].is_some() {
            continue;
        }
        let mut v = vec![K::zero(); ncols];
        v[j] = K::one();
        for (pc, prow) in &rref {
            let c = &prow[j];
            if !c.is_zero() {
                v[*pc] = c.neg_ref();
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a small dense matrix with rows of length `ncols`.
pub fn dense_rank<K: Scalar>(matrix: &[Vec<K>], ncols: usize) -> usize {
    ncols - nullspace(matrix, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn elem(branches: usize, terms: &[(usize, i64, i64)], prec: i64) -> MultiBranch<Rat> {
        MultiBranch::from_terms(
            branches,
            terms.iter().map(|(b, e, c)| (*b, *e, rat(*c, 1))),
            prec,
        )
    }

    #[test]
    fn echelon_is_canonical() {
        let mut s1 = Span::new(1, 0, 8);
        s1.insert_elem(&elem(1, &[(0, 0, 1), (0, 1, 2)], 8)).unwrap();
        s1.insert_elem(&elem(1, &[(0, 1, 1)], 8)).unwrap();
        let mut s2 = Span::new(1, 0, 8);
        s2.insert_elem(&elem(1, &[(0, 1, 5)], 8)).unwrap();
        s2.insert_elem(&elem(1, &[(0, 0, 3)], 8)).unwrap();
        assert!(s1.equal_rows(&s2));
        assert_eq!(s1.rank(), 2);
    }

    #[test]
    fn membership_and_colength() {
        let mut s = Span::new(2, 0, 6);
        // (t, t) and (t^2, 0)
        s.insert_elem(&elem(2, &[(0, 1, 1), (1, 1, 1)], 6)).unwrap();
        s.insert_elem(&elem(2, &[(0, 2, 1)], 6)).unwrap();
        assert!(s.contains_elem(&elem(2, &[(0, 1, 3), (1, 1, 3), (0, 2, 7)], 6)).unwrap());
        assert!(!s.contains_elem(&elem(2, &[(0, 1, 1)], 6)).unwrap());
        assert_eq!(s.colength(), 12 - 2);
    }

    #[test]
    fn saturation_detection() {
        let mut s = Span::new(1, 0, 10);
        for e in 3..10 {
            s.insert_elem(&elem(1, &[(0, e, 1)], 10)).unwrap();
        }
        assert_eq!(s.saturation_exponents(), vec![3]);
        s.insert_elem(&elem(1, &[(0, 0, 1)], 10)).unwrap();
        // exponent 0 present but 1, 2 missing: tail still starts at 3
        assert_eq!(s.saturation_exponents(), vec![3]);
    }

    #[test]
    fn nullspace_small_system() {
        // x + y = 0, y + z = 0 -> kernel spanned by (1, -1, 1)
        let m = vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // normalize: v = t * (1, -1, 1)
        let t = v[2].clone();
        assert_eq!(v[0], t.clone());
        assert_eq!(v[1], -t.clone());
    }

    #[test]
    fn restriction_preserves_canonical_form() {
        let mut s = Span::new(1, 0, 10);
        s.insert_elem(&elem(1, &[(0, 0, 1), (0, 9, 1)], 10)).unwrap();
        s.insert_elem(&elem(1, &[(0, 8, 1)], 10)).unwrap();
        let r = s.restricted(6).unwrap();
        assert_eq!(r.rank(), 1);
        assert!(r.contains_monomial(0, 0));
    }
}
