//! Truncated Laurent series in `t` and tuples of them, one per branch.
//!
//! A series is known on all exponents below its `prec`: stored sparsely,
//! zero at unlisted exponents, unknown from `prec` on. Binary operations
//! propagate precision: addition takes the minimum, multiplication shifts
//! by the valuation of the other factor.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rat, RatFunc, Scalar};

/// Truncated Laurent series over a scalar field `K`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<K: Scalar> {
    terms: BTreeMap<i64, K>,
    prec: i64,
}

impl<K: Scalar> TruncSeries<K> {
    /// Zero, known up to (excluding) `prec`.
    pub fn zero(prec: i64) -> Self {
        TruncSeries {
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn monomial(exp: i64, coeff: K, prec: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() && exp < prec {
            terms.insert(exp, coeff);
        }
        TruncSeries { terms, prec }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, K)>, prec: i64) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() || e >= prec {
                continue;
            }
            let entry = map.entry(e).or_insert_with(K::zero);
            *entry = entry.add_ref(&c);
            if entry.is_zero() {
                map.remove(&e);
            }
        }
        TruncSeries { terms: map, prec }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first nonzero term; `None` when the series is zero
    /// on the whole known window.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `t^n`; zero below the support, error at or beyond
    /// the precision.
    pub fn coeff(&self, n: i64) -> Result<K> {
        if n >= self.prec {
            return Err(Error::PrecisionExceeded {
                wanted: n,
                prec: self.prec,
            });
        }
        Ok(self.terms.get(&n).cloned().unwrap_or_else(K::zero))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut terms = self.terms.clone();
        terms.retain(|e, _| *e < prec);
        for (e, c) in &other.terms {
            if *e >= prec {
                break;
            }
            let entry = terms.entry(*e).or_insert_with(K::zero);
            *entry = entry.add_ref(c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        TruncSeries { terms, prec }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg_ref())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return TruncSeries::zero(self.prec);
        }
        TruncSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.mul_ref(k)))
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `t^k`, shifting the known window along.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.saturating_add(k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // x = X + O(t^p1), y = Y + O(t^p2):
        // xy = XY + O(t^(v(X)+p2)) + O(t^(v(Y)+p1)).
        let v1 = self.valuation().unwrap_or(self.prec);
        let v2 = other.valuation().unwrap_or(other.prec);
        let prec = (v1.saturating_add(other.prec)).min(v2.saturating_add(self.prec));
        let mut terms: BTreeMap<i64, K> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if e >= prec {
                    break;
                }
                let p = c1.mul_ref(c2);
                if p.is_zero() {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(K::zero);
                *entry = entry.add_ref(&p);
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        TruncSeries { terms, prec }
    }

    /// Multiplicative inverse. The leading coefficient must be invertible;
    /// the result is known on fewer exponents when the valuation is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::NotAUnit { branch: 0 })?;
        let lead = self.terms.get(&v).unwrap();
        let lead_inv = lead.inv().ok_or(Error::NotAUnit { branch: 0 })?;
        // relative coefficients: self = t^v * (lead + sum_{j>=1} x_j t^j)
        let out_prec = self.prec - 2 * v;
        let rel_len = self.prec - v; // number of relative coefficients we can produce
        if rel_len <= 0 {
            return Err(Error::PrecisionExceeded {
                wanted: -v,
                prec: out_prec,
            });
        }
        let mut rel: Vec<K> = Vec::with_capacity(rel_len as usize);
        rel.push(lead_inv.clone());
        for j in 1..rel_len {
            // d_j = -lead_inv * sum_{i=1..=j} x_{v+i} d_{j-i}
            let mut sum = K::zero();
            for i in 1..=j {
                if let Some(xi) = self.terms.get(&(v + i)) {
                    let d = &rel[(j - i) as usize];
                    if !d.is_zero() {
                        sum = sum.add_ref(&xi.mul_ref(d));
                    }
                }
            }
            rel.push(sum.mul_ref(&lead_inv).neg_ref());
        }
        Ok(TruncSeries::from_terms(
            rel.into_iter()
                .enumerate()
                .map(|(j, c)| (-v + j as i64, c)),
            out_prec,
        ))
    }

    /// Truncate the known window down to `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut terms = self.terms.clone();
        terms.retain(|e, _| *e < prec);
        TruncSeries {
            terms,
            prec: prec.min(self.prec),
        }
    }

    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> TruncSeries<L> {
        TruncSeries::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))), self.prec)
    }

    /// Agreement on the shared known window.
    pub fn eq_up_to_common_prec(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        self.truncate(prec).terms == other.truncate(prec).terms
    }
}

impl<K: Scalar> fmt::Display for TruncSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*t", c)?,
                _ => write!(f, "{}*t^{}", c, e)?,
            }
        }
        Ok(())
    }
}

/// A tuple of truncated series, one per branch of the normalization.
/// The ambient arena for every ring and module element in the engine.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiBranch<K: Scalar> {
    branches: Vec<TruncSeries<K>>,
}

impl<K: Scalar> MultiBranch<K> {
    pub fn new(branches: Vec<TruncSeries<K>>) -> Self {
        assert!(!branches.is_empty(), "at least one branch");
        MultiBranch { branches }
    }

    pub fn zero(branch_count: usize, prec: i64) -> Self {
        MultiBranch {
            branches: vec![TruncSeries::zero(prec); branch_count],
        }
    }

    /// The constant `c` on every branch.
    pub fn constant(branch_count: usize, c: K, prec: i64) -> Self {
        MultiBranch {
            branches: vec![TruncSeries::monomial(0, c, prec); branch_count],
        }
    }

    pub fn one(branch_count: usize, prec: i64) -> Self {
        Self::constant(branch_count, K::one(), prec)
    }

    /// Build from sparse terms `(branch, exponent, coefficient)`.
    pub fn from_terms(
        branch_count: usize,
        terms: impl IntoIterator<Item = (usize, i64, K)>,
        prec: i64,
    ) -> Self {
        let mut per: Vec<Vec<(i64, K)>> = vec![vec![]; branch_count];
        for (b, e, c) in terms {
            assert!(b < branch_count, "branch index out of range");
            per[b].push((e, c));
        }
        MultiBranch {
            branches: per
                .into_iter()
                .map(|v| TruncSeries::from_terms(v, prec))
                .collect(),
        }
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, i: usize) -> &TruncSeries<K> {
        &self.branches[i]
    }

    pub fn branches(&self) -> &[TruncSeries<K>] {
        &self.branches
    }

    /// Smallest precision across branches: the window on which the whole
    /// element is known.
    pub fn prec(&self) -> i64 {
        self.branches.iter().map(|s| s.prec()).min().unwrap()
    }

    /// Least exponent carrying a nonzero coefficient on any branch.
    pub fn low(&self) -> Option<i64> {
        self.branches.iter().filter_map(|s| s.valuation()).min()
    }

    pub fn is_known_zero(&self) -> bool {
        self.branches.iter().all(|s| s.is_known_zero())
    }

    /// Coefficient of `t^n` on one branch.
    pub fn coeff(&self, branch: usize, n: i64) -> Result<K> {
        self.branches[branch].coeff(n)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x.add(y))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x.sub(y))
    }

    pub fn neg(&self) -> Self {
        MultiBranch {
            branches: self.branches.iter().map(|s| s.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x.mul(y))
    }

    pub fn scale(&self, k: &K) -> Self {
        MultiBranch {
            branches: self.branches.iter().map(|s| s.scale(k)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&TruncSeries<K>, &TruncSeries<K>) -> TruncSeries<K>) -> Self {
        assert_eq!(
            self.branches.len(),
            other.branches.len(),
            "branch count mismatch"
        );
        MultiBranch {
            branches: self
                .branches
                .iter()
                .zip(&other.branches)
                .map(|(x, y)| f(x, y))
                .collect(),
        }
    }

    /// Componentwise inverse; errors on the first branch that is not a unit.
    pub fn inverse(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.branches.len());
        for (i, s) in self.branches.iter().enumerate() {
            match s.inverse() {
                Ok(inv) => out.push(inv),
                Err(Error::NotAUnit { .. }) => return Err(Error::NotAUnit { branch: i }),
                Err(e) => return Err(e),
            }
        }
        Ok(MultiBranch { branches: out })
    }

    /// True when every branch has a nonzero leading term in the window.
    pub fn is_nonzerodivisor(&self) -> bool {
        self.branches.iter().all(|s| s.valuation().is_some())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        MultiBranch {
            branches: self.branches.iter().map(|s| s.truncate(prec)).collect(),
        }
    }

    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> MultiBranch<L> {
        MultiBranch {
            branches: self.branches.iter().map(|s| s.map_coeffs(&f)).collect(),
        }
    }

    pub fn eq_up_to_common_prec(&self, other: &Self) -> bool {
        self.branches.len() == other.branches.len()
            && self
                .branches
                .iter()
                .zip(&other.branches)
                .all(|(x, y)| x.eq_up_to_common_prec(y))
    }
}

impl MultiBranch<RatFunc> {
    /// Pass to the special fiber: substitute `a = 0` coefficientwise.
    pub fn eval_a_zero(&self) -> Result<MultiBranch<Rat>> {
        let mut out = Vec::with_capacity(self.branches.len());
        for (b, s) in self.branches.iter().enumerate() {
            let mut terms = Vec::new();
            for (e, c) in s.terms() {
                let v = c.eval_zero().map_err(|_| Error::PoleAtZero {
                    branch: b,
                    exp: *e,
                })?;
                terms.push((*e, v));
            }
            out.push(TruncSeries::from_terms(terms, s.prec()));
        }
        Ok(MultiBranch { branches: out })
    }
}

impl MultiBranch<Rat> {
    /// Extend scalars from the base field to rational functions in `a`.
    pub fn lift(&self) -> MultiBranch<RatFunc> {
        self.map_coeffs(|c| RatFunc::constant(c.clone()))
    }
}

impl<K: Scalar> fmt::Display for MultiBranch<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branches.len() == 1 {
            return write!(f, "{}", self.branches[0]);
        }
        write!(f, "(")?;
        for (i, s) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", s)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn t(e: i64, prec: i64) -> TruncSeries<Rat> {
        TruncSeries::monomial(e, Rat::one(), prec)
    }

    #[test]
    fn monomial_product() {
        // (t,0) * (t,0) = (t^2, 0)
        let x = MultiBranch::from_terms(2, [(0usize, 1i64, Rat::one())], 40);
        let p = x.mul(&x);
        assert_eq!(p.coeff(0, 2).unwrap(), Rat::one());
        assert!(p.branch(1).is_known_zero());
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 - t)^{-1} = 1 + t + t^2 + ...
        let one_minus_t = TruncSeries::from_terms([(0, Rat::one()), (1, rat(-1, 1))], 12);
        let inv = one_minus_t.inverse().unwrap();
        for e in 0..12 {
            assert_eq!(inv.coeff(e).unwrap(), Rat::one());
        }
        let prod = one_minus_t.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), Rat::one());
        for e in 1..prod.prec() {
            assert_eq!(prod.coeff(e).unwrap(), Rat::zero());
        }
    }

    #[test]
    fn inverse_identity_with_deformation_coefficient() {
        // (1 - a^{-1} t) * (1 - a^{-1} t)^{-1} = 1 up to precision
        let a_inv = RatFunc::var().inv().unwrap();
        let x = TruncSeries::from_terms(
            [(0, RatFunc::one()), (1, a_inv.neg_ref())],
            20,
        );
        let inv = x.inverse().unwrap();
        let prod = x.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), RatFunc::one());
        for e in 1..prod.prec() {
            assert!(prod.coeff(e).unwrap().is_zero());
        }
    }

    #[test]
    fn two_branch_geometric_identity() {
        // (a - t, a - 1) * (a^{-1} + a^{-2} t + ..., (a-1)^{-1}) = (1, 1)
        let a = RatFunc::var();
        let x = MultiBranch::new(vec![
            TruncSeries::from_terms([(0, a.clone()), (1, RatFunc::one().neg_ref())], 24),
            TruncSeries::from_terms([(0, a.sub_ref(&RatFunc::one()))], 24),
        ]);
        let inv = x.inverse().unwrap();
        // oracle: geometric series sum_{k} a^{-k-1} t^k on the first branch
        let a_inv = RatFunc::var().inv().unwrap();
        let mut pow = a_inv.clone();
        for e in 0..10 {
            assert_eq!(inv.coeff(0, e).unwrap(), pow, "exponent {}", e);
            pow = pow.mul_ref(&a_inv);
        }
        let prod = x.mul(&inv);
        let one = MultiBranch::one(2, prod.prec());
        assert!(prod.eq_up_to_common_prec(&one));
    }

    #[test]
    fn laurent_coefficient_access() {
        let x = t(-1, 10);
        assert_eq!(x.coeff(-1).unwrap(), Rat::one());
        assert_eq!(x.coeff(-5).unwrap(), Rat::zero());
        assert!(matches!(
            x.coeff(10),
            Err(Error::PrecisionExceeded { wanted: 10, prec: 10 })
        ));
    }

    #[test]
    fn coefficient_extraction_multibranch() {
        // coeff(t^3 + 2 t^5, 0, 5) = 2
        let x = MultiBranch::from_terms(
            1,
            [(0usize, 3i64, Rat::one()), (0, 5, rat(2, 1))],
            40,
        );
        assert_eq!(x.coeff(0, 5).unwrap(), rat(2, 1));
        // coeff((f,g), 1, 0) reads g_0
        let y = MultiBranch::from_terms(2, [(0usize, 0i64, rat(7, 1)), (1, 0, rat(3, 1))], 40);
        assert_eq!(y.coeff(1, 0).unwrap(), rat(3, 1));
    }

    #[test]
    fn eval_a_zero_examples() {
        let a = RatFunc::var();
        // (a - t^2) |_{a=0} = -t^2
        let x: MultiBranch<RatFunc> = MultiBranch::from_terms(
            1,
            [(0usize, 0i64, a.clone()), (0, 2, RatFunc::one().neg_ref())],
            40,
        );
        let y = x.eval_a_zero().unwrap();
        assert_eq!(y.coeff(0, 0).unwrap(), Rat::zero());
        assert_eq!(y.coeff(0, 2).unwrap(), rat(-1, 1));
        // a^{-1} t has a pole at a = 0
        let p: MultiBranch<RatFunc> =
            MultiBranch::from_terms(1, [(0usize, 1i64, a.inv().unwrap())], 40);
        assert!(matches!(
            p.eval_a_zero(),
            Err(Error::PoleAtZero { branch: 0, exp: 1 })
        ));
        // constants survive
        let c: MultiBranch<RatFunc> = MultiBranch::one(1, 40);
        assert!(c.eval_a_zero().is_ok());
    }

    #[test]
    fn zero_branch_is_not_a_unit() {
        let x = MultiBranch::from_terms(2, [(0usize, 1i64, Rat::one())], 40);
        assert!(matches!(x.inverse(), Err(Error::NotAUnit { branch: 1 })));
    }

    #[test]
    fn mul_precision_tracks_low_order_shifts() {
        let x = t(-3, 40);
        let y = t(2, 40);
        let p = x.mul(&y);
        // prec = min(-3 + 40, 2 + 40) = 37
        assert_eq!(p.prec(), 37);
        assert_eq!(p.coeff(-1).unwrap(), Rat::one());
    }
}
