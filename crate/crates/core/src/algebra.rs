//! Curve-singularity rings as subalgebras of a product of truncated
//! power-series rings.
//!
//! A ring is given by topological generators with nonnegative valuation on
//! every branch. Its linear span is closed under multiplication by the
//! generators inside the guarded window; the fixed point of that closure,
//! echelonized, is the canonical basis. Conductor exponents are detected
//! from monomial saturation of the basis.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::linalg::Span;
use crate::scalar::Rat;
use crate::series::MultiBranch;

/// A singularity ring with its computed span basis and invariants.
#[derive(Clone, Debug)]
pub struct Subring {
    name: Option<String>,
    branches: usize,
    /// basis of the span on the window [0, hi)
    basis: Span<Rat>,
    /// per-branch conductor exponent c_i: t^m on branch i lies in the ring
    /// for every m >= c_i
    conductor: Vec<i64>,
    generators: Vec<MultiBranch<Rat>>,
}

impl PartialEq for Subring {
    fn eq(&self, other: &Self) -> bool {
        // canonical bases make ring equality data equality
        self.branches == other.branches
            && self.conductor == other.conductor
            && self.basis.equal_rows(&other.basis)
    }
}

impl Subring {
    /// Close the linear span of `{1} ∪ generators` under multiplication by
    /// the generators, echelonize, and detect conductors.
    ///
    /// Fails with `NoStabilization` when some branch does not saturate with
    /// at least `guard` consecutive monomials below the window top, and with
    /// `DegenerateInput` when the generators do not present a reduced germ
    /// with the stated number of branches.
    pub fn span(
        name: Option<String>,
        branches: usize,
        generators: Vec<MultiBranch<Rat>>,
        cfg: &RunConfig,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::DegenerateInput(
                "no generators: not a curve germ presentation".into(),
            ));
        }
        for g in &generators {
            if g.branch_count() != branches {
                return Err(Error::DegenerateInput(format!(
                    "generator {} has wrong branch count",
                    g
                )));
            }
            if let Some(l) = g.low() {
                if l < 0 {
                    return Err(Error::DegenerateInput(format!(
                        "generator {} has negative valuation",
                        g
                    )));
                }
            }
        }
        for b in 0..branches {
            if generators.iter().all(|g| g.branch(b).is_known_zero()) {
                return Err(Error::DegenerateInput(format!(
                    "every generator vanishes on branch {}",
                    b
                )));
            }
        }
        let hi = cfg.window();
        let mut basis = Span::new(branches, 0, hi);
        basis.insert_elem(&MultiBranch::one(branches, cfg.precision))?;
        for g in &generators {
            basis.insert_elem(&g.truncate(hi))?;
        }
        loop {
            let rows = basis.row_elements();
            let mut grew = false;
            for r in &rows {
                for g in &generators {
                    let p = r.mul(g).truncate(hi);
                    if basis.insert_elem(&p)? {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        // conductor detection: require a guard-length run of consecutive
        // monomials at the top of the window on every branch
        let sat = basis.saturation_exponents();
        let mut conductor = Vec::with_capacity(branches);
        for (b, s) in sat.iter().enumerate() {
            if hi - s < cfg.guard {
                return Err(Error::NoStabilization);
            }
            let _ = b;
            conductor.push(*s);
        }
        Ok(Subring {
            name,
            branches,
            basis,
            conductor,
            generators,
        })
    }

    /// Rebuild the same ring under a different configuration.
    pub fn respan(&self, cfg: &RunConfig) -> Result<Self> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                MultiBranch::from_terms(
                    self.branches,
                    g.branches().iter().enumerate().flat_map(|(b, s)| {
                        s.terms().map(move |(e, c)| (b, *e, c.clone())).collect::<Vec<_>>()
                    }),
                    cfg.precision,
                )
            })
            .collect();
        Subring::span(self.name.clone(), self.branches, gens, cfg)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn branch_count(&self) -> usize {
        self.branches
    }

    pub fn basis(&self) -> &Span<Rat> {
        &self.basis
    }

    pub fn window_hi(&self) -> i64 {
        self.basis.hi()
    }

    pub fn generators(&self) -> &[MultiBranch<Rat>] {
        &self.generators
    }

    pub fn conductor_exponents(&self) -> &[i64] {
        &self.conductor
    }

    pub fn max_conductor(&self) -> i64 {
        self.conductor.iter().copied().max().unwrap_or(0)
    }

    /// Membership in the linear span within the guarded window.
    pub fn contains(&self, x: &MultiBranch<Rat>) -> Result<bool> {
        self.basis.contains_elem(&x.truncate(self.window_hi()))
    }

    /// dim of the normalization modulo the ring, over the window.
    pub fn delta_invariant(&self) -> i64 {
        self.basis.colength() as i64
    }

    /// dim of R-tilde modulo the conductor ideal: the sum of the conductor
    /// exponents.
    pub fn conductor_length(&self) -> i64 {
        self.conductor.iter().sum()
    }

    /// Basis rows spanning the radical: every element with positive
    /// valuation on all branches.
    pub fn radical_rows(&self) -> Vec<MultiBranch<Rat>> {
        self.basis
            .rows()
            .filter(|row| row.keys().next().map_or(false, |(e, _)| *e > 0))
            .map(|row| self.basis.row_to_element(row))
            .collect()
    }

    /// dim m/m^2 for the radical m.
    pub fn embedding_dimension(&self) -> Result<i64> {
        let m_rows = self.radical_rows();
        let hi = self.window_hi();
        let mut m2 = Span::new(self.branches, 0, hi);
        for (i, x) in m_rows.iter().enumerate() {
            for y in &m_rows[i..] {
                m2.insert_elem(&x.mul(y).truncate(hi))?;
            }
        }
        Ok(m_rows.len() as i64 - m2.rank() as i64)
    }

    /// The ring is planar exactly when it embeds in two variables.
    pub fn is_planar(&self) -> Result<bool> {
        Ok(self.embedding_dimension()? <= 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Scalar};

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    /// One-branch generator t^e at the configured precision.
    fn mono(e: i64, cfg: &RunConfig) -> MultiBranch<Rat> {
        MultiBranch::from_terms(1, [(0usize, e, Rat::one())], cfg.precision)
    }

    fn pair(terms: &[(usize, i64, i64)], cfg: &RunConfig) -> MultiBranch<Rat> {
        MultiBranch::from_terms(
            2,
            terms.iter().map(|(b, e, c)| (*b, *e, rat(*c, 1))),
            cfg.precision,
        )
    }

    /// Independent oracle: the numerical semigroup generated by `gens`,
    /// enumerated by dynamic programming up to `bound`.
    fn semigroup(gens: &[i64], bound: i64) -> Vec<i64> {
        let mut reach = vec![false; bound as usize];
        reach[0] = true;
        for e in 0..bound as usize {
            if !reach[e] {
                continue;
            }
            for g in gens {
                let n = e + *g as usize;
                if n < bound as usize {
                    reach[n] = true;
                }
            }
        }
        (0..bound).filter(|e| reach[*e as usize]).collect()
    }

    fn gaps(gens: &[i64], bound: i64) -> Vec<i64> {
        let sg = semigroup(gens, bound);
        (0..bound).filter(|e| !sg.contains(e)).collect()
    }

    fn conductor_of(gens: &[i64], bound: i64) -> i64 {
        let gp = gaps(gens, bound);
        gp.last().map_or(0, |g| g + 1)
    }

    #[test]
    fn monomial_ring_345() {
        let c = cfg();
        let r = Subring::span(
            Some("E6(1)".into()),
            1,
            vec![mono(3, &c), mono(4, &c), mono(5, &c)],
            &c,
        )
        .unwrap();
        // oracle: gap enumeration of <3,4,5>
        assert_eq!(gaps(&[3, 4, 5], 40), vec![1, 2]);
        assert_eq!(r.delta_invariant(), 2);
        assert_eq!(conductor_of(&[3, 4, 5], 40), 3);
        assert_eq!(r.conductor_exponents(), &[3]);
        assert_eq!(r.conductor_length(), 3);
        assert_eq!(r.embedding_dimension().unwrap(), 3);
        // membership: generators in, gaps out
        assert!(r.contains(&mono(3, &c)).unwrap());
        assert!(!r.contains(&mono(2, &c)).unwrap());
    }

    #[test]
    fn monomial_ring_357() {
        let c = cfg();
        let r = Subring::span(None, 1, vec![mono(3, &c), mono(5, &c), mono(7, &c)], &c).unwrap();
        assert_eq!(gaps(&[3, 5, 7], 40), vec![1, 2, 4]);
        assert_eq!(r.delta_invariant(), 3);
        assert_eq!(r.conductor_exponents(), &[conductor_of(&[3, 5, 7], 40)]);
        assert_eq!(r.embedding_dimension().unwrap(), 3);
    }

    #[test]
    fn cusp_invariants() {
        let c = cfg();
        let r = Subring::span(Some("A2".into()), 1, vec![mono(2, &c), mono(3, &c)], &c).unwrap();
        assert_eq!(r.delta_invariant(), gaps(&[2, 3], 40).len() as i64);
        assert_eq!(r.conductor_exponents(), &[2]);
        assert_eq!(r.embedding_dimension().unwrap(), 2);
        // Gorenstein: conductor length = 2 delta
        assert_eq!(r.conductor_length(), 2 * r.delta_invariant());
    }

    #[test]
    fn node_closure() {
        let c = cfg();
        // independent closure oracle: span of {1, (t,0), (0,t)} products is
        // exactly the pairs with matching constant terms
        let r = Subring::span(
            Some("A1".into()),
            2,
            vec![pair(&[(0, 1, 1)], &c), pair(&[(1, 1, 1)], &c)],
            &c,
        )
        .unwrap();
        assert!(r.contains(&pair(&[(0, 0, 1), (1, 0, 1)], &c)).unwrap());
        assert!(!r.contains(&pair(&[(0, 0, 1)], &c)).unwrap());
        assert!(r.contains(&pair(&[(0, 5, 2)], &c)).unwrap());
        assert_eq!(r.conductor_exponents(), &[1, 1]);
        assert_eq!(r.delta_invariant(), 1);
        assert_eq!(r.embedding_dimension().unwrap(), 2);
    }

    #[test]
    fn smooth_branch() {
        let c = cfg();
        let r = Subring::span(Some("sm".into()), 1, vec![mono(1, &c)], &c).unwrap();
        assert_eq!(r.delta_invariant(), 0);
        assert_eq!(r.conductor_exponents(), &[0]);
        assert_eq!(r.embedding_dimension().unwrap(), 1);
    }

    #[test]
    fn idempotence_of_span() {
        let c = cfg();
        let r = Subring::span(None, 1, vec![mono(3, &c), mono(4, &c), mono(5, &c)], &c).unwrap();
        let again = Subring::span(None, 1, r.basis().row_elements(), &c).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn truncation_stability() {
        let c40 = RunConfig::default();
        let c60 = RunConfig::with_precision(60);
        let r40 = Subring::span(None, 1, vec![mono(3, &c40), mono(5, &c40), mono(7, &c40)], &c40)
            .unwrap();
        let r60 = Subring::span(None, 1, vec![mono(3, &c60), mono(5, &c60), mono(7, &c60)], &c60)
            .unwrap();
        let shared = r40.window_hi();
        assert!(r40
            .basis()
            .restricted(shared)
            .unwrap()
            .equal_rows(&r60.basis().restricted(shared).unwrap()));
    }

    #[test]
    fn non_stabilizing_input() {
        let c = cfg();
        // <2> alone never saturates a full tail of consecutive exponents
        assert!(matches!(
            Subring::span(None, 1, vec![mono(2, &c)], &c),
            Err(Error::NoStabilization)
        ));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let c = cfg();
        assert!(matches!(
            Subring::span(None, 1, vec![], &c),
            Err(Error::DegenerateInput(_))
        ));
        // all generators vanish on branch 1
        assert!(matches!(
            Subring::span(None, 2, vec![pair(&[(0, 1, 1)], &c)], &c),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn monotone_conductor_membership() {
        let c = cfg();
        let r = Subring::span(None, 1, vec![mono(3, &c), mono(4, &c), mono(5, &c)], &c).unwrap();
        for m in r.conductor_exponents()[0]..r.window_hi() {
            assert!(r.contains(&mono(m, &c)).unwrap());
        }
    }
}
