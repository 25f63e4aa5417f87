//! Splines, flow-up classes and flow-up bases.
//!
//! A spline on `(G, β)` is a vector `f` with `f_v ∈ m_v·Z` for every vertex
//! and `f_u ≡ f_v (mod r_e)` for every edge `e = uv`. A flow-up class with
//! index `i` vanishes below `i` and is nonzero at `i`; its leading term is
//! `(i, f_i)`. A flow-up basis holds one class per index at which flow-up
//! classes exist, and is a basis exactly when every leading term generates
//! the ideal of leading entries at its index.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::arith::{congruent, lcm_list};
use crate::graph::EdgeLabeledGraph;
use crate::{Error, Result, Scalar};

/// An integer vertex labeling ordered `v_1..v_n`. Construction does not check
/// the spline conditions; see [`check`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spline<T>(Vec<T>);

impl<T: Scalar> Spline<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Spline(entries)
    }

    pub fn zero(n: usize) -> Self {
        Spline(vec![T::zero(); n])
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Spline(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Spline(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Index of the first nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }
}

impl<T> Deref for Spline<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T: Scalar> From<Vec<T>> for Spline<T> {
    fn from(v: Vec<T>) -> Self {
        Spline(v)
    }
}

/// The first spline condition a vector fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<T> {
    /// `f_vertex ∉ m_vertex·Z`.
    Membership { vertex: usize, value: T, multiplier: T },
    /// `f_u ≢ f_v (mod r)` across `edge`.
    Edge { edge: usize, u: usize, v: usize, modulus: T },
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Membership { vertex, value, multiplier } => {
                write!(f, "vertex {}: {value} is not a multiple of {multiplier}", vertex + 1)
            }
            Violation::Edge { edge, u, v, modulus } => write!(
                f,
                "edge {} ({}-{}): entries differ modulo {modulus}",
                edge + 1,
                u + 1,
                v + 1
            ),
        }
    }
}

/// Checks both families of spline conditions, vertices first.
pub fn check<T: Scalar>(g: &EdgeLabeledGraph<T>, f: &[T]) -> Result<Result<(), Violation<T>>> {
    if f.len() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), found: f.len() });
    }
    for (v, (x, m)) in f.iter().zip(g.multipliers()).enumerate() {
        if !congruent(x, &T::zero(), m) {
            return Ok(Err(Violation::Membership { vertex: v, value: x.clone(), multiplier: m.clone() }));
        }
    }
    for (k, e) in g.edges().iter().enumerate() {
        if !congruent(&f[e.u], &f[e.v], &e.modulus) {
            return Ok(Err(Violation::Edge { edge: k, u: e.u, v: e.v, modulus: e.modulus.clone() }));
        }
    }
    Ok(Ok(()))
}

/// `true` iff `f` has the right length and satisfies every spline condition.
pub fn is_spline<T: Scalar>(g: &EdgeLabeledGraph<T>, f: &[T]) -> bool {
    matches!(check(g, f), Ok(Ok(())))
}

/// A nonzero spline: `(lcm(m_1, r_e : e ∋ v_1), 0, …, 0)`, or the constant
/// spline `lcm(m_1..m_n)` everywhere when an equality edge at `v_1` would
/// force that lcm to zero.
pub fn nontrivial_spline<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<Spline<T>> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    let incident = g.incident(0).iter().map(|&k| &g.edge(k).modulus);
    let first = lcm_list(std::iter::once(g.multiplier(0)).chain(incident));
    if !first.is_zero() {
        let mut f = vec![T::zero(); n];
        f[0] = first;
        return Ok(Spline(f));
    }
    let a = lcm_list(g.multipliers());
    if a.is_zero() {
        return Err(Error::InvalidArgument("every spline vanishes on a graph with a zero multiplier here".into()));
    }
    Ok(Spline(vec![a; n]))
}

/// The constant flow-up class at `i`: the value `a = lcm(N_i ∪ M_i)` on
/// vertices `≥ i` and zero below, where `N_i` holds the moduli of edges
/// crossing the cut and `M_i` the multipliers at or above `i`.
pub fn constant_flowup<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize) -> Result<FlowUpClass<T>> {
    g.check_vertex(i)?;
    let crossing: Vec<&T> = g
        .edges()
        .iter()
        .filter(|e| (e.u < i) != (e.v < i))
        .map(|e| &e.modulus)
        .collect();
    if crossing.iter().any(|r| r.is_zero()) {
        return Err(Error::ZeroModulusCut { index: i });
    }
    let a = lcm_list(crossing.into_iter().chain(&g.multipliers()[i..]));
    if a.is_zero() {
        return Err(Error::NoFlowUp { index: i });
    }
    let f = (0..g.vertex_count()).map(|v| if v < i { T::zero() } else { a.clone() }).collect();
    FlowUpClass::new(Spline(f), i)
}

/// A spline with zeros below `index` and a nonzero entry at `index`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowUpClass<T> {
    spline: Spline<T>,
    index: usize,
}

impl<T: Scalar> FlowUpClass<T> {
    /// Checks the flow-up shape only; spline validity depends on a graph.
    pub fn new(spline: Spline<T>, index: usize) -> Result<Self> {
        match spline.leading_index() {
            Some(lead) if lead == index => Ok(FlowUpClass { spline, index }),
            Some(lead) => Err(Error::InvalidArgument(format!(
                "first nonzero entry is at vertex {}, expected {}",
                lead + 1,
                index + 1
            ))),
            None => Err(Error::InvalidArgument("a flow-up class cannot be zero".into())),
        }
    }

    /// Takes the index from the first nonzero entry.
    pub fn from_vec(entries: Vec<T>) -> Result<Self> {
        let spline = Spline(entries);
        let index = spline.leading_index().ok_or_else(|| Error::InvalidArgument("a flow-up class cannot be zero".into()))?;
        Ok(FlowUpClass { spline, index })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn spline(&self) -> &Spline<T> {
        &self.spline
    }

    pub fn entries(&self) -> &[T] {
        &self.spline
    }

    pub fn leading_value(&self) -> &T {
        &self.spline[self.index]
    }

    /// `(index, value)` of the first nonzero entry.
    pub fn leading_term(&self) -> (usize, T) {
        (self.index, self.leading_value().clone())
    }

    /// `self + c·other` where `other` has a larger index, so the leading term is unchanged.
    pub fn add_multiple(&self, c: &T, other: &Self) -> Result<Self> {
        if other.index <= self.index {
            return Err(Error::InvalidArgument("only classes with larger index may be added".into()));
        }
        FlowUpClass::new(self.spline.add(&other.spline.scale(c)), self.index)
    }
}

/// Flow-up classes with strictly increasing indices in a common dimension.
///
/// Over positive labels there is one class per vertex. Equality edges can
/// force entries to zero, in which case indices without a flow-up class
/// are simply absent and the rank is smaller than `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowUpBasis<T> {
    dim: usize,
    classes: Vec<FlowUpClass<T>>,
}

impl<T: Scalar> FlowUpBasis<T> {
    pub fn new(dim: usize, classes: Vec<FlowUpClass<T>>) -> Result<Self> {
        for c in &classes {
            if c.entries().len() != dim {
                return Err(Error::LengthMismatch { expected: dim, found: c.entries().len() });
            }
        }
        if classes.windows(2).any(|w| w[0].index >= w[1].index) {
            return Err(Error::InvalidArgument("class indices must be strictly increasing".into()));
        }
        Ok(FlowUpBasis { dim, classes })
    }

    /// Builds a basis from plain vectors, reading each index off the first nonzero entry.
    pub fn from_vectors(dim: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        let classes = vectors.into_iter().map(FlowUpClass::from_vec).collect::<Result<Vec<_>>>()?;
        Self::new(dim, classes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    /// One class at every index.
    pub fn is_complete(&self) -> bool {
        self.classes.len() == self.dim
    }

    pub fn classes(&self) -> &[FlowUpClass<T>] {
        &self.classes
    }

    pub fn class_at(&self, index: usize) -> Option<&FlowUpClass<T>> {
        self.classes.iter().find(|c| c.index == index)
    }

    pub fn indices(&self) -> BTreeSet<usize> {
        self.classes.iter().map(|c| c.index).collect()
    }

    /// Leading values per vertex; zero where no class exists.
    pub fn leading_values(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for c in &self.classes {
            out[c.index] = c.leading_value().clone();
        }
        out
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        self.classes.iter().map(|c| c.entries().to_vec()).collect()
    }

    /// Replaces the class with index `k` by `F_k + c·F_j` for `j > k`.
    pub fn with_shear(&self, k: usize, c: &T, j: usize) -> Result<Self> {
        let pos = |idx| {
            self.classes
                .iter()
                .position(|cl| cl.index == idx)
                .ok_or_else(|| Error::InvalidArgument(format!("no class with index {}", idx + 1)))
        };
        let (pk, pj) = (pos(k)?, pos(j)?);
        let mut classes = self.classes.clone();
        classes[pk] = self.classes[pk].add_multiple(c, &self.classes[pj])?;
        Self::new(self.dim, classes)
    }

    /// Every class satisfies the spline conditions on `g`.
    pub fn all_splines(&self, g: &EdgeLabeledGraph<T>) -> bool {
        self.dim == g.vertex_count() && self.classes.iter().all(|c| is_spline(g, c.entries()))
    }
}

/// Coefficients `a` with `f = Σ a_k F^(k)`, by forward substitution: at each
/// index the current remainder entry must be an exact multiple of the
/// leading value there, and must be zero at indices without a class.
///
/// The returned vector has one coefficient per class.
pub fn express_in_basis<T: Scalar>(basis: &FlowUpBasis<T>, f: &[T]) -> Result<Vec<T>> {
    if f.len() != basis.dim() {
        return Err(Error::LengthMismatch { expected: basis.dim(), found: f.len() });
    }
    let mut rest = f.to_vec();
    let mut coefficients = Vec::with_capacity(basis.rank());
    let mut classes = basis.classes().iter().peekable();
    for k in 0..basis.dim() {
        match classes.next_if(|c| c.index() == k) {
            Some(class) => {
                let (q, r) = rest[k].div_rem(class.leading_value());
                if !r.is_zero() {
                    return Err(Error::NotInSpan { index: k });
                }
                for (x, y) in rest.iter_mut().zip(class.entries()) {
                    *x = x.clone() - q.clone() * y.clone();
                }
                coefficients.push(q);
            }
            None if !rest[k].is_zero() => return Err(Error::NotInSpan { index: k }),
            None => {}
        }
    }
    debug_assert!(rest.iter().all(|x| x.is_zero()));
    Ok(coefficients)
}

/// Recombines coefficients from [`express_in_basis`].
pub fn combine<T: Scalar>(basis: &FlowUpBasis<T>, coefficients: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); basis.dim()];
    for (a, class) in coefficients.iter().zip(basis.classes()) {
        for (x, y) in out.iter_mut().zip(class.entries()) {
            *x = x.clone() + a.clone() * y.clone();
        }
    }
    out
}

/// Outcome of [`verify_basis_criterion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport<T> {
    pub holds: bool,
    /// Some index could not be settled inside the window.
    pub inconclusive: bool,
    /// A flow-up whose leading entry is not a multiple of the basis' leading value.
    pub counterexample: Option<Vec<T>>,
}

/// The basis criterion checked on a finite window: every class is a spline
/// with the right shape, and every flow-up class found by exhaustive search
/// with entries up to `bound` has a leading entry divisible by the basis'
/// leading value at that index (and no flow-up exists where the basis has
/// no class).
pub fn verify_basis_criterion<T: Scalar>(
    g: &EdgeLabeledGraph<T>,
    basis: &FlowUpBasis<T>,
    bound: &T,
) -> Result<CriterionReport<T>> {
    let window = crate::oracle::EnumerationWindow::uniform(g.vertex_count(), bound.clone());
    crate::oracle::check_criterion(g, basis, &window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;
    use proptest::prelude::*;

    type G = EdgeLabeledGraph<i64>;

    fn graph(m: &[i64], edges: &[(usize, usize, i64)]) -> G {
        G::new(m.to_vec(), edges.iter().map(|&(u, v, r)| (u - 1, v - 1, r)).collect()).unwrap()
    }

    fn ex() -> G {
        graph(&[9, 12, 8], &[(1, 2, 20), (2, 3, 8)])
    }

    fn ex_basis() -> FlowUpBasis<i64> {
        FlowUpBasis::from_vectors(3, vec![vec![36, 96, 0], vec![0, 120, 0], vec![0, 0, 8]]).unwrap()
    }

    #[test]
    fn is_spline_examples() {
        let g = ex();
        assert!(is_spline(&g, &[36, 96, 0]));
        assert_eq!(
            check(&g, &[36, 95, 0]).unwrap(),
            Err(Violation::Membership { vertex: 1, value: 95, multiplier: 12 })
        );
        assert!(!is_spline(&g, &[36, 95, 0]));
        let p2 = graph(&[2, 3], &[(1, 2, 0)]);
        assert!(is_spline(&p2, &[6, 6]));
        assert!(!is_spline(&p2, &[6, 12]));
        assert!(matches!(check(&g, &[1, 2]), Err(Error::LengthMismatch { expected: 3, found: 2 })));
        assert!(matches!(check(&g, &[36, 108, 0]).unwrap(), Err(Violation::Edge { edge: 0, .. })));
        let msg = check(&g, &[36, 95, 0]).unwrap().unwrap_err().to_string();
        assert!(msg.contains("vertex 2"), "{msg}");
    }

    #[test]
    fn nontrivial_spline_examples() {
        let f = nontrivial_spline(&ex()).unwrap();
        // lcm(9, 20) = 180
        assert_eq!(&*f, &[180, 0, 0]);
        assert!(is_spline(&ex(), &f));
        let single = graph(&[3], &[]);
        assert_eq!(&*nontrivial_spline(&single).unwrap(), &[3]);
        let p2 = graph(&[3, 2], &[(1, 2, 7)]);
        let f = nontrivial_spline(&p2).unwrap();
        assert_eq!(&*f, &[21, 0]);
        assert!(is_spline(&p2, &f));
        let eq = graph(&[2, 3], &[(1, 2, 0)]);
        assert_eq!(&*nontrivial_spline(&eq).unwrap(), &[6, 6]);
    }

    #[test]
    fn constant_flowup_examples() {
        let g = ex();
        let c = constant_flowup(&g, 1).unwrap();
        assert_eq!(c.entries(), &[0, 120, 120]);
        assert!(is_spline(&g, c.entries()));
        let c = constant_flowup(&g, 0).unwrap();
        assert_eq!(c.entries(), &[72, 72, 72]);
        let eq = graph(&[2, 3], &[(1, 2, 0)]);
        assert_eq!(constant_flowup(&eq, 0).unwrap().entries(), &[6, 6]);
        assert_eq!(constant_flowup(&eq, 1), Err(Error::ZeroModulusCut { index: 1 }));
    }

    #[test]
    fn leading_terms() {
        let b = ex_basis();
        let lts: Vec<_> = b.classes().iter().map(|c| c.leading_term()).collect();
        assert_eq!(lts, vec![(0, 36), (1, 120), (2, 8)]);
        assert!(FlowUpClass::new(Spline::new(vec![0i64, 0]), 0).is_err());
        assert!(FlowUpClass::new(Spline::new(vec![0i64, 3]), 0).is_err());
        assert!(FlowUpBasis::from_vectors(2, vec![vec![0i64, 3], vec![5, 0]]).is_err());
    }

    #[test]
    fn express_examples() {
        let b = ex_basis();
        assert_eq!(express_in_basis(&b, &[36, 216, 0]).unwrap(), vec![1, 1, 0]);
        let f = combine(&b, &[1, 1, 0]);
        assert_eq!(f, vec![36, 216, 0]);
        assert_eq!(express_in_basis(&b, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(express_in_basis(&b, &[18, 0, 0]), Err(Error::NotInSpan { index: 0 }));
        // rank-deficient basis: only constant multiples of (6, 6)
        let eq = FlowUpBasis::from_vectors(2, vec![vec![6i64, 6]]).unwrap();
        assert_eq!(express_in_basis(&eq, &[12, 12]).unwrap(), vec![2]);
        assert_eq!(express_in_basis(&eq, &[12, 18]), Err(Error::NotInSpan { index: 1 }));
    }

    #[test]
    fn criterion_examples() {
        let g = ex();
        let bound = g.global_lcm();
        let report = verify_basis_criterion(&g, &ex_basis(), &bound).unwrap();
        assert!(report.holds && !report.inconclusive);

        // doubling the first leading entry breaks the criterion
        let bad = FlowUpBasis::from_vectors(3, vec![vec![72, 72, 0], vec![0, 120, 0], vec![0, 0, 8]]).unwrap();
        assert!(bad.all_splines(&g));
        let report = verify_basis_criterion(&g, &bad, &bound).unwrap();
        assert!(!report.holds);
        let cex = report.counterexample.unwrap();
        assert_eq!(cex[0], 36);
        assert!(is_spline(&g, &cex));

        let single = graph(&[3], &[]);
        let b = FlowUpBasis::from_vectors(1, vec![vec![3i64]]).unwrap();
        assert!(verify_basis_criterion(&single, &b, &9).unwrap().holds);
    }

    #[test]
    fn criterion_is_invariant_under_shears() {
        let g = ex();
        let sheared = ex_basis().with_shear(0, &5, 1).unwrap().with_shear(1, &-3, 2).unwrap();
        assert_eq!(sheared.leading_values(), vec![36, 120, 8]);
        assert!(sheared.all_splines(&g));
        assert!(verify_basis_criterion(&g, &sheared, &g.global_lcm()).unwrap().holds);
        assert!(ex_basis().with_shear(1, &1, 0).is_err());
    }

    proptest! {
        #[test]
        fn splines_form_a_module(a in -20i64..20, b in -20i64..20, c in -20i64..20, k in -7i64..7) {
            let g = ex();
            let basis = ex_basis();
            let f = combine(&basis, &[a, b, c]);
            let h = combine(&basis, &[c, a, b]);
            prop_assert!(is_spline(&g, &f));
            let sum = Spline::new(f.clone()).add(&Spline::new(h));
            prop_assert!(is_spline(&g, &sum));
            prop_assert!(is_spline(&g, &Spline::new(f.clone()).scale(&k)));
            prop_assert_eq!(express_in_basis(&basis, &f).unwrap(), vec![a, b, c]);
        }

        #[test]
        fn express_then_combine_round_trips(coeffs in prop::collection::vec(-50i64..50, 3)) {
            let basis = ex_basis();
            let f = combine(&basis, &coeffs);
            let back = express_in_basis(&basis, &f).unwrap();
            prop_assert_eq!(combine(&basis, &back), f);
        }
    }

    #[test]
    fn bigint_scalars() {
        let g = crate::Graph::new(ints(&[9, 12, 8]), vec![(0, 1, 20.into()), (1, 2, 8.into())]).unwrap();
        assert!(is_spline(&g, &ints::<crate::Int>(&[36, 96, 0])));
    }
}
