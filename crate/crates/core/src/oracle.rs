//! Brute-force ground truth.
//!
//! Splines are enumerated inside a box `0 ≤ f_v ≤ L_v` by a depth-first
//! search in vertex order. At each vertex the admissible values form one
//! residue class, obtained with the CRT from `f_v ≡ 0 (mod m_v)` and
//! `f_v ≡ f_u (mod r_e)` for the neighbors already assigned, so only
//! consistent prefixes are ever extended.
//!
//! Two windows are complete for minimal leading entries:
//!
//! * [`EnumerationWindow::for_graph`]: every bound is `L`, the lcm of all
//!   nonzero labels. Reducing every entry of a spline modulo `L` (keeping
//!   nonzero multiples of `L` at `L`) yields a spline.
//! * [`EnumerationWindow::tight`]: vertices joined by `r = 0` edges carry
//!   equal values, and shifting one such class by the lcm of its multipliers
//!   and of the labels of edges leaving it keeps a spline a spline. Each
//!   class gets that lcm as its bound.
//!
//! Only nonnegative representatives are enumerated; spline sets are closed
//! under negation.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde_json::{json, Map, Value};

use crate::arith::{crt_pair, gcd, lcm, lcm_list, Congruence};
use crate::gkm::spline_lattice;
use crate::graph::{int_to_json, EdgeLabeledGraph, DEFAULT_TRAIL_CAP};
use crate::lattice::{lattice_equal, LatticeBasis};
use crate::longest_basis::{general_basis, LongestPaths, TrailGcdProfile};
use crate::spline::{is_spline, CriterionReport, FlowUpBasis, Spline};
use crate::{Error, Result, Scalar};

/// Default cap on the number of partial assignments a search may visit.
pub const DEFAULT_CANDIDATE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationWindow<T> {
    bounds: Vec<T>,
    cap: u128,
    complete: bool,
}

impl<T: Scalar> EnumerationWindow<T> {
    /// Arbitrary per-vertex bounds. Minimality results in such a window are
    /// only lower bounds on the search, so they are reported as inconclusive
    /// when they disagree with a construction.
    pub fn new(bounds: Vec<T>) -> Result<Self> {
        if bounds.iter().any(|b| b.is_negative()) {
            return Err(Error::InvalidArgument("window bounds must be non-negative".into()));
        }
        Ok(EnumerationWindow { bounds, cap: DEFAULT_CANDIDATE_CAP, complete: false })
    }

    pub fn uniform(n: usize, bound: T) -> Self {
        EnumerationWindow { bounds: vec![bound.abs(); n], cap: DEFAULT_CANDIDATE_CAP, complete: false }
    }

    /// Every bound equal to the lcm of all nonzero labels.
    pub fn for_graph(g: &EdgeLabeledGraph<T>) -> Self {
        let labels = g.multipliers().iter().chain(g.edges().iter().map(|e| &e.modulus));
        let l = lcm_list(labels.filter(|x| !x.is_zero()));
        EnumerationWindow { bounds: vec![l; g.vertex_count()], cap: DEFAULT_CANDIDATE_CAP, complete: true }
    }

    /// One bound per class of vertices joined by equality edges.
    pub fn tight(g: &EdgeLabeledGraph<T>) -> Self {
        let n = g.vertex_count();
        let class = equality_classes(g);
        let mut moduli = vec![T::one(); n];
        for v in 0..n {
            let m = g.multiplier(v);
            if !m.is_zero() {
                moduli[class[v]] = lcm(&moduli[class[v]], m);
            }
        }
        for e in g.edges() {
            if class[e.u] != class[e.v] {
                for c in [class[e.u], class[e.v]] {
                    moduli[c] = lcm(&moduli[c], &e.modulus);
                }
            }
        }
        let bounds = (0..n).map(|v| moduli[class[v]].clone()).collect();
        EnumerationWindow { bounds, cap: DEFAULT_CANDIDATE_CAP, complete: true }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn bounds(&self) -> &[T] {
        &self.bounds
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    /// Whether the window provably contains a minimal flow-up class for every index.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Number of vectors with `f_v ∈ m_v·Z ∩ [0, L_v]`, saturating.
    pub fn candidate_count(&self, g: &EdgeLabeledGraph<T>) -> u128 {
        g.multipliers()
            .iter()
            .zip(&self.bounds)
            .map(|(m, b)| if m.is_zero() { 1 } else { (b.clone() / m.clone()).to_u128().unwrap_or(u128::MAX).saturating_add(1) })
            .fold(1u128, u128::saturating_mul)
    }
}

fn equality_classes<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Vec<usize> {
    let n = g.vertex_count();
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut [usize], v: usize) -> usize {
        let mut root = v;
        while class[root] != root {
            root = class[root];
        }
        class[v] = root;
        root
    }
    for e in g.edges().iter().filter(|e| e.modulus.is_zero()) {
        let (a, b) = (find(&mut class, e.u), find(&mut class, e.v));
        class[a.max(b)] = a.min(b);
    }
    (0..n).map(|v| find(&mut class, v)).collect()
}

fn to_i128<T: Scalar>(x: &T) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::SizeExceeded { what: format!("oracle label {x}"), limit: i128::MAX as u128 })
}

fn from_i128<T: Scalar>(x: i128) -> T {
    T::from_i128(x).expect("oracle values fit the scalar type they came from")
}

fn vec_from_i128<T: Scalar>(xs: &[i128]) -> Vec<T> {
    xs.iter().map(|&x| from_i128(x)).collect()
}

fn narrow<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<EdgeLabeledGraph<i128>> {
    let m = g.multipliers().iter().map(to_i128).collect::<Result<Vec<_>>>()?;
    let edges = g.edges().iter().map(|e| Ok((e.u, e.v, to_i128(&e.modulus)?))).collect::<Result<Vec<_>>>()?;
    EdgeLabeledGraph::with_labels(m, edges)
}

/// The search over one window, in machine integers.
struct Search {
    m: Vec<i128>,
    adj: Vec<Vec<(usize, i128)>>,
    bounds: Vec<i128>,
    cap: u128,
    visited: Cell<u128>,
}

enum Stop {
    Done,
    Exceeded,
}

impl Search {
    fn new<T: Scalar>(g: &EdgeLabeledGraph<T>, w: &EnumerationWindow<T>) -> Result<Self> {
        let n = g.vertex_count();
        if w.bounds.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: w.bounds.len() });
        }
        let mut adj = vec![Vec::new(); n];
        for e in g.edges() {
            let r = to_i128(&e.modulus)?;
            adj[e.u].push((e.v, r));
            adj[e.v].push((e.u, r));
        }
        Ok(Search {
            m: g.multipliers().iter().map(to_i128).collect::<Result<_>>()?,
            adj,
            bounds: w.bounds.iter().map(to_i128).collect::<Result<_>>()?,
            cap: w.cap,
            visited: Cell::new(0),
        })
    }

    fn n(&self) -> usize {
        self.m.len()
    }

    /// Values of `f_t` consistent with the assigned neighbors, ascending.
    fn candidates(&self, t: usize, values: &[Option<i128>]) -> impl Iterator<Item = i128> {
        let mut c = Some(Congruence::new(0, self.m[t]));
        for &(u, r) in &self.adj[t] {
            if let (Some(fu), Some(acc)) = (values[u], &c) {
                c = crt_pair(acc, &Congruence::new(fu, r)).ok();
            }
        }
        let bound = self.bounds[t];
        let (start, step) = match c {
            None => (bound + 1, 1),
            Some(c) if *c.modulus() == 0 => (*c.residue(), bound + 1),
            Some(c) => (*c.residue(), *c.modulus()),
        };
        let start = if start < 0 { bound + 1 } else { start };
        std::iter::successors(Some(start), move |x| x.checked_add(step)).take_while(move |&x| x <= bound)
    }

    fn dfs(
        &self,
        order: &[usize],
        values: &mut [Option<i128>],
        visit: &mut dyn FnMut(&[i128]) -> ControlFlow<()>,
    ) -> ControlFlow<Stop> {
        let Some((&t, rest)) = order.split_first() else {
            let full: Vec<i128> = values.iter().map(|v| v.expect("every vertex assigned")).collect();
            return match visit(&full) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(Stop::Done),
            };
        };
        for x in self.candidates(t, values) {
            let visited = self.visited.get() + 1;
            if visited > self.cap {
                return ControlFlow::Break(Stop::Exceeded);
            }
            self.visited.set(visited);
            values[t] = Some(x);
            self.dfs(rest, values, visit)?;
        }
        values[t] = None;
        ControlFlow::Continue(())
    }

    fn exceeded(&self) -> Error {
        Error::SizeExceeded { what: "oracle search".into(), limit: self.cap }
    }

    fn for_each(&self, visit: &mut dyn FnMut(&[i128]) -> ControlFlow<()>) -> Result<()> {
        self.visited.set(0);
        let order: Vec<usize> = (0..self.n()).collect();
        let mut values = vec![None; self.n()];
        match self.dfs(&order, &mut values, visit) {
            ControlFlow::Break(Stop::Exceeded) => Err(self.exceeded()),
            _ => Ok(()),
        }
    }

    /// The lexicographically first flow-up class with index `i`, which has the
    /// least positive leading entry in the window.
    fn minimal_flowup(&self, i: usize) -> Result<Option<Vec<i128>>> {
        self.visited.set(0);
        let n = self.n();
        // the component of i among vertices ≥ i; everything else can stay zero
        let mut order = vec![i];
        let mut seen = vec![false; n];
        seen[i] = true;
        let mut k = 0;
        while k < order.len() {
            for &(u, _) in &self.adj[order[k]] {
                if u > i && !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
            k += 1;
        }
        let mut values: Vec<Option<i128>> = (0..n).map(|v| (!seen[v]).then_some(0)).collect();
        for lead in self.candidates(i, &values).filter(|&x| x > 0) {
            values[i] = Some(lead);
            let mut found = None;
            let flow = self.dfs(&order[1..], &mut values, &mut |f| {
                found = Some(f.to_vec());
                ControlFlow::Break(())
            });
            if let ControlFlow::Break(Stop::Exceeded) = flow {
                return Err(self.exceeded());
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// All splines in the window, in lexicographic order.
pub fn enumerate_splines<T: Scalar>(g: &EdgeLabeledGraph<T>, w: &EnumerationWindow<T>) -> Result<Vec<Spline<T>>> {
    let search = Search::new(g, w)?;
    let mut out = Vec::new();
    search.for_each(&mut |f| {
        out.push(Spline::new(vec_from_i128(f)));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// A flow-up class with index `i` of least positive leading entry in the window.
pub fn minimal_flowup<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize, w: &EnumerationWindow<T>) -> Result<Option<Spline<T>>> {
    g.check_vertex(i)?;
    let search = Search::new(g, w)?;
    Ok(search.minimal_flowup(i)?.map(|f| Spline::new(vec_from_i128(&f))))
}

/// Least positive `f_i` over splines in the window vanishing below `i`.
pub fn minimal_leading<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize, w: &EnumerationWindow<T>) -> Result<T> {
    match minimal_flowup(g, i, w)? {
        Some(f) => Ok(f[i].clone()),
        None => Err(Error::NoFlowUpFound { index: i }),
    }
}

/// The basis criterion on a window: every class is a spline, and at every
/// index the least leading entry found is a multiple of the basis' leading
/// entry (and no flow-up exists where the basis has none).
pub fn check_criterion<T: Scalar>(
    g: &EdgeLabeledGraph<T>,
    basis: &FlowUpBasis<T>,
    w: &EnumerationWindow<T>,
) -> Result<CriterionReport<T>> {
    let n = g.vertex_count();
    if basis.dim() != n {
        return Err(Error::DimensionMismatch { left: basis.dim(), right: n });
    }
    let fail = |f: Vec<T>| Ok(CriterionReport { holds: false, inconclusive: false, counterexample: Some(f) });
    if let Some(bad) = basis.classes().iter().find(|c| !is_spline(g, c.entries())) {
        return fail(bad.entries().to_vec());
    }
    let search = Search::new(g, w)?;
    let mut inconclusive = false;
    for i in 0..n {
        match (basis.class_at(i), search.minimal_flowup(i)?) {
            (Some(c), Some(f)) => {
                if f[i] % to_i128(c.leading_value())? != 0 {
                    return fail(vec_from_i128(&f));
                }
            }
            (Some(_), None) => inconclusive = true,
            (None, Some(f)) => return fail(vec_from_i128(&f)),
            (None, None) => {}
        }
    }
    Ok(CriterionReport { holds: true, inconclusive, counterexample: None })
}

/// Outcome of one assertion of [`validate_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check<T> {
    pub name: &'static str,
    pub passed: bool,
    /// The window was too small to decide the assertion.
    pub inconclusive: bool,
    pub detail: String,
    pub counterexample: Option<Vec<T>>,
}

impl<T: Scalar> Check<T> {
    fn pass(name: &'static str, detail: String) -> Self {
        Check { name, passed: true, inconclusive: false, detail, counterexample: None }
    }

    fn fail(name: &'static str, detail: String, counterexample: Option<Vec<T>>) -> Self {
        Check { name, passed: false, inconclusive: false, detail, counterexample }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "detail": self.detail,
            "counterexample": self.counterexample.as_ref().map(|f| Value::Array(f.iter().map(int_to_json).collect())),
        })
    }
}

pub const CHECK_NAMES: [&str; 6] = [
    "k_divisibility",
    "trail_gcd_divisibility",
    "minimal_leading",
    "basis_criterion",
    "reduction_equivalence",
    "lattice_equality",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport<T> {
    pub window: Vec<T>,
    pub splines_enumerated: usize,
    pub k_values: Vec<T>,
    /// Constructed minimal leading entries; zero where no flow-up exists.
    pub flowup_leading: Vec<T>,
    /// Oracle minima; `None` where the window holds no flow-up class.
    pub minimal_leading: Vec<Option<T>>,
    pub checks: Vec<Check<T>>,
}

impl<T: Scalar> OracleReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn conclusive(&self) -> bool {
        self.checks.iter().all(|c| !c.inconclusive)
    }

    pub fn check(&self, name: &str) -> Option<&Check<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check<T>> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn checks_json(&self) -> Value {
        Value::Object(self.checks.iter().map(|c| (c.name.to_string(), c.to_json_value())).collect::<Map<_, _>>())
    }

    pub fn to_json_value(&self) -> Value {
        let ints = |xs: &[T]| Value::Array(xs.iter().map(int_to_json).collect());
        json!({
            "passed": self.passed(),
            "conclusive": self.conclusive(),
            "window": ints(&self.window),
            "splines_enumerated": self.splines_enumerated,
            "k": ints(&self.k_values),
            "flowup_leading": ints(&self.flowup_leading),
            "minimal_leading": Value::Array(self.minimal_leading.iter().map(|x| x.as_ref().map_or(Value::Null, int_to_json)).collect()),
            "checks": self.checks_json(),
        })
    }
}

/// Every oracle assertion on `g` for the longest-trails basis, in the tight window.
pub fn validate_all<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<OracleReport<T>> {
    validate_in(g, &EnumerationWindow::tight(g))
}

pub fn validate_in<T: Scalar>(g: &EdgeLabeledGraph<T>, w: &EnumerationWindow<T>) -> Result<OracleReport<T>> {
    validate_basis(g, &general_basis(g)?, w)
}

/// The assertions of [`validate_all`] against an arbitrary claimed basis.
pub fn validate_basis<T: Scalar>(
    g: &EdgeLabeledGraph<T>,
    basis: &FlowUpBasis<T>,
    w: &EnumerationWindow<T>,
) -> Result<OracleReport<T>> {
    let n = g.vertex_count();
    let search = Search::new(g, w)?;
    let g128 = narrow(g)?;
    let profile = TrailGcdProfile::new(g, DEFAULT_TRAIL_CAP)?;
    let k: Vec<T> = (0..n).map(|i| profile.k_value(g, i)).collect();
    let k128 = k.iter().map(to_i128).collect::<Result<Vec<_>>>()?;
    let engine = LongestPaths::default();
    let leading = (0..n).map(|i| engine.flowup_leading(g, i)).collect::<Result<Vec<T>>>()?;
    let reductions = (1..n)
        .map(|i| g128.zero_reduce(&(0..i).collect::<BTreeSet<_>>()))
        .collect::<Result<Vec<_>>>()?;

    // one pass over the window: k_i divisibility and the forward half of the reduction check
    let mut count = 0usize;
    let mut k_bad: Option<(usize, Vec<i128>)> = None;
    let mut red_bad: Option<(usize, Vec<i128>)> = None;
    search.for_each(&mut |f| {
        count += 1;
        if k_bad.is_none() {
            if let Some(v) = (0..n).find(|&v| k128[v] != 0 && f[v] % k128[v] != 0) {
                k_bad = Some((v, f.to_vec()));
            }
        }
        if red_bad.is_none() {
            let zeros = f.iter().take_while(|&&x| x == 0).count();
            for i in 1..=zeros.min(n - 1) {
                let red = &reductions[i - 1];
                if !is_spline(&red.graph, &red.restrict(f)) {
                    red_bad = Some((i, f.to_vec()));
                    break;
                }
            }
        }
        ControlFlow::Continue(())
    })?;

    let mut checks = Vec::new();
    checks.push(match k_bad {
        None => Check::pass("k_divisibility", format!("all {count} splines in the window have f_i divisible by k_i")),
        Some((v, f)) => Check::fail(
            "k_divisibility",
            format!("entry at vertex {} is not a multiple of k = {}", v + 1, k[v]),
            Some(vec_from_i128(&f)),
        ),
    });

    let mut pair_bad = None;
    'pairs: for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if let Some(l) = profile.lcm(i, j) {
                let d = gcd(&l, &k[j]);
                if !d.is_zero() && !(k[i].clone() % d).is_zero() {
                    pair_bad = Some((i, j));
                    break 'pairs;
                }
            }
        }
    }
    checks.push(match pair_bad {
        None => Check::pass("trail_gcd_divisibility", "k_i is a multiple of gcd(L_ij, k_j) for all pairs".into()),
        Some((i, j)) => Check::fail("trail_gcd_divisibility", format!("fails for vertices {} and {}", i + 1, j + 1), None),
    });

    let minima = (0..n).map(|i| search.minimal_flowup(i)).collect::<Result<Vec<_>>>()?;
    let mut min_check = Check::pass("minimal_leading", "oracle minima equal the constructed leading entries".into());
    for i in 0..n {
        let expected = to_i128(&leading[i])?;
        let found = minima[i].as_ref().map(|f| f[i]);
        let agree = match found {
            Some(a) => a == expected,
            None => expected == 0,
        };
        if agree {
            continue;
        }
        let definite = match found {
            Some(a) => w.complete || expected == 0 || a < expected || a % expected != 0,
            None => w.complete,
        };
        let detail = format!(
            "vertex {}: constructed {}, oracle {}",
            i + 1,
            leading[i],
            found.map_or("none".to_string(), |a| a.to_string())
        );
        if definite {
            min_check = Check::fail("minimal_leading", detail, minima[i].as_ref().map(|f| vec_from_i128(f)));
            break;
        }
        min_check.inconclusive = true;
        min_check.detail = detail;
    }
    checks.push(min_check);

    let report = check_criterion(g, basis, w)?;
    checks.push(match report.counterexample {
        Some(f) => Check::fail("basis_criterion", "a flow-up class has a leading entry off the basis' ideal".into(), Some(f)),
        None => Check {
            inconclusive: report.inconclusive,
            ..Check::pass("basis_criterion", "every flow-up leading entry is a multiple of the basis' leading entry".into())
        },
    });

    let mut reduction = match red_bad {
        Some((i, f)) => Check::fail(
            "reduction_equivalence",
            format!("restriction after zeroing vertices 1..{i} is not a spline on the reduced graph"),
            Some(vec_from_i128(&f)),
        ),
        None => Check::pass("reduction_equivalence", "flow-ups and reduced-graph splines correspond both ways".into()),
    };
    if reduction.passed {
        for (k, red) in reductions.iter().enumerate() {
            let window = EnumerationWindow::tight(&red.graph).with_cap(w.cap);
            let mut bad = None;
            Search::new(&red.graph, &window)?.for_each(&mut |h| {
                let full = red.embed(h);
                if is_spline(&g128, &full) {
                    ControlFlow::Continue(())
                } else {
                    bad = Some(full);
                    ControlFlow::Break(())
                }
            })?;
            if let Some(f) = bad {
                reduction = Check::fail(
                    "reduction_equivalence",
                    format!("a spline on the graph reduced by vertices 1..{} does not extend by zeros", k + 1),
                    Some(vec_from_i128(&f)),
                );
                break;
            }
        }
    }
    checks.push(reduction);

    let span = LatticeBasis::from_generators(n, &basis.vectors())?;
    checks.push(if lattice_equal(&span, &spline_lattice(g)?)? {
        Check::pass("lattice_equality", "the basis spans the kernel lattice of the GKM matrix".into())
    } else {
        Check::fail("lattice_equality", "the basis and the GKM kernel span different lattices".into(), None)
    });

    Ok(OracleReport {
        window: w.bounds.clone(),
        splines_enumerated: count,
        k_values: k,
        flowup_leading: leading,
        minimal_leading: minima.iter().enumerate().map(|(i, f)| f.as_ref().map(|f| from_i128(f[i]))).collect(),
        checks,
    })
}
