//! Flow-up bases on arbitrary graphs by the longest-trails technique.
//!
//! For the `i`-th class, vertices below `i` are zero-reduced away. On the
//! component of `v_i` in what remains, the minimal leading entry is the lcm
//! of the path formula along every longest trail of `v_i`. The remaining
//! entries are assigned in increasing vertex order by solving, with the
//! CRT, the system
//!
//! ```text
//! f_t ≡ f_s (mod L_st) for every assigned s,    f_t ≡ 0 (mod k_t)
//! ```
//!
//! where `L_st` is the lcm of the gcds of edge labels over all trails
//! between `s` and `t`, and `k_t = lcm(m_t, gcd(m_j, L_tj) for j ≠ t)` is a
//! divisor of the `t`-th entry of every spline.

use std::collections::BTreeSet;

use crate::arith::{crt_system, gcd, lcm, lcm_list, Congruence};
use crate::graph::{EdgeLabeledGraph, DEFAULT_TRAIL_CAP};
use crate::path_basis::leading_value_on;
use crate::spline::{is_spline, FlowUpBasis, FlowUpClass, Spline};
use crate::{Error, Result, Scalar};

/// Trail gcds between every ordered pair of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailGcdProfile<T> {
    n: usize,
    // gcds[i][j]: gcd of edge labels of each trail from j to i, in enumeration order
    gcds: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> TrailGcdProfile<T> {
    #[allow(clippy::needless_range_loop)]
    pub fn new(g: &EdgeLabeledGraph<T>, cap: usize) -> Result<Self> {
        let n = g.vertex_count();
        let mut gcds = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let per_trail: Vec<T> = g.trails_between(j, i, cap)?.iter().map(|t| g.trail_gcd(t)).collect();
                gcds[j][i] = per_trail.clone();
                gcds[i][j] = per_trail;
            }
        }
        Ok(TrailGcdProfile { n, gcds })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The multiset of trail gcds between `i` and `j`.
    pub fn gcds(&self, i: usize, j: usize) -> &[T] {
        &self.gcds[i][j]
    }

    /// lcm of the trail gcds between `i` and `j`; `None` when no trail joins them.
    pub fn lcm(&self, i: usize, j: usize) -> Option<T> {
        let gs = &self.gcds[i][j];
        (!gs.is_empty()).then(|| lcm_list(gs))
    }

    /// `k_i = lcm(m_i, gcd(m_j, L_ij) over every j reachable from i)`.
    pub fn k_value(&self, g: &EdgeLabeledGraph<T>, i: usize) -> T {
        let mut k = g.multiplier(i).clone();
        for j in (0..self.n).filter(|&j| j != i) {
            if let Some(l) = self.lcm(i, j) {
                k = lcm(&k, &gcd(g.multiplier(j), &l));
            }
        }
        k
    }
}

/// One CRT step of [`LongestPaths::build_flowup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtStep<T> {
    /// Vertex index in the original graph.
    pub vertex: usize,
    pub system: Vec<Congruence<T>>,
    pub solution: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowUpTrace<T> {
    pub index: usize,
    pub leading: T,
    pub steps: Vec<CrtStep<T>>,
}

/// The longest-trails constructions with a configurable per-query trail cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongestPaths {
    pub trail_cap: usize,
}

impl Default for LongestPaths {
    fn default() -> Self {
        LongestPaths { trail_cap: DEFAULT_TRAIL_CAP }
    }
}

impl LongestPaths {
    pub fn new(trail_cap: usize) -> Self {
        LongestPaths { trail_cap }
    }

    /// A divisor of the `i`-th entry of every spline on `g`.
    pub fn k_value<T: Scalar>(&self, g: &EdgeLabeledGraph<T>, i: usize) -> Result<T> {
        g.check_vertex(i)?;
        Ok(TrailGcdProfile::new(g, self.trail_cap)?.k_value(g, i))
    }

    /// lcm of the path formula (with `v_i` first and `r_0 = 1`) along each
    /// longest trail of `i`; `m_i` for an isolated vertex.
    fn leading_on<T: Scalar>(&self, g: &EdgeLabeledGraph<T>, i: usize) -> Result<T> {
        let mut acc = g.multiplier(i).clone();
        for trail in g.longest_trails_to(i, self.trail_cap)? {
            // walk outward from i
            let outward = trail.reversed();
            let m: Vec<T> = outward.vertices.iter().map(|&v| g.multiplier(v).clone()).collect();
            let r: Vec<T> = outward.edges.iter().map(|&k| g.edge(k).modulus.clone()).collect();
            acc = lcm(&acc, &leading_value_on(&m, &r, 0, &T::one()));
        }
        Ok(acc)
    }

    fn reduce_below<T: Scalar>(&self, g: &EdgeLabeledGraph<T>, i: usize) -> Result<crate::graph::Reduction<T>> {
        g.check_vertex(i)?;
        let zeros: BTreeSet<usize> = (0..i).collect();
        g.zero_reduce(&zeros)
    }

    /// Minimal leading entry of an `i`-th flow-up class; zero when none exists.
    pub fn flowup_leading<T: Scalar>(&self, g: &EdgeLabeledGraph<T>, i: usize) -> Result<T> {
        let red = self.reduce_below(g, i)?;
        self.leading_on(&red.graph, 0)
    }

    /// An `i`-th flow-up class whose leading entry is [`flowup_leading`](Self::flowup_leading).
    pub fn build_flowup<T: Scalar>(&self, g: &EdgeLabeledGraph<T>, i: usize) -> Result<(FlowUpClass<T>, FlowUpTrace<T>)> {
        let red = self.reduce_below(g, i)?;
        let h = &red.graph;
        // survivors keep their order, so v_i is vertex 0 of h and h's vertex j is v_{i+j}
        let leading = self.leading_on(h, 0)?;
        if leading.is_zero() {
            return Err(Error::NoFlowUp { index: i });
        }
        let profile = TrailGcdProfile::new(h, self.trail_cap)?;
        let mut values = vec![T::zero(); h.vertex_count()];
        values[0] = leading.clone();
        let mut assigned = vec![0];
        let mut steps = Vec::new();
        for t in h.component_of(0).into_iter().filter(|&t| t != 0) {
            let mut system: Vec<Congruence<T>> = assigned
                .iter()
                .map(|&s| {
                    let l = profile.lcm(s, t).expect("same component");
                    Congruence::new(values[s].clone(), l)
                })
                .collect();
            system.push(Congruence::new(T::zero(), profile.k_value(h, t)));
            let solution = crt_system(&system).map_err(|e| {
                Error::InternalContradiction(format!("CRT system at vertex {} of class {}: {e}", t + i + 1, i + 1))
            })?;
            values[t] = solution.residue().clone();
            assigned.push(t);
            steps.push(CrtStep { vertex: t + i, system, solution: values[t].clone() });
        }
        let full = red.embed(&values);
        if !is_spline(g, &full) {
            return Err(Error::InternalContradiction(format!("constructed class {full:?} is not a spline")));
        }
        let class = FlowUpClass::new(Spline::new(full), i)?;
        Ok((class, FlowUpTrace { index: i, leading, steps }))
    }

    /// [`build_flowup`](Self::build_flowup) for every index that admits a flow-up class.
    pub fn general_basis<T: Scalar>(&self, g: &EdgeLabeledGraph<T>) -> Result<FlowUpBasis<T>> {
        self.general_basis_traced(g).map(|(b, _)| b)
    }

    pub fn general_basis_traced<T: Scalar>(&self, g: &EdgeLabeledGraph<T>) -> Result<(FlowUpBasis<T>, Vec<FlowUpTrace<T>>)> {
        let mut classes = Vec::new();
        let mut traces = Vec::new();
        for i in 0..g.vertex_count() {
            match self.build_flowup(g, i) {
                Ok((class, trace)) => {
                    classes.push(class);
                    traces.push(trace);
                }
                Err(Error::NoFlowUp { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok((FlowUpBasis::new(g.vertex_count(), classes)?, traces))
    }
}

pub fn k_value<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize) -> Result<T> {
    LongestPaths::default().k_value(g, i)
}

pub fn flowup_leading<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize) -> Result<T> {
    LongestPaths::default().flowup_leading(g, i)
}

pub fn build_flowup<T: Scalar>(g: &EdgeLabeledGraph<T>, i: usize) -> Result<FlowUpClass<T>> {
    LongestPaths::default().build_flowup(g, i).map(|(c, _)| c)
}

pub fn general_basis<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<FlowUpBasis<T>> {
    LongestPaths::default().general_basis(g)
}

/// A cycle `v_1 - v_2 - … - v_n - v_1`; `r[k]` joins `v_{k+1}` and
/// `v_{k+2}`, and the last label closes the cycle between `v_n` and `v_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpec<T> {
    m: Vec<T>,
    r: Vec<T>,
}

impl<T: Scalar> CycleSpec<T> {
    pub fn new(m: Vec<T>, r: Vec<T>) -> Result<Self> {
        if m.len() < 3 {
            return Err(Error::Validation("a cycle needs at least three vertices".into()));
        }
        if r.len() != m.len() {
            return Err(Error::Validation(format!("{} vertices need {} edge labels, got {}", m.len(), m.len(), r.len())));
        }
        if m.iter().any(|x| !x.is_positive()) || r.iter().any(|x| x.is_negative()) {
            return Err(Error::Validation("cycle labels must be positive multipliers and non-negative moduli".into()));
        }
        Ok(CycleSpec { m, r })
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn to_graph(&self) -> EdgeLabeledGraph<T> {
        let n = self.len();
        let edges = self.r.iter().enumerate().map(|(k, r)| (k, (k + 1) % n, r.clone())).collect();
        EdgeLabeledGraph::new(self.m.clone(), edges).expect("a valid cycle spec is a valid graph")
    }
}

/// Minimal leading entries on a cycle in closed form.
///
/// `f^(1)` is the lcm of the path formula taken both ways around the cycle.
/// For `i ≥ 2` the zero-reduced graph is the path `v_i … v_n` with end
/// multipliers `lcm(m_i, r_{i-1})` and `lcm(m_n, r_n)`.
pub fn cycle_closed_form<T: Scalar>(c: &CycleSpec<T>) -> Vec<T> {
    let n = c.len();
    let (m, r) = (&c.m, &c.r);
    let mut out = Vec::with_capacity(n);

    let forward = leading_value_on(m, &r[..n - 1], 0, &T::one());
    let mut m_back = vec![m[0].clone()];
    m_back.extend(m[1..].iter().rev().cloned());
    let r_back: Vec<T> = r[1..].iter().rev().cloned().collect();
    let backward = leading_value_on(&m_back, &r_back, 0, &T::one());
    out.push(lcm(&forward, &backward));

    for i in 1..n {
        let mut m_red: Vec<T> = m[i..].to_vec();
        m_red[0] = lcm(&m_red[0], &r[i - 1]);
        let last = m_red.len() - 1;
        m_red[last] = lcm(&m_red[last], &r[n - 1]);
        out.push(leading_value_on(&m_red, &r[i..n - 1], 0, &T::one()));
    }
    out
}
