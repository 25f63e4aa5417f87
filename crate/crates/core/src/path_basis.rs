//! Closed-form flow-up bases on path graphs `v_1 - v_2 - … - v_n`.
//!
//! With `r_0 = 1`, the minimal leading entry of an `i`-th flow-up class is
//!
//! ```text
//! lcm(m_i, r_{i-1}, gcd(m_{i+1}, r_i), gcd(m_{i+2}, r_i, r_{i+1}), …, gcd(m_n, r_i, …, r_{n-1}))
//! ```
//!
//! and dropping `r_{i-1}` gives a divisor of the `i`-th entry of every
//! spline. Later entries of a flow-up class are filled in one vertex at a
//! time by solving `f_t ≡ 0 (mod s_t)`, `f_t ≡ f_{t-1} (mod r_{t-1})`, where
//! `s_t` is the entry divisor at `t`.

use crate::arith::{congruent, gcd, gcd_list, lcm, mod_inverse, solve_zero_pair};
use crate::graph::EdgeLabeledGraph;
use crate::spline::{is_spline, FlowUpBasis, FlowUpClass, Spline};
use crate::{Error, Result, Scalar};

/// Labels of a path: `m` per vertex, `r[k]` on the edge `v_{k+1} v_{k+2}` (0-based: `k - k+1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec<T> {
    m: Vec<T>,
    r: Vec<T>,
}

impl<T: Scalar> PathSpec<T> {
    pub fn new(m: Vec<T>, r: Vec<T>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Validation("a path needs at least one vertex".into()));
        }
        if r.len() + 1 != m.len() {
            return Err(Error::Validation(format!("{} vertices need {} edge labels, got {}", m.len(), m.len() - 1, r.len())));
        }
        if m.iter().any(|x| !x.is_positive()) {
            return Err(Error::Validation("path multipliers must be positive".into()));
        }
        if r.iter().any(|x| x.is_negative()) {
            return Err(Error::Validation("path edge labels must be non-negative".into()));
        }
        Ok(PathSpec { m, r })
    }

    /// Reads a path off a graph whose edges are exactly `v_k v_{k+1}`, each once, in any order.
    pub fn from_graph(g: &EdgeLabeledGraph<T>) -> Result<Self> {
        let n = g.vertex_count();
        let not_a_path = || Error::InvalidArgument("graph is not the path v1 - v2 - ... - vn".into());
        if n == 0 || g.edge_count() + 1 != n {
            return Err(not_a_path());
        }
        let mut r = vec![None; n - 1];
        for e in g.edges() {
            let (a, b) = (e.u.min(e.v), e.u.max(e.v));
            if b != a + 1 || r[a].is_some() {
                return Err(not_a_path());
            }
            r[a] = Some(e.modulus.clone());
        }
        Self::new(g.multipliers().to_vec(), r.into_iter().map(|x| x.expect("all slots filled")).collect())
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn multipliers(&self) -> &[T] {
        &self.m
    }

    pub fn edge_labels(&self) -> &[T] {
        &self.r
    }

    pub fn to_graph(&self) -> EdgeLabeledGraph<T> {
        let edges = self.r.iter().enumerate().map(|(k, r)| (k, k + 1, r.clone())).collect();
        EdgeLabeledGraph::new(self.m.clone(), edges).expect("a valid path spec is a valid graph")
    }

    pub fn scaled(&self, c: &T) -> Self {
        PathSpec {
            m: self.m.iter().map(|x| x.clone() * c.clone()).collect(),
            r: self.r.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: i, n: self.len() })
        }
    }

    /// The edge label entering `i` from the left, with `r_0 = 1`.
    fn incoming(&self, i: usize) -> T {
        if i == 0 {
            T::one()
        } else {
            self.r[i - 1].clone()
        }
    }
}

/// `lcm(m_i, incoming, gcd(m_t, r_i, …, r_{t-1}) for t > i)` on raw label slices.
/// Zero multipliers are allowed here; they model vertices forced to zero.
pub(crate) fn leading_value_on<T: Scalar>(m: &[T], r: &[T], i: usize, incoming: &T) -> T {
    let mut acc = lcm(&m[i], incoming);
    let mut along = T::zero();
    for t in i + 1..m.len() {
        along = gcd(&along, &r[t - 1]);
        acc = lcm(&acc, &gcd(&m[t], &along));
    }
    acc
}

/// Minimal leading entry of an `i`-th flow-up class on the path. Zero means
/// no `i`-th flow-up class exists (an equality edge ties `v_i` to a zero).
pub fn path_leading_value<T: Scalar>(p: &PathSpec<T>, i: usize) -> Result<T> {
    p.check_index(i)?;
    Ok(leading_value_on(&p.m, &p.r, i, &p.incoming(i)))
}

/// A divisor of the `i`-th entry of every spline on the path.
pub fn path_entry_divisor<T: Scalar>(p: &PathSpec<T>, i: usize) -> Result<T> {
    p.check_index(i)?;
    Ok(leading_value_on(&p.m, &p.r, i, &T::one()))
}

/// One step of the forward construction in [`path_flowup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep<T> {
    pub vertex: usize,
    /// Entry divisor `s_t` at this vertex.
    pub s: T,
    /// Multiplier `l_t` with `f_t = l_t·s_t`.
    pub l: T,
    pub value: T,
    /// The two-congruence closed form for the same system, reduced modulo
    /// `lcm(r_{t-1}, s_t)`; absent across equality edges.
    pub closed_form: Option<T>,
    /// `closed_form` and `value` agree.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTrace<T> {
    pub index: usize,
    pub leading: T,
    pub steps: Vec<PathStep<T>>,
}

/// The `i`-th flow-up class with minimal leading entry.
///
/// Each later entry is `f_t = l_t·s_t` with
/// `l_t ≡ (s'⁻¹ mod r') · f_{t-1}/g  (mod r')`, `g = gcd(s_t, r_{t-1})`,
/// `s' = s_t/g`, `r' = r_{t-1}/g`, taking the least non-negative `l_t`.
pub fn path_flowup<T: Scalar>(p: &PathSpec<T>, i: usize) -> Result<(FlowUpClass<T>, PathTrace<T>)> {
    let leading = path_leading_value(p, i)?;
    if leading.is_zero() {
        return Err(Error::NoFlowUp { index: i });
    }
    let n = p.len();
    let mut f = vec![T::zero(); n];
    f[i] = leading.clone();
    let mut steps = Vec::new();
    for t in i + 1..n {
        let s = path_entry_divisor(p, t)?;
        let r = &p.r[t - 1];
        let prev = f[t - 1].clone();
        let g = gcd(&s, r);
        if !congruent(&prev, &T::zero(), &g) {
            return Err(Error::InternalContradiction(format!(
                "entry {} = {prev} is not divisible by gcd({s}, {r}) = {g}",
                t
            )));
        }
        let (l, closed_form) = if r.is_zero() {
            // equality edge: f_t = f_{t-1}
            (prev.clone() / s.clone(), None)
        } else {
            let s_red = s.clone() / g.clone();
            let r_red = r.clone() / g.clone();
            let l = (mod_inverse(&s_red, &r_red)? * (prev.clone() / g)).mod_floor(&r_red);
            let pair = solve_zero_pair(&prev, r, &s)?.mod_floor(&lcm(r, &s));
            (l, Some(pair))
        };
        let value = l.clone() * s.clone();
        let consistent = closed_form.as_ref().is_none_or(|x| *x == value);
        if !consistent {
            return Err(Error::InternalContradiction(format!(
                "closed forms disagree at vertex {}: {value} vs {}",
                t + 1,
                closed_form.as_ref().unwrap()
            )));
        }
        f[t] = value.clone();
        steps.push(PathStep { vertex: t, s, l, value, closed_form, consistent });
    }
    if !is_spline(&p.to_graph(), &f) {
        return Err(Error::InternalContradiction(format!("constructed class {f:?} is not a spline")));
    }
    let class = FlowUpClass::new(Spline::new(f), i)?;
    Ok((class, PathTrace { index: i, leading, steps }))
}

/// Flow-up classes from [`path_flowup`] for every index that has one.
pub fn path_basis<T: Scalar>(p: &PathSpec<T>) -> Result<FlowUpBasis<T>> {
    path_basis_traced(p).map(|(b, _)| b)
}

pub fn path_basis_traced<T: Scalar>(p: &PathSpec<T>) -> Result<(FlowUpBasis<T>, Vec<PathTrace<T>>)> {
    let mut classes = Vec::new();
    let mut traces = Vec::new();
    for i in 0..p.len() {
        match path_flowup(p, i) {
            Ok((class, trace)) => {
                classes.push(class);
                traces.push(trace);
            }
            Err(Error::NoFlowUp { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((FlowUpBasis::new(p.len(), classes)?, traces))
}

/// The gcd of the path's edge labels strictly between `a < b`.
pub fn segment_gcd<T: Scalar>(p: &PathSpec<T>, a: usize, b: usize) -> T {
    gcd_list(&p.r[a..b])
}
