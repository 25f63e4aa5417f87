//! The edge-labeled graph `(G, β)`: a multiplier `m_v` per vertex (the vertex
//! module is `m_v·Z`) and a modulus `r_e` per edge (the edge module is
//! `Z/r_e·Z`; `r_e = 0` forces equality across the edge).
//!
//! Vertex order is significant: flow-up classes are defined relative to it.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::Value;

use crate::arith::{gcd_list, lcm, lcm_list};
use crate::{Error, Result, Scalar};

/// Default cap on the number of trails enumerated per query.
pub const DEFAULT_TRAIL_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub modulus: T,
}

impl<T> Edge<T> {
    /// The endpoint opposite `w`.
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabeledGraph<T> {
    multipliers: Vec<T>,
    edges: Vec<Edge<T>>,
    // incident edge indices per vertex, ascending
    incidence: Vec<Vec<usize>>,
}

impl<T: Scalar> EdgeLabeledGraph<T> {
    /// Builds a validated graph: every multiplier positive, every modulus
    /// non-negative, endpoints in range and distinct. Parallel edges are allowed.
    pub fn new(multipliers: Vec<T>, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        for (i, m) in multipliers.iter().enumerate() {
            if !m.is_positive() {
                return Err(Error::Validation(format!(
                    "vertex {} has multiplier {m}; multipliers must be positive",
                    i + 1
                )));
            }
        }
        Self::with_labels(multipliers, edges)
    }

    /// Like [`new`](Self::new) but admits zero multipliers (a vertex forced to
    /// zero), which arise from reducing across equality edges.
    pub fn with_labels(multipliers: Vec<T>, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        let n = multipliers.len();
        if let Some((i, m)) = multipliers.iter().enumerate().find(|(_, m)| m.is_negative()) {
            return Err(Error::Validation(format!("vertex {} has negative multiplier {m}", i + 1)));
        }
        let mut checked = Vec::with_capacity(edges.len());
        for (k, (u, v, r)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Validation(format!(
                    "edge {} joins vertices {} and {} but the graph has {n} vertices",
                    k + 1,
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("edge {} is a self-loop at vertex {}", k + 1, u + 1)));
            }
            if r.is_negative() {
                return Err(Error::Validation(format!("edge {} has negative modulus {r}", k + 1)));
            }
            checked.push(Edge { u, v, modulus: r });
        }
        let mut incidence = vec![Vec::new(); n];
        for (k, e) in checked.iter().enumerate() {
            incidence[e.u].push(k);
            incidence[e.v].push(k);
        }
        Ok(EdgeLabeledGraph { multipliers, edges: checked, incidence })
    }

    pub fn vertex_count(&self) -> usize {
        self.multipliers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn multipliers(&self) -> &[T] {
        &self.multipliers
    }

    pub fn multiplier(&self, v: usize) -> &T {
        &self.multipliers[v]
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &Edge<T> {
        &self.edges[k]
    }

    /// Indices of the edges incident to `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.vertex_count() })
        }
    }

    /// lcm of every multiplier and every nonzero edge modulus.
    pub fn global_lcm(&self) -> T {
        let nonzero = self.edges.iter().map(|e| &e.modulus).filter(|r| !r.is_zero());
        lcm_list(self.multipliers.iter().chain(nonzero))
    }

    /// Scales every label by `c`.
    pub fn scaled(&self, c: &T) -> Self {
        let m = self.multipliers.iter().map(|m| m.clone() * c.clone()).collect();
        let edges = self.edges.iter().map(|e| (e.u, e.v, e.modulus.clone() * c.clone())).collect();
        Self::with_labels(m, edges).expect("scaling preserves validity")
    }

    /// Renumbers vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the vertices".into()));
        }
        let mut m = vec![T::zero(); n];
        for (v, &p) in perm.iter().enumerate() {
            m[p] = self.multipliers[v].clone();
        }
        let edges = self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.modulus.clone())).collect();
        Self::with_labels(m, edges)
    }

    /// Parses the JSON graph document `{"m": [...], "edges": [[u, v, r], ...]}`
    /// with 1-based vertex indices.
    pub fn from_json(document: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(document)
            .map_err(|e| Error::Parse { path: "$".into(), message: e.to_string() })?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err("$", "expected an object with fields \"m\" and \"edges\""))?;
        let m = obj
            .get("m")
            .ok_or_else(|| parse_err("$.m", "missing field"))?
            .as_array()
            .ok_or_else(|| parse_err("$.m", "expected an array of integers"))?;
        let multipliers = m
            .iter()
            .enumerate()
            .map(|(i, x)| json_int(x, &format!("$.m[{i}]")))
            .collect::<Result<Vec<T>>>()?;
        let edges_json = match obj.get("edges") {
            None => Vec::new(),
            Some(e) => e.as_array().ok_or_else(|| parse_err("$.edges", "expected an array of [u, v, r] triples"))?.clone(),
        };
        let mut edges = Vec::with_capacity(edges_json.len());
        for (k, e) in edges_json.iter().enumerate() {
            let path = format!("$.edges[{k}]");
            let triple = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| parse_err(&path, "expected [u, v, r]"))?;
            let endpoint = |j: usize| -> Result<usize> {
                let p = format!("{path}[{j}]");
                let x = triple[j].as_u64().ok_or_else(|| parse_err(&p, "expected a positive vertex index"))?;
                if x == 0 {
                    return Err(parse_err(&p, "vertex indices are 1-based"));
                }
                Ok(x as usize - 1)
            };
            let (u, v) = (endpoint(0)?, endpoint(1)?);
            let r: T = json_int(&triple[2], &format!("{path}[2]"))?;
            edges.push((u, v, r));
        }
        Self::new(multipliers, edges)
    }

    /// The JSON graph document for this graph.
    pub fn to_json_value(&self) -> Value {
        let m = self.multipliers.iter().map(int_to_json).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Value::Array(vec![Value::from(e.u + 1), Value::from(e.v + 1), int_to_json(&e.modulus)]))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("m".into(), Value::Array(m));
        obj.insert("edges".into(), Value::Array(edges));
        Value::Object(obj)
    }

    /// All trails from `source` to `target`, depth first over unused edges in
    /// ascending edge order, so the output is sorted lexicographically by edge
    /// index sequence. Trails never revisit a vertex.
    pub fn trails_between(&self, source: usize, target: usize, cap: usize) -> Result<Vec<Trail>> {
        self.check_vertex(source)?;
        self.check_vertex(target)?;
        if source == target {
            return Err(Error::InvalidArgument("trail endpoints must differ".into()));
        }
        let mut out = Vec::new();
        let mut walk = Walk::new(self.vertex_count(), source);
        self.extend_to(&mut walk, target, cap, &mut out)?;
        Ok(out)
    }

    fn extend_to(&self, walk: &mut Walk, target: usize, cap: usize, out: &mut Vec<Trail>) -> Result<()> {
        let here = walk.end();
        for &k in self.incident(here) {
            let next = self.edges[k].other(here);
            if walk.visited[next] {
                continue;
            }
            walk.push(k, next);
            if next == target {
                if out.len() == cap {
                    return Err(trail_cap(cap));
                }
                out.push(walk.to_trail());
            } else {
                self.extend_to(walk, target, cap, out)?;
            }
            walk.pop();
        }
        Ok(())
    }

    /// The set 𝒫^i of longest trails of `i`: trails ending at `i` that are not
    /// strictly contained in another trail ending at `i`. Each trail is
    /// oriented from its far end to `i`. Empty for an isolated vertex.
    pub fn longest_trails_to(&self, i: usize, cap: usize) -> Result<Vec<Trail>> {
        self.check_vertex(i)?;
        let mut out = Vec::new();
        let mut walk = Walk::new(self.vertex_count(), i);
        self.maximal_from(&mut walk, cap, &mut out)?;
        Ok(out)
    }

    fn maximal_from(&self, walk: &mut Walk, cap: usize, out: &mut Vec<Trail>) -> Result<()> {
        let here = walk.end();
        let mut extended = false;
        for &k in self.incident(here) {
            let next = self.edges[k].other(here);
            if walk.visited[next] {
                continue;
            }
            extended = true;
            walk.push(k, next);
            self.maximal_from(walk, cap, out)?;
            walk.pop();
        }
        if !extended && !walk.edges.is_empty() {
            if out.len() == cap {
                return Err(trail_cap(cap));
            }
            out.push(walk.to_trail().reversed());
        }
        Ok(())
    }

    /// gcd of the moduli along a trail.
    pub fn trail_gcd(&self, t: &Trail) -> T {
        gcd_list(t.edges.iter().map(|&k| &self.edges[k].modulus))
    }

    /// Deletes the `zeros` and their incident edges; every surviving neighbor
    /// `w` of a deleted vertex gets multiplier `lcm(m_w, r_1, …, r_k)` over the
    /// connecting edges. Survivors keep their relative order.
    pub fn zero_reduce(&self, zeros: &BTreeSet<usize>) -> Result<Reduction<T>> {
        for &z in zeros {
            self.check_vertex(z)?;
        }
        let n = self.vertex_count();
        let mut index_map = vec![None; n];
        let mut kept = Vec::new();
        for v in (0..n).filter(|v| !zeros.contains(v)) {
            index_map[v] = Some(kept.len());
            kept.push(v);
        }
        let mut m: Vec<T> = kept.iter().map(|&v| self.multipliers[v].clone()).collect();
        let mut edges = Vec::new();
        for e in &self.edges {
            match (index_map[e.u], index_map[e.v]) {
                (Some(a), Some(b)) => edges.push((a, b, e.modulus.clone())),
                (Some(w), None) | (None, Some(w)) => m[w] = lcm(&m[w], &e.modulus),
                (None, None) => {}
            }
        }
        let graph = Self::with_labels(m, edges)?;
        Ok(Reduction { graph, index_map })
    }

    /// Vertex sets of the connected components, each ascending, ordered by
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &k in self.incident(v) {
                    let w = self.edges[k].other(v);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Members of the component containing `v`, ascending.
    pub fn component_of(&self, v: usize) -> Vec<usize> {
        self.connected_components()
            .into_iter()
            .find(|c| c.contains(&v))
            .unwrap_or_default()
    }
}

impl<T: Scalar> fmt::Display for EdgeLabeledGraph<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m = [")?;
        for (i, m) in self.multipliers.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "]; edges = [")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}:{}", e.u + 1, e.v + 1, e.modulus)?;
        }
        write!(f, "]")
    }
}

/// A walk with no repeated edge (and, as enumerated here, no repeated vertex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trail {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Trail {
    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().expect("trail has vertices")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self) -> Trail {
        Trail {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }
}

/// Result of [`EdgeLabeledGraph::zero_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction<T> {
    pub graph: EdgeLabeledGraph<T>,
    /// `index_map[old] = Some(new)` for survivors, `None` for deleted vertices.
    pub index_map: Vec<Option<usize>>,
}

impl<T: Scalar> Reduction<T> {
    /// Re-embeds a vector on the reduced graph into the original graph, with
    /// zeros at the deleted vertices.
    pub fn embed(&self, reduced: &[T]) -> Vec<T> {
        self.index_map
            .iter()
            .map(|slot| slot.map_or_else(T::zero, |j| reduced[j].clone()))
            .collect()
    }

    /// Restricts a vector on the original graph to the survivors.
    pub fn restrict(&self, full: &[T]) -> Vec<T> {
        self.index_map
            .iter()
            .zip(full)
            .filter(|(slot, _)| slot.is_some())
            .map(|(_, x)| x.clone())
            .collect()
    }
}

struct Walk {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    visited: Vec<bool>,
}

impl Walk {
    fn new(n: usize, start: usize) -> Self {
        let mut visited = vec![false; n];
        visited[start] = true;
        Walk { vertices: vec![start], edges: Vec::new(), visited }
    }

    fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    fn push(&mut self, edge: usize, vertex: usize) {
        self.edges.push(edge);
        self.vertices.push(vertex);
        self.visited[vertex] = true;
    }

    fn pop(&mut self) {
        self.edges.pop();
        let v = self.vertices.pop().unwrap();
        self.visited[v] = false;
    }

    fn to_trail(&self) -> Trail {
        Trail { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }
}

fn trail_cap(cap: usize) -> Error {
    Error::SizeExceeded { what: "trail count".into(), limit: cap as u128 }
}

fn parse_err(path: &str, message: &str) -> Error {
    Error::Parse { path: path.to_string(), message: message.to_string() }
}

pub(crate) fn json_int<T: Scalar>(x: &Value, path: &str) -> Result<T> {
    match x {
        Value::Number(n) => T::from_str_radix(&n.to_string(), 10)
            .map_err(|_| parse_err(path, &format!("expected an integer, found {n}"))),
        other => Err(parse_err(path, &format!("expected an integer, found {other}"))),
    }
}

pub(crate) fn int_to_json<T: Scalar>(x: &T) -> Value {
    Value::Number(x.to_string().parse().expect("integers are valid JSON numbers"))
}
