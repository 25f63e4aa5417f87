//! The extending GKM matrix and the spline lattice it cuts out.
//!
//! With `n` vertices and `s` edges the matrix has shape `(n+s)×(2n+s)`:
//!
//! ```text
//! [ A  B  0 ]    A: signed incidence (+1 at the smaller endpoint, −1 at the larger)
//! [ I  0  C ]    B = diag(r_e),  C = diag(m_v)
//! ```
//!
//! A vector `(f, g, k)` lies in the kernel iff `f_x − f_y = −r_e·g_e` on
//! every edge and `f_v = −m_v·k_v` at every vertex, so projecting the
//! kernel onto its first `n` coordinates gives exactly the splines.

use serde_json::Value;

use crate::graph::EdgeLabeledGraph;
use crate::lattice::{integer_kernel, LatticeBasis, Matrix};
use crate::spline::{is_spline, FlowUpBasis, FlowUpClass};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmMatrix<T> {
    matrix: Matrix<T>,
    n: usize,
    s: usize,
}

impl<T: Scalar> GkmMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.s
    }

    pub fn to_json_value(&self) -> Value {
        self.matrix.to_json_value()
    }
}

pub fn build_gkm<T: Scalar>(g: &EdgeLabeledGraph<T>) -> GkmMatrix<T> {
    let (n, s) = (g.vertex_count(), g.edge_count());
    let mut m = Matrix::zeros(n + s, 2 * n + s);
    for (k, e) in g.edges().iter().enumerate() {
        let (x, y) = (e.u.min(e.v), e.u.max(e.v));
        m[(k, x)] = T::one();
        m[(k, y)] = -T::one();
        m[(k, n + k)] = e.modulus.clone();
    }
    for v in 0..n {
        m[(s + v, v)] = T::one();
        m[(s + v, n + s + v)] = g.multiplier(v).clone();
    }
    GkmMatrix { matrix: m, n, s }
}

/// The spline module as a lattice in `Z^n`, in Hermite normal form.
pub fn spline_lattice<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<LatticeBasis<T>> {
    let n = g.vertex_count();
    let kernel = integer_kernel(build_gkm(g).matrix());
    let projected: Vec<Vec<T>> = kernel.vectors().iter().map(|x| x[..n].to_vec()).collect();
    let lattice = LatticeBasis::from_generators(n, &projected)?;
    if let Some(bad) = lattice.vectors().iter().find(|f| !is_spline(g, f)) {
        return Err(Error::InternalContradiction(format!("projected kernel vector {bad:?} is not a spline")));
    }
    Ok(lattice)
}

/// Rows of the Hermite normal form of the spline lattice, read as flow-up
/// classes: each pivot is the least positive leading entry at its column.
pub fn gkm_basis<T: Scalar>(g: &EdgeLabeledGraph<T>) -> Result<FlowUpBasis<T>> {
    let classes = spline_lattice(g)?
        .into_vectors()
        .into_iter()
        .map(|v| FlowUpClass::from_vec(v))
        .collect::<Result<Vec<_>>>()?;
    FlowUpBasis::new(g.vertex_count(), classes)
}

/// Extends a spline `f` to a kernel vector `(f, g, k)` of the GKM matrix.
pub fn lift<T: Scalar>(g: &EdgeLabeledGraph<T>, f: &[T]) -> Result<Vec<T>> {
    if !is_spline(g, f) {
        return Err(Error::InvalidArgument(format!("{f:?} is not a spline")));
    }
    let mut x = f.to_vec();
    for e in g.edges() {
        let (a, b) = (e.u.min(e.v), e.u.max(e.v));
        let diff = f[a].clone() - f[b].clone();
        x.push(if e.modulus.is_zero() { T::zero() } else { -(diff / e.modulus.clone()) });
    }
    for (m, fv) in g.multipliers().iter().zip(f) {
        x.push(if m.is_zero() { T::zero() } else { -(fv.clone() / m.clone()) });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;
    use crate::lattice::lattice_equal;
    use crate::longest_basis::general_basis;
    use crate::oracle::{enumerate_splines, EnumerationWindow};
    use crate::path_basis::{path_basis, PathSpec};
    use proptest::prelude::*;

    fn p3() -> EdgeLabeledGraph<i64> {
        EdgeLabeledGraph::new(vec![16, 18, 12], vec![(0, 1, 20), (1, 2, 35)]).unwrap()
    }

    pub(crate) fn s7() -> EdgeLabeledGraph<i64> {
        let m = vec![15, 7, 15, 18, 12, 21, 9];
        let r = [3, 8, 16, 15, 24, 12];
        EdgeLabeledGraph::new(m, r.iter().enumerate().map(|(k, &r)| (0, k + 1, r)).collect()).unwrap()
    }

    fn lattice(dim: usize, rows: &[&[i64]]) -> LatticeBasis<i64> {
        LatticeBasis::from_generators(dim, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn p3_matrix() {
        let m = build_gkm(&p3());
        let expect = vec![
            ints::<i64>(&[1, -1, 0, 20, 0, 0, 0, 0]),
            ints(&[0, 1, -1, 0, 35, 0, 0, 0]),
            ints(&[1, 0, 0, 0, 0, 16, 0, 0]),
            ints(&[0, 1, 0, 0, 0, 0, 18, 0]),
            ints(&[0, 0, 1, 0, 0, 0, 0, 12]),
        ];
        assert_eq!(m.matrix().to_rows(), expect);
    }

    #[test]
    fn p3_lattice() {
        let expect = lattice(3, &[&[160, 180, 6480], &[144, 144, 5184], &[0, 0, 420]]);
        assert!(lattice_equal(&spline_lattice(&p3()).unwrap(), &expect).unwrap());
    }

    #[test]
    fn single_vertex() {
        let g = EdgeLabeledGraph::new(vec![3i64], vec![]).unwrap();
        assert_eq!(build_gkm(&g).matrix().to_rows(), vec![vec![1, 3]]);
        assert_eq!(spline_lattice(&g).unwrap().vectors(), &[vec![3]]);
    }

    #[test]
    fn star_matrix_and_lattice() {
        let g = s7();
        let m = build_gkm(&g);
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (13, 20));
        for k in 0..6 {
            assert_eq!(m.matrix()[(k, 0)], 1);
            assert_eq!(m.matrix()[(k, k + 1)], -1);
        }
        let expect = lattice(
            7,
            &[
                &[210, 210, -3150, 1890, -840, -1470, -630],
                &[270, 273, -4050, 2430, -1080, -1890, -810],
                &[0, 0, 120, 0, 0, 0, 0],
                &[0, 0, 0, 144, 0, 0, 0],
                &[0, 0, 0, 0, 60, 0, 0],
                &[0, 0, 0, 0, 0, 168, 0],
                &[0, 0, 0, 0, 0, 0, 36],
            ],
        );
        assert!(lattice_equal(&spline_lattice(&g).unwrap(), &expect).unwrap());
        assert!(lattice_equal(&spline_lattice(&g).unwrap(), &LatticeBasis::from_generators(7, &general_basis(&g).unwrap().vectors()).unwrap()).unwrap());
    }

    #[test]
    fn agrees_with_path_basis() {
        let p = PathSpec::new(vec![9i64, 12, 8], vec![20, 8]).unwrap();
        let b = path_basis(&p).unwrap();
        let l = LatticeBasis::from_generators(3, &b.vectors()).unwrap();
        assert!(lattice_equal(&spline_lattice(&p.to_graph()).unwrap(), &l).unwrap());
        assert_eq!(gkm_basis(&p.to_graph()).unwrap().leading_values(), vec![36, 120, 8]);
    }

    #[test]
    fn equality_edges() {
        let g = EdgeLabeledGraph::new(vec![2i64, 3], vec![(0, 1, 0)]).unwrap();
        assert_eq!(spline_lattice(&g).unwrap().vectors(), &[vec![6, 6]]);
        assert_eq!(gkm_basis(&g).unwrap().rank(), 1);
    }

    #[test]
    fn oracle_splines_lift_to_the_kernel() {
        let g = p3();
        let m = build_gkm(&g);
        let w = EnumerationWindow::uniform(3, 720);
        let splines = enumerate_splines(&g, &w).unwrap();
        assert!(splines.len() > 1);
        for f in splines {
            let x = lift(&g, &f).unwrap();
            assert!(m.matrix().mul_vec(&x).unwrap().iter().all(|y| *y == 0));
        }
        assert!(lift(&g, &[1, 0, 0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lattice_matches_general_basis(
            m in prop::collection::vec(1i64..=20, 1..=4),
            edges in prop::collection::vec((0usize..4, 0usize..4, 0i64..=20), 0..=5),
        ) {
            let n = m.len();
            let edges: Vec<_> = edges.into_iter().filter(|(u, v, _)| u != v && *u < n && *v < n).collect();
            let g = EdgeLabeledGraph::new(m, edges).unwrap();
            let gkm = spline_lattice(&g).unwrap();
            let longest = LatticeBasis::from_generators(n, &general_basis(&g).unwrap().vectors()).unwrap();
            prop_assert!(lattice_equal(&gkm, &longest).unwrap());
            for x in integer_kernel(build_gkm(&g).matrix()).vectors() {
                prop_assert!(is_spline(&g, &x[..n]));
            }
        }
    }
}
