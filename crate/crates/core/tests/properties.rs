mod common;

use gspline::gkm::{gkm_basis, spline_lattice};
use gspline::lattice::lattice_equal;
use gspline::longest_basis::{flowup_leading, general_basis};
use gspline::path_basis::path_basis;
use gspline::spline::{express_in_basis, is_spline};
use gspline::{FlowUpBasis, Graph, LatticeBasis};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use common::{random_graph, random_path};

fn span(b: &FlowUpBasis) -> LatticeBasis {
    LatticeBasis::from_generators(b.dim(), &b.vectors()).unwrap()
}

#[test]
fn path_longest_and_gkm_bases_agree_on_paths() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..150 {
        let p = random_path(&mut rng, 6, 40, 0.1);
        let g = p.to_graph();
        let (a, b, c) = (path_basis(&p).unwrap(), general_basis(&g).unwrap(), gkm_basis(&g).unwrap());
        assert_eq!(a.leading_values(), b.leading_values());
        assert_eq!(a.leading_values(), c.leading_values());
        assert!(lattice_equal(&span(&a), &span(&b)).unwrap());
        assert!(lattice_equal(&span(&a), &span(&c)).unwrap());
    }
}

#[test]
fn general_basis_spans_the_gkm_lattice() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..150 {
        let g = random_graph(&mut rng, 6, 30, 0.15);
        let b = general_basis(&g).unwrap();
        assert!(b.all_splines(&g));
        let gkm = spline_lattice(&g).unwrap();
        assert!(lattice_equal(&span(&b), &gkm).unwrap(), "{}", g.to_json_value());
        for f in gkm.vectors() {
            assert!(is_spline(&g, f));
            assert!(express_in_basis(&b, f).is_ok());
        }
        assert_eq!(gkm_basis(&g).unwrap().leading_values(), b.leading_values());
    }
}

#[test]
fn vertex_order_changes_the_basis_but_not_the_lattice() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..80 {
        let g = random_graph(&mut rng, 5, 20, 0.1);
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h: Graph = g.permuted(&perm).unwrap();
        // move the permuted basis back to the original coordinates
        let back: Vec<Vec<_>> = general_basis(&h)
            .unwrap()
            .vectors()
            .into_iter()
            .map(|v| (0..n).map(|old| v[perm[old]].clone()).collect())
            .collect();
        let original = span(&general_basis(&g).unwrap());
        assert!(lattice_equal(&original, &LatticeBasis::from_generators(n, &back).unwrap()).unwrap());
        for i in 0..n {
            assert!(flowup_leading(&h, i).is_ok());
        }
    }
}
