//! Structural properties of Khovanov complexes over random braid closures
//! with at most seven crossings.

use khovcss::diagram::{random_diagram, random_rmove_pair, PlanarDiagram, RMove};
use khovcss::homalg::{homology_dims, tensor, BitMatrix, ChainComplex, HomologySummary};
use khovcss::khovanov::{
    build_complex, change_basis, cone_decomposition_check, homology, mirror_duality_check, unreduced_splitting_check,
    LabelBasis,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: u32 = 64;

fn diagram(seed: u64, max_crossings: usize) -> PlanarDiagram {
    random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), 4, max_crossings)
}

/// Poincaré polynomial product, indexed from the sum of the minimum degrees.
fn convolve(a: &HomologySummary, b: &HomologySummary) -> Vec<usize> {
    let mut out = vec![0; a.homology.len() + b.homology.len() - 1];
    for (i, x) in a.homology.iter().enumerate() {
        for (j, y) in b.homology.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn padded(h: &HomologySummary, len: usize) -> Vec<usize> {
    let mut v = h.homology.clone();
    v.resize(len, 0);
    v
}

fn shifted_equal(before: &HomologySummary, after: &HomologySummary, eta: i32) -> bool {
    let lo = before.min_degree.min(after.min_degree) - 2;
    let hi = (before.min_degree + before.homology.len() as i32).max(after.min_degree + after.homology.len() as i32) + 2;
    (lo..=hi).all(|i| after.h(i) == before.h(i - eta))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>()) {
        let d = diagram(seed, 7);
        for reduced in [true, false] {
            for basis in [LabelBasis::Pm, LabelBasis::OneX] {
                let c = build_complex(&d, reduced, basis).unwrap();
                prop_assert!(c.check_d_squared().is_ok());
                let h = homology_dims(&c).unwrap();
                prop_assert_eq!(h.euler_characteristic, h.homology_euler());
            }
        }
    }

    #[test]
    fn bases_are_conjugate(seed in any::<u64>()) {
        let d = diagram(seed, 7);
        for reduced in [true, false] {
            let pm = build_complex(&d, reduced, LabelBasis::Pm).unwrap();
            let onex = build_complex(&d, reduced, LabelBasis::OneX).unwrap();
            let converted = change_basis(&onex).unwrap();
            prop_assert_eq!(converted.differentials(), pm.differentials());
        }
    }

    #[test]
    fn kunneth_for_disjoint_unions(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = diagram(s1, 4);
        let b = diagram(s2, 3);
        let u = a.disjoint_union(&b);
        let (ha, hb) = (homology(&a, false).unwrap(), homology(&b, false).unwrap());
        let hu = homology(&u, false).unwrap();
        let want = convolve(&ha, &hb);
        prop_assert_eq!(padded(&hu, want.len()), want);
        // the basepoint stays on the first diagram
        let hr = homology(&u, true).unwrap();
        let want = convolve(&homology(&a, true).unwrap(), &hb);
        prop_assert_eq!(padded(&hr, want.len()), want);
    }

    #[test]
    fn kunneth_for_tensor_products(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = build_complex(&diagram(s1, 4), true, LabelBasis::Pm).unwrap();
        let b = build_complex(&diagram(s2, 3), false, LabelBasis::Pm).unwrap();
        let t = tensor(&a, &b).unwrap();
        prop_assert!(t.check_d_squared().is_ok());
        let want = convolve(&homology_dims(&a).unwrap(), &homology_dims(&b).unwrap());
        prop_assert_eq!(padded(&homology_dims(&t).unwrap(), want.len()), want);
    }

    #[test]
    fn complex_is_a_cone(seed in any::<u64>(), pick in any::<usize>()) {
        let d = diagram(seed, 7);
        prop_assume!(d.n_crossings() > 0);
        let c = pick % d.n_crossings();
        for reduced in [true, false] {
            for basis in [LabelBasis::Pm, LabelBasis::OneX] {
                prop_assert!(cone_decomposition_check(&d, c, reduced, basis).unwrap());
            }
        }
    }

    #[test]
    fn unreduced_is_two_reduced_copies(seed in any::<u64>()) {
        let d = diagram(seed, 7);
        prop_assert!(unreduced_splitting_check(&d).unwrap());
        let r = homology(&d, true).unwrap();
        let u = homology(&d, false).unwrap();
        prop_assert_eq!(u.homology, r.homology.iter().map(|x| 2 * x).collect::<Vec<_>>());
    }

    #[test]
    fn mirror_is_dual(seed in any::<u64>()) {
        let d = diagram(seed, 6);
        for reduced in [true, false] {
            prop_assert!(mirror_duality_check(&d, reduced).unwrap());
        }
    }

    #[test]
    fn reidemeister_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for kind in [RMove::R1Positive, RMove::R1Negative, RMove::R2, RMove::R3] {
            let (before, after) = random_rmove_pair(&mut rng, kind, 7).unwrap();
            prop_assert!(after.n_crossings() <= 7);
            for reduced in [true, false] {
                let hb = homology(&before, reduced).unwrap();
                let ha = homology(&after, reduced).unwrap();
                prop_assert!(shifted_equal(&hb, &ha, kind.shift()), "{:?} {:?} -> {:?}", kind, hb.homology, ha.homology);
            }
        }
    }

    /// A cocycle pairing to zero with a generating set of the dual homology
    /// is a coboundary.
    #[test]
    fn cocycle_vanishing_on_homology_is_exact(seed in any::<u64>()) {
        let d = diagram(seed, 6);
        let c = build_complex(&d, true, LabelBasis::Pm).unwrap();
        for r in c.degrees() {
            let here = c.differential_or_zero(r);
            let before = c.differential_or_zero(r - 1).transpose();
            // representatives of the dual classes: ker (∂^{r-1})ᵗ modulo rowspace ∂^r
            let mut span = khovcss::homalg::Echelon::from_matrix(&here);
            let mut duals = Vec::new();
            for v in before.kernel_basis() {
                if span.insert(&v) {
                    duals.push(v);
                }
            }
            prop_assert_eq!(duals.len(), homology_dims(&c).unwrap().h(r));
            let mut stacked = here.row_supports();
            stacked.extend(duals.iter().map(|v| v.ones().collect::<Vec<_>>()));
            let constraints = BitMatrix::from_row_supports(c.dim(r), &stacked);
            for x in constraints.kernel_basis() {
                prop_assert!(before.in_rowspace(&x).unwrap());
            }
        }
    }
}

#[test]
fn random_complexes_satisfy_lemma_too() {
    // random small complexes not coming from diagrams: C^0 → C^1 → C^2 with
    // ∂¹ chosen inside the left kernel of ∂⁰
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (a, b) = (rng.gen_range(1..6), rng.gen_range(2..10));
        let d0 = BitMatrix::from_row_supports(
            a,
            &(0..b).map(|_| (0..a).filter(|_| rng.gen()).collect()).collect::<Vec<_>>(),
        );
        let left = d0.transpose().kernel_basis();
        let c2 = rng.gen_range(1..5);
        let rows: Vec<Vec<usize>> = (0..c2)
            .map(|_| {
                let mut v = khovcss::homalg::BitVec::zeros(b);
                for w in &left {
                    if rng.gen() {
                        v.xor_assign(w);
                    }
                }
                v.ones().collect()
            })
            .collect();
        let d1 = BitMatrix::from_row_supports(b, &rows);
        let c = ChainComplex::new(0, vec![a, b, c2], vec![d0.clone(), d1.clone()]).unwrap();
        let mut span = khovcss::homalg::Echelon::from_matrix(&d1);
        let mut duals = Vec::new();
        for v in d0.transpose().kernel_basis() {
            if span.insert(&v) {
                duals.push(v);
            }
        }
        assert_eq!(duals.len(), homology_dims(&c).unwrap().h(1));
        let mut stacked = d1.row_supports();
        stacked.extend(duals.iter().map(|v| v.ones().collect::<Vec<_>>()));
        for x in BitMatrix::from_row_supports(b, &stacked).kernel_basis() {
            assert!(d0.transpose().in_rowspace(&x).unwrap());
        }
    }
}
