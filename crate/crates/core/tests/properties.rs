mod common;

use common::{arb_hermitian, arb_state, hermitian_from};
use ewkit::certification::{blockpos_scan_detailed, schmidt_rank, ScanConfig, NEGATIVITY_CUTOFF};
use ewkit::constructions::{
    dejamiolkowski, ha_state, jamiolkowski, perturbed_witness, witness_dk, StateFamilyParams, WitnessFamilyParams,
};
use ewkit::linalg::{is_psd, kron, partial_transpose, trace_pair, PSD_TOL};
use ewkit::{CMatrix, CVector, HermitianOp, SigmaVector, TensorSpace, C64};
use proptest::prelude::*;

fn single(d: usize) -> TensorSpace {
    TensorSpace::new(vec![d]).unwrap()
}

fn arb_sigma(n: usize) -> impl Strategy<Value = SigmaVector> {
    prop::collection::vec(any::<bool>(), n).prop_map(SigmaVector::new)
}

fn arb_dims() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![Just(vec![2, 3]), Just(vec![3, 3]), Just(vec![2, 2, 2])]
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_is_trace_preserving_involution(
        (op, sigma) in arb_dims().prop_flat_map(|d| { let n = d.len(); (arb_hermitian(d), arb_sigma(n)) })
    ) {
        let once = partial_transpose(&op, &sigma).unwrap();
        let twice = partial_transpose(&once, &sigma).unwrap();
        prop_assert_eq!(&twice, &op);
        prop_assert!((once.trace() - op.trace()).abs() < 1e-12);
        // still Hermitian under the construction gate
        prop_assert!(HermitianOp::new(op.space().clone(), once.matrix().clone()).is_ok());
        let all = partial_transpose(&op, &SigmaVector::uniform(sigma.len(), true)).unwrap();
        prop_assert_eq!(all, op.transpose());
    }

    #[test]
    fn partial_transpose_factorizes_on_products(
        (dims, raws, sigma) in arb_dims().prop_flat_map(|d| {
            let n = d.len();
            let raws: Vec<_> = d.iter().map(|&k| prop::collection::vec(-1.0f64..1.0, 2 * k * k)).collect();
            (Just(d), raws, arb_sigma(n))
        })
    ) {
        let factors: Vec<HermitianOp> = dims.iter().zip(&raws).map(|(&d, r)| hermitian_from(single(d), r)).collect();
        let product = factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.kron(f));
        let lhs = partial_transpose(&product, &sigma).unwrap();
        // oracle: transpose each factor explicitly then Kronecker
        let rhs = factors
            .iter()
            .zip(sigma.bits())
            .map(|(f, &t)| if t { f.matrix().transpose() } else { f.matrix().clone() })
            .reduce(|a, b| kron(&a, &b))
            .unwrap();
        prop_assert!(max_diff(lhs.matrix(), &rhs) < 1e-12);
    }

    #[test]
    fn pairing_is_transpose_invariant(
        (w, rho, sigma) in arb_dims().prop_flat_map(|d| { let n = d.len(); (arb_hermitian(d.clone()), arb_state(d), arb_sigma(n)) })
    ) {
        let t = trace_pair(&w, &rho).unwrap();
        let tt = trace_pair(&partial_transpose(&w, &sigma).unwrap(), &partial_transpose(&rho, &sigma).unwrap()).unwrap();
        prop_assert!((t - tt).abs() < 1e-10);
    }

    #[test]
    fn psd_verdict_on_diagonals_matches_sign_test(diag in prop::collection::vec(-1.0f64..1.0, 4)) {
        let mut m = CMatrix::zeros(4, 4);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        let op = HermitianOp::new(TensorSpace::bipartite(2, 2).unwrap(), m).unwrap();
        let (ok, spec) = is_psd(&op, PSD_TOL).unwrap();
        let norm = diag.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        prop_assert_eq!(ok, diag.iter().all(|&x| x >= -PSD_TOL * norm));
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((spec.min() - min).abs() < 1e-15);
    }

    #[test]
    fn kron_mixed_product(raw in prop::collection::vec(-1.0f64..1.0, 4 * 18)) {
        let mats: Vec<CMatrix> = raw
            .chunks(18)
            .map(|c| CMatrix::from_fn(3, 3, |i, j| C64::new(c[2 * (3 * i + j)], c[2 * (3 * i + j) + 1])))
            .collect();
        let (a, b, c, d) = (&mats[0], &mats[1], &mats[2], &mats[3]);
        let lhs = kron(a, b) * kron(c, d);
        let rhs = kron(&(a * c), &(b * d));
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn jamiolkowski_round_trip(op in prop_oneof![arb_hermitian(vec![3, 3]), arb_hermitian(vec![4, 4]), arb_hermitian(vec![2, 3])]) {
        let back = jamiolkowski(&dejamiolkowski(&op).unwrap()).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn perturbed_witness_is_affine(
        d in 3usize..6, k_seed in 0usize..10,
        l1 in 0.0f64..2.0, m1 in 0.0f64..2.0, l2 in 0.0f64..2.0, m2 in 0.0f64..2.0,
    ) {
        let k = 1 + k_seed % (d - 1);
        let w = |l, m| perturbed_witness(&WitnessFamilyParams::new(d, k, l, m).unwrap()).unwrap();
        let lhs = w(l1, m1).try_add(&w(l2, m2)).unwrap();
        let rhs = witness_dk(d, k).unwrap().try_add(&w(l1 + l2, m1 + m2)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn product_vectors_have_schmidt_rank_one(raw in prop::collection::vec(-1.0f64..1.0, 14)) {
        let x = CVector::from_fn(3, |i, _| C64::new(raw[2 * i], raw[2 * i + 1]));
        let y = CVector::from_fn(4, |i, _| C64::new(raw[6 + 2 * i], raw[7 + 2 * i]));
        prop_assume!(x.norm() > 1e-3 && y.norm() > 1e-3);
        let v = kron(&CMatrix::from_column_slice(3, 1, x.as_slice()), &CMatrix::from_column_slice(4, 1, y.as_slice()));
        let v = CVector::from_column_slice(v.as_slice());
        let v = &v / C64::new(v.norm(), 0.0);
        prop_assert_eq!(schmidt_rank(&v, &TensorSpace::bipartite(3, 4).unwrap(), 1e-10).unwrap(), 1);
    }

    #[test]
    fn scan_never_flags_psd_operators(raw in prop::collection::vec(-1.0f64..1.0, 2 * 81), seed in any::<u64>()) {
        let rho = common::state_from(TensorSpace::bipartite(3, 3).unwrap(), &raw);
        let cfg = ScanConfig { restarts: 4, ..ScanConfig::with_seed(seed) };
        let out = blockpos_scan_detailed(&rho, &cfg).unwrap();
        prop_assert!(out.certificate.verdict);
        prop_assert!(out.certificate.evidence.scan.unwrap().minimum >= NEGATIVITY_CUTOFF);
        for t in &out.trajectories {
            prop_assert!(t.windows(2).all(|p| p[1] <= p[0]));
        }
    }
}

#[test]
fn maximally_correlated_vectors_have_full_schmidt_rank() {
    for (d1, d2) in [(2, 3), (3, 3), (4, 3), (4, 5)] {
        let space = TensorSpace::bipartite(d1, d2).unwrap();
        for r in 1..=d1.min(d2) {
            let mut v = CVector::zeros(d1 * d2);
            for i in 0..r {
                v[i * d2 + i] = C64::new(1.0 / (r as f64).sqrt(), 0.0);
            }
            assert_eq!(schmidt_rank(&v, &space, 1e-10).unwrap(), r);
        }
    }
}

fn gamma_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

#[test]
fn state_family_is_unit_trace_psd_and_ppt() {
    for d in 3..=5 {
        for g in gamma_grid() {
            let params = StateFamilyParams::new(d, g).unwrap();
            assert!(params.is_consistent());
            let rho = ha_state(&params).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-13, "d={d} γ={g}");
            assert!(is_psd(&rho, PSD_TOL).unwrap().0, "d={d} γ={g}");
            let pt = partial_transpose(&rho, &SigmaVector::second_of_two()).unwrap();
            assert!(is_psd(&pt, PSD_TOL).unwrap().0, "PPT d={d} γ={g}");
        }
    }
}

#[test]
fn trace_identity_on_gamma_grid() {
    for d in 3..=5 {
        for k in 1..=d - 2 {
            let w = witness_dk(d, k).unwrap();
            for g in gamma_grid() {
                let params = StateFamilyParams::new(d, g).unwrap();
                let t = trace_pair(&w, &ha_state(&params).unwrap()).unwrap();
                assert!(
                    (t - (g * g - 1.0) / params.n_gamma()).abs() <= 1e-12,
                    "d={d} k={k} γ={g}"
                );
            }
        }
    }
}
