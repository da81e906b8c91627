mod common;

use common::{arb_hermitian, arb_state, catalog_case};
use ewkit::certification::certify_indecomposable;
use ewkit::constructions::{ha_state, projector_p, witness_dk, StateFamilyParams};
use ewkit::detection::{alpha_threshold, lambda_threshold, sample_sppt, SeparableState, Threshold};
use ewkit::linalg::{partial_transpose, trace_pair};
use ewkit::multipartite::{
    multipartite_alpha_threshold, multipartite_lambda_threshold, sigma_indecomposable_certificate, sigma_ppt_check,
    MultipartitePair,
};
use ewkit::{CMatrix, HermitianOp, SigmaVector, TensorSpace, C64};
use proptest::prelude::*;

fn ancilla_projector() -> HermitianOp {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(1.0, 0.0);
    HermitianOp::new(TensorSpace::new(vec![2]).unwrap(), m).unwrap()
}

fn rho(g: f64) -> HermitianOp {
    ha_state(&StateFamilyParams::new(3, g).unwrap()).unwrap()
}

#[test]
fn ancilla_tensored_pair_is_certified() {
    let e00 = ancilla_projector();
    let w = witness_dk(3, 1).unwrap().kron(&e00);
    let r = rho(0.5).kron(&e00);
    assert_eq!(w.space().dims(), &[3, 3, 2]);
    let sigma = SigmaVector::new(vec![false, true, false]);
    let pair = MultipartitePair::new(w.clone(), r.clone(), sigma).unwrap();
    let c = sigma_indecomposable_certificate(&pair).unwrap();
    assert!(c.verdict);
    // traces factor: Tr(W0 ρ) · Tr(e00 e00)
    assert!((c.evidence.trace.unwrap() - (0.25 - 1.0) / 11.25).abs() < 1e-15);
    assert!(c.revalidate(&[&w, &r]).unwrap());

    // alpha against the maximally mixed state on 3⊗3⊗2: T_σ = Tr(W0)/18 = 6/18
    let mm = HermitianOp::maximally_mixed(w.space().clone());
    let t0 = (0.25 - 1.0) / 11.25;
    let ts = 6.0 / 18.0;
    let a = multipartite_alpha_threshold(&w, &r, &mm).unwrap().finite().unwrap();
    assert!((a - (-t0 / (-t0 + ts))).abs() < 1e-12);
    let family = pair
        .mixing_family(SeparableState::maximally_mixed(w.space().clone()))
        .unwrap();
    let scan = (0..=100_000)
        .map(|i| i as f64 * 1e-5)
        .find(|&al| trace_pair(&w, &family.state_at(al)).unwrap() >= 0.0)
        .unwrap();
    assert!((a - scan).abs() < 1e-4);
    // mixing keeps σ-PPT
    for s in sample_sppt(&family, &[0.0, a / 3.0, 2.0 * a / 3.0]).unwrap() {
        assert!(sigma_ppt_check(&s, pair.sigma()).unwrap().verdict);
    }

    let p = projector_p(3).unwrap().kron(&e00);
    let l = multipartite_lambda_threshold(&w, &p, &r).unwrap().finite().unwrap();
    assert!((l - 0.75 / 6.0).abs() < 1e-12);
    assert_eq!(
        multipartite_lambda_threshold(&w, &p.scale(0.0), &r).unwrap(),
        Threshold::Infinite
    );
    // a perturbation living on the orthogonal ancilla level never touches ρ0
    let mut e11 = CMatrix::zeros(2, 2);
    e11[(1, 1)] = C64::new(1.0, 0.0);
    let e11 = HermitianOp::new(TensorSpace::new(vec![2]).unwrap(), e11).unwrap();
    let off = projector_p(3).unwrap().kron(&e11);
    assert_eq!(
        multipartite_lambda_threshold(&w, &off, &r).unwrap(),
        Threshold::Infinite
    );

    let not = multipartite_alpha_threshold(&w, &rho(1.0).kron(&e00), &mm).unwrap();
    assert!(not.is_none());
}

#[test]
fn bipartite_reduction_is_exact() {
    let sigma = SigmaVector::second_of_two();
    for seed in 0..20 {
        let case = catalog_case(seed);
        let pair = MultipartitePair::new(case.w.clone(), case.rho0.clone(), sigma.clone()).unwrap();
        assert_eq!(
            sigma_indecomposable_certificate(&pair).unwrap(),
            certify_indecomposable(&case.w, &case.rho0, &sigma).unwrap()
        );
        assert_eq!(
            multipartite_alpha_threshold(&case.w, &case.rho0, case.sigma.op()).unwrap(),
            alpha_threshold(&case.w, &case.rho0, case.sigma.op()).unwrap()
        );
        assert_eq!(
            multipartite_lambda_threshold(&case.w, &case.p, &case.rho0).unwrap(),
            lambda_threshold(&case.w, &case.p, &case.rho0).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sigma_transpose_is_an_involution_on_three_qubits(
        op in arb_hermitian(vec![2, 2, 2]),
        bits in prop::collection::vec(any::<bool>(), 3),
    ) {
        let sigma = SigmaVector::new(bits);
        let twice = partial_transpose(&partial_transpose(&op, &sigma).unwrap(), &sigma).unwrap();
        prop_assert!(twice.max_abs_diff(&op).unwrap() <= 1e-12);
    }

    #[test]
    fn complement_with_global_transpose_preserves_verdict(
        rho in arb_state(vec![2, 2, 2]),
        bits in prop::collection::vec(any::<bool>(), 3),
    ) {
        let sigma = SigmaVector::new(bits);
        let a = sigma_ppt_check(&rho, &sigma).unwrap();
        let b = sigma_ppt_check(&rho.transpose(), &sigma.complement()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.evidence.min_eigenvalue.unwrap() - b.evidence.min_eigenvalue.unwrap()).abs() < 1e-12);
    }
}
