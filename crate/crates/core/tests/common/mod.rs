#![allow(dead_code)]

use ewkit::constructions::{
    convex_combination, ha_state, perturbed_witness, projector_p, projector_q, witness_dk, StateFamilyParams,
    WitnessFamilyParams,
};
use ewkit::detection::SeparableState;
use ewkit::{CMatrix, HermitianOp, TensorSpace, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hermitian `(A + A†)/2` from `2 n²` raw values.
pub fn hermitian_from(space: TensorSpace, raw: &[f64]) -> HermitianOp {
    let n = space.total();
    let a = CMatrix::from_fn(n, n, |i, j| C64::new(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]));
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    HermitianOp::new(space, h).unwrap()
}

pub fn arb_hermitian(dims: Vec<usize>) -> impl Strategy<Value = HermitianOp> {
    let space = TensorSpace::new(dims).unwrap();
    let n = space.total();
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |raw| hermitian_from(space.clone(), &raw))
}

/// Unit-trace PSD `B B† / Tr`.
pub fn state_from(space: TensorSpace, raw: &[f64]) -> HermitianOp {
    let n = space.total();
    let b = CMatrix::from_fn(n, n, |i, j| C64::new(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]));
    let m = &b * b.adjoint();
    let tr = m.trace().re;
    HermitianOp::new(space, m / C64::new(tr, 0.0)).unwrap()
}

pub fn arb_state(dims: Vec<usize>) -> impl Strategy<Value = HermitianOp> {
    let space = TensorSpace::new(dims).unwrap();
    let n = space.total();
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |raw| state_from(space.clone(), &raw))
}

pub fn gamma_star() -> f64 {
    ((3f64.sqrt() - 1.0) / 2.0).sqrt()
}

/// Seed material drawn from the construction catalog: a detecting pair, a
/// declared-separable state and a PSD perturbation.
pub struct CatalogCase {
    pub label: String,
    pub w: HermitianOp,
    pub rho0: HermitianOp,
    pub sigma: SeparableState,
    pub p: HermitianOp,
}

fn random_qudit_state(rng: &mut ChaCha8Rng, d: usize) -> HermitianOp {
    let raw: Vec<f64> = (0..2 * d * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    state_from(TensorSpace::new(vec![d]).unwrap(), &raw)
}

/// Draws catalog cases from `seed` until the witness detects the state.
pub fn catalog_case(seed: u64) -> CatalogCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let case = draw_case(&mut rng, seed);
        if ewkit::linalg::trace_pair(&case.w, &case.rho0).unwrap() < -1e-6 {
            return case;
        }
    }
}

fn draw_case(rng: &mut ChaCha8Rng, seed: u64) -> CatalogCase {
    let d = rng.random_range(3..=5usize);
    let k = rng.random_range(1..=d - 2);
    let lambda = rng.random_range(0.0..0.05);
    let mu = rng.random_range(0.0..0.05);
    let w = perturbed_witness(&WitnessFamilyParams::new(d, k, lambda, mu).unwrap()).unwrap();
    let g1 = rng.random_range(0.2..0.6);
    let g2 = rng.random_range(0.2..0.6);
    let p1 = rng.random_range(0.0..1.0);
    let rho0 = convex_combination(
        &[
            ha_state(&StateFamilyParams::new(d, g1).unwrap()).unwrap(),
            ha_state(&StateFamilyParams::new(d, g2).unwrap()).unwrap(),
        ],
        &[p1, 1.0 - p1],
    )
    .unwrap();
    let space = rho0.space().clone();
    let sigma = match rng.random_range(0..3) {
        0 => SeparableState::maximally_mixed(space),
        1 => SeparableState::product(&[random_qudit_state(rng, d), random_qudit_state(rng, d)]).unwrap(),
        _ => {
            let i = rng.random_range(0..d);
            let j = rng.random_range(0..d);
            SeparableState::basis_product(space, &[i, j]).unwrap()
        }
    };
    let p = if rng.random_bool(0.5) {
        projector_p(d).unwrap()
    } else {
        projector_q(d).unwrap()
    };
    CatalogCase {
        label: format!("seed={seed} d={d} k={k} λ={lambda:.4} μ={mu:.4} γ=({g1:.3},{g2:.3})"),
        w,
        rho0,
        sigma,
        p,
    }
}

pub fn base_witness(d: usize) -> HermitianOp {
    witness_dk(d, 1).unwrap()
}
