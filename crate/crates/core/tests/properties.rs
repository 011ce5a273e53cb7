//! Randomised properties of the state, entropy and channel layers.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use proptest::prelude::*;

use unruh_lab::eigen::eigenvalues_hermitian;
use unruh_lab::fock::{
    apply_isometry, outer_product, partial_trace, tensor_product, DensityMatrix, StateVector,
    SubsystemLabel::{self, Alice, Bob, RegionIParticle},
    SubsystemLayout,
};
use unruh_lab::info::{marginal_entropy, split_entropies, von_neumann_entropy, BipartiteSplit};
use unruh_lab::oracle::{cubic_roots, quadratic_roots};
use unruh_lab::unruh::{bob_isometry, build_inertial, build_joint, Encoding};
use unruh_lab::{AccelerationParams, ChannelSpec, Family};

const TOL: f64 = 1e-9;

fn layout(labels: &[SubsystemLabel]) -> SubsystemLayout {
    SubsystemLayout::new(labels.to_vec()).unwrap()
}

/// Random unit ket from raw (re, im) pairs; `None` if the draw is near zero.
fn ket(labels: &[SubsystemLabel], raw: &[(f64, f64)]) -> Option<StateVector> {
    let amps: Vec<Complex64> = raw.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
    let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-3 {
        return None;
    }
    StateVector::new(layout(labels), amps.iter().map(|a| a / n).collect()).ok()
}

fn amps(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
}

fn mixed(labels: &[SubsystemLabel], kets: &[Vec<(f64, f64)>], weights: &[f64]) -> Option<DensityMatrix> {
    let total: f64 = weights.iter().sum();
    let rhos: Vec<DensityMatrix> = kets
        .iter()
        .map(|k| ket(labels, k).map(|v| outer_product(&v).unwrap()))
        .collect::<Option<_>>()?;
    let parts: Vec<(f64, &DensityMatrix)> = weights.iter().map(|w| w / total).zip(&rhos).collect();
    DensityMatrix::mixture(&parts).ok()
}

fn padded(mut v: Vec<f64>, len: usize) -> Vec<f64> {
    v.resize(len, 0.0);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn assert_close(a: &[f64], b: &[f64]) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        prop_assert!((x - y).abs() < TOL, "{:?} vs {:?}", a, b);
    }
    Ok(())
}

const ABC: [SubsystemLabel; 3] = [Alice, Bob, RegionIParticle];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_is_linear(k1 in amps(8), k2 in amps(8), p in 0.05..0.95f64) {
        let (Some(r1), Some(r2)) = (mixed(&ABC, &[k1], &[1.0]), mixed(&ABC, &[k2], &[1.0])) else {
            return Ok(());
        };
        let mix = DensityMatrix::mixture(&[(p, &r1), (1.0 - p, &r2)]).unwrap();
        let lhs = partial_trace(&mix, &[Bob]).unwrap();
        let t1 = partial_trace(&r1, &[Bob]).unwrap();
        let t2 = partial_trace(&r2, &[Bob]).unwrap();
        let rhs = DensityMatrix::mixture(&[(p, &t1), (1.0 - p, &t2)]).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_traces_compose(k in amps(8), k2 in amps(8), w in 0.0..1.0f64) {
        let Some(rho) = mixed(&ABC, &[k, k2], &[w, 1.0 - w + 1e-3]) else { return Ok(()); };
        let stepwise = partial_trace(&partial_trace(&rho, &[Bob]).unwrap(), &[RegionIParticle]).unwrap();
        let direct = partial_trace(&rho, &[Bob, RegionIParticle]).unwrap();
        prop_assert!(stepwise.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn tensor_norm_is_multiplicative(a in amps(2), b in amps(4)) {
        let va = StateVector::new(layout(&[Alice]), a.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let vb = StateVector::new(layout(&[Bob, RegionIParticle]), b.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let t = tensor_product(&va, &vb).unwrap();
        prop_assert!((t.norm() - va.norm() * vb.norm()).abs() < 1e-12);
    }

    #[test]
    fn isometry_preserves_spectrum(
        ks in prop::collection::vec(amps(4), 1..4),
        ws in prop::collection::vec(0.1..1.0f64, 3),
        gamma in 0.0..FRAC_PI_4,
        q_r in 0.0..=1.0f64,
        dual in any::<bool>(),
    ) {
        let Some(rho) = mixed(&[Alice, Bob], &ks, &ws[..ks.len()]) else { return Ok(()); };
        let enc = if dual { Encoding::DualRail } else { Encoding::SingleRail };
        let v = bob_isometry(enc, &AccelerationParams::new(gamma, q_r).unwrap());
        let lifted = apply_isometry(&rho, Bob, &v).unwrap();
        prop_assert_eq!(lifted.dim(), 32);
        assert_close(&lifted.eigenvalues().unwrap(), &padded(rho.eigenvalues().unwrap(), 32))?;
    }

    #[test]
    fn jacobi_matches_closed_form_2x2(a in -1.0..1.0f64, d in -1.0..1.0f64, br in -1.0..1.0f64, bi in -1.0..1.0f64) {
        let b = Complex64::new(br, bi);
        let m = [Complex64::new(a, 0.0), b, b.conj(), Complex64::new(d, 0.0)];
        let (l1, l2) = quadratic_roots(a, b.norm(), d);
        assert_close(&eigenvalues_hermitian(2, &m).unwrap(), &[l1, l2])?;
    }

    #[test]
    fn jacobi_matches_closed_form_3x3(x in prop::collection::vec(-1.0..1.0f64, 6)) {
        let a = [[x[0], x[1], x[2]], [x[1], x[3], x[4]], [x[2], x[4], x[5]]];
        let m: Vec<Complex64> = a.iter().flatten().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut roots = cubic_roots(a).to_vec();
        roots.sort_by(|p, q| q.total_cmp(p));
        assert_close(&eigenvalues_hermitian(3, &m).unwrap(), &roots)?;
    }

    #[test]
    fn entropic_inequalities(ks in prop::collection::vec(amps(8), 1..5), ws in prop::collection::vec(0.05..1.0f64, 4)) {
        let Some(rho) = mixed(&ABC, &ks, &ws[..ks.len()]) else { return Ok(()); };
        let e = split_entropies(&rho, &BipartiteSplit::new(&[Alice], &[Bob, RegionIParticle])).unwrap();
        let mi = e.mutual_information();
        prop_assert!(mi >= -TOL);
        prop_assert!(mi <= 2.0 * e.s_a.min(e.s_b) + TOL);
        prop_assert!(e.conditional_entropy() >= -e.s_a - TOL);
        if ks.len() == 1 {
            prop_assert!((e.conditional_entropy() + e.s_a).abs() < TOL);
        }
    }

    #[test]
    fn rank_two_entropy(k1 in amps(4), k2 in amps(4), p in 0.01..0.99f64) {
        let (Some(v1), Some(v2)) = (ket(&[Alice, Bob], &k1), ket(&[Alice, Bob], &k2)) else { return Ok(()); };
        let (r1, r2) = (outer_product(&v1).unwrap(), outer_product(&v2).unwrap());
        let rho = DensityMatrix::mixture(&[(p, &r1), (1.0 - p, &r2)]).unwrap();
        let overlap = v1.inner(&v2).unwrap().norm_sqr();
        let disc = (1.0 - 4.0 * p * (1.0 - p) * (1.0 - overlap)).max(0.0).sqrt();
        let h = |l: f64| if l > 0.0 { -l * l.log2() } else { 0.0 };
        let expected = h(0.5 * (1.0 + disc)) + h(0.5 * (1.0 - disc));
        prop_assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn schmidt_symmetry(k in amps(8)) {
        let Some(rho) = mixed(&ABC, &[k], &[1.0]) else { return Ok(()); };
        let s_a = marginal_entropy(&rho, &[Alice]).unwrap();
        let s_bc = marginal_entropy(&rho, &[Bob, RegionIParticle]).unwrap();
        prop_assert!((s_a - s_bc).abs() < TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn joint_spectrum_is_inertial_spectrum(
        fam in 0usize..5,
        gamma in 0.0..FRAC_PI_4,
        q_r in 0.0..=1.0f64,
        alpha in 0.0..std::f64::consts::TAU,
        f in 0.0..=1.0f64,
    ) {
        let fam = Family::ALL[fam];
        let accel = AccelerationParams::new(gamma, q_r).unwrap();
        let f = (fam == Family::Werner).then_some(f);
        let spec = ChannelSpec::from_parts(fam, alpha, f, accel).unwrap();
        let inertial = build_inertial(&spec).unwrap().eigenvalues().unwrap();
        let joint = build_joint(&spec).unwrap().eigenvalues().unwrap();
        assert_close(&joint, &padded(inertial, 32))?;
    }
}
