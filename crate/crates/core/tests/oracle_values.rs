//! Values computed once with the independent oracle and pinned here.

use std::f64::consts::FRAC_PI_4;

use unruh_lab::info::{strong_additivity, TripartiteSplit};
use unruh_lab::oracle;
use unruh_lab::sweep::evaluate;
use unruh_lab::unruh::{build_joint, ordered_joint, Ordering};
use unruh_lab::{AccelerationParams, AdditivityForm, ChannelSpec, Family, Region};

/// Quantum mutual information between Alice and region I at infinite
/// acceleration, `q_r = 1`.
const I_INF: f64 = 1.0;
/// Werner strong-additivity functional at `F = 0.95`, `q_r = 1`, `gamma = pi/8`.
const A_095_CONDITIONAL_SUM: f64 = 0.272208547829206;
const A_095_PRINTED: f64 = 0.857558347950494;

const TOL: f64 = 1e-9;

#[test]
fn mutual_information_at_infinite_acceleration() {
    let accel = AccelerationParams::new(FRAC_PI_4, 1.0).unwrap();
    for fam in [Family::QuantumSingleRail, Family::QuantumDualRail] {
        let spec = ChannelSpec::new(fam, FRAC_PI_4, accel).unwrap();
        let mi = evaluate(&spec, Region::BobI, None).unwrap().mutual_info;
        assert!((mi - I_INF).abs() < TOL, "{fam}: {mi}");
        let (s_a, s_b, s_ab) =
            oracle::split_entropies(fam, Region::BobI, FRAC_PI_4, 1.0, FRAC_PI_4, None).unwrap();
        assert!((s_a + s_b - s_ab - I_INF).abs() < TOL);
    }
}

#[test]
fn werner_strong_additivity_value() {
    let accel = AccelerationParams::new(FRAC_PI_4 / 2.0, 1.0).unwrap();
    let spec = ChannelSpec::werner(0.95, accel).unwrap();
    let joint = ordered_joint(&build_joint(&spec).unwrap(), Ordering::Physical).unwrap();
    let split = TripartiteSplit::alice_wedges();
    for (form, expected) in [
        (AdditivityForm::ConditionalSum, A_095_CONDITIONAL_SUM),
        (AdditivityForm::Printed, A_095_PRINTED),
    ] {
        let v = strong_additivity(&joint, &split, form).unwrap();
        assert!((v - expected).abs() < TOL, "{form:?}: {v}");
    }
}
