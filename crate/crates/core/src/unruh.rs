//! Unruh states beyond the single-mode approximation and the channel states
//! Alice and Bob share once Bob accelerates.
//!
//! Kets over Bob's Rindler modes are written `|pqmn>` with
//! `p = I+`, `q = II-`, `m = I-`, `n = II+`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    apply_isometry, outer_product, partial_trace, permute_modes, DensityMatrix, Isometry,
    StateVector, SubsystemLabel, SubsystemLayout,
};

use SubsystemLabel::*;

/// Slack allowed above π/4 before a `gamma` is rejected; values inside the
/// slack are clamped to π/4.
const GAMMA_SLACK: f64 = 1e-9;

/// Acceleration angle `gamma` and the right-wedge Unruh weight `q_r`.
///
/// `gamma = 0` is the inertial limit and `gamma = π/4` infinite
/// acceleration. `q_l = sqrt(1 - q_r²)` is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationParams {
    gamma: f64,
    q_r: f64,
}

impl AccelerationParams {
    pub fn new(gamma: f64, q_r: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4 + GAMMA_SLACK).contains(&gamma) {
            return Err(Error::domain("gamma", gamma, "[0, pi/4]"));
        }
        if !(0.0..=1.0).contains(&q_r) {
            return Err(Error::domain("q_r", q_r, "[0, 1]"));
        }
        Ok(AccelerationParams {
            gamma: gamma.min(FRAC_PI_4),
            q_r,
        })
    }

    /// Single-mode approximation: `q_r = 1`.
    pub fn single_mode(gamma: f64) -> Result<Self> {
        AccelerationParams::new(gamma, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q_r(&self) -> f64 {
        self.q_r
    }

    pub fn q_l(&self) -> f64 {
        (1.0 - self.q_r * self.q_r).max(0.0).sqrt()
    }
}

/// `gamma` for mode frequency `omega` seen by an observer with proper
/// acceleration `a`: `cos gamma = (exp(-2π omega c / a) + 1)^(-1/2)`.
///
/// Evaluated as `atan(exp(-π omega c / a))`, which is the same angle without
/// the cancellation `acos` suffers near 1.
pub fn gamma_from_acceleration(omega: f64, a: f64, c: f64) -> Result<f64> {
    for (param, value) in [("omega", omega), ("a", a), ("c", c)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::domain(param, value, "(0, inf)"));
        }
    }
    Ok((-PI * omega * c / a).exp().atan())
}

/// Unruh vacuum over `(I+, II-, I-, II+)`; independent of `q_r`.
pub fn unruh_vacuum(accel: &AccelerationParams) -> StateVector {
    let (s, c) = accel.gamma.sin_cos();
    StateVector::from_terms(
        SubsystemLayout::rindler(),
        &[
            ("0000", c * c),
            ("0011", -s * c),
            ("1100", s * c),
            ("1111", -s * s),
        ],
    )
    .expect("Unruh vacuum is normalized")
}

/// One-particle Unruh state `|1+>_U`.
pub fn unruh_particle(accel: &AccelerationParams) -> StateVector {
    let (s, c) = accel.gamma.sin_cos();
    let (qr, ql) = (accel.q_r, accel.q_l());
    StateVector::from_terms(
        SubsystemLayout::rindler(),
        &[
            ("1000", qr * c),
            ("1011", -qr * s),
            ("1101", ql * s),
            ("0001", ql * c),
        ],
    )
    .expect("Unruh particle state is normalized")
}

/// One-antiparticle Unruh state `|1->_U`.
pub fn unruh_antiparticle(accel: &AccelerationParams) -> StateVector {
    let (s, c) = accel.gamma.sin_cos();
    let (qr, ql) = (accel.q_r, accel.q_l());
    StateVector::from_terms(
        SubsystemLayout::rindler(),
        &[
            ("0100", ql * c),
            ("0111", -ql * s),
            ("1110", qr * s),
            ("0010", qr * c),
        ],
    )
    .expect("Unruh antiparticle state is normalized")
}

/// How Bob's logical qubit is carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Encoding {
    /// `|0> -> |0>_U`, `|1> -> |1+>_U`.
    SingleRail,
    /// `|e0> -> |1+>_U`, `|e1> -> |1->_U`.
    DualRail,
}

/// Embeds Bob's inertial qubit into the 16-dimensional Rindler space.
pub fn bob_isometry(encoding: Encoding, accel: &AccelerationParams) -> Isometry {
    let columns = match encoding {
        Encoding::SingleRail => vec![unruh_vacuum(accel), unruh_particle(accel)],
        Encoding::DualRail => vec![unruh_particle(accel), unruh_antiparticle(accel)],
    };
    Isometry::new(columns).expect("Unruh states are orthonormal")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    QuantumSingleRail,
    QuantumDualRail,
    ClassicalSingleRail,
    ClassicalDualRail,
    Werner,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::QuantumSingleRail,
        Family::QuantumDualRail,
        Family::ClassicalSingleRail,
        Family::ClassicalDualRail,
        Family::Werner,
    ];

    pub fn encoding(self) -> Encoding {
        match self {
            Family::QuantumDualRail | Family::ClassicalDualRail => Encoding::DualRail,
            _ => Encoding::SingleRail,
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, Family::QuantumSingleRail | Family::QuantumDualRail)
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Family::ClassicalSingleRail | Family::ClassicalDualRail)
    }

    pub fn slug(self) -> &'static str {
        match self {
            Family::QuantumSingleRail => "quantum-single",
            Family::QuantumDualRail => "quantum-dual",
            Family::ClassicalSingleRail => "classical-single",
            Family::ClassicalDualRail => "classical-dual",
            Family::Werner => "werner",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Mixture weights for the classical channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassicalWeights {
    /// `cos²α`, `sin²α`: unit trace for every α.
    #[default]
    Squared,
    /// `cos α`, `sin α` as printed; unit trace only when they sum to 1.
    Raw,
}

/// One channel state: family plus the parameters it consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    family: Family,
    alpha: f64,
    fidelity: Option<f64>,
    accel: AccelerationParams,
    weights: ClassicalWeights,
}

impl ChannelSpec {
    /// Quantum or classical channel with encoding angle `alpha`.
    pub fn new(family: Family, alpha: f64, accel: AccelerationParams) -> Result<Self> {
        if family == Family::Werner {
            return Err(Error::domain("f", f64::NAN, "[0, 1], required for werner"));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", alpha, "finite"));
        }
        Ok(ChannelSpec {
            family,
            alpha,
            fidelity: None,
            accel,
            weights: ClassicalWeights::Squared,
        })
    }

    /// Werner mixture of the `α = π/4` Bell state with white noise.
    pub fn werner(fidelity: f64, accel: AccelerationParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::domain("f", fidelity, "[0, 1]"));
        }
        Ok(ChannelSpec {
            family: Family::Werner,
            alpha: FRAC_PI_4,
            fidelity: Some(fidelity),
            accel,
            weights: ClassicalWeights::Squared,
        })
    }

    /// Dispatches to [`ChannelSpec::new`] or [`ChannelSpec::werner`];
    /// `fidelity` must be given exactly for Werner.
    pub fn from_parts(
        family: Family,
        alpha: f64,
        fidelity: Option<f64>,
        accel: AccelerationParams,
    ) -> Result<Self> {
        match (family, fidelity) {
            (Family::Werner, Some(f)) => ChannelSpec::werner(f, accel),
            (Family::Werner, None) => ChannelSpec::new(family, alpha, accel),
            (_, None) => ChannelSpec::new(family, alpha, accel),
            (_, Some(f)) => Err(Error::domain("f", f, "absent for non-werner families")),
        }
    }

    pub fn with_weights(mut self, weights: ClassicalWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Encoding angle; fixed at π/4 for Werner.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn fidelity(&self) -> Option<f64> {
        self.fidelity
    }

    pub fn accel(&self) -> &AccelerationParams {
        &self.accel
    }
}

fn inertial_layout() -> SubsystemLayout {
    SubsystemLayout::new(vec![Alice, Bob]).expect("distinct labels")
}

/// Alice ⊗ Bob-inertial state before Bob accelerates.
pub fn build_inertial(spec: &ChannelSpec) -> Result<DensityMatrix> {
    let layout = inertial_layout();
    let (s, c) = spec.alpha.sin_cos();
    match spec.family {
        Family::QuantumSingleRail | Family::QuantumDualRail => {
            outer_product(&StateVector::from_terms(layout, &[("00", c), ("11", s)])?)
        }
        Family::ClassicalSingleRail | Family::ClassicalDualRail => {
            let (w0, w1) = match spec.weights {
                ClassicalWeights::Squared => (c * c, s * s),
                ClassicalWeights::Raw => (c, s),
            };
            DensityMatrix::diagonal(layout, &[w0, 0.0, 0.0, w1])
        }
        Family::Werner => {
            let f = spec.fidelity.expect("werner spec carries a fidelity");
            let bell = outer_product(&StateVector::from_terms(
                layout.clone(),
                &[("00", FRAC_1_SQRT_2), ("11", FRAC_1_SQRT_2)],
            )?)?;
            let noise = DensityMatrix::maximally_mixed(layout);
            DensityMatrix::mixture(&[(f, &bell), (1.0 - f, &noise)])
        }
    }
}

/// The 32-dimensional state over `(Alice, I+, II-, I-, II+)` after Bob's
/// inertial mode is replaced by Unruh modes.
pub fn build_joint(spec: &ChannelSpec) -> Result<DensityMatrix> {
    let inertial = build_inertial(spec)?;
    let v = bob_isometry(spec.family.encoding(), &spec.accel);
    apply_isometry(&inertial, Bob, &v)
}

/// Which of Bob's wedges stays accessible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Region {
    /// Bob in region I.
    BobI,
    /// Anti-Bob in region II.
    BobII,
}

impl Region {
    pub const ALL: [Region; 2] = [Region::BobI, Region::BobII];

    /// Modes kept for this region; both particle and antiparticle, since
    /// the detector does not distinguish them.
    pub fn modes(self) -> [SubsystemLabel; 2] {
        match self {
            Region::BobI => [RegionIParticle, RegionIAntiparticle],
            Region::BobII => [RegionIIAntiparticle, RegionIIParticle],
        }
    }

    pub fn complement(self) -> Region {
        match self {
            Region::BobI => Region::BobII,
            Region::BobII => Region::BobI,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Region::BobI => "bob-i",
            Region::BobII => "bob-ii",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Region::ALL
            .into_iter()
            .find(|r| r.slug() == s)
            .ok_or_else(|| format!("unknown region `{s}`"))
    }
}

/// Operator ordering used before tracing out a wedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// Region-I modes ahead of region-II modes, with the fermionic
    /// exchange sign from moving `I-` past `II-`.
    #[default]
    Physical,
    /// The `|pqmn>` order as written, traced as a plain qubit register.
    Written,
}

/// Mode order `(Alice, I+, I-, II-, II+)`.
pub const PHYSICAL_ORDER: [SubsystemLabel; 5] = [
    Alice,
    RegionIParticle,
    RegionIAntiparticle,
    RegionIIAntiparticle,
    RegionIIParticle,
];

/// Re-expresses a joint state in the given ordering. `Written` returns the
/// input unchanged.
pub fn ordered_joint(joint: &DensityMatrix, ordering: Ordering) -> Result<DensityMatrix> {
    check_joint_layout(joint)?;
    match ordering {
        Ordering::Physical => permute_modes(joint, &PHYSICAL_ORDER, true),
        Ordering::Written => Ok(joint.clone()),
    }
}

/// Alice together with the modes of `region`, in the physical ordering.
pub fn reduce(joint: &DensityMatrix, region: Region) -> Result<DensityMatrix> {
    reduce_with(joint, region, Ordering::Physical)
}

pub fn reduce_with(
    joint: &DensityMatrix,
    region: Region,
    ordering: Ordering,
) -> Result<DensityMatrix> {
    let ordered = ordered_joint(joint, ordering)?;
    partial_trace(&ordered, &region.complement().modes())
}

fn check_joint_layout(joint: &DensityMatrix) -> Result<()> {
    let expected = SubsystemLayout::alice_rindler();
    if joint.layout() != &expected {
        if let Some(&missing) = expected.factors().iter().find(|&&l| !joint.layout().contains(l)) {
            return Err(Error::UnknownLabel(missing));
        }
        return Err(Error::Shape {
            expected: expected.dim(),
            actual: joint.dim(),
        });
    }
    Ok(())
}

/// `<a|b>` for two Rindler kets.
pub fn overlap(a: &StateVector, b: &StateVector) -> Complex64 {
    a.inner(b).expect("Rindler kets share a dimension")
}
