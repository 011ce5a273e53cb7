//! Entropic channel diagnostics, in bits.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fock::{partial_trace, DensityMatrix, SubsystemLabel, PSD_TOL};

/// Two disjoint label sets covering a layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteSplit {
    pub side_a: Vec<SubsystemLabel>,
    pub side_b: Vec<SubsystemLabel>,
}

impl BipartiteSplit {
    pub fn new(side_a: &[SubsystemLabel], side_b: &[SubsystemLabel]) -> Self {
        BipartiteSplit {
            side_a: side_a.to_vec(),
            side_b: side_b.to_vec(),
        }
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        check_cover(rho, &[&self.side_a, &self.side_b])
    }
}

/// Three disjoint label sets covering a layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteSplit {
    pub side_a: Vec<SubsystemLabel>,
    pub side_b: Vec<SubsystemLabel>,
    pub side_c: Vec<SubsystemLabel>,
}

impl TripartiteSplit {
    pub fn new(
        side_a: &[SubsystemLabel],
        side_b: &[SubsystemLabel],
        side_c: &[SubsystemLabel],
    ) -> Self {
        TripartiteSplit {
            side_a: side_a.to_vec(),
            side_b: side_b.to_vec(),
            side_c: side_c.to_vec(),
        }
    }

    /// Alice | region-I modes | region-II modes.
    pub fn alice_wedges() -> Self {
        use SubsystemLabel::*;
        TripartiteSplit::new(
            &[Alice],
            &[RegionIParticle, RegionIAntiparticle],
            &[RegionIIAntiparticle, RegionIIParticle],
        )
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        check_cover(rho, &[&self.side_a, &self.side_b, &self.side_c])
    }
}

fn check_cover(rho: &DensityMatrix, sides: &[&[SubsystemLabel]]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for side in sides {
        if side.is_empty() {
            return Err(Error::Split("empty side".into()));
        }
        for &label in side.iter() {
            if !rho.layout().contains(label) {
                return Err(Error::UnknownLabel(label));
            }
            if !seen.insert(label) {
                return Err(Error::Split(format!("label {label} on more than one side")));
            }
        }
    }
    if seen.len() != rho.layout().len() {
        return Err(Error::Split(format!(
            "sides cover {} of {} factors",
            seen.len(),
            rho.layout().len()
        )));
    }
    Ok(())
}

/// `-Σ λ log₂ λ` over a spectrum. Eigenvalues in `[-1e-8, 0)` are clamped
/// to zero; anything lower is rejected.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -PSD_TOL {
            return Err(Error::Spectrum(l));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues()?)
}

/// Entropy of the marginal on `keep`, in the layout's order.
pub fn marginal_entropy(rho: &DensityMatrix, keep: &[SubsystemLabel]) -> Result<f64> {
    for &l in keep {
        if !rho.layout().contains(l) {
            return Err(Error::UnknownLabel(l));
        }
    }
    let discard: Vec<SubsystemLabel> = rho
        .layout()
        .factors()
        .iter()
        .copied()
        .filter(|l| !keep.contains(l))
        .collect();
    von_neumann_entropy(&partial_trace(rho, &discard)?)
}

/// `S(A)`, `S(B)` and `S(AB)` for a bipartition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitEntropies {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
}

impl SplitEntropies {
    pub fn mutual_information(&self) -> f64 {
        self.s_a + self.s_b - self.s_ab
    }

    pub fn conditional_entropy(&self) -> f64 {
        self.s_ab - self.s_b
    }
}

pub fn split_entropies(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<SplitEntropies> {
    split.check(rho)?;
    Ok(SplitEntropies {
        s_a: marginal_entropy(rho, &split.side_a)?,
        s_b: marginal_entropy(rho, &split.side_b)?,
        s_ab: von_neumann_entropy(rho)?,
    })
}

/// `S(A) + S(B) - S(AB)`.
pub fn mutual_information(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<f64> {
    Ok(split_entropies(rho, split)?.mutual_information())
}

/// `S(AB) - S(B)`, i.e. `S(A|B)`.
pub fn conditional_entropy(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<f64> {
    split.check(rho)?;
    Ok(von_neumann_entropy(rho)? - marginal_entropy(rho, &split.side_b)?)
}

/// Which combination of marginals the strong-additivity functional uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdditivityForm {
    /// `S(A|B) + S(A|C) = S(AB) - S(B) + S(AC) - S(C)`, non-negative for
    /// every state.
    #[default]
    ConditionalSum,
    /// `S(AB) - S(A) + S(AC) - S(C)`, which has no definite sign.
    Printed,
}

/// Marginal entropies entering the strong-additivity functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditivityTerms {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub s_ab: f64,
    pub s_ac: f64,
}

impl AdditivityTerms {
    pub fn value(&self, form: AdditivityForm) -> f64 {
        match form {
            AdditivityForm::ConditionalSum => self.s_ab - self.s_b + self.s_ac - self.s_c,
            AdditivityForm::Printed => self.s_ab - self.s_a + self.s_ac - self.s_c,
        }
    }
}

pub fn additivity_terms(rho: &DensityMatrix, split: &TripartiteSplit) -> Result<AdditivityTerms> {
    split.check(rho)?;
    let union = |x: &[SubsystemLabel], y: &[SubsystemLabel]| [x, y].concat();
    Ok(AdditivityTerms {
        s_a: marginal_entropy(rho, &split.side_a)?,
        s_b: marginal_entropy(rho, &split.side_b)?,
        s_c: marginal_entropy(rho, &split.side_c)?,
        s_ab: marginal_entropy(rho, &union(&split.side_a, &split.side_b))?,
        s_ac: marginal_entropy(rho, &union(&split.side_a, &split.side_c))?,
    })
}

pub fn strong_additivity(
    rho: &DensityMatrix,
    split: &TripartiteSplit,
    form: AdditivityForm,
) -> Result<f64> {
    Ok(additivity_terms(rho, split)?.value(form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{outer_product, StateVector, SubsystemLayout};
    use std::f64::consts::FRAC_1_SQRT_2 as H;
    use SubsystemLabel::*;

    fn two() -> SubsystemLayout {
        SubsystemLayout::new(vec![Alice, Bob]).unwrap()
    }

    fn ab() -> BipartiteSplit {
        BipartiteSplit::new(&[Alice], &[Bob])
    }

    fn bell() -> DensityMatrix {
        outer_product(&StateVector::from_terms(two(), &[("00", H), ("11", H)]).unwrap()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let pure = outer_product(&StateVector::from_terms(two(), &[("01", 0.6), ("10", 0.8)]).unwrap()).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);

        let half = DensityMatrix::maximally_mixed(SubsystemLayout::single(Alice));
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-15);

        let skewed = DensityMatrix::diagonal(SubsystemLayout::single(Alice), &[0.75, 0.25]).unwrap();
        let want = 2.0 - 0.75 * 3f64.log2();
        assert!((von_neumann_entropy(&skewed).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.8112781245).abs() < 1e-10);
    }

    #[test]
    fn clamping_policy() {
        assert_eq!(entropy_of_spectrum(&[1.0, -5e-9]).unwrap(), 0.0);
        assert!(matches!(
            entropy_of_spectrum(&[1.0, -1e-6]),
            Err(Error::Spectrum(_))
        ));
    }

    #[test]
    fn bell_pair_measures() {
        assert!((mutual_information(&bell(), &ab()).unwrap() - 2.0).abs() < 1e-12);
        assert!((conditional_entropy(&bell(), &ab()).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_and_noise_measures() {
        let corr = DensityMatrix::diagonal(two(), &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(conditional_entropy(&corr, &ab()).unwrap().abs() < 1e-15);
        let noise = DensityMatrix::maximally_mixed(two());
        assert!((conditional_entropy(&noise, &ab()).unwrap() - 1.0).abs() < 1e-15);
        assert!(mutual_information(&noise, &ab()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn product_state_has_no_mutual_information() {
        let a = StateVector::from_terms(SubsystemLayout::single(Alice), &[("0", 0.6), ("1", 0.8)]).unwrap();
        let b = StateVector::from_terms(SubsystemLayout::single(Bob), &[("0", H), ("1", -H)]).unwrap();
        let rho = outer_product(&crate::fock::tensor_product(&a, &b).unwrap()).unwrap();
        assert!(mutual_information(&rho, &ab()).unwrap().abs() < 1e-12);
    }

    fn three() -> SubsystemLayout {
        SubsystemLayout::new(vec![Alice, Bob, RegionIParticle]).unwrap()
    }

    fn abc() -> TripartiteSplit {
        TripartiteSplit::new(&[Alice], &[Bob], &[RegionIParticle])
    }

    #[test]
    fn additivity_of_pure_product_vanishes() {
        let rho = outer_product(&StateVector::from_terms(three(), &[("010", 1.0)]).unwrap()).unwrap();
        for form in [AdditivityForm::ConditionalSum, AdditivityForm::Printed] {
            assert!(strong_additivity(&rho, &abc(), form).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn additivity_of_ghz_vanishes() {
        let ghz = outer_product(&StateVector::from_terms(three(), &[("000", H), ("111", H)]).unwrap()).unwrap();
        let t = additivity_terms(&ghz, &abc()).unwrap();
        for s in [t.s_a, t.s_b, t.s_c, t.s_ab, t.s_ac] {
            assert!((s - 1.0).abs() < 1e-12);
        }
        for form in [AdditivityForm::ConditionalSum, AdditivityForm::Printed] {
            assert!(t.value(form).abs() < 1e-12);
        }
    }

    #[test]
    fn split_validation() {
        let rho = bell();
        assert!(matches!(
            mutual_information(&rho, &BipartiteSplit::new(&[Alice], &[Alice])),
            Err(Error::Split(_))
        ));
        assert!(matches!(
            mutual_information(&rho, &BipartiteSplit::new(&[Alice], &[])),
            Err(Error::Split(_))
        ));
        assert_eq!(
            mutual_information(&rho, &BipartiteSplit::new(&[Alice], &[RegionIParticle])).unwrap_err(),
            Error::UnknownLabel(RegionIParticle)
        );
        let rho3 = DensityMatrix::maximally_mixed(three());
        assert!(matches!(
            mutual_information(&rho3, &ab()),
            Err(Error::Split(_))
        ));
    }
}
