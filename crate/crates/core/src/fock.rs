//! Dense linear algebra over registers of labeled two-level factors.
//!
//! Every factor is a single fermionic mode with occupation 0 or 1. A basis
//! index maps to occupation bits with factor 0 as the most significant bit,
//! so `|pqmn>` reads left to right in the order the factors are listed.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen;
use crate::error::{Error, Result};

/// Tolerance for Hermiticity, unit trace and unit norm of constructed values.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Eigenvalues above `-PSD_TOL` count as numerical noise around zero.
pub const PSD_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Modes that can appear in a register.
///
/// `Bob` is Bob's inertial mode before the Unruh substitution replaces it
/// with the four Rindler modes. The Rindler modes are listed in the order
/// Bob's Unruh states are written: region-I particle, region-II
/// antiparticle, region-I antiparticle, region-II particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SubsystemLabel {
    Alice,
    Bob,
    RegionIParticle,
    RegionIIAntiparticle,
    RegionIAntiparticle,
    RegionIIParticle,
}

impl SubsystemLabel {
    pub const RINDLER: [SubsystemLabel; 4] = [
        SubsystemLabel::RegionIParticle,
        SubsystemLabel::RegionIIAntiparticle,
        SubsystemLabel::RegionIAntiparticle,
        SubsystemLabel::RegionIIParticle,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            SubsystemLabel::Alice => "A",
            SubsystemLabel::Bob => "B",
            SubsystemLabel::RegionIParticle => "I+",
            SubsystemLabel::RegionIIAntiparticle => "II-",
            SubsystemLabel::RegionIAntiparticle => "I-",
            SubsystemLabel::RegionIIParticle => "II+",
        }
    }
}

impl fmt::Display for SubsystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Ordered list of distinct two-level factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    factors: Vec<SubsystemLabel>,
}

impl SubsystemLayout {
    pub fn new(factors: Vec<SubsystemLabel>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &label in &factors {
            if !seen.insert(label) {
                return Err(Error::LayoutConflict(label));
            }
        }
        Ok(SubsystemLayout { factors })
    }

    pub fn single(label: SubsystemLabel) -> Self {
        SubsystemLayout {
            factors: vec![label],
        }
    }

    /// Bob's four Rindler modes `(I+, II-, I-, II+)`.
    pub fn rindler() -> Self {
        SubsystemLayout {
            factors: SubsystemLabel::RINDLER.to_vec(),
        }
    }

    /// Alice followed by Bob's four Rindler modes.
    pub fn alice_rindler() -> Self {
        let mut factors = vec![SubsystemLabel::Alice];
        factors.extend_from_slice(&SubsystemLabel::RINDLER);
        SubsystemLayout { factors }
    }

    pub fn factors(&self) -> &[SubsystemLabel] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.factors.len()
    }

    pub fn position(&self, label: SubsystemLabel) -> Option<usize> {
        self.factors.iter().position(|&l| l == label)
    }

    pub fn contains(&self, label: SubsystemLabel) -> bool {
        self.position(label).is_some()
    }

    /// Bit mask selecting `label`'s occupation inside a basis index.
    pub fn mask(&self, label: SubsystemLabel) -> Option<usize> {
        self.position(label).map(|p| self.bit(p))
    }

    fn bit(&self, position: usize) -> usize {
        1 << (self.factors.len() - 1 - position)
    }

    /// Factors of `self` followed by those of `other`.
    pub fn concat(&self, other: &SubsystemLayout) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        SubsystemLayout::new(factors)
    }

    /// Parse an occupation string such as `"1011"` into a basis index.
    pub fn index_of(&self, bits: &str) -> Result<usize> {
        if bits.len() != self.len() {
            return Err(Error::Shape {
                expected: self.len(),
                actual: bits.len(),
            });
        }
        bits.chars().try_fold(0usize, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok((acc << 1) | 1),
            _ => Err(Error::Shape {
                expected: self.len(),
                actual: bits.len(),
            }),
        })
    }
}

impl fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Complex amplitudes over a layout's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::Shape {
                expected: layout.dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(StateVector { layout, amplitudes })
    }

    /// Builds a unit-norm state from real amplitudes on named basis kets.
    pub fn from_terms(layout: SubsystemLayout, terms: &[(&str, f64)]) -> Result<Self> {
        let mut amplitudes = vec![ZERO; layout.dim()];
        for &(bits, amp) in terms {
            amplitudes[layout.index_of(bits)?] += Complex64::new(amp, 0.0);
        }
        let v = StateVector::new(layout, amplitudes)?;
        v.ensure_normalized()?;
        Ok(v)
    }

    /// The basis ket at `index`.
    pub fn basis(layout: SubsystemLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::Shape {
                expected: layout.dim(),
                actual: index,
            });
        }
        let mut amplitudes = vec![ZERO; layout.dim()];
        amplitudes[index] = ONE;
        StateVector::new(layout, amplitudes)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::Normalization(n));
        }
        Ok(())
    }

    /// `<self|other>`, ignoring labels beyond requiring equal dimension.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::Shape {
                expected: self.amplitudes.len(),
                actual: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

/// `a ⊗ b`: factors of `a` followed by those of `b`.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let layout = a.layout.concat(&b.layout)?;
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector::new(layout, amplitudes)
}

/// `|v><v|` for a unit vector.
pub fn outer_product(v: &StateVector) -> Result<DensityMatrix> {
    v.ensure_normalized()?;
    let dim = v.amplitudes.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for a in &v.amplitudes {
        for b in &v.amplitudes {
            entries.push(a * b.conj());
        }
    }
    DensityMatrix::new(v.layout.clone(), entries)
}

/// Hermitian, unit-trace matrix over a layout, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: SubsystemLayout,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and unit trace. Positivity is checked
    /// lazily by [`DensityMatrix::check_invariants`] and by the entropy.
    pub fn new(layout: SubsystemLayout, entries: Vec<Complex64>) -> Result<Self> {
        let dim = layout.dim();
        if entries.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let rho = DensityMatrix { layout, entries };
        let defect = rho.hermiticity_defect();
        if defect > STRUCTURE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::Trace(tr));
        }
        Ok(rho)
    }

    /// Diagonal density matrix from real weights.
    pub fn diagonal(layout: SubsystemLayout, weights: &[f64]) -> Result<Self> {
        let dim = layout.dim();
        if weights.len() != dim {
            return Err(Error::Shape {
                expected: dim,
                actual: weights.len(),
            });
        }
        let mut entries = vec![ZERO; dim * dim];
        for (i, &w) in weights.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(w, 0.0);
        }
        DensityMatrix::new(layout, entries)
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let dim = layout.dim();
        let w = vec![1.0 / dim as f64; dim];
        DensityMatrix::diagonal(layout, &w).expect("uniform weights have unit trace")
    }

    /// Weighted sum `Σ w_k ρ_k` over matrices sharing one layout.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::Shape {
            expected: 1,
            actual: 0,
        })?;
        let mut entries = vec![ZERO; first.entries.len()];
        for &(w, rho) in parts {
            if rho.layout != first.layout {
                return Err(Error::Shape {
                    expected: first.dim(),
                    actual: rho.dim(),
                });
            }
            for (e, x) in entries.iter_mut().zip(&rho.entries) {
                *e += x * w;
            }
        }
        DensityMatrix::new(first.layout.clone(), entries)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (self.entries[i * dim + j] - self.entries[j * dim + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigen::eigenvalues_hermitian(self.dim(), &self.entries)
    }

    /// Hermiticity, unit trace and positivity (eigenvalues ≥ -1e-8).
    pub fn check_invariants(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > STRUCTURE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::Trace(tr));
        }
        let evs = self.eigenvalues()?;
        match evs.last() {
            Some(&min) if min < -PSD_TOL => Err(Error::Spectrum(min)),
            _ => Ok(()),
        }
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Norm-preserving map from a factor's two-level space into a register.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    target_layout: SubsystemLayout,
    columns: Vec<StateVector>,
}

impl Isometry {
    /// Columns are the images of the source basis states, in order.
    pub fn new(columns: Vec<StateVector>) -> Result<Self> {
        let target_layout = columns
            .first()
            .map(|c| c.layout.clone())
            .ok_or(Error::Shape {
                expected: 1,
                actual: 0,
            })?;
        if let Some(bad) = columns.iter().find(|c| c.layout != target_layout) {
            return Err(Error::Shape {
                expected: target_layout.dim(),
                actual: bad.layout.dim(),
            });
        }
        let v = Isometry {
            target_layout,
            columns,
        };
        let defect = v.orthonormality_defect();
        if defect > STRUCTURE_TOL {
            return Err(Error::NotIsometry(defect));
        }
        Ok(v)
    }

    /// Identity embedding of a factor into itself.
    pub fn identity(label: SubsystemLabel) -> Self {
        let layout = SubsystemLayout::single(label);
        let columns = (0..2)
            .map(|i| StateVector::basis(layout.clone(), i).expect("index in range"))
            .collect();
        Isometry {
            target_layout: layout,
            columns,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn target_layout(&self) -> &SubsystemLayout {
        &self.target_layout
    }

    pub fn columns(&self) -> &[StateVector] {
        &self.columns
    }

    /// `max |V†V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.columns.iter().enumerate() {
            for (j, b) in self.columns.iter().enumerate() {
                let g = a.inner(b).expect("columns share a layout");
                let expected = if i == j { ONE } else { ZERO };
                worst = worst.max((g - expected).norm());
            }
        }
        worst
    }
}

/// `(I ⊗ V) ρ (I ⊗ V)†` with `V` acting on `which`; the factor is replaced
/// in place by `V`'s target factors.
pub fn apply_isometry(
    rho: &DensityMatrix,
    which: SubsystemLabel,
    v: &Isometry,
) -> Result<DensityMatrix> {
    let pos = rho
        .layout
        .position(which)
        .ok_or(Error::UnknownLabel(which))?;
    if v.source_dim() != 2 {
        return Err(Error::Shape {
            expected: 2,
            actual: v.source_dim(),
        });
    }
    let n = rho.layout.len();
    let mut factors = rho.layout.factors[..pos].to_vec();
    factors.extend_from_slice(v.target_layout.factors());
    factors.extend_from_slice(&rho.layout.factors[pos + 1..]);
    let layout = SubsystemLayout::new(factors)?;

    let right_bits = n - pos - 1;
    let right = 1usize << right_bits;
    let target_bits = v.target_layout.len();
    let target = v.target_layout.dim();
    let old_dim = rho.dim();
    let new_dim = layout.dim();

    // old index (l, s, r) -> new index (l, t, r)
    let split = |i: usize| (i >> (right_bits + 1), (i >> right_bits) & 1, i & (right - 1));
    let join = |l: usize, t: usize, r: usize| (((l << target_bits) | t) << right_bits) | r;

    let mut entries = vec![ZERO; new_dim * new_dim];
    for i in 0..old_dim {
        let (l, s, r) = split(i);
        for j in 0..old_dim {
            let x = rho.entries[i * old_dim + j];
            if x == ZERO {
                continue;
            }
            let (l2, s2, r2) = split(j);
            let col_a = &v.columns[s].amplitudes;
            let col_b = &v.columns[s2].amplitudes;
            for t in 0..target {
                let a = col_a[t];
                if a == ZERO {
                    continue;
                }
                let row = join(l, t, r);
                for t2 in 0..target {
                    let b = col_b[t2];
                    if b == ZERO {
                        continue;
                    }
                    entries[row * new_dim + join(l2, t2, r2)] += a * x * b.conj();
                }
            }
        }
    }
    DensityMatrix::new(layout, entries)
}

/// Traces out the `discard` factors; the remaining factors keep their
/// relative order.
pub fn partial_trace(rho: &DensityMatrix, discard: &[SubsystemLabel]) -> Result<DensityMatrix> {
    for &label in discard {
        if !rho.layout.contains(label) {
            return Err(Error::UnknownLabel(label));
        }
    }
    let discard: BTreeSet<SubsystemLabel> = discard.iter().copied().collect();
    let keep: Vec<SubsystemLabel> = rho
        .layout
        .factors
        .iter()
        .copied()
        .filter(|l| !discard.contains(l))
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyRemainder);
    }
    let keep_masks: Vec<usize> = keep.iter().map(|&l| rho.layout.mask(l).unwrap()).collect();
    let discard_masks: Vec<usize> = discard.iter().map(|&l| rho.layout.mask(l).unwrap()).collect();
    let layout = SubsystemLayout::new(keep)?;

    let kept_full = scatter_table(&keep_masks);
    let discarded_full = scatter_table(&discard_masks);
    let dim = rho.dim();
    let new_dim = layout.dim();
    let mut entries = vec![ZERO; new_dim * new_dim];
    for (a, &fa) in kept_full.iter().enumerate() {
        for (b, &fb) in kept_full.iter().enumerate() {
            entries[a * new_dim + b] = discarded_full
                .iter()
                .map(|&d| rho.entries[(fa | d) * dim + (fb | d)])
                .sum();
        }
    }
    DensityMatrix::new(layout, entries)
}

/// For each compact index over `masks` (first mask most significant),
/// the corresponding scattered bits in the full index.
fn scatter_table(masks: &[usize]) -> Vec<usize> {
    let k = masks.len();
    (0..1usize << k)
        .map(|compact| {
            masks
                .iter()
                .enumerate()
                .filter(|&(p, _)| compact & (1 << (k - 1 - p)) != 0)
                .fold(0, |acc, (_, &m)| acc | m)
        })
        .collect()
}

/// Reorders the factors of `rho` into `order`. With `fermionic`, each basis
/// ket picks up the exchange sign `(-1)^{#inverted occupied pairs}`, as
/// moving creation operators past each other does.
pub fn permute_modes(
    rho: &DensityMatrix,
    order: &[SubsystemLabel],
    fermionic: bool,
) -> Result<DensityMatrix> {
    let target = SubsystemLayout::new(order.to_vec())?;
    if target.len() != rho.layout.len() {
        return Err(Error::Shape {
            expected: rho.layout.len(),
            actual: target.len(),
        });
    }
    // old position of each new factor
    let source_pos: Vec<usize> = order
        .iter()
        .map(|&l| rho.layout.position(l).ok_or(Error::UnknownLabel(l)))
        .collect::<Result<_>>()?;
    let n = order.len();
    let dim = rho.dim();

    // new index and sign for each old index
    let mut image = vec![(0usize, 1.0f64); dim];
    for (old, slot) in image.iter_mut().enumerate() {
        let occupied = |p: usize| old & (1 << (n - 1 - p)) != 0;
        let mut new = 0usize;
        for (k, &p) in source_pos.iter().enumerate() {
            if occupied(p) {
                new |= 1 << (n - 1 - k);
            }
        }
        let mut sign = 1.0;
        if fermionic {
            for a in 0..n {
                for b in a + 1..n {
                    if source_pos[a] > source_pos[b] && occupied(source_pos[a]) && occupied(source_pos[b]) {
                        sign = -sign;
                    }
                }
            }
        }
        *slot = (new, sign);
    }

    let mut entries = vec![ZERO; dim * dim];
    for i in 0..dim {
        let (ni, si) = image[i];
        for j in 0..dim {
            let (nj, sj) = image[j];
            entries[ni * dim + nj] = rho.entries[i * dim + j] * (si * sj);
        }
    }
    DensityMatrix::new(target, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SubsystemLabel::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn qubit(label: SubsystemLabel, a0: f64, a1: f64) -> StateVector {
        StateVector::new(SubsystemLayout::single(label), vec![c(a0), c(a1)]).unwrap()
    }

    fn bell(a: SubsystemLabel, b: SubsystemLabel) -> DensityMatrix {
        let layout = SubsystemLayout::new(vec![a, b]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        outer_product(&StateVector::from_terms(layout, &[("00", h), ("11", h)]).unwrap()).unwrap()
    }

    #[test]
    fn tensor_of_basis_kets() {
        let v = tensor_product(&qubit(Alice, 1.0, 0.0), &qubit(RegionIParticle, 0.0, 1.0)).unwrap();
        assert_eq!(v.amplitudes(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(v.layout().factors(), &[Alice, RegionIParticle]);
    }

    #[test]
    fn tensor_plus_zero() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = tensor_product(&qubit(Alice, h, h), &qubit(RegionIParticle, 1.0, 0.0)).unwrap();
        let expected = [h, 0.0, h, 0.0];
        for (a, e) in v.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_shared_label() {
        let err = tensor_product(&qubit(Alice, 1.0, 0.0), &qubit(Alice, 1.0, 0.0)).unwrap_err();
        assert_eq!(err, Error::LayoutConflict(Alice));
    }

    #[test]
    fn outer_product_examples() {
        let rho = outer_product(&qubit(Alice, 1.0, 0.0)).unwrap();
        assert_eq!(rho.entries(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = outer_product(&qubit(Alice, h, h)).unwrap();
        for e in rho.entries() {
            assert!((e - c(0.5)).norm() < 1e-15);
        }
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn outer_product_rejects_unnormalized() {
        assert!(matches!(
            outer_product(&qubit(Alice, 1.0, 1.0)),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let rho = partial_trace(&bell(Alice, RegionIParticle), &[RegionIParticle]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(SubsystemLayout::single(Alice));
        assert!(rho.max_abs_diff(&mixed) < 1e-15);
    }

    #[test]
    fn product_trace_recovers_factor() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = qubit(Alice, 0.6, 0.8);
        let b = qubit(RegionIParticle, h, -h);
        let rho = outer_product(&tensor_product(&a, &b).unwrap()).unwrap();
        let reduced = partial_trace(&rho, &[RegionIParticle]).unwrap();
        assert!(reduced.max_abs_diff(&outer_product(&a).unwrap()) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = bell(Alice, RegionIParticle);
        assert_eq!(
            partial_trace(&rho, &[RegionIIParticle]).unwrap_err(),
            Error::UnknownLabel(RegionIIParticle)
        );
        assert_eq!(
            partial_trace(&rho, &[Alice, RegionIParticle]).unwrap_err(),
            Error::EmptyRemainder
        );
    }

    #[test]
    fn identity_isometry_is_noop() {
        let rho = bell(Alice, RegionIParticle);
        let out = apply_isometry(&rho, RegionIParticle, &Isometry::identity(RegionIParticle)).unwrap();
        assert_eq!(out.layout(), rho.layout());
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn isometry_rejects_non_orthonormal_columns() {
        let layout = SubsystemLayout::single(Alice);
        let a = StateVector::from_terms(layout.clone(), &[("0", 1.0)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = StateVector::from_terms(layout, &[("0", h), ("1", h)]).unwrap();
        assert!(matches!(Isometry::new(vec![a, b]), Err(Error::NotIsometry(_))));
    }

    #[test]
    fn apply_isometry_missing_factor() {
        let rho = bell(Alice, RegionIParticle);
        let err = apply_isometry(&rho, RegionIIParticle, &Isometry::identity(RegionIIParticle)).unwrap_err();
        assert_eq!(err, Error::UnknownLabel(RegionIIParticle));
    }

    #[test]
    fn density_matrix_rejects_bad_trace_and_asymmetry() {
        let layout = SubsystemLayout::single(Alice);
        assert!(matches!(
            DensityMatrix::diagonal(layout.clone(), &[0.5, 0.6]),
            Err(Error::Trace(_))
        ));
        let skew = vec![c(0.5), c(0.1), c(0.2), c(0.5)];
        assert!(matches!(
            DensityMatrix::new(layout, skew),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn fermionic_swap_flips_doubly_occupied_coherence() {
        // (|00> + |11>)/√2 on (I-, II-) reordered to (II-, I-): |11> picks up a sign
        let rho = bell(RegionIAntiparticle, RegionIIAntiparticle);
        let swapped = permute_modes(&rho, &[RegionIIAntiparticle, RegionIAntiparticle], true).unwrap();
        assert!((swapped.get(0, 3) - c(-0.5)).norm() < 1e-15);
        let plain = permute_modes(&rho, &[RegionIIAntiparticle, RegionIAntiparticle], false).unwrap();
        assert!((plain.get(0, 3) - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn index_of_reads_left_to_right() {
        let layout = SubsystemLayout::rindler();
        assert_eq!(layout.index_of("1000").unwrap(), 8);
        assert_eq!(layout.index_of("0011").unwrap(), 3);
        assert!(layout.index_of("101").is_err());
    }
}
