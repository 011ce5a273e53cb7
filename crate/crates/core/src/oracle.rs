//! Brute-force reference for the entropies of every reduction the sweeps
//! use. Shares no code with the register, isometry, trace or eigensolver
//! paths: states are written out as sparse real kets straight from the
//! Unruh-state formulas, reduced by grouping amplitudes on the traced bits,
//! and diagonalized block by block with closed-form quadratic and cubic
//! characteristic-polynomial roots.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::unruh::{Family, Region};

/// Occupations `(a, p, q, m, n)`: Alice, I+, II-, I-, II+.
type Bits = [u8; 5];
type Ket = BTreeMap<Bits, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Alice,
    IPlus,
    IIMinus,
    IMinus,
    IIPlus,
}

impl Mode {
    fn slot(self) -> usize {
        match self {
            Mode::Alice => 0,
            Mode::IPlus => 1,
            Mode::IIMinus => 2,
            Mode::IMinus => 3,
            Mode::IIPlus => 4,
        }
    }

    pub fn region(region: Region) -> [Mode; 2] {
        match region {
            Region::BobI => [Mode::IPlus, Mode::IMinus],
            Region::BobII => [Mode::IIMinus, Mode::IIPlus],
        }
    }
}

/// Bob's ket index 0 = vacuum, 1 = particle, 2 = antiparticle, as
/// `(pqmn, amplitude)` terms.
fn unruh_terms(which: usize, gamma: f64, q_r: f64) -> Vec<([u8; 4], f64)> {
    let (c, s) = (gamma.cos(), gamma.sin());
    let q_l = (1.0 - q_r * q_r).sqrt();
    match which {
        0 => vec![
            ([0, 0, 0, 0], c * c),
            ([0, 0, 1, 1], -s * c),
            ([1, 1, 0, 0], s * c),
            ([1, 1, 1, 1], -s * s),
        ],
        1 => vec![
            ([1, 0, 0, 0], q_r * c),
            ([1, 0, 1, 1], -q_r * s),
            ([1, 1, 0, 1], q_l * s),
            ([0, 0, 0, 1], q_l * c),
        ],
        _ => vec![
            ([0, 1, 0, 0], q_l * c),
            ([0, 1, 1, 1], -q_l * s),
            ([1, 1, 1, 0], q_r * s),
            ([0, 0, 1, 0], q_r * c),
        ],
    }
}

/// Sign picked up when the region-I antiparticle operator is moved ahead
/// of the region-II antiparticle operator.
fn ordering_sign(b: &Bits) -> f64 {
    if b[2] == 1 && b[3] == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `Σ_k amp_k |alice_k> ⊗ |bob_k>` with Bob's kets given by Unruh index.
fn joint_ket(terms: &[(u8, usize, f64)], gamma: f64, q_r: f64) -> Ket {
    let mut ket = Ket::new();
    for &(alice, bob, amp) in terms {
        for (pqmn, x) in unruh_terms(bob, gamma, q_r) {
            let bits = [alice, pqmn[0], pqmn[1], pqmn[2], pqmn[3]];
            *ket.entry(bits).or_insert(0.0) += amp * x * ordering_sign(&bits);
        }
    }
    ket
}

/// Joint state as a weighted ensemble of pure kets.
fn ensemble(family: Family, gamma: f64, q_r: f64, alpha: f64, f: Option<f64>) -> Vec<(f64, Ket)> {
    let (bob0, bob1) = match family {
        Family::QuantumDualRail | Family::ClassicalDualRail => (1, 2),
        _ => (0, 1),
    };
    let (c, s) = (alpha.cos(), alpha.sin());
    match family {
        Family::QuantumSingleRail | Family::QuantumDualRail => {
            vec![(1.0, joint_ket(&[(0, bob0, c), (1, bob1, s)], gamma, q_r))]
        }
        Family::ClassicalSingleRail | Family::ClassicalDualRail => vec![
            (c * c, joint_ket(&[(0, bob0, 1.0)], gamma, q_r)),
            (s * s, joint_ket(&[(1, bob1, 1.0)], gamma, q_r)),
        ],
        Family::Werner => {
            let f = f.unwrap_or(1.0);
            let h = (0.5f64).sqrt();
            let mut out = vec![(f, joint_ket(&[(0, bob0, h), (1, bob1, h)], gamma, q_r))];
            for alice in 0..2u8 {
                for bob in [bob0, bob1] {
                    out.push(((1.0 - f) / 4.0, joint_ket(&[(alice, bob, 1.0)], gamma, q_r)));
                }
            }
            out
        }
    }
}

/// Dense real reduced matrix on `keep`, indexed with the first kept mode
/// as the most significant bit.
fn reduced(ens: &[(f64, Ket)], keep: &[Mode]) -> Vec<Vec<f64>> {
    let dim = 1usize << keep.len();
    let mut rho = vec![vec![0.0; dim]; dim];
    let slots: Vec<usize> = keep.iter().map(|m| m.slot()).collect();
    for (w, ket) in ens {
        if *w == 0.0 {
            continue;
        }
        // traced bits -> [(kept index, amplitude)]
        let mut groups: BTreeMap<Vec<u8>, Vec<(usize, f64)>> = BTreeMap::new();
        for (bits, &amp) in ket {
            let kept = slots.iter().fold(0usize, |acc, &s| (acc << 1) | bits[s] as usize);
            let traced: Vec<u8> = (0..5).filter(|i| !slots.contains(i)).map(|i| bits[i]).collect();
            groups.entry(traced).or_default().push((kept, amp));
        }
        for members in groups.values() {
            for &(x, ax) in members {
                for &(y, ay) in members {
                    rho[x][y] += w * ax * ay;
                }
            }
        }
    }
    rho
}

/// Couplings below this are treated as structural zeros.
const COUPLING_FLOOR: f64 = 1e-14;

/// Eigenvalues of a real symmetric matrix whose coupling graph splits into
/// blocks of size at most three. `None` if a larger block shows up.
pub fn block_eigenvalues(m: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut evs = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < block.len() {
            let r = block[i];
            for c in 0..n {
                if !seen[c] && m[r][c].abs() > COUPLING_FLOOR {
                    seen[c] = true;
                    block.push(c);
                }
            }
            i += 1;
        }
        block.sort_unstable();
        let a = |i: usize, j: usize| m[block[i]][block[j]];
        match block.len() {
            1 => evs.push(a(0, 0)),
            2 => {
                let (l1, l2) = quadratic_roots(a(0, 0), a(0, 1), a(1, 1));
                evs.extend([l1, l2]);
            }
            3 => evs.extend(cubic_roots([
                [a(0, 0), a(0, 1), a(0, 2)],
                [a(1, 0), a(1, 1), a(1, 2)],
                [a(2, 0), a(2, 1), a(2, 2)],
            ])),
            _ => return None,
        }
    }
    evs.sort_by(|x, y| y.total_cmp(x));
    Some(evs)
}

/// Roots of `λ² - (a + d)λ + (ad - b²)` for `[[a, b], [b, d]]`.
pub fn quadratic_roots(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean + radius, mean - radius)
}

/// Roots of the characteristic cubic of a real symmetric 3×3 matrix, via
/// the trigonometric form for three real roots.
pub fn cubic_roots(a: [[f64; 3]; 3]) -> [f64; 3] {
    let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if off == 0.0 {
        return [a[0][0], a[1][1], a[2][2]];
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    let mut b = a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let l2 = 3.0 * q - l1 - l3;
    polish(&a, [l1, l2, l3])
}

/// The trigonometric roots lose about half the digits near a repeated
/// root. Each root with a well-defined eigenvector (cross product of two
/// rows of `A - λ`) is replaced by its Rayleigh quotient; roots too close
/// to isolate share what is left of the trace.
fn polish(a: &[[f64; 3]; 3], roots: [f64; 3]) -> [f64; 3] {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let mut refined = [None; 3];
    for (slot, &l) in refined.iter_mut().zip(&roots) {
        let rows: Vec<[f64; 3]> = (0..3)
            .map(|i| {
                let mut r = a[i];
                r[i] -= l;
                r
            })
            .collect();
        let best = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| cross(rows[i], rows[j]))
            .max_by(|x, y| norm2(x).total_cmp(&norm2(y)))
            .unwrap();
        let n2 = norm2(&best);
        if n2 <= (1e-6 * scale * scale).powi(2) {
            continue;
        }
        let v = best.map(|x| x / n2.sqrt());
        let mut rq = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                rq += v[i] * a[i][j] * v[j];
            }
        }
        *slot = Some(rq);
    }
    let trace = a[0][0] + a[1][1] + a[2][2];
    let known: f64 = refined.iter().flatten().sum();
    let unknown = refined.iter().filter(|r| r.is_none()).count();
    refined.map(|r| r.unwrap_or((trace - known) / unknown as f64))
}

fn norm2(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn entropy_bits(evs: &[f64]) -> f64 {
    evs.iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln() / std::f64::consts::LN_2)
        .sum()
}

/// Reference entropy of the marginal on `keep` for one channel state.
/// `alpha` is ignored for Werner, which always uses π/4.
pub fn marginal_entropy(
    family: Family,
    gamma: f64,
    q_r: f64,
    alpha: f64,
    f: Option<f64>,
    keep: &[Mode],
) -> Option<f64> {
    let alpha = if family == Family::Werner { FRAC_PI_4 } else { alpha };
    let ens = ensemble(family, gamma, q_r, alpha, f);
    block_eigenvalues(&reduced(&ens, keep)).map(|evs| entropy_bits(&evs))
}

/// Reference `(S(A), S(B), S(AB))` with Bob restricted to `region`.
pub fn split_entropies(
    family: Family,
    region: Region,
    gamma: f64,
    q_r: f64,
    alpha: f64,
    f: Option<f64>,
) -> Option<(f64, f64, f64)> {
    let bob = Mode::region(region);
    Some((
        marginal_entropy(family, gamma, q_r, alpha, f, &[Mode::Alice])?,
        marginal_entropy(family, gamma, q_r, alpha, f, &bob)?,
        marginal_entropy(family, gamma, q_r, alpha, f, &[Mode::Alice, bob[0], bob[1]])?,
    ))
}
