//! Grid evaluation of channel families and the presets behind the figures.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::SubsystemLabel;
use crate::info::{additivity_terms, marginal_entropy, AdditivityForm, TripartiteSplit};
use crate::unruh::{
    build_joint, ordered_joint, AccelerationParams, ChannelSpec, Family, Ordering, Region,
};

/// Number of points in the default acceleration grid.
pub const DEFAULT_GAMMA_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Measure {
    MutualInformation,
    ConditionalEntropy,
    StrongAdditivity,
}

impl Measure {
    pub fn slug(self) -> &'static str {
        match self {
            Measure::MutualInformation => "mutual_info",
            Measure::ConditionalEntropy => "cond_entropy",
            Measure::StrongAdditivity => "ssa_value",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub families: Vec<Family>,
    pub gamma_grid: Vec<f64>,
    pub q_r_grid: Vec<f64>,
    pub alpha: f64,
    /// Werner fidelities; ignored by the other families.
    pub f_grid: Vec<f64>,
    pub regions: Vec<Region>,
    pub measures: Vec<Measure>,
    pub additivity: AdditivityForm,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::Sweep("no families".into()));
        }
        if self.regions.is_empty() {
            return Err(Error::Sweep("no regions".into()));
        }
        check_grid("gamma", &self.gamma_grid, 0.0, FRAC_PI_4)?;
        check_grid("q_r", &self.q_r_grid, 0.0, 1.0)?;
        if self.families.contains(&Family::Werner) {
            check_grid("f", &self.f_grid, 0.0, 1.0)?;
        }
        if !self.alpha.is_finite() {
            return Err(Error::domain("alpha", self.alpha, "finite"));
        }
        Ok(())
    }

    fn wants_additivity(&self) -> bool {
        self.measures.contains(&Measure::StrongAdditivity)
    }

    /// Grid points in canonical order: family, region, gamma, q_r, f.
    fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &family in &self.families {
            let fs: Vec<Option<f64>> = if family == Family::Werner {
                self.f_grid.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for &region in &self.regions {
                for &gamma in &self.gamma_grid {
                    for &q_r in &self.q_r_grid {
                        for &f in &fs {
                            out.push(GridPoint {
                                family,
                                region,
                                gamma,
                                q_r,
                                f,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

fn check_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Sweep(format!("{name} grid is empty")));
    }
    if let Some(&bad) = grid.iter().find(|&&x| !(lo..=hi + 1e-9).contains(&x)) {
        return Err(Error::Sweep(format!("{name} value {bad} outside [{lo}, {hi}]")));
    }
    let ascending = grid.windows(2).all(|w| w[0] < w[1]);
    let descending = grid.windows(2).all(|w| w[0] > w[1]);
    if !(ascending || descending) {
        return Err(Error::Sweep(format!("{name} grid is not strictly monotone")));
    }
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi`, both ends exact.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    family: Family,
    region: Region,
    gamma: f64,
    q_r: f64,
    f: Option<f64>,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} region={} gamma={} q_r={}",
            self.family, self.region, self.gamma, self.q_r
        )?;
        if let Some(v) = self.f {
            write!(f, " f={v}")?;
        }
        Ok(())
    }
}

/// One evaluated grid point. Entropies are in bits; `s_a` is Alice's,
/// `s_b` the accessible region's.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub family: Family,
    pub region: Region,
    pub gamma: f64,
    pub q_r: f64,
    pub alpha: Option<f64>,
    pub f: Option<f64>,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub mutual_info: f64,
    pub cond_entropy: f64,
    pub ssa_value: Option<f64>,
}

impl SweepRecord {
    pub fn measure(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::MutualInformation => Some(self.mutual_info),
            Measure::ConditionalEntropy => Some(self.cond_entropy),
            Measure::StrongAdditivity => self.ssa_value,
        }
    }
}

/// Evaluates a single channel in one region.
pub fn evaluate(
    spec: &ChannelSpec,
    region: Region,
    additivity: Option<AdditivityForm>,
) -> Result<SweepRecord> {
    let joint = ordered_joint(&build_joint(spec)?, Ordering::Physical)?;
    let bob = region.modes();
    let alice_bob = [SubsystemLabel::Alice, bob[0], bob[1]];
    let s_a = marginal_entropy(&joint, &[SubsystemLabel::Alice])?;
    let s_b = marginal_entropy(&joint, &bob)?;
    let s_ab = marginal_entropy(&joint, &alice_bob)?;
    let ssa_value = match additivity {
        Some(form) => Some(additivity_terms(&joint, &TripartiteSplit::alice_wedges())?.value(form)),
        None => None,
    };
    let werner = spec.family() == Family::Werner;
    Ok(SweepRecord {
        family: spec.family(),
        region,
        gamma: spec.accel().gamma(),
        q_r: spec.accel().q_r(),
        alpha: (!werner).then_some(spec.alpha()),
        f: spec.fidelity(),
        s_a,
        s_b,
        s_ab,
        mutual_info: s_a + s_b - s_ab,
        cond_entropy: s_ab - s_b,
        ssa_value,
    })
}

fn evaluate_point(spec: &SweepSpec, p: &GridPoint) -> Result<SweepRecord> {
    let accel = AccelerationParams::new(p.gamma, p.q_r)?;
    let channel = ChannelSpec::from_parts(p.family, spec.alpha, p.f, accel)?;
    evaluate(
        &channel,
        p.region,
        spec.wants_additivity().then_some(spec.additivity),
    )
}

/// Runs a sweep on rayon's global pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    collect_in_order(spec, spec.points().par_iter().map(|p| evaluate_point(spec, p)).collect())
}

/// Runs a sweep on a dedicated pool of `threads` workers; `0` means
/// rayon's default. Output is identical for every thread count.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<Vec<SweepRecord>> {
    if threads == 0 {
        return run_sweep(spec);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Sweep(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(spec))
}

fn collect_in_order(
    spec: &SweepSpec,
    results: Vec<Result<SweepRecord>>,
) -> Result<Vec<SweepRecord>> {
    let points = spec.points();
    results
        .into_iter()
        .zip(points)
        .map(|(r, p)| {
            r.map_err(|e| Error::GridPoint {
                point: p.to_string(),
                source: Box::new(e),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn slug(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    /// The quantity each figure plots.
    pub fn measure(self) -> Measure {
        match self {
            Figure::Fig1 | Figure::Fig2 => Measure::MutualInformation,
            Figure::Fig3 => Measure::ConditionalEntropy,
            Figure::Fig4 => Measure::StrongAdditivity,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

/// `q_r` values of the mutual-information and conditional-entropy figures.
pub const CHANNEL_Q_R_GRID: [f64; 4] = [1.0, 0.9, 0.8, FRAC_1_SQRT_2];
/// `q_r` values of the strong-additivity figure.
pub const WERNER_Q_R_GRID: [f64; 4] = [1.0, 0.75, 0.5, 0.25];
/// Werner fidelities of the strong-additivity figure.
pub const WERNER_F_GRID: [f64; 4] = [0.95, 0.70, 0.50, 0.33];

pub fn figure_preset(which: Figure) -> SweepSpec {
    use Family::*;
    let (families, q_r_grid, f_grid, regions) = match which {
        Figure::Fig1 => (
            vec![QuantumSingleRail, QuantumDualRail],
            CHANNEL_Q_R_GRID.to_vec(),
            Vec::new(),
            Region::ALL.to_vec(),
        ),
        Figure::Fig2 => (
            vec![ClassicalSingleRail, ClassicalDualRail],
            CHANNEL_Q_R_GRID.to_vec(),
            Vec::new(),
            Region::ALL.to_vec(),
        ),
        Figure::Fig3 => (
            vec![
                ClassicalSingleRail,
                ClassicalDualRail,
                QuantumSingleRail,
                QuantumDualRail,
            ],
            CHANNEL_Q_R_GRID.to_vec(),
            Vec::new(),
            Region::ALL.to_vec(),
        ),
        Figure::Fig4 => (
            vec![Werner],
            WERNER_Q_R_GRID.to_vec(),
            WERNER_F_GRID.to_vec(),
            vec![Region::BobI],
        ),
    };
    SweepSpec {
        families,
        gamma_grid: uniform_grid(0.0, FRAC_PI_4, DEFAULT_GAMMA_POINTS),
        q_r_grid,
        alpha: FRAC_PI_4,
        f_grid,
        regions,
        measures: vec![which.measure()],
        additivity: AdditivityForm::ConditionalSum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_point(region: Region) -> SweepSpec {
        SweepSpec {
            families: vec![Family::QuantumSingleRail],
            gamma_grid: vec![0.0],
            q_r_grid: vec![1.0],
            alpha: FRAC_PI_4,
            f_grid: Vec::new(),
            regions: vec![region],
            measures: vec![Measure::MutualInformation, Measure::ConditionalEntropy],
            additivity: AdditivityForm::ConditionalSum,
        }
    }

    #[test]
    fn singleton_grid_bob_i() {
        let recs = run_sweep(&single_point(Region::BobI)).unwrap();
        assert_eq!(recs.len(), 1);
        assert!((recs[0].mutual_info - 2.0).abs() < 1e-9);
        assert!((recs[0].cond_entropy + 1.0).abs() < 1e-9);
        assert_eq!(recs[0].ssa_value, None);
    }

    #[test]
    fn singleton_grid_bob_ii() {
        let recs = run_sweep(&single_point(Region::BobII)).unwrap();
        assert!(recs[0].mutual_info.abs() < 1e-9);
    }

    #[test]
    fn fig1a_record_count() {
        let mut spec = figure_preset(Figure::Fig1);
        spec.regions = vec![Region::BobI];
        assert_eq!(run_sweep(&spec).unwrap().len(), 808);
    }

    #[test]
    fn presets_follow_captions() {
        let fig4 = figure_preset(Figure::Fig4);
        assert_eq!(fig4.f_grid, vec![0.95, 0.70, 0.50, 0.33]);
        assert_eq!(fig4.q_r_grid, vec![1.0, 0.75, 0.5, 0.25]);
        for fig in Figure::ALL {
            let spec = figure_preset(fig);
            assert_eq!(spec.alpha, FRAC_PI_4);
            assert_eq!(spec.gamma_grid.len(), 101);
            assert_eq!(spec.gamma_grid[0], 0.0);
            assert_eq!(*spec.gamma_grid.last().unwrap(), FRAC_PI_4);
            spec.validate().unwrap();
        }
        assert_eq!(figure_preset(Figure::Fig1).q_r_grid, CHANNEL_Q_R_GRID.to_vec());
    }

    #[test]
    fn record_order_is_canonical() {
        let mut spec = figure_preset(Figure::Fig4);
        spec.gamma_grid = vec![0.0, 0.5];
        spec.q_r_grid = vec![1.0, 0.5];
        spec.f_grid = vec![0.9, 0.3];
        let recs = run_sweep(&spec).unwrap();
        let keys: Vec<(f64, f64, f64)> = recs.iter().map(|r| (r.gamma, r.q_r, r.f.unwrap())).collect();
        assert_eq!(
            keys,
            vec![
                (0.0, 1.0, 0.9),
                (0.0, 1.0, 0.3),
                (0.0, 0.5, 0.9),
                (0.0, 0.5, 0.3),
                (0.5, 1.0, 0.9),
                (0.5, 1.0, 0.3),
                (0.5, 0.5, 0.9),
                (0.5, 0.5, 0.3),
            ]
        );
        assert!(recs.iter().all(|r| r.ssa_value.is_some() && r.alpha.is_none()));
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let mut spec = single_point(Region::BobI);
        spec.gamma_grid = vec![0.2, 0.1, 0.3];
        assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
        spec.gamma_grid = vec![];
        assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
        spec.gamma_grid = vec![0.0];
        spec.q_r_grid = vec![1.5];
        assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
        spec.q_r_grid = vec![1.0];
        spec.families = vec![Family::Werner];
        assert!(matches!(run_sweep(&spec), Err(Error::Sweep(_))));
    }

    #[test]
    fn uniform_grid_ends_exactly() {
        let g = uniform_grid(0.0, FRAC_PI_4, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[100], FRAC_PI_4);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(uniform_grid(0.3, 1.0, 1), vec![0.3]);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut spec = figure_preset(Figure::Fig3);
        spec.gamma_grid = uniform_grid(0.0, FRAC_PI_4, 7);
        let one = run_sweep_with_threads(&spec, 1).unwrap();
        let four = run_sweep_with_threads(&spec, 4).unwrap();
        assert_eq!(one, four);
    }
}
