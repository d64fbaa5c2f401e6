//! Hellinger distance between walk distributions and the derivative-free
//! search for the simultaneous-evolution angles that track a target walk.
//!
//! The objective of a candidate `(u1, u2)` is the Hellinger distance between
//! the target walk's phase distribution and the simultaneous evolution's,
//! averaged over the first `l0` steps. The target trajectory is computed once
//! and cached; each candidate only pays for its own trajectory.
//!
//! The search is a multistart Nelder-Mead simplex inside a box. Start points
//! are scrambled from a seeded generator, every evaluation is tracked so the
//! returned optimum is never worse than any point visited, and ties between
//! starts are broken lexicographically so results are reproducible bit for
//! bit under any thread schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_pure, phase_distribution, PhaseDistribution};
use crate::error::{Error, Result};
use crate::operators::{build_dtqw, build_scs, ScsParams, StateVector, WalkConfig};
use crate::tol;

/// Hellinger distance `(1/sqrt(2)) ||sqrt(p) - sqrt(q)||_2`, in `[0, 1]`.
pub fn hellinger(p: &PhaseDistribution, q: &PhaseDistribution) -> Result<f64> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch { expected: p.d(), got: q.d() });
    }
    let sum: f64 = p
        .probabilities()
        .iter()
        .zip(q.probabilities())
        .map(|(&a, &b)| {
            let diff = a.sqrt() - b.sqrt();
            diff * diff
        })
        .sum();
    Ok((sum / 2.0).sqrt())
}

/// Trajectory-averaged Hellinger objective with the target cached.
pub struct HellingerObjective {
    d: usize,
    l0: usize,
    psi0: StateVector,
    target: Vec<PhaseDistribution>,
}

impl HellingerObjective {
    /// Cache the target walk's distributions for steps `1..=l0`.
    pub fn new(target_theta: f64, d: usize, l0: usize, psi0: &StateVector) -> Result<Self> {
        if l0 < 1 {
            return Err(Error::InvalidConfig("horizon l0 must be >= 1".into()));
        }
        if psi0.d() != d {
            return Err(Error::DimensionMismatch { expected: d, got: psi0.d() });
        }
        let walk = build_dtqw(&WalkConfig { d, theta: target_theta });
        let trajectory = evolve_pure(&walk, psi0, l0)?;
        let target = trajectory[1..].iter().map(phase_distribution).collect();
        Ok(Self { d, l0, psi0: psi0.clone(), target })
    }

    /// Mean Hellinger distance over the horizon for one candidate.
    pub fn eval(&self, params: &ScsParams) -> f64 {
        let u = build_scs(self.d, params);
        let mut psi = self.psi0.amplitudes().clone();
        let mut total = 0.0;
        for dist in &self.target {
            psi = &u * psi;
            let candidate = phase_distribution(&StateVector::from_unchecked(self.d, psi.clone()));
            total += hellinger(dist, &candidate).expect("cached target has matching dimension");
        }
        total / self.l0 as f64
    }
}

/// Mean Hellinger distance between the target walk at `target_theta` and the
/// simultaneous evolution at `params`, over steps `1..=l0` from `psi0`.
pub fn objective(
    params: &ScsParams,
    target_theta: f64,
    d: usize,
    l0: usize,
    psi0: &StateVector,
) -> Result<f64> {
    Ok(HellingerObjective::new(target_theta, d, l0, psi0)?.eval(params))
}

/// Box, budget and seeding of the multistart simplex search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Inclusive search interval for `u1` (rad).
    pub u1_range: (f64, f64),
    /// Inclusive search interval for `u2` (rad).
    pub u2_range: (f64, f64),
    /// Number of scrambled start points.
    pub multistarts: usize,
    /// Simplex-diameter stopping threshold (rad).
    pub simplex_tolerance: f64,
    /// Total evaluation budget, split evenly across starts.
    pub max_evaluations: usize,
    /// Seed for start-point scrambling.
    pub seed: u64,
}

impl OptimizerConfig {
    /// Defaults for a `d`-site problem: `u1` in `[0, 4 pi / d]`, `u2` in
    /// `[0, 6 pi]`, 16 starts. The box is sized so the useful per-site
    /// rotations (around `2 pi / d`) sit inside, and `u2` well past `2 pi`
    /// because the coupled rotation angle is not periodic in `u2`.
    pub fn for_sites(d: usize) -> Self {
        Self {
            u1_range: (0.0, 4.0 * std::f64::consts::PI / d as f64),
            u2_range: (0.0, 6.0 * std::f64::consts::PI),
            multistarts: 16,
            simplex_tolerance: 1e-6,
            max_evaluations: 6400,
            seed: 17,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok_range = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !ok_range(self.u1_range) || !ok_range(self.u2_range) {
            return Err(Error::InvalidConfig("search box must be nonempty".into()));
        }
        if self.u1_range.0 < 0.0 || self.u2_range.0 < 0.0 {
            return Err(Error::InvalidConfig("search box must lie in u1, u2 >= 0".into()));
        }
        if !(self.simplex_tolerance > 0.0) {
            return Err(Error::InvalidConfig("simplex tolerance must be positive".into()));
        }
        if self.multistarts == 0 {
            return Err(Error::InvalidConfig("need at least one start point".into()));
        }
        if self.max_evaluations / self.multistarts < 6 {
            return Err(Error::InvalidConfig(
                "evaluation budget too small for the start count".into(),
            ));
        }
        Ok(())
    }
}

/// One improving iterate of the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub u1: f64,
    pub u2: f64,
    pub objective: f64,
}

/// Outcome of [`optimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub u1_opt: f64,
    pub u2_opt: f64,
    /// Objective at the optimum; equals a fresh evaluation there.
    pub objective: f64,
    /// Total objective evaluations spent.
    pub evaluations: usize,
    /// True when at least one start exhausted its evaluation slice before
    /// reaching the simplex tolerance. The best point found is still
    /// returned.
    pub exhausted: bool,
    /// Improving iterates, concatenated in start order.
    pub trace: Vec<TraceEntry>,
}

impl OptimizationResult {
    pub fn params(&self) -> ScsParams {
        ScsParams::new(self.u1_opt, self.u2_opt)
    }
}

struct RunOutcome {
    best: TraceEntry,
    evaluations: usize,
    exhausted: bool,
    improvements: Vec<TraceEntry>,
}

/// Standard reflection / expansion / contraction / shrink coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn clamp_point(p: [f64; 2], lo: [f64; 2], hi: [f64; 2]) -> [f64; 2] {
    [p[0].clamp(lo[0], hi[0]), p[1].clamp(lo[1], hi[1])]
}

fn nelder_mead(
    objective: &HellingerObjective,
    lo: [f64; 2],
    hi: [f64; 2],
    start: [f64; 2],
    tolerance: f64,
    budget: usize,
) -> RunOutcome {
    let mut evaluations = 0usize;
    let mut best = TraceEntry { u1: f64::NAN, u2: f64::NAN, objective: f64::INFINITY };
    let mut improvements = Vec::new();

    let mut eval = |point: [f64; 2], evaluations: &mut usize| -> f64 {
        let value = objective.eval(&ScsParams::new(point[0], point[1]));
        *evaluations += 1;
        if value < best.objective {
            best = TraceEntry { u1: point[0], u2: point[1], objective: value };
            improvements.push(best);
        }
        value
    };

    // Initial simplex: the start plus one step along each axis, stepping
    // inward when the start sits on the box edge.
    let mut simplex: Vec<([f64; 2], f64)> = Vec::with_capacity(3);
    let start = clamp_point(start, lo, hi);
    let f0 = eval(start, &mut evaluations);
    simplex.push((start, f0));
    for axis in 0..2 {
        let h = 0.05 * (hi[axis] - lo[axis]);
        let mut p = start;
        p[axis] = if p[axis] + h <= hi[axis] { p[axis] + h } else { p[axis] - h };
        let f = eval(p, &mut evaluations);
        simplex.push((p, f));
    }

    let mut exhausted = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                let dx = p[0] - simplex[0].0[0];
                let dy = p[1] - simplex[0].0[1];
                dx.hypot(dy)
            })
            .fold(0.0, f64::max);
        if diameter < tolerance {
            break;
        }
        if evaluations + 1 > budget {
            exhausted = true;
            break;
        }

        let centroid = [
            (simplex[0].0[0] + simplex[1].0[0]) / 2.0,
            (simplex[0].0[1] + simplex[1].0[1]) / 2.0,
        ];
        let worst = simplex[2];
        let reflect = clamp_point(
            [
                centroid[0] + REFLECT * (centroid[0] - worst.0[0]),
                centroid[1] + REFLECT * (centroid[1] - worst.0[1]),
            ],
            lo,
            hi,
        );
        let f_reflect = eval(reflect, &mut evaluations);

        if f_reflect < simplex[0].1 {
            if evaluations + 1 > budget {
                simplex[2] = (reflect, f_reflect);
                exhausted = true;
                break;
            }
            let expand = clamp_point(
                [
                    centroid[0] + EXPAND * (centroid[0] - worst.0[0]),
                    centroid[1] + EXPAND * (centroid[1] - worst.0[1]),
                ],
                lo,
                hi,
            );
            let f_expand = eval(expand, &mut evaluations);
            simplex[2] = if f_expand < f_reflect { (expand, f_expand) } else { (reflect, f_reflect) };
        } else if f_reflect < simplex[1].1 {
            simplex[2] = (reflect, f_reflect);
        } else {
            if evaluations + 1 > budget {
                exhausted = true;
                break;
            }
            let toward = if f_reflect < worst.1 { reflect } else { worst.0 };
            let contract = clamp_point(
                [
                    centroid[0] + CONTRACT * (toward[0] - centroid[0]),
                    centroid[1] + CONTRACT * (toward[1] - centroid[1]),
                ],
                lo,
                hi,
            );
            let f_contract = eval(contract, &mut evaluations);
            if f_contract < f_reflect.min(worst.1) {
                simplex[2] = (contract, f_contract);
            } else {
                if evaluations + 2 > budget {
                    exhausted = true;
                    break;
                }
                for i in 1..3 {
                    let p = [
                        simplex[0].0[0] + SHRINK * (simplex[i].0[0] - simplex[0].0[0]),
                        simplex[0].0[1] + SHRINK * (simplex[i].0[1] - simplex[0].0[1]),
                    ];
                    let f = eval(p, &mut evaluations);
                    simplex[i] = (p, f);
                }
            }
        }
    }

    RunOutcome { best, evaluations, exhausted, improvements }
}

/// Better-than predicate with the deterministic tie rule: minima within
/// [`tol::OPTIMIZER_TIE`] are resolved by smallest `(u2, u1)`.
fn wins(candidate: &TraceEntry, incumbent: &TraceEntry) -> bool {
    if candidate.objective < incumbent.objective - tol::OPTIMIZER_TIE {
        return true;
    }
    if candidate.objective > incumbent.objective + tol::OPTIMIZER_TIE {
        return false;
    }
    (candidate.u2, candidate.u1) < (incumbent.u2, incumbent.u1)
}

/// Multistart Nelder-Mead minimization of the trajectory-averaged Hellinger
/// distance over the config box. Deterministic given the seed.
pub fn optimize(
    target_theta: f64,
    d: usize,
    l0: usize,
    psi0: &StateVector,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    let objective = HellingerObjective::new(target_theta, d, l0, psi0)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<[f64; 2]> = (0..cfg.multistarts)
        .map(|_| {
            let u1 = cfg.u1_range.0 + rng.gen::<f64>() * (cfg.u1_range.1 - cfg.u1_range.0);
            let u2 = cfg.u2_range.0 + rng.gen::<f64>() * (cfg.u2_range.1 - cfg.u2_range.0);
            [u1, u2]
        })
        .collect();

    let lo = [cfg.u1_range.0, cfg.u2_range.0];
    let hi = [cfg.u1_range.1, cfg.u2_range.1];
    let per_start = cfg.max_evaluations / cfg.multistarts;

    let runs: Vec<RunOutcome> = starts
        .par_iter()
        .map(|&start| nelder_mead(&objective, lo, hi, start, cfg.simplex_tolerance, per_start))
        .collect();

    // Ordered fold keeps the outcome independent of scheduling.
    let mut best: Option<TraceEntry> = None;
    let mut evaluations = 0;
    let mut exhausted = false;
    let mut trace = Vec::new();
    for run in &runs {
        evaluations += run.evaluations;
        exhausted |= run.exhausted;
        trace.extend_from_slice(&run.improvements);
        match &best {
            Some(incumbent) if !wins(&run.best, incumbent) => {}
            _ => best = Some(run.best),
        }
    }
    let best = best.expect("at least one start");

    Ok(OptimizationResult {
        u1_opt: best.u1,
        u2_opt: best.u2,
        objective: best.objective,
        evaluations,
        exhausted,
        trace,
    })
}

/// One optimized point of the coin-angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta: f64,
    /// Optimized mean Hellinger distance at this coin angle.
    pub objective: f64,
    pub u1_opt: f64,
    pub u2_opt: f64,
    pub evaluations: usize,
    pub exhausted: bool,
}

/// Optimize the simultaneous evolution against the walk at every coin angle
/// in `grid`.
pub fn theta_sweep(
    grid: &[f64],
    d: usize,
    l0: usize,
    psi0: &StateVector,
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("theta grid must be nonempty".into()));
    }
    grid.iter()
        .map(|&theta| {
            let result = optimize(theta, d, l0, psi0, cfg)?;
            Ok(SweepPoint {
                theta,
                objective: result.objective,
                u1_opt: result.u1_opt,
                u2_opt: result.u2_opt,
                evaluations: result.evaluations,
                exhausted: result.exhausted,
            })
        })
        .collect()
}

/// Default grid of the coin-angle sweep: `pi/64` to `31 pi/64` in steps of
/// `pi/64`.
pub fn default_theta_grid() -> Vec<f64> {
    (1..=31).map(|i| i as f64 * std::f64::consts::PI / 64.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{coherent_state, CoinState};
    use crate::qmath::C64;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    fn reference_state(d: usize) -> StateVector {
        coherent_state(C64::from_polar(5.0, PI), d, CoinState::Zero)
            .unwrap()
            .state
    }

    fn dist(p: Vec<f64>) -> PhaseDistribution {
        PhaseDistribution::new(p).unwrap()
    }

    #[test]
    fn hellinger_basic_values() {
        let p = dist(vec![0.25, 0.5, 0.25]);
        assert_abs_diff_eq!(hellinger(&p, &p).unwrap(), 0.0, epsilon = 1e-15);

        let a = dist(vec![1.0, 0.0]);
        let b = dist(vec![0.0, 1.0]);
        assert_abs_diff_eq!(hellinger(&a, &b).unwrap(), 1.0, epsilon = 1e-15);

        // Closed form: sqrt(1 - 1/sqrt(2)).
        let half = dist(vec![0.5, 0.5]);
        let point = dist(vec![1.0, 0.0]);
        assert_abs_diff_eq!(
            hellinger(&half, &point).unwrap(),
            (1.0 - 0.5f64.sqrt()).sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            hellinger(&half, &point).unwrap(),
            0.541196100146197,
            epsilon = 1e-12
        );
    }

    #[test]
    fn hellinger_rejects_length_mismatch() {
        let p = dist(vec![1.0]);
        let q = dist(vec![0.5, 0.5]);
        assert!(matches!(
            hellinger(&p, &q),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn objective_zero_for_exactly_matching_dynamics() {
        // theta = 0 walk is the bare shift, which the simultaneous evolution
        // reproduces exactly at (2 pi / d, 0).
        let d = 31;
        let psi0 = reference_state(d);
        let value = objective(&ScsParams::new(TAU / d as f64, 0.0), 0.0, d, 50, &psi0).unwrap();
        assert!(value <= 1e-10, "objective {value:.2e}");
    }

    #[test]
    fn objective_at_reference_angles_matches_frozen_value() {
        let d = 31;
        let psi0 = reference_state(d);
        let reference = ScsParams::new(1.3650 * TAU / 31.0, 15.9462 * FRAC_PI_4);
        let value = objective(&reference, FRAC_PI_4, d, 50, &psi0).unwrap();
        assert_abs_diff_eq!(value, 0.215483484, epsilon = 1e-6);

        // The do-nothing candidate is far worse.
        let idle = objective(&ScsParams::new(0.0, 0.0), FRAC_PI_4, d, 50, &psi0).unwrap();
        assert!(idle > value + 0.3, "idle {idle}, reference {value}");
    }

    #[test]
    fn objective_invariant_under_global_phase() {
        let d = 11;
        let psi0 = reference_state(d);
        let rotated = psi0.with_global_phase(0.7);
        let params = ScsParams::new(0.3, 2.0);
        let a = objective(&params, FRAC_PI_4, d, 10, &psi0).unwrap();
        let b = objective(&params, FRAC_PI_4, d, 10, &rotated).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn optimize_recovers_exact_match_for_zero_coin() {
        let d = 31;
        let psi0 = reference_state(d);
        let mut cfg = OptimizerConfig::for_sites(d);
        cfg.multistarts = 6;
        cfg.max_evaluations = 1800;
        let result = optimize(0.0, d, 50, &psi0, &cfg).unwrap();
        assert!(result.objective < 1e-6, "objective {:.2e}", result.objective);
    }

    #[test]
    fn optimize_is_deterministic_and_monotone() {
        let d = 11;
        let psi0 = reference_state(d);
        let mut cfg = OptimizerConfig::for_sites(d);
        cfg.multistarts = 4;
        cfg.max_evaluations = 400;
        let a = optimize(FRAC_PI_4, d, 10, &psi0, &cfg).unwrap();
        let b = optimize(FRAC_PI_4, d, 10, &psi0, &cfg).unwrap();
        assert_eq!(a, b);

        // The result is the best of everything evaluated.
        for entry in &a.trace {
            assert!(a.objective <= entry.objective + 1e-15);
        }
        // And a fresh evaluation reproduces the reported objective.
        let fresh = objective(&a.params(), FRAC_PI_4, d, 10, &psi0).unwrap();
        assert_abs_diff_eq!(fresh, a.objective, epsilon = 1e-12);
    }

    #[test]
    fn optimize_reports_exhaustion_with_best_so_far() {
        let d = 11;
        let psi0 = reference_state(d);
        let mut cfg = OptimizerConfig::for_sites(d);
        cfg.multistarts = 2;
        cfg.max_evaluations = 16; // 8 per start: far too few to converge.
        let result = optimize(FRAC_PI_4, d, 5, &psi0, &cfg).unwrap();
        assert!(result.exhausted);
        assert!(result.objective.is_finite());
        assert!(result.evaluations <= 16);
    }

    #[test]
    fn optimizer_config_validation() {
        let mut cfg = OptimizerConfig::for_sites(31);
        assert!(cfg.validate().is_ok());
        cfg.multistarts = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = OptimizerConfig::for_sites(31);
        cfg.u2_range = (2.0, 1.0);
        assert!(cfg.validate().is_err());
        let mut cfg = OptimizerConfig::for_sites(31);
        cfg.simplex_tolerance = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn theta_sweep_rejects_empty_grid() {
        let psi0 = reference_state(5);
        let cfg = OptimizerConfig::for_sites(5);
        assert!(theta_sweep(&[], 5, 5, &psi0, &cfg).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let grid = default_theta_grid();
        assert_eq!(grid.len(), 31);
        assert_abs_diff_eq!(grid[0], PI / 64.0, epsilon = 1e-15);
        assert_abs_diff_eq!(grid[30], 31.0 * PI / 64.0, epsilon = 1e-15);
    }
}
