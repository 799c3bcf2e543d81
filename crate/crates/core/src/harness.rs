//! Randomised consistency harness: simulate random minimal systems, run the
//! invariants, the informativity tests and identification on the data, and
//! count every outcome that contradicts the theory.
//!
//! Trial `i` draws from its own ChaCha stream (`seed`, stream `i`), so the
//! report does not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::identification::identify_minimal;
use crate::informativity::{check_fundamental_lemma_with, check_main_with};
use crate::invariants::{delta, invariants, PriorBounds};
use crate::numerics::{left_kernel, normalize_columns, Mat, Tolerance, Vector};
use crate::perturb::{perturb_explaining, PerturbationSpec};
use crate::system::IsoSystem;
use crate::trajectory::{build_j, IOTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeCaps {
    pub max_n: usize,
    pub max_m: usize,
    pub max_p: usize,
    pub max_t: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps {
            max_n: 5,
            max_m: 3,
            max_p: 3,
            max_t: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    /// `ρ_k(true) < δ_k` for some `k`
    pub rho_below_delta: usize,
    /// `q > ℓ_true` although `T >= ℓ_true + 1`
    pub lag_exceeds_true: usize,
    /// `n_true < n_min` or `n_true - n_min < ℓ_true - q`
    pub state_bound: usize,
    /// identification errored or its output broke a postcondition
    pub identification: usize,
    /// informative, but `(ℓ_min, n_min) != (ℓ_true, n_true)`
    pub informative_wrong_order: usize,
    /// informative, but the identified system is not isomorphic to the true one
    pub informative_not_isomorphic: usize,
    /// persistency-of-excitation test concluded, main test did not
    pub pe_without_main: usize,
    /// a constructed second explaining system failed to explain the data
    pub witness_failed: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.rho_below_delta
            + self.lag_exceeds_true
            + self.state_bound
            + self.identification
            + self.informative_wrong_order
            + self.informative_not_isomorphic
            + self.pe_without_main
            + self.witness_failed
    }

    fn add(&mut self, o: &Violations) {
        self.rho_below_delta += o.rho_below_delta;
        self.lag_exceeds_true += o.lag_exceeds_true;
        self.state_bound += o.state_bound;
        self.identification += o.identification;
        self.informative_wrong_order += o.informative_wrong_order;
        self.informative_not_isomorphic += o.informative_not_isomorphic;
        self.pe_without_main += o.pe_without_main;
        self.witness_failed += o.witness_failed;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    pub informative: usize,
    pub pe_concluded: usize,
    pub witness_attempted: usize,
    /// Rank condition failed but no second system could be built
    /// (`lk J_d(x)` trivial).
    pub witness_unavailable: usize,
    /// No minimal system found by rejection sampling.
    pub skipped: usize,
}

impl TrialStats {
    fn add(&mut self, o: &TrialStats) {
        self.informative += o.informative;
        self.pe_concluded += o.pe_concluded;
        self.witness_attempted += o.witness_attempted;
        self.witness_unavailable += o.witness_unavailable;
        self.skipped += o.skipped;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub trials: usize,
    pub violations: Violations,
    pub seed: u64,
    pub caps: SizeCaps,
    pub stats: TrialStats,
}

const MAX_SAMPLING_ATTEMPTS: usize = 200;

fn uniform_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.random_range(-1.0..=1.0))
}

fn normal_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Entries uniform in `[-1, 1]`, rejected until observable and controllable.
pub fn random_minimal_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    p: usize,
    tol: &Tolerance,
) -> Option<IsoSystem> {
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let a = uniform_mat(rng, n, n);
        let b = uniform_mat(rng, n, m);
        let c = uniform_mat(rng, p, n);
        let d = uniform_mat(rng, p, m);
        let sys = IsoSystem::new(a, b, c, d).expect("shapes are consistent");
        if sys.is_minimal(tol) {
            return Some(sys);
        }
    }
    None
}

struct TrialOutcome {
    violations: Violations,
    stats: TrialStats,
}

fn run_trial(seed: u64, index: usize, caps: &SizeCaps, tol: &Tolerance) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut v = Violations::default();
    let mut s = TrialStats::default();

    let n = rng.random_range(1..=caps.max_n.max(1));
    let m = rng.random_range(1..=caps.max_m.max(1));
    let p = rng.random_range(1..=caps.max_p.max(1));
    let t = rng.random_range(1..=caps.max_t.max(1));
    let Some(sys) = random_minimal_system(&mut rng, n, m, p, tol) else {
        s.skipped = 1;
        return TrialOutcome { violations: v, stats: s };
    };
    let u = normal_mat(&mut rng, m, t);
    let x0 = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let (y, _) = sys.simulate(&x0, &u).expect("dimensions match");
    let Ok(traj) = IOTrajectory::new(u, y) else {
        s.skipped = 1;
        return TrialOutcome { violations: v, stats: s };
    };

    let l_true = sys.lag(tol);
    let l_plus = l_true + rng.random_range(0..=1);
    let n_plus = n.max(l_plus) + rng.random_range(0..=1);
    let l_minus = rng.random_range(0..=l_true);
    let n_minus = rng.random_range(l_minus..=n);
    let bounds = PriorBounds::new(l_minus, l_plus, n_minus, n_plus).expect("bounds are ordered");

    let inv = invariants(&traj, tol);
    let rho = sys.lag_structure(tol);
    for k in 0..t {
        let dk = delta(&traj, k, tol).expect("k < T");
        if rho.get(k as isize) < dk {
            v.rho_below_delta += 1;
            break;
        }
    }
    if t > l_true && inv.q > l_true {
        v.lag_exceeds_true += 1;
    }
    if n < inv.n_min || (n - inv.n_min) < l_true.saturating_sub(inv.q) {
        v.state_bound += 1;
    }

    let identified = identify_minimal(&traj, tol).ok();
    if identified.is_none() {
        v.identification += 1;
    }

    let verdict = check_main_with(&traj, &inv, &bounds, tol);
    if verdict.informative {
        s.informative += 1;
        if inv.l_min != l_true || inv.n_min != n {
            v.informative_wrong_order += 1;
        }
        let iso = identified
            .as_ref()
            .and_then(|r| sys.is_isomorphic(&r.system, tol).ok())
            .is_some_and(|i| i.isomorphic);
        if !iso {
            v.informative_not_isomorphic += 1;
        }
    }

    let pe = check_fundamental_lemma_with(&traj, &inv, &bounds, tol);
    if pe.concluded_informative {
        s.pe_concluded += 1;
        if !verdict.informative {
            v.pe_without_main += 1;
        }
    }

    let rank_only_failure =
        !verdict.informative && verdict.lag_lb && verdict.state_lb && verdict.length && !verdict.rank;
    if let (true, Some(res)) = (rank_only_failure, identified.as_ref()) {
        match second_explaining_system(&traj, res.system.clone(), &res.state, tol) {
            Some(ok) => {
                s.witness_attempted += 1;
                if !ok {
                    v.witness_failed += 1;
                }
            }
            None => s.witness_unavailable += 1,
        }
    }
    TrialOutcome { violations: v, stats: s }
}

/// Perturb `sys` along a nonzero annihilator of `J_d(x)`. Returns whether
/// the result explains the data, or `None` when no perturbation applies.
fn second_explaining_system(
    traj: &IOTrajectory,
    sys: IsoSystem,
    x: &crate::trajectory::StateTrajectory,
    tol: &Tolerance,
) -> Option<bool> {
    let lag = sys.lag(tol);
    if lag == 0 {
        return None;
    }
    let d = lag.min(traj.len() - 1);
    let j = normalize_columns(&build_j(x, traj, d).ok()?);
    let lk = left_kernel(&j, tol).ok()?;
    if lk.dim() == 0 {
        return None;
    }
    let n = sys.n();
    let zeta = if lag >= 2 {
        let omega = sys.observability_matrix(lag as isize - 2);
        let right = left_kernel(&omega.transpose(), tol).ok()?;
        if right.dim() == 0 {
            return None;
        }
        right.basis().row(0).transpose()
    } else {
        let mut e = Vector::zeros(n);
        e[0] = 1.0;
        e
    };
    let row = lk.basis().rows(0, 1).into_owned();
    let spec = PerturbationSpec::from_annihilator(&row, n, sys.m(), zeta).ok()?;
    match perturb_explaining(&sys, x, &spec, traj, tol) {
        Ok(out) => Some(
            out.system
                .explains(traj, tol)
                .map(|e| e.explains)
                .unwrap_or(false)
                && out.system.lag(tol) == lag,
        ),
        Err(_) => Some(false),
    }
}

pub fn harness(trials: usize, caps: SizeCaps, seed: u64, tol: &Tolerance) -> HarnessReport {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(seed, i, &caps, tol))
        .collect();
    let mut violations = Violations::default();
    let mut stats = TrialStats::default();
    for o in &outcomes {
        violations.add(&o.violations);
        stats.add(&o.stats);
    }
    HarnessReport {
        trials,
        violations,
        seed,
        caps,
        stats,
    }
}
