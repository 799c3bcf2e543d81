//! Decide whether the data pin down the true system up to a change of state
//! coordinates, given prior bounds on its lag and state dimension.

use serde::Serialize;

use crate::invariants::{invariants, lag_bounds, DataInvariants, LagBounds, PriorBounds};
use crate::numerics::{normalize_columns, rank_unchecked, Tolerance};
use crate::trajectory::{build_h, hankel, IOTrajectory};

/// Outcome of the necessary-and-sufficient test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InformativityVerdict {
    pub informative: bool,
    /// `ℓ_min >= L_-`
    pub lag_lb: bool,
    /// `n_min >= N_-`
    pub state_lb: bool,
    /// `T >= L_a + (L_a + 1) m + n_min`
    pub length: bool,
    /// `rank H_{L_a} = (L_a + 1) m + n_min`
    pub rank: bool,
    pub lag_bounds: LagBounds,
    pub invariants: DataInvariants,
    pub predicted_true_lag: Option<usize>,
    pub predicted_true_dim: Option<usize>,
}

pub fn check_main(traj: &IOTrajectory, bounds: &PriorBounds, tol: &Tolerance) -> InformativityVerdict {
    let inv = invariants(traj, tol);
    check_main_with(traj, &inv, bounds, tol)
}

pub(crate) fn check_main_with(
    traj: &IOTrajectory,
    inv: &DataInvariants,
    bounds: &PriorBounds,
    tol: &Tolerance,
) -> InformativityVerdict {
    let lb = lag_bounds(inv, bounds);
    let (m, t) = (traj.m() as i64, traj.len() as i64);
    let lag_lb = inv.l_min >= bounds.l_minus;
    let state_lb = inv.n_min >= bounds.n_minus;
    let (length, rank) = if lb.l_a < 0 {
        // More states needed than N_+ allows.
        (false, false)
    } else {
        let need = (lb.l_a + 1) * m + inv.n_min as i64;
        let length = t >= lb.l_a + need;
        let rank = lb.l_a < t
            && build_h(traj, lb.l_a as usize)
                .map(|h| rank_unchecked(&normalize_columns(&h), tol) as i64 == need)
                .unwrap_or(false);
        (length, rank)
    };
    let informative = lag_lb && state_lb && length && rank;
    InformativityVerdict {
        informative,
        lag_lb,
        state_lb,
        length,
        rank,
        lag_bounds: lb,
        invariants: inv.clone(),
        predicted_true_lag: informative.then_some(inv.l_min),
        predicted_true_dim: informative.then_some(inv.n_min),
    }
}

/// Outcome of the persistency-of-excitation sufficient test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PELemmaVerdict {
    /// `ℓ_min >= 1`, which implies the required `ℓ_true >= 1`.
    pub applicable: bool,
    /// Input Hankel matrix of depth `L_+ + N_+` has full row rank. `false`
    /// when not evaluated because the data are too short.
    pub pe_ok: bool,
    pub length_ok: bool,
    pub concluded_informative: bool,
}

pub fn check_fundamental_lemma(
    traj: &IOTrajectory,
    bounds: &PriorBounds,
    tol: &Tolerance,
) -> PELemmaVerdict {
    let inv = invariants(traj, tol);
    check_fundamental_lemma_with(traj, &inv, bounds, tol)
}

pub(crate) fn check_fundamental_lemma_with(
    traj: &IOTrajectory,
    inv: &DataInvariants,
    bounds: &PriorBounds,
    tol: &Tolerance,
) -> PELemmaVerdict {
    let (m, t) = (traj.m(), traj.len());
    let order = bounds.l_plus + bounds.n_plus;
    let applicable = inv.l_min >= 1;
    let length_ok = order >= 1 && t + 1 >= order + order * m;
    let pe_ok = length_ok
        && hankel(traj.u(), order - 1)
            .map(|h| rank_unchecked(&normalize_columns(&h), tol) == order * m)
            .unwrap_or(false);
    PELemmaVerdict {
        applicable,
        pe_ok,
        length_ok,
        concluded_informative: applicable && pe_ok && length_ok,
    }
}

/// Test for a hypothesised exact order `(l_true, n_true)` with `l_true >= 1`.
pub fn check_fixed_order(traj: &IOTrajectory, l_true: usize, n_true: usize, tol: &Tolerance) -> bool {
    let (m, t) = (traj.m(), traj.len());
    if l_true == 0 {
        return false;
    }
    let need = (l_true + 1) * m + n_true;
    if t < l_true + need {
        return false;
    }
    build_h(traj, l_true)
        .map(|h| rank_unchecked(&normalize_columns(&h), tol) == need)
        .unwrap_or(false)
}
