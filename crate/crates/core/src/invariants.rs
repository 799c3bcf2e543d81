//! Integers determined by the data alone: `δ_k = rank H_k - rank G_k`, the
//! first index `q` with `δ_q = 0`, the shortest achievable lag and the
//! minimum number of states of any explaining system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{normalize_columns, rank_unchecked, Tolerance};
use crate::trajectory::{build_g, build_h, IOTrajectory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DataInvariants {
    /// `δ_{-1}, δ_0, ..., δ_q`
    pub delta: Vec<usize>,
    pub q: usize,
    pub l_min: usize,
    pub n_min: usize,
}

impl DataInvariants {
    /// `δ_k` for `k in [-1, q]`, zero beyond `q`.
    pub fn delta_at(&self, k: isize) -> usize {
        self.delta.get((k + 1) as usize).copied().unwrap_or(0)
    }
}

/// `δ_k` for a single `k in [0, T-1]`. Ranks are taken after scaling each
/// window column to unit norm.
pub fn delta(traj: &IOTrajectory, k: usize, tol: &Tolerance) -> Result<usize> {
    let rh = rank_unchecked(&normalize_columns(&build_h(traj, k)?), tol);
    let rg = rank_unchecked(&normalize_columns(&build_g(traj, k)?), tol);
    Ok(rh.saturating_sub(rg))
}

/// `δ_{-1}, ..., δ_{up_to}`; `up_to = -1` yields just `[p]`.
pub fn delta_sequence(traj: &IOTrajectory, tol: &Tolerance, up_to: isize) -> Result<Vec<usize>> {
    if up_to < -1 || up_to >= traj.len() as isize {
        return Err(Error::InvalidDepth {
            k: up_to.max(0) as usize,
            len: traj.len(),
        });
    }
    let mut out = vec![traj.p()];
    for k in 0..=up_to {
        out.push(delta(traj, k as usize, tol)?);
    }
    Ok(out)
}

pub fn invariants(traj: &IOTrajectory, tol: &Tolerance) -> DataInvariants {
    let mut deltas = vec![traj.p()];
    let mut q = traj.len() - 1;
    for k in 0..traj.len() {
        let dk = delta(traj, k, tol).expect("k is within [0, T-1]");
        deltas.push(dk);
        if dk == 0 {
            q = k;
            break;
        }
    }
    let n_min = deltas[1..].iter().sum();
    DataInvariants {
        delta: deltas,
        q,
        l_min: q,
        n_min,
    }
}

/// Prior bounds `L_- <= l_true <= L_+ <= N_+`, `L_- <= N_- <= n_true <= N_+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PriorBounds {
    pub l_minus: usize,
    pub l_plus: usize,
    pub n_minus: usize,
    pub n_plus: usize,
}

impl PriorBounds {
    pub fn new(l_minus: usize, l_plus: usize, n_minus: usize, n_plus: usize) -> Result<Self> {
        if !(l_minus <= l_plus && l_plus <= n_plus && l_minus <= n_minus && n_minus <= n_plus) {
            return Err(Error::InvalidBounds(format!(
                "need L- <= L+ <= N+ and L- <= N- <= N+, got \
                 (L-, L+, N-, N+) = ({l_minus}, {l_plus}, {n_minus}, {n_plus})"
            )));
        }
        Ok(PriorBounds {
            l_minus,
            l_plus,
            n_minus,
            n_plus,
        })
    }

    /// Upper bounds only, lower bounds zero.
    pub fn upper(l_plus: usize, n_plus: usize) -> Result<Self> {
        PriorBounds::new(0, l_plus, 0, n_plus)
    }
}

/// Data-sharpened lag bounds. Signed: `l_d` goes negative when the data
/// need more than `N_+` states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LagBounds {
    pub l_d: i64,
    pub l_a: i64,
}

pub fn lag_bounds(inv: &DataInvariants, bounds: &PriorBounds) -> LagBounds {
    let l_d = bounds.n_plus as i64 - inv.n_min as i64 + inv.l_min as i64;
    LagBounds {
        l_d,
        l_a: l_d.min(bounds.l_plus as i64),
    }
}
