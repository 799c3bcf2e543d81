//! Direct construction of a minimal explaining system from input-output data.
//!
//! The left kernel of each data Hankel matrix `H_k` splits as
//!
//! ```text
//! lk H_k = σ^k S_0 ⊕ σ^{k-1} S_1 ⊕ ... ⊕ S_k ⊕ (lk G_k × 0_p)
//! ```
//!
//! where `σ` pads a depth-`k` annihilator into a depth-`k+1` one. The
//! subspaces `S_i` (for `i <= q`) form the annihilator ladder. Each basis
//! row of `S_i` is a relation
//! `Σ_j Q_{i,j} u_{t+j} + P_{i,j} y_{t+j} = 0`, and running those relations
//! as partial sums yields a state sequence with `n_min` rows. The system
//! matrices then follow from one least-squares solve.

use crate::error::{Error, Result};
use crate::invariants::{invariants, DataInvariants};
use crate::numerics::{
    column_scaled_residual, complement_in, left_kernel, lstsq_rows, max_abs, normalize_columns, rank_unchecked, sigma_shift, subspace_sum,
    vstack, Mat, RowSubspace, Tolerance,
};
use crate::system::IsoSystem;
use crate::trajectory::{build_g, build_h, IOTrajectory, StateTrajectory};

/// Bases `R_0, ..., R_q` of the ladder subspaces. Row block layout of `R_i`
/// is `[Q_{i,0} .. Q_{i,i} | P_{i,0} .. P_{i,i}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorLadder {
    m: usize,
    p: usize,
    bases: Vec<Mat>,
}

impl AnnihilatorLadder {
    /// Wrap caller-chosen bases after checking them against the data: every
    /// `R_i` annihilates `H_i`, `dim S_i = δ_{i-1} - δ_i`, the shifted bases
    /// together with `lk G_q × 0_p` span `lk H_q`, and `Π` is nonsingular.
    pub fn from_bases(traj: &IOTrajectory, bases: Vec<Mat>, tol: &Tolerance) -> Result<Self> {
        let (m, p) = (traj.m(), traj.p());
        for (i, r) in bases.iter().enumerate() {
            if r.ncols() != (i + 1) * (m + p) {
                return Err(Error::InvalidShape(format!(
                    "R_{i} has {} columns, expected {}",
                    r.ncols(),
                    (i + 1) * (m + p)
                )));
            }
        }
        if bases.is_empty() {
            return Err(Error::InvalidInput("ladder needs at least R_0".into()));
        }
        let ladder = AnnihilatorLadder { m, p, bases };
        let inv = invariants(traj, tol);
        if inv.q != ladder.q() {
            return Err(Error::InvalidInput(format!(
                "ladder has depth {} but the data give q = {}",
                ladder.q(),
                inv.q
            )));
        }
        ladder.validate(traj, &inv, tol)?;
        Ok(ladder)
    }

    pub fn q(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn bases(&self) -> &[Mat] {
        &self.bases
    }

    /// `s_i = dim S_i`
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|r| r.nrows()).collect()
    }

    pub fn q_block(&self, i: usize, j: usize) -> Mat {
        self.bases[i].columns(j * self.m, self.m).into_owned()
    }

    pub fn p_block(&self, i: usize, j: usize) -> Mat {
        self.bases[i]
            .columns((i + 1) * self.m + j * self.p, self.p)
            .into_owned()
    }

    /// `Π = col(P_{0,0}, P_{1,1}, ..., P_{q,q})`, a `p x p` matrix.
    pub fn pi(&self) -> Mat {
        let blocks: Vec<Mat> = (0..=self.q()).map(|i| self.p_block(i, i)).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        vstack(&refs, self.p)
    }

    /// `σ^{q-i} R_i` stacked for `i in [0, q]`.
    pub fn shifted_stack(&self) -> Mat {
        let width = (self.q() + 1) * (self.m + self.p);
        let mut rows = Vec::new();
        for (i, r) in self.bases.iter().enumerate() {
            let shift = self.q() - i;
            let mut out = Mat::zeros(r.nrows(), width);
            let mw = (i + 1) * self.m;
            let u_off = shift * self.m;
            let y_off = (self.q() + 1) * self.m + shift * self.p;
            out.view_mut((0, u_off), (r.nrows(), mw))
                .copy_from(&r.columns(0, mw));
            out.view_mut((0, y_off), (r.nrows(), (i + 1) * self.p))
                .copy_from(&r.columns(mw, (i + 1) * self.p));
            rows.push(out);
        }
        let refs: Vec<&Mat> = rows.iter().collect();
        vstack(&refs, width)
    }

    fn validate(&self, traj: &IOTrajectory, inv: &DataInvariants, tol: &Tolerance) -> Result<()> {
        for (i, r) in self.bases.iter().enumerate() {
            let expected = inv.delta_at(i as isize - 1) - inv.delta_at(i as isize);
            if r.nrows() != expected {
                return Err(Error::InternalInvariantViolated(format!(
                    "dim S_{i} = {} but δ_{} - δ_{i} = {expected}",
                    r.nrows(),
                    i as isize - 1
                )));
            }
            let h = normalize_columns(&build_h(traj, i)?);
            let res = max_abs(&(r * &h));
            if res > tol.residual_abs {
                return Err(Error::InternalInvariantViolated(format!(
                    "R_{i} does not annihilate H_{i} (residual {res:.3e})"
                )));
            }
        }
        let total: usize = self.dims().iter().sum();
        if total != self.p {
            return Err(Error::InternalInvariantViolated(format!(
                "ladder dimensions sum to {total}, expected p = {}",
                self.p
            )));
        }

        let q = self.q();
        let lkh = left_kernel(&normalize_columns(&build_h(traj, q)?), tol)?;
        let lkg = left_kernel(&normalize_columns(&build_g(traj, q)?), tol)?.pad_zeros(self.p);
        let stack = vstack(&[&self.shifted_stack(), lkg.basis()], lkh.ambient_dim());
        let span = rank_unchecked(&stack, tol);
        if span != lkh.dim() || stack.nrows() != lkh.dim() {
            return Err(Error::InternalInvariantViolated(format!(
                "shifted ladder and lk G_{q} span dimension {span} with {} vectors, \
                 lk H_{q} has dimension {}",
                stack.nrows(),
                lkh.dim()
            )));
        }

        let pi = self.pi();
        if rank_unchecked(&pi, tol) != self.p {
            return Err(Error::InternalInvariantViolated("Π is singular".into()));
        }
        Ok(())
    }
}

/// Build `S_0, ..., S_q` as orthogonal complements:
/// `S_0` of `lk G_0 × 0_p` in `lk H_0`, and for `k >= 1`, `S_k` of
/// `σ lk H_{k-1} + lk G_k × 0_p` in `lk H_k`.
pub fn build_ladder(traj: &IOTrajectory, tol: &Tolerance) -> Result<AnnihilatorLadder> {
    let (m, p) = (traj.m(), traj.p());
    let inv = invariants(traj, tol);
    let mut bases = Vec::with_capacity(inv.q + 1);
    let mut prev_lkh: Option<RowSubspace> = None;
    for k in 0..=inv.q {
        let lkh = left_kernel(&normalize_columns(&build_h(traj, k)?), tol)?;
        let lkg = left_kernel(&normalize_columns(&build_g(traj, k)?), tol)?.pad_zeros(p);
        let inner = match prev_lkh {
            None => lkg,
            Some(prev) => subspace_sum(&sigma_shift(&prev, m, p)?, &lkg, tol)?,
        };
        let s_k = complement_in(&inner, &lkh, tol)
            .map_err(|e| Error::InternalInvariantViolated(format!("S_{k}: {e}")))?;
        bases.push(s_k.into_basis());
        prev_lkh = Some(lkh);
    }
    let ladder = AnnihilatorLadder { m, p, bases };
    ladder.validate(traj, &inv, tol)?;
    Ok(ladder)
}

/// `X` with `target ≈ X regressor`, both sides weighted per column by
/// `1 / max(1, |regressor_t|)` so that late samples of growing signals do
/// not dominate.
fn weighted_lstsq(target: &Mat, regressor: &Mat, tol: &Tolerance) -> Result<Mat> {
    let mut wt = target.clone();
    let mut wr = regressor.clone();
    for t in 0..regressor.ncols() {
        let w = 1.0 / regressor.column(t).norm().max(1.0);
        wt.column_mut(t).scale_mut(w);
        wr.column_mut(t).scale_mut(w);
    }
    Ok(lstsq_rows(&wt, &wr, tol)?.0)
}

/// State sequence with `Σ_i i·s_i = n_min` rows built from the ladder
/// relations. Requires `q >= 1`.
pub fn construct_state(
    traj: &IOTrajectory,
    ladder: &AnnihilatorLadder,
    tol: &Tolerance,
) -> Result<StateTrajectory> {
    let q = ladder.q();
    if q == 0 {
        return Err(Error::InvalidInput(
            "state construction needs q >= 1; q = 0 data are memoryless".into(),
        ));
    }
    let t = traj.len();
    let (u, y) = (traj.u(), traj.y());
    let mut blocks: Vec<Mat> = Vec::new();
    for i in 1..=q {
        let s = ladder.bases[i].nrows();
        if s == 0 {
            continue;
        }
        let mut prev: Option<Mat> = None;
        for k in 1..=i {
            let mut xk = Mat::zeros(s, t + 1);
            let mut x0 = Mat::zeros(s, 1);
            for j in k..=i {
                x0 += ladder.q_block(i, j) * u.column(j - k) + ladder.p_block(i, j) * y.column(j - k);
            }
            xk.set_column(0, &x0.column(0));
            let driven = -(ladder.q_block(i, k - 1) * u) - ladder.p_block(i, k - 1) * y;
            let rest = match &prev {
                None => driven,
                Some(xprev) => xprev.columns(0, t) + driven,
            };
            xk.columns_mut(1, t).copy_from(&rest);
            blocks.push(xk.clone());
            prev = Some(xk);
        }
    }
    let refs: Vec<&Mat> = blocks.iter().collect();
    let x = StateTrajectory::new(vstack(&refs, t + 1))?;

    let target = vstack(&[&x.tail(), y], t);
    let regressor = vstack(&[&x.head(), u], t);
    let sol = weighted_lstsq(&target, &regressor, tol)?;
    let residual = column_scaled_residual(&target, &(sol * &regressor), &regressor);
    if residual > tol.residual_abs {
        return Err(Error::InternalInvariantViolated(format!(
            "constructed state fails the row-space condition (residual {residual:.3e})"
        )));
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct IdentificationResult {
    pub system: IsoSystem,
    pub state: StateTrajectory,
    pub invariants: DataInvariants,
    pub ladder: AnnihilatorLadder,
    /// Max-abs residual of the explaining equations for `state`.
    pub residual: f64,
}

/// An explaining system with `n_min` states and lag `ℓ_min`.
pub fn identify_minimal(traj: &IOTrajectory, tol: &Tolerance) -> Result<IdentificationResult> {
    let ladder = build_ladder(traj, tol)?;
    identify_with_ladder(traj, ladder, tol)
}

/// Same as [`identify_minimal`] with a caller-supplied ladder (see
/// [`AnnihilatorLadder::from_bases`]).
pub fn identify_with_ladder(
    traj: &IOTrajectory,
    ladder: AnnihilatorLadder,
    tol: &Tolerance,
) -> Result<IdentificationResult> {
    let inv = invariants(traj, tol);
    let t = traj.len();
    let (system, state) = if ladder.q() == 0 {
        let p00 = ladder.p_block(0, 0);
        let q00 = ladder.q_block(0, 0);
        let d = p00
            .lu()
            .solve(&q00)
            .ok_or_else(|| Error::InternalInvariantViolated("P_00 is singular".into()))?;
        (IsoSystem::memoryless(-d)?, StateTrajectory::empty(t))
    } else {
        let x = construct_state(traj, &ladder, tol)?;
        let target = vstack(&[&x.tail(), traj.y()], t);
        let regressor = vstack(&[&x.head(), traj.u()], t);
        let sol = weighted_lstsq(&target, &regressor, tol)?;
        (IsoSystem::from_system_matrix(&sol, x.n())?, x)
    };

    let residual = system.explain_residual(traj, &state)?;
    let scaled = system.explain_residual_scaled(traj, &state)?;
    if scaled > tol.residual_abs {
        return Err(Error::IdentificationFailed(format!(
            "explaining residual {scaled:.3e} (relative per step) exceeds {:.3e}",
            tol.residual_abs
        )));
    }
    if system.n() != inv.n_min {
        return Err(Error::IdentificationFailed(format!(
            "constructed {} states, n_min = {}",
            system.n(),
            inv.n_min
        )));
    }
    let lag = system.lag(tol);
    if lag != inv.l_min {
        return Err(Error::IdentificationFailed(format!(
            "constructed system has lag {lag}, l_min = {}",
            inv.l_min
        )));
    }
    if !system.is_observable(tol) {
        return Err(Error::IdentificationFailed(
            "constructed system is not observable".into(),
        ));
    }
    Ok(IdentificationResult {
        system,
        state,
        invariants: inv,
        ladder,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn ladder_dimensions() {
        let traj = fixtures::running_example();
        assert_eq!(build_ladder(&traj.prefix(5).unwrap(), &tol()).unwrap().dims(), vec![0, 2]);
        assert_eq!(build_ladder(&traj, &tol()).unwrap().dims(), vec![0, 1, 1]);

        let t1 = traj.prefix(1).unwrap();
        let ladder = build_ladder(&t1, &tol()).unwrap();
        assert_eq!(ladder.dims(), vec![2]);
        let h0 = build_h(&t1, 0).unwrap();
        assert!(max_abs(&(&ladder.bases()[0] * h0)) < 1e-12);
    }

    #[test]
    fn ladder_rows_annihilate_and_pi_is_invertible() {
        let traj = fixtures::running_example();
        for t in 1..=14 {
            let tr = traj.prefix(t).unwrap();
            let ladder = build_ladder(&tr, &tol()).unwrap();
            for (i, r) in ladder.bases().iter().enumerate() {
                assert!(max_abs(&(r * build_h(&tr, i).unwrap())) < 1e-10);
            }
            assert_eq!(rank_unchecked(&ladder.pi(), &tol()), 2);
        }
    }

    #[test]
    fn hand_picked_bases_reproduce_states() {
        let traj = fixtures::running_example();
        let t5 = traj.prefix(5).unwrap();
        let ladder =
            AnnihilatorLadder::from_bases(&t5, vec![Mat::zeros(0, 4), fixtures::basis_r1_t5()], &tol())
                .unwrap();
        let x = construct_state(&t5, &ladder, &tol()).unwrap();
        assert_eq!(*x.x(), fixtures::example_state_t5());

        let ladder = AnnihilatorLadder::from_bases(
            &traj,
            vec![Mat::zeros(0, 4), fixtures::basis_r1_t14(), fixtures::basis_r2_t14()],
            &tol(),
        )
        .unwrap();
        let x = construct_state(&traj, &ladder, &tol()).unwrap();
        assert_eq!(*x.x(), fixtures::example_state_t14());
    }

    #[test]
    fn top_block_identity() {
        // x^{i,i}_[0,T-1] = Q_ii u + P_ii y for the last block of each level.
        let traj = fixtures::running_example();
        let ladder = build_ladder(&traj, &tol()).unwrap();
        let x = construct_state(&traj, &ladder, &tol()).unwrap();
        let mut row = 0;
        for i in 1..=ladder.q() {
            let s = ladder.dims()[i];
            row += (i - 1) * s;
            let top = x.x().view((row, 0), (s, traj.len())).into_owned();
            let expected = ladder.q_block(i, i) * traj.u() + ladder.p_block(i, i) * traj.y();
            assert!(max_abs(&(top - expected)) < 1e-10);
            row += s;
        }
    }

    #[test]
    fn rejects_wrong_bases() {
        let t5 = fixtures::running_example().prefix(5).unwrap();
        let mut bad = fixtures::basis_r1_t5();
        bad[(0, 0)] = 7.0;
        assert!(AnnihilatorLadder::from_bases(&t5, vec![Mat::zeros(0, 4), bad], &tol()).is_err());
        assert!(AnnihilatorLadder::from_bases(&t5, vec![Mat::zeros(0, 4)], &tol()).is_err());
        assert!(AnnihilatorLadder::from_bases(&t5, vec![Mat::zeros(0, 3)], &tol()).is_err());
    }

    #[test]
    fn identify_examples() {
        let traj = fixtures::running_example();
        let res = identify_minimal(&traj, &tol()).unwrap();
        assert_eq!(res.system.n(), 3);
        assert!(fixtures::true_system()
            .is_isomorphic(&res.system, &tol())
            .unwrap()
            .isomorphic);

        let res = identify_minimal(&traj.prefix(5).unwrap(), &tol()).unwrap();
        assert_eq!((res.system.n(), res.system.lag(&tol())), (2, 1));
    }

    #[test]
    fn identify_memoryless_prefix() {
        let t1 = fixtures::running_example().prefix(1).unwrap();
        let res = identify_minimal(&t1, &tol()).unwrap();
        assert_eq!(res.system.n(), 0);
        let y0 = res.system.d() * t1.u();
        assert!(max_abs(&(y0 - t1.y())) < 1e-12);
        assert!((res.system.d()[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((res.system.d()[(1, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn construct_state_needs_dynamics() {
        let t1 = fixtures::running_example().prefix(1).unwrap();
        let ladder = build_ladder(&t1, &tol()).unwrap();
        assert!(construct_state(&t1, &ladder, &tol()).is_err());
    }
}
