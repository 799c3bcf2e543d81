//! Input-state-output systems `x(t+1) = A x(t) + B u(t)`, `y(t) = C x(t) + D u(t)`
//! and the structural quantities used to reason about them.

use crate::error::{Error, Result};
use crate::numerics::{
    column_scaled_residual, ensure_finite, hstack, max_abs, mul, pinv, rank_unchecked, vstack, Mat,
    Tolerance, Vector,
};
use crate::trajectory::{IOTrajectory, StateTrajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct IsoSystem {
    a: Mat,
    b: Mat,
    c: Mat,
    d: Mat,
}

impl IsoSystem {
    pub fn new(a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Self> {
        let n = a.nrows();
        let m = b.ncols();
        let p = c.nrows();
        if a.ncols() != n || b.nrows() != n || c.ncols() != n || d.shape() != (p, m) {
            return Err(Error::InvalidShape(format!(
                "inconsistent blocks: A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        if m == 0 || p == 0 {
            return Err(Error::InvalidShape("need m >= 1 and p >= 1".into()));
        }
        for (name, blk) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            ensure_finite(blk, name)?;
        }
        Ok(IsoSystem { a, b, c, d })
    }

    /// The memoryless system `y = D u`.
    pub fn memoryless(d: Mat) -> Result<Self> {
        let (p, m) = d.shape();
        IsoSystem::new(Mat::zeros(0, 0), Mat::zeros(0, m), Mat::zeros(p, 0), d)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    pub fn m(&self) -> usize {
        self.b.ncols()
    }
    pub fn p(&self) -> usize {
        self.c.nrows()
    }
    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn c(&self) -> &Mat {
        &self.c
    }
    pub fn d(&self) -> &Mat {
        &self.d
    }

    /// `[[A, B], [C, D]]`
    pub fn system_matrix(&self) -> Mat {
        let n = self.n();
        let top = hstack(&[&self.a, &self.b], n);
        let bottom = hstack(&[&self.c, &self.d], self.p());
        vstack(&[&top, &bottom], n + self.m())
    }

    /// Split `[[A, B], [C, D]]` with `n` states.
    pub fn from_system_matrix(mat: &Mat, n: usize) -> Result<Self> {
        if mat.nrows() < n || mat.ncols() < n {
            return Err(Error::InvalidShape(format!(
                "system matrix {:?} too small for n = {n}",
                mat.shape()
            )));
        }
        let p = mat.nrows() - n;
        let m = mat.ncols() - n;
        IsoSystem::new(
            mat.view((0, 0), (n, n)).into_owned(),
            mat.view((0, n), (n, m)).into_owned(),
            mat.view((n, 0), (p, n)).into_owned(),
            mat.view((n, n), (p, m)).into_owned(),
        )
    }

    fn c_a_pow(&self, k: usize) -> Mat {
        let mut row = self.c.clone();
        for _ in 0..k {
            row = mul(&row, &self.a);
        }
        row
    }

    /// `Ω_k = col(C, CA, ..., CA^k)`; `Ω_{-1}` is the void `0 x n` matrix.
    pub fn observability_matrix(&self, k: isize) -> Mat {
        let n = self.n();
        if k < 0 {
            return Mat::zeros(0, n);
        }
        let mut blocks = Vec::with_capacity(k as usize + 1);
        let mut cur = self.c.clone();
        for _ in 0..=k {
            let next = mul(&cur, &self.a);
            blocks.push(cur);
            cur = next;
        }
        let refs: Vec<&Mat> = blocks.iter().collect();
        vstack(&refs, n)
    }

    /// `Γ_k = [A^k B, ..., AB, B]`; `Γ_{-1}` is the void `n x 0` matrix.
    pub fn controllability_matrix(&self, k: isize) -> Mat {
        let n = self.n();
        if k < 0 {
            return Mat::zeros(n, 0);
        }
        let mut powers = Vec::with_capacity(k as usize + 1);
        let mut cur = self.b.clone();
        for _ in 0..=k {
            let next = mul(&self.a, &cur);
            powers.push(cur);
            cur = next;
        }
        powers.reverse();
        let refs: Vec<&Mat> = powers.iter().collect();
        hstack(&refs, n)
    }

    /// Block lower-triangular Toeplitz matrix of the first `k + 1` Markov
    /// parameters; `Θ_{-1}` is `0 x 0`.
    pub fn toeplitz(&self, k: isize) -> Mat {
        if k < 0 {
            return Mat::zeros(0, 0);
        }
        let (m, p) = (self.m(), self.p());
        let k = k as usize;
        let markov: Vec<Mat> = (0..=k)
            .map(|i| {
                if i == 0 {
                    self.d.clone()
                } else {
                    mul(&self.c_a_pow(i - 1), &self.b)
                }
            })
            .collect();
        let mut theta = Mat::zeros((k + 1) * p, (k + 1) * m);
        for r in 0..=k {
            for c in 0..=r {
                theta
                    .view_mut((r * p, c * m), (p, m))
                    .copy_from(&markov[r - c]);
            }
        }
        theta
    }

    pub fn structured_matrices(&self, k: usize) -> StructuredMatrices {
        let (n, m, p) = (self.n(), self.m(), self.p());
        let ki = k as isize;
        let omega = self.observability_matrix(ki);
        let gamma = self.controllability_matrix(ki);
        let theta = self.toeplitz(ki);

        let mut phi = Mat::zeros((k + 1) * (m + p), n + (k + 1) * m);
        phi.view_mut((0, n), ((k + 1) * m, (k + 1) * m))
            .copy_from(&Mat::identity((k + 1) * m, (k + 1) * m));
        phi.view_mut(((k + 1) * m, 0), ((k + 1) * p, n)).copy_from(&omega);
        phi.view_mut(((k + 1) * m, n), ((k + 1) * p, (k + 1) * m))
            .copy_from(&theta);

        let omega_prev = self.observability_matrix(ki - 1);
        let theta_prev = self.toeplitz(ki - 1);
        let mut psi = Mat::zeros((k + 1) * m + k * p, n + (k + 1) * m);
        psi.view_mut((0, n), ((k + 1) * m, (k + 1) * m))
            .copy_from(&Mat::identity((k + 1) * m, (k + 1) * m));
        psi.view_mut(((k + 1) * m, 0), (k * p, n)).copy_from(&omega_prev);
        psi.view_mut(((k + 1) * m, n), (k * p, k * m))
            .copy_from(&theta_prev);

        StructuredMatrices {
            omega,
            gamma,
            theta,
            phi,
            psi,
        }
    }

    /// Smallest `k >= 0` with `rank Ω_k = rank Ω_{k-1}`.
    pub fn lag(&self, tol: &Tolerance) -> usize {
        let mut prev = 0;
        for k in 0..=self.n() {
            let r = rank_unchecked(&self.observability_matrix(k as isize), tol);
            if r == prev {
                return k;
            }
            prev = r;
        }
        self.n()
    }

    pub fn lag_structure(&self, tol: &Tolerance) -> LagStructure {
        let mut rho = vec![self.p()];
        let mut prev = 0;
        for k in 0..=self.n() {
            let r = rank_unchecked(&self.observability_matrix(k as isize), tol);
            rho.push(r - prev);
            prev = r;
        }
        LagStructure { rho }
    }

    pub fn is_observable(&self, tol: &Tolerance) -> bool {
        let n = self.n();
        n == 0 || rank_unchecked(&self.observability_matrix(n as isize - 1), tol) == n
    }

    pub fn is_controllable(&self, tol: &Tolerance) -> bool {
        let n = self.n();
        n == 0 || rank_unchecked(&self.controllability_matrix(n as isize - 1), tol) == n
    }

    pub fn is_minimal(&self, tol: &Tolerance) -> bool {
        self.is_observable(tol) && self.is_controllable(tol)
    }

    /// Run the recursion from `x0` over the columns of `u`. Returns
    /// `(y, x)` with `y: p x T` and `x: n x (T + 1)`.
    pub fn simulate(&self, x0: &Vector, u: &Mat) -> Result<(Mat, Mat)> {
        if x0.len() != self.n() {
            return Err(Error::InvalidShape(format!(
                "x0 has length {}, system has {} states",
                x0.len(),
                self.n()
            )));
        }
        if u.nrows() != self.m() {
            return Err(Error::InvalidShape(format!(
                "input has {} channels, system has {}",
                u.nrows(),
                self.m()
            )));
        }
        let t = u.ncols();
        let mut x = Mat::zeros(self.n(), t + 1);
        let mut y = Mat::zeros(self.p(), t);
        x.set_column(0, x0);
        for k in 0..t {
            let xk = x.column(k).into_owned();
            let uk = u.column(k).into_owned();
            let next = &self.a * &xk + &self.b * &uk;
            let out = &self.c * &xk + &self.d * &uk;
            x.set_column(k + 1, &next);
            y.set_column(k, &out);
        }
        Ok((y, x))
    }

    /// Max-abs residual of `[x_[1,T]; y] = [[A, B], [C, D]] [x_[0,T-1]; u]`.
    pub fn explain_residual(&self, traj: &IOTrajectory, x: &StateTrajectory) -> Result<f64> {
        self.check_dims(traj)?;
        if x.n() != self.n() || x.len() != traj.len() {
            return Err(Error::InvalidShape(format!(
                "state is {}x{}, expected {}x{}",
                x.n(),
                x.len() + 1,
                self.n(),
                traj.len() + 1
            )));
        }
        let t = traj.len();
        let lhs = vstack(&[&x.tail(), traj.y()], t);
        let rhs_in = vstack(&[&x.head(), traj.u()], t);
        Ok(max_abs(&(lhs - mul(&self.system_matrix(), &rhs_in))))
    }

    /// Residual of the same equations measured per time step relative to
    /// `max(1, |[x_{t+1}; y_t]|, |[x_t; u_t]|)`. This is what the explain
    /// decisions compare against `tol.residual_abs`.
    pub fn explain_residual_scaled(&self, traj: &IOTrajectory, x: &StateTrajectory) -> Result<f64> {
        self.explain_residual(traj, x)?;
        let t = traj.len();
        let lhs = vstack(&[&x.tail(), traj.y()], t);
        let rhs_in = vstack(&[&x.head(), traj.u()], t);
        let fitted = mul(&self.system_matrix(), &rhs_in);
        Ok(column_scaled_residual(&lhs, &fitted, &rhs_in))
    }

    fn check_dims(&self, traj: &IOTrajectory) -> Result<()> {
        if traj.m() != self.m() || traj.p() != self.p() {
            return Err(Error::InvalidShape(format!(
                "system is {}-in/{}-out, data is {}-in/{}-out",
                self.m(),
                self.p(),
                traj.m(),
                traj.p()
            )));
        }
        Ok(())
    }

    /// Decide whether some state sequence reproduces `traj` exactly and
    /// return one such state as a witness.
    pub fn explains(&self, traj: &IOTrajectory, tol: &Tolerance) -> Result<Explanation> {
        self.check_dims(traj)?;
        let t = traj.len();
        if self.n() == 0 {
            let fitted = mul(&self.d, traj.u());
            let residual = column_scaled_residual(traj.y(), &fitted, traj.u());
            return Ok(Explanation::from_candidate(
                residual,
                StateTrajectory::empty(t),
                tol,
            ));
        }
        let mut best: Option<(f64, StateTrajectory)> = None;
        if self.is_observable(tol) {
            let x = self.initial_state_fit(traj, tol)?;
            let r = self.explain_residual_scaled(traj, &x)?;
            if r <= tol.residual_abs {
                return Ok(Explanation::from_candidate(r, x, tol));
            }
            best = Some((r, x));
        }
        let x = self.stacked_state_fit(traj, tol)?;
        let r = self.explain_residual_scaled(traj, &x)?;
        match best {
            Some((rb, xb)) if rb < r => Ok(Explanation::from_candidate(rb, xb, tol)),
            _ => Ok(Explanation::from_candidate(r, x, tol)),
        }
    }

    /// Solve for `x_0` alone from the stacked output equations, then run the
    /// recursion.
    fn initial_state_fit(&self, traj: &IOTrajectory, tol: &Tolerance) -> Result<StateTrajectory> {
        let t = traj.len();
        let p = self.p();
        let (y_forced, _) = self.simulate(&Vector::zeros(self.n()), traj.u())?;
        let free = traj.y() - y_forced;
        let rhs = Vector::from_fn(t * p, |i, _| free[(i % p, i / p)]);
        let omega = self.observability_matrix(t as isize - 1);
        let x0 = pinv(&omega, tol) * rhs;
        let (_, x) = self.simulate(&x0, traj.u())?;
        StateTrajectory::new(x)
    }

    /// Least-squares solve over the whole state sequence `x_[0,T]`.
    fn stacked_state_fit(&self, traj: &IOTrajectory, tol: &Tolerance) -> Result<StateTrajectory> {
        let (n, p, t) = (self.n(), self.p(), traj.len());
        let rows = (n + p) * t;
        let cols = n * (t + 1);
        let mut lhs = Mat::zeros(rows, cols);
        let mut rhs = Vector::zeros(rows);
        let bu = mul(&self.b, traj.u());
        let yd = traj.y() - mul(&self.d, traj.u());
        for k in 0..t {
            let r = k * (n + p);
            // x_{k+1} - A x_k = B u_k
            lhs.view_mut((r, (k + 1) * n), (n, n))
                .copy_from(&Mat::identity(n, n));
            lhs.view_mut((r, k * n), (n, n)).copy_from(&(-&self.a));
            rhs.rows_mut(r, n).copy_from(&bu.column(k));
            // C x_k = y_k - D u_k
            lhs.view_mut((r + n, k * n), (p, n)).copy_from(&self.c);
            rhs.rows_mut(r + n, p).copy_from(&yd.column(k));
        }
        let z = pinv(&lhs, tol) * rhs;
        StateTrajectory::new(Mat::from_fn(n, t + 1, |i, k| z[k * n + i]))
    }

    /// Test whether `other` is this system in different state coordinates.
    ///
    /// The returned `S` maps `other`'s coordinates to this system's:
    /// `S A_o = A S`, `S B_o = B`, `C S = C_o`, `D = D_o`.
    pub fn is_isomorphic(&self, other: &IsoSystem, tol: &Tolerance) -> Result<Isomorphism> {
        if self.m() != other.m() || self.p() != other.p() {
            return Err(Error::InvalidShape(format!(
                "systems have different input/output dimensions: ({}, {}) vs ({}, {})",
                self.m(),
                self.p(),
                other.m(),
                other.p()
            )));
        }
        if !self.is_observable(tol) || !other.is_observable(tol) {
            return Err(Error::NotObservable);
        }
        let d_gap = relation_gap(&self.d, &other.d);
        if self.n() != other.n() || d_gap > tol.residual_abs {
            return Ok(Isomorphism {
                isomorphic: false,
                transform: None,
                residual: f64::INFINITY,
            });
        }
        let n = self.n();
        if n == 0 {
            return Ok(Isomorphism {
                isomorphic: true,
                transform: Some(Mat::zeros(0, 0)),
                residual: d_gap,
            });
        }
        let o1 = self.observability_matrix(n as isize - 1);
        let o2 = other.observability_matrix(n as isize - 1);
        let s = pinv(&o1, tol) * o2;
        if rank_unchecked(&s, tol) < n {
            return Ok(Isomorphism {
                isomorphic: false,
                transform: None,
                residual: f64::INFINITY,
            });
        }
        let residual = [
            relation_gap(&(&s * &other.a), &(&self.a * &s)),
            relation_gap(&(&s * &other.b), &self.b),
            relation_gap(&(&self.c * &s), &other.c),
            d_gap,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        let isomorphic = residual <= tol.residual_abs;
        Ok(Isomorphism {
            isomorphic,
            transform: isomorphic.then_some(s),
            residual,
        })
    }
}

/// `|lhs - rhs|_max / max(1, |lhs|_max, |rhs|_max)`.
fn relation_gap(lhs: &Mat, rhs: &Mat) -> f64 {
    let scale = 1.0_f64.max(max_abs(lhs)).max(max_abs(rhs));
    max_abs(&(lhs - rhs)) / scale
}

/// `ρ_{-1}, ρ_0, ..., ρ_n`: rank increments of the observability matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagStructure {
    rho: Vec<usize>,
}

impl LagStructure {
    /// `ρ_k` for `k >= -1`; zero past the stored range.
    pub fn get(&self, k: isize) -> usize {
        let idx = (k + 1) as usize;
        self.rho.get(idx).copied().unwrap_or(0)
    }

    /// Stored values starting at `ρ_{-1}`.
    pub fn as_slice(&self) -> &[usize] {
        &self.rho
    }
}

#[derive(Debug, Clone)]
pub struct StructuredMatrices {
    pub omega: Mat,
    pub gamma: Mat,
    pub theta: Mat,
    pub phi: Mat,
    pub psi: Mat,
}

#[derive(Debug, Clone)]
pub struct Explanation {
    pub explains: bool,
    /// See [`IsoSystem::explain_residual_scaled`].
    pub residual: f64,
    /// A state sequence reproducing the data, when one was found.
    pub state: Option<StateTrajectory>,
}

impl Explanation {
    fn from_candidate(residual: f64, x: StateTrajectory, tol: &Tolerance) -> Self {
        let explains = residual <= tol.residual_abs;
        Explanation {
            explains,
            residual,
            state: explains.then_some(x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Isomorphism {
    pub isomorphic: bool,
    pub transform: Option<Mat>,
    /// Largest violation among the defining relations, each relative to
    /// `max(1, size of its terms)`.
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn observability_matrices() {
        let sys = fixtures::true_system();
        assert_eq!(sys.observability_matrix(-1).shape(), (0, 3));
        assert_eq!(sys.observability_matrix(0), *sys.c());
        assert_eq!(rank_unchecked(&sys.observability_matrix(1), &tol()), 3);
    }

    #[test]
    fn lag_examples() {
        assert_eq!(fixtures::true_system().lag(&tol()), 2);
        assert_eq!(fixtures::two_state_system().lag(&tol()), 1);
        let memoryless = IsoSystem::memoryless(Mat::identity(2, 2)).unwrap();
        assert_eq!(memoryless.lag(&tol()), 0);
    }

    #[test]
    fn lag_structure_examples() {
        let ls = fixtures::true_system().lag_structure(&tol());
        assert_eq!(ls.as_slice(), &[2, 2, 1, 0, 0]);
        assert_eq!(ls.get(-1), 2);
        assert_eq!(ls.get(7), 0);
        let memoryless = IsoSystem::memoryless(Mat::identity(3, 2)).unwrap();
        assert_eq!(memoryless.lag_structure(&tol()).as_slice(), &[3, 0]);
    }

    #[test]
    fn observability_and_controllability() {
        let sys = fixtures::true_system();
        assert!(sys.is_observable(&tol()) && sys.is_controllable(&tol()));
        let dead = IsoSystem::new(
            Mat::zeros(1, 1),
            Mat::zeros(1, 1),
            Mat::identity(1, 1),
            Mat::zeros(1, 1),
        )
        .unwrap();
        assert!(!dead.is_controllable(&tol()));
        let memoryless = IsoSystem::memoryless(Mat::identity(1, 1)).unwrap();
        assert!(memoryless.is_observable(&tol()) && memoryless.is_controllable(&tol()));
    }

    #[test]
    fn structured_matrices_small_cases() {
        let sys = fixtures::true_system();
        assert_eq!(sys.toeplitz(-1).shape(), (0, 0));
        assert_eq!(sys.toeplitz(0), *sys.d());
        let s = sys.structured_matrices(1);
        let cb = Mat::identity(2, 2);
        let mut expected = Mat::zeros(4, 4);
        expected.view_mut((0, 0), (2, 2)).copy_from(sys.d());
        expected.view_mut((2, 2), (2, 2)).copy_from(sys.d());
        expected.view_mut((2, 0), (2, 2)).copy_from(&cb);
        assert_eq!(s.theta, expected);
        assert_eq!(s.gamma.shape(), (3, 4));
        assert_eq!(s.phi.shape(), (8, 7));
        assert_eq!(s.psi.shape(), (6, 7));
    }

    #[test]
    fn hankel_factorisations_through_phi_and_psi() {
        use crate::trajectory::{build_g, build_h, build_j};
        let sys = fixtures::true_system();
        let traj = fixtures::running_example();
        let x = StateTrajectory::new(fixtures::true_state()).unwrap();
        for k in 0..4 {
            let s = sys.structured_matrices(k);
            let j = build_j(&x, &traj, k).unwrap();
            assert!(max_abs(&(build_h(&traj, k).unwrap() - &s.phi * &j)) < 1e-12);
            assert!(max_abs(&(build_g(&traj, k).unwrap() - &s.psi * &j)) < 1e-12);
        }
    }

    #[test]
    fn simulate_reproduces_running_example() {
        let sys = fixtures::true_system();
        let x0 = Vector::from_vec(fixtures::true_initial_state());
        let (y, x) = sys.simulate(&x0, &fixtures::input()).unwrap();
        assert_eq!(y, fixtures::output());
        assert_eq!(x, fixtures::true_state());
    }

    #[test]
    fn simulate_degenerate_cases() {
        let u = fixtures::input();
        let sys = IsoSystem::new(
            Mat::identity(2, 2),
            Mat::zeros(2, 2),
            Mat::identity(2, 2),
            Mat::from_row_slice(2, 2, &[1., 2., 3., 4.]),
        )
        .unwrap();
        let (y, _) = sys.simulate(&Vector::zeros(2), &u).unwrap();
        assert_eq!(y, sys.d() * &u);

        let memoryless = IsoSystem::memoryless(sys.d().clone()).unwrap();
        let (y, x) = memoryless.simulate(&Vector::zeros(0), &u).unwrap();
        assert_eq!(y, sys.d() * &u);
        assert_eq!(x.shape(), (0, 15));

        assert!(sys.simulate(&Vector::zeros(3), &u).is_err());
    }

    #[test]
    fn explains_examples() {
        let traj = fixtures::running_example();
        let sys = fixtures::true_system();
        for t in 1..=14 {
            let e = sys.explains(&traj.prefix(t).unwrap(), &tol()).unwrap();
            assert!(e.explains, "prefix {t}: residual {}", e.residual);
        }
        let t5 = traj.prefix(5).unwrap();
        let two = fixtures::two_state_system();
        assert!(two.explains(&t5, &tol()).unwrap().explains);
        let x = StateTrajectory::new(fixtures::example_state_t5()).unwrap();
        assert!(two.explain_residual(&t5, &x).unwrap() < 1e-12);

        let zero = IsoSystem::memoryless(Mat::zeros(2, 2)).unwrap();
        assert!(!zero.explains(&traj, &tol()).unwrap().explains);
        // The two-state system does not explain the full record.
        assert!(!two.explains(&traj, &tol()).unwrap().explains);
    }

    #[test]
    fn explains_unobservable_candidate() {
        // True system padded with an unobservable, uncontrollable state.
        let sys = fixtures::true_system();
        let mut a = Mat::zeros(4, 4);
        a.view_mut((0, 0), (3, 3)).copy_from(sys.a());
        a[(3, 3)] = 0.5;
        let mut b = Mat::zeros(4, 2);
        b.view_mut((0, 0), (3, 2)).copy_from(sys.b());
        let mut c = Mat::zeros(2, 4);
        c.view_mut((0, 0), (2, 3)).copy_from(sys.c());
        let padded = IsoSystem::new(a, b, c, sys.d().clone()).unwrap();
        assert!(!padded.is_observable(&tol()));
        let e = padded.explains(&fixtures::running_example(), &tol()).unwrap();
        assert!(e.explains);
        assert_eq!(e.state.unwrap().n(), 4);
    }

    #[test]
    fn isomorphism_examples() {
        let sys = fixtures::true_system();
        let iso = sys.is_isomorphic(&sys, &tol()).unwrap();
        assert!(iso.isomorphic);
        assert!(max_abs(&(iso.transform.unwrap() - Mat::identity(3, 3))) < 1e-12);

        let other = fixtures::three_state_system();
        let iso = sys.is_isomorphic(&other, &tol()).unwrap();
        assert!(iso.isomorphic && iso.residual <= 1e-8);
        let s = iso.transform.unwrap();
        assert!(max_abs(&(&s * other.a() - sys.a() * &s)) < 1e-10);

        let two = fixtures::two_state_system();
        assert!(!sys.is_isomorphic(&two, &tol()).unwrap().isomorphic);
    }

    #[test]
    fn isomorphism_rejects_unobservable() {
        let sys = IsoSystem::new(
            Mat::identity(1, 1),
            Mat::identity(1, 1),
            Mat::zeros(1, 1),
            Mat::zeros(1, 1),
        )
        .unwrap();
        assert!(matches!(sys.is_isomorphic(&sys, &tol()), Err(Error::NotObservable)));
    }

    #[test]
    fn system_matrix_round_trip() {
        let sys = fixtures::true_system();
        let back = IsoSystem::from_system_matrix(&sys.system_matrix(), 3).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn rejects_inconsistent_shapes() {
        assert!(IsoSystem::new(
            Mat::zeros(2, 2),
            Mat::zeros(3, 1),
            Mat::zeros(1, 2),
            Mat::zeros(1, 1)
        )
        .is_err());
    }
}
