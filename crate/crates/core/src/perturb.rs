//! Construction of a second explaining system with the same state dimension
//! and lag from a given observable explaining system.

use crate::error::{Error, Result};
use crate::numerics::{max_abs, normalize_columns, Mat, Tolerance, Vector};
use crate::system::IsoSystem;
use crate::trajectory::{build_j, IOTrajectory, StateTrajectory};

/// Perturbation directions.
///
/// `[xi, eta_0, ..., eta_d]` must annihilate `J_d(x)` for the supplied state
/// and `zeta` must be a nonzero vector with `C A^i zeta = 0` for
/// `i in [0, lag - 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    /// `1 x n`
    pub xi: Mat,
    /// `eta_0 .. eta_d`, each `1 x m`
    pub etas: Vec<Mat>,
    /// length `n`
    pub zeta: Vector,
}

impl PerturbationSpec {
    /// Split a row vector of `lk J_d(x)` into `xi` and the `eta_i`.
    pub fn from_annihilator(row: &Mat, n: usize, m: usize, zeta: Vector) -> Result<Self> {
        if row.nrows() != 1 || row.ncols() < n || !(row.ncols() - n).is_multiple_of(m) {
            return Err(Error::InvalidPerturbation(format!(
                "annihilator of shape {:?} does not split into n = {n} and blocks of m = {m}",
                row.shape()
            )));
        }
        let xi = row.columns(0, n).into_owned();
        let etas = (0..(row.ncols() - n) / m)
            .map(|i| row.columns(n + i * m, m).into_owned())
            .collect();
        Ok(PerturbationSpec { xi, etas, zeta })
    }
}

/// Intermediate products of a perturbation, exposed for inspection.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub system: IsoSystem,
    /// `E_{-1}, E_0, ..., E_d`
    pub e: Vec<Mat>,
    pub d: usize,
}

impl Perturbation {
    /// `E_i` for `i >= -1`.
    pub fn e_at(&self, i: isize) -> &Mat {
        &self.e[(i + 1) as usize]
    }
}

fn check_row(name: &str, v: &Mat, cols: usize) -> Result<()> {
    if v.shape() != (1, cols) {
        return Err(Error::InvalidPerturbation(format!(
            "{name} must be 1 x {cols}, got {:?}",
            v.shape()
        )));
    }
    Ok(())
}

/// Apply `Â = A + ζξ`, `B̂ = B + E_{-1}`, `Ĉ = C`, `D̂ = D + C E_0` with
/// `E_d = 0`, `E_{i-1} = Â E_i + ζ η_i`, after validating every precondition.
pub fn perturb_explaining(
    sys: &IsoSystem,
    x: &StateTrajectory,
    spec: &PerturbationSpec,
    traj: &IOTrajectory,
    tol: &Tolerance,
) -> Result<Perturbation> {
    let (n, m) = (sys.n(), sys.m());
    let t = traj.len();
    let lag = sys.lag(tol);
    if lag == 0 || n < lag {
        return Err(Error::InvalidPerturbation(format!(
            "need n >= lag >= 1, got n = {n}, lag = {lag}"
        )));
    }
    if !sys.is_observable(tol) {
        return Err(Error::InvalidPerturbation("system is not observable".into()));
    }
    let residual = sys.explain_residual_scaled(traj, x).map_err(|e| {
        Error::InvalidPerturbation(format!("state does not fit the system: {e}"))
    })?;
    if residual > tol.residual_abs {
        return Err(Error::InvalidPerturbation(format!(
            "supplied state is not a state for the system (residual {residual:.3e})"
        )));
    }

    let d = lag.min(t - 1);
    check_row("xi", &spec.xi, n)?;
    if spec.etas.len() != d + 1 {
        return Err(Error::InvalidPerturbation(format!(
            "expected {} eta vectors (d = {d}), got {}",
            d + 1,
            spec.etas.len()
        )));
    }
    for (i, eta) in spec.etas.iter().enumerate() {
        check_row(&format!("eta_{i}"), eta, m)?;
    }
    if spec.zeta.len() != n {
        return Err(Error::InvalidPerturbation(format!(
            "zeta must have length {n}, got {}",
            spec.zeta.len()
        )));
    }

    let mut row = Mat::zeros(1, n + (d + 1) * m);
    row.view_mut((0, 0), (1, n)).copy_from(&spec.xi);
    for (i, eta) in spec.etas.iter().enumerate() {
        row.view_mut((0, n + i * m), (1, m)).copy_from(eta);
    }
    let j = normalize_columns(&build_j(x, traj, d)?);
    let annihilation = max_abs(&(&row * &j));
    if annihilation > tol.residual_abs {
        return Err(Error::InvalidPerturbation(format!(
            "[xi, eta] does not annihilate J_{d}(x) (residual {annihilation:.3e})"
        )));
    }

    let zeta = Mat::from_column_slice(n, 1, spec.zeta.as_slice());
    if max_abs(&zeta) <= tol.residual_abs {
        return Err(Error::InvalidPerturbation("zeta must be nonzero".into()));
    }
    if lag >= 2 {
        let hits = sys.observability_matrix(lag as isize - 2) * &zeta;
        if max_abs(&hits) > tol.residual_abs {
            return Err(Error::InvalidPerturbation(format!(
                "C A^i zeta must vanish for i <= {}",
                lag - 2
            )));
        }
    }

    let a_hat = sys.a() + &zeta * &spec.xi;
    // e[k] holds E_{k-1}; fill from E_d downwards.
    let mut e = vec![Mat::zeros(n, m); d + 2];
    for i in (0..=d).rev() {
        e[i] = &a_hat * &e[i + 1] + &zeta * &spec.etas[i];
    }
    let b_hat = sys.b() + &e[0];
    let d_hat = sys.d() + sys.c() * &e[1];
    let system = IsoSystem::new(a_hat, b_hat, sys.c().clone(), d_hat)?;
    Ok(Perturbation { system, e, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn example_spec() -> PerturbationSpec {
        PerturbationSpec {
            xi: Mat::from_row_slice(1, 2, &[-1., -1.]),
            etas: vec![
                Mat::from_row_slice(1, 2, &[0., 1.]),
                Mat::from_row_slice(1, 2, &[1., 0.]),
            ],
            zeta: Vector::from_vec(vec![1., 1.]),
        }
    }

    fn setup() -> (IsoSystem, StateTrajectory, IOTrajectory) {
        (
            fixtures::two_state_system(),
            StateTrajectory::new(fixtures::example_state_t5()).unwrap(),
            fixtures::running_example().prefix(5).unwrap(),
        )
    }

    #[test]
    fn reproduces_worked_example() {
        let (sys, x, traj) = setup();
        let tol = Tolerance::default();
        let out = perturb_explaining(&sys, &x, &example_spec(), &traj, &tol).unwrap();
        let expected = fixtures::perturbed_two_state_system();
        assert!(max_abs(&(out.system.system_matrix() - expected.system_matrix())) < 1e-12);
        assert_eq!(out.d, 1);
        assert_eq!(*out.e_at(0), Mat::from_row_slice(2, 2, &[1., 0., 1., 0.]));
        assert!(out.system.explains(&traj, &tol).unwrap().explains);
        let xhat = StateTrajectory::new(fixtures::perturbed_state_t5()).unwrap();
        assert!(out.system.explain_residual(&traj, &xhat).unwrap() < 1e-12);
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let (sys, x, traj) = setup();
        let spec = PerturbationSpec {
            xi: Mat::zeros(1, 2),
            etas: vec![Mat::zeros(1, 2), Mat::zeros(1, 2)],
            zeta: Vector::from_vec(vec![1., 1.]),
        };
        let out = perturb_explaining(&sys, &x, &spec, &traj, &Tolerance::default()).unwrap();
        assert_eq!(out.system, sys);
    }

    #[test]
    fn rejects_non_annihilating_directions() {
        let (sys, x, traj) = setup();
        let mut spec = example_spec();
        spec.etas[0] = Mat::from_row_slice(1, 2, &[1., 1.]);
        assert!(matches!(
            perturb_explaining(&sys, &x, &spec, &traj, &Tolerance::default()),
            Err(Error::InvalidPerturbation(_))
        ));
    }

    #[test]
    fn rejects_bad_zeta_and_counts() {
        let (sys, x, traj) = setup();
        let tol = Tolerance::default();
        let mut spec = example_spec();
        spec.zeta = Vector::zeros(2);
        assert!(perturb_explaining(&sys, &x, &spec, &traj, &tol).is_err());
        let mut spec = example_spec();
        spec.etas.pop();
        assert!(perturb_explaining(&sys, &x, &spec, &traj, &tol).is_err());

        // zeta must be invisible through C for lag-2 systems.
        let sys3 = fixtures::true_system();
        let traj = fixtures::running_example();
        let x3 = StateTrajectory::new(fixtures::true_state()).unwrap();
        let spec = PerturbationSpec {
            xi: Mat::zeros(1, 3),
            etas: vec![Mat::zeros(1, 2); 3],
            zeta: Vector::from_vec(vec![1., 0., 0.]),
        };
        assert!(perturb_explaining(&sys3, &x3, &spec, &traj, &tol).is_err());
    }

    #[test]
    fn rejects_foreign_state() {
        let (sys, _, traj) = setup();
        let x = StateTrajectory::new(Mat::zeros(2, 6)).unwrap();
        assert!(matches!(
            perturb_explaining(&sys, &x, &example_spec(), &traj, &Tolerance::default()),
            Err(Error::InvalidPerturbation(_))
        ));
    }
}
