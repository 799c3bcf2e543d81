//! Reference data: a three-state, two-input, two-output system with lag 2,
//! a 14-sample experiment on it, and hand-picked annihilator bases and
//! explaining systems for that experiment.

use crate::numerics::Mat;
use crate::system::IsoSystem;
use crate::trajectory::IOTrajectory;

fn mat(rows: usize, cols: usize, data: &[f64]) -> Mat {
    Mat::from_row_slice(rows, cols, data)
}

pub fn input() -> Mat {
    mat(
        2,
        14,
        &[
            1., 1., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 1., //
            0., 0., 0., 1., 1., 1., 1., 1., 1., 1., 1., 1., 0., 0.,
        ],
    )
}

pub fn output() -> Mat {
    mat(
        2,
        14,
        &[
            2., 3., 2., 1., 0., 1., 2., 3., 3., 2., 2., 2., 3., 4., //
            1., 0., 0., 0., 1., 2., 2., 2., 2., 2., 2., 2., 2., 1.,
        ],
    )
}

pub fn running_example() -> IOTrajectory {
    IOTrajectory::new(input(), output()).expect("fixture is valid")
}

pub fn true_system() -> IsoSystem {
    IsoSystem::new(
        mat(3, 3, &[0., 1., 0., 0., 0., 1., 0., 0., 0.]),
        mat(3, 2, &[1., 0., 0., 1., 0., 1.]),
        mat(2, 3, &[1., 0., 0., 0., 1., 0.]),
        mat(2, 2, &[1., 0., 0., 0.]),
    )
    .expect("fixture is valid")
}

pub fn true_initial_state() -> Vec<f64> {
    vec![1., 1., 0.]
}

/// State of the true system over all 14 samples (15 columns).
pub fn true_state() -> Mat {
    mat(
        3,
        15,
        &[
            1., 2., 1., 1., 0., 1., 2., 2., 3., 2., 2., 2., 2., 3., 2., //
            1., 0., 0., 0., 1., 2., 2., 2., 2., 2., 2., 2., 2., 1., 0., //
            0., 0., 0., 0., 1., 1., 1., 1., 1., 1., 1., 1., 1., 0., 0.,
        ],
    )
}

/// Hand-picked basis `[Q_10 Q_11 P_10 P_11]` of the depth-1 annihilator
/// subspace for the first five samples.
pub fn basis_r1_t5() -> Mat {
    mat(
        2,
        8,
        &[
            -3., -1., -2., 0., 1., 0., 1., 0., //
            0., -1., 0., 0., 0., 0., 0., 1.,
        ],
    )
}

/// State produced from [`basis_r1_t5`].
pub fn example_state_t5() -> Mat {
    mat(2, 6, &[0., 1., 0., 1., 0., 1., 1., 0., 0., 0., 1., 1.])
}

/// Two-state explaining system of the first five samples.
pub fn two_state_system() -> IsoSystem {
    IsoSystem::new(
        mat(2, 2, &[-1., 0., 0., 0.]),
        mat(2, 2, &[1., 1., 0., 1.]),
        mat(2, 2, &[1., 0., 0., 1.]),
        mat(2, 2, &[2., 0., 0., 0.]),
    )
    .expect("fixture is valid")
}

/// Hand-picked depth-1 and depth-2 annihilator bases for all 14 samples.
pub fn basis_r1_t14() -> Mat {
    mat(1, 8, &[-1., 0., -1., 0., 0., -1., 1., 0.])
}

pub fn basis_r2_t14() -> Mat {
    mat(1, 12, &[0., -1., 0., -1., 0., 0., 0., 0., 0., 0., 0., 1.])
}

pub fn example_state_t14() -> Mat {
    mat(
        3,
        15,
        &[
            1., 2., 1., 1., 0., 1., 2., 2., 3., 2., 2., 2., 2., 3., 2., //
            0., 0., 0., 0., 1., 1., 1., 1., 1., 1., 1., 1., 1., 0., 0., //
            1., 0., 0., 0., 1., 2., 2., 2., 2., 2., 2., 2., 2., 1., 0.,
        ],
    )
}

/// Explaining system produced from the hand-picked 14-sample bases.
pub fn three_state_system() -> IsoSystem {
    IsoSystem::new(
        mat(3, 3, &[0., 0., 1., 0., 0., 0., 0., 1., 0.]),
        mat(3, 2, &[1., 0., 0., 1., 0., 1.]),
        mat(2, 3, &[1., 0., 0., 0., 0., 1.]),
        mat(2, 2, &[1., 0., 0., 0.]),
    )
    .expect("fixture is valid")
}

/// Perturbed two-state system: `xi = [-1, -1]`, `eta_0 = [0, 1]`,
/// `eta_1 = [1, 0]`, `zeta = (1, 1)`.
pub fn perturbed_two_state_system() -> IsoSystem {
    IsoSystem::new(
        mat(2, 2, &[-2., -1., -1., -1.]),
        mat(2, 2, &[-2., 2., -2., 2.]),
        mat(2, 2, &[1., 0., 0., 1.]),
        mat(2, 2, &[3., 0., 1., 0.]),
    )
    .expect("fixture is valid")
}

/// State of [`perturbed_two_state_system`] on the first five samples.
pub fn perturbed_state_t5() -> Mat {
    mat(2, 6, &[-1., 0., -1., 1., 0., 1., 0., -1., -1., 0., 1., 1.])
}
