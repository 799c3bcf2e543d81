//! Exact identification of linear input-state-output systems from a single
//! finite input-output trajectory.
//!
//! The pipeline: build block-Hankel matrices of the data ([`trajectory`]),
//! read off the rank increments that bound the lag and state dimension of
//! every explaining system ([`invariants`]), construct a minimal explaining
//! system through a ladder of left-kernel complements ([`identification`]),
//! and decide whether the data determine the true system up to isomorphism
//! ([`informativity`]).

pub mod error;
pub mod fixtures;
pub mod harness;
pub mod identification;
pub mod informativity;
pub mod invariants;
pub mod io;
pub mod numerics;
pub mod perturb;
pub mod system;
pub mod trajectory;

pub use error::{Error, Result};
pub use harness::{harness, HarnessReport, SizeCaps, Violations};
pub use identification::{
    build_ladder, construct_state, identify_minimal, identify_with_ladder, AnnihilatorLadder,
    IdentificationResult,
};
pub use informativity::{
    check_fixed_order, check_fundamental_lemma, check_main, InformativityVerdict, PELemmaVerdict,
};
pub use invariants::{
    delta, delta_sequence, invariants, lag_bounds, DataInvariants, LagBounds, PriorBounds,
};
pub use numerics::{Mat, RowSubspace, Tolerance, Vector};
pub use perturb::{perturb_explaining, Perturbation, PerturbationSpec};
pub use system::{Explanation, IsoSystem, Isomorphism, LagStructure};
pub use trajectory::{build_g, build_h, build_j, hankel, IOTrajectory, StateTrajectory};
