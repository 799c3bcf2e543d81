//! Input-output records and the data Hankel matrices built from them.

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, vstack, Mat};

/// A finite input-output record `(u, y)` of `T` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct IOTrajectory {
    u: Mat,
    y: Mat,
}

impl IOTrajectory {
    /// `u` is `m x T`, `y` is `p x T`. Rejects all-zero inputs.
    pub fn new(u: Mat, y: Mat) -> Result<Self> {
        if u.ncols() != y.ncols() {
            return Err(Error::InvalidInput(format!(
                "u has {} samples but y has {}",
                u.ncols(),
                y.ncols()
            )));
        }
        if u.ncols() == 0 {
            return Err(Error::InvalidInput("trajectory needs T >= 1".into()));
        }
        if u.nrows() == 0 || y.nrows() == 0 {
            return Err(Error::InvalidInput(
                "need at least one input and one output channel".into(),
            ));
        }
        ensure_finite(&u, "u")?;
        ensure_finite(&y, "y")?;
        if u.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidInput("input sequence is identically zero".into()));
        }
        Ok(IOTrajectory { u, y })
    }

    pub fn m(&self) -> usize {
        self.u.nrows()
    }

    pub fn p(&self) -> usize {
        self.y.nrows()
    }

    /// Number of samples `T`.
    pub fn len(&self) -> usize {
        self.u.ncols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn u(&self) -> &Mat {
        &self.u
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    /// The first `t` samples.
    pub fn prefix(&self, t: usize) -> Result<IOTrajectory> {
        if t == 0 || t > self.len() {
            return Err(Error::InvalidInput(format!(
                "prefix length {t} outside [1, {}]",
                self.len()
            )));
        }
        IOTrajectory::new(self.u.columns(0, t).into_owned(), self.y.columns(0, t).into_owned())
    }
}

/// A state sequence `x_[0,T]`: `n` rows, `T + 1` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    x: Mat,
}

impl StateTrajectory {
    pub fn new(x: Mat) -> Result<Self> {
        if x.ncols() == 0 {
            return Err(Error::InvalidShape(
                "state sequence needs at least one column".into(),
            ));
        }
        ensure_finite(&x, "state")?;
        Ok(StateTrajectory { x })
    }

    /// The void state of a memoryless system over `t` samples.
    pub fn empty(t: usize) -> Self {
        StateTrajectory {
            x: Mat::zeros(0, t + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of transitions `T` (columns minus one).
    pub fn len(&self) -> usize {
        self.x.ncols() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    /// `x_[0,T-1]`
    pub fn head(&self) -> Mat {
        self.x.columns(0, self.len()).into_owned()
    }

    /// `x_[1,T]`
    pub fn tail(&self) -> Mat {
        self.x.columns(1, self.len()).into_owned()
    }
}

/// Block-Hankel matrix with `k + 1` block rows: block `(r, c)` is column
/// `c + r` of `f`.
pub fn hankel(f: &Mat, k: usize) -> Result<Mat> {
    let len = f.ncols();
    if len == 0 || k > len - 1 {
        return Err(Error::InvalidDepth { k, len });
    }
    let r = f.nrows();
    let cols = len - k;
    Ok(Mat::from_fn((k + 1) * r, cols, |i, c| f[(i % r, c + i / r)]))
}

/// `H_k`: `hankel(u, k)` stacked over `hankel(y, k)`.
pub fn build_h(traj: &IOTrajectory, k: usize) -> Result<Mat> {
    let hu = hankel(traj.u(), k)?;
    let hy = hankel(traj.y(), k)?;
    Ok(vstack(&[&hu, &hy], hu.ncols()))
}

/// `G_k`: `H_k` without its last `p` rows.
pub fn build_g(traj: &IOTrajectory, k: usize) -> Result<Mat> {
    let h = build_h(traj, k)?;
    let keep = h.nrows() - traj.p();
    Ok(h.rows(0, keep).into_owned())
}

/// `J_k(x)`: the first `T - k` state columns stacked over `hankel(u, k)`.
pub fn build_j(x: &StateTrajectory, traj: &IOTrajectory, k: usize) -> Result<Mat> {
    if x.len() != traj.len() {
        return Err(Error::InvalidShape(format!(
            "state has {} columns, expected T + 1 = {}",
            x.len() + 1,
            traj.len() + 1
        )));
    }
    let hu = hankel(traj.u(), k)?;
    let xs = x.x().columns(0, hu.ncols()).into_owned();
    Ok(vstack(&[&xs, &hu], hu.ncols()))
}
