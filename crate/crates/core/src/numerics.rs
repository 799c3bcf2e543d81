//! Dense-matrix primitives shared by the whole pipeline: numerical rank,
//! left kernels, row subspaces and their algebra, and row-wise least squares.
//!
//! Void matrices (zero rows and/or zero columns) are ordinary values here.
//! Their rank is zero, the left kernel of an `r x 0` matrix is all of
//! `R^{1 x r}`, and products with an empty inner dimension are zero.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Cutoffs used for every rank decision and residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Singular values below `rank_rel * max(rows, cols) * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Largest admissible absolute residual entry in linear solves.
    pub residual_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-10,
            residual_abs: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, residual_abs: f64) -> Result<Self> {
        if !(rank_rel.is_finite() && rank_rel > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rank_rel must be positive, got {rank_rel}"
            )));
        }
        if !(residual_abs.is_finite() && residual_abs > 0.0) {
            return Err(Error::InvalidInput(format!(
                "residual_abs must be positive, got {residual_abs}"
            )));
        }
        Ok(Tolerance {
            rank_rel,
            residual_abs,
        })
    }

    pub fn with_rank_rel(self, rank_rel: f64) -> Result<Self> {
        Tolerance::new(rank_rel, self.residual_abs)
    }

    fn cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_rel * rows.max(cols) as f64 * sigma_max
    }
}

pub(crate) fn ensure_finite(m: &Mat, what: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has non-finite entries")))
    }
}

/// Max-abs entry; zero for void matrices.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Build a matrix from row slices. `cols` is needed so that void rows keep
/// their declared width.
pub fn mat_from_rows(rows: &[Vec<f64>], cols: usize) -> Result<Mat> {
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::InvalidShape(format!(
            "row of length {} where {} was expected",
            bad.len(),
            cols
        )));
    }
    Ok(Mat::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn mat_to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Stack matrices vertically. All blocks must have `cols` columns.
pub fn vstack(blocks: &[&Mat], cols: usize) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        debug_assert_eq!(b.ncols(), cols);
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(*b);
        r += b.nrows();
    }
    out
}

/// Stack matrices horizontally. All blocks must have `rows` rows.
pub fn hstack(blocks: &[&Mat], rows: usize) -> Mat {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        debug_assert_eq!(b.nrows(), rows);
        out.view_mut((0, c), (rows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Product honouring the void conventions (nalgebra already yields zeros
/// for an empty inner dimension).
pub(crate) fn mul(a: &Mat, b: &Mat) -> Mat {
    debug_assert_eq!(a.ncols(), b.nrows());
    if a.nrows() == 0 || b.ncols() == 0 || a.ncols() == 0 {
        return Mat::zeros(a.nrows(), b.ncols());
    }
    a * b
}

/// Divide every nonzero column by its Euclidean norm. Rank, left kernel and
/// row relations are unchanged; used on data matrices whose columns are
/// time windows of possibly fast-growing signals.
pub fn normalize_columns(m: &Mat) -> Mat {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    out
}

/// Residual of `target ≈ fitted` where `fitted` was computed from
/// `regressor`, measured per column `t` as
/// `|target_t - fitted_t|_inf / max(1, |target_t|_2, |regressor_t|_2)`.
/// Absolute for unit-scale data, relative per time step for large data.
pub fn column_scaled_residual(target: &Mat, fitted: &Mat, regressor: &Mat) -> f64 {
    debug_assert_eq!(target.shape(), fitted.shape());
    debug_assert_eq!(target.ncols(), regressor.ncols());
    let mut worst = 0.0_f64;
    for t in 0..target.ncols() {
        let scale = 1.0_f64
            .max(target.column(t).norm())
            .max(regressor.column(t).norm());
        let r = (target.column(t) - fitted.column(t)).amax();
        worst = worst.max(r / scale);
    }
    worst
}

struct SortedSvd {
    values: Vec<f64>,
    u: Option<Mat>,
    v_t: Option<Mat>,
}

fn to_faer(m: &Mat) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> Mat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD with singular values in descending order. Caller guarantees a
/// non-void input. With `full_u` the left factor is square.
fn svd_sorted(m: &Mat, want_u: bool, want_v: bool) -> SortedSvd {
    svd_impl(m, want_u, want_v, false)
}

fn svd_impl(m: &Mat, want_u: bool, want_v: bool, full_u: bool) -> SortedSvd {
    let fm = to_faer(m);
    let (values, u, v) = if full_u {
        let svd = fm.svd().expect("SVD converges on finite input");
        let s = svd.S();
        let k = m.nrows().min(m.ncols());
        let values: Vec<f64> = (0..k).map(|i| s[i]).collect();
        (values, from_faer(svd.U()), from_faer(svd.V().get(.., ..k)))
    } else {
        let svd = fm.thin_svd().expect("SVD converges on finite input");
        let s = svd.S();
        let values: Vec<f64> = (0..s.dim()).map(|i| s[i]).collect();
        (values, from_faer(svd.U()), from_faer(svd.V()))
    };
    let k = values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let sorted = order.iter().map(|&i| values[i]).collect();
    // Columns past the thin rank block of a square U keep their position.
    let u = want_u.then(|| {
        Mat::from_fn(u.nrows(), u.ncols(), |r, c| {
            u[(r, if c < k { order[c] } else { c })]
        })
    });
    let v_t = want_v.then(|| Mat::from_fn(k, v.nrows(), |r, c| v[(c, order[r])]));
    SortedSvd {
        values: sorted,
        u,
        v_t,
    }
}

fn count_above(values: &[f64], cutoff: f64) -> usize {
    values.iter().filter(|&&s| s > cutoff).count()
}

/// Numerical rank with the relative cutoff of [`Tolerance`].
pub fn rank(m: &Mat, tol: &Tolerance) -> Result<usize> {
    ensure_finite(m, "matrix")?;
    Ok(rank_unchecked(m, tol))
}

pub(crate) fn rank_unchecked(m: &Mat, tol: &Tolerance) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = svd_sorted(m, false, false);
    let smax = s.values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    count_above(&s.values, tol.cutoff(m.nrows(), m.ncols(), smax))
}

/// Moore-Penrose pseudoinverse using the rank cutoff.
pub fn pinv(m: &Mat, tol: &Tolerance) -> Mat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Mat::zeros(c, r);
    }
    let s = svd_sorted(m, true, true);
    let smax = s.values.first().copied().unwrap_or(0.0);
    let u = s.u.expect("u requested");
    let v_t = s.v_t.expect("v_t requested");
    let mut out = Mat::zeros(c, r);
    if smax == 0.0 {
        return out;
    }
    let cutoff = tol.cutoff(r, c, smax);
    for (i, &sv) in s.values.iter().enumerate() {
        if sv <= cutoff {
            break;
        }
        let vi = v_t.row(i).transpose();
        let ui = u.column(i).transpose();
        out += (vi * ui) / sv;
    }
    out
}

/// First entry with magnitude above `eps` made positive, row by row.
fn canonical_signs(mut basis: Mat, eps: f64) -> Mat {
    for i in 0..basis.nrows() {
        let lead = (0..basis.ncols())
            .map(|j| basis[(i, j)])
            .find(|v| v.abs() > eps);
        if let Some(v) = lead {
            if v < 0.0 {
                basis.row_mut(i).neg_mut();
            }
        }
    }
    basis
}

/// A subspace of `R^{1 x ambient_dim}` held through an orthonormal row basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSubspace {
    ambient_dim: usize,
    basis: Mat,
}

impl RowSubspace {
    pub fn zero(ambient_dim: usize) -> Self {
        RowSubspace {
            ambient_dim,
            basis: Mat::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        RowSubspace {
            ambient_dim,
            basis: Mat::identity(ambient_dim, ambient_dim),
        }
    }

    /// Row space of an arbitrary spanning matrix.
    pub fn row_space(spanning: &Mat, tol: &Tolerance) -> Result<Self> {
        ensure_finite(spanning, "spanning set")?;
        let d = spanning.ncols();
        if spanning.nrows() == 0 || d == 0 {
            return Ok(RowSubspace::zero(d));
        }
        let s = svd_sorted(spanning, false, true);
        let smax = s.values[0];
        if smax == 0.0 {
            return Ok(RowSubspace::zero(d));
        }
        let r = count_above(&s.values, tol.cutoff(spanning.nrows(), d, smax));
        let v_t = s.v_t.expect("v_t requested");
        let basis = v_t.rows(0, r).into_owned();
        Ok(RowSubspace {
            ambient_dim: d,
            basis: canonical_signs(basis, tol.residual_abs),
        })
    }

    /// Wrap rows that are already orthonormal. Checked to `tol.residual_abs`.
    pub fn from_orthonormal(basis: Mat, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&basis, "basis")?;
        let gram = mul(&basis, &basis.transpose());
        let k = basis.nrows();
        let dev = max_abs(&(gram - Mat::identity(k, k)));
        if dev > tol.residual_abs {
            return Err(Error::InvalidInput(format!(
                "basis rows are not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(RowSubspace {
            ambient_dim: basis.ncols(),
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn into_basis(self) -> Mat {
        self.basis
    }

    /// Max-abs distance of each row of `rows` from this subspace.
    pub fn distance_of_rows(&self, rows: &Mat) -> f64 {
        debug_assert_eq!(rows.ncols(), self.ambient_dim);
        let proj = mul(&mul(rows, &self.basis.transpose()), &self.basis);
        max_abs(&(rows - proj))
    }

    pub fn contains(&self, other: &RowSubspace, tol: &Tolerance) -> bool {
        other.ambient_dim == self.ambient_dim
            && self.distance_of_rows(&other.basis) <= tol.residual_abs
    }

    /// Extend every vector by `extra` trailing zeros.
    pub fn pad_zeros(&self, extra: usize) -> RowSubspace {
        let mut basis = Mat::zeros(self.dim(), self.ambient_dim + extra);
        basis
            .view_mut((0, 0), (self.dim(), self.ambient_dim))
            .copy_from(&self.basis);
        RowSubspace {
            ambient_dim: self.ambient_dim + extra,
            basis,
        }
    }
}

/// Orthonormal basis of `{v : v M = 0}`, of dimension `rows(M) - rank(M)`.
pub fn left_kernel(m: &Mat, tol: &Tolerance) -> Result<RowSubspace> {
    ensure_finite(m, "matrix")?;
    let (r, c) = m.shape();
    if r == 0 {
        return Ok(RowSubspace::zero(0));
    }
    if c == 0 {
        return Ok(RowSubspace::full(r));
    }
    let s = svd_impl(m, true, false, true);
    let smax = s.values[0];
    let rk = if smax == 0.0 {
        0
    } else {
        count_above(&s.values, tol.cutoff(r, c, smax))
    };
    let u = s.u.expect("u requested");
    let basis = u.columns(rk, r - rk).transpose();
    Ok(RowSubspace {
        ambient_dim: r,
        basis: canonical_signs(basis, tol.residual_abs),
    })
}

/// A complement `C` of `inner` inside `outer` with `outer = inner ⊕ C` and
/// `C ⊥ inner`.
pub fn complement_in(
    inner: &RowSubspace,
    outer: &RowSubspace,
    tol: &Tolerance,
) -> Result<RowSubspace> {
    if inner.ambient_dim != outer.ambient_dim {
        return Err(Error::InvalidShape(format!(
            "ambient dimensions differ: {} vs {}",
            inner.ambient_dim, outer.ambient_dim
        )));
    }
    let dist = outer.distance_of_rows(&inner.basis);
    if dist > tol.residual_abs {
        return Err(Error::NotContained(format!(
            "inner subspace leaves outer by {dist:.3e}"
        )));
    }
    let d = outer.ambient_dim;
    let target = outer.dim() - inner.dim();
    if target == 0 {
        return Ok(RowSubspace::zero(d));
    }
    let o = &outer.basis;
    let i = &inner.basis;
    let projected = o - mul(&mul(o, &i.transpose()), i);
    let s = svd_sorted(&projected, false, true);
    let v_t = s.v_t.expect("v_t requested");
    let basis = v_t.rows(0, target).into_owned();
    Ok(RowSubspace {
        ambient_dim: d,
        basis: canonical_signs(basis, tol.residual_abs),
    })
}

/// Shift `[v1 | v2] -> [0_m | v1 | 0_p | v2]` with `v1` holding the input
/// coordinates and `v2` the output coordinates.
pub fn sigma_shift(v: &RowSubspace, m: usize, p: usize) -> Result<RowSubspace> {
    let block = m + p;
    if block == 0 || !v.ambient_dim.is_multiple_of(block) {
        return Err(Error::InvalidShape(format!(
            "ambient dimension {} is not a multiple of m + p = {}",
            v.ambient_dim, block
        )));
    }
    let kappa = v.ambient_dim / block;
    let new_dim = (kappa + 1) * block;
    let u_width = kappa * m;
    let y_width = kappa * p;
    let mut basis = Mat::zeros(v.dim(), new_dim);
    for r in 0..v.dim() {
        for j in 0..u_width {
            basis[(r, m + j)] = v.basis[(r, j)];
        }
        for j in 0..y_width {
            basis[(r, (kappa + 1) * m + p + j)] = v.basis[(r, u_width + j)];
        }
    }
    Ok(RowSubspace {
        ambient_dim: new_dim,
        basis,
    })
}

pub fn subspace_sum(a: &RowSubspace, b: &RowSubspace, tol: &Tolerance) -> Result<RowSubspace> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::InvalidShape(format!(
            "ambient dimensions differ: {} vs {}",
            a.ambient_dim, b.ambient_dim
        )));
    }
    let stacked = vstack(&[&a.basis, &b.basis], a.ambient_dim);
    RowSubspace::row_space(&stacked, tol)
}

/// Solve `target ≈ X · regressor` in least squares. Returns `X` and the
/// max-abs entry of `target - X · regressor`.
pub fn lstsq_rows(target: &Mat, regressor: &Mat, tol: &Tolerance) -> Result<(Mat, f64)> {
    if target.ncols() != regressor.ncols() {
        return Err(Error::InvalidShape(format!(
            "target has {} columns, regressor has {}",
            target.ncols(),
            regressor.ncols()
        )));
    }
    ensure_finite(target, "target")?;
    ensure_finite(regressor, "regressor")?;
    let solution = mul(target, &pinv(regressor, tol));
    let residual = max_abs(&(target - mul(&solution, regressor)));
    Ok((solution, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    #[test]
    fn rank_basic() {
        let tol = Tolerance::default();
        assert_eq!(rank(&Mat::identity(3, 3), &tol).unwrap(), 3);
        assert_eq!(rank(&Mat::zeros(0, 5), &tol).unwrap(), 0);
        assert_eq!(rank(&Mat::zeros(5, 0), &tol).unwrap(), 0);
        assert_eq!(rank(&Mat::zeros(3, 3), &tol).unwrap(), 0);
        // H_0 of the running-example data truncated to two samples.
        let h0 = m(&[&[1., 1.], &[0., 0.], &[2., 3.], &[1., 0.]]);
        assert_eq!(rank(&h0, &tol).unwrap(), 2);
    }

    #[test]
    fn rank_rejects_nan() {
        let mut a = Mat::identity(2, 2);
        a[(0, 1)] = f64::NAN;
        assert!(matches!(
            rank(&a, &Tolerance::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn left_kernel_examples() {
        let tol = Tolerance::default();
        let k = left_kernel(&m(&[&[1., 0.], &[0., 0.]]), &tol).unwrap();
        assert_eq!(k.dim(), 1);
        assert!((k.basis()[(0, 0)]).abs() < 1e-14);
        assert!((k.basis()[(0, 1)] - 1.0).abs() < 1e-14);

        assert_eq!(left_kernel(&Mat::identity(2, 2), &tol).unwrap().dim(), 0);

        let col = m(&[&[1.], &[0.], &[2.], &[1.]]);
        let k = left_kernel(&col, &tol).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(max_abs(&(k.basis() * &col)) < 1e-12);
    }

    #[test]
    fn left_kernel_void_conventions() {
        let tol = Tolerance::default();
        assert_eq!(left_kernel(&Mat::zeros(3, 0), &tol).unwrap().dim(), 3);
        assert_eq!(left_kernel(&Mat::zeros(0, 3), &tol).unwrap().dim(), 0);
    }

    #[test]
    fn left_kernel_is_deterministic() {
        let tol = Tolerance::default();
        let a = m(&[&[1., 2.], &[2., 4.], &[0., 1.], &[3., 1.]]);
        let k1 = left_kernel(&a, &tol).unwrap();
        let k2 = left_kernel(&a, &tol).unwrap();
        assert_eq!(k1, k2);
        for i in 0..k1.dim() {
            let lead = k1.basis().row(i).iter().copied().find(|v| v.abs() > 1e-8);
            assert!(lead.unwrap() > 0.0);
        }
    }

    #[test]
    fn complement_examples() {
        let tol = Tolerance::default();
        let e1 = RowSubspace::row_space(&m(&[&[1., 0.]]), &tol).unwrap();
        let c = complement_in(&e1, &RowSubspace::full(2), &tol).unwrap();
        assert_eq!(c.dim(), 1);
        assert!((c.basis()[(0, 1)] - 1.0).abs() < 1e-14);

        let c = complement_in(&e1, &e1, &tol).unwrap();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn complement_requires_containment() {
        let tol = Tolerance::default();
        let e1 = RowSubspace::row_space(&m(&[&[1., 0., 0.]]), &tol).unwrap();
        let e2 = RowSubspace::row_space(&m(&[&[0., 1., 0.]]), &tol).unwrap();
        assert!(matches!(
            complement_in(&e1, &e2, &tol),
            Err(Error::NotContained(_))
        ));
    }

    #[test]
    fn complement_of_input_kernel_at_one_sample() {
        // lk G_0 x 0_p inside lk H_0 for the first running-example sample.
        let tol = Tolerance::default();
        let h0 = m(&[&[1.], &[0.], &[2.], &[1.]]);
        let g0 = m(&[&[1.], &[0.]]);
        let outer = left_kernel(&h0, &tol).unwrap();
        let inner = left_kernel(&g0, &tol).unwrap().pad_zeros(2);
        let s0 = complement_in(&inner, &outer, &tol).unwrap();
        assert_eq!(s0.dim(), 2);
        assert!(max_abs(&(s0.basis() * &h0)) < 1e-12);
        assert!(max_abs(&(s0.basis() * inner.basis().transpose())) < 1e-12);
    }

    #[test]
    fn sigma_shift_examples() {
        let tol = Tolerance::default();
        let z = sigma_shift(&RowSubspace::zero(2), 1, 1).unwrap();
        assert_eq!((z.dim(), z.ambient_dim()), (0, 4));

        let v = RowSubspace::row_space(&m(&[&[1., 2.]]), &tol).unwrap();
        let s = sigma_shift(&v, 1, 1).unwrap();
        let expected = RowSubspace::row_space(&m(&[&[0., 1., 0., 2.]]), &tol).unwrap();
        assert!(s.contains(&expected, &tol) && expected.contains(&s, &tol));

        let e = RowSubspace::row_space(&m(&[&[1., 0.]]), &tol).unwrap();
        let s2 = sigma_shift(&sigma_shift(&e, 1, 1).unwrap(), 1, 1).unwrap();
        assert_eq!(s2.ambient_dim(), 6);
        let expected = m(&[&[0., 0., 1., 0., 0., 0.]]);
        assert!(max_abs(&(s2.basis() - expected)) < 1e-14);

        assert!(matches!(
            sigma_shift(&RowSubspace::zero(3), 1, 1),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn subspace_sum_examples() {
        let tol = Tolerance::default();
        let e1 = RowSubspace::row_space(&m(&[&[1., 0., 0.]]), &tol).unwrap();
        let e2 = RowSubspace::row_space(&m(&[&[0., 1., 0.]]), &tol).unwrap();
        assert_eq!(subspace_sum(&e1, &e2, &tol).unwrap().dim(), 2);
        assert_eq!(subspace_sum(&e1, &e1, &tol).unwrap().dim(), 1);

        let a = RowSubspace::row_space(&m(&[&[1., 1.]]), &tol).unwrap();
        let b = RowSubspace::row_space(&m(&[&[1., -1.]]), &tol).unwrap();
        assert_eq!(subspace_sum(&a, &b, &tol).unwrap().dim(), 2);

        assert!(subspace_sum(&e1, &RowSubspace::zero(2), &tol).is_err());
    }

    #[test]
    fn lstsq_examples() {
        let tol = Tolerance::default();
        let i2 = Mat::identity(2, 2);
        let (x, r) = lstsq_rows(&i2, &i2, &tol).unwrap();
        assert!(max_abs(&(x - &i2)) < 1e-14 && r < 1e-14);

        let reg = m(&[&[1., 2., 0.], &[0., 1., 3.]]);
        let (x, r) = lstsq_rows(&(&reg * 2.0), &reg, &tol).unwrap();
        assert!(max_abs(&(x - i2 * 2.0)) < 1e-12 && r < 1e-12);
    }

    #[test]
    fn lstsq_void_regressor() {
        let tol = Tolerance::default();
        let target = m(&[&[1., 2.]]);
        let (x, r) = lstsq_rows(&target, &Mat::zeros(0, 2), &tol).unwrap();
        assert_eq!(x.shape(), (1, 0));
        assert_eq!(r, 2.0);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-8).is_err());
        assert!(Tolerance::new(1e-10, -1.0).is_err());
        assert!(Tolerance::new(1e-10, 1e-8).is_ok());
    }
}
