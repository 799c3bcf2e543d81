use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hankelid::harness::random_minimal_system;
use hankelid::numerics::{complement_in, left_kernel, max_abs, rank, subspace_sum, RowSubspace};
use hankelid::{
    build_g, build_h, check_main, hankel, identify_minimal, invariants, IOTrajectory, IsoSystem,
    Mat, PriorBounds, Tolerance, Vector,
};

fn uniform(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
}

/// A small random minimal system driven by a random input from a random state.
fn sampled(seed: u64, n: usize, m: usize, p: usize, t: usize) -> Option<(IsoSystem, IOTrajectory)> {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = random_minimal_system(&mut rng, n, m, p, &tol)?;
    let u = uniform(&mut rng, m, t);
    let x0 = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let (y, _) = sys.simulate(&x0, &u).ok()?;
    Some((sys, IOTrajectory::new(u, y).ok()?))
}

fn system_case() -> impl Strategy<Value = (u64, usize, usize, usize, usize)> {
    (any::<u64>(), 1usize..=3, 1usize..=2, 1usize..=2, 2usize..=20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hankel_blocks_are_shifted_columns(seed in any::<u64>(), r in 1usize..=3, len in 1usize..=10, k in 0usize..=9) {
        prop_assume!(k < len);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = uniform(&mut rng, r, len);
        let h = hankel(&f, k).unwrap();
        prop_assert_eq!(h.shape(), ((k + 1) * r, len - k));
        for blk in 0..=k {
            for c in 0..len - k {
                prop_assert_eq!(h.view((blk * r, c), (r, 1)).into_owned(), f.column(c + blk).into_owned());
            }
        }
    }

    #[test]
    fn g_is_h_without_last_output_block((seed, n, m, p, t) in system_case(), k in 0usize..=5) {
        let Some((_, traj)) = sampled(seed, n, m, p, t) else { return Ok(()) };
        prop_assume!(k < t);
        let h = build_h(&traj, k).unwrap();
        let g = build_g(&traj, k).unwrap();
        prop_assert_eq!(g.nrows(), h.nrows() - p);
        prop_assert_eq!(g, h.rows(0, h.nrows() - p).into_owned());
    }

    #[test]
    fn data_invariants_bound_the_true_system((seed, n, m, p, t) in system_case()) {
        let tol = Tolerance::default();
        let Some((sys, traj)) = sampled(seed, n, m, p, t) else { return Ok(()) };
        let inv = invariants(&traj, &tol);
        let rho = sys.lag_structure(&tol);
        for (i, &d) in inv.delta.iter().enumerate() {
            prop_assert!(rho.get(i as isize - 1) >= d, "ρ below δ at k = {}", i as isize - 1);
        }
        prop_assert!(inv.q <= sys.lag(&tol));
        prop_assert!(inv.n_min <= sys.n());
        prop_assert_eq!(inv.n_min, inv.delta[1..].iter().sum::<usize>());
    }

    #[test]
    fn identified_system_is_minimal_for_the_data((seed, n, m, p, t) in system_case()) {
        let tol = Tolerance::default();
        let Some((_, traj)) = sampled(seed, n, m, p, t) else { return Ok(()) };
        let inv = invariants(&traj, &tol);
        let res = identify_minimal(&traj, &tol).unwrap();
        prop_assert_eq!(res.system.n(), inv.n_min);
        prop_assert!(res.system.lag(&tol) <= inv.l_min);
        prop_assert!(res.system.explains(&traj, &tol).unwrap().explains);
    }

    #[test]
    fn admissible_lower_bounds_do_not_change_the_verdict(
        (seed, n, m, p, t) in system_case(),
        lp in 0usize..=4, extra in 0usize..=3, a in 0usize..=4, b in 0usize..=4,
    ) {
        let tol = Tolerance::default();
        let Some((_, traj)) = sampled(seed, n, m, p, t) else { return Ok(()) };
        let np = lp + extra;
        let inv = invariants(&traj, &tol);
        let lm = a.min(inv.l_min).min(lp);
        let nm = b.min(inv.n_min).min(np).max(lm);
        prop_assume!(nm <= inv.n_min);
        let plain = check_main(&traj, &PriorBounds::upper(lp, np).unwrap(), &tol);
        let tight = check_main(&traj, &PriorBounds::new(lm, lp, nm, np).unwrap(), &tol);
        prop_assert_eq!(plain.informative, tight.informative);
    }

    #[test]
    fn left_kernel_and_rank_split_the_rows(seed in any::<u64>(), r in 1usize..=7, c in 1usize..=7, k in 0usize..=7) {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = k.min(r).min(c);
        let m = uniform(&mut rng, r, k) * uniform(&mut rng, k, c);
        let lk = left_kernel(&m, &tol).unwrap();
        prop_assert_eq!(lk.dim() + rank(&m, &tol).unwrap(), r);
        prop_assert!(max_abs(&(lk.basis() * &m)) <= 1e-9);
    }

    #[test]
    fn complement_fills_the_outer_space(seed in any::<u64>(), d in 1usize..=6, outer in 0usize..=6, inner in 0usize..=6) {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outer_dim = outer.min(d);
        let inner_dim = inner.min(outer_dim);
        let w = RowSubspace::row_space(&uniform(&mut rng, outer_dim, d), &tol).unwrap();
        let v = RowSubspace::row_space(&(uniform(&mut rng, inner_dim, outer_dim) * w.basis()), &tol).unwrap();
        let comp = complement_in(&v, &w, &tol).unwrap();
        prop_assert_eq!(comp.dim() + v.dim(), w.dim());
        prop_assert!(w.contains(&comp, &tol));
        let sum = subspace_sum(&v, &comp, &tol).unwrap();
        prop_assert_eq!(sum.dim(), w.dim());
    }

    #[test]
    fn simulation_is_linear((seed, n, m, p, t) in system_case()) {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(sys) = random_minimal_system(&mut rng, n, m, p, &tol) else { return Ok(()) };
        let (u1, u2) = (uniform(&mut rng, m, t), uniform(&mut rng, m, t));
        let x1 = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let x2 = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let (y1, _) = sys.simulate(&x1, &u1).unwrap();
        let (y2, _) = sys.simulate(&x2, &u2).unwrap();
        let (y, _) = sys.simulate(&(&x1 + &x2), &(&u1 + &u2)).unwrap();
        prop_assert!(max_abs(&(y - y1 - y2)) <= 1e-9);
    }
}
