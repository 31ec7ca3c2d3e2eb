use relhur::uncertainty::{gamma_ultrarelativistic, potential_v, solve, sweep, GAMMA_NONRELATIVISTIC, REFERENCE_D};
use relhur::{gamma_bound, RelativisticScale};

fn fin(d: f64) -> RelativisticScale {
    RelativisticScale::finite(d).unwrap()
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `diag` and constant off-diagonal `off` (Sturm sequence).
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { off * off };
        q = a - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = 1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// γ(d) from `-u'' + V u = 2γ u`, `u = q f`, with Dirichlet ends on a
/// uniform grid of `n` interior points, by bisection on the Sturm count.
/// Second-order accurate for finite `d`, where `V` is bounded at the origin.
fn fd_sturm_gamma(d: f64, q_max: f64, n: usize) -> f64 {
    let h = q_max / (n + 1) as f64;
    let diag: Vec<f64> = (1..=n)
        .map(|i| 2.0 / (h * h) + potential_v(i as f64 * h, fin(d)).unwrap())
        .collect();
    let off = -1.0 / (h * h);
    let (mut lo, mut hi) = (0.0, 20.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.25 * (lo + hi)
}

/// Richardson combination of two grids whose spacings differ by 2.
fn fd_oracle(d: f64) -> f64 {
    let coarse = fd_sturm_gamma(d, 12.0, 9_999);
    let fine = fd_sturm_gamma(d, 12.0, 19_999);
    (4.0 * fine - coarse) / 3.0
}

/// Frozen from `fd_oracle(1.0)`.
const FROZEN_D1: f64 = 1.672_106_402_79;

#[test]
fn d1_matches_independent_finite_difference_oracle() {
    let oracle = fd_oracle(1.0);
    assert!((oracle - FROZEN_D1).abs() < 1e-8, "oracle {oracle:.12}");
    let g = gamma_bound(fin(1.0), 1e-8).unwrap();
    assert!((g - FROZEN_D1).abs() < 1e-6, "{g:.12}");
}

#[test]
fn other_points_match_the_oracle() {
    for d in [0.1, 4.0, 10.0] {
        let oracle = fd_oracle(d);
        let g = gamma_bound(fin(d), 1e-8).unwrap();
        assert!((g - oracle).abs() < 1e-6, "d={d}: {g} vs {oracle}");
    }
}

#[test]
fn limits() {
    let g0 = gamma_bound(fin(0.0), 1e-8).unwrap();
    assert!((g0 - GAMMA_NONRELATIVISTIC).abs() < 1e-8);
    let ginf = gamma_bound(RelativisticScale::Infinite, 1e-8).unwrap();
    assert!((ginf - gamma_ultrarelativistic()).abs() < 1e-8);
}

#[test]
fn strict_and_monotone_on_the_decade_grid() {
    let grid = [1e-2, 1e-1, 1.0, 10.0, 100.0];
    let curve = sweep(&grid.map(fin), 1e-7).unwrap();
    assert!(curve.is_strictly_increasing());
    for r in &curve.rows {
        assert!(r.gamma > 1.5 && r.gamma < gamma_ultrarelativistic());
    }
    assert!(curve.rows[0].gamma - 1.5 < 1e-2);
}

#[test]
fn sweep_preserves_order_and_matches_single_solves() {
    let mut ds: Vec<RelativisticScale> = REFERENCE_D.iter().map(|&d| fin(d)).collect();
    ds.push(RelativisticScale::Infinite);
    let curve = sweep(&ds, 1e-7).unwrap();
    for (row, d) in curve.rows.iter().zip(&ds) {
        assert_eq!(row.d, *d);
        assert_eq!(row.gamma, gamma_bound(*d, 1e-7).unwrap());
    }
    let table = curve.to_table();
    assert_eq!(table.rows.len(), 6);
    assert!(table.rows[5].param.is_infinite());
    assert!(sweep(&[fin(2.0), fin(1.0)], 1e-7).is_err());
}

#[test]
fn minimizer_reports_its_own_accuracy() {
    let (point, eig) = solve(fin(2.0), 1e-8).unwrap();
    assert!(point.est_error <= 1e-8);
    assert_eq!(eig.node_count(), 0);
    assert!(solve(fin(2.0), 1e-10).is_err());
}
