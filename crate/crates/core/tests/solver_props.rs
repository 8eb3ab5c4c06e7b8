use std::sync::Arc;

use proptest::prelude::*;
use shocklab::solver::{initial_data, step, total_entropy, Boundary, InitialData, SolverConfig};
use shocklab::systems::{Burgers, ConservationLaw, FullEuler, IsentropicEuler, PowerLaw};
use shocklab::{FieldSnapshot, Grid1D, StateVector};

fn periodic(t_end: f64) -> SolverConfig {
    SolverConfig {
        cfl: 0.45,
        scheme: None,
        boundary: Boundary::Periodic,
        t_end,
    }
}

fn run(law: &dyn ConservationLaw, mut f: FieldSnapshot, cfg: &SolverConfig, mut each: impl FnMut(&FieldSnapshot, &FieldSnapshot)) -> FieldSnapshot {
    while f.time < cfg.t_end {
        let next = step(law, &f, cfg).unwrap();
        each(&f, &next);
        f = next;
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn periodic_updates_conserve(vals in prop::collection::vec(0.3f64..2.0, 16..64), vel in prop::collection::vec(-1.0f64..1.0, 64)) {
        let n = vals.len();
        let grid = Grid1D::new(0.0, 1.0, n).unwrap();
        let cfg = periodic(0.2);
        let b = FieldSnapshot::new(0.0, grid, vals.iter().map(|v| StateVector::scalar(v - 1.0)).collect()).unwrap();
        run(&Burgers, b, &cfg, |a, c| {
            assert!((a.total() - c.total()).max_abs() < 1e-12);
        });
        let eu = FullEuler::new(1.4).unwrap();
        let cells = (0..n).map(|i| eu.from_physical(&[vals[i], vel[i], vals[(i + 3) % n]])).collect();
        let e = FieldSnapshot::new(0.0, grid, cells).unwrap();
        run(&eu, e, &cfg, |a, c| {
            assert!((a.total() - c.total()).max_abs() < 1e-12);
        });
        let iso = IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).unwrap()));
        let cells = (0..n).map(|i| StateVector::new(&[vals[i], vals[i] * vel[i]])).collect();
        let f = FieldSnapshot::new(0.0, grid, cells).unwrap();
        run(&iso, f, &cfg, |a, c| {
            assert!((a.total() - c.total()).max_abs() < 1e-12);
        });
    }

    #[test]
    fn burgers_entropy_does_not_increase(vals in prop::collection::vec(-2.0f64..2.0, 16..64)) {
        let grid = Grid1D::new(0.0, 1.0, vals.len()).unwrap();
        let f = FieldSnapshot::new(0.0, grid, vals.iter().map(|v| StateVector::scalar(*v)).collect()).unwrap();
        run(&Burgers, f, &periodic(0.5), |a, c| {
            assert!(total_entropy(&Burgers, c) <= total_entropy(&Burgers, a) + 1e-13);
        });
    }
}

/// L1 distance to the travelling step (2, 0), speed (4 - 0) / 2 = 2, started at 0.
fn burgers_l1_error(n: usize) -> f64 {
    let grid = Grid1D::new(-1.0, 3.0, n).unwrap();
    let (ul, ur) = (StateVector::scalar(2.0), StateVector::scalar(0.0));
    let f = initial_data(&Burgers, &InitialData::PureShock { offset: 0.0 }, ul, ur, &grid).unwrap();
    let cfg = SolverConfig::far_field(ul, ur, 1.0);
    let f = run(&Burgers, f, &cfg, |_, _| {});
    let dx = grid.dx();
    (0..n)
        .map(|i| {
            let (a, b) = (grid.edge(i), grid.edge(i + 1));
            let left = (2.0f64.min(b) - a).clamp(0.0, dx) / dx;
            let exact = 2.0 * left;
            (f.cells[i][0] - exact).abs() * dx
        })
        .sum()
}

#[test]
fn refinement_halves_l1_error() {
    let errs: Vec<f64> = [200, 400, 800].iter().map(|n| burgers_l1_error(*n)).collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((ratio - 0.5).abs() <= 0.15, "{errs:?}");
    }
}
