use proptest::prelude::*;
use shocklab::constants::ContractionConfig;
use shocklab::drift::{advance_drift, characteristics_drift_burgers, filippov_velocity, interface_traces};
use shocklab::harness::{ScenarioConfig, Simulation};
use shocklab::hugoniot::ShockTriple;
use shocklab::systems::Burgers;
use shocklab::{FieldSnapshot, Grid1D, StateVector};

fn s(u: f64) -> StateVector {
    StateVector::scalar(u)
}

fn burgers_constants() -> ContractionConfig {
    let shock = ShockTriple::new(&Burgers, s(1.0), s(-1.0), 0.0).unwrap();
    ContractionConfig::from_parts(shock, 4.0 / 3.0, 0.332, 0.1, 1.0, 1.0 / 512.0)
}

fn field(vals: &[f64]) -> FieldSnapshot {
    let grid = Grid1D::new(-1.0, 1.0, vals.len()).unwrap();
    FieldSnapshot::new(0.0, grid, vals.iter().map(|v| s(*v)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn drift_velocity_is_sandwiched(
        old in prop::collection::vec(-1.5f64..1.5, 40),
        new in prop::collection::vec(-1.5f64..1.5, 40),
        x in -0.5f64..0.5,
        dt in 0.0f64..0.02,
    ) {
        let cfg = burgers_constants();
        let sv = cfg.references(&Burgers).unwrap();
        let (a, b) = (field(&old), field(&new));
        let h = 4.0 * a.grid.dx();
        let st = advance_drift(&Burgers, &sv, &a, &b, x, dt, h).unwrap();
        prop_assert!(st.vmin - 1e-8 <= st.xdot && st.xdot <= st.vmax + 1e-8, "{:?}", st);
        prop_assert!(st.xdot <= cfg.v);
        let w = filippov_velocity(&Burgers, &sv, &a, x, h).unwrap();
        prop_assert!(w.vmin <= w.mean && w.mean <= w.vmax);
    }
}

#[test]
fn smeared_shock_traces_skip_the_layer() {
    // 1 | 0.9 0.3 -0.4 -0.95 | -1 with the interface inside the smeared cells
    let mut vals = vec![1.0; 20];
    vals.extend([0.9, 0.3, -0.4, -0.95]);
    vals.extend(vec![-1.0; 20]);
    let f = field(&vals);
    let x = f.grid.edge(22);
    let tr = interface_traces(&f, x, 2).unwrap();
    assert!((tr.left[0] - 1.0).abs() < 1e-6 && (tr.right[0] + 1.0).abs() < 1e-6, "{tr:?}");
    assert!(interface_traces(&f, f.grid.x_min, 2).is_err());
}

#[test]
fn characteristics_converge_under_step_doubling() {
    let coarse = characteristics_drift_burgers(0.1, 0.01, 10.0, 2000).unwrap();
    let fine = characteristics_drift_burgers(0.1, 0.01, 10.0, 4000).unwrap();
    let (a, b) = (coarse.x.last().unwrap(), fine.x.last().unwrap());
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

fn bump_scenario(n: usize) -> ScenarioConfig {
    ScenarioConfig::from_json(&format!(
        r#"{{
            "system": {{"name": "burgers"}},
            "shock": {{"left": [1.0], "right": [-1.0], "sigma": 0.0}},
            "grid": {{"x_min": -5, "x_max": 5, "n_cells": {n}}},
            "solver": {{"t_end": 1.5}},
            "initial": {{"kind": "shock_plus_bump", "amplitude": 0.3, "width": 0.5, "center": -1.0}},
            "constants": {{"v": 1.3333333333333333, "a": 0.001953125}}
        }}"#
    ))
    .unwrap()
}

#[test]
fn window_refinement_moves_the_shift_by_order_dx() {
    let mut ends = Vec::new();
    for n in [1000, 2000, 4000] {
        let mut sim = Simulation::new(&bump_scenario(n)).unwrap();
        sim.run().unwrap();
        ends.push(sim.x);
    }
    let dx = 10.0 / 1000.0;
    assert!((ends[0] - ends[1]).abs() <= 2.0 * dx, "{ends:?}");
    assert!((ends[1] - ends[2]).abs() <= dx, "{ends:?}");
}
