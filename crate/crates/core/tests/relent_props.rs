use std::sync::Arc;

use proptest::prelude::*;
use shocklab::relent::{pseudo_norm, rel_entropy, rel_flux, split_integral, PseudoNormConfig};
use shocklab::systems::{Burgers, ConservationLaw, DomainBox, FullEuler, IsentropicEuler, PowerLaw};
use shocklab::{FieldSnapshot, Grid1D, StateVector};

fn s(u: f64) -> StateVector {
    StateVector::scalar(u)
}

fn laws() -> Vec<(Box<dyn ConservationLaw>, DomainBox)> {
    vec![
        (Box::new(Burgers), DomainBox::new(vec![(-3.0, 3.0)]).unwrap()),
        (
            Box::new(IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).unwrap()))),
            DomainBox::new(vec![(0.2, 3.0), (-2.0, 2.0)]).unwrap(),
        ),
        (
            Box::new(FullEuler::new(1.4).unwrap()),
            DomainBox::new(vec![(0.1, 3.0), (-2.0, 2.0), (0.1, 3.0)]).unwrap(),
        ),
    ]
}

fn random_field(vals: &[f64]) -> FieldSnapshot {
    let grid = Grid1D::new(-1.0, 1.0, vals.len()).unwrap();
    FieldSnapshot::new(0.0, grid, vals.iter().map(|v| s(*v)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>()) {
        for (law, dom) in laws() {
            let pts = dom.sample(&*law, 16, seed);
            for u in &pts {
                for v in &pts {
                    let e = rel_entropy(&*law, u, v).unwrap();
                    prop_assert!(e >= -1e-12, "{}: {e}", law.name());
                    if u == v {
                        prop_assert!(e.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn burgers_relative_quantities(u in -3.0f64..3.0, v in -3.0f64..3.0) {
        let e = rel_entropy(&Burgers, &s(u), &s(v)).unwrap();
        prop_assert!((e - 0.5 * (u - v).powi(2)).abs() < 1e-14);
        // F(u, v) = (u - v)^2 (2u + v) / 3 for A = u^2, eta = u^2 / 2
        let f = rel_flux(&Burgers, &s(u), &s(v)).unwrap();
        let exact = (u - v).powi(2) * (2.0 * u + v) / 3.0;
        prop_assert!((f - exact).abs() < 1e-12 * (1.0 + exact.abs()), "{f} vs {exact}");
    }

    #[test]
    fn split_integral_is_additive(vals in prop::collection::vec(-2.0f64..2.0, 8..40), x in -0.99f64..0.99, y in -0.99f64..0.99) {
        let field = random_field(&vals);
        let (lo, hi) = (x.min(y), x.max(y));
        let f = |u: &StateVector| u[0] * u[0];
        let g = |u: &StateVector| 2.0 + u[0];
        // integral of f on (-1, hi) = integral of f on (-1, lo) + integral on (lo, hi)
        let whole = split_integral(&field, hi, f, |_| 0.0).unwrap();
        let left = split_integral(&field, lo, f, |_| 0.0).unwrap();
        let mid = whole - left;
        let swapped = split_integral(&field, lo, |_| 0.0, f).unwrap() - split_integral(&field, hi, |_| 0.0, f).unwrap();
        prop_assert!((mid - swapped).abs() < 1e-12);
        let a = split_integral(&field, x, f, g).unwrap();
        let b = split_integral(&field, x, f, |_| 0.0).unwrap() + split_integral(&field, x, |_| 0.0, g).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn unit_weight_and_equal_states_give_plain_integral(vals in prop::collection::vec(-2.0f64..2.0, 8..30), x in -0.99f64..0.99, c in -1.0f64..1.0) {
        let field = random_field(&vals);
        let cfg = PseudoNormConfig { u_l: s(c), u_r: s(c), a: 1.0, x };
        let e = pseudo_norm(&Burgers, &field, &cfg).unwrap();
        let plain: f64 = vals.iter().map(|v| 0.5 * (v - c).powi(2)).sum::<f64>() * field.grid.dx();
        prop_assert!((e - plain).abs() < 1e-12 * (1.0 + plain));
    }
}

#[test]
fn pseudo_norm_rejects_nonpositive_weight() {
    let field = random_field(&[1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
    let cfg = PseudoNormConfig { u_l: s(1.0), u_r: s(-1.0), a: 0.0, x: 0.0 };
    assert!(pseudo_norm(&Burgers, &field, &cfg).is_err());
}

#[test]
fn burgers_quadratic_equivalence_on_many_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (u, v) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let e = rel_entropy(&Burgers, &s(u), &s(v)).unwrap();
        assert!((e - 0.5 * (u - v) * (u - v)).abs() < 1e-14, "{u} {v}");
    }
}

proptest! {
    #[test]
    fn pseudo_norm_splits_into_subgrids(vals in prop::collection::vec(-2.0f64..2.0, 20..40), cut in 8usize..12, x in -0.99f64..-0.2, a in 0.01f64..1.0) {
        let field = random_field(&vals);
        prop_assume!(field.grid.cell_index(x).unwrap() < cut);
        let cfg = PseudoNormConfig { u_l: s(1.0), u_r: s(-1.0), a, x };
        let whole = pseudo_norm(&Burgers, &field, &cfg).unwrap();
        let left = field.subfield(0, cut).unwrap();
        let right = field.subfield(cut, vals.len()).unwrap();
        let e_left = pseudo_norm(&Burgers, &left, &cfg).unwrap();
        let e_right = pseudo_norm(&Burgers, &right, &PseudoNormConfig { x: right.grid.x_min, ..cfg }).unwrap();
        prop_assert!((whole - e_left - e_right).abs() < 1e-12 * (1.0 + whole));
    }
}
