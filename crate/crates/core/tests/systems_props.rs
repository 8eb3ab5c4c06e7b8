use std::sync::Arc;

use proptest::prelude::*;
use shocklab::systems::{
    compatibility_check, entropy_hessian_min_eigenvalue, extremal_eigenvalues, Burgers, ConservationLaw,
    DomainBox, FullEuler, IsentropicEuler, PowerLaw,
};
use shocklab::StateVector;

fn isentropic() -> IsentropicEuler {
    IsentropicEuler::new(Arc::new(PowerLaw::new(1.0, 2.0).unwrap()))
}

fn euler() -> FullEuler {
    FullEuler::new(1.4).unwrap()
}

fn laws() -> Vec<(Box<dyn ConservationLaw>, DomainBox)> {
    vec![
        (Box::new(Burgers), DomainBox::new(vec![(-3.0, 3.0)]).unwrap()),
        (Box::new(isentropic()), DomainBox::new(vec![(0.2, 3.0), (-2.0, 2.0)]).unwrap()),
        (Box::new(euler()), DomainBox::new(vec![(0.1, 3.0), (-2.0, 2.0), (0.1, 3.0)]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn entropy_flux_is_compatible(seed in any::<u64>()) {
        for (law, dom) in laws() {
            let pts: Vec<_> = dom.sample(&*law, 20, seed).into_iter().filter(|u| law.is_interior(u)).collect();
            let rep = compatibility_check(&*law, &pts).unwrap();
            prop_assert!(rep.pass, "{}: {:?}", law.name(), rep);
        }
    }

    #[test]
    fn entropy_is_strictly_convex(seed in any::<u64>()) {
        for (law, dom) in laws() {
            for u in dom.sample(&*law, 20, seed) {
                prop_assert!(entropy_hessian_min_eigenvalue(&*law, &u).unwrap() > 0.0, "{} at {:?}", law.name(), u);
            }
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>()) {
        for (law, dom) in laws() {
            for u in dom.sample(&*law, 10, seed) {
                prop_assert_eq!(law.flux(&u), law.flux(&u));
                prop_assert_eq!(law.entropy(&u).to_bits(), law.entropy(&u).to_bits());
                prop_assert_eq!(law.entropy_flux(&u).to_bits(), law.entropy_flux(&u).to_bits());
            }
        }
    }

    #[test]
    fn scalar_eigenvalues_are_the_derivative(u in -5.0f64..5.0) {
        let (lo, hi) = extremal_eigenvalues(&Burgers, &StateVector::scalar(u)).unwrap();
        prop_assert!((lo - 2.0 * u).abs() < 1e-12 && (hi - 2.0 * u).abs() < 1e-12);
    }

    #[test]
    fn euler_eigenvalues_bracket_velocity(rho in 0.1f64..3.0, u in -2.0f64..2.0, e in 0.1f64..3.0) {
        let eu = euler();
        let w = eu.from_physical(&[rho, u, e]);
        let (lo, hi) = extremal_eigenvalues(&eu, &w).unwrap();
        let c = (1.4f64 * 0.4 * e).sqrt();
        prop_assert!((lo - (u - c)).abs() < 1e-6 * (1.0 + c), "{lo} vs {}", u - c);
        prop_assert!((hi - (u + c)).abs() < 1e-6 * (1.0 + c));
    }
}

#[test]
fn physical_round_trip() {
    let eu = euler();
    let p = eu.to_physical(&eu.from_physical(&[1.3, -0.4, 2.1]));
    for (a, b) in p.iter().zip([1.3, -0.4, 2.1]) {
        assert!((a - b).abs() < 1e-14);
    }
}
