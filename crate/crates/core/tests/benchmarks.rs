use godunov_core::benchmarks::*;
use godunov_core::grid::{project_initial, GridSpec};
use godunov_core::thermo::GasParams;
use proptest::prelude::*;
use std::f64::consts::PI;

const GAS: GasParams = GasParams::AIR;

const ALL: [Benchmark; 4] = [
    Benchmark::Spiral,
    Benchmark::KelvinHelmholtz,
    Benchmark::RichtmyerMeshkov,
    Benchmark::Quadrant,
];

#[test]
fn projected_data_is_admissible_at_every_level() {
    for b in ALL {
        let ic = InitialCondition::for_benchmark(b, 10, 0.01, 42);
        for n in [32, 64, 128, 256, 512, 1024] {
            let spec = GridSpec::unit_square(n, b.default_bc()).unwrap();
            let f = project_initial(|x, y| ic.state(x, y), spec, GAS);
            assert!(
                f.interior().all(|(_, u)| u.is_admissible(GAS)),
                "{} at n={n}",
                b.name()
            );
        }
    }
}

#[test]
fn projection_preserves_totals_of_piecewise_data() {
    // The spiral data is constant on each quadrant and the quadrant lines fall
    // on cell faces, so projected totals equal the exact integrals.
    let spec = GridSpec::unit_square(64, Benchmark::Spiral.default_bc()).unwrap();
    let t = project_initial(spiral_ic, spec, GAS).totals();
    let exact_mass = 0.25 * (0.5 + 1.0 + 2.0 + 1.5);
    assert!((t.rho - exact_mass).abs() < 1e-14);
}

#[test]
fn same_seed_same_data() {
    for b in ALL {
        let spec = GridSpec::unit_square(64, b.default_bc()).unwrap();
        let make = |seed| {
            let ic = InitialCondition::for_benchmark(b, 10, 0.01, seed);
            project_initial(|x, y| ic.state(x, y), spec, GAS)
        };
        assert_eq!(make(3), make(3));
        if matches!(b, Benchmark::KelvinHelmholtz | Benchmark::RichtmyerMeshkov) {
            assert_ne!(make(3), make(4), "{}", b.name());
        }
    }
}

#[test]
fn kelvin_helmholtz_interfaces_use_consecutive_seeds() {
    match InitialCondition::for_benchmark(Benchmark::KelvinHelmholtz, 5, 0.02, 10) {
        InitialCondition::KelvinHelmholtz { lower, upper } => {
            assert_eq!(lower, PerturbationSpec::sample(5, 0.02, 10));
            assert_eq!(upper, PerturbationSpec::sample(5, 0.02, 11));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn names_round_trip() {
    for b in ALL {
        assert_eq!(Benchmark::from_name(b.name()), Some(b));
        assert_eq!(
            InitialCondition::for_benchmark(b, 2, 0.01, 0).benchmark(),
            b
        );
    }
    assert_eq!(Benchmark::from_name("kh"), Some(Benchmark::KelvinHelmholtz));
    assert_eq!(Benchmark::from_name("sod"), None);
}

#[test]
fn richtmyer_meshkov_centre_and_far_field() {
    let p = PerturbationSpec::sample(10, 0.01, 1);
    let centre = richtmyer_meshkov_ic(0.5, 0.5, &p);
    assert_eq!((centre.rho, centre.p), (2.0, 20.0));
    let far = richtmyer_meshkov_ic(0.02, 0.98, &p);
    assert_eq!((far.rho, far.p), (1.0, 1.0));
    // Between the core and the perturbed interface: heavy gas at low pressure.
    let ring = richtmyer_meshkov_ic(0.5 + 0.2, 0.5, &p);
    assert_eq!((ring.rho, ring.p), (2.0, 1.0));
}

#[test]
fn mirrored_quadrants_mirror_the_data() {
    let q = Quadrants::SPIRAL;
    let m = q.mirrored_x();
    for (x, y) in [(0.2, 0.3), (0.7, 0.9), (0.1, 0.8), (0.6, 0.1)] {
        let (a, b) = (q.state(x, y), m.state(1.0 - x, y));
        assert_eq!((a.rho, -a.u, a.v, a.p), (b.rho, b.u, b.v, b.p));
    }
}

proptest! {
    #[test]
    fn perturbation_weights_are_a_distribution(modes in 1usize..40, seed in any::<u64>()) {
        let p = PerturbationSpec::sample(modes, 0.01, seed);
        prop_assert_eq!(p.a.len(), modes);
        prop_assert_eq!(p.b.len(), modes);
        prop_assert!(p.a.iter().all(|&a| a >= 0.0));
        prop_assert!((p.a.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        prop_assert!(p.b.iter().all(|&b| (-PI..=PI).contains(&b)));
    }

    #[test]
    fn kelvin_helmholtz_interfaces_stay_in_band(seed in any::<u64>(), x in 0.0f64..1.0, eps in 0.0f64..0.1) {
        let ic = InitialCondition::for_benchmark(Benchmark::KelvinHelmholtz, 10, eps, seed);
        let (lower, upper) = match &ic {
            InitialCondition::KelvinHelmholtz { lower, upper } => (lower, upper),
            _ => unreachable!(),
        };
        prop_assert!(lower.fourier(x).abs() <= 1.0 + 1e-14);
        prop_assert!(upper.fourier(x).abs() <= 1.0 + 1e-14);
        // Outside the perturbation band the layer is fixed.
        let below = ic.state(x, 0.25 - eps - 1e-9);
        let inside = ic.state(x, 0.5);
        let above = ic.state(x, 0.75 + eps + 1e-9);
        prop_assert_eq!(below.rho, 1.0);
        prop_assert_eq!(inside.rho, 2.0);
        prop_assert_eq!(above.rho, 1.0);
    }

    #[test]
    fn richtmyer_meshkov_interface_radius_is_bounded(seed in any::<u64>(), phi in 0.0f64..PI) {
        let p = PerturbationSpec::sample(10, 0.05, seed);
        let r = 0.25 + 0.05 * p.angular(phi);
        prop_assert!((0.2 - 1e-14..=0.3 + 1e-14).contains(&r));
        let inside = richtmyer_meshkov_ic(0.5 + 0.9 * r * phi.sin(), 0.5 + 0.9 * r * phi.cos(), &p);
        let outside = richtmyer_meshkov_ic(0.5 + 1.1 * r * phi.sin(), 0.5 + 1.1 * r * phi.cos(), &p);
        prop_assert_eq!(inside.rho, 2.0);
        prop_assert_eq!(outside.rho, 1.0);
    }

    #[test]
    fn splitmix_floats_are_in_unit_interval(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..64 {
            let x = rng.next_f64();
            prop_assert!((0.0..1.0).contains(&x));
        }
    }
}
