//! Initial data of the spiral, Kelvin-Helmholtz and Richtmyer-Meshkov problems
//! on the unit square, and a generic four-quadrant Riemann problem.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::grid::BoundaryCondition;
use crate::math::{acos, cos, sqrt};
use crate::thermo::PrimitiveState;

/// SplitMix64 (Steele, Lea, Flood). Portable and fully specified:
/// `state += 0x9E3779B97F4A7C15`, then two xor-shift-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Interface perturbation `ε Σ_m a_m cos(b_m + θ_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    pub modes: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Nonnegative amplitudes summing to one.
    pub a: Vec<f64>,
    /// Phases in `[-π, π]`.
    pub b: Vec<f64>,
}

impl PerturbationSpec {
    /// Draw `a` uniform on `[0, 1]` then normalize, then draw `b` uniform on
    /// `[-π, π]`, all from one [`SplitMix64`] stream.
    pub fn sample(modes: usize, epsilon: f64, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let mut a: Vec<f64> = (0..modes).map(|_| rng.next_f64()).collect();
        let total: f64 = a.iter().sum();
        if total > 0.0 {
            for v in &mut a {
                *v /= total;
            }
        } else if modes > 0 {
            a.fill(1.0 / modes as f64);
        }
        let b = (0..modes)
            .map(|_| -PI + 2.0 * PI * rng.next_f64())
            .collect();
        Self {
            modes,
            epsilon,
            seed,
            a,
            b,
        }
    }

    /// `Σ_m a_m cos(b_m + 2mπx)`, modes numbered from 1.
    pub fn fourier(&self, x: f64) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(k, (a, b))| a * cos(b + 2.0 * (k + 1) as f64 * PI * x))
            .sum()
    }

    /// `Σ_m a_m cos(φ + b_m)`.
    pub fn angular(&self, phi: f64) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a * cos(phi + b))
            .sum()
    }
}

/// Constant states of the four quadrants split at `x = 1/2`, `y = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrants {
    pub ne: PrimitiveState,
    pub nw: PrimitiveState,
    pub sw: PrimitiveState,
    pub se: PrimitiveState,
}

impl Quadrants {
    pub const SPIRAL: Quadrants = Quadrants {
        ne: PrimitiveState::new(0.5, 0.5, -0.5, 5.0),
        nw: PrimitiveState::new(1.0, 0.5, 0.5, 5.0),
        sw: PrimitiveState::new(2.0, -0.5, 0.5, 5.0),
        se: PrimitiveState::new(1.5, -0.5, -0.5, 5.0),
    };

    pub fn state(&self, x: f64, y: f64) -> PrimitiveState {
        match (x > 0.5, y > 0.5) {
            (true, true) => self.ne,
            (false, true) => self.nw,
            (false, false) => self.sw,
            (true, false) => self.se,
        }
    }

    /// The data mirrored across `x = 1/2`.
    pub fn mirrored_x(&self) -> Quadrants {
        let flip = |s: PrimitiveState| PrimitiveState::new(s.rho, -s.u, s.v, s.p);
        Quadrants {
            ne: flip(self.nw),
            nw: flip(self.ne),
            sw: flip(self.se),
            se: flip(self.sw),
        }
    }
}

pub fn spiral_ic(x: f64, y: f64) -> PrimitiveState {
    Quadrants::SPIRAL.state(x, y)
}

pub fn quadrant_ic(states: Quadrants) -> impl Fn(f64, f64) -> PrimitiveState {
    move |x, y| states.state(x, y)
}

/// Three-layer shear flow with interfaces `J_j + ε Y_j(x)`, `J = (1/4, 3/4)`.
pub fn kelvin_helmholtz_ic(
    x: f64,
    y: f64,
    lower: &PerturbationSpec,
    upper: &PerturbationSpec,
) -> PrimitiveState {
    let i1 = 0.25 + lower.epsilon * lower.fourier(x);
    let i2 = 0.75 + upper.epsilon * upper.fourier(x);
    if i1 < y && y < i2 {
        PrimitiveState::new(2.0, -0.5, 0.0, 2.5)
    } else {
        PrimitiveState::new(1.0, 0.5, 0.0, 2.5)
    }
}

/// High-pressure core of radius 0.1 inside a heavy disc with perturbed radius
/// `1/4 + ε Y(φ)`, `φ = arccos((y - 1/2)/r)`.
pub fn richtmyer_meshkov_ic(x: f64, y: f64, pert: &PerturbationSpec) -> PrimitiveState {
    let (dx, dy) = (x - 0.5, y - 0.5);
    let r = sqrt(dx * dx + dy * dy);
    let phi = if r > 0.0 {
        acos((dy / r).clamp(-1.0, 1.0))
    } else {
        0.0
    };
    let interface = 0.25 + pert.epsilon * pert.angular(phi);
    let p = if r < 0.1 { 20.0 } else { 1.0 };
    let rho = if r < interface { 2.0 } else { 1.0 };
    PrimitiveState::new(rho, 0.0, 0.0, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Spiral,
    KelvinHelmholtz,
    RichtmyerMeshkov,
    Quadrant,
}

impl Benchmark {
    pub const DEFAULT_MODES: usize = 10;
    pub const DEFAULT_EPSILON: f64 = 0.01;
    pub const REFERENCE_N: usize = 2048;

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Spiral => "spiral",
            Benchmark::KelvinHelmholtz => "kelvin_helmholtz",
            Benchmark::RichtmyerMeshkov => "richtmyer_meshkov",
            Benchmark::Quadrant => "quadrant",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "spiral" => Some(Benchmark::Spiral),
            "kelvin_helmholtz" | "kh" => Some(Benchmark::KelvinHelmholtz),
            "richtmyer_meshkov" | "rm" => Some(Benchmark::RichtmyerMeshkov),
            "quadrant" => Some(Benchmark::Quadrant),
            _ => None,
        }
    }

    pub fn default_t_end(self) -> f64 {
        match self {
            Benchmark::RichtmyerMeshkov => 4.0,
            _ => 2.0,
        }
    }

    pub fn default_bc(self) -> BoundaryCondition {
        match self {
            Benchmark::Spiral | Benchmark::Quadrant => BoundaryCondition::Outflow,
            _ => BoundaryCondition::Periodic,
        }
    }
}

/// A fully specified initial condition.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Spiral,
    KelvinHelmholtz {
        lower: PerturbationSpec,
        upper: PerturbationSpec,
    },
    RichtmyerMeshkov(PerturbationSpec),
    Quadrant(Quadrants),
}

impl InitialCondition {
    /// Default data of a benchmark. Kelvin-Helmholtz draws its two interfaces
    /// from seeds `seed` and `seed + 1`.
    pub fn for_benchmark(b: Benchmark, modes: usize, epsilon: f64, seed: u64) -> Self {
        match b {
            Benchmark::Spiral => InitialCondition::Spiral,
            Benchmark::KelvinHelmholtz => InitialCondition::KelvinHelmholtz {
                lower: PerturbationSpec::sample(modes, epsilon, seed),
                upper: PerturbationSpec::sample(modes, epsilon, seed.wrapping_add(1)),
            },
            Benchmark::RichtmyerMeshkov => {
                InitialCondition::RichtmyerMeshkov(PerturbationSpec::sample(modes, epsilon, seed))
            }
            Benchmark::Quadrant => InitialCondition::Quadrant(Quadrants::SPIRAL),
        }
    }

    pub fn benchmark(&self) -> Benchmark {
        match self {
            InitialCondition::Spiral => Benchmark::Spiral,
            InitialCondition::KelvinHelmholtz { .. } => Benchmark::KelvinHelmholtz,
            InitialCondition::RichtmyerMeshkov(_) => Benchmark::RichtmyerMeshkov,
            InitialCondition::Quadrant(_) => Benchmark::Quadrant,
        }
    }

    pub fn state(&self, x: f64, y: f64) -> PrimitiveState {
        match self {
            InitialCondition::Spiral => spiral_ic(x, y),
            InitialCondition::KelvinHelmholtz { lower, upper } => {
                kelvin_helmholtz_ic(x, y, lower, upper)
            }
            InitialCondition::RichtmyerMeshkov(p) => richtmyer_meshkov_ic(x, y, p),
            InitialCondition::Quadrant(q) => q.state(x, y),
        }
    }

    /// Perturbations in use, in the order they were drawn.
    pub fn perturbations(&self) -> Vec<&PerturbationSpec> {
        match self {
            InitialCondition::KelvinHelmholtz { lower, upper } => alloc::vec![lower, upper],
            InitialCondition::RichtmyerMeshkov(p) => alloc::vec![p],
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the published reference implementation.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        let x = SplitMix64::new(7).next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn spiral_quadrants() {
        assert_eq!(
            spiral_ic(0.75, 0.75),
            PrimitiveState::new(0.5, 0.5, -0.5, 5.0)
        );
        assert_eq!(
            spiral_ic(0.25, 0.25),
            PrimitiveState::new(2.0, -0.5, 0.5, 5.0)
        );
        assert_eq!(
            spiral_ic(0.25, 0.75),
            PrimitiveState::new(1.0, 0.5, 0.5, 5.0)
        );
        assert_eq!(
            spiral_ic(0.75, 0.25),
            PrimitiveState::new(1.5, -0.5, -0.5, 5.0)
        );
        let q = quadrant_ic(Quadrants::SPIRAL);
        assert_eq!(q(0.1, 0.9), spiral_ic(0.1, 0.9));
    }

    #[test]
    fn mirrored_quadrants() {
        let m = Quadrants::SPIRAL.mirrored_x();
        for (x, y) in [(0.2, 0.3), (0.7, 0.9), (0.9, 0.1)] {
            let a = Quadrants::SPIRAL.state(1.0 - x, y);
            let b = m.state(x, y);
            assert_eq!((a.rho, -a.u, a.v, a.p), (b.rho, b.u, b.v, b.p));
        }
    }

    #[test]
    fn perturbation_normalization() {
        let p = PerturbationSpec::sample(10, 0.01, 42);
        assert_eq!(p.a.len(), 10);
        assert!((p.a.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.a.iter().all(|&a| (0.0..=1.0).contains(&a)));
        assert!(p.b.iter().all(|&b| (-PI..=PI).contains(&b)));
        assert_eq!(p, PerturbationSpec::sample(10, 0.01, 42));
    }

    #[test]
    fn unperturbed_layers() {
        let flat = PerturbationSpec::sample(10, 0.0, 1);
        assert_eq!(
            kelvin_helmholtz_ic(0.5, 0.9, &flat, &flat),
            PrimitiveState::new(1.0, 0.5, 0.0, 2.5)
        );
        assert_eq!(
            kelvin_helmholtz_ic(0.5, 0.5, &flat, &flat),
            PrimitiveState::new(2.0, -0.5, 0.0, 2.5)
        );
    }

    #[test]
    fn richtmyer_meshkov_regions() {
        let p = PerturbationSpec::sample(10, 0.01, 3);
        assert_eq!(
            richtmyer_meshkov_ic(0.5, 0.55, &p),
            PrimitiveState::new(2.0, 0.0, 0.0, 20.0)
        );
        assert_eq!(
            richtmyer_meshkov_ic(0.9, 0.5, &p),
            PrimitiveState::new(1.0, 0.0, 0.0, 1.0)
        );
        assert_eq!(richtmyer_meshkov_ic(0.5, 0.5, &p).p, 20.0);
        let flat = PerturbationSpec::sample(10, 0.0, 3);
        assert_eq!(richtmyer_meshkov_ic(0.5 + 0.2499, 0.5, &flat).rho, 2.0);
        assert_eq!(richtmyer_meshkov_ic(0.5, 0.5 - 0.2501, &flat).rho, 1.0);
    }

    #[test]
    fn benchmark_defaults() {
        assert_eq!(Benchmark::Spiral.default_bc(), BoundaryCondition::Outflow);
        assert_eq!(
            Benchmark::KelvinHelmholtz.default_bc(),
            BoundaryCondition::Periodic
        );
        assert_eq!(Benchmark::RichtmyerMeshkov.default_t_end(), 4.0);
        for b in [
            Benchmark::Spiral,
            Benchmark::KelvinHelmholtz,
            Benchmark::RichtmyerMeshkov,
            Benchmark::Quadrant,
        ] {
            assert_eq!(Benchmark::from_name(b.name()), Some(b));
        }
    }
}
