#![allow(dead_code)]

use godunov_core::benchmarks::SplitMix64;
use godunov_core::riemann::{check_no_vacuum, RiemannInput};
use godunov_core::thermo::{prim_to_cons, ConservedState, GasParams, PrimitiveState};

pub const GAS: GasParams = GasParams::AIR;

/// Bounds of the admissible sampling box.
pub const RHO: (f64, f64) = (0.1, 5.0);
pub const P: (f64, f64) = (0.1, 20.0);
pub const VEL: f64 = 3.0;

pub const SEED: u64 = 0x5EED_2024;

/// Deterministic admissible states: ρ ∈ [0.1, 5], p ∈ [0.1, 20], |u|, |v| <= 3.
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::new(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.next_f64()
    }

    pub fn prim(&mut self) -> PrimitiveState {
        PrimitiveState::new(
            self.uniform(RHO.0, RHO.1),
            self.uniform(-VEL, VEL),
            self.uniform(-VEL, VEL),
            self.uniform(P.0, P.1),
        )
    }

    pub fn cons(&mut self) -> ConservedState {
        prim_to_cons(&self.prim(), GAS)
    }

    /// A Riemann problem in the box that does not generate vacuum.
    pub fn riemann(&mut self) -> RiemannInput {
        loop {
            let rp = RiemannInput::new(self.prim(), self.prim());
            if check_no_vacuum(&rp, GAS).is_ok() {
                return rp;
            }
        }
    }
}

/// Root of the star-pressure function by plain bisection on a doubling bracket.
pub fn bisection_star_pressure(rp: &RiemannInput, gas: GasParams) -> f64 {
    use godunov_core::riemann::star_residual;
    let mut lo = 0.0_f64;
    let mut hi = rp.left.p.max(rp.right.p);
    while star_residual(hi, rp, gas) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if star_residual(mid, rp, gas) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
