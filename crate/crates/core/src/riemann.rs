//! Exact solution of the one-dimensional Riemann problem for the Euler equations.
//!
//! States are given in a face-normal frame: `u` is the normal velocity and `v`
//! the tangential one, which is carried passively and jumps only at the contact.

use alloc::vec::Vec;

use crate::check::Inequality;
use crate::error::{Error, Result};
use crate::math::{powf, sqrt};
use crate::thermo::{flux_prim, Axis, ConservedState, GasParams, PrimitiveState};

/// Upper bound on Newton/bisection iterations for the star pressure.
pub const MAX_ITERATIONS: usize = 200;
/// Relative pressure change at which the star-pressure iteration stops.
pub const PRESSURE_TOL: f64 = 1e-12;
/// Lower clamp for the two-rarefaction initial guess.
pub const MIN_GUESS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannInput {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
}

impl RiemannInput {
    pub fn new(left: PrimitiveState, right: PrimitiveState) -> Self {
        Self { left, right }
    }

    /// Face-normal Riemann problem between two cells adjacent along `axis`.
    pub fn along(axis: Axis, left: PrimitiveState, right: PrimitiveState) -> Self {
        Self::new(left.rotate_to(axis), right.rotate_to(axis))
    }

    /// The same problem viewed in the mirrored frame `x -> -x`.
    pub fn mirrored(&self) -> Self {
        let flip = |s: PrimitiveState| PrimitiveState::new(s.rho, -s.u, s.v, s.p);
        Self::new(flip(self.right), flip(self.left))
    }
}

/// Left and right nonlinear waves: `R` rarefaction, `S` shock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WavePattern {
    RR,
    SS,
    RS,
    SR,
}

impl WavePattern {
    fn from_waves(left_shock: bool, right_shock: bool) -> Self {
        match (left_shock, right_shock) {
            (false, false) => WavePattern::RR,
            (true, true) => WavePattern::SS,
            (false, true) => WavePattern::RS,
            (true, false) => WavePattern::SR,
        }
    }

    pub fn left_is_shock(self) -> bool {
        matches!(self, WavePattern::SS | WavePattern::SR)
    }

    pub fn right_is_shock(self) -> bool {
        matches!(self, WavePattern::SS | WavePattern::RS)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WavePattern::RR => "RR",
            WavePattern::SS => "SS",
            WavePattern::RS => "RS",
            WavePattern::SR => "SR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveSpeeds {
    Shock(f64),
    /// Head is the outer edge of the fan, tail the edge next to the star region.
    Rarefaction {
        head: f64,
        tail: f64,
    },
}

impl WaveSpeeds {
    /// Slowest and fastest characteristic speed covered by the wave.
    pub fn span(&self) -> (f64, f64) {
        match *self {
            WaveSpeeds::Shock(s) => (s, s),
            WaveSpeeds::Rarefaction { head, tail } => (head.min(tail), head.max(tail)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarRegion {
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_l: f64,
    pub rho_star_r: f64,
    pub pattern: WavePattern,
    pub left_speeds: WaveSpeeds,
    pub right_speeds: WaveSpeeds,
    pub iterations: usize,
}

/// `f_K(p)` and its derivative: the velocity change across wave `K` as a
/// function of the star pressure.
pub fn pressure_function(p: f64, state: &PrimitiveState, gas: GasParams) -> (f64, f64) {
    let g = gas.gamma;
    if p > state.p {
        let a = 2.0 / ((g + 1.0) * state.rho);
        let b = gas.gm1() / (g + 1.0) * state.p;
        let root = sqrt(a / (p + b));
        let f = (p - state.p) * root;
        let df = root * (1.0 - 0.5 * (p - state.p) / (p + b));
        (f, df)
    } else {
        let c = state.sound_speed(gas);
        let ratio = p / state.p;
        let f = 2.0 * c / gas.gm1() * (powf(ratio, gas.gm1() / (2.0 * g)) - 1.0);
        let df = powf(ratio, -(g + 1.0) / (2.0 * g)) / (state.rho * c);
        (f, df)
    }
}

fn residual(p: f64, rp: &RiemannInput, gas: GasParams) -> (f64, f64) {
    let (fl, dl) = pressure_function(p, &rp.left, gas);
    let (fr, dr) = pressure_function(p, &rp.right, gas);
    (fl + fr + (rp.right.u - rp.left.u), dl + dr)
}

/// `f_L(p) + f_R(p) + u_R - u_L`, the function whose root is the star pressure.
pub fn star_residual(p: f64, rp: &RiemannInput, gas: GasParams) -> f64 {
    residual(p, rp, gas).0
}

/// Check the pressure positivity condition `2(a_L + a_R)/(γ-1) > u_R - u_L`.
pub fn check_no_vacuum(rp: &RiemannInput, gas: GasParams) -> Result<()> {
    let critical = 2.0 * (rp.left.sound_speed(gas) + rp.right.sound_speed(gas)) / gas.gm1();
    let delta_u = rp.right.u - rp.left.u;
    if critical > delta_u {
        Ok(())
    } else {
        Err(Error::Vacuum { critical, delta_u })
    }
}

fn two_rarefaction_guess(rp: &RiemannInput, gas: GasParams) -> f64 {
    let z = gas.gm1() / (2.0 * gas.gamma);
    let (l, r) = (&rp.left, &rp.right);
    let (al, ar) = (l.sound_speed(gas), r.sound_speed(gas));
    let num = al + ar - 0.5 * gas.gm1() * (r.u - l.u);
    let den = al / powf(l.p, z) + ar / powf(r.p, z);
    powf((num / den).max(0.0), 1.0 / z).max(MIN_GUESS)
}

/// Solve for the star region: Newton iteration from the two-rarefaction guess,
/// safeguarded by bisection on a bracket `(lo, hi)` with `f(lo) < 0 < f(hi)`.
pub fn solve_star(rp: &RiemannInput, gas: GasParams) -> Result<StarRegion> {
    check_no_vacuum(rp, gas)?;
    let (l, r) = (&rp.left, &rp.right);

    if l.rho == r.rho && l.u == r.u && l.p == r.p {
        return Ok(assemble(rp, gas, l.p, 0));
    }

    // f(0+) = Δu - 2(a_L + a_R)/(γ-1) < 0 by the vacuum check.
    let mut lo = 0.0_f64;
    let mut hi = l.p.max(r.p);
    let mut iterations = 0;
    while residual(hi, rp, gas).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > MAX_ITERATIONS || !hi.is_finite() {
            return Err(Error::NoConvergence {
                iterations,
                residual: residual(hi, rp, gas).0,
            });
        }
    }

    let mut p = two_rarefaction_guess(rp, gas);
    if !(p > lo && p < hi) {
        p = 0.5 * (lo + hi);
    }
    loop {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence {
                iterations,
                residual: residual(p, rp, gas).0,
            });
        }
        let (f, df) = residual(p, rp, gas);
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let mut next = p - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let change = (next - p).abs();
        p = next;
        if change <= PRESSURE_TOL * p || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(assemble(rp, gas, p, iterations))
}

fn assemble(rp: &RiemannInput, gas: GasParams, p_star: f64, iterations: usize) -> StarRegion {
    let g = gas.gamma;
    let (l, r) = (&rp.left, &rp.right);
    let (fl, _) = pressure_function(p_star, l, gas);
    let (fr, _) = pressure_function(p_star, r, gas);
    let u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
    let mu = gas.gm1() / (g + 1.0);

    let left_shock = p_star > l.p;
    let right_shock = p_star > r.p;
    let al = l.sound_speed(gas);
    let ar = r.sound_speed(gas);

    let (rho_star_l, left_speeds) = if left_shock {
        let ratio = p_star / l.p;
        let rho = l.rho * (ratio + mu) / (mu * ratio + 1.0);
        let s = l.u - al * sqrt((g + 1.0) / (2.0 * g) * ratio + gas.gm1() / (2.0 * g));
        (rho, WaveSpeeds::Shock(s))
    } else {
        let ratio = p_star / l.p;
        let rho = l.rho * powf(ratio, 1.0 / g);
        let a_star = al * powf(ratio, gas.gm1() / (2.0 * g));
        (
            rho,
            WaveSpeeds::Rarefaction {
                head: l.u - al,
                tail: u_star - a_star,
            },
        )
    };
    let (rho_star_r, right_speeds) = if right_shock {
        let ratio = p_star / r.p;
        let rho = r.rho * (ratio + mu) / (mu * ratio + 1.0);
        let s = r.u + ar * sqrt((g + 1.0) / (2.0 * g) * ratio + gas.gm1() / (2.0 * g));
        (rho, WaveSpeeds::Shock(s))
    } else {
        let ratio = p_star / r.p;
        let rho = r.rho * powf(ratio, 1.0 / g);
        let a_star = ar * powf(ratio, gas.gm1() / (2.0 * g));
        (
            rho,
            WaveSpeeds::Rarefaction {
                head: r.u + ar,
                tail: u_star + a_star,
            },
        )
    };

    StarRegion {
        p_star,
        u_star,
        rho_star_l,
        rho_star_r,
        pattern: WavePattern::from_waves(left_shock, right_shock),
        left_speeds,
        right_speeds,
        iterations,
    }
}

/// Self-similar solution at `xi = x/t`.
pub fn sample(xi: f64, rp: &RiemannInput, star: &StarRegion, gas: GasParams) -> PrimitiveState {
    let g = gas.gamma;
    let gm1 = gas.gm1();
    let (l, r) = (&rp.left, &rp.right);
    if xi <= star.u_star {
        match star.left_speeds {
            WaveSpeeds::Shock(s) => {
                if xi <= s {
                    *l
                } else {
                    PrimitiveState::new(star.rho_star_l, star.u_star, l.v, star.p_star)
                }
            }
            WaveSpeeds::Rarefaction { head, tail } => {
                if xi <= head {
                    *l
                } else if xi >= tail {
                    PrimitiveState::new(star.rho_star_l, star.u_star, l.v, star.p_star)
                } else {
                    let al = l.sound_speed(gas);
                    let c = 2.0 / (g + 1.0) * (al + 0.5 * gm1 * (l.u - xi));
                    let u = 2.0 / (g + 1.0) * (al + 0.5 * gm1 * l.u + xi);
                    let ratio = c / al;
                    PrimitiveState::new(
                        l.rho * powf(ratio, 2.0 / gm1),
                        u,
                        l.v,
                        l.p * powf(ratio, 2.0 * g / gm1),
                    )
                }
            }
        }
    } else {
        match star.right_speeds {
            WaveSpeeds::Shock(s) => {
                if xi >= s {
                    *r
                } else {
                    PrimitiveState::new(star.rho_star_r, star.u_star, r.v, star.p_star)
                }
            }
            WaveSpeeds::Rarefaction { head, tail } => {
                if xi >= head {
                    *r
                } else if xi <= tail {
                    PrimitiveState::new(star.rho_star_r, star.u_star, r.v, star.p_star)
                } else {
                    let ar = r.sound_speed(gas);
                    let c = 2.0 / (g + 1.0) * (ar - 0.5 * gm1 * (r.u - xi));
                    let u = 2.0 / (g + 1.0) * (-ar + 0.5 * gm1 * r.u + xi);
                    let ratio = c / ar;
                    PrimitiveState::new(
                        r.rho * powf(ratio, 2.0 / gm1),
                        u,
                        r.v,
                        r.p * powf(ratio, 2.0 * g / gm1),
                    )
                }
            }
        }
    }
}

/// The state `U^RP` on the face, i.e. the Riemann solution at `x/t = 0`, in the
/// normal frame.
pub fn interface_state(rp: &RiemannInput, gas: GasParams) -> Result<PrimitiveState> {
    let star = solve_star(rp, gas)?;
    Ok(sample(0.0, rp, &star, gas))
}

/// Godunov flux `F_n(U^RP)` in the normal frame (mass, normal momentum,
/// tangential momentum, energy).
pub fn godunov_flux(rp: &RiemannInput, gas: GasParams) -> Result<ConservedState> {
    Ok(flux_prim(&interface_state(rp, gas)?, Axis::X, gas))
}

/// Godunov flux across a face normal to `axis`, returned in the grid frame.
pub fn godunov_flux_along(
    axis: Axis,
    left: &PrimitiveState,
    right: &PrimitiveState,
    gas: GasParams,
) -> Result<ConservedState> {
    let rp = RiemannInput::along(axis, *left, *right);
    let face = interface_state(&rp, gas)?.rotate_to(axis);
    Ok(flux_prim(&face, axis, gas))
}

macro_rules! ids {
    ($prefix:literal, $name:literal) => {
        [
            concat!($prefix, ".", $name, "[L]"),
            concat!($prefix, ".", $name, "[R]"),
        ]
    };
}

macro_rules! pair_ids {
    ($prefix:literal, $name:literal) => {
        [
            [
                concat!($prefix, ".", $name, "[L,L]"),
                concat!($prefix, ".", $name, "[L,R]"),
            ],
            [
                concat!($prefix, ".", $name, "[R,L]"),
                concat!($prefix, ".", $name, "[R,R]"),
            ],
        ]
    };
}

/// Evaluate the star-region estimates matching the realized wave pattern.
///
/// For every pattern the report bounds `|u* - u_K|`, `p* - p_K` and
/// `|ρ*_K - ρ_M|` (`K, M ∈ {L, R}`) by the jumps of the initial data, and
/// finally checks that the face state `U^RP` stays within the envelope those
/// bounds imply (`rp_state[K]`).
///
/// For a left shock with a right rarefaction both `u* <= u_L` and `u* <= u_R`,
/// so the sign condition is reported as `0 <= u_K - u*` there.
pub fn star_bounds_report(rp: &RiemannInput, star: &StarRegion, gas: GasParams) -> Vec<Inequality> {
    let g = gas.gamma;
    let states = [rp.left, rp.right];
    let rho_star = [star.rho_star_l, star.rho_star_r];
    let a = [rp.left.sound_speed(gas), rp.right.sound_speed(gas)];
    let du = rp.right.u - rp.left.u;
    let dp = rp.right.p - rp.left.p;
    let drho = rp.right.rho - rp.left.rho;
    let (us, ps) = (star.u_star, star.p_star);

    let mut out = Vec::with_capacity(20);
    let mut u_env: f64 = 0.0;
    let mut p_env: f64 = 0.0;
    let mut rho_env: f64 = 0.0;

    match star.pattern {
        WavePattern::RR => {
            const U: [&str; 2] = ids!("RR", "jump_u");
            const PS: [&str; 2] = ids!("RR", "p_sign");
            const P: [&str; 2] = ids!("RR", "jump_p");
            const RHO: [[&str; 2]; 2] = pair_ids!("RR", "jump_rho");
            for k in 0..2 {
                let s = &states[k];
                out.push(Inequality::le(U[k], (us - s.u).abs(), du));
                u_env = u_env.max(du);
                out.push(Inequality::le(PS[k], ps - s.p, 0.0));
                let rhs = s.rho * a[k] * du;
                out.push(Inequality::le(P[k], s.p - ps, rhs));
                p_env = p_env.max(rhs);
                for m in 0..2 {
                    let rhs = s.rho / a[k] * du + drho.abs();
                    out.push(Inequality::le(
                        RHO[k][m],
                        (rho_star[k] - states[m].rho).abs(),
                        rhs,
                    ));
                    rho_env = rho_env.max(rhs);
                }
            }
        }
        WavePattern::SS => {
            const U: [&str; 2] = ids!("SS", "jump_u");
            const PS: [&str; 2] = ids!("SS", "p_sign");
            const P: [&str; 2] = ids!("SS", "jump_p");
            const RHO: [[&str; 2]; 2] = pair_ids!("SS", "jump_rho");
            let adu = du.abs();
            for k in 0..2 {
                let s = &states[k];
                out.push(Inequality::lt(U[k], (us - s.u).abs(), adu));
                u_env = u_env.max(adu);
                out.push(Inequality::lt(PS[k], 0.0, ps - s.p));
                let factor = (g * s.rho * adu + s.rho * a[k]) * adu;
                out.push(Inequality::lt(P[k], ps - s.p, factor));
                p_env = p_env.max(factor);
                for m in 0..2 {
                    let rhs = factor / (a[k] * a[k]) + drho.abs();
                    out.push(Inequality::lt(
                        RHO[k][m],
                        (rho_star[k] - states[m].rho).abs(),
                        rhs,
                    ));
                    rho_env = rho_env.max(rhs);
                }
            }
        }
        WavePattern::RS | WavePattern::SR => {
            let rs = star.pattern == WavePattern::RS;
            // index of the state behind the shock
            let shock = if rs { 1 } else { 0 };
            type Ids = [&'static str; 2];
            let (u_ids, sign_ids, p_ids, rho_ids): (Ids, Ids, Ids, [Ids; 2]) = if rs {
                (
                    ids!("RS", "jump_u"),
                    ids!("RS", "u_sign"),
                    ids!("RS", "jump_p"),
                    pair_ids!("RS", "jump_rho"),
                )
            } else {
                (
                    ids!("SR", "jump_u"),
                    ids!("SR", "u_sign"),
                    ids!("SR", "jump_p"),
                    pair_ids!("SR", "jump_rho"),
                )
            };
            let ss = &states[shock];
            let adp = dp.abs();
            let u_rhs = adp / (ss.rho * a[shock]) + du.abs();
            for k in 0..2 {
                let s = &states[k];
                out.push(Inequality::lt(u_ids[k], (us - s.u).abs(), u_rhs));
                u_env = u_env.max(u_rhs);
                let signed = if rs { us - s.u } else { s.u - us };
                out.push(Inequality::le(sign_ids[k], 0.0, signed));
                out.push(Inequality::lt(p_ids[k], (s.p - ps).abs(), adp));
                p_env = p_env.max(adp);
                let coeff = powf(s.p / ss.p, gas.gm1() / g) / (a[k] * a[k]);
                for m in 0..2 {
                    let rhs = coeff * adp + drho.abs();
                    out.push(Inequality::le(
                        rho_ids[k][m],
                        (rho_star[k] - states[m].rho).abs(),
                        rhs,
                    ));
                    rho_env = rho_env.max(rhs);
                }
            }
        }
    }

    const RP: [&str; 2] = ["star.rp_state[L]", "star.rp_state[R]"];
    let face = sample(0.0, rp, star, gas);
    let envelope = u_env.max(du.abs())
        + p_env.max(dp.abs())
        + rho_env.max(drho.abs())
        + (rp.right.v - rp.left.v).abs();
    for (k, s) in states.iter().enumerate() {
        let dist = (face.rho - s.rho).abs()
            + (face.u - s.u).abs()
            + (face.v - s.v).abs()
            + (face.p - s.p).abs();
        out.push(Inequality::le(RP[k], dist, envelope));
    }
    out
}
