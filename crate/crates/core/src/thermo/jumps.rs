//! Explicit jump estimates between two states across a face.
//!
//! With `⟨a⟩ = (a_L + a_R)/2` and `[[a]] = a_R - a_L`, the jumps of velocity,
//! pressure and of every component of the normal flux are bounded by averages
//! times jumps of the conserved variables. The estimates are evaluated with
//! their explicit right-hand sides so they can be checked state by state.
//! Vector norms are Euclidean. The normal direction is the first velocity
//! component, so `D = 2` gives the four 2D flux components and `D = 3` the five
//! 3D ones.

use alloc::vec::Vec;

use crate::check::Inequality;
use crate::math::sqrt;
use crate::thermo::GasParams;

/// Primitive state with a `D`-component velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpState<const D: usize> {
    pub rho: f64,
    pub vel: [f64; D],
    pub p: f64,
}

impl<const D: usize> JumpState<D> {
    pub fn momentum(&self) -> [f64; D] {
        self.vel.map(|c| self.rho * c)
    }

    pub fn speed_sq(&self) -> f64 {
        self.vel.iter().map(|c| c * c).sum()
    }

    pub fn total_energy(&self, gas: GasParams) -> f64 {
        self.p / gas.gm1() + 0.5 * self.rho * self.speed_sq()
    }

    pub fn sound_speed(&self, gas: GasParams) -> f64 {
        sqrt(gas.gamma * self.p / self.rho)
    }

    /// Normal flux `(ρu, ρu u + p e_1, u(E+p))` with `u = vel[0]`.
    pub fn normal_flux(&self, gas: GasParams) -> Vec<f64> {
        let u = self.vel[0];
        let e = self.total_energy(gas);
        let mut out = Vec::with_capacity(D + 2);
        out.push(self.rho * u);
        for (k, c) in self.vel.iter().enumerate() {
            let pressure = if k == 0 { self.p } else { 0.0 };
            out.push(self.rho * u * c + pressure);
        }
        out.push(u * (e + self.p));
        out
    }
}

fn norm<const D: usize>(v: [f64; D]) -> f64 {
    sqrt(v.iter().map(|c| c * c).sum())
}

fn avg(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

fn zip_avg<const D: usize>(a: [f64; D], b: [f64; D]) -> [f64; D] {
    core::array::from_fn(|k| avg(a[k], b[k]))
}

fn zip_jump<const D: usize>(a: [f64; D], b: [f64; D]) -> [f64; D] {
    core::array::from_fn(|k| b[k] - a[k])
}

const FLUX_IDS: [&str; 5] = ["flux.F1", "flux.F2", "flux.F3", "flux.F4", "flux.F5"];
const FLUX_CHAINED_IDS: [&str; 5] = [
    "flux.F1.chained",
    "flux.F2.chained",
    "flux.F3.chained",
    "flux.F4.chained",
    "flux.F5.chained",
];

/// Evaluate the average inequalities, the velocity/pressure jump bounds and the
/// componentwise flux-jump bounds for the pair `(left, right)`.
///
/// The flux bounds are reported twice: once with the actual `‖[[u]]‖`, `|[[p]]|`
/// on the right-hand side and once with those replaced by their own bounds in
/// terms of `[[ρ]]`, `[[m]]`, `[[E]]` (ids ending in `.chained`).
pub fn jump_estimates<const D: usize>(
    left: &JumpState<D>,
    right: &JumpState<D>,
    gas: GasParams,
) -> Vec<Inequality> {
    assert!(
        D == 2 || D == 3,
        "jump estimates are defined for 2 or 3 velocity components"
    );
    let g = gas.gamma;
    let gm1 = gas.gm1();

    let rho_avg = avg(left.rho, right.rho);
    let rho_jump = right.rho - left.rho;
    let u_avg = zip_avg(left.vel, right.vel);
    let u_jump = zip_jump(left.vel, right.vel);
    let m_l = left.momentum();
    let m_r = right.momentum();
    let m_avg = zip_avg(m_l, m_r);
    let m_jump = zip_jump(m_l, m_r);
    let e_l = left.total_energy(gas);
    let e_r = right.total_energy(gas);
    let e_jump = e_r - e_l;
    let p_jump = right.p - left.p;
    let a_avg = avg(left.sound_speed(gas), right.sound_speed(gas));
    let a2_avg = avg(g * left.p / left.rho, g * right.p / right.rho);

    let n_u_avg = norm(u_avg);
    let n_u_jump = norm(u_jump);
    let n_m_avg = norm(m_avg);
    let n_m_jump = norm(m_jump);
    let envelope = n_u_avg + n_u_jump;
    let speed_sq_avg = avg(left.speed_sq(), right.speed_sq());
    let kinetic_avg = avg(left.rho * left.speed_sq(), right.rho * right.speed_sq());

    let mut out = Vec::with_capacity(16);

    out.push(Inequality::le(
        "avg.speed_sq",
        speed_sq_avg,
        envelope * envelope,
    ));
    out.push(Inequality::le(
        "avg.sound_speed_sq",
        a2_avg,
        2.0 * a_avg * a_avg,
    ));
    out.push(Inequality::le(
        "avg.p_over_avg_rho",
        avg(left.p, right.p) / rho_avg,
        4.0 / g * a_avg * a_avg,
    ));
    out.push(Inequality::le(
        "avg.rho_speed_sq",
        kinetic_avg / rho_avg,
        2.0 * envelope * envelope,
    ));
    out.push(Inequality::le(
        "avg.momentum",
        n_m_avg / rho_avg,
        n_u_avg + 0.5 * n_u_jump,
    ));

    let u_bound = (n_u_avg * rho_jump.abs() + n_m_jump) / rho_avg;
    out.push(Inequality::le("jump.jump_u", n_u_jump, u_bound));
    // [[|m|²]] = 2⟨m⟩·[[m]], hence the factor (γ-1) on the momentum term.
    let p_bound = 0.5 * gm1 * kinetic_avg / rho_avg * rho_jump.abs()
        + gm1 * n_m_avg * n_m_jump / rho_avg
        + gm1 * e_jump.abs();
    out.push(Inequality::le("jump.jump_p", p_jump.abs(), p_bound));

    let f_l = left.normal_flux(gas);
    let f_r = right.normal_flux(gas);
    let h_avg = avg(e_l + left.p, e_r + right.p);
    let momentum_rhs = |uj: f64| speed_sq_avg * rho_jump.abs() + 2.0 * rho_avg * n_u_avg * uj;
    for k in 0..D + 2 {
        let lhs = (f_r[k] - f_l[k]).abs();
        let (direct, chained) = if k == 0 {
            (n_m_jump, n_m_jump)
        } else if k == 1 {
            (
                momentum_rhs(n_u_jump) + p_jump.abs(),
                momentum_rhs(u_bound) + p_bound,
            )
        } else if k <= D {
            (momentum_rhs(n_u_jump), momentum_rhs(u_bound))
        } else {
            (
                h_avg * n_u_jump + n_u_avg * e_jump.abs() + n_u_avg * p_jump.abs(),
                h_avg * u_bound + n_u_avg * e_jump.abs() + n_u_avg * p_bound,
            )
        };
        // The energy flux is always the last entry; label it F5 in both dimensions.
        let id = if k == D + 1 { 4 } else { k };
        out.push(Inequality::le(FLUX_IDS[id], lhs, direct));
        out.push(Inequality::le(FLUX_CHAINED_IDS[id], lhs, chained));
    }
    out
}
