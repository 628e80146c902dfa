//! Ideal-gas thermodynamics for the Euler system `∂t U + div F(U) = 0` with
//! `U = (ρ, m, E)` and `p = (γ-1)ρe`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math::{ln, powf, sqrt};

pub mod jumps;

/// Adiabatic constant of a polytropic gas, `1 < γ <= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
}

impl GasParams {
    pub const AIR: GasParams = GasParams { gamma: 1.4 };

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 1.0 && gamma <= 2.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidParameter("gamma must lie in (1, 2]"))
        }
    }

    #[inline]
    pub fn gm1(&self) -> f64 {
        self.gamma - 1.0
    }
}

impl Default for GasParams {
    fn default() -> Self {
        Self::AIR
    }
}

/// Coordinate direction of a flux or a cell face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Conserved variables `(ρ, m_x, m_y, E)`.
///
/// Also used as a plain 4-vector for fluxes, jumps and component-wise statistics,
/// in which case the admissibility invariants do not apply.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    pub e_total: f64,
}

impl ConservedState {
    pub const ZERO: ConservedState = ConservedState::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(rho: f64, mx: f64, my: f64, e_total: f64) -> Self {
        Self {
            rho,
            mx,
            my,
            e_total,
        }
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.rho, self.mx, self.my, self.e_total]
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(f(self.rho), f(self.mx), f(self.my), f(self.e_total))
    }

    pub fn abs(self) -> Self {
        self.map(f64::abs)
    }

    pub fn norm_l1(self) -> f64 {
        self.rho.abs() + self.mx.abs() + self.my.abs() + self.e_total.abs()
    }

    pub fn norm_sq(self) -> f64 {
        self.rho * self.rho + self.mx * self.mx + self.my * self.my + self.e_total * self.e_total
    }

    /// Internal energy per unit volume, `E - |m|²/(2ρ)`.
    #[inline]
    pub fn internal_energy(&self) -> f64 {
        self.e_total - (self.mx * self.mx + self.my * self.my) / (2.0 * self.rho)
    }

    #[inline]
    pub fn pressure(&self, gas: GasParams) -> f64 {
        gas.gm1() * self.internal_energy()
    }

    /// `ρ > 0` and `p > 0`. NaN components are inadmissible.
    pub fn is_admissible(&self, gas: GasParams) -> bool {
        self.rho > 0.0 && self.pressure(gas) > 0.0
    }

    /// Swap the momentum components; maps a state to its mirror image under `x <-> y`.
    pub fn swap_momenta(self) -> Self {
        Self::new(self.rho, self.my, self.mx, self.e_total)
    }
}

impl Add for ConservedState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.rho + o.rho,
            self.mx + o.mx,
            self.my + o.my,
            self.e_total + o.e_total,
        )
    }
}

impl AddAssign for ConservedState {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for ConservedState {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.rho - o.rho,
            self.mx - o.mx,
            self.my - o.my,
            self.e_total - o.e_total,
        )
    }
}

impl Neg for ConservedState {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c)
    }
}

impl Mul<f64> for ConservedState {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.map(|c| c * s)
    }
}

/// Primitive variables `(ρ, u, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    #[inline]
    pub fn sound_speed(&self, gas: GasParams) -> f64 {
        sqrt(gas.gamma * self.p / self.rho)
    }

    #[inline]
    pub fn speed_sq(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }

    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.p > 0.0
    }

    /// Velocity component normal to `axis` followed by the tangential one.
    #[inline]
    pub fn rotate_to(self, axis: Axis) -> Self {
        match axis {
            Axis::X => self,
            Axis::Y => Self::new(self.rho, self.v, self.u, self.p),
        }
    }

    /// Thermodynamic entropy `S = ln p - γ ln ρ`.
    #[inline]
    pub fn thermo_entropy(&self, gas: GasParams) -> f64 {
        ln(self.p) - gas.gamma * ln(self.rho)
    }
}

pub fn cons_to_prim(state: &ConservedState, gas: GasParams) -> Result<PrimitiveState> {
    if !(state.rho > 0.0) {
        return Err(Error::NonPhysical {
            cell: None,
            state: *state,
        });
    }
    let p = state.pressure(gas);
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::NonPhysical {
            cell: None,
            state: *state,
        });
    }
    Ok(PrimitiveState::new(
        state.rho,
        state.mx / state.rho,
        state.my / state.rho,
        p,
    ))
}

pub fn prim_to_cons(prim: &PrimitiveState, gas: GasParams) -> ConservedState {
    let kinetic = 0.5 * prim.rho * prim.speed_sq();
    ConservedState::new(
        prim.rho,
        prim.rho * prim.u,
        prim.rho * prim.v,
        prim.p / gas.gm1() + kinetic,
    )
}

/// Physical flux `F_axis(U)`.
pub fn flux(state: &ConservedState, axis: Axis, gas: GasParams) -> ConservedState {
    let p = state.pressure(gas);
    let prim = PrimitiveState::new(state.rho, state.mx / state.rho, state.my / state.rho, p);
    flux_prim(&prim, axis, gas)
}

/// Physical flux evaluated from primitive variables.
pub fn flux_prim(prim: &PrimitiveState, axis: Axis, gas: GasParams) -> ConservedState {
    let e = prim.p / gas.gm1() + 0.5 * prim.rho * prim.speed_sq();
    match axis {
        Axis::X => {
            let mass = prim.rho * prim.u;
            ConservedState::new(
                mass,
                mass * prim.u + prim.p,
                mass * prim.v,
                prim.u * (e + prim.p),
            )
        }
        Axis::Y => {
            let mass = prim.rho * prim.v;
            ConservedState::new(
                mass,
                mass * prim.u,
                mass * prim.v + prim.p,
                prim.v * (e + prim.p),
            )
        }
    }
}

/// Entropy pair, entropy variables and entropy potential of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuantities {
    /// `S = ln p - γ ln ρ`
    pub s_thermo: f64,
    /// `η = -ρS/(γ-1)`
    pub eta: f64,
    pub q_x: f64,
    pub q_y: f64,
    /// `ν = ∇_U η`
    pub nu: [f64; 4],
    pub psi_x: f64,
    pub psi_y: f64,
}

impl EntropyQuantities {
    pub fn q(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.q_x,
            Axis::Y => self.q_y,
        }
    }

    pub fn psi(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.psi_x,
            Axis::Y => self.psi_y,
        }
    }
}

pub fn entropy_quantities(state: &ConservedState, gas: GasParams) -> EntropyQuantities {
    let p = state.pressure(gas);
    let prim = PrimitiveState::new(state.rho, state.mx / state.rho, state.my / state.rho, p);
    entropy_quantities_prim(&prim, gas)
}

pub fn entropy_quantities_prim(prim: &PrimitiveState, gas: GasParams) -> EntropyQuantities {
    let g = gas.gamma;
    let s = prim.thermo_entropy(gas);
    let eta = -prim.rho * s / gas.gm1();
    let beta = prim.rho / prim.p;
    EntropyQuantities {
        s_thermo: s,
        eta,
        q_x: eta * prim.u,
        q_y: eta * prim.v,
        nu: [
            (g - s) / gas.gm1() - 0.5 * beta * prim.speed_sq(),
            beta * prim.u,
            beta * prim.v,
            -beta,
        ],
        psi_x: prim.rho * prim.u,
        psi_y: prim.rho * prim.v,
    }
}

/// Mathematical entropy `η(U) = -ρS/(γ-1)`.
pub fn entropy(state: &ConservedState, gas: GasParams) -> f64 {
    let p = state.pressure(gas);
    -state.rho * (ln(p) - gas.gamma * ln(state.rho)) / gas.gm1()
}

/// Hessian of the renormalized entropy `η = -ρχ(S)` in three space dimensions,
/// ordered `(ρ, m_x, m_y, m_z, E)`.
///
/// `chi_prime` is `χ'(S)` and `ratio` is `R = χ''(S)/χ'(S)`. The physical entropy
/// corresponds to `chi_prime = 1/(γ-1)` and `ratio = 0`.
pub fn entropy_hessian_3d(
    rho: f64,
    vel: [f64; 3],
    p: f64,
    gas: GasParams,
    chi_prime: f64,
    ratio: f64,
) -> [[f64; 5]; 5] {
    let g = gas.gamma;
    let [u, v, w] = vel;
    let r = ratio;
    let q = u * u + v * v + w * w;
    // a_*^2 = γ/(γ-1) p/ρ
    let a2 = g / gas.gm1() * p / rho;
    let c = 0.5 * q * (1.0 - r) + r * a2;
    let one_r = 1.0 - r;
    let corner = 0.5 * q * one_r - a2 * (1.0 / g - r);
    let half_q_minus_a2 = 0.5 * q - a2;

    let d = [
        [
            0.25 * q * q + a2 * a2 / g - r * half_q_minus_a2 * half_q_minus_a2,
            -u * c,
            -v * c,
            -w * c,
            corner,
        ],
        [
            -u * c,
            u * u * one_r + a2 / g,
            u * v * one_r,
            u * w * one_r,
            -u * one_r,
        ],
        [
            -v * c,
            u * v * one_r,
            v * v * one_r + a2 / g,
            v * w * one_r,
            -v * one_r,
        ],
        [
            -w * c,
            u * w * one_r,
            v * w * one_r,
            w * w * one_r + a2 / g,
            -w * one_r,
        ],
        [corner, -u * one_r, -v * one_r, -w * one_r, one_r],
    ];
    let scale = (gas.gm1() / p) * (gas.gm1() / p) * rho * chi_prime;
    let mut out = [[0.0; 5]; 5];
    for (row_out, row_d) in out.iter_mut().zip(d.iter()) {
        for (o, dv) in row_out.iter_mut().zip(row_d.iter()) {
            *o = scale * dv;
        }
    }
    out
}

/// Hessian `d²η/dU²` of `η = -ρS/(γ-1)` for the 2D state ordering `(ρ, m_x, m_y, E)`.
///
/// Obtained from the 3D expression by deleting the `m_z` row and column.
pub fn entropy_hessian(state: &ConservedState, gas: GasParams) -> [[f64; 4]; 4] {
    let p = state.pressure(gas);
    let full = entropy_hessian_3d(
        state.rho,
        [state.mx / state.rho, state.my / state.rho, 0.0],
        p,
        gas,
        1.0 / gas.gm1(),
        0.0,
    );
    const KEEP: [usize; 4] = [0, 1, 2, 4];
    let mut out = [[0.0; 4]; 4];
    for (i, &ri) in KEEP.iter().enumerate() {
        for (j, &cj) in KEEP.iter().enumerate() {
            out[i][j] = full[ri][cj];
        }
    }
    out
}

/// Enclosure `[lower, upper]` of the smallest eigenvalue of the entropy Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn hessian_eigen_bounds(state: &ConservedState, gas: GasParams) -> HessianBounds {
    let g = gas.gamma;
    let p = state.pressure(gas);
    let q = (state.mx * state.mx + state.my * state.my) / (state.rho * state.rho);
    let a2 = g * p / state.rho;
    let m = (a2 / (g * (q + 2.0) * (q + 2.0)))
        .min(1.0 / (4.0 * (a2 + 1.0)))
        .min(1.0 / (4.0 * g * (q + 1.0)));
    HessianBounds {
        lower: gas.gm1() * gas.gm1() / p * m,
        upper: powf(gas.gm1(), 4.0 / 3.0) / p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAS: GasParams = GasParams::AIR;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn gamma_range_is_enforced() {
        assert!(GasParams::new(1.0).is_err());
        assert!(GasParams::new(2.5).is_err());
        assert!(GasParams::new(2.0).is_ok());
    }

    #[test]
    fn stagnant_gas_pressure() {
        let v = cons_to_prim(&ConservedState::new(1.0, 0.0, 0.0, 2.5), GAS).unwrap();
        assert_eq!((v.rho, v.u, v.v), (1.0, 0.0, 0.0));
        assert!(close(v.p, 1.0, 1e-15));
    }

    #[test]
    fn zero_pressure_is_nonphysical() {
        let err = cons_to_prim(&ConservedState::new(1.0, 3.0, 4.0, 12.5), GAS).unwrap_err();
        assert!(matches!(err, Error::NonPhysical { .. }));
        assert!(cons_to_prim(&ConservedState::new(-1.0, 0.0, 0.0, 1.0), GAS).is_err());
    }

    #[test]
    fn spiral_quadrant_energies() {
        let u = prim_to_cons(&PrimitiveState::new(0.5, 0.5, -0.5, 5.0), GAS);
        assert!(close(u.e_total, 12.625, 1e-15));
        let back = cons_to_prim(&u, GAS).unwrap();
        assert!(close(back.p, 5.0, 1e-15) && close(back.v, -0.5, 1e-15));

        let u = prim_to_cons(&PrimitiveState::new(2.0, -0.5, 0.5, 5.0), GAS);
        assert!(close(u.e_total, 13.0, 1e-15));
        let u = prim_to_cons(&PrimitiveState::new(1.0, 0.0, 0.0, 1.0), GAS);
        assert_eq!((u.rho, u.mx, u.my), (1.0, 0.0, 0.0));
        assert!(close(u.e_total, 2.5, 1e-15));
    }

    #[test]
    fn physical_flux_examples() {
        let still = prim_to_cons(&PrimitiveState::new(1.0, 0.0, 0.0, 1.0), GAS);
        assert_eq!(
            flux(&still, Axis::X, GAS),
            ConservedState::new(0.0, 1.0, 0.0, 0.0)
        );

        let moving = prim_to_cons(&PrimitiveState::new(1.0, 1.0, 0.0, 1.0), GAS);
        assert!(close(moving.e_total, 3.0, 1e-15));
        let fx = flux(&moving, Axis::X, GAS);
        for (a, b) in fx.to_array().iter().zip([1.0, 2.0, 0.0, 4.0]) {
            assert!(close(*a, b, 1e-15));
        }
        let fy = flux(&moving, Axis::Y, GAS);
        for (a, b) in fy.to_array().iter().zip([0.0, 0.0, 1.0, 0.0]) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn entropy_examples() {
        let e = entropy_quantities(&ConservedState::new(1.0, 0.0, 0.0, 2.5), GAS);
        assert!(e.s_thermo.abs() < 1e-15);
        assert!(e.eta.abs() < 1e-15);
        assert!(close(e.nu[0], 3.5, 1e-15));
        assert_eq!(&e.nu[1..3], &[0.0, 0.0]);
        assert!(close(e.nu[3], -1.0, 1e-15));

        let p = core::f64::consts::E;
        let u = prim_to_cons(&PrimitiveState::new(1.0, 0.0, 0.0, p), GAS);
        let e = entropy_quantities(&u, GAS);
        assert!(close(e.s_thermo, 1.0, 1e-15));
        assert!(close(e.eta, -2.5, 1e-14));
    }

    #[test]
    fn entropy_identities() {
        let u = prim_to_cons(&PrimitiveState::new(0.7, 1.3, -0.4, 3.2), GAS);
        let e = entropy_quantities(&u, GAS);
        assert!(close(e.eta, -0.7 * e.s_thermo / 0.4, 1e-14));
        assert!(close(e.q_x, e.eta * 1.3, 1e-14));
        assert!(close(e.q_y, e.eta * -0.4, 1e-14));
        assert!(close(e.psi_x, 0.7 * 1.3, 1e-14));
        assert!(close(entropy(&u, GAS), e.eta, 1e-14));
    }

    #[test]
    fn eigen_bound_example() {
        let b = hessian_eigen_bounds(&ConservedState::new(1.0, 0.0, 0.0, 2.5), GAS);
        assert!(close(b.lower, 0.16 / 9.6, 1e-14));
        assert!(close(b.upper, 0.294_723, 1e-6));
    }

    #[test]
    fn eigen_bounds_scale_inversely_with_pressure() {
        let v = PrimitiveState::new(1.3, 0.8, -1.1, 2.0);
        let v2 = PrimitiveState::new(2.6, 0.8, -1.1, 4.0);
        let b1 = hessian_eigen_bounds(&prim_to_cons(&v, GAS), GAS);
        let b2 = hessian_eigen_bounds(&prim_to_cons(&v2, GAS), GAS);
        assert!(close(b2.lower, 0.5 * b1.lower, 1e-14));
        assert!(close(b2.upper, 0.5 * b1.upper, 1e-14));
    }

    #[test]
    fn hessian_drops_third_direction() {
        let u = prim_to_cons(&PrimitiveState::new(1.1, 0.3, 0.9, 2.0), GAS);
        let h2 = entropy_hessian(&u, GAS);
        let h3 = entropy_hessian_3d(1.1, [0.3, 0.9, 0.0], u.pressure(GAS), GAS, 2.5, 0.0);
        for (a, b) in [
            (h2[0][3], h3[0][4]),
            (h2[3][3], h3[4][4]),
            (h2[1][2], h3[1][2]),
        ] {
            assert!(close(a, b, 1e-14), "{a} vs {b}");
        }
    }
}
