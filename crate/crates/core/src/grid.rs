//! Uniform rectangular meshes with one ghost layer.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::compensated_sum;
use crate::thermo::{prim_to_cons, ConservedState, GasParams, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Periodic,
    /// Zero-gradient extrapolation of the nearest interior cell.
    Outflow,
    /// Mirror of the nearest interior cell with the normal momentum negated.
    Reflective,
}

impl BoundaryCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Outflow => "outflow",
            BoundaryCondition::Reflective => "reflective",
        }
    }
}

impl core::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryCondition::Periodic),
            "outflow" => Ok(BoundaryCondition::Outflow),
            "reflective" => Ok(BoundaryCondition::Reflective),
            _ => Err(Error::InvalidParameter(
                "boundary condition must be periodic, outflow or reflective",
            )),
        }
    }
}

/// Geometry of a uniform mesh over `[x0, x0 + lx] × [y0, y0 + ly]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub lx: f64,
    pub ly: f64,
    pub bc: BoundaryCondition,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, bc: BoundaryCondition) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one cell per direction",
            ));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::InvalidParameter("domain lengths must be positive"));
        }
        Ok(Self {
            nx,
            ny,
            x0: 0.0,
            y0: 0.0,
            lx,
            ly,
            bc,
        })
    }

    /// `n × n` cells on the unit square.
    pub fn unit_square(n: usize, bc: BoundaryCondition) -> Result<Self> {
        Self::new(n, n, 1.0, 1.0, bc)
    }

    pub fn with_origin(mut self, x0: f64, y0: f64) -> Self {
        self.x0 = x0;
        self.y0 = y0;
        self
    }

    pub fn with_resolution(mut self, nx: usize, ny: usize) -> Self {
        self.nx = nx;
        self.ny = ny;
        self
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.dx(),
            self.y0 + (j as f64 + 0.5) * self.dy(),
        )
    }
}

/// Cell averages of the conserved variables on a [`GridSpec`], with one ghost
/// layer on every side. Corner ghosts are never read.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    spec: GridSpec,
    data: Vec<ConservedState>,
}

impl Field2D {
    pub fn uniform(spec: GridSpec, state: ConservedState) -> Self {
        Self {
            spec,
            data: vec![state; (spec.nx + 2) * (spec.ny + 2)],
        }
    }

    /// Build a field from interior values in row-major order (`j` outer).
    pub fn from_interior(spec: GridSpec, values: &[ConservedState]) -> Result<Self> {
        if values.len() != spec.nx * spec.ny {
            return Err(Error::InvalidParameter(
                "interior length does not match the grid",
            ));
        }
        let mut field = Self::uniform(spec, ConservedState::ZERO);
        for j in 0..spec.ny {
            for i in 0..spec.nx {
                field.set(i, j, values[j * spec.nx + i]);
            }
        }
        field.fill_ghosts();
        Ok(field)
    }

    #[inline]
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.spec.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.spec.ny
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.spec.dx()
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.spec.dy()
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.spec.bc
    }

    /// Change the boundary tag; ghosts are refilled.
    pub fn set_bc(&mut self, bc: BoundaryCondition) {
        self.spec.bc = bc;
        self.fill_ghosts();
    }

    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -1 && i <= self.spec.nx as isize);
        debug_assert!(j >= -1 && j <= self.spec.ny as isize);
        (j + 1) as usize * (self.spec.nx + 2) + (i + 1) as usize
    }

    /// Interior cell `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ConservedState {
        self.data[self.offset(i as isize, j as isize)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, state: ConservedState) {
        let k = self.offset(i as isize, j as isize);
        self.data[k] = state;
    }

    /// Any cell including ghosts, with indices in `-1..=n`.
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> ConservedState {
        self.data[self.offset(i, j)]
    }

    /// Interior cells in row-major order.
    pub fn interior(&self) -> impl Iterator<Item = ((usize, usize), ConservedState)> + '_ {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        (0..ny).flat_map(move |j| (0..nx).map(move |i| ((i, j), self.get(i, j))))
    }

    pub fn interior_values(&self) -> Vec<ConservedState> {
        self.interior().map(|(_, u)| u).collect()
    }

    /// Populate the ghost layer according to the boundary condition.
    pub fn fill_ghosts(&mut self) {
        let (nx, ny) = (self.spec.nx as isize, self.spec.ny as isize);
        let bc = self.spec.bc;
        for j in 0..ny {
            let (lo, hi) = match bc {
                BoundaryCondition::Periodic => (self.at(nx - 1, j), self.at(0, j)),
                BoundaryCondition::Outflow => (self.at(0, j), self.at(nx - 1, j)),
                BoundaryCondition::Reflective => {
                    let flip =
                        |u: ConservedState| ConservedState::new(u.rho, -u.mx, u.my, u.e_total);
                    (flip(self.at(0, j)), flip(self.at(nx - 1, j)))
                }
            };
            let k = self.offset(-1, j);
            self.data[k] = lo;
            let k = self.offset(nx, j);
            self.data[k] = hi;
        }
        for i in 0..nx {
            let (lo, hi) = match bc {
                BoundaryCondition::Periodic => (self.at(i, ny - 1), self.at(i, 0)),
                BoundaryCondition::Outflow => (self.at(i, 0), self.at(i, ny - 1)),
                BoundaryCondition::Reflective => {
                    let flip =
                        |u: ConservedState| ConservedState::new(u.rho, u.mx, -u.my, u.e_total);
                    (flip(self.at(i, 0)), flip(self.at(i, ny - 1)))
                }
            };
            let k = self.offset(i, -1);
            self.data[k] = lo;
            let k = self.offset(i, ny);
            self.data[k] = hi;
        }
    }

    /// `Σ_K U_K |K|` for every component, summed in a fixed order with compensation.
    pub fn totals(&self) -> ConservedState {
        let area = self.spec.cell_area();
        let values = self.interior_values();
        let sum = |f: fn(&ConservedState) -> f64| compensated_sum(values.iter().map(f)) * area;
        ConservedState::new(
            sum(|u| u.rho),
            sum(|u| u.mx),
            sum(|u| u.my),
            sum(|u| u.e_total),
        )
    }

    /// Piecewise-constant injection onto an `nx × ny` mesh whose cells refine
    /// the current ones.
    pub fn prolong_to(&self, nx: usize, ny: usize) -> Result<Field2D> {
        let (cx, cy) = (self.spec.nx, self.spec.ny);
        if nx < cx || ny < cy || !nx.is_multiple_of(cx) || !ny.is_multiple_of(cy) {
            return Err(Error::ResolutionMismatch {
                from: (cx, cy),
                to: (nx, ny),
            });
        }
        let (rx, ry) = (nx / cx, ny / cy);
        let mut out = Field2D::uniform(self.spec.with_resolution(nx, ny), ConservedState::ZERO);
        for j in 0..ny {
            for i in 0..nx {
                out.set(i, j, self.get(i / rx, j / ry));
            }
        }
        out.fill_ghosts();
        Ok(out)
    }

    /// Mirror image under `x <-> y`: cells are transposed and momenta swapped.
    pub fn transposed(&self) -> Field2D {
        let s = self.spec;
        let spec = GridSpec {
            nx: s.ny,
            ny: s.nx,
            x0: s.y0,
            y0: s.x0,
            lx: s.ly,
            ly: s.lx,
            bc: s.bc,
        };
        let mut out = Field2D::uniform(spec, ConservedState::ZERO);
        for j in 0..s.ny {
            for i in 0..s.nx {
                out.set(j, i, self.get(i, j).swap_momenta());
            }
        }
        out.fill_ghosts();
        out
    }

    pub(crate) fn raw(&self) -> &[ConservedState] {
        &self.data
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [ConservedState] {
        &mut self.data
    }
}

// 4-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Cell averages of a pointwise initial condition by 4×4 Gauss-Legendre
/// quadrature. Constants are reproduced bit for bit.
pub fn project_initial<F>(f: F, spec: GridSpec, gas: GasParams) -> Field2D
where
    F: Fn(f64, f64) -> PrimitiveState,
{
    let (dx, dy) = (spec.dx(), spec.dy());
    let mut field = Field2D::uniform(spec, ConservedState::ZERO);
    let mut samples = [ConservedState::ZERO; 16];
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let (xc, yc) = spec.cell_center(i, j);
            for (b, ny_) in GL_NODES.iter().enumerate() {
                for (a, nx_) in GL_NODES.iter().enumerate() {
                    let x = xc + 0.5 * dx * nx_;
                    let y = yc + 0.5 * dy * ny_;
                    samples[4 * b + a] = prim_to_cons(&f(x, y), gas);
                }
            }
            let first = samples[0];
            let mut acc = ConservedState::ZERO;
            for b in 0..4 {
                for a in 0..4 {
                    let w = 0.25 * GL_WEIGHTS[a] * GL_WEIGHTS[b];
                    acc += (samples[4 * b + a] - first) * w;
                }
            }
            field.set(i, j, first + acc);
        }
    }
    field.fill_ghosts();
    field
}

/// Square resolutions of a convergence study, each dividing the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshHierarchy {
    pub levels: Vec<usize>,
    pub reference_n: usize,
}

impl MeshHierarchy {
    pub fn new(mut levels: Vec<usize>, reference_n: usize) -> Result<Self> {
        levels.sort_unstable();
        levels.dedup();
        if reference_n == 0 || levels.contains(&0) {
            return Err(Error::InvalidParameter("resolutions must be positive"));
        }
        if let Some(&n) = levels.iter().find(|&&n| !reference_n.is_multiple_of(n)) {
            return Err(Error::ResolutionMismatch {
                from: (n, n),
                to: (reference_n, reference_n),
            });
        }
        Ok(Self {
            levels,
            reference_n,
        })
    }
}
