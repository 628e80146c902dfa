//! Convergence functionals over a mesh hierarchy.
//!
//! For levels `n_1 < … < n_K` and a reference `N`, level `k` is compared with
//! the reference through
//!
//! * `E1 = ‖U_k - U_N‖`,
//! * `E2 = ‖avg_{j<=k} U_j - avg_{all} U_j‖` (Cesàro averages),
//! * `E3 = ‖dev_{j<=k} - dev_{all}‖` (first variances, mean absolute deviations),
//! * `E4 = ∫ W1(δ-measure of {U_j(x)}_{j<=k}, δ-measure of {U_j(x)}_{all}) dx`,
//!
//! where "all" means every level plus the reference. All fields are prolonged
//! to the reference mesh, the norm is the spatial L¹ norm at the final time, and
//! each variable is treated as a scalar.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::math::{compensated_sum, ln};
use crate::thermo::{ConservedState, GasParams};

/// Scalar quantity extracted from a conserved state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Rho,
    Mx,
    My,
    E,
    P,
    /// Thermodynamic entropy `ln p - γ ln ρ`.
    S,
}

impl Variable {
    /// Variables of the error tables.
    pub const ERRORS: [Variable; 5] = [
        Variable::Rho,
        Variable::Mx,
        Variable::My,
        Variable::E,
        Variable::S,
    ];
    /// Columns of a field dump.
    pub const DUMP: [Variable; 6] = [
        Variable::Rho,
        Variable::Mx,
        Variable::My,
        Variable::E,
        Variable::P,
        Variable::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Rho => "rho",
            Variable::Mx => "mx",
            Variable::My => "my",
            Variable::E => "E",
            Variable::P => "p",
            Variable::S => "S",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::DUMP.into_iter().find(|v| v.name() == name)
    }

    pub fn extract(self, u: &ConservedState, gas: GasParams) -> f64 {
        match self {
            Variable::Rho => u.rho,
            Variable::Mx => u.mx,
            Variable::My => u.my,
            Variable::E => u.e_total,
            Variable::P => u.pressure(gas),
            Variable::S => ln(u.pressure(gas)) - gas.gamma * ln(u.rho),
        }
    }
}

/// Cell values of one scalar on a uniform mesh, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn from_field(field: &Field2D, var: Variable, gas: GasParams) -> Self {
        Self {
            nx: field.nx(),
            ny: field.ny(),
            dx: field.dx(),
            dy: field.dy(),
            values: field
                .interior()
                .map(|(_, u)| var.extract(&u, gas))
                .collect(),
        }
    }

    pub fn constant_like(other: &ScalarField, value: f64) -> Self {
        Self {
            values: vec![value; other.values.len()],
            ..other.clone()
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn prolong_to(&self, nx: usize, ny: usize) -> Result<ScalarField> {
        if nx < self.nx
            || ny < self.ny
            || !nx.is_multiple_of(self.nx)
            || !ny.is_multiple_of(self.ny)
        {
            return Err(Error::ResolutionMismatch {
                from: (self.nx, self.ny),
                to: (nx, ny),
            });
        }
        let (rx, ry) = (nx / self.nx, ny / self.ny);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(self.get(i / rx, j / ry));
            }
        }
        Ok(ScalarField {
            nx,
            ny,
            dx: self.dx / rx as f64,
            dy: self.dy / ry as f64,
            values,
        })
    }

    fn same_mesh(&self, other: &ScalarField) -> Result<()> {
        if self.nx == other.nx && self.ny == other.ny {
            Ok(())
        } else {
            Err(Error::ResolutionMismatch {
                from: (other.nx, other.ny),
                to: (self.nx, self.ny),
            })
        }
    }
}

/// `Σ_K |a_K - b_K| |K|`.
pub fn l1_distance(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    a.same_mesh(b)?;
    let sum = compensated_sum(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()));
    Ok(sum * a.dx * a.dy)
}

/// `Σ_K |a_K| |K|`.
pub fn l1_norm(a: &ScalarField) -> f64 {
    compensated_sum(a.values.iter().map(|x| x.abs())) * a.dx * a.dy
}

fn check_levels(levels: &[ScalarField], k: usize) -> Result<()> {
    if k == 0 || k > levels.len() {
        return Err(Error::InvalidParameter("average length out of range"));
    }
    for f in &levels[1..k] {
        levels[0].same_mesh(f)?;
    }
    Ok(())
}

/// Cellwise mean of the first `k` fields (all on one mesh).
pub fn cesaro_scalar(levels: &[ScalarField], k: usize) -> Result<ScalarField> {
    check_levels(levels, k)?;
    let mut out = ScalarField::constant_like(&levels[0], 0.0);
    for (c, v) in out.values.iter_mut().enumerate() {
        let first = levels[0].values[c];
        let spread: f64 = levels[1..k].iter().map(|f| f.values[c] - first).sum();
        *v = first + spread / k as f64;
    }
    Ok(out)
}

/// Cellwise mean absolute deviation of the first `k` fields from their mean.
pub fn first_variance_scalar(levels: &[ScalarField], k: usize) -> Result<ScalarField> {
    let avg = cesaro_scalar(levels, k)?;
    let mut out = ScalarField::constant_like(&avg, 0.0);
    for (c, v) in out.values.iter_mut().enumerate() {
        let m = avg.values[c];
        *v = levels[..k]
            .iter()
            .map(|f| (f.values[c] - m).abs())
            .sum::<f64>()
            / k as f64;
    }
    Ok(out)
}

fn prolong_all(fields: &[Field2D], nx: usize, ny: usize) -> Result<Vec<Field2D>> {
    fields.iter().map(|f| f.prolong_to(nx, ny)).collect()
}

/// Componentwise Cesàro average of the first `k` fields after prolongation to `nx × ny`.
pub fn cesaro_average(fields: &[Field2D], k: usize, nx: usize, ny: usize) -> Result<Field2D> {
    if k == 0 || k > fields.len() {
        return Err(Error::InvalidParameter("average length out of range"));
    }
    let fine = prolong_all(&fields[..k], nx, ny)?;
    let mut out = fine[0].clone();
    for j in 0..ny {
        for i in 0..nx {
            let first = fine[0].get(i, j);
            let mut acc = ConservedState::ZERO;
            for f in &fine[1..] {
                acc += f.get(i, j) - first;
            }
            out.set(i, j, first + acc * (1.0 / k as f64));
        }
    }
    out.fill_ghosts();
    Ok(out)
}

/// Componentwise first variance of the first `k` fields after prolongation.
/// The result is a nonnegative 4-vector per cell, not a gas state.
pub fn first_variance(fields: &[Field2D], k: usize, nx: usize, ny: usize) -> Result<Field2D> {
    let avg = cesaro_average(fields, k, nx, ny)?;
    let fine = prolong_all(&fields[..k], nx, ny)?;
    let mut out = avg.clone();
    for j in 0..ny {
        for i in 0..nx {
            let m = avg.get(i, j);
            let mut acc = ConservedState::ZERO;
            for f in &fine {
                acc += (f.get(i, j) - m).abs();
            }
            out.set(i, j, acc * (1.0 / k as f64));
        }
    }
    out.fill_ghosts();
    Ok(out)
}

/// Wasserstein-1 distance between two discrete probability measures on ℝ,
/// given as `(position, weight)` atoms.
///
/// Computed as the L¹ distance of the quantile functions by sweeping both
/// sorted atom lists.
pub fn wasserstein1_1d(mu: &[(f64, f64)], nu: &[(f64, f64)]) -> Result<f64> {
    check_measure(mu)?;
    check_measure(nu)?;
    let sorted = |m: &[(f64, f64)]| {
        let mut v: Vec<(f64, f64)> = m.iter().copied().filter(|a| a.1 > 0.0).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    let (a, b) = (sorted(mu), sorted(nu));
    // Cumulative weights, with the last break forced to 1 on both sides.
    let cum = |m: &[(f64, f64)]| {
        let mut acc = 0.0;
        let mut out: Vec<f64> = m
            .iter()
            .map(|x| {
                acc += x.1;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    };
    let (ca, cb) = (cum(&a), cum(&b));
    let (mut i, mut j) = (0, 0);
    let mut level = 0.0;
    let mut cost = 0.0;
    while i < a.len() && j < b.len() {
        let next = ca[i].min(cb[j]);
        cost += (next - level) * (a[i].0 - b[j].0).abs();
        level = next;
        if ca[i] <= next {
            i += 1;
        }
        if cb[j] <= next {
            j += 1;
        }
    }
    Ok(cost)
}

fn check_measure(m: &[(f64, f64)]) -> Result<()> {
    let total: f64 = m.iter().map(|a| a.1).sum();
    if m.iter().any(|a| !(a.1 >= 0.0) || !a.0.is_finite()) || !((total - 1.0).abs() <= 1e-12) {
        return Err(Error::UnnormalizedMeasure { total });
    }
    Ok(())
}

/// W1 between the uniform empirical measures of two samples. Quantile breaks
/// are compared in integer arithmetic, so no weights are rounded.
pub fn wasserstein1_uniform(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::UnnormalizedMeasure { total: 0.0 });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Ok(w1_sorted(&a, &b))
}

fn w1_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (k, m) = (a.len() as u64, b.len() as u64);
    // Quantile level t is represented as t * k * m.
    let (mut i, mut j) = (0u64, 0u64);
    let mut level = 0u64;
    let mut cost = 0.0;
    while i < k && j < m {
        let next = ((i + 1) * m).min((j + 1) * k);
        cost += (next - level) as f64 * (a[i as usize] - b[j as usize]).abs();
        level = next;
        if (i + 1) * m == next {
            i += 1;
        }
        if (j + 1) * k == next {
            j += 1;
        }
    }
    cost / (k * m) as f64
}

/// Cellwise W1 between the empirical measures of `levels[..k]` and of `all`.
pub fn wasserstein_field(
    levels: &[ScalarField],
    k: usize,
    all: &[ScalarField],
) -> Result<ScalarField> {
    check_levels(levels, k)?;
    check_levels(all, all.len())?;
    levels[0].same_mesh(&all[0])?;
    let mut out = ScalarField::constant_like(&levels[0], 0.0);
    let mut a = vec![0.0; k];
    let mut b = vec![0.0; all.len()];
    for (c, v) in out.values.iter_mut().enumerate() {
        for (x, f) in a.iter_mut().zip(levels) {
            *x = f.values[c];
        }
        for (x, f) in b.iter_mut().zip(all) {
            *x = f.values[c];
        }
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        *v = w1_sorted(&a, &b);
    }
    Ok(out)
}

/// Final-time fields of a hierarchy, coarsest first, plus the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSequence {
    pub fields: Vec<Field2D>,
    pub reference: Field2D,
    pub variables: Vec<Variable>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    /// `E1..E4`.
    pub errors: [f64; 4],
    /// Observed orders against the previous level; `None` on the first row or
    /// when an error vanishes.
    pub orders: [Option<f64>; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableErrors {
    pub variable: Variable,
    pub rows: Vec<ErrorRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub levels: Vec<usize>,
    pub reference_n: usize,
    pub variables: Vec<VariableErrors>,
    /// `E4` summed over all variables, per level.
    pub e4_total: Vec<f64>,
}

impl ErrorReport {
    pub fn variable(&self, v: Variable) -> Option<&VariableErrors> {
        self.variables.iter().find(|e| e.variable == v)
    }
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)`, defined when both errors
/// are positive.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && n_fine > n_coarse {
        Some(ln(e_coarse / e_fine) / ln(n_fine as f64 / n_coarse as f64))
    } else {
        None
    }
}

/// E1-E4 for every level and every requested variable.
pub fn compute_errors(seq: &SolutionSequence, gas: GasParams) -> Result<ErrorReport> {
    if seq.fields.len() < 2 {
        return Err(Error::InsufficientLevels {
            levels: seq.fields.len(),
        });
    }
    let (nx, ny) = (seq.reference.nx(), seq.reference.ny());
    let levels: Vec<usize> = seq.fields.iter().map(|f| f.nx()).collect();
    let mut variables = Vec::with_capacity(seq.variables.len());
    let mut e4_total = vec![0.0; levels.len()];

    for &var in &seq.variables {
        let mut all = Vec::with_capacity(seq.fields.len() + 1);
        for f in &seq.fields {
            all.push(ScalarField::from_field(f, var, gas).prolong_to(nx, ny)?);
        }
        all.push(ScalarField::from_field(&seq.reference, var, gas));
        let k_all = all.len();
        let reference = &all[k_all - 1];
        let avg_all = cesaro_scalar(&all, k_all)?;
        let dev_all = first_variance_scalar(&all, k_all)?;

        let mut rows: Vec<ErrorRow> = Vec::with_capacity(levels.len());
        for k in 1..=levels.len() {
            let e1 = l1_distance(&all[k - 1], reference)?;
            let e2 = l1_distance(&cesaro_scalar(&all, k)?, &avg_all)?;
            let e3 = l1_distance(&first_variance_scalar(&all, k)?, &dev_all)?;
            let e4 = l1_norm(&wasserstein_field(&all, k, &all)?);
            e4_total[k - 1] += e4;
            let errors = [e1, e2, e3, e4];
            let orders = match rows.last() {
                Some(prev) => core::array::from_fn(|c| {
                    observed_order(prev.errors[c], errors[c], prev.n, levels[k - 1])
                }),
                None => [None; 4],
            };
            rows.push(ErrorRow {
                n: levels[k - 1],
                errors,
                orders,
            });
        }
        variables.push(VariableErrors {
            variable: var,
            rows,
        });
    }
    Ok(ErrorReport {
        levels,
        reference_n: nx,
        variables,
        e4_total,
    })
}

/// Aligned plain-text table `n, E1, order, …, E4, order` for one variable.
pub fn order_table(errors: &VariableErrors) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "variable: {}", errors.variable.name());
    let _ = write!(out, "{:>6}", "n");
    for e in ["E1", "E2", "E3", "E4"] {
        let _ = write!(out, "  {e:>12}  {:>7}", "order");
    }
    out.push('\n');
    for row in &errors.rows {
        let _ = write!(out, "{:>6}", row.n);
        for c in 0..4 {
            let order = match row.orders[c] {
                Some(o) => format!("{o:.3}"),
                None => String::from("-"),
            };
            let _ = write!(out, "  {:>12.6e}  {:>7}", row.errors[c], order);
        }
        out.push('\n');
    }
    out
}
