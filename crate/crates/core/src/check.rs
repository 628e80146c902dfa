//! Evaluated inequalities, used by the jump-estimate and star-region reports.

/// Default relative slack for deciding that `lhs <= rhs` holds in floating point.
pub const SLACK_TOL: f64 = 1e-12;

/// One evaluated inequality `lhs <= rhs` (or `lhs < rhs` when `strict`).
///
/// Strict inequalities cannot be told apart from their non-strict version at
/// round-off level, so both are accepted when `slack >= -SLACK_TOL * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub slack: f64,
    pub satisfied: bool,
}

impl Inequality {
    pub fn le(id: &'static str, lhs: f64, rhs: f64) -> Self {
        Self::build(id, lhs, rhs, false)
    }

    pub fn lt(id: &'static str, lhs: f64, rhs: f64) -> Self {
        Self::build(id, lhs, rhs, true)
    }

    fn build(id: &'static str, lhs: f64, rhs: f64, strict: bool) -> Self {
        let slack = rhs - lhs;
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        Self {
            id,
            lhs,
            rhs,
            strict,
            slack,
            satisfied: slack >= -SLACK_TOL * scale,
        }
    }
}
