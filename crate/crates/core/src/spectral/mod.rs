//! Joint-spectral-radius brackets and the die-out criteria built on them.
//!
//! For a set `M` of system matrices the joint spectral radius is bracketed by
//!
//! ```text
//! max_k rho_bar_k^(1/k)  <=  JSR(M)  <=  min_k rho_hat_k^(1/k)
//! ```
//!
//! where `rho_bar_k` is the largest spectral radius and `rho_hat_k` the largest
//! induced norm over all length-`k` products. A JSR below one means the origin
//! is asymptotically stable under every switching sequence, so the epidemic
//! dies out. Sets of symmetric matrices have `JSR = max_i rho(M_i)` exactly.

mod criteria;
mod gilbert;
mod jsr;

use serde::{Deserialize, Serialize};

pub use criteria::{
    product_spectral_radius, threshold_jsr, threshold_periodic, threshold_regular,
    threshold_static,
};
pub use gilbert::{
    expected_column_sum, gilbert_spread_bound, mc_column_sum, ColumnSampling, ColumnSumEstimate,
    GilbertBound,
};
pub use jsr::{
    jsr_bracket, jsr_bracket_with, jsr_symmetric, rho_bar_k, rho_bar_k_with, rho_hat_k,
    rho_hat_k_with, EnumerationLimits,
};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, NormKind};
use crate::meanfield::system_matrix;
use crate::netmodel::radius::RadiusOptions;
use crate::netmodel::{EpidemicParams, Graph};

/// Values within this distance of 1 get no verdict; the theory is strict at the boundary.
pub const VERDICT_TOL: f64 = 1e-9;

/// Radius accuracy used inside bracket computations.
pub(crate) const RADIUS_OPTS: RadiusOptions = RadiusOptions { tol: 1e-12, max_iter: 100_000 };

/// Nonempty set of nonnegative square matrices of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    members: Vec<Matrix>,
    symmetric: bool,
}

impl MatrixSet {
    pub fn new(members: Vec<Matrix>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::Parameter("matrix set is empty".into()))?;
        let n = first.dim();
        if let Some(m) = members.iter().find(|m| m.dim() != n) {
            return Err(Error::Dimension { expected: n, actual: m.dim() });
        }
        if members.iter().any(|m| !m.is_nonnegative()) {
            return Err(Error::Parameter("matrix set members must be nonnegative".into()));
        }
        let symmetric = members.iter().all(Matrix::is_symmetric);
        Ok(Self { members, symmetric })
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Every member multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if c.is_nan() || c <= 0.0 {
            return Err(Error::Parameter(format!("scale {c} must be positive")));
        }
        Self::new(self.members.iter().map(|m| m.scale(c)).collect())
    }

    /// Induced-2 when every member is symmetric (where it is exact), induced-1 otherwise.
    pub fn default_norm(&self) -> NormKind {
        if self.symmetric {
            NormKind::Induced2
        } else {
            NormKind::Induced1
        }
    }
}

/// `{(1 - delta) I + beta A : A in graphs}`.
pub fn build_system_set(graphs: &[Graph], params: &EpidemicParams) -> Result<MatrixSet> {
    params.validate()?;
    let first = graphs.first().ok_or_else(|| Error::Parameter("graph set is empty".into()))?;
    if let Some(g) = graphs.iter().find(|g| g.n() != first.n()) {
        return Err(Error::Dimension { expected: first.n(), actual: g.n() });
    }
    MatrixSet::new(graphs.iter().map(|g| system_matrix(g, params)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketMethod {
    /// Product enumeration up to `depth`.
    Enumerated,
    /// Symmetric members: the JSR is the largest member radius.
    Symmetric,
    /// One member: the JSR is its spectral radius.
    Singleton,
}

/// Certified bounds on the joint spectral radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsrBracket {
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
    pub norm: NormKind,
    pub method: BracketMethod,
}

impl JsrBracket {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bounds(self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    DiesOut,
    Spreads,
    Inconclusive,
}

impl Verdict {
    /// Verdict for a quantity compared against 1.
    pub fn from_value(value: f64) -> Self {
        Self::from_bounds(value, value)
    }

    /// Die-out needs the upper bound below 1, spreading the lower bound above 1.
    pub fn from_bounds(lower: f64, upper: f64) -> Self {
        if upper < 1.0 - VERDICT_TOL {
            Verdict::DiesOut
        } else if lower > 1.0 + VERDICT_TOL {
            Verdict::Spreads
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `1 - delta + beta rho(A)` for one static graph.
    Static,
    /// `rho(prod_i M_i)` over one period.
    Periodic,
    /// `1 - delta + beta k` for regular graphs of degree `k`.
    Regular,
    /// JSR bracket of the system set.
    Jsr,
}

/// A threshold decision with the numbers behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdVerdict {
    pub criterion: Criterion,
    /// The quantity compared with 1, when the criterion has a single one.
    pub value: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub depth: Option<usize>,
    pub norm: Option<NormKind>,
    pub verdict: Verdict,
}

impl ThresholdVerdict {
    pub(crate) fn from_value(criterion: Criterion, value: f64) -> Self {
        Self {
            criterion,
            value: Some(value),
            lower: Some(value),
            upper: Some(value),
            depth: None,
            norm: None,
            verdict: Verdict::from_value(value),
        }
    }

    pub(crate) fn from_bracket(b: &JsrBracket) -> Self {
        Self {
            criterion: Criterion::Jsr,
            value: (b.lower == b.upper).then_some(b.lower),
            lower: Some(b.lower),
            upper: Some(b.upper),
            depth: Some(b.depth),
            norm: Some(b.norm),
            verdict: b.verdict(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::star;

    #[test]
    fn system_set_of_empty_graph() {
        let pr = EpidemicParams::new(0.5, 0.25).unwrap();
        let s = build_system_set(&[Graph::empty(3, false)], &pr).unwrap();
        assert_eq!(s.members(), &[Matrix::scaled_identity(3, 0.75)]);
        assert!(s.is_symmetric());
    }

    #[test]
    fn system_set_of_edge() {
        let pr = EpidemicParams::new(0.3, 0.2).unwrap();
        let s = build_system_set(&[Graph::new(2, false, [(0, 1)]).unwrap()], &pr).unwrap();
        assert_eq!(s.members()[0].to_rows(), vec![vec![0.8, 0.3], vec![0.3, 0.8]]);
    }

    #[test]
    fn directed_graph_breaks_symmetry() {
        let pr = EpidemicParams::new(0.3, 0.2).unwrap();
        let s = build_system_set(&[Graph::new(2, true, [(0, 1)]).unwrap()], &pr).unwrap();
        assert!(!s.is_symmetric());
        assert_eq!(s.default_norm(), NormKind::Induced1);
    }

    #[test]
    fn set_validation() {
        let pr = EpidemicParams::new(0.3, 0.2).unwrap();
        assert!(build_system_set(&[], &pr).is_err());
        assert!(build_system_set(&[star(3), star(4)], &pr).is_err());
        assert!(MatrixSet::new(vec![Matrix::from_rows(&[[-1.0]]).unwrap()]).is_err());
    }

    #[test]
    fn verdict_band() {
        assert_eq!(Verdict::from_value(0.5), Verdict::DiesOut);
        assert_eq!(Verdict::from_value(1.0 + 1e-10), Verdict::Inconclusive);
        assert_eq!(Verdict::from_value(1.0 - 1e-10), Verdict::Inconclusive);
        assert_eq!(Verdict::from_value(1.01), Verdict::Spreads);
        assert_eq!(Verdict::from_bounds(0.9, 1.1), Verdict::Inconclusive);
    }
}
