//! Crate-wide error type.

use alloc::string::String;
use alloc::vec::Vec;

/// Diagnostics for one failed construction attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct AttemptReport {
    /// Seed the family of this attempt was drawn from.
    pub seed: u64,
    /// Edge count of the sampled non-orthogonality graph.
    pub edges: usize,
    /// Witness biclique found by the verifier (left side, right side).
    pub witness: (Vec<usize>, Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violated a precondition (odd k, zero n, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two operands do not share (k, m) or vector dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A size guard against combinatorial or memory blow-up was exceeded.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// No k >= 4 divisible by 4 satisfies the schedule threshold.
    #[error("schedule infeasible: no k >= 4 divisible by 4 has t >= 2^(k+3)/(epsilon*k) for t={t}, epsilon={epsilon}")]
    ScheduleInfeasible { t: u64, epsilon: f64 },

    /// The nominal biclique-search work `n * C(n, t)` exceeds the budget.
    #[error("work budget exceeded: nominal cost {cost} > budget {budget}")]
    BudgetExceeded { cost: u128, budget: u64 },

    /// Every retry of the randomized construction produced a biclique.
    #[error("construction failed after {attempts} attempts; every sample contained a K_{{t,t}}", attempts = .0.len())]
    ConstructionFailed(Vec<AttemptReport>),

    /// A representation failed the validation required by an operation.
    #[error("representation is not {required}: {detail}")]
    InvalidRepresentation { required: &'static str, detail: String },

    /// Matrix input expected to be symmetric was not.
    #[error("matrix not symmetric: max asymmetry {0:e}")]
    NotSymmetric(f64),

    /// The eigensolver exhausted its sweep budget.
    #[error("eigensolver did not converge within {0} sweeps")]
    EigenNoConvergence(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_carries_parameters() {
        let e = Error::ScheduleInfeasible { t: 3, epsilon: 0.1 };
        let s = e.to_string();
        assert!(s.contains("t=3"));
        let e = Error::BudgetExceeded { cost: 10, budget: 5 };
        assert!(e.to_string().contains("10"));
    }
}
