use crate::error::{Error, Result};

/// Size caps for the exhaustive procedures.
///
/// Every cap is a variable count; the corresponding work is exponential in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Occurring variables allowed in a satisfiability or tautology check.
    pub sat_vars: usize,
    /// Variables allowed for implicit-graph searches (dominance, consistency, planning).
    pub search_vars: usize,
    /// Variables allowed when the whole flip digraph is materialized.
    pub materialize_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sat_vars: 24,
            search_vars: 26,
            materialize_vars: 20,
        }
    }
}

impl Limits {
    /// Caps every limit at `n`; used by the `--limit-n` override.
    pub fn with_all(n: usize) -> Self {
        Limits {
            sat_vars: n,
            search_vars: n,
            materialize_vars: n,
        }
    }

    pub(crate) fn check_sat(&self, n: usize) -> Result<()> {
        check("satisfiability enumeration", n, self.sat_vars)
    }

    pub(crate) fn check_search(&self, what: &'static str, n: usize) -> Result<()> {
        check(what, n, self.search_vars)
    }

    pub(crate) fn check_materialize(&self, what: &'static str, n: usize) -> Result<()> {
        check(what, n, self.materialize_vars)
    }
}

/// State indices are stored as `u32` in materialized graphs and visited sets
/// hold one bit per state, so no override may go past this.
pub const HARD_MAX_VARS: usize = 32;

fn check(what: &'static str, n: usize, limit: usize) -> Result<()> {
    let limit = limit.min(HARD_MAX_VARS);
    if n > limit {
        Err(Error::Capacity { what, n, limit })
    } else {
        Ok(())
    }
}
