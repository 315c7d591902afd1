/// Size limits that make large inputs fail with
/// [`Error::SizeBudgetExceeded`](crate::Error::SizeBudgetExceeded) instead of
/// running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Max monomials held by one polynomial in the expansion path.
    pub poly_terms: u64,
    /// Max contingency tables enumerated for one profile.
    pub tables: u64,
    /// Max live capacity states in one layer of the counting DP.
    pub dp_states: u64,
    /// Max partitions generated for one `n`.
    pub partitions: u64,
    /// Largest `n` for the multiset-assignment oracle.
    pub oracle_count_n: u32,
    /// Largest `n` for the perfect-matching class oracle.
    pub oracle_classes_n: u32,
    /// Largest matrix dimension for the permanent.
    pub permanent_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            poly_terms: 1_000_000,
            tables: 1_000_000,
            dp_states: 10_000_000,
            partitions: 1_000_000,
            oracle_count_n: 10,
            oracle_classes_n: 8,
            permanent_n: 20,
        }
    }
}

impl Budget {
    /// Applies one cap to every enumeration limit (the CLI `--budget` flag).
    /// Dimension limits for the oracles and the permanent are left alone.
    pub fn with_enumeration_limit(mut self, limit: u64) -> Self {
        self.poly_terms = limit;
        self.tables = limit;
        self.dp_states = limit;
        self.partitions = limit;
        self
    }
}
