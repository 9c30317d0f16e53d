use crate::error::{DmnError, Result};

/// Largest total count an evaluator accepts. The exact evaluator costs one
/// logarithm per unit of count, so totals beyond this are rejected up front.
pub const MAX_TOTAL: u64 = 1 << 40;

/// Observed category counts `x = (x_1, ..., x_K)` with their total `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(DmnError::InvalidArgument(
                "count vector needs at least one category".into(),
            ));
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| DmnError::InvalidArgument("total count overflows u64".into()))?;
        Ok(Self { counts, total })
    }

    /// Builds a count vector and checks that `total` is the exact sum.
    pub fn with_total(counts: Vec<u64>, total: u64) -> Result<Self> {
        let cv = Self::new(counts)?;
        if cv.total != total {
            return Err(DmnError::InvalidArgument(format!(
                "stated total {total} does not match the sum of counts {}",
                cv.total
            )));
        }
        Ok(cv)
    }

    pub fn zeros(categories: usize) -> Result<Self> {
        Self::new(vec![0; categories])
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of categories `K`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `n * x`, the count pattern scaled by an integer multiplier.
    pub fn scaled(&self, n: u64) -> Result<Self> {
        let counts = self
            .counts
            .iter()
            .map(|&c| c.checked_mul(n))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| DmnError::InvalidArgument("scaled counts overflow u64".into()))?;
        Self::new(counts)
    }

    /// `x + e_k`: one more observation in category `k`.
    pub fn incremented(&self, k: usize) -> Result<Self> {
        if k >= self.counts.len() {
            return Err(DmnError::InvalidArgument(format!(
                "category {k} out of range for K = {}",
                self.counts.len()
            )));
        }
        let mut counts = self.counts.clone();
        counts[k] = counts[k]
            .checked_add(1)
            .ok_or_else(|| DmnError::InvalidArgument("count overflows u64".into()))?;
        Self::new(counts)
    }

    pub(crate) fn check_limit(&self) -> Result<()> {
        if self.total > MAX_TOTAL {
            return Err(DmnError::ResourceLimit {
                total: self.total,
                max: MAX_TOTAL,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u64>> for CountVector {
    type Error = DmnError;

    fn try_from(counts: Vec<u64>) -> Result<Self> {
        Self::new(counts)
    }
}
