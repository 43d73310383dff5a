use crate::error::{Error, Result};

/// Upper bound on the ambient dimension an operation may work in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimit(pub usize);

impl SizeLimit {
    /// Default bound for tensor powers `H^{⊗k}`.
    pub const TENSOR: SizeLimit = SizeLimit(100_000);
    /// Default bound for the truncated group ring.
    pub const GROUP_RING: SizeLimit = SizeLimit(20_000);
    pub const UNBOUNDED: SizeLimit = SizeLimit(usize::MAX);

    pub fn check(self, size: usize) -> Result<()> {
        if size > self.0 {
            Err(Error::SizeLimit {
                size,
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// `(2g)^k`, saturating.
pub fn tensor_dim(genus: usize, k: usize) -> usize {
    (2 * genus).saturating_pow(k as u32)
}

/// `Σ_{j ≤ k} (2g)^j`, saturating.
pub fn truncated_dim(genus: usize, k: usize) -> usize {
    (0..=k).fold(0usize, |acc, j| acc.saturating_add(tensor_dim(genus, j)))
}
