/// Resource caps for every operation whose cost grows combinatorially.
///
/// Exceeding a cap yields [`MagmaError::Resource`](crate::MagmaError::Resource)
/// naming the cap, never a partial answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest level size `c_n` that may be materialised (default admits n <= 12).
    pub max_level_elements: u64,
    /// Largest leaf count of a product or shorthand element.
    pub max_product_len: u64,
    /// Largest prime set whose spectrum (up to `2^size` subsets) may be built.
    pub max_spectrum_size: usize,
    /// Largest prime-set size for level enumeration.
    pub max_prime_set_size: usize,
    /// Largest number of prime sets kept on one enumeration level.
    pub max_prime_sets: usize,
    /// Largest rooted tree size for tree and family enumeration.
    pub max_tree_size: usize,
    /// Largest number of substitutions tried by `family_instances`.
    pub max_substitutions: u64,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        max_level_elements: 100_000,
        max_product_len: 1 << 20,
        max_spectrum_size: 16,
        max_prime_set_size: 8,
        max_prime_sets: 2_000_000,
        max_tree_size: 16,
        max_substitutions: 50_000_000,
    };
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}
