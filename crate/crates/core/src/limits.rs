/// Enumeration bounds shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order accepted by `build_group`.
    pub group_order: usize,
    /// Largest order for full normal-subgroup inventories and isomorphism search.
    pub enumeration: usize,
    /// Largest number of blocks held in a single closure level.
    pub block_budget: usize,
    /// Highest level visited by the component certification loop.
    pub max_level: usize,
    /// Extra window length allowed to image/quotient presentations beyond `r + a`.
    pub image_extra_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            group_order: 10_000,
            enumeration: 512,
            block_budget: 1_000_000,
            max_level: 64,
            image_extra_depth: 8,
        }
    }
}

/// Environment variable overriding the block budget.
pub const BUDGET_ENV: &str = "SIGMA_KIT_BUDGET";

impl Limits {
    /// Defaults, with the block budget taken from `SIGMA_KIT_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(budget) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.block_budget = budget;
        }
        limits
    }
}
