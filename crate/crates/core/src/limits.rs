//! Explicit resource limits.
//!
//! Exceeding a limit is always an error, never a silent truncation.

/// Resource limits threaded through state-space constructions.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of machine states during products and evaluations.
    pub max_states: usize,
    /// Maximum tree level for explicit level actions and quotients.
    pub max_level: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
            max_level: 16,
        }
    }
}

impl Limits {
    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }
}
