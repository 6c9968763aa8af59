//! Size caps shared by the enumeration, cover and Tietze stages.

use std::env;

/// Environment variable that overrides [`Budgets::default`].
///
/// Accepts either a bare integer (the edge budget) or a comma separated list
/// of `key=value` pairs with keys `edges`, `tietze`, `elements`, `table`.
pub const BUDGET_ENV: &str = "GHC_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Cap on cover edges (and on base edges / idempotents enumerated).
    pub edges: usize,
    /// Cap on Tietze generator eliminations.
    pub tietze_moves: usize,
    /// Cap on the number of elements any enumeration may produce.
    pub elements: usize,
    /// Largest multiplication table whose associativity is checked exhaustively.
    pub table_size: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            edges: 2_000_000,
            tietze_moves: 100_000,
            elements: 2_000_000,
            table_size: 256,
        }
    }
}

impl Budgets {
    /// Defaults with the `GHC_BUDGET` override applied, if present.
    pub fn from_env() -> Result<Self, String> {
        match env::var(BUDGET_ENV) {
            Ok(text) => Self::default().with_overrides(&text),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_overrides(mut self, text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(self);
        }
        if let Ok(edges) = text.parse::<usize>() {
            self.edges = edges;
            return Ok(self);
        }
        for part in text.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("bad {BUDGET_ENV} entry `{part}`"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("bad {BUDGET_ENV} value in `{part}`"))?;
            match key.trim() {
                "edges" => self.edges = value,
                "tietze" => self.tietze_moves = value,
                "elements" => self.elements = value,
                "table" => self.table_size = value,
                other => return Err(format!("unknown {BUDGET_ENV} key `{other}`")),
            }
        }
        Ok(self)
    }
}
