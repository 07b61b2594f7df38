//! Aggregated pass/fail reports used by the verification operations.

/// One named check with an optional witness for failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    /// Stable identifier of the check, e.g. `euler-identity-k2`.
    pub id: String,
    pub pass: bool,
    /// Minimal witness of a failure, empty for passing checks.
    pub witness: Option<String>,
}

/// A batch of checks; `pass` iff every item passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn record(&mut self, id: impl Into<String>, pass: bool, witness: Option<String>) {
        self.items.push(CheckItem {
            id: id.into(),
            pass,
            witness,
        });
    }

    pub fn check(&mut self, id: impl Into<String>, pass: bool, witness: impl FnOnce() -> String) {
        let witness = if pass { None } else { Some(witness()) };
        self.record(id, pass, witness);
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|item| item.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|item| !item.pass)
    }

    /// Absorb `other`, prefixing every item id with `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for item in other.items {
            self.items.push(CheckItem {
                id: format!("{prefix}.{}", item.id),
                ..item
            });
        }
    }
}
