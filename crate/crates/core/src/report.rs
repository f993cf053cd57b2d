use serde::Serialize;

/// Outcome of a structural check: empty `violations` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, violation: impl Into<String>) {
        self.violations.push(violation.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        for v in &mut self.violations {
            *v = format!("{prefix}: {v}");
        }
        self
    }
}
