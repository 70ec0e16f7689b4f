use serde::Serialize;

/// One line of a check report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
    /// Extra context: a counterexample, a count, a witness. Empty when the
    /// bare pass/fail is the whole story.
    pub detail: String,
}

/// Outcome of a batch check driver. Items are kept in the order they were
/// produced, which is deterministic for every driver in this crate.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport { title: title.into(), items: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.items.push(CheckItem { label: label.into(), pass, detail: detail.into() });
    }

    pub fn pass(&mut self, label: impl Into<String>) {
        self.push(label, true, "");
    }

    pub fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.push(label, false, detail);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    /// Stable human-readable rendering; identical inputs give identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {}\n", self.title));
        for item in &self.items {
            let verdict = if item.pass { "PASS" } else { "FAIL" };
            if item.detail.is_empty() {
                out.push_str(&format!("{} {}\n", verdict, item.label));
            } else {
                out.push_str(&format!("{} {}: {}\n", verdict, item.label, item.detail));
            }
        }
        let failed = self.items.iter().filter(|i| !i.pass).count();
        out.push_str(&format!(
            "-- {}: {} checks, {} failed\n",
            if failed == 0 { "ok" } else { "FAILED" },
            self.items.len(),
            failed
        ));
        out
    }
}
