//! Deterministic pass/fail reports shared by every checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// An inclusive index range the checker swept exhaustively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axis {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

impl Axis {
    pub fn new(name: &str, lo: i64, hi: i64) -> Self {
        Axis {
            name: name.to_string(),
            lo,
            hi,
        }
    }

    /// Hull with an override range; overrides can only widen.
    pub fn widened(&self, over: Option<(i64, i64)>) -> Axis {
        match over {
            Some((lo, hi)) => Axis::new(&self.name, self.lo.min(lo), self.hi.max(hi)),
            None => self.clone(),
        }
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

/// User-supplied ranges merged into computed windows. A range given for
/// a named axis takes precedence over the range given for all axes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WindowOverride {
    pub all: Option<(i64, i64)>,
    pub axes: BTreeMap<String, (i64, i64)>,
}

impl WindowOverride {
    pub fn none() -> Self {
        WindowOverride::default()
    }

    pub fn uniform(lo: i64, hi: i64) -> Self {
        WindowOverride {
            all: Some((lo, hi)),
            axes: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_none() && self.axes.is_empty()
    }

    /// The hull of `axis` and the override; never narrower than `axis`.
    pub fn apply(&self, axis: Axis) -> Axis {
        let over = self.axes.get(&axis.name).copied().or(self.all);
        axis.widened(over)
    }
}

/// First failing instance, in the checker's fixed iteration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Basis elements involved, by name, in argument order.
    pub basis: Vec<(String, String)>,
    /// Integer indices, in the order they are iterated.
    pub indices: Vec<(String, i64)>,
    pub detail: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .basis
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        parts.extend(self.indices.iter().map(|(k, v)| format!("{k}={v}")));
        write!(f, "{}", parts.join(", "))?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "witness")]
pub enum Outcome {
    Pass,
    Fail(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Equation label of the identity being verified.
    pub label: String,
    pub window: Vec<Axis>,
    pub outcome: Outcome,
    /// Why nothing outside the window can fail.
    pub outside: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, label: &str, window: Vec<Axis>) -> Self {
        CheckReport {
            check: check.to_string(),
            label: label.to_string(),
            window,
            outcome: Outcome::Pass,
            outside: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Pass => None,
            Outcome::Fail(w) => Some(w),
        }
    }

    pub fn with_outcome(mut self, outcome: Outcome) -> Self {
        self.outcome = outcome;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.outside.push(s.into());
        self
    }

    /// One line, e.g. `jacobi (jac-comp): PASS, window l in [-2,0], m in [-2,0]`.
    pub fn summary_line(&self) -> String {
        let window = if self.window.is_empty() {
            "window empty".to_string()
        } else {
            let axes: Vec<String> = self
                .window
                .iter()
                .map(|a| format!("{} in [{},{}]", a.name, a.lo, a.hi))
                .collect();
            format!("window {}", axes.join(", "))
        };
        match &self.outcome {
            Outcome::Pass => format!("{} ({}): PASS, {}", self.check, self.label, window),
            Outcome::Fail(w) => format!("{} ({}): FAIL at {}, {}", self.check, self.label, w, window),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for n in &self.outside {
            writeln!(f, "  outside window: {n}")?;
        }
        Ok(())
    }
}

/// Keeps the first failure seen in a deterministic sweep.
pub(crate) fn first_failure<I>(iter: I) -> Outcome
where
    I: IntoIterator<Item = Option<Witness>>,
{
    iter.into_iter()
        .flatten()
        .next()
        .map(Outcome::Fail)
        .unwrap_or(Outcome::Pass)
}
