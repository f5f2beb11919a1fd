//! Run reports and their three renderings.
//!
//! CSV columns: `group,check,status,detail`. JSON lines: one object per check
//! with the same keys, then `{"summary":{"checks":..,"passed":..,"failed":..,"flagged":..}}`.
//! Timing appears only in the table rendering, so machine-readable output is
//! identical across runs.

use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not checked here (cited) or only evidenced; never a failure.
    Flagged,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub group: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(group: impl Into<String>, check: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check { group: group.into(), check: check.into(), status, detail: detail.into() }
    }

    pub fn pass_if(group: impl Into<String>, check: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(group, check, if ok { Status::Pass } else { Status::Fail }, detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub checks: Vec<Check>,
    /// Regenerated table shown above the checks in table format.
    pub body: Option<String>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn summary(&self) -> Summary {
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        Summary { checks: self.checks.len(), passed: count(Status::Pass), failed: count(Status::Fail), flagged: count(Status::Flagged) }
    }

    /// 0 without failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary().failed > 0)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Jsonl => self.render_jsonl(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        if let Some(b) = &self.body {
            out.push_str(b);
            if !b.ends_with('\n') {
                out.push('\n');
            }
            out.push('\n');
        }
        let gw = self.checks.iter().map(|c| c.group.len()).max().unwrap_or(0);
        let cw = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(0);
        for c in &self.checks {
            let line = format!("{:<7} {:<gw$}  {:<cw$}  {}", c.status.as_str(), c.group, c.check, c.detail);
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed, {} flagged ({:.2}s)",
            s.checks,
            s.passed,
            s.failed,
            s.flagged,
            self.elapsed.as_secs_f64()
        );
        out
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(c).expect("writing to memory");
        }
        let bytes = w.into_inner().expect("flushing to memory");
        let mut out = String::from_utf8(bytes).expect("csv output is UTF-8");
        if self.checks.is_empty() {
            out.push_str("group,check,status,detail\n");
        }
        out
    }

    fn render_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&serde_json::to_string(c).expect("plain struct"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary() });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}
