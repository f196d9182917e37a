//! Verification reports shared by the lemma suites.
//!
//! Large scans keep only a per-lemma summary (instance count and the row with
//! the smallest slack) plus every failing row; full row retention is opt-in.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub lemma: &'static str,
    pub s: Option<u64>,
    pub r: Option<u64>,
    pub x: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub status: Status,
}

impl CheckRow {
    /// Row for `lhs <= rhs`, or `lhs < rhs` when `strict`.
    pub fn le(lemma: &'static str, s: Option<u64>, r: Option<u64>, x: Option<f64>, lhs: f64, rhs: f64, strict: bool) -> Self {
        let slack = rhs - lhs;
        let ok = if strict { slack > 0.0 } else { slack >= 0.0 };
        Self::decided(lemma, s, r, x, lhs, rhs, ok)
    }

    /// Row whose verdict was decided elsewhere, typically by exact arithmetic.
    pub fn decided(lemma: &'static str, s: Option<u64>, r: Option<u64>, x: Option<f64>, lhs: f64, rhs: f64, ok: bool) -> Self {
        CheckRow {
            lemma,
            s,
            r,
            x,
            lhs,
            rhs,
            slack: rhs - lhs,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSummary {
    pub lemma: &'static str,
    pub checked: usize,
    pub tightest: CheckRow,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub suite: String,
    pub summaries: Vec<LemmaSummary>,
    pub failures: Vec<CheckRow>,
    pub rows: Vec<CheckRow>,
    pub vacuous: usize,
    #[serde(skip)]
    keep_rows: bool,
}

const MAX_FAILURES: usize = 1000;

pub(crate) fn fmt_f(v: f64) -> String {
    format!("{v:.15e}")
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report { suite: suite.to_string(), ..Default::default() }
    }

    pub fn with_rows(suite: &str) -> Self {
        Report { keep_rows: true, ..Self::new(suite) }
    }

    pub fn push(&mut self, row: CheckRow) {
        match self.summaries.iter_mut().find(|s| s.lemma == row.lemma) {
            Some(sum) => {
                sum.checked += 1;
                if row.slack < sum.tightest.slack || (row.status == Status::Fail && sum.tightest.status == Status::Pass) {
                    sum.tightest = row.clone();
                }
            }
            None => self.summaries.push(LemmaSummary { lemma: row.lemma, checked: 1, tightest: row.clone() }),
        }
        if row.status == Status::Fail && self.failures.len() < MAX_FAILURES {
            self.failures.push(row.clone());
        }
        if self.keep_rows {
            self.rows.push(row);
        }
    }

    pub fn merge(&mut self, other: Report) {
        for sum in other.summaries {
            match self.summaries.iter_mut().find(|s| s.lemma == sum.lemma) {
                Some(mine) => {
                    mine.checked += sum.checked;
                    if sum.tightest.slack < mine.tightest.slack || sum.tightest.status == Status::Fail {
                        mine.tightest = sum.tightest;
                    }
                }
                None => self.summaries.push(sum),
            }
        }
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
        if self.keep_rows {
            self.rows.extend(other.rows);
        }
        self.vacuous += other.vacuous;
    }

    pub fn checked(&self) -> usize {
        self.summaries.iter().map(|s| s.checked).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.summaries.iter().all(|s| s.tightest.status == Status::Pass)
    }

    pub const CSV_HEADER: &'static str = "lemma,s,r,x,lhs,rhs,slack,status";

    pub fn row_csv(row: &CheckRow) -> String {
        let u = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            row.lemma,
            u(row.s),
            u(row.r),
            row.x.map(fmt_f).unwrap_or_default(),
            fmt_f(row.lhs),
            fmt_f(row.rhs),
            fmt_f(row.slack),
            match row.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            }
        )
    }

    /// Full rows when retained, otherwise the tightest row per lemma followed by failures.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        let body: Vec<&CheckRow> = if self.keep_rows {
            self.rows.iter().collect()
        } else {
            self.summaries.iter().map(|s| &s.tightest).chain(self.failures.iter()).collect()
        };
        for row in body {
            out.push_str(&Self::row_csv(row));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {}: {} ({} instances, {} vacuous)\n",
            self.suite,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked(),
            self.vacuous
        );
        for s in &self.summaries {
            out.push_str(&format!("  {:<16} n={:<9} min slack {}\n", s.lemma, s.checked, fmt_f(s.tightest.slack)));
        }
        for f in self.failures.iter().take(20) {
            out.push_str(&format!("  witness: {}\n", Self::row_csv(f)));
        }
        out
    }
}
