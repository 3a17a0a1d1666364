//! Machine-readable run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Conventions every report carries so that stored outputs describe themselves.
#[derive(Debug, Clone, Serialize)]
pub struct Convention {
    pub variable_order: &'static str,
    pub rep_signs: &'static str,
    pub symplectic_form: &'static str,
    pub minimal_generator: &'static str,
    pub grade_weight: &'static str,
    pub mode_indexing: &'static str,
    pub hermitian_form: &'static str,
    pub virasoro_field: &'static str,
    pub state_words: &'static str,
}

pub const CONVENTION: Convention = Convention {
    variable_order: "family declaration order, then index, then level",
    rep_signs: "fundamental: g.v_i = sum_a g_ai v_a; dual: g.u^i = -sum_a g_ia u^a",
    symplectic_form: "J = [[0, I], [-I, 0]]",
    minimal_generator: "first off-diagonal basis element times t",
    grade_weight: "sum over variables of (level + weight_offset)",
    mode_indexing: "beta_n = beta_(n), gamma_n = gamma_(n-1), [beta_m, gamma_n] = delta_(m+n,0); b, c field-indexed, {b_(m), c_(n)} = delta_(m+n,-1)",
    hermitian_form: "(|0>,|0>) = 1; beta_(n)^* = (d gamma)_(-n); b_(n)^* = c_(-n-1); c_(n)^* = b_(-n-1)",
    virasoro_field: "Ltilde = L - 1/2 dJ; weights beta 1, gamma 0, b 1/2, c 1/2",
    state_words: "dk(x) is the k-th derivative of x; :u v: is the normally ordered product",
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub convention: Convention,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ok: true,
            first_failure: None,
            convention: CONVENTION,
            checks: Vec::new(),
            results: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        let name = name.into();
        if !passed && self.ok {
            self.ok = false;
            self.first_failure = Some(match &witness {
                Some(w) => format!("{name}: {w}"),
                None => name.clone(),
            });
        }
        self.checks.push(Check { name, passed, witness });
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable result");
        self.results.insert(key.to_string(), v);
    }

    pub fn table(&mut self, table: Table) {
        self.tables.push(table);
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.check(format!("{prefix}.{}", c.name), c.passed, c.witness);
        }
        for (k, v) in other.results {
            self.results.insert(format!("{prefix}.{k}"), v);
        }
        for mut t in other.tables {
            t.name = format!("{prefix}.{}", t.name);
            self.tables.push(t);
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.header).expect("in-memory write");
            for r in &t.rows {
                w.write_record(r).expect("in-memory write");
            }
            let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
            let _ = write!(out, "# {}\n{}", t.name, body);
        }
        out
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, if self.ok { "ok" } else { "FAILED" });
        for c in &self.checks {
            let _ = write!(out, "  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                let _ = write!(out, " ({w})");
            }
            out.push('\n');
        }
        for (k, v) in &self.results {
            if let Value::String(s) = v {
                let _ = writeln!(out, "  {k} = {s}");
            }
        }
        for t in &self.tables {
            let _ = writeln!(out, "{}", t.name);
            let widths: Vec<usize> = (0..t.header.len())
                .map(|i| t.rows.iter().map(|r| r[i].len()).chain([t.header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                format!("  {}\n", padded.join("  "))
            };
            out += &line(&t.header);
            for r in &t.rows {
                out += &line(r);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo");
        r.check("first", true, None);
        r.check("second", false, Some("x = 1".into()));
        r.check("third", false, None);
        r.result("central_charge", "6");
        r.table(Table { name: "dims".into(), header: vec!["weight".into(), "dim".into()], rows: vec![vec!["1".into(), "1".into()]] });
        r
    }

    #[test]
    fn first_failure_is_kept() {
        let r = sample();
        assert!(!r.ok);
        assert_eq!(r.first_failure.as_deref(), Some("second: x = 1"));
    }

    #[test]
    fn renders() {
        let r = sample();
        assert!(r.render(Format::Json).contains("\"central_charge\": \"6\""));
        assert_eq!(r.render(Format::Csv), "# dims\nweight,dim\n1,1\n");
        assert!(r.render(Format::Text).starts_with("demo: FAILED\n  [pass] first\n"));
        assert_eq!(r.render(Format::Json), sample().render(Format::Json));
    }
}
