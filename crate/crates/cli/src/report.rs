use serde::Serialize;
use serde_json::Value;
use ssx_core::tolerances::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    /// Observed values backing the verdict.
    pub detail: String,
}

impl Claim {
    pub fn new(id: &str, statement: &str, passed: bool, detail: impl Into<String>) -> Self {
        Claim {
            id: id.to_string(),
            statement: statement.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// One row of the tabular projection shared by the sweep subcommands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub p: usize,
    pub q: usize,
    pub stratum: String,
    pub parameter: Option<f64>,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub n_pos: Option<usize>,
    pub n_neg: Option<usize>,
    pub n_zero: Option<usize>,
}

impl TableRow {
    pub fn new(p: usize, q: usize, stratum: impl Into<String>) -> Self {
        TableRow {
            p,
            q,
            stratum: stratum.into(),
            parameter: None,
            f: None,
            n_pos: None,
            n_neg: None,
            n_zero: None,
        }
    }

    pub fn parameter(mut self, v: Option<f64>) -> Self {
        self.parameter = v;
        self
    }

    pub fn f(mut self, v: f64) -> Self {
        self.f = Some(v);
        self
    }

    pub fn signature(mut self, s: ssx_core::hyperboloid::SignatureTriple) -> Self {
        self.n_pos = Some(s.n_pos);
        self.n_neg = Some(s.n_neg);
        self.n_zero = Some(s.n_zero);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub subcommand: String,
    pub config: Value,
    pub tolerances: Tolerances,
    pub claims: Vec<Claim>,
    pub passed: bool,
    pub data: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TableRow>,
}

/// What a subcommand hands back before the common fields are attached.
#[derive(Debug, Default)]
pub struct Outcome {
    pub claims: Vec<Claim>,
    pub data: Value,
    pub rows: Vec<TableRow>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> std::result::Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["id", "passed", "statement", "detail"])?;
            for c in &self.claims {
                w.write_record([c.id.as_str(), if c.passed { "true" } else { "false" }, &c.statement, &c.detail])?;
            }
        } else {
            for r in &self.rows {
                w.serialize(r)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "ssx {}: {}\n",
            self.subcommand,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for c in &self.claims {
            s.push_str(&format!(
                "  [{}] {}: {} ({})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.statement,
                c.detail
            ));
        }
        s
    }
}
