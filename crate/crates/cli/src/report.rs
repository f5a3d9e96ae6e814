//! Uniform run reports: one structure covers every subcommand, rendered
//! either as an aligned text table or as deterministic JSON (struct field
//! order, no timestamps), so identical inputs produce identical bytes.

use serde::Serialize;

use nhom_core::QContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContextInfo {
    #[serde(rename = "N")]
    pub order: u32,
    pub p: u64,
    pub q: u64,
}

impl From<&QContext> for ContextInfo {
    fn from(ctx: &QContext) -> Self {
        ContextInfo {
            order: ctx.order(),
            p: ctx.modulus(),
            q: ctx.q(),
        }
    }
}

/// One named boolean outcome with a human-readable detail column.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One compared homology cell of a reindexing run.
#[derive(Debug, Clone, Serialize)]
pub struct CellRow {
    pub p: u32,
    pub n: i64,
    pub deformed: usize,
    /// Which classical degree the cell reads, or "zero" when the degree is
    /// forced to vanish.
    pub branch: String,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyRow {
    pub p: u32,
    pub n: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarRow {
    pub query: String,
    pub value: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<ContextInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellRow>,
    /// Classical homology dimensions in degrees 0, 1, … when a reindexing
    /// run compared against them.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classical: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<HomologyRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scalars: Vec<ScalarRow>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            contexts: Vec::new(),
            seed: None,
            instances: None,
            checks: Vec::new(),
            cells: Vec::new(),
            classical: Vec::new(),
            homology: Vec::new(),
            scalars: Vec::new(),
            pass: true,
        }
    }

    pub fn context(&mut self, ctx: &QContext) -> &mut Self {
        self.contexts.push(ctx.into());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(CheckRow {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(self).expect("reports serialize infallibly");
                s.push('\n');
                s
            }
            Format::Table => self.render_table(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for c in &self.contexts {
            out.push_str(&format!("context: N={} p={} q={}\n", c.order, c.p, c.q));
        }
        if let Some(seed) = self.seed {
            match self.instances {
                Some(k) => out.push_str(&format!("seed: {seed} ({k} instances)\n")),
                None => out.push_str(&format!("seed: {seed}\n")),
            }
        }
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                out.push_str(&format!(
                    "  [{}] {:width$}  {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail,
                ));
            }
        }
        if !self.classical.is_empty() {
            let dims: Vec<String> = self.classical.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!(
                "classical homology (degrees 0..{}): [{}]\n",
                self.classical.len() - 1,
                dims.join(", ")
            ));
        }
        if !self.cells.is_empty() {
            out.push_str("   p     n  deformed  branch        expected  status\n");
            for c in &self.cells {
                out.push_str(&format!(
                    "{:>4}  {:>4}  {:>8}  {:<12}  {:>8}  {}\n",
                    c.p,
                    c.n,
                    c.deformed,
                    c.branch,
                    c.expected,
                    if c.pass { "PASS" } else { "FAIL" },
                ));
            }
        }
        if !self.homology.is_empty() {
            out.push_str("   p     n  dim\n");
            for r in &self.homology {
                out.push_str(&format!("{:>4}  {:>4}  {:>3}\n", r.p, r.n, r.dim));
            }
        }
        if !self.scalars.is_empty() {
            for s in &self.scalars {
                out.push_str(&format!("{} = {}\n", s.query, s.value));
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}
