//! Tabular documents and their markdown, csv and json renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use framed_betti::BigCount;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Int(BigCount),
    Text(String),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match u64::try_from(v) {
                Ok(n) => json!(n),
                Err(_) => json!(v.to_string()),
            },
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(BigCount::from(v))
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        match u64::try_from(v) {
            Ok(v) => v.into(),
            Err(_) => Cell::Text(v.to_string()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        (v as u64).into()
    }
}

impl From<BigCount> for Cell {
    fn from(v: BigCount) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub command: String,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => self.markdown(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "## {}\n", s.title);
            if !s.columns.is_empty() {
                let _ = writeln!(out, "| {} |", s.columns.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(s.columns.len()));
                for row in &s.rows {
                    let cells: Vec<String> = row.iter().map(|c| c.plain().replace('|', "\\|")).collect();
                    let _ = writeln!(out, "| {} |", cells.join(" | "));
                }
            }
            if !s.notes.is_empty() {
                if !s.columns.is_empty() {
                    out.push('\n');
                }
                for n in &s.notes {
                    let _ = writeln!(out, "- {n}");
                }
            }
        }
        out
    }

    /// One record per row; with several sections each block is introduced by
    /// a `# title` line and separated by a blank line. Notes are `# ` lines.
    fn csv(&self) -> String {
        let multi = self.sections.len() > 1;
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if multi {
                let _ = writeln!(out, "# {}", s.title);
            }
            if !s.columns.is_empty() {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&s.columns).expect("in-memory write");
                for row in &s.rows {
                    w.write_record(row.iter().map(Cell::plain)).expect("in-memory write");
                }
                out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
            }
            for n in &s.notes {
                let _ = writeln!(out, "# {n}");
            }
        }
        out
    }

    fn json(&self) -> String {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let rows: Vec<Value> = s
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                json!({
                    "title": s.title,
                    "columns": s.columns,
                    "rows": rows,
                    "notes": s.notes,
                })
            })
            .collect();
        let doc = json!({ "command": self.command, "sections": sections });
        let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        text.push('\n');
        text
    }
}
