//! Rendering of reports as aligned text tables or JSON.

use clap::ValueEnum;
use holevo::entropy::LogBase;
use holevo::HermitianMatrix;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Base {
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub format: Format,
    pub base: LogBase,
}

impl Style {
    /// Bits for tables and nats for JSON unless a base is given.
    pub fn new(format: Format, base: Option<Base>) -> Self {
        let base = match (base, format) {
            (Some(Base::E), _) | (None, Format::Json) => LogBase::E,
            (Some(Base::Two), _) | (None, Format::Table) => LogBase::Two,
        };
        Self { format, base }
    }

    /// An entropic quantity, given in nats, in the chosen base.
    pub fn ent(&self, nats: f64) -> f64 {
        self.base.convert(nats)
    }

    pub fn base_name(&self) -> &'static str {
        match self.base {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }

    pub fn unit(&self) -> &'static str {
        self.base.unit()
    }

    pub fn render(&self, table: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> String {
        match self.format {
            Format::Table => table(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&json()).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn matrix_json(m: &HermitianMatrix) -> Value {
    let d = m.dim();
    Value::Array(
        (0..d)
            .map(|i| Value::Array((0..d).map(|j| json!([m.get(i, j).re, m.get(i, j).im])).collect()))
            .collect(),
    )
}

pub fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.4e}")
    }
}

/// Left-aligned first column, right-aligned others.
#[derive(Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (k, c) in cells.iter().enumerate().take(cols) {
                let pad = widths[k] - c.chars().count();
                if k > 0 {
                    s.push_str("  ");
                    s.push_str(&" ".repeat(pad));
                    s.push_str(c);
                } else {
                    s.push_str(c);
                    s.push_str(&" ".repeat(pad));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (cols.saturating_sub(1))));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}
