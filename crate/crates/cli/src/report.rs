//! Fixed-width text reports and their `key=value` twin.

use std::fmt::Write;

use sha2::{Digest, Sha256};

enum Item {
    Field(String, String),
    Table {
        name: String,
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    Text(String),
}

pub struct Report {
    command: String,
    inputs: Vec<(String, String)>,
    items: Vec<Item>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            items: Vec::new(),
        }
    }

    pub fn input(&mut self, label: &str, bytes: &[u8]) {
        self.inputs.push((label.to_string(), sha256_hex(bytes)));
    }

    pub fn field(&mut self, key: &str, value: impl ToString) {
        self.items.push(Item::Field(key.to_string(), value.to_string()));
    }

    /// Free text; dropped in machine mode.
    pub fn text(&mut self, text: impl Into<String>) {
        self.items.push(Item::Text(text.into()));
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) {
        self.items.push(Item::Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        });
    }

    pub fn render(&self, machine: bool) -> String {
        if machine {
            self.render_machine()
        } else {
            self.render_text()
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {}", "command", self.command);
        for (label, digest) in &self.inputs {
            let _ = writeln!(out, "{:<16} sha256:{digest}  {label}", "input");
        }
        for item in &self.items {
            match item {
                Item::Field(k, v) => {
                    let _ = writeln!(out, "{k:<16} {v}");
                }
                Item::Text(t) => {
                    let _ = writeln!(out, "{t}");
                }
                Item::Table { header, rows, .. } => {
                    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
                    for row in rows {
                        for (w, cell) in widths.iter_mut().zip(row) {
                            *w = (*w).max(cell.chars().count());
                        }
                    }
                    let line = |cells: &[String]| {
                        let padded: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}"))
                            .collect();
                        padded.join("  ")
                    };
                    let _ = writeln!(out);
                    let _ = writeln!(out, "{}", line(header));
                    for row in rows {
                        let _ = writeln!(out, "{}", line(row));
                    }
                }
            }
        }
        out
    }

    fn render_machine(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command={}", self.command);
        for (i, (label, digest)) in self.inputs.iter().enumerate() {
            let _ = writeln!(out, "input.{i}.path={label}");
            let _ = writeln!(out, "input.{i}.sha256={digest}");
        }
        for item in &self.items {
            match item {
                Item::Field(k, v) => {
                    let _ = writeln!(out, "{}={v}", k.replace(' ', "_"));
                }
                Item::Text(_) => {}
                Item::Table { name, header, rows } => {
                    let _ = writeln!(out, "{name}.rows={}", rows.len());
                    for (i, row) in rows.iter().enumerate() {
                        for (h, cell) in header.iter().zip(row) {
                            let _ = writeln!(out, "{name}.{i}.{}={cell}", h.replace(' ', "_"));
                        }
                    }
                }
            }
        }
        out
    }
}
