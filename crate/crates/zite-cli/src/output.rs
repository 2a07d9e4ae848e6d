//! Deterministic CSV and JSON serialization.
//!
//! Every floating-point value is printed as `{:.11e}` (12 significant
//! digits), so repeated runs of the same configuration produce byte-identical
//! output. JSON is composed by hand to keep exactly the same field names and
//! number formatting as the CSV; `1.25192502527e0` is a valid JSON number.

/// One table value; `Real` cells render as 12-significant-digit floats.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(v) => json_string(v),
        }
    }
}

/// A finished task result: comment metadata, one header row, data rows, and
/// trailing metadata (e.g. a fitted slope).
#[derive(Debug)]
pub struct OutputTable {
    pub meta: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(&'static str, Cell)>,
}

pub fn format_real(x: f64) -> String {
    format!("{x:.11e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn to_csv(table: &OutputTable) -> String {
    let mut out = String::new();
    for (key, value) in &table.meta {
        out.push_str(&format!("# {key}: {}\n", value.csv()));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for (key, value) in &table.footer {
        out.push_str(&format!("# {key}: {}\n", value.csv()));
    }
    out
}

pub fn to_json(table: &OutputTable) -> String {
    let mut out = String::from("{\n  \"meta\": {\n");
    let meta: Vec<String> = table
        .meta
        .iter()
        .map(|(k, v)| format!("    {}: {}", json_string(k), v.json()))
        .collect();
    out.push_str(&meta.join(",\n"));
    out.push_str("\n  },\n  \"columns\": [");
    let cols: Vec<String> = table.columns.iter().map(|c| json_string(c)).collect();
    out.push_str(&cols.join(", "));
    out.push_str("],\n  \"rows\": [\n");
    let rows: Vec<String> = table
        .rows
        .iter()
        .map(|row| {
            let fields: Vec<String> = table
                .columns
                .iter()
                .zip(row.iter())
                .map(|(c, v)| format!("{}: {}", json_string(c), v.json()))
                .collect();
            format!("    {{{}}}", fields.join(", "))
        })
        .collect();
    out.push_str(&rows.join(",\n"));
    out.push_str("\n  ],\n  \"footer\": {");
    let footer: Vec<String> = table
        .footer
        .iter()
        .map(|(k, v)| format!("    {}: {}", json_string(k), v.json()))
        .collect();
    if footer.is_empty() {
        out.push_str("}\n}\n");
    } else {
        out.push('\n');
        out.push_str(&footer.join(",\n"));
        out.push_str("\n  }\n}\n");
    }
    out
}

/// Eigenfunction samples as CSV triples (x1, x2, value).
pub fn grid_to_csv(meta: &[(&'static str, Cell)], samples: &[(f64, f64, f64)]) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        out.push_str(&format!("# {key}: {}\n", value.csv()));
    }
    out.push_str("x1,x2,value\n");
    for &(x1, x2, v) in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            format_real(x1),
            format_real(x2),
            format_real(v)
        ));
    }
    out
}
