//! Command output as an ordered tree, rendered as aligned text or JSON.

use clap::ValueEnum;
use qtrans_core::DistributionTable;
use serde_json::{Map, Value};

/// Significant digits of every printed number.
pub const DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Rounds `x` to [`DIGITS`] significant digits, in `%g` style.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS as i32).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round trip");
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{:.*e}", DIGITS - 1, x)
            .parse()
            .expect("round trip");
        serde_json::Number::from_f64(if rounded == 0.0 { 0.0 } else { rounded })
            .map(Value::Number)
            .unwrap_or(Value::Null)
    } else {
        Value::String(format_number(x))
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Num(f64),
    Int(u64),
    Str(String),
    Bool(bool),
    List(Vec<Node>),
    Table(DistributionTable),
    Map(Report),
}

impl From<f64> for Node {
    fn from(x: f64) -> Self {
        Node::Num(x)
    }
}

impl From<u64> for Node {
    fn from(x: u64) -> Self {
        Node::Int(x)
    }
}

impl From<usize> for Node {
    fn from(x: usize) -> Self {
        Node::Int(x as u64)
    }
}

impl From<bool> for Node {
    fn from(x: bool) -> Self {
        Node::Bool(x)
    }
}

impl From<&str> for Node {
    fn from(x: &str) -> Self {
        Node::Str(x.into())
    }
}

impl From<String> for Node {
    fn from(x: String) -> Self {
        Node::Str(x)
    }
}

impl From<DistributionTable> for Node {
    fn from(x: DistributionTable) -> Self {
        Node::Table(x)
    }
}

impl From<Report> for Node {
    fn from(x: Report) -> Self {
        Node::Map(x)
    }
}

/// Key/value pairs in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, Node)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl Into<Node>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Node>) -> Self {
        self.add(key, value);
        self
    }

    pub fn into_entries(self) -> Vec<(String, Node)> {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let mut out = String::new();
                render_map(self, 0, &mut out);
                out
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            map.insert(k.clone(), node_json(v));
        }
        Value::Object(map)
    }
}

fn node_json(node: &Node) -> Value {
    match node {
        Node::Num(x) => json_number(*x),
        Node::Int(i) => Value::from(*i),
        Node::Str(s) => Value::String(s.clone()),
        Node::Bool(b) => Value::Bool(*b),
        Node::List(items) => Value::Array(items.iter().map(node_json).collect()),
        Node::Map(r) => r.to_json(),
        Node::Table(t) => table_json(t),
    }
}

fn table_json(t: &DistributionTable) -> Value {
    let axes = t
        .axes()
        .iter()
        .map(|a| {
            let mut m = Map::new();
            m.insert("name".into(), Value::String(a.name.clone()));
            m.insert(
                "labels".into(),
                Value::Array(a.labels.iter().cloned().map(Value::String).collect()),
            );
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("axes".into(), Value::Array(axes));
    m.insert("entries".into(), nested(t.entries(), &t.shape()));
    Value::Object(m)
}

fn nested(entries: &[f64], shape: &[usize]) -> Value {
    match shape {
        [] | [_] => Value::Array(entries.iter().map(|&x| json_number(x)).collect()),
        [_, rest @ ..] => {
            let stride: usize = rest.iter().product();
            Value::Array(entries.chunks(stride).map(|c| nested(c, rest)).collect())
        }
    }
}

fn scalar_text(node: &Node) -> Option<String> {
    match node {
        Node::Num(x) => Some(format_number(*x)),
        Node::Int(i) => Some(i.to_string()),
        Node::Str(s) => Some(s.clone()),
        Node::Bool(b) => Some(b.to_string()),
        Node::List(items) => Some(format!(
            "[{}]",
            items
                .iter()
                .map(|n| scalar_text(n).unwrap_or_else(|| "…".into()))
                .collect::<Vec<_>>()
                .join(", ")
        )),
        Node::Table(_) | Node::Map(_) => None,
    }
}

fn render_map(report: &Report, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (key, node) in &report.entries {
        match node {
            Node::Map(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_map(inner, indent + 2, out);
            }
            Node::Table(t) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render_table(t, indent + 2, out);
            }
            other => {
                let text = scalar_text(other).expect("scalar");
                out.push_str(&format!("{pad}{key}: {text}\n"));
            }
        }
    }
}

fn push_row(cells: &[String], widths: &[usize], pad: &str, out: &mut String) {
    let line = cells
        .iter()
        .zip(widths)
        .map(|(c, w)| format!("{c:<w$}"))
        .collect::<Vec<_>>()
        .join("  ");
    out.push_str(pad);
    out.push_str(line.trim_end());
    out.push('\n');
}

fn render_grid(rows: Vec<Vec<String>>, indent: usize, out: &mut String) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let pad = " ".repeat(indent);
    for r in &rows {
        push_row(r, &widths, &pad, out);
    }
}

fn render_table(t: &DistributionTable, indent: usize, out: &mut String) {
    let axes = t.axes();
    let e = t.entries();
    match axes.len() {
        1 => {
            let mut rows = vec![vec![axes[0].name.clone(), "p".into()]];
            for (label, x) in axes[0].labels.iter().zip(e) {
                rows.push(vec![label.clone(), format_number(*x)]);
            }
            render_grid(rows, indent, out);
        }
        2 => render_2d(&axes[0], &axes[1], e, indent, out),
        _ => {
            let stride = axes[1].len() * axes[2].len();
            let pad = " ".repeat(indent);
            for (label, block) in axes[0].labels.iter().zip(e.chunks(stride)) {
                out.push_str(&format!("{pad}{} = {label}:\n", axes[0].name));
                render_2d(&axes[1], &axes[2], block, indent + 2, out);
            }
        }
    }
}

fn render_2d(
    rows_axis: &qtrans_core::Axis,
    cols_axis: &qtrans_core::Axis,
    entries: &[f64],
    indent: usize,
    out: &mut String,
) {
    let mut header = vec![format!("{}\\{}", rows_axis.name, cols_axis.name)];
    header.extend(cols_axis.labels.iter().cloned());
    let mut rows = vec![header];
    for (label, chunk) in rows_axis.labels.iter().zip(entries.chunks(cols_axis.len())) {
        let mut r = vec![label.clone()];
        r.extend(chunk.iter().map(|x| format_number(*x)));
        rows.push(r);
    }
    render_grid(rows, indent, out);
}
