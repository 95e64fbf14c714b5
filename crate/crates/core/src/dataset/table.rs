use std::io::Read;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Categorical,
    Numeric,
    Class,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Number(f64),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    /// Text form of a categorical cell; numbers print in shortest round-trip form.
    pub fn label(&self) -> Option<String> {
        match self {
            Cell::Text(s) => Some(s.clone()),
            Cell::Number(v) => Some(format!("{v}")),
            Cell::Missing => None,
        }
    }
}

/// A delimited table after type inference. At most one column has kind
/// [`ColumnKind::Class`]; training tables must have exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub column_names: Vec<String>,
    pub column_kinds: Vec<ColumnKind>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Name of the class column. `None` selects the last column.
    pub class_column: Option<String>,
    /// When false, a missing class column is tolerated (prediction input).
    pub require_class: bool,
    pub delimiter: u8,
    pub missing_tokens: Vec<String>,
    /// Columns that are never inferred as numeric.
    pub categorical_columns: Vec<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            class_column: None,
            require_class: true,
            delimiter: b',',
            missing_tokens: vec!["?".to_string(), String::new()],
            categorical_columns: Vec::new(),
        }
    }
}

impl RawTable {
    pub fn class_index(&self) -> Option<usize> {
        self.column_kinds.iter().position(|k| *k == ColumnKind::Class)
    }

    pub fn require_class_index(&self) -> Result<usize> {
        self.class_index()
            .ok_or_else(|| Error::Config("table has no class column".into()))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    /// Indices of all non-class columns, in file order.
    pub fn predictive_columns(&self) -> Vec<usize> {
        (0..self.column_kinds.len())
            .filter(|&i| self.column_kinds[i] != ColumnKind::Class)
            .collect()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Copy of the table restricted to `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> RawTable {
        RawTable {
            column_names: self.column_names.clone(),
            column_kinds: self.column_kinds.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Class labels of every row, `None` where the table has no class column.
    pub fn class_labels(&self) -> Option<Vec<String>> {
        let ci = self.class_index()?;
        Some(
            self.rows
                .iter()
                .map(|r| r[ci].label().unwrap_or_default())
                .collect(),
        )
    }
}

fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Read a delimited table with a header row and infer column kinds.
///
/// A column is numeric when it is not the class column, not listed in
/// `categorical_columns`, has at least one non-missing cell, and every
/// non-missing cell parses as a finite number.
pub fn load_table<R: Read>(source: R, options: &LoadOptions) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader.headers()?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse { row: 1, message: "missing header row".into() });
    }
    let column_names: Vec<String> = header.iter().map(str::to_string).collect();
    let width = column_names.len();

    let class_index = match &options.class_column {
        Some(name) => column_names.iter().position(|c| c == name),
        None if options.require_class => Some(width - 1),
        None => None,
    };
    if options.require_class && class_index.is_none() {
        return Err(Error::Config(format!(
            "class column `{}` not found in header",
            options.class_column.as_deref().unwrap_or("")
        )));
    }

    let mut text_rows: Vec<Vec<Option<String>>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        // a lone empty field is a blank line
        if record.len() == 1 && record[0].is_empty() && width > 1 {
            continue;
        }
        if record.len() != width {
            return Err(Error::Parse {
                row: line,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        let row: Vec<Option<String>> = record
            .iter()
            .map(|c| {
                if options.missing_tokens.iter().any(|t| t == c) {
                    None
                } else {
                    Some(c.to_string())
                }
            })
            .collect();
        if let Some(ci) = class_index {
            if row[ci].is_none() {
                return Err(Error::Data(format!(
                    "row at line {line}: class value is missing"
                )));
            }
        }
        text_rows.push(row);
    }

    let column_kinds: Vec<ColumnKind> = (0..width)
        .map(|col| {
            if Some(col) == class_index {
                return ColumnKind::Class;
            }
            if options.categorical_columns.iter().any(|c| *c == column_names[col]) {
                return ColumnKind::Categorical;
            }
            let mut seen = false;
            let all_numeric = text_rows.iter().all(|r| match &r[col] {
                Some(s) => {
                    seen = true;
                    parse_number(s).is_some()
                }
                None => true,
            });
            if seen && all_numeric {
                ColumnKind::Numeric
            } else {
                ColumnKind::Categorical
            }
        })
        .collect();

    let rows = text_rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .zip(&column_kinds)
                .map(|(cell, kind)| match (cell, kind) {
                    (None, _) => Cell::Missing,
                    (Some(s), ColumnKind::Numeric) => {
                        Cell::Number(parse_number(&s).expect("checked during inference"))
                    }
                    (Some(s), _) => Cell::Text(s),
                })
                .collect()
        })
        .collect();

    Ok(RawTable { column_names, column_kinds, rows })
}
