//! Supervised discretization of numeric columns by recursive entropy
//! partitioning with the MDL stopping rule.

use std::collections::HashMap;

use crate::dataset::table::{Cell, ColumnKind, RawTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CutPoints {
    pub column_index: usize,
    pub column_name: String,
    /// Strictly increasing. Empty means a single bin.
    pub thresholds: Vec<f64>,
}

impl CutPoints {
    /// Interval label of the bin containing `value`.
    pub fn bin_label(&self, value: f64) -> String {
        let t = &self.thresholds;
        let bin = t.partition_point(|&cut| cut < value);
        let lo = if bin == 0 { "-inf".to_string() } else { format!("{}", t[bin - 1]) };
        if bin == t.len() {
            format!("({lo},+inf)")
        } else {
            format!("({lo},{}]", t[bin])
        }
    }
}

fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn distinct(counts: &[usize]) -> usize {
    counts.iter().filter(|&&c| c > 0).count()
}

/// Minimum information gain a binary cut of `total` points must exceed.
pub(crate) fn mdl_threshold(
    total: usize,
    parent: &[usize],
    left: &[usize],
    right: &[usize],
) -> f64 {
    let n = total as f64;
    let k = distinct(parent) as f64;
    let k1 = distinct(left) as f64;
    let k2 = distinct(right) as f64;
    let n_left: usize = left.iter().sum();
    let n_right: usize = right.iter().sum();
    let delta = (3f64.powf(k) - 2.0).log2()
        - (k * entropy(parent, total)
            - k1 * entropy(left, n_left)
            - k2 * entropy(right, n_right));
    ((n - 1.0).log2() + delta) / n
}

/// Points sorted by value; the class is an index into `class_count` slots.
fn partition(points: &[(f64, usize)], class_count: usize, cuts: &mut Vec<f64>) {
    let total = points.len();
    if total < 2 {
        return;
    }
    let mut parent = vec![0usize; class_count];
    for &(_, c) in points {
        parent[c] += 1;
    }
    let parent_entropy = entropy(&parent, total);
    if parent_entropy == 0.0 {
        return;
    }

    let mut left = vec![0usize; class_count];
    let mut best: Option<(usize, f64, Vec<usize>)> = None;
    for i in 1..total {
        left[points[i - 1].1] += 1;
        if points[i - 1].0 >= points[i].0 {
            continue;
        }
        let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
        let weighted = (i as f64 * entropy(&left, i)
            + (total - i) as f64 * entropy(&right, total - i))
            / total as f64;
        let gain = parent_entropy - weighted;
        if best.as_ref().is_none_or(|(_, g, _)| gain > *g) {
            best = Some((i, gain, left.clone()));
        }
    }

    let Some((split, gain, left)) = best else {
        return;
    };
    let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
    if gain <= mdl_threshold(total, &parent, &left, &right) {
        return;
    }
    partition(&points[..split], class_count, cuts);
    cuts.push((points[split - 1].0 + points[split].0) / 2.0);
    partition(&points[split..], class_count, cuts);
}

/// Fit cut points for one numeric column against the class column.
/// Missing cells take no part in fitting.
pub fn fit_discretizer(table: &RawTable, column_index: usize) -> Result<CutPoints> {
    if table.column_kinds.get(column_index) != Some(&ColumnKind::Numeric) {
        return Err(Error::usage(format!(
            "column {column_index} is not a numeric column"
        )));
    }
    let class_index = table.require_class_index()?;
    let mut class_ids: HashMap<String, usize> = HashMap::new();
    let mut points: Vec<(f64, usize)> = Vec::new();
    for row in &table.rows {
        let Cell::Number(v) = row[column_index] else {
            continue;
        };
        let label = row[class_index].label().unwrap_or_default();
        let next = class_ids.len();
        let c = *class_ids.entry(label).or_insert(next);
        points.push((v, c));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut thresholds = Vec::new();
    partition(&points, class_ids.len(), &mut thresholds);
    Ok(CutPoints {
        column_index,
        column_name: table.column_names[column_index].clone(),
        thresholds,
    })
}

/// Fit every numeric column of a training table.
pub fn fit_all(table: &RawTable) -> Result<Vec<CutPoints>> {
    (0..table.column_kinds.len())
        .filter(|&i| table.column_kinds[i] == ColumnKind::Numeric)
        .map(|i| fit_discretizer(table, i))
        .collect()
}

/// Replace numeric cells by their interval labels. Cut points are matched to
/// columns by name, so the table may come from a different file than the
/// one the cuts were fitted on.
pub fn apply_discretizer(table: &RawTable, cuts: &[CutPoints]) -> Result<RawTable> {
    let mut out = table.clone();
    for cut in cuts {
        let Some(col) = out.column_index(&cut.column_name) else {
            continue;
        };
        for (r, row) in out.rows.iter_mut().enumerate() {
            let value = match &row[col] {
                Cell::Missing => continue,
                Cell::Number(v) => *v,
                Cell::Text(s) => s.parse::<f64>().map_err(|_| {
                    Error::data(format!(
                        "row {}: column `{}` expects a number, found `{s}`",
                        r + 1,
                        cut.column_name
                    ))
                })?,
            };
            row[col] = Cell::Text(cut.bin_label(value));
        }
        out.column_kinds[col] = ColumnKind::Categorical;
    }
    Ok(out)
}
