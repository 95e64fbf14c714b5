//! k-fold cross-validation, accuracy and report rendering.

use std::fmt::Write as _;
use std::time::Instant;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::RawTable;
use crate::error::{Error, Result};
use crate::learner::{train, LearnerConfig};

/// Shuffled, unstratified assignment of rows to folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub fold_count: usize,
    pub seed: u64,
    /// Row indices in shuffled order.
    order: Vec<usize>,
}

impl FoldPlan {
    pub fn new(row_count: usize, fold_count: usize, seed: u64) -> Result<Self> {
        if fold_count < 2 {
            return Err(Error::usage("cross-validation needs at least 2 folds"));
        }
        if fold_count > row_count {
            return Err(Error::usage(format!(
                "{fold_count} folds requested for {row_count} rows"
            )));
        }
        let mut order: Vec<usize> = (0..row_count).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ok(FoldPlan { fold_count, seed, order })
    }

    pub fn row_count(&self) -> usize {
        self.order.len()
    }

    /// Fold of every row, indexed by row.
    pub fn assignment(&self) -> Vec<usize> {
        let mut fold = vec![0; self.order.len()];
        for (pos, &row) in self.order.iter().enumerate() {
            fold[row] = pos % self.fold_count;
        }
        fold
    }

    /// Rows of `fold`, in shuffled order.
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        self.order
            .iter()
            .enumerate()
            .filter(|(pos, _)| pos % self.fold_count == fold)
            .map(|(_, &r)| r)
            .collect()
    }

    /// Rows outside `fold`, in shuffled order.
    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        self.order
            .iter()
            .enumerate()
            .filter(|(pos, _)| pos % self.fold_count != fold)
            .map(|(_, &r)| r)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub fold: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub accuracy: f64,
    /// Distinct rules before filtering.
    pub learned_rules: usize,
    /// Rules kept by the filter, default rule excluded.
    pub filtered_rules: usize,
    /// Final rule count, default rule included.
    pub rule_count: usize,
    pub mean_rule_length: f64,
    pub learn_secs: f64,
    pub classify_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub config: LearnerConfig,
    pub fold_count: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl EvalReport {
    pub fn mean_accuracy(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.accuracy))
    }

    pub fn mean_rule_count(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.rule_count as f64))
    }

    pub fn mean_rule_length(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.mean_rule_length))
    }

    pub fn mean_learned_rules(&self) -> f64 {
        mean(self.folds.iter().map(|f| f.learned_rules as f64))
    }

    /// Fraction of learned rules the filter removed, pooled over folds.
    pub fn filter_reduction(&self) -> f64 {
        let learned: usize = self.folds.iter().map(|f| f.learned_rules).sum();
        let kept: usize = self.folds.iter().map(|f| f.filtered_rules).sum();
        if learned == 0 {
            0.0
        } else {
            1.0 - kept as f64 / learned as f64
        }
    }

    pub fn total_learn_secs(&self) -> f64 {
        self.folds.iter().map(|f| f.learn_secs).sum()
    }

    /// Aligned text table. Timings are left out unless asked for, so that
    /// reports of identical runs are identical.
    pub fn render_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "variant={} m={} folds={} seed={} max_rule_length={}",
            self.config.variant,
            self.config.m,
            self.fold_count,
            self.seed,
            self.config
                .max_rule_length
                .map_or("none".to_string(), |k| k.to_string())
        );
        let _ = write!(
            out,
            "{:>4} {:>6} {:>6} {:>9} {:>8} {:>6} {:>6} {:>8}",
            "fold", "train", "test", "accuracy", "learned", "kept", "rules", "length"
        );
        if timings {
            let _ = write!(out, " {:>9} {:>9}", "learn_s", "classify_s");
        }
        out.push('\n');
        for f in &self.folds {
            let _ = write!(
                out,
                "{:>4} {:>6} {:>6} {:>9.4} {:>8} {:>6} {:>6} {:>8.3}",
                f.fold + 1,
                f.train_rows,
                f.test_rows,
                f.accuracy,
                f.learned_rules,
                f.filtered_rules,
                f.rule_count,
                f.mean_rule_length
            );
            if timings {
                let _ = write!(out, " {:>9.3} {:>9.3}", f.learn_secs, f.classify_secs);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "mean accuracy {:.4}  rules {:.1}  length {:.3}  filter reduction {:.2}%",
            self.mean_accuracy(),
            self.mean_rule_count(),
            self.mean_rule_length(),
            100.0 * self.filter_reduction()
        );
        out
    }

    /// Tab-separated rows, one per fold, then a `mean` row.
    pub fn render_tsv(&self, timings: bool) -> String {
        let mut out = String::from(
            "fold\ttrain\ttest\taccuracy\tlearned\tkept\trules\tmean_length",
        );
        if timings {
            out.push_str("\tlearn_s\tclassify_s");
        }
        out.push('\n');
        for f in &self.folds {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                f.fold + 1,
                f.train_rows,
                f.test_rows,
                f.accuracy,
                f.learned_rules,
                f.filtered_rules,
                f.rule_count,
                f.mean_rule_length
            );
            if timings {
                let _ = write!(out, "\t{}\t{}", f.learn_secs, f.classify_secs);
            }
            out.push('\n');
        }
        let _ = write!(
            out,
            "mean\t\t\t{}\t{}\t\t{}\t{}",
            self.mean_accuracy(),
            self.mean_learned_rules(),
            self.mean_rule_count(),
            self.mean_rule_length()
        );
        if timings {
            let _ = write!(out, "\t{}\t", self.total_learn_secs());
        }
        out.push('\n');
        out
    }
}

/// Fraction of positions where the prediction equals the truth.
pub fn score<T: PartialEq>(predictions: &[T], truths: &[T]) -> Result<f64> {
    if predictions.len() != truths.len() {
        return Err(Error::usage(format!(
            "{} predictions for {} labels",
            predictions.len(),
            truths.len()
        )));
    }
    if truths.is_empty() {
        return Err(Error::usage("cannot score an empty prediction set"));
    }
    let hits = predictions.iter().zip(truths).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truths.len() as f64)
}

/// Train on each fold's complement and test on the fold. Cut points,
/// selectors and class totals come from the training rows only.
pub fn cross_validate(table: &RawTable, plan: &FoldPlan, cfg: &LearnerConfig) -> Result<EvalReport> {
    cfg.validate()?;
    table.require_class_index()?;
    if plan.row_count() != table.row_count() {
        return Err(Error::usage("fold plan does not match the table"));
    }
    let mut folds = Vec::with_capacity(plan.fold_count);
    for fold in 0..plan.fold_count {
        let train_table = table.select_rows(&plan.train_rows(fold));
        let test_table = table.select_rows(&plan.test_rows(fold));

        let started = Instant::now();
        let model = train(&train_table, cfg)?;
        let learn_secs = started.elapsed().as_secs_f64();

        let truths = test_table.class_labels().expect("class column checked above");
        let known = model.dictionary.class_attribute();
        let unseen = truths.iter().filter(|t| !known.values.contains(t)).count();
        if unseen > 0 {
            warn!("fold {}: {unseen} test rows have a class absent from training", fold + 1);
        }

        let started = Instant::now();
        let predictions: Vec<String> = model
            .predict_table(&test_table)?
            .into_iter()
            .map(|r| model.class_label(r).to_string())
            .collect();
        let classify_secs = started.elapsed().as_secs_f64();

        let (rule_count, mean_rule_length) = model.rule_stats();
        folds.push(FoldResult {
            fold,
            train_rows: train_table.row_count(),
            test_rows: test_table.row_count(),
            accuracy: score(&predictions, &truths)?,
            learned_rules: model.learned_rule_count,
            filtered_rules: model.rules.len(),
            rule_count,
            mean_rule_length,
            learn_secs,
            classify_secs,
        });
    }
    Ok(EvalReport { config: cfg.clone(), fold_count: plan.fold_count, seed: plan.seed, folds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring() {
        assert_eq!(score(&[1, 2, 3], &[1, 2, 3]).unwrap(), 1.0);
        assert_eq!(score(&[0, 0], &[1, 1]).unwrap(), 0.0);
        assert_eq!(score(&["a", "b", "a", "a"], &["a", "b", "b", "a"]).unwrap(), 0.75);
        assert!(score(&[1], &[1, 2]).is_err());
        assert!(score::<u8>(&[], &[]).is_err());
    }

    #[test]
    fn folds_partition_rows() {
        let plan = FoldPlan::new(23, 10, 7).unwrap();
        let mut seen = [0; 23];
        for f in 0..10 {
            let test = plan.test_rows(f);
            assert!(test.len() == 2 || test.len() == 3);
            assert_eq!(test.len() + plan.train_rows(f).len(), 23);
            for r in test {
                seen[r] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(plan, FoldPlan::new(23, 10, 7).unwrap());
        assert_ne!(plan.assignment(), FoldPlan::new(23, 10, 8).unwrap().assignment());
    }

    #[test]
    fn single_fold_rejected() {
        assert!(matches!(FoldPlan::new(10, 1, 0), Err(Error::Usage(_))));
        assert!(FoldPlan::new(3, 4, 0).is_err());
    }
}
