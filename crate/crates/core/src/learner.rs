//! Per-example rule search, the three learning variants, rule filtering and
//! the trained model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use rayon::prelude::*;

use crate::dataset::{
    apply_discretizer, build_selector_dictionary, encode_examples, encode_instances, fit_all,
    CutPoints, EncodedDataset, EncodedExample, RawTable, SelectorDictionary, SelectorId,
};
use crate::error::{Error, Result};
use crate::heuristic::{check_m, compare_rules_total, is_better, m_estimate, Rule};
use crate::nlist::{extract_selector_nlists, NListCache, SeedLists};
use crate::ppc_tree::build_tree;
use crate::rtree::RTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Lord,
    LordStar,
    Overlord,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lord => "lord",
            Variant::LordStar => "lord_star",
            Variant::Overlord => "overlord",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lord" => Ok(Variant::Lord),
            "lord_star" | "lord*" => Ok(Variant::LordStar),
            "overlord" => Ok(Variant::Overlord),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected lord, lord_star or overlord)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub m: f64,
    pub variant: Variant,
    pub max_rule_length: Option<usize>,
    pub worker_count: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig { m: 0.1, variant: Variant::Lord, max_rule_length: None, worker_count: 1 }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        check_m(self.m)?;
        if self.max_rule_length == Some(0) {
            return Err(Error::Config("max rule length must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rules keyed by `(body, head)`; inserting an existing key does nothing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuleSet {
    rules: BTreeMap<(Vec<SelectorId>, SelectorId), (u64, u64, f64)>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the key was already present.
    pub fn insert(&mut self, rule: Rule) -> bool {
        use std::collections::btree_map::Entry;
        match self.rules.entry((rule.body, rule.head)) {
            Entry::Occupied(_) => false,
            Entry::Vacant(v) => {
                v.insert((rule.p, rule.n, rule.h));
                true
            }
        }
    }

    pub fn contains(&self, body: &[SelectorId], head: SelectorId) -> bool {
        self.rules.contains_key(&(body.to_vec(), head))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rules in canonical `(body, head)` order.
    pub fn iter(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().map(|((body, head), &(p, n, h))| Rule {
            body: body.clone(),
            head: *head,
            p,
            n,
            h,
        })
    }

    pub fn to_vec(&self) -> Vec<Rule> {
        self.iter().collect()
    }
}

impl FromIterator<Rule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        let mut set = RuleSet::new();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

/// Computes rule counts through an N-list cache.
pub struct Evaluator<'a> {
    cache: NListCache<'a>,
    dict: &'a SelectorDictionary,
    m: f64,
}

impl<'a> Evaluator<'a> {
    pub fn new(seeds: &'a SeedLists, dict: &'a SelectorDictionary, m: f64) -> Self {
        Evaluator { cache: NListCache::new(seeds), dict, m }
    }

    /// Rule `body -> head` with counts on the training set. `body` must be
    /// a valid ascending selector-set of predictive selectors.
    pub fn evaluate(&mut self, body: &[SelectorId], head: SelectorId) -> Rule {
        let total = self.dict.example_count();
        let pos = self.dict.class_frequency(head);
        let (covered, p) = if body.is_empty() {
            (total, pos)
        } else {
            let covered = self.cache.support_of_valid(body);
            let mut key = Vec::with_capacity(body.len() + 1);
            key.extend_from_slice(body);
            key.push(head);
            (covered, self.cache.support_of_valid(&key))
        };
        Rule {
            body: body.to_vec(),
            head,
            p,
            n: covered - p,
            h: m_estimate(p, covered - p, pos, total - pos, self.m),
        }
    }

    pub fn cache(&self) -> &NListCache<'a> {
        &self.cache
    }
}

/// Greedy specialization with the example's remaining selectors. Returns the
/// final rule and whether any extension was accepted.
pub fn grow_rule(
    ev: &mut Evaluator<'_>,
    example: &EncodedExample,
    start: Rule,
    max_len: Option<usize>,
) -> (Rule, bool) {
    let mut current = start;
    let mut improved = false;
    loop {
        if max_len.is_some_and(|k| current.body.len() >= k) {
            break;
        }
        let mut best: Option<Rule> = None;
        for &s in &example.body {
            let Err(pos) = current.body.binary_search(&s) else {
                continue;
            };
            let mut body = current.body.clone();
            body.insert(pos, s);
            let candidate = ev.evaluate(&body, current.head);
            if best.as_ref().is_none_or(|b| is_better(&candidate, b)) {
                best = Some(candidate);
            }
        }
        match best {
            Some(b) if is_better(&b, &current) => {
                current = b;
                improved = true;
            }
            _ => break,
        }
    }
    (current, improved)
}

/// Greedy generalization by single-selector removal while the body has
/// more than two selectors.
pub fn prune_rule(ev: &mut Evaluator<'_>, rule: Rule) -> (Rule, bool) {
    let mut current = rule;
    let mut improved = false;
    while current.body.len() > 2 {
        let mut best: Option<Rule> = None;
        for i in 0..current.body.len() {
            let mut body = current.body.clone();
            body.remove(i);
            let candidate = ev.evaluate(&body, current.head);
            if best.as_ref().is_none_or(|b| is_better(&candidate, b)) {
                best = Some(candidate);
            }
        }
        match best {
            Some(b) if is_better(&b, &current) => {
                current = b;
                improved = true;
            }
            _ => break,
        }
    }
    (current, improved)
}

/// Locally optimal rule for one example.
pub fn find_local_best(ev: &mut Evaluator<'_>, example: &EncodedExample, cfg: &LearnerConfig) -> Rule {
    let head = example.head();
    let start = ev.evaluate(&[], head);
    let (mut rule, _) = grow_rule(ev, example, start, cfg.max_rule_length);
    let (pruned, mut changed) = prune_rule(ev, rule);
    rule = pruned;
    if cfg.variant == Variant::Overlord {
        while changed {
            let (grown, g) = grow_rule(ev, example, rule, cfg.max_rule_length);
            rule = grown;
            if !g {
                break;
            }
            let (pruned, p) = prune_rule(ev, rule);
            rule = pruned;
            changed = p;
        }
    }
    rule
}

/// Training set prepared for rule search: the tree is built, read into
/// per-selector N-lists and dropped.
pub struct Learner<'a> {
    data: &'a EncodedDataset,
    seeds: SeedLists,
    cfg: LearnerConfig,
}

impl<'a> Learner<'a> {
    pub fn new(data: &'a EncodedDataset, cfg: &LearnerConfig) -> Result<Self> {
        cfg.validate()?;
        if data.examples.is_empty() {
            return Err(Error::data("no training examples"));
        }
        let tree = build_tree(&data.examples);
        let seeds = extract_selector_nlists(&tree, &data.dictionary);
        Ok(Learner { data, seeds, cfg: cfg.clone() })
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.cfg
    }

    pub fn seeds(&self) -> &SeedLists {
        &self.seeds
    }

    /// Fresh evaluator with its own cache.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(&self.seeds, &self.data.dictionary, self.cfg.m)
    }

    /// Search for one example with a private cache that is dropped afterwards.
    pub fn local_best(&self, example: &EncodedExample) -> Rule {
        let mut ev = self.evaluator();
        find_local_best(&mut ev, example, &self.cfg)
    }

    /// Rules for the configured variant, before filtering.
    pub fn learn(&self) -> Result<RuleSet> {
        match self.cfg.variant {
            Variant::Lord | Variant::Overlord => self.learn_lord(),
            Variant::LordStar => Ok(self.learn_lord_star()),
        }
    }

    /// One rule per example, searched in parallel.
    pub fn learn_lord(&self) -> Result<RuleSet> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.worker_count)
            .build()
            .map_err(|e| Error::internal(format!("cannot start worker pool: {e}")))?;
        let rules: Vec<Rule> =
            pool.install(|| self.data.examples.par_iter().map(|ex| self.local_best(ex)).collect());
        Ok(rules.into_iter().collect())
    }

    /// Sequential pass that learns only for uncovered or misclassified examples.
    pub fn learn_lord_star(&self) -> RuleSet {
        let mut set = RuleSet::new();
        let mut index = RTree::new();
        for ex in &self.data.examples {
            let head = ex.head();
            let current = index.best_covering(&ex.body).cloned();
            let rule = match current {
                None => self.local_best(ex),
                Some(r) if r.head != head => {
                    let rule = self.local_best(ex);
                    if !is_better(&rule, &r) {
                        continue;
                    }
                    rule
                }
                Some(_) => continue,
            };
            if set.insert(rule.clone()) {
                index.insert(rule).expect("rule set and index hold the same keys");
            }
        }
        set
    }

    /// Keep each example's best matching-head covering rule and add the
    /// default rule for the majority class.
    pub fn filter(&self, rules: &RuleSet) -> Result<(Vec<Rule>, Rule)> {
        filter_rules(rules, self.data, self.cfg.m)
    }
}

pub fn filter_rules(rules: &RuleSet, data: &EncodedDataset, m: f64) -> Result<(Vec<Rule>, Rule)> {
    let index = RTree::build(rules.iter())?;
    let mut kept = RuleSet::new();
    let mut uncovered = 0usize;
    for ex in &data.examples {
        let head = ex.head();
        match index.best_covering_where(&ex.body, |r| r.head == head) {
            Some(r) => {
                kept.insert(r.clone());
            }
            None => uncovered += 1,
        }
    }
    if uncovered > 0 {
        warn!("{uncovered} training examples have no covering rule of their own class");
    }
    let dict = &data.dictionary;
    let majority = dict.majority_class();
    let total = dict.example_count();
    let pos = dict.class_frequency(majority);
    let default = Rule {
        body: Vec::new(),
        head: majority,
        p: pos,
        n: total - pos,
        h: m_estimate(pos, total - pos, pos, total - pos, m),
    };
    debug!("filter kept {} of {} rules", kept.len(), rules.len());
    Ok((kept.to_vec(), default))
}

/// A trained classifier.
#[derive(Debug, Clone)]
pub struct Model {
    pub cuts: Vec<CutPoints>,
    pub dictionary: SelectorDictionary,
    /// Filtered rules in canonical order, without the default rule.
    pub rules: Vec<Rule>,
    pub default_rule: Rule,
    pub config: LearnerConfig,
    /// Rules learned before filtering.
    pub learned_rule_count: usize,
    index: RTree,
}

impl Model {
    pub fn new(
        cuts: Vec<CutPoints>,
        dictionary: SelectorDictionary,
        mut rules: Vec<Rule>,
        default_rule: Rule,
        config: LearnerConfig,
        learned_rule_count: usize,
    ) -> Result<Self> {
        if !default_rule.body.is_empty() {
            return Err(Error::internal("default rule must have an empty body"));
        }
        rules.sort_by(|a, b| a.key().cmp(&b.key()));
        let default_in_rules = rules.iter().any(|r| r.key() == default_rule.key());
        let mut index = RTree::build(rules.iter().cloned())?;
        if !default_in_rules {
            index.insert(default_rule.clone())?;
        }
        Ok(Model { cuts, dictionary, rules, default_rule, config, learned_rule_count, index })
    }

    /// Every rule used for classification, the default rule included.
    pub fn final_rules(&self) -> &[Rule] {
        self.index.rules()
    }

    /// Best covering rule of an encoded instance.
    pub fn classify(&self, body: &[SelectorId]) -> &Rule {
        self.index.best_covering(body).unwrap_or(&self.default_rule)
    }

    pub fn covering_rules(&self, body: &[SelectorId]) -> Vec<&Rule> {
        self.index.covering_rules(body)
    }

    pub fn class_label(&self, rule: &Rule) -> &str {
        self.dictionary.value_label(rule.head)
    }

    /// Discretize and encode a table with this model's cut points and selectors.
    pub fn encode(&self, table: &RawTable) -> Result<Vec<EncodedExample>> {
        let discrete = apply_discretizer(table, &self.cuts)?;
        Ok(encode_instances(&discrete, &self.dictionary))
    }

    /// Justifying rule for every row of `table`.
    pub fn predict_table(&self, table: &RawTable) -> Result<Vec<&Rule>> {
        Ok(self.encode(table)?.iter().map(|ex| self.classify(&ex.body)).collect())
    }

    /// Rule count and mean body length of the final rule set.
    pub fn rule_stats(&self) -> (usize, f64) {
        rule_stats(self.final_rules())
    }

    /// `attr=value AND ... => class [p, n, h]`.
    pub fn format_rule(&self, rule: &Rule) -> String {
        let body = if rule.body.is_empty() {
            "true".to_string()
        } else {
            rule.body.iter().map(|&s| self.dictionary.describe(s)).collect::<Vec<_>>().join(" AND ")
        };
        format!(
            "{body} => {} [{}, {}, {}]",
            self.dictionary.describe(rule.head),
            rule.p,
            rule.n,
            rule.h
        )
    }

    /// Final rules sorted by h descending, then by the rule order.
    pub fn rule_dump(&self) -> Vec<String> {
        let mut rules: Vec<&Rule> = self.final_rules().iter().collect();
        rules.sort_by(|a, b| compare_rules_total(b, a));
        rules.iter().map(|r| self.format_rule(r)).collect()
    }
}

/// Count and mean body length.
pub fn rule_stats(rules: &[Rule]) -> (usize, f64) {
    if rules.is_empty() {
        return (0, 0.0);
    }
    let total: usize = rules.iter().map(|r| r.body.len()).sum();
    (rules.len(), total as f64 / rules.len() as f64)
}

/// Fit cut points and selectors on `table`, encode it, learn and filter.
pub fn train(table: &RawTable, cfg: &LearnerConfig) -> Result<Model> {
    cfg.validate()?;
    let cuts = fit_all(table)?;
    let discrete = apply_discretizer(table, &cuts)?;
    let dictionary = build_selector_dictionary(&discrete)?;
    let data = encode_examples(&discrete, &dictionary)?;
    train_encoded(&data, cuts, cfg)
}

pub fn train_encoded(data: &EncodedDataset, cuts: Vec<CutPoints>, cfg: &LearnerConfig) -> Result<Model> {
    let learner = Learner::new(data, cfg)?;
    let learned = learner.learn()?;
    let (rules, default) = learner.filter(&learned)?;
    Model::new(cuts, data.dictionary.clone(), rules, default, cfg.clone(), learned.len())
}
