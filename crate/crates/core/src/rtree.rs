//! Prefix tree over rule bodies for retrieving the rules that cover an example.

use std::cmp::Ordering;

use crate::dataset::SelectorId;
use crate::error::{Error, Result};
use crate::heuristic::{compare_rules_total, Rule};

#[derive(Debug, Clone, Default)]
struct RNode {
    children: Vec<(SelectorId, usize)>,
    /// `(head, rule index)` sorted by head.
    rules: Vec<(SelectorId, usize)>,
}

/// Bodies are inserted from their largest selector id down, so every path
/// from the root has decreasing ids. Rules with an empty body sit at the root.
#[derive(Debug, Clone)]
pub struct RTree {
    nodes: Vec<RNode>,
    rules: Vec<Rule>,
}

impl Default for RTree {
    fn default() -> Self {
        Self::new()
    }
}

impl RTree {
    pub fn new() -> Self {
        RTree { nodes: vec![RNode::default()], rules: Vec::new() }
    }

    pub fn build<I: IntoIterator<Item = Rule>>(rules: I) -> Result<Self> {
        let mut tree = RTree::new();
        for r in rules {
            tree.insert(r)?;
        }
        Ok(tree)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Add a rule. A second rule with the same body and head is an error.
    pub fn insert(&mut self, rule: Rule) -> Result<()> {
        let mut at = 0;
        for &s in rule.body.iter().rev() {
            at = match self.nodes[at].children.binary_search_by_key(&s, |c| c.0) {
                Ok(i) => self.nodes[at].children[i].1,
                Err(i) => {
                    let idx = self.nodes.len();
                    self.nodes.push(RNode::default());
                    self.nodes[at].children.insert(i, (s, idx));
                    idx
                }
            };
        }
        let slot = &mut self.nodes[at].rules;
        match slot.binary_search_by_key(&rule.head, |r| r.0) {
            Ok(_) => Err(Error::internal(format!(
                "rule with body {:?} and head {} indexed twice",
                rule.body, rule.head
            ))),
            Err(i) => {
                slot.insert(i, (rule.head, self.rules.len()));
                self.rules.push(rule);
                Ok(())
            }
        }
    }

    /// Visit every rule whose body is a subset of `selectors` (sorted ascending).
    pub fn for_each_covering<'s, F: FnMut(&'s Rule)>(&'s self, selectors: &[SelectorId], mut f: F) {
        self.descend(0, selectors, &mut f);
    }

    fn descend<'s, F: FnMut(&'s Rule)>(&'s self, node: usize, allowed: &[SelectorId], f: &mut F) {
        let n = &self.nodes[node];
        for &(_, r) in &n.rules {
            f(&self.rules[r]);
        }
        if n.children.len() <= allowed.len() {
            for &(s, child) in &n.children {
                if let Ok(j) = allowed.binary_search(&s) {
                    self.descend(child, &allowed[..j], f);
                }
            }
        } else {
            for (j, s) in allowed.iter().enumerate() {
                if let Ok(i) = n.children.binary_search_by_key(s, |c| c.0) {
                    self.descend(n.children[i].1, &allowed[..j], f);
                }
            }
        }
    }

    pub fn covering_rules(&self, selectors: &[SelectorId]) -> Vec<&Rule> {
        let mut out = Vec::new();
        self.for_each_covering(selectors, |r| out.push(r));
        out
    }

    /// Best covering rule; equal rules resolve to the smaller `(body, head)`.
    pub fn best_covering(&self, selectors: &[SelectorId]) -> Option<&Rule> {
        self.best_covering_where(selectors, |_| true)
    }

    pub fn best_covering_where<P: Fn(&Rule) -> bool>(
        &self,
        selectors: &[SelectorId],
        keep: P,
    ) -> Option<&Rule> {
        let mut best: Option<&Rule> = None;
        self.for_each_covering(selectors, |r| {
            if keep(r)
                && best.is_none_or(|b| compare_rules_total(r, b) == Ordering::Greater)
            {
                best = Some(r);
            }
        });
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(body: &[u32], head: u32, h: f64) -> Rule {
        Rule { body: body.iter().map(|&i| SelectorId(i)).collect(), head: SelectorId(head), p: 1, n: 0, h }
    }

    fn ids(v: &[u32]) -> Vec<SelectorId> {
        v.iter().map(|&i| SelectorId(i)).collect()
    }

    #[test]
    fn default_only_tree() {
        let t = RTree::build([rule(&[], 9, 0.375)]).unwrap();
        assert_eq!(t.rule_count(), 1);
        assert_eq!(t.covering_rules(&[]).len(), 1);
        assert_eq!(t.covering_rules(&ids(&[1, 2])).len(), 1);
    }

    #[test]
    fn duplicate_rejected_but_other_head_allowed() {
        let mut t = RTree::new();
        t.insert(rule(&[1, 3], 8, 0.5)).unwrap();
        t.insert(rule(&[1, 3], 9, 0.5)).unwrap();
        assert!(t.insert(rule(&[1, 3], 8, 0.7)).is_err());
    }

    #[test]
    fn subset_retrieval() {
        let t = RTree::build([
            rule(&[3], 7, 0.8),
            rule(&[1], 9, 0.6),
            rule(&[1, 4], 9, 0.7),
            rule(&[4, 6], 9, 0.8),
            rule(&[], 9, 0.4),
        ])
        .unwrap();
        let mut got: Vec<Vec<SelectorId>> =
            t.covering_rules(&ids(&[1, 4, 6])).iter().map(|r| r.body.clone()).collect();
        got.sort();
        assert_eq!(got, vec![ids(&[]), ids(&[1]), ids(&[1, 4]), ids(&[4, 6])]);
        assert_eq!(t.best_covering(&ids(&[1, 4, 6])).unwrap().body, ids(&[4, 6]));
    }
}
