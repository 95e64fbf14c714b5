//! N-lists: per selector-set node lists whose frequency sum is the support.

use std::collections::HashMap;

use crate::dataset::{SelectorDictionary, SelectorId};
use crate::error::{Error, Result};
use crate::ppc_tree::PpcTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NNode {
    pub pre: u32,
    pub post: u32,
    pub freq: u64,
}

/// Nodes sorted by `pre`, stored column-wise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NList {
    pre: Vec<u32>,
    post: Vec<u32>,
    freq: Vec<u64>,
}

impl NList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from nodes that are already sorted by `pre`.
    pub fn from_nodes(nodes: &[NNode]) -> Self {
        let mut nl = NList::new();
        for n in nodes {
            nl.push(n.pre, n.post, n.freq);
        }
        nl
    }

    fn push(&mut self, pre: u32, post: u32, freq: u64) {
        self.pre.push(pre);
        self.post.push(post);
        self.freq.push(freq);
    }

    pub fn len(&self) -> usize {
        self.pre.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn node(&self, i: usize) -> NNode {
        NNode { pre: self.pre[i], post: self.post[i], freq: self.freq[i] }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NNode> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// Number of examples containing the selector-set.
    pub fn support(&self) -> u64 {
        self.freq.iter().sum()
    }

    /// Both `pre` and `post` strictly increase along the list.
    pub fn is_well_ordered(&self) -> bool {
        self.pre.windows(2).all(|w| w[0] < w[1]) && self.post.windows(2).all(|w| w[0] < w[1])
    }
}

/// Number of leading elements of `xs` satisfying `pred`, which must hold
/// on a prefix. Exponential probing keeps short skips cheap.
fn gallop<T: Copy>(xs: &[T], pred: impl Fn(T) -> bool) -> usize {
    let mut hi = 1;
    while hi <= xs.len() && pred(xs[hi - 1]) {
        hi *= 2;
    }
    let lo = hi / 2;
    let hi = hi.min(xs.len());
    lo + xs[lo..hi].partition_point(|&x| pred(x))
}

/// For every node of `nl2`, sum the frequencies of the `nl1` nodes below
/// it. Nodes of `nl2` with nothing below are dropped.
///
/// Valid only when the two sets share all selectors but the last and the
/// last selector of `nl1`'s set precedes that of `nl2`'s.
pub fn join(nl1: &NList, nl2: &NList) -> NList {
    let mut out = NList::new();
    let (mut i, mut j) = (0, 0);
    let mut acc = 0u64;
    while i < nl1.len() && j < nl2.len() {
        if nl1.pre[i] > nl2.pre[j] {
            if nl1.post[i] < nl2.post[j] {
                acc += nl1.freq[i];
                i += 1;
            } else {
                if acc > 0 {
                    out.push(nl2.pre[j], nl2.post[j], acc);
                    acc = 0;
                }
                // nodes finishing before node i cannot be ancestors of it or of later nodes
                let limit = nl1.post[i];
                j += 1 + gallop(&nl2.post[j + 1..], |p| p < limit);
            }
        } else {
            // nodes starting before node j cannot be below it or below later nodes
            let limit = nl2.pre[j];
            i += 1 + gallop(&nl1.pre[i + 1..], |p| p <= limit);
        }
    }
    if acc > 0 {
        out.push(nl2.pre[j], nl2.post[j], acc);
    }
    debug_assert!(out.is_well_ordered());
    out
}

/// One N-list per selector, read off a coded tree.
#[derive(Debug, Clone)]
pub struct SeedLists {
    lists: Vec<NList>,
    attribute_of: Vec<usize>,
}

impl SeedLists {
    pub fn get(&self, s: SelectorId) -> &NList {
        &self.lists[s.index()]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }
}

/// Single pre-order pass appending every non-root node to its selector's list.
pub fn extract_selector_nlists(tree: &PpcTree, dict: &SelectorDictionary) -> SeedLists {
    assert!(tree.is_coded(), "codes must be assigned before extracting N-lists");
    let mut lists = vec![NList::new(); dict.len()];
    for idx in tree.preorder() {
        let node = tree.node(idx);
        if let Some(s) = node.selector {
            lists[s.index()].push(node.pre, node.post, node.freq);
        }
    }
    let attribute_of = dict.selectors().iter().map(|s| s.attribute).collect();
    SeedLists { lists, attribute_of }
}

/// How the second operand of a join is chosen for keys of length three or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinRoute {
    /// Use the cached sibling `s1..s(k-2) sk` when present, else the list of `sk`.
    Auto,
    /// Always compute and use the sibling set.
    ForceSibling,
    /// Always use the single-selector list of `sk`.
    ForceSelector,
}

/// Lazily computed N-lists for selector-sets, on top of shared seed lists.
#[derive(Debug)]
pub struct NListCache<'a> {
    seeds: &'a SeedLists,
    computed: HashMap<Vec<SelectorId>, NList>,
    joins: usize,
}

impl<'a> NListCache<'a> {
    pub fn new(seeds: &'a SeedLists) -> Self {
        NListCache { seeds, computed: HashMap::new(), joins: 0 }
    }

    /// Joins performed so far.
    pub fn join_count(&self) -> usize {
        self.joins
    }

    pub fn cached_len(&self) -> usize {
        self.computed.len()
    }

    /// Strictly ascending ids, all known, no attribute used twice.
    pub fn validate_key(&self, key: &[SelectorId]) -> Result<()> {
        if key.is_empty() {
            return Err(Error::usage("selector-set key is empty"));
        }
        if let Some(s) = key.iter().find(|s| s.index() >= self.seeds.len()) {
            return Err(Error::usage(format!("unknown selector id {s}")));
        }
        if key.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("selector-set key must be strictly ascending"));
        }
        let mut attrs: Vec<usize> = key.iter().map(|s| self.seeds.attribute_of[s.index()]).collect();
        attrs.sort_unstable();
        if attrs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::usage("selector-set key uses an attribute twice"));
        }
        Ok(())
    }

    pub fn calculate_nlist(&mut self, key: &[SelectorId]) -> Result<&NList> {
        self.calculate_with(key, JoinRoute::Auto)
    }

    pub fn calculate_with(&mut self, key: &[SelectorId], route: JoinRoute) -> Result<&NList> {
        self.validate_key(key)?;
        self.ensure(key, route);
        Ok(self.lookup(key))
    }

    /// Support of an arbitrary selector collection. Order does not matter;
    /// two selectors of one attribute can never co-occur, so such sets
    /// have support 0.
    pub fn support(&mut self, selectors: &[SelectorId]) -> u64 {
        let mut key = selectors.to_vec();
        key.sort_unstable();
        key.dedup();
        if self.validate_key(&key).is_err() {
            return 0;
        }
        self.ensure(&key, JoinRoute::Auto);
        self.lookup(&key).support()
    }

    /// Support of a key the caller guarantees to be valid.
    pub(crate) fn support_of_valid(&mut self, key: &[SelectorId]) -> u64 {
        debug_assert!(self.validate_key(key).is_ok());
        self.ensure(key, JoinRoute::Auto);
        self.lookup(key).support()
    }

    fn lookup(&self, key: &[SelectorId]) -> &NList {
        if key.len() == 1 {
            self.seeds.get(key[0])
        } else {
            &self.computed[key]
        }
    }

    fn ensure(&mut self, key: &[SelectorId], route: JoinRoute) {
        let k = key.len();
        if k == 1 || self.computed.contains_key(key) {
            return;
        }
        let prefix = &key[..k - 1];
        self.ensure(prefix, route);

        let sibling: Option<Vec<SelectorId>> = (k >= 3).then(|| {
            let mut s = key[..k - 2].to_vec();
            s.push(key[k - 1]);
            s
        });
        let sibling = match (route, sibling) {
            (JoinRoute::Auto, Some(s)) if self.computed.contains_key(&s) => Some(s),
            (JoinRoute::ForceSibling, Some(s)) => {
                self.ensure(&s, route);
                Some(s)
            }
            _ => None,
        };

        let nl1 = self.lookup(prefix);
        let nl2 = match &sibling {
            Some(s) => self.lookup(s),
            None => self.seeds.get(key[k - 1]),
        };
        let nl = join(nl1, nl2);
        self.joins += 1;
        self.computed.insert(key.to_vec(), nl);
    }
}
