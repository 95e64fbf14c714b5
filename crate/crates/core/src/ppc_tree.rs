//! Prefix tree over the training examples with pre/post-order codes.

use std::fmt::Write as _;

use crate::dataset::{EncodedExample, SelectorDictionary, SelectorId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpcNode {
    /// `None` only for the root.
    pub selector: Option<SelectorId>,
    pub freq: u64,
    pub pre: u32,
    pub post: u32,
    pub parent: Option<usize>,
    /// `(selector, node index)` pairs sorted by selector id.
    pub children: Vec<(SelectorId, usize)>,
}

#[derive(Debug, Clone)]
pub struct PpcTree {
    nodes: Vec<PpcNode>,
    coded: bool,
}

pub const ROOT: usize = 0;

impl Default for PpcTree {
    fn default() -> Self {
        Self::new()
    }
}

impl PpcTree {
    pub fn new() -> Self {
        PpcTree {
            nodes: vec![PpcNode {
                selector: None,
                freq: 0,
                pre: 0,
                post: 0,
                parent: None,
                children: Vec::new(),
            }],
            coded: false,
        }
    }

    /// Insert one example, class selector first, then the body from the
    /// largest id down.
    pub fn insert(&mut self, example: &EncodedExample) {
        self.coded = false;
        let path = example.class.iter().chain(example.body.iter().rev());
        let mut at = ROOT;
        self.nodes[ROOT].freq += 1;
        for &s in path {
            let next = match self.nodes[at].children.binary_search_by_key(&s, |c| c.0) {
                Ok(i) => self.nodes[at].children[i].1,
                Err(i) => {
                    let idx = self.nodes.len();
                    self.nodes.push(PpcNode {
                        selector: Some(s),
                        freq: 0,
                        pre: 0,
                        post: 0,
                        parent: Some(at),
                        children: Vec::new(),
                    });
                    self.nodes[at].children.insert(i, (s, idx));
                    idx
                }
            };
            self.nodes[next].freq += 1;
            at = next;
        }
    }

    /// Number them in pre-order and post-order, visiting children by
    /// ascending selector id. The root gets pre 0 and the largest post.
    pub fn assign_pp_codes(&mut self) {
        let mut pre = 0u32;
        let mut post = 0u32;
        // (node, next child position)
        let mut stack: Vec<(usize, usize)> = vec![(ROOT, 0)];
        self.nodes[ROOT].pre = pre;
        pre += 1;
        while let Some(top) = stack.last_mut() {
            let (node, child_pos) = *top;
            if child_pos < self.nodes[node].children.len() {
                top.1 += 1;
                let child = self.nodes[node].children[child_pos].1;
                self.nodes[child].pre = pre;
                pre += 1;
                stack.push((child, 0));
            } else {
                self.nodes[node].post = post;
                post += 1;
                stack.pop();
            }
        }
        self.coded = true;
    }

    pub fn is_coded(&self) -> bool {
        self.coded
    }

    pub fn nodes(&self) -> &[PpcNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &PpcNode {
        &self.nodes[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> &PpcNode {
        &self.nodes[ROOT]
    }

    /// Node indices in pre-order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![ROOT];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev().map(|c| c.1));
        }
        out
    }

    /// Indented text form, one node per line.
    pub fn dump(&self, dict: &SelectorDictionary) -> String {
        let mut out = String::new();
        let mut stack = vec![(ROOT, 0usize)];
        while let Some((n, depth)) = stack.pop() {
            let node = &self.nodes[n];
            let label = match node.selector {
                Some(s) => dict.describe(s),
                None => "root".to_string(),
            };
            let _ = writeln!(
                out,
                "{:indent$}{label} <{},{}>:{}",
                "",
                node.pre,
                node.post,
                node.freq,
                indent = depth * 2
            );
            stack.extend(node.children.iter().rev().map(|c| (c.1, depth + 1)));
        }
        out
    }
}

/// Build the tree from training examples and assign codes.
pub fn build_tree(examples: &[EncodedExample]) -> PpcTree {
    let mut tree = PpcTree::new();
    for ex in examples {
        tree.insert(ex);
    }
    tree.assign_pp_codes();
    tree
}
