#![allow(dead_code)]

use std::collections::HashMap;

use lord::dataset::{
    build_selector_dictionary, encode_examples, load_table, EncodedDataset, LoadOptions,
    SelectorDictionary, SelectorId,
};
use lord::fixtures::RUNNING_EXAMPLE_CSV;

/// Running example encoded, plus a map from short names (`s31`, `s1`) to ids.
pub struct Running {
    pub data: EncodedDataset,
    pub names: HashMap<String, SelectorId>,
}

impl Running {
    pub fn id(&self, name: &str) -> SelectorId {
        *self.names.get(name).unwrap_or_else(|| panic!("no selector {name}"))
    }

    pub fn ids(&self, names: &[&str]) -> Vec<SelectorId> {
        names.iter().map(|n| self.id(n)).collect()
    }

    pub fn name(&self, id: SelectorId) -> String {
        short_name(&self.data.dictionary, id)
    }
}

/// `s<attribute><value>` for predictive selectors, `s<value>` for classes,
/// both 1-based.
pub fn short_name(dict: &SelectorDictionary, id: SelectorId) -> String {
    let s = dict.selector(id);
    if dict.is_class(id) {
        format!("s{}", s.value + 1)
    } else {
        format!("s{}{}", s.attribute + 1, s.value + 1)
    }
}

pub fn running() -> Running {
    let table = load_table(RUNNING_EXAMPLE_CSV.as_bytes(), &LoadOptions::default()).unwrap();
    let dict = build_selector_dictionary(&table).unwrap();
    let data = encode_examples(&table, &dict).unwrap();
    let names = dict
        .selectors()
        .iter()
        .map(|s| (short_name(&dict, s.id), s.id))
        .collect();
    Running { data, names }
}

/// Examples whose selector set contains every selector of `key`.
pub fn brute_support(data: &EncodedDataset, key: &[SelectorId]) -> u64 {
    data.examples
        .iter()
        .filter(|ex| {
            let full = ex.full_selectors();
            key.iter().all(|s| full.contains(s))
        })
        .count() as u64
}

/// Small random categorical table as CSV text: up to `max_rows` rows,
/// `attrs` attributes with up to `values` values each, optional missing cells.
pub fn random_csv(rng: &mut impl rand::Rng, max_rows: usize, max_attrs: usize, max_values: usize) -> String {
    let rows = rng.gen_range(1..=max_rows);
    let attrs = rng.gen_range(1..=max_attrs);
    let mut out = String::new();
    for a in 0..attrs {
        out.push_str(&format!("A{a},"));
    }
    out.push_str("C\n");
    let classes = rng.gen_range(1..=3);
    for _ in 0..rows {
        for _ in 0..attrs {
            if rng.gen_bool(0.1) {
                out.push('?');
            } else {
                out.push_str(&format!("v{}", rng.gen_range(0..max_values)));
            }
            out.push(',');
        }
        out.push_str(&format!("c{}\n", rng.gen_range(0..classes)));
    }
    out
}

pub fn encode_csv(text: &str) -> EncodedDataset {
    let table = load_table(text.as_bytes(), &LoadOptions::default()).unwrap();
    let dict = build_selector_dictionary(&table).unwrap();
    encode_examples(&table, &dict).unwrap()
}

/// Every valid selector-set (ascending, one selector per attribute) up to `max_len`.
pub fn all_keys(dict: &SelectorDictionary, max_len: usize) -> Vec<Vec<SelectorId>> {
    let ids: Vec<SelectorId> = dict.selectors().iter().map(|s| s.id).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<SelectorId>, usize)> = vec![(Vec::new(), 0)];
    while let Some((key, start)) = stack.pop() {
        if !key.is_empty() {
            out.push(key.clone());
        }
        if key.len() == max_len {
            continue;
        }
        for (i, &s) in ids.iter().enumerate().skip(start) {
            if key.iter().any(|k| dict.attribute_of(*k) == dict.attribute_of(s)) {
                continue;
            }
            let mut next = key.clone();
            next.push(s);
            stack.push((next, i + 1));
        }
    }
    out
}
