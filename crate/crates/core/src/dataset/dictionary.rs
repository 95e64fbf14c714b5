use std::collections::HashMap;
use std::fmt;

use crate::dataset::table::{ColumnKind, RawTable};
use crate::error::{Error, Result};

/// Position of a selector in the global order: predictive selectors by
/// ascending frequency, then class selectors by ascending frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelectorId(pub u32);

impl SelectorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SelectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorGroup {
    Predictive,
    Class,
}

/// One `attribute = value` condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    pub id: SelectorId,
    pub attribute: usize,
    pub value: usize,
    pub frequency: u64,
    pub group: SelectorGroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    /// Distinct values in byte order; a selector's `value` indexes this list.
    pub values: Vec<String>,
}

/// All selectors of a training table together with the global order.
///
/// Attributes are stored predictive-first in column order with the class
/// attribute last, so `(attribute, value)` ordering breaks frequency ties.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorDictionary {
    attributes: Vec<Attribute>,
    selectors: Vec<Selector>,
    lookup: HashMap<(usize, usize), SelectorId>,
    value_lookup: Vec<HashMap<String, usize>>,
    predictive_count: usize,
    example_count: u64,
}

impl SelectorDictionary {
    /// Assemble a dictionary from attributes and per-selector
    /// `(attribute, value, frequency)` triples given in id order.
    pub fn from_parts(
        attributes: Vec<Attribute>,
        selectors: Vec<(usize, usize, u64)>,
        example_count: u64,
    ) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::Integrity("dictionary has no attributes".into()));
        }
        let class_attribute = attributes.len() - 1;
        let mut lookup = HashMap::new();
        let mut built = Vec::with_capacity(selectors.len());
        let mut predictive_count = 0;
        for (i, (attribute, value, frequency)) in selectors.into_iter().enumerate() {
            if attribute >= attributes.len() || value >= attributes[attribute].values.len() {
                return Err(Error::Integrity(format!(
                    "selector {i} refers to unknown attribute/value ({attribute}, {value})"
                )));
            }
            let group = if attribute == class_attribute {
                SelectorGroup::Class
            } else {
                if predictive_count != i {
                    return Err(Error::Integrity(
                        "predictive selectors must precede class selectors".into(),
                    ));
                }
                predictive_count += 1;
                SelectorGroup::Predictive
            };
            let id = SelectorId(i as u32);
            if lookup.insert((attribute, value), id).is_some() {
                return Err(Error::Integrity(format!(
                    "duplicate selector for ({attribute}, {value})"
                )));
            }
            built.push(Selector { id, attribute, value, frequency, group });
        }
        let value_lookup = attributes
            .iter()
            .map(|a| a.values.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect())
            .collect();
        Ok(SelectorDictionary {
            attributes,
            selectors: built,
            lookup,
            value_lookup,
            predictive_count,
            example_count,
        })
    }

    pub fn len(&self) -> usize {
        self.selectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selectors.is_empty()
    }

    pub fn selectors(&self) -> &[Selector] {
        &self.selectors
    }

    pub fn selector(&self, id: SelectorId) -> &Selector {
        &self.selectors[id.index()]
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn class_attribute(&self) -> &Attribute {
        self.attributes.last().expect("dictionary has a class attribute")
    }

    pub fn predictive_attributes(&self) -> &[Attribute] {
        &self.attributes[..self.attributes.len() - 1]
    }

    pub fn example_count(&self) -> u64 {
        self.example_count
    }

    pub fn predictive_selector_count(&self) -> usize {
        self.predictive_count
    }

    pub fn class_selector_ids(&self) -> impl Iterator<Item = SelectorId> + '_ {
        (self.predictive_count..self.selectors.len()).map(|i| SelectorId(i as u32))
    }

    pub fn is_class(&self, id: SelectorId) -> bool {
        id.index() >= self.predictive_count
    }

    pub fn attribute_of(&self, id: SelectorId) -> usize {
        self.selectors[id.index()].attribute
    }

    pub fn get(&self, attribute: usize, value: usize) -> Option<SelectorId> {
        self.lookup.get(&(attribute, value)).copied()
    }

    /// Selector for an attribute given the value's text.
    pub fn find(&self, attribute: usize, value: &str) -> Option<SelectorId> {
        let v = *self.value_lookup.get(attribute)?.get(value)?;
        self.get(attribute, v)
    }

    pub fn value_label(&self, id: SelectorId) -> &str {
        let s = self.selector(id);
        &self.attributes[s.attribute].values[s.value]
    }

    /// `attribute=value` form of a selector.
    pub fn describe(&self, id: SelectorId) -> String {
        let s = self.selector(id);
        format!("{}={}", self.attributes[s.attribute].name, self.value_label(id))
    }

    /// Training positives `P` for a class selector.
    pub fn class_frequency(&self, class: SelectorId) -> u64 {
        self.selector(class).frequency
    }

    /// Majority class of the training set. Ties go to the class that comes
    /// last in the global order.
    pub fn majority_class(&self) -> SelectorId {
        self.class_selector_ids()
            .max_by_key(|&c| (self.class_frequency(c), c))
            .expect("at least one class selector")
    }
}

/// One example as an ordered selector set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedExample {
    /// Predictive selector ids, strictly ascending, at most one per attribute.
    pub body: Vec<SelectorId>,
    /// Absent for unlabeled rows and for class values the dictionary lacks.
    pub class: Option<SelectorId>,
}

impl EncodedExample {
    /// Class selector of a training example.
    pub fn head(&self) -> SelectorId {
        self.class.expect("training examples carry a class selector")
    }

    /// Body followed by the class selector; ascending by construction.
    pub fn full_selectors(&self) -> Vec<SelectorId> {
        let mut v = self.body.clone();
        v.extend(self.class);
        v
    }
}

#[derive(Debug, Clone)]
pub struct EncodedDataset {
    pub examples: Vec<EncodedExample>,
    pub dictionary: SelectorDictionary,
}

/// Count every distinct selector and assign ids in the global order.
pub fn build_selector_dictionary(table: &RawTable) -> Result<SelectorDictionary> {
    let class_index = table.require_class_index()?;
    if table.column_kinds.contains(&ColumnKind::Numeric) {
        return Err(Error::usage(
            "numeric columns must be discretized before building selectors",
        ));
    }
    if table.rows.is_empty() {
        return Err(Error::data("cannot build selectors from an empty table"));
    }

    let mut columns = table.predictive_columns();
    columns.push(class_index);

    let mut attributes = Vec::with_capacity(columns.len());
    let mut counts: Vec<(usize, usize, u64)> = Vec::new();
    for (attr, &col) in columns.iter().enumerate() {
        let mut freq: HashMap<String, u64> = HashMap::new();
        for row in &table.rows {
            if let Some(label) = row[col].label() {
                *freq.entry(label).or_insert(0) += 1;
            }
        }
        let mut values: Vec<String> = freq.keys().cloned().collect();
        values.sort();
        for (v, label) in values.iter().enumerate() {
            counts.push((attr, v, freq[label]));
        }
        attributes.push(Attribute { name: table.column_names[col].clone(), values });
    }

    let class_attr = attributes.len() - 1;
    let (mut predictive, mut class): (Vec<_>, Vec<_>) =
        counts.into_iter().partition(|&(a, _, _)| a != class_attr);
    let order = |x: &(usize, usize, u64)| (x.2, x.0, x.1);
    predictive.sort_by_key(order);
    class.sort_by_key(order);
    predictive.extend(class);

    SelectorDictionary::from_parts(attributes, predictive, table.rows.len() as u64)
}

/// Map table columns onto dictionary attributes by name.
fn column_map(table: &RawTable, dict: &SelectorDictionary) -> Vec<Option<usize>> {
    dict.attributes()
        .iter()
        .map(|attr| table.column_index(&attr.name))
        .collect()
}

fn encode_row(
    row: &[crate::dataset::table::Cell],
    columns: &[Option<usize>],
    dict: &SelectorDictionary,
) -> EncodedExample {
    let class_attr = columns.len() - 1;
    let mut body: Vec<SelectorId> = columns[..class_attr]
        .iter()
        .enumerate()
        .filter_map(|(a, col)| {
            let label = row[(*col)?].label()?;
            dict.find(a, &label)
        })
        .collect();
    body.sort_unstable();
    let class = columns[class_attr]
        .and_then(|c| row[c].label())
        .and_then(|label| dict.find(class_attr, &label));
    EncodedExample { body, class }
}

/// Encode the training table the dictionary was built from.
pub fn encode_examples(table: &RawTable, dict: &SelectorDictionary) -> Result<EncodedDataset> {
    table.require_class_index()?;
    let columns = column_map(table, dict);
    let mut examples = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        let ex = encode_row(row, &columns, dict);
        if ex.class.is_none() {
            return Err(Error::internal(format!(
                "training row {} has a class value unknown to the dictionary",
                i + 1
            )));
        }
        examples.push(ex);
    }
    Ok(EncodedDataset { examples, dictionary: dict.clone() })
}

/// Encode rows of unseen data. Cells whose value is not in the dictionary,
/// missing cells, and columns the dictionary does not know are dropped.
pub fn encode_instances(table: &RawTable, dict: &SelectorDictionary) -> Vec<EncodedExample> {
    let columns = column_map(table, dict);
    table.rows.iter().map(|row| encode_row(row, &columns, dict)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::table::{load_table, LoadOptions};
    use crate::fixtures::RUNNING_EXAMPLE_CSV;

    fn running() -> RawTable {
        load_table(RUNNING_EXAMPLE_CSV.as_bytes(), &LoadOptions::default()).unwrap()
    }

    fn names(dict: &SelectorDictionary) -> Vec<String> {
        dict.selectors().iter().map(|s| dict.describe(s.id)).collect()
    }

    #[test]
    fn running_example_order() {
        let dict = build_selector_dictionary(&running()).unwrap();
        assert_eq!(
            names(&dict),
            [
                "A3=a1", "A3=a3", "A1=a2", "A2=a1", "A3=a2", "A1=a1", "A2=a2", "C=c3", "C=c1",
                "C=c2"
            ]
        );
        let freqs: Vec<u64> = dict.selectors().iter().map(|s| s.frequency).collect();
        assert_eq!(freqs, [1, 2, 3, 3, 3, 5, 5, 2, 3, 3]);
        assert_eq!(dict.predictive_selector_count(), 7);
        assert_eq!(dict.example_count(), 8);
    }

    #[test]
    fn single_row_table() {
        let t = load_table("a,class\nx,p\n".as_bytes(), &LoadOptions::default()).unwrap();
        let dict = build_selector_dictionary(&t).unwrap();
        assert_eq!(dict.len(), 2);
        assert_eq!(dict.selector(SelectorId(0)).group, SelectorGroup::Predictive);
        assert_eq!(dict.selector(SelectorId(1)).group, SelectorGroup::Class);
    }

    #[test]
    fn empty_table_rejected() {
        let t = load_table("a,class\n".as_bytes(), &LoadOptions::default()).unwrap();
        assert!(build_selector_dictionary(&t).is_err());
    }

    #[test]
    fn running_example_rows() {
        let t = running();
        let dict = build_selector_dictionary(&t).unwrap();
        let data = encode_examples(&t, &dict).unwrap();
        let show = |ex: &EncodedExample| -> Vec<String> {
            ex.full_selectors().iter().map(|&s| dict.describe(s)).collect()
        };
        assert_eq!(show(&data.examples[0]), ["A3=a1", "A2=a1", "A1=a1", "C=c1"]);
        assert_eq!(show(&data.examples[1]), ["A2=a1", "A1=a1", "C=c1"]);
        assert_eq!(show(&data.examples[3]), ["A3=a3", "A1=a1", "A2=a2", "C=c3"]);
    }

    #[test]
    fn unseen_values_are_dropped() {
        let dict = build_selector_dictionary(&running()).unwrap();
        let test = load_table("A1,A2,A3,C\nzz,zz,zz,c9\n".as_bytes(), &LoadOptions::default())
            .unwrap();
        let enc = encode_instances(&test, &dict);
        assert!(enc[0].body.is_empty());
        assert_eq!(enc[0].class, None);
    }

    #[test]
    fn majority_tie_goes_last_in_order() {
        let dict = build_selector_dictionary(&running()).unwrap();
        assert_eq!(dict.describe(dict.majority_class()), "C=c2");
    }
}
