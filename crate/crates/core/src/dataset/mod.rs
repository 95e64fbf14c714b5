//! Tabular input, discretization and selector encoding.

pub mod dictionary;
pub mod discretize;
pub mod table;

pub use dictionary::{
    build_selector_dictionary, encode_examples, encode_instances, Attribute, EncodedDataset,
    EncodedExample, Selector, SelectorDictionary, SelectorGroup, SelectorId,
};
pub use discretize::{apply_discretizer, fit_all, fit_discretizer, CutPoints};
pub use table::{load_table, Cell, ColumnKind, LoadOptions, RawTable};
