//! Line-oriented, tab-separated model files.
//!
//! ```text
//! LORDMODEL  1
//! cut  <column index>  <column name>  <threshold>...
//! attribute  <name>  <value>...          (predictive attributes, then the class)
//! examples  <count>
//! selector  <id>  <attribute>  <value>  <frequency>
//! rule  <head>  <p>  <n>  <h>  <body id>...
//! default  <head>  <p>  <n>  <h>
//! config  <key>  <value>
//! end
//! ```
//!
//! Fields are separated by single tabs. Text fields escape backslash, tab, newline and carriage return.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::dataset::{Attribute, CutPoints, SelectorDictionary, SelectorId};
use crate::error::{Error, Result};
use crate::heuristic::{m_estimate, Rule};
use crate::learner::{LearnerConfig, Model, Variant};

pub const MAGIC: &str = "LORDMODEL";
pub const VERSION: &str = "1";
pub const FILE_EXTENSION: &str = "lord";

const H_TOLERANCE: f64 = 1e-12;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(Error::ModelFormat {
                    line,
                    message: format!("bad escape sequence `\\{}`", other.map(String::from).unwrap_or_default()),
                })
            }
        }
    }
    Ok(out)
}

fn write_rule(out: &mut String, tag: &str, r: &Rule) {
    let _ = write!(out, "{tag}\t{}\t{}\t{}\t{}", r.head, r.p, r.n, r.h);
    for s in &r.body {
        let _ = write!(out, "\t{s}");
    }
    out.push('\n');
}

/// Model as file text.
pub fn model_to_string(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}\t{VERSION}");
    for cut in &model.cuts {
        let _ = write!(out, "cut\t{}\t{}", cut.column_index, escape(&cut.column_name));
        for t in &cut.thresholds {
            let _ = write!(out, "\t{t}");
        }
        out.push('\n');
    }
    let dict = &model.dictionary;
    for attr in dict.attributes() {
        out.push_str("attribute\t");
        out.push_str(&escape(&attr.name));
        for v in &attr.values {
            out.push('\t');
            out.push_str(&escape(v));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "examples\t{}", dict.example_count());
    for s in dict.selectors() {
        let _ = writeln!(out, "selector\t{}\t{}\t{}\t{}", s.id, s.attribute, s.value, s.frequency);
    }
    for r in &model.rules {
        write_rule(&mut out, "rule", r);
    }
    write_rule(&mut out, "default", &model.default_rule);
    let cfg = &model.config;
    let _ = writeln!(out, "config\tm\t{}", cfg.m);
    let _ = writeln!(out, "config\tvariant\t{}", cfg.variant);
    match cfg.max_rule_length {
        Some(k) => {
            let _ = writeln!(out, "config\tmax_rule_length\t{k}");
        }
        None => out.push_str("config\tmax_rule_length\tnone\n"),
    }
    let _ = writeln!(out, "config\tlearned_rules\t{}", model.learned_rule_count);
    out.push_str("end\n");
    out
}

/// Write the model; returns the number of bytes written.
pub fn save_model<W: Write>(model: &Model, mut sink: W) -> Result<usize> {
    let text = model_to_string(model);
    sink.write_all(text.as_bytes())?;
    sink.flush()?;
    Ok(text.len())
}

struct Fields<'a> {
    line: usize,
    parts: std::str::Split<'a, char>,
}

impl<'a> Fields<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::ModelFormat { line: self.line, message: message.into() }
    }

    fn text(&mut self, what: &str) -> Result<&'a str> {
        self.parts.next().ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let raw = self.text(what)?;
        raw.parse().map_err(|_| self.err(format!("invalid {what} `{raw}`")))
    }

    fn rest<T: std::str::FromStr>(&mut self, what: &str) -> Result<Vec<T>> {
        let line = self.line;
        self.parts
            .by_ref()
            .map(|raw| {
                raw.parse().map_err(|_| Error::ModelFormat {
                    line,
                    message: format!("invalid {what} `{raw}`"),
                })
            })
            .collect()
    }

    fn finish(&mut self) -> Result<()> {
        match self.parts.next() {
            None => Ok(()),
            Some(extra) => Err(self.err(format!("unexpected field `{extra}`"))),
        }
    }
}

fn read_rule(f: &mut Fields<'_>) -> Result<(Rule, usize)> {
    let head = SelectorId(f.parse("head")?);
    let p = f.parse("p")?;
    let n = f.parse("n")?;
    let h = f.parse("h")?;
    let body = f.rest::<u32>("body selector")?.into_iter().map(SelectorId).collect();
    Ok((Rule { body, head, p, n, h }, f.line))
}

fn check_rule(rule: &Rule, line: usize, dict: &SelectorDictionary, m: f64) -> Result<()> {
    let integrity = |msg: String| Error::Integrity(format!("line {line}: {msg}"));
    let known = |s: SelectorId| s.index() < dict.len();
    if !known(rule.head) || !dict.is_class(rule.head) {
        return Err(integrity(format!("head {} is not a class selector", rule.head)));
    }
    for &s in &rule.body {
        if !known(s) || dict.is_class(s) {
            return Err(integrity(format!("body selector {s} is not a predictive selector")));
        }
    }
    if rule.body.windows(2).any(|w| w[0] >= w[1]) {
        return Err(integrity("body selectors are not strictly ascending".into()));
    }
    let mut attrs: Vec<usize> = rule.body.iter().map(|&s| dict.attribute_of(s)).collect();
    attrs.sort_unstable();
    if attrs.windows(2).any(|w| w[0] == w[1]) {
        return Err(integrity("body uses an attribute twice".into()));
    }
    let total = dict.example_count();
    let pos = dict.class_frequency(rule.head);
    if rule.p > pos || rule.n > total - pos {
        return Err(integrity("counts exceed class totals".into()));
    }
    let h = m_estimate(rule.p, rule.n, pos, total - pos, m);
    if (h - rule.h).abs() > H_TOLERANCE {
        return Err(integrity(format!("stored h {} does not match recomputed {h}", rule.h)));
    }
    Ok(())
}

/// Parse model text and rebuild the index.
pub fn model_from_str(text: &str) -> Result<Model> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or(Error::ModelFormat { line: 1, message: "empty model file".into() })?;
    let mut head_fields = header.split('\t');
    if head_fields.next() != Some(MAGIC) {
        return Err(Error::ModelFormat { line: 1, message: "not a model file".into() });
    }
    match head_fields.next() {
        Some(VERSION) => {}
        other => return Err(Error::Version(other.unwrap_or("").to_string())),
    }

    let mut cuts = Vec::new();
    let mut attributes = Vec::new();
    let mut example_count: Option<u64> = None;
    let mut selectors = Vec::new();
    let mut rules = Vec::new();
    let mut default = None;
    let mut m = None;
    let mut variant = None;
    let mut max_rule_length = None;
    let mut learned = 0usize;
    let mut ended = false;
    let mut last_line = 1;

    for (line, raw) in lines {
        last_line = line;
        if ended {
            return Err(Error::ModelFormat { line, message: "content after `end`".into() });
        }
        let mut f = Fields { line, parts: raw.split('\t') };
        match f.text("record tag")? {
            "cut" => {
                let column_index = f.parse("column index")?;
                let column_name = unescape(f.text("column name")?, line)?;
                let thresholds: Vec<f64> = f.rest("threshold")?;
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(f.err("thresholds are not strictly increasing"));
                }
                cuts.push(CutPoints { column_index, column_name, thresholds });
            }
            "attribute" => {
                let name = unescape(f.text("attribute name")?, line)?;
                let values = f
                    .parts
                    .by_ref()
                    .map(|v| unescape(v, line))
                    .collect::<Result<Vec<_>>>()?;
                attributes.push(Attribute { name, values });
            }
            "examples" => {
                example_count = Some(f.parse("example count")?);
                f.finish()?;
            }
            "selector" => {
                let id: usize = f.parse("selector id")?;
                if id != selectors.len() {
                    return Err(f.err(format!("selector id {id} out of sequence")));
                }
                let attr = f.parse("attribute index")?;
                let value = f.parse("value index")?;
                let freq = f.parse("frequency")?;
                f.finish()?;
                selectors.push((attr, value, freq));
            }
            "rule" => rules.push(read_rule(&mut f)?),
            "default" => {
                if default.is_some() {
                    return Err(f.err("second default rule"));
                }
                let (r, l) = read_rule(&mut f)?;
                if !r.body.is_empty() {
                    return Err(f.err("default rule must have an empty body"));
                }
                default = Some((r, l));
            }
            "config" => {
                let key = f.text("config key")?;
                let value = f.text("config value")?;
                match key {
                    "m" => m = Some(value.parse::<f64>().map_err(|_| f.err("invalid m"))?),
                    "variant" => {
                        variant = Some(value.parse::<Variant>().map_err(|e| f.err(e.to_string()))?)
                    }
                    "max_rule_length" => {
                        max_rule_length = match value {
                            "none" => None,
                            v => Some(v.parse().map_err(|_| f.err("invalid max rule length"))?),
                        }
                    }
                    "learned_rules" => {
                        learned = value.parse().map_err(|_| f.err("invalid learned rule count"))?
                    }
                    other => return Err(f.err(format!("unknown config key `{other}`"))),
                }
                f.finish()?;
            }
            "end" => {
                f.finish()?;
                ended = true;
            }
            other => return Err(f.err(format!("unknown record `{other}`"))),
        }
    }

    let missing = |what: &str| Error::ModelFormat {
        line: last_line,
        message: format!("truncated model file: missing {what}"),
    };
    if !ended {
        return Err(missing("`end` record"));
    }
    let example_count = example_count.ok_or_else(|| missing("example count"))?;
    let (default, default_line) = default.ok_or_else(|| missing("default rule"))?;
    let m = m.ok_or_else(|| missing("m"))?;
    let variant = variant.ok_or_else(|| missing("variant"))?;

    let dictionary = SelectorDictionary::from_parts(attributes, selectors, example_count)?;
    for (r, line) in &rules {
        check_rule(r, *line, &dictionary, m)?;
    }
    check_rule(&default, default_line, &dictionary, m)?;

    let config = LearnerConfig { m, variant, max_rule_length, worker_count: 1 };
    config.validate()?;
    Model::new(
        cuts,
        dictionary,
        rules.into_iter().map(|(r, _)| r).collect(),
        default,
        config,
        learned,
    )
}

pub fn load_model<R: Read>(mut source: R) -> Result<Model> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| {
        if e.kind() == std::io::ErrorKind::InvalidData {
            Error::ModelFormat { line: 0, message: "model file is not valid UTF-8".into() }
        } else {
            Error::Io(e)
        }
    })?;
    model_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        for s in ["plain", "a\tb", "line\nbreak", "back\\slash", "\\t literal", ""] {
            assert_eq!(unescape(&escape(s), 1).unwrap(), s);
        }
        assert!(unescape("bad\\x", 3).is_err());
    }

    #[test]
    fn rejects_other_versions() {
        assert!(matches!(model_from_str("LORDMODEL\t2\n"), Err(Error::Version(v)) if v == "2"));
        assert!(matches!(model_from_str("hello\n"), Err(Error::ModelFormat { line: 1, .. })));
        assert!(matches!(model_from_str(""), Err(Error::ModelFormat { .. })));
    }
}
