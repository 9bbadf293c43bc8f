//! The most-common-value baseline and the three rule-based imputation
//! variants.
//!
//! All imputers read a frozen sentinel-coded snapshot and write fills into a
//! separate copy, so freshly imputed values never feed later rule matches and
//! the outcome is independent of cell processing order.
//!
//! * variant 1: first matching rule fills the cell; no match leaves it coded.
//! * variant 2: like variant 1, but unmatched cells fall back to the
//!   attribute's most common value.
//! * variant 3: like variant 2, but a rule is suitable only if its confidence
//!   is not lower than the attribute's zero-attribute-rule confidence (the
//!   modal count over all rows of the coded snapshot); ties go to the rule.

use std::fs;
use std::path::Path;

use crate::dataset::{encode_missing, CellValue, Dataset, McvTable};
use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::rulemine::{rule_matches, RuleList};

/// Which imputation algorithm variant to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    V1,
    V2,
    V3,
}

impl Variant {
    pub fn number(self) -> u8 {
        match self {
            Variant::V1 => 1,
            Variant::V2 => 2,
            Variant::V3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Variant::V1),
            2 => Ok(Variant::V2),
            3 => Ok(Variant::V3),
            other => Err(Error::InvalidArgument(format!(
                "variant must be 1, 2 or 3 (got {other})"
            ))),
        }
    }
}

/// Variant selection plus the minimum support used when mining internally.
#[derive(Clone, Copy, Debug)]
pub struct VariantConfig {
    pub variant: Variant,
    pub min_support_count: u64,
}

impl Default for VariantConfig {
    fn default() -> Self {
        VariantConfig {
            variant: Variant::V3,
            min_support_count: 1,
        }
    }
}

/// Where a filled value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillSource {
    /// Index into the rule list of the suitable rule.
    Rule(usize),
    /// Most common value fallback.
    Mcv,
    /// No suitable rule (variant 1 only); the cell keeps the sentinel.
    Unfilled,
}

/// One imputation target cell: its position, the token finally stored there
/// (the sentinel when unfilled), and the source of that token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilledCell {
    pub row: usize,
    pub attr: usize,
    pub value: String,
    pub source: FillSource,
}

/// A filled copy of the input plus per-cell provenance, in row-major cell
/// order. The cells listed are exactly the sentinel-coded cells of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImputationOutcome {
    pub filled: Dataset,
    pub cells: Vec<FilledCell>,
}

impl ImputationOutcome {
    pub fn unfilled_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.source == FillSource::Unfilled)
            .count()
    }
}

/// Scans the rule list in order and returns the index and consequent value of
/// the first rule that matches the row on `target_attr` and, when a threshold
/// is given, has confidence ≥ threshold.
///
/// The list is confidence-descending, so the scan stops early once
/// confidences drop below the threshold.
pub fn find_suitable_rule<'r>(
    row: &[CellValue],
    target_attr: usize,
    rules: &'r RuleList,
    threshold: Option<Ratio>,
) -> Option<(usize, &'r str)> {
    for (index, rule) in rules.iter().enumerate() {
        if let Some(t) = threshold {
            if rule.confidence() < t {
                return None;
            }
        }
        if rule_matches(rule, row, target_attr) {
            return Some((index, rule.consequent().value.as_str()));
        }
    }
    None
}

fn sentinel_positions(ds: &Dataset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..ds.n_rows() {
        for a in 0..ds.n_attrs() {
            if ds.is_sentinel_cell(r, a) {
                out.push((r, a));
            }
        }
    }
    out
}

/// Per-attribute rule indices, preserving list order, so each cell only scans
/// rules that target its attribute. Semantically identical to scanning the
/// whole list.
fn rules_by_attr(rules: &RuleList, n_attrs: usize) -> Vec<Vec<usize>> {
    let mut by_attr = vec![Vec::new(); n_attrs];
    for (i, rule) in rules.iter().enumerate() {
        if rule.consequent().attr < n_attrs {
            by_attr[rule.consequent().attr].push(i);
        }
    }
    by_attr
}

fn run(
    ds: &Dataset,
    rules: &RuleList,
    mcv: Option<&McvTable>,
    use_threshold: bool,
) -> ImputationOutcome {
    let snapshot = encode_missing(ds);
    let by_attr = rules_by_attr(rules, snapshot.n_attrs());
    let mut filled_rows = snapshot.rows().to_vec();
    let mut cells = Vec::new();
    for (r, a) in sentinel_positions(&snapshot) {
        let row = snapshot.row(r);
        let threshold = match (use_threshold, mcv) {
            (true, Some(table)) => Some(table.entry(a).zero_rule_confidence()),
            _ => None,
        };
        let mut hit: Option<(usize, &str)> = None;
        for &index in &by_attr[a] {
            let rule = &rules.rules()[index];
            if let Some(t) = threshold {
                if rule.confidence() < t {
                    break; // confidence-descending order: no later rule passes
                }
            }
            if rule_matches(rule, row, a) {
                hit = Some((index, rule.consequent().value.as_str()));
                break;
            }
        }
        let (value, source) = match (hit, mcv) {
            (Some((index, value)), _) => (value.to_string(), FillSource::Rule(index)),
            (None, Some(table)) => (table.entry(a).value.clone(), FillSource::Mcv),
            (None, None) => (snapshot.sentinel().to_string(), FillSource::Unfilled),
        };
        filled_rows[r][a] = CellValue::Observed(value.clone());
        cells.push(FilledCell {
            row: r,
            attr: a,
            value,
            source,
        });
    }
    let filled = Dataset::from_cells_coded(
        snapshot.schema().names().to_vec(),
        filled_rows,
        snapshot.sentinel().to_string(),
    )
    .expect("filled rows keep the snapshot's shape");
    ImputationOutcome { filled, cells }
}

/// Fills every missing or sentinel-coded cell with the attribute's most
/// common value.
pub fn impute_mcv(ds: &Dataset) -> Result<ImputationOutcome> {
    let coded = encode_missing(ds);
    let mcv = crate::dataset::mcv_table(&coded)?;
    Ok(run(&coded, &RuleList::default(), Some(&mcv), false))
}

/// Variant 1: the first matching rule fills the cell; cells with no matching
/// rule stay sentinel-coded (source [`FillSource::Unfilled`]).
pub fn impute_v1(ds: &Dataset, rules: &RuleList) -> ImputationOutcome {
    run(ds, rules, None, false)
}

/// Variant 2: variant 1 wherever a rule matches, most common value for the
/// rest. Never leaves a cell unfilled.
pub fn impute_v2(ds: &Dataset, rules: &RuleList, mcv: &McvTable) -> ImputationOutcome {
    run(ds, rules, Some(mcv), false)
}

/// Variant 3: like variant 2, but a matching rule is suitable only if its
/// confidence is not lower than the attribute's zero-attribute-rule
/// confidence. Equality goes to the rule.
pub fn impute_v3(ds: &Dataset, rules: &RuleList, mcv: &McvTable) -> ImputationOutcome {
    run(ds, rules, Some(mcv), true)
}

/// Dispatches on the configured variant.
pub fn impute_with(
    ds: &Dataset,
    rules: &RuleList,
    mcv: &McvTable,
    variant: Variant,
) -> ImputationOutcome {
    match variant {
        Variant::V1 => impute_v1(ds, rules),
        Variant::V2 => impute_v2(ds, rules, mcv),
        Variant::V3 => impute_v3(ds, rules, mcv),
    }
}

/// Writes the provenance sidecar: one `row,attr,value,source` line per filled
/// cell, after a header.
pub fn write_provenance(outcome: &ImputationOutcome, path: impl AsRef<Path>) -> Result<()> {
    let mut text = String::from("row,attr,value,source\n");
    for cell in &outcome.cells {
        let source = match cell.source {
            FillSource::Rule(i) => format!("rule:{i}"),
            FillSource::Mcv => "mcv".to_string(),
            FillSource::Unfilled => "unfilled".to_string(),
        };
        text.push_str(&format!(
            "{},{},{},{}\n",
            cell.row, cell.attr, cell.value, source
        ));
    }
    let path = path.as_ref();
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
