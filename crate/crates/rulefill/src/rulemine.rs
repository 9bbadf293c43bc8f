//! Apriori frequent-itemset mining and single-consequent rule derivation
//! over sentinel-coded categorical tables.
//!
//! Every rule's support and confidence are exact row counts: confidence is
//! the ratio `support(antecedent ∪ consequent) / support(antecedent)` kept as
//! an unreduced [`Ratio`], and all comparisons cross-multiply integers. A
//! sentinel value ("MISSING") is an ordinary item on the antecedent side;
//! [`filter_rules`] drops rules whose consequent is the sentinel.
//!
//! Canonical rule serialization, one rule per line:
//!
//! ```text
//! attr=value & attr=value => attr=value<TAB>support=<int><TAB>confidence=<num>/<den>
//! ```
//!
//! with antecedent items ordered by attribute index. This line is also the
//! final tie-break key of [`sort_rules`].

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::dataset::{AttributeSchema, CellValue, Dataset};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// One `attribute = value` condition. The value may be the sentinel.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    pub attr: usize,
    pub value: String,
}

impl Item {
    pub fn new(attr: usize, value: impl Into<String>) -> Self {
        Item {
            attr,
            value: value.into(),
        }
    }
}

/// An association rule with a single-item consequent and exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociationRule {
    antecedent: Vec<Item>,
    consequent: Item,
    support_count: u64,
    antecedent_support: u64,
}

impl AssociationRule {
    /// Validates structure: antecedent sorted by attribute with no repeats,
    /// consequent attribute outside the antecedent, and
    /// `1 ≤ support ≤ antecedent support`.
    pub fn new(
        antecedent: Vec<Item>,
        consequent: Item,
        support_count: u64,
        antecedent_support: u64,
    ) -> Result<Self> {
        let sorted = antecedent.windows(2).all(|w| w[0].attr < w[1].attr);
        if !sorted {
            return Err(Error::InvalidArgument(
                "antecedent items must be strictly ordered by attribute".into(),
            ));
        }
        if antecedent.iter().any(|i| i.attr == consequent.attr) {
            return Err(Error::InvalidArgument(
                "consequent attribute may not appear in the antecedent".into(),
            ));
        }
        if support_count < 1 || support_count > antecedent_support {
            return Err(Error::InvalidArgument(format!(
                "support {support_count} out of range 1..={antecedent_support}"
            )));
        }
        Ok(AssociationRule {
            antecedent,
            consequent,
            support_count,
            antecedent_support,
        })
    }

    pub fn antecedent(&self) -> &[Item] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Item {
        &self.consequent
    }

    /// Rows containing antecedent and consequent together.
    pub fn support_count(&self) -> u64 {
        self.support_count
    }

    /// Rows containing the antecedent.
    pub fn antecedent_support(&self) -> u64 {
        self.antecedent_support
    }

    /// Exact confidence `support / antecedent_support`, unreduced.
    pub fn confidence(&self) -> Ratio {
        Ratio::new(self.support_count, self.antecedent_support)
    }
}

/// Rules in the deterministic total order of [`sort_rules`], duplicates
/// removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleList {
    rules: Vec<AssociationRule>,
}

impl RuleList {
    pub fn rules(&self) -> &[AssociationRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AssociationRule> {
        self.rules.iter()
    }

    pub fn get(&self, index: usize) -> Option<&AssociationRule> {
        self.rules.get(index)
    }
}

/// Interned view of a sentinel-coded dataset: per attribute the sorted value
/// vocabulary, and each row as one value id per attribute.
struct Interned {
    values: Vec<Vec<String>>,
    rows: Vec<Vec<u32>>,
}

fn intern(ds: &Dataset) -> Result<Interned> {
    let n_attrs = ds.n_attrs();
    let values: Vec<Vec<String>> = (0..n_attrs)
        .map(|a| ds.schema().domain(a).iter().cloned().collect())
        .collect();
    let lookup: Vec<HashMap<&str, u32>> = values
        .iter()
        .map(|vs| {
            vs.iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i as u32))
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(ds.n_rows());
    for row in ds.rows() {
        let mut interned = Vec::with_capacity(n_attrs);
        for (a, cell) in row.iter().enumerate() {
            match cell {
                CellValue::Observed(t) => interned.push(lookup[a][t.as_str()]),
                CellValue::Missing => {
                    return Err(Error::InvalidArgument(
                        "mine_rules requires a sentinel-coded dataset (apply encode_missing first)"
                            .into(),
                    ))
                }
            }
        }
        rows.push(interned);
    }
    Ok(Interned { values, rows })
}

/// An item during mining: (attribute index, value id within that attribute).
type Iid = (u32, u32);

fn contains(row: &[u32], items: &[Iid]) -> bool {
    items.iter().all(|&(a, v)| row[a as usize] == v)
}

/// A frequent itemset: items sorted by attribute (at most one per attribute)
/// and the exact number of rows containing all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itemset {
    pub items: Vec<Item>,
    pub support_count: u64,
}

struct MinedLevels {
    interned: Interned,
    /// `frequent[k]` holds the sorted frequent itemsets of size k+1.
    frequent: Vec<Vec<(Vec<Iid>, u64)>>,
    support: HashMap<Vec<Iid>, u64>,
}

/// Apriori level loop: frequent itemsets of sizes `1..=max_size`.
fn mine_levels(ds: &Dataset, min_support_count: u64, max_size: usize) -> Result<MinedLevels> {
    if min_support_count < 1 {
        return Err(Error::InvalidArgument(
            "min_support_count must be at least 1".into(),
        ));
    }
    let interned = intern(ds)?;
    if max_size == 0 || interned.rows.is_empty() {
        return Ok(MinedLevels {
            interned,
            frequent: Vec::new(),
            support: HashMap::new(),
        });
    }

    // Level 1: count every (attribute, value) item.
    let mut level: Vec<(Vec<Iid>, u64)> = {
        let mut counts: Vec<Vec<u64>> = interned
            .values
            .iter()
            .map(|vs| vec![0u64; vs.len()])
            .collect();
        for row in &interned.rows {
            for (a, &v) in row.iter().enumerate() {
                counts[a][v as usize] += 1;
            }
        }
        let mut singles = Vec::new();
        for (a, attr_counts) in counts.iter().enumerate() {
            for (v, &c) in attr_counts.iter().enumerate() {
                if c >= min_support_count {
                    singles.push((vec![(a as u32, v as u32)], c));
                }
            }
        }
        singles
    };

    let mut support: HashMap<Vec<Iid>, u64> =
        level.iter().map(|(is, c)| (is.clone(), *c)).collect();
    let mut frequent: Vec<Vec<(Vec<Iid>, u64)>> = vec![level.clone()];

    // Levels 2..=max_size: join, prune, count.
    for size in 2..=max_size {
        let prev = &level;
        let mut candidates: Vec<Vec<Iid>> = Vec::new();
        for i in 0..prev.len() {
            for j in i + 1..prev.len() {
                let (a, b) = (&prev[i].0, &prev[j].0);
                if a[..size - 2] != b[..size - 2] {
                    break; // sorted level: no later j shares the prefix
                }
                // Two values of one attribute never co-occur in a row.
                if a[size - 2].0 == b[size - 2].0 {
                    continue;
                }
                let mut cand = a.clone();
                cand.push(b[size - 2]);
                // Apriori prune: every (size-1)-subset must be frequent.
                // Dropping the last two items gives the parents a and b.
                let pruned = (0..size - 2).any(|skip| {
                    let subset: Vec<Iid> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(idx, _)| idx != skip)
                        .map(|(_, &it)| it)
                        .collect();
                    !support.contains_key(&subset)
                });
                if !pruned {
                    candidates.push(cand);
                }
            }
        }
        let mut next: Vec<(Vec<Iid>, u64)> = Vec::new();
        for cand in candidates {
            let count = interned
                .rows
                .iter()
                .filter(|row| contains(row, &cand))
                .count() as u64;
            if count >= min_support_count {
                next.push((cand, count));
            }
        }
        next.sort();
        if next.is_empty() {
            break;
        }
        for (items, count) in &next {
            support.insert(items.clone(), *count);
        }
        level = next;
        frequent.push(level.clone());
    }
    Ok(MinedLevels {
        interned,
        frequent,
        support,
    })
}

/// All frequent itemsets of sizes `1..=max_size` with exact support counts,
/// sorted by size then lexicographically. The dataset must be sentinel-coded.
pub fn frequent_itemsets(
    ds: &Dataset,
    min_support_count: u64,
    max_size: usize,
) -> Result<Vec<Itemset>> {
    let levels = mine_levels(ds, min_support_count, max_size)?;
    let mut out = Vec::new();
    for sized in &levels.frequent {
        for (items, count) in sized {
            out.push(Itemset {
                items: items
                    .iter()
                    .map(|&(a, v)| Item {
                        attr: a as usize,
                        value: levels.interned.values[a as usize][v as usize].clone(),
                    })
                    .collect(),
                support_count: *count,
            });
        }
    }
    Ok(out)
}

/// Mines every association rule with antecedent length in
/// `1..=max_antecedent_len`, a single-item consequent, and joint support at
/// least `min_support_count`, from the frequent itemsets of sizes
/// `2..=max_antecedent_len + 1`.
///
/// The dataset must be sentinel-coded (no structurally missing cells).
/// Consequents may still hold the sentinel here; [`filter_rules`] removes
/// them.
pub fn mine_rules(
    ds: &Dataset,
    min_support_count: u64,
    max_antecedent_len: usize,
) -> Result<Vec<AssociationRule>> {
    let cap = max_antecedent_len.min(ds.n_attrs().saturating_sub(1));
    let levels = if cap == 0 {
        mine_levels(ds, min_support_count, 0)?
    } else {
        mine_levels(ds, min_support_count, cap + 1)?
    };

    // Rule derivation: each frequent itemset of size k >= 2 yields k rules,
    // one per choice of consequent item. Every (k-1)-subset of a frequent
    // itemset is itself frequent, so the antecedent support lookup always
    // succeeds.
    let mut rules = Vec::new();
    for sized in levels.frequent.iter().skip(1) {
        for (items, count) in sized {
            for c in 0..items.len() {
                let antecedent_ids: Vec<Iid> = items
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| idx != c)
                    .map(|(_, &it)| it)
                    .collect();
                let antecedent_support = levels.support[&antecedent_ids];
                let to_item = |&(a, v): &Iid| Item {
                    attr: a as usize,
                    value: levels.interned.values[a as usize][v as usize].clone(),
                };
                rules.push(AssociationRule {
                    antecedent: antecedent_ids.iter().map(to_item).collect(),
                    consequent: to_item(&items[c]),
                    support_count: *count,
                    antecedent_support,
                });
            }
        }
    }
    Ok(rules)
}

/// Keeps rules with `support_count ≥ min_support_count` whose consequent is
/// not the sentinel. Sentinel items in antecedents stay. Idempotent.
pub fn filter_rules(
    rules: Vec<AssociationRule>,
    min_support_count: u64,
    sentinel: &str,
) -> Vec<AssociationRule> {
    rules
        .into_iter()
        .filter(|r| r.support_count >= min_support_count && r.consequent.value != sentinel)
        .collect()
}

/// Renders the canonical one-line serialization of a rule.
pub fn rule_to_line(rule: &AssociationRule, schema: &AttributeSchema) -> String {
    let mut line = String::new();
    for (i, item) in rule.antecedent.iter().enumerate() {
        if i > 0 {
            line.push_str(" & ");
        }
        line.push_str(schema.name(item.attr));
        line.push('=');
        line.push_str(&item.value);
    }
    line.push_str(" => ");
    line.push_str(schema.name(rule.consequent.attr));
    line.push('=');
    line.push_str(&rule.consequent.value);
    line.push_str(&format!(
        "\tsupport={}\tconfidence={}",
        rule.support_count,
        rule.confidence()
    ));
    line
}

/// Sorts rules into the deterministic total order: confidence descending
/// (exact rational comparison), then support descending, then antecedent
/// length ascending, then lexicographically on the canonical serialization.
/// Duplicate (antecedent, consequent) pairs keep only their first occurrence.
pub fn sort_rules(rules: Vec<AssociationRule>, schema: &AttributeSchema) -> RuleList {
    let mut decorated: Vec<(AssociationRule, String)> = rules
        .into_iter()
        .map(|r| {
            let line = rule_to_line(&r, schema);
            (r, line)
        })
        .collect();
    decorated.sort_by(|(ra, la), (rb, lb)| {
        rb.confidence()
            .cmp(&ra.confidence())
            .then(rb.support_count.cmp(&ra.support_count))
            .then(ra.antecedent.len().cmp(&rb.antecedent.len()))
            .then(la.cmp(lb))
    });
    let mut seen: std::collections::HashSet<(Vec<Item>, Item)> = Default::default();
    let mut out = Vec::with_capacity(decorated.len());
    for (rule, _) in decorated {
        if seen.insert((rule.antecedent.clone(), rule.consequent.clone())) {
            out.push(rule);
        }
    }
    RuleList { rules: out }
}

/// True iff the rule's consequent targets `target_attr` and every antecedent
/// item matches the row. Subset match: attributes outside the antecedent are
/// unconstrained. The row must be sentinel-coded; a structurally missing cell
/// matches nothing.
pub fn rule_matches(rule: &AssociationRule, row: &[CellValue], target_attr: usize) -> bool {
    if rule.consequent.attr != target_attr {
        return false;
    }
    rule.antecedent
        .iter()
        .all(|item| row[item.attr].as_observed() == Some(item.value.as_str()))
}

/// `mine_rules` then `filter_rules` then `sort_rules`: the standard pipeline
/// producing the rule list the imputers consume.
pub fn mine_sorted_rules(
    ds: &Dataset,
    min_support_count: u64,
    max_antecedent_len: usize,
) -> Result<RuleList> {
    let mined = mine_rules(ds, min_support_count, max_antecedent_len)?;
    let filtered = filter_rules(mined, min_support_count, ds.sentinel());
    Ok(sort_rules(filtered, ds.schema()))
}

/// Renders a rule list in the canonical format, one rule per line.
pub fn rules_to_text(rules: &RuleList, schema: &AttributeSchema) -> String {
    let mut out = String::new();
    for rule in rules.iter() {
        out.push_str(&rule_to_line(rule, schema));
        out.push('\n');
    }
    out
}

/// Parses canonical rule lines against a schema. Values must belong to the
/// attribute's domain extended by the sentinel; the stated confidence must
/// match the stated support exactly.
pub fn parse_rules_text(
    text: &str,
    schema: &AttributeSchema,
    sentinel: &str,
) -> Result<Vec<AssociationRule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::RuleParse {
            line: line_no,
            msg: msg.to_string(),
        };
        let mut parts = line.split('\t');
        let head = parts.next().ok_or_else(|| bad("missing rule body"))?;
        let support_part = parts.next().ok_or_else(|| bad("missing support field"))?;
        let conf_part = parts.next().ok_or_else(|| bad("missing confidence field"))?;
        if parts.next().is_some() {
            return Err(bad("too many tab-separated fields"));
        }

        let (ant_text, cons_text) = head
            .split_once(" => ")
            .ok_or_else(|| bad("missing ` => ` separator"))?;
        let parse_item = |s: &str| -> Result<Item> {
            let (name, value) = s.split_once('=').ok_or_else(|| bad("item missing `=`"))?;
            let attr = schema
                .index_of(name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
            if value != sentinel && !schema.domain(attr).contains(value) {
                return Err(bad(&format!(
                    "value `{value}` not in the domain of attribute `{name}`"
                )));
            }
            Ok(Item::new(attr, value))
        };
        let antecedent: Vec<Item> = ant_text
            .split(" & ")
            .map(parse_item)
            .collect::<Result<_>>()?;
        let consequent = parse_item(cons_text)?;

        let support: u64 = support_part
            .strip_prefix("support=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("malformed support field"))?;
        let conf = conf_part
            .strip_prefix("confidence=")
            .ok_or_else(|| bad("malformed confidence field"))?;
        let (num, den) = conf
            .split_once('/')
            .ok_or_else(|| bad("confidence must be <num>/<den>"))?;
        let num: u64 = num.parse().map_err(|_| bad("bad confidence numerator"))?;
        let den: u64 = den.parse().map_err(|_| bad("bad confidence denominator"))?;
        if num != support {
            return Err(bad("confidence numerator does not equal the support"));
        }
        let mut sorted = antecedent;
        sorted.sort();
        AssociationRule::new(sorted, consequent, support, den)
            .map_err(|e| bad(&e.to_string()))
            .map(|r| rules.push(r))?;
    }
    Ok(rules)
}

pub fn write_rules(rules: &RuleList, schema: &AttributeSchema, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, rules_to_text(rules, schema)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_rules(
    path: impl AsRef<Path>,
    schema: &AttributeSchema,
    sentinel: &str,
) -> Result<Vec<AssociationRule>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_rules_text(&text, schema, sentinel)
}
