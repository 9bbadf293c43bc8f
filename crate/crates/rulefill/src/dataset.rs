//! Categorical tables with an explicit missing-value sentinel.
//!
//! A [`Dataset`] is a rectangular table of string tokens over a named
//! attribute schema. Missing cells are either the structural
//! [`CellValue::Missing`] (fresh from CSV) or, after [`encode_missing`], an
//! ordinary observed cell holding the sentinel token (default `MISSING`) so
//! that rule mining can treat absence as just another categorical value.
//!
//! CSV format: UTF-8, header row of attribute names, comma-separated raw
//! tokens, no quoting. Missing cells are written as `?` and read from `?` or
//! the empty string by default. Tokens containing a comma (or any other
//! reserved character, see [`RESERVED_CHARS`]) are rejected at load.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::rng::Rng;

/// Default sentinel written into missing cells by [`encode_missing`].
pub const DEFAULT_SENTINEL: &str = "MISSING";

/// Default raw-text spellings that are read as missing cells.
pub const DEFAULT_MISSING_TOKENS: &[&str] = &["?", ""];

/// Characters that may not appear in attribute names or value tokens.
///
/// Commas would break the CSV layout; the rest would make the canonical rule
/// serialization (`attr=value & ... => attr=value<TAB>...`) ambiguous.
pub const RESERVED_CHARS: &[char] = &[',', '\t', '\n', '\r', '&', '='];

fn check_token(token: &str) -> std::result::Result<(), &'static str> {
    if token.is_empty() {
        return Err("token is empty");
    }
    if token.contains(RESERVED_CHARS) {
        return Err("token contains a reserved character (one of `, TAB NL CR & =`)");
    }
    Ok(())
}

/// Ordered attribute names plus, per attribute, the set of distinct observed
/// value tokens. Domains are derived from the cells, so a sentinel-coded
/// dataset's domains include the sentinel for every attribute that had a
/// missing cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeSchema {
    names: Vec<String>,
    domains: Vec<BTreeSet<String>>,
}

impl AttributeSchema {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, attr: usize) -> &str {
        &self.names[attr]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn domain(&self, attr: usize) -> &BTreeSet<String> {
        &self.domains[attr]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One table cell: an observed token or a structurally missing value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellValue {
    Observed(String),
    Missing,
}

impl CellValue {
    pub fn observed(token: impl Into<String>) -> Self {
        CellValue::Observed(token.into())
    }

    pub fn as_observed(&self) -> Option<&str> {
        match self {
            CellValue::Observed(t) => Some(t),
            CellValue::Missing => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, CellValue::Missing)
    }
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellValue::Observed(t) => f.write_str(t),
            CellValue::Missing => f.write_str("?"),
        }
    }
}

/// An immutable rectangular categorical table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    schema: AttributeSchema,
    rows: Vec<Vec<CellValue>>,
    sentinel: String,
}

impl Dataset {
    /// Builds a dataset from raw cells, validating names, tokens and shape.
    ///
    /// An observed token equal to `sentinel` is rejected: once such a value
    /// is allowed in, sentinel coding could no longer tell real data from
    /// coded missing cells.
    pub fn from_cells(
        names: Vec<String>,
        rows: Vec<Vec<CellValue>>,
        sentinel: impl Into<String>,
    ) -> Result<Self> {
        let sentinel = sentinel.into();
        let ds = Self::build(names, rows, sentinel)?;
        for (r, row) in ds.rows.iter().enumerate() {
            for (a, cell) in row.iter().enumerate() {
                if cell.as_observed() == Some(ds.sentinel.as_str()) {
                    return Err(Error::SentinelCollision {
                        line: r + 2, // 1-based file line, matching RaggedRow
                        attr: ds.schema.names[a].clone(),
                        sentinel: ds.sentinel,
                    });
                }
            }
        }
        Ok(ds)
    }

    /// Like [`Dataset::from_cells`] but permits observed sentinel tokens.
    /// Used for sentinel-coded snapshots and imputation output.
    pub(crate) fn from_cells_coded(
        names: Vec<String>,
        rows: Vec<Vec<CellValue>>,
        sentinel: impl Into<String>,
    ) -> Result<Self> {
        Self::build(names, rows, sentinel.into())
    }

    fn build(names: Vec<String>, rows: Vec<Vec<CellValue>>, sentinel: String) -> Result<Self> {
        check_token(&sentinel)
            .map_err(|_| Error::InvalidArgument(format!("invalid sentinel token `{sentinel}`")))?;
        let mut seen = BTreeSet::new();
        for name in &names {
            if let Err(reason) = check_token(name) {
                return Err(Error::BadAttributeName(name.clone(), reason));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateAttribute(name.clone()));
            }
        }
        let mut domains: Vec<BTreeSet<String>> = vec![BTreeSet::new(); names.len()];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::RaggedRow {
                    line: r + 2, // 1-based file line, after the header
                    expected: names.len(),
                    found: row.len(),
                });
            }
            for (a, cell) in row.iter().enumerate() {
                if let CellValue::Observed(token) = cell {
                    if let Err(reason) = check_token(token) {
                        return Err(Error::BadToken {
                            attr: names[a].clone(),
                            token: token.clone(),
                            reason,
                        });
                    }
                    if !domains[a].contains(token) {
                        domains[a].insert(token.clone());
                    }
                }
            }
        }
        Ok(Dataset {
            schema: AttributeSchema { names, domains },
            rows,
            sentinel,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn sentinel(&self) -> &str {
        &self.sentinel
    }

    pub fn rows(&self) -> &[Vec<CellValue>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[CellValue] {
        &self.rows[r]
    }

    pub fn cell(&self, r: usize, a: usize) -> &CellValue {
        &self.rows[r][a]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_attrs(&self) -> usize {
        self.schema.len()
    }

    pub fn n_cells(&self) -> usize {
        self.n_rows() * self.n_attrs()
    }

    /// Number of structurally missing cells (not sentinel-coded ones).
    pub fn missing_count(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter(|c| c.is_missing())
            .count()
    }

    pub fn is_complete(&self) -> bool {
        self.missing_count() == 0
    }

    /// True if the cell is missing in either representation: structurally
    /// [`CellValue::Missing`] or sentinel-coded.
    pub fn is_sentinel_cell(&self, r: usize, a: usize) -> bool {
        match &self.rows[r][a] {
            CellValue::Missing => true,
            CellValue::Observed(t) => *t == self.sentinel,
        }
    }
}

/// Options for [`load_csv`] / [`parse_csv`].
#[derive(Clone, Debug)]
pub struct LoadOptions {
    /// Raw spellings mapped to [`CellValue::Missing`] on input.
    pub missing_tokens: Vec<String>,
    /// Sentinel token used by the loaded dataset.
    pub sentinel: String,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            missing_tokens: DEFAULT_MISSING_TOKENS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            sentinel: DEFAULT_SENTINEL.to_string(),
        }
    }
}

/// Parses CSV text into a dataset. See the module docs for the format.
pub fn parse_csv(text: &str, opts: &LoadOptions) -> Result<Dataset> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.trim_end_matches('\r')).collect();
    if lines.last() == Some(&"") {
        lines.pop(); // trailing newline leaves one empty final segment
    }
    if lines.is_empty() || lines[0].is_empty() {
        return Err(Error::Csv("missing header line".to_string()));
    }
    let names: Vec<String> = lines[0].split(',').map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::RaggedRow {
                line: i + 2,
                expected: names.len(),
                found: fields.len(),
            });
        }
        let row = fields
            .iter()
            .map(|f| {
                if opts.missing_tokens.iter().any(|m| m == f) {
                    CellValue::Missing
                } else {
                    CellValue::Observed(f.to_string())
                }
            })
            .collect();
        rows.push(row);
    }
    Dataset::from_cells(names, rows, opts.sentinel.clone())
}

/// Renders a dataset as CSV text. Missing cells are written as `?`; an
/// observed token spelled exactly `?` would be unreadable and is an error.
pub fn to_csv_string(ds: &Dataset) -> Result<String> {
    let mut out = String::new();
    out.push_str(&ds.schema.names.join(","));
    out.push('\n');
    for row in &ds.rows {
        let mut first = true;
        for (a, cell) in row.iter().enumerate() {
            if !first {
                out.push(',');
            }
            first = false;
            match cell {
                CellValue::Observed(t) if t == "?" => {
                    return Err(Error::BadToken {
                        attr: ds.schema.names[a].clone(),
                        token: t.clone(),
                        reason: "clashes with the `?` missing-value marker",
                    });
                }
                CellValue::Observed(t) => out.push_str(t),
                CellValue::Missing => out.push('?'),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, opts)
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = to_csv_string(ds)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Replaces every structurally missing cell by an observed sentinel token.
/// The result contains no [`CellValue::Missing`] cells; applying it twice is
/// the same as applying it once.
pub fn encode_missing(ds: &Dataset) -> Dataset {
    let rows = ds
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| match cell {
                    CellValue::Missing => CellValue::Observed(ds.sentinel.clone()),
                    observed => observed.clone(),
                })
                .collect()
        })
        .collect();
    Dataset::from_cells_coded(ds.schema.names.clone(), rows, ds.sentinel.clone())
        .expect("coding a valid dataset cannot fail")
}

/// The set of (row, attribute) positions turned missing by [`inject_missing`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MissingnessMask {
    positions: BTreeSet<(usize, usize)>,
}

impl MissingnessMask {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, row: usize, attr: usize) -> bool {
        self.positions.contains(&(row, attr))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.positions.iter().copied()
    }
}

/// Turns `round(rate × cell count)` cells missing, chosen uniformly without
/// replacement over all cells of the table. Deterministic for a fixed seed.
pub fn inject_missing(ds: &Dataset, rate: f64, seed: u64) -> Result<(Dataset, MissingnessMask)> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidArgument(format!(
            "missing rate {rate} outside [0, 1]"
        )));
    }
    if !ds.is_complete() {
        return Err(Error::AlreadyIncomplete);
    }
    let total = ds.n_cells();
    let count = (rate * total as f64).round() as usize;
    let mut rng = Rng::from_seed(seed);
    let picked = rng.sample_indices(total, count);
    let width = ds.n_attrs();
    let positions: BTreeSet<(usize, usize)> =
        picked.into_iter().map(|i| (i / width, i % width)).collect();
    let mut rows = ds.rows.clone();
    for &(r, a) in &positions {
        rows[r][a] = CellValue::Missing;
    }
    let injected = Dataset::from_cells(ds.schema.names.clone(), rows, ds.sentinel.clone())?;
    Ok((injected, MissingnessMask { positions }))
}

fn gen_names_values(n_attrs: usize, n_values: usize) -> (Vec<String>, Vec<String>) {
    let names = (0..n_attrs).map(|i| format!("A{i}")).collect();
    let values = (0..n_values).map(|v| format!("v{v}")).collect();
    (names, values)
}

/// Synthetic table whose first attribute is drawn i.i.d. uniform and whose
/// remaining attributes are functions of the first: attribute `j ≥ 1` holds
/// `π_j(A0)` for a seeded random bijection `π_j` on the value set.
///
/// Draw order for a given seed: first the permutations `π_1 .. π_{k-1}` (one
/// Fisher–Yates shuffle each), then one value draw per case.
pub fn gen_dependent(
    n_cases: usize,
    n_attrs: usize,
    n_values: usize,
    seed: u64,
) -> Result<Dataset> {
    if n_cases < 1 || n_attrs < 2 || n_values < 2 {
        return Err(Error::InvalidArgument(format!(
            "gen_dependent requires cases ≥ 1, attrs ≥ 2, values ≥ 2 (got {n_cases}, {n_attrs}, {n_values})"
        )));
    }
    let (names, values) = gen_names_values(n_attrs, n_values);
    let mut rng = Rng::from_seed(seed);
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(n_attrs - 1);
    for _ in 1..n_attrs {
        let mut perm: Vec<usize> = (0..n_values).collect();
        rng.shuffle(&mut perm);
        perms.push(perm);
    }
    let rows = (0..n_cases)
        .map(|_| {
            let base = rng.gen_index(n_values);
            let mut row = Vec::with_capacity(n_attrs);
            row.push(CellValue::observed(&values[base]));
            for perm in &perms {
                row.push(CellValue::observed(&values[perm[base]]));
            }
            row
        })
        .collect();
    Dataset::from_cells(names, rows, DEFAULT_SENTINEL)
}

/// Synthetic table with every cell drawn i.i.d. uniform over the value set.
pub fn gen_random(n_cases: usize, n_attrs: usize, n_values: usize, seed: u64) -> Result<Dataset> {
    if n_cases < 1 || n_attrs < 1 || n_values < 2 {
        return Err(Error::InvalidArgument(format!(
            "gen_random requires cases ≥ 1, attrs ≥ 1, values ≥ 2 (got {n_cases}, {n_attrs}, {n_values})"
        )));
    }
    let (names, values) = gen_names_values(n_attrs, n_values);
    let mut rng = Rng::from_seed(seed);
    let rows = (0..n_cases)
        .map(|_| {
            (0..n_attrs)
                .map(|_| CellValue::observed(&values[rng.gen_index(n_values)]))
                .collect()
        })
        .collect();
    Dataset::from_cells(names, rows, DEFAULT_SENTINEL)
}

/// Most common value of one attribute, with the counts backing both of its
/// frequency readings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McvEntry {
    /// Modal token among cells that are neither missing nor the sentinel;
    /// ties broken toward the lexicographically smallest token.
    pub value: String,
    /// Occurrences of `value`.
    pub count: u64,
    /// Cells of this attribute that are neither missing nor the sentinel.
    pub observed: u64,
    /// All rows of the table.
    pub rows: u64,
}

impl McvEntry {
    /// Relative frequency among observed (non-sentinel) cells.
    pub fn rel_freq(&self) -> Ratio {
        Ratio::new(self.count, self.observed)
    }

    /// Confidence of the zero-attribute rule `∅ => attr=value` over the whole
    /// sentinel-coded table: `count / rows`. This is the suitability
    /// threshold used by imputation variant 3.
    pub fn zero_rule_confidence(&self) -> Ratio {
        Ratio::new(self.count, self.rows)
    }
}

/// Per-attribute most common values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McvTable {
    entries: Vec<McvEntry>,
}

impl McvTable {
    pub fn entry(&self, attr: usize) -> &McvEntry {
        &self.entries[attr]
    }

    pub fn entries(&self) -> &[McvEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Computes the most common non-sentinel value of every attribute.
///
/// Errors with [`Error::DegenerateAttribute`] if some attribute has no cell
/// that is neither missing nor the sentinel.
pub fn mcv_table(ds: &Dataset) -> Result<McvTable> {
    let mut entries = Vec::with_capacity(ds.n_attrs());
    for a in 0..ds.n_attrs() {
        let mut counts: std::collections::BTreeMap<&str, u64> = Default::default();
        let mut observed = 0u64;
        for row in ds.rows() {
            if let CellValue::Observed(t) = &row[a] {
                if *t != ds.sentinel {
                    *counts.entry(t.as_str()).or_insert(0) += 1;
                    observed += 1;
                }
            }
        }
        // BTreeMap iteration is token-ascending, so `>` keeps the smallest
        // token among tied counts.
        let mut best: Option<(&str, u64)> = None;
        for (token, count) in counts {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((token, count));
            }
        }
        match best {
            Some((token, count)) => entries.push(McvEntry {
                value: token.to_string(),
                count,
                observed,
                rows: ds.n_rows() as u64,
            }),
            None => return Err(Error::DegenerateAttribute(ds.schema.name(a).to_string())),
        }
    }
    Ok(McvTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::t4;

    #[test]
    fn t4_loads_with_four_rows_two_attrs_no_missing() {
        let csv = "Color,Size\nred,small\nred,small\nred,big\nblue,big\n";
        let ds = parse_csv(csv, &LoadOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 4);
        assert_eq!(ds.n_attrs(), 2);
        assert_eq!(ds.missing_count(), 0);
        assert_eq!(ds, t4());
    }

    #[test]
    fn question_mark_reads_as_missing() {
        let ds = parse_csv("Color,Size\nred,?\n", &LoadOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 1);
        assert!(ds.cell(0, 1).is_missing());
        assert!(!ds.cell(0, 0).is_missing());
    }

    #[test]
    fn literal_sentinel_in_data_is_a_collision_error() {
        let err = parse_csv("Color,Size\nred,MISSING\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SentinelCollision { .. }), "{err}");
    }

    #[test]
    fn ragged_row_reports_line_number() {
        let err = parse_csv("Color,Size\nred,small\nred\n", &LoadOptions::default()).unwrap_err();
        match err {
            Error::RaggedRow {
                line,
                expected,
                found,
            } => {
                assert_eq!((line, expected, found), (3, 2, 1));
            }
            other => panic!("expected ragged-row error, got {other}"),
        }
    }

    #[test]
    fn header_only_csv_is_an_empty_dataset() {
        let ds = parse_csv("Color,Size\n", &LoadOptions::default()).unwrap();
        assert_eq!(ds.n_rows(), 0);
        assert_eq!(ds.n_attrs(), 2);
        assert!(parse_csv("", &LoadOptions::default()).is_err());
    }

    #[test]
    fn duplicate_header_rejected() {
        let err = parse_csv("Color,Color\nred,blue\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateAttribute(_)));
    }

    #[test]
    fn save_writes_header_plus_rows_and_one_question_mark_per_missing() {
        let text = to_csv_string(&t4()).unwrap();
        assert_eq!(text.lines().count(), 5);

        let ds = parse_csv("Color,Size\nred,?\n", &LoadOptions::default()).unwrap();
        let text = to_csv_string(&ds).unwrap();
        assert_eq!(text.matches('?').count(), 1);
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let ds = parse_csv(
            "Color,Size\nred,small\n?,big\nblue,?\n",
            &LoadOptions::default(),
        )
        .unwrap();
        let back = parse_csv(&to_csv_string(&ds).unwrap(), &LoadOptions::default()).unwrap();
        assert_eq!(ds, back);

        let back = parse_csv(&to_csv_string(&t4()).unwrap(), &LoadOptions::default()).unwrap();
        assert_eq!(back, t4());
    }

    #[test]
    fn encode_missing_replaces_and_extends_domain() {
        let ds = parse_csv(
            "Color,Size\nred,?\nred,small\nred,big\nblue,big\n",
            &LoadOptions::default(),
        )
        .unwrap();
        let coded = encode_missing(&ds);
        assert_eq!(coded.missing_count(), 0);
        assert_eq!(coded.cell(0, 1), &CellValue::observed("MISSING"));
        let size_domain: Vec<&str> = coded
            .schema()
            .domain(1)
            .iter()
            .map(|s| s.as_str())
            .collect();
        assert_eq!(size_domain, vec!["MISSING", "big", "small"]);
        // Color had no missing cell, so its domain is untouched.
        assert_eq!(coded.schema().domain(0).len(), 2);
        // Idempotent.
        assert_eq!(encode_missing(&coded), coded);
    }

    #[test]
    fn encode_missing_on_complete_data_is_identity() {
        assert_eq!(encode_missing(&t4()), t4());
    }

    #[test]
    fn encode_missing_all_missing_table() {
        let ds = Dataset::from_cells(
            vec!["A".into(), "B".into()],
            vec![
                vec![CellValue::Missing, CellValue::Missing],
                vec![CellValue::Missing, CellValue::Missing],
            ],
            DEFAULT_SENTINEL,
        )
        .unwrap();
        let coded = encode_missing(&ds);
        for r in 0..2 {
            for a in 0..2 {
                assert_eq!(coded.cell(r, a), &CellValue::observed("MISSING"));
            }
        }
    }

    #[test]
    fn inject_missing_exact_count_and_determinism() {
        let ds = gen_random(200, 3, 3, 11).unwrap();
        let (inj1, mask1) = inject_missing(&ds, 0.10, 77).unwrap();
        assert_eq!(mask1.len(), 60); // round(0.10 × 600)
        let (inj2, mask2) = inject_missing(&ds, 0.10, 77).unwrap();
        assert_eq!(inj1, inj2);
        assert_eq!(mask1, mask2);
        // masked cells and only masked cells are missing
        for r in 0..inj1.n_rows() {
            for a in 0..inj1.n_attrs() {
                assert_eq!(inj1.cell(r, a).is_missing(), mask1.contains(r, a));
            }
        }
        let (diff, diff_mask) = inject_missing(&ds, 0.10, 78).unwrap();
        assert_ne!(mask1, diff_mask);
        assert_ne!(inj1, diff);
    }

    #[test]
    fn inject_missing_rate_zero_is_identity() {
        let ds = t4();
        let (inj, mask) = inject_missing(&ds, 0.0, 5).unwrap();
        assert!(mask.is_empty());
        assert_eq!(inj, ds);
    }

    #[test]
    fn inject_missing_rejects_bad_rate_and_incomplete_input() {
        let ds = t4();
        assert!(matches!(
            inject_missing(&ds, 1.5, 1),
            Err(Error::InvalidArgument(_))
        ));
        let (inj, _) = inject_missing(&ds, 0.5, 1).unwrap();
        assert!(matches!(
            inject_missing(&inj, 0.1, 1),
            Err(Error::AlreadyIncomplete)
        ));
    }

    #[test]
    fn gen_dependent_derives_every_attribute_bijectively() {
        let ds = gen_dependent(300, 3, 3, 9).unwrap();
        for j in 1..3 {
            let mut map = std::collections::BTreeMap::new();
            for row in ds.rows() {
                let a0 = row[0].as_observed().unwrap();
                let aj = row[j].as_observed().unwrap();
                let prev = map.insert(a0.to_string(), aj.to_string());
                if let Some(prev) = prev {
                    assert_eq!(prev, aj, "attribute {j} is not a function of A0");
                }
            }
            let images: BTreeSet<&String> = map.values().collect();
            assert_eq!(images.len(), map.len(), "attribute {j} mapping not injective");
        }
    }

    #[test]
    fn gen_random_frequencies_within_three_sigma() {
        let n = 2000usize;
        let ds = gen_random(n, 3, 3, 4242).unwrap();
        let p = 1.0 / 3.0;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for a in 0..3 {
            for v in ["v0", "v1", "v2"] {
                let count = ds
                    .rows()
                    .iter()
                    .filter(|row| row[a].as_observed() == Some(v))
                    .count() as f64;
                assert!(
                    (count - n as f64 * p).abs() <= 3.0 * sigma,
                    "attr {a} value {v}: count {count} too far from {}",
                    n as f64 * p
                );
            }
        }
    }

    #[test]
    fn gen_rejects_degenerate_parameters() {
        assert!(gen_dependent(10, 1, 3, 0).is_err());
        assert!(gen_dependent(10, 2, 1, 0).is_err());
        assert!(gen_random(0, 1, 2, 0).is_err());
        assert!(gen_random(1, 1, 2, 0).is_ok());
    }

    #[test]
    fn mcv_of_t4_hand_counts() {
        let table = mcv_table(&t4()).unwrap();
        let color = table.entry(0);
        assert_eq!(color.value, "red");
        assert_eq!(color.rel_freq(), Ratio::new(3, 4));
        // small and big tie at 2; "big" < "small" lexicographically
        let size = table.entry(1);
        assert_eq!(size.value, "big");
        assert_eq!((size.count, size.observed), (2, 4));
    }

    #[test]
    fn mcv_single_value_column_is_unanimous() {
        let ds = parse_csv("X\nk\nk\nk\n", &LoadOptions::default()).unwrap();
        let table = mcv_table(&ds).unwrap();
        assert_eq!(table.entry(0).value, "k");
        assert_eq!(table.entry(0).rel_freq(), Ratio::new(3, 3));
    }

    #[test]
    fn mcv_excludes_sentinel_cells_from_observed_counts() {
        let ds = parse_csv(
            "Color,Size\nred,?\nred,small\nred,big\nblue,big\n",
            &LoadOptions::default(),
        )
        .unwrap();
        let coded = encode_missing(&ds);
        let table = mcv_table(&coded).unwrap();
        let size = table.entry(1);
        // 3 observed non-sentinel cells: small, big, big
        assert_eq!(size.value, "big");
        assert_eq!(size.rel_freq(), Ratio::new(2, 3));
        // zero-attribute rule confidence keeps all 4 rows in the denominator
        assert_eq!(size.zero_rule_confidence(), Ratio::new(2, 4));
    }

    #[test]
    fn mcv_errors_on_attribute_with_no_observed_values() {
        let ds = parse_csv("Color,Size\nred,?\nblue,?\n", &LoadOptions::default()).unwrap();
        let coded = encode_missing(&ds);
        assert!(matches!(
            mcv_table(&coded),
            Err(Error::DegenerateAttribute(name)) if name == "Size"
        ));
    }

    #[test]
    fn mcv_unchanged_by_row_duplication() {
        let ds = t4();
        let mut doubled_rows = ds.rows().to_vec();
        doubled_rows.extend(ds.rows().iter().cloned());
        let doubled = Dataset::from_cells(
            ds.schema().names().to_vec(),
            doubled_rows,
            ds.sentinel().to_string(),
        )
        .unwrap();
        let a = mcv_table(&ds).unwrap();
        let b = mcv_table(&doubled).unwrap();
        for (ea, eb) in a.entries().iter().zip(b.entries()) {
            assert_eq!(ea.value, eb.value);
            assert_eq!(ea.rel_freq(), eb.rel_freq());
            assert_eq!(ea.zero_rule_confidence(), eb.zero_rule_confidence());
        }
    }

    #[test]
    fn tokens_with_reserved_characters_rejected() {
        let err = parse_csv("A\nx=y\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::BadToken { .. }));
        let err = parse_csv("A\tB\nx\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::BadAttributeName(..)));
    }

    #[test]
    fn observed_question_mark_cannot_be_saved() {
        let opts = LoadOptions {
            missing_tokens: vec!["NA".to_string()],
            sentinel: DEFAULT_SENTINEL.to_string(),
        };
        let ds = parse_csv("A\n?\n", &opts).unwrap();
        assert_eq!(ds.cell(0, 0).as_observed(), Some("?"));
        assert!(to_csv_string(&ds).is_err());
    }
}
