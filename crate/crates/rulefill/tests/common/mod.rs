//! Shared fixtures and the brute-force reference miner used by the
//! acceptance and property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rulefill::rng::Rng;
use rulefill::{AssociationRule, CellValue, Dataset, DEFAULT_SENTINEL};

/// The toy table: attributes (Color, Size), rows (red,small) (red,small)
/// (red,big) (blue,big).
pub fn t4() -> Dataset {
    let rows = [
        ("red", "small"),
        ("red", "small"),
        ("red", "big"),
        ("blue", "big"),
    ]
    .iter()
    .map(|(c, s)| vec![CellValue::observed(*c), CellValue::observed(*s)])
    .collect();
    Dataset::from_cells(
        vec!["Color".to_string(), "Size".to_string()],
        rows,
        DEFAULT_SENTINEL,
    )
    .unwrap()
}

/// Canonical comparable form of a rule:
/// (antecedent items, consequent item, support, (confidence num, den)).
pub type RuleTuple = (
    Vec<(usize, String)>,
    (usize, String),
    u64,
    (u64, u64),
);

pub fn rule_tuples(rules: &[AssociationRule]) -> BTreeSet<RuleTuple> {
    rules
        .iter()
        .map(|r| {
            (
                r.antecedent()
                    .iter()
                    .map(|i| (i.attr, i.value.clone()))
                    .collect(),
                (r.consequent().attr, r.consequent().value.clone()),
                r.support_count(),
                (r.support_count(), r.antecedent_support()),
            )
        })
        .collect()
}

/// Reference miner: enumerates every attribute subset of size
/// `1..=max_antecedent_len`, every value assignment over occurring tokens,
/// and every single-item consequent, counting supports by full scans.
/// Completely independent of the apriori code path.
pub fn brute_force_rules(
    ds: &Dataset,
    min_support_count: u64,
    max_antecedent_len: usize,
) -> BTreeSet<RuleTuple> {
    let n_attrs = ds.n_attrs();
    let occurring: Vec<Vec<String>> = (0..n_attrs)
        .map(|a| {
            let mut set = BTreeSet::new();
            for row in ds.rows() {
                if let Some(t) = row[a].as_observed() {
                    set.insert(t.to_string());
                }
            }
            set.into_iter().collect()
        })
        .collect();

    let matches = |row: &[CellValue], items: &[(usize, &str)]| {
        items
            .iter()
            .all(|&(a, v)| row[a].as_observed() == Some(v))
    };

    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n_attrs) {
        let attrs: Vec<usize> = (0..n_attrs).filter(|a| mask & (1 << a) != 0).collect();
        if attrs.len() > max_antecedent_len {
            continue;
        }
        if attrs.iter().any(|&a| occurring[a].is_empty()) {
            continue;
        }
        // walk the cartesian product of occurring values over `attrs`
        let mut index = vec![0usize; attrs.len()];
        loop {
            let antecedent: Vec<(usize, &str)> = attrs
                .iter()
                .zip(&index)
                .map(|(&a, &i)| (a, occurring[a][i].as_str()))
                .collect();
            let ant_support = ds.rows().iter().filter(|r| matches(r, &antecedent)).count() as u64;
            if ant_support >= 1 {
                for (cons_attr, cons_values) in occurring.iter().enumerate() {
                    if attrs.contains(&cons_attr) {
                        continue;
                    }
                    for cons_value in cons_values {
                        let mut full = antecedent.clone();
                        full.push((cons_attr, cons_value));
                        let joint =
                            ds.rows().iter().filter(|r| matches(r, &full)).count() as u64;
                        if joint >= min_support_count {
                            out.insert((
                                antecedent
                                    .iter()
                                    .map(|&(a, v)| (a, v.to_string()))
                                    .collect(),
                                (cons_attr, cons_value.clone()),
                                joint,
                                (joint, ant_support),
                            ));
                        }
                    }
                }
            }
            // advance the product index
            let mut pos = 0;
            loop {
                if pos == index.len() {
                    break;
                }
                index[pos] += 1;
                if index[pos] < occurring[attrs[pos]].len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos == index.len() {
                break;
            }
        }
    }
    out
}

/// Random small dataset for oracle equivalence: up to `max_attrs` attributes,
/// `1..=max_rows` rows, tokens drawn from a..c, cells missing with roughly
/// `missing_pct` percent probability.
pub fn random_small_dataset(
    rng: &mut Rng,
    max_rows: usize,
    max_attrs: usize,
    max_values: usize,
    missing_pct: usize,
) -> Dataset {
    const TOKENS: [&str; 3] = ["a", "b", "c"];
    let n_attrs = 1 + rng.gen_index(max_attrs);
    let n_rows = 1 + rng.gen_index(max_rows);
    let n_values = 1 + rng.gen_index(max_values);
    let names = (0..n_attrs).map(|i| format!("A{i}")).collect();
    let rows = (0..n_rows)
        .map(|_| {
            (0..n_attrs)
                .map(|_| {
                    if rng.gen_index(100) < missing_pct {
                        CellValue::Missing
                    } else {
                        CellValue::observed(TOKENS[rng.gen_index(n_values)])
                    }
                })
                .collect()
        })
        .collect();
    Dataset::from_cells(names, rows, DEFAULT_SENTINEL).unwrap()
}

/// A mixed-dependence table: 5 attributes, 3 values each. A1 tracks A0 and
/// A3 tracks A2 through fixed bijections, each with 10% uniform noise; A4 is
/// independent. Attribute pairs (A0,A1) and (A2,A3) are therefore strongly
/// but not perfectly dependent — the shape of a real categorical table.
pub fn gen_fabricated(n_rows: usize, seed: u64) -> Dataset {
    let values = ["v0", "v1", "v2"];
    let bijection1 = [1usize, 2, 0]; // A1 = rotate(A0)
    let bijection2 = [2usize, 0, 1]; // A3 = rotate(A2) the other way
    let mut rng = Rng::from_seed(seed);
    let names = (0..5).map(|i| format!("A{i}")).collect();
    let rows = (0..n_rows)
        .map(|_| {
            let a0 = rng.gen_index(3);
            let a1 = if rng.gen_index(10) == 0 {
                rng.gen_index(3)
            } else {
                bijection1[a0]
            };
            let a2 = rng.gen_index(3);
            let a3 = if rng.gen_index(10) == 0 {
                rng.gen_index(3)
            } else {
                bijection2[a2]
            };
            let a4 = rng.gen_index(3);
            [a0, a1, a2, a3, a4]
                .iter()
                .map(|&v| CellValue::observed(values[v]))
                .collect()
        })
        .collect();
    Dataset::from_cells(names, rows, DEFAULT_SENTINEL).unwrap()
}
