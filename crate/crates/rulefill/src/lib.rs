//! Imputation of missing values in categorical data using association rules.
//!
//! The pipeline: code missing cells as a sentinel value, mine association
//! rules from the coded table with an apriori miner, sort them by exact
//! confidence, then fill each coded cell with the consequent of the first
//! suitable rule — falling back to the attribute's most common value
//! depending on the algorithm variant. A benchmark harness injects seeded
//! missingness into complete data and scores each method against the ground
//! truth.
//!
//! All supports and confidences are exact integer counts and ratios; no
//! floating point enters a mining, sorting or imputation decision. All
//! randomness flows through the portable generators in [`rng`], so any seed
//! reproduces byte-identical datasets, masks and reports everywhere.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod impute;
pub mod ratio;
pub mod rng;
pub mod rulemine;

pub use dataset::{
    encode_missing, gen_dependent, gen_random, inject_missing, load_csv, mcv_table, save_csv,
    AttributeSchema, CellValue, Dataset, LoadOptions, McvEntry, McvTable, MissingnessMask,
    DEFAULT_SENTINEL,
};
pub use error::{Error, Result};
pub use impute::{
    find_suitable_rule, impute_mcv, impute_v1, impute_v2, impute_v3, FillSource, FilledCell,
    ImputationOutcome, Variant, VariantConfig,
};
pub use ratio::Ratio;
pub use rulemine::{
    filter_rules, frequent_itemsets, mine_rules, mine_sorted_rules, parse_rules_text, read_rules,
    rule_matches, rule_to_line, rules_to_text, sort_rules, write_rules, AssociationRule, Item,
    Itemset, RuleList,
};
pub use bench::{render_report, report_csv, run_experiment, run_trial, Method, Report, TrialResult};
