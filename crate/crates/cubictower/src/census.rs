//! Range censuses of conductors, and regression checks against the
//! per-conductor fixture tables.

use crate::arith::{Factorization, SpfSieve};
use crate::classify::{classify, doublet_graph, symbol_matches, Category, DoubletGraph, Label};
use crate::conductor::{decompose, decompose_factored, is_admissible_factored};
use crate::residue_graph::{build_graph, symbol_matrix};
use crate::tower_rules::{genus_rule, quartet_rule_for, GenusClass, GroupList, QuartetContext, RuleOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("bound {0} is outside the supported range")]
    Bound(u64),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const MAX_BOUND: u64 = 10_000_000;
const CHUNK: u64 = 1 << 14;

/// Factorizations of every admissible conductor c < bound, in increasing order.
/// Chunks are processed in parallel and concatenated in order.
pub fn admissible_conductors(ell: u64, bound: u64) -> Result<Vec<Factorization>, CensusError> {
    if bound > MAX_BOUND {
        return Err(CensusError::Bound(bound));
    }
    let sieve = SpfSieve::new(bound.max(2));
    let chunks: Vec<u64> = (0..bound.div_ceil(CHUNK)).collect();
    let parts: Vec<Vec<Factorization>> = chunks
        .par_iter()
        .map(|&k| {
            let (lo, hi) = ((k * CHUNK).max(2), ((k + 1) * CHUNK).min(bound));
            (lo..hi)
                .filter(|&c| admissible_shape(ell, c))
                .map(|c| sieve.factorize(c))
                .filter(|f| is_admissible_factored(ell, f))
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

// Cheap necessary condition: c ≡ 1 mod ℓ away from ℓ², or ℓ² ∥ c.
fn admissible_shape(ell: u64, c: u64) -> bool {
    let e2 = ell * ell;
    if c.is_multiple_of(ell) {
        c.is_multiple_of(e2) && (c / e2) % ell == 1
    } else {
        c % ell == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipletRow {
    pub t: usize,
    pub conductors: u64,
    pub fields: u64,
    pub min: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipletCensus {
    pub ell: u64,
    pub bound: u64,
    pub rows: Vec<MultipletRow>,
    pub total_conductors: u64,
    pub total_fields: u64,
}

impl MultipletCensus {
    pub fn row(&self, t: usize) -> Option<&MultipletRow> {
        self.rows.iter().find(|r| r.t == t)
    }
}

pub fn multiplet_census(ell: u64, bound: u64) -> Result<MultipletCensus, CensusError> {
    let conds = admissible_conductors(ell, bound)?;
    let mut by_t: BTreeMap<usize, MultipletRow> = BTreeMap::new();
    for f in &conds {
        let t = f.factors.len();
        let row = by_t.entry(t).or_insert(MultipletRow { t, conductors: 0, fields: 0, min: None });
        row.conductors += 1;
        row.fields += (ell - 1).pow(t as u32 - 1);
        row.min = Some(row.min.map_or(f.value, |m| m.min(f.value)));
    }
    let rows: Vec<MultipletRow> = by_t.into_values().collect();
    Ok(MultipletCensus {
        ell,
        bound,
        total_conductors: rows.iter().map(|r| r.conductors).sum(),
        total_fields: rows.iter().map(|r| r.fields).sum(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub conductors: u64,
    pub fields: u64,
    pub min: Option<u64>,
}

impl Cell {
    const EMPTY: Cell = Cell { conductors: 0, fields: 0, min: None };

    fn add(&mut self, c: u64, fields: u64) {
        self.conductors += 1;
        self.fields += fields;
        self.min = Some(self.min.map_or(c, |m| m.min(c)));
    }

    fn merge(&mut self, o: &Cell) {
        self.conductors += o.conductors;
        self.fields += o.fields;
        self.min = match (self.min, o.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCensus {
    pub bound: u64,
    /// Keyed by labels such as "III/6", in category then graph order.
    pub cells: Vec<(String, Cell)>,
    pub subtotals: Vec<(String, Cell)>,
    pub total: Cell,
}

impl CategoryCensus {
    pub fn cell(&self, label: &str) -> Option<&Cell> {
        self.cells.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }

    pub fn subtotal(&self, category: &str) -> Option<&Cell> {
        self.subtotals.iter().find(|(l, _)| l == category).map(|(_, c)| c)
    }
}

fn three_prime_labels(bound: u64) -> Result<Vec<(u64, Label)>, CensusError> {
    let conds = admissible_conductors(3, bound)?;
    Ok(conds
        .par_iter()
        .filter(|f| f.factors.len() == 3)
        .map(|f| {
            let k = decompose_factored(3, f).expect("admissible");
            (f.value, classify(&k).expect("t = 3 classifies").label)
        })
        .collect())
}

pub fn quartet_census(bound: u64) -> Result<CategoryCensus, CensusError> {
    let labels = three_prime_labels(bound)?;
    let mut cells: Vec<(String, Cell)> = Label::QUARTETS.iter().map(|&(c, g)| (Label::quartet(c, g).to_string(), Cell::EMPTY)).collect();
    for (c, l) in labels {
        let key = l.to_string();
        cells.iter_mut().find(|(k, _)| *k == key).expect("known label").1.add(c, 4);
    }
    let mut subtotals: Vec<(String, Cell)> = Category::ALL.iter().map(|c| (c.roman().to_string(), Cell::EMPTY)).collect();
    let mut total = Cell::EMPTY;
    for (k, cell) in &cells {
        let cat = k.split('/').next().unwrap();
        subtotals.iter_mut().find(|(c, _)| c == cat).unwrap().1.merge(cell);
        total.merge(cell);
    }
    Ok(CategoryCensus { bound, cells, subtotals, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubletCensus {
    pub bound: u64,
    pub g1: u64,
    pub g2: u64,
    pub g3: u64,
}

pub fn doublet_census(bound: u64) -> Result<DoubletCensus, CensusError> {
    let conds = admissible_conductors(3, bound)?;
    let graphs: Vec<DoubletGraph> = conds
        .par_iter()
        .filter(|f| f.factors.len() == 2)
        .map(|f| doublet_graph(&decompose_factored(3, f).expect("admissible")).expect("t = 2"))
        .collect();
    let count = |g: DoubletGraph| graphs.iter().filter(|&&x| x == g).count() as u64;
    Ok(DoubletCensus { bound, g1: count(DoubletGraph::G1), g2: count(DoubletGraph::G2), g3: count(DoubletGraph::G3) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub conductor: u64,
    pub category: String,
    pub graph: String,
    pub symbol: String,
    pub partial_conductor: Option<u64>,
    pub doublet_graph: Option<String>,
    pub groups: Option<String>,
    pub exception: bool,
    pub context: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawRow {
    conductor: u64,
    category: String,
    graph: String,
    symbol: String,
    partial_conductor: Option<u64>,
    doublet_graph: Option<String>,
    groups: Option<String>,
    exception: Option<u8>,
    #[serde(default)]
    context: Option<String>,
}

fn nonempty(s: Option<String>) -> Option<String> {
    s.filter(|x| !x.trim().is_empty())
}

pub fn parse_fixtures(file: &str, text: &str) -> Result<Vec<FixtureRow>, CensusError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in rdr.deserialize::<RawRow>().enumerate() {
        let r = rec.map_err(|e| CensusError::Parse { file: file.to_string(), line: k + 2, msg: e.to_string() })?;
        out.push(FixtureRow {
            conductor: r.conductor,
            category: r.category,
            graph: r.graph,
            symbol: r.symbol,
            partial_conductor: r.partial_conductor,
            doublet_graph: nonempty(r.doublet_graph),
            groups: nonempty(r.groups),
            exception: r.exception == Some(1),
            context: nonempty(r.context),
        });
    }
    Ok(out)
}

pub const FIXTURES: [(&str, &str); 12] = [
    ("cat3_graphs1to4.csv", include_str!("../fixtures/cat3_graphs1to4.csv")),
    ("cat3_graph5.csv", include_str!("../fixtures/cat3_graph5.csv")),
    ("cat3_graph6.csv", include_str!("../fixtures/cat3_graph6.csv")),
    ("cat3_graph7.csv", include_str!("../fixtures/cat3_graph7.csv")),
    ("cat3_graph8.csv", include_str!("../fixtures/cat3_graph8.csv")),
    ("cat3_graph9.csv", include_str!("../fixtures/cat3_graph9.csv")),
    ("catii_graph1.csv", include_str!("../fixtures/catii_graph1.csv")),
    ("catii_graph2.csv", include_str!("../fixtures/catii_graph2.csv")),
    ("cati_graph1.csv", include_str!("../fixtures/cati_graph1.csv")),
    ("cati_graph2.csv", include_str!("../fixtures/cati_graph2.csv")),
    ("singular_doublets.csv", include_str!("../fixtures/singular_doublets.csv")),
    ("supersingular_doublets.csv", include_str!("../fixtures/supersingular_doublets.csv")),
];

/// All embedded fixture rows tagged with their file name.
pub fn embedded_fixtures() -> &'static [(String, FixtureRow)] {
    static ROWS: OnceLock<Vec<(String, FixtureRow)>> = OnceLock::new();
    ROWS.get_or_init(|| {
        FIXTURES
            .iter()
            .flat_map(|(name, text)| {
                parse_fixtures(name, text).expect("embedded fixtures parse").into_iter().map(move |r| (name.to_string(), r))
            })
            .collect()
    })
}

/// Printed groups of a conductor marked as an exception in the tables.
pub fn known_exception(c: u64) -> Option<GroupList> {
    embedded_fixtures()
        .iter()
        .find(|(_, r)| r.exception && r.conductor == c)
        .and_then(|(_, r)| r.groups.as_deref())
        .and_then(|g| GroupList::parse(g).ok())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub file: String,
    pub conductor: u64,
    pub label_ok: bool,
    pub symbol_ok: bool,
    pub partial_ok: Option<bool>,
    pub groups_ok: Option<bool>,
    pub failures: Vec<String>,
}

impl RowResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub rows: Vec<RowResult>,
    pub passed: usize,
    pub failed: usize,
}

fn check_row(file: &str, row: &FixtureRow) -> RowResult {
    let mut res = RowResult {
        file: file.to_string(),
        conductor: row.conductor,
        label_ok: false,
        symbol_ok: false,
        partial_ok: None,
        groups_ok: None,
        failures: Vec::new(),
    };
    let cond = match decompose(3, row.conductor) {
        Ok(c) => c,
        Err(e) => {
            res.failures.push(e.to_string());
            return res;
        }
    };
    let graph = match symbol_matrix(&cond).and_then(|m| build_graph(&m)) {
        Ok(g) => g,
        Err(e) => {
            res.failures.push(e.to_string());
            return res;
        }
    };
    res.symbol_ok = symbol_matches(&graph, &row.symbol);
    if !res.symbol_ok {
        res.failures.push(format!("symbol {} not matched", row.symbol));
    }
    let doublet = row.category == "D";
    if doublet {
        let want = row.doublet_graph.as_deref().unwrap_or("G3");
        res.label_ok = doublet_graph(&cond).map(|g| Label::Doublet { graph: g }.to_string() == want).unwrap_or(false);
    } else {
        let want = format!("{}/{}", row.category, row.graph);
        match classify(&cond) {
            Ok(cg) => res.label_ok = cg.label.to_string() == want,
            Err(e) => res.failures.push(e.to_string()),
        }
    }
    if !res.label_ok {
        res.failures.push(format!("label {}/{} not reproduced", row.category, row.graph));
    }
    if let (Some(f), false) = (row.partial_conductor, doublet) {
        let got = decompose(3, f).ok().and_then(|k| doublet_graph(&k).ok());
        let ok = got.map(|g| Label::Doublet { graph: g }.to_string()) == row.doublet_graph
            && row.conductor.is_multiple_of(f);
        res.partial_ok = Some(ok);
        if !ok {
            res.failures.push(format!("partial conductor {f}: doublet graph {got:?}"));
        }
    }
    if let Some(printed) = &row.groups {
        let ok = match GroupList::parse(printed) {
            Err(e) => {
                res.failures.push(e.to_string());
                false
            }
            Ok(printed) => groups_reproduced(row, &printed, doublet),
        };
        res.groups_ok = Some(ok);
        if !ok {
            res.failures.push(format!("groups {printed} not reproduced"));
        }
    }
    res
}

fn context_value<'a>(ctx: &'a str, key: &str) -> Option<&'a str> {
    ctx.split_whitespace().find_map(|t| t.strip_prefix(key)?.strip_prefix('='))
}

fn groups_reproduced(row: &FixtureRow, printed: &GroupList, doublet: bool) -> bool {
    let ctx = row.context.as_deref().unwrap_or("");
    if doublet {
        let v: u32 = context_value(ctx, "v").and_then(|v| v.trim_end_matches('+').parse().ok()).unwrap_or(0);
        return match genus_rule(v, context_value(ctx, "genus")) {
            GenusClass::Regular(p) | GenusClass::Singular(p) => p.admits(printed),
            GenusClass::SuperSingular { candidates } => candidates.iter().any(|c| c.admits(printed)),
        };
    }
    let Ok(label) = Label::parse(&format!("{}/{}", row.category, row.graph)) else { return false };
    let Ok(qctx) = QuartetContext::parse(ctx) else { return false };
    match quartet_rule_for(row.conductor, label, &qctx) {
        RuleOutcome::Rule(p) => {
            if row.exception {
                p.exception.as_ref() == Some(printed)
            } else {
                p.admits(printed)
            }
        }
        RuleOutcome::NoRule { .. } | RuleOutcome::Ambiguous { .. } => row.exception,
    }
}

pub fn verify_fixtures(rows: &[(String, FixtureRow)]) -> FixtureReport {
    let results: Vec<RowResult> = rows.par_iter().map(|(f, r)| check_row(f, r)).collect();
    let passed = results.iter().filter(|r| r.passed()).count();
    FixtureReport { failed: results.len() - passed, passed, rows: results }
}

/// Reads every `*.csv` file of a directory, sorted by name.
pub fn load_fixture_dir(dir: &std::path::Path) -> Result<Vec<(String, FixtureRow)>, CensusError> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for p in files {
        let name = p.file_name().unwrap().to_string_lossy().to_string();
        let text = std::fs::read_to_string(&p)?;
        out.extend(parse_fixtures(&name, &text)?.into_iter().map(|r| (name.clone(), r)));
    }
    Ok(out)
}
