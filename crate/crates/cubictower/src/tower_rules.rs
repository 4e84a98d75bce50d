//! Deterministic rules from arithmetic data (graph, genus valuation, abelian
//! type invariants, Artin patterns) to second 3-class groups and tower lengths.
//!
//! The rules themselves are the rows of `data/rules.csv`.

use crate::classify::{Category, Label};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("cannot parse group list {0:?}")]
    Groups(String),
    #[error("cannot parse abelian type invariants {0:?}")]
    Ati(String),
    #[error("arguments must be coprime: {0} and {1}")]
    NotCoprime(u64, u64),
    #[error("the principal factor criterion needs n in {{1, 2}}, got {0}")]
    PrimeCount(u32),
    #[error("unit norm index must be 1, 3 or 9, got {0}")]
    UnitIndex(u32),
    #[error("valuation data not consistent with any case: mutual={mutual} v3={v3} v4={v4} vI={vi}")]
    Inconsistent { mutual: bool, v3: u32, v4: u32, vi: u32 },
}

/// Identifier `<order, id>` of a finite group; several ids mean "one of".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupId {
    pub order: u64,
    pub ids: Vec<u64>,
}

impl GroupId {
    pub fn new(order: u64, id: u64) -> GroupId {
        GroupId { order, ids: vec![id] }
    }

    fn parse(s: &str) -> Option<GroupId> {
        let inner = s.strip_prefix('<')?.strip_suffix('>')?;
        let (o, i) = inner.split_once(',')?;
        let order = match o.split_once('^') {
            Some((b, e)) => b.trim().parse::<u64>().ok()?.checked_pow(e.trim().parse().ok()?)?,
            None => o.trim().parse().ok()?,
        };
        let mut ids = Vec::new();
        for alt in i.split('|') {
            match alt.split_once("..") {
                Some((a, b)) => {
                    let (a, b): (u64, u64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                    ids.extend(a..=b);
                }
                None => ids.push(alt.trim().parse().ok()?),
            }
        }
        ids.sort_unstable();
        ids.dedup();
        Some(GroupId { order, ids })
    }

    /// Every id of `other` is admitted by `self`.
    pub fn admits(&self, other: &GroupId) -> bool {
        self.order == other.order && other.ids.iter().all(|i| self.ids.contains(i))
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = &self.ids;
        let contiguous = ids.len() >= 3 && ids.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous {
            write!(f, "<{},{}..{}>", self.order, ids[0], ids[ids.len() - 1])
        } else {
            let s: Vec<String> = ids.iter().map(u64::to_string).collect();
            write!(f, "<{},{}>", self.order, s.join("|"))
        }
    }
}

/// One field's entry in a group list: an identified group, or a class-group
/// placeholder (`*` for (9,3,3), `**` for (9,9,3)) where no identifier is known.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Known(GroupId),
    Unknown(String),
}

impl Slot {
    fn admits(&self, printed: &Slot) -> bool {
        match (self, printed) {
            (_, Slot::Unknown(_)) => true,
            (Slot::Known(a), Slot::Known(b)) => a.admits(b),
            (Slot::Unknown(_), Slot::Known(_)) => false,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Known(g) => write!(f, "{g}"),
            Slot::Unknown(s) => write!(f, "{s}"),
        }
    }
}

/// Groups of all members of a multiplet; `;` separates the field of larger
/// rank from the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupList {
    pub parts: Vec<Vec<Slot>>,
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '<' | '(' | '[' => depth += 1,
            '>' | ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl GroupList {
    pub fn parse(s: &str) -> Result<GroupList, RuleError> {
        let err = || RuleError::Groups(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parts = Vec::new();
        for part in split_top(&compact, ';') {
            let mut slots = Vec::new();
            for item in split_top(part, ',').into_iter().filter(|x| !x.is_empty()) {
                let (base, mult) = match item.rfind('^') {
                    Some(p) if item[..p].ends_with('>') || item[..p].chars().all(|c| c == '*') => (&item[..p], item[p + 1..].parse::<usize>().map_err(|_| err())?),
                    _ => (item, 1),
                };
                let slot = if base.chars().all(|c| c == '*') {
                    Slot::Unknown(base.to_string())
                } else {
                    Slot::Known(GroupId::parse(base).ok_or_else(err)?)
                };
                slots.extend(std::iter::repeat_n(slot, mult));
            }
            if slots.is_empty() {
                return Err(err());
            }
            parts.push(slots);
        }
        Ok(GroupList { parts })
    }

    pub fn len(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether a printed group list is consistent with this prediction,
    /// comparing each `;`-separated part as a multiset.
    pub fn admits(&self, printed: &GroupList) -> bool {
        self.parts.len() == printed.parts.len()
            && self.parts.iter().zip(&printed.parts).all(|(a, b)| multiset_admits(a, b))
    }
}

fn multiset_admits(rule: &[Slot], printed: &[Slot]) -> bool {
    if rule.len() != printed.len() {
        return false;
    }
    fn go(rule: &[Slot], printed: &[Slot], used: &mut Vec<bool>) -> bool {
        let Some((first, rest)) = printed.split_first() else { return true };
        for i in 0..rule.len() {
            if !used[i] && rule[i].admits(first) {
                used[i] = true;
                if go(rule, rest, used) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    go(rule, printed, &mut vec![false; rule.len()])
}

impl fmt::Display for GroupList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for part in &self.parts {
            let mut items: Vec<String> = Vec::new();
            let mut k = 0;
            while k < part.len() {
                let mut n = 1;
                while k + n < part.len() && part[k + n] == part[k] {
                    n += 1;
                }
                items.push(if n == 1 { part[k].to_string() } else { format!("{}^{}", part[k], n) });
                k += n;
            }
            parts.push(items.join(","));
        }
        write!(f, "{}", parts.join(";"))
    }
}

/// Normalises abelian type invariants written with repetition exponents,
/// e.g. `[(0)^2,1;(1^2)^8,(1^3)^2]` and `(0)^2,1;(11)^8,(111)^2` both become
/// `0,0,1;11,11,11,11,11,11,11,11,111,111`. Entries inside a section are sorted.
pub fn canonical_ati(s: &str) -> Result<String, RuleError> {
    let err = || RuleError::Ati(s.to_string());
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(&compact);
    let mut sections = Vec::new();
    for sec in split_top(body, ';') {
        let mut entries: Vec<String> = Vec::new();
        for item in split_top(sec, ',').into_iter().filter(|x| !x.is_empty()) {
            let (ty, rep) = if let Some(inner) = item.strip_prefix('(') {
                let close = inner.find(')').ok_or_else(err)?;
                let rep = match &inner[close + 1..] {
                    "" => 1,
                    r => r.strip_prefix('^').and_then(|n| n.parse::<usize>().ok()).ok_or_else(err)?,
                };
                (&inner[..close], rep)
            } else {
                (item, 1)
            };
            let t = expand_type(ty).ok_or_else(err)?;
            entries.extend(std::iter::repeat_n(t, rep));
        }
        entries.sort_by(|a, b| b.cmp(a));
        sections.push(entries.join(","));
    }
    Ok(sections.join(";"))
}

// "2^21" -> "221", "1^3" -> "111", "21" -> "21"; digits sorted descending.
fn expand_type(ty: &str) -> Option<String> {
    let b = ty.as_bytes();
    let mut digits = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let d = b[k];
        if !d.is_ascii_digit() {
            return None;
        }
        k += 1;
        let mut rep = 1;
        if k < b.len() && b[k] == b'^' {
            rep = (b.get(k + 1)? - b'0') as usize;
            k += 2;
        }
        digits.extend(std::iter::repeat_n(d, rep));
    }
    if digits.is_empty() {
        return None;
    }
    digits.sort_by(|a, b| b.cmp(a));
    String::from_utf8(digits).ok()
}

/// Capitulation types are compared up to permutation: digit patterns are
/// sorted, other patterns compared literally.
pub fn canonical_kappa(s: &str) -> String {
    let mut k: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if k.starts_with('(') && k.ends_with(')') && k[1..k.len() - 1].matches('(').count() == k[1..k.len() - 1].matches(')').count() {
        k = k[1..k.len() - 1].to_string();
    }
    if k.chars().all(|c| c.is_ascii_digit()) {
        let mut d: Vec<char> = k.chars().collect();
        d.sort_unstable();
        d.into_iter().collect()
    } else {
        k
    }
}

fn canonical_tau2(s: &str) -> String {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.starts_with('[') {
        canonical_ati(&compact).unwrap_or(compact)
    } else {
        compact
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerPrediction {
    /// Alternative group lists; usually exactly one.
    pub groups: Vec<GroupList>,
    pub kappa: Option<String>,
    pub tau: Option<String>,
    /// Exact length of the 3-class field tower when known.
    pub length: Option<u8>,
    pub genus_ati: Option<String>,
    pub principal_factors: Option<String>,
    /// Groups printed for a known exceptional conductor, if any.
    pub exception: Option<GroupList>,
}

impl TowerPrediction {
    pub fn admits(&self, printed: &GroupList) -> bool {
        self.groups.iter().any(|g| g.admits(printed))
    }

    pub fn groups_display(&self) -> String {
        self.groups.iter().map(GroupList::to_string).collect::<Vec<_>>().join(" or ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RuleOutcome {
    Rule(TowerPrediction),
    Ambiguous { reason: String },
    NoRule { reason: String },
}

impl RuleOutcome {
    pub fn prediction(&self) -> Option<&TowerPrediction> {
        match self {
            RuleOutcome::Rule(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for RuleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleOutcome::Rule(p) => {
                write!(f, "{}", p.groups_display())?;
                if let Some(k) = &p.kappa {
                    write!(f, ", kappa {k}")?;
                }
                if let Some(l) = p.length {
                    write!(f, ", length {l}")?;
                }
                Ok(())
            }
            RuleOutcome::Ambiguous { reason } => write!(f, "ambiguous ({reason})"),
            RuleOutcome::NoRule { reason } => write!(f, "no rule ({reason})"),
        }
    }
}

#[derive(Debug, Clone)]
struct RuleRow {
    family: String,
    labels: Vec<Label>,
    v: Option<Vec<u32>>,
    key: String,
    fields: BTreeMap<String, String>,
    groups: Option<Vec<GroupList>>,
    kappa: Option<String>,
    tau: Option<String>,
    length: Option<u8>,
    genus_ati: Option<String>,
}

impl RuleRow {
    fn prediction(&self) -> TowerPrediction {
        TowerPrediction {
            groups: self.groups.clone().unwrap_or_default(),
            kappa: self.kappa.clone(),
            tau: self.tau.clone(),
            length: self.length,
            genus_ati: self.genus_ati.clone(),
            principal_factors: None,
            exception: None,
        }
    }

    fn outcome(&self) -> RuleOutcome {
        if self.groups.is_none() {
            RuleOutcome::Ambiguous { reason: format!("{} rows disagree for this context", self.family) }
        } else {
            RuleOutcome::Rule(self.prediction())
        }
    }
}

const RULES_CSV: &str = include_str!("../data/rules.csv");

fn opt(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_string())
}

fn parse_fields(family: &str, key: &str) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    if family.starts_with("law") {
        for tok in key.split(' ') {
            if let Some((k, v)) = tok.split_once('=') {
                let v = match k {
                    "tau" => canonical_ati(v).unwrap_or_else(|_| v.to_string()),
                    "kappa" => canonical_kappa(v),
                    _ => canonical_tau2(v),
                };
                m.insert(k.to_string(), v);
            }
        }
    }
    m
}

fn rules() -> &'static [RuleRow] {
    static RULES: OnceLock<Vec<RuleRow>> = OnceLock::new();
    RULES.get_or_init(|| {
        let mut rdr = csv::Reader::from_reader(RULES_CSV.as_bytes());
        rdr.records()
            .map(|rec| {
                let r = rec.expect("rule table is well formed");
                let family = r[0].to_string();
                let labels = r[1].split('|').filter(|x| !x.is_empty()).map(|l| Label::parse(l).expect("rule label")).collect();
                let v = match &r[2] {
                    "" | "*" => None,
                    s => Some(s.split('|').map(|x| x.parse().expect("rule v")).collect()),
                };
                let key = match (family.as_str(), &r[3]) {
                    ("quartet", k) if k != "*" => canonical_ati(k).expect("rule ati"),
                    (_, k) => k.to_string(),
                };
                let groups = match &r[4] {
                    "ambiguous" => None,
                    g => Some(g.split(" or ").map(|x| GroupList::parse(x).expect("rule groups")).collect()),
                };
                RuleRow {
                    fields: parse_fields(&family, &key),
                    family,
                    labels,
                    v,
                    key,
                    groups,
                    kappa: opt(&r[5]),
                    tau: opt(&r[6]),
                    length: r[7].parse().ok(),
                    genus_ati: opt(&r[8]).map(|a| canonical_ati(&a).expect("rule ati")),
                }
            })
            .collect()
    })
}

/// The raw rule table text.
pub fn rule_table() -> &'static str {
    RULES_CSV
}

/// B(F) = min{a·b², a²·b}.
pub fn principal_factor(a: u64, b: u64) -> Result<u64, RuleError> {
    if crate::arith::gcd(a, b) != 1 {
        return Err(RuleError::NotCoprime(a, b));
    }
    Ok((a * b * b).min(a * a * b))
}

fn family_lookup(family: &str, key: &str) -> Option<&'static RuleRow> {
    rules().iter().find(|r| r.family == family && r.key == key)
}

/// Doublet rule keyed by the number n of prime divisors of the principal factor.
pub fn two_prime_rule(n: u32) -> Result<TowerPrediction, RuleError> {
    family_lookup("doublet_n", &n.to_string()).map(RuleRow::prediction).ok_or(RuleError::PrimeCount(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum GenusClass {
    Regular(TowerPrediction),
    Singular(TowerPrediction),
    SuperSingular { candidates: Vec<GroupList> },
}

/// Doublet rule keyed by the 3-valuation v of the genus class number;
/// super-singular candidates are narrowed by the genus class group shape when given.
pub fn genus_rule(v: u32, genus_shape: Option<&str>) -> GenusClass {
    match v {
        0..=2 => GenusClass::Regular(
            family_lookup("genus_v", &v.to_string())
                .map(RuleRow::prediction)
                .unwrap_or(TowerPrediction {
                    groups: vec![],
                    kappa: None,
                    tau: None,
                    length: None,
                    genus_ati: None,
                    principal_factors: None,
                    exception: None,
                }),
        ),
        3 => GenusClass::Singular(family_lookup("genus_v", "3").expect("singular rule").prediction()),
        _ => {
            let shape: Option<String> = genus_shape.map(|s| s.chars().filter(|c| !c.is_whitespace()).collect());
            let candidates = rules()
                .iter()
                .filter(|r| r.family == "supersingular")
                .filter(|r| shape.as_ref().map_or(r.v.as_ref().is_some_and(|vs| vs.contains(&v)), |s| &r.key == s))
                .flat_map(|r| r.groups.clone().unwrap_or_default())
                .collect();
            GenusClass::SuperSingular { candidates }
        }
    }
}

/// v = v₃(I) − 5 + v₃ + v₄, checked against the admissible cases.
pub fn two_prime_genus_valuation(mutual: bool, v3: u32, v4: u32, vi: u32) -> Result<u32, RuleError> {
    let bad = RuleError::Inconsistent { mutual, v3, v4, vi };
    if vi > 3 {
        return Err(bad);
    }
    let v = (vi + v3 + v4).checked_sub(5).ok_or(bad.clone())?;
    let ok = if !mutual {
        (v3, v4, vi) == (1, 1, 3)
    } else if v3 == 2 || v4 == 2 {
        v3 == v4 && vi >= 2
    } else {
        v3 >= 3 && v4 >= 3 && vi >= 2
    };
    if ok {
        Ok(v)
    } else {
        Err(bad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelGeometry {
    Line,
    Plane,
    Space,
}

/// Order of the capitulation kernel and its shape inside the (3,3,3) space.
pub fn capitulation_lookup(unit_norm_index: u32) -> Result<(u32, KernelGeometry), RuleError> {
    match unit_norm_index {
        1 => Ok((3, KernelGeometry::Line)),
        3 => Ok((9, KernelGeometry::Plane)),
        9 => Ok((27, KernelGeometry::Space)),
        n => Err(RuleError::UnitIndex(n)),
    }
}

/// Context for a quartet rule: v of the partial doublet conductor (3 standing
/// for any v ≥ 3) and the class groups of the 13 bicyclic bicubic subfields.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QuartetContext {
    pub v: Option<u32>,
    pub ati: Option<String>,
}

impl QuartetContext {
    /// Parses `v=1 ati=(0)^2,1;...`; `v=3+` is read as 3.
    pub fn parse(s: &str) -> Result<QuartetContext, RuleError> {
        let mut ctx = QuartetContext::default();
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("v=") {
                ctx.v = v.trim_end_matches('+').parse().ok();
            } else if let Some(a) = tok.strip_prefix("ati=") {
                ctx.ati = Some(canonical_ati(a)?);
            }
        }
        Ok(ctx)
    }
}

/// Principal factor shapes attached to the graph theorems.
pub fn principal_factor_shape(label: Label) -> Option<&'static str> {
    match label {
        Label::Quartet { category: Category::III, graph: 6 | 9 } => Some("B = q_j for all four fields"),
        Label::Quartet { category: Category::III, graph: 7 } => Some("B = q_i*q_k for two fields, q_i^2*q_k for the other two"),
        Label::Quartet { category: Category::III, graph: 5 } => {
            Some("B = q_i*q_j*q_k, q_i^2*q_j*q_k, q_i*q_j^2*q_k, q_i*q_j*q_k^2")
        }
        Label::Quartet { category: Category::III, graph: 8 } => Some("B = q_k for all four fields"),
        _ => None,
    }
}

pub fn quartet_rule(label: Label, ctx: &QuartetContext) -> RuleOutcome {
    let Label::Quartet { .. } = label else {
        return RuleOutcome::NoRule { reason: format!("{label} is not a quartet") };
    };
    let row = rules().iter().filter(|r| r.family == "quartet" && r.labels.contains(&label)).find(|r| {
        let v_ok = match (&r.v, ctx.v) {
            (None, _) => true,
            (Some(vs), Some(v)) => vs.contains(&v),
            (Some(_), None) => false,
        };
        let ati_ok = r.key == "*" || ctx.ati.as_deref() == Some(r.key.as_str());
        v_ok && ati_ok
    });
    match row {
        Some(r) => match r.outcome() {
            RuleOutcome::Rule(mut p) => {
                p.principal_factors = principal_factor_shape(label).map(str::to_string);
                RuleOutcome::Rule(p)
            }
            other => other,
        },
        None => RuleOutcome::NoRule { reason: format!("no rule for {label} with v={:?}, ati={:?}", ctx.v, ctx.ati) },
    }
}

/// Quartet rule plus the printed exceptional groups when `c` is a known exception.
pub fn quartet_rule_for(c: u64, label: Label, ctx: &QuartetContext) -> RuleOutcome {
    let out = quartet_rule(label, ctx);
    match (out, crate::census::known_exception(c)) {
        (RuleOutcome::Rule(mut p), Some(e)) => {
            p.exception = Some(e);
            RuleOutcome::Rule(p)
        }
        (RuleOutcome::NoRule { reason }, Some(e)) => RuleOutcome::NoRule { reason: format!("{reason}; known exception {e}") },
        (o, _) => o,
    }
}

fn law_lookup(family: &str, query: &BTreeMap<String, String>) -> RuleOutcome {
    let hits: Vec<&RuleRow> = rules()
        .iter()
        .filter(|r| r.family == family)
        .filter(|r| r.fields.iter().all(|(k, v)| query.get(k) == Some(v)))
        .collect();
    // Prefer the rows that use the most of the supplied information.
    let best = hits.iter().map(|r| r.fields.len()).max();
    let top: Vec<&&RuleRow> = hits.iter().filter(|r| Some(r.fields.len()) == best).collect();
    match top.as_slice() {
        [r] => r.outcome(),
        [] => {
            let needs_tau2 = rules()
                .iter()
                .filter(|r| r.family == family && r.fields.contains_key("tau2"))
                .any(|r| r.fields.iter().all(|(k, v)| k == "tau2" || query.get(k) == Some(v)));
            let reason = if needs_tau2 && !query.contains_key("tau2") {
                "second-order invariants tau2 required".to_string()
            } else {
                "pattern not covered".to_string()
            };
            RuleOutcome::NoRule { reason }
        }
        _ => RuleOutcome::Ambiguous { reason: "several patterns apply".into() },
    }
}

fn law_query(tau: Option<&str>, kappa: &str, tau2: Option<&str>) -> Result<BTreeMap<String, String>, RuleError> {
    let mut q = BTreeMap::new();
    if let Some(t) = tau {
        q.insert("tau".into(), canonical_ati(t)?);
    }
    q.insert("kappa".into(), canonical_kappa(kappa));
    if let Some(t2) = tau2 {
        q.insert("tau2".into(), canonical_tau2(t2));
    }
    Ok(q)
}

/// Laws for 3-class group (3,3), keyed by the Artin pattern and optionally τ₂
/// or second-order invariants.
pub fn stage_rule_33(tau: Option<&str>, kappa: &str, tau2: Option<&str>) -> Result<RuleOutcome, RuleError> {
    Ok(law_lookup("law33", &law_query(tau, kappa, tau2)?))
}

/// Laws for 3-class group (3,3,3).
pub fn stage_rule_333(tau: &str, kappa: &str) -> Result<RuleOutcome, RuleError> {
    Ok(law_lookup("law333", &law_query(Some(tau), kappa, None)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Category::*;

    fn gl(s: &str) -> GroupList {
        GroupList::parse(s).unwrap()
    }

    #[test]
    fn group_lists() {
        let g = gl("<81,13>^2;<81,7>^2");
        assert_eq!(g.parts.len(), 2);
        assert_eq!(g.len(), 4);
        assert_eq!(g.to_string(), "<81,13>^2;<81,7>^2");
        assert_eq!(gl("<3^7,65|67>^4").parts[0][0], Slot::Known(GroupId { order: 2187, ids: vec![65, 67] }));
        assert_eq!(gl("<243,28..30>").to_string(), "<243,28..30>");
        assert_eq!(gl("*,**").parts[0], vec![Slot::Unknown("*".into()), Slot::Unknown("**".into())]);
        assert_eq!(gl("*^2;<81,7>^2").parts[0], vec![Slot::Unknown("*".into()); 2]);
        assert!(gl("<243,28..30>^4").admits(&gl("<243,28>^4")));
        assert!(!gl("<243,28>^4").admits(&gl("<243,29>^4")));
        assert!(gl("<243,42>;<243,8>^3").admits(&gl("*;<243,8>^3")));
        assert!(gl("<243,27>,<243,28>^3").admits(&gl("<243,28>,<243,27>,<243,28>^2")));
        assert!(!gl("<81,7>^4").admits(&gl("<81,7>^3")));
        assert!(GroupList::parse("<81,7").is_err());
    }

    #[test]
    fn ati_forms_agree() {
        let a = canonical_ati("[(0)^2,1;(1^2)^8,(1^3)^2]").unwrap();
        let b = canonical_ati("(0)^2,1;(11)^8,(111)^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical_ati("[(0)^3;(21)^6,(2^2)^3,2^21]").unwrap().split([',', ';']).count(), 13);
        assert_eq!(canonical_ati("21^2").unwrap(), "211");
        assert!(canonical_ati("(1^2").is_err());
    }

    #[test]
    fn principal_factor_examples() {
        assert_eq!(principal_factor(7, 1), Ok(7));
        assert_eq!(principal_factor(2, 3), Ok(12));
        assert_eq!(principal_factor(271, 1), Ok(271));
        assert_eq!(principal_factor(1, 1), Ok(1));
        assert_eq!(principal_factor(6, 4), Err(RuleError::NotCoprime(6, 4)));
    }

    #[test]
    fn doublet_rules() {
        let p = two_prime_rule(2).unwrap();
        assert_eq!((p.groups[0].to_string(), p.kappa.as_deref(), p.length), ("<9,2>^2".into(), Some("a.1 (0000)"), Some(1)));
        let p = two_prime_rule(1).unwrap();
        assert_eq!((p.groups[0].to_string(), p.length), ("<27,4>^2".into(), Some(2)));
        assert_eq!(two_prime_rule(3), Err(RuleError::PrimeCount(3)));
        // n = 2 corresponds to v = 1, n = 1 to v = 2.
        for (n, v) in [(2, 1), (1, 2)] {
            let GenusClass::Regular(p) = genus_rule(v, None) else { panic!() };
            assert_eq!(p.groups, two_prime_rule(n).unwrap().groups);
        }
        let GenusClass::Singular(p) = genus_rule(3, None) else { panic!() };
        assert_eq!(p.groups[0].to_string(), "<81,3>^2");
        let GenusClass::SuperSingular { candidates } = genus_rule(4, Some("(3,3,3,3)")) else { panic!() };
        assert_eq!(candidates.len(), 3);
        let GenusClass::SuperSingular { candidates } = genus_rule(4, None) else { panic!() };
        assert_eq!(candidates.len(), 6);
    }

    #[test]
    fn valuations() {
        assert_eq!(two_prime_genus_valuation(false, 1, 1, 3), Ok(0));
        assert_eq!(two_prime_genus_valuation(true, 2, 2, 2), Ok(1));
        assert_eq!(two_prime_genus_valuation(true, 2, 2, 3), Ok(2));
        assert_eq!(two_prime_genus_valuation(true, 3, 3, 2), Ok(3));
        assert!(two_prime_genus_valuation(false, 2, 1, 3).is_err());
        assert!(two_prime_genus_valuation(true, 2, 3, 3).is_err());
        assert!(two_prime_genus_valuation(true, 1, 1, 3).is_err());
    }

    #[test]
    fn capitulation_is_a_bijection() {
        let out: Vec<_> = [1, 3, 9].iter().map(|&i| capitulation_lookup(i).unwrap()).collect();
        assert_eq!(out, vec![(3, KernelGeometry::Line), (9, KernelGeometry::Plane), (27, KernelGeometry::Space)]);
        assert_eq!(capitulation_lookup(27), Err(RuleError::UnitIndex(27)));
    }

    fn ctx(s: &str) -> QuartetContext {
        QuartetContext::parse(s).unwrap()
    }

    #[test]
    fn quartet_examples() {
        let p = quartet_rule(Label::quartet(III, 2), &QuartetContext::default());
        assert_eq!(p.prediction().unwrap().groups[0].to_string(), "<9,2>^4");
        assert_eq!(p.prediction().unwrap().length, Some(1));
        let p = quartet_rule(Label::quartet(III, 6), &ctx("v=1"));
        let p = p.prediction().unwrap();
        assert_eq!((p.groups[0].to_string(), p.kappa.as_deref(), p.length), ("<81,7>^4".into(), Some("a.3 (2000)"), Some(2)));
        let p = quartet_rule(Label::quartet(III, 5), &ctx("v=1 ati=[(0)^2,1;(1^2)^7,(21)^3]"));
        assert!(p.prediction().unwrap().admits(&gl("<243,28>^4")));
        let p = quartet_rule(Label::quartet(I, 2), &ctx("ati=[(0)^3;(21)^9,21^2]"));
        assert_eq!(p.prediction().unwrap().groups[0].to_string(), "<243,42>;<243,8>^3");
        assert!(matches!(quartet_rule(Label::quartet(III, 7), &ctx("v=2")), RuleOutcome::Ambiguous { .. }));
        assert!(matches!(quartet_rule(Label::quartet(III, 6), &ctx("v=3")), RuleOutcome::NoRule { .. }));
        assert!(matches!(quartet_rule(Label::Singlet, &ctx("")), RuleOutcome::NoRule { .. }));
    }

    #[test]
    fn laws_for_33() {
        let g = |o: RuleOutcome| o.prediction().map(|p| p.groups_display());
        assert_eq!(g(stage_rule_33(Some("[(1)^4]"), "(0000)", None).unwrap()), Some("<9,2>".into()));
        assert_eq!(g(stage_rule_33(Some("[21,(1^2)^3]"), "(0100)", None).unwrap()), Some("<81,10>".into()));
        assert_eq!(g(stage_rule_33(Some("[(1^2)^3,21]"), "(0002)", None).unwrap()), Some("<81,8>".into()));
        let needs = stage_rule_33(Some("[21,(1^2)^3]"), "(0000)", None).unwrap();
        assert!(matches!(needs, RuleOutcome::NoRule { ref reason } if reason.contains("tau2")));
        assert_eq!(g(stage_rule_33(Some("[21,(1^2)^3]"), "(0000)", Some("[21]")).unwrap()), Some("<243,28..30>".into()));
        let c21 = stage_rule_33(
            Some("[22,21,21,21]"),
            "(0231)",
            Some("(11;[22;(211)^4],[21;211,(31)^3],[21;211,(21)^3]^2)"),
        )
        .unwrap();
        let p = c21.prediction().unwrap();
        assert_eq!((p.groups_display(), p.length), ("<2187,307|308>".into(), Some(3)));
        assert!(matches!(stage_rule_33(Some("[3,3,3,3]"), "(1234)", None).unwrap(), RuleOutcome::NoRule { .. }));
    }

    #[test]
    fn laws_for_333() {
        let p = stage_rule_333("[(1^2)^13]", "(O^13)").unwrap();
        assert_eq!((p.prediction().unwrap().groups_display(), p.prediction().unwrap().length), ("<27,5>".into(), Some(1)));
        let p = stage_rule_333("[(21)^4,(1^2)^9]", "(O^9P^4)").unwrap();
        assert_eq!(p.prediction().unwrap().groups_display(), "<81,14>");
        let p = stage_rule_333("[111;1111,(111)^3,(21)^9]", "(O^3P^10)").unwrap();
        let p = p.prediction().unwrap();
        assert_eq!(p.groups[0].parts[0][0], Slot::Known(GroupId { order: 6561, ids: (261262..=261270).collect() }));
        assert_eq!(p.length, Some(3));
    }
}
