//! Category and graph of a conductor from its residue graph, with the predicted
//! 3-class rank of every field sharing the conductor.

use crate::conductor::Conductor;
use crate::residue_graph::{build_graph, symbol_matrix, GraphError, ResidueGraph};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("classification needs t in 1..=3, got t = {0}")]
    UnsupportedT(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot parse symbol {0:?}")]
    Symbol(String),
    #[error("unknown label {0:?}")]
    Label(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Category {
    I,
    II,
    III,
    IV,
    V,
}

impl Category {
    pub const ALL: [Category; 5] = [Category::I, Category::II, Category::III, Category::IV, Category::V];

    pub fn roman(self) -> &'static str {
        match self {
            Category::I => "I",
            Category::II => "II",
            Category::III => "III",
            Category::IV => "IV",
            Category::V => "V",
        }
    }

    pub fn from_roman(s: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.roman() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DoubletGraph {
    G1,
    G2,
    G3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum Label {
    Singlet,
    Doublet { graph: DoubletGraph },
    Quartet { category: Category, graph: u8 },
}

impl Label {
    /// Every (category, graph) pair a quartet can receive, in table order.
    pub const QUARTETS: [(Category, u8); 17] = [
        (Category::I, 1),
        (Category::I, 2),
        (Category::II, 1),
        (Category::II, 2),
        (Category::III, 1),
        (Category::III, 2),
        (Category::III, 3),
        (Category::III, 4),
        (Category::III, 5),
        (Category::III, 6),
        (Category::III, 7),
        (Category::III, 8),
        (Category::III, 9),
        (Category::IV, 1),
        (Category::IV, 2),
        (Category::IV, 3),
        (Category::V, 1),
    ];

    pub fn quartet(category: Category, graph: u8) -> Label {
        Label::Quartet { category, graph }
    }

    pub fn parse(s: &str) -> Result<Label, ClassifyError> {
        let bad = || ClassifyError::Label(s.to_string());
        match s {
            "singlet" => return Ok(Label::Singlet),
            "G1" => return Ok(Label::Doublet { graph: DoubletGraph::G1 }),
            "G2" => return Ok(Label::Doublet { graph: DoubletGraph::G2 }),
            "G3" => return Ok(Label::Doublet { graph: DoubletGraph::G3 }),
            _ => {}
        }
        let (cat, g) = s.split_once('/').ok_or_else(bad)?;
        let category = Category::from_roman(cat).ok_or_else(bad)?;
        let graph: u8 = g.parse().map_err(|_| bad())?;
        let label = Label::quartet(category, graph);
        if Label::QUARTETS.contains(&(category, graph)) {
            Ok(label)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Singlet => write!(f, "singlet"),
            Label::Doublet { graph } => write!(f, "{graph:?}"),
            Label::Quartet { category, graph } => write!(f, "{}/{}", category.roman(), graph),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryGraph {
    pub label: Label,
    pub symbol: String,
    pub primes: Vec<u64>,
}

/// Decision tree on the counters of a three-vertex residue graph.
pub fn quartet_label(g: &ResidueGraph) -> (Category, u8) {
    use Category::*;
    let (bid, e, att, rep) = (g.n_bidirectional, g.n_edges, g.n_attractive, g.n_repulsive);
    match (bid, e) {
        (3, _) => (V, 1),
        (2, 4) => (IV, 2),
        (2, _) => (IV, 3),
        (1, 2) => (III, 5),
        (1, 3) if rep == 1 => (III, 6),
        (1, 3) => (III, 7),
        (1, _) => match (att, rep) {
            (1, 1) => (III, 9),
            (1, 2) => (IV, 1),
            _ => (III, 8),
        },
        (_, 0) if g.delta_zero == Some(true) => (I, 1),
        (_, 0) => (III, 1),
        (_, 1) => (III, 2),
        (_, 2) if rep == 1 => (I, 2),
        (_, 2) if att == 1 => (II, 1),
        (_, 2) => (III, 3),
        (_, _) if att == 1 && rep == 1 => (II, 2),
        _ => (III, 4),
    }
}

pub fn doublet_from_graph(g: &ResidueGraph) -> DoubletGraph {
    match g.n_edges {
        0 => DoubletGraph::G1,
        1 => DoubletGraph::G2,
        _ => DoubletGraph::G3,
    }
}

pub fn classify(cond: &Conductor) -> Result<CategoryGraph, ClassifyError> {
    match cond.t {
        1 => Ok(CategoryGraph {
            label: Label::Singlet,
            symbol: format!("{{{}}}", cond.ramified_primes[0]),
            primes: cond.ramified_primes.clone(),
        }),
        2 | 3 => {
            let g = build_graph(&symbol_matrix(cond)?)?;
            Ok(classify_graph(&g))
        }
        t => Err(ClassifyError::UnsupportedT(t)),
    }
}

pub fn classify_graph(g: &ResidueGraph) -> CategoryGraph {
    let label = if g.primes.len() == 2 {
        Label::Doublet { graph: doublet_from_graph(g) }
    } else {
        let (category, graph) = quartet_label(g);
        Label::Quartet { category, graph }
    };
    CategoryGraph { label, symbol: canonical_symbol(g, label), primes: g.primes.clone() }
}

pub fn doublet_graph(cond: &Conductor) -> Result<DoubletGraph, ClassifyError> {
    if cond.t != 2 {
        return Err(ClassifyError::UnsupportedT(cond.t));
    }
    Ok(doublet_from_graph(&build_graph(&symbol_matrix(cond)?)?))
}

/// Predicted 3-class ranks of the fields sharing a conductor.
pub fn rank_distribution(label: &Label) -> Vec<u32> {
    match label {
        Label::Singlet => vec![0],
        Label::Doublet { graph: DoubletGraph::G3 } => vec![2, 2],
        Label::Doublet { .. } => vec![1, 1],
        Label::Quartet { category, .. } => match category {
            Category::III => vec![2, 2, 2, 2],
            Category::I => vec![3, 2, 2, 2],
            Category::II => vec![3, 3, 2, 2],
            Category::IV => vec![3, 3, 3, 3],
            Category::V => vec![4, 4, 4, 4],
        },
    }
}

// Shape of each graph as a chain of role letters; `;x` appends an isolated vertex.
fn template(label: Label) -> &'static str {
    use Category::*;
    match label {
        Label::Singlet => "i",
        Label::Doublet { graph: DoubletGraph::G1 } => "i,j",
        Label::Doublet { graph: DoubletGraph::G2 } => "i->j",
        Label::Doublet { graph: DoubletGraph::G3 } => "i<->j",
        Label::Quartet { category, graph } => match (category, graph) {
            (III, 1) | (I, 1) => "i,j,k",
            (III, 2) => "i->j;k",
            (III, 3) => "i->j->k",
            (III, 4) => "i->j->k->i",
            (III, 5) => "i<->j;k",
            (III, 6) => "i<->j->k",
            (III, 7) => "i<->j<-k",
            (III, 8) => "k->i<->j<-k",
            (III, 9) => "k->i<->j->k",
            (I, 2) => "i<-j->k",
            (II, 1) => "i->j<-k",
            (II, 2) => "k->i<-j->k",
            (IV, 1) => "k<-i<->j->k",
            (IV, 2) => "i<->j<->k",
            (IV, 3) => "k->i<->j<->k",
            _ => "i<->j<->k<->i",
        },
    }
}

/// Parsed form of a symbol string: vertices, directed edges and an optional δ flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolShape<T> {
    pub vertices: Vec<T>,
    pub edges: Vec<(T, T)>,
    pub delta_zero: Option<bool>,
}

/// Parses strings like `13->7<->223<-13`, `9,7,31;delta!=0` or `{13->7;9}`.
pub fn parse_shape(s: &str) -> Result<SymbolShape<String>, ClassifyError> {
    let err = || ClassifyError::Symbol(s.to_string());
    let body = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut shape = SymbolShape { vertices: Vec::new(), edges: Vec::new(), delta_zero: None };
    let add = |v: &str, shape: &mut SymbolShape<String>| {
        if !shape.vertices.iter().any(|w| w == v) {
            shape.vertices.push(v.to_string());
        }
    };
    for part in body.split(';').map(str::trim) {
        match part {
            "delta=0" => shape.delta_zero = Some(true),
            "delta!=0" => shape.delta_zero = Some(false),
            p if p.contains(',') => {
                for v in p.split(',') {
                    add(v.trim(), &mut shape);
                }
            }
            p => {
                let mut toks: Vec<String> = Vec::new();
                let mut rest = p;
                while !rest.is_empty() {
                    if let Some(r) = rest.strip_prefix("<->") {
                        toks.push("<->".into());
                        rest = r;
                    } else if let Some(r) = rest.strip_prefix("->") {
                        toks.push("->".into());
                        rest = r;
                    } else if let Some(r) = rest.strip_prefix("<-") {
                        toks.push("<-".into());
                        rest = r;
                    } else {
                        let end = rest.find(['<', '-']).unwrap_or(rest.len());
                        if end == 0 {
                            return Err(err());
                        }
                        toks.push(rest[..end].trim().to_string());
                        rest = &rest[end..];
                    }
                }
                if toks.len().is_multiple_of(2) {
                    return Err(err());
                }
                for k in (0..toks.len()).step_by(2) {
                    add(&toks[k], &mut shape);
                }
                for k in (1..toks.len()).step_by(2) {
                    let (a, b) = (toks[k - 1].clone(), toks[k + 1].clone());
                    match toks[k].as_str() {
                        "->" => shape.edges.push((a, b)),
                        "<-" => shape.edges.push((b, a)),
                        "<->" => {
                            shape.edges.push((a.clone(), b.clone()));
                            shape.edges.push((b, a));
                        }
                        _ => return Err(err()),
                    }
                }
            }
        }
    }
    if shape.vertices.is_empty() {
        return Err(err());
    }
    shape.edges.sort();
    shape.edges.dedup();
    Ok(shape)
}

/// Parses a concrete symbol into prime vertices and prime edges.
pub fn parse_symbol(s: &str) -> Result<SymbolShape<u64>, ClassifyError> {
    let shape = parse_shape(s)?;
    let num = |v: &String| v.parse::<u64>().map_err(|_| ClassifyError::Symbol(s.to_string()));
    let mut vertices = shape.vertices.iter().map(num).collect::<Result<Vec<_>, _>>()?;
    vertices.sort_unstable();
    let mut edges = shape
        .edges
        .iter()
        .map(|(a, b)| Ok((num(a)?, num(b)?)))
        .collect::<Result<Vec<_>, ClassifyError>>()?;
    edges.sort_unstable();
    Ok(SymbolShape { vertices, edges, delta_zero: shape.delta_zero })
}

/// True when the printed symbol describes exactly the computed graph.
pub fn symbol_matches(g: &ResidueGraph, printed: &str) -> bool {
    let Ok(p) = parse_symbol(printed) else { return false };
    let mut vs = g.primes.clone();
    vs.sort_unstable();
    p.vertices == vs
        && p.edges == g.prime_edges()
        && p.delta_zero.is_none_or(|d| g.delta_zero == Some(d))
}

fn canonical_symbol(g: &ResidueGraph, label: Label) -> String {
    let tpl = template(label);
    let roles = ['i', 'j', 'k'];
    let n = g.primes.len();
    let shape = parse_shape(tpl).expect("templates parse");
    let mut best: Option<Vec<u64>> = None;
    // Try every assignment of primes to roles, keep the lexicographically least valid one.
    let perms: Vec<Vec<usize>> = match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]],
    };
    for p in perms {
        let prime_of = |r: &str| {
            let idx = roles.iter().position(|&c| c.to_string() == r).expect("role letter");
            g.primes[p[idx]]
        };
        let mut edges: Vec<(u64, u64)> = shape.edges.iter().map(|(a, b)| (prime_of(a), prime_of(b))).collect();
        edges.sort_unstable();
        if edges == g.prime_edges() {
            let key: Vec<u64> = p.iter().map(|&i| g.primes[i]).collect();
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    let assign = best.unwrap_or_else(|| g.primes.clone());
    let mut out = String::from("{");
    for ch in tpl.chars() {
        match roles.iter().position(|&c| c == ch) {
            Some(idx) => out.push_str(&assign[idx].to_string()),
            None => out.push(ch),
        }
    }
    if let Some(dz) = g.delta_zero.filter(|_| n == 3 && g.n_edges == 0) {
        out.push_str(if dz { ";delta=0" } else { ";delta!=0" });
    }
    out.push('}');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductor::decompose;
    use crate::residue_graph::ResidueGraph;

    fn cg(c: u64) -> CategoryGraph {
        classify(&decompose(3, c).unwrap()).unwrap()
    }

    fn q(cat: Category, g: u8) -> Label {
        Label::quartet(cat, g)
    }

    #[test]
    fn examples() {
        use Category::*;
        assert_eq!(cg(8541).label, q(III, 6));
        assert_eq!(cg(8541).symbol, "{9<->73->13}");
        assert_eq!(cg(4599).label, q(III, 7));
        assert_eq!(cg(16471).label, q(III, 9));
        assert_eq!(cg(14049).label, q(III, 5));
        assert_eq!(cg(20293).label, q(III, 8));
        assert_eq!(cg(6327).label, q(II, 2));
        assert_eq!(cg(7657).label, q(I, 2));
        assert_eq!(cg(38311).label, q(IV, 3));
        assert_eq!(cg(1953).symbol, "{7,9,31;delta!=0}");
        assert_eq!(cg(7).label, Label::Singlet);
    }

    #[test]
    fn doublets() {
        let g = |c| doublet_graph(&decompose(3, c).unwrap()).unwrap();
        assert_eq!(g(657), DoubletGraph::G3);
        assert_eq!(g(1267), DoubletGraph::G3);
        assert_ne!(g(63), DoubletGraph::G3);
        assert!(doublet_graph(&decompose(3, 819).unwrap()).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_distribution(&Label::Singlet), vec![0]);
        assert_eq!(rank_distribution(&q(Category::II, 1)), vec![3, 3, 2, 2]);
        assert_eq!(rank_distribution(&q(Category::V, 1)), vec![4, 4, 4, 4]);
        assert_eq!(rank_distribution(&Label::Doublet { graph: DoubletGraph::G2 }), vec![1, 1]);
    }

    #[test]
    fn octets_are_rejected() {
        let k = decompose(3, 7 * 13 * 19 * 31).unwrap();
        assert_eq!(classify(&k), Err(ClassifyError::UnsupportedT(4)));
    }

    fn synthetic(edges: &[(usize, usize)], delta_zero: bool) -> ResidueGraph {
        let e = |i, j| edges.contains(&(i, j));
        let mut bid = 0;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if e(i, j) && e(j, i) {
                bid += 1;
            }
        }
        let att = (0..3).filter(|&v| (0..3).filter(|&w| w != v).all(|w| e(w, v))).count();
        let rep = (0..3).filter(|&v| (0..3).filter(|&w| w != v).all(|w| e(v, w))).count();
        ResidueGraph {
            primes: vec![7, 13, 19],
            edges: edges.to_vec(),
            isolated: vec![],
            n_bidirectional: bid,
            n_edges: edges.len(),
            n_attractive: att,
            n_repulsive: rep,
            delta_zero: Some(delta_zero),
        }
    }

    #[test]
    fn every_digraph_gets_a_label_matching_its_template() {
        let all = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..64 {
            let edges: Vec<(usize, usize)> = (0..6).filter(|b| mask >> b & 1 == 1).map(|b| all[b]).collect();
            for dz in [false, true] {
                let g = synthetic(&edges, dz);
                let c = classify_graph(&g);
                assert!(symbol_matches(&g, &c.symbol), "{mask} {} {}", c.label, c.symbol);
                seen.insert(c.label);
            }
        }
        assert_eq!(seen.len(), Label::QUARTETS.len());
    }

    #[test]
    fn permuting_primes_keeps_label() {
        let all = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
        for mask in 0u32..64 {
            let edges: Vec<(usize, usize)> = (0..6).filter(|b| mask >> b & 1 == 1).map(|b| all[b]).collect();
            let base = classify_graph(&synthetic(&edges, false));
            let perm = [2usize, 0, 1];
            let moved: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
            let mut g = synthetic(&moved, false);
            g.primes = vec![13, 19, 7];
            let other = classify_graph(&g);
            assert_eq!(base.label, other.label);
            assert_eq!(base.symbol, other.symbol);
        }
    }

    #[test]
    fn parse_shapes() {
        let s = parse_symbol("{13->7<->223<-13}").unwrap();
        assert_eq!(s.vertices, vec![7, 13, 223]);
        assert_eq!(s.edges, vec![(7, 223), (13, 7), (13, 223), (223, 7)]);
        let s = parse_symbol("9,7,31;delta!=0").unwrap();
        assert_eq!((s.edges.len(), s.delta_zero), (0, Some(false)));
        let s = parse_symbol("13->7;9").unwrap();
        assert_eq!(s.vertices, vec![7, 9, 13]);
        assert!(parse_symbol("13->").is_err());
        assert!(parse_symbol("").is_err());
    }

    #[test]
    fn labels_round_trip() {
        for (c, g) in Label::QUARTETS {
            let l = Label::quartet(c, g);
            assert_eq!(Label::parse(&l.to_string()), Ok(l));
        }
        assert!(Label::parse("III/10").is_err());
    }
}
