//! Combined cubic residue symbol of a conductor as a directed graph, plus δ.

use crate::arith::{cubic_exponent_with_root, smallest_primitive_root, ArithError};
use crate::conductor::Conductor;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("residue symbols are only defined here for ell = 3, got {0}")]
    UnsupportedEll(u64),
    #[error("unsupported number of ramified primes: {0}")]
    UnsupportedT(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `a[i][j]` is the exponent of the character of `primes[i]` modulo `primes[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolMatrix {
    pub primes: Vec<u64>,
    pub roots: Vec<u64>,
    pub a: Vec<Vec<Option<u8>>>,
}

impl SymbolMatrix {
    pub fn t(&self) -> usize {
        self.primes.len()
    }

    pub fn exp(&self, i: usize, j: usize) -> u8 {
        self.a[i][j].expect("off-diagonal entry")
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.a[i][j] == Some(0)
    }
}

pub fn symbol_matrix(cond: &Conductor) -> Result<SymbolMatrix, GraphError> {
    let roots = cond
        .ramified_primes
        .iter()
        .map(|&q| smallest_primitive_root(q))
        .collect::<Result<Vec<_>, _>>()?;
    symbol_matrix_with_roots(cond, &roots)
}

/// Symbol matrix with one explicitly chosen primitive root per modulus.
pub fn symbol_matrix_with_roots(cond: &Conductor, roots: &[u64]) -> Result<SymbolMatrix, GraphError> {
    if cond.ell != 3 {
        return Err(GraphError::UnsupportedEll(cond.ell));
    }
    if cond.t > 4 {
        return Err(GraphError::UnsupportedT(cond.t));
    }
    let primes = cond.ramified_primes.clone();
    let t = primes.len();
    let mut a = vec![vec![None; t]; t];
    for i in 0..t {
        for j in 0..t {
            if i != j {
                let ch = cubic_exponent_with_root(3, primes[j], primes[i] as i64, roots[j])?;
                a[i][j] = ch.exponent.map(|e| e as u8);
            }
        }
    }
    Ok(SymbolMatrix { primes, roots: roots.to_vec(), a })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueGraph {
    pub primes: Vec<u64>,
    pub edges: Vec<(usize, usize)>,
    pub isolated: Vec<usize>,
    pub n_bidirectional: usize,
    pub n_edges: usize,
    pub n_attractive: usize,
    pub n_repulsive: usize,
    pub delta_zero: Option<bool>,
}

impl ResidueGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn mutual(&self, i: usize, j: usize) -> bool {
        self.has_edge(i, j) && self.has_edge(j, i)
    }

    /// Edge set in terms of the primes themselves, sorted.
    pub fn prime_edges(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.edges.iter().map(|&(i, j)| (self.primes[i], self.primes[j])).collect();
        v.sort_unstable();
        v
    }
}

pub fn build_graph(m: &SymbolMatrix) -> Result<ResidueGraph, GraphError> {
    let t = m.t();
    if !(2..=3).contains(&t) {
        return Err(GraphError::UnsupportedT(t));
    }
    let mut edges = Vec::new();
    for i in 0..t {
        for j in 0..t {
            if m.is_edge(i, j) {
                edges.push((i, j));
            }
        }
    }
    let touches = |v: usize| edges.iter().any(|&(i, j)| i == v || j == v);
    let isolated = (0..t).filter(|&v| !touches(v)).collect();
    let mut n_bidirectional = 0;
    for i in 0..t {
        for j in i + 1..t {
            if m.is_edge(i, j) && m.is_edge(j, i) {
                n_bidirectional += 1;
            }
        }
    }
    let (mut n_attractive, mut n_repulsive) = (0, 0);
    if t == 3 {
        for v in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&w| w != v).collect();
            if others.iter().all(|&w| m.is_edge(w, v)) {
                n_attractive += 1;
            }
            if others.iter().all(|&w| m.is_edge(v, w)) {
                n_repulsive += 1;
            }
        }
    }
    let delta_zero = if t == 3 { Some(delta(m)? == 0) } else { None };
    Ok(ResidueGraph {
        primes: m.primes.clone(),
        n_edges: edges.len(),
        edges,
        isolated,
        n_bidirectional,
        n_attractive,
        n_repulsive,
        delta_zero,
    })
}

/// δ = a12·a23·a31 − a13·a32·a21 mod 3. Entries that are zero make a product vanish.
pub fn delta(m: &SymbolMatrix) -> Result<u8, GraphError> {
    if m.t() != 3 {
        return Err(GraphError::UnsupportedT(m.t()));
    }
    let e = |i: usize, j: usize| m.exp(i, j) as i32;
    let d = e(0, 1) * e(1, 2) * e(2, 0) - e(0, 2) * e(2, 1) * e(1, 0);
    Ok(d.rem_euclid(3) as u8)
}
