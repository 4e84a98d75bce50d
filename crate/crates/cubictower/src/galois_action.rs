//! Automorphisms of small finite groups with trace conditions of degree d
//! (σ-groups), and the action on the Frattini quotient.

use serde::Serialize;
use std::collections::HashMap;
use std::hash::Hash;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {0} exceeds the search cap of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("automorphism search would try {0} generator images, above the cap")]
    SearchCap(u128),
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("elementary abelian census needs p != 3 prime and rank 1..=4 with p^rank <= 10^4")]
    ElementaryRange,
}

pub const MAX_ORDER: usize = 512;
const MAX_CANDIDATES: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    /// `table[a * order + b]` is the index of `a * b`.
    pub table: Vec<u32>,
    pub identity: usize,
    pub generators: Vec<usize>,
}

impl FiniteGroup {
    /// Group generated by `gens` under `mul`, elements numbered in BFS order.
    pub fn from_generators<T, F>(name: &str, identity: T, gens: &[T], mul: F) -> Result<FiniteGroup, GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut k = 0;
        while k < elems.len() {
            for g in gens {
                let y = mul(&elems[k], g);
                if !index.contains_key(&y) {
                    if elems.len() >= MAX_ORDER {
                        return Err(GroupError::TooLarge(elems.len() + 1));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            k += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                table[a * n + b] = index[&mul(x, y)] as u32;
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let g = FiniteGroup { name: name.to_string(), order: n, table, identity: 0, generators };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                return Err(GroupError::NotAGroup("identity".into()));
            }
            if !(0..n).any(|b| self.mul(a, b) == self.identity) {
                return Err(GroupError::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        if n <= 1000 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAGroup(format!("({a}{b}){c}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.mul(a, b) == self.identity).expect("group element has an inverse")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set of elements, as a membership mask.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut k = 0;
        while k < elems.len() {
            for &g in gens {
                let y = self.mul(elems[k], g);
                if !mask[y] {
                    mask[y] = true;
                    elems.push(y);
                }
            }
            k += 1;
        }
        mask
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_generators(&format!("C{n}"), 0usize, &[1 % n.max(1)], |a, b| (a + b) % n)
}

pub fn elementary_abelian(p: u32, rank: usize) -> Result<FiniteGroup, GroupError> {
    let gens: Vec<Vec<u32>> = (0..rank).map(|i| (0..rank).map(|j| (i == j) as u32).collect()).collect();
    let name = format!("({})", vec![p.to_string(); rank].join(","));
    FiniteGroup::from_generators(&name, vec![0; rank], &gens, |a, b| a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
}

/// Dihedral group of order 8 acting on the corners of a square.
pub fn dihedral8() -> Result<FiniteGroup, GroupError> {
    let compose = |a: &[u8; 4], b: &[u8; 4]| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize], a[b[3] as usize]];
    FiniteGroup::from_generators("D4", [0, 1, 2, 3], &[[1, 2, 3, 0], [0, 3, 2, 1]], compose)
}

/// Quaternion units ±1, ±i, ±j, ±k.
pub fn quaternion8() -> Result<FiniteGroup, GroupError> {
    let q = |a: &[i8; 4], b: &[i8; 4]| {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    };
    FiniteGroup::from_generators("Q8", [1, 0, 0, 0], &[[0, 1, 0, 0], [0, 0, 1, 0]], q)
}

/// Upper unitriangular 3×3 matrices over F_p (extraspecial of exponent p for odd p).
pub fn heisenberg(p: u32) -> Result<FiniteGroup, GroupError> {
    let m = |a: &[u32; 3], b: &[u32; 3]| [(a[0] + b[0]) % p, (a[1] + b[1]) % p, (a[2] + b[2] + a[0] * b[1]) % p];
    FiniteGroup::from_generators(&format!("Heis({p})"), [0, 0, 0], &[[1, 0, 0], [0, 1, 0]], m)
}

/// ⟨a, b | a^{p²} = b^p = 1, b a b⁻¹ = a^{1+p}⟩, pairs (i, j) standing for a^i b^j.
pub fn modular_p3(p: u32) -> Result<FiniteGroup, GroupError> {
    let p2 = p * p;
    let m = move |x: &[u32; 2], y: &[u32; 2]| {
        // b^j a^k = a^{k(1+p)^j} b^j
        let twist = (0..x[1]).fold(1u32, |t, _| t * (1 + p) % p2);
        [(x[0] + y[0] * twist) % p2, (x[1] + y[1]) % p]
    };
    FiniteGroup::from_generators(&format!("M({p}^3)"), [0, 0], &[[1, 0], [0, 1]], m)
}

/// Built-in groups by name: SmallGroups-style ids up to order 125, or
/// `C<n>`, `elem:<p>,<r>`, `D4`, `Q8`, `heis:<p>`, `mod:<p>`.
pub fn named_group(name: &str) -> Result<FiniteGroup, GroupError> {
    let unknown = || GroupError::UnknownGroup(name.to_string());
    let key: String = name.chars().filter(|c| !c.is_whitespace() && !matches!(c, '<' | '>')).collect();
    let g = match key.as_str() {
        "4,2" => elementary_abelian(2, 2)?,
        "8,3" | "D4" => dihedral8()?,
        "8,4" | "Q8" => quaternion8()?,
        "8,5" => elementary_abelian(2, 3)?,
        "25,2" => elementary_abelian(5, 2)?,
        "125,3" => heisenberg(5)?,
        "125,4" => modular_p3(5)?,
        k => {
            if let Some(n) = k.strip_prefix('C') {
                cyclic(n.parse().map_err(|_| unknown())?)?
            } else if let Some(rest) = k.strip_prefix("elem:") {
                let (p, r) = rest.split_once(',').ok_or_else(unknown)?;
                elementary_abelian(p.parse().map_err(|_| unknown())?, r.parse().map_err(|_| unknown())?)?
            } else if let Some(p) = k.strip_prefix("heis:") {
                heisenberg(p.parse().map_err(|_| unknown())?)?
            } else if let Some(p) = k.strip_prefix("mod:") {
                modular_p3(p.parse().map_err(|_| unknown())?)?
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(g)
}

/// Images of generator images under a candidate map, or None if the map is
/// not a well defined bijective homomorphism.
fn extend(g: &FiniteGroup, images: &[usize]) -> Option<Vec<u32>> {
    let n = g.order;
    let mut phi = vec![u32::MAX; n];
    phi[g.identity] = g.identity as u32;
    let mut queue = vec![g.identity];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k];
        for (gi, &hi) in g.generators.iter().zip(images) {
            let y = g.mul(x, *gi);
            let fy = g.mul(phi[x] as usize, hi) as u32;
            if phi[y] == u32::MAX {
                phi[y] = fy;
                queue.push(y);
            } else if phi[y] != fy {
                return None;
            }
        }
        k += 1;
    }
    let mut hit = vec![false; n];
    for &v in &phi {
        if v == u32::MAX || std::mem::replace(&mut hit[v as usize], true) {
            return None;
        }
    }
    Some(phi)
}

/// All automorphisms as permutations of the element indices, sorted.
pub fn automorphisms(g: &FiniteGroup) -> Result<Vec<Vec<u32>>, GroupError> {
    if g.order > MAX_ORDER {
        return Err(GroupError::TooLarge(g.order));
    }
    let orders: Vec<usize> = (0..g.order).map(|a| g.element_order(a)).collect();
    let candidates: Vec<Vec<usize>> = g
        .generators
        .iter()
        .map(|&gi| (0..g.order).filter(|&h| orders[h] == orders[gi]).collect())
        .collect();
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > MAX_CANDIDATES {
        return Err(GroupError::SearchCap(total));
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; candidates.len()];
    fn walk(g: &FiniteGroup, cands: &[Vec<usize>], pick: &mut Vec<usize>, depth: usize, out: &mut Vec<Vec<u32>>) {
        if depth == cands.len() {
            if let Some(phi) = extend(g, pick) {
                out.push(phi);
            }
            return;
        }
        for &h in &cands[depth] {
            pick[depth] = h;
            walk(g, cands, pick, depth + 1, out);
        }
    }
    walk(g, &candidates, &mut pick, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

pub fn derived_subgroup(g: &FiniteGroup) -> Vec<bool> {
    let mut comms = Vec::new();
    for a in 0..g.order {
        for b in 0..g.order {
            let c = g.mul(g.mul(g.inverse(a), g.inverse(b)), g.mul(a, b));
            comms.push(c);
        }
    }
    comms.sort_unstable();
    comms.dedup();
    g.subgroup(&comms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaCensus {
    pub aut_order: u64,
    pub order3_count: u64,
    pub weak_count: u64,
    pub strong_count: u64,
}

impl SigmaCensus {
    pub fn tuple(&self) -> (u64, u64, u64, u64) {
        (self.aut_order, self.order3_count, self.weak_count, self.strong_count)
    }
}

fn perm_order(s: &[u32]) -> usize {
    let mut x: Vec<u32> = s.to_vec();
    let mut k = 1;
    while x.iter().enumerate().any(|(i, &v)| v as usize != i) {
        x = x.iter().map(|&v| s[v as usize]).collect();
        k += 1;
    }
    k
}

/// x·σ(x)·…·σ^{d−1}(x).
pub fn trace(g: &FiniteGroup, sigma: &[u32], d: usize, x: usize) -> usize {
    let (mut acc, mut y) = (x, x);
    for _ in 1..d {
        y = sigma[y] as usize;
        acc = g.mul(acc, y);
    }
    acc
}

/// Trace trivial on every element, a stronger requirement than the census
/// uses (it checks the generators only).
pub fn strong_on_all(g: &FiniteGroup, sigma: &[u32], d: usize) -> bool {
    (0..g.order).all(|x| trace(g, sigma, d, x) == g.identity)
}

/// Weak trace condition checked on all elements rather than generators.
pub fn weak_on_all(g: &FiniteGroup, sigma: &[u32], d: usize) -> bool {
    let dg = derived_subgroup(g);
    (0..g.order).all(|x| dg[trace(g, sigma, d, x)])
}

pub fn sigma_census(g: &FiniteGroup, d: usize) -> Result<SigmaCensus, GroupError> {
    let auts = automorphisms(g)?;
    let dg = derived_subgroup(g);
    let mut c = SigmaCensus { aut_order: auts.len() as u64, order3_count: 0, weak_count: 0, strong_count: 0 };
    for s in auts.iter().filter(|s| perm_order(s) == d) {
        c.order3_count += 1;
        if g.generators.iter().all(|&x| dg[trace(g, s, d, x)]) {
            c.weak_count += 1;
            if g.generators.iter().all(|&x| trace(g, s, d, x) == g.identity) {
                c.strong_count += 1;
            }
        }
    }
    Ok(c)
}

fn gl_order(n: u32, q: u128) -> u128 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

fn binom_gl(n: u32, k: u32, p: u128) -> u128 {
    gl_order(n, p) / (gl_order(k, p) * gl_order(n - k, p))
}

// Matrices on F_p^m annihilated by x² + x + 1.
fn phi3_count(m: u32, p: u128) -> u128 {
    if p % 3 == 1 {
        (0..=m).map(|j| binom_gl(m, j, p)).sum()
    } else if m.is_multiple_of(2) {
        gl_order(m, p) / gl_order(m / 2, p * p)
    } else {
        0
    }
}

fn closed_form(p: u64, n: u32) -> SigmaCensus {
    let q = p as u128;
    let cubes: u128 = (0..=n).map(|k| binom_gl(n, k, q) * phi3_count(n - k, q)).sum();
    let w = phi3_count(n, q) as u64;
    SigmaCensus { aut_order: gl_order(n, q) as u64, order3_count: (cubes - 1) as u64, weak_count: w, strong_count: w }
}

fn brute_force(p: u64, n: usize) -> SigmaCensus {
    let total = p.pow((n * n) as u32);
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut c = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum::<u64>() % p;
            }
        }
        c
    };
    let id: Vec<u64> = (0..n * n).map(|k| (k % (n + 1) == 0) as u64).collect();
    let mut c = SigmaCensus { aut_order: 0, order3_count: 0, weak_count: 0, strong_count: 0 };
    let mut m = vec![0u64; n * n];
    for code in 0..total {
        let mut r = code;
        for e in m.iter_mut() {
            *e = r % p;
            r /= p;
        }
        let m2 = mul(&m, &m);
        let m3 = mul(&m2, &m);
        if m3 == id && m != id {
            c.order3_count += 1;
            let zero = (0..n * n).all(|k| (id[k] + m[k] + m2[k]).is_multiple_of(p));
            c.weak_count += zero as u64;
            c.strong_count += zero as u64;
        }
        if det_nonzero(&m, n, p) {
            c.aut_order += 1;
        }
    }
    c
}

fn det_nonzero(m: &[u64], n: usize, p: u64) -> bool {
    let mut a: Vec<u64> = m.to_vec();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else { return false };
        for k in 0..n {
            a.swap(col * n + k, piv * n + k);
        }
        let inv = crate::arith::pow_mod(a[col * n + col], p - 2, p);
        for r in col + 1..n {
            let f = a[r * n + col] * inv % p;
            for k in 0..n {
                a[r * n + k] = (a[r * n + k] + p * p - f * a[col * n + k] % p) % p;
            }
        }
    }
    true
}

const BRUTE_LIMIT: u64 = 2_000_000;

/// Census of Aut((p)^rank) = GL(rank, p) with trace condition I + M + M² = 0.
/// Brute force over all matrices when feasible, else the closed-form count.
pub fn elementary_sigma(p: u64, rank: u32) -> Result<SigmaCensus, GroupError> {
    if p == 3 || !crate::arith::is_prime(p) || !(1..=4).contains(&rank) || p.pow(rank) > 10_000 {
        return Err(GroupError::ElementaryRange);
    }
    match p.checked_pow(rank * rank) {
        Some(t) if t <= BRUTE_LIMIT => Ok(brute_force(p, rank as usize)),
        _ => Ok(closed_form(p, rank)),
    }
}

/// Closed-form census, for comparison with the brute force.
pub fn elementary_sigma_closed(p: u64, rank: u32) -> SigmaCensus {
    closed_form(p, rank)
}

/// Whether the image of Aut(G) on G/Φ(G), Φ(G) = G′·G^p, contains an
/// element of order `critical`.
pub fn frattini_admits(g: &FiniteGroup, critical: usize) -> Result<bool, GroupError> {
    let p = (2..=g.order).find(|d| g.order.is_multiple_of(*d)).unwrap_or(1);
    let dg = derived_subgroup(g);
    let mut gens: Vec<usize> = (0..g.order).filter(|&x| dg[x]).collect();
    gens.extend((0..g.order).map(|x| (1..p).fold(x, |acc, _| g.mul(acc, x))));
    let phi = g.subgroup(&gens);
    // Coset label of each element: smallest element of x·Φ.
    let members: Vec<usize> = (0..g.order).filter(|&x| phi[x]).collect();
    let coset: Vec<usize> = (0..g.order).map(|x| members.iter().map(|&f| g.mul(x, f)).min().unwrap()).collect();
    let reps: Vec<usize> = {
        let mut r = coset.clone();
        r.sort_unstable();
        r.dedup();
        r
    };
    let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    for s in automorphisms(g)? {
        let induced: Vec<u32> = reps.iter().map(|&r| pos[&coset[s[r] as usize]] as u32).collect();
        if perm_order(&induced).is_multiple_of(critical) {
            return Ok(true);
        }
    }
    Ok(false)
}
