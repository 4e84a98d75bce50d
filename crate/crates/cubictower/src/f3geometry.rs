//! The elementary abelian group of order 27 as F₃³: its 13 lines, 13 planes,
//! 13 bundles of planes, and the fixed subgroup orderings of the Artin
//! pattern algorithms.

use serde::Serialize;

pub type F3Vector = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub index: usize,
    pub name: &'static str,
    pub generator: F3Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    pub index: usize,
    pub h: &'static str,
    pub k: &'static str,
    pub generators: [F3Vector; 2],
    /// Indices of the four lines in the plane.
    pub lines: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bundle {
    pub index: usize,
    pub planes: [usize; 4],
}

const LINE_NAMES: [&str; 13] = ["x", "y", "z", "xy", "xy2", "yz", "yz2", "zx", "zx2", "xyz", "xyz2", "xy2z", "x2yz"];

const PLANES: [(&str, &str, [usize; 4]); 13] = [
    ("y", "z", [2, 3, 6, 7]),
    ("z", "x", [1, 3, 8, 9]),
    ("x", "y", [1, 2, 4, 5]),
    ("x", "yz", [1, 6, 10, 13]),
    ("xy", "zx", [4, 7, 8, 13]),
    ("y", "zx", [2, 8, 10, 12]),
    ("xy", "yz", [4, 6, 9, 12]),
    ("z", "xy", [3, 4, 10, 11]),
    ("zx", "yz", [5, 6, 8, 11]),
    ("z", "xy2", [3, 5, 12, 13]),
    ("zx2", "yz2", [5, 7, 9, 10]),
    ("y", "zx2", [2, 9, 11, 13]),
    ("x", "yz2", [1, 7, 11, 12]),
];

const BUNDLES: [[usize; 4]; 13] = [
    [2, 3, 4, 13],
    [1, 3, 6, 12],
    [1, 2, 8, 10],
    [3, 5, 7, 8],
    [3, 9, 10, 11],
    [1, 4, 7, 9],
    [1, 5, 11, 13],
    [2, 5, 6, 9],
    [2, 7, 11, 12],
    [4, 6, 8, 11],
    [8, 9, 12, 13],
    [6, 7, 10, 13],
    [4, 5, 10, 12],
];

/// Reads a monomial like `xy2z` or `x2yz` as an exponent vector.
pub fn monomial(s: &str) -> F3Vector {
    let mut v = [0u8; 3];
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let axis = match b[i] {
            b'x' => 0,
            b'y' => 1,
            b'z' => 2,
            c => panic!("bad monomial letter {}", c as char),
        };
        i += 1;
        let mut e = 1;
        if i < b.len() && b[i].is_ascii_digit() {
            e = b[i] - b'0';
            i += 1;
        }
        v[axis] = (v[axis] + e) % 3;
    }
    v
}

pub fn add(a: F3Vector, b: F3Vector) -> F3Vector {
    [(a[0] + b[0]) % 3, (a[1] + b[1]) % 3, (a[2] + b[2]) % 3]
}

pub fn scale(e: u8, a: F3Vector) -> F3Vector {
    [(e * a[0]) % 3, (e * a[1]) % 3, (e * a[2]) % 3]
}

pub fn lines() -> Vec<Line> {
    LINE_NAMES
        .iter()
        .enumerate()
        .map(|(i, &name)| Line { index: i + 1, name, generator: monomial(name) })
        .collect()
}

pub fn planes() -> Vec<Plane> {
    PLANES
        .iter()
        .enumerate()
        .map(|(i, &(h, k, lines))| Plane { index: i + 1, h, k, generators: [monomial(h), monomial(k)], lines })
        .collect()
}

/// Bundle `i` consists of the four planes containing line `i`.
pub fn bundles() -> Vec<Bundle> {
    BUNDLES.iter().enumerate().map(|(i, &planes)| Bundle { index: i + 1, planes }).collect()
}

/// Index 1..=13 of the line spanned by a non-zero vector.
pub fn line_of(v: F3Vector) -> Option<usize> {
    if v == [0, 0, 0] {
        return None;
    }
    lines().iter().find(|l| l.generator == v || scale(2, l.generator) == v).map(|l| l.index)
}

/// All nine vectors of a plane, by brute force over its generators.
pub fn plane_span(p: &Plane) -> Vec<F3Vector> {
    let [h, k] = p.generators;
    let mut out = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            out.push(add(scale(a, h), scale(b, k)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Slot labels of the p+1 subgroups of index p in (p,p), generated by H and K:
/// slot 1 is H, slot 2 is K, slot e+2 is H+eK.
pub fn subgroup_order_pp(p: u64) -> Vec<String> {
    let mut v = vec!["H".to_string(), "K".to_string()];
    v.extend((1..p).map(|e| if e == 1 { "H+K".to_string() } else { format!("H+{e}K") }));
    v
}

/// Slot 1..=p²+p+1 of the projective point with normalised coordinates
/// (a, b, c) over (u, v, w), as used in the (3,3,3) Artin pattern algorithm.
pub fn slot_ppp(p: u64, a: u64, b: u64, c: u64) -> Option<u64> {
    match (a % p, b % p, c % p) {
        (1, 0, 0) => Some(1),
        (0, 1, 0) => Some(2),
        (0, 0, 1) => Some(3),
        (1, e, 0) => Some(3 + e),
        (0, 1, e) => Some(2 + p + e),
        (e, 0, 1) => Some(1 + 2 * p + e),
        (1, e, f) if e > 0 && f > 0 => Some(3 * p + (e - 1) * (p - 1) + f),
        _ => None,
    }
}

/// Normalised coordinate triples in slot order.
pub fn subgroup_order_ppp(p: u64) -> Vec<(u64, u64, u64)> {
    let mut points = vec![(1, 0, 0), (0, 1, 0), (0, 0, 1)];
    for e in 1..p {
        points.push((1, e, 0));
        points.push((0, 1, e));
        points.push((e, 0, 1));
        for f in 1..p {
            points.push((1, e, f));
        }
    }
    points.sort_by_key(|&(a, b, c)| slot_ppp(p, a, b, c));
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        let l = lines();
        assert_eq!(l.len(), 13);
        assert_eq!(l[3].generator, [1, 1, 0]);
        assert_eq!(l[9].generator, [1, 1, 1]);
        assert_eq!(l[12].generator, [2, 1, 1]);
        assert_eq!(monomial("xy2"), [1, 2, 0]);
        let p = planes();
        assert_eq!((p[0].h, p[0].k, p[0].lines), ("y", "z", [2, 3, 6, 7]));
        assert_eq!(p[4].lines, [4, 7, 8, 13]);
        assert_eq!((p[12].h, p[12].k, p[12].lines), ("x", "yz2", [1, 7, 11, 12]));
        let b = bundles();
        assert_eq!(b[0].planes, [2, 3, 4, 13]);
        assert_eq!(b[7].planes, [2, 5, 6, 9]);
        assert_eq!(b[12].planes, [4, 5, 10, 12]);
    }

    #[test]
    fn lines_are_distinct_points() {
        let mut seen: Vec<usize> = lines().iter().map(|l| line_of(l.generator).unwrap()).collect();
        seen.dedup();
        assert_eq!(seen, (1..=13).collect::<Vec<_>>());
        let mut count = 0;
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    count += line_of([x, y, z]).is_some() as usize;
                }
            }
        }
        assert_eq!(count, 26);
    }

    #[test]
    fn incidence_duality() {
        let (ls, ps, bs) = (lines(), planes(), bundles());
        for l in &ls {
            for p in &ps {
                let brute = plane_span(p).contains(&l.generator);
                assert_eq!(brute, p.lines.contains(&l.index), "line {} plane {}", l.index, p.index);
                assert_eq!(brute, bs[l.index - 1].planes.contains(&p.index), "bundle {} plane {}", l.index, p.index);
            }
        }
        for p in &ps {
            assert_eq!(plane_span(p).len(), 9);
            assert_eq!(ls.iter().filter(|l| plane_span(p).contains(&l.generator)).count(), 4);
        }
        for l in &ls {
            assert_eq!(ps.iter().filter(|p| p.lines.contains(&l.index)).count(), 4);
        }
    }

    #[test]
    fn orderings() {
        assert_eq!(subgroup_order_pp(3), vec!["H", "K", "H+K", "H+2K"]);
        assert_eq!(subgroup_order_pp(2).len(), 3);
        assert_eq!(subgroup_order_pp(5).len(), 6);
        assert_eq!(slot_ppp(3, 2, 0, 1), Some(9));
        assert_eq!(slot_ppp(3, 1, 1, 1), Some(10));
        assert_eq!(slot_ppp(3, 1, 0, 0), Some(1));
        for p in [2u64, 3, 5, 7] {
            let mut slots: Vec<u64> = subgroup_order_ppp(p).iter().map(|&(a, b, c)| slot_ppp(p, a, b, c).unwrap()).collect();
            slots.sort_unstable();
            assert_eq!(slots, (1..=p * p + p + 1).collect::<Vec<_>>());
        }
    }

    #[test]
    fn line_table_follows_slot_order() {
        for (l, (a, b, c)) in lines().iter().zip(subgroup_order_ppp(3)) {
            assert_eq!(line_of([a as u8, b as u8, c as u8]), Some(l.index));
        }
    }
}
