//! Integer and modular arithmetic: primality, factorization, primitive roots
//! and ℓ-th power residue characters.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("invalid modulus {0}: expected an odd prime or 9")]
    InvalidModulus(u64),
    #[error("{ell} does not divide phi({m})")]
    NoCharacter { ell: u64, m: u64 },
    #[error("residue {r} is neither coprime to nor divisible by {m}")]
    NotCoprime { r: i64, m: u64 },
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// This witness set is exact for every n < 3.3e24, so in particular for u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer with its prime-power decomposition, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from arbitrary (prime, exponent) pairs, merging repeats.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Factorization {
        pairs.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        let value = factors.iter().map(|&(p, e)| p.pow(e)).product();
        Factorization { value, factors }
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|f| f.0 == p).map_or(0, |f| f.1)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn pollard_brent(n: u64, seed: u64) -> u64 {
    let f = |x: u64| (mul_mod(x, x, n) + seed) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let mut g = 1u64;
    let (mut x, mut ys) = (0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

fn split_into(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let mut seed = 1;
    loop {
        let d = pollard_brent(n, seed);
        if d != n {
            split_into(d, out);
            split_into(n / d, out);
            return;
        }
        seed += 1;
    }
}

/// Trial division by small primes, Pollard rho for whatever remains.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut rest = n;
    let mut pairs = Vec::new();
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut p = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0;
    while p <= 1000 && p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
        p += wheel[w];
        w = (w + 1) % wheel.len();
    }
    if rest > 1 {
        if p * p > rest {
            pairs.push((rest, 1));
        } else {
            split_into(rest, &mut pairs);
        }
    }
    Factorization::from_pairs(pairs)
}

/// Smallest-prime-factor table for 0..limit.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> SpfSieve {
        let n = limit as usize;
        let mut spf = vec![0u32; n.max(2)];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j >= n {
                    break;
                }
                spf[j] = p;
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1 && n < self.limit(), "{n} outside sieve range");
        let mut rest = n as usize;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Factorization { value: n, factors }
    }
}

fn group_order(m: u64) -> Result<u64, ArithError> {
    if m == 9 {
        Ok(6)
    } else if m > 2 && is_prime(m) {
        Ok(m - 1)
    } else {
        Err(ArithError::InvalidModulus(m))
    }
}

/// Primitive roots modulo `m` (an odd prime or 9), in increasing order.
pub fn primitive_roots(m: u64) -> Result<impl Iterator<Item = u64>, ArithError> {
    let phi = group_order(m)?;
    let qs: Vec<u64> = factorize(phi).factors.iter().map(|f| f.0).collect();
    Ok((2..m).filter(move |&g| gcd(g, m) == 1 && qs.iter().all(|&q| pow_mod(g, phi / q, m) != 1)))
}

pub fn smallest_primitive_root(m: u64) -> Result<u64, ArithError> {
    Ok(primitive_roots(m)?.next().expect("cyclic unit group has a generator"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coarse {
    Residue,
    NonResidue,
    Zero,
}

impl Coarse {
    pub fn sign(self) -> i8 {
        match self {
            Coarse::Residue => 1,
            Coarse::NonResidue => -1,
            Coarse::Zero => 0,
        }
    }
}

/// Value of the ℓ-th power residue character of `residue` modulo `modulus`,
/// written as ω^exponent with ω = g^(φ(m)/ℓ) for the chosen primitive root g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicCharacter {
    pub ell: u64,
    pub modulus: u64,
    pub residue: i64,
    pub root: u64,
    pub exponent: Option<u32>,
    pub coarse: Coarse,
}

pub fn cubic_exponent(ell: u64, m: u64, r: i64) -> Result<CubicCharacter, ArithError> {
    let g = smallest_primitive_root(m)?;
    cubic_exponent_with_root(ell, m, r, g)
}

/// Same as [`cubic_exponent`] but normalised by a caller-chosen primitive root.
pub fn cubic_exponent_with_root(ell: u64, m: u64, r: i64, g: u64) -> Result<CubicCharacter, ArithError> {
    let phi = group_order(m)?;
    if ell < 2 || phi % ell != 0 {
        return Err(ArithError::NoCharacter { ell, m });
    }
    let red = r.rem_euclid(m as i64) as u64;
    let mut ch = CubicCharacter { ell, modulus: m, residue: r, root: g, exponent: None, coarse: Coarse::Zero };
    if red == 0 {
        return Ok(ch);
    }
    if gcd(red, m) != 1 {
        return Err(ArithError::NotCoprime { r, m });
    }
    let k = phi / ell;
    let omega = pow_mod(g, k, m);
    let target = pow_mod(red, k, m);
    let mut acc = 1u64;
    let exponent = (0..ell)
        .find(|_| {
            let hit = acc == target;
            acc = mul_mod(acc, omega, m);
            hit
        })
        .expect("r^(phi/ell) is an ell-th root of unity") as u32;
    ch.exponent = Some(exponent);
    ch.coarse = if exponent == 0 { Coarse::Residue } else { Coarse::NonResidue };
    Ok(ch)
}
