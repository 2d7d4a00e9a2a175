//! Exact arithmetic in the prime field GF(p) and its cubic extension GF(p³).
//!
//! The extension is realized as GF(p)[x]/(f) for a monic primitive cubic f,
//! with elements stored as coordinate triples in the basis {1, x, x²}. The
//! primitive cubic is chosen deterministically (lexicographically smallest by
//! (c2, c1, c0)) so that the Singer point order it induces is reproducible
//! across runs.

use crate::{Error, Result};

/// Deterministic Miller–Rabin, exact for every n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for all 64-bit integers.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    a %= m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Distinct prime factors of n, by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field GF(p). Elements are u64 residues in [0, p); every
/// operation returns a reduced residue. Products go through u128, so any
/// 64-bit prime modulus is safe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Multiplicative inverse of a nonzero residue (Fermat: a^(p-2)).
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }
}

/// A monic cubic x³ + c2·x² + c1·x + c0 over GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicPolynomial {
    pub c2: u64,
    pub c1: u64,
    pub c0: u64,
}

impl std::fmt::Display for CubicPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x^3 + {}*x^2 + {}*x + {}", self.c2, self.c1, self.c0)
    }
}

/// An element of GF(p³) as coordinates (a0, a1, a2) in the basis {1, x, x²}.
pub type ExtElem = [u64; 3];

pub const EXT_ONE: ExtElem = [1, 0, 0];
pub const EXT_X: ExtElem = [0, 1, 0];

/// Arithmetic in GF(p)[x]/(f) for a fixed monic cubic f. The reduction
/// tables for x³ and x⁴ are precomputed; `mul` is a schoolbook 3×3 product
/// followed by two table substitutions. Irreducibility of f is required for
/// field behaviour but not for the ring arithmetic itself, which the
/// irreducibility test below exploits.
#[derive(Clone, Copy, Debug)]
pub struct CubicExt {
    field: PrimeField,
    poly: CubicPolynomial,
    red3: [u64; 3],
    red4: [u64; 3],
}

impl CubicExt {
    pub fn new(field: PrimeField, poly: CubicPolynomial) -> Self {
        let f = field;
        // x^3 = -(c2 x^2 + c1 x + c0)
        let red3 = [f.neg(poly.c0), f.neg(poly.c1), f.neg(poly.c2)];
        // x^4 = x * x^3
        let red4 = [
            f.mul(red3[2], red3[0]),
            f.add(f.mul(red3[2], red3[1]), red3[0]),
            f.add(f.mul(red3[2], red3[2]), red3[1]),
        ];
        CubicExt {
            field,
            poly,
            red3,
            red4,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn poly(&self) -> CubicPolynomial {
        self.poly
    }

    pub fn is_zero(e: ExtElem) -> bool {
        e == [0, 0, 0]
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let p = self.field.p as u128;
        let a = [a[0] as u128, a[1] as u128, a[2] as u128];
        let b = [b[0] as u128, b[1] as u128, b[2] as u128];
        // Raw degree-4 coefficients; each term is < p^2 and there are at
        // most three per coefficient, so u128 cannot overflow.
        let t0 = (a[0] * b[0]) % p;
        let t1 = (a[0] * b[1] + a[1] * b[0]) % p;
        let t2 = (a[0] * b[2] + a[1] * b[1] + a[2] * b[0]) % p;
        let t3 = (a[1] * b[2] + a[2] * b[1]) % p;
        let t4 = (a[2] * b[2]) % p;
        let mut out = [t0 as u64, t1 as u64, t2 as u64];
        let f = self.field;
        for i in 0..3 {
            let extra = (t3 * self.red3[i] as u128 + t4 * self.red4[i] as u128) % p;
            out[i] = f.add(out[i], extra as u64);
        }
        out
    }

    /// g^n by square-and-multiply; g^0 = 1 for g ≠ 0, and 0^0 is an error.
    pub fn pow(&self, g: ExtElem, n: u64) -> Result<ExtElem> {
        if Self::is_zero(g) && n == 0 {
            return Err(Error::ZeroPowZero);
        }
        let mut base = g;
        let mut e = n;
        let mut acc = EXT_ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Remainder of polynomial division over GF(p); coefficients little-endian.
fn poly_rem(field: PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let deg = |v: &[u64]| v.iter().rposition(|&c| c != 0);
    let mut r: Vec<u64> = a.to_vec();
    let db = match deg(b) {
        Some(d) => d,
        None => panic!("division by the zero polynomial"),
    };
    let lead_inv = field.inv(b[db]).expect("nonzero leading coefficient");
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let factor = field.mul(r[dr], lead_inv);
        for i in 0..=db {
            let t = field.mul(factor, b[i]);
            r[dr - db + i] = field.sub(r[dr - db + i], t);
        }
    }
    r.truncate(db);
    r
}

fn poly_gcd_degree(field: PrimeField, a: Vec<u64>, b: Vec<u64>) -> usize {
    let deg = |v: &[u64]| v.iter().rposition(|&c| c != 0);
    let (mut a, mut b) = (a, b);
    loop {
        match deg(&b) {
            None => return deg(&a).unwrap_or(0),
            Some(_) => {
                let r = poly_rem(field, &a, &b);
                a = std::mem::take(&mut b);
                b = r;
            }
        }
    }
}

/// A cubic is reducible over GF(p) exactly when it has a root there, i.e.
/// when it shares a factor with x^p - x. We compute x^p in the quotient ring
/// and take a gcd, which stays fast for large p.
fn cubic_is_irreducible(field: PrimeField, poly: CubicPolynomial) -> bool {
    let ring = CubicExt::new(field, poly);
    let xp = ring.pow(EXT_X, field.modulus()).expect("x != 0");
    // h = x^p - x as a polynomial of degree <= 2
    let h = vec![xp[0], field.sub(xp[1], 1), xp[2]];
    let f = vec![poly.c0, poly.c1, poly.c2, 1];
    poly_gcd_degree(field, f, h) == 0
}

/// The lexicographically smallest (by (c2, c1, c0)) monic cubic that is
/// irreducible over GF(p) and whose root x has multiplicative order exactly
/// p³ − 1. Deterministic per p. Fails only when p³ − 1 overflows 64 bits.
pub fn find_primitive_cubic(field: PrimeField) -> Result<CubicPolynomial> {
    let p = field.modulus();
    let group_order = p
        .checked_mul(p)
        .and_then(|s| s.checked_mul(p))
        .and_then(|c| c.checked_sub(1))
        .ok_or(Error::ModulusTooLarge(p))?;
    // p^3 - 1 = (p - 1)(p^2 + p + 1); factoring the halves separately keeps
    // trial division cheap.
    let mut factors = prime_factors(p - 1);
    for r in prime_factors(p * p + p + 1) {
        if !factors.contains(&r) {
            factors.push(r);
        }
    }
    for c2 in 0..p {
        for c1 in 0..p {
            for c0 in 0..p {
                let poly = CubicPolynomial { c2, c1, c0 };
                if !cubic_is_irreducible(field, poly) {
                    continue;
                }
                let ext = CubicExt::new(field, poly);
                let primitive = factors
                    .iter()
                    .all(|&r| ext.pow(EXT_X, group_order / r).expect("x != 0") != EXT_ONE);
                if primitive {
                    return Ok(poly);
                }
            }
        }
    }
    unreachable!("GF(p^3) always has a primitive element with a degree-3 minimal polynomial")
}
