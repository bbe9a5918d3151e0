//! Finite fields GF(p^m) with elements encoded as integers.
//!
//! An element of GF(p^m) is stored as an integer in `[0, q)` whose base-p
//! digits (least significant first) are the coefficients of its polynomial
//! representative modulo a fixed monic irreducible of degree `m`. Prime fields
//! are the special case `m = 1`, where the encoding is the residue itself.
//!
//! Fields up to `2^16` elements carry exp/log tables built from a primitive
//! element; larger fields fall back to polynomial arithmetic.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

const TABLE_LIMIT: u32 = 1 << 16;

/// An element of some GF(q), identified by its integer encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Integer encoding of the element.
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled to skip a reduction in `mul`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A validated finite field GF(p^m). Cheap to clone; immutable.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)?;
        if self.inner.m > 1 {
            write!(f, " mod {:?}", self.inner.modulus)?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{})", self.inner.p, self.inner.m)
        }
    }
}

impl FieldSpec {
    /// Builds GF(p^m). Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `m` is used, comparing the
    /// non-leading coefficients as a base-p integer (constant term least
    /// significant).
    ///
    /// `modulus` lists coefficients from the constant term up to the leading
    /// one and must be monic of degree `m`. It is ignored for prime fields
    /// unless it is given, in which case it must be `[c, 1]`.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree {m} outside 1..={MAX_DEGREE}"
            )));
        }
        let q = (p as u64).saturating_pow(m);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u32;

        let modulus = match modulus {
            Some(coeffs) => {
                validate_modulus(p, m, coeffs)?;
                coeffs.to_vec()
            }
            None if m == 1 => vec![0, 1],
            None => smallest_irreducible(p, m),
        };

        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power `q`, with the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, m, None)
    }

    /// Parses a field description: `N`, `p^m`, optionally prefixed by `q=`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("q=").unwrap_or(s).trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad field description {s:?}")))
        };
        match s.split_once('^') {
            Some((base, exp)) => {
                let p = parse_int(base)?;
                let m = parse_int(exp)?;
                if p > u32::MAX as u64 || !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if m == 0 || m > MAX_DEGREE as u64 {
                    return Err(Error::InvalidParameter(format!(
                        "extension degree {m} outside 1..={MAX_DEGREE}"
                    )));
                }
                Self::new(p as u32, m as u32, None)
            }
            None => Self::with_order(parse_int(s)?),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.inner.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Validates an integer encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < self.inner.q as u64 {
            Ok(FieldElement(value as u32))
        } else {
            Err(Error::ElementOutOfRange {
                value,
                q: self.inner.q,
            })
        }
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.inner.q
    }

    /// All elements ordered by encoding, zero first.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.inner.q).map(FieldElement).collect()
    }

    pub fn nonzero_elements(&self) -> Vec<FieldElement> {
        (1..self.inner.q).map(FieldElement).collect()
    }

    /// The image of the integer `n` under the canonical map Z -> GF(q).
    pub fn from_integer(&self, n: u64) -> FieldElement {
        FieldElement((n % self.inner.p as u64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let Inner { p, m, .. } = *self.inner;
        if p == 2 {
            FieldElement(a.0 ^ b.0)
        } else if m == 1 {
            FieldElement(((a.0 as u64 + b.0 as u64) % p as u64) as u32)
        } else {
            self.digitwise(a.0, b.0, |x, y| (x + y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a));
        let Inner { p, m, .. } = *self.inner;
        if p == 2 || a.0 == 0 {
            a
        } else if m == 1 {
            FieldElement(p - a.0)
        } else {
            self.digitwise(a.0, 0, |x, _| (p - x) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.inner.tables {
            Some(t) => {
                FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
            }
            None => FieldElement(slow_mul(&self.inner, a.0, b.0)),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        debug_assert!(self.contains(a));
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let q = self.inner.q;
        Ok(match &self.inner.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                FieldElement(t.exp[((q - 1 - l) % (q - 1)) as usize])
            }
            None => self.pow(a, q as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut order = self.inner.q as u64 - 1;
        for r in prime_factors(order) {
            while order.is_multiple_of(r) && self.pow(a, order / r) == FieldElement::ONE {
                order /= r;
            }
        }
        Ok(order)
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> FieldElement {
        let p = self.inner.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.inner.m {
            out += f(a % p, b % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s)
    }
}

fn validate_modulus(p: u32, m: u32, coeffs: &[u32]) -> Result<()> {
    if coeffs.len() != m as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients, got {}",
            m + 1,
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus(format!(
            "coefficient out of range for GF({p})"
        )));
    }
    if coeffs[m as usize] != 1 {
        return Err(Error::InvalidModulus("not monic".into()));
    }
    let f: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
    if !poly::is_irreducible(&f, p as u64) {
        return Err(Error::InvalidModulus("reducible".into()));
    }
    Ok(())
}

/// Lexicographically smallest monic irreducible of degree `m` over GF(p).
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = p64.pow(m);
    for code in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push(c % p64);
            c /= p64;
        }
        f.push(1);
        if poly::is_irreducible(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// True iff the polynomial (constant term first) is irreducible over GF(p).
pub fn is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let f: Vec<u64> = coeffs.iter().map(|&c| c as u64 % p as u64).collect();
    poly::is_irreducible(&f, p as u64)
}

fn to_digits(inner: &Inner, mut a: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(inner.m as usize);
    for _ in 0..inner.m {
        d.push((a % inner.p) as u64);
        a /= inner.p;
    }
    d
}

fn from_digits(inner: &Inner, d: &[u64]) -> u32 {
    d.iter()
        .rev()
        .fold(0u64, |acc, &c| acc * inner.p as u64 + c) as u32
}

fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    if inner.m == 1 {
        return ((a as u64 * b as u64) % inner.p as u64) as u32;
    }
    let p = inner.p as u64;
    let f: Vec<u64> = inner.modulus.iter().map(|&c| c as u64).collect();
    let prod = poly::mulmod(&to_digits(inner, a), &to_digits(inner, b), &f, p);
    let mut d = prod;
    d.resize(inner.m as usize, 0);
    from_digits(inner, &d)
}

fn slow_pow(inner: &Inner, a: u32, mut e: u64) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(inner, acc, base);
        }
        base = slow_mul(inner, base, base);
        e >>= 1;
    }
    acc
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = q as u64 - 1;
    let factors = prime_factors(order);
    let generator = (1..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| slow_pow(inner, g, order / r) != 1)
        })
        .expect("multiplicative group is cyclic");
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * n];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i] = x;
        exp[i + n] = x;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, generator);
    }
    Tables { exp, log }
}

/// Deterministic primality test by trial division (inputs stay below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Decomposes `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut m = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        m += 1;
    }
    u32::try_from(p).ok().map(|p| (p, m))
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Dense polynomials over GF(p), constant term first, no trailing zeros.
mod poly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// `a mod f` for nonzero `f`.
    fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let shift = r.len() - 1 - df;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &fc) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub(super) fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), f, p)
    }

    fn powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, f, p);
        let mut acc = rem(&[1], f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree `m` is irreducible iff
    /// `gcd(f, x^(p^i) - x) = 1` for all `1 <= i <= m/2`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let mut f = f.to_vec();
        trim(&mut f);
        if f.len() < 2 {
            return false;
        }
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 0..m / 2 {
            h = powmod(&h, p, &f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            if diff.is_empty() || gcd(&f, &diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}
