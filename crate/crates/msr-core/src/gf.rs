//! Finite-field arithmetic for GF(q), q = p^e a prime power up to 65535.
//!
//! A [`FieldSpec`] fixes the field once: characteristic, extension degree,
//! irreducible modulus, and a verified primitive element. Construction is
//! deterministic (smallest modulus, smallest generator), so element values
//! are reproducible across runs and platforms. Prime fields use direct
//! modular arithmetic; extension fields multiply through log/antilog
//! tables built once at construction.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest supported field order; symbols serialize as 16-bit integers.
pub const MAX_FIELD_ORDER: u64 = 65535;

/// One element of a fixed GF(q), stored as its canonical residue index.
///
/// For prime fields the index is the residue itself; for extension fields
/// the polynomial coefficients are read as base-p digits (coefficient of
/// x^i is digit i).
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub(crate) u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

enum Repr {
    /// Direct modular arithmetic in GF(p).
    Prime,
    /// Log/antilog tables keyed by the primitive element; `exp` is doubled
    /// so products of logs never need a modular reduction.
    Tables { exp: Vec<u16>, log: Vec<u32> },
}

/// A concrete finite field GF(q) with a verified primitive element.
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible modulus, coefficients by ascending degree
    /// (length e+1); empty for prime fields.
    modulus: Vec<u16>,
    c: FieldElement,
    repr: Repr,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "GF({})", self.q)
        } else {
            write!(f, "GF({}^{})", self.p, self.e)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Builds GF(q) with the canonical modulus and primitive element.
///
/// Deterministic: the modulus is the irreducible polynomial with the
/// smallest base-p coefficient encoding, and the generator is the smallest
/// element (in residue order) of multiplicative order q-1.
pub fn make_field(q: u64) -> Result<Arc<FieldSpec>> {
    if q > MAX_FIELD_ORDER {
        return Err(Error::TooLarge(q));
    }
    let (p, e) = prime_power_decomposition(q).ok_or(Error::NotPrimePower(q))?;
    let spec = if e == 1 {
        let c = smallest_prime_field_generator(p);
        FieldSpec {
            p,
            e,
            q,
            modulus: Vec::new(),
            c: FieldElement(c as u16),
            repr: Repr::Prime,
        }
    } else {
        let modulus = smallest_irreducible(p, e);
        let c = smallest_extension_generator(p, e, &modulus);
        let (exp, log) = build_tables(p, e, &modulus, c);
        FieldSpec {
            p,
            e,
            q,
            modulus,
            c: FieldElement(c as u16),
            repr: Repr::Tables { exp, log },
        }
    };
    Ok(Arc::new(spec))
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Modulus coefficients by ascending degree; empty for prime fields.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> FieldElement {
        self.c
    }

    /// Wraps a canonical residue index as an element. Panics if v >= q.
    pub fn element(&self, v: u64) -> FieldElement {
        assert!(v < self.q, "element {} outside GF({})", v, self.q);
        FieldElement(v as u16)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.repr {
            Repr::Prime => FieldElement(((a.0 as u64 + b.0 as u64) % self.p) as u16),
            Repr::Tables { .. } => self.digitwise(a, b, |x, y, p| (x + y) % p),
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.repr {
            Repr::Prime => FieldElement(((a.0 as u64 + self.p - b.0 as u64) % self.p) as u16),
            Repr::Tables { .. } => self.digitwise(a, b, |x, y, p| (x + p - y) % p),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.repr {
            Repr::Prime => FieldElement(((a.0 as u64 * b.0 as u64) % self.p) as u16),
            Repr::Tables { exp, log } => {
                if a.is_zero() || b.is_zero() {
                    FieldElement::ZERO
                } else {
                    FieldElement(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
                }
            }
        }
    }

    /// Multiplicative inverse; inv(0) is a division by zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q));
        }
        match &self.repr {
            Repr::Prime => Ok(self.pow(a, self.p - 2)),
            Repr::Tables { exp, log } => {
                let l = log[a.0 as usize] as u64;
                Ok(FieldElement(exp[((self.q - 1) - l) as usize]))
            }
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^t with the convention pow(a, 0) = 1 (including a = 0).
    pub fn pow(&self, a: FieldElement, t: u64) -> FieldElement {
        if t == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.repr {
            Repr::Prime => {
                let mut base = a.0 as u64;
                let mut exp = t;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % self.p;
                    }
                    base = base * base % self.p;
                    exp >>= 1;
                }
                FieldElement(acc as u16)
            }
            Repr::Tables { exp, log } => {
                let l = (log[a.0 as usize] as u128 * t as u128 % (self.q - 1) as u128) as usize;
                FieldElement(exp[l])
            }
        }
    }

    /// c^t for the field's primitive element.
    pub fn primitive_power(&self, t: u64) -> FieldElement {
        self.pow(self.c, t)
    }

    fn digitwise(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: fn(u64, u64, u64) -> u64,
    ) -> FieldElement {
        if self.p == 2 {
            // digitwise add and sub over GF(2) are both XOR
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.e {
            out += op(x % self.p, y % self.p, self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out as u16)
    }
}

/// Returns (p, e) with q = p^e, p prime, or None when q is not a prime power.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut rest = q;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((q, 1)); // q itself is prime
    }
    let mut e = 0u32;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p, e))
    } else {
        None
    }
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

fn smallest_prime_field_generator(p: u64) -> u64 {
    let group = p - 1;
    let factors = prime_factors(group);
    'cand: for c in 1..p {
        // c generates iff c^((p-1)/f) != 1 for every prime factor f
        for &f in &factors {
            if modpow(c, group / f, p) == 1 {
                continue 'cand;
            }
        }
        return c;
    }
    unreachable!("every prime field has a generator");
}

fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

// ---- polynomial arithmetic over GF(p), used only while building a field ----

fn poly_trim(v: &mut Vec<u16>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_mul(a: &[u16], b: &[u16], p: u64) -> Vec<u16> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    let mut out: Vec<u16> = out.into_iter().map(|x| x as u16).collect();
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial f.
fn poly_rem(a: &[u16], f: &[u16], p: u64) -> Vec<u16> {
    let deg_f = f.len() - 1;
    let mut rem: Vec<u64> = a.iter().map(|&x| x as u64 % p).collect();
    while rem.len() > deg_f {
        let lead = rem[rem.len() - 1];
        let shift = rem.len() - 1 - deg_f;
        if lead != 0 {
            for (i, &fi) in f.iter().enumerate() {
                let sub = lead * fi as u64 % p;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
        }
        rem.pop();
    }
    let mut out: Vec<u16> = rem.into_iter().map(|x| x as u16).collect();
    poly_trim(&mut out);
    out
}

fn poly_mul_mod(a: &[u16], b: &[u16], f: &[u16], p: u64) -> Vec<u16> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_pow_mod(a: &[u16], mut t: u64, f: &[u16], p: u64) -> Vec<u16> {
    let mut acc = vec![1u16];
    let mut base = poly_rem(a, f, p);
    while t > 0 {
        if t & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, f, p);
        }
        base = poly_mul_mod(&base, &base, f, p);
        t >>= 1;
    }
    acc
}

fn poly_is_zero(a: &[u16]) -> bool {
    a.iter().all(|&x| x == 0)
}

fn poly_gcd(a: &[u16], b: &[u16], p: u64) -> Vec<u16> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        // normalize y to monic so poly_rem applies
        let lead = *y.last().unwrap() as u64;
        let inv = modpow(lead, p - 2, p);
        let monic: Vec<u16> = y.iter().map(|&c| (c as u64 * inv % p) as u16).collect();
        let r = poly_rem(&x, &monic, p);
        x = monic;
        y = r;
    }
    x
}

fn poly_sub(a: &[u16], b: &[u16], p: u64) -> Vec<u16> {
    let n = a.len().max(b.len());
    let mut out = vec![0u16; n];
    for i in 0..n {
        let ai = a.get(i).copied().unwrap_or(0) as u64;
        let bi = b.get(i).copied().unwrap_or(0) as u64;
        out[i] = ((ai + p - bi) % p) as u16;
    }
    poly_trim(&mut out);
    out
}

/// Rabin irreducibility test for a monic polynomial of degree e over GF(p).
fn poly_is_irreducible(f: &[u16], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    let x = vec![0u16, 1];
    // h_i = x^(p^i) mod f, advanced one Frobenius step at a time
    let mut h = poly_rem(&x, f, p);
    let checkpoints: Vec<u32> = prime_factors(e as u64)
        .iter()
        .map(|&t| e / t as u32)
        .collect();
    for i in 1..=e {
        h = poly_pow_mod(&h, p, f, p);
        if checkpoints.contains(&i) {
            let g = poly_gcd(&poly_sub(&h, &x, p), f, p);
            if g.len() > 1 {
                return false;
            }
        }
    }
    // x^(p^e) must come back to x
    poly_is_zero(&poly_sub(&h, &x, p))
}

fn encode_poly(coeffs: &[u16], p: u64) -> u64 {
    let mut v = 0u64;
    for &c in coeffs.iter().rev() {
        v = v * p + c as u64;
    }
    v
}

fn decode_poly(mut v: u64, p: u64, e: u32) -> Vec<u16> {
    let mut out = vec![0u16; e as usize];
    for slot in out.iter_mut() {
        *slot = (v % p) as u16;
        v /= p;
    }
    out
}

/// Monic irreducible of degree e over GF(p) with the smallest base-p
/// encoding of its non-leading coefficients.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u16> {
    let count = p.pow(e);
    for v in 0..count {
        let mut f = decode_poly(v, p, e);
        f.push(1);
        if poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist for every degree");
}

fn smallest_extension_generator(p: u64, e: u32, modulus: &[u16]) -> u64 {
    let q = p.pow(e);
    let group = q - 1;
    let factors = prime_factors(group);
    'cand: for v in 1..q {
        let cand = decode_poly(v, p, e);
        for &f in &factors {
            let power = poly_pow_mod(&cand, group / f, modulus, p);
            if encode_poly(&power, p) == 1 {
                continue 'cand;
            }
        }
        return v;
    }
    unreachable!("every finite field has a generator");
}

fn build_tables(p: u64, e: u32, modulus: &[u16], c: u64) -> (Vec<u16>, Vec<u32>) {
    let q = p.pow(e);
    let group = (q - 1) as usize;
    let c_poly = decode_poly(c, p, e);
    let mut exp = vec![0u16; 2 * group];
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![1u16];
    for (i, slot) in exp.iter_mut().take(group).enumerate() {
        let v = encode_poly(&cur, p) as u16;
        *slot = v;
        log[v as usize] = i as u32;
        cur = poly_mul_mod(&cur, &c_poly, modulus, p);
    }
    debug_assert_eq!(encode_poly(&cur, p), 1, "generator order must be q-1");
    for i in 0..group {
        exp[group + i] = exp[i];
    }
    (exp, log)
}

// ---- field-size thresholds ------------------------------------------------

/// Which of the two code constructions a field is being sized for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    C1,
    C2,
}

/// How raw data maps into field symbols.
///
/// `Byte` pins the field to a prime of at least 257 so each input byte is
/// its own symbol; `Symbol` allows any prime power above the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolMode {
    Symbol,
    Byte,
}

/// The exclusive lower bound on q for the given parameters.
///
/// For C1 the bound depends on the branch of the coefficient assignment:
/// m(w+2) when w = 2 < r, m(w+1) when 2 < w < r, and mw when w = r.
/// For C2 (base parameters n, k, d = n-1 plus replication s) it is s·m·r.
pub fn field_threshold(
    construction: Construction,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
) -> Result<u64> {
    if n % 2 != 0 {
        return Err(Error::OddLength(n));
    }
    if k == 0 || d <= k || d >= n {
        return Err(Error::BadDegree { n, k, d });
    }
    let m = (n / 2) as u64;
    let w = (d - k + 1) as u64;
    let r = (n - k) as u64;
    match construction {
        Construction::C1 => Ok(if w == r {
            m * w
        } else if w == 2 {
            m * (w + 2)
        } else {
            m * (w + 1)
        }),
        Construction::C2 => {
            if s == 0 {
                return Err(Error::BadReplication(s));
            }
            if d != n - 1 {
                return Err(Error::BadDegree { n, k, d });
            }
            Ok(s as u64 * m * r)
        }
    }
}

/// Smallest field order admissible for the construction.
///
/// Symbol mode returns the smallest prime power strictly above the
/// threshold; byte mode returns the smallest prime that is both above the
/// threshold and at least 257, so that bytes embed as symbols unchanged.
pub fn smallest_valid_q(
    construction: Construction,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    mode: SymbolMode,
) -> Result<u64> {
    let threshold = field_threshold(construction, n, k, d, s)?;
    let start = match mode {
        SymbolMode::Symbol => threshold + 1,
        SymbolMode::Byte => (threshold + 1).max(257),
    };
    let mut q = start;
    loop {
        if q > MAX_FIELD_ORDER {
            return Err(Error::TooLarge(q));
        }
        let ok = matches!(
            (mode, prime_power_decomposition(q)),
            (SymbolMode::Symbol, Some(_)) | (SymbolMode::Byte, Some((_, 1)))
        );
        if ok {
            return Ok(q);
        }
        q += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf13_canonical() {
        let f = make_field(13).unwrap();
        assert_eq!(f.characteristic(), 13);
        assert_eq!(f.extension_degree(), 1);
        assert_eq!(f.primitive_element(), f.element(2));
        assert!(f.modulus().is_empty());
    }

    #[test]
    fn gf4_canonical() {
        let f = make_field(4).unwrap();
        assert_eq!(f.characteristic(), 2);
        assert_eq!(f.extension_degree(), 2);
        // x^2 + x + 1, the only irreducible quadratic over GF(2)
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // the class of x encodes as 2 and generates
        assert_eq!(f.primitive_element(), f.element(2));
    }

    #[test]
    fn non_prime_power_rejected() {
        assert_eq!(make_field(12).unwrap_err(), Error::NotPrimePower(12));
        assert_eq!(make_field(1).unwrap_err(), Error::NotPrimePower(1));
        assert_eq!(make_field(0).unwrap_err(), Error::NotPrimePower(0));
        assert_eq!(make_field(65536).unwrap_err(), Error::TooLarge(65536));
    }

    #[test]
    fn gf13_arithmetic_examples() {
        let f = make_field(13).unwrap();
        assert_eq!(f.mul(f.element(7), f.element(8)), f.element(4));
        assert_eq!(f.inv(f.element(5)).unwrap(), f.element(8));
        assert_eq!(f.inv(f.element(0)).unwrap_err(), Error::DivisionByZero(13));
    }

    #[test]
    fn gf4_mul_example() {
        let f = make_field(4).unwrap();
        // x * x = x + 1 under x^2 + x + 1
        assert_eq!(f.mul(f.element(2), f.element(2)), f.element(3));
    }

    #[test]
    fn pow_conventions() {
        let f = make_field(9).unwrap();
        assert_eq!(f.pow(f.element(0), 0), f.one());
        assert_eq!(f.pow(f.element(0), 5), f.zero());
        assert_eq!(f.pow(f.element(5), 0), f.one());
    }

    fn axiom_suite(q: u64) {
        let f = make_field(q).unwrap();
        let elems: Vec<FieldElement> = (0..q).map(|v| f.element(v)).collect();
        // identities and inverses, exhaustive
        for &a in &elems {
            assert_eq!(f.add(a, f.zero()), a);
            assert_eq!(f.mul(a, f.one()), a);
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            assert_eq!(f.sub(a, a), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
        // commutativity exhaustive, associativity/distributivity on a grid
        for &a in &elems {
            for &b in &elems {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        let step = (q / 7).max(1);
        for &a in elems.iter().step_by(step as usize) {
            for &b in elems.iter().step_by(step as usize) {
                for &c in elems.iter().step_by(step as usize) {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for q in [2, 3, 4, 8, 9, 13, 16, 25, 27, 64] {
            axiom_suite(q);
        }
    }

    #[test]
    fn primitive_element_order_exhaustive() {
        for q in [
            2u64, 3, 4, 5, 8, 9, 13, 16, 17, 25, 27, 64, 81, 128, 243, 256,
        ] {
            let f = make_field(q).unwrap();
            let c = f.primitive_element();
            assert_eq!(f.pow(c, q - 1), f.one(), "c^(q-1) in GF({q})");
            for t in 1..q - 1 {
                assert_ne!(f.pow(c, t), f.one(), "order of c divides {t} in GF({q})");
            }
        }
    }

    /// Naive polynomial arithmetic oracle for extension fields.
    fn naive_mul(q: u64, a: u64, b: u64) -> u64 {
        let (p, e) = prime_power_decomposition(q).unwrap();
        let modulus = smallest_irreducible(p, e);
        let pa = decode_poly(a, p, e);
        let pb = decode_poly(b, p, e);
        encode_poly(&poly_mul_mod(&pa, &pb, &modulus, p), p)
    }

    #[test]
    fn tables_match_polynomial_arithmetic() {
        for q in [4u64, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = make_field(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    let got = f.mul(f.element(a), f.element(b));
                    assert_eq!(got.value() as u64, naive_mul(q, a, b), "{a}*{b} in GF({q})");
                }
            }
        }
    }

    #[test]
    fn threshold_examples() {
        // w = 2 < r branch
        assert_eq!(
            smallest_valid_q(Construction::C1, 6, 3, 4, 1, SymbolMode::Symbol).unwrap(),
            13
        );
        // w = r branch; 10 is not a prime power
        assert_eq!(
            smallest_valid_q(Construction::C1, 6, 3, 5, 1, SymbolMode::Symbol).unwrap(),
            11
        );
        // replicated construction: s*m*r = 8, and 9 = 3^2
        assert_eq!(
            smallest_valid_q(Construction::C2, 4, 2, 3, 2, SymbolMode::Symbol).unwrap(),
            9
        );
        // byte mode lifts to the smallest prime >= 257
        assert_eq!(
            smallest_valid_q(Construction::C1, 6, 3, 4, 1, SymbolMode::Byte).unwrap(),
            257
        );
    }

    #[test]
    fn threshold_validation_errors() {
        assert_eq!(
            field_threshold(Construction::C1, 5, 3, 4, 1).unwrap_err(),
            Error::OddLength(5)
        );
        assert!(matches!(
            field_threshold(Construction::C1, 6, 3, 6, 1).unwrap_err(),
            Error::BadDegree { .. }
        ));
        assert!(matches!(
            field_threshold(Construction::C2, 4, 2, 2, 2).unwrap_err(),
            Error::BadDegree { .. }
        ));
        assert_eq!(
            field_threshold(Construction::C2, 4, 2, 3, 0).unwrap_err(),
            Error::BadReplication(0)
        );
    }

    #[test]
    fn prime_power_decomposition_cases() {
        assert_eq!(prime_power_decomposition(13), Some((13, 1)));
        assert_eq!(prime_power_decomposition(64), Some((2, 6)));
        assert_eq!(prime_power_decomposition(27), Some((3, 3)));
        assert_eq!(prime_power_decomposition(12), None);
        assert_eq!(prime_power_decomposition(1), None);
    }

    proptest! {
        #[test]
        fn axioms_random_triples_gf257(a in 0u64..257, b in 0u64..257, c in 0u64..257) {
            let f = make_field(257).unwrap();
            let (a, b, c) = (f.element(a), f.element(b), f.element(c));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }

        #[test]
        fn axioms_random_triples_gf81(a in 0u64..81, b in 0u64..81, c in 0u64..81) {
            let f = make_field(81).unwrap();
            let (a, b, c) = (f.element(a), f.element(b), f.element(c));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
