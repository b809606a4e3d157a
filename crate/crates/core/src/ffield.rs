//! Exact arithmetic in GF(p^r) and in the quadratic extension GF(q)(√σ).
//!
//! Elements are identified with integers in `[0, q)`: the coefficient vector
//! `c_0 + c_1 t + … + c_{r-1} t^{r-1}` (polynomial basis over the canonical
//! modulus) is read as the base-p integer `c_0 + c_1 p + …`. Index 0 is the
//! zero element and index 1 is the unit, for every `(p, r)`.
//!
//! Multiplication goes through discrete log tables built from the canonical
//! primitive element, so `FieldCtx` construction is O(q·r²) and every product
//! afterwards is two lookups.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field size `make_field` accepts unless told otherwise.
pub const DEFAULT_FIELD_CEILING: u64 = 1 << 20;

/// Fields up to this size keep a full addition table.
const ADD_TABLE_MAX_Q: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{r} exceeds the ceiling {ceiling}")]
    CeilingExceeded { p: u64, r: u32, ceiling: u64 },
    #[error("element index {index} is out of range for GF({q})")]
    OutOfRange { index: u64, q: u32 },
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("sigma = {0} is a square, GF(q)(sqrt(sigma)) would not be a field")]
    SigmaIsSquare(u32),
    #[error("the quadratic extension needs odd characteristic, got q = {0}")]
    EvenCharacteristic(u32),
}

/// An element of some `FieldCtx`, by canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One field operation, as accepted by [`FieldCtx::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add(FieldElem, FieldElem),
    Sub(FieldElem, FieldElem),
    Mul(FieldElem, FieldElem),
    Inv(FieldElem),
    Pow(FieldElem, u64),
    Neg(FieldElem),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// GF(p^r) with its canonical modulus, ordering and log tables.
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: FieldElem,
    /// `exp[k] = g^k` for `k in 0..2(q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r
    }
}

impl Eq for FieldCtx {}

/// Builds GF(p^r) with the default size ceiling.
pub fn make_field(p: u64, r: u32) -> Result<Arc<FieldCtx>, FieldError> {
    make_field_with_ceiling(p, r, DEFAULT_FIELD_CEILING)
}

/// GF(q) for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Arc<FieldCtx>, FieldError> {
    match prime_factors(q).as_slice() {
        &[p] => {
            let (mut r, mut m) = (0u32, q);
            while m > 1 {
                m /= p;
                r += 1;
            }
            make_field(p, r)
        }
        _ => Err(FieldError::NotPrimePower(q)),
    }
}

pub fn make_field_with_ceiling(p: u64, r: u32, ceiling: u64) -> Result<Arc<FieldCtx>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if r == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = p.checked_pow(r).filter(|&q| q <= ceiling && q <= u32::MAX as u64);
    let Some(q) = q else {
        return Err(FieldError::CeilingExceeded { p, r, ceiling });
    };
    Ok(Arc::new(FieldCtx::build(p as u32, r, q as u32)))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    while let Some(dr) = r.iter().rposition(|&c| c % p != 0) {
        if dr < dm {
            break;
        }
        let lead = r[dr] % p;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = lead * mc as u64 % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
    let mut out: Vec<u32> = r.into_iter().map(|c| (c % p) as u32).collect();
    out.truncate(dm.max(1));
    out.resize(dm.max(1), 0);
    out
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    poly_trim(&mut out);
    out
}

fn digits_of(mut index: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((index % p as u64) as u32);
        index /= p as u64;
    }
    out
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits_of(low, p, d);
            g.push(1);
            let rem = poly_rem(f, &g, p);
            if poly_degree(&rem).is_none() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`,
/// comparing lower coefficients as base-p digits (low degree first).
fn canonical_modulus(p: u32, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(r);
    for low in 0..count {
        let mut f = digits_of(low, p, r as usize);
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

impl FieldCtx {
    fn build(p: u32, r: u32, q: u32) -> FieldCtx {
        let modulus = canonical_modulus(p, r);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = digits_of(a as u64, p, r as usize);
            let db = digits_of(b as u64, p, r as usize);
            let prod = poly_mul(&da, &db, p);
            let red = poly_rem(&prod, &modulus, p);
            red.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let primitive = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| factors.iter().all(|&l| slow_pow(g, order / l) != 1))
                .expect("GF(q)* is cyclic")
        };

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for k in 0..n {
            exp[k] = cur;
            log[cur as usize] = k as u32;
            cur = slow_mul(cur, primitive);
        }
        for k in n..2 * n {
            exp[k] = exp[k - n];
        }
        if n == 1 {
            exp[1] = 1;
        }

        let neg_of = |a: u32| -> u32 {
            if r == 1 {
                (p - a) % p
            } else {
                let d = digits_of(a as u64, p, r as usize);
                d.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + ((p - c) % p) as u64) as u32
            }
        };
        let neg_table: Vec<u32> = (0..q).map(neg_of).collect();

        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            primitive: FieldElem(primitive),
            exp,
            log,
            add_table: None,
            neg_table,
        };
        if q <= ADD_TABLE_MAX_Q && r > 1 && p != 2 {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.add_digitwise(a, b);
                }
            }
            ctx.add_table = Some(table);
        }
        ctx
    }

    fn add_digitwise(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.r {
            let s = (a % p + b % p) % p;
            out += s * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Modulus coefficients `c_0, …, c_r` (monic, so `c_r = 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem, FieldError> {
        if index < self.q as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(FieldError::OutOfRange { index, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    /// The image of the integer `n` under `Z -> GF(p) ⊂ GF(q)`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Polynomial-basis coefficients of `a`, lowest degree first.
    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        digits_of(a.0 as u64, self.p, self.r as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            let s = a.0 + b.0;
            FieldElem(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            FieldElem(a.0 ^ b.0)
        } else if let Some(t) = &self.add_table {
            FieldElem(t[(a.0 * self.q + b.0) as usize])
        } else {
            FieldElem(self.add_digitwise(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg_table[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        let n = self.q - 1;
        Ok(FieldElem(self.exp[((n - self.log[a.index()]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        FieldElem(self.exp[(self.log[a.index()] as u64 * (e % n) % n) as usize])
    }

    /// `g^k` for the canonical primitive element `g`; `k` may be negative.
    pub fn primitive_pow(&self, k: i64) -> FieldElem {
        let n = (self.q - 1) as i64;
        FieldElem(self.exp[k.rem_euclid(n) as usize])
    }

    /// Discrete log base the canonical primitive element.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.index()])
    }

    pub fn apply(&self, op: ArithOp) -> Result<FieldElem, FieldError> {
        let check = |a: FieldElem| self.elem(a.0 as u64);
        Ok(match op {
            ArithOp::Add(a, b) => self.add(check(a)?, check(b)?),
            ArithOp::Sub(a, b) => self.sub(check(a)?, check(b)?),
            ArithOp::Mul(a, b) => self.mul(check(a)?, check(b)?),
            ArithOp::Inv(a) => self.inv(check(a)?)?,
            ArithOp::Pow(a, e) => self.pow(check(a)?, e),
            ArithOp::Neg(a) => self.neg(check(a)?),
        })
    }

    /// Euler's criterion; every element is a square when q is even, and 0 = 0².
    pub fn is_square(&self, a: FieldElem) -> bool {
        if a.is_zero() || !self.is_odd() {
            return true;
        }
        self.pow(a, ((self.q - 1) / 2) as u64) == FieldElem::ONE
    }

    /// Some `t` with `t² = a`, if one exists (the one with even log / 2 for odd q).
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(FieldElem::ZERO);
        }
        let l = self.log[a.index()];
        if !self.is_odd() {
            // squaring is a bijection; x ↦ x^(q/2) inverts it
            return Some(self.pow(a, (self.q / 2) as u64));
        }
        (l % 2 == 0).then(|| FieldElem(self.exp[(l / 2) as usize]))
    }

    /// The element of smallest index whose multiplicative order is `q − 1`.
    pub fn primitive_element(&self) -> FieldElem {
        self.primitive
    }

    /// Smallest-index non-square, for odd q.
    pub fn smallest_nonsquare(&self) -> Option<FieldElem> {
        self.nonzero().find(|&a| !self.is_square(a))
    }

    /// Multiplicative order of a non-zero element.
    pub fn order(&self, a: FieldElem) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.q - 1) as u64;
        Some(n / gcd(l, n))
    }

    /// Absolute trace GF(q) → GF(p), returned as an integer in `[0, p)`.
    pub fn trace(&self, a: FieldElem) -> u32 {
        let mut acc = FieldElem::ZERO;
        let mut cur = a;
        for _ in 0..self.r {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    pub fn summary(&self) -> FieldSummary {
        let nonsquare = self.smallest_nonsquare();
        FieldSummary {
            p: self.p,
            r: self.r,
            q: self.q,
            modulus: self.modulus.clone(),
            modulus_text: poly_text(&self.modulus),
            primitive_element: self.primitive,
            smallest_nonsquare: nonsquare,
            nonzero_squares: if self.is_odd() { (self.q - 1) / 2 } else { self.q - 1 },
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `t^2 + t + 1` style rendering of a coefficient vector.
pub fn poly_text(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match deg {
            0 => String::new(),
            1 => "t".to_string(),
            d => format!("t^{d}"),
        };
        terms.push(match (c, deg) {
            (c, 0) => c.to_string(),
            (1, _) => mono,
            (c, _) => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub p: u32,
    pub r: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub modulus_text: String,
    pub primitive_element: FieldElem,
    pub smallest_nonsquare: Option<FieldElem>,
    pub nonzero_squares: u32,
}

/// `x + y√σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtElem {
    pub re: FieldElem,
    pub im: FieldElem,
}

impl ExtElem {
    pub const fn new(re: FieldElem, im: FieldElem) -> Self {
        ExtElem { re, im }
    }
}

/// GF(q²) realised as GF(q)(√σ) for a non-square σ.
#[derive(Clone, Debug)]
pub struct ExtCtx {
    base: Arc<FieldCtx>,
    sigma: FieldElem,
}

pub fn ext_field(base: Arc<FieldCtx>, sigma: FieldElem) -> Result<ExtCtx, FieldError> {
    if !base.is_odd() {
        return Err(FieldError::EvenCharacteristic(base.q()));
    }
    base.elem(sigma.0 as u64)?;
    if base.is_square(sigma) {
        return Err(FieldError::SigmaIsSquare(sigma.0));
    }
    Ok(ExtCtx { base, sigma })
}

impl ExtCtx {
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn sigma(&self) -> FieldElem {
        self.sigma
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        let q = self.base.q();
        (0..q).flat_map(move |x| (0..q).map(move |y| ExtElem::new(FieldElem(x), FieldElem(y))))
    }

    pub fn add(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem::new(f.add(z.re, w.re), f.add(z.im, w.im))
    }

    pub fn sub(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem::new(f.sub(z.re, w.re), f.sub(z.im, w.im))
    }

    pub fn mul(&self, z: ExtElem, w: ExtElem) -> ExtElem {
        let f = &self.base;
        let re = f.add(f.mul(z.re, w.re), f.mul(self.sigma, f.mul(z.im, w.im)));
        let im = f.add(f.mul(z.re, w.im), f.mul(z.im, w.re));
        ExtElem::new(re, im)
    }

    pub fn pow(&self, z: ExtElem, mut e: u64) -> ExtElem {
        let mut base = z;
        let mut acc = ExtElem::new(FieldElem::ONE, FieldElem::ZERO);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, z: ExtElem) -> ExtElem {
        ExtElem::new(z.re, self.base.neg(z.im))
    }

    /// `z·z̄ = x² − σy²`.
    pub fn norm(&self, z: ExtElem) -> FieldElem {
        let f = &self.base;
        f.sub(f.mul(z.re, z.re), f.mul(self.sigma, f.mul(z.im, z.im)))
    }

    pub fn re(&self, z: ExtElem) -> FieldElem {
        z.re
    }

    pub fn im(&self, z: ExtElem) -> FieldElem {
        z.im
    }
}
