//! Arithmetic in F_q for odd prime powers q = p^d: element indexing,
//! quadratic character, trace, additive characters and Gaussian sums.
//!
//! Elements are stored as indices in 0..q interpreted as base-p digit
//! strings: index Σ c_i p^i names the residue-class polynomial
//! c_0 + c_1 x + ... + c_{d-1} x^{d-1} modulo a fixed irreducible.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;
/// Direct Gaussian-sum evaluation is limited to this order.
pub const GAUSS_DIRECT_LIMIT: u64 = 10_000;

// Full q*q operation tables are built below this order; per-element
// eta/inverse tables below ETA_TABLE_LIMIT.
const OP_TABLE_LIMIT: u32 = 256;
const ETA_TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not an odd prime power")]
    NotOddPrimePower(u64),
    #[error("field order {p}^{d} unsupported (need 1 <= d <= 8 and p^d <= 2^31)")]
    OrderTooLarge { p: u64, d: u32 },
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("field order {q} exceeds limit {limit} for this operation")]
    FieldTooLarge { q: u64, limit: u64 },
}

/// Element of F_q, named by its index in 0..q.
///
/// Indices 0 and 1 are the additive and multiplicative identities in
/// every supported field; all other arithmetic goes through
/// [`FieldParams`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct OpTables {
    q: usize,
    add: Vec<u16>,
    sub: Vec<u16>,
    mul: Vec<u16>,
}

/// A fixed finite field F_{p^d} with p an odd prime.
///
/// Construction picks the modulus deterministically (the first monic
/// irreducible of degree d in coefficient-lexicographic order, constant
/// term most significant) so element indices mean the same thing across
/// runs and platforms.
pub struct FieldParams {
    p: u32,
    d: u32,
    q: u32,
    /// Modulus coefficients by ascending power, length d+1, monic.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    eta_t: Vec<i8>,
    inv_t: Vec<u32>,
    tables: Option<OpTables>,
}

impl std::fmt::Debug for FieldParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldParams")
            .field("p", &self.p)
            .field("d", &self.d)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl FieldParams {
    /// Builds F_{p^d}. Rejects even or composite p and out-of-range orders.
    pub fn new(p: u64, d: u32) -> Result<FieldParams, FieldError> {
        if p == 2 {
            return Err(FieldError::NotOddPrime(2));
        }
        if p < 2 || !is_prime_u64(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(FieldError::OrderTooLarge { p, d });
        }
        let mut q: u64 = 1;
        for _ in 0..d {
            q = q.saturating_mul(p);
            if q > MAX_ORDER {
                return Err(FieldError::OrderTooLarge { p, d });
            }
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = if d == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, d)
        };
        let mut fp = FieldParams {
            p,
            d,
            q,
            modulus,
            eta_t: Vec::new(),
            inv_t: Vec::new(),
            tables: None,
        };
        if q <= ETA_TABLE_LIMIT {
            fp.eta_t = (0..q).map(|a| fp.eta_raw(a)).collect();
            fp.inv_t = (0..q)
                .map(|a| if a == 0 { 0 } else { fp.inv_raw(a) })
                .collect();
        }
        if q <= OP_TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut sub = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    let i = (a as usize) * n + b as usize;
                    add[i] = fp.add_raw(a, b) as u16;
                    sub[i] = fp.sub_raw(a, b) as u16;
                    mul[i] = fp.mul_raw(a, b) as u16;
                }
            }
            fp.tables = Some(OpTables { q: n, add, sub, mul });
        }
        Ok(fp)
    }

    /// Builds the field of order q by factoring q as an odd prime power.
    pub fn from_order(q: u64) -> Result<FieldParams, FieldError> {
        if q < 3 {
            return Err(FieldError::NotOddPrimePower(q));
        }
        if q.is_multiple_of(2) {
            return Err(FieldError::NotOddPrimePower(q));
        }
        // Smallest prime factor of q; q is a prime power iff q = p^d.
        let mut p = 0u64;
        let mut f = 3u64;
        while f * f <= q {
            if q.is_multiple_of(f) {
                p = f;
                break;
            }
            f += 2;
        }
        if p == 0 {
            return FieldParams::new(q, 1);
        }
        let mut rest = q;
        let mut d = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            d += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotOddPrimePower(q));
        }
        FieldParams::new(p, d)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients by ascending power (monic, length d+1), or
    /// None for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.d == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    /// Wraps an index as an element. Panics if out of range.
    #[inline]
    pub fn elem(&self, index: u32) -> FieldElem {
        assert!(index < self.q, "element index {index} out of range");
        FieldElem(index)
    }

    /// Element with the given coefficients by ascending power.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        assert!(coeffs.len() <= self.d as usize);
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            assert!(c < self.p);
            idx = idx * self.p as u64 + c as u64;
        }
        FieldElem(idx as u32)
    }

    /// Coefficients of the element by ascending power, length d.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.d as usize);
        let mut x = a.0;
        for _ in 0..self.d {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    /// Image of an integer under the canonical map Z -> F_q (reduction
    /// mod p into the prime subfield).
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.p as i64) as u32)
    }

    /// Iterates over all field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.add[a.0 as usize * t.q + b.0 as usize] as u32),
            None => FieldElem(self.add_raw(a.0, b.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.sub[a.0 as usize * t.q + b.0 as usize] as u32),
            None => FieldElem(self.sub_raw(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.mul[a.0 as usize * t.q + b.0 as usize] as u32),
            None => FieldElem(self.mul_raw(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg_raw(a.0))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if !self.inv_t.is_empty() {
            return Ok(FieldElem(self.inv_t[a.0 as usize]));
        }
        Ok(FieldElem(self.inv_raw(a.0)))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        FieldElem(self.pow_raw(a.0, e))
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn eta(&self, a: FieldElem) -> i32 {
        if !self.eta_t.is_empty() {
            self.eta_t[a.0 as usize] as i32
        } else {
            self.eta_raw(a.0) as i32
        }
    }

    /// Absolute trace into the prime subfield, returned as an element.
    pub fn trace(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.trace_raw(a.0))
    }

    /// Absolute trace as an integer in 0..p.
    pub fn trace_int(&self, a: FieldElem) -> u32 {
        self.trace_raw(a.0)
    }

    /// Indicator of nonzero: 1 - delta.
    #[inline]
    pub fn norm_ind(&self, a: FieldElem) -> u32 {
        u32::from(!a.is_zero())
    }

    /// Indicator of zero.
    #[inline]
    pub fn delta_ind(&self, a: FieldElem) -> u32 {
        u32::from(a.is_zero())
    }

    /// Canonical additive character x -> exp(2*pi*i*Tr(x)/p).
    pub fn chi1(&self, a: FieldElem) -> Complex64 {
        let t = self.trace_raw(a.0) as f64;
        Complex64::from_polar(1.0, TAU * t / self.p as f64)
    }

    /// Closed-form Gaussian sum of the quadratic character:
    /// (-1)^(d-1) sqrt(q) when p = 1 mod 4, (-1)^(d-1) i^d sqrt(q) when
    /// p = 3 mod 4.
    pub fn gauss_formula(&self) -> Complex64 {
        let sq = (self.q as f64).sqrt();
        let sign = if self.d % 2 == 1 { 1.0 } else { -1.0 };
        if self.p % 4 == 1 {
            Complex64::new(sign * sq, 0.0)
        } else {
            let i_pow_d = match self.d % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            i_pow_d * sign * sq
        }
    }

    /// Gaussian sum by direct summation of eta(x) chi1(x) over the field.
    pub fn gauss_direct(&self) -> Result<Complex64, FieldError> {
        if self.q as u64 > GAUSS_DIRECT_LIMIT {
            return Err(FieldError::FieldTooLarge {
                q: self.q as u64,
                limit: GAUSS_DIRECT_LIMIT,
            });
        }
        let mut s = Complex64::new(0.0, 0.0);
        for x in self.elements() {
            s += self.eta(x) as f64 * self.chi1(x);
        }
        Ok(s)
    }

    // ---- structural (index-level) arithmetic ----

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.d == 1 {
            return (a + b) % self.p;
        }
        let (p, mut out, mut pw) = (self.p, 0u32, 1u32);
        let (mut x, mut y) = (a, b);
        for _ in 0..self.d {
            out += (x % p + y % p) % p * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.d == 1 {
            return (self.p - a) % self.p;
        }
        let (p, mut out, mut pw) = (self.p, 0u32, 1u32);
        let mut x = a;
        for _ in 0..self.d {
            out += ((p - x % p) % p) * pw;
            x /= p;
            pw *= p;
        }
        out
    }

    fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.d == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let d = self.d as usize;
        let mut da = [0u64; MAX_DEGREE as usize];
        let mut db = [0u64; MAX_DEGREE as usize];
        let (mut x, mut y) = (a as u64, b as u64);
        for i in 0..d {
            da[i] = x % p;
            db[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE as usize - 1];
        for i in 0..d {
            if da[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] += da[i] * db[j];
            }
        }
        // Reduce degree >= d terms using x^d = -(m_0 + m_1 x + ...).
        for k in (d..2 * d - 1).rev() {
            let c = prod[k] % p;
            prod[k] = 0;
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().take(d).enumerate() {
                // coefficient of x^(k-d+j) gains -c*m
                prod[k - d + j] += c * (p - m as u64 % p) % p;
            }
        }
        let mut out = 0u64;
        for i in (0..d).rev() {
            out = out * p + prod[i] % p;
        }
        out as u32
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv_raw(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow_raw(a, self.q as u64 - 2)
    }

    fn eta_raw(&self, a: u32) -> i8 {
        if a == 0 {
            return 0;
        }
        let r = self.pow_raw(a, (self.q as u64 - 1) / 2);
        if r == 1 {
            1
        } else {
            -1
        }
    }

    fn trace_raw(&self, a: u32) -> u32 {
        if self.d == 1 {
            return a;
        }
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.d {
            acc = self.add_raw(acc, x);
            x = self.pow_raw(x, self.p as u64);
        }
        // Trace lands in the prime subfield, whose elements are the
        // indices 0..p.
        debug_assert!(acc < self.p);
        acc
    }

    pub(crate) fn table_arith(&self) -> Option<TableArith<'_>> {
        let t = self.tables.as_ref()?;
        Some(TableArith {
            q: t.q,
            add: &t.add,
            sub: &t.sub,
            mul: &t.mul,
            inv: &self.inv_t,
            eta: &self.eta_t,
        })
    }

    pub(crate) fn gen_arith(&self) -> GenArith<'_> {
        GenArith(self)
    }
}

/// Index-level field operations used by the elimination and enumeration
/// hot loops; implemented by a table-backed and a recomputing engine so
/// callers can monomorphize on whichever the field supports.
pub(crate) trait Arith: Sync {
    fn q(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Inverse of a nonzero element.
    fn inv_nz(&self, a: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    /// Quadratic character of a nonzero element, +1 or -1.
    fn eta_nz(&self, a: u32) -> i32;
}

pub(crate) struct TableArith<'a> {
    q: usize,
    add: &'a [u16],
    sub: &'a [u16],
    mul: &'a [u16],
    inv: &'a [u32],
    eta: &'a [i8],
}

impl Arith for TableArith<'_> {
    #[inline(always)]
    fn q(&self) -> u32 {
        self.q as u32
    }
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize] as u32
    }
    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.sub[a as usize * self.q + b as usize] as u32
    }
    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize] as u32
    }
    #[inline(always)]
    fn inv_nz(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
    #[inline(always)]
    fn neg(&self, a: u32) -> u32 {
        self.sub[a as usize] as u32 // 0*q + a
    }
    #[inline(always)]
    fn eta_nz(&self, a: u32) -> i32 {
        self.eta[a as usize] as i32
    }
}

pub(crate) struct GenArith<'a>(&'a FieldParams);

impl Arith for GenArith<'_> {
    #[inline]
    fn q(&self) -> u32 {
        self.0.q
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add_raw(a, b)
    }
    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.0.sub_raw(a, b)
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul_raw(a, b)
    }
    #[inline]
    fn inv_nz(&self, a: u32) -> u32 {
        if !self.0.inv_t.is_empty() {
            self.0.inv_t[a as usize]
        } else {
            self.0.inv_raw(a)
        }
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.0.neg_raw(a)
    }
    #[inline]
    fn eta_nz(&self, a: u32) -> i32 {
        if !self.0.eta_t.is_empty() {
            self.0.eta_t[a as usize] as i32
        } else {
            self.0.eta_raw(a) as i32
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// First monic irreducible of degree d over F_p in lexicographic order
/// on the coefficient sequence (c_0, ..., c_{d-1}), constant term most
/// significant. Returned by ascending power, length d+1.
fn smallest_irreducible(p: u32, d: u32) -> Vec<u32> {
    let d = d as usize;
    let total = (p as u64).pow(d as u32);
    for m in 0..total {
        // Decode m as the sequence (c_0, ..., c_{d-1}) with c_0 in the
        // highest-order position so counting up walks lex order.
        let mut coeffs = vec![0u32; d + 1];
        coeffs[d] = 1;
        let mut x = m;
        for i in (0..d).rev() {
            coeffs[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

/// Irreducibility over F_p for a monic polynomial given by ascending
/// coefficients. Degrees 2 and 3 reduce to a root check; higher degrees
/// trial-divide by every monic polynomial of degree 2..=deg/2.
fn poly_is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let deg = coeffs.len() - 1;
    debug_assert!(coeffs[deg] == 1 && deg >= 2);
    for x in 0..p {
        if poly_eval_mod(p, coeffs, x) == 0 {
            return false;
        }
    }
    if deg <= 3 {
        return true;
    }
    for div_deg in 2..=deg / 2 {
        let count = (p as u64).pow(div_deg as u32);
        let mut div = vec![0u32; div_deg + 1];
        div[div_deg] = 1;
        for m in 0..count {
            let mut x = m;
            for c in div.iter_mut().take(div_deg) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            if poly_divides(p, &div, coeffs) {
                return false;
            }
        }
    }
    true
}

fn poly_eval_mod(p: u32, coeffs: &[u32], x: u32) -> u32 {
    let p = p as u64;
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (acc * x as u64 + c as u64) % p;
    }
    acc as u32
}

/// Whether monic `div` divides monic `poly` over F_p.
fn poly_divides(p: u32, div: &[u32], poly: &[u32]) -> bool {
    let p64 = p as u64;
    let dd = div.len() - 1;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    for k in (dd..rem.len()).rev() {
        let c = rem[k] % p64;
        if c == 0 {
            continue;
        }
        rem[k] = 0;
        for (j, &m) in div.iter().take(dd).enumerate() {
            rem[k - dd + j] = (rem[k - dd + j] + c * (p64 - m as u64 % p64)) % p64;
        }
    }
    rem.iter().all(|&c| c % p64 == 0)
}
