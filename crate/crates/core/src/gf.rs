//! Exact arithmetic in GF(p^m).
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! whose base-`p` digits are its coefficients in the polynomial basis
//! `1, x, ..., x^{m-1}` modulo the field's defining polynomial. That integer is
//! also the element's position in [`Field::elements`], so zero is index 0 and
//! one is index 1.
//!
//! Extension fields of order at most 2^16 carry discrete-log tables; larger
//! extension fields and all prime fields compute directly.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 16;

/// A field element, meaningful only together with the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Position of the element in the field's enumeration order.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `index < q`.
    #[inline]
    pub(crate) const fn from_index(index: u32) -> Elem {
        Elem(index)
    }
}

/// The defining data of GF(p^m) plus cached arithmetic tables.
///
/// Cloning is cheap (shared pointer). Two handles compare equal when they
/// describe the same `(p, m, modulus)`.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// `m + 1` coefficients, low degree first, monic. `[0, 1]` when `m == 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.0.p, self.0.m, self.0.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_order(p: u64, m: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p).ok_or(Error::FieldTooLarge { p, m })?;
        if q > u32::MAX as u64 {
            return Err(Error::FieldTooLarge { p, m });
        }
    }
    Ok(q as u32)
}

impl Field {
    /// GF(p^m) with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared from the constant term upwards).
    pub fn new(p: u64, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::BadExtensionDegree(m));
        }
        let q = checked_order(p, m)?;
        let p32 = p as u32;
        let modulus = if m == 1 { vec![0, 1] } else { smallest_irreducible(p32, m) };
        Ok(Self::build(p32, m, q, modulus))
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<Field> {
        Self::new(p, 1)
    }

    /// GF(p^m) with an explicit modulus, as read from a file header.
    pub fn with_modulus(p: u64, m: u32, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::BadExtensionDegree(m));
        }
        let q = checked_order(p, m)?;
        let p32 = p as u32;
        if modulus.len() != m as usize + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients, found {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p32) {
            return Err(Error::BadModulus("coefficient not reduced mod p".into()));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::BadModulus("modulus is not monic".into()));
        }
        if m == 1 {
            if modulus != [0, 1] {
                return Err(Error::BadModulus("prime field modulus must be `0 1`".into()));
            }
        } else if !is_irreducible(p32, modulus) {
            return Err(Error::BadModulus("modulus is reducible".into()));
        }
        Ok(Self::build(p32, m, q, modulus.to_vec()))
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut inner = Inner { p, m, q, modulus, tables: None };
        if m > 1 && (q as u64) <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Field(Arc::new(inner))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Field order `p^m`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Element by enumeration index.
    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index >= self.0.q {
            return Err(Error::BadElement(format!("index {index} >= q = {}", self.0.q)));
        }
        Ok(Elem(index))
    }

    /// Element from its `m` polynomial-basis coefficients, low degree first.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.0.m as usize {
            return Err(Error::BadElement(format!(
                "expected {} coefficients, found {}",
                self.0.m,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::BadElement("coefficient not reduced mod p".into()));
        }
        Ok(self.pack(coeffs))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        self.unpack(a)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    fn pack(&self, digits: &[u32]) -> Elem {
        let p = self.0.p as u64;
        let mut acc: u64 = 0;
        for &d in digits.iter().rev() {
            acc = acc * p + d as u64;
        }
        Elem(acc as u32)
    }

    fn unpack(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        let mut out = Vec::with_capacity(self.0.m as usize);
        for _ in 0..self.0.m {
            out.push(v % p);
            v /= p;
        }
        out
    }

    /// All `q` elements, starting at zero, in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    /// Uniform element drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.0.q))
    }

    /// Uniform nonzero element drawn from `rng`.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.0.q))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = inner.p as u64;
            return Elem(if s >= p { (s - p) as u32 } else { s as u32 });
        }
        if inner.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = inner.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut acc = 0u32;
        let mut place = 1u32;
        for _ in 0..inner.m {
            let d = (x % p + y % p) % p;
            acc += d * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(acc)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if a.0 == 0 || inner.p == 2 {
            return a;
        }
        if inner.m == 1 {
            return Elem(inner.p - a.0);
        }
        let p = inner.p;
        let mut x = a.0;
        let mut acc = 0u32;
        let mut place = 1u32;
        for _ in 0..inner.m {
            let d = (p - x % p) % p;
            acc += d * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(acc)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.0;
        if inner.m == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        if let Some(t) = &inner.tables {
            let i = t.log[a.0 as usize] + t.log[b.0 as usize];
            return Elem(t.exp[i as usize]);
        }
        self.mul_poly(a, b)
    }

    /// Multiplication by polynomial product and reduction, bypassing tables.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        if self.0.m == 1 {
            return self.mul(a, b);
        }
        let p = self.0.p;
        let prod = poly::mul(&self.unpack(a), &self.unpack(b), p);
        let (_, rem) = poly::divrem(&prod, &self.0.modulus, p);
        let mut digits = rem;
        digits.resize(self.0.m as usize, 0);
        self.pack(&digits)
    }

    /// Multiplicative inverse. Zero has none.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        if inner.m == 1 {
            return Ok(Elem(inv_mod(a.0 as u64, inner.p as u64) as u32));
        }
        if let Some(t) = &inner.tables {
            let l = t.log[a.0 as usize];
            let e = if l == 0 { 0 } else { inner.q - 1 - l };
            return Ok(Elem(t.exp[e as usize]));
        }
        Ok(self.inv_euclid(a))
    }

    /// Inverse by the extended Euclidean algorithm on `GF(p)[x]`, bypassing tables.
    pub fn inv_euclid(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        if self.0.m == 1 {
            return Elem(inv_mod(a.0 as u64, self.0.p as u64) as u32);
        }
        let p = self.0.p;
        let mut digits = poly::inverse_mod(&self.unpack(a), &self.0.modulus, p);
        digits.resize(self.0.m as usize, 0);
        self.pack(&digits)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Checks that `a` is a valid element of this field.
    pub fn check(&self, a: Elem) -> Result<Elem> {
        self.elem(a.0)
    }

    /// Serialized form `c0[:c1:...:c_{m-1}]`.
    pub fn format_elem(&self, a: Elem) -> alloc::string::String {
        let digits = self.unpack(a);
        let mut s = alloc::string::String::new();
        for (i, d) in digits.iter().enumerate() {
            if i > 0 {
                s.push(':');
            }
            s.push_str(&format!("{d}"));
        }
        s
    }

    /// Inverse of [`Field::format_elem`].
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let mut digits = Vec::with_capacity(self.0.m as usize);
        for part in s.split(':') {
            let d: u32 = part
                .parse()
                .map_err(|_| Error::BadElement(format!("cannot parse `{s}`")))?;
            digits.push(d);
        }
        self.from_coeffs(&digits)
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(p as i128) as u64
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        // Lexicographic from the constant term: c_0 is the most significant digit.
        let mut coeffs = vec![0u32; m as usize + 1];
        let mut v = idx;
        for i in (0..m as usize).rev() {
            coeffs[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs[m as usize] = 1;
        if coeffs[0] != 0 && is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut v = idx;
            for c in g.iter_mut().take(d) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            g[d] = 1;
            let (_, rem) = poly::divrem(f, &g, p);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let factors = prime_factors(order);
    let p = inner.p;
    let m = inner.m as usize;
    let unpack = |v: u32| {
        let mut v = v;
        let mut out = Vec::with_capacity(m);
        for _ in 0..m {
            out.push(v % p);
            v /= p;
        }
        out
    };
    let pack = |d: &[u32]| {
        let mut acc = 0u64;
        for &x in d.iter().rev() {
            acc = acc * p as u64 + x as u64;
        }
        acc as u32
    };
    let mulp = |a: u32, b: u32| {
        let prod = poly::mul(&unpack(a), &unpack(b), p);
        let (_, mut rem) = poly::divrem(&prod, &inner.modulus, p);
        rem.resize(m, 0);
        pack(&rem)
    };
    let powp = |a: u32, mut e: u32| {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulp(acc, base);
            }
            base = mulp(base, base);
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .find(|&g| factors.iter().all(|&f| powp(g, order / f) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..order {
        exp[i as usize] = x;
        exp[(i + order) as usize] = x;
        log[x as usize] = i;
        x = mulp(x, generator);
    }
    Tables { exp, log }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Dense polynomials over GF(p) as coefficient vectors, low degree first,
/// with no trailing zeros (the zero polynomial is empty).
mod poly {
    use super::inv_mod;
    use alloc::vec;
    use alloc::vec::Vec;

    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|v| v as u32).collect())
    }

    pub fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut rem = trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = inv_mod(*b.last().unwrap() as u64, p as u64);
        let mut quot = vec![0u32; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (c as u64 * bi as u64 % p as u64) as u32;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(out)
    }

    /// Inverse of `a` modulo the irreducible `f` by extended Euclid.
    pub fn inverse_mod(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let (mut old_r, mut r) = (trim(a.to_vec()), trim(f.to_vec()));
        let (mut old_s, mut s) = (vec![1u32], Vec::new());
        while !r.is_empty() {
            let (qt, rem) = divrem(&old_r, &r, p);
            let next_s = sub(&old_s, &mul(&qt, &s, p), p);
            old_r = core::mem::replace(&mut r, rem);
            old_s = core::mem::replace(&mut s, next_s);
        }
        // old_r is a nonzero constant since f is irreducible and a != 0 mod f.
        debug_assert_eq!(old_r.len(), 1);
        let c = inv_mod(old_r[0] as u64, p as u64);
        let scaled: Vec<u32> = old_s.iter().map(|&x| (x as u64 * c % p as u64) as u32).collect();
        let (_, rem) = divrem(&scaled, f, p);
        rem
    }
}
