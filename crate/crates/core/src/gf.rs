//! Exact arithmetic in prime-power fields `F_{p^k}`.
//!
//! Elements are dense coefficient vectors modulo a monic irreducible
//! polynomial. Every element has a canonical integer encoding
//! `enc(a) = sum(coeffs[i] * p^i)`, which is what all file formats and
//! orderings use.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} does not fit in 63 bits")]
    OrderOverflow { p: u64, k: u32 },
    #[error("modulus {modulus:?} is not a monic irreducible polynomial of degree {k} over F_{p}")]
    BadModulus { p: u64, k: u32, modulus: Vec<u64> },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{n} does not divide the unit group order {units}")]
    NoRootOfUnity { n: u64, units: u64 },
    #[error("{0} is not the order of a subfield")]
    InvalidSubfield(u64),
    #[error("no embedding of a field of order {from} into a field of order {to}")]
    NoEmbedding { from: u64, to: u64 },
    #[error("encoding {enc} is out of range for a field of order {order}")]
    EncodingOutOfRange { enc: u64, order: u64 },
    #[error("element is not in the image of the embedding")]
    NotInSubfield,
}

pub type Result<T> = std::result::Result<T, FieldError>;

#[derive(Debug)]
struct FieldInner {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
    order: u64,
}

/// A finite field `F_p[x]/(modulus)`. Cheap to clone; clones share storage.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl FieldSpec {
    /// The field of order `p^k` whose modulus is the lexicographically
    /// smallest monic irreducible of degree `k`, comparing coefficient
    /// tuples from the constant term upward.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        check_params(p, k)?;
        let mut tail = vec![0u64; k as usize];
        loop {
            let mut modulus = tail.clone();
            modulus.push(1);
            if is_irreducible(p, &modulus) {
                return Ok(Self::from_parts(p, k, modulus));
            }
            // odometer over (c0, .., c_{k-1}) with c0 most significant
            let mut i = k as usize;
            loop {
                if i == 0 {
                    unreachable!("irreducible polynomials exist in every degree");
                }
                i -= 1;
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
            }
        }
    }

    /// A field with an explicitly supplied modulus (ascending coefficients).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        let k = (modulus.len() - 1) as u32;
        check_params(p, k)?;
        let bad = || FieldError::BadModulus {
            p,
            k,
            modulus: modulus.clone(),
        };
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(bad());
        }
        if !is_irreducible(p, &modulus) {
            return Err(bad());
        }
        Ok(Self::from_parts(p, k, modulus))
    }

    fn from_parts(p: u64, k: u32, modulus: Vec<u64>) -> Self {
        let order = p.pow(k);
        FieldSpec(Arc::new(FieldInner {
            p,
            k,
            modulus,
            order,
        }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Monic modulus, ascending degree, length `k + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.k() as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.p() as i64) as u64;
        e
    }

    /// The class of `x`; for `k = 1` this is the root of the modulus `x`, i.e. zero.
    pub fn generator(&self) -> FieldElement {
        if self.k() == 1 {
            let mut e = self.zero();
            e.coeffs[0] = (self.p() - self.modulus()[0]) % self.p();
            e
        } else {
            let mut e = self.zero();
            e.coeffs[1] = 1;
            e
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.k() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(FieldError::EncodingOutOfRange {
                enc: u64::MAX,
                order: self.order(),
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    /// Inverse of the canonical encoding.
    pub fn decode(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.order() {
            return Err(FieldError::EncodingOutOfRange {
                enc,
                order: self.order(),
            });
        }
        let mut coeffs = Vec::with_capacity(self.k() as usize);
        let mut rest = enc;
        for _ in 0..self.k() {
            coeffs.push(rest % self.p());
            rest /= self.p();
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    /// All elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |e| self.decode(e).expect("in range"))
    }

    /// Primitive `n`-th root of unity with the smallest canonical encoding.
    pub fn root_of_unity(&self, n: u64) -> Result<FieldElement> {
        let units = self.order() - 1;
        if n == 0 || !units.is_multiple_of(n) {
            return Err(FieldError::NoRootOfUnity { n, units });
        }
        let primes = prime_factors(n);
        self.elements()
            .skip(1)
            .find(|z| z.pow(n).is_one() && primes.iter().all(|&r| !z.pow(n / r).is_one()))
            .ok_or(FieldError::NoRootOfUnity { n, units })
    }

    /// `a -> a^sub_order`, which fixes exactly the subfield of that order.
    pub fn frobenius(&self, sub_order: u64, a: &FieldElement) -> Result<FieldElement> {
        if a.field != *self {
            return Err(FieldError::FieldMismatch);
        }
        self.check_subfield_order(sub_order)?;
        Ok(a.pow(sub_order))
    }

    /// Accepts `p^m` with `m | k`.
    pub fn check_subfield_order(&self, sub_order: u64) -> Result<u32> {
        let mut m = 0u32;
        let mut acc = 1u64;
        while acc < sub_order {
            acc = acc.saturating_mul(self.p());
            m += 1;
        }
        if acc != sub_order || m == 0 || !self.k().is_multiple_of(m) {
            return Err(FieldError::InvalidSubfield(sub_order));
        }
        Ok(m)
    }

    /// Whether `a` lies in the subfield of order `sub_order`.
    pub fn in_subfield(&self, sub_order: u64, a: &FieldElement) -> Result<bool> {
        Ok(self.frobenius(sub_order, a)? == *a)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.p(), self.k(), self.modulus())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

fn check_params(p: u64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    match p.checked_pow(k) {
        Some(order) if order <= 1 << 63 => Ok(()),
        _ => Err(FieldError::OrderOverflow { p, k }),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^r` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = prime_factors(q);
    if p.len() != 1 {
        return None;
    }
    let p = p[0];
    let mut r = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        r += 1;
    }
    Some((p, r))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
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

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Remainder of `a` modulo a monic `b` over `F_p` (ascending coefficients).
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - db;
            for (i, &c) in b[..db].iter().enumerate() {
                let t = mul_mod(lead, c, p);
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
    }
    r
}

/// Irreducibility by trial division over every monic polynomial of degree
/// at most `deg / 2`.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let mut tail = vec![0u64; d];
        loop {
            let mut g = tail.clone();
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

/// An element of a [`FieldSpec`].
#[derive(Clone)]
pub struct FieldElement {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn enc(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.field.p() + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p();
        let k = self.coeffs.len();
        if k == 1 {
            let c = mul_mod(self.coeffs[0], other.coeffs[0], p);
            return Ok(FieldElement {
                field: self.field.clone(),
                coeffs: vec![c],
            });
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let coeffs = poly_rem(p, &prod, self.field.modulus());
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p();
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc().cmp(&other.enc())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.enc(), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.enc())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .expect("arithmetic on elements of different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

/// Field homomorphism `from -> to`, determined by where it sends the
/// generator of `from`.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: FieldSpec,
    to: FieldSpec,
    image_of_generator: FieldElement,
    preimage: Option<Arc<HashMap<u64, u64>>>,
}

impl Embedding {
    /// Sends the generator to the root of `from.modulus` in `to` with the
    /// smallest canonical encoding.
    pub fn new(from: &FieldSpec, to: &FieldSpec) -> Result<Self> {
        if from.p() != to.p() || !to.k().is_multiple_of(from.k()) {
            return Err(FieldError::NoEmbedding {
                from: from.order(),
                to: to.order(),
            });
        }
        let image_of_generator = to
            .elements()
            .find(|x| eval_prime_poly(from.modulus(), x).is_zero())
            .ok_or(FieldError::NoEmbedding {
                from: from.order(),
                to: to.order(),
            })?;
        let mut emb = Embedding {
            from: from.clone(),
            to: to.clone(),
            image_of_generator,
            preimage: None,
        };
        if from.k() > 1 {
            let table = from
                .elements()
                .map(|a| (emb.apply_unchecked(&a).enc(), a.enc()))
                .collect();
            emb.preimage = Some(Arc::new(table));
        }
        Ok(emb)
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Self::new(field, field).expect("a field embeds in itself")
    }

    pub fn from(&self) -> &FieldSpec {
        &self.from
    }

    pub fn to(&self) -> &FieldSpec {
        &self.to
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image_of_generator
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.field != self.from {
            return Err(FieldError::FieldMismatch);
        }
        Ok(self.apply_unchecked(a))
    }

    fn apply_unchecked(&self, a: &FieldElement) -> FieldElement {
        // Horner in the image of the generator
        a.coeffs.iter().rev().fold(self.to.zero(), |acc, &c| {
            &(&acc * &self.image_of_generator) + &self.to.from_int(c as i64)
        })
    }

    /// Inverse image of `b`, or [`FieldError::NotInSubfield`].
    pub fn preimage(&self, b: &FieldElement) -> Result<FieldElement> {
        if b.field != self.to {
            return Err(FieldError::FieldMismatch);
        }
        match &self.preimage {
            Some(table) => table
                .get(&b.enc())
                .map(|&e| self.from.decode(e).expect("table entries are in range"))
                .ok_or(FieldError::NotInSubfield),
            None => {
                if b.coeffs[1..].iter().any(|&c| c != 0) {
                    Err(FieldError::NotInSubfield)
                } else {
                    Ok(self.from.from_int(b.coeffs[0] as i64))
                }
            }
        }
    }
}

/// Evaluates a polynomial with prime-field coefficients at `x`.
fn eval_prime_poly(coeffs: &[u64], x: &FieldElement) -> FieldElement {
    let field = x.field();
    coeffs.iter().rev().fold(field.zero(), |acc, &c| {
        &(&acc * x) + &field.from_int(c as i64)
    })
}
