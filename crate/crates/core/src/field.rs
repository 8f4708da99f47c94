//! Exact arithmetic in GF(p^e).
//!
//! Elements are stored as their polynomial coefficient vector packed into a
//! single integer code `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` (low degree first),
//! so for prime fields the code is the residue itself. Arithmetic reduces
//! modulo an explicit monic irreducible polynomial. Fields with `q <= 256`
//! cache full addition and multiplication tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

const TABLE_CACHE_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus {modulus:?} is reducible over GF({p}): divisible by {factor:?}")]
    Reducible { p: u32, modulus: Vec<u32>, factor: Vec<u32> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({left} vs {right})")]
    MismatchedFields { left: String, right: String },
    #[error("element code {code} is outside GF({q})")]
    OutOfRange { code: u32, q: u32 },
}

/// Description of GF(p^e) by characteristic, degree and modulus `[c_0, ..., c_e]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates a user-supplied modulus.
    pub fn new(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        check_order(p, e)?;
        if modulus.len() != e as usize + 1 {
            return Err(FieldError::BadModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::BadModulus(format!("coefficient {c} is not reduced mod {p}")));
        }
        if modulus[e as usize] != 1 {
            return Err(FieldError::BadModulus("modulus is not monic".into()));
        }
        if let Some(factor) = find_factor(p, &modulus) {
            return Err(FieldError::Reducible { p, modulus, factor });
        }
        Ok(Self { p, e, modulus })
    }

    /// GF(p^e) with the default modulus: the monic irreducible polynomial of
    /// degree `e` whose coefficient vector, read from the highest degree down,
    /// is lexicographically smallest (x^3+x+1 rather than x^3+x^2+1 for GF(8)).
    pub fn default_for(p: u32, e: u32) -> Result<Self, FieldError> {
        check_order(p, e)?;
        let p64 = u64::from(p);
        let lower = p64.pow(e);
        for code in 0..lower {
            let mut modulus = digits(code, p, e as usize);
            modulus.push(1);
            if find_factor(p, &modulus).is_none() {
                return Ok(Self { p, e, modulus });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// GF(q) for a prime power `q` with the default modulus.
    pub fn for_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::default_for(p, e)
    }

    pub fn order(&self) -> u64 {
        u64::from(self.p).pow(self.e)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{}) mod {:?}", self.p, self.e, self.modulus)
        }
    }
}

fn check_order(p: u32, e: u32) -> Result<(), FieldError> {
    if !is_prime(u64::from(p)) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    match u64::from(p).checked_pow(e) {
        Some(q) if q <= MAX_FIELD_ORDER => Ok(()),
        Some(q) => Err(FieldError::TooLarge(q)),
        None => Err(FieldError::TooLarge(u64::MAX)),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`; `None` unless `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % u64::from(p)) as u32);
        code /= u64::from(p);
    }
    out
}

/// Smallest monic factor of degree `1..=deg/2`, if any (exhaustive trial division).
fn find_factor(p: u32, poly: &[u32]) -> Option<Vec<u32>> {
    let deg = poly.len() - 1;
    for fd in 1..=deg / 2 {
        let count = u64::from(p).pow(fd as u32);
        for code in 0..count {
            let mut divisor = digits(code, p, fd);
            divisor.push(1);
            if poly_rem(p, poly, &divisor).iter().all(|&c| c == 0) {
                return Some(divisor);
            }
        }
    }
    None
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(p).
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &dc) in den.iter().enumerate() {
                let sub = (u64::from(lead) * u64::from(dc) % u64::from(p)) as u32;
                r[shift + i] = ((u64::from(r[shift + i]) + u64::from(p - sub)) % u64::from(p)) as u32;
            }
        }
        r.pop();
    }
    r
}

/// A field element as a packed coefficient code. Only meaningful together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

/// A finite field ready for arithmetic. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.order() as u32;
        let mut field = Inner { spec, q, tables: None };
        if q <= TABLE_CACHE_ORDER {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = slow_add(&field, a, b);
                    mul[a as usize * n + b as usize] = slow_mul(&field, a, b);
                }
            }
            let mut neg = vec![0; n];
            let mut inv = vec![0; n];
            for a in 0..q {
                neg[a as usize] = (0..q).find(|&b| add[a as usize * n + b as usize] == 0).unwrap();
                if a != 0 {
                    inv[a as usize] = (1..q).find(|&b| mul[a as usize * n + b as usize] == 1).unwrap();
                }
            }
            field.tables = Some(Tables { add, mul, neg, inv });
        }
        Field(Arc::new(field))
    }

    /// GF(q) with the default modulus.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        Ok(Self::new(FieldSpec::for_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.e
    }

    /// All elements in code order: `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q()).map(Elem)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q()
    }

    pub fn element(&self, code: u32) -> Result<Elem, FieldError> {
        if code < self.q() {
            Ok(Elem(code))
        } else {
            Err(FieldError::OutOfRange { code, q: self.q() })
        }
    }

    /// Element from coefficients `c_0..c_{e-1}`, each reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, FieldError> {
        let p = self.p();
        if coeffs.len() != self.degree() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus(format!(
                "coefficient vector {coeffs:?} is not an element of {}",
                self.spec()
            )));
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(u64::from(a.0), self.p(), self.degree() as usize)
    }

    /// Image of an integer under `Z -> GF(p) ⊂ GF(q)`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(i64::from(self.p())) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.add[a.0 as usize * self.q() as usize + b.0 as usize]),
            None => Elem(slow_add(&self.0, a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.mul[a.0 as usize * self.q() as usize + b.0 as usize]),
            None => Elem(slow_mul(&self.0, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.neg[a.0 as usize]),
            None => {
                let p = self.p();
                let c: Vec<u32> = self.coeffs(a).into_iter().map(|x| (p - x) % p).collect();
                self.from_coeffs(&c).unwrap()
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.0.tables {
            Some(t) => Elem(t.inv[a.0 as usize]),
            None => self.pow(a, u64::from(self.q()) - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Bundles an element with this field for checked arithmetic.
    pub fn value(&self, a: Elem) -> Result<FieldElement, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::OutOfRange { code: a.0, q: self.q() });
        }
        Ok(FieldElement { field: self.clone(), elem: a })
    }
}

fn slow_add(f: &Inner, a: u32, b: u32) -> u32 {
    let p = f.spec.p;
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..f.spec.e {
        out += (a % p + b % p) % p * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn slow_mul(f: &Inner, a: u32, b: u32) -> u32 {
    let p = f.spec.p;
    let e = f.spec.e as usize;
    let da = digits(u64::from(a), p, e);
    let db = digits(u64::from(b), p, e);
    let mut prod = vec![0u32; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % u64::from(p)) as u32;
        }
    }
    let rem = poly_rem(p, &prod, &f.spec.modulus);
    rem.iter().rev().fold(0, |acc, &c| acc * p + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bundled with its field; arithmetic checks that both operands share a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    elem: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.elem)
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        if self.field != other.field {
            return Err(FieldError::MismatchedFields {
                left: self.field.spec().to_string(),
                right: other.field.spec().to_string(),
            });
        }
        let f = &self.field;
        let (a, b) = (self.elem, other.elem);
        let elem = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement { field: f.clone(), elem })
    }
}
