//! Exact scalar fields: prime fields `F_p`, small extensions `F_p[x]/(f)` and the
//! rationals.
//!
//! A [`Field`] is a cheap, clonable handle. [`Scalar`]s are plain values and
//! carry no field; every operation goes through the handle that owns them.
//! Finite-field elements are encoded as a single integer: the residue for
//! prime fields, and the little-endian base-`p` digits of the coefficient
//! vector for extension fields. That integer is also the enumeration index,
//! so `element(i)` and `index_of` are inverse to each other.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Largest characteristic accepted for extension fields.
pub const MAX_EXTENSION_PRIME: u32 = 13;
/// Largest extension degree accepted.
pub const MAX_EXTENSION_DEGREE: usize = 8;
/// Prime fields are limited so that products of residues fit in a `u64`.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

// Multiplication tables are precomputed for extension fields up to this order.
const TABLE_ORDER_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Prime { p: u32 },
    /// `modulus` lists the coefficients of a monic polynomial over `F_p` in
    /// ascending degree.
    Extension { p: u32, modulus: Vec<u32> },
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("unsupported field: {0}")]
    Unsupported(String),
}

/// A field element. Finite-field elements are encoded integers (see module docs).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fin(u32),
    Rat(BigRational),
}

#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    spec: FieldSpec,
    kind: Kind,
}

enum Kind {
    Prime { p: u64 },
    Ext(ExtField),
    Rational,
}

struct ExtField {
    p: u32,
    degree: usize,
    /// Monic modulus, ascending, length `degree + 1`.
    modulus: Vec<u32>,
    order: u32,
    mul_table: Option<Vec<u32>>,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds a field from its spec, validating the characteristic and, for
    /// extensions, the irreducibility of the modulus.
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        let kind = match &spec {
            FieldSpec::Prime { p } => {
                if !is_prime(*p) {
                    return Err(FieldError::NonPrimeCharacteristic(*p));
                }
                if *p > MAX_PRIME {
                    return Err(FieldError::Unsupported(format!("prime {p} exceeds {MAX_PRIME}")));
                }
                Kind::Prime { p: *p as u64 }
            }
            FieldSpec::Extension { p, modulus } => Kind::Ext(ExtField::new(*p, modulus)?),
            FieldSpec::Rational => Kind::Rational,
        };
        Ok(Field(Arc::new(Inner { spec, kind })))
    }

    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(FieldSpec::Prime { p })
    }

    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Field, FieldError> {
        Field::new(FieldSpec::Extension { p, modulus })
    }

    pub fn rational() -> Field {
        Field::new(FieldSpec::Rational).expect("rational field is always valid")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.0.kind, Kind::Rational)
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Prime { p } => Some(*p),
            Kind::Ext(e) => Some(e.order as u64),
            Kind::Rational => None,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match &self.0.kind {
            Kind::Prime { p } => *p as u32,
            Kind::Ext(e) => e.p,
            Kind::Rational => 0,
        }
    }

    /// Degree over the prime field (1 for prime fields and the rationals).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            Kind::Ext(e) => e.degree,
            _ => 1,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.0.kind {
            Kind::Rational => Scalar::Rat(BigRational::zero()),
            _ => Scalar::Fin(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.0.kind {
            Kind::Rational => Scalar::Rat(BigRational::one()),
            _ => Scalar::Fin(1),
        }
    }

    /// Image of an integer under the canonical ring map `Z -> F`.
    pub fn from_int(&self, v: i64) -> Scalar {
        match &self.0.kind {
            Kind::Prime { p } => Scalar::Fin(v.rem_euclid(*p as i64) as u32),
            Kind::Ext(e) => Scalar::Fin(v.rem_euclid(e.p as i64) as u32),
            Kind::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        self.div(&self.from_int(num), &self.from_int(den)).expect("denominator is invertible")
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    /// Whether `a` is a well-formed element of this field.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (&self.0.kind, a) {
            (Kind::Prime { p }, Scalar::Fin(x)) => (*x as u64) < *p,
            (Kind::Ext(e), Scalar::Fin(x)) => *x < e.order,
            (Kind::Rational, Scalar::Rat(r)) => r.denom().is_positive(),
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.0.kind, a, b) {
            (Kind::Prime { p }, Scalar::Fin(x), Scalar::Fin(y)) => {
                Scalar::Fin(((*x as u64 + *y as u64) % p) as u32)
            }
            (Kind::Ext(e), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(e.add(*x, *y)),
            (Kind::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to field {}", self),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&self.0.kind, a) {
            (Kind::Prime { p }, Scalar::Fin(x)) => Scalar::Fin(((p - *x as u64) % p) as u32),
            (Kind::Ext(e), Scalar::Fin(x)) => Scalar::Fin(e.neg(*x)),
            (Kind::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to field {}", self),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&self.0.kind, a, b) {
            (Kind::Prime { p }, Scalar::Fin(x), Scalar::Fin(y)) => {
                Scalar::Fin(((*x as u64 * *y as u64) % p) as u32)
            }
            (Kind::Ext(e), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(e.mul(*x, *y)),
            (Kind::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to field {}", self),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&self.0.kind, a) {
            (Kind::Prime { p }, Scalar::Fin(x)) => Scalar::Fin(pow_mod(*x as u64, p - 2, *p) as u32),
            (Kind::Ext(e), Scalar::Fin(x)) => Scalar::Fin(e.pow(*x, e.order as u64 - 2)),
            (Kind::Rational, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            _ => panic!("scalar does not belong to field {}", self),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// The `index`-th element in enumeration order (finite fields only).
    pub fn element(&self, index: u64) -> Scalar {
        let q = self.order().expect("element enumeration needs a finite field");
        assert!(index < q, "element index {index} out of range for field of order {q}");
        Scalar::Fin(index as u32)
    }

    pub fn index_of(&self, a: &Scalar) -> u64 {
        match a {
            Scalar::Fin(x) if self.is_finite() => *x as u64,
            _ => panic!("index_of needs a finite-field element"),
        }
    }

    /// All elements in enumeration order (finite fields only).
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let q = self.order().expect("element enumeration needs a finite field");
        (0..q).map(|i| Scalar::Fin(i as u32))
    }

    /// A random element: uniform for finite fields, a small integer in
    /// `[-3, 3]` for the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match &self.0.kind {
            Kind::Rational => self.from_int(rng.gen_range(-3..=3)),
            _ => Scalar::Fin(rng.gen_range(0..self.order().unwrap()) as u32),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Coefficient vector of an extension-field element over the prime field.
    pub fn coefficients(&self, a: &Scalar) -> Vec<u32> {
        match (&self.0.kind, a) {
            (Kind::Ext(e), Scalar::Fin(x)) => e.decode(*x),
            (Kind::Prime { .. }, Scalar::Fin(x)) => vec![*x],
            _ => panic!("coefficients need a finite-field element"),
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        match self.to_json(a) {
            Value::String(s) => s,
            other => other.to_string(),
        }
    }

    /// Serialises a scalar: prime-field residues as decimal strings, extension
    /// elements as ascending coefficient arrays, rationals as `"num/den"`.
    pub fn to_json(&self, a: &Scalar) -> Value {
        match (&self.0.kind, a) {
            (Kind::Prime { .. }, Scalar::Fin(x)) => Value::String(x.to_string()),
            (Kind::Ext(e), Scalar::Fin(x)) => {
                Value::Array(e.decode(*x).into_iter().map(Value::from).collect())
            }
            (Kind::Rational, Scalar::Rat(r)) => Value::String(format!("{}/{}", r.numer(), r.denom())),
            _ => panic!("scalar does not belong to field {}", self),
        }
    }

    /// Strict inverse of [`Field::to_json`]: out-of-range residues, wrong
    /// coefficient counts and non-reduced fractions are rejected.
    pub fn from_json(&self, v: &Value) -> Result<Scalar, String> {
        match &self.0.kind {
            Kind::Prime { p } => {
                let s = v.as_str().ok_or_else(|| format!("expected a residue string, found {v}"))?;
                let x: u64 = s
                    .parse()
                    .ok()
                    .filter(|_| s == "0" || !s.starts_with('0'))
                    .ok_or_else(|| format!("malformed residue {s:?}"))?;
                if x >= *p {
                    return Err(format!("residue {x} out of range for F_{p}"));
                }
                Ok(Scalar::Fin(x as u32))
            }
            Kind::Ext(e) => {
                let arr = v.as_array().ok_or_else(|| format!("expected a coefficient array, found {v}"))?;
                if arr.len() != e.degree {
                    return Err(format!("expected {} coefficients, found {}", e.degree, arr.len()));
                }
                let mut coeffs = Vec::with_capacity(e.degree);
                for c in arr {
                    let c = c.as_u64().ok_or_else(|| format!("malformed coefficient {c}"))?;
                    if c >= e.p as u64 {
                        return Err(format!("coefficient {c} out of range for F_{}", e.p));
                    }
                    coeffs.push(c as u32);
                }
                Ok(Scalar::Fin(e.encode(&coeffs)))
            }
            Kind::Rational => {
                let s = v.as_str().ok_or_else(|| format!("expected a \"num/den\" string, found {v}"))?;
                let (num, den) = s.split_once('/').ok_or_else(|| format!("malformed rational {s:?}"))?;
                let num: BigInt = num.parse().map_err(|_| format!("malformed numerator in {s:?}"))?;
                let den: BigInt = den.parse().map_err(|_| format!("malformed denominator in {s:?}"))?;
                if !den.is_positive() {
                    return Err(format!("denominator must be positive in {s:?}"));
                }
                if !num.gcd(&den).is_one() {
                    return Err(format!("rational {s:?} is not in lowest terms"));
                }
                Ok(Scalar::Rat(BigRational::new_raw(num, den)))
            }
        }
    }

    /// Integer value of a rational scalar when it is integral and small.
    pub fn as_i64(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Rat(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Fin(x) if !matches!(self.0.kind, Kind::Ext(_)) => Some(*x as i64),
            _ => None,
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.spec {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Extension { p, modulus } => {
                write!(f, "F_{}", (*p as u64).pow(modulus.len() as u32 - 1))
            }
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl ExtField {
    fn new(p: u32, modulus: &[u32]) -> Result<ExtField, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if p > MAX_EXTENSION_PRIME {
            return Err(FieldError::Unsupported(format!(
                "extension fields need p <= {MAX_EXTENSION_PRIME}, got {p}"
            )));
        }
        if modulus.len() < 3 {
            return Err(FieldError::InvalidModulus("degree must be at least 2".into()));
        }
        let degree = modulus.len() - 1;
        if degree > MAX_EXTENSION_DEGREE {
            return Err(FieldError::Unsupported(format!(
                "extension degree {degree} exceeds {MAX_EXTENSION_DEGREE}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::InvalidModulus(format!("coefficients must lie in [0, {p})")));
        }
        if modulus[degree] != 1 {
            return Err(FieldError::InvalidModulus("modulus must be monic".into()));
        }
        if !prime_poly_irreducible(p, modulus) {
            return Err(FieldError::ReducibleModulus { p, modulus: modulus.to_vec() });
        }
        let order = p.pow(degree as u32);
        let mut ext = ExtField { p, degree, modulus: modulus.to_vec(), order, mul_table: None };
        if order <= TABLE_ORDER_LIMIT {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = ext.mul_raw(a, b);
                }
            }
            ext.mul_table = Some(table);
        }
        Ok(ext)
    }

    fn decode(&self, mut x: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree];
        for c in out.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        out
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.decode(a).iter().map(|u| (self.p - u) % self.p).collect();
        self.encode(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[(a * self.order + b) as usize],
            None => self.mul_raw(a, b),
        }
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u64; 2 * self.degree - 1];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        for top in (self.degree..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..self.degree {
                let shift = top - self.degree + j;
                prod[shift] = (prod[shift] + (p - c) * self.modulus[j] as u64) % p;
            }
        }
        let coeffs: Vec<u32> = prod[..self.degree].iter().map(|&c| c as u32).collect();
        self.encode(&coeffs)
    }

    fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Irreducibility of a polynomial over `F_p` (ascending coefficients, monic):
/// exhaustive root check up to degree 3, trial division by every monic
/// polynomial of degree at most half the degree beyond that.
fn prime_poly_irreducible(p: u32, f: &[u32]) -> bool {
    let degree = f.len() - 1;
    let has_root = (0..p).any(|x| {
        let v = f.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64);
        v == 0
    });
    if has_root {
        return false;
    }
    if degree <= 3 {
        return true;
    }
    for d in 2..=degree / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if prime_poly_rem_is_zero(p, f, &g) {
                return false;
            }
        }
    }
    true
}

fn prime_poly_rem_is_zero(p: u32, f: &[u32], g: &[u32]) -> bool {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    for top in (dg..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for j in 0..=dg {
            let idx = top - dg + j;
            r[idx] = (r[idx] + (p - c) * g[j] as u64) % p;
        }
    }
    r[..dg].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_p_elements() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.order(), Some(5));
        assert_eq!(f.elements().count(), 5);
        assert_eq!(f.add(&f.from_int(3), &f.from_int(4)), f.from_int(2));
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        assert_eq!(Field::prime(6).unwrap_err(), FieldError::NonPrimeCharacteristic(6));
        assert!(matches!(
            Field::extension(4, vec![1, 1, 1]),
            Err(FieldError::NonPrimeCharacteristic(4))
        ));
    }

    #[test]
    fn f4_from_x2_x_1() {
        let f = Field::extension(2, vec![1, 1, 1]).unwrap();
        assert_eq!(f.order(), Some(4));
    }

    #[test]
    fn x2_plus_1_is_reducible_over_f2() {
        assert!(matches!(
            Field::extension(2, vec![1, 0, 1]),
            Err(FieldError::ReducibleModulus { .. })
        ));
    }

    #[test]
    fn quartic_trial_factorisation() {
        // x^4 + x + 1 is irreducible over F_2; (x^2 + x + 1)^2 = x^4 + x^2 + 1 is not
        // and has no roots, so only trial division catches it.
        assert!(Field::extension(2, vec![1, 1, 0, 0, 1]).is_ok());
        assert!(matches!(
            Field::extension(2, vec![1, 0, 1, 0, 1]),
            Err(FieldError::ReducibleModulus { .. })
        ));
    }

    #[test]
    fn extension_limits() {
        assert!(matches!(Field::extension(17, vec![3, 0, 1]), Err(FieldError::Unsupported(_))));
        assert!(matches!(Field::extension(2, vec![1, 1, 2]), Err(FieldError::InvalidModulus(_))));
    }

    fn exhaustive_axioms(f: &Field) {
        let els: Vec<Scalar> = f.elements().collect();
        for a in &els {
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
            }
            assert!(f.is_zero(&f.add(a, &f.neg(a))));
            for b in &els {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in &els {
                    assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                    assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_fields() {
        for f in [
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::prime(7).unwrap(),
            Field::extension(2, vec![1, 1, 1]).unwrap(),
            Field::extension(2, vec![1, 1, 0, 1]).unwrap(),
            Field::extension(3, vec![2, 1, 1]).unwrap(),
        ] {
            exhaustive_axioms(&f);
        }
    }

    #[test]
    fn untabled_extension_matches_inverse() {
        // F_{13^3} is above the table limit and exercises the direct product path.
        let f = (1..13)
            .find_map(|c| Field::extension(13, vec![c, 1, 0, 1]).ok())
            .expect("some x^3 + x + c is irreducible over F_13");
        assert_eq!(f.order(), Some(2197));
        let mut rng = rand::thread_rng();
        for _ in 0..200 {
            let a = f.random_nonzero(&mut rng);
            assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn scalar_json_is_strict() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.from_json(&Value::from("1")), Ok(f2.one()));
        assert!(f2.from_json(&Value::from("2")).is_err());
        assert!(f2.from_json(&Value::from("01")).is_err());
        let q = Field::rational();
        assert_eq!(q.from_json(&Value::from("-3/4")), Ok(q.from_ratio(-3, 4)));
        assert!(q.from_json(&Value::from("2/4")).is_err());
        assert!(q.from_json(&Value::from("1/-2")).is_err());
        let f4 = Field::extension(2, vec![1, 1, 1]).unwrap();
        let w = f4.from_json(&serde_json::json!([0, 1])).unwrap();
        assert_eq!(f4.to_json(&w), serde_json::json!([0, 1]));
        assert!(f4.from_json(&serde_json::json!([0, 2])).is_err());
    }
}
