//! The loop algebra `F M`: finite formal combinations of free-loop elements
//! with coefficients in ℚ or a prime field.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;
use crate::free_loop::{FreeMoufangLoop, LoopElement};
use crate::parse::Expr;

/// Largest admissible prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if is_prime(p) && p <= MAX_PRIME {
            Ok(Field::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    /// Accepts `Q`, `rational`, a bare prime, or `GF(p)`.
    pub fn parse(text: &str) -> Result<Field, AlgebraError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .or_else(|| t.strip_prefix("gf("))
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        let p: u64 = inner.parse().map_err(|_| AlgebraError::NotPrime(0))?;
        Field::prime(p)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl serde::Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Field, D::Error> {
        let text = String::deserialize(d)?;
        Field::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element carrying its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("reduced residue fits")
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => Scalar::Prime { value: n.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    pub fn from_rational(field: Field, q: &BigRational) -> Result<Scalar, AlgebraError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let den = bigint_mod(q.denom(), p);
                if den == 0 {
                    return Err(AlgebraError::DivisionByZero);
                }
                let value = bigint_mod(q.numer(), p) * mod_inv(den, p) % p;
                Ok(Scalar::Prime { value, modulus: p })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), AlgebraError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch { left: self.field().to_string(), right: other.field().to_string() })
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: (a + b) % p, modulus: *p }
            }
            _ => unreachable!("fields checked"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: a * b % p, modulus: *p }
            }
            _ => unreachable!("fields checked"),
        })
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime { value: mod_inv(*value, *modulus), modulus: *modulus },
        })
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// `Some(c)` when the scalar is the negation of a displayable positive
    /// rational; prime-field values always print as residues in `0..p`.
    fn negative_part(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_negative() => Some(Scalar::Rational(-q)),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// A finite combination `Σ λ_u u`, no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    field: Field,
    coeffs: BTreeMap<LoopElement, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: Field) -> Self {
        AlgebraElement { field, coeffs: BTreeMap::new() }
    }

    pub fn basis(field: Field, u: LoopElement) -> Self {
        Self::monomial(Scalar::one(field), u)
    }

    pub fn monomial(c: Scalar, u: LoopElement) -> Self {
        let field = c.field();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(u, c);
        }
        AlgebraElement { field, coeffs }
    }

    /// Builds an element from terms, summing repeated keys.
    pub fn from_terms(
        field: Field,
        terms: impl IntoIterator<Item = (LoopElement, Scalar)>,
    ) -> Result<Self, AlgebraError> {
        let mut x = AlgebraElement::zero(field);
        for (u, c) in terms {
            x.add_term(u, &c)?;
        }
        Ok(x)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &BTreeMap<LoopElement, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, u: &LoopElement) -> Scalar {
        self.coeffs.get(u).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &LoopElement> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, field: Field) -> Result<(), AlgebraError> {
        if self.field == field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch { left: self.field.to_string(), right: field.to_string() })
        }
    }

    pub(crate) fn add_term(&mut self, u: LoopElement, c: &Scalar) -> Result<(), AlgebraError> {
        self.check(c.field())?;
        if c.is_zero() {
            return Ok(());
        }
        match self.coeffs.entry(u) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c)?;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check(other.field)?;
        let mut out = self.clone();
        for (u, c) in &other.coeffs {
            out.add_term(u.clone(), c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            field: self.field,
            coeffs: self.coeffs.iter().map(|(u, c)| (u.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, lambda: &Scalar) -> Result<AlgebraElement, AlgebraError> {
        self.check(lambda.field())?;
        let mut coeffs = BTreeMap::new();
        if !lambda.is_zero() {
            for (u, c) in &self.coeffs {
                coeffs.insert(u.clone(), c.mul(lambda)?);
            }
        }
        Ok(AlgebraElement { field: self.field, coeffs })
    }

    /// Coefficient sum `𝔠(x)`.
    pub fn augmentation(&self) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.values() {
            acc = acc.add(c).expect("uniform field");
        }
        acc
    }

    pub fn is_in_augmentation_ideal(&self) -> bool {
        self.augmentation().is_zero()
    }

    /// `Some((c, u))` when the element is a single term `c·u`.
    pub fn as_monomial(&self) -> Option<(&Scalar, &LoopElement)> {
        match self.coeffs.len() {
            1 => self.coeffs.iter().next().map(|(u, c)| (c, u)),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraElement {
    /// Terms in basis order, parseable by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (u, c)) in self.coeffs.iter().enumerate() {
            let (sign, mag) = match c.negative_part() {
                Some(m) => ("-", m),
                None => ("+", c.clone()),
            };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if u.is_identity() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{u}")?;
            } else {
                write!(f, "{mag}*{u}")?;
            }
        }
        Ok(())
    }
}

/// Multiplicative structure: the loop algebra over a fixed field.
#[derive(Clone)]
pub struct LoopAlgebra {
    field: Field,
    free: Arc<FreeMoufangLoop>,
}

impl LoopAlgebra {
    pub fn new(field: Field, free: Arc<FreeMoufangLoop>) -> Self {
        LoopAlgebra { field, free }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn free_loop(&self) -> &FreeMoufangLoop {
        &self.free
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.field)
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::basis(self.field, self.free.identity())
    }

    pub fn basis(&self, u: LoopElement) -> AlgebraElement {
        AlgebraElement::basis(self.field, u)
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        Scalar::from_i64(self.field, n)
    }

    /// `1 - u`.
    pub fn one_minus(&self, u: &LoopElement) -> AlgebraElement {
        self.one().sub(&self.basis(u.clone())).expect("same field")
    }

    /// Bilinear extension of the loop product.
    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        x.check(self.field)?;
        y.check(self.field)?;
        let mut out = self.zero();
        for (u, a) in &x.coeffs {
            for (v, b) in &y.coeffs {
                let uv = self.free.mul(u, v)?;
                out.add_term(uv, &a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// `(a,b,c) = ab·c - a·bc`.
    pub fn associator(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
        c: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        let left = self.mul(&self.mul(a, b)?, c)?;
        let right = self.mul(a, &self.mul(b, c)?)?;
        left.sub(&right)
    }

    /// Evaluates a parsed expression; `^-1` is allowed on single terms only.
    pub fn eval(&self, e: &Expr) -> Result<AlgebraElement, AlgebraError> {
        Ok(match e {
            Expr::Number(q) => self.one().scalar_mul(&Scalar::from_rational(self.field, q)?)?,
            Expr::Identity => self.one(),
            Expr::Literal(l) => self.basis(self.free.literal(*l)),
            Expr::Inverse(inner) => {
                let x = self.eval(inner)?;
                let Some((c, u)) = x.as_monomial() else {
                    return Err(AlgebraError::NonMonomialInverse(x.to_string()));
                };
                AlgebraElement::monomial(c.inv()?, self.free.inv(u))
            }
            Expr::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?)?,
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?)?,
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?)?,
            Expr::Neg(a) => self.eval(a)?.neg(),
        })
    }

    pub fn parse(&self, text: &str) -> Result<AlgebraElement, AlgebraError> {
        self.eval(&crate::parse::parse_expr(text)?)
    }
}
