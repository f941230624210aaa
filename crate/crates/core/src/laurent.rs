//! Exact Laurent polynomials in `a`, and polynomials in `x` with Laurent
//! coefficients, generic over the integer coefficient ring.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer-like coefficient ring: `i64`, `i128`, `num_bigint::BigInt`, ...
pub trait Coeff:
    Clone
    + Ord
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + From<i64>
    + Display
    + Debug
    + std::str::FromStr
    + Send
    + Sync
{
}

impl<T> Coeff for T where
    T: Clone
        + Ord
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + From<i64>
        + Display
        + Debug
        + std::str::FromStr
        + Send
        + Sync
{
}

/// `Σ c_k a^k` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i32, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn monomial(coeff: C, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// `−a² − a⁻²`, the weight of a contractible circle.
    pub fn loop_value() -> Self {
        Self::from_terms([(2, -C::one()), (-2, -C::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: i32, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
        }
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, exp: i32) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    /// Substitutes `a ↦ a⁻¹`.
    pub fn invert(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    /// Multiplies by `a^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, c)| (k, c.clone() * s.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::monomial(C::one(), 0);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Nonzero coefficients in increasing exponent order.
    pub fn coefficient_tuple(&self) -> Vec<C> {
        self.terms.values().cloned().collect()
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect() }
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

/// `Σ_m P_m(a) x^m` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BracketPoly<C> {
    coeffs: BTreeMap<u32, LaurentPoly<C>>,
}

impl<C: Coeff> Default for BracketPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BracketPoly<C> {
    pub fn zero() -> Self {
        BracketPoly { coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, x_deg: u32, a_exp: i32, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        let p = self.coeffs.entry(x_deg).or_insert_with(LaurentPoly::zero);
        p.add_term(a_exp, coeff);
        if p.is_zero() {
            self.coeffs.remove(&x_deg);
        }
    }

    pub fn add_poly(&mut self, x_deg: u32, poly: &LaurentPoly<C>) {
        for (k, c) in poly.terms() {
            self.add_term(x_deg, k, c.clone());
        }
    }

    /// `(x-degree, P_m)` in increasing x-degree.
    pub fn coefficients(&self) -> impl Iterator<Item = (u32, &LaurentPoly<C>)> + '_ {
        self.coeffs.iter().map(|(&m, p)| (m, p))
    }

    pub fn coefficient(&self, x_deg: u32) -> LaurentPoly<C> {
        self.coeffs.get(&x_deg).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(|p| p.terms.len()).sum()
    }

    /// Substitutes `a ↦ a⁻¹`.
    pub fn invert_a(&self) -> Self {
        BracketPoly { coeffs: self.coeffs.iter().map(|(&m, p)| (m, p.invert())).collect() }
    }

    /// Multiplies by `sign · a^k`.
    pub fn mul_monomial(&self, negate: bool, k: i32) -> Self {
        BracketPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&m, p)| (m, if negate { -&p.shift(k) } else { p.shift(k) }))
                .collect(),
        }
    }

    /// Whether no power of `x` above zero occurs.
    pub fn is_x_free(&self) -> bool {
        self.coeffs.keys().all(|&m| m == 0)
    }

    /// Deterministic monomial list `m,k,c;` sorted by `(m, k)`.
    pub fn monomial_string(&self) -> String {
        let mut s = String::new();
        for (m, p) in self.coefficients() {
            for (k, c) in p.terms() {
                s.push_str(&format!("{m},{k},{c};"));
            }
        }
        s
    }
}

impl<C: Coeff> Add for &BracketPoly<C> {
    type Output = BracketPoly<C>;
    fn add(self, rhs: &BracketPoly<C>) -> BracketPoly<C> {
        let mut out = self.clone();
        for (m, p) in rhs.coefficients() {
            out.add_poly(m, p);
        }
        out
    }
}

impl<C: Coeff> Serialize for BracketPoly<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Coefficients that parse as JSON numbers stay numbers.
        let mut outer = serde_json::Map::new();
        for (m, p) in self.coefficients() {
            let mut inner = serde_json::Map::new();
            for (k, c) in p.terms() {
                let v: serde_json::Value = serde_json::from_str(&c.to_string())
                    .unwrap_or_else(|_| serde_json::Value::String(c.to_string()));
                inner.insert(k.to_string(), v);
            }
            outer.insert(m.to_string(), serde_json::Value::Object(inner));
        }
        serde_json::Value::Object(outer).serialize(s)
    }
}

impl<'de, C: Coeff> Deserialize<'de> for BracketPoly<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, BTreeMap<String, serde_json::Value>>::deserialize(d)?;
        let mut out = BracketPoly::zero();
        for (m, inner) in raw {
            let m: u32 = m.parse().map_err(D::Error::custom)?;
            for (k, v) in inner {
                let k: i32 = k.parse().map_err(D::Error::custom)?;
                let text = match v {
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::String(s) => s,
                    other => return Err(D::Error::custom(format!("bad coefficient {other}"))),
                };
                let c: C = text.parse().map_err(|_| D::Error::custom(format!("bad coefficient {text}")))?;
                out.add_term(m, k, c);
            }
        }
        Ok(out)
    }
}
