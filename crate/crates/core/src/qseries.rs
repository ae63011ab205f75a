//! Exact truncated power series in `q` with arbitrary-precision integer
//! coefficients.
//!
//! A [`TruncatedSeries`] carries its truncation order `N`: every coefficient up
//! to and including `q^N` is exact, everything above is discarded. Binary
//! operations refuse operands of different orders instead of silently
//! re-truncating.
//!
//! Negative exponents are representable (multisum summands such as
//! `q^{-s_1}` start out as Laurent monomials) but every identity side handed
//! out by the catalog is checked to be an ordinary power series.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    // Lowest tracked exponent; coeffs[0] is non-zero unless the series is zero.
    min_exp: i64,
    // Dense window [min_exp, order].
    coeffs: Vec<BigInt>,
}

/// Sign convention of a q-Pochhammer symbol: `Pos` is `(q^m; q^b)`, whose
/// factors are `1 - q^{m+tb}`; `Neg` is `(-q^m; q^b)` with factors `1 + q^{m+tb}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PochSign {
    Pos,
    Neg,
}

impl PochSign {
    /// Coefficient `c` in the factor `1 + c q^e`.
    fn factor_coeff(self) -> i64 {
        match self {
            PochSign::Pos => -1,
            PochSign::Neg => 1,
        }
    }
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            min_exp: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c q^e` truncated at `order`.
    pub fn monomial(c: BigInt, e: i64, order: usize) -> Self {
        Self::from_window(order, e, vec![c])
    }

    /// Builds a series from coefficients of `q^0, q^1, ...`; entries above
    /// `order` are dropped.
    pub fn from_coeffs<I, C>(order: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        Self::from_window(order, 0, coeffs.into_iter().map(Into::into).collect())
    }

    /// Builds a series whose first listed coefficient belongs to `q^start`.
    pub fn from_window(order: usize, start: i64, coeffs: Vec<BigInt>) -> Self {
        let mut s = TruncatedSeries {
            order,
            min_exp: start,
            coeffs,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let top = self.order as i64;
        if self.min_exp > top {
            self.coeffs.clear();
        } else {
            let len = (top - self.min_exp + 1) as usize;
            self.coeffs.resize(len, BigInt::zero());
        }
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.coeffs.clear();
                self.min_exp = 0;
            }
            Some(lead) => {
                self.coeffs.drain(..lead);
                self.min_exp += lead as i64;
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a non-zero coefficient; `None` for the zero series.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_exp)
    }

    fn get(&self, e: i64) -> BigInt {
        if self.is_zero() || e < self.min_exp || e > self.order as i64 {
            return BigInt::zero();
        }
        self.coeffs[(e - self.min_exp) as usize].clone()
    }

    /// Coefficient of `q^e`.
    pub fn coefficient(&self, e: i64) -> Result<BigInt> {
        if e > self.order as i64 {
            return Err(Error::BeyondOrder {
                exponent: e,
                order: self.order,
            });
        }
        Ok(self.get(e))
    }

    /// Coefficients of `q^0..=q^order`. Fails on a genuine Laurent series.
    pub fn dense(&self) -> Result<Vec<BigInt>> {
        if let Some(m) = self.min_exp() {
            if m < 0 {
                return Err(Error::domain(format!("series has a non-zero coefficient at q^{m}")));
            }
        }
        Ok((0..=self.order as i64).map(|e| self.get(e)).collect())
    }

    /// Non-zero terms as `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let start = self.min_exp.min(other.min_exp);
        let coeffs = (start..=self.order as i64)
            .map(|e| self.get(e) + other.get(e))
            .collect();
        Ok(Self::from_window(self.order, start, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.clone().neg())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_window(self.order, self.min_exp, coeffs)
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.order));
        }
        let start = self.min_exp + other.min_exp;
        if start > self.order as i64 {
            return Ok(Self::zero(self.order));
        }
        let len = (self.order as i64 - start + 1) as usize;
        let coeffs = mul_dense(&self.coeffs, &other.coeffs, len);
        Ok(Self::from_window(self.order, start, coeffs))
    }

    /// `c q^e s`. Coefficients pushed above the order are dropped; with
    /// `e < 0` the result is only informative through `order + e`.
    pub fn monomial_shift(&self, c: &BigInt, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_window(self.order, self.min_exp + e, coeffs)
    }

    /// Multiplicative inverse of a series with constant term `±1`.
    pub fn inverse_unit(&self) -> Result<Self> {
        let c0 = match self.min_exp() {
            Some(0) => &self.coeffs[0],
            _ => {
                return Err(Error::domain(
                    "inverse requires a series starting at q^0 with constant term ±1",
                ))
            }
        };
        if c0.abs() != BigInt::one() {
            return Err(Error::domain(format!("constant term {c0} is not a unit")));
        }
        let n = self.order + 1;
        let mut inv = vec![BigInt::zero(); n];
        inv[0] = c0.clone();
        for m in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=m.min(self.coeffs.len() - 1) {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &inv[m - i];
                }
            }
            // c0 is ±1, so dividing by it is multiplying by it.
            inv[m] = -(acc * c0);
        }
        Ok(Self::from_window(self.order, 0, inv))
    }

    /// Explicitly lowers the truncation order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::usage(format!(
                "cannot raise truncation order from {} to {order}",
                self.order
            )));
        }
        Ok(Self::from_window(order, self.min_exp, self.coeffs.clone()))
    }

    /// In-place multiplication by `1 + c q^e` with `e >= 1`, for series
    /// starting at `q^0` or later.
    pub(crate) fn mul_binomial_in_place(&mut self, c: i64, e: usize) {
        if self.is_zero() || e > self.order {
            return;
        }
        let mut dense = self.dense_from(0);
        let c = BigInt::from(c);
        for i in (e..dense.len()).rev() {
            if !dense[i - e].is_zero() {
                let t = &dense[i - e] * &c;
                dense[i] += t;
            }
        }
        *self = Self::from_window(self.order, 0, dense);
    }

    /// In-place division by `1 - q^e` with `e >= 1`.
    pub(crate) fn div_one_minus_in_place(&mut self, e: usize) {
        if self.is_zero() || e > self.order {
            return;
        }
        let mut dense = self.dense_from(0);
        for i in e..dense.len() {
            if !dense[i - e].is_zero() {
                let t = dense[i - e].clone();
                dense[i] += t;
            }
        }
        *self = Self::from_window(self.order, 0, dense);
    }

    fn dense_from(&self, start: i64) -> Vec<BigInt> {
        (start..=self.order as i64).map(|e| self.get(e)).collect()
    }

    /// Coefficient dump: one `exponent,coefficient` row per exponent `0..=order`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,coefficient\n");
        for e in 0..=self.order as i64 {
            out.push_str(&format!("{e},{}\n", self.get(e)));
        }
        out
    }
}

/// Truncated convolution of two dense coefficient windows, keeping `len` terms.
pub(crate) fn mul_dense(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(q^{})", self.order + 1)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let start = self.min_exp().map_or(0, |m| m.min(0));
        let coeffs: Vec<String> = self.dense_from(start).iter().map(|c| c.to_string()).collect();
        let mut st = serializer.serialize_struct("TruncatedSeries", 3)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("minExp", &start)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

/// `(±q^m; q^b)_n`, the product of `1 ∓ q^{m+tb}` for `t < n`.
pub fn pochhammer_finite(sign: PochSign, m: u32, b: u32, n: u32, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    let c = sign.factor_coeff();
    for t in 0..n as u64 {
        let e = m as u64 + t * b as u64;
        if e == 0 {
            // factor 1 + c
            s = s.scale(&BigInt::from(1 + c));
            if s.is_zero() {
                break;
            }
        } else if e as usize <= order {
            s.mul_binomial_in_place(c, e as usize);
        } else if b == 0 || e > order as u64 {
            break;
        }
    }
    s
}

/// `(±q^m; q^b)_∞` through `order`. Requires `m >= 1`.
pub fn pochhammer_infinite(sign: PochSign, m: i64, b: u32, order: usize) -> Result<TruncatedSeries> {
    if m <= 0 {
        return Err(Error::domain(format!(
            "infinite q-Pochhammer with base exponent {m} <= 0 has no formal expansion"
        )));
    }
    if b == 0 {
        return Err(Error::domain("infinite q-Pochhammer with step 0"));
    }
    let mut s = TruncatedSeries::one(order);
    let c = sign.factor_coeff();
    let mut e = m as usize;
    while e <= order {
        s.mul_binomial_in_place(c, e);
        e += b as usize;
    }
    Ok(s)
}

/// `1 / (q^b; q^b)_n` through `order`, by repeated geometric division.
pub fn inverse_q_factorial(b: u32, n: u32, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for t in 1..=n as usize {
        let e = t * b as usize;
        if e > order {
            break;
        }
        s.div_one_minus_in_place(e);
    }
    s
}

/// Gaussian binomial `[n, j]` in base `q^b`; the zero series when `j < 0` or `j > n`.
pub fn qbinomial(n: i64, j: i64, b: u32, order: usize) -> TruncatedSeries {
    if j < 0 || j > n {
        return TruncatedSeries::zero(order);
    }
    let mut s = pochhammer_finite(PochSign::Pos, b, b, n as u32, order);
    // Divide by (q^b;q^b)_j (q^b;q^b)_{n-j}; both quotients stay polynomial.
    for t in 1..=j as usize {
        let e = t * b as usize;
        if e <= order {
            s.div_one_minus_in_place(e);
        }
    }
    for t in 1..=(n - j) as usize {
        let e = t * b as usize;
        if e <= order {
            s.div_one_minus_in_place(e);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(order: usize, c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(order, c.iter().copied())
    }

    fn ints(t: &TruncatedSeries) -> Vec<i64> {
        t.dense()
            .unwrap()
            .iter()
            .map(|c| i64::try_from(c.clone()).unwrap())
            .collect()
    }

    #[test]
    fn add_cancels() {
        let a = s(5, &[1, 1]);
        let b = s(5, &[1, -1]);
        assert_eq!(a.add(&b).unwrap(), s(5, &[2]));
        assert_eq!(a.add(&TruncatedSeries::zero(5)).unwrap(), a);
    }

    #[test]
    fn laurent_cancellation_normalises() {
        let a = TruncatedSeries::monomial(1.into(), -1, 4);
        let b = TruncatedSeries::from_window(4, -1, vec![(-1).into(), 1.into()]);
        let sum = a.add(&b).unwrap();
        assert_eq!(sum, TruncatedSeries::one(4));
        assert_eq!(sum.min_exp(), Some(0));
    }

    #[test]
    fn mixed_orders_rejected() {
        let err = s(3, &[1]).add(&s(4, &[1])).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 3, right: 4 });
        assert!(s(3, &[1]).mul(&s(4, &[1])).is_err());
    }

    #[test]
    fn mul_examples() {
        let geo = s(6, &[1; 7]);
        assert_eq!(s(6, &[1, -1]).mul(&geo).unwrap(), TruncatedSeries::one(6));
        let p = s(6, &[1, -1]).mul(&s(6, &[1, 0, -1])).unwrap();
        assert_eq!(ints(&p), vec![1, -1, -1, 1, 0, 0, 0]);
        assert!(p.mul(&TruncatedSeries::zero(6)).unwrap().is_zero());
    }

    #[test]
    fn monomial_shift_examples() {
        let one = TruncatedSeries::one(8);
        assert_eq!(
            one.monomial_shift(&1.into(), 5),
            TruncatedSeries::monomial(1.into(), 5, 8)
        );
        let sh = s(8, &[1, 1]).monomial_shift(&(-1).into(), -1);
        assert_eq!(sh.min_exp(), Some(-1));
        assert_eq!(sh.coefficient(-1).unwrap(), BigInt::from(-1));
        assert_eq!(sh.coefficient(0).unwrap(), BigInt::from(-1));
        assert!(s(8, &[3, 4]).monomial_shift(&0.into(), 2).is_zero());
        // pushed past the order
        assert!(one.monomial_shift(&1.into(), 9).is_zero());
    }

    #[test]
    fn pochhammer_finite_examples() {
        assert_eq!(
            ints(&pochhammer_finite(PochSign::Pos, 1, 1, 2, 5)),
            vec![1, -1, -1, 1, 0, 0]
        );
        assert_eq!(pochhammer_finite(PochSign::Pos, 3, 2, 0, 5), TruncatedSeries::one(5));
        assert_eq!(ints(&pochhammer_finite(PochSign::Neg, 1, 2, 1, 3)), vec![1, 1, 0, 0]);
        // (q^0;q)_n contains the factor 1 - 1
        assert!(pochhammer_finite(PochSign::Pos, 0, 1, 3, 5).is_zero());
    }

    #[test]
    fn pochhammer_infinite_examples() {
        let euler = pochhammer_infinite(PochSign::Pos, 1, 1, 5).unwrap();
        assert_eq!(ints(&euler), vec![1, -1, -1, 0, 0, 1]);
        let distinct_even = pochhammer_infinite(PochSign::Neg, 2, 2, 6).unwrap();
        assert_eq!(distinct_even.coefficient(6).unwrap(), BigInt::from(2));
        assert_eq!(
            pochhammer_infinite(PochSign::Pos, 8, 1, 7).unwrap(),
            TruncatedSeries::one(7)
        );
        assert!(matches!(
            pochhammer_infinite(PochSign::Pos, 0, 1, 7),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        let geo = s(5, &[1, -1]).inverse_unit().unwrap();
        assert_eq!(ints(&geo), vec![1; 6]);
        assert_eq!(TruncatedSeries::one(5).inverse_unit().unwrap(), TruncatedSeries::one(5));
        let q2 = pochhammer_finite(PochSign::Pos, 1, 1, 2, 4).inverse_unit().unwrap();
        assert_eq!(ints(&q2), vec![1, 1, 2, 2, 3]);
        assert_eq!(inverse_q_factorial(1, 2, 4), q2);
        assert!(s(5, &[2, 1]).inverse_unit().is_err());
        assert!(s(5, &[0, 1]).inverse_unit().is_err());
        // constant term -1 is a unit too
        let m = s(5, &[-1, 1]);
        assert_eq!(m.mul(&m.inverse_unit().unwrap()).unwrap(), TruncatedSeries::one(5));
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(ints(&qbinomial(2, 1, 1, 4)), vec![1, 1, 0, 0, 0]);
        assert_eq!(ints(&qbinomial(4, 2, 1, 6)), vec![1, 1, 2, 1, 1, 0, 0]);
        assert!(qbinomial(2, 3, 1, 4).is_zero());
        assert!(qbinomial(2, -1, 1, 4).is_zero());
        assert_eq!(qbinomial(5, 0, 2, 6), TruncatedSeries::one(6));
    }

    #[test]
    fn coefficient_bounds() {
        let p = s(4, &[1, -1, -1, 1]);
        assert_eq!(p.coefficient(2).unwrap(), BigInt::from(-1));
        assert_eq!(p.coefficient(-3).unwrap(), BigInt::zero());
        assert_eq!(
            p.coefficient(5).unwrap_err(),
            Error::BeyondOrder { exponent: 5, order: 4 }
        );
    }

    #[test]
    fn rogers_ramanujan_product_coefficient() {
        // 1/(q^2, q^3; q^5)_inf
        let n = 10;
        let d = pochhammer_infinite(PochSign::Pos, 2, 5, n)
            .unwrap()
            .mul(&pochhammer_infinite(PochSign::Pos, 3, 5, n).unwrap())
            .unwrap();
        let rhs = d.inverse_unit().unwrap();
        assert_eq!(rhs.coefficient(8).unwrap(), BigInt::from(3));
    }

    #[test]
    fn display_and_csv() {
        let p = s(3, &[1, -1, 0, 2]);
        assert_eq!(p.to_string(), "1 - q + 2q^3");
        assert_eq!(p.to_csv(), "exponent,coefficient\n0,1\n1,-1\n2,0\n3,2\n");
    }
}
