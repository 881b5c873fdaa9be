//! Exact arithmetic in Z[q, q^-1].
//!
//! Laurent polynomials carry the q-graded bookkeeping of the whole crate:
//! quantum integers, quantum factorials, balanced Gaussian binomials, graded
//! dimensions and decomposition multiplicities. Coefficients are checked
//! 64-bit integers; all operations are exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// Element of Z[q, q^-1], stored sparsely by exponent.
///
/// No zero coefficients are ever stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct LaurentInt {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt::default()
    }

    pub fn one() -> Self {
        LaurentInt::monomial(0, 1)
    }

    /// c * q^e.
    pub fn monomial(exp: i64, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(exp, c);
        }
        LaurentInt { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        let mut p = LaurentInt::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry = cadd(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// The bar involution q <-> q^-1.
    pub fn bar(&self) -> Self {
        LaurentInt::from_coeffs(self.iter().map(|(e, c)| (-e, c)))
    }

    pub fn is_bar_symmetric(&self) -> bool {
        *self == self.bar()
    }

    /// Evaluation at q = 1.
    pub fn eval_at_one(&self) -> i64 {
        self.iter().fold(0, |acc, (_, c)| cadd(acc, c))
    }

    pub fn scale(&self, c: i64) -> Self {
        LaurentInt::from_coeffs(self.iter().map(|(e, k)| (e, cmul(k, c))))
    }

    /// Multiplication by q^e.
    pub fn shift(&self, e: i64) -> Self {
        LaurentInt::from_coeffs(self.iter().map(|(k, c)| (k + e, c)))
    }

    /// Drop all terms with exponent outside [lo, hi].
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        LaurentInt::from_coeffs(self.iter().filter(|&(e, _)| lo <= e && e <= hi))
    }

    /// Exact division; returns None when `self` is not a multiple of `d`.
    pub fn exact_div(&self, d: &LaurentInt) -> Option<LaurentInt> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = LaurentInt::zero();
        let (dexp, dc) = {
            let e = d.max_exp().unwrap();
            (e, d.coeff(e))
        };
        while !rem.is_zero() {
            let e = rem.max_exp().unwrap();
            let c = rem.coeff(e);
            if c % dc != 0 {
                return None;
            }
            let t = LaurentInt::monomial(e - dexp, c / dc);
            rem = &rem - &(&t * d);
            if let Some(re) = rem.max_exp() {
                if re >= e {
                    return None;
                }
            }
            quot = &quot + &t;
        }
        Some(quot)
    }

    pub fn nonneg_coeffs(&self) -> bool {
        self.iter().all(|(_, c)| c > 0)
    }
}

impl Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, cmul(c1, c2));
            }
        }
        out
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt::from_coeffs(self.iter().map(|(e, c)| (e, -c)))
    }
}

impl Add for LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: LaurentInt) -> LaurentInt {
        &self + &rhs
    }
}

impl Sub for LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: LaurentInt) -> LaurentInt {
        &self - &rhs
    }
}

impl Mul for LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: LaurentInt) -> LaurentInt {
        &self * &rhs
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        for (e, c) in rhs.iter() {
            self.add_term(e, c);
        }
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest power first
        for (&e, &c) in self.coeffs.iter().rev() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match e {
                0 => write!(f, "{}", mag)?,
                1 => {
                    if mag == 1 {
                        write!(f, "q")?
                    } else {
                        write!(f, "{}*q", mag)?
                    }
                }
                _ => {
                    if mag == 1 {
                        write!(f, "q^{}", e)?
                    } else {
                        write!(f, "{}*q^{}", mag, e)?
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentInt {
    type Err = String;

    /// Parses the `Display` form, e.g. `q^2 + 2 - q^-4`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentInt::zero());
        }
        let mut out = LaurentInt::zero();
        // split into signed chunks
        let normalized = s.replace(" - ", " + -").replace("- ", "-");
        for chunk in normalized.split(" + ") {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, chunk),
            };
            let (coeff_str, exp): (&str, i64) = match body.find('q') {
                None => (body, 0),
                Some(qpos) => {
                    let c = body[..qpos].trim_end_matches('*').trim();
                    let rest = &body[qpos + 1..];
                    let e = if let Some(estr) = rest.strip_prefix('^') {
                        estr.trim().parse::<i64>().map_err(|e| e.to_string())?
                    } else {
                        1
                    };
                    (c, e)
                }
            };
            let mut c: i64 = if coeff_str.is_empty() {
                1
            } else {
                coeff_str.parse::<i64>().map_err(|e| e.to_string())?
            };
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

impl From<LaurentInt> for String {
    fn from(p: LaurentInt) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for LaurentInt {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

/// Balanced quantum integer [m] = q^{m-1} + q^{m-3} + ... + q^{1-m}.
pub fn quantum_int(m: u32) -> LaurentInt {
    let m = m as i64;
    LaurentInt::from_coeffs((0..m).map(|k| (m - 1 - 2 * k, 1)))
}

/// Quantum factorial [m]! = [1][2]...[m].
pub fn quantum_factorial(m: u32) -> LaurentInt {
    let mut acc = LaurentInt::one();
    for j in 1..=m {
        acc = &acc * &quantum_int(j);
    }
    acc
}

/// Balanced Gaussian binomial [m choose k] = [m]! / ([k]! [m-k]!).
///
/// Computed by the Pascal recurrence
/// [m choose k] = q^k [m-1 choose k] + q^{k-m} [m-1 choose k-1],
/// which stays inside Z[q, q^-1] throughout.
pub fn quantum_binomial(m: u32, k: u32) -> Result<LaurentInt> {
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    let mut row = vec![LaurentInt::one()];
    for n in 1..=m {
        let mut next = Vec::with_capacity(row.len() + 1);
        for j in 0..=n.min(k) {
            let mut v = LaurentInt::zero();
            if (j as usize) < row.len() {
                v += &row[j as usize].shift(j as i64);
            }
            if j > 0 {
                v += &row[(j - 1) as usize].shift(j as i64 - n as i64);
            }
            next.push(v);
        }
        row = next;
    }
    Ok(row[k as usize].clone())
}

/// Truncation of the geometric series 1/(1 - q^step) to exponents <= hi.
pub fn geometric_series(step: i64, hi: i64) -> LaurentInt {
    assert!(step > 0);
    LaurentInt::from_coeffs((0..).map(|k| k * step).take_while(|&e| e <= hi).map(|e| (e, 1)))
}
