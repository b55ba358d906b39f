//! Exact arithmetic in Q adjoined square roots of square-free integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element `sum_i c_i * sqrt(r_i)` with rational `c_i` and distinct
/// square-free radicands `r_i`, sorted, with `1` always present first.
#[derive(Clone, Debug)]
pub struct AlgNum {
    terms: Vec<(u64, BigRational)>,
}

/// Square-free part and the square factor: `n = s * q^2`.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut q = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            q *= p;
        }
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (s * n, q)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl AlgNum {
    pub fn zero() -> Self {
        AlgNum {
            terms: vec![(1, BigRational::zero())],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn rational(q: BigRational) -> Self {
        AlgNum {
            terms: vec![(1, q)],
        }
    }

    /// `sqrt(n)` for any `n >= 0`, with square factors pulled out.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (s, q) = squarefree_split(n);
        let c = BigRational::from_integer(BigInt::from(q));
        Self::from_terms(vec![(s, c)])
    }

    /// Build from arbitrary terms; radicands must be square-free.
    pub fn from_terms(terms: Vec<(u64, BigRational)>) -> Self {
        let mut out: Vec<(u64, BigRational)> = vec![(1, BigRational::zero())];
        for (r, c) in terms {
            debug_assert_eq!(squarefree_split(r).1, 1, "radicand {r} not square-free");
            match out.binary_search_by_key(&r, |t| t.0) {
                Ok(i) => out[i].1 += c,
                Err(i) => out.insert(i, (r, c)),
            }
        }
        AlgNum { terms: out }
    }

    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    /// Nonzero terms only.
    pub fn support(&self) -> impl Iterator<Item = &(u64, BigRational)> {
        self.terms.iter().filter(|t| !t.1.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 1 || t.1.is_zero())
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms[0].1.clone()
    }

    pub fn coeff(&self, radicand: u64) -> BigRational {
        self.terms
            .iter()
            .find(|t| t.0 == radicand)
            .map(|t| t.1.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        AlgNum {
            terms: self.terms.iter().map(|(r, c)| (*r, c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Exact sign. Nonzero coefficients over distinct square-free radicands
    /// give a nonzero number, so interval refinement always terminates.
    pub fn sign(&self) -> i32 {
        let support: Vec<_> = self.support().collect();
        match support.len() {
            0 => return 0,
            1 => return if support[0].1.is_positive() { 1 } else { -1 },
            2 => return sign_by_squaring(support[0], support[1]),
            _ => {}
        }
        let den = support
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.1.denom()));
        let ints: Vec<(u64, BigInt)> = support
            .iter()
            .map(|(r, c)| (*r, (c * BigRational::from_integer(den.clone())).to_integer()))
            .collect();
        let mut bits: u32 = 32;
        loop {
            let scale = BigInt::one() << (2 * bits);
            let mut lo = BigInt::zero();
            let mut hi = BigInt::zero();
            for (r, a) in &ints {
                let (l, h) = if *r == 1 {
                    let one = BigInt::one() << bits;
                    (one.clone(), one)
                } else {
                    let l = (BigInt::from(*r) * &scale).sqrt();
                    let h = &l + 1;
                    (l, h)
                };
                if a.is_positive() {
                    lo += a * &l;
                    hi += a * &h;
                } else {
                    lo += a * &h;
                    hi += a * &l;
                }
            }
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    fn conjugate(&self, p: u64) -> Self {
        AlgNum {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (*r, if r % p == 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let prime = self
            .support()
            .filter(|t| t.0 != 1)
            .flat_map(|t| prime_factors(t.0))
            .min();
        match prime {
            None => Some(Self::rational(self.rational_part().recip())),
            Some(p) => {
                let conj = self.conjugate(p);
                let norm = self * &conj;
                Some(&conj * &norm.inv()?)
            }
        }
    }

    pub fn div(&self, other: &AlgNum) -> Option<Self> {
        Some(self * &other.inv()?)
    }

    /// Union of the radicands with nonzero coefficient across `values`.
    pub fn radical_basis(values: &[AlgNum]) -> Vec<u64> {
        let mut basis: Vec<u64> = vec![1];
        for v in values {
            for (r, _) in v.support() {
                if let Err(i) = basis.binary_search(r) {
                    basis.insert(i, *r);
                }
            }
        }
        basis
    }

    /// Integer coefficient matrix: row `i` is `values[i]` over `basis`,
    /// scaled by a common positive denominator.
    pub fn coefficient_matrix(values: &[AlgNum]) -> (Vec<u64>, Vec<Vec<i64>>) {
        let basis = Self::radical_basis(values);
        let den = values
            .iter()
            .flat_map(|v| v.terms.iter().map(|t| t.1.denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let dq = BigRational::from_integer(den);
        let rows = values
            .iter()
            .map(|v| {
                basis
                    .iter()
                    .map(|r| {
                        (v.coeff(*r) * &dq)
                            .to_integer()
                            .to_i64()
                            .expect("character coefficient overflow")
                    })
                    .collect()
            })
            .collect();
        (basis, rows)
    }

    /// Whether `self = lambda * other` for some rational `lambda > 0`.
    pub fn positively_proportional(xs: &[AlgNum], ys: &[AlgNum]) -> bool {
        if xs.len() != ys.len() {
            return false;
        }
        let Some(k) = xs.iter().position(|x| !x.is_zero()) else {
            return ys.iter().all(|y| y.is_zero());
        };
        if ys[k].is_zero() {
            return false;
        }
        let Some(lambda) = ys[k].div(&xs[k]) else { return false };
        if lambda.sign() <= 0 {
            return false;
        }
        xs.iter().zip(ys).all(|(x, y)| &(x * &lambda) == y)
    }
}

/// Sign of `a sqrt(r) + b sqrt(s)` with both coefficients nonzero, by squaring.
fn sign_by_squaring(a: &(u64, BigRational), b: &(u64, BigRational)) -> i32 {
    let sa = a.1.is_positive();
    let sb = b.1.is_positive();
    if sa == sb {
        return if sa { 1 } else { -1 };
    }
    let ma = &a.1 * &a.1 * BigRational::from_integer(a.0.into());
    let mb = &b.1 * &b.1 * BigRational::from_integer(b.0.into());
    match ma.cmp(&mb) {
        Ordering::Greater => {
            if sa {
                1
            } else {
                -1
            }
        }
        Ordering::Less => {
            if sb {
                1
            } else {
                -1
            }
        }
        Ordering::Equal => 0,
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for AlgNum {}

impl PartialOrd for AlgNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgNum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl Add for &AlgNum {
    type Output = AlgNum;
    fn add(self, rhs: &AlgNum) -> AlgNum {
        AlgNum::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned().collect())
    }
}

impl Sub for &AlgNum {
    type Output = AlgNum;
    fn sub(self, rhs: &AlgNum) -> AlgNum {
        self + &(-rhs)
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum {
            terms: self.terms.iter().map(|(r, c)| (*r, -c)).collect(),
        }
    }
}

impl Mul for &AlgNum {
    type Output = AlgNum;
    fn mul(self, rhs: &AlgNum) -> AlgNum {
        let mut out = Vec::new();
        for (r, a) in &self.terms {
            for (s, b) in &rhs.terms {
                let g = r.gcd(s);
                let prod = (r / g) * (s / g);
                out.push((prod, a * b * BigRational::from_integer(g.into())));
            }
        }
        AlgNum::from_terms(out)
    }
}

impl Add for AlgNum {
    type Output = AlgNum;
    fn add(self, rhs: AlgNum) -> AlgNum {
        &self + &rhs
    }
}

impl Sub for AlgNum {
    type Output = AlgNum;
    fn sub(self, rhs: AlgNum) -> AlgNum {
        &self - &rhs
    }
}

impl Mul for AlgNum {
    type Output = AlgNum;
    fn mul(self, rhs: AlgNum) -> AlgNum {
        &self * &rhs
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        AlgNum::from_int(n)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c) in self.support() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if *r == 1 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({r})")?;
            } else {
                write!(f, "{}*sqrt({r})", fmt_rational(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl serde::Serialize for AlgNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgNumParseError {
    pub offset: usize,
    pub msg: String,
}

impl fmt::Display for AlgNumParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.msg)
    }
}

impl std::error::Error for AlgNumParseError {}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> AlgNumParseError {
        AlgNumParseError {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, AlgNumParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn factor(&mut self) -> Result<AlgNum, AlgNumParseError> {
        match self.peek() {
            Some(b's') => {
                if !self.s[self.pos..].starts_with(b"sqrt") {
                    return Err(self.err("expected sqrt"));
                }
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.err("expected '('"));
                }
                let n = self.integer()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                let n = n.to_u64().ok_or_else(|| self.err("radicand too large"))?;
                Ok(AlgNum::sqrt(n))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let q = if self.eat(b'/') {
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                Ok(AlgNum::rational(q))
            }
            _ => Err(self.err("expected number or sqrt(..)")),
        }
    }

    fn term(&mut self) -> Result<AlgNum, AlgNumParseError> {
        let mut v = self.factor()?;
        while self.eat(b'*') {
            let w = self.factor()?;
            v = &v * &w;
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<AlgNum, AlgNumParseError> {
        let neg = self.eat(b'-');
        let mut v = self.term()?;
        if neg {
            v = -v;
        }
        loop {
            if self.eat(b'+') {
                let w = self.term()?;
                v = &v + &w;
            } else if self.eat(b'-') {
                let w = self.term()?;
                v = &v - &w;
            } else {
                return Ok(v);
            }
        }
    }
}

impl FromStr for AlgNum {
    type Err = AlgNumParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor {
            s: s.as_bytes(),
            pos: 0,
        };
        let v = c.expr()?;
        if c.peek().is_some() {
            return Err(c.err("trailing input"));
        }
        Ok(v)
    }
}

/// A list of algebraic values pre-scaled to integers over a shared radical
/// basis, for fast repeated sign evaluation of integer combinations.
#[derive(Clone, Debug)]
pub struct IntegerForm {
    basis: Vec<u64>,
    rows: Vec<Vec<i64>>,
}

impl IntegerForm {
    pub fn new(values: &[AlgNum]) -> Self {
        let (basis, rows) = AlgNum::coefficient_matrix(values);
        IntegerForm { basis, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficients over the radical basis of `sum_i x_i * values[i]`
    /// (up to the shared positive scale).
    pub fn combine(&self, x: &[i64]) -> Vec<i128> {
        let mut acc = vec![0i128; self.basis.len()];
        for (xi, row) in x.iter().zip(&self.rows) {
            if *xi == 0 {
                continue;
            }
            for (a, r) in acc.iter_mut().zip(row) {
                *a += i128::from(*xi) * i128::from(*r);
            }
        }
        acc
    }

    pub fn is_zero_at(&self, x: &[i64]) -> bool {
        self.combine(x).iter().all(|&a| a == 0)
    }

    /// Sign of `sum_i x_i * values[i]`.
    pub fn sign(&self, x: &[i64]) -> i32 {
        let acc = self.combine(x);
        match self.basis.len() {
            1 => acc[0].signum() as i32,
            2 => {
                let (a, b, r) = (acc[0], acc[1], self.basis[1] as i128);
                if a.signum() == b.signum() || b == 0 {
                    return a.signum() as i32;
                }
                if a == 0 {
                    return b.signum() as i32;
                }
                let lhs = a.checked_mul(a);
                let rhs = b.checked_mul(b).and_then(|v| v.checked_mul(r));
                match (lhs, rhs) {
                    (Some(l), Some(rr)) => match l.cmp(&rr) {
                        Ordering::Greater => a.signum() as i32,
                        Ordering::Less => b.signum() as i32,
                        Ordering::Equal => 0,
                    },
                    _ => self.slow_sign(&acc),
                }
            }
            _ => self.slow_sign(&acc),
        }
    }

    fn slow_sign(&self, acc: &[i128]) -> i32 {
        let terms = self
            .basis
            .iter()
            .zip(acc)
            .map(|(r, a)| (*r, BigRational::from_integer(BigInt::from(*a))))
            .collect();
        AlgNum::from_terms(terms).sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> AlgNum {
        s.parse().unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(p("sqrt(2) - 1").sign(), 1);
        assert_eq!(AlgNum::zero().sign(), 0);
        assert_eq!(p("3 - 2*sqrt(2)").sign(), 1);
        assert_eq!(p("sqrt(2) + sqrt(3) - sqrt(10)").sign(), -1);
        assert_eq!(p("sqrt(2) + sqrt(3) - sqrt(5) - 1/2").sign(), 1);
    }

    #[test]
    fn squaring_oracle_agrees() {
        // 3 - 2 sqrt 2: 9 vs 8
        let x = p("3 - 2*sqrt(2)");
        assert_eq!(x.sign(), (9i64 - 8).signum() as i32);
    }

    #[test]
    fn sqrt_extracts_squares() {
        assert_eq!(AlgNum::sqrt(12), p("2*sqrt(3)"));
        assert_eq!(AlgNum::sqrt(9), AlgNum::from_int(3));
        assert_eq!(&AlgNum::sqrt(2) * &AlgNum::sqrt(6), p("2*sqrt(3)"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["3/2 + sqrt(2)", "-sqrt(5)", "0", "1 - 2/3*sqrt(7)", "sqrt(2) + sqrt(3)"] {
            let v = p(s);
            assert_eq!(v.to_string(), s);
            assert_eq!(p(&v.to_string()), v);
        }
        assert_eq!(p("3/2 + 1/1*sqrt(2)").to_string(), "3/2 + sqrt(2)");
    }

    #[test]
    fn inverse_of_multi_radical() {
        let x = p("1 + sqrt(2) + sqrt(3)");
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, AlgNum::one());
    }

    #[test]
    fn integer_form_matches_exact() {
        let vals = [p("1"), p("sqrt(2)")];
        let f = IntegerForm::new(&vals);
        for x in -20..=20 {
            for y in -20..=20 {
                let exact = (&vals[0].scale_int(x) + &vals[1].scale_int(y)).sign();
                assert_eq!(f.sign(&[x, y]), exact);
            }
        }
    }

    fn alg() -> impl Strategy<Value = AlgNum> {
        proptest::collection::vec((-9i64..10, 1i64..5), 4).prop_map(|cs| {
            let rads = [1u64, 2, 3, 5];
            AlgNum::from_terms(
                rads.iter()
                    .zip(cs)
                    .map(|(r, (n, d))| (*r, BigRational::new(n.into(), d.into())))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in alg(), y in alg(), z in alg()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), AlgNum::one());
            }
        }

        #[test]
        fn sign_laws(x in alg(), y in alg()) {
            prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
            prop_assert_eq!(x.sign(), -(-&x).sign());
            let lt = x < y;
            let eq = x == y;
            let gt = x > y;
            prop_assert_eq!(u8::from(lt) + u8::from(eq) + u8::from(gt), 1);
        }

        #[test]
        fn sign_matches_float(x in alg()) {
            let f: f64 = x.terms().iter().map(|(r, c)| c.to_f64().unwrap() * (*r as f64).sqrt()).sum();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.sign(), if f > 0.0 { 1 } else { -1 });
            }
        }
    }
}
