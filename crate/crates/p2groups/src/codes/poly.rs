use std::fmt;

use super::ring::{Ring, Zn};
use super::CodeError;

/// A polynomial over a finite ring, lowest coefficient first, no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R: Ring> {
    ring: R,
    c: Vec<u64>,
}

/// Polynomials over `Z_n`.
pub type ModPoly = Poly<Zn>;

impl<R: Ring + Eq> Eq for Poly<R> {}

impl<R: Ring> Poly<R> {
    pub fn new(ring: R, coeffs: Vec<u64>) -> Self {
        let size = ring.size();
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % size).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { ring, c }
    }

    pub fn from_ints(ring: R, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| ring.from_int(v)).collect();
        Self::new(ring, c)
    }

    pub fn zero(ring: R) -> Self {
        Poly { ring, c: Vec::new() }
    }

    pub fn one(ring: R) -> Self {
        let one = ring.from_int(1);
        Self::new(ring, vec![one])
    }

    /// `x^k`.
    pub fn monomial(ring: R, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = ring.from_int(1);
        Self::new(ring, c)
    }

    /// `x^n - 1`.
    pub fn x_n_minus_one(ring: R, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = ring.from_int(-1);
        c[n] = ring.from_int(1);
        Self::new(ring, c)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lead() == self.ring.from_int(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.ring.add(self.coeff(i), o.coeff(i)))
            .collect();
        Self::new(self.ring.clone(), c)
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|&a| self.ring.neg(a)).collect();
        Self::new(self.ring.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: u64) -> Self {
        let c = self.c.iter().map(|&a| self.ring.mul(a, k)).collect();
        Self::new(self.ring.clone(), c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = self.ring.add(c[i + j], self.ring.mul(a, b));
            }
        }
        Self::new(self.ring.clone(), c)
    }

    /// Division by a divisor with unit leading coefficient.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), CodeError> {
        let dl = d.lead();
        let inv = self
            .ring
            .inv(dl)
            .ok_or_else(|| CodeError::Arithmetic("divisor leading coefficient is not a unit".into()))?;
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(self.ring.clone()), self.clone()));
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let coef = self.ring.mul(r[k], inv);
            if coef == 0 {
                continue;
            }
            q[k - dd] = coef;
            for (i, &dc) in d.c.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = self.ring.sub(r[idx], self.ring.mul(coef, dc));
            }
        }
        Ok((Self::new(self.ring.clone(), q), Self::new(self.ring.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, CodeError> {
        Ok(self.divrem(d)?.1)
    }

    pub fn divides(&self, f: &Self) -> Result<bool, CodeError> {
        Ok(f.rem(self)?.is_zero())
    }

    pub fn monic(&self) -> Result<Self, CodeError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = self
            .ring
            .inv(self.lead())
            .ok_or_else(|| CodeError::Arithmetic("leading coefficient is not a unit".into()))?;
        Ok(self.scale(inv))
    }

    /// Monic gcd; requires a field.
    pub fn gcd(&self, o: &Self) -> Result<Self, CodeError> {
        if !self.ring.is_field() {
            return Err(CodeError::Arithmetic("gcd needs a field".into()));
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` monic; requires a field.
    pub fn ext_gcd(&self, o: &Self) -> Result<(Self, Self, Self), CodeError> {
        let ring = self.ring.clone();
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(ring.clone()), Self::zero(ring.clone()));
        let (mut t0, mut t1) = (Self::zero(ring.clone()), Self::one(ring.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = ring
            .inv(r0.lead())
            .ok_or_else(|| CodeError::Arithmetic("gcd needs a field".into()))?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| self.ring.add(self.ring.mul(acc, x), a))
    }

    /// `f(x^a)`.
    pub fn compose_power(&self, a: usize) -> Self {
        let mut c = vec![0u64; (self.c.len().max(1) - 1) * a + 1];
        for (i, &v) in self.c.iter().enumerate() {
            c[i * a] = v;
        }
        Self::new(self.ring.clone(), c)
    }

    /// Reduce modulo `x^n - 1`.
    pub fn cyclic_reduce(&self, n: usize) -> Self {
        let mut c = vec![0u64; n];
        for (i, &v) in self.c.iter().enumerate() {
            c[i % n] = self.ring.add(c[i % n], v);
        }
        Self::new(self.ring.clone(), c)
    }

    /// Coefficient vector of length `n`.
    pub fn to_vector(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    /// Parses `c0 + c1*x + c2*x^2`; terms may appear in any order.
    pub fn parse(ring: R, s: &str) -> Result<Self, CodeError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(CodeError::Parse("empty polynomial".into()));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1i64, b.to_string()),
                None => (1i64, t.trim_start_matches('+').to_string()),
            };
            let (coef, pow) = if let Some(idx) = body.find('x') {
                let cpart = body[..idx].trim_end_matches('*');
                let coef = if cpart.is_empty() {
                    1
                } else {
                    cpart
                        .parse::<i64>()
                        .map_err(|_| CodeError::Parse(format!("bad coefficient {cpart:?}")))?
                };
                let rest = &body[idx + 1..];
                let pow = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| CodeError::Parse(format!("bad exponent in {body:?}")))?
                };
                (coef, pow)
            } else {
                let coef = body
                    .parse::<i64>()
                    .map_err(|_| CodeError::Parse(format!("bad term {body:?}")))?;
                (coef, 0)
            };
            if coeffs.len() <= pow {
                coeffs.resize(pow + 1, 0);
            }
            coeffs[pow] += sign * coef;
        }
        Ok(Self::from_ints(ring, &coeffs))
    }
}

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::ring::Gf;

    #[test]
    fn text_round_trip() {
        let r = Zn::new(3);
        let f = Poly::parse(r, "2 + x + 1*x^2").unwrap();
        assert_eq!(f.to_string(), "2 + 1*x + 1*x^2");
        assert_eq!(Poly::parse(r, &f.to_string()).unwrap(), f);
        assert_eq!(Poly::parse(r, "x^3 - 1").unwrap(), Poly::x_n_minus_one(r, 3));
    }

    #[test]
    fn division_and_gcd() {
        let r = Zn::new(2);
        let x7 = Poly::x_n_minus_one(r, 7);
        let f = Poly::from_ints(r, &[1, 1, 0, 1]);
        let (q, rem) = x7.divrem(&f).unwrap();
        assert!(rem.is_zero());
        assert_eq!(q.mul(&f), x7);
        let g = x7.gcd(&f.mul(&Poly::from_ints(r, &[1, 1]))).unwrap();
        assert_eq!(g, f.mul(&Poly::from_ints(r, &[1, 1])));
    }

    #[test]
    fn ext_gcd_over_gf4() {
        let f = Gf::new(4).unwrap();
        let a = Poly::new(f.clone(), vec![2, 1, 1]);
        let b = Poly::new(f.clone(), vec![3, 1]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
