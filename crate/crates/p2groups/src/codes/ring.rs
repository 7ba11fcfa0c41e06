use std::fmt;
use std::sync::Arc;

use super::CodeError;

/// A finite commutative ring whose elements are encoded as `0..size`.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn size(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn inv(&self, a: u64) -> Option<u64>;
    fn from_int(&self, v: i64) -> u64;
    fn is_field(&self) -> bool;

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.from_int(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

/// The integers modulo `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Zn {
    pub n: u64,
}

impl Zn {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        Zn { n }
    }
}

impl Ring for Zn {
    fn size(&self) -> u64 {
        self.n
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.n
    }
    fn neg(&self, a: u64) -> u64 {
        (self.n - a % self.n) % self.n
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }
    fn inv(&self, a: u64) -> Option<u64> {
        let (g, x, _) = ext_gcd(a as i128, self.n as i128);
        if g != 1 {
            return None;
        }
        Some(x.rem_euclid(self.n as i128) as u64)
    }
    fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.n as i64) as u64
    }
    fn is_field(&self) -> bool {
        is_prime(self.n)
    }
}

pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
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

/// `Some((r, t))` with `q = r^t`, `r` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let r = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut m = q;
    let mut t = 0;
    while m.is_multiple_of(r) {
        m /= r;
        t += 1;
    }
    (m == 1).then_some((r, t))
}

/// Multiplicative order of `a` modulo `n`; `None` when not a unit.
pub fn mult_order(a: u64, n: u64) -> Option<u64> {
    if gcd_u64(a, n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * a % n;
        k += 1;
    }
    Some(k)
}

/// Least primitive root modulo `n` (which must have one).
pub fn primitive_root(n: u64) -> Option<u64> {
    let phi = (1..n).filter(|&k| gcd_u64(k, n) == 1).count() as u64;
    (1..n).find(|&g| mult_order(g, n) == Some(phi))
}

struct GfTables {
    r: u64,
    t: u32,
    q: u64,
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The field with `q = r^t` elements. Element `e` encodes the polynomial in
/// the generator `a` whose base-`r` digits are the coefficients of `e`.
#[derive(Clone)]
pub struct Gf(Arc<GfTables>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q && self.0.modulus == other.0.modulus
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl Gf {
    pub fn new(q: u64) -> Result<Gf, CodeError> {
        let (r, t) = prime_power(q).ok_or(CodeError::NotPrimePower(q))?;
        if q > 1 << 10 {
            return Err(CodeError::TooLarge(format!("field of order {q}")));
        }
        let modulus = if t == 1 {
            vec![0, 1]
        } else {
            find_irreducible(r, t as usize)
        };
        Ok(Self::with_modulus(r, t, modulus))
    }

    fn with_modulus(r: u64, t: u32, modulus: Vec<u64>) -> Gf {
        let q = r.pow(t);
        let digits = |e: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(t as usize);
            let mut e = e;
            for _ in 0..t {
                v.push(e % r);
                e /= r;
            }
            v
        };
        let undigits = |v: &[u64]| -> u64 { v.iter().rev().fold(0, |acc, &c| acc * r + c) };
        let qs = q as usize;
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % r).collect();
                add[(a * q + b) as usize] = undigits(&s) as u32;
                let mut prod = vec![0u64; 2 * t as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % r;
                    }
                }
                if t > 1 {
                    for k in (t as usize..prod.len()).rev() {
                        let c = prod[k];
                        if c != 0 {
                            for (i, m) in modulus.iter().enumerate() {
                                let idx = k - t as usize + i;
                                prod[idx] = (prod[idx] + r * r - c * m % r) % r;
                            }
                        }
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..t as usize]) as u32;
            }
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| undigits(&digits(a).iter().map(|d| (r - d) % r).collect::<Vec<_>>()) as u32)
            .collect();
        let mut inv = vec![0u32; qs];
        for a in 1..q {
            inv[a as usize] = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as u32;
        }
        Gf(Arc::new(GfTables {
            r,
            t,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }))
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }
    pub fn characteristic(&self) -> u64 {
        self.0.r
    }
    pub fn degree(&self) -> u32 {
        self.0.t
    }
    /// Monic modulus, low coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn primitive_element(&self) -> u64 {
        let q = self.0.q;
        (1..q)
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = self.mul(x, g);
                    k += 1;
                }
                k == q - 1
            })
            .unwrap_or(1)
    }

    /// `x -> x^r`.
    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.0.r)
    }
}

impl Ring for Gf {
    fn size(&self) -> u64 {
        self.0.q
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        self.0.add[(a * self.0.q + b) as usize] as u64
    }
    fn neg(&self, a: u64) -> u64 {
        self.0.neg[a as usize] as u64
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.0.mul[(a * self.0.q + b) as usize] as u64
    }
    fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.0.inv[a as usize] as u64)
    }
    fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0.r as i64) as u64
    }
    fn is_field(&self) -> bool {
        true
    }
}

/// Least monic irreducible of degree `t` over `F_r`, low coefficient first.
fn find_irreducible(r: u64, t: usize) -> Vec<u64> {
    let count = r.pow(t as u32);
    for code in 0..count {
        let mut f: Vec<u64> = (0..t).map(|i| (code / r.pow(i as u32)) % r).collect();
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if is_irreducible_prime(&f, r) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn is_irreducible_prime(f: &[u64], r: u64) -> bool {
    let t = f.len() - 1;
    for d in 1..=t / 2 {
        for code in 0..r.pow(d as u32) {
            let mut g: Vec<u64> = (0..d).map(|i| (code / r.pow(i as u32)) % r).collect();
            g.push(1);
            if rem_prime(f, &g, r).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn rem_prime(f: &[u64], g: &[u64], r: u64) -> Vec<u64> {
    let mut a = f.to_vec();
    let dg = g.len() - 1;
    while a.len() > dg {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - dg;
        for (i, gc) in g.iter().enumerate() {
            a[shift + i] = (a[shift + i] + r * r - c * gc % r) % r;
        }
        a.pop();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_is_a_field() {
        let f = Gf::new(4).unwrap();
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        let g = f.primitive_element();
        assert_eq!(f.pow(g, 3), 1);
        assert_ne!(f.pow(g, 1), 1);
    }

    #[test]
    fn gf_distributive() {
        for q in [8u64, 9, 16, 25] {
            let f = Gf::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    for c in [0, 1, q - 1] {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn roots_and_orders() {
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(9), Some(2));
        assert_eq!(mult_order(2, 7), Some(3));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
    }
}
