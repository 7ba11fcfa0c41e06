use std::fmt;
use std::ops::Mul;

use super::PermError;

/// A permutation of `{0, .., n-1}` stored as its image list.
///
/// Products compose left to right: `(f * g)(x) = g(f(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    img: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            img: (0..n as u16).collect(),
        }
    }

    pub fn from_images(img: Vec<usize>) -> Result<Self, PermError> {
        let n = img.len();
        if n > u16::MAX as usize {
            return Err(PermError::Parse(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        for &x in &img {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Permutation {
            img: img.into_iter().map(|x| x as u16).collect(),
        })
    }

    pub(crate) fn from_u16_unchecked(img: Vec<u16>) -> Self {
        debug_assert!(Self::from_images(img.iter().map(|&x| x as usize).collect()).is_ok());
        Permutation { img }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Result<Self, PermError> {
        Self::from_images((0..n).map(f).collect())
    }

    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(PermError::PointOutOfRange { point: x, degree: n });
                }
                if used[x] {
                    return Err(PermError::NotBijection);
                }
                used[x] = true;
                img[x] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize).collect()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { img: inv }
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 * self * g`, i.e. `x -> g(self(g^-1(x)))`.
    pub fn conjugate(&self, g: &Permutation) -> Permutation {
        let mut img = vec![0u16; self.img.len()];
        for (x, &y) in self.img.iter().enumerate() {
            img[g.img[x] as usize] = g.img[y as usize];
        }
        Permutation { img }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Nontrivial cycles, each starting at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> u128 {
        self.cycle_type()
            .into_iter()
            .fold(1u128, |acc, l| lcm(acc, l as u128))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| self.apply(x) == x).collect()
    }

    /// Extends to a larger degree, fixing the new points.
    pub fn extend(&self, n: usize) -> Permutation {
        assert!(n >= self.degree());
        let mut img = self.img.clone();
        img.extend(self.degree() as u16..n as u16);
        Permutation { img }
    }

    /// Restricts to `{0, .., n-1}`, which must be invariant.
    pub fn restrict(&self, n: usize) -> Permutation {
        Permutation {
            img: self.img[..n].to_vec(),
        }
    }

    pub fn to_one_line(&self) -> String {
        let parts: Vec<String> = self.img.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(" "))
    }

    pub fn to_cycle_string(&self) -> String {
        let cs = self.cycles();
        if cs.is_empty() {
            return "()".to_string();
        }
        cs.iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }

    pub fn parse_one_line(s: &str) -> Result<Permutation, PermError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PermError::Parse(format!("expected [..], got {s:?}")))?;
        let img = parse_numbers(inner)?;
        Self::from_images(img)
    }

    pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation, PermError> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let r = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' in {s:?}")))?;
            let close = r
                .find(')')
                .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {s:?}")))?;
            let pts = parse_numbers(&r[..close])?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = r[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    /// Accepts either text form.
    pub fn parse(s: &str, degree: usize) -> Result<Permutation, PermError> {
        let t = s.trim();
        if t.starts_with('[') {
            let p = Self::parse_one_line(t)?;
            if p.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
            Ok(p)
        } else {
            Self::parse_cycles(t, degree)
        }
    }
}

fn parse_numbers(s: &str) -> Result<Vec<usize>, PermError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| PermError::Parse(format!("bad point {t:?}")))
        })
        .collect()
}

pub(crate) fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl Mul<&Permutation> for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}

/// Points of degree `p^2` as pairs `(a, b) <-> a + b p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointEncoding {
    pub p: usize,
}

impl PointEncoding {
    pub fn new(p: usize) -> Self {
        PointEncoding { p }
    }
    #[inline]
    pub fn encode(&self, a: usize, b: usize) -> usize {
        a + b * self.p
    }
    #[inline]
    pub fn decode(&self, x: usize) -> (usize, usize) {
        (x % self.p, x / self.p)
    }
    pub fn degree(&self) -> usize {
        self.p * self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_is_left_to_right() {
        let f = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let g = Permutation::from_images(vec![0, 2, 1]).unwrap();
        let fg = f.compose(&g);
        for x in 0..3 {
            assert_eq!(fg.apply(x), g.apply(f.apply(x)));
        }
    }

    #[test]
    fn text_round_trip() {
        let p = Permutation::parse_cycles("(0 3 6)(1 4 7)", 9).unwrap();
        assert_eq!(p.to_cycle_string(), "(0 3 6)(1 4 7)");
        let q = Permutation::parse_one_line(&p.to_one_line()).unwrap();
        assert_eq!(p, q);
        let r = Permutation::parse_cycles("  ( 0  3 6 )\n(1 4 7) ", 9).unwrap();
        assert_eq!(p, r);
        assert_eq!(Permutation::identity(4).to_cycle_string(), "()");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::parse_cycles("(0 9)", 9).is_err());
        assert!(Permutation::parse_cycles("(0 1)(1 2)", 9).is_err());
        assert!(Permutation::parse_one_line("0 1").is_err());
    }

    #[test]
    fn conjugation_convention() {
        let h = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        let g = Permutation::from_images(vec![3, 0, 1, 2]).unwrap();
        let c = h.conjugate(&g);
        assert_eq!(c, g.inverse().compose(&h).compose(&g));
    }

    #[test]
    fn order_and_pow() {
        let p = Permutation::parse_cycles("(0 1 2)(3 4)", 5).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
    }
}
