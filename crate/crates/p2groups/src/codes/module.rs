//! Submodules of `(Z_n)^len` in Howell normal form.

use serde::Serialize;

use super::ring::{ext_gcd, gcd_u64};
use super::CodeError;
use crate::perm::Permutation;

/// A submodule of `(Z_n)^len`. The stored rows are the Howell form, so two
/// submodules are equal exactly when their rows are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Submodule {
    n: u64,
    len: usize,
    rows: Vec<Vec<u64>>,
}

impl Submodule {
    pub fn new(n: u64, len: usize, gens: &[Vec<u64>]) -> Result<Self, CodeError> {
        for g in gens {
            if g.len() != len {
                return Err(CodeError::LengthMismatch {
                    expected: len,
                    found: g.len(),
                });
            }
        }
        Ok(Submodule {
            n,
            len,
            rows: howell(n, len, gens),
        })
    }

    pub fn zero(n: u64, len: usize) -> Self {
        Submodule {
            n,
            len,
            rows: Vec::new(),
        }
    }

    pub fn full(n: u64, len: usize) -> Self {
        let gens: Vec<Vec<u64>> = (0..len)
            .map(|i| (0..len).map(|j| u64::from(i == j)).collect())
            .collect();
        Self::new(n, len, &gens).unwrap()
    }

    /// All-equal vectors.
    pub fn repetition(n: u64, len: usize) -> Self {
        Self::new(n, len, &[vec![1; len]]).unwrap()
    }

    /// Vectors with coordinate sum zero.
    pub fn sum_zero(n: u64, len: usize) -> Self {
        let gens: Vec<Vec<u64>> = (0..len.saturating_sub(1))
            .map(|i| {
                let mut v = vec![0; len];
                v[i] = 1;
                v[i + 1] = n - 1;
                v
            })
            .collect();
        Self::new(n, len, &gens).unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn pivots(&self) -> Vec<(usize, u64)> {
        self.rows
            .iter()
            .map(|r| {
                let c = r.iter().position(|&x| x != 0).unwrap();
                (c, r[c])
            })
            .collect()
    }

    pub fn order(&self) -> u128 {
        self.pivots()
            .iter()
            .map(|&(_, d)| (self.n / d) as u128)
            .product()
    }

    /// Rank over a prime modulus.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.order() == (self.n as u128).pow(self.len as u32)
    }

    /// Canonical representative of `v + M`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = v.iter().map(|x| x % self.n).collect();
        for (row, (c, d)) in self.rows.iter().zip(self.pivots()) {
            let q = v[c] / d;
            if q != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + self.n - q * r % self.n) % self.n;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.len && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_module(&self, o: &Submodule) -> bool {
        o.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, o: &Submodule) -> Submodule {
        let gens: Vec<Vec<u64>> = self.rows.iter().chain(o.rows.iter()).cloned().collect();
        Self::new(self.n, self.len, &gens).unwrap()
    }

    pub fn intersect(&self, o: &Submodule) -> Submodule {
        let l = self.len;
        let mut gens = Vec::new();
        for r in &self.rows {
            let mut v = r.clone();
            v.extend(r.iter().copied());
            gens.push(v);
        }
        for r in &o.rows {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(0, l));
            gens.push(v);
        }
        let h = howell(self.n, 2 * l, &gens);
        let inter: Vec<Vec<u64>> = h
            .into_iter()
            .filter(|r| r[..l].iter().all(|&x| x == 0))
            .map(|r| r[l..].to_vec())
            .collect();
        Self::new(self.n, l, &inter).unwrap()
    }

    /// `k M`.
    pub fn scale(&self, k: u64) -> Submodule {
        let gens: Vec<Vec<u64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x * k % self.n).collect())
            .collect();
        Self::new(self.n, self.len, &gens).unwrap()
    }

    /// Image under the coordinate permutation moving coordinate `i` to `s(i)`.
    pub fn permute(&self, s: &Permutation) -> Submodule {
        let gens: Vec<Vec<u64>> = self.rows.iter().map(|r| permute_vector(r, s)).collect();
        Self::new(self.n, self.len, &gens).unwrap()
    }

    pub fn is_invariant_under(&self, s: &Permutation) -> bool {
        self.rows.iter().all(|r| self.contains(&permute_vector(r, s)))
    }

    /// Every element, each once.
    pub fn elements(&self, limit: u128) -> Result<Vec<Vec<u64>>, CodeError> {
        let order = self.order();
        if order > limit {
            return Err(CodeError::TooLarge(format!("module of order {order}")));
        }
        let ranges: Vec<u64> = self.pivots().iter().map(|&(_, d)| self.n / d).collect();
        let mut out = vec![vec![0u64; self.len]];
        for (row, &m) in self.rows.iter().zip(&ranges) {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for v in &out {
                for k in 0..m {
                    next.push(
                        v.iter()
                            .zip(row)
                            .map(|(&a, &b)| (a + k * b) % self.n)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Canonical coset representatives of `(Z_n)^len / M`.
    pub fn quotient_representatives(&self, limit: u128) -> Result<Vec<Vec<u64>>, CodeError> {
        let total = (self.n as u128).pow(self.len as u32) / self.order();
        if total > limit {
            return Err(CodeError::TooLarge(format!("quotient of order {total}")));
        }
        let mut bound = vec![self.n; self.len];
        for (c, d) in self.pivots() {
            bound[c] = d;
        }
        let mut out = vec![Vec::new()];
        for &b in &bound {
            let mut next = Vec::with_capacity(out.len() * b as usize);
            for v in &out {
                for x in 0..b {
                    let mut w: Vec<u64> = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// `(v^s)_{s(i)} = v_i`.
pub fn permute_vector(v: &[u64], s: &Permutation) -> Vec<u64> {
    let mut w = vec![0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        w[s.apply(i)] = x;
    }
    w
}

/// Unit `u` with `u a = gcd(a, n) (mod n)`.
fn unit_normalizer(a: u64, n: u64) -> u64 {
    let g = gcd_u64(a, n);
    (1..n.max(2))
        .find(|&u| gcd_u64(u, n) == 1 && (u as u128 * a as u128 % n as u128) as u64 == g % n)
        .unwrap_or(1)
}

fn howell(n: u64, len: usize, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if n == 1 {
        return Vec::new();
    }
    let mut a: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x % n).collect::<Vec<u64>>())
        .filter(|g: &Vec<u64>| g.iter().any(|&x| x != 0))
        .collect();
    let lin = |x: &[u64], y: &[u64], s: i128, t: i128| -> Vec<u64> {
        x.iter()
            .zip(y)
            .map(|(&p, &q)| (s * p as i128 + t * q as i128).rem_euclid(n as i128) as u64)
            .collect()
    };
    let mut r = 0;
    for col in 0..len {
        if r >= a.len() {
            break;
        }
        for k in r + 1..a.len() {
            if a[k][col] == 0 {
                continue;
            }
            if a[r][col] == 0 {
                a.swap(r, k);
                continue;
            }
            let (x, y) = (a[r][col] as i128, a[k][col] as i128);
            let (g, s, t) = ext_gcd(x, y);
            let (u, v) = (-y / g, x / g);
            let nr = lin(&a[r], &a[k], s, t);
            let nk = lin(&a[r], &a[k], u, v);
            a[r] = nr;
            a[k] = nk;
        }
        if a[r][col] == 0 {
            continue;
        }
        let u = unit_normalizer(a[r][col], n);
        a[r] = a[r].iter().map(|&x| (x as u128 * u as u128 % n as u128) as u64).collect();
        let d = a[r][col];
        let ann = n / d;
        if ann > 1 && ann < n {
            let row: Vec<u64> = a[r].iter().map(|&x| x * ann % n).collect();
            if row.iter().any(|&x| x != 0) {
                a.push(row);
            }
        }
        r += 1;
        let tail = a.split_off(r);
        a.extend(tail.into_iter().filter(|v| v.iter().any(|&x| x != 0)));
    }
    a.truncate(r);
    for i in 0..a.len() {
        let c = a[i].iter().position(|&x| x != 0).unwrap();
        let d = a[i][c];
        for j in 0..i {
            let q = a[j][c] / d;
            if q != 0 {
                let row = a[i].clone();
                for (x, &y) in a[j].iter_mut().zip(&row) {
                    *x = (*x + n - q * y % n) % n;
                }
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn brute_span(n: u64, len: usize, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
        let mut set: HashSet<Vec<u64>> = HashSet::new();
        set.insert(vec![0; len]);
        let mut frontier: Vec<Vec<u64>> = vec![vec![0; len]];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % n).collect();
                if set.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        set
    }

    #[test]
    fn two_times_z6_cubed() {
        let m = Submodule::full(6, 3).scale(2);
        assert_eq!(m.order(), 27);
    }

    #[test]
    fn intersection_mod_four() {
        let a = Submodule::repetition(4, 3);
        let b = Submodule::full(4, 3).scale(2);
        let i = a.intersect(&b);
        assert_eq!(i.order(), 2);
        assert!(i.contains(&[2, 2, 2]));
    }

    proptest! {
        #[test]
        fn howell_matches_brute_span(
            n in prop::sample::select(vec![2u64, 4, 6, 8, 9, 12]),
            raw in prop::collection::vec(prop::collection::vec(0u64..12, 3), 0..4)
        ) {
            let gens: Vec<Vec<u64>> = raw.iter().map(|v| v.iter().map(|x| x % n).collect()).collect();
            let m = Submodule::new(n, 3, &gens).unwrap();
            let span = brute_span(n, 3, &gens);
            prop_assert_eq!(m.order(), span.len() as u128);
            let els: HashSet<Vec<u64>> = m.elements(1 << 20).unwrap().into_iter().collect();
            prop_assert_eq!(&els, &span);
            for v in &span {
                prop_assert!(m.contains(v));
            }
            let mixed: Vec<Vec<u64>> = span.iter().take(5).cloned().chain(gens.iter().cloned()).collect();
            prop_assert_eq!(Submodule::new(n, 3, &mixed).unwrap(), m.clone());
            let reps = m.quotient_representatives(1 << 20).unwrap();
            let mut seen = HashSet::new();
            for r in &reps {
                prop_assert_eq!(&m.reduce(r), r);
                prop_assert!(seen.insert(r.clone()));
            }
            prop_assert_eq!(reps.len() as u128 * m.order(), (n as u128).pow(3));
        }
    }
}
