//! Invariant subspaces of the `F_r`-permutation module on the points of
//! `PG(d - 1, q)` under `PSL(d, q)`, indexed by ideals of a poset of tuples.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::codes::ring::{is_prime, prime_power, Gf, Ring};
use crate::codes::Submodule;
use crate::error::{Error, Result};
use crate::linear::ProjectiveSpace;
use crate::perm::Permutation;

/// `F_q` as an extension of degree `t` of `F_r`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    field: Gf,
}

impl FieldTower {
    pub fn new(q: u64) -> Result<Self> {
        prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        let field = Gf::new(q)?;
        let tower = FieldTower { field };
        if !tower.modulus_is_irreducible() {
            return Err(Error::Invalid("field modulus is reducible".into()));
        }
        Ok(tower)
    }

    pub fn r(&self) -> u64 {
        self.field.characteristic()
    }
    pub fn t(&self) -> u32 {
        self.field.degree()
    }
    pub fn q(&self) -> u64 {
        self.field.order()
    }
    pub fn field(&self) -> &Gf {
        &self.field
    }
    pub fn modulus(&self) -> &[u64] {
        self.field.modulus()
    }

    /// The tables define a field exactly when no two nonzero elements
    /// multiply to zero, which holds exactly when the modulus is irreducible.
    fn modulus_is_irreducible(&self) -> bool {
        let q = self.q();
        (1..q).all(|a| (1..q).all(|b| self.field.mul(a, b) != 0))
    }

    /// Rotation of the `t` base-`r` digits of `k`, i.e. `k -> r k` with
    /// `q - 1` fixed.
    pub fn digit_rotate(&self, k: u64) -> u64 {
        let (r, q) = (self.r(), self.q());
        let top = q / r;
        (k % top) * r + k / top
    }
}

/// An element of `H^(c)`, or the zero tuple of `H_0`.
pub type TupleH = Vec<u32>;

/// `H^(c)`: tuples with `1 <= s_j <= d - 1`, `0 <= r s_{j+1} - s_j <= (r - 1) d`
/// (indices mod `t`) and period dividing `c`, sorted lexicographically.
pub fn hyperplane_tuples(r: u64, t: u32, d: u32, c: u32) -> Result<Vec<TupleH>> {
    if c == 0 || !t.is_multiple_of(c) {
        return Err(Error::Invalid(format!("{c} does not divide {t}")));
    }
    if d < 2 {
        return Err(Error::Invalid("d must be at least 2".into()));
    }
    let span = (d - 1) as u64;
    let count = span.checked_pow(c).filter(|&n| n <= 1 << 22).ok_or_else(|| Error::Unsupported("tuple space too large".into()))?;
    let mut out = Vec::new();
    for code in 0..count {
        let mut k = code;
        let period: Vec<u32> = (0..c)
            .map(|_| {
                let s = (k % span) as u32 + 1;
                k /= span;
                s
            })
            .collect();
        let s: TupleH = (0..t as usize).map(|j| period[j % c as usize]).collect();
        let ok = (0..t as usize).all(|j| {
            let diff = r as i64 * s[(j + 1) % t as usize] as i64 - s[j] as i64;
            (0..=(r as i64 - 1) * d as i64).contains(&diff)
        });
        if ok {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

fn below(a: &[u32], b: &[u32]) -> bool {
    let za = a.iter().all(|&x| x == 0);
    let zb = b.iter().all(|&x| x == 0);
    if za || zb {
        return za && zb;
    }
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A downward closed subset of `H_0`.
pub type PosetIdeal = BTreeSet<TupleH>;

pub fn is_ideal(poset: &[TupleH], ideal: &PosetIdeal) -> bool {
    ideal.iter().all(|x| {
        poset.contains(x) && poset.iter().all(|y| !below(y, x) || ideal.contains(y))
    })
}

/// `H_0 = H^(c)` plus the zero tuple, which is listed first.
pub fn h0(r: u64, t: u32, d: u32, c: u32) -> Result<Vec<TupleH>> {
    let mut out = vec![vec![0; t as usize]];
    out.extend(hyperplane_tuples(r, t, d, c)?);
    Ok(out)
}

/// Every ideal of `poset`, smallest first.
pub fn ideals(poset: &[TupleH]) -> Result<Vec<PosetIdeal>> {
    if poset.len() > 20 {
        return Err(Error::Unsupported(format!("poset with {} elements", poset.len())));
    }
    let mut out: Vec<PosetIdeal> = (0u32..1 << poset.len())
        .map(|mask| {
            poset
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .filter(|i| is_ideal(poset, i))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Exponent vector of `X_1^{b_1} ... X_d^{b_d}`.
pub type BasisMonomial = Vec<u64>;

/// Exponent vectors in `[0, q)^d` with degree divisible by `q - 1`, except
/// `X_1^{q-1} ... X_d^{q-1}`.
pub fn basis_monomials(q: u64, d: u32) -> Result<Vec<BasisMonomial>> {
    let total = q
        .checked_pow(d)
        .filter(|&n| n <= 1 << 22)
        .ok_or_else(|| Error::Unsupported(format!("{q}^{d} monomials")))?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut k = code;
        let b: Vec<u64> = (0..d)
            .map(|_| {
                let e = k % q;
                k /= q;
                e
            })
            .collect();
        if b.iter().sum::<u64>() % (q - 1) == 0 && !b.iter().all(|&e| e == q - 1) {
            out.push(b);
        }
    }
    out.sort();
    Ok(out)
}

fn check_monomial(x: &[u64], q: u64) -> Result<()> {
    if x.iter().any(|&e| e >= q) || x.iter().sum::<u64>() % (q - 1) != 0 || x.iter().all(|&e| e == q - 1) {
        return Err(Error::Invalid(format!("{x:?} is not a basis monomial")));
    }
    Ok(())
}

/// `s(X) = (deg^0 X, ..., deg^{t-1} X) / (q - 1)`, where `deg^k` sums the
/// `k`-fold digit rotations of the exponents.
pub fn tuple_of_monomial(x: &[u64], tower: &FieldTower) -> Result<TupleH> {
    let q = tower.q();
    check_monomial(x, q)?;
    let mut cur = x.to_vec();
    let mut out = Vec::with_capacity(tower.t() as usize);
    for _ in 0..tower.t() {
        out.push((cur.iter().sum::<u64>() / (q - 1)) as u32);
        cur = cur.iter().map(|&e| tower.digit_rotate(e)).collect();
    }
    Ok(out)
}

/// A `PSL(d, q)`-invariant subspace of `F_r^{points}` together with its ideal.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantModule {
    pub ideal: Vec<TupleH>,
    pub dimension: usize,
    pub module: Submodule,
}

fn space(tower: &FieldTower, d: u32) -> Result<ProjectiveSpace> {
    let q = tower.q() as u128;
    let n = (q.pow(d) - 1) / (q - 1);
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n as u64));
    }
    ProjectiveSpace::new(tower.field().clone(), d as usize)
}

fn evaluate(f: &Gf, points: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    points
        .iter()
        .map(|v| v.iter().zip(x).fold(1, |acc, (&c, &e)| f.mul(acc, f.pow(c, e))))
        .collect()
}

/// The `F_r`-vectors in the `F_q`-span of the given vectors.
fn descend(tower: &FieldTower, vectors: &[Vec<u64>], len: usize) -> Result<Submodule> {
    let (r, t) = (tower.r(), tower.t() as usize);
    let f = tower.field();
    let mut gens = Vec::new();
    for v in vectors {
        let mut scale = 1u64;
        for _ in 0..t {
            let mut row = vec![0u64; len * t];
            for (i, &c) in v.iter().enumerate() {
                let mut e = f.mul(c, scale);
                for k in 0..t {
                    row[k * len + i] = e % r;
                    e /= r;
                }
            }
            gens.push(row);
            scale *= r;
        }
    }
    let span = Submodule::new(r, len * t, &gens)?;
    let base: Vec<Vec<u64>> = (0..len)
        .map(|i| (0..len * t).map(|j| u64::from(i == j)).collect())
        .collect();
    let inter = span.intersect(&Submodule::new(r, len * t, &base)?);
    let rows: Vec<Vec<u64>> = inter.rows().iter().map(|row| row[..len].to_vec()).collect();
    Ok(Submodule::new(r, len, &rows)?)
}

/// `M_I`: the `F_r`-vectors in the span of the evaluations of `f_X` on
/// the projective points, over basis monomials `X` with `s(X)` in `I`.
pub fn module_from_ideal(ideal: &PosetIdeal, tower: &FieldTower, d: u32) -> Result<Submodule> {
    let poset = h0(tower.r(), tower.t(), d, tower.t())?;
    if !is_ideal(&poset, ideal) {
        return Err(Error::Invalid("not an ideal of H_0".into()));
    }
    let ps = space(tower, d)?;
    let mut vectors = Vec::new();
    for x in basis_monomials(tower.q(), d)? {
        if ideal.contains(&tuple_of_monomial(&x, tower)?) {
            vectors.push(evaluate(tower.field(), ps.points(), &x));
        }
    }
    descend(tower, &vectors, ps.len())
}

fn rotation_closed(ideal: &PosetIdeal) -> bool {
    ideal.iter().all(|s| {
        let mut rot = s.clone();
        rot.rotate_left(1);
        ideal.contains(&rot)
    })
}

/// One module per Frobenius-stable ideal of `H_0`; requires
/// `(q^d - 1)/(q - 1)` prime. Distinctness and invariance are checked.
pub fn all_invariant_modules(tower: &FieldTower, d: u32) -> Result<Vec<InvariantModule>> {
    let ps = space(tower, d)?;
    let gens = ps.psl_generators()?;
    let poset = h0(tower.r(), tower.t(), d, tower.t())?;
    let mut out: Vec<InvariantModule> = Vec::new();
    for ideal in ideals(&poset)?.into_iter().filter(rotation_closed) {
        let module = module_from_ideal(&ideal, tower, d)?;
        if !gens.iter().all(|g| module.is_invariant_under(g)) {
            return Err(Error::Search(format!("module of {ideal:?} is not invariant")));
        }
        if out.iter().any(|m| m.module == module) {
            return Err(Error::Search(format!("ideal {ideal:?} repeats a module")));
        }
        out.push(InvariantModule {
            ideal: ideal.into_iter().collect(),
            dimension: module.dimension(),
            module,
        });
    }
    Ok(out)
}

/// Every subspace of `F_r^n` invariant under `gens`, found as sums of
/// cyclic submodules of all vectors. Independent of the poset machinery.
pub fn brute_invariant_subspaces(r: u64, n: usize, gens: &[Permutation]) -> Result<Vec<Submodule>> {
    let total = (r as u128).pow(n as u32);
    if total > 1 << 16 {
        return Err(Error::Unsupported(format!("{total} vectors")));
    }
    let mut cyclic: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    let mut cyclic_mods = Vec::new();
    for code in 1..total as u64 {
        let mut k = code;
        let v: Vec<u64> = (0..n)
            .map(|_| {
                let d = k % r;
                k /= r;
                d
            })
            .collect();
        let mut m = Submodule::new(r, n, &[v])?;
        loop {
            let images: Vec<Vec<u64>> = m
                .rows()
                .iter()
                .flat_map(|row| gens.iter().map(move |g| crate::codes::permute_vector(row, g)))
                .collect();
            let next = m.sum(&Submodule::new(r, n, &images)?);
            if next == m {
                break;
            }
            m = next;
        }
        if cyclic.insert(m.rows().to_vec()) {
            cyclic_mods.push(m);
        }
    }
    let mut all: Vec<Submodule> = vec![Submodule::zero(r, n)];
    let mut seen: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    seen.insert(Vec::new());
    let mut i = 0;
    while i < all.len() {
        for c in &cyclic_mods {
            let s = all[i].sum(c);
            if seen.insert(s.rows().to_vec()) {
                all.push(s);
            }
        }
        i += 1;
    }
    all.sort_by_key(|m| m.dimension());
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_examples() {
        assert_eq!(hyperplane_tuples(2, 1, 2, 1).unwrap(), vec![vec![1]]);
        assert_eq!(hyperplane_tuples(2, 1, 3, 1).unwrap(), vec![vec![1], vec![2]]);
        assert_eq!(hyperplane_tuples(2, 2, 2, 2).unwrap(), vec![vec![1, 1]]);
        assert!(hyperplane_tuples(2, 3, 2, 2).is_err());
        assert_eq!(ideals(&h0(2, 1, 3, 1).unwrap()).unwrap().len(), 6);
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(basis_monomials(2, 3).unwrap().len(), 7);
        assert_eq!(basis_monomials(4, 2).unwrap().len(), 5);
        assert_eq!(basis_monomials(2, 2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let f4 = FieldTower::new(4).unwrap();
        assert_eq!(tuple_of_monomial(&[1, 2], &f4).unwrap(), vec![1, 1]);
        assert_eq!(tuple_of_monomial(&[0, 0], &f4).unwrap(), vec![0, 0]);
        assert!(tuple_of_monomial(&[3, 3], &f4).is_err());
        let f2 = FieldTower::new(2).unwrap();
        assert_eq!(tuple_of_monomial(&[1, 0, 0], &f2).unwrap(), vec![1]);
    }

    #[test]
    fn rotation_matches_closed_formula() {
        for q in [2u64, 4, 8, 9, 27] {
            let tw = FieldTower::new(q).unwrap();
            for k in 0..q {
                let r = tw.r();
                let closed = (r * k) as i64 + (1 - q as i64) * ((r * k / q) as i64);
                assert_eq!(tw.digit_rotate(k) as i64, closed, "q={q} k={k}");
            }
        }
    }

    #[test]
    fn small_module_examples() {
        let f2 = FieldTower::new(2).unwrap();
        let zero: PosetIdeal = [vec![0]].into_iter().collect();
        assert_eq!(module_from_ideal(&PosetIdeal::new(), &f2, 3).unwrap().dimension(), 0);
        assert_eq!(module_from_ideal(&zero, &f2, 3).unwrap(), Submodule::repetition(2, 7));
        let full: PosetIdeal = h0(2, 1, 3, 1).unwrap().into_iter().collect();
        assert!(module_from_ideal(&full, &f2, 3).unwrap().is_full());
        let bad: PosetIdeal = [vec![2]].into_iter().collect();
        assert!(module_from_ideal(&bad, &f2, 3).is_err());
    }

    #[test]
    fn counts_match_brute_force() {
        for (q, d, want) in [(2u64, 2u32, 4usize), (2, 3, 6), (4, 2, 4)] {
            let tw = FieldTower::new(q).unwrap();
            let mods = all_invariant_modules(&tw, d).unwrap();
            assert_eq!(mods.len(), want);
            let ps = ProjectiveSpace::new(tw.field().clone(), d as usize).unwrap();
            let brute = brute_invariant_subspaces(tw.r(), ps.len(), &ps.psl_generators().unwrap()).unwrap();
            assert_eq!(brute.len(), want);
            for m in &mods {
                assert!(brute.contains(&m.module));
            }
        }
    }

    #[test]
    fn intersections_are_preserved() {
        let tw = FieldTower::new(2).unwrap();
        let poset = h0(2, 1, 3, 1).unwrap();
        let all = ideals(&poset).unwrap();
        for a in &all {
            for b in &all {
                let i: PosetIdeal = a.intersection(b).cloned().collect();
                let u: PosetIdeal = a.union(b).cloned().collect();
                assert!(is_ideal(&poset, &i) && is_ideal(&poset, &u));
                let ma = module_from_ideal(a, &tw, 3).unwrap();
                let mb = module_from_ideal(b, &tw, 3).unwrap();
                assert_eq!(module_from_ideal(&i, &tw, 3).unwrap(), ma.intersect(&mb));
            }
        }
    }
}
