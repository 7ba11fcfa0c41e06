//! Crossed homomorphisms into quotients of `(Z_n)^p` and the imprimitive
//! groups of degree `p^2` with Sylow subgroup `Z_p wr Z_p` they describe.
//!
//! An element `(h, v)` with `h` in `S_p` and `v` in `N(L)^p` acts on points
//! `(i, j) = i + j p` by `(i, j) -> (h(i), v_{h(i)}(j))`. With products read
//! left to right this gives `(h1, v1)(h2, v2) = (h1 h2, h2.v1 + v2)`, where
//! `(h.v)_m = v_{h^-1(m)}`. A crossed homomorphism therefore satisfies
//! `phi(h1 h2) = h2.phi(h1) + phi(h2)`, and the principal ones are
//! `h -> h.a - a`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::ring::is_prime;
use crate::codes::{permute_vector, Submodule};
use crate::error::{Error, Result};
use crate::perm::{BlockSystem, PermGroup, Permutation};
use crate::pgroups::z_vector;

const ELEMENT_LIMIT: u128 = 1 << 20;

fn degree_root(n: usize) -> Result<usize> {
    let p = (n as f64).sqrt().round() as usize;
    if p * p != n || !is_prime(p as u64) {
        return Err(Error::Invalid(format!("degree {n} is not the square of a prime")));
    }
    Ok(p)
}

/// `(Z_n)^p / K` with `S_p` permuting coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModule {
    k: Submodule,
}

impl QuotientModule {
    pub fn new(k: Submodule) -> Self {
        QuotientModule { k }
    }

    pub fn free(n: u64, p: usize) -> Self {
        QuotientModule::new(Submodule::zero(n, p))
    }

    pub fn n(&self) -> u64 {
        self.k.modulus()
    }
    pub fn p(&self) -> usize {
        self.k.len()
    }
    pub fn kernel(&self) -> &Submodule {
        &self.k
    }

    /// Canonical representative of `v + K`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.k.reduce(v)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n();
        self.reduce(&a.iter().zip(b).map(|(x, y)| (x + y) % n).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.n();
        self.reduce(&a.iter().zip(b).map(|(x, y)| (x + n - y % n) % n).collect::<Vec<_>>())
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        let n = self.n();
        self.reduce(&a.iter().map(|x| x * (k % n) % n).collect::<Vec<_>>())
    }

    /// `h.v`.
    pub fn act(&self, h: &Permutation, v: &[u64]) -> Vec<u64> {
        self.reduce(&permute_vector(v, h))
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.p()]
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.k.contains(v)
    }

    pub fn order(&self) -> u128 {
        (self.n() as u128).pow(self.p() as u32) / self.k.order()
    }

    pub fn elements(&self, limit: u128) -> Result<Vec<Vec<u64>>> {
        Ok(self.k.quotient_representatives(limit)?)
    }

    pub fn is_invariant_under(&self, gens: &[Permutation]) -> bool {
        gens.iter().all(|g| self.k.is_invariant_under(g))
    }

    /// `(C_0 + K)`, the preimage of the constant vectors.
    pub fn constants(&self) -> Submodule {
        self.k.sum(&Submodule::repetition(self.n(), self.p()))
    }
}

/// A crossed homomorphism stored as a full table on its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedHom {
    module: QuotientModule,
    table: BTreeMap<Permutation, Vec<u64>>,
}

impl CrossedHom {
    pub fn from_table(module: QuotientModule, table: BTreeMap<Permutation, Vec<u64>>) -> Self {
        let table = table.into_iter().map(|(h, v)| (h, module.reduce(&v))).collect();
        CrossedHom { module, table }
    }

    pub fn zero(module: QuotientModule, h: &PermGroup) -> Result<Self> {
        let z = module.zero();
        let table = h.elements(ELEMENT_LIMIT)?.into_iter().map(|x| (x, z.clone())).collect();
        Ok(CrossedHom { module, table })
    }

    /// `h -> h.a - a`.
    pub fn principal(module: QuotientModule, h: &PermGroup, a: &[u64]) -> Result<Self> {
        let table = h
            .elements(ELEMENT_LIMIT)?
            .into_iter()
            .map(|x| {
                let v = module.sub(&module.act(&x, a), a);
                (x, v)
            })
            .collect();
        Ok(CrossedHom { module, table })
    }

    /// Extends values on generators by `phi(h s) = s.phi(h) + phi(s)`.
    /// Returns `None` when the values do not extend consistently.
    pub fn from_generators(module: QuotientModule, gens: &[(Permutation, Vec<u64>)]) -> Option<Self> {
        let p = module.p();
        let id = Permutation::identity(p);
        let gens: Vec<(Permutation, Vec<u64>)> = gens.iter().map(|(g, v)| (g.clone(), module.reduce(v))).collect();
        let mut table = BTreeMap::new();
        table.insert(id.clone(), module.zero());
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            let ph = table[&h].clone();
            for (s, ps) in &gens {
                let hs = h.compose(s);
                let val = module.add(&module.act(s, &ph), ps);
                match table.get(&hs) {
                    Some(old) if *old != val => return None,
                    Some(_) => {}
                    None => {
                        table.insert(hs.clone(), val);
                        queue.push_back(hs);
                    }
                }
            }
        }
        Some(CrossedHom { module, table })
    }

    pub fn module(&self) -> &QuotientModule {
        &self.module
    }
    pub fn table(&self) -> &BTreeMap<Permutation, Vec<u64>> {
        &self.table
    }
    pub fn value(&self, h: &Permutation) -> Option<&Vec<u64>> {
        self.table.get(h)
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(|v| self.module.is_zero(v))
    }

    /// Values in `(C_0 + K)/K`.
    pub fn is_repetition_valued(&self) -> bool {
        let c = self.module.constants();
        self.table.values().all(|v| c.contains(v))
    }

    fn key(&self) -> Vec<u64> {
        self.table.values().flatten().copied().collect()
    }

    fn pointwise(&self, other: &CrossedHom, f: impl Fn(&[u64], &[u64]) -> Vec<u64>) -> CrossedHom {
        let table = self
            .table
            .iter()
            .map(|(h, v)| (h.clone(), f(v, &other.table[h])))
            .collect();
        CrossedHom {
            module: self.module.clone(),
            table,
        }
    }

    pub fn add(&self, other: &CrossedHom) -> CrossedHom {
        self.pointwise(other, |a, b| self.module.add(a, b))
    }

    pub fn sub(&self, other: &CrossedHom) -> CrossedHom {
        self.pointwise(other, |a, b| self.module.sub(a, b))
    }
}

/// True iff the table covers `h` and satisfies the cocycle identity on all pairs.
pub fn validate_crossed_hom(phi: &CrossedHom, h: &PermGroup) -> Result<bool> {
    if phi.table.len() as u128 != h.order() || !phi.table.keys().all(|x| h.has(x)) {
        return Err(Error::Invalid("crossed homomorphism table does not cover the group".into()));
    }
    let m = &phi.module;
    Ok(phi.table.iter().all(|(h1, v1)| {
        phi.table.iter().all(|(h2, v2)| {
            let lhs = &phi.table[&h1.compose(h2)];
            *lhs == m.add(&m.act(h2, v1), v2)
        })
    }))
}

/// A witness `a` with `phi1(h) - phi2(h) = h.a - a` for all `h`, if any.
pub fn cohomologous(phi1: &CrossedHom, phi2: &CrossedHom) -> Result<Option<Vec<u64>>> {
    if phi1.module != phi2.module || !phi1.table.keys().eq(phi2.table.keys()) {
        return Err(Error::Invalid("crossed homomorphisms have different modules or domains".into()));
    }
    let m = &phi1.module;
    let diff = phi1.sub(phi2);
    for a in m.elements(ELEMENT_LIMIT)? {
        if diff.table.iter().all(|(h, v)| *v == m.sub(&m.act(h, &a), &a)) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// `sum_{k < |s|} s^k . v`, which must vanish at `phi(s)`.
fn norm(m: &QuotientModule, s: &Permutation, v: &[u64]) -> Vec<u64> {
    let mut acc = m.zero();
    let mut cur = m.reduce(v);
    for _ in 0..s.order() {
        acc = m.add(&acc, &cur);
        cur = m.act(s, &cur);
    }
    acc
}

/// Every crossed homomorphism from `<gens>` into `m`, by exhaustive search
/// over generator values.
pub fn enumerate_crossed_homs(m: &QuotientModule, gens: &[Permutation], limit: u128) -> Result<Vec<CrossedHom>> {
    let elems = m.elements(ELEMENT_LIMIT)?;
    let candidates: Vec<Vec<Vec<u64>>> = gens
        .iter()
        .map(|s| elems.iter().filter(|v| m.is_zero(&norm(m, s, v))).cloned().collect())
        .collect();
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > limit {
        return Err(Error::Unsupported(format!("{total} candidate generator assignments")));
    }
    let mut assignments: Vec<Vec<usize>> = vec![Vec::new()];
    for c in &candidates {
        assignments = assignments
            .into_iter()
            .flat_map(|a| {
                (0..c.len()).map(move |i| {
                    let mut b = a.clone();
                    b.push(i);
                    b
                })
            })
            .collect();
    }
    let found: Vec<CrossedHom> = assignments
        .par_iter()
        .filter_map(|choice| {
            let pairs: Vec<(Permutation, Vec<u64>)> = gens
                .iter()
                .zip(choice)
                .enumerate()
                .map(|(k, (g, &i))| (g.clone(), candidates[k][i].clone()))
                .collect();
            CrossedHom::from_generators(m.clone(), &pairs)
        })
        .collect();
    let mut seen = HashSet::new();
    Ok(found.into_iter().filter(|c| seen.insert(c.key())).collect())
}

/// Counts for `Z^1`, `B^1` and the repetition-valued cocycles `R`, and
/// whether `R + B^1 = Z^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub repetition_valued: usize,
    pub classes: usize,
    pub covered: bool,
}

pub fn repetition_cover(m: &QuotientModule, h: &PermGroup, gens: &[Permutation], limit: u128) -> Result<CohomologyReport> {
    let z = enumerate_crossed_homs(m, gens, limit)?;
    let mut b: Vec<CrossedHom> = Vec::new();
    let mut seen = HashSet::new();
    for a in m.elements(ELEMENT_LIMIT)? {
        let c = CrossedHom::principal(m.clone(), h, &a)?;
        if seen.insert(c.key()) {
            b.push(c);
        }
    }
    let r: Vec<&CrossedHom> = z.iter().filter(|c| c.is_repetition_valued()).collect();
    let mut sums = HashSet::new();
    for x in &r {
        for y in &b {
            sums.insert(x.add(y).key());
        }
    }
    Ok(CohomologyReport {
        cocycles: z.len(),
        coboundaries: b.len(),
        repetition_valued: r.len(),
        classes: z.len() / b.len().max(1),
        covered: sums.len() == z.len(),
    })
}

/// Affine maps `x -> a x + b` of `Z_p`, as `(a, b)`.
fn affine_parts(g: &Permutation) -> Option<(u64, u64)> {
    let p = g.degree() as u64;
    let b = g.apply(0) as u64;
    let a = (g.apply(1) as u64 + p - b) % p;
    (0..p).all(|x| g.apply(x as usize) as u64 == (a * x + b) % p).then_some((a, b))
}

/// Every invariant subgroup `K` of `(Z_n)^p` under `gens`, by sums of cyclic submodules.
pub fn invariant_kernels(n: u64, p: usize, gens: &[Permutation]) -> Result<Vec<Submodule>> {
    let full = QuotientModule::free(n, p);
    let mut cyclic: Vec<Submodule> = Vec::new();
    let mut seen = HashSet::new();
    for v in full.elements(1 << 16)? {
        let mut m = Submodule::new(n, p, &[v])?;
        loop {
            let imgs: Vec<Vec<u64>> = m.rows().iter().flat_map(|r| gens.iter().map(move |g| permute_vector(r, g))).collect();
            let next = m.sum(&Submodule::new(n, p, &imgs)?);
            if next == m {
                break;
            }
            m = next;
        }
        if seen.insert(m.clone()) {
            cyclic.push(m);
        }
    }
    let mut all = vec![Submodule::zero(n, p)];
    let mut seen: HashSet<Submodule> = all.iter().cloned().collect();
    let mut i = 0;
    while i < all.len() {
        for c in &cyclic {
            let s = all[i].sum(c);
            if seen.insert(s.clone()) {
                all.push(s);
            }
        }
        i += 1;
    }
    all.sort_by_key(|k| k.order());
    Ok(all)
}

/// Representative cocycles with constant values: for `H <= AGL(1, p)`
/// containing the translations, `x -> b^e x + t` maps to `e (c, ..., c)`
/// with `b` generating the multipliers and `|b| (c, ..., c)` in `K`; for
/// `S_p`, odd permutations map to `(c, ..., c)` with `2 (c, ..., c)` in `K`;
/// for `A_p` only zero.
pub fn standard_crossed_homs(h: &PermGroup, m: &QuotientModule) -> Result<Vec<CrossedHom>> {
    let p = h.degree();
    let n = m.n();
    let elems = h.elements(ELEMENT_LIMIT)?;
    let constant = |c: u64| m.reduce(&vec![c % n; p]);
    let affine: Option<Vec<(u64, u64)>> = elems.iter().map(affine_parts).collect();
    let mut out: Vec<CrossedHom> = Vec::new();
    let mut push = |table: BTreeMap<Permutation, Vec<u64>>| {
        let c = CrossedHom::from_table(m.clone(), table);
        if !out.iter().any(|o| o.table == c.table) {
            out.push(c);
        }
    };
    if let (Some(parts), true) = (affine, h.order().is_multiple_of(p as u128)) {
        let mult: Vec<u64> = parts.iter().filter(|(_, b)| *b == 0).map(|(a, _)| *a).collect();
        let order_of = |a: u64| (1..p as u64).find(|&k| (0..k).fold(1, |acc, _| acc * a % p as u64) == 1).unwrap_or(1);
        let mcount = mult.len() as u64;
        let beta = *mult.iter().find(|&&a| order_of(a) == mcount).unwrap_or(&1);
        let log = |a: u64| (0..mcount).find(|&e| (0..e).fold(1, |acc, _| acc * beta % p as u64) == a).unwrap_or(0);
        for c in 0..n {
            if !m.is_zero(&constant(mcount * c)) {
                continue;
            }
            push(
                elems
                    .iter()
                    .zip(&parts)
                    .map(|(g, (a, _))| (g.clone(), constant(log(*a) * c)))
                    .collect(),
            );
        }
        return Ok(out);
    }
    if h.same_group(&PermGroup::alternating(p)) {
        return Ok(vec![CrossedHom::zero(m.clone(), h)?]);
    }
    if h.same_group(&PermGroup::symmetric(p)) {
        for c in 0..n {
            if !m.is_zero(&constant(2 * c)) {
                continue;
            }
            push(
                elems
                    .iter()
                    .map(|g| (g.clone(), if g.is_even() { m.zero() } else { constant(c) }))
                    .collect(),
            );
        }
        return Ok(out);
    }
    Err(Error::Unsupported("only subgroups of AGL(1, p), A_p and S_p are supported".into()))
}

/// A transitive simple `L <= S_p` with its normalizer and a fixed generator
/// `c` of the cyclic group `N(L)/L`, identifying it with `Z_n`.
#[derive(Clone, Debug)]
pub struct LContext {
    l: PermGroup,
    normalizer: PermGroup,
    coset_gen: Permutation,
    n: u64,
}

impl LContext {
    pub fn new(l: PermGroup) -> Result<Self> {
        let p = l.degree();
        if !is_prime(p as u64) || p > 7 {
            return Err(Error::Unsupported(format!("L of degree {p}")));
        }
        if !l.is_transitive() || !l.is_simple(ELEMENT_LIMIT)? {
            return Err(Error::Invalid("L must be transitive and simple".into()));
        }
        let normalizer = PermGroup::symmetric(p).brute_normalizer(&l, ELEMENT_LIMIT)?;
        let n = (normalizer.order() / l.order()) as u64;
        let mut elems = normalizer.elements(ELEMENT_LIMIT)?;
        elems.sort();
        let coset_order = |c: &Permutation| (1..=n).find(|&k| l.has(&c.pow(k as i64))).unwrap_or(n);
        let coset_gen = elems
            .into_iter()
            .find(|c| coset_order(c) == n)
            .ok_or_else(|| Error::Search("N(L)/L is not cyclic".into()))?;
        Ok(LContext {
            l,
            normalizer,
            coset_gen,
            n,
        })
    }

    pub fn l(&self) -> &PermGroup {
        &self.l
    }
    pub fn normalizer(&self) -> &PermGroup {
        &self.normalizer
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn coset_generator(&self) -> &Permutation {
        &self.coset_gen
    }

    /// `k` with `u` in `c^k L`.
    pub fn exponent(&self, u: &Permutation) -> Result<u64> {
        (0..self.n)
            .find(|&k| self.l.has(&self.coset_gen.pow(-(k as i64)).compose(u)))
            .ok_or_else(|| Error::Invalid("element does not normalize L".into()))
    }

    pub fn power(&self, k: u64) -> Permutation {
        self.coset_gen.pow(k as i64)
    }
}

/// `(H, L, K, phi)`: `K` is recorded as its image `K / L^p` in `(Z_n)^p`,
/// which is also the kernel of the module `phi` takes values in.
#[derive(Clone, Debug)]
pub struct WreathTuple {
    h: PermGroup,
    ctx: LContext,
    phi: CrossedHom,
}

impl WreathTuple {
    pub fn new(h: PermGroup, l: PermGroup, phi: CrossedHom) -> Result<Self> {
        let ctx = LContext::new(l)?;
        let p = ctx.l.degree();
        if h.degree() != p || !h.is_transitive() {
            return Err(Error::Invalid("H must be transitive of the same degree as L".into()));
        }
        let m = phi.module();
        if m.n() != ctx.n || m.p() != p {
            return Err(Error::Invalid(format!("module must be a quotient of (Z_{})^{p}", ctx.n)));
        }
        if !m.is_invariant_under(h.generators()) {
            return Err(Error::Invalid("K is not H-invariant".into()));
        }
        if !validate_crossed_hom(&phi, &h)? {
            return Err(Error::Invalid("phi is not a crossed homomorphism".into()));
        }
        Ok(WreathTuple { h, ctx, phi })
    }

    pub fn p(&self) -> usize {
        self.h.degree()
    }
    pub fn h(&self) -> &PermGroup {
        &self.h
    }
    pub fn l(&self) -> &PermGroup {
        &self.ctx.l
    }
    pub fn context(&self) -> &LContext {
        &self.ctx
    }
    pub fn k(&self) -> &Submodule {
        self.phi.module().kernel()
    }
    pub fn phi(&self) -> &CrossedHom {
        &self.phi
    }

    /// `|K| |H|` with `|K| = |L|^p |K / L^p|`.
    pub fn group_order(&self) -> u128 {
        self.ctx.l.order().pow(self.p() as u32) * self.k().order() * self.h.order()
    }
}

#[derive(Serialize)]
struct WreathTupleJson {
    p: usize,
    h: Vec<String>,
    l: Vec<String>,
    n: u64,
    k: Vec<Vec<u64>>,
    phi: BTreeMap<String, Vec<u64>>,
}

impl Serialize for WreathTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WreathTupleJson {
            p: self.p(),
            h: self.h.generators().iter().map(|g| g.to_cycle_string()).collect(),
            l: self.l().generators().iter().map(|g| g.to_cycle_string()).collect(),
            n: self.ctx.n,
            k: self.k().rows().to_vec(),
            phi: self.phi.table.iter().map(|(h, v)| (h.to_one_line(), v.clone())).collect(),
        }
        .serialize(s)
    }
}

/// `(i, j) -> (h(i), v_{h(i)}(j))`.
fn pair_element(h: &Permutation, v: &[Permutation]) -> Permutation {
    let p = h.degree();
    Permutation::from_fn(p * p, |x| {
        let m = h.apply(x % p);
        m + v[m].apply(x / p) * p
    })
    .expect("pair element is a bijection")
}

/// `G_{H,L,K,phi} = {(h, v) : phi(h) = v K}`.
pub fn build_g(t: &WreathTuple) -> Result<PermGroup> {
    let p = t.p();
    let id = Permutation::identity(p);
    let ids = vec![id.clone(); p];
    let lift = |v: &[u64]| -> Vec<Permutation> { v.iter().map(|&k| t.ctx.power(k)).collect() };
    let mut gens = Vec::new();
    for l in t.l().generators() {
        for i in 0..p {
            let mut v = ids.clone();
            v[i] = l.clone();
            gens.push(pair_element(&id, &v));
        }
    }
    for row in t.k().rows() {
        gens.push(pair_element(&id, &lift(row)));
    }
    for s in t.h.generators() {
        let val = t.phi.value(s).ok_or_else(|| Error::Invalid("phi misses a generator".into()))?;
        gens.push(pair_element(s, &lift(val)));
    }
    let g = PermGroup::new(p * p, gens)?;
    if g.order() != t.group_order() {
        return Err(Error::Search(format!("built group has order {} instead of {}", g.order(), t.group_order())));
    }
    Ok(g)
}

/// A tuple for `G` together with the relabelling `alpha` such that
/// `build_g(tuple) = G.conjugate_by(alpha)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub tuple: WreathTuple,
    pub relabel: Permutation,
}

/// `(h, v)` of an element preserving the standard blocks.
fn split(g: &Permutation, p: usize) -> (Permutation, Vec<Permutation>) {
    let h = Permutation::from_fn(p, |i| g.apply(i) % p).expect("block action");
    let hinv = h.inverse();
    let v = (0..p)
        .map(|m| Permutation::from_fn(p, |j| g.apply(hinv.apply(m) + j * p) / p).expect("component"))
        .collect();
    (h, v)
}

/// Recovers `(H, L, K, phi)` from a transitive imprimitive `G` whose Sylow
/// `p`-subgroup has order `p^{p+1}`. `L` comes from the normal closure of a
/// `p`-element supported on one block.
pub fn decompose_g(g: &PermGroup) -> Result<Decomposition> {
    let p = degree_root(g.degree())?;
    let mut o = g.order();
    let mut pp = 1u128;
    while o.is_multiple_of(p as u128) {
        o /= p as u128;
        pp *= p as u128;
    }
    if !g.is_transitive() || pp != (p as u128).pow(p as u32 + 1) {
        return Err(Error::Invalid("Sylow subgroup is not Z_p wr Z_p".into()));
    }
    let standard = BlockSystem::standard(p);
    let bs = if g.preserves(&standard) {
        standard.clone()
    } else {
        g.block_systems_with(p)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invalid("no system of p blocks".into()))?
    };
    let mut blocks: Vec<Vec<usize>> = bs.blocks().to_vec();
    blocks.sort();
    let block_of = |x: usize| blocks.iter().position(|b| b.contains(&x)).unwrap();
    let mut trans: Vec<Option<Permutation>> = vec![None; p];
    trans[0] = Some(Permutation::identity(p * p));
    let mut queue = VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        let gb = trans[b].clone().unwrap();
        for s in g.generators() {
            let nb = block_of(s.apply(blocks[b][0]));
            if trans[nb].is_none() {
                trans[nb] = Some(gb.compose(s));
                queue.push_back(nb);
            }
        }
    }
    let mut label = vec![0usize; p * p];
    for (i, t) in trans.iter().enumerate() {
        let t = t.as_ref().ok_or_else(|| Error::Invalid("not transitive on blocks".into()))?;
        for (j, &q) in blocks[0].iter().enumerate() {
            label[t.apply(q)] = i + j * p;
        }
    }
    let alpha = Permutation::from_images(label)?;
    let gl = g.conjugate_by(&alpha);

    let kernel = gl.block_kernel(&standard)?;
    let outside: Vec<usize> = (0..p * p).filter(|x| x % p != 0).collect();
    let local = kernel.pointwise_stabilizer(&outside);
    let x = local
        .sylow(p as u128, None, 0)?
        .generators()
        .iter()
        .find(|s| !s.is_identity())
        .cloned()
        .ok_or_else(|| Error::Invalid("no p-element on a single block".into()))?;
    let lhat = gl.normal_closure(&[x]);
    let lgens: Vec<Permutation> = lhat
        .generators()
        .iter()
        .map(|s| Permutation::from_fn(p, |j| s.apply(j * p) / p))
        .collect::<std::result::Result<_, _>>()?;
    let ctx = LContext::new(PermGroup::new(p, lgens)?)?;
    let exps = |v: &[Permutation]| -> Result<Vec<u64>> { v.iter().map(|u| ctx.exponent(u)).collect() };

    let mut rows = Vec::new();
    for s in kernel.generators() {
        rows.push(exps(&split(s, p).1)?);
    }
    let module = QuotientModule::new(Submodule::new(ctx.n, p, &rows)?);
    let mut pairs = Vec::new();
    let mut hgens = Vec::new();
    for s in gl.generators() {
        let (h, v) = split(s, p);
        if !h.is_identity() {
            pairs.push((h.clone(), exps(&v)?));
            hgens.push(h);
        }
    }
    let h = PermGroup::new(p, hgens)?;
    let phi = CrossedHom::from_generators(module, &pairs).ok_or_else(|| Error::Search("inconsistent cocycle".into()))?;
    let tuple = WreathTuple::new(h, ctx.l.clone(), phi)?;
    Ok(Decomposition { tuple, relabel: alpha })
}

/// A block permutation `g` in `S_p` with `H_1^g = H_2`, `g.K_1 = K_2` and
/// `phi_1^g` cohomologous to `phi_2`; then `build_g(t1)` conjugated by
/// `(i, j) -> (g(i), j)` is `build_g(t2)`. Both tuples must share `L`.
pub fn equivalent_tuples(t1: &WreathTuple, t2: &WreathTuple) -> Result<Option<Permutation>> {
    let p = t1.p();
    if p > 7 {
        return Err(Error::Unsupported(format!("search over S_{p}")));
    }
    if t2.p() != p || !t1.l().same_group(t2.l()) {
        return Err(Error::Invalid("tuples must share L".into()));
    }
    if t1.h.order() != t2.h.order() || t1.k().order() != t2.k().order() {
        return Ok(None);
    }
    let m2 = t2.phi.module();
    for g in PermGroup::symmetric(p).elements(ELEMENT_LIMIT)? {
        if !t1.h.conjugate_by(&g).same_group(&t2.h) || t1.k().permute(&g) != *t2.k() {
            continue;
        }
        let table = t1
            .phi
            .table
            .iter()
            .map(|(h, v)| (h.conjugate(&g), permute_vector(v, &g)))
            .collect();
        let moved = CrossedHom::from_table(m2.clone(), table);
        if cohomologous(&moved, &t2.phi)?.is_some() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// `(i, j) -> (g(i), j)`.
pub fn block_permutation(g: &Permutation) -> Permutation {
    let p = g.degree();
    pair_element(g, &vec![Permutation::identity(p); p])
}

/// `G <= S_p x S_p` acting on `(a, b) = a + b p` as `H` on `a`, `K` the
/// elements trivial on `a`, and `f` on generators: `(sigma, tau)` pairs.
#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub h: PermGroup,
    pub k: PermGroup,
    pub f: Vec<(Permutation, Permutation)>,
}

impl ProductDecomposition {
    pub fn reconstruct(&self) -> Result<PermGroup> {
        let p = self.h.degree();
        let id = Permutation::identity(p);
        let gens = self
            .f
            .iter()
            .map(|(s, t)| product_element(s, t))
            .chain(self.k.generators().iter().map(|t| product_element(&id, t)))
            .collect();
        Ok(PermGroup::new(p * p, gens)?)
    }
}

/// `(a, b) -> (sigma(a), tau(b))`.
pub fn product_element(sigma: &Permutation, tau: &Permutation) -> Permutation {
    let p = sigma.degree();
    Permutation::from_fn(p * p, |x| sigma.apply(x % p) + tau.apply(x / p) * p).expect("product of bijections")
}

fn product_parts(g: &Permutation, p: usize) -> Option<(Permutation, Permutation)> {
    let sigma = Permutation::from_fn(p, |a| g.apply(a) % p).ok()?;
    let tau = Permutation::from_fn(p, |b| g.apply(b * p) / p).ok()?;
    (product_element(&sigma, &tau) == *g).then_some((sigma, tau))
}

pub fn product_decompose(g: &PermGroup) -> Result<ProductDecomposition> {
    let p = degree_root(g.degree())?;
    let parts: Vec<(Permutation, Permutation)> = g
        .generators()
        .iter()
        .map(|s| product_parts(s, p).ok_or_else(|| Error::Invalid("group is not contained in S_p x S_p".into())))
        .collect::<Result<_>>()?;
    let h = PermGroup::new(p, parts.iter().map(|(s, _)| s.clone()).collect())?;
    let kernel = g.block_kernel(&BlockSystem::standard(p))?;
    let kgens = kernel
        .generators()
        .iter()
        .map(|s| Permutation::from_fn(p, |b| s.apply(b * p) / p))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let k = PermGroup::new(p, kgens)?;
    Ok(ProductDecomposition { h, k, f: parts })
}

/// `<Hsub, z-vectors with coordinate sum zero>` for `Hsub <= S_p x AGL(1, p)`.
pub fn dual_overgroup(hsub: &PermGroup) -> Result<PermGroup> {
    let p = degree_root(hsub.degree())?;
    if p < 3 {
        return Err(Error::Invalid("p must be at least 3".into()));
    }
    for s in hsub.generators() {
        let (_, tau) = product_parts(s, p).ok_or_else(|| Error::Invalid("generator is not in S_p x S_p".into()))?;
        if affine_parts(&tau).is_none() {
            return Err(Error::Invalid("second component is not affine".into()));
        }
    }
    let code = Submodule::sum_zero(p as u64, p);
    let extra: Vec<Permutation> = code.rows().iter().map(|r| z_vector(p, r)).collect();
    Ok(hsub.with_generators(&extra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::{affine_map, recognize_p_subgroup, rho1, rho2, PFamily};

    fn z3() -> PermGroup {
        PermGroup::cyclic(3)
    }

    fn s3() -> PermGroup {
        PermGroup::symmetric(3)
    }

    fn module(n: u64, p: usize, rows: &[Vec<u64>]) -> QuotientModule {
        QuotientModule::new(Submodule::new(n, p, rows).unwrap())
    }

    #[test]
    fn validation_examples() {
        let m = QuotientModule::free(2, 3);
        let zero = CrossedHom::zero(m.clone(), &z3()).unwrap();
        assert!(validate_crossed_hom(&zero, &z3()).unwrap());
        let pr = CrossedHom::principal(m.clone(), &z3(), &[1, 0, 0]).unwrap();
        assert!(validate_crossed_hom(&pr, &z3()).unwrap());
        let a = cohomologous(&pr, &zero).unwrap().unwrap();
        assert_eq!(CrossedHom::principal(m.clone(), &z3(), &a).unwrap(), pr);
        assert_eq!(cohomologous(&pr, &pr).unwrap(), Some(vec![0, 0, 0]));
        let mut bad = zero.table.clone();
        let g = z3().generators()[0].clone();
        bad.insert(g, vec![1, 0, 0]);
        assert!(!validate_crossed_hom(&CrossedHom::from_table(m.clone(), bad), &z3()).unwrap());
        let mut partial = zero.table.clone();
        partial.pop_first();
        assert!(validate_crossed_hom(&CrossedHom::from_table(m, partial), &z3()).is_err());
    }

    #[test]
    fn coprime_cohomology_vanishes() {
        let m = QuotientModule::free(2, 3);
        let zs = enumerate_crossed_homs(&m, z3().generators(), 1 << 20).unwrap();
        let zero = CrossedHom::zero(m, &z3()).unwrap();
        for c in &zs {
            assert!(cohomologous(c, &zero).unwrap().is_some());
        }
    }

    #[test]
    fn build_examples() {
        let zero = CrossedHom::zero(QuotientModule::free(2, 3), &z3()).unwrap();
        let t = WreathTuple::new(z3(), z3(), zero).unwrap();
        let g = build_g(&t).unwrap();
        assert_eq!(g.order(), 81);
        assert_eq!(recognize_p_subgroup(&g).unwrap().family, PFamily::Wreath);

        let full = QuotientModule::new(Submodule::full(2, 3));
        let t = WreathTuple::new(s3(), z3(), CrossedHom::zero(full, &s3()).unwrap()).unwrap();
        assert_eq!(build_g(&t).unwrap().order(), 1296);

        let m = QuotientModule::free(2, 3);
        let pr = CrossedHom::principal(m, &z3(), &[1, 1, 0]).unwrap();
        assert!(!pr.is_zero());
        let t = WreathTuple::new(z3(), z3(), pr).unwrap();
        let g = build_g(&t).unwrap();
        assert_eq!(g.order(), 81);
        assert!(g.is_transitive() && !g.is_primitive());
    }

    #[test]
    fn decomposition_round_trips() {
        let m = module(2, 3, &[vec![1, 1, 1]]);
        for h in [z3(), s3()] {
            for phi in enumerate_crossed_homs(&m, h.generators(), 1 << 20).unwrap() {
                let t = WreathTuple::new(h.clone(), z3(), phi).unwrap();
                let g = build_g(&t).unwrap();
                let d = decompose_g(&g).unwrap();
                assert!(build_g(&d.tuple).unwrap().same_group(&g.conjugate_by(&d.relabel)));
                assert!(equivalent_tuples(&t, &d.tuple).unwrap().is_some());
            }
        }
    }

    #[test]
    fn decompose_standard_examples() {
        let zero = CrossedHom::zero(QuotientModule::free(2, 3), &z3()).unwrap();
        let t = WreathTuple::new(z3(), z3(), zero).unwrap();
        let d = decompose_g(&build_g(&t).unwrap()).unwrap();
        assert!(d.tuple.h().same_group(&z3()) && d.tuple.k().is_zero() && d.tuple.phi().is_zero());
        let full = QuotientModule::new(Submodule::full(2, 3));
        let t = WreathTuple::new(s3(), z3(), CrossedHom::zero(full, &s3()).unwrap()).unwrap();
        let d = decompose_g(&build_g(&t).unwrap()).unwrap();
        assert!(d.tuple.h().same_group(&s3()) && d.tuple.k().is_full() && d.tuple.phi().is_zero());
        assert!(decompose_g(&PermGroup::symmetric(9)).is_err());
    }

    #[test]
    fn equivalence_detects_conjugates() {
        let m = QuotientModule::free(2, 3);
        let pr = CrossedHom::principal(m, &z3(), &[1, 0, 0]).unwrap();
        let t1 = WreathTuple::new(z3(), z3(), pr).unwrap();
        assert_eq!(equivalent_tuples(&t1, &t1).unwrap(), Some(Permutation::identity(3)));
        let g0 = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g = build_g(&t1).unwrap().conjugate_by(&block_permutation(&g0));
        let t2 = decompose_g(&g).unwrap().tuple;
        let w = equivalent_tuples(&t1, &t2).unwrap().unwrap();
        let lhs = build_g(&t1).unwrap().conjugate_by(&block_permutation(&w));
        let rhs = build_g(&t2).unwrap();
        assert_eq!(lhs.order(), rhs.order());
        let other = WreathTuple::new(z3(), z3(), CrossedHom::zero(module(2, 3, &[vec![1, 1, 1]]), &z3()).unwrap()).unwrap();
        assert_eq!(equivalent_tuples(&t1, &other).unwrap(), None);
    }

    #[test]
    fn standard_cocycle_examples() {
        let agl15 = PermGroup::new(5, vec![Permutation::from_fn(5, |x| (x + 1) % 5).unwrap(), Permutation::from_fn(5, |x| 2 * x % 5).unwrap()]).unwrap();
        let m = QuotientModule::free(4, 5);
        let reps = standard_crossed_homs(&agl15, &m).unwrap();
        assert_eq!(reps.len(), 4);
        let mult = Permutation::from_fn(5, |x| 2 * x % 5).unwrap();
        assert!(reps.iter().any(|c| c.value(&mult) == Some(&vec![1; 5])));
        for c in &reps {
            assert!(validate_crossed_hom(c, &agl15).unwrap());
        }
        let s5 = PermGroup::symmetric(5);
        let reps = standard_crossed_homs(&s5, &QuotientModule::free(2, 5)).unwrap();
        assert_eq!(reps.len(), 2);
        let t = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        assert!(reps.iter().any(|c| c.value(&t) == Some(&vec![1; 5])));
        let a5 = PermGroup::alternating(5);
        let reps = standard_crossed_homs(&a5, &QuotientModule::free(3, 5)).unwrap();
        assert!(reps.len() == 1 && reps[0].is_zero());
    }

    #[test]
    fn affine_cover_at_three() {
        for h in [z3(), s3()] {
            for k in invariant_kernels(2, 3, h.generators()).unwrap() {
                let m = QuotientModule::new(k);
                let r = repetition_cover(&m, &h, h.generators(), 1 << 20).unwrap();
                assert!(r.covered, "{r:?}");
            }
        }
    }

    #[test]
    fn product_examples() {
        let p = 3;
        let z = PermGroup::new(9, vec![rho1(p), rho2(p)]).unwrap();
        let d = product_decompose(&z).unwrap();
        assert_eq!((d.h.order(), d.k.order()), (3, 3));
        assert!(d.reconstruct().unwrap().same_group(&z));
        let s = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let c = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let id = Permutation::identity(3);
        let ss = PermGroup::new(9, vec![product_element(&s, &id), product_element(&c, &id), product_element(&id, &s), product_element(&id, &c)]).unwrap();
        let d = product_decompose(&ss).unwrap();
        assert_eq!((d.h.order(), d.k.order()), (6, 6));
        assert!(d.reconstruct().unwrap().same_group(&ss));
        assert!(product_decompose(&PermGroup::new(9, vec![crate::pgroups::tau(3)]).unwrap()).is_err());

        let t5 = Permutation::from_fn(5, |x| (x + 1) % 5).unwrap();
        let m5 = Permutation::from_fn(5, |x| 2 * x % 5).unwrap();
        let id5 = Permutation::identity(5);
        let graph = PermGroup::new(25, vec![product_element(&t5, &t5)]).unwrap();
        let d = product_decompose(&graph).unwrap();
        assert_eq!((d.h.order(), d.k.order()), (5, 1));
        assert_eq!(d.f, vec![(t5.clone(), t5.clone())]);
        assert!(d.reconstruct().unwrap().same_group(&graph));
        let semi = PermGroup::new(25, vec![product_element(&t5, &t5), product_element(&id5, &m5)]).unwrap();
        let d = product_decompose(&semi).unwrap();
        assert_eq!((d.h.order(), d.k.order()), (5, 20));
        assert!(d.reconstruct().unwrap().same_group(&semi));
    }

    #[test]
    fn dual_overgroup_examples() {
        let p = 3;
        let small = PermGroup::new(9, vec![rho1(p), rho2(p)]).unwrap();
        let g = dual_overgroup(&small).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(recognize_p_subgroup(&g).unwrap().family, PFamily::Elementary(2));
        let s = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let c = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let id = Permutation::identity(3);
        let big = PermGroup::new(9, vec![product_element(&s, &id), product_element(&c, &id), product_element(&id, &s), product_element(&id, &c)]).unwrap();
        let g = dual_overgroup(&big).unwrap();
        assert_eq!(g.order(), 108);
        let bad = PermGroup::new(9, vec![affine_map(3, [[0, 1], [1, 0]], [0, 0]).unwrap()]).unwrap();
        assert!(dual_overgroup(&bad).is_err());
    }
}
