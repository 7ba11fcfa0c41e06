//! Cayley digraphs of `Z_{p^2}` and `Z_p x Z_p`: automorphism groups,
//! orbital digraphs and 2-closures, normality, the classification of
//! 2-closed overgroups of the regular representation, and isomorphism
//! testing through normalizers of Sylow subgroups.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::ring::{is_prime, primitive_root};
use crate::digraph::{automorphism_group, brute_automorphism_group, brute_isomorphism, ColoredDigraph};
use crate::error::{require_prime, Error, Result};
use crate::normalizers::{scalar_map, ScalarKind};
use crate::perm::{BlockSystem, PermGroup, Permutation};
use crate::pgroups::{affine_map, gamma, recognize_p_subgroup, rho1, rho2, tau, PFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// `Z_{p^2}`, with `x` the point `x`.
    Cyclic,
    /// `Z_p x Z_p`, with `(a, b)` the point `a + b p`.
    Elementary,
}

impl GroupKind {
    pub fn add(self, p: usize, x: usize, y: usize) -> usize {
        match self {
            GroupKind::Cyclic => (x + y) % (p * p),
            GroupKind::Elementary => (x % p + y % p) % p + ((x / p + y / p) % p) * p,
        }
    }

    pub fn neg(self, p: usize, x: usize) -> usize {
        match self {
            GroupKind::Cyclic => (p * p - x) % (p * p),
            GroupKind::Elementary => (p - x % p) % p + ((p - x / p) % p) * p,
        }
    }

    /// Generators of the left regular representation.
    pub fn regular_generators(self, p: usize) -> Vec<Permutation> {
        match self {
            GroupKind::Cyclic => vec![tau(p)],
            GroupKind::Elementary => vec![rho1(p), rho2(p)],
        }
    }

    pub fn regular_group(self, p: usize) -> PermGroup {
        PermGroup::new(p * p, self.regular_generators(p)).expect("regular group")
    }

    /// Subgroups of order `p`, each listed as its elements.
    pub fn order_p_subgroups(self, p: usize) -> Vec<Vec<usize>> {
        let gens: Vec<usize> = match self {
            GroupKind::Cyclic => vec![p],
            GroupKind::Elementary => std::iter::once(1).chain((0..p).map(|k| k + p)).collect(),
        };
        gens.into_iter()
            .map(|g| {
                let mut h: Vec<usize> = (0..p).scan(0, |acc, _| {
                    let cur = *acc;
                    *acc = self.add(p, cur, g);
                    Some(cur)
                })
                .collect();
                h.sort_unstable();
                h
            })
            .collect()
    }
}

/// `Cay(G, S)` with arcs `x -> x + s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CayleyDigraph {
    p: usize,
    kind: GroupKind,
    connection: Vec<usize>,
}

impl CayleyDigraph {
    pub fn new(p: usize, kind: GroupKind, s: &[usize]) -> Result<Self> {
        require_prime(p)?;
        let n = p * p;
        if let Some(&x) = s.iter().find(|&&x| x == 0 || x >= n) {
            return Err(Error::Invalid(format!("{x} is not a nonzero element of a group of order {n}")));
        }
        let connection: Vec<usize> = s.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(CayleyDigraph { p, kind, connection })
    }

    /// The connection set encoded as a bit mask over `1..p^2`.
    pub fn from_mask(p: usize, kind: GroupKind, mask: u64) -> Result<Self> {
        let s: Vec<usize> = (1..p * p).filter(|x| mask >> (x - 1) & 1 == 1).collect();
        Self::new(p, kind, &s)
    }

    pub fn p(&self) -> usize {
        self.p
    }
    pub fn kind(&self) -> GroupKind {
        self.kind
    }
    pub fn connection_set(&self) -> &[usize] {
        &self.connection
    }
    pub fn order(&self) -> usize {
        self.p * self.p
    }

    pub fn complement(&self) -> CayleyDigraph {
        let s: Vec<usize> = (1..self.order()).filter(|x| !self.connection.contains(x)).collect();
        CayleyDigraph {
            p: self.p,
            kind: self.kind,
            connection: s,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.connection.len() + 1 == self.order()
    }

    pub fn digraph(&self) -> ColoredDigraph {
        let n = self.order();
        ColoredDigraph::from_arcs(
            n,
            (0..n).flat_map(|x| self.connection.iter().map(move |&s| (x, self.kind.add(self.p, x, s)))),
        )
    }

    /// Automorphism group by partition backtracking.
    pub fn automorphisms(&self) -> PermGroup {
        automorphism_group(&self.digraph())
    }

    /// Automorphism group by exhaustive search over all vertex maps, for
    /// cross-checking at small orders.
    pub fn exhaustive_automorphisms(&self) -> Result<PermGroup> {
        if self.order() > 9 {
            return Err(Error::Unsupported("exhaustive scan beyond 9 vertices".into()));
        }
        let (g, count) = brute_automorphism_group(&self.digraph());
        if g.order() != count {
            return Err(Error::Search("exhaustive scan is inconsistent".into()));
        }
        Ok(g)
    }
}

/// The regular representation of the underlying group is normal in `aut`.
pub fn is_normal_in(kind: GroupKind, p: usize, aut: &PermGroup) -> bool {
    kind.regular_group(p).is_normal_in(aut)
}

pub fn is_normal_cayley(g: &CayleyDigraph) -> bool {
    is_normal_in(g.kind, g.p, &g.automorphisms())
}

/// Orbits of `G` on off-diagonal ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitalSet {
    pub degree: usize,
    pub orbitals: Vec<Vec<(usize, usize)>>,
}

impl OrbitalSet {
    pub fn digraphs(&self) -> Vec<ColoredDigraph> {
        self.orbitals
            .iter()
            .map(|o| ColoredDigraph::from_arcs(self.degree, o.iter().copied()))
            .collect()
    }
}

pub fn orbital_digraphs(g: &PermGroup) -> Result<OrbitalSet> {
    if !g.is_transitive() {
        return Err(Error::Invalid("group is not transitive".into()));
    }
    let n = g.degree();
    let mut label = vec![usize::MAX; n * n];
    let mut orbitals = Vec::new();
    for start in 0..n * n {
        if label[start] != usize::MAX || start / n == start % n {
            continue;
        }
        let id = orbitals.len();
        label[start] = id;
        let mut orb = vec![start];
        let mut i = 0;
        while i < orb.len() {
            let (u, v) = (orb[i] / n, orb[i] % n);
            i += 1;
            for s in g.generators() {
                let w = s.apply(u) * n + s.apply(v);
                if label[w] == usize::MAX {
                    label[w] = id;
                    orb.push(w);
                }
            }
        }
        orb.sort_unstable();
        orbitals.push(orb.into_iter().map(|x| (x / n, x % n)).collect());
    }
    Ok(OrbitalSet { degree: n, orbitals })
}

/// `cl(G)`: the common automorphisms of all orbital digraphs, computed as
/// the automorphism group of the digraph whose arcs carry orbital labels.
pub fn two_closure(g: &PermGroup) -> Result<PermGroup> {
    let orbs = orbital_digraphs(g)?;
    let mut d = ColoredDigraph::new(g.degree());
    for (i, o) in orbs.orbitals.iter().enumerate() {
        for &(u, v) in o {
            d.set_arc(u, v, i as u32 + 1);
        }
    }
    Ok(automorphism_group(&d))
}

fn p_part(order: u128, p: usize) -> u128 {
    let mut o = order;
    let mut t = 1;
    while o.is_multiple_of(p as u128) {
        o /= p as u128;
        t *= p as u128;
    }
    t
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A case of the classification of 2-closed groups containing a regular
/// group of order `p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum TwoClosedCase {
    /// `S_{p^2}`.
    DoublyTransitive,
    /// Simply primitive and solvable, inside `AGL(2, p)`.
    AffinePrimitive,
    /// Simply primitive and nonsolvable: inside `AGL(2, p)` or `S_p wr S_2`
    /// in product action.
    PrimitiveNonsolvable { in_agl: bool },
    /// Imprimitive, solvable, Sylow of order `p^2`: inside `AGL(1, p)^2`.
    ImprimitiveSolvable,
    /// Imprimitive, nonsolvable, Sylow of order `p^2`: `S_p x S_p` or `S_p x A`.
    ImprimitiveNonsolvable { factor_orders: (u128, u128) },
    /// `G_1 wr G_2`, with `G_1` permuting blocks and `G_2` inside each block.
    Wreath { outer_order: u128, inner_order: u128 },
    /// Inside the normalizer of the regular cyclic group.
    NormalizesCyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoClosedClassification {
    pub kind: GroupKind,
    pub label: String,
    pub case: TwoClosedCase,
    /// The structural claim of the case was verified on `G`.
    pub certified: bool,
}

/// `(outer, inner)` when `G` is the wreath product over the blocks `bs`.
fn wreath_factors(g: &PermGroup, bs: &BlockSystem) -> Result<Option<(PermGroup, PermGroup)>> {
    let outer = g.block_action(bs)?;
    let kernel = g.block_kernel(bs)?;
    let block = &bs.blocks()[bs.block_of(0)];
    let restrict = |grp: &PermGroup| -> Result<PermGroup> {
        let gens = grp
            .generators()
            .iter()
            .map(|s| Permutation::from_fn(block.len(), |k| block.iter().position(|&y| y == s.apply(block[k])).unwrap()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(PermGroup::new(block.len(), gens)?)
    };
    let inner = restrict(&kernel)?;
    let stab = g.pointwise_stabilizer(&[]);
    let setwise = setwise_block_stabilizer(&stab, bs, bs.block_of(0))?;
    let local = restrict(&setwise)?;
    let ok = local.order() == inner.order()
        && g.order() == outer.order() * inner.order().pow(bs.num_blocks() as u32);
    Ok(ok.then_some((outer, inner)))
}

fn setwise_block_stabilizer(g: &PermGroup, bs: &BlockSystem, b: usize) -> Result<PermGroup> {
    let action = g.block_action(bs)?;
    let kernel = g.block_kernel(bs)?;
    let n = bs.num_blocks();
    // Schreier generators of the stabilizer of block `b` in the block action.
    let mut trans: Vec<Option<Permutation>> = vec![None; n];
    trans[b] = Some(Permutation::identity(g.degree()));
    let mut queue = vec![b];
    while let Some(x) = queue.pop() {
        for (s, sb) in g.generators().iter().zip(action.generators()) {
            let y = sb.apply(x);
            if trans[y].is_none() {
                trans[y] = Some(trans[x].as_ref().unwrap().compose(s));
                queue.push(y);
            }
        }
    }
    let mut gens: Vec<Permutation> = kernel.generators().to_vec();
    for x in 0..n {
        let Some(tx) = trans[x].clone() else { continue };
        for (s, sb) in g.generators().iter().zip(action.generators()) {
            let y = sb.apply(x);
            let ty = trans[y].as_ref().unwrap();
            gens.push(tx.compose(s).compose(&ty.inverse()));
        }
    }
    Ok(PermGroup::new(g.degree(), gens)?)
}

/// Two transverse systems of `p` blocks whose induced actions are `A`, `B`
/// with `G <= A x B`.
fn product_factors(g: &PermGroup, p: usize) -> Result<Vec<(PermGroup, PermGroup)>> {
    let systems = g.block_systems_with(p);
    let mut out = Vec::new();
    for (i, b1) in systems.iter().enumerate() {
        for b2 in &systems[i + 1..] {
            if b1.is_transverse_to(b2) {
                out.push((g.block_action(b1)?, g.block_action(b2)?));
            }
        }
    }
    Ok(out)
}

/// Classifies a 2-closed `G` containing the regular representation of the
/// group of the given kind.
pub fn classify_2closed(g: &PermGroup, kind: GroupKind) -> Result<TwoClosedClassification> {
    let n = g.degree();
    let p = (n as f64).sqrt().round() as usize;
    if p * p != n || !is_prime(p as u64) {
        return Err(Error::Invalid(format!("degree {n} is not the square of a prime")));
    }
    if !kind.regular_group(p).is_subgroup_of(g) {
        return Err(Error::Invalid("group does not contain the regular representation".into()));
    }
    let thm = match kind {
        GroupKind::Elementary => 14,
        GroupKind::Cyclic => 15,
    };
    let label = |c: u32| format!("{thm}({c})");
    if g.is_doubly_transitive() {
        return Ok(TwoClosedClassification {
            kind,
            label: label(1),
            case: TwoClosedCase::DoublyTransitive,
            certified: g.order() == factorial(n),
        });
    }
    let normalizes_regular = kind.regular_group(p).is_normal_in(g);
    if g.is_primitive() {
        if kind == GroupKind::Cyclic {
            return Err(Error::Search("simply primitive group containing a regular cyclic group".into()));
        }
        if g.is_solvable() {
            return Ok(TwoClosedClassification {
                kind,
                label: label(2),
                case: TwoClosedCase::AffinePrimitive,
                certified: normalizes_regular,
            });
        }
        let product = 2 * factorial(p).pow(2);
        return Ok(TwoClosedClassification {
            kind,
            label: label(3),
            case: TwoClosedCase::PrimitiveNonsolvable { in_agl: normalizes_regular },
            certified: normalizes_regular || g.order() == product,
        });
    }
    if p_part(g.order(), p) >= (p as u128).pow(3) {
        for bs in g.block_systems_with(p) {
            if let Some((outer, inner)) = wreath_factors(g, &bs)? {
                return Ok(TwoClosedClassification {
                    kind,
                    label: label(if thm == 14 { 6 } else { 3 }),
                    case: TwoClosedCase::Wreath {
                        outer_order: outer.order(),
                        inner_order: inner.order(),
                    },
                    certified: true,
                });
            }
        }
        return Ok(TwoClosedClassification {
            kind,
            label: label(if thm == 14 { 6 } else { 3 }),
            case: TwoClosedCase::Wreath {
                outer_order: 0,
                inner_order: 0,
            },
            certified: false,
        });
    }
    if kind == GroupKind::Cyclic {
        return Ok(TwoClosedClassification {
            kind,
            label: label(2),
            case: TwoClosedCase::NormalizesCyclic,
            certified: normalizes_regular,
        });
    }
    let pairs = product_factors(g, p)?;
    if g.is_solvable() {
        let certified = pairs
            .iter()
            .any(|(a, b)| a.is_solvable() && b.is_solvable() && g.order() <= a.order() * b.order());
        return Ok(TwoClosedClassification {
            kind,
            label: label(4),
            case: TwoClosedCase::ImprimitiveSolvable,
            certified,
        });
    }
    let sp = factorial(p);
    let found = pairs.iter().find(|(a, b)| {
        g.order() == a.order() * b.order() && (a.order() == sp || b.order() == sp)
    });
    Ok(TwoClosedClassification {
        kind,
        label: label(5),
        case: TwoClosedCase::ImprimitiveNonsolvable {
            factor_orders: found.map(|(a, b)| (a.order(), b.order())).unwrap_or((0, 0)),
        },
        certified: found.is_some(),
    })
}

/// Membership of a Cayley digraph in the list of nonnormal ones, decided
/// from the connection set alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonnormalCase {
    Normal,
    /// Complete (or, at `p = 2`, also empty) on `Z_4`, or complete for `p >= 3`.
    Complete,
    /// A lexicographic product of two Cayley digraphs of `Z_p`.
    Wreath,
    /// Two order-`p` subgroups minus zero, or the complement, for `p >= 5`.
    TwoLines,
    /// The coset conditions relative to a subgroup `H` and a complement, `p >= 5`.
    CosetConditions,
}

impl NonnormalCase {
    pub fn number(self) -> u32 {
        match self {
            NonnormalCase::Normal => 0,
            NonnormalCase::Complete => 1,
            NonnormalCase::Wreath => 2,
            NonnormalCase::TwoLines => 3,
            NonnormalCase::CosetConditions => 4,
        }
    }
}

fn coset(kind: GroupKind, p: usize, x: usize, h: &[usize]) -> BTreeSet<usize> {
    h.iter().map(|&y| kind.add(p, x, y)).collect()
}

/// Whether `S` meets every coset of `H` other than `H` in nothing or everything.
pub fn is_wreath_decomposable(g: &CayleyDigraph, h: &[usize]) -> bool {
    let s: BTreeSet<usize> = g.connection.iter().copied().collect();
    (0..g.order())
        .filter(|x| !h.contains(x))
        .all(|x| {
            let c = coset(g.kind, g.p, x, h);
            let k = c.intersection(&s).count();
            k == 0 || k == c.len()
        })
}

pub fn nonnormal_case(g: &CayleyDigraph) -> NonnormalCase {
    let p = g.p;
    let s: BTreeSet<usize> = g.connection.iter().copied().collect();
    let cyclic4 = p == 2 && g.kind == GroupKind::Cyclic;
    if (p >= 3 || cyclic4) && g.is_complete() {
        return NonnormalCase::Complete;
    }
    if cyclic4 && s.is_empty() {
        return NonnormalCase::Complete;
    }
    if p >= 3 && g.kind.order_p_subgroups(p).iter().any(|h| is_wreath_decomposable(g, h)) {
        return NonnormalCase::Wreath;
    }
    if p >= 5 && g.kind == GroupKind::Elementary {
        let lines = g.kind.order_p_subgroups(p);
        let comp: BTreeSet<usize> = (1..g.order()).filter(|x| !s.contains(x)).collect();
        for (i, l1) in lines.iter().enumerate() {
            for l2 in &lines[i + 1..] {
                let u: BTreeSet<usize> = l1.iter().chain(l2).copied().filter(|&x| x != 0).collect();
                if u == s || u == comp {
                    return NonnormalCase::TwoLines;
                }
            }
        }
        for h in &lines {
            let hs: BTreeSet<usize> = h.iter().copied().filter(|&x| x != 0).collect();
            let meet = hs.intersection(&s).count();
            if meet != 0 && meet != hs.len() {
                continue;
            }
            for c in lines.iter().filter(|c| *c != h) {
                let ok = c.iter().filter(|&&x| x != 0).all(|&x| {
                    let cs = coset(g.kind, p, x, h);
                    let inter: BTreeSet<usize> = cs.intersection(&s).copied().collect();
                    let minus: BTreeSet<usize> = cs.iter().copied().filter(|&y| y != x).collect();
                    inter.is_empty() || inter == cs || inter == BTreeSet::from([x]) || inter == minus
                });
                if ok {
                    return NonnormalCase::CosetConditions;
                }
            }
        }
    }
    NonnormalCase::Normal
}

/// The predicate's view of normality.
pub fn corollary3_predicate(g: &CayleyDigraph) -> NonnormalCase {
    nonnormal_case(g)
}

/// An object on `0..n` whose isomorphisms are vertex permutations.
pub trait CayleyObject: Clone + PartialEq {
    fn degree(&self) -> usize;
    fn image(&self, g: &Permutation) -> Self;
    fn automorphism_group(&self) -> PermGroup;
    /// Exhaustive isomorphism search.
    fn brute_isomorphism(&self, other: &Self) -> Option<Permutation>;
}

impl CayleyObject for ColoredDigraph {
    fn degree(&self) -> usize {
        self.order()
    }
    fn image(&self, g: &Permutation) -> Self {
        ColoredDigraph::image(self, g)
    }
    fn automorphism_group(&self) -> PermGroup {
        automorphism_group(self)
    }
    fn brute_isomorphism(&self, other: &Self) -> Option<Permutation> {
        brute_isomorphism(self, other)
    }
}

/// A hypergraph with edges stored as sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hypergraph {
    n: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let edges = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        Hypergraph { n, edges }
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    /// Points, then edges, with an arc from each point to the edges on it.
    fn incidence(&self) -> ColoredDigraph {
        let m = self.edges.len();
        let mut d = ColoredDigraph::new(self.n + m);
        for (k, e) in self.edges.iter().enumerate() {
            d.set_vertex_color(self.n + k, 1);
            for &x in e {
                d.set_arc(x, self.n + k, 1);
            }
        }
        d
    }
}

impl CayleyObject for Hypergraph {
    fn degree(&self) -> usize {
        self.n
    }
    fn image(&self, g: &Permutation) -> Self {
        Hypergraph::new(self.n, self.edges.iter().map(|e| e.iter().map(|&x| g.apply(x)).collect()))
    }
    fn automorphism_group(&self) -> PermGroup {
        let full = automorphism_group(&self.incidence());
        let gens = full.generators().iter().map(|s| s.restrict(self.n)).collect();
        PermGroup::new(self.n, gens).expect("restricted automorphisms")
    }
    fn brute_isomorphism(&self, other: &Self) -> Option<Permutation> {
        if self.n != other.n || self.edges.len() != other.edges.len() {
            return None;
        }
        let n = self.n;
        // Edges whose largest vertex is `k`, checked once `0..=k` is mapped.
        let mut closing: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n];
        for e in &self.edges {
            if let Some(&last) = e.last() {
                closing[last].push(e);
            }
        }
        fn rec(k: usize, n: usize, img: &mut Vec<usize>, used: &mut Vec<bool>, closing: &[Vec<&Vec<usize>>], target: &BTreeSet<Vec<usize>>) -> bool {
            if k == n {
                return true;
            }
            for v in 0..n {
                if used[v] {
                    continue;
                }
                img[k] = v;
                let ok = closing[k].iter().all(|e| {
                    let mut f: Vec<usize> = e.iter().map(|&x| img[x]).collect();
                    f.sort_unstable();
                    target.contains(&f)
                });
                if ok {
                    used[v] = true;
                    if rec(k + 1, n, img, used, closing, target) {
                        return true;
                    }
                    used[v] = false;
                }
            }
            false
        }
        let mut img = vec![0; n];
        let mut used = vec![false; n];
        rec(0, n, &mut img, &mut used, &closing, &other.edges).then(|| Permutation::from_images(img).expect("bijection"))
    }
}

/// The Cayley hypergraph of `Z_{p^2}` or `Z_p^2` generated by translating base edges.
pub fn cayley_hypergraph(p: usize, kind: GroupKind, base: &[Vec<usize>]) -> Hypergraph {
    let n = p * p;
    Hypergraph::new(
        n,
        (0..n).flat_map(|x| base.iter().map(move |e| e.iter().map(|&y| kind.add(p, x, y)).collect())),
    )
}

/// Coset representatives of the standard Sylow subgroup of the given family
/// in its normalizer, in the explicit form used for isomorphism testing.
pub fn normalizer_coset_representatives(p: usize, family: PFamily) -> Result<Vec<Permutation>> {
    require_prime(p)?;
    let b = primitive_root(p as u64).unwrap_or(1);
    let mut out = Vec::new();
    match family {
        PFamily::Cyclic(i) if i < p => {
            let hat = scalar_map(p, ScalarKind::Hat, b)?;
            let g = gamma(p, i + 1);
            for j in 1..p {
                for k in 1..=p {
                    out.push(hat.pow(j as i64).compose(&g.pow(k as i64)));
                }
            }
        }
        PFamily::Elementary(1) => {
            for a in 0..p as u64 {
                for bb in 0..p as u64 {
                    for c in 0..p as u64 {
                        for d in 0..p as u64 {
                            if !(a * d + p as u64 * p as u64 - (bb * c) % p as u64).is_multiple_of(p as u64) {
                                out.push(affine_map(p, [[a, bb], [c, d]], [0, 0])?);
                            }
                        }
                    }
                }
            }
        }
        PFamily::Elementary(i) if i < p => {
            let bar = scalar_map(p, ScalarKind::Bar, b)?;
            let tilde = scalar_map(p, ScalarKind::Tilde, b)?;
            let g = gamma(p, i + 1);
            for j in 1..p {
                for k in 1..p {
                    for l in 1..=p {
                        out.push(bar.pow(j as i64).compose(&tilde.pow(k as i64)).compose(&g.pow(l as i64)));
                    }
                }
            }
        }
        _ => {
            let bar = scalar_map(p, ScalarKind::Bar, b)?;
            let tilde = scalar_map(p, ScalarKind::Tilde, b)?;
            for j in 1..p {
                for k in 1..p {
                    out.push(bar.pow(j as i64).compose(&tilde.pow(k as i64)));
                }
            }
        }
    }
    Ok(out)
}

/// The family of the Sylow `p`-subgroup of `Aut(x)` and a conjugator `c`
/// such that the Sylow subgroup of `Aut(x^c)` is the standard copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFrame {
    pub family: PFamily,
    pub conjugator: Permutation,
}

pub fn standard_frame<X: CayleyObject>(x: &X) -> Result<StandardFrame> {
    let n = x.degree();
    let p = (n as f64).sqrt().round() as usize;
    if p * p != n {
        return Err(Error::Invalid(format!("degree {n} is not a prime square")));
    }
    require_prime(p)?;
    let syl = x.automorphism_group().sylow(p as u128, None, 0)?;
    let kind = recognize_p_subgroup(&syl)?;
    Ok(StandardFrame {
        family: kind.family,
        conjugator: kind.conjugator,
    })
}

/// Decides isomorphism of `x` and `y` by trying only normalizer coset
/// representatives of a shared Sylow family. Returns `Err` when the Sylow
/// subgroups of the two automorphism groups are not of the given family.
pub fn iso_by_normalizer<X: CayleyObject>(x: &X, y: &X, family: PFamily) -> Result<Option<Permutation>> {
    if y.degree() != x.degree() {
        return Err(Error::Invalid("objects must have the same degree".into()));
    }
    iso_in_frames(x, &standard_frame(x)?, y, &standard_frame(y)?, family)
}

/// `iso_by_normalizer` with precomputed frames.
pub fn iso_in_frames<X: CayleyObject>(x: &X, fx: &StandardFrame, y: &X, fy: &StandardFrame, family: PFamily) -> Result<Option<Permutation>> {
    if fx.family != family || fy.family != family {
        return Err(Error::Invalid(format!("Sylow subgroups are {} and {}, not {family}", fx.family, fy.family)));
    }
    let p = (x.degree() as f64).sqrt().round() as usize;
    let xs = x.image(&fx.conjugator);
    let ys = y.image(&fy.conjugator);
    for w in normalizer_coset_representatives(p, family)? {
        if xs.image(&w) == ys {
            return Ok(Some(fx.conjugator.compose(&w).compose(&fy.conjugator.inverse())));
        }
    }
    Ok(None)
}

/// `Gamma_1[Gamma_2]`: vertices `(a, b) = a + b p`; arcs between distinct
/// blocks `a != a'` follow `Gamma_1`, arcs inside a block follow `Gamma_2`.
pub fn wreath_digraph(outer: &ColoredDigraph, inner: &ColoredDigraph) -> Result<ColoredDigraph> {
    let p = outer.order();
    if inner.order() != p {
        return Err(Error::Invalid("factors must have the same order".into()));
    }
    let mut d = ColoredDigraph::new(p * p);
    for x in 0..p * p {
        for y in 0..p * p {
            let (a, b, a2, b2) = (x % p, x / p, y % p, y / p);
            let c = if a != a2 { outer.arc(a, a2) } else { inner.arc(b, b2) };
            d.set_arc(x, y, c);
        }
    }
    Ok(d)
}

/// `A wr B` acting on `(a, b)`: `A` on `a`, a copy of `B` on `b` for each `a`.
pub fn wreath_group(outer: &PermGroup, inner: &PermGroup) -> Result<PermGroup> {
    let p = outer.degree();
    let mut gens = Vec::new();
    for h in outer.generators() {
        gens.push(Permutation::from_fn(p * p, |x| h.apply(x % p) + (x / p) * p)?);
    }
    for g in inner.generators() {
        gens.push(Permutation::from_fn(p * p, |x| if x % p == 0 { g.apply(x / p) * p } else { x })?);
    }
    Ok(PermGroup::new(p * p, gens)?)
}

/// One catalog line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogRecord {
    pub p: usize,
    pub group_kind: GroupKind,
    pub connection_set: Vec<usize>,
    pub aut_order: u128,
    pub normal: bool,
    pub closed_case: String,
    pub certified: bool,
    pub predicate: u32,
    pub method: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutMethod {
    /// Partition backtracking.
    Refinement,
    /// Exhaustive scan of all vertex maps (degree 9 only).
    Exhaustive,
}

pub fn catalog_record(g: &CayleyDigraph, method: AutMethod) -> Result<CatalogRecord> {
    let aut = match method {
        AutMethod::Refinement => g.automorphisms(),
        AutMethod::Exhaustive => g.exhaustive_automorphisms()?,
    };
    let cls = classify_2closed(&aut, g.kind)?;
    Ok(CatalogRecord {
        p: g.p,
        group_kind: g.kind,
        connection_set: g.connection.clone(),
        aut_order: aut.order(),
        normal: is_normal_in(g.kind, g.p, &aut),
        closed_case: cls.label,
        certified: cls.certified,
        predicate: nonnormal_case(g).number(),
        method: match method {
            AutMethod::Refinement => "refinement".into(),
            AutMethod::Exhaustive => "exhaustive".into(),
        },
    })
}

/// Every connection set when `p <= 3`, otherwise `sample` seeded random
/// sets; records sorted by connection set.
pub fn catalog(p: usize, kind: GroupKind, method: AutMethod, sample: Option<(usize, u64)>) -> Result<Vec<CatalogRecord>> {
    require_prime(p)?;
    let bits = p * p - 1;
    let masks: Vec<u64> = match sample {
        None if bits <= 20 => (0..1u64 << bits).collect(),
        None => return Err(Error::Unsupported(format!("exhaustive catalog over 2^{bits} sets"))),
        Some((count, seed)) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut set = BTreeSet::new();
            while set.len() < count.min(1 << bits.min(62)) {
                set.insert(rng.gen::<u64>() & ((1u64 << bits) - 1));
            }
            set.into_iter().collect()
        }
    };
    let mut records = masks
        .par_iter()
        .map(|&m| catalog_record(&CayleyDigraph::from_mask(p, kind, m)?, method))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.connection_set.cmp(&b.connection_set));
    Ok(records)
}

pub fn write_jsonl<W: Write>(records: &[CatalogRecord], mut w: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Invalid(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| Error::Invalid(e.to_string()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cay(p: usize, kind: GroupKind, s: &[usize]) -> CayleyDigraph {
        CayleyDigraph::new(p, kind, s).unwrap()
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(cay(3, GroupKind::Cyclic, &[]).automorphisms().order(), 362_880);
        assert_eq!(cay(3, GroupKind::Cyclic, &[1]).automorphisms().order(), 9);
        let axes = cay(3, GroupKind::Elementary, &[1, 2, 3, 6]);
        assert_eq!(axes.automorphisms().order(), 72);
        assert_eq!(axes.exhaustive_automorphisms().unwrap().order(), 72);
        assert!(CayleyDigraph::new(3, GroupKind::Cyclic, &[0]).is_err());
    }

    #[test]
    fn orbital_examples() {
        assert_eq!(orbital_digraphs(&PermGroup::symmetric(9)).unwrap().orbitals.len(), 1);
        let z9 = GroupKind::Cyclic.regular_group(3);
        assert_eq!(orbital_digraphs(&z9).unwrap().orbitals.len(), 8);
        assert!(two_closure(&z9).unwrap().same_group(&z9));
        assert_eq!(two_closure(&PermGroup::symmetric(9)).unwrap().order(), 362_880);
        let w = crate::pgroups::build_p(3, 3, crate::pgroups::Family::Cyclic).unwrap();
        let stab_orbits = w.pointwise_stabilizer(&[0]).orbits().len();
        assert_eq!(orbital_digraphs(&w).unwrap().orbitals.len(), stab_orbits - 1);
        let cl = two_closure(&w).unwrap();
        assert!(cl.same_group(&w));
        assert!(two_closure(&cl).unwrap().same_group(&cl));
        assert!(orbital_digraphs(&PermGroup::new(9, vec![Permutation::from_cycles(9, &[vec![0, 1]]).unwrap()]).unwrap()).is_err());
    }

    #[test]
    fn normality_examples() {
        assert!(is_normal_cayley(&cay(3, GroupKind::Cyclic, &[1])));
        assert!(!is_normal_cayley(&cay(3, GroupKind::Cyclic, &(1..9).collect::<Vec<_>>())));
        assert!(!is_normal_cayley(&cay(2, GroupKind::Cyclic, &[1, 2, 3])));
        assert!(is_normal_cayley(&cay(2, GroupKind::Elementary, &[1, 2, 3])));
    }

    #[test]
    fn classification_examples() {
        let s9 = PermGroup::symmetric(9);
        assert_eq!(classify_2closed(&s9, GroupKind::Cyclic).unwrap().label, "15(1)");
        let w = crate::pgroups::build_p(3, 3, crate::pgroups::Family::Cyclic).unwrap();
        let c = classify_2closed(&w, GroupKind::Elementary).unwrap();
        assert_eq!(c.label, "14(6)");
        assert_eq!(c.case, TwoClosedCase::Wreath { outer_order: 3, inner_order: 3 });
        let z = GroupKind::Elementary.regular_group(3);
        let c = classify_2closed(&z, GroupKind::Elementary).unwrap();
        assert_eq!((c.label.as_str(), c.certified), ("14(4)", true));
    }

    #[test]
    fn predicate_examples() {
        let all: Vec<usize> = (1..25).collect();
        assert_eq!(nonnormal_case(&cay(5, GroupKind::Elementary, &all)), NonnormalCase::Complete);
        assert_eq!(nonnormal_case(&cay(3, GroupKind::Elementary, &[3])), NonnormalCase::Wreath);
        let axes: Vec<usize> = (1..5).chain((1..5).map(|j| 5 * j)).collect();
        assert_eq!(nonnormal_case(&cay(5, GroupKind::Elementary, &axes)), NonnormalCase::TwoLines);
        assert_eq!(nonnormal_case(&cay(3, GroupKind::Cyclic, &[1])), NonnormalCase::Normal);
        assert_eq!(nonnormal_case(&cay(2, GroupKind::Cyclic, &[1, 2, 3])), NonnormalCase::Complete);
        assert_eq!(nonnormal_case(&cay(2, GroupKind::Elementary, &[1, 2, 3])), NonnormalCase::Normal);
    }

    #[test]
    fn coset_representatives_cover_normalizers() {
        use crate::normalizers::{normalizer_p, normalizer_p_prime};
        for p in [3usize, 5] {
            let cases: Vec<(PFamily, PermGroup, PermGroup)> = (1..p)
                .map(|i| (PFamily::Cyclic(i), crate::pgroups::build_p(p, i, crate::pgroups::Family::Cyclic).unwrap(), normalizer_p(p, i).unwrap()))
                .chain((1..p).map(|i| (PFamily::Elementary(i), crate::pgroups::build_p(p, i, crate::pgroups::Family::Elementary).unwrap(), normalizer_p_prime(p, i).unwrap())))
                .chain(std::iter::once((PFamily::Wreath, crate::pgroups::build_p(p, p, crate::pgroups::Family::Cyclic).unwrap(), normalizer_p(p, p).unwrap())))
                .collect();
            for (fam, pg, ng) in cases {
                let reps = normalizer_coset_representatives(p, fam).unwrap();
                assert_eq!(reps.len() as u128, ng.order() / pg.order(), "{fam} p={p}");
                for (a, r) in reps.iter().enumerate() {
                    assert!(ng.has(r));
                    for s in &reps[..a] {
                        assert!(!pg.has(&s.compose(&r.inverse())), "{fam} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn wreath_law_small() {
        let g1 = cay(3, GroupKind::Cyclic, &[1]).digraph();
        let c3 = ColoredDigraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let e3 = ColoredDigraph::from_arcs(3, [(0, 1), (1, 0)]);
        let w = wreath_digraph(&c3, &e3).unwrap();
        let aut = automorphism_group(&w);
        let expected = wreath_group(&automorphism_group(&c3), &automorphism_group(&e3)).unwrap();
        assert!(aut.same_group(&expected));
        assert_eq!(g1.order(), 9);
    }

    #[test]
    fn catalog_at_two() {
        let recs = catalog(2, GroupKind::Cyclic, AutMethod::Refinement, None).unwrap();
        assert_eq!(recs.len(), 8);
        for r in &recs {
            assert_eq!(r.normal, r.predicate == 0, "{r:?}");
        }
    }

    /// `Z_5^2` and `Z_25` connection sets, mostly built from a line `H` and a
    /// second line `C`, compared against the computed automorphism group.
    #[test]
    fn predicate_matches_aut_at_p5() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut seen = BTreeSet::new();
        for kind in [GroupKind::Cyclic, GroupKind::Elementary] {
            let lines = kind.order_p_subgroups(5);
            for round in 0..160 {
                let h = &lines[rng.gen_range(0..lines.len())];
                let c = &lines[rng.gen_range(0..lines.len())];
                let mut s = BTreeSet::new();
                if rng.gen() {
                    s.extend(h.iter().copied());
                }
                for &x in c.iter().filter(|&&x| x != 0) {
                    let cs = coset(kind, 5, x, h);
                    match rng.gen_range(0..4) {
                        0 => {}
                        1 => s.extend(cs),
                        2 => {
                            s.insert(x);
                        }
                        _ => s.extend(cs.into_iter().filter(|&y| y != x)),
                    }
                }
                if round >= 120 {
                    s = (1..25).filter(|_| rng.gen()).collect();
                }
                s.remove(&0);
                let g = CayleyDigraph::new(5, kind, &s.into_iter().collect::<Vec<_>>()).unwrap();
                let case = nonnormal_case(&g);
                assert_eq!(is_normal_cayley(&g), case == NonnormalCase::Normal, "{:?}", g.connection_set());
                seen.insert(case.number());
            }
            if kind == GroupKind::Elementary {
                let two: Vec<usize> = lines[0].iter().chain(&lines[1]).copied().filter(|&x| x != 0).collect();
                for g in [CayleyDigraph::new(5, kind, &two).unwrap(), CayleyDigraph::new(5, kind, &two).unwrap().complement()] {
                    assert_eq!(nonnormal_case(&g), NonnormalCase::TwoLines);
                    assert!(!is_normal_cayley(&g));
                }
            }
        }
        assert!(seen.is_superset(&BTreeSet::from([0, 2, 4])), "{seen:?}");
    }
}
