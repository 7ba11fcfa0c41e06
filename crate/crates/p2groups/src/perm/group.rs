use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::blocks::minimal_partition;
use super::chain::StabChain;
use super::{BlockSystem, PermError, Permutation};

/// A permutation group given by generators, with a lazily built
/// stabilizer chain.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain,
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("gens", &self.gens.iter().map(|g| g.to_cycle_string()).collect::<Vec<_>>())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(Self::from_gens_unchecked(degree, gens))
    }

    pub(crate) fn from_gens_unchecked(degree: usize, gens: Vec<Permutation>) -> Self {
        let mut gens: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let mut seen = HashSet::new();
        gens.retain(|g| seen.insert(g.clone()));
        PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_gens_unchecked(degree, Vec::new())
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
            gens.push(Permutation::from_cycles(n, &[(0..n).collect()]).unwrap());
        }
        Self::from_gens_unchecked(n, gens)
    }

    pub fn alternating(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 3 {
            gens.push(Permutation::from_cycles(n, &[vec![0, 1, 2]]).unwrap());
            let c = if n % 2 == 1 {
                (0..n).collect()
            } else {
                (1..n).collect()
            };
            gens.push(Permutation::from_cycles(n, &[c]).unwrap());
        }
        Self::from_gens_unchecked(n, gens)
    }

    /// `<x -> x + 1 mod n>`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_gens_unchecked(n, vec![Permutation::from_fn(n, |x| (x + 1) % n).unwrap()])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub(crate) fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.gens, &[]))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().base()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.chain()
            .levels
            .first()
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        Ok(self.chain().contains(g))
    }

    /// Membership for a permutation already known to have the right degree.
    pub fn has(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    /// All elements, listed through the stabilizer chain.
    pub fn elements(&self, limit: u128) -> Result<Vec<Permutation>, PermError> {
        let order = self.order();
        if order > limit {
            return Err(PermError::LimitExceeded { limit, order });
        }
        let mut out = Vec::with_capacity(order as usize);
        self.chain().for_each_element(&mut |g| {
            out.push(g.clone());
            true
        });
        Ok(out)
    }

    /// Visits elements until `f` returns false.
    pub fn for_each_element(&self, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        self.chain().for_each_element(f)
    }

    /// All elements by breadth-first closure under the generators.
    /// Independent of the stabilizer chain.
    pub fn closure_elements(&self, limit: usize) -> Result<Vec<Permutation>, PermError> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut k = 0;
        while k < out.len() {
            let x = out[k].clone();
            k += 1;
            for g in &self.gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    out.push(y);
                    if out.len() > limit {
                        return Err(PermError::LimitExceeded {
                            limit: limit as u128,
                            order: out.len() as u128,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut k = 0;
        while k < out.len() {
            let y = out[k];
            k += 1;
            for g in &self.gens {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orbits containing the given seed points, in seed order, deduplicated.
    pub fn orbits_of(&self, seeds: &[usize]) -> Vec<Vec<usize>> {
        let mut covered = vec![false; self.degree];
        let mut out = Vec::new();
        for &s in seeds {
            if covered[s] {
                continue;
            }
            let o = self.orbit(s);
            for &x in &o {
                covered[x] = true;
            }
            out.push(o);
        }
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let seeds: Vec<usize> = (0..self.degree).collect();
        self.orbits_of(&seeds)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// One orbit on ordered pairs of distinct points.
    pub fn is_doubly_transitive(&self) -> bool {
        let n = self.degree;
        if n < 2 {
            return false;
        }
        let mut seen = vec![false; n * n];
        seen[1] = true;
        let mut queue = vec![(0usize, 1usize)];
        let mut count = 1;
        while let Some((a, b)) = queue.pop() {
            for g in &self.gens {
                let (x, y) = (g.apply(a), g.apply(b));
                if !seen[x * n + y] {
                    seen[x * n + y] = true;
                    count += 1;
                    queue.push((x, y));
                }
            }
        }
        count == n * (n - 1)
    }

    /// Smallest block containing all of `seed`.
    pub fn minimal_block(&self, seed: &[usize]) -> Vec<usize> {
        let labels = minimal_partition(self.degree, &self.gens, seed);
        let l = labels[seed[0]];
        (0..self.degree).filter(|&x| labels[x] == l).collect()
    }

    /// Every nontrivial block system of a transitive group.
    pub fn block_systems(&self) -> Vec<BlockSystem> {
        let n = self.degree;
        if n < 2 || !self.is_transitive() {
            return Vec::new();
        }
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for x in 1..n {
            let b = self.minimal_block(&[0, x]);
            if b.len() < n && !found.contains(&b) {
                found.push(b.clone());
                queue.push_back(b);
            }
        }
        while let Some(b) = queue.pop_front() {
            let snapshot = found.clone();
            for c in snapshot {
                let mut seed: Vec<usize> = b.iter().chain(c.iter()).copied().collect();
                seed.sort_unstable();
                seed.dedup();
                let j = self.minimal_block(&seed);
                if j.len() < n && !found.contains(&j) {
                    found.push(j.clone());
                    queue.push_back(j);
                }
            }
        }
        let mut systems: Vec<BlockSystem> = found
            .into_iter()
            .map(|b| BlockSystem::from_labels(&minimal_partition(n, &self.gens, &b)))
            .collect();
        systems.sort_by(|a, b| a.blocks().cmp(b.blocks()));
        systems.dedup();
        systems
    }

    /// Block systems with `k` blocks.
    pub fn block_systems_with(&self, k: usize) -> Vec<BlockSystem> {
        self.block_systems()
            .into_iter()
            .filter(|b| b.num_blocks() == k)
            .collect()
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive() && self.block_systems().is_empty()
    }

    pub fn preserves(&self, bs: &BlockSystem) -> bool {
        self.gens.iter().all(|g| bs.is_preserved_by(g))
    }

    /// Induced action on the blocks of a preserved system.
    pub fn block_action(&self, bs: &BlockSystem) -> Result<PermGroup, PermError> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                bs.induced(g)
                    .ok_or_else(|| PermError::Search("block system not preserved".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::from_gens_unchecked(bs.num_blocks(), gens))
    }

    /// Kernel of the action on a preserved block system.
    ///
    /// Built from a chain of the action on points plus blocks with the block
    /// points placed first in the base.
    pub fn block_kernel(&self, bs: &BlockSystem) -> Result<PermGroup, PermError> {
        let n = self.degree;
        let m = bs.num_blocks();
        let mut ext = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let ind = bs
                .induced(g)
                .ok_or_else(|| PermError::Search("block system not preserved".into()))?;
            let mut img = g.as_slice().to_vec();
            img.extend(ind.as_slice().iter().map(|&b| b + n as u16));
            ext.push(Permutation::from_u16_unchecked(img));
        }
        let prefix: Vec<usize> = (n..n + m).collect();
        let chain = StabChain::build(n + m, &ext, &prefix);
        let gens = chain
            .levels
            .get(m)
            .map(|l| l.gens.iter().map(|g| g.restrict(n)).collect())
            .unwrap_or_default();
        Ok(PermGroup::from_gens_unchecked(n, gens))
    }

    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.gens, points);
        let gens = chain
            .levels
            .get(points.len())
            .map(|l| l.gens.clone())
            .unwrap_or_default();
        PermGroup::from_gens_unchecked(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.gens.iter().all(|g| other.has(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// True when every generator of `self` normalizes `h`.
    pub fn normalizes(&self, h: &PermGroup) -> bool {
        self.gens
            .iter()
            .all(|g| h.gens.iter().all(|x| h.has(&x.conjugate(g))))
    }

    pub fn element_normalizes(g: &Permutation, h: &PermGroup) -> bool {
        h.gens.iter().all(|x| h.has(&x.conjugate(g)))
    }

    pub fn is_normal_in(&self, g: &PermGroup) -> bool {
        g.normalizes(self)
    }

    /// `g^-1 H g`.
    pub fn conjugate_by(&self, g: &Permutation) -> PermGroup {
        PermGroup::from_gens_unchecked(self.degree, self.gens.iter().map(|x| x.conjugate(g)).collect())
    }

    pub fn with_generators(&self, extra: &[Permutation]) -> PermGroup {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        PermGroup::from_gens_unchecked(self.degree, gens)
    }

    /// Smallest subgroup of `self` normal in `self` and containing `gens`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> PermGroup {
        let mut n = PermGroup::from_gens_unchecked(self.degree, gens.to_vec());
        loop {
            let mut added = false;
            let current = n.gens.clone();
            for x in &current {
                for g in &self.gens {
                    let c = x.conjugate(g);
                    if !n.has(&c) {
                        n = n.with_generators(&[c]);
                        added = true;
                    }
                }
            }
            if !added {
                return n;
            }
        }
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_solvable(&self) -> bool {
        let mut g = self.clone();
        loop {
            if g.order() == 1 {
                return true;
            }
            let d = g.derived_subgroup();
            if d.order() == g.order() {
                return false;
            }
            g = d;
        }
    }

    /// Simplicity by normal closures of class representatives.
    /// Intended for small groups.
    pub fn is_simple(&self, limit: u128) -> Result<bool, PermError> {
        let order = self.order();
        if order == 1 {
            return Ok(false);
        }
        if self.is_abelian() {
            return Ok(is_prime_u128(order));
        }
        let elems = self.elements(limit)?;
        let mut done: HashSet<Permutation> = HashSet::new();
        for x in elems.iter().filter(|x| !x.is_identity()) {
            if done.contains(x) {
                continue;
            }
            for g in &elems {
                done.insert(x.conjugate(g));
            }
            if self.normal_closure(std::slice::from_ref(x)).order() != order {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Normalizer of `h` inside `self` by scanning every element of `self`.
    pub fn brute_normalizer(&self, h: &PermGroup, limit: u128) -> Result<PermGroup, PermError> {
        if h.degree != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: h.degree,
            });
        }
        let order = self.order();
        if order > limit {
            return Err(PermError::LimitExceeded { limit, order });
        }
        let mut found = PermGroup::trivial(self.degree);
        self.for_each_element(&mut |g| {
            if !found.has(g) && PermGroup::element_normalizes(g, h) {
                found = found.with_generators(std::slice::from_ref(g));
            }
            true
        });
        Ok(found)
    }

    pub fn is_p_group(&self, p: u128) -> bool {
        let mut o = self.order();
        while o.is_multiple_of(p) {
            o /= p;
        }
        o == 1
    }

    /// A Sylow `p`-subgroup containing the `p`-subgroup `start`.
    pub fn sylow(&self, p: u128, start: Option<&PermGroup>, seed: u64) -> Result<PermGroup, PermError> {
        let order = self.order();
        let mut target = 1u128;
        let mut o = order;
        while o.is_multiple_of(p) {
            o /= p;
            target *= p;
        }
        let mut cur = start
            .cloned()
            .unwrap_or_else(|| PermGroup::trivial(self.degree));
        if !cur.is_p_group(p) || !cur.is_subgroup_of(self) {
            return Err(PermError::Search("start is not a p-subgroup".into()));
        }
        let is_p_elt = |g: &Permutation| {
            let mut o = g.order();
            while o.is_multiple_of(p) {
                o /= p;
            }
            o == 1
        };
        if order <= 2_000_000 {
            while cur.order() < target {
                let mut next = None;
                self.for_each_element(&mut |g| {
                    if is_p_elt(g) && !cur.has(g) && PermGroup::element_normalizes(g, &cur) {
                        next = Some(g.clone());
                        return false;
                    }
                    true
                });
                match next {
                    Some(g) => cur = cur.with_generators(&[g]),
                    None => return Err(PermError::Search("Sylow growth stalled".into())),
                }
            }
            return Ok(cur);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tries = 0usize;
        while cur.order() < target {
            tries += 1;
            if tries > 2_000_000 {
                return Err(PermError::Search("random Sylow search exhausted".into()));
            }
            let g = self.random_element(&mut rng);
            let mut m = g.order();
            while m.is_multiple_of(p) {
                m /= p;
            }
            let x = g.pow(m as i64);
            if x.is_identity() || cur.has(&x) {
                continue;
            }
            if PermGroup::element_normalizes(&x, &cur) {
                cur = cur.with_generators(&[x]);
                continue;
            }
            let cand = cur.with_generators(&[x]);
            if cand.is_p_group(p) {
                cur = cand;
            }
        }
        Ok(cur)
    }

    /// A stabilizer chain whose base begins with `prefix`.
    pub fn base_with_prefix(&self, prefix: &[usize]) -> Vec<usize> {
        StabChain::build(self.degree, &self.gens, prefix).base()
    }
}

pub(crate) fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl serde::Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PermGroup", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("order", &self.order().to_string())?;
        st.serialize_field("generators", &self.gens)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(p: usize) -> Permutation {
        Permutation::from_fn(p * p, |x| (x + 1) % (p * p)).unwrap()
    }

    #[test]
    fn symmetric_orders() {
        assert_eq!(PermGroup::symmetric(9).order(), 362_880);
        assert_eq!(PermGroup::symmetric(25).order(), (1..=25u128).product());
        assert_eq!(PermGroup::alternating(8).order(), 20160);
        assert_eq!(PermGroup::alternating(7).order(), 2520);
    }

    #[test]
    fn chain_matches_closure() {
        let g = PermGroup::new(
            9,
            vec![
                tau(3),
                Permutation::parse_cycles("(0 1)(3 4)", 9).unwrap(),
            ],
        )
        .unwrap();
        let els = g.closure_elements(1_000_000).unwrap();
        assert_eq!(els.len() as u128, g.order());
        assert!(els.iter().all(|x| g.has(x)));
    }

    #[test]
    fn block_systems_at_nine() {
        let t = PermGroup::new(9, vec![tau(3)]).unwrap();
        assert_eq!(t.block_systems().len(), 1);
        let r = PermGroup::new(
            9,
            vec![
                Permutation::from_fn(9, |x| (x % 3 + 1) % 3 + (x / 3) * 3).unwrap(),
                Permutation::from_fn(9, |x| (x + 3) % 9).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(r.block_systems().len(), 4);
        assert!(PermGroup::symmetric(9).block_systems().is_empty());
        assert!(PermGroup::symmetric(9).is_doubly_transitive());
        assert!(!t.is_doubly_transitive());
    }

    #[test]
    fn brute_normalizer_of_tau() {
        let t = PermGroup::new(9, vec![tau(3)]).unwrap();
        let n = PermGroup::symmetric(9).brute_normalizer(&t, 1_000_000).unwrap();
        assert_eq!(n.order(), 54);
    }

    #[test]
    fn kernel_of_block_action() {
        let s = PermGroup::symmetric(3);
        // S_3 wr S_3 on 9 points with blocks = residues mod 3
        let g = PermGroup::new(
            9,
            vec![
                Permutation::from_fn(9, |x| if x % 3 == 0 { (x + 3) % 9 } else { x }).unwrap(),
                Permutation::from_fn(9, |x| match x { 0 => 3, 3 => 0, _ => x }).unwrap(),
                Permutation::from_fn(9, |x| (x / 3) * 3 + (x % 3 + 1) % 3).unwrap(),
                Permutation::from_fn(9, |x| (x / 3) * 3 + [1, 0, 2][x % 3]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(g.order(), 1296);
        let bs = BlockSystem::standard(3);
        let k = g.block_kernel(&bs).unwrap();
        assert_eq!(k.order(), 216);
        assert_eq!(g.block_action(&bs).unwrap().order(), 6);
    }

    #[test]
    fn sylow_of_s9() {
        let s = PermGroup::symmetric(9).sylow(3, None, 1).unwrap();
        assert_eq!(s.order(), 81);
    }

    #[test]
    fn degree_mismatch_is_error() {
        let g = PermGroup::symmetric(4);
        assert!(g.contains(&Permutation::identity(5)).is_err());
    }
}
