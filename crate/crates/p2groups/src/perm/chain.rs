//! Deterministic Schreier-Sims.

use rand::Rng;

use super::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub point: usize,
    /// Strong generators fixing every earlier base point.
    pub gens: Vec<Permutation>,
    pub orbit: Vec<usize>,
    /// `trans[b] = (u, u^-1)` with `u` mapping `point` to `b`.
    pub trans: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut l = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            trans: Vec::new(),
        };
        l.recompute(degree);
        l
    }

    fn recompute(&mut self, degree: usize) {
        let mut trans: Vec<Option<(Permutation, Permutation)>> = vec![None; degree];
        let id = Permutation::identity(degree);
        trans[self.point] = Some((id.clone(), id));
        let mut orbit = vec![self.point];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for s in &self.gens {
                let y = s.apply(x);
                if trans[y].is_none() {
                    let u = trans[x].as_ref().unwrap().0.compose(s);
                    let ui = u.inverse();
                    trans[y] = Some((u, ui));
                    orbit.push(y);
                }
            }
        }
        self.orbit = orbit;
        self.trans = trans;
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Permutation], prefix: &[usize]) -> StabChain {
        let mut gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(first_moved(g));
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for (i, lvl) in levels.iter_mut().enumerate() {
            lvl.gens = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            lvl.recompute(degree);
        }
        let mut chain = StabChain { degree, levels };
        let mut i = chain.levels.len();
        while i >= 1 {
            let lvl = i - 1;
            match chain.check_level(lvl) {
                Some(j) => i = j + 1,
                None => i -= 1,
            }
        }
        chain
    }

    /// Sifts Schreier generators at `lvl`; on failure extends the chain and
    /// returns the deepest level touched.
    fn check_level(&mut self, lvl: usize) -> Option<usize> {
        let orbit = self.levels[lvl].orbit.clone();
        let gens = self.levels[lvl].gens.clone();
        for &b in &orbit {
            for s in &gens {
                let ub = &self.levels[lvl].trans[b].as_ref().unwrap().0;
                let bs = s.apply(b);
                let ubs_inv = &self.levels[lvl].trans[bs].as_ref().unwrap().1;
                let ubs_s = ub.compose(s);
                let h = ubs_s.compose(ubs_inv);
                if h.is_identity() {
                    continue;
                }
                let (y, j) = self.strip(h, lvl + 1);
                if j < self.levels.len() || !y.is_identity() {
                    if j == self.levels.len() {
                        let pt = first_moved(&y);
                        self.levels.push(Level::new(pt, self.degree));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(y.clone());
                        self.levels[l].recompute(self.degree);
                    }
                    return Some(j);
                }
            }
        }
        None
    }

    /// Returns the residue and the level where sifting stopped
    /// (`levels.len()` if it passed every level).
    pub fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let b = g.apply(self.levels[l].point);
            match &self.levels[l].trans[b] {
                None => return (g, l),
                Some((_, ui)) => g = g.compose(ui),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (r, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && r.is_identity()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for l in self.levels.iter().rev() {
            let b = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = g.compose(&l.trans[b].as_ref().unwrap().0);
        }
        g
    }

    /// Visits every element once; stops early when `f` returns false.
    /// Returns false if stopped.
    pub fn for_each_element(&self, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        fn rec(
            chain: &StabChain,
            l: usize,
            acc: &Permutation,
            f: &mut dyn FnMut(&Permutation) -> bool,
        ) -> bool {
            if l == usize::MAX {
                return f(acc);
            }
            let lvl = &chain.levels[l];
            for &b in &lvl.orbit {
                let next = acc.compose(&lvl.trans[b].as_ref().unwrap().0);
                if !rec(chain, l.wrapping_sub(1), &next, f) {
                    return false;
                }
            }
            true
        }
        let id = Permutation::identity(self.degree);
        if self.levels.is_empty() {
            return f(&id);
        }
        rec(self, self.levels.len() - 1, &id, f)
    }
}

fn first_moved(g: &Permutation) -> usize {
    (0..g.degree()).find(|&x| g.apply(x) != x).expect("identity has no moved point")
}
