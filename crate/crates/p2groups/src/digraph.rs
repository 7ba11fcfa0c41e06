//! Automorphisms and isomorphisms of vertex- and arc-colored digraphs by
//! individualization and refinement.

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// A digraph on `0..n` whose arcs carry nonzero colors (0 means no arc).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredDigraph {
    n: usize,
    vertex_color: Vec<u32>,
    arc: Vec<u32>,
}

impl ColoredDigraph {
    pub fn new(n: usize) -> Self {
        ColoredDigraph {
            n,
            vertex_color: vec![0; n],
            arc: vec![0; n * n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in arcs {
            g.set_arc(u, v, 1);
        }
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn set_arc(&mut self, u: usize, v: usize, color: u32) {
        self.arc[u * self.n + v] = color;
    }

    pub fn arc(&self, u: usize, v: usize) -> u32 {
        self.arc[u * self.n + v]
    }

    pub fn set_vertex_color(&mut self, v: usize, color: u32) {
        self.vertex_color[v] = color;
    }

    pub fn vertex_color(&self, v: usize) -> u32 {
        self.vertex_color[v]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| (0..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.arc(u, v) != 0)
            .collect()
    }

    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        self.is_isomorphism(g, self)
    }

    /// Whether `g` maps `self` onto `other`, colors included.
    pub fn is_isomorphism(&self, g: &Permutation, other: &ColoredDigraph) -> bool {
        if g.degree() != self.n || other.n != self.n {
            return false;
        }
        let img = g.as_slice();
        (0..self.n).all(|u| self.vertex_color[u] == other.vertex_color[img[u] as usize])
            && (0..self.n).all(|u| {
                let iu = img[u] as usize;
                (0..self.n).all(|v| self.arc(u, v) == other.arc(iu, img[v] as usize))
            })
    }

    /// `g(self)`.
    pub fn image(&self, g: &Permutation) -> ColoredDigraph {
        let mut out = ColoredDigraph::new(self.n);
        for u in 0..self.n {
            out.vertex_color[g.apply(u)] = self.vertex_color[u];
            for v in 0..self.n {
                out.set_arc(g.apply(u), g.apply(v), self.arc(u, v));
            }
        }
        out
    }
}

type Partition = Vec<Vec<usize>>;

fn initial_partition(g: &ColoredDigraph) -> Partition {
    let mut colors: Vec<u32> = g.vertex_color.clone();
    colors.sort_unstable();
    colors.dedup();
    colors
        .iter()
        .map(|&c| (0..g.n).filter(|&v| g.vertex_color[v] == c).collect())
        .collect()
}

/// Splits cells by arc counts into every cell until stable. Cells split in
/// signature order, so the result commutes with relabeling.
fn refine(g: &ColoredDigraph, mut part: Partition) -> Partition {
    let n = g.n;
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, c) in part.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        let mut next: Partition = Vec::with_capacity(part.len());
        let mut changed = false;
        for c in &part {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, u32, u32, u32)>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, u32, u32)> = (0..n)
                        .filter(|&w| w != v)
                        .map(|w| (cell_of[w], g.arc(v, w), g.arc(w, v)))
                        .filter(|&(_, a, b)| a != 0 || b != 0)
                        .collect();
                    s.push((usize::MAX, g.arc(v, v), 0));
                    s.sort_unstable();
                    let mut counted: Vec<(usize, u32, u32, u32)> = Vec::new();
                    for t in s {
                        match counted.last_mut() {
                            Some(last) if (last.0, last.1, last.2) == t => last.3 += 1,
                            _ => counted.push((t.0, t.1, t.2, 1)),
                        }
                    }
                    (counted, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for k in 1..=sigs.len() {
                if k == sigs.len() || sigs[k].0 != sigs[start].0 {
                    next.push(sigs[start..k].iter().map(|s| s.1).collect());
                    start = k;
                }
            }
            if !next.is_empty() && sigs.len() != next.last().unwrap().len() {
                changed = true;
            }
        }
        for c in next.iter_mut() {
            c.sort_unstable();
        }
        part = next;
        if !changed {
            return part;
        }
    }
}

fn individualize(g: &ColoredDigraph, part: &Partition, cell: usize, v: usize) -> Partition {
    let mut out = Vec::with_capacity(part.len() + 1);
    for (ci, c) in part.iter().enumerate() {
        if ci == cell {
            out.push(vec![v]);
            out.push(c.iter().copied().filter(|&w| w != v).collect());
        } else {
            out.push(c.clone());
        }
    }
    refine(g, out)
}

fn shape(part: &Partition) -> Vec<usize> {
    part.iter().map(|c| c.len()).collect()
}

fn target_cell(part: &Partition) -> Option<usize> {
    part.iter().position(|c| c.len() > 1)
}

fn leaf_order(part: &Partition) -> Vec<usize> {
    part.iter().map(|c| c[0]).collect()
}

struct Searcher<'a> {
    from: &'a ColoredDigraph,
    to: &'a ColoredDigraph,
    /// Cell shapes along the reference path, by depth.
    shapes: Vec<Vec<usize>>,
    reference: Vec<usize>,
}

impl Searcher<'_> {
    /// Any leaf below `part` (on `to`) giving an isomorphism from the
    /// reference leaf (on `from`).
    fn find(&self, part: Partition, depth: usize) -> Option<Permutation> {
        if shape(&part) != self.shapes[depth] {
            return None;
        }
        match target_cell(&part) {
            None => {
                let leaf = leaf_order(&part);
                let mut img = vec![0usize; self.from.n];
                for (i, &u) in self.reference.iter().enumerate() {
                    img[u] = leaf[i];
                }
                let g = Permutation::from_images(img).ok()?;
                self.from.is_isomorphism(&g, self.to).then_some(g)
            }
            Some(ci) => {
                for &v in &part[ci] {
                    let child = individualize(self.to, &part, ci, v);
                    if let Some(g) = self.find(child, depth + 1) {
                        return Some(g);
                    }
                }
                None
            }
        }
    }
}

fn first_path(g: &ColoredDigraph) -> (Vec<Partition>, Vec<(usize, usize)>) {
    let mut nodes = vec![refine(g, initial_partition(g))];
    let mut choices = Vec::new();
    while let Some(ci) = target_cell(nodes.last().unwrap()) {
        let part = nodes.last().unwrap();
        let v = part[ci][0];
        choices.push((ci, v));
        let child = individualize(g, part, ci, v);
        nodes.push(child);
    }
    (nodes, choices)
}

fn orbit_of(gens: &[Permutation], x: usize, n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    seen
}

/// Generators of the automorphism group.
pub fn automorphism_generators(g: &ColoredDigraph) -> Vec<Permutation> {
    let n = g.n;
    if n <= 1 {
        return Vec::new();
    }
    let (nodes, choices) = first_path(g);
    let searcher = Searcher {
        from: g,
        to: g,
        shapes: nodes.iter().map(shape).collect(),
        reference: leaf_order(nodes.last().unwrap()),
    };
    let mut gens: Vec<Permutation> = Vec::new();
    for k in (0..choices.len()).rev() {
        let (ci, b) = choices[k];
        let cell = nodes[k][ci].clone();
        loop {
            let orb = orbit_of(&gens, b, n);
            let mut tried_any = false;
            let mut found = None;
            let mut done = vec![false; n];
            for &v in &cell {
                if orb[v] || done[v] {
                    continue;
                }
                for (w, d) in orbit_of(&gens, v, n).into_iter().enumerate() {
                    if d {
                        done[w] = true;
                    }
                }
                tried_any = true;
                let child = individualize(g, &nodes[k], ci, v);
                if let Some(a) = searcher.find(child, k + 1) {
                    found = Some(a);
                    break;
                }
            }
            match found {
                Some(a) => gens.push(a),
                None => break,
            }
            if !tried_any {
                break;
            }
        }
    }
    gens
}

pub fn automorphism_group(g: &ColoredDigraph) -> PermGroup {
    let gens = automorphism_generators(g);
    PermGroup::new(g.n, gens).unwrap_or_else(|_| PermGroup::trivial(g.n))
}

/// An isomorphism from `x` onto `y`, if any.
pub fn find_isomorphism(x: &ColoredDigraph, y: &ColoredDigraph) -> Option<Permutation> {
    if x.n != y.n {
        return None;
    }
    let (nodes, _) = first_path(x);
    let searcher = Searcher {
        from: x,
        to: y,
        shapes: nodes.iter().map(shape).collect(),
        reference: leaf_order(nodes.last().unwrap()),
    };
    searcher.find(refine(y, initial_partition(y)), 0)
}

/// Every automorphism, by depth-first search over partial maps with arc
/// checks on assigned vertices. Exponential; meant as an oracle.
pub fn brute_automorphisms(g: &ColoredDigraph, limit: usize) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    brute_maps(g, g, &mut |p| {
        out.push(p);
        out.len() <= limit
    });
    if out.len() > limit {
        return Err(Error::Unsupported(format!("more than {limit} automorphisms")));
    }
    Ok(out)
}

/// The automorphism group assembled from an exhaustive scan, together with
/// the number of automorphisms visited. An oracle for small orders.
pub fn brute_automorphism_group(g: &ColoredDigraph) -> (PermGroup, u128) {
    let mut group = PermGroup::trivial(g.n);
    let mut count = 0u128;
    brute_maps(g, g, &mut |p| {
        count += 1;
        if !group.has(&p) {
            group = group.with_generators(std::slice::from_ref(&p));
        }
        true
    });
    (group, count)
}

/// An isomorphism by exhaustive search with prefix pruning.
pub fn brute_isomorphism(x: &ColoredDigraph, y: &ColoredDigraph) -> Option<Permutation> {
    let mut found = None;
    if x.n == y.n {
        brute_maps(x, y, &mut |p| {
            found = Some(p);
            false
        });
    }
    found
}

fn brute_maps(x: &ColoredDigraph, y: &ColoredDigraph, visit: &mut dyn FnMut(Permutation) -> bool) {
    let n = x.n;
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        x: &ColoredDigraph,
        y: &ColoredDigraph,
        k: usize,
        img: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(Permutation) -> bool,
    ) -> bool {
        let n = x.n;
        if k == n {
            return visit(Permutation::from_images(img.clone()).unwrap());
        }
        for t in 0..n {
            if used[t] || x.vertex_color[k] != y.vertex_color[t] {
                continue;
            }
            if x.arc(k, k) != y.arc(t, t) {
                continue;
            }
            let ok = (0..k).all(|u| x.arc(u, k) == y.arc(img[u], t) && x.arc(k, u) == y.arc(t, img[u]));
            if !ok {
                continue;
            }
            img[k] = t;
            used[t] = true;
            let cont = rec(x, y, k + 1, img, used, visit);
            used[t] = false;
            img[k] = usize::MAX;
            if !cont {
                return false;
            }
        }
        true
    }
    rec(x, y, 0, &mut img, &mut used, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circulant(n: usize, s: &[usize]) -> ColoredDigraph {
        ColoredDigraph::from_arcs(n, (0..n).flat_map(|u| s.iter().map(move |&d| (u, (u + d) % n))))
    }

    #[test]
    fn small_examples() {
        assert_eq!(automorphism_group(&ColoredDigraph::new(9)).order(), 362880);
        assert_eq!(automorphism_group(&circulant(9, &[1])).order(), 9);
        assert_eq!(automorphism_group(&circulant(9, &[1, 8])).order(), 18);
        assert_eq!(automorphism_group(&circulant(9, &[3, 6])).order(), 6 * 6 * 6 * 6);
        let petersen_like = ColoredDigraph::new(25);
        assert_eq!(automorphism_group(&petersen_like).order(), (1..=25u128).product());
    }

    #[test]
    fn matches_exhaustive_on_random_digraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut g = ColoredDigraph::new(9);
            let density = rng.gen_range(0.05..0.6);
            for u in 0..9 {
                for v in 0..9 {
                    if u != v && rng.gen_bool(density) {
                        g.set_arc(u, v, 1);
                    }
                }
            }
            let all = brute_automorphisms(&g, 400_000).unwrap();
            let grp = automorphism_group(&g);
            assert_eq!(grp.order(), all.len() as u128);
            assert!(all.iter().all(|a| grp.has(a)));
        }
    }

    #[test]
    fn isomorphism_found_and_refuted() {
        let x = circulant(9, &[1, 3]);
        let perm = Permutation::from_fn(9, |i| (i * 2 + 5) % 9).unwrap();
        let y = x.image(&perm);
        let iso = find_isomorphism(&x, &y).unwrap();
        assert!(x.is_isomorphism(&iso, &y));
        assert!(brute_isomorphism(&x, &y).is_some());
        let z = circulant(9, &[1, 2]);
        assert!(find_isomorphism(&x, &z).is_none());
        assert!(brute_isomorphism(&x, &z).is_none());
    }
}
