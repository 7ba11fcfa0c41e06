use serde::Serialize;

use crate::codes::ring::{is_prime, primitive_root, Gf};
use crate::digraph::{automorphism_group, ColoredDigraph};
use crate::error::{require_prime, Error, Result};
use crate::linear::ProjectiveSpace;
use crate::perm::{PermGroup, Permutation};

/// A transitive group of prime degree, relabeled to contain `i -> i + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreePGroup {
    /// Every catalog name under which this group arose.
    pub names: Vec<String>,
    pub group: PermGroup,
}

fn parse_one_based(n: usize, cycles: &[&[usize]]) -> Permutation {
    let cs: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
    Permutation::from_cycles(n, &cs).unwrap()
}

pub fn mathieu_11() -> PermGroup {
    let a = parse_one_based(11, &[&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]]);
    let b = parse_one_based(11, &[&[3, 7, 11, 8], &[4, 10, 5, 6]]);
    PermGroup::new(11, vec![a, b]).unwrap()
}

pub fn mathieu_23() -> PermGroup {
    let a = parse_one_based(23, &[&(1..=23).collect::<Vec<_>>()]);
    let b = parse_one_based(
        23,
        &[
            &[3, 17, 10, 7, 9],
            &[4, 13, 14, 19, 5],
            &[8, 18, 11, 12, 23],
            &[15, 20, 22, 21, 16],
        ],
    );
    PermGroup::new(23, vec![a, b]).unwrap()
}

/// `PSL(2, 11)` in its action on the 11 points of the biplane with
/// difference set `{1, 3, 4, 5, 9}` mod 11.
pub fn psl_2_11_on_11() -> PermGroup {
    let d = [1usize, 3, 4, 5, 9];
    let mut g = ColoredDigraph::new(22);
    for b in 0..11 {
        g.set_vertex_color(11 + b, 1);
        for &x in &d {
            g.set_arc((x + b) % 11, 11 + b, 1);
        }
    }
    let full = automorphism_group(&g);
    let gens = full.generators().iter().map(|h| h.restrict(11)).collect();
    PermGroup::new(11, gens).unwrap()
}

/// Conjugates `g` so that it contains `i -> i + 1`, using the first
/// `n`-cycle met in its stabilizer-chain enumeration.
pub fn relabel_to_shift(g: &PermGroup) -> Result<PermGroup> {
    let n = g.degree();
    if g.generators().iter().any(|h| h.cycle_type() == vec![n]) {
        return Ok(relabel_with(g, &g.generators().iter().find(|h| h.cycle_type() == vec![n]).unwrap().clone()));
    }
    let mut cyc = None;
    g.for_each_element(&mut |h| {
        if h.cycle_type() == vec![n] {
            cyc = Some(h.clone());
            return false;
        }
        true
    });
    let c = cyc.ok_or_else(|| Error::Search("group has no full cycle".into()))?;
    Ok(relabel_with(g, &c))
}

fn relabel_with(g: &PermGroup, c: &Permutation) -> PermGroup {
    let n = g.degree();
    let mut img = vec![0usize; n];
    let mut x = 0;
    for (k, _) in (0..n).enumerate() {
        img[x] = k;
        x = c.apply(x);
    }
    g.conjugate_by(&Permutation::from_images(img).unwrap())
}

/// Transitive subgroups of `S_p` containing the shift, one per group, with
/// all names that produce it.
pub fn degree_p_catalog(p: usize) -> Result<Vec<DegreePGroup>> {
    require_prime(p)?;
    if p > 23 {
        return Err(Error::Unsupported(format!("catalog limited to p <= 23, got {p}")));
    }
    let shift = Permutation::from_fn(p, |i| (i + 1) % p).unwrap();
    let mut entries: Vec<(String, PermGroup)> = Vec::new();
    let g = primitive_root(p as u64).unwrap_or(1);
    for d in (1..p).filter(|d| (p - 1).is_multiple_of(*d)) {
        let mut a = 1u64;
        for _ in 0..(p - 1) / d {
            a = a * g % p as u64;
        }
        let m = Permutation::from_fn(p, |i| (i as u64 * a % p as u64) as usize).unwrap();
        let name = match d {
            1 => format!("Z_{p}"),
            _ if d == p - 1 => format!("AGL(1,{p})"),
            _ => format!("Z_{p}:Z_{d}"),
        };
        entries.push((name, PermGroup::new(p, vec![shift.clone(), m])?));
    }
    entries.push((format!("A_{p}"), relabel_to_shift(&PermGroup::alternating(p))?));
    entries.push((format!("S_{p}"), PermGroup::symmetric(p).with_generators(std::slice::from_ref(&shift))));
    for (q, d) in projective_parameters(p) {
        let ps = ProjectiveSpace::new(Gf::new(q)?, d)?;
        entries.push((format!("PSL({d},{q})"), relabel_to_shift(&ps.psl()?)?));
    }
    if p == 11 {
        entries.push(("PSL(2,11)".into(), relabel_to_shift(&psl_2_11_on_11())?));
        entries.push(("M_11".into(), mathieu_11()));
    }
    if p == 23 {
        entries.push(("M_23".into(), mathieu_23()));
    }
    let mut out: Vec<DegreePGroup> = Vec::new();
    for (name, grp) in entries {
        match out.iter_mut().find(|e| e.group.order() == grp.order() && e.group.same_group(&grp)) {
            Some(e) => e.names.push(name),
            None => out.push(DegreePGroup {
                names: vec![name],
                group: grp,
            }),
        }
    }
    out.sort_by_key(|e| e.group.order());
    Ok(out)
}

/// `(q, d)` with `d >= 2` and `(q^d - 1)/(q - 1) = p`.
pub fn projective_parameters(p: usize) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for q in 2..p as u64 {
        if crate::codes::ring::prime_power(q).is_none() {
            continue;
        }
        let mut sum = 1 + q;
        let mut d = 2;
        while sum < p as u64 {
            sum = sum * q + 1;
            d += 1;
        }
        if sum == p as u64 && is_prime(p as u64) {
            out.push((q, d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sporadic_orders() {
        assert_eq!(mathieu_11().order(), 7920);
        assert_eq!(mathieu_23().order(), 10200960);
        let l = psl_2_11_on_11();
        assert_eq!(l.order(), 660);
        assert!(l.is_doubly_transitive());
    }

    #[test]
    fn small_catalogs() {
        let c3 = degree_p_catalog(3).unwrap();
        assert_eq!(c3.len(), 2);
        let c5 = degree_p_catalog(5).unwrap();
        let orders: Vec<u128> = c5.iter().map(|e| e.group.order()).collect();
        assert_eq!(orders, vec![5, 10, 20, 60, 120]);
        assert!(c5[3].names.contains(&"PSL(2,4)".to_string()));
        let c7 = degree_p_catalog(7).unwrap();
        assert!(c7.iter().any(|e| e.group.order() == 168));
        for e in c7 {
            assert!(e.group.is_transitive());
            assert!(e.group.has(&Permutation::from_fn(7, |i| (i + 1) % 7).unwrap()));
        }
    }

    #[test]
    fn golay_code_is_psl_invariant() {
        let l = relabel_to_shift(&psl_2_11_on_11()).unwrap();
        let six: Vec<_> = crate::codes::invariant_cyclic_codes(11, 3, &[])
            .unwrap()
            .into_iter()
            .filter(|c| c.dimension() == 6)
            .map(|c| c.to_module().unwrap())
            .collect();
        assert_eq!(six.len(), 2);
        let invariant = six
            .iter()
            .filter(|c| crate::codes::is_invariant(c, l.generators()))
            .count();
        assert_eq!(invariant, 1);
    }
}
