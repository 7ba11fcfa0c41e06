use serde::Serialize;

use super::standard::{build_p, Family};
use crate::codes::{induced_code, Submodule};
use crate::error::{require_prime, Error, Result};
use crate::perm::{BlockSystem, PermGroup, Permutation};

/// Which of the `2p - 1` standard transitive `p`-subgroups a group is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", content = "i", rename_all = "lowercase")]
pub enum PFamily {
    Cyclic(usize),
    Elementary(usize),
    Wreath,
}

impl PFamily {
    pub fn index(&self, p: usize) -> usize {
        match *self {
            PFamily::Cyclic(i) | PFamily::Elementary(i) => i,
            PFamily::Wreath => p,
        }
    }

    pub fn standard_group(&self, p: usize) -> Result<PermGroup> {
        match *self {
            PFamily::Cyclic(i) => build_p(p, i, Family::Cyclic),
            PFamily::Elementary(i) => build_p(p, i, Family::Elementary),
            PFamily::Wreath => build_p(p, p, Family::Cyclic),
        }
    }
}

impl std::fmt::Display for PFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PFamily::Cyclic(i) => write!(f, "P_{i}"),
            PFamily::Elementary(i) => write!(f, "P'_{i}"),
            PFamily::Wreath => f.write_str("Z_p wr Z_p"),
        }
    }
}

/// A recognized group together with `c` such that `c^-1 P c` is the
/// standard copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PSubgroupKind {
    pub family: PFamily,
    pub conjugator: Permutation,
}

/// Coordinates in which a transitive `p`-group of degree `p^2` becomes
/// standard: the chosen blocks are the residue classes mod `p` and the
/// kernel on them lies in `<z_0, ..., z_{p-1}>`.
#[derive(Clone, Debug)]
pub struct Standardization {
    pub blocks: BlockSystem,
    /// Relabeling taking actual points to standard ones.
    pub relabel: Permutation,
    pub kernel: PermGroup,
    /// Induced code of the kernel in standard coordinates.
    pub code: Submodule,
    /// Whether the chosen block-moving generator became `tau` (otherwise `rho2`).
    pub mover_is_tau: bool,
}

fn degree_prime(g: &PermGroup) -> Result<usize> {
    let n = g.degree();
    let p = (n as f64).sqrt().round() as usize;
    if p * p != n {
        return Err(Error::Invalid(format!("degree {n} is not a prime square")));
    }
    require_prime(p)?;
    Ok(p)
}

/// Checks that `g` is a transitive `p`-group of degree `p^2`, returning `p`.
pub fn check_transitive_p_group(g: &PermGroup) -> Result<usize> {
    let p = degree_prime(g)?;
    if !g.is_transitive() {
        return Err(Error::Invalid("group is not transitive".into()));
    }
    if !g.is_p_group(p as u128) {
        return Err(Error::Invalid(format!("group is not a {p}-group")));
    }
    Ok(p)
}

pub fn standardize(g: &PermGroup) -> Result<Standardization> {
    let p = check_transitive_p_group(g)?;
    let n = p * p;
    let blocks = g
        .block_systems_with(p)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Search("no block system with p blocks".into()))?;
    let kernel = g.block_kernel(&blocks)?;
    let x = g
        .generators()
        .iter()
        .find(|h| blocks.induced(h).is_some_and(|b| !b.is_identity()))
        .ok_or_else(|| Error::Search("no generator moves the blocks".into()))?
        .clone();
    let f0 = kernel
        .generators()
        .iter()
        .find(|h| h.apply(0) != 0)
        .ok_or_else(|| Error::Search("kernel fixes the first block".into()))?
        .clone();
    let mut row: Vec<usize> = Vec::with_capacity(p);
    let mut y = 0;
    for _ in 0..p {
        row.push(y);
        y = f0.apply(y);
    }
    let mut label = vec![usize::MAX; n];
    for a in 0..p {
        for (j, y) in row.iter_mut().enumerate() {
            if label[*y] != usize::MAX {
                return Err(Error::Search("labeling collided".into()));
            }
            label[*y] = a + j * p;
            *y = x.apply(*y);
        }
    }
    // x^p acts on the first block as f0^s
    let xp0 = x.pow(p as i64).apply(0);
    let s = label[xp0] / p;
    let scale = if s == 0 { 1 } else { inv_mod(s, p) };
    for l in label.iter_mut() {
        let (a, j) = (*l % p, *l / p);
        *l = a + (j * scale % p) * p;
    }
    let relabel = Permutation::from_images(label)?;
    let std_kernel = kernel.conjugate_by(&relabel);
    let std_blocks = BlockSystem::standard(p);
    let code = induced_code(&std_kernel, &std_blocks)?;
    Ok(Standardization {
        blocks,
        relabel,
        kernel,
        code,
        mover_is_tau: s != 0,
    })
}

fn inv_mod(a: usize, p: usize) -> usize {
    (1..p).find(|b| a * b % p == 1).unwrap()
}

pub fn recognize_p_subgroup(g: &PermGroup) -> Result<PSubgroupKind> {
    let st = standardize(g)?;
    let p = st.code.len();
    let dim = st.code.dimension();
    let family = if dim == p {
        PFamily::Wreath
    } else if dim == 0 {
        return Err(Error::Search("kernel on blocks is trivial".into()));
    } else if st.mover_is_tau {
        PFamily::Cyclic(dim)
    } else {
        PFamily::Elementary(dim)
    };
    let standard = family.standard_group(p)?;
    if g.same_group(&standard) {
        return Ok(PSubgroupKind {
            family,
            conjugator: Permutation::identity(p * p),
        });
    }
    if !g.conjugate_by(&st.relabel).same_group(&standard) {
        return Err(Error::Search(format!("relabeled group is not {family}")));
    }
    Ok(PSubgroupKind {
        family,
        conjugator: st.relabel,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WreathTests {
    /// Contains both a regular cyclic and a regular elementary abelian subgroup.
    pub has_both_regulars: bool,
    pub is_wreath: bool,
    /// Every word of the induced code has coordinate sum zero.
    pub code_sums_zero: bool,
}

/// The three conditions computed separately: the first by searching the
/// block-moving coset `x K` (every cyclic subgroup not inside the kernel
/// `K` meets it), the second from the order, the third from the code.
pub fn wreath_tests(g: &PermGroup) -> Result<WreathTests> {
    let st = standardize(g)?;
    let p = st.code.len();
    let x = g
        .generators()
        .iter()
        .find(|h| st.blocks.induced(h).is_some_and(|b| !b.is_identity()))
        .unwrap()
        .clone();
    let p2 = (p * p) as u128;
    let mut has_cycle = false;
    let mut order_p_mover: Option<Permutation> = None;
    st.kernel.for_each_element(&mut |h| {
        let y = x.compose(h);
        let o = y.order();
        if o == p2 {
            has_cycle = true;
        } else if order_p_mover.is_none() {
            order_p_mover = Some(y);
        }
        !(has_cycle && order_p_mover.is_some())
    });
    let mut has_elementary = false;
    if let Some(y) = order_p_mover {
        st.kernel.for_each_element(&mut |f| {
            if f.fixed_points().is_empty() && f.commutes_with(&y) {
                has_elementary = true;
                return false;
            }
            true
        });
    }
    let sums = st
        .code
        .rows()
        .iter()
        .all(|r| r.iter().sum::<u64>() % p as u64 == 0);
    Ok(WreathTests {
        has_both_regulars: has_cycle && has_elementary,
        is_wreath: g.is_transitive() && g.order() == (p as u128).pow(p as u32 + 1),
        code_sums_zero: sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::standard::{affine_map, rho1, rho2, tau};

    #[test]
    fn standard_groups_recognized_with_identity() {
        for p in [3usize, 5] {
            for i in 1..=p {
                for fam in [Family::Cyclic, Family::Elementary] {
                    let g = build_p(p, i, fam).unwrap();
                    let k = recognize_p_subgroup(&g).unwrap();
                    assert!(k.conjugator.is_identity());
                    let expect = match (fam, i == p) {
                        (_, true) => PFamily::Wreath,
                        (Family::Cyclic, _) => PFamily::Cyclic(i),
                        (Family::Elementary, _) => PFamily::Elementary(i),
                    };
                    assert_eq!(k.family, expect);
                }
            }
        }
        let t = PermGroup::new(9, vec![tau(3)]).unwrap();
        assert_eq!(recognize_p_subgroup(&t).unwrap().family, PFamily::Cyclic(1));
        let e = PermGroup::new(9, vec![rho1(3), rho2(3)]).unwrap();
        assert_eq!(recognize_p_subgroup(&e).unwrap().family, PFamily::Elementary(1));
    }

    #[test]
    fn conjugates_recognized() {
        let a = affine_map(3, [[1, 2], [1, 0]], [1, 2]).unwrap();
        for (i, fam) in [(2, Family::Elementary), (2, Family::Cyclic), (1, Family::Cyclic)] {
            let g = build_p(3, i, fam).unwrap().conjugate_by(&a);
            let k = recognize_p_subgroup(&g).unwrap();
            let std = k.family.standard_group(3).unwrap();
            assert!(g.conjugate_by(&k.conjugator).same_group(&std));
        }
    }

    #[test]
    fn wreath_equivalences() {
        let w = build_p(3, 3, Family::Cyclic).unwrap();
        let r = wreath_tests(&w).unwrap();
        assert_eq!((r.has_both_regulars, r.is_wreath, r.code_sums_zero), (true, true, false));
        let t = PermGroup::new(9, vec![tau(3)]).unwrap();
        let r = wreath_tests(&t).unwrap();
        assert_eq!((r.has_both_regulars, r.is_wreath, r.code_sums_zero), (false, false, true));
        let e = PermGroup::new(9, vec![rho1(3), rho2(3)]).unwrap();
        let r = wreath_tests(&e).unwrap();
        assert_eq!((r.has_both_regulars, r.is_wreath, r.code_sums_zero), (false, false, true));
    }
}
