//! Explicit normalizers in `S_{p^2}` of the standard groups `P_i` and `P'_i`.

use serde::{Deserialize, Serialize};

use crate::codes::ring::{gcd_u64, primitive_root};
use crate::error::{require_prime, Error, Result};
use crate::perm::{PermGroup, Permutation};
use crate::pgroups::{affine_map, gamma, rho1, rho2, tau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    /// `(i, j) -> (b i, j)`.
    Bar,
    /// `(i, j) -> (i, b j)`.
    Tilde,
    /// `x -> b x mod p^2`.
    Hat,
}

pub fn scalar_map(p: usize, kind: ScalarKind, beta: u64) -> Result<Permutation> {
    require_prime(p)?;
    let (p64, n) = (p as u64, (p * p) as u64);
    let modulus = if kind == ScalarKind::Hat { n } else { p64 };
    if gcd_u64(beta % modulus, modulus) != 1 {
        return Err(Error::Invalid(format!("{beta} is not a unit mod {modulus}")));
    }
    let f = |x: usize| -> usize {
        let (a, b) = (x as u64 % p64, x as u64 / p64);
        let y = match kind {
            ScalarKind::Bar => beta * a % p64 + b * p64,
            ScalarKind::Tilde => a + beta * b % p64 * p64,
            ScalarKind::Hat => beta * x as u64 % n,
        };
        y as usize
    };
    Ok(Permutation::from_fn(p * p, f)?)
}

/// A unit of order `p - 1` mod `p^2`: `g^p` for the least primitive root `g` mod `p`.
pub fn teichmuller_unit(p: usize) -> u64 {
    let n = (p * p) as u64;
    let g = primitive_root(p as u64).unwrap_or(1);
    (0..p).fold(1u64, |acc, _| acc * g % n)
}

fn check_index(p: usize, i: usize) -> Result<()> {
    require_prime(p)?;
    if !(1..=p).contains(&i) {
        return Err(Error::Invalid(format!("i must lie in 1..={p}")));
    }
    Ok(())
}

fn top_normalizer(p: usize) -> Result<PermGroup> {
    let b = primitive_root(p as u64).unwrap_or(1);
    let gens = vec![
        tau(p),
        gamma(p, p),
        scalar_map(p, ScalarKind::Bar, b)?,
        scalar_map(p, ScalarKind::Tilde, b)?,
    ];
    Ok(PermGroup::new(p * p, gens)?)
}

/// `N(P_i)`: generated by `tau, gamma_i, gamma_{i+1}` and a hat map of order
/// `p - 1` when `i < p`; by `tau, z_0` and the bar and tilde maps at `i = p`.
pub fn normalizer_p(p: usize, i: usize) -> Result<PermGroup> {
    check_index(p, i)?;
    if i == p {
        return top_normalizer(p);
    }
    let gens = vec![
        tau(p),
        gamma(p, i),
        gamma(p, i + 1),
        scalar_map(p, ScalarKind::Hat, teichmuller_unit(p))?,
    ];
    Ok(PermGroup::new(p * p, gens)?)
}

/// `N(P'_i)`: `AGL(2, p)` at `i = 1`; otherwise generated by `rho1, rho2,
/// gamma_i, gamma_{i+1}` and the bar and tilde maps.
pub fn normalizer_p_prime(p: usize, i: usize) -> Result<PermGroup> {
    check_index(p, i)?;
    if i == p {
        return top_normalizer(p);
    }
    let b = primitive_root(p as u64).unwrap_or(1);
    let gens = if i == 1 {
        vec![
            rho1(p),
            rho2(p),
            affine_map(p, [[b, 0], [0, 1]], [0, 0])?,
            affine_map(p, [[1, 1], [0, 1]], [0, 0])?,
            affine_map(p, [[1, 0], [1, 1]], [0, 0])?,
        ]
    } else {
        vec![
            rho1(p),
            rho2(p),
            gamma(p, i),
            gamma(p, i + 1),
            scalar_map(p, ScalarKind::Bar, b)?,
            scalar_map(p, ScalarKind::Tilde, b)?,
        ]
    };
    Ok(PermGroup::new(p * p, gens)?)
}

/// Closed-form orders of the normalizers above.
pub fn normalizer_order(p: usize, i: usize, elementary: bool) -> u128 {
    let p = p as u128;
    let i = i as u32;
    if i as u128 == p {
        return (p - 1) * (p - 1) * p.pow(i + 1);
    }
    match (elementary, i) {
        (false, _) => (p - 1) * p.pow(i + 2),
        (true, 1) => p * p * (p * p - 1) * (p * p - p),
        (true, _) => (p - 1) * (p - 1) * p.pow(i + 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::BlockSystem;
    use crate::pgroups::{build_p, Family};

    #[test]
    fn scalar_examples() {
        let h = scalar_map(3, ScalarKind::Hat, 2).unwrap();
        assert_eq!(h.order(), 6);
        let b = scalar_map(3, ScalarKind::Bar, 2).unwrap();
        assert_eq!(b.apply(1), 2);
        assert_eq!(b.apply(3), 3);
        assert!(scalar_map(5, ScalarKind::Tilde, 1).unwrap().is_identity());
        assert!(scalar_map(3, ScalarKind::Hat, 3).is_err());
    }

    #[test]
    fn orders_and_normality() {
        for p in [3usize, 5] {
            for i in 1..=p {
                for (fam, elem) in [(Family::Cyclic, false), (Family::Elementary, true)] {
                    let target = build_p(p, i, fam).unwrap();
                    let n = if elem { normalizer_p_prime(p, i) } else { normalizer_p(p, i) }.unwrap();
                    assert_eq!(n.order(), normalizer_order(p, i, elem), "p={p} i={i} {fam:?}");
                    assert!(target.is_normal_in(&n));
                }
            }
        }
    }

    #[test]
    fn kernel_orders() {
        for p in [3usize, 5] {
            for i in 1..p {
                let n = normalizer_p(p, i).unwrap();
                let k = n.block_kernel(&BlockSystem::standard(p)).unwrap();
                assert_eq!(k.order(), (p as u128).pow(i as u32 + 1));
            }
        }
    }

    #[test]
    fn matches_brute_force_for_cyclic_regular() {
        let t = build_p(3, 1, Family::Cyclic).unwrap();
        let b = PermGroup::symmetric(9).brute_normalizer(&t, 1_000_000).unwrap();
        assert!(b.same_group(&normalizer_p(3, 1).unwrap()));
    }
}
