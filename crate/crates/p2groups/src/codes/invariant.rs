use std::collections::BTreeSet;

use super::cyclic::CyclicCode;
use super::module::Submodule;
use super::poly::{ModPoly, Poly};
use super::ring::{gcd_u64, is_prime, mult_order, prime_power, primitive_root, Gf, Ring, Zn};
use super::CodeError;

/// A cyclic code of length `p` over `F_q` given by its generator polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCyclicCode {
    pub length: usize,
    pub generator: Poly<Gf>,
}

impl FieldCyclicCode {
    pub fn dimension(&self) -> usize {
        self.length - self.generator.degree().unwrap_or(0)
    }

    /// The code as a submodule of `(F_q)^p`; `q` must be prime.
    pub fn to_module(&self) -> Result<Submodule, CodeError> {
        let f = self.generator.ring();
        if f.degree() != 1 {
            return Err(CodeError::NotPrime(f.order()));
        }
        let g = ModPoly::new(Zn::new(f.order()), self.generator.coeffs().to_vec());
        Ok(CyclicCode::from_generator(self.length, &g)?.module().clone())
    }
}

/// Monic irreducible factors of `x^p - 1` over `F_q`, `p` prime not dividing `q`.
pub fn irreducible_factors(p: usize, field: &Gf) -> Result<Vec<Poly<Gf>>, CodeError> {
    let q = field.order();
    if q.is_multiple_of(p as u64) {
        return Err(CodeError::Invalid("characteristic divides the length".into()));
    }
    let m = mult_order(q % p as u64, p as u64).unwrap() as u32;
    if (q as u128).pow(m) > 5_000_000 {
        return Err(CodeError::TooLarge(format!("factor search over {q}^{m} candidates")));
    }
    let x1 = Poly::new(field.clone(), vec![field.neg(1), 1]);
    let phi = Poly::x_n_minus_one(field.clone(), p).divrem(&x1)?.0;
    let mut out = vec![x1];
    if m as usize == p - 1 {
        out.push(phi);
        return Ok(out);
    }
    let count = (q as u128).pow(m) as u64;
    for code in 0..count {
        let mut k = code;
        let mut c: Vec<u64> = (0..m)
            .map(|_| {
                let d = k % q;
                k /= q;
                d
            })
            .collect();
        c.push(1);
        let f = Poly::new(field.clone(), c);
        if f.divides(&phi)? {
            out.push(f);
        }
    }
    if out.len() != 1 + (p - 1) / m as usize {
        return Err(CodeError::Arithmetic("factorization incomplete".into()));
    }
    Ok(out)
}

/// Subgroups of `Z_p^*`, each as a single generator, ordered by size.
pub fn unit_subgroups(p: u64) -> Vec<u64> {
    let g = primitive_root(p).unwrap_or(1);
    let mut divs: Vec<u64> = (1..p).filter(|d| (p - 1).is_multiple_of(*d)).collect();
    divs.sort_unstable();
    divs.iter()
        .map(|&e| {
            let mut x = 1;
            for _ in 0..(p - 1) / e {
                x = x * g % p;
            }
            x
        })
        .collect()
}

/// Elements of the subgroup of `Z_p^*` generated by `gens`.
pub fn unit_closure(p: u64, gens: &[u64]) -> BTreeSet<u64> {
    let mut set = BTreeSet::new();
    set.insert(1);
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = x * (g % p) % p;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// `2^d` with `d = 1 + [Z_p^* : <A, q>]`.
pub fn expected_invariant_count(p: u64, q: u64, a: &[u64]) -> u128 {
    let mut gens = a.to_vec();
    gens.push(q % p);
    let h = unit_closure(p, &gens).len() as u64;
    1u128 << (1 + (p - 1) / h)
}

/// Cyclic codes of length `p` over `F_q` invariant under the multipliers in `a`.
///
/// When `p` divides `q` every divisor `(x - 1)^i` of `x^p - 1` is returned.
pub fn invariant_cyclic_codes(p: usize, q: u64, a: &[u64]) -> Result<Vec<FieldCyclicCode>, CodeError> {
    if !is_prime(p as u64) {
        return Err(CodeError::NotPrime(p as u64));
    }
    prime_power(q).ok_or(CodeError::NotPrimePower(q))?;
    let field = Gf::new(q)?;
    if q.is_multiple_of(p as u64) {
        let x1 = Poly::new(field.clone(), vec![field.neg(1), 1]);
        let mut g = Poly::one(field.clone());
        let mut out = Vec::new();
        for _ in 0..=p {
            out.push(FieldCyclicCode {
                length: p,
                generator: g.clone(),
            });
            g = g.mul(&x1);
        }
        return Ok(out);
    }
    for &x in a {
        if gcd_u64(x, p as u64) != 1 {
            return Err(CodeError::Invalid(format!("{x} is not a unit mod {p}")));
        }
    }
    let factors = irreducible_factors(p, &field)?;
    let xp = Poly::x_n_minus_one(field.clone(), p);
    let k = factors.len();
    let mut orbit_of = vec![usize::MAX; k];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orb = vec![s];
        orbit_of[s] = id;
        let mut i = 0;
        while i < orb.len() {
            let f = &factors[orb[i]];
            i += 1;
            for &x in a {
                let img = f.compose_power(x as usize).gcd(&xp)?;
                let j = factors
                    .iter()
                    .position(|g| *g == img)
                    .ok_or_else(|| CodeError::Arithmetic("image is not a factor".into()))?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    orb.push(j);
                }
            }
        }
        orbits.push(orb);
    }
    let mut out = Vec::with_capacity(1 << orbits.len());
    for mask in 0u64..(1u64 << orbits.len()) {
        let mut g = Poly::one(field.clone());
        for (oi, orb) in orbits.iter().enumerate() {
            if mask >> oi & 1 == 1 {
                for &j in orb {
                    g = g.mul(&factors[j]);
                }
            }
        }
        out.push(FieldCyclicCode {
            length: p,
            generator: g,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_at_seven_over_two() {
        assert_eq!(invariant_cyclic_codes(7, 2, &[]).unwrap().len(), 8);
        assert_eq!(invariant_cyclic_codes(7, 2, &[3]).unwrap().len(), 4);
        assert_eq!(expected_invariant_count(7, 2, &[3]), 4);
    }

    #[test]
    fn golay_dimensions_appear() {
        let codes = invariant_cyclic_codes(11, 3, &[]).unwrap();
        assert_eq!(codes.len(), 8);
        let dims: BTreeSet<usize> = codes.iter().map(|c| c.dimension()).collect();
        assert!(dims.contains(&6) && dims.contains(&5));
    }

    #[test]
    fn modular_case_gives_divisor_lattice() {
        assert_eq!(invariant_cyclic_codes(3, 3, &[2]).unwrap().len(), 4);
        assert_eq!(invariant_cyclic_codes(5, 25, &[]).unwrap().len(), 6);
    }

    #[test]
    fn unit_subgroups_of_thirteen() {
        let subs = unit_subgroups(13);
        assert_eq!(subs.len(), 6);
        let sizes: Vec<usize> = subs.iter().map(|&g| unit_closure(13, &[g]).len()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn counts_match_filtered_oracle() {
        use crate::codes::cyclic::multiplier;
        for (p, q) in [(7usize, 2u64), (13, 3), (11, 3), (7, 5)] {
            let all: Vec<Submodule> = invariant_cyclic_codes(p, q, &[])
                .unwrap()
                .iter()
                .map(|c| c.to_module().unwrap())
                .collect();
            for a in unit_subgroups(p as u64) {
                let m = multiplier(p, a).unwrap();
                let oracle = all.iter().filter(|c| c.is_invariant_under(&m)).count() as u128;
                let got = invariant_cyclic_codes(p, q, &[a]).unwrap();
                assert_eq!(got.len() as u128, oracle, "p={p} q={q} a={a}");
                assert_eq!(oracle, expected_invariant_count(p as u64, q, &[a]));
                for c in got {
                    assert!(c.to_module().unwrap().is_invariant_under(&m));
                }
            }
        }
    }
}
