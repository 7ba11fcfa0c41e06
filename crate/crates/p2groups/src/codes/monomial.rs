use serde::Serialize;

use super::module::Submodule;
use super::ring::gcd_u64;
use super::CodeError;
use crate::perm::{PermGroup, Permutation};

/// `x -> s(x d)`: scale coordinate `i` by the unit `d_i`, then move it to `s(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMap {
    pub perm: Permutation,
    pub scale: Vec<u64>,
    pub modulus: u64,
}

impl MonomialMap {
    pub fn new(perm: Permutation, scale: Vec<u64>, modulus: u64) -> Result<Self, CodeError> {
        if perm.degree() != scale.len() {
            return Err(CodeError::LengthMismatch {
                expected: perm.degree(),
                found: scale.len(),
            });
        }
        if scale.iter().any(|&d| gcd_u64(d % modulus, modulus) != 1) {
            return Err(CodeError::Invalid("scale entries must be units".into()));
        }
        Ok(MonomialMap { perm, scale, modulus })
    }

    pub fn identity(len: usize, modulus: u64) -> Self {
        MonomialMap {
            perm: Permutation::identity(len),
            scale: vec![1 % modulus; len],
            modulus,
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0; x.len()];
        for (i, (&xi, &di)) in x.iter().zip(&self.scale).enumerate() {
            out[self.perm.apply(i)] = xi * di % self.modulus;
        }
        out
    }

    /// `self` followed by `other`: `(s, a)(t, b) = (st, (s^-1 b) a)` with
    /// `(s^-1 b)_i = b_{s(i)}`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let scale = (0..self.scale.len())
            .map(|i| other.scale[self.perm.apply(i)] * self.scale[i] % self.modulus)
            .collect();
        MonomialMap {
            perm: self.perm.compose(&other.perm),
            scale,
            modulus: self.modulus,
        }
    }

    pub fn maps_into(&self, c: &Submodule) -> bool {
        c.rows().iter().all(|r| c.contains(&self.apply(r)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutMode {
    Full,
    PermutationOnly,
}

/// Monomial automorphisms of `c` by exhaustive scan. Weight is preserved by
/// every monomial map, so only the image condition is checked.
pub fn monomial_aut(c: &Submodule, mode: AutMode) -> Result<Vec<MonomialMap>, CodeError> {
    let len = c.len();
    let n = c.modulus();
    let cap = match mode {
        AutMode::Full => 5,
        AutMode::PermutationOnly => 7,
    };
    if len > cap {
        return Err(CodeError::TooLarge(format!(
            "monomial automorphism scan limited to length {cap} in this mode"
        )));
    }
    let units: Vec<u64> = (1..n.max(2)).filter(|&u| gcd_u64(u, n) == 1).collect();
    let perms = PermGroup::symmetric(len)
        .elements(u128::MAX)
        .map_err(|e| CodeError::Invalid(e.to_string()))?;
    let mut out = Vec::new();
    for s in perms {
        match mode {
            AutMode::PermutationOnly => {
                let m = MonomialMap::identity(len, n);
                let m = MonomialMap { perm: s, ..m };
                if m.maps_into(c) {
                    out.push(m);
                }
            }
            AutMode::Full => {
                let total = units.len().pow(len as u32);
                for code in 0..total {
                    let mut k = code;
                    let scale: Vec<u64> = (0..len)
                        .map(|_| {
                            let u = units[k % units.len()];
                            k /= units.len();
                            u
                        })
                        .collect();
                    let m = MonomialMap {
                        perm: s.clone(),
                        scale,
                        modulus: n,
                    };
                    if m.maps_into(c) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.perm, &a.scale).cmp(&(&b.perm, &b.scale)));
    Ok(out)
}

pub fn is_invariant_monomial(c: &Submodule, maps: &[MonomialMap]) -> bool {
    maps.iter().all(|m| m.maps_into(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::cyclic::CyclicCode;
    use crate::codes::poly::ModPoly;
    use crate::codes::ring::Zn;
    use proptest::prelude::*;

    #[test]
    fn repetition_code_permutations() {
        let c = Submodule::repetition(5, 5);
        assert_eq!(monomial_aut(&c, AutMode::PermutationOnly).unwrap().len(), 120);
    }

    #[test]
    fn square_of_x_minus_one() {
        let g = ModPoly::from_ints(Zn::new(5), &[1, -2, 1]);
        let c = CyclicCode::from_generator(5, &g).unwrap();
        assert_eq!(monomial_aut(c.module(), AutMode::Full).unwrap().len(), 80);
    }

    #[test]
    fn zero_code_gets_everything() {
        let c = Submodule::zero(3, 3);
        assert_eq!(monomial_aut(&c, AutMode::Full).unwrap().len(), 6 * 8);
    }

    #[test]
    fn scan_limits() {
        assert!(monomial_aut(&Submodule::zero(2, 6), AutMode::Full).is_err());
        assert!(monomial_aut(&Submodule::zero(2, 8), AutMode::PermutationOnly).is_err());
    }

    proptest! {
        #[test]
        fn composition_matches_application(
            a in prop::collection::vec(1u64..5, 4),
            b in prop::collection::vec(1u64..5, 4),
            s in 0usize..24, t in 0usize..24,
            x in prop::collection::vec(0u64..5, 4),
        ) {
            let perms = PermGroup::symmetric(4).elements(100).unwrap();
            let m1 = MonomialMap::new(perms[s].clone(), a, 5).unwrap();
            let m2 = MonomialMap::new(perms[t].clone(), b, 5).unwrap();
            prop_assert_eq!(m1.compose(&m2).apply(&x), m2.apply(&m1.apply(&x)));
        }
    }
}
