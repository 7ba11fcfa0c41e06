use serde::Serialize;

use super::module::Submodule;
use super::poly::ModPoly;
use super::ring::{is_prime, Zn};
use super::CodeError;
use crate::perm::{BlockSystem, PermGroup, Permutation};

/// A shift-invariant submodule of `(Z_n)^len`. Over a prime modulus it also
/// carries its monic generator polynomial (a divisor of `x^len - 1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicCode {
    module: Submodule,
    generator: Option<ModPoly>,
}

impl CyclicCode {
    pub fn from_module(module: Submodule) -> Result<Self, CodeError> {
        let len = module.len();
        if len > 0 && !module.is_invariant_under(&shift(len)) {
            return Err(CodeError::Invalid("module is not invariant under the cyclic shift".into()));
        }
        let n = module.modulus();
        let generator = if is_prime(n) {
            let ring = Zn::new(n);
            let mut g = ModPoly::x_n_minus_one(ring, len);
            for r in module.rows() {
                g = g.gcd(&ModPoly::new(ring, r.clone()))?;
            }
            Some(g)
        } else {
            None
        };
        Ok(CyclicCode { module, generator })
    }

    /// The ideal generated by `g` in `Z_n[x]/(x^len - 1)`.
    pub fn from_generator(len: usize, g: &ModPoly) -> Result<Self, CodeError> {
        let n = g.ring().n;
        let red = g.cyclic_reduce(len);
        let rows: Vec<Vec<u64>> = (0..len)
            .map(|k| red.mul(&ModPoly::monomial(*g.ring(), k)).cyclic_reduce(len).to_vector(len))
            .collect();
        Self::from_module(Submodule::new(n, len, &rows)?)
    }

    pub fn from_vectors(n: u64, len: usize, vecs: &[Vec<u64>]) -> Result<Self, CodeError> {
        Self::from_module(Submodule::new(n, len, vecs)?)
    }

    pub fn zero(n: u64, len: usize) -> Self {
        Self::from_module(Submodule::zero(n, len)).unwrap()
    }
    pub fn full(n: u64, len: usize) -> Self {
        Self::from_module(Submodule::full(n, len)).unwrap()
    }
    pub fn repetition(n: u64, len: usize) -> Self {
        Self::from_module(Submodule::repetition(n, len)).unwrap()
    }
    pub fn sum_zero(n: u64, len: usize) -> Self {
        Self::from_module(Submodule::sum_zero(n, len)).unwrap()
    }

    pub fn module(&self) -> &Submodule {
        &self.module
    }
    pub fn modulus(&self) -> u64 {
        self.module.modulus()
    }
    pub fn length(&self) -> usize {
        self.module.len()
    }
    pub fn order(&self) -> u128 {
        self.module.order()
    }
    pub fn dimension(&self) -> usize {
        self.module.dimension()
    }
    pub fn generator(&self) -> Option<&ModPoly> {
        self.generator.as_ref()
    }
    pub fn contains(&self, v: &[u64]) -> bool {
        self.module.contains(v)
    }
}

/// `i -> i + 1 mod len`.
pub fn shift(len: usize) -> Permutation {
    Permutation::from_fn(len, |i| (i + 1) % len).unwrap()
}

/// `i -> a i mod len`.
pub fn multiplier(len: usize, a: u64) -> Result<Permutation, CodeError> {
    Permutation::from_fn(len, |i| (i as u64 * a % len as u64) as usize)
        .map_err(|_| CodeError::Invalid(format!("{a} is not a unit mod {len}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub modulus: u64,
    pub length: usize,
    pub order: String,
    pub dimension: usize,
    pub generator: Option<String>,
    pub rows: Vec<Vec<u64>>,
}

impl CyclicCode {
    pub fn summary(&self) -> CodeSummary {
        CodeSummary {
            modulus: self.modulus(),
            length: self.length(),
            order: self.order().to_string(),
            dimension: self.dimension(),
            generator: self.generator.as_ref().map(|g| g.to_string()),
            rows: self.module.rows().to_vec(),
        }
    }
}

/// Smallest proper divisor `k` of the length such that the code is the direct
/// sum of one code `D` of length `k` copied onto each coset of the subgroup of
/// order `k` in `Z_len`.
pub fn degeneracy(c: &Submodule) -> Option<usize> {
    let m = c.len();
    let n = c.modulus();
    for k in (1..m).filter(|k| m.is_multiple_of(*k)) {
        let stride = m / k;
        let proj: Vec<Vec<u64>> = c
            .rows()
            .iter()
            .map(|r| (0..k).map(|l| r[l * stride]).collect())
            .collect();
        let d = Submodule::new(n, k, &proj).unwrap();
        if d.order().checked_pow(stride as u32) != Some(c.order()) {
            continue;
        }
        let ok = (0..stride).all(|coset| {
            d.rows().iter().all(|dr| {
                let mut v = vec![0u64; m];
                for (l, &x) in dr.iter().enumerate() {
                    v[coset + l * stride] = x;
                }
                c.contains(&v)
            })
        });
        if ok {
            return Some(k);
        }
    }
    None
}

pub fn is_degenerate(c: &Submodule) -> bool {
    degeneracy(c).is_some()
}

pub fn is_invariant(c: &Submodule, perms: &[Permutation]) -> bool {
    perms.iter().all(|s| c.is_invariant_under(s))
}

/// Exponent-vector code of a `p`-group fixing every block of `bs`.
///
/// Each block is labeled by its sorted order when every element then acts on
/// it as a translation (the case for subgroups of the standard `<z_i>`);
/// otherwise by the powers of one generator of the restriction to that block.
pub fn induced_code(p0: &PermGroup, bs: &BlockSystem) -> Result<Submodule, CodeError> {
    let size = bs.blocks()[0].len();
    if !is_prime(size as u64) || bs.blocks().iter().any(|b| b.len() != size) {
        return Err(CodeError::Invalid("blocks must all have the same prime size".into()));
    }
    let natural: Vec<Vec<usize>> = bs
        .blocks()
        .iter()
        .map(|b| {
            let mut lab = vec![usize::MAX; bs.degree()];
            for (j, &x) in b.iter().enumerate() {
                lab[x] = j;
            }
            lab
        })
        .collect();
    if let Ok(c) = code_with_labels(p0, bs, &natural) {
        return Ok(c);
    }
    let gens = p0.generators();
    let mut labels: Vec<Vec<usize>> = Vec::with_capacity(bs.num_blocks());
    for b in bs.blocks() {
        let mut lab = vec![usize::MAX; bs.degree()];
        match gens.iter().find(|g| g.apply(b[0]) != b[0]) {
            None => lab[b[0]] = 0,
            Some(g) => {
                let mut x = b[0];
                for j in 0..size {
                    if lab[x] != usize::MAX {
                        return Err(CodeError::Invalid("restriction to a block is not a p-cycle".into()));
                    }
                    lab[x] = j;
                    x = g.apply(x);
                }
            }
        }
        labels.push(lab);
    }
    code_with_labels(p0, bs, &labels)
}

fn code_with_labels(
    p0: &PermGroup,
    bs: &BlockSystem,
    labels: &[Vec<usize>],
) -> Result<Submodule, CodeError> {
    let size = bs.blocks()[0].len();
    let mut rows = Vec::new();
    for g in p0.generators() {
        let mut v = Vec::with_capacity(bs.num_blocks());
        for (bi, b) in bs.blocks().iter().enumerate() {
            let img = g.apply(b[0]);
            if bs.block_of(img) != bi {
                return Err(CodeError::Invalid("group does not fix every block".into()));
            }
            let j = labels[bi][img];
            if j == usize::MAX {
                return Err(CodeError::Invalid("block restriction is not cyclic of prime order".into()));
            }
            for &x in b {
                let lx = labels[bi][x];
                let ly = labels[bi][g.apply(x)];
                if lx == usize::MAX || ly == usize::MAX || (lx + j) % size != ly {
                    return Err(CodeError::Invalid("block restriction is not a translation".into()));
                }
            }
            v.push(j as u64);
        }
        rows.push(v);
    }
    Submodule::new(size as u64, bs.num_blocks(), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_of_standard_codes() {
        let r = Zn::new(3);
        let rep = CyclicCode::repetition(3, 3);
        assert_eq!(rep.generator().unwrap(), &ModPoly::from_ints(r, &[1, 1, 1]));
        let sz = CyclicCode::sum_zero(3, 3);
        assert_eq!(sz.generator().unwrap(), &ModPoly::from_ints(r, &[-1, 1]));
        assert_eq!(sz.dimension(), 2);
        let z = CyclicCode::zero(3, 3);
        assert_eq!(z.generator().unwrap(), &ModPoly::x_n_minus_one(r, 3));
    }

    #[test]
    fn degeneracy_examples() {
        assert!(is_degenerate(&Submodule::full(3, 3)));
        assert!(!is_degenerate(&Submodule::repetition(3, 3)));
        let c = Submodule::new(3, 4, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(degeneracy(&c), Some(2));
        for m in [Submodule::sum_zero(5, 5), Submodule::repetition(5, 5)] {
            assert!(!is_degenerate(&m));
        }
    }

    #[test]
    fn from_generator_matches_dimension() {
        let r = Zn::new(2);
        let g = ModPoly::from_ints(r, &[1, 1, 0, 1]);
        let c = CyclicCode::from_generator(7, &g).unwrap();
        assert_eq!(c.dimension(), 4);
        assert_eq!(c.generator().unwrap(), &g);
    }
}
