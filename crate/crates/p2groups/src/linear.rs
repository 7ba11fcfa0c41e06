//! Projective spaces over finite fields and the action of `PSL(d, q)` on
//! their points.

use crate::codes::ring::{Gf, Ring};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Points of `PG(d - 1, q)`, each normalized so its first nonzero
/// coordinate is 1, in lexicographic order.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Gf,
    dim: usize,
    points: Vec<Vec<u64>>,
}

impl ProjectiveSpace {
    pub fn new(field: Gf, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Invalid("projective space needs dimension at least 2".into()));
        }
        let q = field.order();
        let total = (q as u128).pow(dim as u32);
        if total > 1 << 20 {
            return Err(Error::Unsupported(format!("{q}^{dim} vectors")));
        }
        let mut points = Vec::new();
        for code in 1..total as u64 {
            let mut k = code;
            let mut v = vec![0u64; dim];
            for c in v.iter_mut().rev() {
                *c = k % q;
                k /= q;
            }
            if v.iter().find(|&&c| c != 0) == Some(&1) {
                points.push(v);
            }
        }
        points.sort();
        Ok(ProjectiveSpace { field, dim, points })
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn normalize(&self, v: &[u64]) -> Option<Vec<u64>> {
        let lead = *v.iter().find(|&&c| c != 0)?;
        let inv = self.field.inv(lead)?;
        Some(v.iter().map(|&c| self.field.mul(c, inv)).collect())
    }

    pub fn index_of(&self, v: &[u64]) -> Option<usize> {
        let n = self.normalize(v)?;
        self.points.binary_search(&n).ok()
    }

    /// The permutation `x -> x M` (row vectors) of the points.
    pub fn matrix_action(&self, m: &[Vec<u64>]) -> Result<Permutation> {
        let f = &self.field;
        let img: Vec<usize> = self
            .points
            .iter()
            .map(|v| {
                let w: Vec<u64> = (0..self.dim)
                    .map(|j| (0..self.dim).fold(0, |acc, i| f.add(acc, f.mul(v[i], m[i][j]))))
                    .collect();
                self.index_of(&w)
                    .ok_or_else(|| Error::Invalid("matrix is singular".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Permutation::from_images(img)?)
    }

    /// Images of the elementary transvections `I + a E_ij`, with `a` running
    /// over an additive basis of `F_q`; they generate `SL(d, q)`.
    pub fn psl_generators(&self) -> Result<Vec<Permutation>> {
        let r = self.field.characteristic();
        let t = self.field.degree();
        let mut gens = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                for k in 0..t {
                    let mut m = vec![vec![0u64; self.dim]; self.dim];
                    for (d, row) in m.iter_mut().enumerate() {
                        row[d] = 1;
                    }
                    m[i][j] = r.pow(k);
                    gens.push(self.matrix_action(&m)?);
                }
            }
        }
        gens.sort();
        gens.dedup();
        Ok(gens)
    }

    pub fn psl(&self) -> Result<PermGroup> {
        Ok(PermGroup::new(self.len(), self.psl_generators()?)?)
    }
}

/// `|PSL(d, q)|`.
pub fn psl_order(d: u32, q: u64) -> u128 {
    let q = q as u128;
    let mut order = q.pow(d * (d - 1) / 2);
    for i in 2..=d {
        order *= q.pow(i) - 1;
    }
    let g = crate::codes::ring::gcd_u64(d as u64, (q - 1) as u64) as u128;
    order / g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_projective_groups() {
        for (q, d, n) in [(2u64, 2usize, 3usize), (4, 2, 5), (2, 3, 7), (3, 3, 13)] {
            let ps = ProjectiveSpace::new(Gf::new(q).unwrap(), d).unwrap();
            assert_eq!(ps.len(), n);
            let g = ps.psl().unwrap();
            assert_eq!(g.order(), psl_order(d as u32, q));
            assert!(g.is_doubly_transitive());
        }
    }
}
