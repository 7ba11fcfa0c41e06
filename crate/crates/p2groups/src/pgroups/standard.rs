use serde::{Deserialize, Serialize};

use crate::codes::Submodule;
use crate::error::{require_prime, Error, Result};
use crate::perm::{PermGroup, Permutation};

/// `a_{i,j} = C(i, j) (-1)^{i-j} mod p` for `0 <= j < p`: the coefficients
/// of `(x - 1)^i`.
pub fn binomial_row(p: usize, i: usize) -> Vec<u64> {
    let p64 = p as u64;
    let mut row = vec![0u64; p];
    let mut c = 1u64;
    for j in 0..=i.min(p - 1) {
        if j > 0 {
            c = c * ((i - j + 1) as u64 % p64) % p64 * inv_mod(j as u64, p64) % p64;
        }
        let sign = if (i - j).is_multiple_of(2) { 1 } else { p64 - 1 };
        row[j] = c * sign % p64;
    }
    row
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// The named permutations of degree `p^2`, in the encoding `(a, b) -> a + b p`
/// where `a` indexes the block `{a + j p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorName {
    /// `x -> x + 1 mod p^2`.
    Tau,
    /// `(a, b) -> (a, b + 1)`.
    Rho1,
    /// `(a, b) -> (a + 1, b)`.
    Rho2,
    /// `(i, b) -> (i, b + 1)`, other blocks fixed.
    Z(usize),
    Gamma(usize),
}

pub fn standard_generator(p: usize, name: GeneratorName) -> Result<Permutation> {
    require_prime(p)?;
    match name {
        GeneratorName::Tau => Ok(tau(p)),
        GeneratorName::Rho1 => Ok(rho1(p)),
        GeneratorName::Rho2 => Ok(rho2(p)),
        GeneratorName::Z(i) if i < p => Ok(z(p, i)),
        GeneratorName::Gamma(i) if (1..=p).contains(&i) => Ok(gamma(p, i)),
        _ => Err(Error::Invalid(format!("index out of range for p = {p}"))),
    }
}

pub fn tau(p: usize) -> Permutation {
    let n = p * p;
    Permutation::from_fn(n, |x| (x + 1) % n).unwrap()
}

pub fn rho1(p: usize) -> Permutation {
    let n = p * p;
    Permutation::from_fn(n, |x| (x + p) % n).unwrap()
}

pub fn rho2(p: usize) -> Permutation {
    Permutation::from_fn(p * p, |x| (x % p + 1) % p + x / p * p).unwrap()
}

pub fn z(p: usize, i: usize) -> Permutation {
    z_vector(p, &unit(p, i))
}

fn unit(p: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; p];
    v[i] = 1;
    v
}

/// `prod z_i^{v_i}`.
pub fn z_vector(p: usize, v: &[u64]) -> Permutation {
    Permutation::from_fn(p * p, |x| {
        let (a, b) = (x % p, x / p);
        a + (b + v[a] as usize % p) % p * p
    })
    .unwrap()
}

/// `prod_j z_j^{a_{p-i, j}}`.
pub fn gamma(p: usize, i: usize) -> Permutation {
    z_vector(p, &binomial_row(p, p - i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `P_i = <tau, gamma_i>`.
    Cyclic,
    /// `P'_i = <rho1, rho2, gamma_i>`.
    Elementary,
}

pub fn build_p(p: usize, i: usize, family: Family) -> Result<PermGroup> {
    require_prime(p)?;
    if !(1..=p).contains(&i) {
        return Err(Error::Invalid(format!("i must lie in 1..={p}")));
    }
    let gens = match family {
        Family::Cyclic => vec![tau(p), gamma(p, i)],
        Family::Elementary => vec![rho1(p), rho2(p), gamma(p, i)],
    };
    Ok(PermGroup::new(p * p, gens)?)
}

/// The group generated by `rho2` and the `z`-vectors of a code of length `p`
/// over `F_p`.
pub fn group_from_code(code: &Submodule) -> Result<PermGroup> {
    let p = code.len();
    require_prime(p)?;
    if code.modulus() != p as u64 {
        return Err(Error::Invalid("code must be over F_p with length p".into()));
    }
    let mut gens = vec![rho2(p)];
    gens.extend(code.rows().iter().map(|r| z_vector(p, r)));
    Ok(PermGroup::new(p * p, gens)?)
}

/// `(a, b) -> (m00 a + m01 b + c0, m10 a + m11 b + c1)`.
pub fn affine_map(p: usize, m: [[u64; 2]; 2], c: [u64; 2]) -> Result<Permutation> {
    let p64 = p as u64;
    let det = (m[0][0] * m[1][1] + p64 * p64 - m[0][1] * m[1][0] % p64) % p64;
    if det == 0 {
        return Err(Error::Invalid("singular matrix".into()));
    }
    Ok(Permutation::from_fn(p * p, |x| {
        let (a, b) = ((x % p) as u64, (x / p) as u64);
        let a2 = (m[0][0] * a + m[0][1] * b + c[0]) % p64;
        let b2 = (m[1][0] * a + m[1][1] * b + c[1]) % p64;
        (a2 + b2 * p64) as usize
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_recursion() {
        for p in [3usize, 5, 7, 11] {
            for i in 0..p {
                let a = binomial_row(p, i);
                let b = binomial_row(p, i + 1);
                for j in 1..p {
                    assert_eq!(a[j - 1], (b[j] + a[j]) % p as u64);
                }
                assert_eq!(a.iter().filter(|&&c| c != 0).count(), i + 1);
            }
        }
    }

    #[test]
    fn named_generators() {
        assert_eq!(z(3, 0).to_cycle_string(), "(0 3 6)");
        assert_eq!(gamma(3, 2), z(3, 0).pow(2).compose(&z(3, 1)));
        assert_eq!(tau(3).to_cycle_string(), "(0 1 2 3 4 5 6 7 8)");
        assert_eq!(tau(3), z(3, 2).compose(&rho2(3)));
        assert_eq!(gamma(5, 5), z(5, 0));
        assert_eq!(gamma(5, 1), rho1(5));
        assert!(standard_generator(3, GeneratorName::Z(3)).is_err());
        assert!(standard_generator(4, GeneratorName::Tau).is_err());
    }

    #[test]
    fn orders() {
        for p in [3usize, 5] {
            for i in 1..=p {
                let a = build_p(p, i, Family::Cyclic).unwrap();
                let b = build_p(p, i, Family::Elementary).unwrap();
                assert_eq!(a.order(), (p as u128).pow(i as u32 + 1));
                assert_eq!(b.order(), (p as u128).pow(i as u32 + 1));
                assert!(a.is_transitive() && b.is_transitive());
                assert_eq!(a.same_group(&b), i == p);
            }
        }
    }
}
