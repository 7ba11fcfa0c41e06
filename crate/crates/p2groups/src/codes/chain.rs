use serde::Serialize;

use super::cyclic::{multiplier, shift, CyclicCode};
use super::module::Submodule;
use super::poly::ModPoly;
use super::ring::{is_prime, prime_power, Zn};
use super::CodeError;
use crate::perm::Permutation;

/// Components of `C <= (Z_n)^len` under `Z_n = prod Z_{q^t}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrtComponent {
    pub prime: u64,
    pub exponent: u32,
    pub module: Submodule,
}

pub fn crt_decompose(c: &Submodule) -> Vec<CrtComponent> {
    let n = c.modulus();
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2;
    while m > 1 {
        if m.is_multiple_of(d) {
            let mut qt = 1;
            let mut t = 0;
            while m.is_multiple_of(d) {
                m /= d;
                qt *= d;
                t += 1;
            }
            let rows: Vec<Vec<u64>> = c
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x % qt).collect())
                .collect();
            out.push(CrtComponent {
                prime: d,
                exponent: t,
                module: Submodule::new(qt, c.len(), &rows).unwrap(),
            });
        }
        d += 1;
    }
    out
}

/// The unique monic lift of `f | x^p - 1 (mod q)` dividing `x^p - 1 (mod q^t)`.
pub fn hensel_lift(f: &ModPoly, p: usize, t: u32) -> Result<ModPoly, CodeError> {
    let q = f.ring().n;
    if !is_prime(q) {
        return Err(CodeError::NotPrime(q));
    }
    if (p as u64).is_multiple_of(q) {
        return Err(CodeError::Invalid("x^p - 1 is not separable when q divides p".into()));
    }
    if !f.is_monic() {
        return Err(CodeError::Invalid("factor must be monic".into()));
    }
    let fq = Zn::new(q);
    if !f.divides(&ModPoly::x_n_minus_one(fq, p))? {
        return Err(CodeError::Invalid("factor does not divide x^p - 1".into()));
    }
    let mut cur: Vec<u64> = f.coeffs().to_vec();
    let mut qk = q;
    for _ in 1..t {
        let next = qk * q;
        let ring = Zn::new(next);
        let big = ModPoly::new(ring, cur.clone());
        let (h, r) = ModPoly::x_n_minus_one(ring, p).divrem(&big)?;
        let rq = ModPoly::new(fq, r.coeffs().iter().map(|&c| (c / qk) % q).collect());
        let hq = ModPoly::new(fq, h.coeffs().to_vec());
        let (g, _, inv_h) = f.ext_gcd(&hq)?;
        if g.degree() != Some(0) {
            return Err(CodeError::Arithmetic("factor and cofactor are not coprime".into()));
        }
        let u = rq.mul(&inv_h).rem(f)?;
        for (i, c) in cur.iter_mut().enumerate() {
            *c = (*c + qk * u.coeff(i)) % next;
        }
        qk = next;
    }
    let out = ModPoly::new(Zn::new(qk), cur);
    if !out.divides(&ModPoly::x_n_minus_one(Zn::new(qk), p))? {
        return Err(CodeError::Arithmetic("lift failed".into()));
    }
    Ok(out)
}

/// `C_i = phi_i(C intersect q^i (Z_{q^t})^len)` for `i < t`.
pub fn chain_of_code(c: &Submodule) -> Result<Vec<Submodule>, CodeError> {
    let n = c.modulus();
    let (q, t) = prime_power(n).ok_or(CodeError::NotPrimePower(n))?;
    let len = c.len();
    let mut out = Vec::with_capacity(t as usize);
    let mut qi = 1;
    for _ in 0..t {
        let part = c.intersect(&Submodule::full(n, len).scale(qi));
        let rows: Vec<Vec<u64>> = part
            .rows()
            .iter()
            .map(|r| r.iter().map(|&x| (x / qi) % q).collect())
            .collect();
        out.push(Submodule::new(q, len, &rows)?);
        qi *= q;
    }
    Ok(out)
}

/// Group under which a chain is required to be invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainGroup {
    /// `Z_p` acting by the shift.
    Cyclic,
    /// `Z_p` together with the given multipliers.
    Affine(Vec<u64>),
    Alternating,
    Symmetric,
}

impl ChainGroup {
    pub fn coordinate_generators(&self, p: usize) -> Result<Vec<Permutation>, CodeError> {
        let mut gens = Vec::new();
        match self {
            ChainGroup::Cyclic => gens.push(shift(p)),
            ChainGroup::Affine(ms) => {
                gens.push(shift(p));
                for &a in ms {
                    gens.push(multiplier(p, a)?);
                }
            }
            ChainGroup::Alternating => {
                gens.extend(crate::perm::PermGroup::alternating(p).generators().iter().cloned())
            }
            ChainGroup::Symmetric => {
                gens.extend(crate::perm::PermGroup::symmetric(p).generators().iter().cloned())
            }
        }
        Ok(gens)
    }
}

/// Rebuilds the code over `Z_{q^t}` whose chain is `chain`: the sum of
/// `q^i L_i`, where `L_i` lifts `C_i` (directly for the repetition code and
/// its dual, by Hensel-lifted generator polynomials otherwise).
pub fn code_from_chain(q: u64, t: u32, chain: &[Submodule], g: &ChainGroup) -> Result<Submodule, CodeError> {
    if !is_prime(q) {
        return Err(CodeError::NotPrime(q));
    }
    if chain.len() != t as usize || t == 0 {
        return Err(CodeError::Invalid("chain length must equal the exponent".into()));
    }
    let p = chain[0].len();
    let gens = g.coordinate_generators(p)?;
    for (i, ci) in chain.iter().enumerate() {
        if ci.modulus() != q || ci.len() != p {
            return Err(CodeError::Invalid("chain members must be codes over F_q of equal length".into()));
        }
        if !gens.iter().all(|s| ci.is_invariant_under(s)) {
            return Err(CodeError::Invalid(format!("chain member {i} is not invariant")));
        }
        if i + 1 < chain.len() && !chain[i + 1].contains_module(ci) {
            return Err(CodeError::Invalid("chain is not increasing".into()));
        }
    }
    let n = q.pow(t);
    let mut total = Submodule::zero(n, p);
    let mut qi = 1;
    for ci in chain {
        let lifted = lift_code(ci, n, t, g)?;
        total = total.sum(&lifted.scale(qi));
        qi *= q;
    }
    Ok(total)
}

fn lift_code(c: &Submodule, n: u64, t: u32, g: &ChainGroup) -> Result<Submodule, CodeError> {
    let q = c.modulus();
    let p = c.len();
    if c.is_zero() {
        return Ok(Submodule::zero(n, p));
    }
    if c.is_full() {
        return Ok(Submodule::full(n, p));
    }
    if *c == Submodule::repetition(q, p) {
        return Ok(Submodule::repetition(n, p));
    }
    if *c == Submodule::sum_zero(q, p) {
        return Ok(Submodule::sum_zero(n, p));
    }
    if matches!(g, ChainGroup::Alternating | ChainGroup::Symmetric) {
        return Err(CodeError::Invalid("alternating or symmetric chains only admit 0, R, dual R, full".into()));
    }
    let cc = CyclicCode::from_module(c.clone())?;
    let f = cc.generator().expect("prime modulus");
    let lift = hensel_lift(f, p, t)?;
    Ok(CyclicCode::from_generator(p, &lift)?.module().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_of_scaled_full_space() {
        let c = Submodule::full(6, 3).scale(2);
        let parts = crt_decompose(&c);
        assert_eq!(parts.len(), 2);
        assert!(parts[0].module.is_zero());
        assert!(parts[1].module.is_full());
        assert_eq!(parts.iter().map(|c| c.module.order()).product::<u128>(), c.order());
    }

    #[test]
    fn hensel_examples() {
        let f = ModPoly::from_ints(Zn::new(2), &[1, 1, 0, 1]);
        let g = hensel_lift(&f, 7, 2).unwrap();
        assert_eq!(g, ModPoly::from_ints(Zn::new(4), &[-1, 1, 2, 1]));
        let phi5 = ModPoly::from_ints(Zn::new(2), &[1, 1, 1, 1, 1]);
        let h = hensel_lift(&phi5, 5, 3).unwrap();
        assert_eq!(h, ModPoly::from_ints(Zn::new(8), &[1, 1, 1, 1, 1]));
    }

    #[test]
    fn chain_examples_mod_four() {
        let rep2 = Submodule::repetition(2, 3);
        let dual2 = Submodule::sum_zero(2, 3);
        let rep4 = Submodule::repetition(4, 3);
        assert_eq!(chain_of_code(&rep4).unwrap(), vec![rep2.clone(), rep2.clone()]);
        let c = code_from_chain(2, 2, &[Submodule::zero(2, 3), rep2.clone()], &ChainGroup::Symmetric).unwrap();
        assert_eq!(c, rep4.scale(2));
        let d = code_from_chain(2, 2, &[dual2.clone(), dual2], &ChainGroup::Symmetric).unwrap();
        assert_eq!(d, Submodule::sum_zero(4, 3));
    }

    fn round_trip(q: u64, t: u32, p: usize) {
        let codes: Vec<Submodule> = crate::codes::invariant_cyclic_codes(p, q, &[])
            .unwrap()
            .iter()
            .map(|c| c.to_module().unwrap())
            .collect();
        let mut chains: Vec<Vec<Submodule>> = codes.iter().map(|c| vec![c.clone()]).collect();
        for _ in 1..t {
            let mut next = Vec::new();
            for ch in &chains {
                for c in &codes {
                    if c.contains_module(ch.last().unwrap()) {
                        let mut e = ch.clone();
                        e.push(c.clone());
                        next.push(e);
                    }
                }
            }
            chains = next;
        }
        let mut seen = std::collections::HashSet::new();
        for ch in &chains {
            let c = code_from_chain(q, t, ch, &ChainGroup::Cyclic).unwrap();
            assert!(c.is_invariant_under(&shift(p)));
            assert_eq!(&chain_of_code(&c).unwrap(), ch);
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn chain_round_trips() {
        round_trip(2, 2, 7);
        round_trip(2, 3, 7);
        round_trip(3, 2, 13);
    }
}
