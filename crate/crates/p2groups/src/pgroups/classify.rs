use serde::Serialize;

use super::recognize::{recognize_p_subgroup, PFamily};
use crate::error::{require_prime, Error, Result};
use crate::perm::{BlockSystem, PermGroup};

/// Case of the classification of transitive groups of degree `p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ClassificationCase {
    /// Case 1.
    DoublyTransitive,
    /// Case 2; `affine` when the Sylow subgroup is normal (so `G <= AGL(2, p)`),
    /// otherwise `G` has an imprimitive index-2 subgroup inside `S_p x S_p`.
    SimplyPrimitive { affine: bool },
    /// Case 3: the Sylow subgroup is normal.
    NormalSylow,
    /// Case 4: Sylow `Z_p x Z_p`, and `G` preserves two transverse block systems.
    ProductAction { first: BlockSystem, second: BlockSystem },
    /// Case 5: Sylow `P'_{p-1}`.
    DualOvergroup,
    /// Sylow subgroup `Z_p wr Z_p` and not normal; described by wreath
    /// tuples instead.
    WreathSylow,
}

impl ClassificationCase {
    /// Case number, with 0 for the wreath-Sylow groups.
    pub fn number(&self) -> u8 {
        match self {
            ClassificationCase::DoublyTransitive => 1,
            ClassificationCase::SimplyPrimitive { .. } => 2,
            ClassificationCase::NormalSylow => 3,
            ClassificationCase::ProductAction { .. } => 4,
            ClassificationCase::DualOvergroup => 5,
            ClassificationCase::WreathSylow => 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub case: ClassificationCase,
    pub order: String,
    pub sylow: Option<PFamily>,
    pub sylow_normal: Option<bool>,
    pub sylow_group: Option<PermGroup>,
}

pub fn classify_transitive(g: &PermGroup, seed: u64) -> Result<Classification> {
    let n = g.degree();
    let p = (n as f64).sqrt().round() as usize;
    if p * p != n {
        return Err(Error::Invalid(format!("degree {n} is not a prime square")));
    }
    require_prime(p)?;
    if !g.is_transitive() {
        return Err(Error::Invalid("group is not transitive".into()));
    }
    let order = g.order().to_string();
    if g.is_doubly_transitive() {
        return Ok(Classification {
            case: ClassificationCase::DoublyTransitive,
            order,
            sylow: None,
            sylow_normal: None,
            sylow_group: None,
        });
    }
    let sylow = g.sylow(p as u128, None, seed)?;
    let kind = recognize_p_subgroup(&sylow)?.family;
    let normal = sylow.is_normal_in(g);
    let case = if g.is_primitive() {
        ClassificationCase::SimplyPrimitive { affine: normal }
    } else {
        match kind {
            PFamily::Wreath if !normal => ClassificationCase::WreathSylow,
            PFamily::Elementary(1) => {
                let systems = g.block_systems_with(p);
                let pair = systems
                    .iter()
                    .enumerate()
                    .flat_map(|(i, a)| systems[i + 1..].iter().map(move |b| (a, b)))
                    .find(|(a, b)| a.is_transverse_to(b))
                    .ok_or_else(|| Error::Search("no transverse pair of block systems".into()))?;
                ClassificationCase::ProductAction {
                    first: pair.0.clone(),
                    second: pair.1.clone(),
                }
            }
            PFamily::Elementary(i) if i == p - 1 => ClassificationCase::DualOvergroup,
            _ => {
                if !normal {
                    return Err(Error::Search(format!("Sylow subgroup {kind} is not normal")));
                }
                ClassificationCase::NormalSylow
            }
        }
    };
    Ok(Classification {
        case,
        order,
        sylow: Some(kind),
        sylow_normal: Some(normal),
        sylow_group: Some(sylow),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroups::standard::{affine_map, build_p, gamma, rho1, rho2, tau, Family};
    use crate::perm::Permutation;

    #[test]
    fn examples() {
        let s9 = PermGroup::symmetric(9);
        assert_eq!(classify_transitive(&s9, 1).unwrap().case.number(), 1);
        let n = PermGroup::new(9, vec![tau(3), gamma(3, 3), gamma(3, 2)]).unwrap();
        let n = n.with_generators(&[Permutation::from_fn(9, |x| x * 2 % 9).unwrap()]);
        let c = classify_transitive(&n, 1).unwrap();
        assert_eq!(n.order(), 162);
        assert_eq!(c.case, ClassificationCase::NormalSylow);
        assert_eq!(c.sylow, Some(PFamily::Wreath));
        let n5 = PermGroup::new(25, vec![tau(5), gamma(5, 2), gamma(5, 3)]).unwrap();
        let n5 = n5.with_generators(&[Permutation::from_fn(25, |x| x * 2 % 25).unwrap()]);
        let c5 = classify_transitive(&n5, 1).unwrap();
        assert_eq!(c5.case, ClassificationCase::NormalSylow);
        assert_eq!(c5.sylow, Some(PFamily::Cyclic(3)));
        let swap = affine_map(3, [[0, 1], [1, 0]], [0, 0]).unwrap();
        let flip = affine_map(3, [[2, 0], [0, 1]], [0, 0]).unwrap();
        let g = PermGroup::new(9, vec![rho1(3), rho2(3), flip]).unwrap();
        assert_eq!(classify_transitive(&g, 1).unwrap().case.number(), 4);
        let rot = affine_map(3, [[0, 2], [1, 0]], [0, 0]).unwrap();
        let prim = PermGroup::new(9, vec![rho1(3), rho2(3), rot]).unwrap();
        assert_eq!(classify_transitive(&PermGroup::new(9, vec![rho1(3), rho2(3), swap]).unwrap(), 1).unwrap().case.number(), 4);
        assert_eq!(
            classify_transitive(&prim, 1).unwrap().case,
            ClassificationCase::SimplyPrimitive { affine: true }
        );
        let s3wr = PermGroup::new(9, vec![tau(3), gamma(3, 3), affine_map(3, [[2, 0], [0, 1]], [0, 0]).unwrap()])
            .unwrap()
            .with_generators(&[Permutation::from_cycles(9, &[vec![0, 3]]).unwrap()]);
        assert_eq!(s3wr.order(), 1296);
        assert_eq!(classify_transitive(&s3wr, 1).unwrap().case, ClassificationCase::WreathSylow);
        let d = build_p(5, 4, Family::Elementary).unwrap();
        assert_eq!(classify_transitive(&d, 1).unwrap().case, ClassificationCase::DualOvergroup);
    }
}
