//! The standard transitive `p`-subgroups of `S_{p^2}`, their recognition,
//! and the classification of transitive groups of degree `p^2`.

pub mod catalog;
pub mod classify;
pub mod recognize;
pub mod standard;

pub use recognize::{
    check_transitive_p_group, recognize_p_subgroup, standardize, wreath_tests, PFamily, PSubgroupKind,
    Standardization, WreathTests,
};
pub use standard::{
    affine_map, binomial_row, build_p, gamma, group_from_code, rho1, rho2, standard_generator, tau, z, z_vector,
    Family, GeneratorName,
};
pub use catalog::{degree_p_catalog, mathieu_11, mathieu_23, projective_parameters, psl_2_11_on_11, relabel_to_shift, DegreePGroup};
pub use classify::{classify_transitive, Classification, ClassificationCase};
