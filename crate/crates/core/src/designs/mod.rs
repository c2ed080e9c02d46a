//! Cover-free families, perfect hash families and their size formulas.
//!
//! An `(n,(s,r))`-CFF is a set of rows over `n` variables such that for any
//! `s + r` distinct indices and any split of them into `s` zeros and `r`
//! ones, some row shows exactly that pattern. An `(n,q,d)`-PHF is a family
//! of maps `[n] -> [q]` such that every `d`-subset of `[n]` is mapped
//! injectively by at least one member.

mod bounds;
mod cff;
mod phf;

pub use bounds::{cff_lower_bound, n_s_r, phf_size_target, size_report, SizeReport};
pub use cff::{
    cff_row_count, cff_work, design_for, random_cff, random_cff_verified, verify_cff, DesignMatrix,
    Verification, CFF_GUARD,
};
pub use phf::{
    build_phf_all_subsets, grow_phf, phf_count, phf_g, random_phf, verify_phf, HashFamily,
    PhfBuild, PHF_GUARD,
};
