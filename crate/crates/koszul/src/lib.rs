//! The Koszul complex `K` of `A = kQ/J²`, with `K^{-n} = kQ_n ⊕ kQ_{n+1}` and
//! `d(a, b) = (0, a)`, its right `A`-action, the signed left action of
//! `B = (kQ)^opp`, the endomorphism complex and the dual `M = DK`.

mod dual;
mod end;
mod sign;
mod window;

pub use dual::{dualize, ModuleComplex, ModuleSide};
pub use end::{end_cohomology_dims, EndBasis, EndComplexWindow, EndDegree, RhoCheck};
pub use sign::{b_multiply, sign_twist};
pub use window::{build_koszul, KBasis, KoszulReport, KoszulWindow, ResolutionReport};
