use thiserror::Error;

use crate::cyclotomic::CycError;
use crate::galois::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cyc(#[from] CycError),

    #[error("extension degree must be even")]
    RejectOddDegree,
    #[error("lambda must be nonzero")]
    RejectZeroLambda,
    #[error("lambda must lie in the half-degree subfield")]
    RejectLambdaOutsideSubfield,
    #[error("lambdas are linearly dependent over GF(2)")]
    RejectDependentLambdas,
    #[error("t-vector violates t1 = 1 and wt(t) >= 3: {0:?}")]
    TVectorInvariant([u8; 4]),
    #[error("(l1 + l2)^-1 = l1^-1 + l2^-1 holds")]
    RejectInverseIdentityHolds,
    #[error("w1, w2 must be distinct and nonzero")]
    RejectBadWPair,
    #[error("w1, w2 or w1 + w2 fails a trace condition")]
    RejectWConditionFails,
    #[error("t must be nonzero")]
    RejectZeroT,
    #[error("a must be nonzero")]
    RejectZeroA,
    #[error("base function is balanced")]
    RejectBalancedBase,
    #[error("base function is not weakly regular plateaued")]
    RejectNotWeaklyRegular,
    #[error("all quadratic coefficients are zero")]
    RejectAllZero,
    #[error("construction is defined over GF(2^n) only")]
    RejectNotBinary,
    #[error("function needs an odd characteristic")]
    RejectCharTwo,
    #[error("value table: {0}")]
    RejectBadTable(String),

    #[error("beta is outside the code's beta domain")]
    RejectBetaOutsideDomain,
    #[error("constant term is only meaningful for augmented codes")]
    RejectCForNonAugmented,
    #[error("enumeration needs {0} word operations, above the 2^34 bound")]
    RejectTooLargeForEnumeration(u128),
    #[error("criterion is stated for p = 2 only")]
    RejectOddP,
    #[error("criterion needs p > 3")]
    RejectSmallP,
    #[error("criterion needs p = 3")]
    RejectNonTernary,
    #[error("f is affine: f(x) - Tr(wx) is constant for w = #{0}")]
    RejectAffineFunction(u32),
    #[error("augmented codes use the full field as beta domain")]
    RejectAugmentedSubspace,
    #[error("criterion does not apply: {0}")]
    NotApplicable(String),
    #[error("orbit sum is not a rational integer divisible by p")]
    AssertNonRationalOrbitSum,

    #[error("parameters outside the formula's domain: {0}")]
    RejectOutOfDomain(String),
    #[error("search budget must be at least 1")]
    RejectZeroBudget,
    #[error("work estimate {0} exceeds the cap")]
    RejectWorkCap(u64),
    #[error("{0}")]
    Parse(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
