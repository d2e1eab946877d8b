use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("numerator is not a unit times a monomial")]
    NotMonomialMultiple,
    #[error("rational function has no Laurent expansion at X = 0")]
    NotExpandable,
    #[error("value is not integral at ell = {ell}")]
    NotIntegralAtEll { ell: u64 },
    #[error("ell = {0} is not a prime different from p")]
    BadEll(u64),
    #[error("ell must differ from the residual characteristic p = {0}")]
    EllEqualsP(u64),
    #[error("factor index {index} out of range ({count} factors)")]
    FactorIndex { index: usize, count: usize },
    #[error("enumeration too large: {0} candidates exceed the guard")]
    TooLarge(u128),
    #[error("character is not regular (Frobenius-fixed)")]
    NotRegular,
    #[error("ramified GL2 requires odd residual characteristic")]
    EvenResidualCharacteristic,
    #[error("invariant check failed: {0}")]
    NondegeneracyFailure(String),
    #[error("argument of valuation {valuation} exceeds theta depth cap {cap}")]
    DepthExceeded { valuation: i64, cap: u32 },
    #[error("subset descriptor is not of finite level")]
    UnsupportedDescriptor,
    #[error("only the lattice indicator of o^n is supported")]
    UnsupportedPhi,
    #[error("element is not in the group U = (N cap J) H^1")]
    NotInU,
    #[error("element is not in the group bold J")]
    NotInJ,
    #[error("support decomposition window exceeded")]
    WindowExceeded,
    #[error("types belong to different families or sizes")]
    FamilyMismatch,
    #[error("representation is not banal at ell = {ell} (witness {witness})")]
    NonBanal { ell: u64, witness: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
