use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("reward must be positive and finite, got {0}")]
    InvalidReward(f64),
    #[error("headcount must be at least 1")]
    InvalidHeadcount,
    #[error("tau must be non-negative, got {0}")]
    InvalidTau(f64),
    #[error("gamma({k}) = {value} violates 0 <= gamma(k) <= reward/k")]
    GammaOutOfRange { k: usize, value: f64 },
    #[error("gamma(1) = {gamma1} must equal the reward {reward}")]
    GammaOneNotReward { gamma1: f64, reward: f64 },
    #[error("empty gamma vector")]
    EmptyGamma,
    #[error("profile supports {available} contestants but {required} are needed")]
    ProfileTooShort { available: usize, required: usize },
    #[error("no tau given for headcount {0}")]
    MissingTau(usize),
    #[error("headcount {k} outside 1..={n_max}")]
    HeadcountOutOfRange { k: usize, n_max: usize },
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("profiles in one strategy set must share reward and length")]
    MismatchedProfiles,
    #[error("at least one contest is required")]
    NoContests,
    #[error("contest or strategy set {0} lacks monotonically decreasing utility")]
    NotMdu(usize),
    #[error("non-MDU participation equilibria are only supported for two contests (got {0})")]
    UnsupportedNonMdu(usize),
    #[error("closed form yields p[{index}] = {value} < 0; the support is a proper subset")]
    ClosedFormInapplicable { index: usize, value: f64 },
    #[error("no symmetric participation equilibrium found on the finest scan grid")]
    NoEquilibriumFound,
    #[error("a game needs at least two designers (got {0})")]
    TooFewDesigners(usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("strategy set {0} is empty")]
    EmptyStrategySet(usize),
    #[error("designer {designer}: profile reward {profile} differs from the designer's reward {reward}")]
    RewardMismatch { designer: usize, profile: f64, reward: f64 },
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("search space of {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("strategy set {0} has no maximal-rent-dissipation member")]
    EmptyMrd(usize),
    #[error("invalid risk transform: {0}")]
    InvalidRiskProfile(&'static str),
    #[error("risk-averse mode requires unit rewards (got {0})")]
    RiskRequiresUnitReward(f64),
    #[error("tau grid value {0} outside [0, 2]")]
    TauOutsideRiskRange(f64),
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(&'static str),
}
