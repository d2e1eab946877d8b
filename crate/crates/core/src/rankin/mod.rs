//! Rankin-Selberg integrals of explicit Whittaker functions.

pub mod engine;
pub mod oracle;
pub mod verify;

pub use engine::{
    b_k, i0, integrate_over_k, k_cells, rankin_selberg_i, z_factor, z_factor_central, CellPoint,
    EngineConfig, IntegralCell, KIntegral, Phi, RsIntegral,
};
pub use oracle::{c_k_bruteforce, oracle_check, OracleReport, OracleRow};
pub use verify::{
    is_dual_up_to_twist, l_factor, pair_evaluators, q_power, verify_main_theorem, Checks,
    Diagnostics, SupportChecks, VerificationReport, VerifyConfig,
};
