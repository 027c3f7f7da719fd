//! Constructive engines: counterexample searches, divisibility family
//! builders, and the residue witness machine.

pub mod beta;
pub mod c1;
pub mod c2;
pub mod c3;
pub mod scan;
pub mod thm22;
pub mod thm32;

pub use beta::{beta_window, BetaWindow};
pub use c1::{
    c1_classify, c1_construct, c1_verify, C1Case, C1Verification, Progression,
    ResidueClassification, WitnessPlan,
};
pub use c2::{c2_construct, c2_search, c2_search_seq, C2Case, C2Construction};
pub use c3::{c3_build, c3_verify, c3_verify_seq, C3Check, C3Construction, DigitBound};
pub use scan::{residue_scan, residue_scan_seq, ResidueScan};
pub use thm22::{
    thm22_find_instance, thm22_params, thm22_verify, FloorIdentity, Thm22Params, Thm22Part,
    Thm22Verification,
};
pub use thm32::{thm32_verify, Thm32Check, Thm32Report};
