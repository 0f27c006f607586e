pub mod gadget;
pub mod origin;
pub mod paft;
pub mod sat;
pub mod verify;

pub use gadget::{
    plain_transit, sampled_losses, verify_crossing_gadget, GadgetReport, TransitOutcome,
};
pub use origin::{Origin, OriginMap, Role};
pub use paft::{paft_to_network, super_sink, super_source, GadgetParams, ReductionError};
pub use sat::{sat_target, sat_to_network};
pub use verify::{
    verify_reduction, Certificate, ReductionInput, VerificationReport, VerifyError, VerifyOptions,
};
