//! FCC maps between finite prosets and the colimits built from them:
//! coproducts, pushouts, coequalizers, and direct limits of windows.

mod certify;
mod construct;
mod direct;
mod map;

pub use certify::{
    certify_coequalizer, certify_coproduct, certify_pushout, UniversalityFailure, UniversalityReport,
};
pub use construct::{coequalizer, coproduct, pushout, Coequalizer, Coproduct, FccQuotient, Pushout};
pub use direct::{direct_limit_windows, DirectLimitReport};
pub use map::{
    same_proset,
    enumerate_fcc_maps, enumerate_fcc_maps_within, ComponentClass, ComponentKind, ProsetMap, DEFAULT_MAP_BUDGET,
};
