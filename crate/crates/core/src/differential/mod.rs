//! The exterior algebra `Omega^*(F)` and annihilators of differential forms.

mod form;
mod generators;
mod subspace;

pub use form::{
    d_of_element, d_operator, index_tuples, log_form, wedge, wedge_of_differentials, DifferentialForm, IndexTuple,
};
pub use generators::{
    ann_closed_disjoint, ann_closed_mixed, ann_closed_power, expand_generator_set, expand_generator_set_with,
    expand_nu_omega_span, set_wedge_nonzero, subsets, transversal_wedges, transversals, GeneratorItem, GeneratorSet,
    GeneratorStyle, SetWedgeSpec,
};
pub use subspace::{ann_bruteforce, ann_bruteforce_with, subspace_equal, SubspaceBasis};
