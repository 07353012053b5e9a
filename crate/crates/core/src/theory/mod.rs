//! Complexity measures of the marginal, the sample-size calculator, and
//! numeric checks of the supporting inequalities and expansions.

pub mod checks;
pub mod complexity;
pub mod conditionals;

pub use checks::{
    isotropy_check, lemma3_check, lemma3_sweep, lemma4_check, lemma4_sweep, mi_region_check, mi_sweep,
    IsotropyReport, Lemma3Report, Lemma4Report, MiReport, MiRow, RegionSpec, SweepReport, MI_DIAMETERS,
};
pub use complexity::{c_p, m_p, m_p_inverse, max_pdf, profile, sample_bound, ComplexityProfile, SampleBound, TheoryQuery};
pub use conditionals::{LogisticQuadratic, Pchip, SmoothConditional, TestConditional};
