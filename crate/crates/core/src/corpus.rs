//! The bundled sample programs.

/// `(file name, source)` for every bundled program, sorted by name.
pub const CORPUS: &[(&str, &str)] = &[
    ("belnap_builtins.mv", include_str!("../corpus/belnap_builtins.mv")),
    ("belnap_reach.mv", include_str!("../corpus/belnap_reach.mv")),
    ("belnap_sample.mv", include_str!("../corpus/belnap_sample.mv")),
    ("belnap_strata.mv", include_str!("../corpus/belnap_strata.mv")),
    ("confidence_doubt.mv", include_str!("../corpus/confidence_doubt.mv")),
    ("confidence_trust.mv", include_str!("../corpus/confidence_trust.mv")),
    ("fuzzy_layers.mv", include_str!("../corpus/fuzzy_layers.mv")),
    ("fuzzy_recommend.mv", include_str!("../corpus/fuzzy_recommend.mv")),
    ("interval_facts.mv", include_str!("../corpus/interval_facts.mv")),
    ("interval_sensor.mv", include_str!("../corpus/interval_sensor.mv")),
    ("paraconsistency.mv", include_str!("../corpus/paraconsistency.mv")),
    ("single_fact.mv", include_str!("../corpus/single_fact.mv")),
];

/// The source of a bundled program by file name.
pub fn source(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
