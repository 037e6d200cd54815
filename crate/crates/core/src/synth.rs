//! Seeded synthetic benchmark with a planted link rule.
//!
//! Each interpretation has students, professors and papers. Every paper has
//! one student and one professor author, and every student writes with the
//! same number of distinct professors. The target `advised_by(S,P)` holds
//! exactly when `S` and `P` share a paper; positions and phases are noise.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Domain of the planted benchmark. `advised_by` is fully determined by the
/// `on_same_paper` background relation.
pub const PLANTED_DOMAIN: &str = "\
signature student(id::self)::extensional.
signature professor(id::self)::extensional.
signature paper(id::self)::extensional.
signature in_phase(s::student, phase::property)::extensional.
signature has_position(p::professor, position::property)::extensional.
signature writes_s(x::paper, s::student)::extensional.
signature writes_p(x::paper, p::professor)::extensional.

signature on_same_paper(s::student, p::professor)::intensional.
on_same_paper(S,P) :- writes_s(X,S), writes_p(X,P).

signature advised_by(s::student, p::professor)::intensional.
advised_by(S,P) :- on_same_paper(S,P).
";

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub interpretations: usize,
    pub students: usize,
    pub professors: usize,
    /// Distinct professors each student writes with; at most `professors`.
    pub coauthors: usize,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            interpretations: 50,
            students: 6,
            professors: 4,
            coauthors: 2,
            seed: 7,
        }
    }
}

/// Fact-file text of the benchmark; identical for identical configs.
pub fn planted_facts(cfg: &PlantedConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = cfg.coauthors.min(cfg.professors);
    let mut out = String::new();
    for i in 0..cfg.interpretations {
        let _ = writeln!(out, "interpretation u{i}.");
        for p in 0..cfg.professors {
            let pos = ["faculty", "adjunct"][rng.gen_range(0..2)];
            let _ = writeln!(out, "professor(p{i}_{p}). has_position(p{i}_{p},{pos}).");
        }
        let profs: Vec<usize> = (0..cfg.professors).collect();
        let mut paper = 0;
        for s in 0..cfg.students {
            let phase = ["pre_quals", "post_quals"][rng.gen_range(0..2)];
            let _ = writeln!(out, "student(s{i}_{s}). in_phase(s{i}_{s},{phase}).");
            for &p in profs.choose_multiple(&mut rng, k) {
                let _ = writeln!(
                    out,
                    "paper(x{i}_{paper}). writes_s(x{i}_{paper},s{i}_{s}). writes_p(x{i}_{paper},p{i}_{p})."
                );
                paper += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::schema::parse_domain;

    #[test]
    fn rule_determines_target() {
        let s = parse_domain(PLANTED_DOMAIN).unwrap();
        let cfg = PlantedConfig {
            interpretations: 3,
            ..PlantedConfig::default()
        };
        let ds = Dataset::from_text(&planted_facts(&cfg), &s).unwrap();
        assert_eq!(ds.interpretations.len(), 3);
        for i in &ds.interpretations {
            assert_eq!(i.atoms_of("advised_by").count(), 12);
            let osp: Vec<_> = i.atoms_of("on_same_paper").map(|a| a.args.clone()).collect();
            let adv: Vec<_> = i.atoms_of("advised_by").map(|a| a.args.clone()).collect();
            assert_eq!(osp, adv);
        }
        assert_eq!(planted_facts(&cfg), planted_facts(&cfg));
    }
}
