//! Group definitions by wreath recursion, their validation, and cycle
//! diagrams.
//!
//! A [`GroupSpec`] lists named generators over a d-letter alphabet; each
//! generator has a root permutation and one section word per source
//! letter. The `.grp` text format is parsed by [`GroupSpec::parse`] and
//! printed canonically by [`GroupSpec::to_text`]; parsing the printed
//! form reproduces the value exactly.

mod parse;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::automorphism::{self, Automorphism};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::Perm;

/// One term of a word: a generator index with an integer exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub gen: usize,
    pub exp: i64,
}

/// A word in the generators of a particular [`GroupSpec`].
/// The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord(Vec<Term>);

impl GroupWord {
    pub fn identity() -> GroupWord {
        GroupWord(Vec::new())
    }

    pub fn new(terms: Vec<Term>) -> GroupWord {
        GroupWord(terms)
    }

    pub fn single(gen: usize) -> GroupWord {
        GroupWord(vec![Term { gen, exp: 1 }])
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn is_trivial_word(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the word is literally a single generator (exponent one).
    pub fn as_single_generator(&self) -> Option<usize> {
        match self.0.as_slice() {
            [Term { gen, exp: 1 }] => Some(*gen),
            _ => None,
        }
    }
}

/// A named generator: root permutation plus one section word per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub root_perm: Perm,
    pub sections: Vec<GroupWord>,
}

/// A self-similar group presented by wreath recursions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    d: usize,
    generators: Vec<Generator>,
}

impl GroupSpec {
    /// Builds and validates a specification.
    pub fn new(d: usize, generators: Vec<Generator>) -> Result<GroupSpec> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("alphabet size {d} is below 2")));
        }
        let mut names = BTreeSet::new();
        for gen in &generators {
            if !names.insert(gen.name.clone()) {
                return Err(Error::DuplicateGenerator(gen.name.clone()));
            }
        }
        for gen in &generators {
            if gen.root_perm.degree() != d {
                return Err(Error::InvalidSpec(format!(
                    "root permutation of `{}` has degree {}, expected {d}",
                    gen.name,
                    gen.root_perm.degree()
                )));
            }
            if gen.sections.len() != d {
                return Err(Error::InvalidSpec(format!(
                    "`{}` has {} section words, expected {d}",
                    gen.name,
                    gen.sections.len()
                )));
            }
            for word in &gen.sections {
                for term in word.terms() {
                    if term.gen >= generators.len() {
                        return Err(Error::UnknownName(format!("#{}", term.gen)));
                    }
                }
            }
        }
        Ok(GroupSpec { d, generators })
    }

    /// Parses the `.grp` text format.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        parse::parse_spec(text)
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// The machine of a single generator.
    pub fn generator_machine(&self, index: usize, limits: &Limits) -> Result<Automorphism> {
        if index >= self.generators.len() {
            return Err(Error::UnknownGenerator(format!("#{index}")));
        }
        automorphism::evaluate(self, &GroupWord::single(index), limits)
    }

    /// Parses a word such as `a*b^-2` against this spec's generator names.
    pub fn parse_word(&self, text: &str) -> Result<GroupWord> {
        parse::parse_word(self, text)
    }

    /// Canonical text rendering of a word.
    pub fn format_word(&self, word: &GroupWord) -> String {
        if word.terms().is_empty() {
            return String::from("1");
        }
        let mut out = String::new();
        for (i, term) in word.terms().iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            out.push_str(&self.generators[term.gen].name);
            if term.exp != 1 {
                out.push('^');
                out.push_str(&format!("{}", term.exp));
            }
        }
        out
    }

    /// Canonical printer for the `.grp` format. `parse(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {}\n", self.d);
        for gen in &self.generators {
            out.push_str("gen ");
            out.push_str(&gen.name);
            out.push_str(" = ");
            let cycles = gen.root_perm.cycles();
            if cycles.is_empty() {
                out.push('e');
            } else {
                for cycle in cycles {
                    out.push('(');
                    for (i, p) in cycle.iter().enumerate() {
                        if i > 0 {
                            out.push(' ');
                        }
                        out.push_str(&format!("{p}"));
                    }
                    out.push(')');
                }
            }
            if gen.sections.iter().any(|w| !w.is_trivial_word()) {
                out.push_str(" (");
                for (i, word) in gen.sections.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&self.format_word(word));
                }
                out.push(')');
            }
            out.push('\n');
        }
        out
    }

    /// The cycle diagram of the generators' first-level permutations.
    ///
    /// One face per cycle of length at least two; fixed points contribute
    /// no face. Duplicate generators contribute duplicate faces (multiset
    /// semantics).
    pub fn cycle_diagram(&self) -> CycleDiagram {
        let mut faces = Vec::new();
        for (idx, gen) in self.generators.iter().enumerate() {
            for cycle in gen.root_perm.cycles() {
                faces.push(Face {
                    generator: idx,
                    generator_name: gen.name.clone(),
                    letters: cycle,
                });
            }
        }
        CycleDiagram { d: self.d, faces }
    }

    /// Checks the automaton-group and kneading conditions.
    pub fn validate(&self) -> ValidationReport {
        let mut diagnostics = Vec::new();

        // Automaton group: every section word is a single generator or trivial.
        let is_automaton_group = self.generators.iter().all(|g| {
            g.sections
                .iter()
                .all(|w| w.is_trivial_word() || w.as_single_generator().is_some())
        });
        if !is_automaton_group {
            diagnostics.push(String::from(
                "sections are not all single generators; the kneading conditions \
                 below are evaluated literally but presume an automaton group",
            ));
        }

        // Condition (i): each generator is the section of exactly one
        // (generator, letter) pair. Checked over the generators themselves,
        // not their inverses.
        let mut witness_i = Vec::new();
        for (target, tgen) in self.generators.iter().enumerate() {
            let mut sources = Vec::new();
            for (src, sgen) in self.generators.iter().enumerate() {
                for (letter, word) in sgen.sections.iter().enumerate() {
                    if word.as_single_generator() == Some(target) {
                        sources.push((self.generators[src].name.clone(), letter as u32));
                    }
                }
            }
            if sources.len() != 1 {
                diagnostics.push(format!(
                    "condition (i) fails for `{}`: {} occurrences as a section",
                    tgen.name,
                    sources.len()
                ));
                witness_i.push(KneadingWitnessI {
                    target: tgen.name.clone(),
                    sources,
                });
            }
        }
        let kneading_i = witness_i.is_empty();

        // Condition (ii): per cycle of each root permutation, at most one
        // vertex carries a non-trivial section.
        let mut witness_ii = Vec::new();
        for gen in &self.generators {
            let mut cycles = gen.root_perm.cycles();
            for p in 0..self.d as u32 {
                if gen.root_perm.apply(p) == p {
                    cycles.push(vec![p]);
                }
            }
            for cycle in cycles {
                let nontrivial: Vec<u32> = cycle
                    .iter()
                    .copied()
                    .filter(|&v| !gen.sections[v as usize].is_trivial_word())
                    .collect();
                if nontrivial.len() > 1 {
                    diagnostics.push(format!(
                        "condition (ii) fails for `{}`: cycle {:?} has {} non-trivial sections",
                        gen.name,
                        cycle,
                        nontrivial.len()
                    ));
                    witness_ii.push(KneadingWitnessII {
                        generator: gen.name.clone(),
                        cycle,
                        nontrivial,
                    });
                }
            }
        }
        let kneading_ii = witness_ii.is_empty();

        // Condition (iii) is tree-likeness of the cycle diagram.
        let diagram = self.cycle_diagram();
        let is_tree_like = is_tree_like(&diagram);
        if !is_tree_like {
            diagnostics.push(String::from("cycle diagram is not tree-like"));
        }

        ValidationReport {
            is_automaton_group,
            kneading_i,
            kneading_ii,
            kneading_iii: is_tree_like,
            is_tree_like,
            witness_i,
            witness_ii,
            diagnostics,
        }
    }
}

/// A 2-cell of the cycle diagram: one cycle of one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub generator: usize,
    pub generator_name: String,
    /// The cycle, starting at its least letter.
    pub letters: Vec<u32>,
}

/// The cycle diagram: letters as 0-cells, one polygon per cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDiagram {
    pub d: usize,
    pub faces: Vec<Face>,
}

/// Tree-likeness (contractibility) of a cycle diagram.
///
/// Computed twice and cross-checked: the bipartite face/letter incidence
/// graph must be a tree covering every letter, and the Euler count
/// `V - E + F` of the CW complex must be 1 with a connected 1-skeleton.
pub fn is_tree_like(diagram: &CycleDiagram) -> bool {
    let (incidence_tree, euler) = tree_like_routes(diagram);
    debug_assert_eq!(incidence_tree, euler);
    incidence_tree && euler
}

/// Both internal tree-likeness computations, exposed for cross-checking.
pub fn tree_like_routes(diagram: &CycleDiagram) -> (bool, bool) {
    let d = diagram.d;
    let f = diagram.faces.len();
    let nodes = d + f;
    // Union-find over letters [0..d) and faces [d..d+f).
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = 0usize;
    for (fi, face) in diagram.faces.iter().enumerate() {
        for &letter in &face.letters {
            edges += 1;
            let a = find(&mut parent, letter as usize);
            let b = find(&mut parent, d + fi);
            if a != b {
                parent[a] = b;
            }
        }
    }
    let components = (0..nodes)
        .map(|x| find(&mut parent, x))
        .collect::<BTreeSet<_>>()
        .len();
    let connected = components == 1;

    let incidence_tree = connected && nodes == edges + 1;
    // CW complex: d letters as 0-cells, each length-r polygon contributes
    // r 1-cells and one 2-cell, so chi = d - edges + f.
    let euler_ok = connected && (d as i64 - edges as i64 + f as i64) == 1;
    (incidence_tree, euler_ok)
}

/// Witness for a condition (i) failure: a generator with zero or several
/// occurrences as a first-level section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingWitnessI {
    pub target: String,
    pub sources: Vec<(String, u32)>,
}

/// Witness for a condition (ii) failure: a cycle with several non-trivial
/// sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingWitnessII {
    pub generator: String,
    pub cycle: Vec<u32>,
    pub nontrivial: Vec<u32>,
}

/// Outcome of [`GroupSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_automaton_group: bool,
    pub kneading_i: bool,
    pub kneading_ii: bool,
    /// Condition (iii) is tree-likeness by definition.
    pub kneading_iii: bool,
    pub is_tree_like: bool,
    pub witness_i: Vec<KneadingWitnessI>,
    pub witness_ii: Vec<KneadingWitnessII>,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    /// Automaton condition plus all three kneading conditions.
    pub fn all_pass(&self) -> bool {
        self.is_automaton_group && self.kneading_i && self.kneading_ii && self.kneading_iii
    }
}

/// Resolves a generator name, for callers holding only a name.
pub fn generator_index(spec: &GroupSpec, name: &str) -> Result<usize> {
    spec.generator_index(name)
        .ok_or_else(|| Error::UnknownGenerator(String::from(name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basilica() -> GroupSpec {
        GroupSpec::parse("alphabet 2\ngen a = (0 1) (b, 1)\ngen b = e (a, 1)").unwrap()
    }

    #[test]
    fn basilica_parses_and_round_trips() {
        let spec = basilica();
        assert_eq!(spec.arity(), 2);
        assert_eq!(spec.generators().len(), 2);
        assert_eq!(GroupSpec::parse(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn missing_sections_default_to_trivial() {
        let spec = GroupSpec::parse("alphabet 2\ngen a = (0 1)").unwrap();
        assert!(spec.generators()[0].sections.iter().all(GroupWord::is_trivial_word));
    }

    #[test]
    fn letters_out_of_range_are_rejected() {
        match GroupSpec::parse("alphabet 2\ngen a = (0 2)") {
            Err(Error::Arity { letter: 2, d: 2, .. }) => {}
            other => panic!("expected arity error, got {other:?}"),
        }
    }

    #[test]
    fn basilica_satisfies_all_kneading_conditions() {
        let report = basilica().validate();
        assert!(report.is_automaton_group);
        assert!(report.kneading_i && report.kneading_ii && report.kneading_iii);
        assert!(report.all_pass());
        let diagram = basilica().cycle_diagram();
        assert_eq!(diagram.faces.len(), 1);
        assert_eq!(diagram.faces[0].letters, vec![0, 1]);
        assert_eq!(diagram.faces[0].generator_name, "a");
    }

    #[test]
    fn grigorchuk_fails_condition_i() {
        let spec = GroupSpec::parse(
            "alphabet 2\ngen a = (0 1)\ngen b = e (a, c)\ngen c = e (a, d)\ngen d = e (1, b)",
        )
        .unwrap();
        let report = spec.validate();
        assert!(report.is_automaton_group);
        assert!(!report.kneading_i);
        // a occurs as a section of both b and c at letter 0.
        let w = report.witness_i.iter().find(|w| w.target == "a").unwrap();
        assert_eq!(
            w.sources,
            vec![(String::from("b"), 0), (String::from("c"), 0)]
        );
    }

    #[test]
    fn two_sections_on_one_cycle_fail_condition_ii() {
        let spec = GroupSpec::parse("alphabet 2\ngen a = (0 1) (a, a)").unwrap();
        let report = spec.validate();
        assert!(!report.kneading_ii);
        assert_eq!(report.witness_ii[0].nontrivial, vec![0, 1]);
    }

    #[test]
    fn tree_likeness_examples() {
        // Basilica: one face over both letters, a path in the incidence graph.
        assert!(is_tree_like(&basilica().cycle_diagram()));
        // Two faces over the same two letters: a 4-cycle in the incidence graph.
        let spec = GroupSpec::parse("alphabet 2\ngen a = (0 1)\ngen b = (0 1)").unwrap();
        assert!(!is_tree_like(&spec.cycle_diagram()));
        // No faces at all: two isolated letters.
        let spec = GroupSpec::parse("alphabet 2\ngen a = e").unwrap();
        assert!(!is_tree_like(&spec.cycle_diagram()));
        // Two faces of length 2 on a 4-letter alphabet: disconnected.
        let spec = GroupSpec::parse("alphabet 4\ngen g = (0 1)(2 3)").unwrap();
        let diagram = spec.cycle_diagram();
        assert_eq!(diagram.faces.len(), 2);
        assert!(!is_tree_like(&diagram));
        let (a, b) = tree_like_routes(&diagram);
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_generators_rejected() {
        match GroupSpec::parse("alphabet 2\ngen a = e\ngen a = (0 1)") {
            Err(Error::DuplicateGenerator(name)) => assert_eq!(name, "a"),
            other => panic!("expected duplicate generator, got {other:?}"),
        }
    }

    #[test]
    fn forward_references_resolve() {
        let spec = GroupSpec::parse("alphabet 2\ngen b = e (a, 1)\ngen a = (0 1)").unwrap();
        assert_eq!(spec.generators()[0].sections[0].as_single_generator(), Some(1));
    }

    #[test]
    fn word_parsing_and_formatting() {
        let spec = basilica();
        let w = spec.parse_word("a*b^-2*a^3").unwrap();
        assert_eq!(spec.format_word(&w), "a*b^-2*a^3");
        assert_eq!(spec.format_word(&GroupWord::identity()), "1");
        assert!(spec.parse_word("q").is_err());
    }
}
