use std::fmt::Write as _;
use std::path::Path;

use selfsim_core::Error;

use crate::{Ctx, DotKind};

pub fn run(_ctx: &Ctx, path: &Path, what: DotKind) -> Result<u8, Error> {
    let (spec, _) = super::load_spec(path)?;
    let mut out = String::new();
    match what {
        DotKind::Automaton => {
            // Moore-style diagram: one node per generator plus the trivial
            // state; edges labelled "in|out" per letter.
            writeln!(out, "digraph automaton {{").unwrap();
            writeln!(out, "  rankdir=LR;").unwrap();
            writeln!(out, "  id [label=\"1\", shape=doublecircle];").unwrap();
            for gen in spec.generators() {
                writeln!(out, "  {0} [label=\"{0}\", shape=circle];", gen.name).unwrap();
            }
            for gen in spec.generators() {
                for (letter, word) in gen.sections.iter().enumerate() {
                    let target = match word.as_single_generator() {
                        Some(idx) => spec.generators()[idx].name.clone(),
                        None if word.is_trivial_word() => String::from("id"),
                        // Non-automaton sections point at a word node.
                        None => {
                            let label = spec.format_word(word);
                            let node = format!("w_{}_{}", gen.name, letter);
                            writeln!(out, "  {node} [label=\"{label}\", shape=box];").unwrap();
                            node
                        }
                    };
                    writeln!(
                        out,
                        "  {} -> {} [label=\"{}|{}\"];",
                        gen.name,
                        target,
                        letter,
                        gen.root_perm.apply(letter as u32)
                    )
                    .unwrap();
                }
            }
            writeln!(out, "}}").unwrap();
        }
        DotKind::Cycles => {
            writeln!(out, "graph cycles {{").unwrap();
            for letter in 0..spec.arity() {
                writeln!(out, "  l{letter} [label=\"{letter}\", shape=circle];").unwrap();
            }
            for (i, face) in spec.cycle_diagram().faces.iter().enumerate() {
                writeln!(
                    out,
                    "  f{i} [label=\"{}:({})\", shape=box];",
                    face.generator_name,
                    face.letters
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
                for letter in &face.letters {
                    writeln!(out, "  f{i} -- l{letter};").unwrap();
                }
            }
            writeln!(out, "}}").unwrap();
        }
    }
    print!("{out}");
    Ok(0)
}
