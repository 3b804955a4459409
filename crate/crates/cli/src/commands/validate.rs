use std::path::Path;

use selfsim_core::group::ValidationReport;
use selfsim_core::Error;
use serde_json::json;

use crate::output::print_json;
use crate::{Ctx, Format};

pub fn run(ctx: &Ctx, path: &Path) -> Result<u8, Error> {
    let (spec, _) = super::load_spec(path)?;
    let report = spec.validate();
    match ctx.format_or_json() {
        Format::Text => {
            println!("automaton group: {}", report.is_automaton_group);
            println!("kneading (i):    {}", report.kneading_i);
            println!("kneading (ii):   {}", report.kneading_ii);
            println!("kneading (iii):  {}", report.kneading_iii);
            for d in &report.diagnostics {
                println!("note: {d}");
            }
        }
        _ => print_json(&report_json(&report)),
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

pub fn report_json(report: &ValidationReport) -> serde_json::Value {
    json!({
        "is_automaton_group": report.is_automaton_group,
        "kneading_i": report.kneading_i,
        "kneading_ii": report.kneading_ii,
        "kneading_iii": report.kneading_iii,
        "is_tree_like": report.is_tree_like,
        "witnesses": {
            "kneading_i": report.witness_i.iter().map(|w| json!({
                "target": w.target,
                "sources": w.sources.iter().map(|(h, v)| json!([h, v])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "kneading_ii": report.witness_ii.iter().map(|w| json!({
                "generator": w.generator,
                "cycle": w.cycle,
                "nontrivial": w.nontrivial,
            })).collect::<Vec<_>>(),
        },
        "diagnostics": report.diagnostics,
    })
}
