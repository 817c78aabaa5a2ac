//! JSON schemas shipped with the binary, one document per subcommand.
//!
//! Each document validates a job at the root; `$defs.output` describes the
//! result.

use serde_json::Value;

fn source(name: &str) -> &'static str {
    match name {
        "padic-log" => include_str!("../schemas/padic-log.json"),
        "graph-project" => include_str!("../schemas/graph-project.json"),
        "volog-assemble" => include_str!("../schemas/volog-assemble.json"),
        "volog-ddlog" => include_str!("../schemas/volog-ddlog.json"),
        "volog-iterated" => include_str!("../schemas/volog-iterated.json"),
        "height-local" => include_str!("../schemas/height-local.json"),
        "fpn-split" => include_str!("../schemas/fpn-split.json"),
        other => panic!("no schema for {other}"),
    }
}

pub fn for_subcommand(name: &str) -> Value {
    serde_json::from_str(source(name)).expect("shipped schemas are valid JSON")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_subcommand_has_a_schema_with_output() {
        for name in crate::SUBCOMMANDS {
            let s = for_subcommand(name);
            assert!(s["$defs"]["output"].is_object(), "{name}");
        }
    }
}
