//! Semi-stability verdicts and reduction types for a handful of inputs:
//! run with `cargo run --example semistability`.

use twocover::{
    build_cluster_picture, check_semistable, parse_cover_spec, reduction_type,
};

const INPUTS: &[(&str, &str)] = &[
    (
        "all branch points spread out (good reduction)",
        r#"{
            "labels": ["r1", "r2", "r3", "r4"],
            "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1
        }"#,
    ),
    (
        "odd vanishing order on the base component",
        r#"{
            "labels": ["r1", "r2"],
            "v_phi": 1, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1
        }"#,
    ),
    (
        "deep twin (semistable, nontrivial picture)",
        r#"{
            "labels": ["r1", "r2", "r3", "r4", "r5", "r6"],
            "depths": [["r5", "r6", "2"]],
            "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1
        }"#,
    ),
    (
        "odd principal cluster invariant (not semistable)",
        r#"{
            "labels": ["r1", "r2", "r3", "r4", "r5", "r6"],
            "depths": [["r1", "r2", "1"], ["r1", "r3", "1"], ["r2", "r3", "1"]],
            "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1
        }"#,
    ),
    (
        "wildly ramified branch field",
        r#"{
            "labels": ["r1", "r2", "r3", "r4"],
            "depths": [["r1", "r2", "1/3"]],
            "v_phi": 1, "e": 3, "ram_index": 3, "residue_char": 3, "genus_Y": 1
        }"#,
    ),
];

fn main() -> twocover::Result<()> {
    for (title, text) in INPUTS {
        let spec = parse_cover_spec(text)?;
        let pic = build_cluster_picture(&spec.branch)?;
        let verdict = check_semistable(&pic, &spec.galois, &spec.branch)?;
        let reduction = reduction_type(&pic, &spec.branch, &verdict);
        println!("{title}");
        println!("  picture: {}", pic.render_ascii()?);
        println!(
            "  semistable: {}",
            if verdict.semistable { "yes" } else { "no" }
        );
        for v in &verdict.violations {
            println!("  violation: {v}");
        }
        println!("  reduction: {}", reduction.kind);
        if let Some(note) = &reduction.note {
            println!("  note: {note}");
        }
        println!();
    }
    Ok(())
}
