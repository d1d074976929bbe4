//! Component group and Tamagawa number, with the spanning-tree crosscheck:
//! run with `cargo run --example tamagawa`.

use twocover::{parse_cover_spec, tamagawa_detailed, PipelineOptions};

const TWIN_LOOP: &str = r#"{
    "labels": ["r1", "r2", "r3", "r4", "r5", "r6"],
    "depths": [["r5", "r6", "2"]],
    "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1,
    "eps": {"r1,r2,r3,r4,r5,r6": 1, "r5,r6": EPS}
}"#;

fn main() -> twocover::Result<()> {
    // A single twin of relative depth two puts a loop of length four on
    // the dual graph; the component group is cyclic of order four and the
    // component sign of the twin decides whether Frobenius negates it.
    for eps in ["1", "-1"] {
        let spec = parse_cover_spec(&TWIN_LOOP.replace("EPS", eps))?;
        let detail = tamagawa_detailed(&spec, &PipelineOptions::default())?;
        println!("twin loop with eps = {eps}:");
        println!(
            "  Phi = {}",
            detail
                .invariant_factors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" x ")
        );
        println!("  action on Phi = {}", detail.action_on_phi.display());
        println!("  fixed points = {}", detail.tamagawa);
        println!(
            "  spanning trees of the subdivided graph = {} (equals |Phi|)",
            detail.spanning_trees
        );
        println!();
    }
    Ok(())
}
