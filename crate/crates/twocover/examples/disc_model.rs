//! Disc model of a cluster picture: the complete collection of integral
//! discs, their tree, the v invariants, and what the special fiber looks
//! like above each disc. Run with `cargo run --example disc_model`.

use twocover::{
    build_cluster_picture, build_disc_collection, classify_fiber, parse_cover_spec,
};

fn main() -> twocover::Result<()> {
    let spec = parse_cover_spec(
        r#"{
            "labels": ["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"],
            "depths": [
                ["r1", "r5", "1"], ["r1", "r6", "3"], ["r1", "r7", "3"],
                ["r5", "r6", "1"], ["r5", "r7", "1"], ["r6", "r7", "3"],
                ["r2", "r3", "2"], ["r2", "r4", "2"], ["r3", "r4", "2"]
            ],
            "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1
        }"#,
    )?;
    let pic = build_cluster_picture(&spec.branch)?;
    println!("cluster picture: {}", pic.render_ascii()?);

    let dc = build_disc_collection(&pic)?;
    println!("\ndisc tree ({} discs):", dc.len());
    print!("{}", dc.tree().render_text(&dc, &pic));

    println!("fiber above each disc:");
    for id in dc.ids() {
        let disc = dc.disc(id);
        let fiber = classify_fiber(&dc, &pic, id)?;
        println!(
            "  {{{}}} at depth {}: case {}, {} component(s), multiplicity {}, {} node(s) from half-step twins{}",
            pic.canonical_id(disc.origin),
            disc.depth,
            fiber.kind.case_number(),
            fiber.component_count,
            fiber.multiplicity,
            fiber.self_chains,
            if fiber.exceptional {
                ", contracted in the minimal model"
            } else {
                ""
            }
        );
    }

    // A twin of half-integer depth: its deepest disc carries two lines
    // crossing at one point.
    let spec = parse_cover_spec(
        r#"{
            "labels": ["r1", "r2", "r3", "r4"],
            "depths": [["r1", "r2", "3/2"]],
            "v_phi": 0, "e": 2, "ram_index": 2, "residue_char": 3, "genus_Y": 1
        }"#,
    )?;
    let pic = build_cluster_picture(&spec.branch)?;
    let dc = build_disc_collection(&pic)?;
    println!("\nhalf-integer twin picture: {}", pic.render_ascii()?);
    for id in dc.ids() {
        let fiber = classify_fiber(&dc, &pic, id)?;
        println!(
            "  disc at depth {}: case {}, {} component(s)",
            dc.disc(id).depth,
            fiber.kind.case_number(),
            fiber.component_count
        );
    }
    Ok(())
}
