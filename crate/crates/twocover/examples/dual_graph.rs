//! Metric dual graph and its Frobenius action: run with
//! `cargo run --example dual_graph`.

use twocover::{
    build_cluster_picture, build_dual_graph, frobenius_automorphism, parse_cover_spec, subdivide,
};

fn main() -> twocover::Result<()> {
    // Two twins under an uebereven root: two component vertices joined by
    // two chains of length two, and a Frobenius that swaps the twins.
    let spec = parse_cover_spec(
        r#"{
            "labels": ["r1", "r2", "r3", "r4"],
            "depths": [["r1", "r2", "1"], ["r3", "r4", "1"]],
            "v_phi": 0, "e": 1, "ram_index": 1, "residue_char": 3, "genus_Y": 1,
            "frobenius": {"r1": "r3", "r2": "r4", "r3": "r1", "r4": "r2"},
            "eps": {"r1,r2": 1, "r3,r4": 1, "r1,r2,r3,r4": 1}
        }"#,
    )?;
    let pic = build_cluster_picture(&spec.branch)?;
    let g = build_dual_graph(&pic)?;

    println!("vertices:");
    for v in &g.vertices {
        println!("  {}", v.name);
    }
    println!("chains:");
    for c in &g.chains {
        println!(
            "  {}: {} -- {} length {}",
            c.id, g.vertices[c.a].name, g.vertices[c.b].name, c.length
        );
    }
    println!("betti: {}", g.betti());

    let aut = frobenius_automorphism(&g, &pic, &spec.galois)?;
    println!("\nFrobenius action:");
    for (i, &(j, sign)) in aut.chain_map.iter().enumerate() {
        println!(
            "  {} -> {}{}",
            g.chains[i].id,
            g.chains[j].id,
            if sign < 0 { " (reversed)" } else { "" }
        );
    }

    let unit = subdivide(&g);
    println!(
        "\nunit subdivision: {} vertices, {} edges, betti {}",
        unit.vertex_count(),
        unit.edges.len(),
        unit.betti()
    );

    println!("\nDOT:\n{}", g.export_dot());
    Ok(())
}
