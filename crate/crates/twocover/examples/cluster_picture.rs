//! Build a cluster picture from explicit rational branch points and print
//! its structure: run with `cargo run --example cluster_picture`.

use num_rational::Ratio;
use twocover::{branch_from_rational_points, build_cluster_picture, RationalPoint};

fn main() -> twocover::Result<()> {
    // Branch points of a degree-two cover, read off at p = 3. One point
    // sits at infinity.
    let points: Vec<RationalPoint> = [0i64, 1, 10, -8, 3, 27, -27]
        .iter()
        .map(|&n| RationalPoint::Finite(Ratio::from_integer(n)))
        .chain(std::iter::once(RationalPoint::Infinity))
        .collect();
    let labels: Vec<String> = (1..=points.len()).map(|i| format!("r{i}")).collect();
    let (branch, warnings) = branch_from_rational_points(labels, &points, 3, 0, 1, 1, 1)?;
    for w in &warnings {
        println!("warning: {w}");
    }

    println!("pairwise 3-adic depths:");
    for (i, a) in branch.labels().iter().enumerate() {
        for (j, b) in branch.labels().iter().enumerate().skip(i + 1) {
            let d = branch.depth_ij(i, j);
            if !d.is_zero() {
                println!("  d({a}, {b}) = {d}");
            }
        }
    }

    let pic = build_cluster_picture(&branch)?;
    println!("\ncluster picture: {}", pic.render_ascii()?);
    println!("clusters:");
    for id in pic.ids_canonical() {
        let c = pic.cluster(id);
        let flags = pic.classify(id);
        println!(
            "  {{{}}} depth {}, v = {}, principal: {}, even: {}, uebereven: {}",
            pic.canonical_id(id),
            c.depth,
            pic.v_of(id),
            flags.principal,
            flags.even,
            flags.uebereven,
        );
        if let Ok(delta) = pic.relative_depth(id) {
            println!("    relative depth {delta}");
        }
    }
    Ok(())
}
