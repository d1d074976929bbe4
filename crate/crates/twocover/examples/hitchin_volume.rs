//! Rank-2 spectral flow end to end: discriminant zero locus to normalized
//! volume report. Run with `cargo run --example hitchin_volume`.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use twocover::{
    branch_from_rational_points, hitchin_discriminant_points, tamagawa_detailed, CoverSpec,
    NormalizationInputs, PipelineOptions, RationalPoint, VolumeReport,
};

fn main() -> twocover::Result<()> {
    // A rank-2 spectral cover z^2 = s is cut out by the zero locus of s.
    // After completing the square the trace part vanishes, so the first
    // argument is empty; the rest is the reduced zero locus.
    let zeros: Vec<Ratio<i64>> = [0i64, 1, 10, -8, 3, 27, -27]
        .iter()
        .map(|&n| Ratio::from_integer(n))
        .collect();
    let p = 3;
    let points = hitchin_discriminant_points(&[], &zeros, p as u64)?;

    // The section also vanishes at infinity to odd order here, giving one
    // more branch point.
    let all: Vec<RationalPoint> = points
        .iter()
        .map(|&r| RationalPoint::Finite(r))
        .chain(std::iter::once(RationalPoint::Infinity))
        .collect();
    let labels: Vec<String> = (1..=all.len()).map(|i| format!("r{i}")).collect();
    let (branch, warnings) = branch_from_rational_points(labels, &all, p, 0, 1, 1, 1)?;
    for w in warnings {
        println!("warning: {w}");
    }
    let spec = CoverSpec::with_trivial_galois(branch);

    let detail = tamagawa_detailed(&spec, &PipelineOptions::default())?;
    println!("picture: {}", detail.picture.render_ascii()?);

    // The volume of the fiber over this spectral point: q = 3, the
    // Jacobian has the genus of the cover as its dimension, and the
    // identity-component count and conductor come from elsewhere.
    let normalization = NormalizationInputs::new(
        3,
        4,
        81,
        BigRational::new(BigInt::from(1), BigInt::from(1)),
    )?;
    let report = VolumeReport::from_detail(&detail, Some(&normalization));
    print!("{}", report.render_text());
    println!("\nJSON form:\n{}", report.render_json());
    Ok(())
}
