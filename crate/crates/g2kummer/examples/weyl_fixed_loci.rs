//! Wall-avoiding fixed loci in ALE deformation spaces: the rank-one and
//! rank-two spaces under the axis involution, and the rank-four space under
//! the commuting pair of involutions.
//!
//! Run with `cargo run --example weyl_fixed_loci` (the rank-four enumeration
//! iterates over all Weyl pairs and takes a few seconds).

use g2kummer::ale::fixed_locus::{fixed_locus, invariant_curve_classes};
use g2kummer::ale::roots::{AdeKind, RootSystem};
use g2kummer::quat::{ImVec, Rotation3};

fn diag(a: i64, b: i64, c: i64) -> Rotation3 {
    Rotation3::from_i64(&[vec![a, 0, 0], vec![0, b, 0], vec![0, 0, c]]).unwrap()
}

fn main() {
    let r2 = diag(1, -1, -1);
    let rp = diag(1, -1, -1);
    let rm = diag(-1, 1, -1);

    for (label, kind, rotations) in [
        (
            "A1 under the axis involution",
            AdeKind::A(1),
            vec![r2.clone()],
        ),
        ("A2 under the axis involution", AdeKind::A(2), vec![r2]),
        ("D4 under the commuting pair", AdeKind::D4, vec![rp, rm]),
    ] {
        let rs = RootSystem::new(kind).unwrap();
        println!("== {label} (Weyl order {})", rs.weyl_group().len());
        let t0 = std::time::Instant::now();
        let comps = fixed_locus(&rotations, &rs, None);
        println!(
            "   {} maximal families ({} off the walls) in {:?}",
            comps.len(),
            comps.iter().filter(|c| !c.wall_bound()).count(),
            t0.elapsed()
        );
        for c in comps.iter().take(4) {
            let curves = if c.wall_bound() {
                "wall-bound".to_string()
            } else {
                let cs = invariant_curve_classes(c, &rs, ImVec::basis(0)).unwrap();
                format!("{} curve(s) along the first axis", cs.len())
            };
            println!("   dim {}: {}", c.dim(), curves);
        }
        if comps.len() > 4 {
            println!("   ... and {} more families", comps.len() - 4);
        }
    }
}
