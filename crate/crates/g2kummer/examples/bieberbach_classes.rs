//! The six flat three-dimensional group classes: torsion-freeness, eligible
//! mapping-torus axes, and the base-orbifold singularity table.
//!
//! Run with `cargo run --example bieberbach_classes`.

use g2kummer::bieberbach::{
    base_orbifold, eligible_axes, torsion_free_check, BieberbachGroup, ClassTag,
};

fn main() {
    println!(
        "{:<7} {:>5} {:>8} {:>24} {:>6} {:>14}",
        "class", "|H|", "torsion", "axes (height <= 1)", "n_f", "isotropy"
    );
    for class in ClassTag::ALL {
        let g = BieberbachGroup::canonical(class);
        let tf = torsion_free_check(&g).is_ok();
        let axes = eligible_axes(&g, 1);
        let base = base_orbifold(&g, [1, 0, 0]).unwrap();
        let mut orders: Vec<usize> = base
            .singular_points
            .iter()
            .map(|p| p.isotropy_order)
            .collect();
        orders.sort();
        println!(
            "{:<7} {:>5} {:>8} {:>24} {:>6} {:>14}",
            class.name(),
            class.order(),
            if tf { "free" } else { "NOT" },
            format!("{} vectors", axes.len()),
            base.n_f,
            format!("{orders:?} ({:?})", base.topology),
        );
    }

    // the second eligible axis of the half-turn class gives a free quotient
    let c2 = BieberbachGroup::canonical(ClassTag::C2);
    let klein = base_orbifold(&c2, [0, 1, 0]).unwrap();
    println!(
        "\nhalf-turn class along the reflected axis: n_f = {}, topology {:?}",
        klein.n_f, klein.topology
    );
}
