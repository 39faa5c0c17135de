//! The standard seven-torus quotient by three commuting involutions: its
//! twelve singular three-tori, their local models, and the action of the
//! extra involution on the component set.
//!
//! Run with `cargo run --example orbifold_singular_set`.

use g2kummer::g2form::G2Form;
use g2kummer::orbifold::{
    local_model, preserves_phi, singular_components, standard_t7_c2c2c2,
    symmetry_action_on_components,
};

fn main() {
    let (group, lambda) = standard_t7_c2c2c2();
    let form = G2Form::standard();
    for (i, g) in group.generators.iter().enumerate() {
        println!(
            "generator {i} preserves the three-form: {}",
            preserves_phi(g, &form)
        );
    }
    println!(
        "extra involution preserves the three-form: {}",
        preserves_phi(&lambda, &form)
    );

    let comps = singular_components(&group, 64).unwrap();
    println!("\nsingular set: {} components", comps.len());
    for c in &comps {
        println!(
            "  {}  stratum {}  dim {}  isotropy {}  ({} subtori merged)",
            c.id,
            c.stratum,
            c.dimension,
            c.isotropy_label,
            c.tori.len()
        );
    }

    let lm = local_model(&group, &comps[0], 64).unwrap();
    println!(
        "\nlocal model along {}: isotropy {}, induced class {}, normal action trivial on the resolved fibre: {}",
        comps[0].id, lm.gamma, lm.g_alpha_class, lm.rho_trivial
    );

    let action = symmetry_action_on_components(&group, &comps, &lambda, &form, 64).unwrap();
    println!(
        "\ninvolution action on components: {} fixed, {} two-cycles",
        action.fixed.iter().filter(|&&f| f).count(),
        action.two_cycles()
    );
    println!("permutation: {:?}", action.permutation);
    println!(
        "(the involution pairs the unmerged subtori of the second and third strata, \
         but every merged component is fixed)"
    );
}
