//! The finite-dimensional model of the deformation operator: the
//! period-uniform estimate sweep with its Fourier oracle, and the guarded
//! contraction solver with the production exponents.
//!
//! Run with `cargo run --example fueter_estimate`.

use g2kummer::fueter::{
    contraction_solve, estimate_constant, fixed_point_iterate, ContractionProblem, NormKind,
    SpectralOperator,
};

fn main() {
    println!("period sweep of the uniform estimate (two-dimensional kernel model):");
    println!(
        "{:>8} {:>12} {:>12} {:>7}",
        "L", "empirical", "oracle", "trials"
    );
    for exp in 0..7 {
        let period = 2f64.powi(exp);
        let op = SpectralOperator::model(2, &[1.0, 2.0, 3.0, 4.0], period);
        let rep = estimate_constant(&op, NormKind::L2, 8, 0, 32, 8).unwrap();
        println!(
            "{:>8} {:>12.6} {:>12.6} {:>7}",
            period, rep.empirical, rep.oracle, rep.trials
        );
    }

    let op = SpectralOperator::model(2, &[1.0, 2.0, 3.0, 4.0], 1.0);
    println!(
        "\nkernel dimension of the model: {}",
        op.kernel_dimension().unwrap()
    );

    println!("\ncontraction sweep (quadratic scalar model, beta = 5/2, gamma = 1):");
    println!(
        "{:>10} {:>14} {:>12} {:>6}",
        "t", "|v(t)|", "|v|/t^(3/2)", "iters"
    );
    for kexp in 2..=10 {
        let t = 2f64.powi(-kexp);
        let p = ContractionProblem {
            c1: 1.0,
            c2: 0.25,
            c3: 0.25,
            beta: 2.5,
            gamma: 1.0,
            t,
        };
        let e = p.c1 * t.powf(p.beta);
        let out = contraction_solve(&p, e, 500).unwrap();
        println!(
            "{:>10.6} {:>14.6e} {:>12.6} {:>6}",
            t,
            out.solution.abs(),
            out.solution.abs() / t.powf(1.5),
            out.trace.values.len()
        );
    }

    println!("\nguard rails:");
    let hot = ContractionProblem {
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
        beta: 2.5,
        gamma: 1.0,
        t: 0.25,
    };
    println!(
        "  t above threshold: {:?}",
        contraction_solve(&hot, 1e-3, 100).err().unwrap()
    );
    let blowup = fixed_point_iterate(|v| -(10.0 * v * v + 1.0), 0.0, 100, 1e-15);
    println!("  divergent raw iteration: {:?}", blowup.err().unwrap());
}
