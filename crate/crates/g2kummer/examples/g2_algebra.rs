//! Exact quaternion and three-form arithmetic: multiplication, the cross
//! product, the associator identity, and the induced rotation homomorphism.
//!
//! Run with `cargo run --example g2_algebra`.

use g2kummer::g2form::{vec7_basis, vec7_dot, vec7_zero, G2Form, DIM};
use g2kummer::quat::{lambda_plus, quat_mul, Quat, Rotation4};
use g2kummer::rat::rat;

fn main() {
    let g2 = G2Form::standard();

    println!("quaternion relations:");
    let (i, j) = (Quat::unit_i(), Quat::unit_j());
    println!("  i*j = {:?}", quat_mul(i, j).coords());
    println!("  (i+j)(i-j) = {:?}", quat_mul(i.add(j), i.sub(j)).coords());

    println!("\nthree-form pairing (phi ^ psi = 7 vol):");
    let top = g2.phi.wedge(&g2.psi);
    println!(
        "  coefficient on the volume form: {}",
        top.coeff(&[0, 1, 2, 3, 4, 5, 6])
    );

    println!("\ncross products of coordinate vectors:");
    for (a, b) in [(0usize, 1usize), (0, 3), (1, 5)] {
        let w = g2.cross(&vec7_basis(a), &vec7_basis(b));
        let pretty: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        println!("  e{} x e{} = ({})", a + 1, b + 1, pretty.join(", "));
    }

    println!("\nassociator identity on a rational triple:");
    let u = [
        rat(1, 2),
        rat(3, 1),
        rat(-1, 5),
        rat(0, 1),
        rat(2, 1),
        rat(7, 3),
        rat(-1, 1),
    ];
    let v = [
        rat(2, 3),
        rat(-1, 1),
        rat(4, 1),
        rat(1, 5),
        rat(0, 1),
        rat(1, 1),
        rat(-3, 2),
    ];
    let w = [
        rat(0, 1),
        rat(1, 1),
        rat(3, 4),
        rat(1, 1),
        rat(-1, 2),
        rat(2, 1),
        rat(5, 1),
    ];
    let lhs = g2.associator(&u, &v, &w);
    let uvw = g2.cross(&g2.cross(&u, &v), &w);
    let mut rhs = vec7_zero();
    for a in 0..DIM {
        rhs[a] = uvw[a] + vec7_dot(&v, &w) * u[a] - vec7_dot(&u, &w) * v[a];
    }
    println!(
        "  [u,v,w] == (u x v) x w + <v,w>u - <u,w>v : {}",
        lhs == rhs
    );

    println!("\ninduced rotations on the imaginary part:");
    for (sign, l, r, name) in [
        (-1i64, Quat::unit_i(), Quat::unit_i(), "q -> -iqi"),
        (1, Quat::unit_i(), Quat::unit_i(), "q ->  iqi"),
        (1, Quat::unit_j(), Quat::unit_j(), "q ->  jqj"),
    ] {
        let rot = Rotation4::sandwich(sign, l, r).unwrap();
        let ind = lambda_plus(&rot).unwrap();
        let rows: Vec<String> = (0..3)
            .map(|rr| {
                (0..3)
                    .map(|cc| ind.mat.at(rr, cc).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        println!("  {name}  =>  [{}]", rows.join("; "));
    }
}
