//! The shipped example catalogue reproduces its expected lower bounds.

use g2kummer::fixtures::{builtin_fixture_dir, catalog, load_fixture, run_counts};
use g2kummer::g2form::G2Form;
use g2kummer::linalg::RatMat;
use g2kummer::quat::{Quat, Rotation4};

#[test]
fn all_examples_reproduce_their_counts() {
    let dir = builtin_fixture_dir();
    let cat = catalog(&dir).unwrap();
    assert_eq!(cat.len(), 5);
    for entry in cat {
        let loaded = load_fixture(&dir.join(&entry.file)).unwrap();
        let (report, per_entry) = run_counts(&loaded).unwrap();
        assert_eq!(
            per_entry, entry.expected_counts,
            "{}: per-entry totals {per_entry:?} != expected {:?}",
            entry.tag, entry.expected_counts
        );
        let total: usize = entry.expected_counts.iter().sum();
        assert_eq!(report.total, total, "{}: total", entry.tag);
        for cert in &report.certificates {
            assert!(cert.checklist.all_pass(), "{}: {:?}", entry.tag, cert);
        }
    }
}

// parse the sandwich display "[-iqi]" into the corresponding rotation of H
fn sandwich_of_display(display: &str) -> Rotation4 {
    let inner = display.trim_start_matches('[').trim_end_matches(']');
    let (sign, rest) = match inner.strip_prefix('-') {
        Some(r) => (-1i64, r),
        None => (1i64, inner),
    };
    let unit = |c: char| match c {
        'i' => Quat::unit_i(),
        'j' => Quat::unit_j(),
        'k' => Quat::unit_k(),
        _ => panic!("unknown unit {c}"),
    };
    let chars: Vec<char> = rest.chars().collect();
    assert_eq!(chars[1], 'q');
    Rotation4::sandwich(sign, unit(chars[0]), unit(chars[2])).unwrap()
}

#[test]
fn fixture_local_models_preserve_the_three_form() {
    // assemble each declared generator as a block map of R^3 x R^4 = R^7 and
    // pull back the standard three-form exactly
    let form = G2Form::standard();
    let dir = builtin_fixture_dir();
    for entry in catalog(&dir).unwrap() {
        let loaded = load_fixture(&dir.join(&entry.file)).unwrap();
        for (cd, doc) in loaded.components.iter().zip(&loaded.doc.components) {
            let basis = cd.g_alpha.lattice.basis_matrix();
            for (rho_lat, rho_doc) in cd.rho_lattice.iter().zip(&doc.rho) {
                let ambient3 = basis.mul(&rho_lat.to_rat()).mul(&basis.inverse().unwrap());
                let normal4 = sandwich_of_display(&rho_doc.display);
                let mut block = RatMat::zeros(7, 7);
                for r in 0..3 {
                    for c in 0..3 {
                        block.set(r, c, ambient3.at(r, c));
                    }
                }
                for r in 0..4 {
                    for c in 0..4 {
                        block.set(3 + r, 3 + c, normal4.mat.at(r, c));
                    }
                }
                assert!(
                    form.is_preserved_by(&block),
                    "{} / {}: generator {} breaks the three-form",
                    entry.tag,
                    cd.id,
                    rho_doc.display
                );
                // consistency: the display's induced rotation matches the
                // declared lattice matrix
                let induced = g2kummer::quat::lambda_plus(&normal4).unwrap();
                let as_lattice =
                    g2kummer::bieberbach::ambient_to_lattice(&cd.g_alpha.lattice, &induced)
                        .unwrap();
                assert_eq!(&as_lattice, rho_lat, "{}: display vs matrix", entry.tag);
            }
        }
    }
}

#[test]
fn certificates_carry_re_derivable_evidence() {
    let dir = builtin_fixture_dir();
    let loaded = load_fixture(&dir.join("ex44.json")).unwrap();
    let (report, _) = run_counts(&loaded).unwrap();
    let cert = &report.certificates[0];
    // the axis of the variant group is normal but not central; the evidence
    // must record both facts
    let item = cert
        .checklist
        .items
        .iter()
        .find(|i| i.name == "axis_eligible")
        .unwrap();
    assert!(item.evidence.contains("normal: true"));
    assert!(item.evidence.contains("central: false"));
    assert_eq!(cert.n_f, 2);
    assert_eq!(cert.copies, 16);
}
