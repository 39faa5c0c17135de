//! Run the whole shipped catalogue: every example fixture is loaded,
//! cross-validated, and counted, and the certified lower bounds are printed
//! next to the expected headline numbers.
//!
//! Run with `cargo run --example count_associatives`.

use g2kummer::fixtures::{builtin_fixture_dir, catalog, load_fixture, run_counts};

fn main() {
    let dir = builtin_fixture_dir();
    let entries = catalog(&dir).expect("catalogue scans");
    println!("{} example fixtures in {}\n", entries.len(), dir.display());
    for entry in entries {
        let loaded = load_fixture(&dir.join(&entry.file)).expect("fixture loads");
        let (report, per_entry) = run_counts(&loaded).expect("counting runs");
        let ok = per_entry == entry.expected_counts;
        println!(
            "{:<6} {:<9} guaranteed {:>3}  per-entry {:?}  expected {:?}  [{}]",
            entry.tag,
            format!("{:?}", report.mechanism),
            report.total,
            per_entry,
            entry.expected_counts,
            if ok { "ok" } else { "MISMATCH" },
        );
        for cert in &report.certificates {
            println!(
                "       {} x{}: axis {:?}, {}, n_f = {}, count {}",
                cert.component, cert.copies, cert.axis, cert.curve, cert.n_f, cert.guaranteed_count
            );
        }
        for note in &loaded.notes {
            println!("       note: {note}");
        }
        println!();
    }
}
