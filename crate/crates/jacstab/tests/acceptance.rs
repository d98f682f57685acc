//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//! `JACSTAB_CRITERIA=2,5` restricts the run.

use jacstab::acceptance::{run, CRITERIA};
use jacstab::corpus::Corpus;

fn main() {
    let corpus = Corpus::load_default().expect("shipped corpus loads");
    let selected: Vec<u8> = match std::env::var("JACSTAB_CRITERIA") {
        Ok(list) => list.split(',').map(|s| s.trim().parse().expect("criterion number")).collect(),
        Err(_) => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut failed = 0;
    for id in selected {
        let outcome = run(id, &corpus);
        println!("{outcome}");
        if !outcome.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
