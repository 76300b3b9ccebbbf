//! Invariants of degree-d surfaces and their consistency identities.

use tropical_pants::invariants::{compute_invariants, consistency_checks};

fn main() -> tropical_pants::Result<()> {
    println!("d    K2     chi    tau    p_g   yamabe");
    for d in 5..=10 {
        let i = compute_invariants(d)?;
        println!("{d:<4} {:<6} {:<6} {:<6} {:<5} {:.4}", i.k2, i.chi, i.tau, i.p_g, i.yamabe);
    }
    println!("identities for 5..=50 pass: {}", consistency_checks(5, 50)?.all_pass());
    Ok(())
}
