//! Kloosterman sums for a few moduli, with the Weil ratio and the
//! classical identities.

use klab::kloosterman::{self, KloostermanTable};
use klab::Result;

fn main() -> Result<()> {
    for c in [7u64, 25, 36, 105] {
        let table = KloostermanTable::new(c)?;
        let tau = klab::arith::tau(c)? as f64;
        let mut worst: f64 = 0.0;
        for m in 1..c as i64 {
            for n in 1..c as i64 {
                let g = kloosterman::gcd_mnc(m, n, c) as f64;
                worst = worst.max(table.sum(m, n).norm() / (tau * (g * c as f64).sqrt()));
            }
        }
        println!("c = {c:>3}: S(1, 1; c) = {:>9.4}, max |S| / Weil = {worst:.4}", table.sum(1, 1).re);
    }

    let report = kloosterman::full_report(3, 5, 35)?;
    println!("\nS(3, 5; 35) = {:.6}", report.re);
    for v in &report.verdicts {
        println!("  {:<18} {}", v.name, if v.passed { "ok" } else { "FAILED" });
    }
    Ok(())
}
