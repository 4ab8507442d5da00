//! Exact operator norms of Kloosterman matrices against the bounds, as CSV,
//! followed by the sum over moduli in a dyadic range.

use klab::experiments::{self, AvgModulusCase, NormCase};
use klab::Result;

fn main() -> Result<()> {
    let cases: Vec<NormCase> = [(25u64, 5u64), (49, 7), (121, 11), (169, 13), (125, 11), (343, 19)]
        .iter()
        .map(|&(c, m)| NormCase { c, m, n: m, a: 1 })
        .collect();
    let sweep = experiments::experiment_norm_sweep(&cases, experiments::DEFAULT_DELTA)?;
    print!("{}", sweep.to_csv()?);

    let case = AvgModulusCase { q: 25, d: 5, dp: 5, e: 1, big_c: 100, m: 10, n: 10 };
    let r = experiments::experiment_avg_modulus(&case, 42, 1.0)?;
    println!("\nq = 25, C = 100: {} moduli, sum {:.3} against envelope {:.3e}", r.moduli, r.lhs, r.envelope);
    Ok(())
}
