//! Solutions of T^{a h1} S T^{a h2} S ... = I in PSL_2(Z/cZ) with the
//! exponents in a box, counted three ways.

use klab::counting::{self, CountInstance};
use klab::Result;

fn main() -> Result<()> {
    println!("{:>3} {:>2} {:>6} {:>8} {:>8} {:>10} {:>8}", "c", "q", "H", "brute", "mitm", "congruence", "ratio");
    for (c, q, h1, h2) in [(7u64, 2usize, 3u64, 3u64), (25, 4, 5, 5), (25, 6, 5, 5), (12, 6, 3, 4), (49, 6, 3, 3)] {
        let inst = CountInstance::new(c, q, 1, 1, h1, h2)?;
        let brute = counting::count_brute(&inst)?;
        let mitm = counting::count_mitm(&inst)?;
        let congruence = if q == 6 { counting::count_congruence_q6(&inst)?.to_string() } else { "-".into() };
        let bound = counting::check_counting_bounds(&inst, mitm)?;
        println!(
            "{c:>3} {q:>2} {:>6} {brute:>8} {mitm:>8} {congruence:>10} {:>8.3}",
            format!("{h1},{h2}"),
            bound.ratio
        );
    }

    let inst = CountInstance::new(25, 6, 1, 1, 5, 5)?;
    let witnesses = counting::witnesses_lower_bound(&inst)?;
    println!("\n{} explicit solutions for c = 25, q = 6, H = 5, e.g. {:?}", witnesses.len(), witnesses[1]);
    Ok(())
}
