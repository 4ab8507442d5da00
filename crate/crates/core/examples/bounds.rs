//! Factorizations c = d d' e chosen by the greedy rule, and the bound
//! profiles they feed, as saving exponents over the trivial bound.

use klab::bounds::{self, Factorization3};
use klab::Result;

fn main() -> Result<()> {
    for c in [49u64, 121, 1155, 2310, 3125, 101 * 103] {
        let g = bounds::greedy_factorization(c, 0.01)?;
        match g.factorization {
            Some(f) => println!("c = {c:>5}: {:?}, d = {}, d' = {}, e = {}, f = {}", g.case, f.d, f.d_prime, f.e, f.f),
            None => println!("c = {c:>5}: {:?}", g.case),
        }
    }

    let c = 121;
    let m = 11;
    let trivial = bounds::eval_bound_trivial(c, m, m)?;
    let composite = bounds::eval_bound_composite(&Factorization3::new(c, 11, 11, 1)?, m, m)?;
    println!("\nc = {c}, M = N = {m}");
    println!("  trivial   {:>8.3} (exponent {:.4})", trivial.value, trivial.exponent);
    println!("  composite {:>8.3} (exponent {:.4})", composite.c_form.value, composite.c_form.exponent);
    for t in &composite.c_form.terms {
        println!("    {:<16} c^{:.4}", t.name, t.exponent);
    }
    let saving = (trivial.value / composite.c_form.max_term_value).ln() / (c as f64).ln();
    println!("  saving of the largest term: {saving:.4}");
    for p in bounds::eval_bound_general(c, m, m, 0.01)? {
        println!("  {:<10} {:>8.3}", p.tag, p.value);
    }
    Ok(())
}
