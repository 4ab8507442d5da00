//! The permutation representation of SL_2(Z/cZ) on P^1: level projections,
//! the sifted part and its irreducible pieces.

use klab::rep::{self, PermRep};
use klab::sl2;
use klab::{Result, C64};

fn main() -> Result<()> {
    for c in [5u64, 9, 12] {
        let rep = PermRep::new(c)?;
        println!("c = {c}: dim {}, sifted dim {}", rep.dim(), rep::sifted_dimension(rep.modulus())?);
        for d in rep.modulus().divisors() {
            let p = rep.projection_level(d)?;
            println!("  P_{c}({d}): trace {:.3}, weight {:.4}", p.trace().re, rep::level_weight(c, d)?);
        }

        let classes = sl2::conjugacy_classes(c)?;
        let values = classes
            .iter()
            .map(|cl| Ok((C64::new(rep.char_value(&cl.representative)? as f64, 0.0), cl.size)))
            .collect::<Result<Vec<_>>>()?;
        let v = rep::multiplicity_identity_check(&values, sl2::group_order(rep.modulus()) as u64)?;
        println!("  (1/|G|) sum |chi|^2 = {:.6}", v.lhs);

        let full = rep.decompose(false, 7)?;
        let sifted = rep.decompose(true, 7)?;
        println!("  irreducible blocks: {:?}", full.report.dims());
        println!("  sifted blocks:      {:?}", sifted.report.dims());
    }
    Ok(())
}
