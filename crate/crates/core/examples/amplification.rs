//! Character table of SL_2(Z/3Z) from its regular representation, and the
//! amplification inequality for each normal subgroup.

use klab::amplify::{self, FiniteGroup, GroupSpec};
use klab::Result;

fn main() -> Result<()> {
    let group = FiniteGroup::new(GroupSpec::Sl2(3))?;
    let blocks = amplify::regular_irreducibles(&group, 3)?;
    let table = amplify::character_table(&blocks);
    let classes = group.conjugacy_classes();
    println!("SL_2(Z/3Z): order {}, {} classes, {} irreducible characters", group.order(), classes.len(), table.len());
    for chi in &table {
        let row: Vec<String> = classes.iter().map(|cl| format!("{:>6.2}", chi[cl[0]].re)).collect();
        println!("  {}", row.join(" "));
    }

    let f = &amplify::seeded_functions(&group, 1, 11)[0];
    for subgroup in group.normal_subgroups()? {
        for block in blocks.iter().filter(|b| b.dim() > 1).take(1) {
            let check = amplify::verify_amplification(&group, block, &subgroup, f, 4)?;
            println!(
                "{:<12} dim {}: ||F^||_S4^4 = {:>9.3} <= {:>9.3}",
                subgroup.label, check.block_dim, check.lhs, check.rhs
            );
        }
    }
    Ok(())
}
