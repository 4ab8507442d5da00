//! Points of P^1(Z/12Z), the Moebius action of S and T, and the orbits of
//! the principal congruence subgroups.

use klab::sl2::{ProjectiveLine, Sl2};
use klab::Result;

fn main() -> Result<()> {
    let c = 12;
    let line = ProjectiveLine::new(c)?;
    let names: Vec<String> = line.points().iter().map(|p| format!("[{}:{}]", p.x, p.y)).collect();
    println!("|P^1(Z/{c}Z)| = {}", line.len());
    println!("points: {}", names.join(" "));

    for (label, g) in [("S", Sl2::s(c)), ("T", Sl2::t_pow(1, c))] {
        let image: Vec<&str> = line.permutation(&g).iter().map(|&i| names[i].as_str()).collect();
        println!("{label} sends them to: {}", image.join(" "));
    }

    for d in [1, 2, 3, 4, 6, 12] {
        let orbits = line.gamma_orbits(d)?;
        let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
        println!("Gamma_{c}({d}): {} orbits, sizes {sizes:?}", orbits.len());
    }
    Ok(())
}
