//! From a Kloosterman matrix to a Fourier coefficient on SL_2(Z/cZ): the
//! norm inequality for random coefficients and for intervals.

use klab::bridge::{self, Interval, IntervalSetup, SmoothWindow};
use klab::rep::PermRep;
use klab::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for c in [12u64, 25, 49] {
        let rep = PermRep::new(c)?;
        let psi1 = bridge::random_psi(c, &mut rng);
        let psi2 = bridge::random_psi(c, &mut rng);
        let r = bridge::verify_bridge_with(&rep, &psi1, &psi2)?;
        println!(
            "c = {c:>2}: ||K|| = {:>8.3} <= c ||F^(rho^o)|| = {:>8.3}  (embedding residual {:.1e})",
            r.kloosterman_norm, r.sifted_bound, r.embedding_residual
        );
    }

    let setup = IntervalSetup { c: 49, a: 3, i: Interval::new(0, 7), j: Interval::new(0, 7), eps: 0.05 };
    for window in [SmoothWindow::standard(), SmoothWindow::narrow()] {
        let r = bridge::verify_bridge_intervals(&setup, &window)?;
        println!(
            "intervals, ramp {}: ||K|| = {:.3}, H = ({:.1}, {:.1}), bound {:.3} + slack {:.3}",
            window.ramp(),
            r.interval_norm,
            r.h1,
            r.h2,
            r.window_bound,
            r.slack
        );
    }
    Ok(())
}
