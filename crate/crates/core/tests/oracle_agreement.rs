//! Fock-oracle agreement on the small-parameter grid: every configuration
//! the oracle accepts at cutoff 50 must reproduce the analytic moments to
//! 1e-6 absolute; configurations whose tails outgrow the truncated basis
//! are refused by the guard band, never reported.

use std::f64::consts::PI;

use dsmzi::closed_form;
use dsmzi::fock::{self, FockSimulator};
use dsmzi::{Error, InterferometerConfig};

#[test]
fn oracle_matches_closed_forms_on_small_parameter_grid() {
    let sim = FockSimulator::new(50).unwrap();
    let mut worst = 0.0f64;
    let mut accepted = 0;
    let mut refused = 0;
    for i in 0..5 {
        let alpha = 0.3 + 1.2 * i as f64 / 4.0;
        for j in 0..5 {
            let r1 = 0.25 * j as f64;
            for k in 0..5 {
                let r2 = 0.25 * k as f64;
                for l in 0..5 {
                    let phi = 0.2 + (PI - 0.4) * l as f64 / 4.0;
                    let cfg = InterferometerConfig::new(alpha, r1, r2, phi, 1.0).unwrap();
                    match sim.run(&cfg) {
                        Ok(state) => {
                            accepted += 1;
                            let f = fock::photon_statistics(&state);
                            let m = closed_form::moments(&cfg);
                            let err = (f.n_minus_mean - m.n_minus_mean)
                                .abs()
                                .max((f.n_plus_mean - m.n_plus_mean).abs())
                                .max((f.n_minus_var - m.n_minus_var).abs());
                            worst = worst.max(err);
                        }
                        Err(Error::Truncation { .. }) => refused += 1,
                        Err(e) => panic!("unexpected oracle error: {e}"),
                    }
                }
            }
        }
    }
    println!(
        "oracle grid: {accepted} accepted / {refused} refused, max |err| {worst:.3e}"
    );
    assert!(worst <= 1e-6, "accepted oracle runs must agree: {worst:.3e}");
    // the guard is deliberately conservative; the bright corner of the grid
    // (α ~ 1.5 with both squeezers near 1) outgrows cutoff 50 and is refused
    assert!(
        accepted >= 300,
        "guard band refused too much of the small-parameter grid: {accepted}/625"
    );
}
