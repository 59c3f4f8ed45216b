//! Fidelity with GHZ4 from five measurement settings.

use ghzlab::quantum::{ghz_state, DensityOperator};
use ghzlab::report::visibility_for_fidelity;
use ghzlab::sim::{decomposition_check, simulate_tables, witness_settings, witness_value, CountModel, NoiseModel};

fn main() -> ghzlab::Result<()> {
    println!("projector decomposition residual: {:.1e}", decomposition_check());
    let ghz = ghz_state(4)?;
    for target in [1.0, 0.806, 0.5, 0.3] {
        let rho = DensityOperator::white_noise(&ghz, visibility_for_fidelity(target))?;
        let tables =
            simulate_tables(&witness_settings(), &rho, &NoiseModel::uniform(1.0)?, &CountModel::deterministic(6.8, 180.0))?;
        let w = witness_value(&tables)?;
        println!(
            "fidelity {target:.3}: estimated {:.4} ± {:.4}, witness {:+.4}, genuine four-partite: {}",
            w.fidelity.value, w.fidelity.sigma, w.witness.value, w.exceeds_threshold
        );
    }
    Ok(())
}
