//! The `(p, phi)` form as phi shrinks to zero.
//!
//! The alpha-based route has no finite parameters at `phi = 0`, and the
//! log-gamma baseline loses digits long before that. The phi form stays exact
//! and lands on the multinomial kernel.
//!
//! ```bash
//! cargo run -p dmn --example phi_boundary
//! ```

use dmn::{
    dmn_loglik_lgamma, dmn_loglik_phi, mn_loglik_kernel, params_from_mean_phi, CountVector,
    MeanPhiParams, ProbVector,
};

fn main() -> dmn::Result<()> {
    let p = ProbVector::new(vec![0.1, 0.2, 0.3, 0.4])?;
    let x = CountVector::new(vec![12, 25, 31, 44])?;
    let kernel = mn_loglik_kernel(&p, &x)?;
    println!("multinomial kernel: {kernel:.15}");
    println!("{:>8} {:>22} {:>22}", "phi", "phi form", "lgamma via alpha");
    for phi in [0.5, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 0.0] {
        let mp = MeanPhiParams::new(p.clone(), phi)?;
        let direct = dmn_loglik_phi(&mp, &x)?.value;
        let via_lgamma = match params_from_mean_phi(&mp) {
            Ok(alpha) => format!("{:.15}", dmn_loglik_lgamma(&alpha, &x)?.value),
            Err(_) => "no finite alpha".to_string(),
        };
        println!("{phi:>8.0e} {direct:>22.15} {via_lgamma:>22}");
    }
    let at_zero = dmn_loglik_phi(&MeanPhiParams::new(p.clone(), 0.0)?, &x)?.value;
    println!("bitwise equal to the kernel at phi = 0: {}", at_zero.to_bits() == kernel.to_bits());
    Ok(())
}
