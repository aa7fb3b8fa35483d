//! Walk through the exact exponent calculus: hypothesis windows for the
//! three well-posedness regimes, the two time-gain exponents, and the
//! contraction pair geometry with its symbolic identity checks.
//!
//! Everything here is exact rational arithmetic; floats appear only in the
//! parenthesized previews.

use wavelab::exponents::{
    contraction_pairs, default_gamma, rat, theta1, theta2, to_f64, validate_params, Params,
    Regime,
};

fn main() {
    // A parameter set inside the energy-regime window: the cubic-like power
    // alpha = 1 with weight decay b = 1/4 satisfies alpha < (4 - 2b)/3 = 7/6
    // strictly.
    let alpha = rat(1, 1);
    let b = rat(1, 4);
    let s = rat(0, 1);
    let params = Params::new(alpha.clone(), b.clone(), s, 3).unwrap();

    println!("parameters: alpha = {}, b = {}", alpha, b);
    for regime in [Regime::EnergyLocal, Regime::EnergySmallGlobal, Regime::SobolevLocal] {
        let report = validate_params(&params, regime);
        print!("{}", report);
    }

    // The auxiliary Lebesgue exponent lives in (2, 3/b); the midpoint is
    // the default.
    let gamma = default_gamma(&b).unwrap();
    println!("default gamma for b = {}: {} (window (2, {}))", b, gamma, rat(3, 1) / &b);

    // Both time gains must come out positive for the contraction to close.
    let t1 = theta1(&alpha, &b).unwrap();
    let t2 = theta2(&alpha, &gamma, &b).unwrap();
    println!("theta1 = {} ({})", t1, to_f64(&t1));
    println!("theta2 = {} ({})", t2, to_f64(&t2));

    // The two exponent pairs entering the nonlinear estimate depend on
    // gamma. The first always solves its defining identity with a negative
    // time exponent, which the calculus reports rather than hides; the
    // second flips from anomalous at the midpoint gamma to a genuine
    // optimal pair at gamma = 4.
    for g in [gamma.clone(), rat(4, 1)] {
        let pairs = contraction_pairs(&alpha, &g, &b).unwrap();
        println!("gamma = {}:", g);
        println!("  first pair:  {}", pairs.first);
        println!("  second pair: {}", pairs.second);
        assert!(pairs.first.identity_symbolic && pairs.first.identity_numeric);
        assert!(pairs.second.identity_symbolic && pairs.second.identity_numeric);
    }
    println!("all defining identities verified symbolically and numerically");

    // Boundary cases are decided exactly, never by float comparison:
    // alpha = (4 - 2b)/3 itself is excluded.
    let boundary = Params::new(rat(2, 3), rat(1, 1), rat(0, 1), 3).unwrap();
    let report = validate_params(&boundary, Regime::EnergyLocal);
    println!(
        "boundary alpha = 2/3 at b = 1: eligible = {} ({})",
        report.eligible(),
        report.violations().join("; ")
    );
}
