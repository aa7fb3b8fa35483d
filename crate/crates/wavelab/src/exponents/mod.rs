//! Exact rational calculus for the exponent geometry behind the solver.
//!
//! Everything here is decided in `BigRational` arithmetic: admissibility of
//! space-time exponent pairs, the two time-gain exponents of the contraction
//! estimate, Lebesgue-exponent domains for the singular weight, and the
//! hypothesis checks for the three well-posedness regimes the experiments
//! target. Optimality of a pair is an exact identity and several parameter
//! ranges are open at their endpoints, so floats are forbidden in this
//! module; boundary cases are decided, not approximated.

pub mod poly;

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use poly::{Poly2, RatFn2};

/// Exact rational scalar used throughout the calculus.
pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// Rational extended with a single point at infinity, used for time
/// exponents where `1/q = 0` is meaningful and "a large number" is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRat {
    Finite(Rational),
    Infinity,
}

impl ExtRat {
    pub fn finite(n: i64, d: i64) -> Self {
        ExtRat::Finite(rat(n, d))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtRat::Infinity)
    }

    /// `1/x`, with `1/∞ = 0`. `None` only for `x = 0`.
    pub fn reciprocal(&self) -> Option<Rational> {
        match self {
            ExtRat::Infinity => Some(Rational::zero()),
            ExtRat::Finite(x) => {
                if x.is_zero() {
                    None
                } else {
                    Some(x.recip())
                }
            }
        }
    }

    pub fn scale(&self, k: i64) -> ExtRat {
        match self {
            ExtRat::Infinity => ExtRat::Infinity,
            ExtRat::Finite(x) => ExtRat::Finite(x * rat(k, 1)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRat::Infinity => f64::INFINITY,
            ExtRat::Finite(x) => to_f64(x),
        }
    }

    fn cmp_rational(&self, other: &Rational) -> Ordering {
        match self {
            ExtRat::Infinity => Ordering::Greater,
            ExtRat::Finite(x) => x.cmp(other),
        }
    }
}

impl From<Rational> for ExtRat {
    fn from(x: Rational) -> Self {
        ExtRat::Finite(x)
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Infinity, ExtRat::Infinity) => Ordering::Equal,
            (ExtRat::Infinity, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Finite(_), ExtRat::Infinity) => Ordering::Less,
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Infinity => write!(f, "inf"),
            ExtRat::Finite(x) => write!(f, "{}", x),
        }
    }
}

/// The three well-posedness regimes the laboratory knows how to test.
/// The short labels double as the CLI/config vocabulary.
///
/// * `t1.1`, local theory at energy regularity: `0 < b < 2`,
///   `0 < alpha < (4-2b)/3`.
/// * `t1.2`, global theory for small data, same parameter range as `t1.1`.
/// * `t1.3`, local theory at fractional regularity `s`: `1/2 < b < 3/2`,
///   `0 < s < b - 1/2`, `0 < alpha < (4-2b)/(3-2s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    EnergyLocal,
    EnergySmallGlobal,
    SobolevLocal,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::EnergyLocal => "t1.1",
            Regime::EnergySmallGlobal => "t1.2",
            Regime::SobolevLocal => "t1.3",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        match s {
            "t1.1" => Some(Regime::EnergyLocal),
            "t1.2" => Some(Regime::EnergySmallGlobal),
            "t1.3" => Some(Regime::SobolevLocal),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExponentError {
    /// `gamma_of` requires a space exponent in `[2, ∞]`.
    SpaceExponentOutOfRange { r: ExtRat },
    /// A pair needs `1/q` and `1/r`; a zero exponent has neither.
    ZeroExponent,
    /// Parameters fail the hypotheses of the requested regime.
    Ineligible { regime: Regime, violations: Vec<String> },
    /// The weight's Lebesgue exponent must lie in the open interval `(2, 3/b)`.
    LebesgueGammaOutOfRange { gamma: Rational, upper: Rational },
    /// `(2, 3/b)` is empty for `b >= 3/2`; no default exponent exists.
    EmptyGammaInterval { b: Rational },
    InvalidParams { what: String },
}

impl fmt::Display for ExponentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentError::SpaceExponentOutOfRange { r } => {
                write!(f, "space exponent r = {} outside [2, inf]", r)
            }
            ExponentError::ZeroExponent => write!(f, "exponent pair contains 0"),
            ExponentError::Ineligible { regime, violations } => {
                write!(f, "parameters ineligible for regime {}: {}", regime, violations.join("; "))
            }
            ExponentError::LebesgueGammaOutOfRange { gamma, upper } => {
                write!(f, "weight Lebesgue exponent gamma = {} outside (2, {})", gamma, upper)
            }
            ExponentError::EmptyGammaInterval { b } => {
                write!(f, "no Lebesgue exponent interval: (2, 3/b) is empty for b = {}", b)
            }
            ExponentError::InvalidParams { what } => write!(f, "invalid parameters: {}", what),
        }
    }
}

impl std::error::Error for ExponentError {}

/// Equation parameters: nonlinearity power `alpha`, weight power `b`,
/// regularity index `s`, spatial dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub alpha: Rational,
    pub b: Rational,
    pub s: Rational,
    pub n: i64,
}

impl Params {
    pub fn new(alpha: Rational, b: Rational, s: Rational, n: i64) -> Result<Self, ExponentError> {
        if !alpha.is_positive() {
            return Err(ExponentError::InvalidParams { what: format!("alpha = {} (need alpha > 0)", alpha) });
        }
        if !b.is_positive() {
            return Err(ExponentError::InvalidParams { what: format!("b = {} (need b > 0)", b) });
        }
        if s.is_negative() {
            return Err(ExponentError::InvalidParams { what: format!("s = {} (need s >= 0)", s) });
        }
        if n < 2 {
            return Err(ExponentError::InvalidParams { what: format!("n = {} (need n >= 2)", n) });
        }
        Ok(Params { alpha, b, s, n })
    }
}

/// `(n-1)(1/2 - 1/r)` without the `r >= 2` gate; used internally so that
/// out-of-range pairs can still be classified (with the violation recorded).
fn gamma_raw(r: &ExtRat, n: i64) -> Result<Rational, ExponentError> {
    let inv_r = r.reciprocal().ok_or(ExponentError::ZeroExponent)?;
    Ok(rat(n - 1, 1) * (rat(1, 2) - inv_r))
}

/// The scaling index `γ(r) = (n-1)(1/2 - 1/r)` of a space exponent.
pub fn gamma_of(r: &ExtRat, n: i64) -> Result<Rational, ExponentError> {
    if r.cmp_rational(&rat(2, 1)) == Ordering::Less {
        return Err(ExponentError::SpaceExponentOutOfRange { r: r.clone() });
    }
    gamma_raw(r, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    TimeExponentBelowTwo,
    SpaceExponentBelowTwo,
    /// The single excluded endpoint triple `(q, r, γ(r)) = (2, ∞, 1)`.
    ForbiddenEndpoint,
    ScaleBelowZero,
    ScaleAboveGamma,
    GammaAboveOne,
}

impl fmt::Display for AdmissibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            AdmissibilityViolation::TimeExponentBelowTwo => "q < 2",
            AdmissibilityViolation::SpaceExponentBelowTwo => "r < 2",
            AdmissibilityViolation::ForbiddenEndpoint => "(q, r, gamma(r)) = (2, inf, 1)",
            AdmissibilityViolation::ScaleBelowZero => "2/q < 0",
            AdmissibilityViolation::ScaleAboveGamma => "2/q > gamma(r)",
            AdmissibilityViolation::GammaAboveOne => "gamma(r) > 1",
        };
        f.write_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    NotAdmissible { violations: Vec<AdmissibilityViolation> },
    Admissible,
    /// Admissible with the scaling identity `2/q = γ(r)` exactly.
    Optimal,
}

impl PairClass {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, PairClass::NotAdmissible { .. })
    }
}

/// A space-time exponent pair `(q, r)` in dimension `n`, with its scaling
/// index precomputed. `r` is the "half" space exponent: the Lebesgue
/// exponent actually used in mixed norms is `3r` (see [`AdmissiblePair::norm_space_exponent`]).
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissiblePair {
    pub q: ExtRat,
    pub r: ExtRat,
    pub n: i64,
    pub gamma_r: Rational,
}

impl AdmissiblePair {
    pub fn new(q: ExtRat, r: ExtRat, n: i64) -> Result<Self, ExponentError> {
        if q.reciprocal().is_none() || r.reciprocal().is_none() {
            return Err(ExponentError::ZeroExponent);
        }
        let gamma_r = gamma_raw(&r, n)?;
        Ok(AdmissiblePair { q, r, n, gamma_r })
    }

    /// Lebesgue exponent used in the mixed space-time norms: `3r`.
    pub fn norm_space_exponent(&self) -> ExtRat {
        self.r.scale(3)
    }

    /// Exact classification. Total on constructed pairs; all failed
    /// inequalities are recorded, not just the first.
    pub fn classify(&self) -> PairClass {
        let two = rat(2, 1);
        let mut violations = Vec::new();
        if self.q.cmp_rational(&two) == Ordering::Less {
            violations.push(AdmissibilityViolation::TimeExponentBelowTwo);
        }
        if self.r.cmp_rational(&two) == Ordering::Less {
            violations.push(AdmissibilityViolation::SpaceExponentBelowTwo);
        }
        if self.q == ExtRat::Finite(two.clone())
            && self.r.is_infinity()
            && self.gamma_r == Rational::one()
        {
            violations.push(AdmissibilityViolation::ForbiddenEndpoint);
        }
        let two_over_q = two * self.q.reciprocal().expect("checked at construction");
        if two_over_q.is_negative() {
            violations.push(AdmissibilityViolation::ScaleBelowZero);
        }
        if two_over_q > self.gamma_r {
            violations.push(AdmissibilityViolation::ScaleAboveGamma);
        }
        if self.gamma_r > Rational::one() {
            violations.push(AdmissibilityViolation::GammaAboveOne);
        }
        if !violations.is_empty() {
            PairClass::NotAdmissible { violations }
        } else if two_over_q == self.gamma_r {
            PairClass::Optimal
        } else {
            PairClass::Admissible
        }
    }

    /// Whether `2/q = γ(r)` exactly, regardless of admissibility. The
    /// contraction pairs satisfy this identity even where they leave the
    /// admissible range.
    pub fn scaling_identity_holds(&self) -> bool {
        let two_over_q = rat(2, 1) * self.q.reciprocal().expect("checked at construction");
        two_over_q == self.gamma_r
    }
}

impl fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q = {}, r = {}, gamma(r) = {})", self.q, self.r, self.gamma_r)
    }
}

fn check(name: &str, holds: bool, detail: String) -> HypothesisCheck {
    HypothesisCheck { name: name.to_string(), holds, detail }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EligibilityReport {
    pub regime: Regime,
    pub checks: Vec<HypothesisCheck>,
    /// Informational checks that do not gate eligibility.
    pub auxiliary: Vec<HypothesisCheck>,
}

impl EligibilityReport {
    pub fn eligible(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| format!("{} violated ({})", c.name, c.detail))
            .collect()
    }
}

impl fmt::Display for EligibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "regime {}: {}",
            self.regime,
            if self.eligible() { "eligible" } else { "NOT eligible" }
        )?;
        for c in &self.checks {
            writeln!(f, "  [{}] {} ({})", if c.holds { "ok" } else { "FAIL" }, c.name, c.detail)?;
        }
        for c in &self.auxiliary {
            writeln!(f, "  [{}] {} ({}) [auxiliary]", if c.holds { "ok" } else { "note" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Check the hypotheses of one regime against concrete parameters.
/// Every hypothesis is reported with the exact quantities involved;
/// nothing short-circuits.
pub fn validate_params(p: &Params, regime: Regime) -> EligibilityReport {
    let mut checks = Vec::new();
    let mut auxiliary = Vec::new();
    match regime {
        Regime::EnergyLocal | Regime::EnergySmallGlobal => {
            let bound = (rat(4, 1) - rat(2, 1) * &p.b) / rat(3, 1);
            checks.push(check("0 < b", p.b.is_positive(), format!("b = {}", p.b)));
            checks.push(check("b < 2", p.b < rat(2, 1), format!("b = {}", p.b)));
            checks.push(check("0 < alpha", p.alpha.is_positive(), format!("alpha = {}", p.alpha)));
            checks.push(check(
                "alpha < (4-2b)/3",
                p.alpha < bound,
                format!("alpha = {}, (4-2b)/3 = {}", p.alpha, bound),
            ));
        }
        Regime::SobolevLocal => {
            let s_bound = &p.b - rat(1, 2);
            let denom = rat(3, 1) - rat(2, 1) * &p.s;
            checks.push(check("1/2 < b", p.b > rat(1, 2), format!("b = {}", p.b)));
            checks.push(check("b < 3/2", p.b < rat(3, 2), format!("b = {}", p.b)));
            checks.push(check("0 < s", p.s.is_positive(), format!("s = {}", p.s)));
            checks.push(check(
                "s < b - 1/2",
                p.s < s_bound,
                format!("s = {}, b - 1/2 = {}", p.s, s_bound),
            ));
            checks.push(check("0 < alpha", p.alpha.is_positive(), format!("alpha = {}", p.alpha)));
            // denom > 0 is implied by s < b - 1/2 < 1 when those hold; the
            // alpha bound is only meaningful then.
            let alpha_ok = denom.is_positive() && p.alpha < (rat(4, 1) - rat(2, 1) * &p.b) / &denom;
            let bound_text = if denom.is_positive() {
                format!("{}", (rat(4, 1) - rat(2, 1) * &p.b) / &denom)
            } else {
                "undefined (3-2s <= 0)".to_string()
            };
            checks.push(check(
                "alpha < (4-2b)/(3-2s)",
                alpha_ok,
                format!("alpha = {}, (4-2b)/(3-2s) = {}", p.alpha, bound_text),
            ));
            // The fractionally differentiated weight has exponent b + s;
            // square-integrability near the origin needs 2(b+s) < 3.
            let ws = rat(2, 1) * (&p.b + &p.s);
            auxiliary.push(check(
                "2(b+s) < 3",
                ws < rat(3, 1),
                format!("2(b+s) = {}", ws),
            ));
        }
    }
    EligibilityReport { regime, checks, auxiliary }
}

/// First time-gain exponent of the contraction estimate: `(4 - alpha)/2`.
/// Requires `t1.1`-eligible `(alpha, b)`; positivity is automatic there.
pub fn theta1(alpha: &Rational, b: &Rational) -> Result<Rational, ExponentError> {
    let p = Params::new(alpha.clone(), b.clone(), Rational::zero(), 3)?;
    let report = validate_params(&p, Regime::EnergyLocal);
    if !report.eligible() {
        return Err(ExponentError::Ineligible {
            regime: Regime::EnergyLocal,
            violations: report.violations(),
        });
    }
    Ok((rat(4, 1) - alpha) / rat(2, 1))
}

/// Second time-gain exponent: `(alpha*gamma + 4*gamma - 6) / (2*gamma*(alpha+1))`,
/// where `gamma` is the Lebesgue exponent of the weight on the unit ball.
/// The split behind it is consistent only for `gamma` in the open interval
/// `(2, 3/b)`.
pub fn theta2(alpha: &Rational, gamma: &Rational, b: &Rational) -> Result<Rational, ExponentError> {
    let upper = gamma_upper(b)?;
    if *gamma <= rat(2, 1) || *gamma >= upper {
        return Err(ExponentError::LebesgueGammaOutOfRange { gamma: gamma.clone(), upper });
    }
    let num = alpha * gamma + rat(4, 1) * gamma - rat(6, 1);
    let den = rat(2, 1) * gamma * (alpha + rat(1, 1));
    Ok(num / den)
}

fn gamma_upper(b: &Rational) -> Result<Rational, ExponentError> {
    if !b.is_positive() {
        return Err(ExponentError::InvalidParams { what: format!("b = {} (need b > 0)", b) });
    }
    Ok(rat(3, 1) / b)
}

/// Midpoint of `(2, 3/b)`, the default weight Lebesgue exponent when a run
/// does not pin one. Empty interval (`b >= 3/2`) is an error, not a guess.
pub fn default_gamma(b: &Rational) -> Result<Rational, ExponentError> {
    let upper = gamma_upper(b)?;
    if upper <= rat(2, 1) {
        return Err(ExponentError::EmptyGammaInterval { b: b.clone() });
    }
    Ok((rat(2, 1) + upper) / rat(2, 1))
}

/// One of the two exponent pairs entering the nonlinear contraction
/// estimate, with everything the caller might want to report about it.
#[derive(Clone, Debug)]
pub struct ContractionPair {
    pub pair: AdmissiblePair,
    /// `2/q = γ(r)` at these concrete values.
    pub identity_numeric: bool,
    /// Same identity as polynomials in symbolic `(alpha, gamma)` after
    /// clearing denominators; independent of the concrete inputs.
    pub identity_symbolic: bool,
    /// `q < 0`. Happens for the first pair whenever `alpha < 2`, which is
    /// the entire eligible range; surfaced, never repaired.
    pub sign_anomaly: bool,
    pub classification: PairClass,
}

impl fmt::Display for ContractionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} identity[symbolic {}, numeric {}] {}{}",
            self.pair,
            if self.identity_symbolic { "ok" } else { "FAIL" },
            if self.identity_numeric { "ok" } else { "FAIL" },
            match &self.classification {
                PairClass::Optimal => "optimal".to_string(),
                PairClass::Admissible => "admissible".to_string(),
                PairClass::NotAdmissible { violations } => {
                    let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                    format!("not admissible [{}]", list.join(", "))
                }
            },
            if self.sign_anomaly { " SIGN ANOMALY (q < 0)" } else { "" }
        )
    }
}

#[derive(Clone, Debug)]
pub struct ContractionPairs {
    pub first: ContractionPair,
    pub second: ContractionPair,
}

/// The two exponent pairs used to split the nonlinearity, at concrete
/// `alpha` and weight exponent `gamma`:
///
/// * first: `q = 2(alpha+1)/(alpha-2)`, `r = 2(alpha+1)/3`
/// * second: `q = 2*gamma*(alpha+1)/((alpha-2)*gamma + 6)`, `r = 2*gamma*(alpha+1)/(3*(gamma-2))`
///
/// Degenerate denominators produce `q = ∞` (they vanish exactly where
/// `2/q = 0`). Both scaling identities are also checked symbolically.
/// A negative `q` is reported as an anomaly, not an error: the identity
/// `2/q = γ(r)` still holds, but the pair leaves the admissible range.
pub fn contraction_pairs(
    alpha: &Rational,
    gamma: &Rational,
    b: &Rational,
) -> Result<ContractionPairs, ExponentError> {
    let p = Params::new(alpha.clone(), b.clone(), Rational::zero(), 3)?;
    let report = validate_params(&p, Regime::EnergyLocal);
    if !report.eligible() {
        return Err(ExponentError::Ineligible {
            regime: Regime::EnergyLocal,
            violations: report.violations(),
        });
    }
    let upper = gamma_upper(b)?;
    if *gamma <= rat(2, 1) || *gamma >= upper {
        return Err(ExponentError::LebesgueGammaOutOfRange { gamma: gamma.clone(), upper });
    }

    let ap1 = alpha + rat(1, 1);
    let q1_den = alpha - rat(2, 1);
    let q1 = if q1_den.is_zero() {
        ExtRat::Infinity
    } else {
        ExtRat::Finite(rat(2, 1) * &ap1 / &q1_den)
    };
    let r1 = ExtRat::Finite(rat(2, 1) * &ap1 / rat(3, 1));
    let first = summarize(q1, r1, first_identity_symbolic())?;

    let q2_den = (alpha - rat(2, 1)) * gamma + rat(6, 1);
    let q2 = if q2_den.is_zero() {
        ExtRat::Infinity
    } else {
        ExtRat::Finite(rat(2, 1) * gamma * &ap1 / &q2_den)
    };
    let r2 = ExtRat::Finite(rat(2, 1) * gamma * &ap1 / (rat(3, 1) * (gamma - rat(2, 1))));
    let second = summarize(q2, r2, second_identity_symbolic())?;

    Ok(ContractionPairs { first, second })
}

fn summarize(q: ExtRat, r: ExtRat, symbolic: bool) -> Result<ContractionPair, ExponentError> {
    let sign_anomaly = match &q {
        ExtRat::Infinity => false,
        ExtRat::Finite(x) => x.is_negative(),
    };
    let pair = AdmissiblePair::new(q, r, 3)?;
    Ok(ContractionPair {
        identity_numeric: pair.scaling_identity_holds(),
        identity_symbolic: symbolic,
        sign_anomaly,
        classification: pair.classify(),
        pair,
    })
}

// Symbolic scaling identities, with a = alpha and g = gamma as free
// symbols and n = 3 so that gamma(r) = 1 - 2/r.

fn gamma_of_symbolic(r: &RatFn2) -> RatFn2 {
    RatFn2::int(1).sub(&RatFn2::int(2).div(r))
}

/// `2/q = γ(r)` for `q = 2(a+1)/(a-2)`, `r = 2(a+1)/3`, as polynomials.
pub fn first_identity_symbolic() -> bool {
    let a = RatFn2::from_poly(Poly2::var_a());
    let ap1 = a.add(&RatFn2::int(1));
    let q = RatFn2::int(2).mul(&ap1).div(&a.sub(&RatFn2::int(2)));
    let r = RatFn2::int(2).mul(&ap1).div(&RatFn2::int(3));
    RatFn2::int(2).div(&q).equals(&gamma_of_symbolic(&r))
}

/// `2/q = γ(r)` for `q = 2g(a+1)/((a-2)g+6)`, `r = 2g(a+1)/(3(g-2))`.
pub fn second_identity_symbolic() -> bool {
    let a = RatFn2::from_poly(Poly2::var_a());
    let g = RatFn2::from_poly(Poly2::var_g());
    let ap1 = a.add(&RatFn2::int(1));
    let q_den = a.sub(&RatFn2::int(2)).mul(&g).add(&RatFn2::int(6));
    let q = RatFn2::int(2).mul(&g).mul(&ap1).div(&q_den);
    let r = RatFn2::int(2).mul(&g).mul(&ap1).div(&RatFn2::int(3).mul(&g.sub(&RatFn2::int(2))));
    RatFn2::int(2).div(&q).equals(&gamma_of_symbolic(&r))
}
