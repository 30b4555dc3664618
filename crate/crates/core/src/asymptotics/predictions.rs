//! Limit constants of the strong and weak regimes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::{c_alpha, d_alpha, CMethod, DMethod};
use crate::error::{Error, Result};
use crate::specfun::{polylog, zeta_three_halves, PolylogOrder};

/// Asymptotic regime of the ensemble parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", content = "param", rename_all = "snake_case")]
pub enum Regime {
    /// `tau` fixed in `(-1, 1)`.
    Strong(f64),
    /// `tau = 1 - alpha^2 / N` with `alpha > 0`.
    Weak(f64),
}

impl Regime {
    pub fn param(self) -> f64 {
        match self {
            Regime::Strong(t) | Regime::Weak(t) => t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Strong(_) => "strong",
            Regime::Weak(_) => "weak",
        }
    }

    /// Exponent `a` of the regime: 1 for strong, 2 for weak.
    pub fn regime_exponent(self) -> u32 {
        match self {
            Regime::Strong(_) => 1,
            Regime::Weak(_) => 2,
        }
    }

    /// Correlation parameter at half-dimension `n` (matrix size `N = 2n`).
    pub fn tau_at(self, n: usize) -> f64 {
        match self {
            Regime::Strong(t) => t,
            Regime::Weak(a) => 1.0 - a * a / (2 * n) as f64,
        }
    }

    /// `sqrt(N)` (strong) or `N` (weak), the growth of the real-eigenvalue count.
    pub fn scale(self, big_n: usize) -> f64 {
        match self {
            Regime::Strong(_) => (big_n as f64).sqrt(),
            Regime::Weak(_) => big_n as f64,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Regime::Strong(t) if t > -1.0 && t < 1.0 => Ok(()),
            Regime::Weak(a) if a > 0.0 && a.is_finite() => Ok(()),
            Regime::Strong(t) => Err(Error::Argument(format!(
                "strong regime needs tau in (-1, 1), got {t}"
            ))),
            Regime::Weak(a) => Err(Error::Argument(format!(
                "weak regime needs alpha > 0, got {a}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    /// `Tr(M^m)` divided by the regime scale.
    TraceLimit { m: u32 },
    /// Expected number of real eigenvalues divided by the regime scale.
    MeanCount,
    /// Variance of the count divided by the regime scale.
    VarCount,
    /// Variance over mean.
    CltSigma2,
    /// `log p_{N,0}` divided by the regime scale.
    LdpRate,
    /// `N^{-1/2} log sum_k p_{N,k} x^k`.
    GenfunLimit { x: f64 },
}

impl Quantity {
    pub fn label(&self) -> String {
        match self {
            Quantity::TraceLimit { m } => format!("trace_limit(m={m})"),
            Quantity::MeanCount => "mean_count".into(),
            Quantity::VarCount => "var_count".into(),
            Quantity::CltSigma2 => "clt_sigma2".into(),
            Quantity::LdpRate => "ldp_rate".into(),
            Quantity::GenfunLimit { x } => format!("genfun_limit(x={x})"),
        }
    }
}

/// How a prediction relates to the finite-`N` quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Limit,
    /// The limit superior is at most `value`.
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub regime: Regime,
    pub quantity: Quantity,
    pub value: f64,
    pub regime_exponent: u32,
    pub relation: Relation,
}

/// `sqrt((1+tau)/(1-tau))`.
fn strong_prefactor(tau: f64) -> f64 {
    ((1.0 + tau) / (1.0 - tau)).sqrt()
}

/// Limiting ratio of variance to mean of the real-eigenvalue count.
pub fn clt_sigma2(regime: Regime) -> Result<f64> {
    regime.validate()?;
    match regime {
        Regime::Strong(_) => Ok(2.0 - 2f64.sqrt()),
        Regime::Weak(a) => {
            let c1 = c_alpha(a, CMethod::Bessel)?;
            let c2 = c_alpha(2f64.sqrt() * a, CMethod::Bessel)?;
            Ok(2.0 - 2.0 * c2 / c1)
        }
    }
}

/// The prediction for one quantity, or `None` where the regime has no
/// statement for it.
pub fn predict(regime: Regime, quantity: Quantity) -> Result<Option<AsymptoticPrediction>> {
    regime.validate()?;
    let mut relation = Relation::Limit;
    let value = match (regime, quantity) {
        (_, Quantity::TraceLimit { m: 0 }) => {
            return Err(Error::Argument("trace power m must be >= 1".into()))
        }
        (Regime::Strong(t), Quantity::TraceLimit { m }) => {
            strong_prefactor(t) / (2.0 * PI * m as f64).sqrt()
        }
        (Regime::Weak(a), Quantity::TraceLimit { m }) => {
            0.5 * c_alpha((m as f64).sqrt() * a, CMethod::Bessel)?
        }
        (Regime::Strong(t), Quantity::MeanCount) => strong_prefactor(t) * (2.0 / PI).sqrt(),
        (Regime::Weak(a), Quantity::MeanCount) => c_alpha(a, CMethod::Bessel)?,
        (Regime::Strong(t), Quantity::VarCount) => {
            (2.0 - 2f64.sqrt()) * strong_prefactor(t) * (2.0 / PI).sqrt()
        }
        (Regime::Weak(a), Quantity::VarCount) => {
            2.0 * (c_alpha(a, CMethod::Bessel)? - c_alpha(2f64.sqrt() * a, CMethod::Bessel)?)
        }
        (_, Quantity::CltSigma2) => clt_sigma2(regime)?,
        (Regime::Strong(t), Quantity::LdpRate) => {
            -strong_prefactor(t) * zeta_three_halves() / (2.0 * PI).sqrt()
        }
        (Regime::Weak(a), Quantity::LdpRate) => {
            relation = Relation::UpperBound;
            -d_alpha(a, DMethod::Series)?
        }
        (Regime::Strong(t), Quantity::GenfunLimit { x }) => {
            if !(0.0..=2.0).contains(&x) {
                return Err(Error::Argument(format!(
                    "generating-function limit is stated for x in [0, 2], got {x}"
                )));
            }
            // + 0.0 turns -0.0 at x = 1 into 0.0
            -strong_prefactor(t) * polylog(PolylogOrder::ThreeHalves, 1.0 - x)? / (2.0 * PI).sqrt() + 0.0
        }
        (Regime::Weak(_), Quantity::GenfunLimit { .. }) => return Ok(None),
    };
    Ok(Some(AsymptoticPrediction {
        regime,
        quantity,
        value,
        regime_exponent: regime.regime_exponent(),
        relation,
    }))
}

/// All predictions for the regime: trace limits for `m = 1..=3` and the
/// generating-function limit on a coarse `x` grid where available.
pub fn predictions(regime: Regime) -> Result<Vec<AsymptoticPrediction>> {
    let mut qs: Vec<Quantity> = (1..=3).map(|m| Quantity::TraceLimit { m }).collect();
    qs.extend([
        Quantity::MeanCount,
        Quantity::VarCount,
        Quantity::CltSigma2,
        Quantity::LdpRate,
    ]);
    qs.extend([0.0, 0.5, 1.0, 1.5, 2.0].map(|x| Quantity::GenfunLimit { x }));
    let mut out = Vec::new();
    for q in qs {
        if let Some(p) = predict(regime, q)? {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(r: Regime, q: Quantity) -> f64 {
        predict(r, q).unwrap().unwrap().value
    }

    #[test]
    fn strong_constants() {
        let r = Regime::Strong(0.0);
        let t1 = value(r, Quantity::TraceLimit { m: 1 });
        assert!((t1 - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((value(r, Quantity::LdpRate) + 1.042186).abs() < 1e-6);
        assert!((clt_sigma2(Regime::Strong(0.7)).unwrap() - 0.5857864).abs() < 1e-7);
        let ld = value(Regime::Strong(0.5), Quantity::LdpRate);
        assert!((ld + 1.8051207983879).abs() < 1e-12);
    }

    #[test]
    fn rate_over_mean_is_tau_free() {
        let z = zeta_three_halves();
        for t in [-0.5, 0.0, 0.3, 0.9] {
            let r = Regime::Strong(t);
            let ratio = value(r, Quantity::LdpRate) / value(r, Quantity::MeanCount);
            // (zeta(3/2)/sqrt(2 pi)) / sqrt(2/pi) = zeta(3/2)/2
            assert!((ratio + 0.5 * z).abs() < 1e-12, "{t}: {ratio}");
        }
    }

    #[test]
    fn genfun_endpoints() {
        let r = Regime::Strong(0.25);
        assert_eq!(value(r, Quantity::GenfunLimit { x: 1.0 }), 0.0);
        let at0 = value(r, Quantity::GenfunLimit { x: 0.0 });
        assert!((at0 - value(r, Quantity::LdpRate)).abs() < 1e-13);
        let at2 = value(Regime::Strong(0.0), Quantity::GenfunLimit { x: 2.0 });
        assert!((at2 - 0.30524949884643).abs() < 1e-12, "{at2}");
        assert!(predict(r, Quantity::GenfunLimit { x: 2.5 }).is_err());
    }

    #[test]
    fn weak_sigma_limits() {
        let big = clt_sigma2(Regime::Weak(40.0)).unwrap();
        assert!((big - (2.0 - 2f64.sqrt())).abs() < 1e-3, "{big}");
        let small = clt_sigma2(Regime::Weak(0.05)).unwrap();
        assert!(small.abs() < 1e-2);
        let w = value(Regime::Weak(1.0), Quantity::TraceLimit { m: 2 });
        assert!((w - 0.5 * 0.67367002294334889).abs() < 1e-14);
        let p = predict(Regime::Weak(1.0), Quantity::LdpRate).unwrap().unwrap();
        assert_eq!(p.relation, Relation::UpperBound);
        assert_eq!(p.regime_exponent, 2);
    }

    #[test]
    fn weak_tau() {
        assert!((Regime::Weak(1.0).tau_at(1000) - (1.0 - 1.0 / 2000.0)).abs() < 1e-16);
        assert!(Regime::Strong(1.0).validate().is_err());
    }
}
