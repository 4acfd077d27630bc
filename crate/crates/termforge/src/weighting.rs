//! Supervised term-weighting schemes.
//!
//! Every scheme maps a training-split contingency table (A, B, C, D; N =
//! A+B+C+D) — and, for the IGM family, a class-frequency profile — to a
//! finite score. Logarithms are natural throughout, except the base-10
//! correction term inside IGM-imp. Zero-prone denominators and log
//! arguments are clamped with max(·, 1), and 0·log 0 counts as 0, so every
//! scheme is total over admissible tables (A+B > 0, A+C > 0).

use crate::error::{Error, Result};
use crate::stats::{ClassFrequencyProfile, ContingencyTable};

/// Default mixing weight for the IGM-based composites.
pub const DEFAULT_LAMBDA: f64 = 7.0;

/// The identity of a weighting scheme, including its parameters: `beta`
/// exists exactly for FDD and `lambda` exactly for the IGM composites.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeId {
    /// A + C (global document frequency).
    Tgf,
    /// ln(N / (A+C)).
    Idf,
    /// A (in-class document frequency).
    TgfStar,
    /// A · ln(max(C+D,1) / max(C,1)).
    TgfStarIdfec,
    /// N(AD − BC)² / ((A+C)(B+D)(A+B)(C+D)); 0 when the denominator is 0.
    Chi2,
    /// ln(max(max(A,1)·D, 1) / max(B·C, 1)).
    OddsRatio,
    /// (A/N)·ln(max(A,1)/(A+C)) − ((A+B)/N)·ln((A+B)/N) + (B/N)·ln(B/(B+D)).
    InfoGain,
    /// InfoGain over the class-proportion entropy; 0 when that entropy is 0.
    GainRatio,
    /// ln(2 + (A+C+D) / max(C,1)).
    Gss,
    /// ln(1 + (A/max(B,1)) · (A/max(C,1))).
    Prob,
    /// ln(2 + A / max(C,1)).
    Rf,
    /// ln(max(C+D,1) / max(C,1)).
    Idfec,
    /// (A+C) · ln(max(C+D,1) / max(C,1)).
    TgfIdfec,
    /// ln(N·max(A,1) / (max(A+B,1)·max(A+C,1))).
    Mi,
    /// ln(2 + (A+C+D) / max(C,1)). Shares its printed form with GSS.
    IdfecB,
    /// A · (1 + λ·IGM).
    TgfStarIgm { lambda: f64 },
    /// A · (1 + λ·IGM-imp).
    TgfStarIgmImp { lambda: f64 },
    /// √A · (1 + λ·IGM-imp).
    SqrtTgfStarIgmImp { lambda: f64 },
    /// (1+β²)·DISCR·DESCR / (β²·DISCR + DESCR); β=0 is exactly DISCR.
    Fdd { beta: f64 },
}

impl SchemeId {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::Tgf => "tgf",
            SchemeId::Idf => "idf",
            SchemeId::TgfStar => "tgf-star",
            SchemeId::TgfStarIdfec => "tgf-star-idfec",
            SchemeId::Chi2 => "chi2",
            SchemeId::OddsRatio => "or",
            SchemeId::InfoGain => "ig",
            SchemeId::GainRatio => "gr",
            SchemeId::Gss => "gss",
            SchemeId::Prob => "prob",
            SchemeId::Rf => "rf",
            SchemeId::Idfec => "idfec",
            SchemeId::TgfIdfec => "tgf-idfec",
            SchemeId::Mi => "mi",
            SchemeId::IdfecB => "idfec-b",
            SchemeId::TgfStarIgm { .. } => "tgf-star-igm",
            SchemeId::TgfStarIgmImp { .. } => "tgf-star-igm-imp",
            SchemeId::SqrtTgfStarIgmImp { .. } => "sqrt-tgf-star-igm-imp",
            SchemeId::Fdd { .. } => "fdd",
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            SchemeId::Fdd { beta } => Some(*beta),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self {
            SchemeId::TgfStarIgm { lambda }
            | SchemeId::TgfStarIgmImp { lambda }
            | SchemeId::SqrtTgfStarIgmImp { lambda } => Some(*lambda),
            _ => None,
        }
    }

    /// Whether scoring needs a class-frequency profile.
    pub fn needs_profile(&self) -> bool {
        matches!(
            self,
            SchemeId::TgfStarIgm { .. }
                | SchemeId::TgfStarIgmImp { .. }
                | SchemeId::SqrtTgfStarIgmImp { .. }
        )
    }

    /// Resolves a scheme name plus optional parameters, enforcing that
    /// `beta` appears exactly with `fdd` and `lambda` exactly with the IGM
    /// composites (which default to λ = 7).
    pub fn parse(name: &str, beta: Option<f64>, lambda: Option<f64>) -> Result<SchemeId> {
        let lam = lambda.unwrap_or(DEFAULT_LAMBDA);
        if let Some(l) = lambda {
            if !l.is_finite() {
                return Err(Error::invalid(format!("lambda must be finite, got {l}")));
            }
        }
        if let Some(b) = beta {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::invalid(format!("beta must be finite and >= 0, got {b}")));
            }
        }
        let scheme = match name {
            "tgf" => SchemeId::Tgf,
            "idf" => SchemeId::Idf,
            "tgf-star" => SchemeId::TgfStar,
            "tgf-star-idfec" => SchemeId::TgfStarIdfec,
            "chi2" => SchemeId::Chi2,
            "or" => SchemeId::OddsRatio,
            "ig" => SchemeId::InfoGain,
            "gr" => SchemeId::GainRatio,
            "gss" => SchemeId::Gss,
            "prob" => SchemeId::Prob,
            "rf" => SchemeId::Rf,
            "idfec" => SchemeId::Idfec,
            "tgf-idfec" => SchemeId::TgfIdfec,
            "mi" => SchemeId::Mi,
            "idfec-b" => SchemeId::IdfecB,
            "tgf-star-igm" => SchemeId::TgfStarIgm { lambda: lam },
            "tgf-star-igm-imp" => SchemeId::TgfStarIgmImp { lambda: lam },
            "sqrt-tgf-star-igm-imp" => SchemeId::SqrtTgfStarIgmImp { lambda: lam },
            "fdd" => {
                let beta = beta.ok_or_else(|| Error::invalid("scheme fdd requires --beta"))?;
                return Ok(SchemeId::Fdd { beta });
            }
            other => {
                return Err(Error::invalid(format!(
                    "unknown scheme {other:?} (expected one of: {})",
                    Self::known_names().join(", ")
                )))
            }
        };
        if beta.is_some() {
            return Err(Error::invalid(format!("--beta only applies to scheme fdd, not {name}")));
        }
        if lambda.is_some() && !scheme.needs_profile() {
            return Err(Error::invalid(format!("--lambda only applies to the IGM schemes, not {name}")));
        }
        Ok(scheme)
    }

    pub fn known_names() -> Vec<&'static str> {
        vec![
            "tgf", "idf", "tgf-star", "tgf-star-idfec", "chi2", "or", "ig", "gr", "gss", "prob",
            "rf", "idfec", "tgf-idfec", "mi", "idfec-b", "tgf-star-igm", "tgf-star-igm-imp",
            "sqrt-tgf-star-igm-imp", "fdd",
        ]
    }

    /// The 18 non-FDD schemes with a given λ, in the conventional order.
    pub fn comparison_set(lambda: f64) -> Vec<SchemeId> {
        vec![
            SchemeId::Tgf,
            SchemeId::Idf,
            SchemeId::TgfStar,
            SchemeId::TgfStarIdfec,
            SchemeId::Chi2,
            SchemeId::OddsRatio,
            SchemeId::InfoGain,
            SchemeId::GainRatio,
            SchemeId::Gss,
            SchemeId::Prob,
            SchemeId::Rf,
            SchemeId::Idfec,
            SchemeId::TgfIdfec,
            SchemeId::Mi,
            SchemeId::IdfecB,
            SchemeId::TgfStarIgm { lambda },
            SchemeId::TgfStarIgmImp { lambda },
            SchemeId::SqrtTgfStarIgmImp { lambda },
        ]
    }
}

impl std::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Descriptive relevance DESCR = A / (A+B): how much of the class the term
/// covers. 0 for an empty class.
pub fn descr(t: &ContingencyTable) -> f64 {
    let denom = t.a + t.b;
    if denom == 0 {
        0.0
    } else {
        f64::from(t.a) / f64::from(denom)
    }
}

/// Discriminative relevance DISCR = A / (A+C): how exclusively the term
/// points at the class. 0 for a term absent from the training split.
pub fn discr(t: &ContingencyTable) -> f64 {
    let denom = t.a + t.c;
    if denom == 0 {
        0.0
    } else {
        f64::from(t.a) / f64::from(denom)
    }
}

/// FDD_β over already-computed DESCR and DISCR values.
///
/// β weighs the two relevances the way β weighs recall against precision in
/// F_β: β > 1 favors DESCR, β < 1 favors DISCR. β = 0 returns DISCR exactly
/// (the algebraic identity (DISCR·DESCR)/DESCR = DISCR, realized as a branch
/// because IEEE division would wobble in the last bit).
pub fn fdd_value(descr: f64, discr: f64, beta: f64) -> f64 {
    if descr <= 0.0 || discr <= 0.0 {
        return 0.0;
    }
    if beta == 0.0 {
        return discr;
    }
    let b2 = beta * beta;
    (1.0 + b2) * (discr * descr) / (b2 * discr + descr)
}

/// FDD_β of a contingency table; 0 whenever A = 0.
pub fn fdd(t: &ContingencyTable, beta: f64) -> f64 {
    if t.a == 0 {
        return 0.0;
    }
    fdd_value(descr(t), discr(t), beta)
}

/// Inverse gravity moment of a class-frequency profile:
/// f₁ / Σ_{r=1..m} f_r · r, with f₁ the rank-1 frequency.
pub fn igm(profile: &ClassFrequencyProfile) -> Result<f64> {
    let f1 = profile.freqs().next().unwrap_or(0);
    if f1 == 0 {
        return Err(Error::invalid(format!(
            "all-zero class frequency profile for term {:?}",
            profile.term.as_str()
        )));
    }
    let denom: f64 = profile
        .freqs()
        .enumerate()
        .map(|(i, f)| f64::from(f) * (i + 1) as f64)
        .sum();
    Ok(f64::from(f1) / denom)
}

/// IGM with the base-10 correction:
/// f₁ / (Σ_{r=1..m} f_r · r + log₁₀(d_total_max / f₁)), where d_total_max is
/// the training size of the rank-1 class.
pub fn igm_imp(profile: &ClassFrequencyProfile) -> Result<f64> {
    let f1 = profile.freqs().next().unwrap_or(0);
    if f1 == 0 {
        return Err(Error::invalid(format!(
            "all-zero class frequency profile for term {:?}",
            profile.term.as_str()
        )));
    }
    debug_assert!(profile.d_total_max >= f1, "rank-1 class must contain its own postings");
    let sum: f64 = profile
        .freqs()
        .enumerate()
        .map(|(i, f)| f64::from(f) * (i + 1) as f64)
        .sum();
    let correction = (f64::from(profile.d_total_max) / f64::from(f1)).log10();
    Ok(f64::from(f1) / (sum + correction))
}

/// Scores one (term, class) cell under `scheme`. The profile is required
/// exactly for the IGM composites.
pub fn score(
    scheme: &SchemeId,
    table: &ContingencyTable,
    profile: Option<&ClassFrequencyProfile>,
) -> Result<f64> {
    let a = f64::from(table.a);
    let b = f64::from(table.b);
    let c = f64::from(table.c);
    let d = f64::from(table.d);
    let n = f64::from(table.n());

    let igm_part = |improved: bool| -> Result<f64> {
        let profile = profile.ok_or_else(|| {
            Error::invalid(format!("scheme {} requires a class frequency profile", scheme.name()))
        })?;
        if improved {
            igm_imp(profile)
        } else {
            igm(profile)
        }
    };

    let value = match scheme {
        SchemeId::Tgf => a + c,
        SchemeId::Idf => (n / (a + c)).ln(),
        SchemeId::TgfStar => a,
        SchemeId::TgfStarIdfec => a * idfec_factor(c, d),
        SchemeId::Chi2 => chi2(a, b, c, d, n),
        SchemeId::OddsRatio => ((a.max(1.0) * d).max(1.0) / (b * c).max(1.0)).ln(),
        SchemeId::InfoGain => info_gain(a, b, c, d, n),
        SchemeId::GainRatio => {
            let entropy = -xlnx((a + b) / n) - xlnx((c + d) / n);
            if entropy == 0.0 {
                0.0
            } else {
                info_gain(a, b, c, d, n) / entropy
            }
        }
        SchemeId::Gss | SchemeId::IdfecB => (2.0 + (a + c + d) / c.max(1.0)).ln(),
        SchemeId::Prob => (1.0 + (a / b.max(1.0)) * (a / c.max(1.0))).ln(),
        SchemeId::Rf => (2.0 + a / c.max(1.0)).ln(),
        SchemeId::Idfec => idfec_factor(c, d),
        SchemeId::TgfIdfec => (a + c) * idfec_factor(c, d),
        SchemeId::Mi => (n * a.max(1.0) / ((a + b).max(1.0) * (a + c).max(1.0))).ln(),
        SchemeId::TgfStarIgm { lambda } => a * (1.0 + lambda * igm_part(false)?),
        SchemeId::TgfStarIgmImp { lambda } => a * (1.0 + lambda * igm_part(true)?),
        SchemeId::SqrtTgfStarIgmImp { lambda } => a.sqrt() * (1.0 + lambda * igm_part(true)?),
        SchemeId::Fdd { beta } => fdd(table, *beta),
    };
    debug_assert!(value.is_finite(), "{} on {table:?} gave {value}", scheme.name());
    Ok(value)
}

/// ln(max(C+D,1) / max(C,1)), the collection-frequency factor shared by the
/// IDFEC family.
fn idfec_factor(c: f64, d: f64) -> f64 {
    ((c + d).max(1.0) / c.max(1.0)).ln()
}

/// x·ln(x) with the 0·ln 0 = 0 convention.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn chi2(a: f64, b: f64, c: f64, d: f64, n: f64) -> f64 {
    let denom = (a + c) * (b + d) * (a + b) * (c + d);
    if denom == 0.0 {
        // B+D = 0 or C+D = 0 forces AD — BC = 0: no association measurable.
        return 0.0;
    }
    let diff = a * d - b * c;
    n * (diff * diff) / denom
}

fn info_gain(a: f64, b: f64, c: f64, d: f64, n: f64) -> f64 {
    let t1 = (a / n) * (a.max(1.0) / (a + c)).ln();
    let t2 = xlnx((a + b) / n);
    let t3 = if b == 0.0 { 0.0 } else { (b / n) * (b / (b + d)).ln() };
    t1 - t2 + t3
}
