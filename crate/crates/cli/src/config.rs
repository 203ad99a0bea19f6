//! The JSON run configuration. Every exponent and constant is an integer or
//! an `"a/b"` string; floats are rejected by the parser.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use fflab::dioph::{lacunary_hyperplane, ApproxFunction, HyperplaneData};
use fflab::field::exponent::{parse_q, q_int, Q};
use fflab::field::{Fq, FqConfig, Laurent};
use fflab::haar::UltraBall;
use fflab::{LabError, Result};

/// An exact rational: `3` or `"3"` or `"-1/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rat {
    Int(i64),
    Text(String),
}

impl Rat {
    pub fn to_q(&self, what: &str) -> Result<Q> {
        match self {
            Rat::Int(k) => Ok(q_int(*k)),
            Rat::Text(s) => parse_q(s).ok_or_else(|| LabError::Config(format!("{what}: `{s}` is not a rational"))),
        }
    }

    pub fn to_big(&self, what: &str) -> Result<BigRational> {
        let q = self.to_q(what)?;
        Ok(BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())))
    }
}

fn half() -> Rat {
    Rat::Text("1/2".into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaSpec {
    /// Lacunary series known down to T^prec.
    Lacunary { prec: i64 },
    /// One series per coefficient α₀..α_{n−1}, e.g. `"T^-1 + T^-3 + O(T^-40)"`.
    Series(Vec<String>),
    /// α_i = P_i/Q_i, given as polynomial strings.
    Rational { fracs: Vec<(String, String)>, prec: i64 },
    /// A text file with one series per line; relative to the config file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PsiSpec {
    /// ψ(q^t) = q^{−ct+b}.
    Linear { c: i64, b: i64 },
    /// log_q ψ(q^t) for t = 0, 1, …
    Table(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    /// Center coordinates as series strings; empty means the origin.
    #[serde(default)]
    pub center: Vec<String>,
    #[serde(rename = "radiusExp")]
    pub radius_exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub dioph: usize,
    pub submodule: usize,
    pub wedge: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { dioph: 4, submodule: 1, wedge: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoodSpec {
    #[serde(rename = "C")]
    pub c: Rat,
    /// Sub-ball resolution and ε depth of the certificates.
    pub m: i64,
    #[serde(rename = "J")]
    pub j: i64,
}

impl Default for GoodSpec {
    fn default() -> Self {
        GoodSpec { c: Rat::Int(1), m: 1, j: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NondivSpec {
    pub t: i64,
    /// log_q ε values; each must not exceed log_q ρ.
    pub eps: Vec<Rat>,
    /// log_q ρ; computed from the estimates when absent.
    #[serde(default)]
    pub rho: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    pub field: FqConfig,
    pub n: usize,
    pub alpha: AlphaSpec,
    pub psi: PsiSpec,
    #[serde(rename = "U")]
    pub u: BallSpec,
    pub delta: Rat,
    #[serde(rename = "D", default)]
    pub caps: Caps,
    /// Grid resolution.
    pub m: i64,
    #[serde(rename = "Tmax")]
    pub t_max: i64,
    #[serde(default = "half")]
    pub xi: Rat,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub good: GoodSpec,
    #[serde(default)]
    pub nondiv: Option<NondivSpec>,
}

/// A validated configuration with every object built.
pub struct Lab {
    pub config: LabConfig,
    pub fq: Fq,
    pub h: HyperplaneData,
    pub psi: ApproxFunction,
    pub u: UltraBall,
    pub delta: Q,
    pub xi: BigRational,
    pub good_c: BigRational,
}

impl LabConfig {
    pub fn from_json(text: &str) -> Result<LabConfig> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<LabConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        let mut c = LabConfig::from_json(&text)?;
        if let AlphaSpec::File(f) = &c.alpha {
            if f.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                c.alpha = AlphaSpec::File(base.join(f));
            }
        }
        Ok(c)
    }

    /// Checks every invariant and builds the field, hyperplane, ψ and U.
    pub fn validate(&self) -> Result<Lab> {
        let fq = Fq::new(self.field.clone())?;
        let n = self.n;
        if !(2..=5).contains(&n) {
            return cfg(format!("n = {n} outside 2..5"));
        }
        let delta = self.delta.to_q("delta")?;
        if delta <= q_int(0) || delta >= q_int(n as i64) {
            return cfg(format!("δ must lie in (0, {n})"));
        }
        let xi = self.xi.to_big("xi")?;
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        if xi <= zero || xi >= one {
            return cfg("ξ must lie in (0, 1)");
        }
        let good_c = self.good.c.to_big("good.C")?;
        if good_c < one {
            return cfg("C must be at least 1");
        }
        if self.good.m < 0 || self.good.j < 0 {
            return cfg("good.m and good.J must be nonnegative");
        }
        if !(0..=12).contains(&self.m) {
            return cfg("m outside 0..12");
        }
        if !(0..=6).contains(&self.t_max) {
            return cfg("Tmax outside 0..6");
        }
        if self.caps.dioph > 12 || self.caps.submodule > 2 || self.caps.wedge > 2 {
            return cfg("degree caps too large (dioph ≤ 12, submodule ≤ 2, wedge ≤ 2)");
        }
        let psi = match &self.psi {
            PsiSpec::Linear { c, b } => ApproxFunction::linear(*c, *b),
            PsiSpec::Table(v) => ApproxFunction::Table(v.clone()),
        };
        psi.validate()?;
        let h = self.hyperplane(&fq)?;
        let center = if self.u.center.is_empty() {
            vec![Laurent::zero(); n - 1]
        } else {
            self.u.center.iter().map(|s| parse_series(s, &fq)).collect::<Result<Vec<_>>>()?
        };
        if center.len() != n - 1 {
            return cfg(format!("U.center needs {} coordinates", n - 1));
        }
        let u = UltraBall::new(center, self.u.radius_exp).map_err(as_config)?;
        if let Some(nd) = &self.nondiv {
            if !(0..=6).contains(&nd.t) {
                return cfg("nondiv.t outside 0..6");
            }
            if nd.eps.is_empty() {
                return cfg("nondiv.eps is empty");
            }
            let rho = nd.rho.as_ref().map(|r| r.to_q("nondiv.rho")).transpose()?;
            for e in &nd.eps {
                let e = e.to_q("nondiv.eps")?;
                if rho.is_some_and(|r| e > r) {
                    return cfg("every ε must satisfy ε ≤ ρ");
                }
            }
        }
        Ok(Lab { config: self.clone(), fq, h, psi, u, delta, xi, good_c })
    }

    fn hyperplane(&self, fq: &Fq) -> Result<HyperplaneData> {
        let n = self.n;
        let series = |v: &[String]| -> Result<HyperplaneData> {
            let alpha = v.iter().map(|s| parse_series(s, fq)).collect::<Result<Vec<_>>>()?;
            HyperplaneData::new(n, alpha).map_err(as_config)
        };
        match &self.alpha {
            AlphaSpec::Lacunary { prec } => {
                if *prec >= 0 || *prec < -4096 {
                    return cfg("lacunary precision must lie in -4096..-1");
                }
                Ok(lacunary_hyperplane(n, *prec))
            }
            AlphaSpec::Series(v) => series(v),
            AlphaSpec::Rational { fracs, prec } => {
                let polys = fracs
                    .iter()
                    .map(|(p, q)| Ok((parse_series(p, fq)?.poly_part()?, parse_series(q, fq)?.poly_part()?)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(as_config)?;
                if polys.iter().any(|(_, q)| q.is_zero()) {
                    return cfg("zero denominator in alpha");
                }
                HyperplaneData::from_rationals(n, polys, *prec, fq).map_err(as_config)
            }
            AlphaSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
                let lines: Vec<String> =
                    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect();
                series(&lines)
            }
        }
    }
}

fn parse_series(s: &str, fq: &Fq) -> Result<Laurent> {
    Laurent::parse(s, fq).map_err(as_config)
}

fn as_config(e: LabError) -> LabError {
    match e {
        LabError::Config(_) => e,
        other => LabError::Config(other.to_string()),
    }
}

fn cfg<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Config(msg.into()))
}
