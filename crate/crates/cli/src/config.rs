//! Run configuration shared by all commands.

use serde::{Deserialize, Serialize};
use whitvec::arith::expr::parse_cyc;
use whitvec::arith::CycNumber;
use whitvec::types::{Family, TypeParams};
use whitvec::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    BesselTable,
    Verify,
    Reduce,
    OracleCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a run depends on. Scalars are kept as expression strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub family: String,
    pub q: u64,
    pub n: usize,
    pub theta: Option<i64>,
    pub sigma: Option<i64>,
    pub beta_sign: i64,
    #[serde(rename = "A")]
    pub a: String,
    pub theta2: Option<i64>,
    pub sigma2: Option<i64>,
    pub beta_sign2: Option<i64>,
    #[serde(rename = "A2")]
    pub a2: String,
    pub twist: Option<String>,
    pub ell: Option<u64>,
    pub ideal: usize,
    pub window: u32,
    pub oracle: Option<(i64, i64)>,
    pub pairs: usize,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub out: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            family: "depth-zero".into(),
            q: 2,
            n: 2,
            theta: None,
            sigma: None,
            beta_sign: 1,
            a: "1".into(),
            theta2: None,
            sigma2: None,
            beta_sign2: None,
            a2: "1".into(),
            twist: None,
            ell: None,
            ideal: 0,
            window: 2,
            oracle: None,
            pairs: 200,
            seed: 1,
            jobs: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn family(&self) -> Result<Family> {
        Family::parse(&self.family)
    }

    pub fn twist(&self) -> Result<Option<CycNumber>> {
        self.twist.as_deref().map(parse_cyc).transpose()
    }

    fn params(
        &self,
        theta: Option<i64>,
        sigma: Option<i64>,
        beta_sign: i64,
        a: &str,
    ) -> Result<TypeParams> {
        let family = self.family()?;
        let missing = |what: &str| Error::InvalidParameter(format!("--{what} is required"));
        let mut p = match family {
            Family::DepthZero => TypeParams::depth_zero(
                self.q,
                theta.ok_or_else(|| missing("theta"))?,
                parse_cyc(a)?,
            ),
            Family::Ramified => TypeParams::ramified(
                self.q,
                sigma.ok_or_else(|| missing("sigma"))?,
                parse_cyc(a)?,
            )
            .with_beta_sign(beta_sign),
        };
        p.n = self.n;
        Ok(p)
    }

    pub fn first(&self) -> Result<TypeParams> {
        self.params(self.theta, self.sigma, self.beta_sign, &self.a)
    }

    /// The second type; unset indices default to the dual of the first.
    pub fn second(&self) -> Result<TypeParams> {
        let first = self.first()?;
        let theta2 = self.theta2.or_else(|| {
            first
                .theta
                .map(|k| (-k).rem_euclid((self.q * self.q - 1) as i64))
        });
        let sigma2 = self
            .sigma2
            .or_else(|| first.sigma.map(|s| (-s).rem_euclid(self.q as i64 - 1)));
        let sign2 = self.beta_sign2.unwrap_or(-self.beta_sign);
        self.params(theta2, sigma2, sign2, &self.a2)
    }
}
