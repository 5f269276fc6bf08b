use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use ulc_core::dist::FamilySpec;
use ulc_core::ExactRational;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Poisson,
    Ztp,
    Binomial,
    Ula,
    Explicit,
}

/// Family and check parameters. Every field is optional so the same
/// structure serves as a sweep template (swept fields left unset).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Rate parameter (poisson, ztp, ula), e.g. "3/2" or "1.5".
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<ExactRational>,
    /// Upper support end of the ultra log-affine family.
    #[arg(long = "N", visible_alias = "n")]
    #[serde(default, rename = "N", alias = "n", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// Lower support end of the ultra log-affine family.
    #[arg(long = "K")]
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub support_start: Option<u64>,
    /// Number of binomial trials.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    /// Binomial success probability.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ExactRational>,
    /// Case index of the binomial inequality; defaults to floor(m p).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// Comma-separated unnormalized weights of an explicit pmf.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<ExactRational>>,
    /// First support point of an explicit pmf.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<u64>,
    /// Comma-separated grid for the f-ztp check.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<ExactRational>>,
    /// Lambda window "lo,hi" for claim2 and counterexample-region.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<ExactRational>>,
    /// Lambda grid step of counterexample-region.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<ExactRational>,
}

fn missing(name: &str, what: &str) -> CliError {
    CliError::Usage(format!("{what} requires --{name}"))
}

impl Params {
    pub fn lambda(&self, what: &str) -> Result<&ExactRational, CliError> {
        self.lambda.as_ref().ok_or_else(|| missing("lambda", what))
    }

    pub fn n(&self, what: &str) -> Result<u64, CliError> {
        self.n.ok_or_else(|| missing("N", what))
    }

    pub fn m(&self, what: &str) -> Result<u64, CliError> {
        self.m.ok_or_else(|| missing("m", what))
    }

    pub fn p(&self, what: &str) -> Result<&ExactRational, CliError> {
        self.p.as_ref().ok_or_else(|| missing("p", what))
    }

    /// `[lo, hi]` from `--window`, or the single point `--lambda`.
    pub fn window(&self, what: &str) -> Result<(ExactRational, ExactRational), CliError> {
        match (&self.window, &self.lambda) {
            (Some(w), _) if w.len() == 2 => Ok((w[0].clone(), w[1].clone())),
            (Some(_), _) => Err(CliError::Usage("--window takes exactly two values".into())),
            (None, Some(l)) => Ok((l.clone(), l.clone())),
            (None, None) => Err(missing("window", what)),
        }
    }

    pub fn family_spec(&self, kind: FamilyKind) -> Result<FamilySpec, CliError> {
        let what = "this family";
        Ok(match kind {
            FamilyKind::Poisson => FamilySpec::Poisson {
                lambda: self.lambda(what)?.clone(),
            },
            FamilyKind::Ztp => FamilySpec::ZeroTruncatedPoisson {
                lambda: self.lambda(what)?.clone(),
            },
            FamilyKind::Binomial => FamilySpec::Binomial {
                m: self.m(what)?,
                p: self.p(what)?.clone(),
            },
            FamilyKind::Ula => FamilySpec::UltraLogAffine {
                lambda: self.lambda(what)?.clone(),
                k: self.support_start.unwrap_or(0),
                n: self.n(what)?,
            },
            FamilyKind::Explicit => FamilySpec::Explicit {
                support_start: self.start.unwrap_or(0),
                weights: self.weights.clone().ok_or_else(|| missing("weights", what))?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_json_field_names() {
        let p = Params {
            n: Some(5),
            lambda: Some("3/2".parse().unwrap()),
            ..Params::default()
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"lambda":"3/2","N":5}"#);
        let back: Params = serde_json::from_str(r#"{"lambda":"1.5","n":5}"#).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Params>(r#"{"lamda":"1"}"#).is_err());
    }

    #[test]
    fn family_requires_its_parameters() {
        let p = Params::default();
        assert!(matches!(p.family_spec(FamilyKind::Ula), Err(CliError::Usage(_))));
        let p = Params {
            weights: Some(vec![ExactRational::one(); 4]),
            ..Params::default()
        };
        assert!(p.family_spec(FamilyKind::Explicit).is_ok());
    }
}
