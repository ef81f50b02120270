//! Input-token cost model for API-priced and self-hosted deployments.
//!
//! Output tokens, caching and batch discounts are not modeled.

use std::fmt;
use std::io::Read;

use rust_decimal::prelude::*;
use rust_decimal::RoundingStrategy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CostError {
    #[error("pricing `{name}`: {message}")]
    InvalidPricing { name: String, message: String },
    #[error("pricing config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("failed to read pricing config: {0}")]
    Io(#[from] std::io::Error),
    #[error("token total overflows")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PricingModel {
    /// Dollars per million input tokens.
    PerToken { price_per_million: Decimal },
    /// Dollars per machine hour at a sustained throughput in tokens/second.
    SelfHosted {
        hourly_rate: Decimal,
        throughput: Decimal,
    },
}

impl PricingModel {
    pub fn per_token(price_per_million: Decimal) -> Result<Self, CostError> {
        positive("per_token", "price_per_million", price_per_million)?;
        Ok(PricingModel::PerToken { price_per_million })
    }

    pub fn self_hosted(hourly_rate: Decimal, throughput: Decimal) -> Result<Self, CostError> {
        positive("self_hosted", "hourly_rate", hourly_rate)?;
        positive("self_hosted", "tokens_per_sec", throughput)?;
        Ok(PricingModel::SelfHosted {
            hourly_rate,
            throughput,
        })
    }
}

fn positive(name: &str, field: &str, value: Decimal) -> Result<(), CostError> {
    if value <= Decimal::ZERO {
        return Err(CostError::InvalidPricing {
            name: name.to_string(),
            message: format!("`{field}` must be strictly positive, got {value}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPricing {
    pub name: String,
    pub model: PricingModel,
}

impl fmt::Display for NamedPricing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            PricingModel::PerToken { price_per_million } => {
                write!(f, "{} (${price_per_million} / 1M tokens)", self.name)
            }
            PricingModel::SelfHosted {
                hourly_rate,
                throughput,
            } => write!(f, "{} (${hourly_rate}/h at {throughput} tok/s)", self.name),
        }
    }
}

/// The three deployments priced on 2025-02-27: Gemini-2.0-Flash via Google AI
/// Studio, Claude 3.5 Haiku via Anthropic, and self-hosted Llama-3.1-8B on a
/// RunPod A40.
pub fn reference_pricings() -> Vec<NamedPricing> {
    vec![
        NamedPricing {
            name: "gemini-2.0-flash".into(),
            model: PricingModel::PerToken {
                price_per_million: Decimal::new(15, 2),
            },
        },
        NamedPricing {
            name: "claude-3.5-haiku".into(),
            model: PricingModel::PerToken {
                price_per_million: Decimal::new(80, 2),
            },
        },
        NamedPricing {
            name: "llama-3.1-8b-self-hosted".into(),
            model: PricingModel::SelfHosted {
                hourly_rate: Decimal::new(44, 2),
                throughput: Decimal::from(20),
            },
        },
    ]
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PricingKind {
    PerToken,
    SelfHosted,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PricingEntry {
    name: String,
    kind: PricingKind,
    #[serde(default, deserialize_with = "decimal_option")]
    price_per_million: Option<Decimal>,
    #[serde(default, deserialize_with = "decimal_option")]
    hourly_rate: Option<Decimal>,
    #[serde(default, deserialize_with = "decimal_option")]
    tokens_per_sec: Option<Decimal>,
}

/// Parses a JSON number (or numeric string) through its shortest decimal
/// text, so `0.15` stays exactly 0.15.
fn decimal_option<'de, D>(de: D) -> Result<Option<Decimal>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(serde_json::Number),
        Text(String),
    }
    let text = match Option::<Raw>::deserialize(de)? {
        None => return Ok(None),
        Some(Raw::Number(n)) => n.to_string(),
        Some(Raw::Text(s)) => s,
    };
    Decimal::from_str(&text)
        .or_else(|_| Decimal::from_scientific(&text))
        .map(Some)
        .map_err(serde::de::Error::custom)
}

impl PricingEntry {
    fn into_named(self) -> Result<NamedPricing, CostError> {
        let missing = |field: &str| CostError::InvalidPricing {
            name: self.name.clone(),
            message: format!("missing `{field}`"),
        };
        let rename = |e: CostError| match e {
            CostError::InvalidPricing { message, .. } => CostError::InvalidPricing {
                name: self.name.clone(),
                message,
            },
            other => other,
        };
        let model = match self.kind {
            PricingKind::PerToken => {
                let price = self
                    .price_per_million
                    .ok_or_else(|| missing("price_per_million"))?;
                PricingModel::per_token(price).map_err(rename)?
            }
            PricingKind::SelfHosted => {
                let rate = self.hourly_rate.ok_or_else(|| missing("hourly_rate"))?;
                let tps = self
                    .tokens_per_sec
                    .ok_or_else(|| missing("tokens_per_sec"))?;
                PricingModel::self_hosted(rate, tps).map_err(rename)?
            }
        };
        Ok(NamedPricing {
            name: self.name,
            model,
        })
    }
}

/// Reads a pricing config: one `{name, kind, ...}` object or an array of them.
pub fn load_pricings<R: Read>(mut source: R) -> Result<Vec<NamedPricing>, CostError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let entries = if text.trim_start().starts_with('{') {
        vec![serde_json::from_str::<PricingEntry>(&text)?]
    } else {
        serde_json::from_str::<Vec<PricingEntry>>(&text)?
    };
    entries.into_iter().map(PricingEntry::into_named).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostEstimate {
    pub total_tokens: u64,
    /// Dollars, full precision.
    #[serde(with = "rust_decimal::serde::str")]
    pub cost: Decimal,
    pub schema_variant: String,
}

impl CostEstimate {
    /// Cost rounded half away from zero to one decimal, for display.
    pub fn display_cost(&self) -> Decimal {
        self.cost
            .round_dp_with_strategy(1, RoundingStrategy::MidpointAwayFromZero)
    }
}

const SECONDS_PER_HOUR: i64 = 3600;

/// Only input tokens contribute; output length is assumed constant.
pub fn estimate_cost(
    tokens_per_instance: u64,
    instances: u64,
    pricing: &PricingModel,
    schema_variant: &str,
) -> Result<CostEstimate, CostError> {
    let total_tokens = tokens_per_instance
        .checked_mul(instances)
        .ok_or(CostError::Overflow)?;
    let total = Decimal::from(total_tokens);
    let cost = match *pricing {
        PricingModel::PerToken { price_per_million } => {
            total
                .checked_mul(price_per_million)
                .ok_or(CostError::Overflow)?
                / Decimal::from(1_000_000)
        }
        PricingModel::SelfHosted {
            hourly_rate,
            throughput,
        } => {
            let numerator = total.checked_mul(hourly_rate).ok_or(CostError::Overflow)?;
            let denominator = throughput
                .checked_mul(Decimal::from(SECONDS_PER_HOUR))
                .ok_or(CostError::Overflow)?;
            numerator / denominator
        }
    };
    Ok(CostEstimate {
        total_tokens,
        cost: cost.normalize(),
        schema_variant: schema_variant.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn gemini_enhanced_cell() {
        let p = PricingModel::per_token(dec("0.15")).unwrap();
        let c = estimate_cost(921, 20_000, &p, "enhanced").unwrap();
        assert_eq!(c.total_tokens, 18_420_000);
        assert_eq!(c.cost, dec("2.763"));
    }

    #[test]
    fn self_hosted_enhanced_cell() {
        let p = PricingModel::self_hosted(dec("0.44"), dec("20")).unwrap();
        let c = estimate_cost(921, 20_000, &p, "enhanced").unwrap();
        // 921,000 s = 255.8333 h
        assert!((c.cost - dec("112.5666666666")).abs() < dec("0.0000001"));
        assert_eq!(c.display_cost(), dec("112.6"));
    }

    #[test]
    fn zero_instances_cost_nothing() {
        for p in reference_pricings() {
            let c = estimate_cost(921, 0, &p.model, "x").unwrap();
            assert_eq!(c.total_tokens, 0);
            assert!(c.cost.is_zero());
        }
    }

    #[test]
    fn invalid_rates_are_rejected() {
        assert!(PricingModel::per_token(Decimal::ZERO).is_err());
        assert!(PricingModel::self_hosted(dec("0.44"), dec("-1")).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let p = PricingModel::per_token(dec("0.15")).unwrap();
        assert!(matches!(
            estimate_cost(u64::MAX, 2, &p, "x"),
            Err(CostError::Overflow)
        ));
    }

    #[test]
    fn config_file_parses() {
        let text = r#"[
            {"name": "api", "kind": "per_token", "price_per_million": 0.15},
            {"name": "gpu", "kind": "self_hosted", "hourly_rate": 0.44, "tokens_per_sec": 20}
        ]"#;
        let p = load_pricings(text.as_bytes()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(
            p[0].model,
            PricingModel::PerToken {
                price_per_million: dec("0.15")
            }
        );
        assert_eq!(
            p[1].model,
            PricingModel::SelfHosted {
                hourly_rate: dec("0.44"),
                throughput: dec("20")
            }
        );
        let one = load_pricings(&br#"{"name":"a","kind":"per_token","price_per_million":1}"#[..])
            .unwrap();
        assert_eq!(one[0].name, "a");
    }

    #[test]
    fn config_errors_name_the_entry() {
        let text = r#"[{"name": "gpu", "kind": "self_hosted", "hourly_rate": 0.44}]"#;
        match load_pricings(text.as_bytes()) {
            Err(CostError::InvalidPricing { name, message }) => {
                assert_eq!(name, "gpu");
                assert!(message.contains("tokens_per_sec"));
            }
            other => panic!("{other:?}"),
        }
        let text = r#"[{"name": "api", "kind": "per_token", "price_per_million": 0}]"#;
        assert!(matches!(
            load_pricings(text.as_bytes()),
            Err(CostError::InvalidPricing { name, .. }) if name == "api"
        ));
        assert!(matches!(
            load_pricings(&b"[{\"name\":1}]"[..]),
            Err(CostError::Config(_))
        ));
    }

    proptest! {
        #[test]
        fn per_token_cost_is_linear(t in 0u64..100_000, n in 0u64..100_000, k in 1u64..50, cents in 1i64..10_000) {
            let p = PricingModel::per_token(Decimal::new(cents, 2)).unwrap();
            let base = estimate_cost(t, n, &p, "x").unwrap().cost;
            let scaled = estimate_cost(k * t, n, &p, "x").unwrap().cost;
            prop_assert_eq!(scaled, base * Decimal::from(k));
        }
    }
}
