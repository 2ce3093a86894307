//! Rényi entropies (in nats) and the power sums they are built from.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Orders within this distance of one are evaluated as Shannon entropy.
pub const SHANNON_WINDOW: f64 = 1e-9;

/// Rényi order `α ∈ (0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);
    pub const MIN: RenyiOrder = RenyiOrder(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidOrder(format!(
                "order must be positive, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < SHANNON_WINDOW
    }

    pub fn is_min(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_min() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shannon" => Ok(Self::SHANNON),
            "min" | "inf" | "infinity" => Ok(Self::MIN),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidOrder(format!("cannot parse order {s:?}")))
                .and_then(Self::new),
        }
    }
}

// Orders serialize as plain numbers, except the limits, which use the
// "shannon" / "min" markers.
impl Serialize for RenyiOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_min() {
            s.serialize_str("min")
        } else if self.0 == 1.0 {
            s.serialize_str("shannon")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for RenyiOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct OrderVisitor;

        impl<'de> Visitor<'de> for OrderVisitor {
            type Value = RenyiOrder;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number, \"shannon\", \"min\" or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<RenyiOrder, E> {
                RenyiOrder::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RenyiOrder, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RenyiOrder, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RenyiOrder, E> {
                v.parse()
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        d.deserialize_any(OrderVisitor)
    }
}

/// `H_α(p) = ln(Σ p_i^α) / (1 − α)`, with the `α → 1` and `α → ∞` limits
/// dispatched to [`shannon_entropy`] and [`min_entropy`].
pub fn renyi_entropy(p: &[f64], order: RenyiOrder) -> f64 {
    if order.is_shannon() {
        return shannon_entropy(p);
    }
    if order.is_min() {
        return min_entropy(p);
    }
    let alpha = order.value();
    let pmax = p.iter().copied().fold(0.0, f64::max);
    if pmax <= 0.0 {
        return 0.0;
    }
    // ln Σ p^α = α ln p_max + ln Σ (p/p_max)^α keeps large orders finite.
    let scaled: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| (x / pmax).powf(alpha))
        .sum();
    (alpha * pmax.ln() + scaled.ln()) / (1.0 - alpha)
}

/// `−Σ p_i ln p_i` with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `−ln max_i p_i`
pub fn min_entropy(p: &[f64]) -> f64 {
    let pmax = p.iter().copied().fold(0.0, f64::max);
    -pmax.ln()
}

/// Anything with a modulus: real probabilities or complex amplitudes.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for C64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// `S_b(x) = (Σ |x_j|^b)^{1/b}` for `b ≥ 1`.
pub fn power_sum<T: Magnitude>(x: &[T], b: f64) -> Result<f64> {
    if b.is_nan() || b < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "power-sum exponent must be at least 1, got {b}"
        )));
    }
    Ok(generalized_power_sum(x, b))
}

/// `(Σ |x_j|^b)^{1/b}` for any `b > 0`; below one this is no longer a norm
/// but the same expression. Zero entries are skipped and `b = ∞` gives the
/// max modulus.
pub fn generalized_power_sum<T: Magnitude>(x: &[T], b: f64) -> f64 {
    let max = x.iter().map(Magnitude::magnitude).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    if b.is_infinite() {
        return max;
    }
    let s: f64 = x
        .iter()
        .map(Magnitude::magnitude)
        .filter(|&m| m > 0.0)
        .map(|m| (m / max).powf(b))
        .sum();
    max * s.powf(1.0 / b)
}

/// `β = α/(2α − 1)`, the partner order with `1/α + 1/β = 2`.
///
/// Requires `1/2 < α < ∞`; the `(∞, 1/2)` endpoint is rejected.
pub fn conjugate_order(alpha: RenyiOrder) -> Result<RenyiOrder> {
    let a = alpha.value();
    if a.is_infinite() {
        return Err(Error::InvalidOrder(
            "α = ∞ has no admissible conjugate (β would be 1/2)".into(),
        ));
    }
    if a <= 0.5 {
        return Err(Error::InvalidOrder(format!(
            "conjugate order needs α > 1/2, got {a}"
        )));
    }
    if alpha.is_shannon() {
        return Ok(RenyiOrder::SHANNON);
    }
    RenyiOrder::new(a / (2.0 * a - 1.0))
}
