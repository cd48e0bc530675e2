//! Quality criteria: PSNR and SR score denoising against a clean reference,
//! R_SC scores the contrast of an edge-response map.

mod edges;
mod fidelity;

pub use edges::{directional_ratio, lee_filter, rsc, Direction, LeeParams, EPSILON, R_MAX, SEGMENT_LENGTH};
pub use fidelity::{mse, psnr, sr, PEAK, SR_TILE};

/// The metrics computed for one filter result. Inapplicable metrics are `None`.
///
/// A perfect reconstruction has `psnr == Some(f64::INFINITY)`; with the
/// `serde` feature it is written as the string `"inf"`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricReport {
    #[cfg_attr(feature = "serde", serde(with = "inf_as_string"))]
    pub psnr: Option<f64>,
    pub sr: Option<f64>,
    pub rsc: Option<f64>,
}

#[cfg(feature = "serde")]
mod inf_as_string {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            None => s.serialize_none(),
            Some(v) if v.is_infinite() && *v > 0.0 => s.serialize_str("inf"),
            Some(v) => s.serialize_f64(*v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        struct PsnrVisitor;

        impl<'de> Visitor<'de> for PsnrVisitor {
            type Value = Option<f64>;

            fn expecting(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
                f.write_str("a number, \"inf\" or null")
            }

            fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }

            fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }

            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
                d.deserialize_any(self)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(Some(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(Some(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(Some(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" => Ok(Some(f64::INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        d.deserialize_option(PsnrVisitor)
    }
}
