//! Regular polygonal tori: finite products of regular polygons.
//!
//! A point of the torus is stored combinatorially as one vertex index per
//! factor. Orders and indices are arbitrary-precision integers since the
//! approximation factors routinely need `m` far beyond 64 bits. Distances are
//! always evaluated through the chord formula on index differences.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `num / den` rounded to the nearest `f64`, without forming either operand as a float.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    Ratio::new_raw(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .expect("ratio of finite integers")
}

/// Length of the chord joining two vertices `dj` steps apart on a regular
/// `m`-gon of circumradius `r`.
pub fn chord(m: &BigUint, r: f64, dj: &BigUint) -> f64 {
    let k = dj % m;
    let k = (m - &k).min(k);
    if k.is_zero() {
        return 0.0;
    }
    2.0 * r * (PI * ratio_to_f64(&k, m)).sin()
}

/// A regular `m`-gon of circumradius `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    #[serde(with = "decimal")]
    pub m: BigUint,
    pub r: f64,
}

impl PolygonSpec {
    pub fn new(m: impl Into<BigUint>, r: f64) -> Result<Self> {
        let p = Self { m: m.into(), r };
        p.validate().map_err(Error::Input)?;
        Ok(p)
    }

    pub(crate) fn validate(&self) -> std::result::Result<(), String> {
        if self.m < BigUint::from(2u32) {
            return Err(format!("polygon order {} is below 2", self.m));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(format!("circumradius {} is not a positive finite number", self.r));
        }
        Ok(())
    }

    /// Distance between adjacent vertices.
    pub fn side(&self) -> f64 {
        chord(&self.m, self.r, &BigUint::from(1u32))
    }
}

/// Ordered product of regular polygons, living in `R^(2 * factors)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TorusSpec {
    pub factors: Vec<PolygonSpec>,
}

impl TorusSpec {
    pub fn new(factors: Vec<PolygonSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Input("torus needs at least one factor".into()));
        }
        Ok(Self { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.factors.len()
    }

    /// The torus `self x other`.
    pub fn product(mut self, other: TorusSpec) -> TorusSpec {
        self.factors.extend(other.factors);
        self
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        self.check_point(p).is_ok()
    }

    pub(crate) fn check_point(&self, p: &TorusPoint) -> std::result::Result<(), String> {
        if p.indices.len() != self.factors.len() {
            return Err(format!(
                "point has {} indices but the torus has {} factors",
                p.indices.len(),
                self.factors.len()
            ));
        }
        for (i, (idx, f)) in p.indices.iter().zip(&self.factors).enumerate() {
            if idx >= &f.m {
                return Err(format!("index {idx} at factor {i} is not below m = {}", f.m));
            }
        }
        Ok(())
    }
}

/// Vertex coordinates on a torus, one index per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TorusPoint {
    pub indices: Vec<BigUint>,
}

impl TorusPoint {
    pub fn new(indices: Vec<BigUint>) -> Self {
        Self { indices }
    }

    pub fn from_u64s(indices: &[u64]) -> Self {
        Self { indices: indices.iter().map(|&i| BigUint::from(i)).collect() }
    }

    /// Index-wise concatenation, matching [`TorusSpec::product`].
    pub fn concat(mut self, other: TorusPoint) -> TorusPoint {
        self.indices.extend(other.indices);
        self
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, idx) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, ")")
    }
}

/// `(a - b) mod m` for `a, b < m`.
fn index_difference(m: &BigUint, a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn check_pair(t: &TorusSpec, p: &TorusPoint, q: &TorusPoint) -> Result<()> {
    t.check_point(p).map_err(Error::Input)?;
    t.check_point(q).map_err(Error::Input)
}

/// Per-factor squared chords between `p` and `q`.
pub fn squared_chords(t: &TorusSpec, p: &TorusPoint, q: &TorusPoint) -> Result<Vec<f64>> {
    check_pair(t, p, q)?;
    Ok(t.factors
        .iter()
        .zip(p.indices.iter().zip(&q.indices))
        .map(|(f, (a, b))| chord(&f.m, f.r, &index_difference(&f.m, a, b)).powi(2))
        .collect())
}

pub fn torus_distance_squared(t: &TorusSpec, p: &TorusPoint, q: &TorusPoint) -> Result<f64> {
    Ok(squared_chords(t, p, q)?.iter().sum())
}

pub fn torus_distance(t: &TorusSpec, p: &TorusPoint, q: &TorusPoint) -> Result<f64> {
    torus_distance_squared(t, p, q).map(f64::sqrt)
}

/// Rotates every factor: the transitive abelian group action on the torus.
pub fn shift(t: &TorusSpec, p: &TorusPoint, offsets: &[BigInt]) -> Result<TorusPoint> {
    t.check_point(p).map_err(Error::Input)?;
    if offsets.len() != t.len() {
        return Err(Error::Input(format!("expected {} offsets, got {}", t.len(), offsets.len())));
    }
    let indices = t
        .factors
        .iter()
        .zip(p.indices.iter().zip(offsets))
        .map(|(f, (idx, off))| {
            let m = BigInt::from(f.m.clone());
            let moved = (BigInt::from(idx.clone()) + off).mod_floor(&m);
            moved.to_biguint().expect("mod_floor with positive modulus is nonnegative")
        })
        .collect();
    Ok(TorusPoint { indices })
}

/// Cartesian coordinates of vertex `idx` of a regular `m`-gon of radius `r`.
///
/// The angle is reduced to a quadrant in exact integer arithmetic first, so
/// vertices on the axes come out exact.
pub fn vertex_position(m: &BigUint, r: f64, idx: &BigUint) -> (f64, f64) {
    let (quadrant, rem) = (idx * 4u32 % (m * 4u32)).div_rem(m);
    let phi = FRAC_PI_2 * ratio_to_f64(&rem, m);
    let (s, c) = phi.sin_cos();
    let (x, y) = match quadrant.to_u8().expect("quadrant below 4") {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    (r * x, r * y)
}

/// Embeds a torus point in `R^(2 * factors)`. Lossy once `m` is large enough
/// that neighbouring vertices round to the same coordinates.
pub fn materialize(t: &TorusSpec, p: &TorusPoint) -> Result<Vec<f64>> {
    t.check_point(p).map_err(Error::Input)?;
    Ok(t.factors
        .iter()
        .zip(&p.indices)
        .flat_map(|(f, idx)| {
            let (x, y) = vertex_position(&f.m, f.r, idx);
            [x, y]
        })
        .collect())
}

pub(crate) fn parse_decimal(s: &str) -> std::result::Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a nonnegative decimal integer"));
    }
    s.parse::<BigUint>().map_err(|e| e.to_string())
}

/// Serde adapter writing `BigUint` as a decimal string.
pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        parse_decimal(&s).map_err(de::Error::custom)
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.indices.iter().map(|i| i.to_str_radix(10)))
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let indices = raw
            .iter()
            .map(|s| parse_decimal(s))
            .collect::<std::result::Result<_, _>>()
            .map_err(de::Error::custom)?;
        Ok(TorusPoint { indices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn chord_examples() {
        assert_eq!(chord(&big(6), 1.0, &big(3)), 2.0);
        assert_relative_eq!(chord(&big(4), 1.0, &big(1)), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(chord(&big(3), 1.0 / 3f64.sqrt(), &big(1)), 1.0, max_relative = 1e-15);
        assert_eq!(chord(&big(5), 1.0, &big(0)), 0.0);
        assert_eq!(chord(&big(5), 1.0, &big(10)), 0.0);
    }

    #[test]
    fn chord_huge_order_has_no_cancellation() {
        // m = 10^21; a single step subtends 2*pi*1e-21, chord = 2 r sin(pi 1e-21).
        let m: BigUint = "1000000000000000000000".parse().unwrap();
        let c = chord(&m, 1e21, &big(1));
        assert_relative_eq!(c, 2.0 * PI, max_relative = 1e-15);
        let back = &m - big(1);
        assert_eq!(chord(&m, 1e21, &back), c);
    }

    #[test]
    fn torus_distance_examples() {
        let t = TorusSpec::new(vec![PolygonSpec::new(4u32, 1.0).unwrap(); 2]).unwrap();
        let p = TorusPoint::from_u64s(&[0, 0]);
        let q = TorusPoint::from_u64s(&[1, 3]);
        assert_eq!(torus_distance(&t, &p, &p).unwrap(), 0.0);
        assert_relative_eq!(torus_distance(&t, &p, &q).unwrap(), 2.0, max_relative = 1e-15);

        let single = TorusSpec::new(vec![PolygonSpec::new(7u32, 2.5).unwrap()]).unwrap();
        let (a, b) = (TorusPoint::from_u64s(&[1]), TorusPoint::from_u64s(&[5]));
        assert_eq!(torus_distance(&single, &a, &b).unwrap(), chord(&big(7), 2.5, &big(4)));
    }

    #[test]
    fn mismatched_points_rejected() {
        let t = TorusSpec::new(vec![PolygonSpec::new(4u32, 1.0).unwrap()]).unwrap();
        let p = TorusPoint::from_u64s(&[0, 0]);
        assert!(matches!(torus_distance(&t, &p, &p), Err(Error::Input(_))));
        let out_of_range = TorusPoint::from_u64s(&[4]);
        assert!(!t.contains(&out_of_range));
    }

    #[test]
    fn invalid_polygons_rejected() {
        assert!(PolygonSpec::new(1u32, 1.0).is_err());
        assert!(PolygonSpec::new(3u32, 0.0).is_err());
        assert!(PolygonSpec::new(3u32, f64::NAN).is_err());
        assert!(TorusSpec::new(vec![]).is_err());
    }

    #[test]
    fn shift_identities() {
        let t = TorusSpec::new(vec![PolygonSpec::new(5u32, 1.0).unwrap(), PolygonSpec::new(12u32, 3.0).unwrap()]).unwrap();
        let p = TorusPoint::from_u64s(&[3, 11]);
        let zero = vec![BigInt::zero(); 2];
        assert_eq!(shift(&t, &p, &zero).unwrap(), p);
        let full = vec![BigInt::from(5), BigInt::from(12)];
        assert_eq!(shift(&t, &p, &full).unwrap(), p);
        let neg = vec![BigInt::from(-4), BigInt::from(1)];
        assert_eq!(shift(&t, &p, &neg).unwrap(), TorusPoint::from_u64s(&[4, 0]));
    }

    #[test]
    fn materialize_examples() {
        let t = TorusSpec::new(vec![PolygonSpec::new(4u32, 1.0).unwrap(), PolygonSpec::new(9u32, 2.0).unwrap()]).unwrap();
        let x = materialize(&t, &TorusPoint::from_u64s(&[1, 0])).unwrap();
        assert_eq!(x, vec![0.0, 1.0, 2.0, 0.0]);
        let x = materialize(&t, &TorusPoint::from_u64s(&[3, 0])).unwrap();
        assert_eq!(x[..2], [0.0, -1.0]);
    }

    #[test]
    fn materialized_distance_matches_chords() {
        let t = TorusSpec::new(vec![
            PolygonSpec::new(7u32, 1.3).unwrap(),
            PolygonSpec::new(10_000u32, 40.0).unwrap(),
        ])
        .unwrap();
        let p = TorusPoint::from_u64s(&[2, 17]);
        let q = TorusPoint::from_u64s(&[6, 9_950]);
        let (a, b) = (materialize(&t, &p).unwrap(), materialize(&t, &q).unwrap());
        let euclid: f64 = a.iter().zip(&b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        assert_relative_eq!(euclid, torus_distance(&t, &p, &q).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let t = TorusSpec::new(vec![PolygonSpec::new(BigUint::from(10u32).pow(30), 0.5).unwrap()]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"factors":[{"m":"1000000000000000000000000000000","r":0.5}]}"#);
        let p: TorusPoint = serde_json::from_str(r#"["0","123456789012345678901234567890"]"#).unwrap();
        assert_eq!(p.indices[1].to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<TorusPoint>(r#"["-1"]"#).is_err());
        assert!(serde_json::from_str::<TorusPoint>(r#"["1e3"]"#).is_err());
    }
}
