//! JSON views of the crate's geometric objects and certificates.
//!
//! Integers serialize as plain JSON numbers while their magnitude is at
//! most `2^53` (the largest integer every JSON reader restores exactly)
//! and as decimal strings beyond that; readers accept both forms
//! everywhere. Rationals always serialize as `"p/q"` strings. Struct
//! fields keep a fixed order and collections keep the crate's canonical
//! lexicographic orders, so serializing the same value twice yields
//! byte-identical output.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::AffineMap;
use crate::config::PointConfig;
use crate::ehrhart::EhrhartPolynomial;
use crate::error::{Error, Result};
use crate::hull::{convex_hull, LatticePolytope};
use crate::invariants::{VertexCertificate, VeryAmpleCertificate};
use crate::matrix::IntMat;
use crate::monoid::{GapReport, GapWitness};
use crate::point::IntPoint;
use crate::triangulation::TriangulationComplex;

/// Largest magnitude serialized as a JSON number: `2^53`.
fn number_limit() -> BigInt {
    BigInt::from(1u64 << 53)
}

/// An arbitrary-precision integer with the number-or-string convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.abs() <= number_limit() {
            serializer.serialize_i64(self.0.to_i64().expect("within 2^53"))
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(BigInt::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        v.parse::<BigInt>()
            .map(JsonInt)
            .map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

/// An exact rational, always rendered as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

struct JsonRationalVisitor;

impl Visitor<'_> for JsonRationalVisitor {
    type Value = JsonRational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a \"p/q\" string or an integer")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonRational, E> {
        Ok(JsonRational(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonRational, E> {
        Ok(JsonRational(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonRational, E> {
        let invalid = || E::custom(format!("not a rational: {v:?}"));
        match v.split_once('/') {
            Some((p, q)) => {
                let numer = p.parse::<BigInt>().map_err(|_| invalid())?;
                let denom = q.parse::<BigInt>().map_err(|_| invalid())?;
                if denom == BigInt::from(0) {
                    return Err(invalid());
                }
                Ok(JsonRational(BigRational::new(numer, denom)))
            }
            None => {
                let numer = v.parse::<BigInt>().map_err(|_| invalid())?;
                Ok(JsonRational(BigRational::from_integer(numer)))
            }
        }
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(JsonRationalVisitor)
    }
}

fn coords_to_json(p: &IntPoint) -> Vec<JsonInt> {
    p.coords().iter().cloned().map(JsonInt).collect()
}

fn coords_from_json(coords: &[JsonInt]) -> IntPoint {
    IntPoint::new(coords.iter().map(|c| c.0.clone()).collect())
}

/// A finite point set: `{"dim": d, "points": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointSetJson {
    pub dim: usize,
    pub points: Vec<Vec<JsonInt>>,
}

impl From<&PointConfig> for PointSetJson {
    fn from(config: &PointConfig) -> Self {
        PointSetJson {
            dim: config.dim(),
            points: config.points().iter().map(coords_to_json).collect(),
        }
    }
}

impl TryFrom<&PointSetJson> for PointConfig {
    type Error = Error;

    fn try_from(json: &PointSetJson) -> Result<PointConfig> {
        let points = json.points.iter().map(|c| coords_from_json(c)).collect();
        PointConfig::new(json.dim, points)
    }
}

/// One linear inequality `normal · x >= offset`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FacetJson {
    pub normal: Vec<JsonInt>,
    pub offset: JsonInt,
}

/// A full-dimensional lattice polytope with both representations.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<JsonInt>>,
    pub facets: Vec<FacetJson>,
}

impl From<&LatticePolytope> for PolytopeJson {
    fn from(poly: &LatticePolytope) -> Self {
        PolytopeJson {
            dim: poly.dim(),
            vertices: poly.vertices().iter().map(coords_to_json).collect(),
            facets: poly
                .hrep()
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: coords_to_json(&f.normal),
                    offset: JsonInt(f.offset.clone()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolytopeJson> for LatticePolytope {
    type Error = Error;

    /// Rebuilds the polytope as the hull of the listed vertices and checks
    /// any listed facets against the recomputed ones, so a tampered pair
    /// of representations cannot pass as consistent.
    fn try_from(json: &PolytopeJson) -> Result<LatticePolytope> {
        let vertices: Vec<IntPoint> = json.vertices.iter().map(|c| coords_from_json(c)).collect();
        let poly = convex_hull(&vertices, json.dim)?;
        if !json.facets.is_empty() {
            let mut listed: Vec<(IntPoint, BigInt)> = json
                .facets
                .iter()
                .map(|f| (coords_from_json(&f.normal), f.offset.0.clone()))
                .collect();
            listed.sort();
            let mut computed: Vec<(IntPoint, BigInt)> = poly
                .hrep()
                .facets
                .iter()
                .map(|f| (f.normal.clone(), f.offset.clone()))
                .collect();
            computed.sort();
            if listed != computed {
                return Err(Error::malformed(
                    "listed facets do not match the hull of the listed vertices",
                ));
            }
        }
        Ok(poly)
    }
}

/// An affine map `x -> matrix * x + offset`. The domain dimension is stored
/// explicitly because a map onto a point has an empty matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FibrationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_dim: Option<usize>,
    pub matrix: Vec<Vec<JsonInt>>,
    pub offset: Vec<JsonInt>,
}

impl From<&AffineMap> for FibrationJson {
    fn from(map: &AffineMap) -> Self {
        FibrationJson {
            domain_dim: Some(map.domain_dim()),
            matrix: map
                .matrix()
                .rows
                .iter()
                .map(|row| row.iter().cloned().map(JsonInt).collect())
                .collect(),
            offset: map.offset().iter().cloned().map(JsonInt).collect(),
        }
    }
}

impl TryFrom<&FibrationJson> for AffineMap {
    type Error = Error;

    fn try_from(json: &FibrationJson) -> Result<AffineMap> {
        let rows: Vec<Vec<BigInt>> = json
            .matrix
            .iter()
            .map(|row| row.iter().map(|c| c.0.clone()).collect())
            .collect();
        let cols = match json.domain_dim {
            Some(dim) => dim,
            None => rows.first().map_or(json.offset.len(), Vec::len),
        };
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::malformed("ragged fibration matrix"));
        }
        let offset = json.offset.iter().map(|c| c.0.clone()).collect();
        AffineMap::new(IntMat::new(rows, cols), offset)
    }
}

/// A simplicial complex: `{"vertices", "simplices", "heights"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangulationJson {
    pub vertices: Vec<Vec<JsonInt>>,
    pub simplices: Vec<Vec<usize>>,
    pub heights: Option<Vec<JsonRational>>,
}

impl From<&TriangulationComplex> for TriangulationJson {
    fn from(t: &TriangulationComplex) -> Self {
        TriangulationJson {
            vertices: t.vertex_pool().iter().map(coords_to_json).collect(),
            simplices: t.maximal_cells().to_vec(),
            heights: t
                .heights()
                .map(|hs| hs.iter().cloned().map(JsonRational).collect()),
        }
    }
}

impl TryFrom<&TriangulationJson> for TriangulationComplex {
    type Error = Error;

    fn try_from(json: &TriangulationJson) -> Result<TriangulationComplex> {
        let pool: Vec<IntPoint> = json.vertices.iter().map(|c| coords_from_json(c)).collect();
        if let Some(heights) = &json.heights {
            // Heights are per pool entry; canonicalization reorders the
            // pool, so carry them through the same permutation.
            if heights.len() != pool.len() {
                return Err(Error::DimensionMismatch {
                    expected: pool.len(),
                    got: heights.len(),
                });
            }
            let mut order: Vec<usize> = (0..pool.len()).collect();
            order.sort_by(|&a, &b| pool[a].cmp(&pool[b]));
            let sorted_pool: Vec<IntPoint> = order.iter().map(|&i| pool[i].clone()).collect();
            if sorted_pool.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::malformed(
                    "duplicate vertices are ambiguous with heights attached",
                ));
            }
            let sorted_heights: Vec<BigRational> =
                order.iter().map(|&i| heights[i].0.clone()).collect();
            let mut new_index = vec![0usize; pool.len()];
            for (rank, &old) in order.iter().enumerate() {
                new_index[old] = rank;
            }
            let simplices = json
                .simplices
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|&i| {
                            if i < new_index.len() {
                                Ok(new_index[i])
                            } else {
                                Err(Error::malformed(format!("cell index {i} is out of range")))
                            }
                        })
                        .collect()
                })
                .collect::<Result<Vec<Vec<usize>>>>()?;
            TriangulationComplex::new(sorted_pool, simplices)?.with_heights(sorted_heights)
        } else {
            TriangulationComplex::new(pool, json.simplices.clone())
        }
    }
}

/// The gap profile of a point configuration.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GapReportJson {
    pub gap_vector: Vec<u64>,
    pub gamma: usize,
    pub witnesses: Vec<GapWitnessJson>,
    pub stop_height: Option<usize>,
    pub capped: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GapWitnessJson {
    pub height: usize,
    pub point: Vec<JsonInt>,
}

impl From<&GapReport> for GapReportJson {
    fn from(report: &GapReport) -> Self {
        GapReportJson {
            gap_vector: report.gap_vector.clone(),
            gamma: report.gamma,
            witnesses: report
                .witnesses
                .iter()
                .map(|w| GapWitnessJson {
                    height: w.height,
                    point: coords_to_json(&w.point),
                })
                .collect(),
            stop_height: report.stop_height,
            capped: report.capped,
        }
    }
}

impl From<&GapReportJson> for GapReport {
    fn from(json: &GapReportJson) -> Self {
        GapReport {
            gap_vector: json.gap_vector.clone(),
            gamma: json.gamma,
            witnesses: json
                .witnesses
                .iter()
                .map(|w| GapWitness {
                    height: w.height,
                    point: coords_from_json(&w.point),
                })
                .collect(),
            stop_height: json.stop_height,
            capped: json.capped,
        }
    }
}

/// Per-vertex very-ampleness evidence: the corner cone's Hilbert basis and
/// one monoid decomposition per basis element (`null` where none exists).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexCertificateJson {
    pub vertex: Vec<JsonInt>,
    pub hilbert_basis: Vec<Vec<JsonInt>>,
    pub decompositions: Vec<Option<Vec<DecompositionTermJson>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionTermJson {
    pub generator: Vec<JsonInt>,
    pub multiplicity: u64,
}

/// The full very-ampleness certificate.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VeryAmpleJson {
    pub very_ample: bool,
    pub vertices: Vec<VertexCertificateJson>,
}

impl VeryAmpleJson {
    pub fn new(very_ample: bool, certificate: &VeryAmpleCertificate) -> Self {
        VeryAmpleJson {
            very_ample,
            vertices: certificate
                .vertices
                .iter()
                .map(vertex_certificate_to_json)
                .collect(),
        }
    }
}

fn vertex_certificate_to_json(cert: &VertexCertificate) -> VertexCertificateJson {
    VertexCertificateJson {
        vertex: coords_to_json(&cert.vertex),
        hilbert_basis: cert.hilbert_basis.iter().map(coords_to_json).collect(),
        decompositions: cert
            .decompositions
            .iter()
            .map(|d| {
                d.as_ref().map(|terms| {
                    terms
                        .iter()
                        .map(|(generator, multiplicity)| DecompositionTermJson {
                            generator: coords_to_json(generator),
                            multiplicity: *multiplicity,
                        })
                        .collect()
                })
            })
            .collect(),
    }
}

/// An Ehrhart counting polynomial by ascending coefficients.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EhrhartJson {
    pub coefficients: Vec<JsonRational>,
}

impl From<&EhrhartPolynomial> for EhrhartJson {
    fn from(poly: &EhrhartPolynomial) -> Self {
        EhrhartJson {
            coefficients: poly
                .coefficients()
                .iter()
                .cloned()
                .map(JsonRational)
                .collect(),
        }
    }
}

/// Serializes any artifact in the crate's canonical layout: two-space
/// indentation and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    #[test]
    fn test_small_integers_are_numbers_and_huge_ones_are_strings() {
        let small = JsonInt(BigInt::from(1u64 << 53));
        assert_eq!(serde_json::to_string(&small).unwrap(), "9007199254740992");
        let big = JsonInt(BigInt::from((1u64 << 53) + 1));
        assert_eq!(
            serde_json::to_string(&big).unwrap(),
            "\"9007199254740993\""
        );
        let negative = JsonInt(BigInt::from(-(1i64 << 60)));
        let back: JsonInt =
            serde_json::from_str(&serde_json::to_string(&negative).unwrap()).unwrap();
        assert_eq!(back, negative);
    }

    #[test]
    fn test_rationals_round_trip_as_strings() {
        let r = JsonRational(BigRational::new(BigInt::from(-7), BigInt::from(4)));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-7/4\"");
        let back: JsonRational = serde_json::from_str("\"-7/4\"").unwrap();
        assert_eq!(back, r);
        let from_int: JsonRational = serde_json::from_str("3").unwrap();
        assert_eq!(from_int.0, BigRational::from_integer(BigInt::from(3)));
        assert!(serde_json::from_str::<JsonRational>("\"1/0\"").is_err());
    }

    #[test]
    fn test_polytope_round_trip_and_facet_consistency_check() {
        let square = convex_hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]), 2).unwrap();
        let json = PolytopeJson::from(&square);
        let text = to_canonical_json(&json);
        let parsed: PolytopeJson = serde_json::from_str(&text).unwrap();
        let back = LatticePolytope::try_from(&parsed).unwrap();
        assert_eq!(back.vertices(), square.vertices());
        assert_eq!(back.hrep(), square.hrep());

        let mut tampered = json.clone();
        tampered.facets[0].offset = JsonInt(BigInt::from(7));
        assert!(LatticePolytope::try_from(&tampered).is_err());

        // Facets are optional on input.
        let mut lean = json;
        lean.facets.clear();
        assert!(LatticePolytope::try_from(&lean).is_ok());
    }

    #[test]
    fn test_triangulation_round_trip_preserves_heights_across_reordering() {
        let json = TriangulationJson {
            vertices: vec![
                coords_to_json(&IntPoint::from_i64(&[1, 0])),
                coords_to_json(&IntPoint::from_i64(&[0, 0])),
                coords_to_json(&IntPoint::from_i64(&[0, 1])),
            ],
            simplices: vec![vec![0, 1, 2]],
            heights: Some(vec![
                JsonRational(BigRational::from_integer(BigInt::from(10))),
                JsonRational(BigRational::zero()),
                JsonRational(BigRational::from_integer(BigInt::from(5))),
            ]),
        };
        let t = TriangulationComplex::try_from(&json).unwrap();
        // The pool is sorted: (0,0), (0,1), (1,0); heights must follow.
        assert_eq!(t.vertex_pool(), pts(&[&[0, 0], &[0, 1], &[1, 0]]).as_slice());
        let heights = t.heights().unwrap();
        assert_eq!(heights[0], BigRational::zero());
        assert_eq!(heights[1], BigRational::from_integer(BigInt::from(5)));
        assert_eq!(heights[2], BigRational::from_integer(BigInt::from(10)));

        let rendered = TriangulationJson::from(&t);
        let again = TriangulationComplex::try_from(&rendered).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn test_canonical_json_is_deterministic() {
        let square = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        let a = to_canonical_json(&PolytopeJson::from(&square));
        let b = to_canonical_json(&PolytopeJson::from(&square));
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn test_fibration_round_trip() {
        let map = AffineMap::projection(3, 2);
        let json = FibrationJson::from(&map);
        let back = AffineMap::try_from(&json).unwrap();
        assert_eq!(back.matrix().rows, map.matrix().rows);
        assert_eq!(back.offset(), map.offset());
    }

    #[test]
    fn test_fibration_onto_point_keeps_domain_dimension() {
        let map = AffineMap::projection(1, 0);
        let json = FibrationJson::from(&map);
        let text = to_canonical_json(&json);
        let parsed: FibrationJson = serde_json::from_str(&text).unwrap();
        let back = AffineMap::try_from(&parsed).unwrap();
        assert_eq!(back.domain_dim(), 1);
        assert_eq!(back.codomain_dim(), 0);
    }
}
