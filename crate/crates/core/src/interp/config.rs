use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gfmat::{FieldElement, PrimeField};
use crate::linsys::Placement;
use crate::{Error, Result};

/// Attempts per draw before sampling gives up.
pub const SAMPLE_RETRIES: u32 = 64;

/// `y^2 = x^3 + a x + b`, homogenized as `y^2 z = x^3 + a x z^2 + b z^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCubic {
    pub a: u64,
    pub b: u64,
}

impl WeierstrassCubic {
    pub fn is_smooth(&self, field: PrimeField) -> bool {
        let a = field.element(self.a);
        let b = field.element(self.b);
        let disc = field.element(4) * a * a * a + field.element(27) * b * b;
        !disc.is_zero()
    }

    pub fn contains(&self, field: PrimeField, point: [u64; 3]) -> bool {
        let [x, y, z] = point.map(|c| field.element(c));
        let a = field.element(self.a);
        let b = field.element(self.b);
        y * y * z == x * x * x + a * x * z * z + b * z * z * z
    }

    fn rhs(&self, field: PrimeField, x: FieldElement) -> FieldElement {
        x * x * x + field.element(self.a) * x + field.element(self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplePoint {
    /// Projective coordinates `[x, y, z]`, reduced mod p.
    pub coords: [u64; 3],
    pub placement: Placement,
}

/// A concrete point configuration over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfig {
    #[serde(with = "super::decimal")]
    pub prime: u64,
    pub cubic: Option<WeierstrassCubic>,
    pub points: Vec<SamplePoint>,
    #[serde(with = "super::decimal")]
    pub seed: u64,
}

impl PointConfig {
    /// Samples one point per tag, in order. Generic points are uniform in the
    /// affine chart `z = 1`; on-cubic points are uniform-ish affine points of
    /// a random smooth Weierstrass cubic, found by drawing `x` until
    /// `x^3 + a x + b` is a square and taking a random root.
    pub fn sample(tags: &[Placement], field: PrimeField, seed: u64) -> Result<Self> {
        let p = field.modulus();
        if p <= 3 {
            return Err(Error::InvalidModulus(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let cubic = if tags.contains(&Placement::OnCubic) {
            let mut found = None;
            for _ in 0..SAMPLE_RETRIES {
                let c = WeierstrassCubic {
                    a: rng.gen_range(0..p),
                    b: rng.gen_range(0..p),
                };
                if c.is_smooth(field) {
                    found = Some(c);
                    break;
                }
            }
            Some(found.ok_or(Error::SamplingExhausted(SAMPLE_RETRIES))?)
        } else {
            None
        };

        let mut seen = BTreeSet::new();
        let mut points = Vec::with_capacity(tags.len());
        for &placement in tags {
            let mut drawn = None;
            for _ in 0..SAMPLE_RETRIES {
                let candidate = match placement {
                    Placement::Generic => Some([rng.gen_range(0..p), rng.gen_range(0..p), 1]),
                    Placement::OnCubic => {
                        let cubic = cubic.as_ref().expect("cubic drawn above");
                        let x = field.element(rng.gen_range(0..p));
                        let flip = rng.gen::<bool>();
                        cubic.rhs(field, x).sqrt().map(|y| {
                            let y = if flip { -y } else { y };
                            [x.value(), y.value(), 1]
                        })
                    }
                };
                if let Some(c) = candidate {
                    if seen.insert(c) {
                        drawn = Some(c);
                        break;
                    }
                }
            }
            let coords = drawn.ok_or(Error::SamplingExhausted(SAMPLE_RETRIES))?;
            points.push(SamplePoint { coords, placement });
        }

        Ok(Self {
            prime: p,
            cubic,
            points,
            seed,
        })
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.prime)
    }

    pub fn tags(&self) -> Vec<Placement> {
        self.points.iter().map(|pt| pt.placement).collect()
    }

    /// Checks the configuration invariants: reduced coordinates, no zero
    /// vector, pairwise distinct projective points, smooth cubic containing
    /// every on-cubic point.
    pub fn validate(&self) -> Result<()> {
        let field = self.field()?;
        let p = self.prime;
        let mut normalized = BTreeSet::new();
        for pt in &self.points {
            if pt.coords.iter().any(|&c| c >= p) || pt.coords.iter().all(|&c| c == 0) {
                return Err(Error::Domain(
                    "point coordinates must be reduced and not all zero",
                ));
            }
            if !normalized.insert(normalize(field, pt.coords)) {
                return Err(Error::Domain("points must be pairwise distinct"));
            }
            if pt.placement == Placement::OnCubic {
                match &self.cubic {
                    Some(c) if c.is_smooth(field) && c.contains(field, pt.coords) => {}
                    _ => return Err(Error::Domain("on-cubic point off the smooth cubic")),
                }
            }
        }
        Ok(())
    }
}

/// Scales a projective point so its last nonzero coordinate is 1.
pub(crate) fn normalize(field: PrimeField, coords: [u64; 3]) -> [u64; 3] {
    let pivot = coords
        .iter()
        .rposition(|&c| c % field.modulus() != 0)
        .expect("nonzero point");
    let inv = field
        .element(coords[pivot])
        .inverse()
        .expect("nonzero coordinate");
    coords.map(|c| (field.element(c) * inv).value())
}

/// `n_cubic` on-cubic points followed by `n_generic` generic ones.
pub fn sample_config(
    n_generic: usize,
    n_cubic: usize,
    field: PrimeField,
    seed: u64,
) -> Result<PointConfig> {
    let mut tags = alloc::vec![Placement::OnCubic; n_cubic];
    tags.extend(core::iter::repeat_n(Placement::Generic, n_generic));
    PointConfig::sample(&tags, field, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_only() {
        let f = PrimeField::default();
        let cfg = sample_config(3, 0, f, 7).unwrap();
        assert_eq!(cfg.points.len(), 3);
        assert!(cfg.cubic.is_none());
        assert!(cfg.points.iter().all(|p| p.placement == Placement::Generic));
        cfg.validate().unwrap();
    }

    #[test]
    fn all_on_cubic() {
        let f = PrimeField::default();
        let cfg = sample_config(0, 10, f, 11).unwrap();
        let cubic = cfg.cubic.unwrap();
        assert!(cubic.is_smooth(f));
        assert_eq!(cfg.points.len(), 10);
        assert!(cfg.points.iter().all(|p| cubic.contains(f, p.coords)));
        cfg.validate().unwrap();
    }

    #[test]
    fn deterministic() {
        let f = PrimeField::default();
        assert_eq!(
            sample_config(4, 6, f, 99).unwrap(),
            sample_config(4, 6, f, 99).unwrap()
        );
        assert_ne!(
            sample_config(4, 6, f, 99).unwrap(),
            sample_config(4, 6, f, 100).unwrap()
        );
    }

    #[test]
    fn small_prime_still_distinct() {
        let f = PrimeField::new(101).unwrap();
        for seed in 0..20 {
            let cfg = sample_config(5, 12, f, seed).unwrap();
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn exhausts_on_tiny_field() {
        // GF(5) has 25 affine points
        let f = PrimeField::new(5).unwrap();
        let err = sample_config(30, 0, f, 1).unwrap_err();
        assert_eq!(err, Error::SamplingExhausted(SAMPLE_RETRIES));
        assert_eq!(
            sample_config(1, 0, PrimeField::new(3).unwrap(), 1).unwrap_err(),
            Error::InvalidModulus(3)
        );
    }

    #[test]
    fn validate_catches_violations() {
        let f = PrimeField::default();
        let mut cfg = sample_config(1, 3, f, 5).unwrap();
        cfg.points[1].coords[1] = (cfg.points[1].coords[1] + 1) % f.modulus();
        assert!(cfg.validate().is_err());

        let mut dup = sample_config(2, 0, f, 5).unwrap();
        let [x, y, _] = dup.points[0].coords;
        dup.points[1].coords = [2 * x % f.modulus(), 2 * y % f.modulus(), 2];
        assert!(dup.validate().is_err());
    }

    #[test]
    fn serializes_large_integers_as_strings() {
        let cfg = sample_config(1, 0, PrimeField::default(), u64::MAX).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(json.contains("\"seed\":\"18446744073709551615\""));
        assert!(json.contains("\"prime\":\"2147483647\""));
        let back: PointConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
