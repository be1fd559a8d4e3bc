//! Axis-aligned boxes: the bodies strongly isomorphic to the unit cube.
//!
//! The unit cube has facet normals `±e_1, …, ±e_n`, so a box is described by
//! `2n` support values. Only the slab widths `s_j = h⁺_j + h⁻_j` matter for
//! volumes and mixed volumes, and the volume polynomial is `Π_j s_j`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::rational::{format_rational, serde_str};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BoxBody {
    widths: Vec<BigRational>,
    offset: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    n: usize,
    #[serde(with = "serde_str::vec")]
    widths: Vec<BigRational>,
    #[serde(with = "serde_str::vec", default)]
    offset: Vec<BigRational>,
}

impl TryFrom<RawBox> for BoxBody {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        if raw.widths.len() != raw.n {
            return Err(Error::DimensionMismatch {
                expected: raw.n,
                found: raw.widths.len(),
            });
        }
        if raw.offset.is_empty() {
            Self::new(raw.widths)
        } else {
            Self::with_offset(raw.widths, raw.offset)
        }
    }
}

impl From<BoxBody> for RawBox {
    fn from(b: BoxBody) -> Self {
        RawBox {
            n: b.dim(),
            widths: b.widths,
            offset: b.offset,
        }
    }
}

impl BoxBody {
    /// Box `[0, w_1] × … × [0, w_n]`.
    pub fn new(widths: Vec<BigRational>) -> Result<Self> {
        let offset = vec![BigRational::zero(); widths.len()];
        Self::with_offset(widths, offset)
    }

    pub fn with_offset(widths: Vec<BigRational>, offset: Vec<BigRational>) -> Result<Self> {
        if widths.len() != offset.len() {
            return Err(Error::DimensionMismatch {
                expected: widths.len(),
                found: offset.len(),
            });
        }
        if let Some(w) = widths.iter().find(|w| w.is_negative()) {
            return Err(Error::Negative(w.clone()));
        }
        Ok(Self { widths, offset })
    }

    pub fn from_i64(widths: &[i64]) -> Result<Self> {
        Self::new(
            widths
                .iter()
                .map(|&w| BigRational::from_integer(w.into()))
                .collect(),
        )
    }

    pub fn unit_cube(n: usize) -> Self {
        Self::new(vec![BigRational::one(); n]).expect("unit widths are nonnegative")
    }

    pub fn point(at: Vec<BigRational>) -> Self {
        Self {
            widths: vec![BigRational::zero(); at.len()],
            offset: at,
        }
    }

    pub fn dim(&self) -> usize {
        self.widths.len()
    }

    pub fn widths(&self) -> &[BigRational] {
        &self.widths
    }

    pub fn offset(&self) -> &[BigRational] {
        &self.offset
    }

    /// Member of the cube's strongly isomorphic class: every width positive.
    pub fn is_nondegenerate(&self) -> bool {
        self.widths.iter().all(Signed::is_positive)
    }

    pub fn translated(&self, v: &[BigRational]) -> Result<Self> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(Self {
            widths: self.widths.clone(),
            offset: self.offset.iter().zip(v).map(|(o, t)| o + t).collect(),
        })
    }

    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        minkowski_combine(&[(c.clone(), self)])
    }

    pub fn describe(&self) -> String {
        let w: Vec<String> = self.widths.iter().map(format_rational).collect();
        format!("[{}]", w.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportVector {
    pub h_plus: Vec<BigRational>,
    pub h_minus: Vec<BigRational>,
}

impl SupportVector {
    pub fn dim(&self) -> usize {
        self.h_plus.len()
    }

    pub fn slab_widths(&self) -> Vec<BigRational> {
        self.h_plus
            .iter()
            .zip(&self.h_minus)
            .map(|(p, m)| p + m)
            .collect()
    }

    /// Inverse of [`support_vector`]; fails when some slab width is negative.
    pub fn to_box(&self) -> Result<BoxBody> {
        if self.h_plus.len() != self.h_minus.len() {
            return Err(Error::DimensionMismatch {
                expected: self.h_plus.len(),
                found: self.h_minus.len(),
            });
        }
        let offset = self.h_minus.iter().map(|m| -m).collect();
        BoxBody::with_offset(self.slab_widths(), offset)
    }
}

pub fn support_vector(k: &BoxBody) -> SupportVector {
    SupportVector {
        h_plus: k.offset.iter().zip(&k.widths).map(|(o, w)| o + w).collect(),
        h_minus: k.offset.iter().map(|o| -o).collect(),
    }
}

/// `Σ c_i K_i` for nonnegative coefficients.
pub fn minkowski_combine(terms: &[(BigRational, &BoxBody)]) -> Result<BoxBody> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidParameters(
            "empty Minkowski combination".into(),
        ));
    };
    let n = first.dim();
    let mut widths = vec![BigRational::zero(); n];
    let mut offset = vec![BigRational::zero(); n];
    for (c, body) in terms {
        if c.is_negative() {
            return Err(Error::Negative(c.clone()));
        }
        if body.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: body.dim(),
            });
        }
        for j in 0..n {
            widths[j] += c * &body.widths[j];
            offset[j] += c * &body.offset[j];
        }
    }
    BoxBody::with_offset(widths, offset)
}

pub fn volume(k: &BoxBody) -> BigRational {
    k.widths.iter().product()
}

/// The cube's volume polynomial `Π_j (h⁺_j + h⁻_j)`.
pub fn volume_polynomial(h: &SupportVector) -> BigRational {
    h.slab_widths().iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn support_examples() {
        let h = support_vector(&BoxBody::unit_cube(3));
        assert_eq!(h.h_plus, ints(&[1, 1, 1]));
        assert_eq!(h.h_minus, ints(&[0, 0, 0]));
        assert_eq!(h.slab_widths(), ints(&[1, 1, 1]));

        let b = BoxBody::with_offset(ints(&[3, 3]), ints(&[-1, -1])).unwrap();
        let h = support_vector(&b);
        assert_eq!(h.h_plus, ints(&[2, 2]));
        assert_eq!(h.h_minus, ints(&[1, 1]));
        assert_eq!(h.slab_widths(), ints(&[3, 3]));

        let moved = b.translated(&ints(&[5, -2])).unwrap();
        let hm = support_vector(&moved);
        assert_ne!(hm, h);
        assert_eq!(hm.slab_widths(), h.slab_widths());
    }

    #[test]
    fn combine_examples() {
        let two = minkowski_combine(&[(int(2), &BoxBody::unit_cube(3))]).unwrap();
        assert_eq!(two.widths(), ints(&[2, 2, 2]).as_slice());

        let k = BoxBody::from_i64(&[1, 2]).unwrap();
        let p = BoxBody::point(ints(&[4, -1]));
        let s = minkowski_combine(&[(int(1), &k), (int(1), &p)]).unwrap();
        assert_eq!(s.widths(), k.widths());
        assert_eq!(s.offset(), ints(&[4, -1]).as_slice());

        let a = BoxBody::from_i64(&[1, 2]).unwrap();
        let b = BoxBody::from_i64(&[3, 1]).unwrap();
        let c = minkowski_combine(&[(int(1), &a), (int(3), &b)]).unwrap();
        assert_eq!(c.widths(), ints(&[10, 5]).as_slice());
    }

    #[test]
    fn combine_errors() {
        let a = BoxBody::unit_cube(2);
        let b = BoxBody::unit_cube(3);
        assert!(matches!(
            minkowski_combine(&[(int(1), &a), (int(1), &b)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            minkowski_combine(&[(int(-1), &a)]),
            Err(Error::Negative(_))
        ));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&BoxBody::unit_cube(4)), int(1));
        assert_eq!(volume(&BoxBody::from_i64(&[1, 2, 3]).unwrap()), int(6));
        let flat = BoxBody::from_i64(&[1, 0, 3]).unwrap();
        assert_eq!(volume(&flat), int(0));
        assert!(!flat.is_nondegenerate());
    }

    #[test]
    fn negative_width_rejected() {
        assert!(BoxBody::new(vec![int(1), rat(-1, 2)]).is_err());
        assert!(SupportVector {
            h_plus: ints(&[0]),
            h_minus: ints(&[-1])
        }
        .to_box()
        .is_err());
    }

    #[test]
    fn json_shape() {
        let b = BoxBody::with_offset(vec![rat(1, 2), int(3)], vec![int(0), rat(-1, 3)]).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"n":2,"widths":["1/2","3"],"offset":["0","-1/3"]}"#);
        let back: BoxBody = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<BoxBody>(r#"{"n":3,"widths":["1"]}"#).is_err());
        assert!(serde_json::from_str::<BoxBody>(r#"{"n":1,"widths":["-1"]}"#).is_err());
    }

    fn pos_rat() -> impl Strategy<Value = BigRational> {
        (1i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn any_rat() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn body(n: usize) -> impl Strategy<Value = BoxBody> {
        (
            proptest::collection::vec(pos_rat(), n),
            proptest::collection::vec(any_rat(), n),
        )
            .prop_map(|(w, o)| BoxBody::with_offset(w, o).unwrap())
    }

    proptest! {
        #[test]
        fn volume_of_combination_expands(
            (bodies, lambdas) in (1usize..=5).prop_flat_map(|n| (1usize..=4).prop_flat_map(move |m| (
                proptest::collection::vec(body(n), m),
                proptest::collection::vec(pos_rat(), m),
            )))
        ) {
            let terms: Vec<(BigRational, &BoxBody)> =
                lambdas.iter().cloned().zip(bodies.iter()).collect();
            let combined = minkowski_combine(&terms).unwrap();
            let n = bodies[0].dim();
            let expected: BigRational = (0..n)
                .map(|j| terms.iter().map(|(l, b)| l * &b.widths()[j]).sum::<BigRational>())
                .product();
            prop_assert_eq!(volume(&combined), expected);
            prop_assert_eq!(volume(&combined), volume_polynomial(&support_vector(&combined)));
            prop_assert!(combined.is_nondegenerate());
        }

        #[test]
        fn support_roundtrip(b in (1usize..=6).prop_flat_map(body)) {
            prop_assert_eq!(support_vector(&b).to_box().unwrap(), b);
        }
    }
}
