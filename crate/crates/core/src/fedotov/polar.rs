//! Index bookkeeping for the polarized bodies
//! `K_{iδ} = (δ_1 + δ_2) K_i + (δ_3 + … + δ_k) Δ`.

use num_rational::BigRational;

use crate::cubefam::{minkowski_combine, BoxBody};
use crate::error::Result;
use crate::exactlin::rational::sign_power;

/// Nonzero `δ ∈ {0,1}^k` in lexicographic order of the strings `δ_1 … δ_k`.
pub fn deltas(k: usize) -> Vec<Vec<u8>> {
    (1u32..1 << k)
        .map(|v| (0..k).map(|r| ((v >> (k - 1 - r)) & 1) as u8).collect())
        .collect()
}

pub fn delta_label(d: &[u8]) -> String {
    d.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

/// `(-1)^{k + |δ|}`.
pub fn polarization_sign(k: usize, d: &[u8]) -> BigRational {
    let weight = d.iter().filter(|&&b| b == 1).count();
    sign_power(k + weight)
}

pub fn polarized_body(kb: &BoxBody, cube: &BoxBody, d: &[u8]) -> Result<BoxBody> {
    let a: u32 = d.iter().take(2).map(|&b| u32::from(b)).sum();
    let b: u32 = d.iter().skip(2).map(|&b| u32::from(b)).sum();
    let coef = |c: u32| BigRational::from_integer(c.into());
    minkowski_combine(&[(coef(a), kb), (coef(b), cube)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::int;

    #[test]
    fn delta_order() {
        let labels: Vec<String> = deltas(3).iter().map(|d| delta_label(d)).collect();
        assert_eq!(labels, ["001", "010", "011", "100", "101", "110", "111"]);
        assert_eq!(deltas(2).len(), 3);
        assert_eq!(polarization_sign(3, &[1, 0, 0]), int(1));
        assert_eq!(polarization_sign(3, &[1, 1, 0]), int(-1));
    }

    #[test]
    fn bodies() {
        let k = BoxBody::from_i64(&[1, 2, 3]).unwrap();
        let cube = BoxBody::unit_cube(3);
        assert_eq!(polarized_body(&k, &cube, &[1, 1, 1]).unwrap().widths(), BoxBody::from_i64(&[3, 5, 7]).unwrap().widths());
        assert_eq!(polarized_body(&k, &cube, &[0, 0, 1]).unwrap().widths(), cube.widths());
        assert_eq!(polarized_body(&k, &cube, &[0, 1, 0]).unwrap().widths(), k.widths());
    }
}
