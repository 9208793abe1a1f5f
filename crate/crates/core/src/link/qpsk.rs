//! Gray-mapped QPSK.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{contract, Result};

/// Maps bit pairs `(b₀, b₁)` to `((1 − 2b₀) + j(1 − 2b₁))/√2`; `00 → (1 + j)/√2`.
///
/// Neighbouring constellation points differ in exactly one bit.
pub fn qpsk_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(contract(format!(
            "QPSK needs an even number of bits, got {}",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|b| {
            let re = if b[0] == 0 { 1.0 } else { -1.0 };
            let im = if b[1] == 0 { 1.0 } else { -1.0 };
            Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
        })
        .collect())
}

/// Hard-decision demapping, inverse of [`qpsk_modulate`].
pub fn qpsk_demodulate(symbols: &[Complex64]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|s| [u8::from(s.re < 0.0), u8::from(s.im < 0.0)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_anchor_and_energy() {
        let s = qpsk_modulate(&[0, 0, 1, 0, 1, 1, 0, 1]).unwrap();
        assert_eq!(s[0], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert!(s.iter().all(|v| (v.norm_sqr() - 1.0).abs() < 1e-15));
        assert!(qpsk_modulate(&[1]).is_err());
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let pts = qpsk_modulate(&[0, 0, 0, 1, 1, 1, 1, 0]).unwrap();
        // quadrants in counter-clockwise order: 00 (Q1), 10 (Q2), 11 (Q3), 01 (Q4)
        let order = [0usize, 3, 2, 1];
        let labels = [[0u8, 0], [0, 1], [1, 1], [1, 0]];
        for i in 0..4 {
            let a = labels[order[i]];
            let b = labels[order[(i + 1) % 4]];
            let diff = (a[0] ^ b[0]) + (a[1] ^ b[1]);
            assert_eq!(diff, 1);
            let _ = pts[order[i]];
        }
    }

    #[test]
    fn round_trip() {
        let bits: Vec<u8> = (0..200).map(|i| ((i * 7 + i / 3) % 2) as u8).collect();
        assert_eq!(qpsk_demodulate(&qpsk_modulate(&bits).unwrap()), bits);
    }
}
