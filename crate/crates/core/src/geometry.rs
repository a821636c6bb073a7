//! Branch-dependent entanglement rates from the Newtonian pair potential.
//!
//! A branch is a spin configuration `|j₁ j₂ [j₃]⟩` with `0 ≡ |↑⟩` and
//! `1 ≡ |↓⟩`. Branches are stored by integer index with qubit 1 as the most
//! significant bit, which is also the basis ordering used by [`crate::quantum`].
//!
//! Rates are relative to the all-up branch: every pair term is evaluated as
//! `1/r − 1/r_ref` in a cancellation-free form, so the large common phase
//! `G m² τ / (ħ d)` never enters the arithmetic.

use thiserror::Error;

use crate::config::{ExperimentConfig, Geometry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("no effective-rate approximation exists for {0}")]
    UnsupportedGeometry(Geometry),
}

/// Spin bits of branch `index` for `n_qubits`, qubit 1 first.
pub fn branch_bits(index: usize, n_qubits: usize) -> Vec<u8> {
    (0..n_qubits)
        .map(|q| ((index >> (n_qubits - 1 - q)) & 1) as u8)
        .collect()
}

/// Inverse of [`branch_bits`].
pub fn branch_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b & 1))
}

/// Entanglement rates ω (rad/s) for every branch, relative to branch `0…0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSet {
    n_qubits: usize,
    rates: Vec<f64>,
}

impl PhaseSet {
    /// Build from per-branch rates; the all-up rate is subtracted from every entry.
    pub fn from_rates(n_qubits: usize, mut rates: Vec<f64>) -> Self {
        assert_eq!(rates.len(), 1 << n_qubits, "need one rate per branch");
        let reference = rates[0];
        for r in &mut rates {
            *r -= reference;
        }
        Self { n_qubits, rates }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Rates indexed by branch integer.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Rate of the branch with the given spin bits.
    pub fn rate(&self, bits: &[u8]) -> f64 {
        assert_eq!(bits.len(), self.n_qubits);
        self.rates[branch_index(bits)]
    }

    /// Two-body entangling rate of qubits `i` and `k` (0-based):
    /// `ω(1,0) + ω(0,1) − ω(1,1) − ω(0,0)` with every other qubit held at 0.
    ///
    /// Contributions of pairs not involving both `i` and `k` cancel in this
    /// combination, so for two qubits this is exactly `ω₁ + ω₂`.
    pub fn pair_entangling_rate(&self, i: usize, k: usize) -> f64 {
        let bit = |q: usize| 1usize << (self.n_qubits - 1 - q);
        let (bi, bk) = (bit(i), bit(k));
        self.rates[bi] + self.rates[bk] - self.rates[bi | bk] - self.rates[0]
    }

    /// Sum of [`pair_entangling_rate`](Self::pair_entangling_rate) over all qubit pairs.
    pub fn total_entangling_rate(&self) -> f64 {
        let n = self.n_qubits;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |k| (i, k)))
            .map(|(i, k)| self.pair_entangling_rate(i, k))
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.rates.iter().all(|r| r.is_finite())
    }
}

/// Separation of one pair in some branch, together with its reference
/// (all-up) separation and the difference `r − r_ref` computed without
/// cancellation.
struct PairSeparation {
    r: f64,
    r_ref: f64,
    excess: f64,
}

impl PairSeparation {
    /// Pair displaced sideways by `offset` from a reference gap `gap`.
    fn perpendicular(gap: f64, offset: f64) -> Self {
        let r = gap.hypot(offset);
        let excess = if offset == 0.0 {
            0.0
        } else {
            offset * offset / (r + gap)
        };
        Self { r, r_ref: gap, excess }
    }

    /// `1/r − 1/r_ref`.
    fn inverse_delta(&self) -> f64 {
        -self.excess / (self.r * self.r_ref)
    }
}

fn rates_from_pairs<F>(config: &ExperimentConfig, n_qubits: usize, pair: F) -> PhaseSet
where
    F: Fn(usize, usize, &[u8]) -> PairSeparation,
{
    let coupling = config.constants.coupling(config.mass);
    let rates = (0..1usize << n_qubits)
        .map(|index| {
            let bits = branch_bits(index, n_qubits);
            let mut sum = 0.0;
            for i in 0..n_qubits {
                for k in i + 1..n_qubits {
                    sum += pair(i, k, &bits).inverse_delta();
                }
            }
            coupling * sum
        })
        .collect();
    PhaseSet::from_rates(n_qubits, rates)
}

/// Two masses side by side, arms perpendicular to the separation axis.
///
/// Equal-spin branches keep separation `d_min`; the mixed branches sit at
/// `√(d_min² + Δx²)`, so `ω(1,0) = ω(0,1) ≤ 0` and `ω(1,1) = 0`.
pub fn phases_parallel2(config: &ExperimentConfig) -> PhaseSet {
    rates_from_pairs(config, 2, |_, _, bits| {
        let offset = config.delta_x * f64::from(bits[0] ^ bits[1]);
        PairSeparation::perpendicular(config.d_min, offset)
    })
}

/// Two masses with arms along the separation axis, `|↑⟩₁` leftmost.
///
/// Pair distance is `d_min + Δx·(1 − j₁ + j₂)`: the inner arms `|↓⟩₁|↑⟩₂`
/// are `d_min` apart and the outer arms `|↑⟩₁|↓⟩₂` are `d_min + 2Δx` apart.
pub fn phases_linear2(config: &ExperimentConfig) -> PhaseSet {
    rates_from_pairs(config, 2, |_, _, bits| {
        let r_ref = config.d_min + config.delta_x;
        let excess = config.delta_x * (f64::from(bits[1]) - f64::from(bits[0]));
        PairSeparation {
            r: r_ref + excess,
            r_ref,
            excess,
        }
    })
}

/// Three masses in a row, neighbours `d_min` apart, arms perpendicular.
pub fn phases_parallel3(config: &ExperimentConfig) -> PhaseSet {
    rates_from_pairs(config, 3, |i, k, bits| {
        let gap = config.d_min * (k - i) as f64;
        let offset = config.delta_x * f64::from(bits[i] ^ bits[k]);
        PairSeparation::perpendicular(gap, offset)
    })
}

/// Three masses on an equilateral triangle of edge `d_min`, arms normal to
/// the triangle plane. Every pair has gap `d_min`, so rates are symmetric
/// under any permutation of the spin labels.
pub fn phases_triangle3(config: &ExperimentConfig) -> PhaseSet {
    rates_from_pairs(config, 3, |i, k, bits| {
        let offset = config.delta_x * f64::from(bits[i] ^ bits[k]);
        PairSeparation::perpendicular(config.d_min, offset)
    })
}

/// Rates for whichever geometry the config names.
pub fn phases(config: &ExperimentConfig) -> PhaseSet {
    match config.geometry {
        Geometry::Parallel2 => phases_parallel2(config),
        Geometry::Linear2 => phases_linear2(config),
        Geometry::Parallel3 => phases_parallel3(config),
        Geometry::Triangle3 => phases_triangle3(config),
    }
}

/// Small-width approximation of `|ω₁ + ω₂|` for the two-qubit setups.
///
/// Diagnostic only. The parallel form `2Δx²/d³` is twice the leading Taylor
/// term of the exact rate, and the linear form `(1/d)(1 − Δx/d)` is not the
/// leading term of the exact linear rate at all (that one is `O(Δx²/d³)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRate {
    /// rad/s
    pub value: f64,
    /// Separation `d` used in the formula: `d_min` (parallel) or `d_min + Δx` (linear).
    pub d: f64,
    /// Set when `Δx > d/10`, outside the small-width regime.
    pub out_of_regime: bool,
}

pub fn effective_rate_approx(config: &ExperimentConfig) -> Result<EffectiveRate, GeometryError> {
    let coupling = config.constants.coupling(config.mass);
    let dx = config.delta_x;
    let (value, d) = match config.geometry {
        Geometry::Parallel2 => {
            let d = config.d_min;
            (coupling * 2.0 * dx * dx / (d * d * d), d)
        }
        Geometry::Linear2 => {
            let d = config.d_min + dx;
            if dx == 0.0 {
                (0.0, d)
            } else {
                (coupling / d * (1.0 - dx / d), d)
            }
        }
        other => return Err(GeometryError::UnsupportedGeometry(other)),
    };
    Ok(EffectiveRate {
        value,
        d,
        out_of_regime: dx > d / 10.0,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(geometry: Geometry, mass: f64, dx: f64) -> ExperimentConfig {
        ExperimentConfig::new(geometry, mass, 35e-6, dx, 1.0, 0.0)
    }

    #[test]
    fn branch_labels_round_trip() {
        for n in [2, 3] {
            for index in 0..1 << n {
                assert_eq!(branch_index(&branch_bits(index, n)), index);
            }
        }
        assert_eq!(branch_bits(0b100, 3), vec![1, 0, 0]);
        assert_eq!(branch_bits(0b01, 2), vec![0, 1]);
    }

    #[test]
    fn zero_width_gives_zero_rates() {
        for g in Geometry::ALL {
            let p = phases(&cfg(g, 1e-14, 0.0));
            assert!(p.rates().iter().all(|&r| r == 0.0), "{g}: {:?}", p.rates());
        }
    }

    #[test]
    fn parallel2_matches_reference_values() {
        // 50-digit evaluation with CODATA constants.
        let p = phases_parallel2(&cfg(Geometry::Parallel2, 1e-15, 71e-6));
        let expected = -0.010087334070512403997;
        assert_relative_eq!(p.rate(&[1, 0]), expected, max_relative = 1e-13);
        assert_eq!(p.rate(&[1, 0]), p.rate(&[0, 1]));
        assert_eq!(p.rate(&[1, 1]), 0.0);
        assert!(p.total_entangling_rate() < 0.0);
    }

    #[test]
    fn linear2_matches_reference_values() {
        let p = phases_linear2(&cfg(Geometry::Linear2, 1e-14, 4e-6));
        assert_relative_eq!(p.rate(&[1, 0]), 0.18546283869056097095, max_relative = 1e-13);
        assert_relative_eq!(p.rate(&[0, 1]), -0.15095812451557288333, max_relative = 1e-13);
        assert_relative_eq!(
            p.total_entangling_rate(),
            0.034504714174988087618,
            max_relative = 1e-12
        );
        assert_eq!(p.rate(&[1, 1]), 0.0);
    }

    #[test]
    fn parallel3_matches_direct_summation() {
        let p = phases_parallel3(&cfg(Geometry::Parallel3, 1e-15, 45e-6));
        let near = -0.0084169229743533524802;
        let far = -0.01396193559552855233;
        let expected = [0.0, near, far, near, near, far, near, 0.0];
        for (got, want) in p.rates().iter().zip(expected) {
            if want == 0.0 {
                assert_eq!(*got, 0.0);
            } else {
                assert_relative_eq!(*got, want, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn triangle3_is_permutation_symmetric() {
        let p = phases_triangle3(&cfg(Geometry::Triangle3, 1e-15, 45e-6));
        let single = p.rate(&[1, 0, 0]);
        assert_eq!(single, p.rate(&[0, 1, 0]));
        assert_eq!(single, p.rate(&[0, 0, 1]));
        assert_relative_eq!(single, -0.01396193559552855233, max_relative = 1e-13);
        assert_eq!(p.rate(&[1, 1, 1]), 0.0);
    }

    #[test]
    fn linear_sign_pattern() {
        for dx in [1e-7, 1e-6, 1e-5, 1e-4] {
            let p = phases_linear2(&cfg(Geometry::Linear2, 1e-14, dx));
            assert!(p.rate(&[1, 0]) > 0.0);
            assert!(p.rate(&[0, 1]) < 0.0);
            assert!(p.total_entangling_rate() > 0.0);
        }
    }

    #[test]
    fn parallel3_pair_reduces_to_parallel2() {
        let base = cfg(Geometry::Parallel3, 1e-15, 20e-6);
        let p3 = phases_parallel3(&base);
        // Qubits 1 and 3 are 2·d_min apart.
        let p2 = phases_parallel2(&ExperimentConfig {
            d_min: 2.0 * base.d_min,
            ..base
        });
        assert_relative_eq!(
            p3.pair_entangling_rate(0, 2),
            p2.total_entangling_rate(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn effective_rate_formulas() {
        let c = cfg(Geometry::Parallel2, 1e-14, 0.35e-6);
        let coupling = c.constants.coupling(c.mass);
        let eff = effective_rate_approx(&c).unwrap();
        assert_relative_eq!(eff.value, coupling * 2.0 * 0.35e-6f64.powi(2) / 35e-6f64.powi(3));
        assert!(!eff.out_of_regime);

        // The exact rate is half of the printed parallel approximation.
        let exact = phases_parallel2(&c).total_entangling_rate().abs();
        assert_relative_eq!(exact / eff.value, 0.5, max_relative = 1e-3);

        assert_eq!(effective_rate_approx(&c.with_delta_x(0.0)).unwrap().value, 0.0);
        assert!(effective_rate_approx(&c.with_delta_x(10e-6)).unwrap().out_of_regime);
        assert!(effective_rate_approx(&c.with_geometry(Geometry::Parallel3)).is_err());
    }
}
