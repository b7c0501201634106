use std::collections::BTreeMap;

use crate::scalar::Complex;

use super::{EvidenceError, Frame, Hypothesis};

/// A complex basic belief assignment over a frame.
///
/// Absent hypotheses carry mass `0 + 0i`. Iteration over stored masses is
/// always in ascending canonical subset-index order, which keeps every sum
/// in the crate reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Cbba {
    frame: Frame,
    masses: BTreeMap<Hypothesis, Complex>,
}

/// One violated CBBA admissibility condition. Violations are data, not
/// errors; see [`Cbba::violations`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// The empty set carries non-zero mass.
    EmptySetMass { mass: Complex },
    /// All masses must sum to `1 + 0i`.
    TotalMass { sum: Complex },
    /// A focal mass `x + yi` must satisfy `x^2 + y^2` in `[0, 1]`.
    FocalNormOutOfRange { hypothesis: Hypothesis, norm_sq: f64 },
    /// Mass components must be finite.
    NonFinite { hypothesis: Hypothesis },
}

impl Cbba {
    /// Builds a CBBA without checking the admissibility conditions;
    /// call [`Cbba::validate`] or [`Cbba::violations`] afterwards.
    ///
    /// # Panics
    /// If a hypothesis index lies outside the frame's power set.
    pub fn new(frame: Frame, masses: impl IntoIterator<Item = (Hypothesis, Complex)>) -> Cbba {
        let mut map = BTreeMap::new();
        for (h, m) in masses {
            assert!(
                h.is_subset_of(frame.full()),
                "hypothesis index {} outside the power set of a {}-event frame",
                h.index(),
                frame.size()
            );
            *map.entry(h).or_insert(Complex::ZERO) += m;
        }
        Cbba { frame, masses: map }
    }

    /// Convenience constructor from label lists.
    pub fn from_labels<S: AsRef<str>>(
        frame: Frame,
        masses: &[(&[S], Complex)],
    ) -> Result<Cbba, EvidenceError> {
        let mut entries = Vec::with_capacity(masses.len());
        for (members, m) in masses {
            entries.push((frame.hypothesis(members)?, *m));
        }
        Ok(Cbba::new(frame, entries))
    }

    /// The vacuous CBBA: total mass on the full frame, the identity
    /// element of combination.
    pub fn vacuous(frame: Frame) -> Cbba {
        let full = frame.full();
        Cbba::new(frame, [(full, Complex::ONE)])
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, h: Hypothesis) -> Complex {
        self.masses.get(&h).copied().unwrap_or(Complex::ZERO)
    }

    /// Stored masses in ascending subset-index order.
    pub fn iter(&self) -> impl Iterator<Item = (Hypothesis, Complex)> + '_ {
        self.masses.iter().map(|(h, m)| (*h, *m))
    }

    pub fn total(&self) -> Complex {
        let mut sum = Complex::ZERO;
        for (_, m) in self.iter() {
            sum += m;
        }
        sum
    }

    /// True when every imaginary part is exactly zero (the classical case).
    pub fn is_real(&self) -> bool {
        self.iter().all(|(_, m)| m.im == 0.0)
    }

    /// Every violated admissibility condition at the given tolerance; an empty
    /// list means the CBBA is valid.
    pub fn violations(&self, tolerance: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for (h, m) in self.iter() {
            if !m.is_finite() {
                out.push(Violation::NonFinite { hypothesis: h });
            }
        }
        if !out.is_empty() {
            return out;
        }

        let empty = self.mass(Hypothesis::EMPTY);
        if empty.abs() > 0.0 {
            out.push(Violation::EmptySetMass { mass: empty });
        }
        let sum = self.total();
        if (sum - Complex::ONE).abs() > tolerance {
            out.push(Violation::TotalMass { sum });
        }
        for (h, m) in self.iter() {
            let norm_sq = m.abs_sq();
            if norm_sq > 1.0 + tolerance {
                out.push(Violation::FocalNormOutOfRange { hypothesis: h, norm_sq });
            }
        }
        out
    }

    pub fn validate(&self, tolerance: f64) -> Result<(), EvidenceError> {
        let v = self.violations(tolerance);
        if v.is_empty() {
            Ok(())
        } else {
            Err(EvidenceError::InvalidCbba(v))
        }
    }

    /// `Bel_c(A) = |sum of m(B) over focal B included in A|`.
    pub fn belief(&self, a: Hypothesis) -> Result<f64, EvidenceError> {
        if a.is_empty() {
            return Err(EvidenceError::EmptyHypothesis);
        }
        Ok(self.belief_unchecked(a))
    }

    fn belief_unchecked(&self, a: Hypothesis) -> f64 {
        let mut sum = Complex::ZERO;
        for (h, m) in self.iter() {
            if !h.is_empty() && h.is_subset_of(a) {
                sum += m;
            }
        }
        sum.abs()
    }

    /// `Pl_c(A) = |sum of m(B) over focal B intersecting A|` — the
    /// intersection-sum form of the definition.
    pub fn plausibility(&self, a: Hypothesis) -> Result<f64, EvidenceError> {
        if a.is_empty() {
            return Err(EvidenceError::EmptyHypothesis);
        }
        let mut sum = Complex::ZERO;
        for (h, m) in self.iter() {
            if h.intersects(a) {
                sum += m;
            }
        }
        Ok(sum.abs())
    }

    /// The complement form `1 - Bel_c(complement of A)`. For general
    /// complex masses this is NOT algebraically equal to
    /// [`Cbba::plausibility`], since `|1 - z|` differs from `1 - |z|`;
    /// the two coincide in the real-degenerate case.
    pub fn plausibility_complement_form(&self, a: Hypothesis) -> Result<f64, EvidenceError> {
        if a.is_empty() {
            return Err(EvidenceError::EmptyHypothesis);
        }
        Ok(1.0 - self.belief_unchecked(a.complement_in(&self.frame)))
    }

    /// Complex pignistic transform: each focal mass is split equally among
    /// its member singletons. The outputs sum to the CBBA total.
    pub fn pignistic(&self) -> BTreeMap<Hypothesis, Complex> {
        let mut out: BTreeMap<Hypothesis, Complex> = self
            .frame
            .singletons()
            .map(|s| (s, Complex::ZERO))
            .collect();
        for (h, m) in self.iter() {
            if h.is_empty() {
                continue;
            }
            let share = m.scale(1.0 / h.cardinality() as f64);
            for i in 0..self.frame.size() {
                if h.contains(i) {
                    *out.get_mut(&self.frame.singleton(i)).unwrap() += share;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::DEFAULT_TOLERANCE;

    const SQRT2_8: f64 = std::f64::consts::SQRT_2 / 8.0;

    /// Example 1's first CBBA with the signs as printed in the source
    /// tables: m(A) = 0.1 - (sqrt2/8)i, m(B) = 0.7 + (2 sqrt2/8)i,
    /// m(A,B) = 0.2 - (sqrt2/8)i.
    fn example1_m1() -> Cbba {
        let frame = Frame::new(["A", "B"]).unwrap();
        Cbba::from_labels(
            frame,
            &[
                (&["A"], Complex::new(0.1, -SQRT2_8)),
                (&["B"], Complex::new(0.7, 2.0 * SQRT2_8)),
                (&["A", "B"], Complex::new(0.2, -SQRT2_8)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validates_printed_example_masses() {
        assert!(example1_m1().validate(DEFAULT_TOLERANCE).is_ok());
    }

    #[test]
    fn validates_categorical_mass() {
        let frame = Frame::new(["A", "B"]).unwrap();
        let m = Cbba::from_labels(
            frame,
            &[(&["A"], Complex::ONE), (&["B"], Complex::ZERO)],
        )
        .unwrap();
        assert!(m.validate(DEFAULT_TOLERANCE).is_ok());
    }

    #[test]
    fn validates_boundary_focal_norm() {
        // |0.99 + 0.1411i|^2 = 1.0000092; inside [0,1] only at 1e-4.
        let frame = Frame::new(["A", "B", "C"]).unwrap();
        let m = Cbba::from_labels(
            frame,
            &[
                (&["A"], Complex::new(0.99, 0.1411)),
                (&["C"], Complex::new(0.01, -0.1411)),
            ],
        )
        .unwrap();
        assert!(m.validate(1e-4).is_ok());
        assert!(matches!(
            m.violations(DEFAULT_TOLERANCE).as_slice(),
            [Violation::FocalNormOutOfRange { .. }]
        ));
    }

    #[test]
    fn flags_each_violated_condition() {
        let frame = Frame::new(["A", "B"]).unwrap();
        let empty = frame.hypothesis::<&str>(&[]).unwrap();
        let a = frame.hypothesis(&["A"]).unwrap();
        let bad = Cbba::new(
            frame,
            [(empty, Complex::new(0.2, 0.0)), (a, Complex::new(1.3, 0.9))],
        );
        let v = bad.violations(DEFAULT_TOLERANCE);
        assert!(v.iter().any(|x| matches!(x, Violation::EmptySetMass { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::TotalMass { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::FocalNormOutOfRange { .. })));
    }

    #[test]
    #[should_panic(expected = "outside the power set")]
    fn rejects_out_of_frame_hypotheses() {
        let frame = Frame::new(["A", "B"]).unwrap();
        Cbba::new(frame, [(Hypothesis::from_index(4), Complex::ONE)]);
    }

    #[test]
    fn belief_of_full_frame_is_one() {
        let m = example1_m1();
        let full = m.frame().full();
        assert!((m.belief(full).unwrap() - 1.0).abs() < DEFAULT_TOLERANCE);
        assert!((m.plausibility(full).unwrap() - 1.0).abs() < DEFAULT_TOLERANCE);
    }

    #[test]
    fn belief_and_plausibility_of_example1() {
        // Hand-evaluated magnitudes of the printed masses:
        // Bel_c({A}) = |0.1 - (sqrt2/8)i| = 0.2032
        // Pl_c({A})  = |0.3 - (2 sqrt2/8)i| = 0.4637
        let m = example1_m1();
        let a = m.frame().hypothesis(&["A"]).unwrap();
        assert!((m.belief(a).unwrap() - 0.2032).abs() < 1e-3);
        assert!((m.plausibility(a).unwrap() - 0.4637).abs() < 1e-3);
        assert_eq!(m.belief(Hypothesis::EMPTY), Err(EvidenceError::EmptyHypothesis));
        assert_eq!(m.plausibility(Hypothesis::EMPTY), Err(EvidenceError::EmptyHypothesis));
    }

    #[test]
    fn plausibility_forms_coincide_for_real_masses() {
        let frame = Frame::new(["A", "B", "C"]).unwrap();
        let m = Cbba::from_labels(
            frame,
            &[
                (&["A"], Complex::real(0.45)),
                (&["B", "C"], Complex::real(0.3)),
                (&["A", "B", "C"], Complex::real(0.25)),
            ],
        )
        .unwrap();
        for h in m.frame().subsets().skip(1) {
            let a = m.plausibility(h).unwrap();
            let b = m.plausibility_complement_form(h).unwrap();
            assert!((a - b).abs() < 1e-12, "{h:?}: {a} vs {b}");
        }
    }

    #[test]
    fn pignistic_of_vacuous_splits_evenly() {
        let frame = Frame::new(["A", "B"]).unwrap();
        let m = Cbba::vacuous(frame);
        let bet = m.pignistic();
        for (_, v) in bet {
            assert!((v - Complex::new(0.5, 0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn pignistic_of_example1_m1() {
        // Bet(A) = m(A) + m(A,B)/2 = 0.2 - (sqrt2/8 + sqrt2/16)i
        let m = example1_m1();
        let bet = m.pignistic();
        let a = m.frame().hypothesis(&["A"]).unwrap();
        let b = m.frame().hypothesis(&["B"]).unwrap();
        let expect_a = Complex::new(0.2, -(SQRT2_8 + SQRT2_8 / 2.0));
        let expect_b = Complex::new(0.8, 2.0 * SQRT2_8 - SQRT2_8 / 2.0);
        assert!((bet[&a] - expect_a).abs() < 1e-12);
        assert!((bet[&b] - expect_b).abs() < 1e-12);
        let total = bet.values().fold(Complex::ZERO, |s, &v| s + v);
        assert!((total - Complex::ONE).abs() < 1e-12);
    }

    #[test]
    fn real_degenerate_matches_classical_definitions() {
        // classical quantities recomputed with plain real arithmetic
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(41);
        let frame = Frame::new(["A", "B", "C"]).unwrap();
        for _ in 0..200 {
            let mut entries = Vec::new();
            let mut total = 0.0;
            for h in frame.subsets().skip(1) {
                let v: f64 = rng.gen_range(0.0..1.0);
                entries.push((h, v));
                total += v;
            }
            let m = Cbba::new(
                frame.clone(),
                entries.iter().map(|&(h, v)| (h, Complex::real(v / total))),
            );
            for a in frame.subsets().skip(1) {
                let bel: f64 = entries
                    .iter()
                    .filter(|(h, _)| h.is_subset_of(a))
                    .map(|(_, v)| v / total)
                    .sum();
                let pl: f64 = entries
                    .iter()
                    .filter(|(h, _)| h.intersects(a))
                    .map(|(_, v)| v / total)
                    .sum();
                assert!((m.belief(a).unwrap() - bel).abs() < 1e-12);
                assert!((m.plausibility(a).unwrap() - pl).abs() < 1e-12);
                assert!((m.plausibility_complement_form(a).unwrap() - pl).abs() < 1e-12);
                // upper bound dominates lower bound in the classical case
                assert!(m.plausibility(a).unwrap() >= m.belief(a).unwrap() - 1e-12);
            }
            let bet = m.pignistic();
            for i in 0..frame.size() {
                let classical: f64 = entries
                    .iter()
                    .filter(|(h, _)| h.contains(i))
                    .map(|(h, v)| v / total / h.cardinality() as f64)
                    .sum();
                let got = bet[&frame.singleton(i)];
                assert!((got.re - classical).abs() < 1e-12 && got.im == 0.0);
            }
        }
    }

    #[test]
    fn pignistic_matches_classical_on_real_masses() {
        let frame = Frame::new(["A", "B", "C"]).unwrap();
        let m = Cbba::from_labels(
            frame.clone(),
            &[
                (&["A"], Complex::real(0.2)),
                (&["A", "B"], Complex::real(0.5)),
                (&["A", "B", "C"], Complex::real(0.3)),
            ],
        )
        .unwrap();
        let bet = m.pignistic();
        // classical: Bet(A) = 0.2 + 0.5/2 + 0.3/3, Bet(B) = 0.5/2 + 0.3/3, Bet(C) = 0.3/3
        let expect = [0.2 + 0.25 + 0.1, 0.25 + 0.1, 0.1];
        for (i, e) in expect.iter().enumerate() {
            let got = bet[&frame.singleton(i)];
            assert!((got.re - e).abs() < 1e-12 && got.im.abs() < 1e-12);
        }
    }
}
