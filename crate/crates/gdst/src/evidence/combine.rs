use std::collections::BTreeMap;

use crate::scalar::Complex;

use super::{Cbba, EvidenceError, Hypothesis, DEFAULT_TOLERANCE, EPS_SINGULAR};

/// The conflict coefficient between two CBBAs: the complex total of mass
/// products over disjoint focal pairs, together with its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictReport {
    pub k: Complex,
    pub k_abs: f64,
}

/// Output of the generalized orthogonal sum. The per-focal `x^2 + y^2`
/// constraint is not enforced on outputs (the theory does not establish
/// closure under combination); violations are reported here instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Combined {
    pub cbba: Cbba,
    pub conflict: ConflictReport,
    pub warnings: Vec<MassWarning>,
}

/// A fused focal mass whose squared magnitude left `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassWarning {
    pub hypothesis: Hypothesis,
    pub norm_sq: f64,
}

fn check_frames(m1: &Cbba, m2: &Cbba) -> Result<(), EvidenceError> {
    if m1.frame() != m2.frame() {
        return Err(EvidenceError::FrameMismatch);
    }
    Ok(())
}

/// Conflict coefficient `K` of two CBBAs over a shared frame:
/// the sum of `m1(B) * m2(C)` over all pairs with `B` disjoint from `C`.
pub fn conflict(m1: &Cbba, m2: &Cbba) -> Result<ConflictReport, EvidenceError> {
    check_frames(m1, m2)?;
    let mut k = Complex::ZERO;
    for (b, vb) in m1.iter() {
        for (c, vc) in m2.iter() {
            if b.intersection(c).is_empty() {
                k += vb * vc;
            }
        }
    }
    Ok(ConflictReport { k, k_abs: k.abs() })
}

/// Generalized Dempster combination (orthogonal sum) of two CBBAs.
///
/// Requires `|1 - K| > EPS_SINGULAR`; the classical `K < 1` restriction is
/// deliberately absent, so conflict magnitudes above one are accepted.
pub fn combine(m1: &Cbba, m2: &Cbba) -> Result<Combined, EvidenceError> {
    check_frames(m1, m2)?;
    let mut k = Complex::ZERO;
    let mut numer: BTreeMap<Hypothesis, Complex> = BTreeMap::new();
    for (b, vb) in m1.iter() {
        for (c, vc) in m2.iter() {
            let inter = b.intersection(c);
            let prod = vb * vc;
            if inter.is_empty() {
                k += prod;
            } else {
                *numer.entry(inter).or_insert(Complex::ZERO) += prod;
            }
        }
    }
    let denom = Complex::ONE - k;
    if denom.abs() <= EPS_SINGULAR {
        return Err(EvidenceError::TotalConflict { k_dist: denom.abs() });
    }

    let mut warnings = Vec::new();
    let mut masses = Vec::with_capacity(numer.len());
    for (h, num) in numer {
        let m = num.try_div(denom).expect("denominator checked above");
        let norm_sq = m.abs_sq();
        if norm_sq > 1.0 + DEFAULT_TOLERANCE {
            warnings.push(MassWarning { hypothesis: h, norm_sq });
        }
        masses.push((h, m));
    }
    Ok(Combined {
        cbba: Cbba::new(m1.frame().clone(), masses),
        conflict: ConflictReport { k, k_abs: k.abs() },
        warnings,
    })
}

/// Classical real-valued Dempster combination, kept on a fully separate
/// real code path so it can serve as the degeneration oracle for
/// [`combine`]. Fails unless every imaginary part is exactly zero and
/// `1 - K > EPS_SINGULAR`.
pub fn combine_classical(m1: &Cbba, m2: &Cbba) -> Result<Combined, EvidenceError> {
    check_frames(m1, m2)?;
    if !m1.is_real() || !m2.is_real() {
        return Err(EvidenceError::NotRealValued);
    }
    let mut k = 0.0f64;
    let mut numer: BTreeMap<Hypothesis, f64> = BTreeMap::new();
    for (b, vb) in m1.iter() {
        for (c, vc) in m2.iter() {
            let inter = b.intersection(c);
            let prod = vb.re * vc.re;
            if inter.is_empty() {
                k += prod;
            } else {
                *numer.entry(inter).or_insert(0.0) += prod;
            }
        }
    }
    if 1.0 - k <= EPS_SINGULAR {
        return Err(EvidenceError::TotalConflict { k_dist: (1.0 - k).abs() });
    }
    let masses: Vec<_> = numer
        .into_iter()
        .map(|(h, num)| (h, Complex::real(num / (1.0 - k))))
        .collect();
    Ok(Combined {
        cbba: Cbba::new(m1.frame().clone(), masses),
        conflict: ConflictReport { k: Complex::real(k), k_abs: k.abs() },
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::Frame;

    const SQRT2_8: f64 = std::f64::consts::SQRT_2 / 8.0;

    fn frame_ab() -> Frame {
        Frame::new(["A", "B"]).unwrap()
    }

    fn cbba(frame: &Frame, masses: &[(&[&str], Complex)]) -> Cbba {
        Cbba::from_labels(frame.clone(), masses).unwrap()
    }

    /// Example 1 operands, imaginary signs flipped relative to the printed
    /// input tables; this is the orientation that reproduces the printed
    /// fusion results (the printed inputs yield their exact conjugates).
    fn example1_inputs() -> (Cbba, Cbba) {
        let s3 = 3.0f64.sqrt();
        let f = frame_ab();
        let m1 = cbba(
            &f,
            &[
                (&["A"], Complex::new(0.1, SQRT2_8)),
                (&["B"], Complex::new(0.7, -2.0 * SQRT2_8)),
                (&["A", "B"], Complex::new(0.2, SQRT2_8)),
            ],
        );
        let m2 = cbba(
            &f,
            &[
                (&["A"], Complex::new(0.1, -2.0 * s3 / 10.0)),
                (&["B"], Complex::new(0.6, -s3 / 10.0)),
                (&["A", "B"], Complex::new(0.3, 3.0 * s3 / 10.0)),
            ],
        );
        (m1, m2)
    }

    #[test]
    #[allow(clippy::approx_constant)] // expectations are printed 4-decimal table values
    fn conflict_magnitudes_of_the_surface_cases() {
        let f = frame_ab();
        let m2 = cbba(&f, &[(&["A"], Complex::new(0.5, 0.5)), (&["B"], Complex::new(0.5, -0.5))]);
        let cases: [(f64, f64, f64, f64); 4] = [
            (1.0, 0.0, 0.7071, 1e-4),
            (0.5, -0.5, 0.0, 1e-12),
            (0.5, 0.8660, 1.3660, 1e-4),
            (0.5, -0.8660, 0.3660, 1e-4),
        ];
        for (x, y, expect, tol) in cases {
            let m1 = cbba(
                &f,
                &[(&["A"], Complex::new(x, y)), (&["B"], Complex::new(1.0 - x, -y))],
            );
            let r = conflict(&m1, &m2).unwrap();
            assert!((r.k_abs - expect).abs() < tol, "({x},{y}): got {}", r.k_abs);
            assert!((r.k_abs - r.k.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn conflict_is_symmetric() {
        let (m1, m2) = example1_inputs();
        let a = conflict(&m1, &m2).unwrap();
        let b = conflict(&m2, &m1).unwrap();
        assert!((a.k - b.k).abs() < 1e-12);
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let (m1, _) = example1_inputs();
        let other = Cbba::vacuous(Frame::new(["X", "Y"]).unwrap());
        assert_eq!(conflict(&m1, &other), Err(EvidenceError::FrameMismatch));
        assert!(matches!(combine(&m1, &other), Err(EvidenceError::FrameMismatch)));
    }

    #[test]
    fn example1_fusion_matches_printed_results() {
        let (m1, m2) = example1_inputs();
        let out = combine(&m1, &m2).unwrap();
        let f = out.cbba.frame().clone();
        let expect = [
            (&["A"][..], Complex::new(0.0979, 0.0186)),
            (&["B"][..], Complex::new(0.9031, -0.1820)),
            (&["A", "B"][..], Complex::new(-0.0010, 0.1634)),
        ];
        for (labels, e) in expect {
            let got = out.cbba.mass(f.hypothesis(labels).unwrap());
            assert!((got.re - e.re).abs() < 1e-3, "{labels:?} re {got}");
            assert!((got.im - e.im).abs() < 1e-3, "{labels:?} im {got}");
        }
        assert!((out.cbba.total() - Complex::ONE).abs() < 1e-9);
    }

    #[test]
    fn combination_commutes_on_examples_1_and_2() {
        let (m1, m2) = example1_inputs();
        let a = combine(&m1, &m2).unwrap();
        let b = combine(&m2, &m1).unwrap();
        for h in a.cbba.frame().subsets() {
            assert!((a.cbba.mass(h) - b.cbba.mass(h)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuous_is_identity() {
        let (m1, _) = example1_inputs();
        let vac = Cbba::vacuous(m1.frame().clone());
        let out = combine(&m1, &vac).unwrap();
        assert!(out.conflict.k_abs < 1e-15);
        for h in m1.frame().subsets() {
            assert!((out.cbba.mass(h) - m1.mass(h)).abs() < 1e-12);
        }

        // same identity on the classical path
        let f = frame_ab();
        let real = cbba(&f, &[(&["A"], Complex::real(0.8)), (&["B"], Complex::real(0.2))]);
        let out = combine_classical(&real, &Cbba::vacuous(f.clone())).unwrap();
        for h in f.subsets() {
            assert!((out.cbba.mass(h) - real.mass(h)).abs() < 1e-15);
        }
    }

    #[test]
    fn example3_degenerates_to_classical() {
        let f = frame_ab();
        let m1 = cbba(&f, &[(&["A"], Complex::real(0.8)), (&["B"], Complex::real(0.2))]);
        let m2 = cbba(&f, &[(&["A"], Complex::real(0.9)), (&["B"], Complex::real(0.1))]);
        let gen = combine(&m1, &m2).unwrap();
        let cls = combine_classical(&m1, &m2).unwrap();
        let a = f.hypothesis(&["A"]).unwrap();
        let b = f.hypothesis(&["B"]).unwrap();
        for out in [&gen, &cls] {
            assert!((out.conflict.k.re - 0.26).abs() < 1e-12);
            assert!(out.conflict.k.im.abs() < 1e-15);
            assert!((out.cbba.mass(a).re - 0.9730).abs() < 1e-4);
            assert!((out.cbba.mass(b).re - 0.0270).abs() < 1e-4);
        }
        for h in f.subsets() {
            assert!((gen.cbba.mass(h) - cls.cbba.mass(h)).abs() < 1e-12);
        }
    }

    #[test]
    fn example4_high_conflict_real() {
        let f = Frame::new(["A", "B", "C"]).unwrap();
        let m1 = cbba(&f, &[(&["A"], Complex::real(0.99)), (&["C"], Complex::real(0.01))]);
        let m2 = cbba(&f, &[(&["B"], Complex::real(0.99)), (&["C"], Complex::real(0.01))]);
        let c = f.hypothesis(&["C"]).unwrap();
        for out in [combine(&m1, &m2).unwrap(), combine_classical(&m1, &m2).unwrap()] {
            assert!((out.cbba.mass(c) - Complex::ONE).abs() < 1e-6);
        }
    }

    #[test]
    fn example5_high_conflict_complex() {
        // Conflict magnitude exceeds one here; the generalized rule still applies.
        let f = Frame::new(["A", "B", "C"]).unwrap();
        let m1 = cbba(
            &f,
            &[(&["A"], Complex::new(0.99, 0.1411)), (&["C"], Complex::new(0.01, -0.1411))],
        );
        let m2 = cbba(
            &f,
            &[(&["B"], Complex::new(0.99, 0.1411)), (&["C"], Complex::new(0.01, -0.1411))],
        );
        let out = combine(&m1, &m2).unwrap();
        assert!(out.conflict.k_abs > 1.0);
        let c = f.hypothesis(&["C"]).unwrap();
        assert!((out.cbba.mass(c) - Complex::ONE).abs() < 1e-6);
    }

    #[test]
    fn total_conflict_is_rejected() {
        let f = frame_ab();
        let m1 = cbba(&f, &[(&["A"], Complex::ONE)]);
        let m2 = cbba(&f, &[(&["B"], Complex::ONE)]);
        assert!(matches!(combine(&m1, &m2), Err(EvidenceError::TotalConflict { .. })));
        assert!(matches!(
            combine_classical(&m1, &m2),
            Err(EvidenceError::TotalConflict { .. })
        ));
    }

    #[test]
    fn classical_requires_real_masses() {
        let (m1, m2) = example1_inputs();
        assert_eq!(combine_classical(&m1, &m2), Err(EvidenceError::NotRealValued));
    }

    #[test]
    fn associativity_is_exercised_not_asserted() {
        // the generalized rule makes no associativity claim; both
        // groupings must still be well-formed with unit total
        let (m1, m2) = example1_inputs();
        let f = frame_ab();
        let m3 = cbba(&f, &[(&["A"], Complex::new(0.4, 0.1)), (&["B"], Complex::new(0.6, -0.1))]);
        let left = combine(&combine(&m1, &m2).unwrap().cbba, &m3).unwrap().cbba;
        let right = combine(&m1, &combine(&m2, &m3).unwrap().cbba).unwrap().cbba;
        assert!((left.total() - Complex::ONE).abs() < 1e-9);
        assert!((right.total() - Complex::ONE).abs() < 1e-9);
        let defect: f64 = f
            .subsets()
            .map(|h| (left.mass(h) - right.mass(h)).abs())
            .fold(0.0, f64::max);
        assert!(defect.is_finite());
    }
}
