use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{Bba, Cbba, EvidenceError, SubsetCode};

/// The combination rule is undefined once 1−K comes within this distance of
/// zero; total conflict is an error, never a silent NaN.
pub const CONFLICT_TOLERANCE: f64 = 1e-9;

/// Which path produced a fusion result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    ClassicalDrc,
    ClassicalCdrc,
    Qadrc,
    Qdrc,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::ClassicalDrc => "classical-drc",
            Backend::ClassicalCdrc => "classical-cdrc",
            Backend::Qadrc => "qadrc",
            Backend::Qdrc => "qdrc",
        })
    }
}

/// How measurement statistics were obtained: analytically, or from a seeded
/// finite-shot emulation of hardware measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Shots { shots, seed } => write!(f, "shots({shots}, seed={seed})"),
        }
    }
}

/// A combined mass function together with the conflict it absorbed and the
/// provenance of the computation.
///
/// `combined` masses are stored as complex numbers; every backend except
/// classical CDRC produces exactly-real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub combined: Cbba,
    pub conflict: Complex64,
    pub backend: Backend,
    pub mode: Mode,
}

impl FusionResult {
    /// The conflict coefficient K as a real number (valid for every backend
    /// except classical CDRC, whose K may carry an imaginary part).
    pub fn conflict_real(&self) -> f64 {
        self.conflict.re
    }
}

/// Conjunctive combination without normalization: the mass products of every
/// focal-element pair, bucketed by intersection, plus the total empty-set
/// mass K.
///
/// Per-bucket terms are summed in a canonical value order so that swapping
/// the arguments yields bitwise-identical sums (each term m1(B)·m2(C) equals
/// m2(C)·m1(B) exactly; only the accumulation order would differ otherwise).
/// Exact-zero products are skipped: they carry no belief and would otherwise
/// materialize spurious zero-mass focal elements.
fn conjunctive(
    m1: &BTreeMap<SubsetCode, Complex64>,
    m2: &BTreeMap<SubsetCode, Complex64>,
) -> (BTreeMap<SubsetCode, Complex64>, Complex64) {
    let mut terms: BTreeMap<SubsetCode, Vec<Complex64>> = BTreeMap::new();
    for (&b, &mb) in m1 {
        for (&c, &mc) in m2 {
            let p = mb * mc;
            if p == Complex64::ZERO {
                continue;
            }
            terms.entry(b & c).or_default().push(p);
        }
    }
    let mut conflict = Complex64::ZERO;
    let mut combined = BTreeMap::new();
    for (code, mut bucket) in terms {
        bucket.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let sum: Complex64 = bucket.into_iter().sum();
        if code.is_empty() {
            conflict = sum;
        } else {
            combined.insert(code, sum);
        }
    }
    (combined, conflict)
}

fn normalize(
    mut combined: BTreeMap<SubsetCode, Complex64>,
    conflict: Complex64,
) -> BTreeMap<SubsetCode, Complex64> {
    let denom = Complex64::new(1.0, 0.0) - conflict;
    for mass in combined.values_mut() {
        *mass /= denom;
    }
    combined
}

/// Dempster's rule of combination for two real mass functions over the same
/// frame: K = Σ_{B∩C=∅} m1(B)m2(C) and m(A) = Σ_{B∩C=A} m1(B)m2(C) / (1−K)
/// for A ≠ ∅.
pub fn combine_drc(m1: &Bba, m2: &Bba) -> Result<FusionResult, EvidenceError> {
    if m1.frame() != m2.frame() {
        return Err(EvidenceError::FrameMismatch);
    }
    let (c1, c2) = (m1.to_cbba(), m2.to_cbba());
    c1.check_focal_elements()?;
    c2.check_focal_elements()?;
    let (combined, conflict) = conjunctive(c1.masses(), c2.masses());
    if conflict.re >= 1.0 - CONFLICT_TOLERANCE {
        return Err(EvidenceError::TotalConflict { k: conflict.re });
    }
    Ok(FusionResult {
        combined: Cbba::new(m1.frame().clone(), normalize(combined, conflict)),
        conflict,
        backend: Backend::ClassicalDrc,
        mode: Mode::Exact,
    })
}

/// The complex-valued rule over CBBAs: identical formula with complex mass
/// products and a complex conflict K, normalizing by the complex 1−K. On
/// real-valued inputs it runs the very same arithmetic as [`combine_drc`],
/// so the degenerate case agrees bit for bit.
pub fn combine_cdrc(m1: &Cbba, m2: &Cbba) -> Result<FusionResult, EvidenceError> {
    if m1.frame() != m2.frame() {
        return Err(EvidenceError::FrameMismatch);
    }
    m1.check_focal_elements()?;
    m2.check_focal_elements()?;
    let (combined, conflict) = conjunctive(m1.masses(), m2.masses());
    let denom_magnitude = (Complex64::new(1.0, 0.0) - conflict).norm();
    if denom_magnitude <= CONFLICT_TOLERANCE {
        return Err(EvidenceError::ConflictSingularity {
            magnitude: denom_magnitude,
        });
    }
    Ok(FusionResult {
        combined: Cbba::new(m1.frame().clone(), normalize(combined, conflict)),
        conflict,
        backend: Backend::ClassicalCdrc,
        mode: Mode::Exact,
    })
}

/// Pick the subset with the largest combined mass (by modulus for complex
/// results). Ties break toward the lowest subset code, deterministically.
pub fn decide(result: &FusionResult) -> Result<SubsetCode, EvidenceError> {
    let mut best: Option<(SubsetCode, f64)> = None;
    for (&code, &mass) in result.combined.masses() {
        let weight = mass.norm();
        match best {
            Some((_, w)) if weight <= w => {}
            _ => best = Some((code, weight)),
        }
    }
    best.map(|(code, _)| code).ok_or(EvidenceError::EmptyResult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::Frame;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn frame_ab() -> Frame {
        Frame::new(["a", "b"]).unwrap()
    }

    /// Independent brute-force oracle: plain nested loops over focal-element
    /// pair vectors, no shared code with the implementation above.
    fn naive_combine(
        m1: &[(u32, Complex64)],
        m2: &[(u32, Complex64)],
    ) -> (Vec<(u32, Complex64)>, Complex64) {
        let mut k = Complex64::ZERO;
        let mut acc: Vec<(u32, Complex64)> = Vec::new();
        for &(b, mb) in m1 {
            for &(cc, mc) in m2 {
                let inter = b & cc;
                let p = mb * mc;
                if inter == 0 {
                    k += p;
                } else if let Some(slot) = acc.iter_mut().find(|(code, _)| *code == inter) {
                    slot.1 += p;
                } else {
                    acc.push((inter, p));
                }
            }
        }
        let denom = Complex64::new(1.0, 0.0) - k;
        for (_, v) in acc.iter_mut() {
            *v /= denom;
        }
        acc.sort_by_key(|&(code, _)| code);
        (acc, k)
    }

    #[test]
    fn drc_worked_example_matches_frozen_oracle_values() {
        // Frozen from the independent nested-loop oracle:
        //   K = 0.18, m(a) = 0.62/0.82, m(b) = 0.12/0.82, m(ab) = 0.08/0.82.
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 0.6), ("a,b", 0.4)]).unwrap();
        let m2 = Bba::from_named(&frame, [("a", 0.5), ("b", 0.3), ("a,b", 0.2)]).unwrap();
        let result = combine_drc(&m1, &m2).unwrap();

        assert!((result.conflict_real() - 0.18).abs() < 1e-12);
        let get = |key: &str| result.combined.mass(frame.parse_subset_key(key).unwrap());
        assert!((get("a").re - 0.7560975609756098).abs() < 1e-12);
        assert!((get("b").re - 0.14634146341463414).abs() < 1e-12);
        assert!((get("a,b").re - 0.0975609756097561).abs() < 1e-12);

        // And against the oracle evaluated in place.
        let (expected, k) = naive_combine(
            &[(0b01, c(0.6, 0.0)), (0b11, c(0.4, 0.0))],
            &[
                (0b01, c(0.5, 0.0)),
                (0b10, c(0.3, 0.0)),
                (0b11, c(0.2, 0.0)),
            ],
        );
        assert!((k.re - result.conflict_real()).abs() < 1e-15);
        for (code, v) in expected {
            assert!((result.combined.mass(SubsetCode(code)) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn vacuous_is_neutral() {
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 0.6), ("a,b", 0.4)]).unwrap();
        let result = combine_drc(&m1, &Bba::vacuous(&frame)).unwrap();
        assert_eq!(result.conflict, Complex64::ZERO);
        for (&code, &mass) in m1.masses() {
            assert_eq!(result.combined.mass(code).re, mass);
            assert_eq!(result.combined.mass(code).im, 0.0);
        }
    }

    #[test]
    fn total_conflict_is_an_error() {
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 1.0)]).unwrap();
        let m2 = Bba::from_named(&frame, [("b", 1.0)]).unwrap();
        assert!(matches!(
            combine_drc(&m1, &m2),
            Err(EvidenceError::TotalConflict { .. })
        ));
        assert!(matches!(
            combine_cdrc(&m1.to_cbba(), &m2.to_cbba()),
            Err(EvidenceError::ConflictSingularity { .. })
        ));
    }

    #[test]
    fn frame_mismatch_is_an_error() {
        let m1 = Bba::vacuous(&frame_ab());
        let m2 = Bba::vacuous(&Frame::new(["a", "b", "c"]).unwrap());
        assert_eq!(combine_drc(&m1, &m2), Err(EvidenceError::FrameMismatch));
    }

    #[test]
    fn cdrc_worked_example_matches_frozen_oracle_values() {
        // Independent enumeration over the 4 focal pairs:
        //   K = M1(b)·M2(a) = 0.25−0.25i, 1−K = 0.75+0.25i,
        //   m(a) = (0.5+0.5i)/(0.75+0.25i) = 0.8+0.4i,
        //   m(b) = (0.25−0.25i)/(0.75+0.25i) = 0.2−0.4i.
        let frame = frame_ab();
        let m1 = Cbba::from_named(&frame, [("a", c(0.5, 0.5)), ("b", c(0.5, -0.5))]).unwrap();
        let m2 = Cbba::from_named(&frame, [("a", c(0.5, 0.0)), ("a,b", c(0.5, 0.0))]).unwrap();
        let result = combine_cdrc(&m1, &m2).unwrap();

        assert!((result.conflict - c(0.25, -0.25)).norm() < 1e-12);
        let get = |key: &str| result.combined.mass(frame.parse_subset_key(key).unwrap());
        assert!((get("a") - c(0.8, 0.4)).norm() < 1e-12);
        assert!((get("b") - c(0.2, -0.4)).norm() < 1e-12);

        let (expected, k) = naive_combine(
            &[(0b01, c(0.5, 0.5)), (0b10, c(0.5, -0.5))],
            &[(0b01, c(0.5, 0.0)), (0b11, c(0.5, 0.0))],
        );
        assert!((k - result.conflict).norm() < 1e-15);
        for (code, v) in expected {
            assert!((result.combined.mass(SubsetCode(code)) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn cdrc_vacuous_is_neutral_for_complex_masses() {
        let frame = frame_ab();
        let m1 = Cbba::from_named(&frame, [("a", c(0.5, 0.5)), ("a,b", c(0.5, -0.5))]).unwrap();
        let vac = Bba::vacuous(&frame).to_cbba();
        let result = combine_cdrc(&m1, &vac).unwrap();
        assert_eq!(result.conflict, Complex64::ZERO);
        for (&code, &mass) in m1.masses() {
            assert_eq!(result.combined.mass(code), mass);
        }
    }

    #[test]
    fn cdrc_degenerates_to_drc_bit_for_bit_on_real_inputs() {
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 0.6), ("a,b", 0.4)]).unwrap();
        let m2 = Bba::from_named(&frame, [("a", 0.5), ("b", 0.3), ("a,b", 0.2)]).unwrap();
        let drc = combine_drc(&m1, &m2).unwrap();
        let cdrc = combine_cdrc(&m1.to_cbba(), &m2.to_cbba()).unwrap();
        assert_eq!(drc.combined.masses(), cdrc.combined.masses());
        assert_eq!(drc.conflict, cdrc.conflict);
    }

    #[test]
    fn decide_examples() {
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 0.6), ("a,b", 0.4)]).unwrap();
        let m2 = Bba::from_named(&frame, [("a", 0.5), ("b", 0.3), ("a,b", 0.2)]).unwrap();
        let result = combine_drc(&m1, &m2).unwrap();
        let winner = decide(&result).unwrap();
        assert_eq!(frame.subset_name(winner), "a");

        // Tie breaks toward the lower code.
        let tied = FusionResult {
            combined: Cbba::from_named(&frame, [("a", c(0.5, 0.0)), ("b", c(0.5, 0.0))]).unwrap(),
            conflict: Complex64::ZERO,
            backend: Backend::ClassicalDrc,
            mode: Mode::Exact,
        };
        assert_eq!(frame.subset_name(decide(&tied).unwrap()), "a");

        // A single entry wins outright.
        let theta_only = FusionResult {
            combined: Bba::vacuous(&frame).to_cbba(),
            conflict: Complex64::ZERO,
            backend: Backend::ClassicalDrc,
            mode: Mode::Exact,
        };
        assert_eq!(frame.subset_name(decide(&theta_only).unwrap()), "a,b");

        let empty = FusionResult {
            combined: Cbba::new(frame.clone(), Default::default()),
            conflict: Complex64::ZERO,
            backend: Backend::ClassicalDrc,
            mode: Mode::Exact,
        };
        assert_eq!(decide(&empty), Err(EvidenceError::EmptyResult));
    }

    #[test]
    fn zero_mass_entries_do_not_materialize_in_output() {
        let frame = frame_ab();
        let m1 = Bba::from_named(&frame, [("a", 0.6), ("b", 0.0), ("a,b", 0.4)]).unwrap();
        let m2 = Bba::from_named(&frame, [("a", 1.0)]).unwrap();
        let result = combine_drc(&m1, &m2).unwrap();
        // b ∩ a = ∅ contributes 0 to K; no zero-valued focal element appears.
        assert!(result
            .combined
            .masses()
            .keys()
            .all(|&code| code == frame.parse_subset_key("a").unwrap()));
    }
}
