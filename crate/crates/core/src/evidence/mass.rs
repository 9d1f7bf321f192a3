use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{EvidenceError, Frame, SubsetCode};

/// Tolerance for the "masses sum to one" axiom, applied to each component.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A complex basic belief assignment: complex-valued masses over non-empty
/// subsets of a frame.
///
/// Construction performs no axiom checks so that files and intermediate
/// values can be inspected; [`Cbba::validate`] reports every violated
/// invariant instead of failing on the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Cbba {
    frame: Frame,
    masses: BTreeMap<SubsetCode, Complex64>,
}

impl Cbba {
    pub fn new(frame: Frame, masses: BTreeMap<SubsetCode, Complex64>) -> Self {
        Self { frame, masses }
    }

    /// Build from `(subset key, mass)` pairs using the textual key format
    /// (comma-joined element names in frame order).
    pub fn from_named<'a, I>(frame: &Frame, entries: I) -> Result<Self, EvidenceError>
    where
        I: IntoIterator<Item = (&'a str, Complex64)>,
    {
        let mut masses = BTreeMap::new();
        for (key, mass) in entries {
            masses.insert(frame.parse_subset_key(key)?, mass);
        }
        Ok(Self::new(frame.clone(), masses))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn masses(&self) -> &BTreeMap<SubsetCode, Complex64> {
        &self.masses
    }

    pub fn mass(&self, code: SubsetCode) -> Complex64 {
        self.masses.get(&code).copied().unwrap_or(Complex64::ZERO)
    }

    /// Check every axiom and report all findings (an empty list means valid):
    /// no mass on ∅, every key within the frame's power set, masses summing
    /// to 1+0i within [`SUM_TOLERANCE`] per component, and per-entry modulus
    /// at most 1.
    pub fn validate(&self) -> Vec<Violation> {
        let mut findings = Vec::new();
        let mut sum = Complex64::ZERO;
        for (&code, &mass) in &self.masses {
            if code.is_empty() {
                findings.push(Violation::EmptySetMass { mass });
            }
            if self.frame.check_code(code).is_err() {
                findings.push(Violation::CodeOutOfRange { code });
            }
            let modulus = mass.norm();
            if modulus > 1.0 + SUM_TOLERANCE {
                findings.push(Violation::ModulusExceedsOne { code, modulus });
            }
            sum += mass;
        }
        if (sum.re - 1.0).abs() > SUM_TOLERANCE || sum.im.abs() > SUM_TOLERANCE {
            findings.push(Violation::SumNotOne { sum });
        }
        findings
    }

    /// True when every imaginary part is exactly zero (the degenerate case
    /// where complex evidence theory collapses to the classical one).
    pub fn is_real(&self) -> bool {
        self.masses.values().all(|m| m.im == 0.0)
    }

    pub fn to_bba(&self) -> Option<Bba> {
        if !self.is_real() {
            return None;
        }
        Some(Bba {
            frame: self.frame.clone(),
            masses: self.masses.iter().map(|(&c, m)| (c, m.re)).collect(),
        })
    }

    /// The modulus map 𝓜(A) = |𝕄(A)| = √(ℛ² + ℐ²), entrywise.
    pub fn modulus_mass(&self) -> BTreeMap<SubsetCode, f64> {
        self.masses.iter().map(|(&c, m)| (c, m.norm())).collect()
    }

    /// The real mass function m̂(A) = |𝕄(A)| / Σ|𝕄|, i.e. the moduli
    /// renormalized to sum to one. This is the distribution the quantum
    /// pipelines operate on once phases are discarded.
    pub fn modulus_normalized(&self) -> Result<Bba, EvidenceError> {
        let moduli = self.modulus_mass();
        let total: f64 = moduli.values().sum();
        if total == 0.0 {
            return Err(EvidenceError::AllZeroMasses);
        }
        Ok(Bba {
            frame: self.frame.clone(),
            masses: moduli.into_iter().map(|(c, r)| (c, r / total)).collect(),
        })
    }

    /// Structural soundness required by the combination rules: no ∅ key and
    /// no key outside the frame's power set.
    pub(crate) fn check_focal_elements(&self) -> Result<(), EvidenceError> {
        for &code in self.masses.keys() {
            if code.is_empty() {
                return Err(EvidenceError::MassOnEmptySet);
            }
            self.frame.check_code(code)?;
        }
        Ok(())
    }
}

/// A classical basic belief assignment: real masses over non-empty subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct Bba {
    frame: Frame,
    masses: BTreeMap<SubsetCode, f64>,
}

impl Bba {
    pub fn new(frame: Frame, masses: BTreeMap<SubsetCode, f64>) -> Self {
        Self { frame, masses }
    }

    pub fn from_named<'a, I>(frame: &Frame, entries: I) -> Result<Self, EvidenceError>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (key, mass) in entries {
            masses.insert(frame.parse_subset_key(key)?, mass);
        }
        Ok(Self::new(frame.clone(), masses))
    }

    /// The vacuous assignment: all mass on Θ, the neutral element of the
    /// combination rule.
    pub fn vacuous(frame: &Frame) -> Self {
        let mut masses = BTreeMap::new();
        masses.insert(frame.full_code(), 1.0);
        Self::new(frame.clone(), masses)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn masses(&self) -> &BTreeMap<SubsetCode, f64> {
        &self.masses
    }

    pub fn mass(&self, code: SubsetCode) -> f64 {
        self.masses.get(&code).copied().unwrap_or(0.0)
    }

    pub fn to_cbba(&self) -> Cbba {
        Cbba {
            frame: self.frame.clone(),
            masses: self
                .masses
                .iter()
                .map(|(&c, &m)| (c, Complex64::new(m, 0.0)))
                .collect(),
        }
    }

    /// Axiom findings for the real-valued case: everything [`Cbba::validate`]
    /// checks plus non-negativity.
    pub fn validate(&self) -> Vec<Violation> {
        let mut findings = self.to_cbba().validate();
        for (&code, &m) in &self.masses {
            if m < 0.0 {
                findings.push(Violation::NegativeMass { code, value: m });
            }
        }
        findings
    }
}

/// One violated mass-function axiom, as reported by validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptySetMass { mass: Complex64 },
    CodeOutOfRange { code: SubsetCode },
    SumNotOne { sum: Complex64 },
    ModulusExceedsOne { code: SubsetCode, modulus: f64 },
    NegativeMass { code: SubsetCode, value: f64 },
}

impl Violation {
    /// Render with subset names resolved against a frame.
    pub fn describe(&self, frame: &Frame) -> String {
        match self {
            Violation::EmptySetMass { mass } => {
                format!("mass {} assigned to the empty set", fmt_complex(*mass))
            }
            Violation::CodeOutOfRange { code } => format!(
                "subset code {:#x} is outside the power set of a {}-element frame",
                code.bits(),
                frame.len()
            ),
            Violation::SumNotOne { sum } => {
                format!("masses sum to {} instead of 1", fmt_complex(*sum))
            }
            Violation::ModulusExceedsOne { code, modulus } => format!(
                "|mass({})| = {:.6} exceeds 1",
                frame.subset_name(*code),
                modulus
            ),
            Violation::NegativeMass { code, value } => {
                format!("mass({}) = {} is negative", frame.subset_name(*code), value)
            }
        }
    }
}

/// Compact `re±imi` rendering used in findings and reports.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySetMass { mass } => {
                write!(f, "mass {} assigned to the empty set", fmt_complex(*mass))
            }
            Violation::CodeOutOfRange { code } => {
                write!(f, "subset code {:#x} is out of range", code.bits())
            }
            Violation::SumNotOne { sum } => {
                write!(f, "masses sum to {} instead of 1", fmt_complex(*sum))
            }
            Violation::ModulusExceedsOne { code, modulus } => {
                write!(f, "|mass({})| = {:.6} exceeds 1", code, modulus)
            }
            Violation::NegativeMass { code, value } => {
                write!(f, "mass({}) = {} is negative", code, value)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn point_mass_is_valid() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let cbba = Cbba::from_named(&frame, [("a", c(1.0, 0.0))]).unwrap();
        assert!(cbba.validate().is_empty());
    }

    #[test]
    fn sum_violation_reported() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let cbba = Cbba::from_named(&frame, [("a", c(0.6, 0.0)), ("b", c(0.5, 0.0))]).unwrap();
        let findings = cbba.validate();
        assert_eq!(findings.len(), 1);
        match &findings[0] {
            Violation::SumNotOne { sum } => {
                assert!((sum.re - 1.1).abs() < 1e-12 && sum.im == 0.0)
            }
            other => panic!("unexpected finding: {other:?}"),
        }
    }

    #[test]
    fn modulus_violation_reported() {
        // |0.6+0.9i| = sqrt(0.36+0.81) ≈ 1.0816653826391969 > 1, even though
        // the masses sum to exactly 1.
        let frame = Frame::new(["a", "b"]).unwrap();
        let cbba = Cbba::from_named(&frame, [("a", c(0.6, 0.9)), ("a,b", c(0.4, -0.9))]).unwrap();
        let findings = cbba.validate();
        assert_eq!(findings.len(), 1);
        match &findings[0] {
            Violation::ModulusExceedsOne { modulus, .. } => {
                assert!((modulus - 1.0816653826391969).abs() < 1e-12)
            }
            other => panic!("unexpected finding: {other:?}"),
        }
    }

    #[test]
    fn empty_set_and_range_violations_reported() {
        let frame = Frame::new(["a"]).unwrap();
        let mut masses = BTreeMap::new();
        masses.insert(SubsetCode::EMPTY, c(0.5, 0.0));
        masses.insert(SubsetCode(0b10), c(0.5, 0.0));
        let findings = Cbba::new(frame, masses).validate();
        assert!(findings
            .iter()
            .any(|v| matches!(v, Violation::EmptySetMass { .. })));
        assert!(findings
            .iter()
            .any(|v| matches!(v, Violation::CodeOutOfRange { .. })));
    }

    #[test]
    fn modulus_mass_examples() {
        let frame = Frame::new(["a", "b", "c"]).unwrap();
        let cbba = Cbba::from_named(
            &frame,
            [("a", c(0.6, 0.8)), ("b", c(0.5, 0.0)), ("c", c(0.0, -0.3))],
        )
        .unwrap();
        let m = cbba.modulus_mass();
        let code = |k: &str| frame.parse_subset_key(k).unwrap();
        assert!((m[&code("a")] - 1.0).abs() < 1e-15); // 3-4-5 triple
        assert!((m[&code("b")] - 0.5).abs() < 1e-15); // real passthrough
        assert!((m[&code("c")] - 0.3).abs() < 1e-15); // pure imaginary
    }

    #[test]
    fn negative_mass_reported_for_bba() {
        let frame = Frame::new(["a", "b"]).unwrap();
        let bba = Bba::from_named(&frame, [("a", -0.2), ("b", 1.2)]).unwrap();
        let findings = bba.validate();
        assert!(findings
            .iter()
            .any(|v| matches!(v, Violation::NegativeMass { .. })));
    }

    #[test]
    fn vacuous_bba_is_valid_point_mass_on_theta() {
        let frame = Frame::new(["x", "y", "z"]).unwrap();
        let v = Bba::vacuous(&frame);
        assert!(v.validate().is_empty());
        assert_eq!(v.mass(frame.full_code()), 1.0);
    }

    #[test]
    fn modulus_normalized_rejects_all_zero() {
        let frame = Frame::new(["a"]).unwrap();
        let cbba = Cbba::from_named(&frame, [("a", c(0.0, 0.0))]).unwrap();
        assert_eq!(
            cbba.modulus_normalized().unwrap_err(),
            EvidenceError::AllZeroMasses
        );
    }
}
