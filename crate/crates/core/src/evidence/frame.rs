use std::fmt;

use super::EvidenceError;

/// Largest supported frame. Subset codes are stored in a `u32` and the
/// quantum backends need 3N simulator qubits, so frames stay small anyway.
pub const MAX_FRAME_ELEMENTS: usize = 16;

/// A frame of discernment: the ordered, exhaustive set of mutually exclusive
/// hypotheses evidence is expressed over.
///
/// The element order is fixed at construction and defines the subset↔bitmask
/// correspondence: element `k` of the frame owns bit `k` of a [`SubsetCode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    elements: Vec<String>,
}

impl Frame {
    /// Build a frame from ordered element names.
    ///
    /// Names must be unique, non-empty, and free of commas (commas separate
    /// element names in textual subset keys).
    pub fn new<I, S>(elements: I) -> Result<Self, EvidenceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(EvidenceError::EmptyFrame);
        }
        if elements.len() > MAX_FRAME_ELEMENTS {
            return Err(EvidenceError::FrameTooLarge {
                len: elements.len(),
                max: MAX_FRAME_ELEMENTS,
            });
        }
        for (i, name) in elements.iter().enumerate() {
            if name.is_empty() || name.contains(',') {
                return Err(EvidenceError::InvalidElementName(name.clone()));
            }
            if elements[..i].contains(name) {
                return Err(EvidenceError::DuplicateElement(name.clone()));
            }
        }
        Ok(Self { elements })
    }

    /// Number of hypotheses N.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty() // never true: N >= 1 by construction
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// The number of distinct subsets, 2^N.
    pub fn subset_count(&self) -> u32 {
        1u32 << self.elements.len()
    }

    /// Code for the full set Θ (all bits set).
    pub fn full_code(&self) -> SubsetCode {
        SubsetCode(self.subset_count() - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Encode a set of element names as a bitmask subset code.
    pub fn encode<'a, I>(&self, members: I) -> Result<SubsetCode, EvidenceError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = 0u32;
        for name in members {
            let k = self
                .index_of(name)
                .ok_or_else(|| EvidenceError::UnknownElement(name.to_string()))?;
            bits |= 1 << k;
        }
        Ok(SubsetCode(bits))
    }

    /// Decode a subset code back into element names, in frame order.
    pub fn decode(&self, code: SubsetCode) -> Result<Vec<&str>, EvidenceError> {
        self.check_code(code)?;
        Ok(self
            .elements
            .iter()
            .enumerate()
            .filter(|(k, _)| code.contains_bit(*k))
            .map(|(_, name)| name.as_str())
            .collect())
    }

    /// Render a subset as comma-joined element names in frame order.
    /// The empty set renders as `"∅"` (it never appears as a mass key).
    pub fn subset_name(&self, code: SubsetCode) -> String {
        match self.decode(code) {
            Ok(names) if names.is_empty() => "∅".to_string(),
            Ok(names) => names.join(","),
            Err(_) => format!("<invalid:{:#x}>", code.bits()),
        }
    }

    /// Parse a comma-joined subset key, e.g. `"a,c"` over frame `{a,b,c}`.
    ///
    /// Keys must list element names in frame order without repeats; `"b,a"`
    /// is rejected so that every subset has exactly one textual spelling.
    pub fn parse_subset_key(&self, key: &str) -> Result<SubsetCode, EvidenceError> {
        if key.is_empty() {
            return Err(EvidenceError::EmptySubsetKey);
        }
        let mut bits = 0u32;
        let mut prev: Option<usize> = None;
        for name in key.split(',') {
            let k = self
                .index_of(name)
                .ok_or_else(|| EvidenceError::UnknownElement(name.to_string()))?;
            if let Some(p) = prev {
                if k == p {
                    return Err(EvidenceError::RepeatedKeyElement {
                        key: key.to_string(),
                        name: name.to_string(),
                    });
                }
                if k < p {
                    return Err(EvidenceError::UnorderedSubsetKey {
                        key: key.to_string(),
                        expected: self.subset_name(SubsetCode(bits | (1 << k))),
                    });
                }
            }
            bits |= 1 << k;
            prev = Some(k);
        }
        Ok(SubsetCode(bits))
    }

    pub(crate) fn check_code(&self, code: SubsetCode) -> Result<(), EvidenceError> {
        if code.bits() >= self.subset_count() {
            return Err(EvidenceError::CodeOutOfRange {
                code: code.bits(),
                n: self.elements.len(),
            });
        }
        Ok(())
    }
}

/// A subset of the frame encoded as a bitmask: bit `k` set ⇔ element `k` is a
/// member. Code 0 is the empty set. Subset intersection is bitwise AND and
/// union is bitwise OR, which is what lets a Toffoli layer compute
/// intersections downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetCode(pub u32);

impl SubsetCode {
    pub const EMPTY: SubsetCode = SubsetCode(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains_bit(self, k: usize) -> bool {
        (self.0 >> k) & 1 == 1
    }

    /// Number of member elements.
    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }
}

impl std::ops::BitAnd for SubsetCode {
    type Output = SubsetCode;
    fn bitand(self, rhs: Self) -> Self {
        SubsetCode(self.0 & rhs.0)
    }
}

impl std::ops::BitOr for SubsetCode {
    type Output = SubsetCode;
    fn bitor(self, rhs: Self) -> Self {
        SubsetCode(self.0 | rhs.0)
    }
}

impl fmt::Display for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}
