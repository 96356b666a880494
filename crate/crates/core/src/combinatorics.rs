//! Words on `{0, 1}` and renormalization types.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One symbol of an itinerary: which side of the critical point a point is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Symbol `0`, the interval `[0, c)`.
    Left,
    /// Symbol `1`, the interval `(c, 1]`.
    Right,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::Left => 0,
            Branch::Right => 1,
        }
    }

    pub fn from_index(k: usize) -> Self {
        if k == 0 {
            Branch::Left
        } else {
            Branch::Right
        }
    }

    pub fn other(self) -> Self {
        match self {
            Branch::Left => Branch::Right,
            Branch::Right => Branch::Left,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A nonempty finite word over `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Branch>);

impl Word {
    pub fn new(symbols: Vec<Branch>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("words must be nonempty".into()));
        }
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[Branch] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; words are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Branch {
        self.0[0]
    }

    pub fn get(&self, j: usize) -> Branch {
        self.0[j]
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Branch::Left),
                '1' => Ok(Branch::Right),
                other => Err(Error::InvalidArgument(format!(
                    "bad symbol `{other}` in word `{s}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }
}

/// Combinatorial type `ω = (ω₀, ω₁)` of a renormalization.
///
/// `ω₀` codes the branch of the first-return map left of the critical point
/// and starts with `0`; `ω₁` starts with `1`. Both have length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RenormType {
    w0: Word,
    w1: Word,
}

impl RenormType {
    pub fn new(w0: Word, w1: Word) -> Result<Self> {
        if w0.first() != Branch::Left || w1.first() != Branch::Right {
            return Err(Error::InvalidArgument(format!(
                "type ({w0},{w1}): first word must start with 0 and second with 1"
            )));
        }
        if w0.len() < 2 || w1.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "type ({w0},{w1}): both words need length at least 2"
            )));
        }
        Ok(RenormType { w0, w1 })
    }

    /// Monotone `(a, b)`-type: `ω₀ = 0 1^a`, `ω₁ = 1 0^b`.
    pub fn monotone(a: usize, b: usize) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::InvalidArgument(format!(
                "monotone type needs a, b >= 1 (got ({a},{b}))"
            )));
        }
        let mut w0 = vec![Branch::Left];
        w0.extend(std::iter::repeat_n(Branch::Right, a));
        let mut w1 = vec![Branch::Right];
        w1.extend(std::iter::repeat_n(Branch::Left, b));
        RenormType::new(Word(w0), Word(w1))
    }

    /// Replaces every symbol `k` of `outer`'s words by `inner.word(k)`.
    ///
    /// With `inner == outer == t` this is the type of twice `t`-renormalizable
    /// maps, whose fixed points are period-2 points of `t`-renormalization.
    pub fn substitute(inner: &RenormType, outer: &RenormType) -> RenormType {
        let expand = |w: &Word| {
            let mut out = Vec::new();
            for &s in w.symbols() {
                out.extend_from_slice(inner.word(s).symbols());
            }
            Word(out)
        };
        RenormType {
            w0: expand(&outer.w0),
            w1: expand(&outer.w1),
        }
    }

    /// Twice-`self` type, `substitute(self, self)`.
    pub fn doubled(&self) -> RenormType {
        RenormType::substitute(self, self)
    }

    pub fn w0(&self) -> &Word {
        &self.w0
    }

    pub fn w1(&self) -> &Word {
        &self.w1
    }

    pub fn word(&self, k: Branch) -> &Word {
        match k {
            Branch::Left => &self.w0,
            Branch::Right => &self.w1,
        }
    }

    /// Return times `(n0, n1) = (|ω₀|, |ω₁|)`.
    pub fn return_times(&self) -> (usize, usize) {
        (self.w0.len(), self.w1.len())
    }

    /// `|ω| = |ω₀| + |ω₁|`
    pub fn len(&self) -> usize {
        self.w0.len() + self.w1.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(a, b)` if this is a monotone type.
    pub fn as_monotone(&self) -> Option<(usize, usize)> {
        let a = self.w0.len() - 1;
        let b = self.w1.len() - 1;
        let monotone = self.w0.symbols()[1..].iter().all(|&s| s == Branch::Right)
            && self.w1.symbols()[1..].iter().all(|&s| s == Branch::Left);
        monotone.then_some((a, b))
    }

    /// Symmetric types are mapped to themselves by `x ↦ 1 − x`.
    pub fn is_symmetric(&self) -> bool {
        self.w0.len() == self.w1.len()
            && self
                .w0
                .symbols()
                .iter()
                .zip(self.w1.symbols())
                .all(|(a, b)| *a == b.other())
    }

    /// Itinerary followed by the orbit of the boundary point `k`, starting
    /// at `f(k)`: the tail of `ω_{1−k}` followed by `ω_k`.
    ///
    /// The point `0 = f₁(c⁺)` is the image of the right end of the
    /// return interval, so its orbit continues along `ω₁`; symmetrically the
    /// orbit of `1` continues along `ω₀`. The word returned has length
    /// `|ω| − 1` and its `j`-th symbol is the side of the `j`-th orbit point.
    pub fn boundary_itinerary(&self, k: Branch) -> Vec<Branch> {
        let (first, second) = match k {
            Branch::Left => (&self.w1, &self.w0),
            Branch::Right => (&self.w0, &self.w1),
        };
        first.symbols()[1..]
            .iter()
            .chain(second.symbols())
            .copied()
            .collect()
    }
}

impl fmt::Display for RenormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.w0, self.w1)
    }
}

impl FromStr for RenormType {
    type Err = Error;

    /// Parses `"w0,w1"`, e.g. `"011,10"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected `w0,w1`, got `{s}`")))?;
        RenormType::new(a.parse()?, b.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> RenormType {
        s.parse().unwrap()
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(RenormType::monotone(2, 1).unwrap(), t("011,10"));
        assert_eq!(RenormType::monotone(1, 1).unwrap(), t("01,10"));
        assert_eq!(
            RenormType::monotone(8, 2).unwrap().to_string(),
            "011111111,100"
        );
        assert!(RenormType::monotone(0, 1).is_err());
        assert!(RenormType::monotone(1, 0).is_err());
    }

    #[test]
    fn substitution_examples() {
        let t21 = RenormType::monotone(2, 1).unwrap();
        assert_eq!(t21.doubled(), t("0111010,10011"));
        let t11 = RenormType::monotone(1, 1).unwrap();
        assert_eq!(t11.doubled(), t("0110,1001"));
        let inner = t("0110,100");
        let outer = t("01,10");
        let s = RenormType::substitute(&inner, &outer);
        assert_eq!(s.w0().to_string(), "0110100");
        assert_eq!(s.w1().to_string(), "1000110");
    }

    #[test]
    fn lengths() {
        assert_eq!(t("011,10").len(), 5);
        assert_eq!(RenormType::monotone(8, 2).unwrap().len(), 12);
        assert_eq!(t("011,10").doubled().len(), 12);
    }

    #[test]
    fn validation() {
        assert!("11,10".parse::<RenormType>().is_err());
        assert!("01,00".parse::<RenormType>().is_err());
        assert!("0,10".parse::<RenormType>().is_err());
        assert!("012,10".parse::<RenormType>().is_err());
        assert!("0110".parse::<RenormType>().is_err());
    }

    #[test]
    fn boundary_itineraries() {
        let t82 = RenormType::monotone(8, 2).unwrap();
        let it0: String = t82
            .boundary_itinerary(Branch::Left)
            .iter()
            .map(|b| b.to_string())
            .collect();
        let it1: String = t82
            .boundary_itinerary(Branch::Right)
            .iter()
            .map(|b| b.to_string())
            .collect();
        assert_eq!(it0, "00011111111");
        assert_eq!(it1, "11111111100");
    }

    #[test]
    fn monotone_recognition_and_symmetry() {
        assert_eq!(t("01111,100").as_monotone(), Some((4, 2)));
        assert_eq!(t("0101,100").as_monotone(), None);
        assert!(RenormType::monotone(3, 3).unwrap().is_symmetric());
        assert!(!RenormType::monotone(3, 2).unwrap().is_symmetric());
    }

    fn arb_type() -> impl Strategy<Value = RenormType> {
        (
            proptest::collection::vec(any::<bool>(), 1..6),
            proptest::collection::vec(any::<bool>(), 1..6),
        )
            .prop_map(|(a, b)| {
                let sym = |x: bool| if x { Branch::Right } else { Branch::Left };
                let mut w0 = vec![Branch::Left];
                w0.extend(a.into_iter().map(sym));
                let mut w1 = vec![Branch::Right];
                w1.extend(b.into_iter().map(sym));
                RenormType::new(Word(w0), Word(w1)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn monotone_types_are_valid(a in 1usize..40, b in 1usize..40) {
            let t = RenormType::monotone(a, b).unwrap();
            prop_assert_eq!(t.return_times(), (a + 1, b + 1));
            prop_assert_eq!(t.as_monotone(), Some((a, b)));
        }

        #[test]
        fn substitution_keeps_leading_symbols_and_adds_lengths(s in arb_type(), o in arb_type()) {
            let r = RenormType::substitute(&s, &o);
            prop_assert_eq!(r.w0().first(), Branch::Left);
            prop_assert_eq!(r.w1().first(), Branch::Right);
            let expected: usize = o.w0().symbols().iter().chain(o.w1().symbols())
                .map(|&k| s.word(k).len()).sum();
            prop_assert_eq!(r.len(), expected);
            prop_assert_eq!(r.to_string().parse::<RenormType>().unwrap(), r);
        }
    }
}
