use std::fmt;

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::term::{AlphaKey, Parser, Term};

/// Exact probability.
pub type Prob = Ratio<u64>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DistError {
    #[error("total mass {0} exceeds 1")]
    MassOverflow(Prob),
    #[error("scale factor {0} is outside (0,1]")]
    BadScale(Prob),
    #[error("entry probability {0} is outside (0,1]")]
    BadEntry(Prob),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub p: Prob,
    pub term: Term,
}

/// A multiset of weighted terms with total mass at most 1. Entries keep
/// their insertion order; equal pairs stay separate.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiDist {
    entries: Vec<Entry>,
}

/// Order-insensitive identity of a multi-distribution, up to α.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistKey(Vec<(Prob, AlphaKey)>);

fn in_unit(p: Prob) -> bool {
    p > Prob::from_integer(0) && p <= Prob::from_integer(1)
}

impl MultiDist {
    pub fn new(entries: Vec<(Prob, Term)>) -> Result<MultiDist, DistError> {
        let mut d = MultiDist::default();
        for (p, term) in entries {
            if !in_unit(p) {
                return Err(DistError::BadEntry(p));
            }
            d.entries.push(Entry { p, term });
        }
        let m = d.mass();
        if m > Prob::from_integer(1) {
            return Err(DistError::MassOverflow(m));
        }
        Ok(d)
    }

    /// `⟦1·t⟧`
    pub fn dirac(term: Term) -> MultiDist {
        MultiDist {
            entries: vec![Entry {
                p: Prob::from_integer(1),
                term,
            }],
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mass(&self) -> Prob {
        self.entries.iter().map(|e| e.p).sum()
    }

    pub fn key(&self) -> DistKey {
        let mut v: Vec<(Prob, AlphaKey)> = self
            .entries
            .iter()
            .map(|e| (e.p, e.term.alpha_key()))
            .collect();
        v.sort();
        DistKey(v)
    }

    /// Multiset equality up to α on terms.
    pub fn same_as(&self, other: &MultiDist) -> bool {
        self.key() == other.key()
    }

    /// Total size of the terms, for ordering evidence.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.term.size()).sum()
    }

    pub fn contains_choice(&self) -> bool {
        self.entries.iter().any(|e| e.term.contains_choice())
    }
}

/// Multiset union; rejects a combined mass above 1.
pub fn mdist_sum(a: &MultiDist, b: &MultiDist) -> Result<MultiDist, DistError> {
    let mut entries = a.entries.clone();
    entries.extend(b.entries.iter().cloned());
    let out = MultiDist { entries };
    let m = out.mass();
    if m > Prob::from_integer(1) {
        return Err(DistError::MassOverflow(m));
    }
    Ok(out)
}

pub fn mdist_scale(q: Prob, m: &MultiDist) -> Result<MultiDist, DistError> {
    if !in_unit(q) {
        return Err(DistError::BadScale(q));
    }
    Ok(MultiDist {
        entries: m
            .entries
            .iter()
            .map(|e| Entry {
                p: q * e.p,
                term: e.term.clone(),
            })
            .collect(),
    })
}

impl fmt::Display for MultiDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟦")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match e.term {
                Term::Choice { .. } => write!(f, "{}·({})", e.p, e.term)?,
                _ => write!(f, "{}·{}", e.p, e.term)?,
            }
        }
        f.write_str("⟧")
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    num: u64,
    den: u64,
    term: String,
}

impl Serialize for MultiDist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|e| EntryJson {
            num: *e.p.numer(),
            den: *e.p.denom(),
            term: e.term.to_string(),
        }))
    }
}

impl<'de> Deserialize<'de> for MultiDist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<EntryJson>::deserialize(d)?;
        let parser = Parser::default();
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            if e.den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            let term = parser.parse(&e.term).map_err(D::Error::custom)?;
            entries.push((Prob::new(e.num, e.den), term));
        }
        MultiDist::new(entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn half() -> Prob {
        Prob::new(1, 2)
    }

    #[test]
    fn scale_and_sum() {
        let m = parse("m").unwrap();
        let n = parse("n").unwrap();
        let a = mdist_scale(half(), &MultiDist::dirac(m.clone())).unwrap();
        assert_eq!(a, MultiDist::new(vec![(half(), m.clone())]).unwrap());
        let b = mdist_scale(half(), &MultiDist::dirac(n.clone())).unwrap();
        let s = mdist_sum(&a, &b).unwrap();
        assert_eq!(s.to_string(), "⟦1/2·m, 1/2·n⟧");
        let q = mdist_scale(half(), &s).unwrap();
        assert_eq!(q.entries()[0].p, Prob::new(1, 4));
        assert_eq!(q.entries()[1].p, Prob::new(1, 4));
        assert!(matches!(mdist_sum(&s, &a), Err(DistError::MassOverflow(_))));
        assert!(matches!(
            mdist_scale(Prob::new(3, 2), &s),
            Err(DistError::BadScale(_))
        ));
    }

    #[test]
    fn multiset_semantics() {
        let x = parse("x").unwrap();
        let two = MultiDist::new(vec![(half(), x.clone()), (half(), x.clone())]).unwrap();
        assert_eq!(two.len(), 2);
        assert!(!two.same_as(&MultiDist::dirac(x)));
    }

    #[test]
    fn json_roundtrip() {
        let d = MultiDist::new(vec![
            (half(), parse("λx.x").unwrap()),
            (Prob::new(1, 4), parse("a (+) b").unwrap()),
        ])
        .unwrap();
        let js = serde_json::to_string(&d).unwrap();
        assert!(js.contains("\"num\":1,\"den\":4"));
        let back: MultiDist = serde_json::from_str(&js).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<MultiDist>(r#"[{"num":3,"den":2,"term":"x"}]"#).is_err());
    }
}
