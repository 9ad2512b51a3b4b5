//! Words over the generator alphabet `{id, γ_0, …, γ_{m-1}, γ_0⁻¹, …}`.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::hyperbolic::Isometry;

/// Number of compositions after which a cached matrix is renormalized.
const RENORMALIZE_EVERY: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Id,
    Gen(usize),
    Inv(usize),
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::Id => Letter::Id,
            Letter::Gen(i) => Letter::Inv(i),
            Letter::Inv(i) => Letter::Gen(i),
        }
    }

    pub fn index(self) -> Option<usize> {
        match self {
            Letter::Id => None,
            Letter::Gen(i) | Letter::Inv(i) => Some(i),
        }
    }

    pub fn resolve(self, generators: &[Isometry]) -> Isometry {
        match self {
            Letter::Id => Isometry::IDENTITY,
            Letter::Gen(i) => generators[i],
            Letter::Inv(i) => generators[i].inverse(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Id => write!(f, "id"),
            Letter::Gen(i) => write!(f, "g{i}"),
            Letter::Inv(i) => write!(f, "G{i}"),
        }
    }
}

/// A freely reduced word together with the isometry it resolves to.
#[derive(Debug, Clone)]
pub struct Word {
    letters: Vec<Letter>,
    resolved: Isometry,
    pending: u32,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Word {
    pub fn identity() -> Word {
        Word { letters: Vec::new(), resolved: Isometry::IDENTITY, pending: 0 }
    }

    pub fn letter(letter: Letter, generators: &[Isometry]) -> Word {
        Word::from_letters(&[letter], generators)
    }

    /// Freely reduces the letters and resolves the product from scratch.
    pub fn from_letters(letters: &[Letter], generators: &[Isometry]) -> Word {
        let mut reduced: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == Letter::Id {
                continue;
            }
            if reduced.last() == Some(&l.inverse()) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        let resolved = exact_product(&reduced, generators);
        Word { letters: reduced, resolved, pending: 0 }
    }

    /// Parses the dotted form produced by `Display`, e.g. `g6.G1`.
    pub fn parse(text: &str, generators: &[Isometry]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "id" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for part in text.split('.') {
            let (head, tail) = part.split_at(1.min(part.len()));
            let index: usize = tail.parse().map_err(|_| Error::Schema(format!("bad letter '{part}'")))?;
            if index >= generators.len() {
                return Err(Error::Schema(format!("letter '{part}' out of range")));
            }
            letters.push(match head {
                "g" => Letter::Gen(index),
                "G" => Letter::Inv(index),
                _ => return Err(Error::Schema(format!("bad letter '{part}'"))),
            });
        }
        Ok(Word::from_letters(&letters, generators))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn resolved(&self) -> &Isometry {
        &self.resolved
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some(&first)) = (letters.last(), rest.first()) {
            if last != first.inverse() {
                break;
            }
            letters.pop();
            rest = &rest[1..];
        }
        letters.extend_from_slice(rest);
        let mut resolved = self.resolved.compose(&other.resolved);
        let mut pending = self.pending + other.pending + 1;
        if pending >= RENORMALIZE_EVERY {
            resolved = resolved.renormalized().unwrap_or(resolved);
            pending = 0;
        }
        Word { letters, resolved, pending }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            resolved: self.resolved.inverse(),
            pending: self.pending,
        }
    }

    /// Recomputes the cached matrix from the letters.
    pub fn refreshed(&self, generators: &[Isometry]) -> Word {
        Word::from_letters(&self.letters, generators)
    }
}

/// A matrix `[[a, b], [conj b, conj a]]` in double-double precision.
#[derive(Clone, Copy)]
struct Wide {
    a: (TwoFloat, TwoFloat),
    b: (TwoFloat, TwoFloat),
}

fn mul(x: (TwoFloat, TwoFloat), y: (TwoFloat, TwoFloat)) -> (TwoFloat, TwoFloat) {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

fn add(x: (TwoFloat, TwoFloat), y: (TwoFloat, TwoFloat)) -> (TwoFloat, TwoFloat) {
    (x.0 + y.0, x.1 + y.1)
}

fn conj(x: (TwoFloat, TwoFloat)) -> (TwoFloat, TwoFloat) {
    (x.0, -x.1)
}

impl Wide {
    fn from(m: &Isometry) -> Wide {
        let t = TwoFloat::from;
        Wide { a: (t(m.a.re), t(m.a.im)), b: (t(m.b.re), t(m.b.im)) }
    }

    fn compose(&self, o: &Wide) -> Wide {
        Wide { a: add(mul(self.a, o.a), mul(self.b, conj(o.b))), b: add(mul(self.a, o.b), mul(self.b, conj(o.a))) }
    }
}

/// Product of the letters carried out in double-double precision. Long
/// words have entries far larger than the result, and plain `f64`
/// products lose most of their digits to that cancellation.
fn exact_product(letters: &[Letter], generators: &[Isometry]) -> Isometry {
    let mut m = Wide::from(&Isometry::IDENTITY);
    for l in letters {
        m = m.compose(&Wide::from(&l.resolve(generators)));
    }
    let det = m.a.0 * m.a.0 + m.a.1 * m.a.1 - m.b.0 * m.b.0 - m.b.1 * m.b.1;
    let raw = Isometry { a: Complex64::new(m.a.0.hi(), m.a.1.hi()), b: Complex64::new(m.b.0.hi(), m.b.1.hi()) };
    if det.hi() <= 0.0 || det.hi().is_nan() {
        return raw;
    }
    let s = det.sqrt().recip();
    Isometry {
        a: Complex64::new((m.a.0 * s).hi(), (m.a.1 * s).hi()),
        b: Complex64::new((m.b.0 * s).hi(), (m.b.1 * s).hi()),
    }
}

/// Whether two isometries agree up to sign, with a tolerance scaled by the
/// size of their entries.
pub fn same_element(x: &Isometry, y: &Isometry, tol: f64) -> bool {
    let scale = x.a.norm().max(y.a.norm()).max(1.0);
    x.compose(&y.inverse()).distance_to_identity() <= tol * scale * scale
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
