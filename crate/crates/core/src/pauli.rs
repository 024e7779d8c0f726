//! Pauli strings and complex-weighted sums of Pauli strings.
//!
//! A [`PauliString`] is a sparse tensor product of single-qubit Pauli
//! matrices, stored as `(qubit, axis)` factors in strictly increasing qubit
//! order. A [`PauliSum`] is kept in canonical form: no duplicate strings and
//! no coefficients below [`DROP_TOLERANCE`] in magnitude.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients smaller than this are dropped during canonicalization.
pub const DROP_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// Single-qubit product `self · other = phase · result`, `None` meaning identity.
    pub fn compose(self, other: Axis) -> (Complex64, Option<Axis>) {
        use Axis::*;
        match (self, other) {
            (X, X) | (Y, Y) | (Z, Z) => (ONE, None),
            (X, Y) => (I, Some(Z)),
            (Y, X) => (-I, Some(Z)),
            (Y, Z) => (I, Some(X)),
            (Z, Y) => (-I, Some(X)),
            (Z, X) => (I, Some(Y)),
            (X, Z) => (-I, Some(Y)),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn from_symbol(c: char) -> Option<Axis> {
        match c {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    factors: Vec<(usize, Axis)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        Self {
            factors: vec![(qubit, axis)],
        }
    }

    /// Builds a string from factors in any order; a repeated qubit is an error.
    pub fn new(factors: impl IntoIterator<Item = (usize, Axis)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, a) in factors {
            if map.insert(q, a).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("qubit {q} appears twice in a Pauli string"),
                });
            }
        }
        Ok(Self {
            factors: map.into_iter().collect(),
        })
    }

    pub fn factors(&self) -> &[(usize, Axis)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when every factor is `Z` (diagonal in the computational basis).
    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|&(_, a)| a == Axis::Z)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    pub fn axis_at(&self, qubit: usize) -> Option<Axis> {
        self.factors
            .binary_search_by_key(&qubit, |&(q, _)| q)
            .ok()
            .map(|i| self.factors[i].1)
    }

    /// Product `self · other`, returned as a phase and the resulting string.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        let mut phase = ONE;
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let (p, axis) = a[i].1.compose(b[j].1);
                phase *= p;
                if let Some(axis) = axis {
                    out.push((a[i].0, axis));
                }
                i += 1;
                j += 1;
            }
        }
        (phase, PauliString { factors: out })
    }

    /// Two strings commute iff they anticommute on an even number of qubits.
    pub fn commutes(&self, other: &PauliString) -> bool {
        let mut anti = 0usize;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i].1 != b[j].1 {
                        anti += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        anti % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (k, (q, a)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", a.symbol(), q)?;
        }
        Ok(())
    }
}

/// Parses a single `<axis><index>` token such as `Z3`.
pub fn parse_factor(token: &str) -> Option<(usize, Axis)> {
    let mut chars = token.chars();
    let axis = Axis::from_symbol(chars.next()?)?;
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((rest.parse().ok()?, axis))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::from_terms([(PauliString::identity(), c.into())])
    }

    pub fn term(c: impl Into<Complex64>, string: PauliString) -> Self {
        Self::from_terms([(string, c.into())])
    }

    pub fn single(c: impl Into<Complex64>, qubit: usize, axis: Axis) -> Self {
        Self::term(c, PauliString::single(qubit, axis))
    }

    /// Accumulates terms and canonicalizes.
    pub fn from_terms(terms: impl IntoIterator<Item = (PauliString, Complex64)>) -> Self {
        let mut map: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (s, c) in terms {
            *map.entry(s).or_default() += c;
        }
        map.retain(|_, c| c.norm() >= DROP_TOLERANCE);
        Self { terms: map }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.keys().filter_map(PauliString::max_qubit).max()
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> PauliSum {
        let c = c.into();
        Self::from_terms(self.terms.iter().map(|(s, v)| (s.clone(), v * c)))
    }

    /// Conjugate transpose: Pauli strings are hermitian, so only coefficients conjugate.
    pub fn dagger(&self) -> PauliSum {
        Self::from_terms(self.terms.iter().map(|(s, v)| (s.clone(), v.conj())))
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < DROP_TOLERANCE)
    }

    /// Returns a copy with exactly real coefficients, or `NonHermitian`.
    pub fn hermitized(&self) -> Result<PauliSum> {
        if !self.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        Ok(Self::from_terms(
            self.terms
                .iter()
                .map(|(s, v)| (s.clone(), Complex64::new(v.re, 0.0))),
        ))
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliString::is_diagonal)
    }

    /// True when all strings of the sum commute pairwise.
    pub fn strings_commute(&self) -> bool {
        let strings: Vec<&PauliString> = self.terms.keys().collect();
        strings
            .iter()
            .enumerate()
            .all(|(i, a)| strings[i + 1..].iter().all(|b| a.commutes(b)))
    }

    pub fn multiply(&self, other: &PauliSum) -> PauliSum {
        let mut out: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let (phase, s) = sa.mul(sb);
                *out.entry(s).or_default() += ca * cb * phase;
            }
        }
        out.retain(|_, c| c.norm() >= DROP_TOLERANCE);
        PauliSum { terms: out }
    }

    /// If `self² = k·1` with `k > 0`, returns `√k` (the magnitude of both eigenvalues).
    pub fn involution_scale(&self) -> Option<f64> {
        let sq = self.multiply(self);
        if sq.len() != 1 {
            return None;
        }
        let k = sq.coefficient(&PauliString::identity());
        (k.re > 0.0 && k.im.abs() < 1e-10).then(|| k.re.sqrt())
    }

    /// Line-oriented text form: `<real> <imag> <axis><index> ...`, one term per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, c) in &self.terms {
            out.push_str(&format!("{} {}", clean(c.re), clean(c.im)));
            for (q, a) in s.factors() {
                out.push_str(&format!(" {}{}", a.symbol(), q));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text form. Blank lines and `#` lines are skipped; repeated
    /// strings accumulate.
    pub fn parse(text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            terms.push(parse_term_line(line, k + 1)?);
        }
        Ok(PauliSum::from_terms(terms))
    }
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub(crate) fn parse_term_line(line: &str, lineno: usize) -> Result<(PauliString, Complex64)> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let mut tokens = line.split_whitespace();
    let mut number = |what: &str| -> Result<f64> {
        let tok = tokens
            .next()
            .ok_or_else(|| err(format!("missing {what} part of coefficient")))?;
        tok.parse::<f64>()
            .map_err(|_| err(format!("invalid {what} coefficient `{tok}`")))
    };
    let re = number("real")?;
    let im = number("imaginary")?;
    let mut factors = Vec::new();
    for tok in tokens {
        let f = parse_factor(tok).ok_or_else(|| err(format!("malformed Pauli token `{tok}`")))?;
        factors.push(f);
    }
    let s = PauliString::new(factors).map_err(|e| match e {
        Error::Parse { msg, .. } => err(msg),
        other => other,
    })?;
    Ok((s, Complex64::new(re, im)))
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        PauliSum::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(s, c)| (s.clone(), *c)),
        )
    }
}

impl Add for PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: PauliSum) -> PauliSum {
        &self + &rhs
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale(-1.0)
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self + &(-rhs)
    }
}

impl Sub for PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: PauliSum) -> PauliSum {
        &self - &rhs
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.multiply(rhs)
    }
}

impl Mul for PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: PauliSum) -> PauliSum {
        self.multiply(&rhs)
    }
}
