//! Exact algebra of complex-weighted sums of Pauli words.
//!
//! A [`PauliWord`] is a tensor product of single-qubit symbols `I, X, Y, Z`;
//! an [`OperatorExpr`] is a finite complex-weighted sum of words. Words are
//! bit-packed (two bits per qubit) so that products reduce to XORs and
//! popcounts, and the packing doubles as the canonical lexicographic key
//! (`I < X < Y < Z`, qubit 1 most significant) used for deterministic
//! iteration and serialization.
//!
//! The sign convention is right-handed: `X·Y = +iZ` and cyclically, with
//! every letter squaring to the identity. The reference state for
//! [`OperatorExpr::vacuum_expectation`] is `|0...0>`, the +1 eigenstate of
//! every `Z`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped after every operation.
pub const PRUNE_TOLERANCE: f64 = 1e-12;
/// Default coefficientwise tolerance for comparing operators.
pub const EQ_TOLERANCE: f64 = 1e-10;
/// Words are packed two bits per qubit into a `u128`.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli symbol. The declaration order fixes the canonical
/// letter ordering `I < X < Y < Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' => Some(PauliLetter::I),
            'X' | 'x' => Some(PauliLetter::X),
            'Y' | 'y' => Some(PauliLetter::Y),
            'Z' | 'z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    fn code(self) -> u128 {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    fn from_code(code: u128) -> Self {
        match code {
            0 => PauliLetter::I,
            1 => PauliLetter::X,
            2 => PauliLetter::Y,
            3 => PauliLetter::Z,
            _ => unreachable!(),
        }
    }
}

/// The four unit phases `i^k` arising from products of Pauli words.
pub const QUARTER_PHASES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

// Bit plumbing: each qubit owns two bits of `codes`, qubit 0 at the top.
// In the (x, z) plane decomposition a letter is i^(xz) X^x Z^z, packed as
// code = (z << 1) | (x ^ z), which makes the packed integer ordering agree
// with the canonical letter ordering.

fn spread_half(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

fn compact_half(v: u64) -> u32 {
    let mut x = v & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x >> 16)) & 0x0000_0000_FFFF_FFFF;
    x as u32
}

fn spread(v: u64) -> u128 {
    ((spread_half((v >> 32) as u32) as u128) << 64) | spread_half(v as u32) as u128
}

fn compact(v: u128) -> u64 {
    ((compact_half((v >> 64) as u64) as u64) << 32) | compact_half(v as u64) as u64
}

/// A tensor product of single-qubit Pauli symbols on `n` qubits.
///
/// Ordering and equality follow the canonical packing; all words inside one
/// [`OperatorExpr`] share the same length.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord {
    codes: u128,
    len: u8,
}

impl PauliWord {
    /// The all-`I` word, the multiplicative identity.
    pub fn identity(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(PauliWord {
            codes: 0,
            len: n as u8,
        })
    }

    /// A single non-identity letter at `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        Ok(Self::identity(n)?.with_letter(qubit, letter))
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Result<Self> {
        let mut w = Self::identity(letters.len())?;
        for (q, &l) in letters.iter().enumerate() {
            w = w.with_letter(q, l);
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        debug_assert!(qubit < self.len());
        PauliLetter::from_code((self.codes >> shift(qubit)) & 3)
    }

    pub fn with_letter(&self, qubit: usize, letter: PauliLetter) -> Self {
        debug_assert!(qubit < self.len());
        let s = shift(qubit);
        PauliWord {
            codes: (self.codes & !(3u128 << s)) | (letter.code() << s),
            len: self.len,
        }
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.len()).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.codes == 0
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&q| self.letter(q) != PauliLetter::I)
    }

    /// X/Z plane bitmasks; qubit `a` sits at bit `63 - a`.
    fn planes(&self) -> (u64, u64) {
        let hi = compact(self.codes >> 1);
        let lo = compact(self.codes);
        (hi ^ lo, hi)
    }

    fn from_planes(x: u64, z: u64, len: u8) -> Self {
        PauliWord {
            codes: (spread(z) << 1) | spread(x ^ z),
            len,
        }
    }

    /// Word contains only `I` and `Z` letters, so it is diagonal in the
    /// computation basis.
    pub fn is_diagonal(&self) -> bool {
        let (x, _) = self.planes();
        x == 0
    }

    /// Product phase exponent and resulting word: `self · other = i^k · word`.
    pub fn mul_exponent(&self, other: &PauliWord) -> Result<(u8, PauliWord)> {
        if self.len != other.len {
            return Err(Error::QubitCountMismatch(self.len(), other.len()));
        }
        let (x1, z1) = self.planes();
        let (x2, z2) = other.planes();
        let x3 = x1 ^ x2;
        let z3 = z1 ^ z2;
        let exp = (x1 & z1).count_ones()
            + (x2 & z2).count_ones()
            + 2 * (z1 & x2).count_ones()
            + 3 * (x3 & z3).count_ones();
        Ok(((exp % 4) as u8, PauliWord::from_planes(x3, z3, self.len)))
    }

    /// `true` iff the two words commute.
    pub fn commutes_with(&self, other: &PauliWord) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::QubitCountMismatch(self.len(), other.len()));
        }
        let (x1, z1) = self.planes();
        let (x2, z2) = other.planes();
        Ok(((x1 & z2).count_ones() + (z1 & x2).count_ones()) % 2 == 0)
    }
}

fn shift(qubit: usize) -> u32 {
    2 * (63 - qubit as u32)
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    Ok(())
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliWord({})", self)
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Option<Vec<PauliLetter>> = s.chars().map(PauliLetter::from_char).collect();
        let letters = letters.ok_or_else(|| Error::BadPauliString(s.to_string()))?;
        if letters.is_empty() {
            return Err(Error::BadPauliString(s.to_string()));
        }
        PauliWord::from_letters(&letters)
    }
}

/// Multiplies two Pauli words, returning the unit phase and the product word.
pub fn word_mul(p: &PauliWord, q: &PauliWord) -> Result<(Complex64, PauliWord)> {
    let (exp, word) = p.mul_exponent(q)?;
    Ok((QUARTER_PHASES[exp as usize], word))
}

/// A finite complex-weighted sum of Pauli words on a fixed qubit count.
///
/// Terms are kept in canonical order; coefficients below
/// [`PRUNE_TOLERANCE`] are dropped after every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorExpr {
    n: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl OperatorExpr {
    /// The zero operator.
    pub fn zero(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(OperatorExpr {
            n,
            terms: BTreeMap::new(),
        })
    }

    /// The identity operator.
    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self::from_word(
            PauliWord::identity(n)?,
            Complex64::new(1.0, 0.0),
        ))
    }

    /// A scalar multiple of the identity.
    pub fn scalar(n: usize, c: Complex64) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.accumulate(PauliWord::identity(n)?, c);
        e.prune();
        Ok(e)
    }

    /// A single weighted word.
    pub fn from_word(word: PauliWord, coeff: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff.norm() >= PRUNE_TOLERANCE {
            terms.insert(word, coeff);
        }
        OperatorExpr {
            n: word.len(),
            terms,
        }
    }

    /// The bare letter `letter` on `qubit` with unit weight.
    pub fn pauli(n: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n });
        }
        Ok(Self::from_word(
            PauliWord::single(n, qubit, letter)?,
            Complex64::new(1.0, 0.0),
        ))
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliWord, Complex64)>,
    {
        let mut e = Self::zero(n)?;
        for (w, c) in terms {
            if w.len() != n {
                return Err(Error::QubitCountMismatch(w.len(), n));
            }
            e.accumulate(w, c);
        }
        e.prune();
        Ok(e)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored coefficient of `word`, zero if absent.
    pub fn coeff(&self, word: &PauliWord) -> Complex64 {
        self.terms
            .get(word)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, word: PauliWord, coeff: Complex64) {
        let entry = self.terms.entry(word).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOLERANCE);
    }

    /// `self · other`, distributing over terms and folding phases into
    /// coefficients.
    pub fn mul(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        let mut out = OperatorExpr::zero(self.n)?;
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let (exp, word) = wa.mul_exponent(wb)?;
                out.accumulate(word, ca * cb * QUARTER_PHASES[exp as usize]);
            }
        }
        out.prune();
        Ok(out)
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &OperatorExpr) -> Result<OperatorExpr> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (w, cb) in &other.terms {
            out.accumulate(*w, c * cb);
        }
        out.prune();
        Ok(out)
    }

    /// `self + other`.
    pub fn add(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        self.add_scaled(Complex64::new(1.0, 0.0), other)
    }

    /// `c · self`.
    pub fn scale(&self, c: Complex64) -> OperatorExpr {
        let mut out = OperatorExpr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, coeff)| (*w, c * coeff))
                .collect(),
        };
        out.prune();
        out
    }

    /// Hermitian adjoint: Pauli words are self-adjoint, so this conjugates
    /// every coefficient.
    pub fn adjoint(&self) -> OperatorExpr {
        OperatorExpr {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (*w, c.conj())).collect(),
        }
    }

    /// Expectation against the reference state `|0...0>`: the sum of
    /// coefficients over words containing only `I` and `Z` letters.
    pub fn vacuum_expectation(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.is_diagonal())
            .map(|(_, c)| c)
            .sum()
    }

    /// `true` iff `adjoint(self) · self` equals the identity within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Coefficientwise distance of `adjoint(self) · self` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = match self.adjoint().mul(self) {
            Ok(p) => p,
            Err(_) => return f64::INFINITY,
        };
        let identity = OperatorExpr::identity(self.n).expect("valid n");
        product.max_abs_diff(&identity)
    }

    /// `true` iff every coefficient is real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Qubits on which some stored word carries a non-identity letter.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for w in self.terms.keys() {
            s.extend(w.support());
        }
        s
    }

    /// Largest coefficientwise difference from `other`.
    pub fn max_abs_diff(&self, other: &OperatorExpr) -> f64 {
        let mut max = 0.0f64;
        for (w, c) in &self.terms {
            max = max.max((c - other.coeff(w)).norm());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                max = max.max(c.norm());
            }
        }
        max
    }

    /// Coefficientwise equality within `tol`.
    pub fn approx_eq(&self, other: &OperatorExpr, tol: f64) -> bool {
        self.n == other.n && self.max_abs_diff(other) <= tol
    }

    /// Divides out the phase of the largest-modulus coefficient, making it
    /// real and positive. Ties break on canonical word order.
    pub fn strip_global_phase(&self) -> OperatorExpr {
        let mut best: Option<(f64, Complex64)> = None;
        for c in self.terms.values() {
            let m = c.norm();
            match best {
                Some((bm, _)) if m <= bm + 1e-15 => {}
                _ => best = Some((m, *c)),
            }
        }
        match best {
            Some((m, c)) if m > 0.0 => self.scale(c.conj() / m),
            _ => self.clone(),
        }
    }

    /// Re-embeds an expression over `positions.len()` qubits into an
    /// `n_total`-qubit space, mapping word position `i` to `positions[i]`.
    pub fn embed(&self, n_total: usize, positions: &[usize]) -> Result<OperatorExpr> {
        if positions.len() != self.n {
            return Err(Error::QubitCountMismatch(positions.len(), self.n));
        }
        for &p in positions {
            if p >= n_total {
                return Err(Error::QubitOutOfRange {
                    index: p,
                    n: n_total,
                });
            }
        }
        let mut out = OperatorExpr::zero(n_total)?;
        for (w, c) in &self.terms {
            let mut word = PauliWord::identity(n_total)?;
            for (i, &p) in positions.iter().enumerate() {
                word = word.with_letter(p, w.letter(i));
            }
            out.accumulate(word, *c);
        }
        out.prune();
        Ok(out)
    }

    /// Canonical `(pauli-string, re, im)` records.
    pub fn to_records(&self) -> Vec<(String, f64, f64)> {
        self.terms
            .iter()
            .map(|(w, c)| (w.to_string(), c.re, c.im))
            .collect()
    }

    pub fn from_records(records: &[(String, f64, f64)]) -> Result<Self> {
        let n = records
            .first()
            .map(|(s, _, _)| s.len())
            .ok_or(Error::NoQubits)?;
        let mut terms = Vec::with_capacity(records.len());
        for (s, re, im) in records {
            let w: PauliWord = s.parse()?;
            if w.len() != n {
                return Err(Error::QubitCountMismatch(w.len(), n));
            }
            terms.push((w, Complex64::new(*re, *im)));
        }
        OperatorExpr::from_terms(n, terms)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if (c.im).abs() < 1e-12 {
                write!(f, "{:+.4}", c.re)?;
            } else if (c.re).abs() < 1e-12 {
                write!(f, "{:+.4}i", c.im)?;
            } else {
                write!(f, "({:.4}{:+.4}i)", c.re, c.im)?;
            }
            write!(f, "·{}", w)?;
        }
        Ok(())
    }
}
