//! Exact noncommutative ordering calculus over the generators `X_j`, `P_j`
//! with `[X_j, P_j] = i hbar` and distinct indices commuting.
//!
//! Coefficients are polynomials in the formal variables `hbar` and `tau`
//! over the Gaussian rationals, so every ordering identity in this module is
//! checked with zero tolerance. `normal_form` rewrites words into the
//! canonical shape where, for each `j`, all `X_j` precede all `P_j` and
//! blocks are sorted by `j`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::grid::GridSpec;
use crate::quantize::{momentum_operator, position_operator, OperatorMatrix};

/// A Gaussian rational `re + im * i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    pub fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }
    pub fn from_int(v: i64) -> Self {
        Self { re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }
    pub fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn to_complex(&self) -> Complex64 {
        fn to_f64(r: &BigRational) -> f64 {
            let num = r.numer();
            let den = r.denom();
            // exact for the small rationals appearing in ordering rules
            num.to_string().parse::<f64>().unwrap_or(f64::NAN)
                / den.to_string().parse::<f64>().unwrap_or(f64::NAN)
        }
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Polynomial in the formal variables `hbar` and `tau`; keys are
/// `(hbar_power, tau_power)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coeff {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

impl Coeff {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    pub fn one() -> Self {
        Self::scalar(GaussRat::one())
    }
    pub fn scalar(v: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert((0, 0), v);
        }
        Self { terms }
    }
    pub fn monomial(v: GaussRat, hbar_pow: u32, tau_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert((hbar_pow, tau_pow), v);
        }
        Self { terms }
    }
    /// The formal variable `tau`.
    pub fn tau() -> Self {
        Self::monomial(GaussRat::one(), 0, 1)
    }
    /// `1 - tau`.
    pub fn one_minus_tau() -> Self {
        let mut c = Self::one();
        c.add_term((0, 1), GaussRat::from_int(-1));
        c
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_scalar(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|&k| k == (0, 0))
    }
    pub fn has_tau(&self) -> bool {
        self.terms.keys().any(|&(_, t)| t > 0)
    }
    pub fn max_hbar_power(&self) -> u32 {
        self.terms.keys().map(|&(h, _)| h).max().unwrap_or(0)
    }
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (u32, u32), v: GaussRat) {
        if v.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                let sum = slot.add(&v);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(key, v);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((h1, t1), v1) in &self.terms {
            for ((h2, t2), v2) in &other.terms {
                out.add_term((h1 + h2, t1 + t2), v1.mul(v2));
            }
        }
        out
    }
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }
    /// Exact `Integral_0^1 . dtau`: `tau^t -> 1/(t + 1)`.
    pub fn integrate_tau(&self) -> Self {
        let mut out = Self::zero();
        for ((h, t), v) in &self.terms {
            let inv = GaussRat::from_ratio(1, *t as i64 + 1);
            out.add_term((*h, 0), v.mul(&inv));
        }
        out
    }
    /// Exact substitution `tau -> q`.
    pub fn substitute_tau(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for ((h, t), v) in &self.terms {
            let mut pw = BigRational::one();
            for _ in 0..*t {
                pw *= q;
            }
            out.add_term((*h, 0), v.mul(&GaussRat { re: pw, im: BigRational::zero() }));
        }
        out
    }
    /// Exact substitution `tau -> 1 - tau`.
    pub fn reflect_tau(&self) -> Self {
        let mut out = Self::zero();
        let omt = Self::one_minus_tau();
        for ((h, t), v) in &self.terms {
            let factor = omt.pow(*t);
            for ((h2, t2), v2) in &factor.terms {
                out.add_term((h + h2, *t2), v.mul(v2));
            }
        }
        out
    }
    /// Evaluate with numeric `hbar`; errors if `tau` is still present.
    pub fn eval_numeric(&self, hbar: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((h, t), v) in &self.terms {
            if *t > 0 {
                return Err(CoreError::ResidualTau);
            }
            acc += v.to_complex() * hbar.powi(*h as i32);
        }
        Ok(acc)
    }
}

/// Generator letters; `j >= 1` indexes the degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    X(u32),
    P(u32),
}

impl Letter {
    fn dof(&self) -> u32 {
        match self {
            Letter::X(j) | Letter::P(j) => *j,
        }
    }
    /// Canonical order: by degree of freedom, `X` before `P`.
    fn rank(&self) -> (u32, u8) {
        match self {
            Letter::X(j) => (*j, 0),
            Letter::P(j) => (*j, 1),
        }
    }
}

pub type Word = Vec<Letter>;

/// Noncommutative polynomial: a finite coefficient map over words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Coeff>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    pub fn one() -> Self {
        Self::term(Vec::new(), Coeff::one())
    }
    pub fn term(word: Word, coeff: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        Self { terms }
    }
    /// Single generator `X_j`.
    pub fn x(j: u32) -> Self {
        Self::term(vec![Letter::X(j)], Coeff::one())
    }
    /// Single generator `P_j`.
    pub fn p(j: u32) -> Self {
        Self::term(vec![Letter::P(j)], Coeff::one())
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    fn insert(&mut self, word: Word, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(slot) => {
                let sum = slot.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }
    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.insert(w.clone(), v.mul(c));
        }
        out
    }

    /// Free-algebra product: concatenate words, multiply coefficients.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.insert(w, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.multiply(self);
        }
        out
    }

    /// Canonical form: within each word, for each `j`, all `X_j` precede all
    /// `P_j` and letters are sorted by `j`. Rewrites `P_j X_j -> X_j P_j - i hbar`
    /// and swaps commuting letters; exact and idempotent.
    pub fn normal_form(&self) -> Self {
        let mut out = Self::zero();
        let mut work: Vec<(Word, Coeff)> =
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((word, coeff)) = work.pop() {
            if coeff.is_zero() {
                continue;
            }
            // find the first adjacent out-of-order pair
            let mut swap_at = None;
            for idx in 0..word.len().saturating_sub(1) {
                if word[idx].rank() > word[idx + 1].rank() {
                    swap_at = Some(idx);
                    break;
                }
            }
            match swap_at {
                None => out.insert(word, coeff),
                Some(idx) => {
                    let a = word[idx];
                    let b = word[idx + 1];
                    let mut swapped = word.clone();
                    swapped.swap(idx, idx + 1);
                    if a.dof() == b.dof() {
                        // P_j X_j = X_j P_j - i hbar
                        debug_assert!(matches!(a, Letter::P(_)) && matches!(b, Letter::X(_)));
                        let mut contracted = word.clone();
                        contracted.remove(idx + 1);
                        contracted.remove(idx);
                        let minus_i_hbar =
                            Coeff::monomial(GaussRat::i().neg(), 1, 0);
                        work.push((swapped, coeff.clone()));
                        work.push((contracted, coeff.mul(&minus_i_hbar)));
                    } else {
                        // distinct degrees of freedom commute
                        work.push((swapped, coeff));
                    }
                }
            }
        }
        out
    }

    pub fn integrate_tau(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.integrate_tau());
        }
        out
    }
    pub fn substitute_tau(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.substitute_tau(q));
        }
        out
    }
    pub fn reflect_tau(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.reflect_tau());
        }
        out
    }

    /// Formal adjoint: reverse each word and conjugate each coefficient
    /// (`i -> -i`; `hbar` and `tau` are fixed).
    pub fn formal_adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut rev = w.clone();
            rev.reverse();
            out.insert(rev, c.conj());
        }
        out
    }

    /// Largest `hbar` power appearing in any coefficient.
    pub fn max_hbar_power(&self) -> u32 {
        self.terms.values().map(|c| c.max_hbar_power()).max().unwrap_or(0)
    }

    /// Numeric bridge: `X -> diag(x_i)`, `P ->` spectral momentum; word
    /// letters compose left to right. Requires `tau`-free coefficients and
    /// one degree of freedom.
    pub fn to_spectral_operator(&self, grid: &GridSpec) -> Result<OperatorMatrix> {
        for (w, c) in &self.terms {
            if c.has_tau() {
                return Err(CoreError::ResidualTau);
            }
            for l in w {
                if l.dof() != 1 {
                    return Err(CoreError::MultiDof(l.dof()));
                }
            }
        }
        let xop = position_operator(grid);
        let pop = momentum_operator(grid);
        let mut acc = OperatorMatrix::zeros(*grid);
        for (w, c) in &self.terms {
            let scalar = c.eval_numeric(grid.hbar())?;
            let mut term = OperatorMatrix::identity(*grid);
            for l in w {
                let factor = match l {
                    Letter::X(_) => &xop,
                    Letter::P(_) => &pop,
                };
                term = term.compose(factor)?;
            }
            acc = acc.add(&term.scale(scalar))?;
        }
        Ok(acc)
    }

    /// Canonical text rendering. Terms are sorted by graded lexicographic
    /// word order (longer words first, ties lexicographic); a common scalar
    /// coefficient is factored out.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut items: Vec<(&Word, &Coeff)> = self.terms.iter().collect();
        items.sort_by(|(wa, _), (wb, _)| {
            wb.len().cmp(&wa.len()).then_with(|| wa.cmp(wb))
        });

        // factor out a shared scalar coefficient (e.g. the 1/(n+1) weights)
        if items.len() > 1 {
            let first = items[0].1;
            if first.is_scalar() && items.iter().all(|(_, c)| *c == first) {
                let scalar = first.terms.get(&(0, 0)).cloned().unwrap_or_else(GaussRat::zero);
                if scalar != GaussRat::one() {
                    let words = items
                        .iter()
                        .map(|(w, _)| render_word(w))
                        .collect::<Vec<_>>()
                        .join(" + ");
                    return format!("{}*({})", render_scalar(&scalar, false), words);
                }
            }
        }

        let mut out = String::new();
        for (idx, (word, coeff)) in items.iter().enumerate() {
            let (body, negative) = render_term(word, coeff);
            if idx == 0 {
                if negative {
                    out.push('-');
                }
                out.push_str(&body);
            } else if negative {
                let _ = write!(out, " - {body}");
            } else {
                let _ = write!(out, " + {body}");
            }
        }
        out
    }
}

fn render_word(word: &Word) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut idx = 0;
    while idx < word.len() {
        let letter = word[idx];
        let mut count = 1;
        while idx + count < word.len() && word[idx + count] == letter {
            count += 1;
        }
        let base = match letter {
            Letter::X(1) => "X".to_string(),
            Letter::P(1) => "P".to_string(),
            Letter::X(j) => format!("X_{j}"),
            Letter::P(j) => format!("P_{j}"),
        };
        if count == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}^{count}"));
        }
        idx += count;
    }
    parts.join(" ")
}

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Render a Gaussian rational; `strip_sign` drops a leading minus (the
/// caller prints it).
fn render_scalar(v: &GaussRat, strip_sign: bool) -> String {
    let v = if strip_sign && is_negative(v) { v.neg() } else { v.clone() };
    if v.im.is_zero() {
        render_rational(&v.re)
    } else if v.re.is_zero() {
        if v.im.is_one() {
            "i".to_string()
        } else if (-v.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", render_rational(&v.im))
        }
    } else {
        format!("({} + {}*i)", render_rational(&v.re), render_rational(&v.im))
    }
}

fn is_negative(v: &GaussRat) -> bool {
    if !v.re.is_zero() {
        v.re.is_negative()
    } else {
        v.im.is_negative()
    }
}

/// Render one `coeff * word` term; returns the body and whether a leading
/// minus was factored out.
fn render_term(word: &Word, coeff: &Coeff) -> (String, bool) {
    let entries: Vec<(&(u32, u32), &GaussRat)> = coeff.terms().collect();
    let word_str = render_word(word);

    if entries.len() == 1 {
        let (&(h, t), v) = (entries[0].0, entries[0].1);
        let negative = is_negative(v);
        let mut factors: Vec<String> = Vec::new();
        let scalar = render_scalar(v, true);
        let unit_scalar = scalar == "1";
        if !unit_scalar || (h == 0 && t == 0 && word.is_empty()) {
            factors.push(scalar);
        }
        if t == 1 {
            factors.push("tau".to_string());
        } else if t > 1 {
            factors.push(format!("tau^{t}"));
        }
        if h == 1 {
            factors.push("hbar".to_string());
        } else if h > 1 {
            factors.push(format!("hbar^{h}"));
        }
        if !word.is_empty() {
            factors.push(word_str);
        }
        if factors.is_empty() {
            factors.push("1".to_string());
        }
        (factors.join("*"), negative)
    } else {
        // polynomial coefficient: parenthesize
        let mut body = String::new();
        for (idx, (&(h, t), v)) in entries.iter().enumerate() {
            let neg = is_negative(v);
            let scalar = render_scalar(v, true);
            let mut factors: Vec<String> = Vec::new();
            if scalar != "1" || (h == 0 && t == 0) {
                factors.push(scalar);
            }
            if t == 1 {
                factors.push("tau".to_string());
            } else if t > 1 {
                factors.push(format!("tau^{t}"));
            }
            if h == 1 {
                factors.push("hbar".to_string());
            } else if h > 1 {
                factors.push(format!("hbar^{h}"));
            }
            let piece = factors.join("*");
            if idx == 0 {
                if neg {
                    body.push('-');
                }
                body.push_str(&piece);
            } else if neg {
                let _ = write!(body, " - {piece}");
            } else {
                let _ = write!(body, " + {piece}");
            }
        }
        if word.is_empty() {
            (format!("({body})"), false)
        } else {
            (format!("({body})*{word_str}"), false)
        }
    }
}

/// The monomial ordering rules of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingRule {
    /// `(1/(n+1)) sum_k P^{n-k} X^m P^k`
    BornJordan,
    /// `(1/2^n) sum_k C(n,k) P^{n-k} X^m P^k`
    Weyl,
    /// `X^m P^n`
    KohnNirenberg,
    /// The tau-family, coefficients polynomial in `tau`; reduces to the
    /// others under integration/substitution.
    ShubinTau,
}

fn binomial(n: u32, k: u32) -> GaussRat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for idx in 0..k {
        num *= BigInt::from(n - idx);
        den *= BigInt::from(idx + 1);
    }
    GaussRat { re: BigRational::new(num, den), im: BigRational::zero() }
}

fn word_xp(j: u32, x_count: u32, p_count: u32) -> Word {
    let mut w = Vec::with_capacity((x_count + p_count) as usize);
    w.extend(std::iter::repeat_n(Letter::X(j), x_count as usize));
    w.extend(std::iter::repeat_n(Letter::P(j), p_count as usize));
    w
}

/// The literal sum prescribed by the ordering rule for `x_j^m p_j^n`,
/// before normal ordering. `ShubinTau` returns the position-side binomial
/// expansion ([`shubin_tau_position_expansion`]).
pub fn order_monomial(rule: OrderingRule, m: u32, n: u32, j: u32) -> NCPoly {
    match rule {
        OrderingRule::KohnNirenberg => NCPoly::term(word_xp(j, m, n), Coeff::one()),
        OrderingRule::BornJordan => {
            let mut acc = NCPoly::zero();
            let weight = Coeff::scalar(GaussRat::from_ratio(1, n as i64 + 1));
            for k in 0..=n {
                let mut w = Vec::new();
                w.extend(std::iter::repeat_n(Letter::P(j), (n - k) as usize));
                w.extend(std::iter::repeat_n(Letter::X(j), m as usize));
                w.extend(std::iter::repeat_n(Letter::P(j), k as usize));
                acc = acc.add(&NCPoly::term(w, weight.clone()));
            }
            acc
        }
        OrderingRule::Weyl => {
            let mut acc = NCPoly::zero();
            let half_pow = Coeff::scalar(GaussRat {
                re: BigRational::new(BigInt::one(), BigInt::from(2u64).pow(n)),
                im: BigRational::zero(),
            });
            for k in 0..=n {
                let mut w = Vec::new();
                w.extend(std::iter::repeat_n(Letter::P(j), (n - k) as usize));
                w.extend(std::iter::repeat_n(Letter::X(j), m as usize));
                w.extend(std::iter::repeat_n(Letter::P(j), k as usize));
                let c = half_pow.mul(&Coeff::scalar(binomial(n, k)));
                acc = acc.add(&NCPoly::term(w, c));
            }
            acc
        }
        OrderingRule::ShubinTau => shubin_tau_position_expansion(m, n, j),
    }
}

/// Position-side tau expansion:
/// `Op_tau(x^m p^n) = sum_k C(m,k) tau^k (1 - tau)^{m-k} X^k P^n X^{m-k}`.
pub fn shubin_tau_position_expansion(m: u32, n: u32, j: u32) -> NCPoly {
    let tau = Coeff::tau();
    let omt = Coeff::one_minus_tau();
    let mut acc = NCPoly::zero();
    for k in 0..=m {
        let mut w = Vec::new();
        w.extend(std::iter::repeat_n(Letter::X(j), k as usize));
        w.extend(std::iter::repeat_n(Letter::P(j), n as usize));
        w.extend(std::iter::repeat_n(Letter::X(j), (m - k) as usize));
        let c = Coeff::scalar(binomial(m, k))
            .mul(&tau.pow(k))
            .mul(&omt.pow(m - k));
        acc = acc.add(&NCPoly::term(w, c));
    }
    acc
}

/// Momentum-side tau expansion (with the `x^m` block, amending the printed
/// exponent):
/// `Op_tau(x^m p^n) = sum_k C(n,k) (1 - tau)^k tau^{n-k} P^k X^m P^{n-k}`.
pub fn shubin_tau_momentum_expansion(m: u32, n: u32, j: u32) -> NCPoly {
    let tau = Coeff::tau();
    let omt = Coeff::one_minus_tau();
    let mut acc = NCPoly::zero();
    for k in 0..=n {
        let mut w = Vec::new();
        w.extend(std::iter::repeat_n(Letter::P(j), k as usize));
        w.extend(std::iter::repeat_n(Letter::X(j), m as usize));
        w.extend(std::iter::repeat_n(Letter::P(j), (n - k) as usize));
        let c = Coeff::scalar(binomial(n, k))
            .mul(&omt.pow(k))
            .mul(&tau.pow(n - k));
        acc = acc.add(&NCPoly::term(w, c));
    }
    acc
}

/// Alternative Born-Jordan form `(1/(m+1)) sum_k X^k P^n X^{m-k}`.
pub fn born_jordan_position_form(m: u32, n: u32, j: u32) -> NCPoly {
    let mut acc = NCPoly::zero();
    let weight = Coeff::scalar(GaussRat::from_ratio(1, m as i64 + 1));
    for k in 0..=m {
        let mut w = Vec::new();
        w.extend(std::iter::repeat_n(Letter::X(j), k as usize));
        w.extend(std::iter::repeat_n(Letter::P(j), n as usize));
        w.extend(std::iter::repeat_n(Letter::X(j), (m - k) as usize));
        acc = acc.add(&NCPoly::term(w, weight.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn px_rewrites_to_xp_minus_i_hbar() {
        let px = NCPoly::p(1).multiply(&NCPoly::x(1));
        let nf = px.normal_form();
        let expect = NCPoly::x(1)
            .multiply(&NCPoly::p(1))
            .add(&NCPoly::term(Vec::new(), Coeff::monomial(GaussRat::i().neg(), 1, 0)));
        assert_eq!(nf, expect.normal_form());
        assert_eq!(nf.render(), "X P - i*hbar");
    }

    #[test]
    fn p2x2_normal_form() {
        let poly = NCPoly::p(1).pow(2).multiply(&NCPoly::x(1).pow(2));
        let nf = poly.normal_form();
        assert_eq!(nf.render(), "X^2 P^2 - 4*i*hbar*X P - 2*hbar^2");
        // idempotence
        assert_eq!(nf.normal_form(), nf);
    }

    #[test]
    fn distinct_dofs_commute() {
        let a = NCPoly::p(2).multiply(&NCPoly::x(1));
        let nf = a.normal_form();
        assert_eq!(nf.render(), "X P_2");
    }

    #[test]
    fn square_of_sum_expands() {
        let s = NCPoly::x(1).add(&NCPoly::p(1));
        let sq = s.multiply(&s);
        assert_eq!(sq.num_terms(), 4);
        let expect = NCPoly::x(1)
            .multiply(&NCPoly::x(1))
            .add(&NCPoly::x(1).multiply(&NCPoly::p(1)))
            .add(&NCPoly::p(1).multiply(&NCPoly::x(1)))
            .add(&NCPoly::p(1).multiply(&NCPoly::p(1)));
        assert_eq!(sq, expect);
    }

    #[test]
    fn ordering_rule_examples() {
        assert_eq!(
            order_monomial(OrderingRule::BornJordan, 1, 1, 1).render(),
            "(1/2)*(X P + P X)"
        );
        assert_eq!(
            order_monomial(OrderingRule::Weyl, 2, 2, 1).render(),
            "(1/4)*X^2 P^2 + (1/2)*P X^2 P + (1/4)*P^2 X^2"
        );
        assert_eq!(order_monomial(OrderingRule::KohnNirenberg, 2, 3, 1).render(), "X^2 P^3");
        // ShubinTau(1,1) collects to tau*XP + (1-tau)*PX
        let st = order_monomial(OrderingRule::ShubinTau, 1, 1, 1).normal_form();
        let expect = NCPoly::term(vec![Letter::X(1), Letter::P(1)], Coeff::tau())
            .add(&NCPoly::term(
                vec![Letter::P(1), Letter::X(1)],
                Coeff::one_minus_tau(),
            ))
            .normal_form();
        assert_eq!(st, expect);
    }

    #[test]
    fn tau_expansions_agree_after_normal_form() {
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let a = shubin_tau_position_expansion(m, n, 1).normal_form();
                let b = shubin_tau_momentum_expansion(m, n, 1).normal_form();
                assert_eq!(a, b, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn tau_integral_gives_born_jordan() {
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let lhs = shubin_tau_position_expansion(m, n, 1)
                    .integrate_tau()
                    .normal_form();
                let rhs = order_monomial(OrderingRule::BornJordan, m, n, 1).normal_form();
                assert_eq!(lhs, rhs, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn tau_substitutions_recover_endpoint_rules() {
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let st = shubin_tau_position_expansion(m, n, 1);
                let weyl = st.substitute_tau(&rat(1, 2)).normal_form();
                assert_eq!(
                    weyl,
                    order_monomial(OrderingRule::Weyl, m, n, 1).normal_form(),
                    "weyl m = {m}, n = {n}"
                );
                // tau = 1 gives x^m p^n (Kohn-Nirenberg); tau = 0 gives p^n x^m
                let kn = st.substitute_tau(&rat(1, 1)).normal_form();
                assert_eq!(
                    kn,
                    order_monomial(OrderingRule::KohnNirenberg, m, n, 1).normal_form(),
                    "kn m = {m}, n = {n}"
                );
                let anti = st.substitute_tau(&rat(0, 1)).normal_form();
                let mut w = Vec::new();
                w.extend(std::iter::repeat_n(Letter::P(1), n as usize));
                w.extend(std::iter::repeat_n(Letter::X(1), m as usize));
                assert_eq!(anti, NCPoly::term(w, Coeff::one()).normal_form());
            }
        }
    }

    #[test]
    fn born_jordan_symmetric_forms_coincide() {
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let a = order_monomial(OrderingRule::BornJordan, m, n, 1).normal_form();
                let b = born_jordan_position_form(m, n, 1).normal_form();
                assert_eq!(a, b, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn weyl_equals_born_jordan_exactly_below_degree_three() {
        // The rules coincide exactly when either exponent is at most one
        // (which covers every m + n <= 2 case); the first discrepancy is at
        // (2, 2). The difference operator is proportional to
        // [P, [P, X^m]] ~ hbar^2 m (m-1) X^{m-2}, so both exponents must
        // reach two before the orderings separate.
        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let w = order_monomial(OrderingRule::Weyl, m, n, 1).normal_form();
                let bj = order_monomial(OrderingRule::BornJordan, m, n, 1).normal_form();
                if m.min(n) <= 1 {
                    assert_eq!(w, bj, "m = {m}, n = {n} should coincide");
                } else {
                    assert_ne!(w, bj, "m = {m}, n = {n} should differ");
                }
            }
        }
        // the (2,2) difference is a pure hbar^2 constant
        let w = order_monomial(OrderingRule::Weyl, 2, 2, 1).normal_form();
        let bj = order_monomial(OrderingRule::BornJordan, 2, 2, 1).normal_form();
        let diff = w.sub(&bj).normal_form();
        assert_eq!(diff.num_terms(), 1);
        let (word, coeff) = diff.terms().next().unwrap();
        assert!(word.is_empty());
        let entries: Vec<_> = coeff.terms().collect();
        assert_eq!(entries.len(), 1);
        assert_eq!(*entries[0].0, (2u32, 0u32));
    }

    #[test]
    fn beta_coefficient_identity() {
        // Integral_0^1 C(n,k) (1-tau)^k tau^{n-k} dtau = 1/(n+1) for all k <= n
        for n in 0..=8u32 {
            for k in 0..=n {
                let c = Coeff::scalar(binomial(n, k))
                    .mul(&Coeff::one_minus_tau().pow(k))
                    .mul(&Coeff::tau().pow(n - k))
                    .integrate_tau();
                let expect = Coeff::scalar(GaussRat::from_ratio(1, n as i64 + 1));
                assert_eq!(c, expect, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn adjoint_rules() {
        // (x p)* = p x
        let xp = NCPoly::x(1).multiply(&NCPoly::p(1));
        assert_eq!(xp.formal_adjoint(), NCPoly::p(1).multiply(&NCPoly::x(1)));
        // Born-Jordan monomial operators are self-adjoint
        for m in 0..=4u32 {
            for n in 0..=4u32 {
                let bj = order_monomial(OrderingRule::BornJordan, m, n, 1);
                assert_eq!(bj.formal_adjoint().normal_form(), bj.normal_form());
            }
        }
        // adjoint of the tau family reflects tau
        for m in 0..=4u32 {
            for n in 0..=4u32 {
                let st = shubin_tau_position_expansion(m, n, 1);
                let lhs = st.formal_adjoint().normal_form();
                let rhs = st.reflect_tau().normal_form();
                assert_eq!(lhs, rhs, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn hbar_degree_stays_below_word_length() {
        for m in 1..=5u32 {
            for n in 1..=5u32 {
                let nf = NCPoly::p(1)
                    .pow(n)
                    .multiply(&NCPoly::x(1).pow(m))
                    .normal_form();
                assert!(nf.max_hbar_power() < (m + n), "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn spectral_bridge_rejects_tau_and_extra_dofs() {
        let g = GridSpec::new(16, -4.0, 4.0, 1.0).unwrap();
        let st = shubin_tau_position_expansion(1, 1, 1);
        assert!(matches!(st.to_spectral_operator(&g), Err(CoreError::ResidualTau)));
        let two = NCPoly::x(2);
        assert!(matches!(two.to_spectral_operator(&g), Err(CoreError::MultiDof(2))));
    }

    #[test]
    fn spectral_bridge_matches_elementary_composition() {
        let g = GridSpec::new(64, -8.0, 8.0, 1.0).unwrap();
        let xp = NCPoly::x(1).multiply(&NCPoly::p(1));
        let m = xp.to_spectral_operator(&g).unwrap();
        let xop = position_operator(&g);
        let pop = momentum_operator(&g);
        let expect = xop.compose(&pop).unwrap();
        assert!(m.frobenius_distance(&expect).unwrap() < 1e-12);
        // Weyl(1,1) is Hermitian
        let w = order_monomial(OrderingRule::Weyl, 1, 1, 1)
            .to_spectral_operator(&g)
            .unwrap();
        assert!(w.adjoint().frobenius_distance(&w).unwrap() < 1e-10);
    }

    fn arb_poly() -> impl Strategy<Value = NCPoly> {
        let letter = prop_oneof![
            Just(Letter::X(1)),
            Just(Letter::P(1)),
            Just(Letter::X(2)),
            Just(Letter::P(2)),
        ];
        let word = proptest::collection::vec(letter, 0..4);
        let coeff = (-4i64..5, 1i64..4)
            .prop_map(|(a, b)| Coeff::scalar(GaussRat::from_ratio(a, b)));
        proptest::collection::vec((word, coeff), 1..3).prop_map(|terms| {
            let mut acc = NCPoly::zero();
            for (w, c) in terms {
                acc = acc.add(&NCPoly::term(w, c));
            }
            acc
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn multiply_is_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let lhs = a.multiply(&b).multiply(&c);
            let rhs = a.multiply(&b.multiply(&c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn normal_form_is_idempotent(a in arb_poly()) {
            let nf = a.normal_form();
            prop_assert_eq!(nf.normal_form(), nf);
        }

        #[test]
        fn normal_form_respects_multiplication(a in arb_poly(), b in arb_poly()) {
            // normal_form(a b) == normal_form(normal_form(a) normal_form(b))
            let lhs = a.multiply(&b).normal_form();
            let rhs = a.normal_form().multiply(&b.normal_form()).normal_form();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
