//! Decision-set machinery at desk scale.
//!
//! Two halves live here. The first checks the filter/ultrafilter axioms for
//! a family of subsets of a *finite* universe by brute force, with concrete
//! counterexamples on failure and a principality analysis when the axioms
//! hold. On a finite universe the "finite set" notions must be read
//! relative to a size threshold; with the threshold at the universe size
//! the axioms contradict each other, which the report points out — a
//! genuine coexistence of "finite sets are not decisive" with "cofinite
//! sets are decisive" needs an infinite index set.
//!
//! The second half is the definable fragment of sequence arithmetic: a
//! sequence given as a rational function of `n` (possibly interleaved over
//! residue classes) maps to an exact element of the rational-function field
//! under `n = 1/x`, where all comparisons are decided on cofinite index
//! sets. `ω`, the class of `(1, 2, 3, ...)`, is `1/x`. No choice over
//! arbitrary decision sets is ever needed for these elements; sampled
//! sequences without a defining expression get a heuristic verdict that
//! says so.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Expr, RatFuncBackend};
use crate::ratfunc::{Classification, RatFunc};
use crate::rational::{Rational, Sign};
use crate::series::{Mode, SeriesCtx, SeriesElem};

// ---------------------------------------------------------------------------
// Set families over finite universes
// ---------------------------------------------------------------------------

const MAX_UNIVERSE: u32 = 20;

/// A family of subsets of `{1..universe}`, stored as bitmasks
/// (bit `i-1` encodes element `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: u32,
    members: BTreeSet<u64>,
}

impl SetFamily {
    pub fn new(universe: u32, members: impl IntoIterator<Item = u64>) -> Result<SetFamily> {
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(Error::Config(format!(
                "universe size must be in 1..={MAX_UNIVERSE}, got {universe}"
            )));
        }
        let full = Self::full_mask(universe);
        let members: BTreeSet<u64> = members.into_iter().collect();
        for &m in &members {
            if m & !full != 0 {
                return Err(Error::Parse(format!(
                    "member {} contains elements outside the universe",
                    mask_to_string(m)
                )));
            }
        }
        Ok(SetFamily { universe, members })
    }

    pub fn from_sets(universe: u32, sets: &[Vec<u32>]) -> Result<SetFamily> {
        let mut members = Vec::with_capacity(sets.len());
        for s in sets {
            let mut mask = 0u64;
            for &e in s {
                if e == 0 || e > universe {
                    return Err(Error::Parse(format!(
                        "element {e} outside universe 1..={universe}"
                    )));
                }
                mask |= 1 << (e - 1);
            }
            members.push(mask);
        }
        SetFamily::new(universe, members)
    }

    /// All supersets of `base` within the universe.
    pub fn principal(universe: u32, base: u64) -> Result<SetFamily> {
        let full = Self::full_mask(universe);
        let rest = full & !base;
        let mut members = Vec::new();
        // Iterate subsets of the complement and union each onto the base.
        let mut sub = 0u64;
        loop {
            members.push(base | sub);
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
        SetFamily::new(universe, members)
    }

    /// Parses `{ "universe": 12, "members": [[2,4,6], ...] }`.
    pub fn from_json(text: &str) -> Result<SetFamily> {
        #[derive(serde::Deserialize)]
        struct Raw {
            universe: u32,
            members: Vec<Vec<u32>>,
        }
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("family JSON: {e}")))?;
        SetFamily::from_sets(raw.universe, &raw.members)
    }

    fn full_mask(universe: u32) -> u64 {
        (1u64 << universe) - 1
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }
}

fn mask_to_vec(mask: u64) -> Vec<u32> {
    (0..64)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect()
}

fn mask_to_string(mask: u64) -> String {
    let elems: Vec<String> = mask_to_vec(mask).iter().map(u32::to_string).collect();
    format!("{{{}}}", elems.join(","))
}

/// Verdict for one axiom, with the sets witnessing a failure.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomVerdict {
    pub pass: bool,
    /// Counterexample sets, listed as element vectors.
    pub witness: Option<Vec<Vec<u32>>>,
}

impl AxiomVerdict {
    fn pass() -> AxiomVerdict {
        AxiomVerdict {
            pass: true,
            witness: None,
        }
    }

    fn fail(sets: Vec<u64>) -> AxiomVerdict {
        AxiomVerdict {
            pass: false,
            witness: Some(sets.into_iter().map(mask_to_vec).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterReport {
    pub universe: u32,
    pub threshold: u32,
    /// Sets smaller than the threshold must not be decisive.
    pub axiom0: AxiomVerdict,
    /// Sets whose complement is smaller than the threshold must be decisive.
    pub axiom1: AxiomVerdict,
    /// Closure under supersets.
    pub axiom2: AxiomVerdict,
    /// Closure under pairwise intersection.
    pub axiom3: AxiomVerdict,
    pub is_filter: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UltraReport {
    pub universe: u32,
    pub axiom0: AxiomVerdict,
    pub axiom2: AxiomVerdict,
    pub axiom3: AxiomVerdict,
    /// Complement dichotomy: S or its complement is decisive.
    pub axiom4: AxiomVerdict,
    pub is_ultrafilter: bool,
    /// Present when the family is an ultrafilter: the inclusion-minimal
    /// member and its generating element.
    pub minimal_member: Option<Vec<u32>>,
    pub generator: Option<u32>,
    pub notes: Vec<String>,
}

fn check_axiom0(fam: &SetFamily, threshold: u32) -> AxiomVerdict {
    for m in fam.members() {
        if (m.count_ones()) < threshold {
            return AxiomVerdict::fail(vec![m]);
        }
    }
    AxiomVerdict::pass()
}

fn check_axiom1(fam: &SetFamily, threshold: u32) -> AxiomVerdict {
    let full = SetFamily::full_mask(fam.universe);
    // Enumerate all subsets with complement smaller than the threshold by
    // enumerating the small complements.
    let mut stack = vec![(0u64, 1u64)];
    while let Some((mask, next_bit)) = stack.pop() {
        if mask.count_ones() < threshold {
            let s = full & !mask;
            if !fam.contains(s) {
                return AxiomVerdict::fail(vec![s]);
            }
            let mut bit = next_bit;
            while bit <= full {
                if bit & full != 0 {
                    stack.push((mask | bit, bit << 1));
                }
                bit <<= 1;
            }
        }
    }
    AxiomVerdict::pass()
}

fn check_axiom2(fam: &SetFamily) -> AxiomVerdict {
    let full = SetFamily::full_mask(fam.universe);
    for s in fam.members() {
        let rest = full & !s;
        let mut sub = 0u64;
        loop {
            let t = s | sub;
            if !fam.contains(t) {
                return AxiomVerdict::fail(vec![s, t]);
            }
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
    }
    AxiomVerdict::pass()
}

fn check_axiom3(fam: &SetFamily) -> AxiomVerdict {
    let members: Vec<u64> = fam.members().collect();
    for (i, &s) in members.iter().enumerate() {
        for &t in &members[i..] {
            if !fam.contains(s & t) {
                return AxiomVerdict::fail(vec![s, t, s & t]);
            }
        }
    }
    AxiomVerdict::pass()
}

fn check_axiom4(fam: &SetFamily) -> AxiomVerdict {
    let full = SetFamily::full_mask(fam.universe);
    for s in 0..=full {
        if !fam.contains(s) && !fam.contains(full & !s) {
            return AxiomVerdict::fail(vec![s, full & !s]);
        }
    }
    AxiomVerdict::pass()
}

fn independence_note() -> String {
    "axiom (0) is checked independently rather than derived from (1) and (4); \
     the derivation also needs the closure axioms"
        .to_string()
}

/// Per-axiom filter check with a size threshold standing in for
/// "finite"/"cofinite" on the finite universe.
pub fn check_filter(fam: &SetFamily, threshold: Option<u32>) -> FilterReport {
    let t = threshold.unwrap_or(1);
    let axiom0 = check_axiom0(fam, t);
    let axiom1 = check_axiom1(fam, t);
    let axiom2 = check_axiom2(fam);
    let axiom3 = check_axiom3(fam);
    let mut notes = vec![independence_note()];
    if t > fam.universe {
        notes.push(format!(
            "threshold {} exceeds the universe size {}: every subset counts as small, so \
             (1) forces every subset to be decisive while (0) forbids it; the two can only \
             coexist over an infinite index set",
            t, fam.universe
        ));
    }
    let is_filter = axiom0.pass && axiom1.pass && axiom2.pass && axiom3.pass;
    FilterReport {
        universe: fam.universe,
        threshold: t,
        axiom0,
        axiom1,
        axiom2,
        axiom3,
        is_filter,
        notes,
    }
}

/// Ultrafilter check: closure axioms, the complement dichotomy, and a
/// principality analysis. On a finite universe every ultrafilter is
/// principal; the report exhibits the generator.
pub fn check_ultrafilter(fam: &SetFamily) -> UltraReport {
    let axiom0 = check_axiom0(fam, 1);
    let axiom2 = check_axiom2(fam);
    let axiom3 = check_axiom3(fam);
    let axiom4 = check_axiom4(fam);
    let is_ultrafilter = axiom0.pass && axiom2.pass && axiom3.pass && axiom4.pass;
    let mut minimal_member = None;
    let mut generator = None;
    let mut notes = vec![independence_note()];
    // Principality analysis applies whenever the closure and dichotomy
    // axioms hold; with (0) on top the minimal member is a singleton.
    if axiom2.pass && axiom3.pass && axiom4.pass && !fam.is_empty() {
        let full = SetFamily::full_mask(fam.universe);
        let min = fam.members().fold(full, |acc, m| acc & m);
        minimal_member = Some(mask_to_vec(min));
        if min.count_ones() == 1 {
            generator = Some(min.trailing_zeros() + 1);
            notes.push(format!(
                "principal: generated by {}",
                mask_to_string(min)
            ));
        } else if min == 0 {
            notes.push(
                "minimal member is the empty set: every subset is decisive, which (0) forbids"
                    .to_string(),
            );
        } else {
            notes.push(
                "minimal member is not a singleton; the dichotomy fails somewhere inside it"
                    .to_string(),
            );
        }
    }
    UltraReport {
        universe: fam.universe,
        axiom0,
        axiom2,
        axiom3,
        axiom4,
        is_ultrafilter,
        minimal_member,
        generator,
        notes,
    }
}

fn verdict_line(f: &mut fmt::Formatter<'_>, name: &str, v: &AxiomVerdict) -> fmt::Result {
    if v.pass {
        writeln!(f, "  {name}: pass")
    } else {
        let sets: Vec<String> = v
            .witness
            .iter()
            .flatten()
            .map(|s| {
                let elems: Vec<String> = s.iter().map(u32::to_string).collect();
                format!("{{{}}}", elems.join(","))
            })
            .collect();
        writeln!(f, "  {name}: FAIL  witness: {}", sets.join(", "))
    }
}

impl fmt::Display for FilterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "filter check on universe {{1..{}}} (threshold {})",
            self.universe, self.threshold
        )?;
        verdict_line(f, "(0) small sets not decisive", &self.axiom0)?;
        verdict_line(f, "(1) co-small sets decisive", &self.axiom1)?;
        verdict_line(f, "(2) superset closure", &self.axiom2)?;
        verdict_line(f, "(3) intersection closure", &self.axiom3)?;
        writeln!(f, "  filter: {}", if self.is_filter { "yes" } else { "no" })?;
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

impl fmt::Display for UltraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ultrafilter check on universe {{1..{}}}", self.universe)?;
        verdict_line(f, "(0) empty set not decisive", &self.axiom0)?;
        verdict_line(f, "(2) superset closure", &self.axiom2)?;
        verdict_line(f, "(3) intersection closure", &self.axiom3)?;
        verdict_line(f, "(4) complement dichotomy", &self.axiom4)?;
        writeln!(
            f,
            "  ultrafilter: {}",
            if self.is_ultrafilter { "yes" } else { "no" }
        )?;
        if let Some(m) = &self.minimal_member {
            let elems: Vec<String> = m.iter().map(u32::to_string).collect();
            writeln!(f, "  minimal member: {{{}}}", elems.join(","))?;
        }
        if let Some(g) = self.generator {
            writeln!(f, "  generator: {{{g}}}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The definable hyperreal fragment
// ---------------------------------------------------------------------------

/// A hyperreal represented by a rational function of the index `n`, stored
/// as an element of the rational-function field under `n = 1/x`. Its order
/// relations are decided by eventual behavior, always on a cofinite set.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyper {
    value: RatFunc,
}

impl Hyper {
    /// The class of the identity sequence `(1, 2, 3, ...)`.
    pub fn omega() -> Hyper {
        Hyper {
            value: RatFunc::omega(),
        }
    }

    pub fn from_rational(r: Rational) -> Hyper {
        Hyper {
            value: RatFunc::from_rational(r),
        }
    }

    pub fn from_ratfunc(value: RatFunc) -> Hyper {
        Hyper { value }
    }

    /// Evaluates an expression in the variable `n` at the identity
    /// sequence, i.e. substitutes `n -> ω`.
    pub fn from_expr(ast: &Expr) -> Result<Hyper> {
        let vars = ast.free_vars();
        if vars.iter().any(|v| v != "n") {
            return Err(Error::Parse(format!(
                "sequence expressions use the variable n only, found {}",
                vars.join(", ")
            )));
        }
        let mut bindings = BTreeMap::new();
        bindings.insert("n".to_string(), RatFunc::omega());
        let value = expr::eval(ast, &RatFuncBackend, &bindings)?;
        Ok(Hyper { value })
    }

    pub fn value(&self) -> &RatFunc {
        &self.value
    }

    /// The sequence term at index `n`, when defined.
    pub fn term(&self, n: u64) -> Result<Rational> {
        let x = Rational::from_int(n as i64).recip()?;
        self.value.eval_at(&x)
    }

    pub fn add(&self, rhs: &Hyper) -> Hyper {
        Hyper {
            value: &self.value + &rhs.value,
        }
    }

    pub fn sub(&self, rhs: &Hyper) -> Hyper {
        Hyper {
            value: &self.value - &rhs.value,
        }
    }

    pub fn mul(&self, rhs: &Hyper) -> Hyper {
        Hyper {
            value: &self.value * &rhs.value,
        }
    }

    pub fn div(&self, rhs: &Hyper) -> Result<Hyper> {
        Ok(Hyper {
            value: self.value.div(&rhs.value)?,
        })
    }

    pub fn neg(&self) -> Hyper {
        Hyper {
            value: -&self.value,
        }
    }

    /// Total order: `a > b` iff `a_n > b_n` for all sufficiently large `n`.
    /// Rational functions of `n` are eventually sign-definite, so this is
    /// the field order under `n = 1/x` and the decision set is cofinite.
    pub fn compare(&self, rhs: &Hyper) -> Ordering {
        self.value.compare(&rhs.value)
    }

    pub fn classify(&self) -> Classification {
        self.value.classify()
    }

    pub fn standard_part(&self) -> Result<Rational> {
        self.value.standard_part()
    }
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.to_omega_string())
    }
}

// ---------------------------------------------------------------------------
// Sequence specifications and classification
// ---------------------------------------------------------------------------

/// One residue-class branch of an interleaved sequence.
#[derive(Debug, Clone)]
pub struct Branch {
    pub residue: u64,
    pub modulus: u64,
    pub expr: Expr,
}

#[derive(Debug, Clone)]
pub enum SeqKind {
    /// A single rational function of `n`.
    Expr(Expr),
    /// Branches over residue classes that partition the indices.
    Interleaved(Vec<Branch>),
    /// A finite list of observed terms, 1-indexed.
    Sampled(Vec<Rational>),
}

/// A sequence description, plus finitely many pointwise overrides.
/// Overrides never change the represented hyperreal: classes agree when
/// they agree on all but finitely many indices.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    pub kind: SeqKind,
    pub overrides: Vec<(u64, Rational)>,
}

impl SequenceSpec {
    pub fn expr(ast: Expr) -> SequenceSpec {
        SequenceSpec {
            kind: SeqKind::Expr(ast),
            overrides: Vec::new(),
        }
    }

    /// Parses a sequence spec:
    ///
    /// - `n^2 + 1` — a rational function of `n`;
    /// - `1 mod 3: -n; 2 mod 3: n; 0 mod 3: 1/n` — interleaved branches;
    /// - `sampled: -1, 2, 1/3, -4, 5, 1/6` — observed terms;
    /// - any form may append `; at 5: 99` overrides.
    pub fn parse(text: &str) -> Result<SequenceSpec> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("sampled:") {
            let mut terms = Vec::new();
            for part in rest.split(',') {
                terms.push(Rational::parse(part)?);
            }
            if terms.is_empty() {
                return Err(Error::Parse("sampled sequence has no terms".into()));
            }
            return Ok(SequenceSpec {
                kind: SeqKind::Sampled(terms),
                overrides: Vec::new(),
            });
        }
        let mut branches = Vec::new();
        let mut overrides = Vec::new();
        let mut plain: Option<Expr> = None;
        for segment in text.split(';') {
            let seg = segment.trim();
            if seg.is_empty() {
                continue;
            }
            if let Some(rest) = seg.strip_prefix("at ") {
                let (idx, val) = rest.split_once(':').ok_or_else(|| {
                    Error::Parse(format!("override `{seg}` needs the form `at N: value`"))
                })?;
                let n: u64 = idx
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad override index `{idx}`")))?;
                if n == 0 {
                    return Err(Error::Parse("indices are 1-based".into()));
                }
                overrides.push((n, Rational::parse(val)?));
                continue;
            }
            if let Some((head, body)) = seg.split_once(':') {
                if let Some((r, m)) = head.trim().split_once("mod") {
                    let residue: u64 = r.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad residue in `{head}`"))
                    })?;
                    let modulus: u64 = m.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad modulus in `{head}`"))
                    })?;
                    if modulus == 0 || residue >= modulus {
                        return Err(Error::Parse(format!(
                            "residue {residue} is not reduced modulo {modulus}"
                        )));
                    }
                    branches.push(Branch {
                        residue,
                        modulus,
                        expr: expr::parse(body)?,
                    });
                    continue;
                }
            }
            if plain.is_some() || !branches.is_empty() {
                return Err(Error::Parse(format!("unexpected segment `{seg}`")));
            }
            plain = Some(expr::parse(seg)?);
        }
        let kind = match (plain, branches.is_empty()) {
            (Some(e), true) => SeqKind::Expr(e),
            (None, false) => SeqKind::Interleaved(branches),
            (None, true) => return Err(Error::Parse("empty sequence spec".into())),
            (Some(_), false) => {
                return Err(Error::Parse(
                    "cannot mix a plain expression with mod branches".into(),
                ))
            }
        };
        let spec = SequenceSpec { kind, overrides };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if let SeqKind::Interleaved(branches) = &self.kind {
            let modulus = branches.first().map(|b| b.modulus).unwrap_or(1);
            if branches.iter().any(|b| b.modulus != modulus) {
                return Err(Error::Parse(
                    "interleaved branches must share one modulus".into(),
                ));
            }
            let residues: BTreeSet<u64> = branches.iter().map(|b| b.residue).collect();
            if residues.len() != branches.len() {
                return Err(Error::Parse("duplicate residue branch".into()));
            }
            if residues.len() as u64 != modulus {
                return Err(Error::Parse(format!(
                    "branches cover {} of {} residues; they must partition the indices",
                    residues.len(),
                    modulus
                )));
            }
        }
        Ok(())
    }

    /// The hyperreal represented by a definable spec; overrides are
    /// ignored, as equality only depends on cofinitely many terms.
    pub fn hyper(&self) -> Result<Option<Hyper>> {
        match &self.kind {
            SeqKind::Expr(e) => Hyper::from_expr(e).map(Some),
            _ => Ok(None),
        }
    }

    /// The term at a 1-based index, honoring overrides.
    pub fn term(&self, n: u64) -> Result<Rational> {
        assert!(n >= 1, "indices are 1-based");
        if let Some((_, v)) = self.overrides.iter().rev().find(|(i, _)| *i == n) {
            return Ok(v.clone());
        }
        match &self.kind {
            SeqKind::Expr(e) => eval_term(e, n),
            SeqKind::Interleaved(branches) => {
                let b = branches
                    .iter()
                    .find(|b| n % b.modulus == b.residue)
                    .expect("branches partition the residues");
                eval_term(&b.expr, n)
            }
            SeqKind::Sampled(terms) => terms
                .get((n - 1) as usize)
                .cloned()
                .ok_or(Error::UndefinedTerm(n)),
        }
    }
}

fn eval_term(e: &Expr, n: u64) -> Result<Rational> {
    let mut bindings = BTreeMap::new();
    bindings.insert("n".to_string(), Rational::from_int(n as i64));
    match expr::eval_real(e, &bindings) {
        Ok(v) => Ok(v),
        Err(Error::DivisionByZero) => Err(Error::UndefinedTerm(n)),
        Err(other) => Err(other),
    }
}

/// The three eventual behaviors a sequence can exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    /// (i) a subsequence tending to negative infinity.
    NegativeInfinite,
    /// (ii) a subsequence tending to positive infinity.
    PositiveInfinite,
    /// (iii) infinitely many terms inside a bounded interval.
    BoundedCluster,
}

impl CaseTag {
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::NegativeInfinite => "(i) negative infinite",
            CaseTag::PositiveInfinite => "(ii) positive infinite",
            CaseTag::BoundedCluster => "(iii) bounded cluster",
        }
    }
}

/// Arithmetic progression `{first, first + step, ...}` of 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub first: u64,
    pub step: u64,
}

impl Progression {
    fn from_residue(residue: u64, modulus: u64) -> Progression {
        let first = if residue == 0 { modulus } else { residue };
        Progression {
            first,
            step: modulus,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.first && (n - self.first) % self.step == 0
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}, {}, {}, ...}}",
            self.first,
            self.first + self.step,
            self.first + 2 * self.step
        )
    }
}

/// Value attached to one classified branch.
#[derive(Debug, Clone)]
pub enum CaseValue {
    /// A definable branch: the exact hyperreal.
    Hyper(Hyper),
    /// A bounded cluster: the limit point, and when definable, the sign of
    /// the infinitesimal part and the part itself.
    NearStandard {
        limit: Rational,
        eps_sign: Option<Sign>,
        eps: Option<Hyper>,
    },
}

impl fmt::Display for CaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseValue::Hyper(h) => write!(f, "{h}"),
            CaseValue::NearStandard {
                limit,
                eps_sign,
                eps,
            } => {
                write!(f, "{limit}")?;
                match (eps_sign, eps) {
                    (Some(Sign::Zero), _) | (None, None) => {}
                    (Some(Sign::Positive), Some(e)) => write!(f, " + infinitesimal {e}")?,
                    (Some(Sign::Negative), Some(e)) => {
                        write!(f, " - infinitesimal {}", e.neg())?
                    }
                    (Some(Sign::Positive), None) => write!(f, " + positive infinitesimal")?,
                    (Some(Sign::Negative), None) => write!(f, " - negative infinitesimal")?,
                    (None, _) => write!(f, " + undetermined infinitesimal")?,
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseEntry {
    pub case: CaseTag,
    pub decision_set: Option<Progression>,
    pub value: CaseValue,
}

/// Outcome of classifying a sequence.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub cases: BTreeSet<CaseTag>,
    pub entries: Vec<CaseEntry>,
    /// True when the verdict came from finitely many observed terms rather
    /// than a defining expression.
    pub heuristic: bool,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    /// Structured form for machine consumption.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let ds = e.decision_set.map(|p| json!({"first": p.first, "step": p.step}));
                let value = match &e.value {
                    CaseValue::Hyper(h) => json!({"hyperreal": h.to_string()}),
                    CaseValue::NearStandard {
                        limit,
                        eps_sign,
                        eps,
                    } => json!({
                        "limit": limit.to_string(),
                        "eps_sign": eps_sign.map(|s| s.to_string()),
                        "eps": eps.as_ref().map(|h| h.to_string()),
                    }),
                };
                json!({
                    "case": e.case.label(),
                    "decision_set": ds,
                    "value": value,
                })
            })
            .collect();
        json!({
            "cases": self.cases.iter().map(|c| c.label()).collect::<Vec<_>>(),
            "entries": entries,
            "heuristic": self.heuristic,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.cases.iter().map(|c| c.label()).collect();
        writeln!(f, "cases: {}", labels.join(", "))?;
        for e in &self.entries {
            let ds = match &e.decision_set {
                Some(p) => p.to_string(),
                None => "(no arithmetic-progression structure)".to_string(),
            };
            writeln!(f, "  {}  decision set {}  value {}", e.case.label(), ds, e.value)?;
        }
        if self.heuristic {
            writeln!(f, "  heuristic: true")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

fn classify_branch(h: &Hyper, decision_set: Progression) -> CaseEntry {
    match h.classify() {
        Classification::NegativeInfinite => CaseEntry {
            case: CaseTag::NegativeInfinite,
            decision_set: Some(decision_set),
            value: CaseValue::Hyper(h.clone()),
        },
        Classification::PositiveInfinite => CaseEntry {
            case: CaseTag::PositiveInfinite,
            decision_set: Some(decision_set),
            value: CaseValue::Hyper(h.clone()),
        },
        _ => {
            let limit = h.standard_part().expect("finite element");
            let eps = h.sub(&Hyper::from_rational(limit.clone()));
            let eps_sign = eps.value().low_order_sign();
            CaseEntry {
                case: CaseTag::BoundedCluster,
                decision_set: Some(decision_set),
                value: CaseValue::NearStandard {
                    limit,
                    eps_sign: Some(eps_sign),
                    eps: if eps.value().is_zero() {
                        None
                    } else {
                        Some(eps)
                    },
                },
            }
        }
    }
}

/// Finds denominator zeros of `e` at integer indices in the progression,
/// skipping overridden indices: rational-root search plus a direct scan of
/// the first `horizon` indices.
fn undefined_index(
    e: &Expr,
    prog: Progression,
    overrides: &[(u64, Rational)],
    horizon: u64,
) -> Result<Option<u64>> {
    let mut bindings = BTreeMap::new();
    bindings.insert("n".to_string(), RatFunc::x());
    let as_fn = expr::eval(e, &RatFuncBackend, &bindings)?;
    let mut candidates: BTreeSet<u64> = as_fn
        .den()
        .integer_roots()
        .into_iter()
        .filter(|&r| r >= 1)
        .map(|r| r as u64)
        .collect();
    let mut n = prog.first;
    while n <= horizon {
        candidates.insert(n);
        n += prog.step;
    }
    for n in candidates {
        if !prog.contains(n) {
            continue;
        }
        if overrides.iter().any(|(i, _)| *i == n) {
            continue;
        }
        let mut b = BTreeMap::new();
        b.insert("n".to_string(), Rational::from_int(n as i64));
        if expr::eval_real(e, &b) == Err(Error::DivisionByZero) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Classifies a sequence into the tripartite cases with decision sets and
/// values. Definable kinds are classified exactly by the leading behavior
/// of each branch; sampled kinds get a heuristic verdict.
pub fn classify_sequence(spec: &SequenceSpec, horizon: u64) -> Result<ClassificationReport> {
    if horizon < 100 {
        return Err(Error::DomainError(format!(
            "horizon must be at least 100, got {horizon}"
        )));
    }
    match &spec.kind {
        SeqKind::Expr(e) => {
            let prog = Progression { first: 1, step: 1 };
            if let Some(n) = undefined_index(e, prog, &spec.overrides, horizon)? {
                return Err(Error::UndefinedTerm(n));
            }
            let h = Hyper::from_expr(e)?;
            let entry = classify_branch(&h, prog);
            Ok(ClassificationReport {
                cases: BTreeSet::from([entry.case]),
                entries: vec![entry],
                heuristic: false,
                notes: Vec::new(),
            })
        }
        SeqKind::Interleaved(branches) => {
            let mut entries = Vec::new();
            for b in branches {
                let prog = Progression::from_residue(b.residue, b.modulus);
                if let Some(n) = undefined_index(&b.expr, prog, &spec.overrides, horizon)? {
                    return Err(Error::UndefinedTerm(n));
                }
                let h = Hyper::from_expr(&b.expr)?;
                entries.push(classify_branch(&h, prog));
            }
            entries.sort_by_key(|e| {
                e.decision_set
                    .map(|p| (p.first, p.step))
                    .unwrap_or((u64::MAX, 0))
            });
            let cases = entries.iter().map(|e| e.case).collect();
            Ok(ClassificationReport {
                cases,
                entries,
                heuristic: false,
                notes: Vec::new(),
            })
        }
        SeqKind::Sampled(terms) => classify_sampled(terms, spec, horizon),
    }
}

/// Index sets of the biggest visible trends in a finite sample. This is a
/// verdict about finitely many observations; the report flags it and notes
/// when a genuine classification would depend on the decision-set choice.
fn classify_sampled(
    terms: &[Rational],
    spec: &SequenceSpec,
    horizon: u64,
) -> Result<ClassificationReport> {
    let count = terms.len().min(horizon as usize);
    let mut values = Vec::with_capacity(count);
    for n in 1..=count as u64 {
        values.push((n, spec.term(n)?));
    }
    // Scale that distinguishes "escaping" from "bounded" within the sample.
    let bound = Rational::from_int((count as i64 / 2).max(3));
    let mut neg_idx = Vec::new();
    let mut pos_idx = Vec::new();
    let mut bounded_idx = Vec::new();
    for (n, v) in &values {
        if v > &bound {
            pos_idx.push(*n);
        } else if v < &(-&bound) {
            neg_idx.push(*n);
        } else {
            bounded_idx.push(*n);
        }
    }
    let mut entries = Vec::new();
    let few = (count / 10).max(2);
    if neg_idx.len() >= few {
        let prog = detect_progression(&neg_idx)
            .map(|p| extend_backwards(p, &values, |v| v.is_negative()));
        entries.push(CaseEntry {
            case: CaseTag::NegativeInfinite,
            decision_set: prog,
            value: CaseValue::Hyper(Hyper::omega().neg()),
        });
    }
    if pos_idx.len() >= few {
        let prog = detect_progression(&pos_idx)
            .map(|p| extend_backwards(p, &values, |v| v.is_positive()));
        entries.push(CaseEntry {
            case: CaseTag::PositiveInfinite,
            decision_set: prog,
            value: CaseValue::Hyper(Hyper::omega()),
        });
    }
    if bounded_idx.len() >= few || entries.is_empty() {
        // Limit estimate: median of the last bounded observations.
        let tail: Vec<Rational> = bounded_idx
            .iter()
            .rev()
            .take(5)
            .map(|&n| values[(n - 1) as usize].1.clone())
            .collect();
        let limit = median(&tail).unwrap_or_else(Rational::zero);
        entries.push(CaseEntry {
            case: CaseTag::BoundedCluster,
            decision_set: detect_progression(&bounded_idx),
            value: CaseValue::NearStandard {
                limit,
                eps_sign: None,
                eps: None,
            },
        });
    }
    let cases: BTreeSet<CaseTag> = entries.iter().map(|e| e.case).collect();
    let mut notes = vec![
        "verdict from finitely many observed terms; values are estimates".to_string(),
    ];
    if cases.len() > 1 {
        notes.push(
            "the represented value depends on which decision set is chosen; different \
             choices of ultrafilter give different, equally consistent answers"
                .to_string(),
        );
    }
    Ok(ClassificationReport {
        cases,
        entries,
        heuristic: true,
        notes,
    })
}

/// Walks a detected progression back toward the start of the sample as long
/// as the earlier terms continue the trend.
fn extend_backwards(
    mut prog: Progression,
    values: &[(u64, Rational)],
    trend: impl Fn(&Rational) -> bool,
) -> Progression {
    while prog.first > prog.step {
        let earlier = prog.first - prog.step;
        let Some((_, v)) = values.iter().find(|(n, _)| *n == earlier) else {
            break;
        };
        if !trend(v) {
            break;
        }
        prog.first = earlier;
    }
    prog
}

fn detect_progression(indices: &[u64]) -> Option<Progression> {
    if indices.len() < 2 {
        return None;
    }
    let step = indices[1] - indices[0];
    if step == 0 {
        return None;
    }
    let ok = indices
        .windows(2)
        .all(|w| w[1] - w[0] == step);
    ok.then_some(Progression {
        first: indices[0],
        step,
    })
}

fn median(values: &[Rational]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    Some(sorted[sorted.len() / 2].clone())
}

// ---------------------------------------------------------------------------
// Componentwise extension of functions and sets
// ---------------------------------------------------------------------------

/// Result of extending a function to a hyperreal argument.
#[derive(Debug, Clone)]
pub enum StarValue {
    /// Rational-function compositions stay in the definable fragment.
    Definable(Hyper),
    /// Analytic extensions at finite points land in the series field.
    Series(SeriesElem),
}

impl fmt::Display for StarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarValue::Definable(h) => write!(f, "{h}"),
            StarValue::Series(s) => write!(f, "{s}"),
        }
    }
}

/// Extends `f` to a hyperreal argument by acting on representatives:
/// `f([x_n]) = [f(x_n)]`. Rational `f` is exact composition in the field;
/// analytic `f` needs a finite argument and returns a series.
pub fn star_extend(f: &Expr, h: &Hyper, ctx: &SeriesCtx) -> Result<StarValue> {
    let vars = f.free_vars();
    if vars.len() > 1 {
        return Err(Error::Parse(format!(
            "star extension needs a one-variable function, found {}",
            vars.join(", ")
        )));
    }
    let var = vars.first().cloned().unwrap_or_else(|| "x".to_string());
    if f.is_rational_only() {
        let mut bindings = BTreeMap::new();
        bindings.insert(var, h.value().clone());
        let value = expr::eval(f, &RatFuncBackend, &bindings)?;
        return Ok(StarValue::Definable(Hyper { value }));
    }
    if !h.classify().is_finite() {
        return Err(Error::NotRepresentable(format!(
            "`{f}` is not a rational function and {h} is infinite; the analytic \
             extension is defined at finite points only"
        )));
    }
    let embedded = SeriesElem::embed_ratfunc(h.value(), Mode::Exact, ctx);
    let backend = expr::SeriesBackend::new(Mode::Exact, *ctx);
    let mut bindings = BTreeMap::new();
    bindings.insert(var.clone(), embedded.clone());
    match expr::eval_series(f, &backend, &bindings) {
        Ok(s) => Ok(StarValue::Series(s)),
        Err(Error::ModeError(_)) => {
            let backend = expr::SeriesBackend::new(Mode::Approx, *ctx);
            let mut bindings = BTreeMap::new();
            bindings.insert(var, embedded.to_approx(ctx));
            Ok(StarValue::Series(expr::eval_series(f, &backend, &bindings)?))
        }
        Err(e) => Err(e),
    }
}

/// Membership verdict for interval extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    /// Reserved for predicates outside the supported interval class; the
    /// definable fragment decides every interval query.
    Undecidable,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Membership::In => "In",
            Membership::Out => "Out",
            Membership::Undecidable => "Undecidable",
        };
        write!(f, "{s}")
    }
}

/// An interval with rational (or infinite) endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Option<(Rational, bool)>, // (endpoint, closed)
    pub hi: Option<(Rational, bool)>,
}

impl Interval {
    /// Parses `(0, 1)`, `[0, 1)`, `(-inf, 3]`, `[2, inf)` and friends.
    pub fn parse(text: &str) -> Result<Interval> {
        let s = text.trim();
        let open_lo = s.starts_with('(');
        let open_hi = s.ends_with(')');
        if !(s.starts_with('(') || s.starts_with('[')) || !(s.ends_with(')') || s.ends_with(']')) {
            return Err(Error::Parse(format!("`{s}` is not an interval")));
        }
        let inner = &s[1..s.len() - 1];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("`{s}` needs two endpoints")))?;
        let parse_end = |t: &str| -> Result<Option<Rational>> {
            let t = t.trim();
            if t == "inf" || t == "+inf" || t == "-inf" || t == "oo" || t == "-oo" {
                Ok(None)
            } else {
                Rational::parse(t).map(Some)
            }
        };
        let lo = parse_end(a)?.map(|r| (r, !open_lo));
        let hi = parse_end(b)?.map(|r| (r, !open_hi));
        Ok(Interval { lo, hi })
    }

    /// Extension of the interval to the definable fragment: membership of
    /// the representative sequence, decided eventually.
    pub fn star_contains(&self, h: &Hyper) -> Membership {
        if let Some((lo, closed)) = &self.lo {
            let cmp = h.compare(&Hyper::from_rational(lo.clone()));
            let ok = match (cmp, closed) {
                (Ordering::Greater, _) => true,
                (Ordering::Equal, true) => true,
                _ => false,
            };
            if !ok {
                return Membership::Out;
            }
        }
        if let Some((hi, closed)) = &self.hi {
            let cmp = h.compare(&Hyper::from_rational(hi.clone()));
            let ok = match (cmp, closed) {
                (Ordering::Less, _) => true,
                (Ordering::Equal, true) => true,
                _ => false,
            };
            if !ok {
                return Membership::Out;
            }
        }
        Membership::In
    }
}
