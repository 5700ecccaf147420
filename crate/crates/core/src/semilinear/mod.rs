//! One- and two-sided semilinear subsets of the integers.
//!
//! A semilinear set is a finite set of *exceptional* integers together with
//! finitely many arithmetic progressions `a + bZ`. Two-sided progressions run
//! over all integers; one-sided progressions are read as `{n >= 0 : n = a mod b}`,
//! so a one-sided set never contains a negative integer.
//!
//! Every set returned by an operation here is in canonical form: offsets are
//! reduced into `[0, modulus)`, the progressions are exactly the maximal residue
//! classes contained in the infinite part (when the common period is below
//! [`COLLAPSE_LIMIT`]), and exceptional elements are sorted, deduplicated, and
//! not covered by any progression. Structural equality is therefore set equality
//! for all sets whose period is below the limit.

mod text;

use num_integer::Integer;
use thiserror::Error;

/// Periods above this are normalized only by pairwise containment pruning.
pub const COLLAPSE_LIMIT: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilinearError {
    #[error("sidedness mismatch between operands")]
    SidednessMismatch,
    #[error("input {0} is not N-periodic")]
    NotNPeriodic(usize),
    #[error("chain is not decreasing at index {0}")]
    ChainNotDecreasing(usize),
    #[error("chain element {0} does not contain 0")]
    MissingZero(usize),
    #[error("last chain element is not finite")]
    LastNotFinite,
    #[error("chain needs at least two elements")]
    ChainTooShort,
    #[error("first chain element is not the full set")]
    FirstNotFull,
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),
    #[error("expected a positive integer, got {0}")]
    NonPositive(i64),
    #[error("one-sided sets cannot contain the negative integer {0}")]
    NegativeInOneSided(i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, SemilinearError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// A residue class `offset + modulus * Z` (direction is carried by the owning set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    offset: i64,
    modulus: i64,
}

impl Progression {
    /// Offset is reduced into `[0, modulus)`.
    pub fn new(offset: i64, modulus: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(SemilinearError::NonPositiveModulus(modulus));
        }
        Ok(Self { offset: offset.rem_euclid(modulus), modulus })
    }

    /// Keeps the offset as given; used to describe sets before normalization.
    pub fn unreduced(offset: i64, modulus: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(SemilinearError::NonPositiveModulus(modulus));
        }
        Ok(Self { offset, modulus })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    fn reduced(self) -> Self {
        Self { offset: self.offset.rem_euclid(self.modulus), modulus: self.modulus }
    }

    /// Residue-class membership, ignoring direction.
    pub fn covers(&self, n: i64) -> bool {
        (n as i128 - self.offset as i128).rem_euclid(self.modulus as i128) == 0
    }

    pub fn is_subset_of(&self, other: &Progression) -> bool {
        self.modulus % other.modulus == 0 && other.covers(self.offset)
    }

    /// Chinese-remainder intersection of two residue classes.
    pub fn intersect(&self, other: &Progression) -> Option<Progression> {
        let (m1, m2) = (self.modulus as i128, other.modulus as i128);
        let (o1, o2) = (self.offset as i128, other.offset as i128);
        let g = m1.gcd(&m2);
        if (o2 - o1).rem_euclid(g) != 0 {
            return None;
        }
        let l = m1 / g * m2;
        let (a, b) = (m1 / g, m2 / g);
        let inv = if b == 1 { 0 } else { mod_inv_i128(a.rem_euclid(b), b) };
        let t = ((o2 - o1) / g).rem_euclid(b) * inv % b.max(1);
        let x = (o1 + m1 * t).rem_euclid(l);
        Some(Progression { offset: x as i64, modulus: l as i64 })
    }
}

fn mod_inv_i128(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// Shape of `S ∩ nZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Empty,
    Zero,
    Full,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    exceptional: Vec<i64>,
    progressions: Vec<Progression>,
    sidedness: Sidedness,
}

impl SemilinearSet {
    /// Stores the parts as given, without normalizing.
    pub fn raw(sidedness: Sidedness, exceptional: Vec<i64>, progressions: Vec<Progression>) -> Result<Self> {
        if sidedness == Sidedness::OneSided {
            if let Some(&e) = exceptional.iter().find(|&&e| e < 0) {
                return Err(SemilinearError::NegativeInOneSided(e));
            }
        }
        Ok(Self { exceptional, progressions, sidedness })
    }

    pub fn new(sidedness: Sidedness, exceptional: Vec<i64>, progressions: Vec<Progression>) -> Result<Self> {
        Ok(Self::raw(sidedness, exceptional, progressions)?.normalize())
    }

    pub fn empty(sidedness: Sidedness) -> Self {
        Self { exceptional: Vec::new(), progressions: Vec::new(), sidedness }
    }

    pub fn full(sidedness: Sidedness) -> Self {
        Self { exceptional: Vec::new(), progressions: vec![Progression { offset: 0, modulus: 1 }], sidedness }
    }

    pub fn finite(sidedness: Sidedness, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(sidedness, elements.into_iter().collect(), Vec::new())
    }

    pub fn progression(sidedness: Sidedness, offset: i64, modulus: i64) -> Result<Self> {
        Self::new(sidedness, Vec::new(), vec![Progression::new(offset, modulus)?])
    }

    /// Two-sided `offset + modulus * Z`.
    pub fn class(offset: i64, modulus: i64) -> Result<Self> {
        Self::progression(Sidedness::TwoSided, offset, modulus)
    }

    pub fn exceptional(&self) -> &[i64] {
        &self.exceptional
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty() && self.exceptional.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.progressions.iter().any(|p| p.modulus == 1)
    }

    /// Least common multiple of the moduli, 1 when there are none.
    pub fn period(&self) -> i64 {
        self.progressions.iter().fold(1i64, |acc, p| acc.lcm(&p.modulus))
    }

    pub fn is_n_periodic(&self, n: i64) -> bool {
        n >= 1 && n % self.period() == 0
    }

    pub fn max_abs_exceptional(&self) -> i64 {
        self.exceptional.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// Radius of a window that witnesses every feature of the representation.
    pub fn witness_radius(&self) -> i64 {
        3 * self.period() + self.max_abs_exceptional() + 16
    }

    pub fn contains(&self, n: i64) -> bool {
        if self.sidedness == Sidedness::OneSided && n < 0 {
            return false;
        }
        self.exceptional.contains(&n) || self.progressions.iter().any(|p| p.covers(n))
    }

    /// Members in `[lo, hi]`.
    pub fn members_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&n| self.contains(n)).collect()
    }

    /// Canonical representative with the same members.
    pub fn normalize(&self) -> Self {
        let mut progs: Vec<Progression> = self.progressions.iter().map(|p| p.reduced()).collect();
        progs.sort();
        progs.dedup();
        let period = progs.iter().try_fold(1i64, |acc, p| {
            let l = acc.lcm(&p.modulus);
            (l <= COLLAPSE_LIMIT).then_some(l)
        });
        progs = match period {
            Some(l) if !progs.is_empty() => maximal_classes(&progs, l),
            _ => prune_contained(progs),
        };
        progs.sort_by_key(|p| (p.modulus, p.offset));
        let mut exceptional = self.exceptional.clone();
        exceptional.sort_unstable();
        exceptional.dedup();
        exceptional.retain(|&e| !progs.iter().any(|p| p.covers(e)));
        Self { exceptional, progressions: progs, sidedness: self.sidedness }
    }

    fn check_sides(&self, other: &Self) -> Result<()> {
        if self.sidedness == other.sidedness {
            Ok(())
        } else {
            Err(SemilinearError::SidednessMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_sides(other)?;
        let exceptional = self.exceptional.iter().chain(&other.exceptional).copied().collect();
        let progressions = self.progressions.iter().chain(&other.progressions).copied().collect();
        Ok(Self { exceptional, progressions, sidedness: self.sidedness }.normalize())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_sides(other)?;
        let mut progressions = Vec::new();
        for p in &self.progressions {
            for q in &other.progressions {
                progressions.extend(p.intersect(q));
            }
        }
        let exceptional = self
            .exceptional
            .iter()
            .filter(|&&e| other.contains(e))
            .chain(other.exceptional.iter().filter(|&&e| self.contains(e)))
            .copied()
            .collect();
        Ok(Self { exceptional, progressions, sidedness: self.sidedness }.normalize())
    }

    /// Whether every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        if !self.exceptional.iter().all(|&e| other.contains(e)) {
            return false;
        }
        let other_period = other.period();
        self.progressions.iter().all(|p| {
            // split p into classes modulo lcm(p, period(other)); each must be covered
            let l = p.modulus.lcm(&other_period);
            (0..l / p.modulus).all(|j| {
                let r = p.offset + j * p.modulus;
                other.progressions.iter().any(|q| q.covers(r))
            })
        })
    }

    /// `{m : n*m in S}` for a positive `n`.
    pub fn scale_section(&self, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(SemilinearError::NonPositive(n));
        }
        let progressions = self
            .progressions
            .iter()
            .filter_map(|p| {
                let g = n.gcd(&p.modulus);
                if p.offset.rem_euclid(g) != 0 {
                    return None;
                }
                let m = p.modulus / g;
                let inv = if m == 1 { 0 } else { mod_inv_i128((n / g).rem_euclid(m) as i128, m as i128) as i64 };
                let off = ((p.offset / g).rem_euclid(m) as i128 * inv as i128 % m.max(1) as i128) as i64;
                Some(Progression { offset: off, modulus: m })
            })
            .collect();
        let exceptional = self.exceptional.iter().filter(|&&e| e % n == 0).map(|&e| e / n).collect();
        Ok(Self { exceptional, progressions, sidedness: self.sidedness }.normalize())
    }

    /// Elementwise negation; only meaningful for two-sided sets.
    pub fn negate(&self) -> Self {
        assert_eq!(self.sidedness, Sidedness::TwoSided, "negation of a one-sided set");
        let exceptional = self.exceptional.iter().map(|e| -e).collect();
        let progressions = self.progressions.iter().map(|p| Progression { offset: -p.offset, modulus: p.modulus }).collect();
        Self { exceptional, progressions, sidedness: self.sidedness }.normalize()
    }

    /// `{n + shift : n in S}` for a two-sided set.
    pub fn translate(&self, shift: i64) -> Self {
        assert_eq!(self.sidedness, Sidedness::TwoSided, "translation of a one-sided set");
        let exceptional = self.exceptional.iter().map(|e| e + shift).collect();
        let progressions =
            self.progressions.iter().map(|p| Progression { offset: p.offset + shift, modulus: p.modulus }).collect();
        Self { exceptional, progressions, sidedness: self.sidedness }.normalize()
    }

    /// Classifies `S ∩ nZ` (with `nZ` read one-sided for one-sided sets).
    pub fn section(&self, n: i64) -> Section {
        assert!(n >= 1);
        let l = self.period();
        let g = n.gcd(&l);
        let residues = l / g;
        let covered = (0..residues).filter(|j| self.progressions.iter().any(|p| p.covers(j * g))).count() as i64;
        if covered == residues && !self.progressions.is_empty() {
            return Section::Full;
        }
        if covered > 0 {
            return Section::Other;
        }
        let mut multiples = self.exceptional.iter().filter(|&&e| e % n == 0);
        match (multiples.next(), multiples.next()) {
            (None, _) => Section::Empty,
            (Some(0), None) => Section::Zero,
            _ => Section::Other,
        }
    }
}

/// The maximal residue classes (moduli dividing `l`) contained in the union of `progs`.
fn maximal_classes(progs: &[Progression], l: i64) -> Vec<Progression> {
    let lu = l as usize;
    let mut hit = vec![false; lu];
    for p in progs {
        let mut r = p.offset as usize;
        while r < lu {
            hit[r] = true;
            r += p.modulus as usize;
        }
    }
    let mut chosen: Vec<Progression> = Vec::new();
    for d in (1..=l).filter(|d| l % d == 0) {
        for c in 0..d {
            if chosen.iter().any(|p| d % p.modulus == 0 && p.covers(c)) {
                continue;
            }
            if (c..l).step_by(d as usize).all(|r| hit[r as usize]) {
                chosen.push(Progression { offset: c, modulus: d });
            }
        }
    }
    chosen
}

fn prune_contained(progs: Vec<Progression>) -> Vec<Progression> {
    progs
        .iter()
        .filter(|p| !progs.iter().any(|q| q != *p && p.is_subset_of(q)))
        .copied()
        .collect()
}

/// The intersection of sets that are all `n`-periodic, classified per residue class mod `n`.
pub fn intersect_family(sets: &[SemilinearSet], n: i64) -> Result<SemilinearSet> {
    if n < 1 {
        return Err(SemilinearError::NonPositive(n));
    }
    let Some(first) = sets.first() else {
        return Ok(SemilinearSet::full(Sidedness::TwoSided));
    };
    for (i, s) in sets.iter().enumerate() {
        first.check_sides(s)?;
        if !s.is_n_periodic(n) {
            return Err(SemilinearError::NotNPeriodic(i));
        }
    }
    let progressions = (0..n)
        .filter(|&m| sets.iter().all(|s| s.progressions.iter().any(|p| p.covers(m))))
        .map(|m| Progression { offset: m, modulus: n })
        .collect();
    let exceptional = sets
        .iter()
        .flat_map(|s| s.exceptional.iter().copied())
        .filter(|&e| sets.iter().all(|s| s.contains(e)))
        .collect();
    Ok(SemilinearSet { exceptional, progressions, sidedness: first.sidedness }.normalize())
}

/// Search ceiling for [`clearing_modulus`] and [`stepsize`]: a multiple of every
/// period that exceeds every exceptional element.
pub fn clearing_bound(sets: &[SemilinearSet]) -> i64 {
    let period = sets.iter().fold(1i64, |acc, s| acc.lcm(&s.period()));
    let biggest = sets.iter().map(SemilinearSet::max_abs_exceptional).max().unwrap_or(0);
    period * (1 + biggest)
}

/// Minimal `n >= 1` with every `S ∩ nZ` equal to the empty set, `{0}`, or `nZ`.
pub fn clearing_modulus(sets: &[SemilinearSet]) -> i64 {
    let bound = clearing_bound(sets);
    (1..=bound)
        .find(|&n| sets.iter().all(|s| s.section(n) != Section::Other))
        .expect("the clearing bound always clears")
}

/// For a decreasing chain `Z = A_0 ⊇ A_1 ⊇ ... ⊇ A_last` (last finite, all containing 0),
/// the minimal `n` and the `k` with `A_i ∩ nZ = nZ` for `i <= k` and `{0}` beyond.
pub fn stepsize(chain: &[SemilinearSet]) -> Result<(i64, usize)> {
    if chain.len() < 2 {
        return Err(SemilinearError::ChainTooShort);
    }
    for s in chain {
        chain[0].check_sides(s)?;
    }
    if !chain[0].is_full() {
        return Err(SemilinearError::FirstNotFull);
    }
    if let Some(i) = chain.iter().position(|s| !s.contains(0)) {
        return Err(SemilinearError::MissingZero(i));
    }
    if let Some(i) = (1..chain.len()).find(|&i| !chain[i].is_subset_of(&chain[i - 1])) {
        return Err(SemilinearError::ChainNotDecreasing(i));
    }
    if !chain.last().is_some_and(SemilinearSet::is_finite) {
        return Err(SemilinearError::LastNotFinite);
    }
    let bound = clearing_bound(chain);
    for n in 1..=bound {
        let kinds: Vec<Section> = chain.iter().map(|s| s.section(n)).collect();
        let k = kinds.iter().take_while(|&&s| s == Section::Full).count();
        if k >= 1 && kinds[k..].iter().all(|&s| s == Section::Zero) {
            return Ok((n, k - 1));
        }
    }
    unreachable!("the clearing bound always separates a decreasing chain")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(exc: &[i64], progs: &[(i64, i64)]) -> SemilinearSet {
        SemilinearSet::new(
            Sidedness::TwoSided,
            exc.to_vec(),
            progs.iter().map(|&(a, b)| Progression::new(a, b).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn membership() {
        let s = two(&[3], &[(1, 4)]);
        assert!(s.contains(9));
        assert!(!s.contains(8));
        assert!(s.contains(3));
        assert!(!SemilinearSet::empty(Sidedness::TwoSided).contains(0));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(two(&[], &[(0, 2), (1, 2)]), SemilinearSet::full(Sidedness::TwoSided));
        assert_eq!(two(&[5], &[(1, 4)]), two(&[], &[(1, 4)]));
        assert_eq!(two(&[], &[(0, 9), (3, 9), (6, 9)]), two(&[], &[(0, 3)]));
        let canon = two(&[], &[(0, 9), (3, 9), (6, 9)]);
        assert_eq!(canon.progressions(), &[Progression::new(0, 3).unwrap()]);
    }

    #[test]
    fn union_examples() {
        let even = two(&[], &[(0, 2)]);
        let odd = two(&[], &[(1, 2)]);
        assert!(even.union(&odd).unwrap().is_full());
        assert_eq!(two(&[1], &[]).union(&two(&[2], &[])).unwrap(), two(&[1, 2], &[]));
        let three = two(&[], &[(0, 3)]);
        assert_eq!(three.union(&SemilinearSet::empty(Sidedness::TwoSided)).unwrap(), three);
        let one = SemilinearSet::full(Sidedness::OneSided);
        assert_eq!(three.union(&one), Err(SemilinearError::SidednessMismatch));
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(two(&[], &[(0, 2)]).intersect(&two(&[], &[(0, 3)])).unwrap(), two(&[], &[(0, 6)]));
        let a = two(&[3], &[(1, 4)]);
        assert_eq!(a.intersect(&two(&[], &[(1, 2)])).unwrap(), a);
        assert!(two(&[], &[(0, 2)]).intersect(&two(&[], &[(1, 2)])).unwrap().is_empty());
    }

    #[test]
    fn intersect_family_examples() {
        let z = SemilinearSet::full(Sidedness::TwoSided);
        assert!(intersect_family(&[z.clone(), z], 4).unwrap().is_full());
        let a = two(&[1], &[(0, 2)]);
        let b = two(&[3], &[(0, 2)]);
        assert_eq!(intersect_family(&[a, b], 2).unwrap(), two(&[], &[(0, 2)]));
        let c = two(&[], &[(1, 3)]);
        let d = two(&[], &[(2, 3)]);
        assert!(intersect_family(&[c.clone(), d], 3).unwrap().is_empty());
        assert_eq!(intersect_family(&[c], 2), Err(SemilinearError::NotNPeriodic(0)));
    }

    #[test]
    fn scale_section_examples() {
        assert_eq!(two(&[], &[(0, 6)]).scale_section(3).unwrap(), two(&[], &[(0, 2)]));
        assert_eq!(two(&[3, 6], &[(0, 9)]).scale_section(3).unwrap(), two(&[1, 2], &[(0, 3)]));
        assert!(two(&[], &[(1, 2)]).scale_section(2).unwrap().is_empty());
        assert_eq!(two(&[], &[(1, 2)]).scale_section(0), Err(SemilinearError::NonPositive(0)));
    }

    #[test]
    fn clearing_modulus_examples() {
        let z = SemilinearSet::full(Sidedness::TwoSided);
        let a1 = two(&[], &[(0, 3), (1, 3)]);
        let a2 = two(&[0, 3, 6, 7], &[]);
        assert_eq!(clearing_modulus(&[z.clone(), a1, a2]), 9);
        assert_eq!(clearing_modulus(&[z]), 1);
        assert_eq!(clearing_modulus(&[two(&[0, 5], &[])]), 2);
    }

    #[test]
    fn stepsize_examples() {
        let z = SemilinearSet::full(Sidedness::TwoSided);
        let a1 = two(&[], &[(0, 3), (1, 3)]);
        let a2 = two(&[0, 3, 6, 7], &[]);
        assert_eq!(stepsize(&[z.clone(), a1.clone(), a2.clone()]), Ok((9, 1)));
        assert_eq!(stepsize(&[z.clone(), two(&[0], &[])]), Ok((1, 0)));
        assert_eq!(stepsize(&[z.clone(), two(&[], &[(0, 2)]), two(&[0], &[])]), Ok((2, 1)));
    }

    #[test]
    fn stepsize_rejects_bad_chains() {
        let z = SemilinearSet::full(Sidedness::TwoSided);
        assert_eq!(stepsize(std::slice::from_ref(&z)), Err(SemilinearError::ChainTooShort));
        assert_eq!(stepsize(&[two(&[0], &[]), two(&[0], &[])]), Err(SemilinearError::FirstNotFull));
        assert_eq!(stepsize(&[z.clone(), two(&[1], &[])]), Err(SemilinearError::MissingZero(1)));
        assert_eq!(
            stepsize(&[z.clone(), two(&[0], &[]), two(&[0, 4], &[])]),
            Err(SemilinearError::ChainNotDecreasing(2))
        );
        assert_eq!(stepsize(&[z.clone(), two(&[], &[(0, 2)])]), Err(SemilinearError::LastNotFinite));
    }

    #[test]
    fn one_sided_semantics() {
        let s = SemilinearSet::new(Sidedness::OneSided, vec![1], vec![Progression::new(-2, 4).unwrap()]).unwrap();
        assert!(s.contains(2) && s.contains(6) && s.contains(1));
        assert!(!s.contains(-2));
        assert_eq!(
            SemilinearSet::finite(Sidedness::OneSided, [-1]),
            Err(SemilinearError::NegativeInOneSided(-1))
        );
    }

    #[test]
    fn negation_and_translation() {
        let s = two(&[2], &[(1, 4)]);
        let neg = s.negate();
        assert!(neg.contains(-2) && neg.contains(3) && !neg.contains(1));
        let t = s.translate(1);
        assert!(t.contains(3) && t.contains(2) && !t.contains(1));
    }
}
