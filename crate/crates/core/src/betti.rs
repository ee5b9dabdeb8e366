//! Betti tables of the framed moduli space and the recursions generating them.
//!
//! Tables are indexed by degree starting at zero. Any degree outside a
//! table's range reads as zero, both for tables and for the coefficients of
//! `(1 + t^3)^{2g}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigCount = BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Q,
    F2,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Q => "Q",
            Field::F2 => "Z/2",
        })
    }
}

/// Which space a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// The framed space, a closed manifold of dimension `6g - 3`.
    Framed,
    /// The extended space `N^+`, of dimension `6g` with boundary.
    Plus,
    /// The pair `(N^+, boundary)`.
    Relative,
}

impl Space {
    pub fn table_len(self, genus: u32) -> usize {
        match self {
            Space::Framed => 6 * genus as usize - 2,
            Space::Plus | Space::Relative => 6 * genus as usize + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct BettiTable {
    genus: u32,
    field: Field,
    space: Space,
    #[serde(with = "counts_serde")]
    values: Vec<BigCount>,
}

/// Unchecked wire form; deserialization goes through [`BettiTable::new`].
#[derive(Deserialize)]
struct RawTable {
    genus: u32,
    field: Field,
    space: Space,
    #[serde(with = "counts_serde")]
    values: Vec<BigCount>,
}

impl TryFrom<RawTable> for BettiTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        BettiTable::new(raw.genus, raw.field, raw.space, raw.values)
    }
}

/// Values that fit in 64 bits are written as numbers, larger ones as decimal strings.
mod counts_serde {
    use super::BigCount;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigCount], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| match x.to_u64() {
                Some(n) => Repr::Small(n),
                None => Repr::Big(x.to_string()),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigCount>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Small(n) => Ok(BigCount::from(n)),
                Repr::Big(t) => t.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

impl BettiTable {
    pub fn new(genus: u32, field: Field, space: Space, values: Vec<BigCount>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Validation("genus must be at least 1".into()));
        }
        let want = space.table_len(genus);
        if values.len() != want {
            return Err(Error::Validation(format!(
                "{space:?} table for genus {genus} needs {want} entries, got {}",
                values.len()
            )));
        }
        Ok(Self {
            genus,
            field,
            space,
            values,
        })
    }

    pub fn from_counts(genus: u32, field: Field, space: Space, values: &[u64]) -> Result<Self> {
        Self::new(
            genus,
            field,
            space,
            values.iter().map(|&v| BigUint::from(v)).collect(),
        )
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[BigCount] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at degree `r`, zero outside the table.
    pub fn at(&self, r: i64) -> BigCount {
        usize::try_from(r)
            .ok()
            .and_then(|i| self.values.get(i))
            .cloned()
            .unwrap_or_default()
    }

    pub(crate) fn signed(&self, r: i64) -> BigInt {
        BigInt::from(self.at(r))
    }

    /// Value at degree `r` as a machine count; errors if it does not fit.
    pub fn count(&self, r: i64) -> Result<u64> {
        self.at(r)
            .to_u64()
            .ok_or_else(|| Error::Validation(format!("value at degree {r} exceeds u64")))
    }

    pub fn to_counts(&self) -> Result<Vec<u64>> {
        (0..self.len() as i64).map(|r| self.count(r)).collect()
    }

    pub fn total(&self) -> BigCount {
        self.values.iter().sum()
    }

    /// Alternating sum of the values.
    pub fn euler_characteristic(&self) -> BigInt {
        self.values
            .iter()
            .enumerate()
            .map(|(r, v)| {
                let v = BigInt::from(v.clone());
                if r % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    /// First degree `r` where `values[r] != values[top - r]`, if any.
    pub fn first_duality_violation(&self) -> Option<usize> {
        let n = self.values.len();
        (0..n).find(|&r| self.values[r] != self.values[n - 1 - r])
    }

    pub fn satisfies_duality(&self) -> bool {
        self.first_duality_violation().is_none()
    }

    /// Degrees shown in the half-column layout: `0 ..= 3g - 2`.
    pub fn half(&self) -> &[BigCount] {
        let n = self.values.len().div_ceil(2);
        &self.values[..n]
    }
}

pub(crate) fn to_count(v: BigInt, what: &str) -> BigCount {
    v.to_biguint()
        .unwrap_or_else(|| panic!("{what} produced a negative count"))
}

pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Coefficient of `t^r` in `(1 + t^3)^{2g}`: the Betti numbers of `SU(2)^{2g}`.
pub fn m_coeff(g: u32, r: i64) -> BigCount {
    if r < 0 || r > 6 * g as i64 || r % 3 != 0 {
        return BigUint::zero();
    }
    binomial(2 * g as u64, (r / 3) as u64)
}

pub(crate) fn m_signed(g: u32, r: i64) -> BigInt {
    BigInt::from(m_coeff(g, r))
}

/// `binom(2g, k)` for `k = 0..=2g`, so `m_r^g` is entry `r / 3`.
fn m_row(g: u32) -> Vec<BigInt> {
    let n = 2 * g as u64;
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        row.push(c.clone());
        c = c * (n - k) / (k + 1);
    }
    row
}

fn m_at(row: &[BigInt], r: i64) -> BigInt {
    if r < 0 || r % 3 != 0 {
        return BigInt::zero();
    }
    row.get((r / 3) as usize).cloned().unwrap_or_default()
}

/// The common body `h_{r-2} + 2 h_{r-3} + h_{r-4}` of both recursions.
fn shifted_sum(h: &BettiTable, r: i64) -> BigInt {
    h.signed(r - 2) + 2 * h.signed(r - 3) + h.signed(r - 4)
}

fn low(h: &BettiTable, m: &[BigInt], r: i64) -> BigInt {
    shifted_sum(h, r) + m_at(m, r) - m_at(m, r - 4)
}

fn middle(h: &BettiTable, m: &[BigInt]) -> BigInt {
    let c = 3 * h.genus() as i64;
    4 * h.signed(c) + m_at(m, c) - m_at(m, c - 3)
}

fn high(h: &BettiTable, m: &[BigInt], r: i64) -> BigInt {
    shifted_sum(h, r) + m_at(m, r - 3) - m_at(m, r + 1)
}

/// Right side of the low-range recursion from genus `g` to `g + 1`.
pub fn recursion_low(h: &BettiTable, r: i64) -> BigInt {
    low(h, &m_row(h.genus()), r)
}

/// Right side of the middle-range recursion; independent of the degree.
pub fn recursion_middle(h: &BettiTable) -> BigInt {
    middle(h, &m_row(h.genus()))
}

/// Right side of the high-range recursion.
pub fn recursion_high(h: &BettiTable, r: i64) -> BigInt {
    high(h, &m_row(h.genus()), r)
}

/// The rational table of genus `g + 1` from that of genus `g`.
fn rational_step(table: &BettiTable) -> BettiTable {
    let cur = table.genus();
    let len = Space::Framed.table_len(cur + 1);
    let half_end = 3 * cur as i64 + 1;
    let m = m_row(cur);
    let mut values = vec![BigUint::zero(); len];
    for r in 0..=half_end {
        values[r as usize] = to_count(low(table, &m, r), "rational recursion");
    }
    for r in (half_end + 1) as usize..len {
        values[r] = values[len - 1 - r].clone();
    }
    BettiTable::new(cur + 1, Field::Q, Space::Framed, values).expect("recursion produces the right length")
}

/// The mod-2 table of genus `g + 1`, taking equality in all three recursions.
fn mod2_step(table: &BettiTable) -> BettiTable {
    let cur = table.genus();
    let len = Space::Framed.table_len(cur + 1);
    let c = 3 * cur as i64;
    let m = m_row(cur);
    let mid = to_count(middle(table, &m), "middle recursion");
    let values = (0..len as i64)
        .map(|r| {
            if r < c {
                to_count(low(table, &m, r), "low recursion")
            } else if r <= c + 3 {
                mid.clone()
            } else {
                to_count(high(table, &m, r), "high recursion")
            }
        })
        .collect();
    BettiTable::new(cur + 1, Field::F2, Space::Framed, values).expect("recursion produces the right length")
}

fn chain(first: BettiTable, step: fn(&BettiTable) -> BettiTable, max_g: u32) -> Vec<BettiTable> {
    let mut out = vec![first];
    while out.len() < max_g as usize {
        let next = step(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Rational Betti numbers, recursing genus by genus from `[1, 0, 0, 1]`.
pub fn rational_table(g: u32) -> BettiTable {
    assert!(g >= 1, "genus must be at least 1");
    rational_tables(g).pop().expect("g >= 1")
}

/// Rational tables for genus `1..=max_g`, in one pass.
pub fn rational_tables(max_g: u32) -> Vec<BettiTable> {
    let base = BettiTable::from_counts(1, Field::Q, Space::Framed, &[1, 0, 0, 1]).expect("base table");
    chain(base, rational_step, max_g)
}

/// Mod-2 Betti numbers assuming equality in all three recursions, recursing
/// from the `SO(3)` table `[1, 1, 1, 1]`.
pub fn mod2_table(g: u32) -> BettiTable {
    assert!(g >= 1, "genus must be at least 1");
    mod2_tables(g).pop().expect("g >= 1")
}

/// Mod-2 tables for genus `1..=max_g`, in one pass.
pub fn mod2_tables(max_g: u32) -> Vec<BettiTable> {
    let base = BettiTable::from_counts(1, Field::F2, Space::Framed, &[1, 1, 1, 1]).expect("base table");
    chain(base, mod2_step, max_g)
}

/// `2^{2g-1} - binom(2g-1, g)`, the common value of the four middle mod-2 Betti numbers.
pub fn middle_closed_form(g: u32) -> BigCount {
    assert!(g >= 2, "closed form is stated for genus at least 2");
    let n = 2 * g as u64 - 1;
    (BigUint::one() << n) - binomial(n, g as u64)
}

/// `(sum of mod-2 table, 2 * sum of rational table)`.
pub fn total_rank_identity(g: u32) -> (BigCount, BigCount) {
    (mod2_table(g).total(), rational_table(g).total() * 2u32)
}

/// `2g * binom(2g, g)`.
pub fn total_rank_closed_form(g: u32) -> BigCount {
    binomial(2 * g as u64, g as u64) * (2 * g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub genus: u32,
    pub verdicts: Vec<Verdict>,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// Checks a genus `g + 1` mod-2 table against the proven inequalities and
/// equalities relative to `mod2_table(g)`.
pub fn verify_theorem(g: u32, candidate: &BettiTable) -> Result<TheoremReport> {
    if g == 0 {
        return Err(Error::Validation("genus must be at least 1".into()));
    }
    verify_step(&mod2_table(g), candidate)
}

/// [`verify_theorem`] with the genus-`g` table supplied by the caller.
pub fn verify_step(prior: &BettiTable, candidate: &BettiTable) -> Result<TheoremReport> {
    let g = prior.genus();
    let want = Space::Framed.table_len(g + 1);
    if candidate.len() != want {
        return Err(Error::Validation(format!(
            "candidate for genus {} must have {want} entries, got {}",
            g + 1,
            candidate.len()
        )));
    }
    let m = m_row(g);
    let c = 3 * g as i64;
    let top = want as i64 - 1;
    let mut verdicts = Vec::new();
    let mut push = |name: String, holds: bool, detail: String| {
        verdicts.push(Verdict { name, holds, detail })
    };

    let bound = |r: i64| -> (&'static str, BigInt) {
        if r < c {
            ("I", low(prior, &m, r))
        } else if r <= c + 3 {
            ("II", middle(prior, &m))
        } else {
            ("III", high(prior, &m, r))
        }
    };

    for r in 0..=top {
        let (kind, rhs) = bound(r);
        let lhs = candidate.signed(r);
        push(
            format!("{kind}_{r}"),
            lhs >= rhs,
            format!("h_{r} = {lhs} >= {rhs}"),
        );
    }
    for r in (0..c).filter(|r| r % 3 == 2) {
        let rhs = low(prior, &m, r);
        let lhs = candidate.signed(r);
        push(
            format!("equality_I_{r}"),
            lhs == rhs,
            format!("h_{r} = {lhs}, recursion gives {rhs}"),
        );
    }
    for k in (1..c).filter(|k| k % 3 == 1) {
        let lhs = candidate.signed(k) - candidate.signed(k - 1);
        let rhs = low(prior, &m, k) - low(prior, &m, k - 1);
        push(
            format!("difference_{k}"),
            lhs == rhs,
            format!("h_{k} - h_{} = {lhs}, recursion gives {rhs}", k - 1),
        );
    }
    let (a, b) = (candidate.at(c + 1), candidate.at(c));
    push(
        "middle_pair".into(),
        a == b,
        format!("h_{} = {a}, h_{c} = {b}", c + 1),
    );
    let dual = candidate.first_duality_violation();
    push(
        "duality".into(),
        dual.is_none(),
        match dual {
            None => "values[r] = values[top - r] for all r".into(),
            Some(r) => format!("fails first at degree {r}"),
        },
    );
    let chi = candidate.euler_characteristic();
    push("euler".into(), chi.is_zero(), format!("alternating sum {chi}"));

    Ok(TheoremReport {
        genus: g + 1,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(t: &BettiTable) -> Vec<u64> {
        t.to_counts().unwrap()
    }

    /// Expands (1 + t^3)^{2g} by repeated polynomial multiplication.
    fn poly_oracle(g: u32) -> Vec<u64> {
        let mut p = vec![1u64];
        for _ in 0..2 * g {
            let mut next = vec![0u64; p.len() + 3];
            for (i, &c) in p.iter().enumerate() {
                next[i] += c;
                next[i + 3] += c;
            }
            p = next;
        }
        p
    }

    #[test]
    fn m_coeff_examples() {
        assert_eq!(m_coeff(1, 3), BigUint::from(2u32));
        assert_eq!(m_coeff(2, 4), BigUint::zero());
        assert_eq!(m_coeff(3, 9), BigUint::from(20u32));
        assert_eq!(m_coeff(3, -3), BigUint::zero());
        assert_eq!(m_coeff(3, 21), BigUint::zero());
        for g in 1..=6 {
            let oracle = poly_oracle(g);
            for r in 0..=6 * g as i64 {
                assert_eq!(m_coeff(g, r), BigUint::from(oracle[r as usize]));
            }
        }
    }

    #[test]
    fn rational_examples() {
        assert_eq!(counts(&rational_table(1)), [1, 0, 0, 1]);
        assert_eq!(counts(&rational_table(2)), [1, 0, 1, 4, 0, 0, 4, 1, 0, 1]);
        assert_eq!(counts(&rational_table(3))[..8], [1, 0, 1, 6, 1, 6, 15, 0]);
    }

    #[test]
    fn mod2_examples() {
        assert_eq!(counts(&mod2_table(1)), [1, 1, 1, 1]);
        assert_eq!(counts(&mod2_table(2)), [1, 0, 1, 5, 5, 5, 5, 1, 0, 1]);
        assert_eq!(counts(&mod2_table(3))[..8], [1, 0, 1, 6, 1, 7, 22, 22]);
        let g6 = counts(&mod2_table(6));
        assert_eq!(g6[14..17], [794, 1586, 1586]);
    }

    #[test]
    fn middle_values() {
        assert_eq!(middle_closed_form(2), BigUint::from(5u32));
        assert_eq!(middle_closed_form(4), BigUint::from(93u32));
        assert_eq!(middle_closed_form(5), BigUint::from(386u32));
    }

    #[test]
    fn total_ranks() {
        for (g, want) in [(1u32, 4u32), (2, 24), (3, 120)] {
            let (a, b) = total_rank_identity(g);
            assert_eq!(a, BigUint::from(want));
            assert_eq!(b, BigUint::from(want));
            assert_eq!(total_rank_closed_form(g), BigUint::from(want));
        }
    }

    #[test]
    fn theorem_checks() {
        let report = verify_theorem(2, &mod2_table(3)).unwrap();
        assert!(report.all_hold(), "{:?}", report.failures().collect::<Vec<_>>());

        let report = verify_theorem(1, &mod2_table(2)).unwrap();
        assert!(report.all_hold());
        assert_eq!(recursion_middle(&mod2_table(1)), BigInt::from(5));

        let mut values = mod2_table(3).values().to_vec();
        values[7] -= 1u32;
        let bad = BettiTable::new(3, Field::F2, Space::Framed, values).unwrap();
        let report = verify_theorem(2, &bad).unwrap();
        assert!(!report.get("middle_pair").unwrap().holds);
        assert!(!report.get("II_7").unwrap().holds);

        assert!(verify_theorem(2, &mod2_table(2)).is_err());
    }

    #[test]
    fn big_genus_does_not_overflow() {
        let t = mod2_table(40);
        assert!(t.satisfies_duality());
        assert_eq!(t.total(), total_rank_closed_form(40));
        assert!(t.count(3 * 40).is_err());
    }

    #[test]
    fn table_length_is_validated() {
        assert!(BettiTable::from_counts(2, Field::F2, Space::Framed, &[1, 0, 1]).is_err());
        assert!(BettiTable::from_counts(0, Field::F2, Space::Framed, &[]).is_err());
        let t = mod2_table(2);
        assert_eq!(t.at(-1), BigUint::zero());
        assert_eq!(t.at(10), BigUint::zero());
        assert_eq!(t.half().len(), 5);
    }

    #[test]
    fn json_round_trip_validates() {
        let t = mod2_table(30);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<BettiTable>(&text).unwrap(), t);
        let short = r#"{"genus":2,"field":"f2","space":"framed","values":[1,0,1]}"#;
        let err = serde_json::from_str::<BettiTable>(short).unwrap_err().to_string();
        assert!(err.contains("entries"), "{err}");
    }

    #[test]
    fn chained_tables_match_single_ones() {
        let chain = mod2_tables(8);
        assert_eq!(chain.len(), 8);
        assert_eq!(chain[7], mod2_table(8));
        assert_eq!(rational_tables(5)[4], rational_table(5));
        let report = verify_step(&chain[3], &chain[4]).unwrap();
        assert!(report.all_hold());
    }
}
