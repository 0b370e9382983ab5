//! The four presentations as data: generator tables, relation enumerators, and the
//! isomorphisms between matched pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module_store::Representation;
use crate::scalar::{QProfile, Scalar};

/// A generator symbol with its 0-based node index. Names are 1-based: `E1`, `Kinv2`, `y1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
    Y(usize),
    Z(usize),
    /// Borel `e_i`.
    BE(usize),
    /// Borel `k_i`.
    BK(usize),
    /// Borel `k_i^{-1}`.
    BKinv(usize),
    /// Borel `y_i`.
    BY(usize),
}

impl Generator {
    pub fn node(self) -> usize {
        use Generator::*;
        match self {
            E(i) | F(i) | K(i) | Kinv(i) | Y(i) | Z(i) | BE(i) | BK(i) | BKinv(i) | BY(i) => i,
        }
    }

    fn stem(self) -> &'static str {
        use Generator::*;
        match self {
            E(_) => "E",
            F(_) => "F",
            K(_) => "K",
            Kinv(_) => "Kinv",
            Y(_) => "Y",
            Z(_) => "Z",
            BE(_) => "e",
            BK(_) => "k",
            BKinv(_) => "kinv",
            BY(_) => "y",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.stem(), self.node() + 1)
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::Parse(format!("generator name {s:?} has no index")))?;
        let (stem, idx) = s.split_at(split);
        let idx: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator index in {s:?}")))?;
        if idx == 0 {
            return Err(Error::Parse(format!("generator indices start at 1: {s:?}")));
        }
        let i = idx - 1;
        Ok(match stem {
            "E" => Generator::E(i),
            "F" => Generator::F(i),
            "K" => Generator::K(i),
            "Kinv" => Generator::Kinv(i),
            "Y" => Generator::Y(i),
            "Z" => Generator::Z(i),
            "e" => Generator::BE(i),
            "k" => Generator::BK(i),
            "kinv" => Generator::BKinv(i),
            "y" => Generator::BY(i),
            _ => return Err(Error::Parse(format!("unknown generator {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PresentationId {
    ChevalleyFull,
    ChevalleyBorel,
    EquitableFull,
    EquitableBorel,
}

impl PresentationId {
    pub const ALL: [PresentationId; 4] = [
        PresentationId::ChevalleyFull,
        PresentationId::ChevalleyBorel,
        PresentationId::EquitableFull,
        PresentationId::EquitableBorel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresentationId::ChevalleyFull => "CHEVALLEY_FULL",
            PresentationId::ChevalleyBorel => "CHEVALLEY_BOREL",
            PresentationId::EquitableFull => "EQUITABLE_FULL",
            PresentationId::EquitableBorel => "EQUITABLE_BOREL",
        }
    }

    pub fn is_borel(self) -> bool {
        matches!(
            self,
            PresentationId::ChevalleyBorel | PresentationId::EquitableBorel
        )
    }

    /// The generator table for rank `n`, node-major.
    pub fn generators(self, n: usize) -> Vec<Generator> {
        let per_node: fn(usize) -> Vec<Generator> = match self {
            PresentationId::ChevalleyFull => |i| {
                vec![
                    Generator::E(i),
                    Generator::F(i),
                    Generator::K(i),
                    Generator::Kinv(i),
                ]
            },
            PresentationId::ChevalleyBorel => {
                |i| vec![Generator::BE(i), Generator::BK(i), Generator::BKinv(i)]
            }
            PresentationId::EquitableFull => |i| {
                vec![
                    Generator::K(i),
                    Generator::Kinv(i),
                    Generator::Y(i),
                    Generator::Z(i),
                ]
            },
            PresentationId::EquitableBorel => {
                |i| vec![Generator::BK(i), Generator::BKinv(i), Generator::BY(i)]
            }
        };
        (0..n).flat_map(per_node).collect()
    }
}

impl fmt::Display for PresentationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresentationId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresentationId::ALL
            .into_iter()
            .find(|p| {
                p.name().eq_ignore_ascii_case(s)
                    || p.name().replace('_', "-").eq_ignore_ascii_case(s)
            })
            .ok_or_else(|| Error::Parse(format!("unknown presentation {s:?}")))
    }
}

/// Affine Cartan data: the matrix `A`, symmetrizers `s`, null vector `u`, and `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    a: Vec<Vec<i64>>,
    u: Vec<u64>,
    qp: QProfile,
}

impl CartanData {
    /// Validates `a` and derives whichever of `s`, `u` is not supplied.
    pub fn new(
        a: Vec<Vec<i64>>,
        s: Option<Vec<u32>>,
        u: Option<Vec<u64>>,
        q: Scalar,
    ) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Cartan("empty matrix".into()));
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Cartan("matrix is not square".into()));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::Cartan(format!(
                    "A[{}][{}] = {} != 2",
                    i + 1,
                    i + 1,
                    a[i][i]
                )));
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(Error::Cartan(format!("A[{}][{}] > 0", i + 1, j + 1)));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::Cartan(format!(
                        "A[{}][{}] and A[{}][{}] disagree on vanishing",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let s = match s {
            Some(s) => {
                if s.len() != n {
                    return Err(Error::Cartan("wrong number of symmetrizers".into()));
                }
                if s.iter().fold(0u32, |g, &x| g.gcd(&x)) != 1 {
                    return Err(Error::Cartan("symmetrizers must have gcd 1".into()));
                }
                for i in 0..n {
                    for j in 0..n {
                        if s[i] as i64 * a[i][j] != s[j] as i64 * a[j][i] {
                            return Err(Error::Cartan(format!(
                                "s_{i1} A[{i1}][{j1}] != s_{j1} A[{j1}][{i1}]",
                                i1 = i + 1,
                                j1 = j + 1
                            )));
                        }
                    }
                }
                s
            }
            None => symmetrizers(&a)?,
        };
        let null = null_vector(&a)?;
        let u = match u {
            Some(u) => {
                if u != null {
                    return Err(Error::Cartan(format!(
                        "null vector {u:?} does not match the primitive positive kernel vector {null:?}"
                    )));
                }
                u
            }
            None => null,
        };
        let qp = QProfile::new(q, s)?;
        Ok(CartanData { a, u, qp })
    }

    /// Affine `sl_2`: `A = [[2,-2],[-2,2]]`, `s = u = (1,1)`.
    pub fn affine_sl2(q: Scalar) -> Result<Self> {
        CartanData::new(vec![vec![2, -2], vec![-2, 2]], None, None, q)
    }

    pub fn is_affine_sl2(&self) -> bool {
        self.a == [[2, -2], [-2, 2]] && self.qp.symmetrizers() == [1, 1]
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizers(&self) -> &[u32] {
        self.qp.symmetrizers()
    }

    pub fn null_vector(&self) -> &[u64] {
        &self.u
    }

    pub fn qp(&self) -> &QProfile {
        &self.qp
    }

    pub fn q(&self) -> &Scalar {
        self.qp.q()
    }

    /// Same matrix with a different base parameter.
    pub fn with_q(&self, q: Scalar) -> Result<Self> {
        Ok(CartanData {
            a: self.a.clone(),
            u: self.u.clone(),
            qp: QProfile::new(q, self.qp.symmetrizers().to_vec())?,
        })
    }
}

/// Smallest positive integral symmetrizers, by propagating ratios along the graph of A.
fn symmetrizers(a: &[Vec<i64>]) -> Result<Vec<u32>> {
    let n = a.len();
    let mut ratio: Vec<Option<Scalar>> = vec![None; n];
    for root in 0..n {
        if ratio[root].is_some() {
            continue;
        }
        ratio[root] = Some(Scalar::one());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let si = ratio[i].clone().expect("visited");
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // s_j = s_i A_ij / A_ji
                let sj = &si * &Scalar::frac(a[i][j], a[j][i]);
                match &ratio[j] {
                    Some(existing) if *existing != sj => {
                        return Err(Error::Cartan("matrix is not symmetrizable".into()))
                    }
                    Some(_) => {}
                    None => {
                        ratio[j] = Some(sj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    let ratio: Vec<Scalar> = ratio.into_iter().map(|r| r.expect("all visited")).collect();
    let ints = primitive_integer_vector(&ratio);
    ints.into_iter()
        .map(|x| u32::try_from(x).map_err(|_| Error::Cartan("symmetrizer too large".into())))
        .collect()
}

/// The primitive positive integer vector spanning `ker A`, which must be a line.
fn null_vector(a: &[Vec<i64>]) -> Result<Vec<u64>> {
    let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
    let kernel = Matrix::from_int_rows(&rows).kernel();
    if kernel.dim() != 1 {
        return Err(Error::Cartan(format!(
            "not of affine type: kernel of A has dimension {}",
            kernel.dim()
        )));
    }
    let v = &kernel.basis_vectors()[0];
    let negative = v.iter().any(Scalar::is_negative);
    if v.iter().any(Scalar::is_zero) || (negative && !v.iter().all(Scalar::is_negative)) {
        return Err(Error::Cartan(
            "not of affine type: no positive null vector".into(),
        ));
    }
    let ints = primitive_integer_vector(v);
    ints.into_iter()
        .map(|x| u64::try_from(x.abs()).map_err(|_| Error::Cartan("null vector too large".into())))
        .collect()
}

/// Scale a nonzero same-sign rational vector to coprime integers (sign discarded).
fn primitive_integer_vector(v: &[Scalar]) -> Vec<i64> {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, ToPrimitive, Zero};
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c.numer() * (&lcm / c.denom())).abs())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| (x / &g).to_i64().unwrap_or(i64::MAX))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct CartanJson {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<Vec<u64>>,
    #[serde(default = "default_q")]
    q: Scalar,
}

fn default_q() -> Scalar {
    Scalar::from_int(2)
}

impl Serialize for CartanData {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CartanJson {
            a: self.a.clone(),
            s: Some(self.symmetrizers().to_vec()),
            u: Some(self.u.clone()),
            q: self.q().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CartanData {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CartanJson::deserialize(deserializer)?;
        CartanData::new(raw.a, raw.s, raw.u, raw.q).map_err(serde::de::Error::custom)
    }
}

/// A formal linear combination of generator words; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RelationExpr {
    terms: Vec<(Scalar, Vec<Generator>)>,
}

impl RelationExpr {
    pub fn new() -> Self {
        RelationExpr::default()
    }

    pub fn term(mut self, c: Scalar, word: &[Generator]) -> Self {
        if !c.is_zero() {
            self.terms.push((c, word.to_vec()));
        }
        self
    }

    pub fn terms(&self) -> &[(Scalar, Vec<Generator>)] {
        &self.terms
    }

    pub fn symbols(&self) -> impl Iterator<Item = Generator> + '_ {
        self.terms.iter().flat_map(|(_, w)| w.iter().copied())
    }

    /// Substitute matrices; a word with no letters evaluates to the identity.
    pub fn evaluate(&self, rep: &Representation) -> Result<Matrix> {
        let n = rep.dim();
        let mut acc = Matrix::zeros(n, n);
        for (c, word) in &self.terms {
            let mut m = Matrix::identity(n);
            for g in word {
                m = &m * rep.get(*g)?;
            }
            acc = &acc + &m.scale(c);
        }
        Ok(acc)
    }
}

impl fmt::Display for RelationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, w)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if w.is_empty() {
                f.write_str("·1")?;
            }
            for g in w {
                write!(f, "·{g}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub expr: RelationExpr,
}

fn word_pow(g: Generator, k: i64) -> impl Iterator<Item = Generator> {
    std::iter::repeat_n(g, k.max(0) as usize)
}

fn sign(r: i64) -> Scalar {
    if r % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `sum_r (-1)^r [1-A_ij, r]_i X^{1-A_ij-r} W X^r` where `W` is `middle` (a linear
/// combination of words), minus `prod_{s=0}^{-A_ij} (1 - q_i^{A_ij+2s})` times the
/// word `rhs` when given.
fn serre(
    cd: &CartanData,
    i: usize,
    j: usize,
    x: Generator,
    middle: &[(Scalar, Vec<Generator>)],
    rhs: Option<Vec<Generator>>,
) -> RelationExpr {
    let qp = cd.qp();
    let top = 1 - cd.a(i, j);
    let mut expr = RelationExpr::new();
    for r in 0..=top {
        let c = sign(r) * qp.q_binom(top, r, i).expect("0 <= r <= top");
        for (mc, mw) in middle {
            let word: Vec<Generator> = word_pow(x, top - r)
                .chain(mw.iter().copied())
                .chain(word_pow(x, r))
                .collect();
            expr = expr.term(&c * mc, &word);
        }
    }
    if let Some(w) = rhs {
        let prod: Scalar = (0..=-cd.a(i, j))
            .map(|s| Scalar::one() - qp.q_pow(i, cd.a(i, j) + 2 * s))
            .product();
        expr = expr.term(-prod, &w);
    }
    expr
}

/// `K_i^{1-A_ij} K_j` with the given K symbol family.
fn serre_rhs(cd: &CartanData, i: usize, j: usize, k: fn(usize) -> Generator) -> Vec<Generator> {
    word_pow(k(i), 1 - cd.a(i, j)).chain([k(j)]).collect()
}

fn name1(stem: &str, i: usize) -> String {
    format!("{stem}[i={}]", i + 1)
}

fn name2(stem: &str, i: usize, j: usize) -> String {
    format!("{stem}[i={},j={}]", i + 1, j + 1)
}

/// The complete named relation list of `pid` for the given Cartan data.
pub fn relation_set(pid: PresentationId, cd: &CartanData) -> Vec<Relation> {
    use Generator::*;
    let n = cd.rank();
    let qp = cd.qp();
    let one = Scalar::one;
    let mut out = Vec::new();
    let mut push = |name: String, expr: RelationExpr| out.push(Relation { name, expr });

    let (stem, k, kinv) = match pid {
        PresentationId::ChevalleyFull => (
            "R",
            K as fn(usize) -> Generator,
            Kinv as fn(usize) -> Generator,
        ),
        PresentationId::EquitableFull => (
            "E",
            K as fn(usize) -> Generator,
            Kinv as fn(usize) -> Generator,
        ),
        PresentationId::ChevalleyBorel => (
            "r",
            BK as fn(usize) -> Generator,
            BKinv as fn(usize) -> Generator,
        ),
        PresentationId::EquitableBorel => (
            "e",
            BK as fn(usize) -> Generator,
            BKinv as fn(usize) -> Generator,
        ),
    };
    let tag = |m: u32| format!("{stem}{m}");

    // inverse pairs, then commuting toral parts
    for i in 0..n {
        push(
            name1(&tag(1), i),
            RelationExpr::new()
                .term(one(), &[k(i), kinv(i)])
                .term(-one(), &[]),
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            push(
                name2(&tag(2), i, j),
                RelationExpr::new()
                    .term(one(), &[k(i), k(j)])
                    .term(-one(), &[k(j), k(i)]),
            );
        }
    }

    match pid {
        PresentationId::ChevalleyFull | PresentationId::ChevalleyBorel => {
            let (e, f) = if pid == PresentationId::ChevalleyFull {
                (
                    E as fn(usize) -> Generator,
                    Some(F as fn(usize) -> Generator),
                )
            } else {
                (BE as fn(usize) -> Generator, None)
            };
            for i in 0..n {
                for j in 0..n {
                    push(
                        name2(&tag(3), i, j),
                        RelationExpr::new()
                            .term(one(), &[k(i), e(j), kinv(i)])
                            .term(-qp.q_pow(i, cd.a(i, j)), &[e(j)]),
                    );
                }
            }
            if let Some(f) = f {
                for i in 0..n {
                    for j in 0..n {
                        push(
                            name2("R4", i, j),
                            RelationExpr::new()
                                .term(one(), &[k(i), f(j), kinv(i)])
                                .term(-qp.q_pow(i, -cd.a(i, j)), &[f(j)]),
                        );
                    }
                }
                for i in 0..n {
                    let inv_diff = qp.q_diff(i).inv().expect("q_i != ±1");
                    for j in 0..n {
                        let mut expr = RelationExpr::new()
                            .term(one(), &[e(i), f(j)])
                            .term(-one(), &[f(j), e(i)]);
                        if i == j {
                            expr = expr
                                .term(-inv_diff.clone(), &[k(i)])
                                .term(inv_diff.clone(), &[kinv(i)]);
                        }
                        push(name2("R5", i, j), expr);
                    }
                }
            }
            let serre_stem = if f.is_some() { "R6" } else { "r4" };
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    push(
                        name2(serre_stem, i, j),
                        serre(cd, i, j, e(i), &[(one(), vec![e(j)])], None),
                    );
                }
            }
            if let Some(f) = f {
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        push(
                            name2("R7", i, j),
                            serre(cd, i, j, f(i), &[(one(), vec![f(j)])], None),
                        );
                    }
                }
            }
        }
        PresentationId::EquitableFull | PresentationId::EquitableBorel => {
            let full = pid == PresentationId::EquitableFull;
            let y: fn(usize) -> Generator = if full { Y } else { BY };
            // Y_i K_j - q_i^{-A_ij} K_j Y_i = K_i K_j (1 - q_i^{-A_ij})
            for i in 0..n {
                for j in 0..n {
                    let p = qp.q_pow(i, -cd.a(i, j));
                    push(
                        name2(&tag(3), i, j),
                        RelationExpr::new()
                            .term(one(), &[y(i), k(j)])
                            .term(-p.clone(), &[k(j), y(i)])
                            .term(p - one(), &[k(i), k(j)]),
                    );
                }
            }
            if full {
                for i in 0..n {
                    for j in 0..n {
                        let p = qp.q_pow(i, cd.a(i, j));
                        push(
                            name2("E4", i, j),
                            RelationExpr::new()
                                .term(one(), &[Z(i), K(j)])
                                .term(-p.clone(), &[K(j), Z(i)])
                                .term(p - one(), &[K(i), K(j)]),
                        );
                    }
                }
                for i in 0..n {
                    let q2 = qp.q_pow(i, 2);
                    push(
                        name1("E5", i),
                        RelationExpr::new()
                            .term(one(), &[Z(i), Y(i)])
                            .term(-q2.clone(), &[Y(i), Z(i)])
                            .term(q2 - one(), &[]),
                    );
                }
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        let p = qp.q_pow(i, cd.a(i, j));
                        push(
                            name2("E6", i, j),
                            RelationExpr::new()
                                .term(one(), &[Z(i), Y(j)])
                                .term(-p.clone(), &[Y(j), Z(i)])
                                .term(p - one(), &[K(i), K(j)]),
                        );
                    }
                }
            }
            let serre_stem = if full { "E7" } else { "e4" };
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    push(
                        name2(serre_stem, i, j),
                        serre(
                            cd,
                            i,
                            j,
                            y(i),
                            &[(one(), vec![y(j)])],
                            Some(serre_rhs(cd, i, j, k)),
                        ),
                    );
                }
            }
            if full {
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        push(
                            name2("E8", i, j),
                            serre(
                                cd,
                                i,
                                j,
                                Z(i),
                                &[(one(), vec![Z(j)])],
                                Some(serre_rhs(cd, i, j, K)),
                            ),
                        );
                    }
                }
            } else {
                // the extra Borel relation with e_j = (y_j - k_j)/(q_j - q_j^{-1})
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        let c = qp.q_diff(j).inv().expect("q_j != ±1");
                        let middle = [(c.clone(), vec![BY(j)]), (-c, vec![BK(j)])];
                        push(name2("rel19", i, j), serre(cd, i, j, BY(i), &middle, None));
                    }
                }
            }
        }
    }
    out
}

fn expect_pid(rep: &Representation, pid: PresentationId) -> Result<()> {
    if rep.pid() != pid {
        return Err(Error::Presentation {
            expected: pid,
            found: rep.pid(),
        });
    }
    Ok(())
}

fn rebuild(
    rep: &Representation,
    pid: PresentationId,
    assign: BTreeMap<Generator, Matrix>,
) -> Result<Representation> {
    Representation::new(pid, rep.cartan().clone(), rep.dim(), assign)
}

/// `Y_i = K_i + (q_i - q_i^{-1}) E_i`, `Z_i = K_i - q_i (q_i - q_i^{-1}) K_i F_i`.
pub fn chevalley_to_equitable(rep: &Representation) -> Result<Representation> {
    expect_pid(rep, PresentationId::ChevalleyFull)?;
    let qp = rep.cartan().qp();
    let mut out = BTreeMap::new();
    for i in 0..rep.cartan().rank() {
        let c = qp.q_diff(i);
        let k = rep.get(Generator::K(i))?;
        let e = rep.get(Generator::E(i))?;
        let f = rep.get(Generator::F(i))?;
        out.insert(Generator::K(i), k.clone());
        out.insert(Generator::Kinv(i), rep.get(Generator::Kinv(i))?.clone());
        out.insert(Generator::Y(i), k + &e.scale(&c));
        out.insert(Generator::Z(i), k - &(k * f).scale(&(&qp.q_i(i) * &c)));
    }
    rebuild(rep, PresentationId::EquitableFull, out)
}

/// `E_i = (Y_i - K_i)/(q_i - q_i^{-1})`, `F_i = (1 - K_i^{-1} Z_i) q_i^{-1} (q_i - q_i^{-1})^{-1}`.
pub fn equitable_to_chevalley(rep: &Representation) -> Result<Representation> {
    expect_pid(rep, PresentationId::EquitableFull)?;
    let qp = rep.cartan().qp();
    let n = rep.dim();
    let mut out = BTreeMap::new();
    for i in 0..rep.cartan().rank() {
        let inv_c = qp.q_diff(i).inv().expect("q_i != ±1");
        let k = rep.get(Generator::K(i))?;
        let kinv = rep.get(Generator::Kinv(i))?;
        let y = rep.get(Generator::Y(i))?;
        let z = rep.get(Generator::Z(i))?;
        out.insert(Generator::K(i), k.clone());
        out.insert(Generator::Kinv(i), kinv.clone());
        out.insert(Generator::E(i), (y - k).scale(&inv_c));
        let f = &Matrix::identity(n) - &(kinv * z);
        out.insert(Generator::F(i), f.scale(&(&qp.q_pow(i, -1) * &inv_c)));
    }
    rebuild(rep, PresentationId::ChevalleyFull, out)
}

/// `y_i = k_i + (q_i - q_i^{-1}) e_i`.
pub fn borel_to_equitable(rep: &Representation) -> Result<Representation> {
    expect_pid(rep, PresentationId::ChevalleyBorel)?;
    let qp = rep.cartan().qp();
    let mut out = BTreeMap::new();
    for i in 0..rep.cartan().rank() {
        let k = rep.get(Generator::BK(i))?;
        let e = rep.get(Generator::BE(i))?;
        out.insert(Generator::BK(i), k.clone());
        out.insert(Generator::BKinv(i), rep.get(Generator::BKinv(i))?.clone());
        out.insert(Generator::BY(i), k + &e.scale(&qp.q_diff(i)));
    }
    rebuild(rep, PresentationId::EquitableBorel, out)
}

/// `e_i = (y_i - k_i)/(q_i - q_i^{-1})`.
pub fn equitable_to_borel(rep: &Representation) -> Result<Representation> {
    expect_pid(rep, PresentationId::EquitableBorel)?;
    let qp = rep.cartan().qp();
    let mut out = BTreeMap::new();
    for i in 0..rep.cartan().rank() {
        let inv_c = qp.q_diff(i).inv().expect("q_i != ±1");
        let k = rep.get(Generator::BK(i))?;
        let y = rep.get(Generator::BY(i))?;
        out.insert(Generator::BK(i), k.clone());
        out.insert(Generator::BKinv(i), rep.get(Generator::BKinv(i))?.clone());
        out.insert(Generator::BE(i), (y - k).scale(&inv_c));
    }
    rebuild(rep, PresentationId::ChevalleyBorel, out)
}

/// The Borel part of a full Chevalley module: `e_i = E_i`, `k_i^{±1} = K_i^{±1}`.
pub fn borel_of(rep: &Representation) -> Result<Representation> {
    expect_pid(rep, PresentationId::ChevalleyFull)?;
    let mut out = BTreeMap::new();
    for i in 0..rep.cartan().rank() {
        out.insert(Generator::BE(i), rep.get(Generator::E(i))?.clone());
        out.insert(Generator::BK(i), rep.get(Generator::K(i))?.clone());
        out.insert(Generator::BKinv(i), rep.get(Generator::Kinv(i))?.clone());
    }
    rebuild(rep, PresentationId::ChevalleyBorel, out)
}

/// Re-express `rep` in presentation `target` when a conversion exists.
pub fn convert(rep: &Representation, target: PresentationId) -> Result<Representation> {
    use PresentationId::*;
    match (rep.pid(), target) {
        (a, b) if a == b => Ok(rep.clone()),
        (ChevalleyFull, EquitableFull) => chevalley_to_equitable(rep),
        (EquitableFull, ChevalleyFull) => equitable_to_chevalley(rep),
        (ChevalleyFull, ChevalleyBorel) => borel_of(rep),
        (ChevalleyFull, EquitableBorel) => borel_to_equitable(&borel_of(rep)?),
        (EquitableFull, ChevalleyBorel) => borel_of(&equitable_to_chevalley(rep)?),
        (EquitableFull, EquitableBorel) => {
            borel_to_equitable(&borel_of(&equitable_to_chevalley(rep)?)?)
        }
        (ChevalleyBorel, EquitableBorel) => borel_to_equitable(rep),
        (EquitableBorel, ChevalleyBorel) => equitable_to_borel(rep),
        (found, expected) => Err(Error::Presentation { expected, found }),
    }
}
