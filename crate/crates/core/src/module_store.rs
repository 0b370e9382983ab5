//! Concrete representations, the relation verifier, the affine `sl_2` evaluation-module
//! factory, type/shape detection, and irreducibility testing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::presentation::{self, relation_set, CartanData, Generator, PresentationId};
use crate::scalar::Scalar;

/// A sign `±1`; serialized as the integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(x: i64) -> Result<Sign> {
        match x {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!(
                "{x} is not a sign (expected 1 or -1)"
            ))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_scalar(self) -> Scalar {
        Scalar::from_int(self.as_i64())
    }

    /// The sign of a nonzero `x`.
    pub fn of(x: &Scalar) -> Sign {
        if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn all_plus(n: usize) -> Vec<Sign> {
        vec![Sign::Plus; n]
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        let x: i64 = s
            .trim()
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Parse(format!("bad sign {s:?}")))?;
        Sign::from_i64(x)
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Sign::from_i64(i64::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// A square-matrix assignment for every generator of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pid: PresentationId,
    cd: CartanData,
    dim: usize,
    assign: BTreeMap<Generator, Matrix>,
}

impl Representation {
    pub fn new(
        pid: PresentationId,
        cd: CartanData,
        dim: usize,
        assign: BTreeMap<Generator, Matrix>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(
                "a module needs dimension at least 1".into(),
            ));
        }
        let table = pid.generators(cd.rank());
        for g in &table {
            let m = assign.get(g).ok_or(Error::Unassigned(*g))?;
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension(format!(
                    "{g} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if let Some(extra) = assign.keys().find(|g| !table.contains(g)) {
            return Err(Error::Domain(format!(
                "{extra} is not a generator of {pid}"
            )));
        }
        Ok(Representation {
            pid,
            cd,
            dim,
            assign,
        })
    }

    pub fn pid(&self) -> PresentationId {
        self.pid
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn rank(&self) -> usize {
        self.cd.rank()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, g: Generator) -> Result<&Matrix> {
        self.assign.get(&g).ok_or(Error::Unassigned(g))
    }

    pub fn assignments(&self) -> impl Iterator<Item = (Generator, &Matrix)> {
        self.assign.iter().map(|(g, m)| (*g, m))
    }

    /// A copy with one generator matrix replaced.
    pub fn with_matrix(&self, g: Generator, m: Matrix) -> Result<Self> {
        let mut assign = self.assign.clone();
        assign.insert(g, m);
        Representation::new(self.pid, self.cd.clone(), self.dim, assign)
    }

    /// Block-diagonal sum of two modules over the same presentation and Cartan data.
    pub fn direct_sum(&self, other: &Representation) -> Result<Self> {
        if self.pid != other.pid {
            return Err(Error::Presentation {
                expected: self.pid,
                found: other.pid,
            });
        }
        if self.cd != other.cd {
            return Err(Error::Domain(
                "direct sum over different Cartan data".into(),
            ));
        }
        let assign = self
            .assign
            .iter()
            .map(|(g, m)| (*g, m.direct_sum(&other.assign[g])))
            .collect();
        Representation::new(self.pid, self.cd.clone(), self.dim + other.dim, assign)
    }

    pub fn require(&self, pid: PresentationId) -> Result<()> {
        if self.pid != pid {
            return Err(Error::Presentation {
                expected: pid,
                found: self.pid,
            });
        }
        Ok(())
    }

    pub fn require_borel(&self) -> Result<()> {
        if !self.pid.is_borel() {
            return Err(Error::Presentation {
                expected: PresentationId::ChevalleyBorel,
                found: self.pid,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("representation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    presentation: PresentationId,
    cartan: CartanData,
    dim: usize,
    assign: BTreeMap<String, Matrix>,
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RepresentationJson {
            presentation: self.pid,
            cartan: self.cd.clone(),
            dim: self.dim,
            assign: self
                .assign
                .iter()
                .map(|(g, m)| (g.to_string(), m.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RepresentationJson::deserialize(deserializer)?;
        let mut assign = BTreeMap::new();
        for (name, m) in raw.assign {
            let g: Generator = name.parse().map_err(D::Error::custom)?;
            assign.insert(g, m);
        }
        Representation::new(raw.presentation, raw.cartan, raw.dim, assign).map_err(D::Error::custom)
    }
}

/// One named check; `violations` counts nonzero entries (relations) or offending
/// basis vectors (subspace checks).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub entries: Vec<CheckEntry>,
    pub overall: bool,
}

impl VerifyReport {
    pub fn new() -> Self {
        VerifyReport {
            entries: Vec::new(),
            overall: true,
        }
    }

    pub fn from_entries(entries: Vec<CheckEntry>) -> Self {
        let overall = entries.iter().all(|e| e.pass);
        VerifyReport { entries, overall }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, violations: usize) {
        self.overall &= pass;
        self.entries.push(CheckEntry {
            name: name.into(),
            pass,
            violations,
        });
    }

    /// Record a boolean check with one violation on failure.
    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.push(name, pass, usize::from(!pass));
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.overall &= other.overall;
        self.entries.extend(other.entries);
    }

    pub fn failed(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| e.name.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mark = if e.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("{mark} {} ({} nonzero)\n", e.name, e.violations));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall { "pass" } else { "FAIL" }
        ));
        out
    }
}

/// Evaluate every relation of the module's own presentation.
pub fn verify(rep: &Representation) -> VerifyReport {
    let rels = relation_set(rep.pid(), rep.cartan());
    let entries = rels
        .par_iter()
        .map(|r| {
            let violations = r
                .expr
                .evaluate(rep)
                .map(|m| m.nonzero_count())
                .unwrap_or(usize::MAX);
            CheckEntry {
                name: r.name.clone(),
                pass: violations == 0,
                violations,
            }
        })
        .collect();
    VerifyReport::from_entries(entries)
}

/// Verify after converting to `pid` (e.g. a full Chevalley module against E1–E8).
pub fn verify_as(rep: &Representation, pid: PresentationId) -> Result<VerifyReport> {
    Ok(verify(&presentation::convert(rep, pid)?))
}

/// Evaluation module of affine `sl_2` on `v_0..v_d`; node index 0 is the affine node.
///
/// The string node acts by `K v_i = eps_2 q^{2i-d} v_i`, `E v_i = [i+1] v_{i+1}`,
/// `F v_i = eps_2 [d-i+1] v_{i-1}`; the affine node by `K_1 = eps_1 eps_2 K_2^{-1}`,
/// `E_1 = eps_1 a F_2'` (with `F_2'` the string lowering operator without `eps_2`),
/// `F_1 = a^{-1} E_2`. The result must pass `verify` and the exact irreducibility test.
pub fn evaluation_module(
    d: usize,
    a: &Scalar,
    eps: [Sign; 2],
    cd: &CartanData,
) -> Result<Representation> {
    if !cd.is_affine_sl2() {
        return Err(Error::Cartan(
            "the evaluation-module factory needs affine sl2 data A = [[2,-2],[-2,2]], s = (1,1)"
                .into(),
        ));
    }
    let a_inv = a
        .inv()
        .ok_or_else(|| Error::Domain("evaluation parameter a must be nonzero".into()))?;
    let qp = cd.qp();
    let n = d + 1;
    let di = d as i64;
    let (e1, e2) = (eps[0].as_scalar(), eps[1].as_scalar());

    let k2_plain = Matrix::from_diagonal(
        &(0..n as i64)
            .map(|i| qp.q_pow(1, 2 * i - di))
            .collect::<Vec<_>>(),
    );
    let mut raise = Matrix::zeros(n, n);
    let mut lower = Matrix::zeros(n, n);
    for i in 0..d {
        raise[(i + 1, i)] = qp.q_int(i as i64 + 1, 1);
        // F' v_{i+1} = [d - i] v_i
        lower[(i, i + 1)] = qp.q_int(di - i as i64, 1);
    }
    let k2 = k2_plain.scale(&e2);
    let k2inv = k2.inverse().expect("diagonal with nonzero entries");
    let k1 = k2inv.scale(&(&e1 * &e2));
    let k1inv = k2.scale(&(&e1 * &e2));

    let mut assign = BTreeMap::new();
    assign.insert(Generator::K(1), k2);
    assign.insert(Generator::Kinv(1), k2inv);
    assign.insert(Generator::E(1), raise.clone());
    assign.insert(Generator::F(1), lower.scale(&e2));
    assign.insert(Generator::K(0), k1);
    assign.insert(Generator::Kinv(0), k1inv);
    assign.insert(Generator::E(0), lower.scale(&(&e1 * a)));
    assign.insert(Generator::F(0), raise.scale(&a_inv));
    let rep = Representation::new(PresentationId::ChevalleyFull, cd.clone(), n, assign)?;

    let report = verify(&rep);
    if !report.overall {
        return Err(Error::FactoryGate(format!(
            "d={d}, a={a}: relations failed: {}",
            report.failed().join(", ")
        )));
    }
    match is_irreducible(&rep) {
        Irreducibility::Irreducible => Ok(rep),
        other => Err(Error::FactoryGate(format!(
            "d={d}, a={a}: irreducibility verdict {}",
            other.label()
        ))),
    }
}

/// The `k_i^{±1}`, `e_i`, `y_i` matrices of a Borel module in either presentation.
#[derive(Clone, Debug)]
pub struct BorelOps {
    pub k: Vec<Matrix>,
    pub kinv: Vec<Matrix>,
    pub e: Vec<Matrix>,
    pub y: Vec<Matrix>,
}

impl BorelOps {
    pub fn of(rep: &Representation) -> Result<Self> {
        rep.require_borel()?;
        let (cb, eb) = match rep.pid() {
            PresentationId::ChevalleyBorel => (rep.clone(), presentation::borel_to_equitable(rep)?),
            _ => (presentation::equitable_to_borel(rep)?, rep.clone()),
        };
        let n = rep.rank();
        let collect = |r: &Representation, g: fn(usize) -> Generator| -> Result<Vec<Matrix>> {
            (0..n).map(|i| r.get(g(i)).cloned()).collect()
        };
        Ok(BorelOps {
            k: collect(&cb, Generator::BK)?,
            kinv: collect(&cb, Generator::BKinv)?,
            e: collect(&cb, Generator::BE)?,
            y: collect(&eb, Generator::BY)?,
        })
    }
}

/// `e_i ↦ ε_i α_i e_i`, `k_i^{±1} ↦ ε_i α_i^{±1} k_i^{±1}` (and `y_i ↦ ε_i α_i y_i`).
pub fn twist(rep: &Representation, alpha: &[Scalar], eps: &[Sign]) -> Result<Representation> {
    rep.require_borel()?;
    let n = rep.rank();
    if alpha.len() != n || eps.len() != n {
        return Err(Error::Dimension(format!(
            "twist needs {n} scalars and {n} signs"
        )));
    }
    let mut assign = BTreeMap::new();
    for (g, m) in rep.assignments() {
        let i = g.node();
        let ea = &eps[i].as_scalar() * &alpha[i];
        let c = match g {
            Generator::BKinv(_) => ea
                .inv()
                .ok_or_else(|| Error::Domain(format!("alpha_{} must be nonzero", i + 1)))?,
            _ => {
                if ea.is_zero() {
                    return Err(Error::Domain(format!("alpha_{} must be nonzero", i + 1)));
                }
                ea
            }
        };
        assign.insert(g, m.scale(&c));
    }
    Representation::new(rep.pid(), rep.cartan().clone(), rep.dim(), assign)
}

/// What to do when the occupied `k_i` slots are not symmetric about the midpoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AsymmetryPolicy {
    Ignore,
    #[default]
    Warn,
    Reject,
}

/// Ladder data of one node: slot `s` carries the `k_i` eigenvalue `eta * q_i^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeProfile {
    /// Lowest eigenvalue on the ladder.
    pub eta: Scalar,
    /// Twice the shape `d_i`.
    pub d2: u32,
    /// `eta * q_i^{d_i}` when it is rational.
    pub alpha: Option<Scalar>,
    pub occupied: Vec<u32>,
}

impl NodeProfile {
    pub fn d_is_integral(&self) -> bool {
        self.d2.is_multiple_of(2)
    }

    pub fn d(&self) -> Option<u32> {
        self.d_is_integral().then_some(self.d2 / 2)
    }

    pub fn d_label(&self) -> String {
        if self.d2.is_multiple_of(2) {
            (self.d2 / 2).to_string()
        } else {
            format!("{}/2", self.d2)
        }
    }

    /// `eta * q_i^s`, the slot-`s` eigenvalue, i.e. `alpha_i q_i^{s - d_i}`.
    pub fn slot_value(&self, cd: &CartanData, i: usize, s: i64) -> Scalar {
        &self.eta * &cd.qp().q_pow(i, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleProfile {
    pub nodes: Vec<NodeProfile>,
    pub warnings: Vec<String>,
}

impl ModuleProfile {
    pub fn alpha(&self) -> Option<Vec<Scalar>> {
        self.nodes.iter().map(|p| p.alpha.clone()).collect()
    }

    pub fn d2(&self) -> Vec<u32> {
        self.nodes.iter().map(|p| p.d2).collect()
    }
}

impl Serialize for ModuleProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ModuleProfile", 4)?;
        let alpha: Vec<Option<Scalar>> = self.nodes.iter().map(|p| p.alpha.clone()).collect();
        let d: Vec<String> = self.nodes.iter().map(NodeProfile::d_label).collect();
        let eta: Vec<&Scalar> = self.nodes.iter().map(|p| &p.eta).collect();
        st.serialize_field("alpha", &alpha)?;
        st.serialize_field("d", &d)?;
        st.serialize_field("eta", &eta)?;
        st.serialize_field("warnings", &self.warnings)?;
        st.end()
    }
}

/// Rational eigenvalues of `m` with multiplicities, or a field-escape error.
fn rational_eigenvalues(m: &Matrix, operator: &str) -> Result<Vec<(Scalar, usize)>> {
    let spec = m.rational_spectrum();
    if !spec.complete {
        return Err(Error::FieldEscape {
            operator: operator.to_string(),
        });
    }
    Ok(spec.eigenvalues)
}

/// Type `alpha` and shape `d` of a Borel module from the `k_i` spectra.
pub fn detect_profile(
    rep: &Representation,
    alpha_hint: Option<&[Scalar]>,
    policy: AsymmetryPolicy,
) -> Result<ModuleProfile> {
    let ops = BorelOps::of(rep)?;
    let cd = rep.cartan();
    let qp = cd.qp();
    let mut nodes = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..rep.rank() {
        let operator = format!("k{}", i + 1);
        let eig = rational_eigenvalues(&ops.k[i], &operator)?;
        let theta0 = eig[0].0.clone();
        let qi = qp.q_i(i);
        let exps: Vec<i64> = eig
            .iter()
            .map(|(t, _)| (t / &theta0).log_base(&qi))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::NotALadder {
                operator: operator.clone(),
            })?;
        let lo = *exps.iter().min().expect("nonempty spectrum");
        let hi = *exps.iter().max().expect("nonempty spectrum");
        let eta = &theta0 * &qi.pow(lo);
        let d2 = (hi - lo) as u32;
        let occupied: BTreeSet<u32> = exps.iter().map(|&m| (m - lo) as u32).collect();
        let alpha = if d2.is_multiple_of(2) {
            Some(&eta * &qi.pow(d2 as i64 / 2))
        } else {
            qi.sqrt_exact()
                .map(|r| &(&eta * &qi.pow((d2 as i64 - 1) / 2)) * &r)
        };
        let symmetric = occupied.iter().all(|s| occupied.contains(&(d2 - s)));
        if !symmetric {
            let slots: Vec<u32> = occupied.iter().copied().collect();
            match policy {
                AsymmetryPolicy::Ignore => {}
                AsymmetryPolicy::Warn => {
                    let msg = format!("{operator}: occupied slots {slots:?} are not symmetric");
                    log::warn!("{msg}");
                    warnings.push(msg);
                }
                AsymmetryPolicy::Reject => {
                    return Err(Error::AsymmetricSpectrum { operator, slots })
                }
            }
        }
        if let Some(hint) = alpha_hint {
            let want = hint.get(i).ok_or_else(|| {
                Error::Dimension(format!(
                    "alpha hint has {} entries, need {}",
                    hint.len(),
                    rep.rank()
                ))
            })?;
            if alpha.as_ref() != Some(want) {
                return Err(Error::TypeMismatch {
                    node: i + 1,
                    expected: want.to_string(),
                    detected: alpha
                        .as_ref()
                        .map(Scalar::to_string)
                        .unwrap_or_else(|| format!("{eta}*q_i^({d2}/2)")),
                });
            }
        }
        nodes.push(NodeProfile {
            eta,
            d2,
            alpha,
            occupied: occupied.into_iter().collect(),
        });
    }
    Ok(ModuleProfile { nodes, warnings })
}

/// Type `eps` of a full module plus the distinct `K_i` exponents `m` (eigenvalue `eps_i q_i^m`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullType {
    pub eps: Vec<Sign>,
    pub exponents: Vec<Vec<i64>>,
}

pub fn detect_full_type(rep: &Representation) -> Result<FullType> {
    let k_gen = match rep.pid() {
        PresentationId::ChevalleyFull | PresentationId::EquitableFull => Generator::K,
        _ => {
            return Err(Error::Presentation {
                expected: PresentationId::ChevalleyFull,
                found: rep.pid(),
            })
        }
    };
    let qp = rep.cartan().qp();
    let mut eps = Vec::new();
    let mut exponents = Vec::new();
    for i in 0..rep.rank() {
        let operator = format!("K{}", i + 1);
        let eig = rational_eigenvalues(rep.get(k_gen(i))?, &operator)?;
        let qi = qp.q_i(i);
        let mut sign: Option<Sign> = None;
        let mut ms = Vec::new();
        for (theta, _) in &eig {
            let m = theta
                .abs()
                .log_base(&qi.abs())
                .ok_or_else(|| Error::NotALadder {
                    operator: operator.clone(),
                })?;
            let e = Sign::of(&(theta / &qi.pow(m)));
            if *sign.get_or_insert(e) != e {
                return Err(Error::TypeMismatch {
                    node: i + 1,
                    expected: sign.expect("set").to_string(),
                    detected: e.to_string(),
                });
            }
            ms.push(m);
        }
        ms.sort_unstable();
        eps.push(sign.expect("nonempty spectrum"));
        exponents.push(ms);
    }
    Ok(FullType { eps, exponents })
}

/// Smallest subspace containing `v` and invariant under every assigned matrix.
pub fn submodule_closure(rep: &Representation, v: &[Scalar]) -> Subspace {
    let n = rep.dim();
    let mut span = Subspace::spanned_by(n, [v.to_vec()]);
    let mut queue: Vec<Vec<Scalar>> = span.basis_vectors().to_vec();
    while let Some(w) = queue.pop() {
        for (_, m) in rep.assignments() {
            let img = m.apply(&w);
            if !span.contains_vector(&img) {
                span = Subspace::spanned_by(
                    n,
                    span.basis_vectors().iter().cloned().chain([img.clone()]),
                );
                queue.push(img);
            }
        }
        if span.is_full() {
            break;
        }
    }
    span
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible(Subspace),
    Undecided,
}

impl Irreducibility {
    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible => "IRREDUCIBLE",
            Irreducibility::Reducible(_) => "REDUCIBLE",
            Irreducibility::Undecided => "UNDECIDED",
        }
    }
}

impl Serialize for Irreducibility {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Irreducibility", 2)?;
        st.serialize_field("verdict", self.label())?;
        match self {
            Irreducibility::Reducible(w) => st.serialize_field("witness", w)?,
            _ => st.serialize_field("witness", &Option::<Subspace>::None)?,
        }
        st.end()
    }
}

const PROBES: usize = 20;
const PROBE_SEED: u64 = 0x5eed_cafe;

/// Eigenspaces of `m` when it is diagonalizable over the rationals.
fn eigenspaces(m: &Matrix) -> Option<Vec<Subspace>> {
    let spec = m.rational_spectrum();
    if !spec.complete {
        return None;
    }
    let spaces: Vec<Subspace> = spec
        .eigenvalues
        .iter()
        .map(|(t, _)| Subspace::eigenspace(m, t).expect("square"))
        .collect();
    let total: usize = spaces.iter().map(Subspace::dim).sum();
    (total == m.rows()).then_some(spaces)
}

pub fn is_irreducible(rep: &Representation) -> Irreducibility {
    let n = rep.dim();
    if n == 1 {
        return Irreducibility::Irreducible;
    }
    let diagonalizable: Vec<Vec<Subspace>> = rep
        .assignments()
        .filter_map(|(_, m)| eigenspaces(m))
        .collect();

    // exact branch: a multiplicity-free diagonalizable generator
    if let Some(spaces) = diagonalizable.iter().find(|sp| sp.len() == n) {
        for line in spaces {
            let closure = submodule_closure(rep, &line.basis_vectors()[0]);
            if !closure.is_full() {
                return Irreducibility::Reducible(closure);
            }
        }
        return Irreducibility::Irreducible;
    }

    let spin = |v: &[Scalar]| -> Option<Subspace> {
        let c = submodule_closure(rep, v);
        (!c.is_zero() && !c.is_full()).then_some(c)
    };
    for spaces in &diagonalizable {
        for sp in spaces {
            for v in sp.basis_vectors() {
                if let Some(w) = spin(v) {
                    return Irreducibility::Reducible(w);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let pools: Vec<&Subspace> = diagonalizable.iter().flatten().collect();
    let full = Subspace::full(n);
    for _ in 0..PROBES {
        let pool = if pools.is_empty() {
            &full
        } else {
            pools[rng.gen_range(0..pools.len())]
        };
        let mut v = vec![Scalar::zero(); n];
        for b in pool.basis_vectors() {
            let c = Scalar::from_int(rng.gen_range(-3..=3));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &(&c * y);
            }
        }
        if v.iter().all(Scalar::is_zero) {
            v = pool
                .basis_vectors()
                .first()
                .cloned()
                .unwrap_or_else(|| unit_vector(n, 0));
        }
        if let Some(w) = spin(&v) {
            return Irreducibility::Reducible(w);
        }
    }
    Irreducibility::Undecided
}
