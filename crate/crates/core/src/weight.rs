//! Weight spaces of full modules, Weyl reflections on exponent vectors, the orbit
//! graph, `U_q(sl2)` triples and the central element.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::module_store::{detect_full_type, Representation, Sign, VerifyReport};
use crate::presentation::{CartanData, Generator, PresentationId};
use crate::scalar::Scalar;

pub const ORBIT_BOUND: usize = 10_000;

/// Exponent vector `m`, with `K_i` acting on the weight space by `eps_i q_i^{m_i}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Pairing with the coroot of node `j`.
    pub fn pairing(&self, j: usize) -> i64 {
        self.0[j]
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `m_j -> m_j - m_i A_ji`.
pub fn reflect(w: &Weight, i: usize, cd: &CartanData) -> Weight {
    let mi = w.0[i];
    Weight(
        w.0.iter()
            .enumerate()
            .map(|(j, &mj)| mj - mi * cd.a(j, i))
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightSpace {
    pub weight: Weight,
    pub space: Subspace,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightDecomposition {
    pub eps: Vec<Sign>,
    pub spaces: Vec<WeightSpace>,
}

impl WeightDecomposition {
    pub fn get(&self, w: &Weight) -> Option<&Subspace> {
        self.spaces
            .binary_search_by(|ws| ws.weight.cmp(w))
            .ok()
            .map(|k| &self.spaces[k].space)
    }

    pub fn dim_of(&self, w: &Weight) -> usize {
        self.get(w).map_or(0, Subspace::dim)
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.spaces.iter().map(|ws| &ws.weight)
    }

    pub fn is_direct(&self, ambient: usize) -> bool {
        let parts: Vec<Subspace> = self.spaces.iter().map(|ws| ws.space.clone()).collect();
        Subspace::is_direct_decomposition(ambient, &parts)
    }
}

/// Simultaneous eigenspaces of the `K_i`, sorted by weight.
pub fn weight_decomposition(rep: &Representation) -> Result<WeightDecomposition> {
    rep.require(PresentationId::ChevalleyFull)?;
    let eps = detect_full_type(rep)?.eps;
    let qp = rep.cartan().qp();
    let dim = rep.dim();
    let mut cells: Vec<(Vec<i64>, Subspace)> = vec![(Vec::new(), Subspace::full(dim))];
    for i in 0..rep.rank() {
        let k = rep.get(Generator::K(i))?;
        let spectrum = k.rational_spectrum();
        if !spectrum.complete {
            return Err(Error::FieldEscape {
                operator: format!("K{}", i + 1),
            });
        }
        let qi = qp.q_i(i);
        let mut eigen = Vec::new();
        for (theta, _) in &spectrum.eigenvalues {
            let m = theta
                .abs()
                .log_base(&qi.abs())
                .ok_or_else(|| Error::NotALadder {
                    operator: format!("K{}", i + 1),
                })?;
            eigen.push((m, Subspace::eigenspace(k, theta)?));
        }
        let mut next = Vec::new();
        for (ms, cell) in &cells {
            for (m, space) in &eigen {
                let part = cell.intersect(space)?;
                if !part.is_zero() {
                    let mut w = ms.clone();
                    w.push(*m);
                    next.push((w, part));
                }
            }
        }
        cells = next;
    }
    if cells.iter().map(|(_, s)| s.dim()).sum::<usize>() != dim {
        return Err(Error::NotSemisimple {
            operator: "K".into(),
        });
    }
    let mut spaces: Vec<WeightSpace> = cells
        .into_iter()
        .map(|(m, space)| WeightSpace {
            weight: Weight(m),
            space,
        })
        .collect();
    spaces.sort_by(|a, b| a.weight.cmp(&b.weight));
    Ok(WeightDecomposition { eps, spaces })
}

/// Directed graph on a reflection orbit with an edge `mu -> r_h(mu)` whenever `m_h(mu) < 0`.
#[derive(Clone, Debug)]
pub struct OrbitGraph {
    pub vertices: BTreeSet<Weight>,
    /// Outgoing edges as (witness node, target).
    pub edges: BTreeMap<Weight, Vec<(usize, Weight)>>,
}

/// Closure of `seeds` under all reflections with the graph edges on it.
pub fn orbit_graph<'a, I>(seeds: I, cd: &CartanData, bound: usize) -> Result<OrbitGraph>
where
    I: IntoIterator<Item = &'a Weight>,
{
    let n = cd.rank();
    let mut vertices = BTreeSet::new();
    let mut queue = VecDeque::new();
    for w in seeds {
        if vertices.insert(w.clone()) {
            queue.push_back(w.clone());
        }
    }
    while let Some(w) = queue.pop_front() {
        for i in 0..n {
            let r = reflect(&w, i, cd);
            if vertices.insert(r.clone()) {
                if vertices.len() > bound {
                    return Err(Error::OrbitBound(bound));
                }
                queue.push_back(r);
            }
        }
    }
    let edges = vertices
        .iter()
        .map(|w| {
            let out = (0..n)
                .filter(|&h| w.0[h] < 0)
                .map(|h| (h, reflect(w, h, cd)))
                .collect();
            (w.clone(), out)
        })
        .collect();
    Ok(OrbitGraph { vertices, edges })
}

impl OrbitGraph {
    pub fn out_degree(&self, w: &Weight) -> usize {
        self.edges.get(w).map_or(0, Vec::len)
    }

    pub fn in_degree(&self, w: &Weight) -> usize {
        self.edges
            .values()
            .flatten()
            .filter(|(_, t)| t == w)
            .count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(Vec::len).sum()
    }

    /// Shortest directed path, endpoints included.
    pub fn path(&self, from: &Weight, to: &Weight) -> Option<Vec<Weight>> {
        if !self.vertices.contains(from) || !self.vertices.contains(to) {
            return None;
        }
        if from == to {
            return Some(vec![from.clone()]);
        }
        let mut prev: BTreeMap<&Weight, &Weight> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        while let Some(w) = queue.pop_front() {
            for (_, t) in &self.edges[w] {
                if t != from && !prev.contains_key(t) {
                    prev.insert(t, w);
                    queue.push_back(t);
                }
            }
            if prev.contains_key(to) {
                break;
            }
        }
        let mut path = vec![to.clone()];
        let mut cur = to;
        while cur != from {
            cur = prev.get(cur)?;
            path.push(cur.clone());
        }
        path.reverse();
        Some(path)
    }

    /// Degree conditions, absence of self-loops, and a path `w -> r_j(w)` whenever `m_j > 0`,
    /// on every nonzero vertex.
    pub fn check(&self, cd: &CartanData) -> VerifyReport {
        let mut report = VerifyReport::new();
        for w in self.vertices.iter().filter(|w| !w.is_zero()) {
            report.check(
                format!("orbit_degrees[{w}]"),
                self.in_degree(w) >= 1 && self.out_degree(w) >= 1,
            );
            report.check(
                format!("orbit_no_loop[{w}]"),
                self.edges[w].iter().all(|(_, t)| t != w),
            );
            for j in (0..cd.rank()).filter(|&j| w.0[j] > 0) {
                let target = reflect(w, j, cd);
                report.check(
                    format!("orbit_path[{w},j={}]", j + 1),
                    self.path(w, &target).is_some(),
                );
            }
        }
        report
    }
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    h: usize,
    to: &'a Weight,
}

#[derive(Serialize)]
struct AdjacencyJson<'a> {
    from: &'a Weight,
    edges: Vec<EdgeJson<'a>>,
}

impl Serialize for OrbitGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let adjacency: Vec<AdjacencyJson> = self
            .edges
            .iter()
            .map(|(from, out)| AdjacencyJson {
                from,
                edges: out
                    .iter()
                    .map(|(h, to)| EdgeJson { h: h + 1, to })
                    .collect(),
            })
            .collect();
        let mut st = serializer.serialize_struct("OrbitGraph", 2)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("adjacency", &adjacency)?;
        st.end()
    }
}

fn subspace_zero_under(m: &Matrix, space: &Subspace) -> bool {
    space
        .basis_vectors()
        .iter()
        .all(|v| m.apply(v).iter().all(Scalar::is_zero))
}

/// `E_i^{dim} = F_i^{dim} = 0` for every node.
pub fn check_nilpotent(rep: &Representation) -> Result<VerifyReport> {
    rep.require(PresentationId::ChevalleyFull)?;
    let dim = rep.dim() as u32;
    let mut report = VerifyReport::new();
    for i in 0..rep.rank() {
        for g in [Generator::E(i), Generator::F(i)] {
            let p = rep.get(g)?.pow(dim);
            report.push(format!("nilpotent[{g}]"), p.is_zero(), p.nonzero_count());
        }
    }
    Ok(report)
}

/// The `U_q(sl2)` relations on `(E_i, F_i, K_i^{±1})` with `q_i`, and on each weight space
/// with `m_i <= 0` the isomorphism `E_i^{-m_i}` onto the reflected space and the string-end
/// equivalence `E_i^{1-m_i} v = 0 iff F_i v = 0`.
pub fn check_sl2_triple(rep: &Representation, i: usize) -> Result<VerifyReport> {
    rep.require(PresentationId::ChevalleyFull)?;
    let cd = rep.cartan();
    let qp = cd.qp();
    let node = i + 1;
    let (e, f) = (rep.get(Generator::E(i))?, rep.get(Generator::F(i))?);
    let (k, kinv) = (rep.get(Generator::K(i))?, rep.get(Generator::Kinv(i))?);
    let id = Matrix::identity(rep.dim());
    let mut report = VerifyReport::new();
    let zero = |report: &mut VerifyReport, name: String, m: Matrix| {
        let bad = m.nonzero_count();
        report.push(name, bad == 0, bad);
    };
    zero(
        &mut report,
        format!("sl2_kkinv[i={node}]"),
        &(k * kinv) - &id,
    );
    zero(
        &mut report,
        format!("sl2_kinvk[i={node}]"),
        &(kinv * k) - &id,
    );
    zero(
        &mut report,
        format!("sl2_ke[i={node}]"),
        &(&(k * e) * kinv) - &e.scale(&qp.q_pow(i, 2)),
    );
    zero(
        &mut report,
        format!("sl2_kf[i={node}]"),
        &(&(k * f) * kinv) - &f.scale(&qp.q_pow(i, -2)),
    );
    let c = qp.q_diff(i).inv().expect("q_i is not a root of unity");
    zero(
        &mut report,
        format!("sl2_ef[i={node}]"),
        &(&(e * f) - &(f * e)) - &(k - kinv).scale(&c),
    );

    let wd = weight_decomposition(rep)?;
    for ws in &wd.spaces {
        let m = ws.weight.pairing(i);
        if m > 0 {
            continue;
        }
        let lam = &ws.weight;
        let target = reflect(lam, i, cd);
        let power = e.pow((-m) as u32);
        let image = ws.space.image(&power)?;
        let onto = wd
            .get(&target)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(rep.dim()));
        report.check(
            format!("sl2_iso[i={node},{lam}]"),
            image.dim() == ws.space.dim() && image == onto,
        );
        let top = e.pow((1 - m) as u32);
        let ends = ws.space.basis_vectors().iter().all(|v| {
            let a = top.apply(v).iter().all(Scalar::is_zero);
            let b = f.apply(v).iter().all(Scalar::is_zero);
            a == b
        });
        // the kernels of E^{1-m} and F on the weight space coincide
        let ker_top = ws.space.intersect(&top.kernel())?;
        let ker_f = ws.space.intersect(&f.kernel())?;
        report.check(
            format!("sl2_string_end[i={node},{lam}]"),
            ends && ker_top == ker_f && subspace_zero_under(&top, &ker_f),
        );
    }
    Ok(report)
}

/// Sign by which `prod K_i^{u_i}` acts.
pub fn check_central(rep: &Representation) -> Result<Sign> {
    rep.require(PresentationId::ChevalleyFull)?;
    let cd = rep.cartan();
    let mut c = Matrix::identity(rep.dim());
    for (i, u) in cd.null_vector().iter().enumerate() {
        c = &c * &rep.get(Generator::K(i))?.pow(*u as u32);
    }
    let dim = rep.dim();
    for sign in [Sign::Plus, Sign::Minus] {
        if c == Matrix::scalar_identity(dim, &sign.as_scalar()) {
            return Ok(sign);
        }
    }
    Err(Error::Domain(
        "central element does not act as a sign".into(),
    ))
}

/// All weight-space properties of a full module in one report.
pub fn check_weight_lab(rep: &Representation) -> Result<VerifyReport> {
    let cd = rep.cartan();
    let n = cd.rank();
    let wd = weight_decomposition(rep)?;
    let mut report = VerifyReport::new();
    report.check("weights_direct", wd.is_direct(rep.dim()));

    let expected = cd
        .null_vector()
        .iter()
        .zip(&wd.eps)
        .fold(
            Sign::Plus,
            |acc, (&u, &e)| if u % 2 == 1 { acc * e } else { acc },
        );
    let central = check_central(rep);
    report.check(
        "central_sign",
        central.as_ref().is_ok_and(|&s| s == expected),
    );

    let u = cd.null_vector();
    let s = cd.symmetrizers();
    for w in wd.weights() {
        let level: i64 = (0..n).map(|i| u[i] as i64 * s[i] as i64 * w.0[i]).sum();
        report.check(format!("level_zero[{w}]"), level == 0);
        if !w.is_zero() {
            report.check(
                format!("pairing_signs[{w}]"),
                w.0.iter().any(|&m| m < 0) && w.0.iter().any(|&m| m > 0),
            );
        }
        for i in 0..n {
            let r = reflect(w, i, cd);
            report.check(
                format!("reflected_dim[{w},i={}]", i + 1),
                wd.dim_of(&r) == wd.dim_of(w),
            );
        }
    }

    let nonzero: Vec<&Weight> = wd.weights().filter(|w| !w.is_zero()).collect();
    let graph = orbit_graph(nonzero, cd, ORBIT_BOUND)?;
    report.extend(graph.check(cd));
    report.extend(check_nilpotent(rep)?);
    let triples: Vec<VerifyReport> = (0..n)
        .into_par_iter()
        .map(|i| check_sl2_triple(rep, i))
        .collect::<Result<_>>()?;
    for t in triples {
        report.extend(t);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_store::evaluation_module;
    use crate::scalar::s;
    use proptest::prelude::*;

    fn cd() -> CartanData {
        CartanData::affine_sl2(s(2, 1)).unwrap()
    }

    fn ev(d: usize, eps: [Sign; 2]) -> Representation {
        evaluation_module(d, &s(3, 1), eps, &cd()).unwrap()
    }

    fn w(m: &[i64]) -> Weight {
        Weight(m.to_vec())
    }

    #[test]
    fn decomposition_examples() {
        let t = weight_decomposition(&ev(0, [Sign::Plus; 2])).unwrap();
        assert_eq!(t.spaces.len(), 1);
        assert_eq!(t.spaces[0].weight, w(&[0, 0]));
        assert!(t.spaces[0].space.is_full());
        // oracle: K1 = diag(2, 1/2), K2 = diag(1/2, 2) at q = 2
        let one = weight_decomposition(&ev(1, [Sign::Plus; 2])).unwrap();
        let ws: Vec<&Weight> = one.weights().collect();
        assert_eq!(ws, vec![&w(&[-1, 1]), &w(&[1, -1])]);
        assert!(one.spaces.iter().all(|x| x.space.dim() == 1));
        let two = weight_decomposition(&ev(2, [Sign::Minus, Sign::Plus])).unwrap();
        let ws: Vec<&Weight> = two.weights().collect();
        assert_eq!(ws, vec![&w(&[-2, 2]), &w(&[0, 0]), &w(&[2, -2])]);
        assert_eq!(two.eps, vec![Sign::Minus, Sign::Plus]);
    }

    #[test]
    fn reflection_examples() {
        let c = cd();
        assert_eq!(reflect(&w(&[0, 0]), 0, &c), w(&[0, 0]));
        assert_eq!(reflect(&w(&[-1, 1]), 1, &c), w(&[1, -1]));
    }

    #[test]
    fn orbit_examples() {
        let c = cd();
        let g = orbit_graph([&w(&[0, 0])], &c, ORBIT_BOUND).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edge_count(), 0);
        let g = orbit_graph([&w(&[-1, 1])], &c, ORBIT_BOUND).unwrap();
        assert_eq!(g.vertices, BTreeSet::from([w(&[-1, 1]), w(&[1, -1])]));
        assert_eq!(g.edges[&w(&[-1, 1])], vec![(0, w(&[1, -1]))]);
        assert_eq!(g.edges[&w(&[1, -1])], vec![(1, w(&[-1, 1]))]);
        let p = g.path(&w(&[1, -1]), &w(&[-1, 1])).unwrap();
        assert_eq!(p.len(), 2);
        assert!(g.check(&c).overall);
        let json = serde_json::to_value(&g).unwrap();
        assert_eq!(json["adjacency"][0]["edges"][0]["h"], 1);
    }

    #[test]
    fn orbit_bound_is_enforced() {
        // a weight off level zero has an infinite orbit in the affine Weyl group
        let err = orbit_graph([&w(&[1, 0])], &cd(), 50).unwrap_err();
        assert!(matches!(err, Error::OrbitBound(50)));
    }

    #[test]
    fn sl2_and_central_examples() {
        let t = ev(0, [Sign::Plus; 2]);
        assert!(check_sl2_triple(&t, 0).unwrap().overall);
        assert_eq!(check_central(&t).unwrap(), Sign::Plus);
        let one = ev(1, [Sign::Plus; 2]);
        let r = check_sl2_triple(&one, 1).unwrap();
        assert!(r.overall, "{:?}", r.failed());
        assert!(r.entries.iter().any(|e| e.name == "sl2_iso[i=2,(1,-1)]"));
        assert_eq!(
            check_central(&ev(2, [Sign::Minus, Sign::Plus])).unwrap(),
            Sign::Minus
        );
        let bad = one
            .with_matrix(Generator::F(1), Matrix::zeros(2, 2))
            .unwrap();
        let r = check_sl2_triple(&bad, 1).unwrap();
        assert!(r.failed().contains(&"sl2_ef[i=2]".to_string()));
    }

    #[test]
    fn battery_on_evaluation_modules() {
        for d in 0..=4 {
            for eps in [[Sign::Plus; 2], [Sign::Minus, Sign::Plus]] {
                let r = check_weight_lab(&ev(d, eps)).unwrap();
                assert!(r.overall, "d={d}: {:?}", r.failed());
            }
        }
    }

    proptest! {
        #[test]
        fn reflection_is_involutive(m1 in -20i64..20, m2 in -20i64..20, i in 0usize..2) {
            let c = cd();
            let x = w(&[m1, m2]);
            prop_assert_eq!(reflect(&reflect(&x, i, &c), i, &c), x);
        }
    }
}
