//! The `U_i` (k-eigenspace), `V_i` (y-eigenspace) and `W_i` (split) decompositions of a
//! Borel module, with the containment battery that ties them together.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::module_store::{BorelOps, NodeProfile, Representation, VerifyReport};
use crate::presentation::CartanData;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionKind {
    U,
    V,
    W,
}

/// Slots `0..=2d_i` of one node; slot `s` is labelled by `alpha_i q_i^{s - d_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub node: usize,
    pub kind: DecompositionKind,
    pub profile: NodeProfile,
    pub slots: Vec<Subspace>,
}

impl Decomposition {
    pub fn ambient(&self) -> usize {
        self.slots[0].ambient_dim()
    }

    pub fn d2(&self) -> i64 {
        self.profile.d2 as i64
    }

    /// Slot `s`, zero outside `0..=2d_i`.
    pub fn slot(&self, s: i64) -> Subspace {
        if (0..=self.d2()).contains(&s) {
            self.slots[s as usize].clone()
        } else {
            Subspace::zero(self.ambient())
        }
    }

    /// `sum_t slot(s + step * t)` over `t >= 0`, truncated where the slots run out.
    pub fn ray_sum(&self, s: i64, step: i64) -> Subspace {
        let parts: Vec<Subspace> = (0..=self.d2() + 1)
            .map(|t| s + step * t)
            .filter(|x| (0..=self.d2()).contains(x))
            .map(|x| self.slot(x))
            .collect();
        Subspace::sum_of(self.ambient(), &parts).expect("shared ambient")
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(Subspace::dim).collect()
    }

    pub fn is_direct(&self) -> bool {
        Subspace::is_direct_decomposition(self.ambient(), &self.slots)
    }
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Decomposition", 6)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("i", &(self.node + 1))?;
        st.serialize_field("alpha", &self.profile.alpha)?;
        st.serialize_field("d", &self.profile.d_label())?;
        st.serialize_field("eta", &self.profile.eta)?;
        st.serialize_field("slots", &self.slots)?;
        st.end()
    }
}

fn eigen_decomposition(
    m: &Matrix,
    cd: &CartanData,
    i: usize,
    prof: &NodeProfile,
    kind: DecompositionKind,
    operator: String,
) -> Result<Decomposition> {
    let slots: Vec<Subspace> = (0..=prof.d2 as i64)
        .map(|s| Subspace::eigenspace(m, &prof.slot_value(cd, i, s)))
        .collect::<Result<_>>()?;
    let total: usize = slots.iter().map(Subspace::dim).sum();
    if total != m.rows() {
        return Err(Error::NotSemisimple { operator });
    }
    Ok(Decomposition {
        node: i,
        kind,
        profile: prof.clone(),
        slots,
    })
}

/// `U_i(s)`: the `k_i`-eigenspace for `alpha_i q_i^{s-d_i}`.
pub fn u_decomposition(
    rep: &Representation,
    i: usize,
    prof: &NodeProfile,
) -> Result<Decomposition> {
    let ops = BorelOps::of(rep)?;
    eigen_decomposition(
        &ops.k[i],
        rep.cartan(),
        i,
        prof,
        DecompositionKind::U,
        format!("k{}", i + 1),
    )
}

/// `V_i(s)`: the `y_i`-eigenspace for `alpha_i q_i^{s-d_i}`.
pub fn v_decomposition(
    rep: &Representation,
    i: usize,
    prof: &NodeProfile,
) -> Result<Decomposition> {
    let ops = BorelOps::of(rep)?;
    eigen_decomposition(
        &ops.y[i],
        rep.cartan(),
        i,
        prof,
        DecompositionKind::V,
        format!("y{}", i + 1),
    )
}

/// `W_i(u,v) = (sum_t U_i(u-2t)) ∩ (sum_t V_i(2d_i-v-2t))`.
pub fn w_pair(ud: &Decomposition, vd: &Decomposition, u: i64, v: i64) -> Subspace {
    let lower = ud.ray_sum(u, -2);
    let upper = vd.ray_sum(ud.d2() - v, -2);
    lower.intersect(&upper).expect("shared ambient")
}

/// The split `W_i(s) = W_i(s,s)`, certified direct and with integral `d_i`.
pub fn w_split(ud: &Decomposition, vd: &Decomposition) -> Result<Decomposition> {
    let node = ud.node;
    if !ud.profile.d_is_integral() {
        let w01 = w_pair(ud, vd, 0, 1);
        let u0 = ud.slot(0);
        let detail = if w01 == u0 && !u0.is_zero() {
            format!(
                "d_{} = {} is not an integer: W(0,1) = U(0) has dimension {} although u < v forces W(0,1) = 0",
                node + 1,
                ud.profile.d_label(),
                u0.dim()
            )
        } else {
            format!(
                "d_{} = {} is not an integer (W(0,1) has dimension {}, U(0) has dimension {})",
                node + 1,
                ud.profile.d_label(),
                w01.dim(),
                u0.dim()
            )
        };
        return Err(Error::SplitViolation {
            node: node + 1,
            detail,
        });
    }
    let slots: Vec<Subspace> = (0..=ud.d2()).map(|s| w_pair(ud, vd, s, s)).collect();
    let wd = Decomposition {
        node,
        kind: DecompositionKind::W,
        profile: ud.profile.clone(),
        slots,
    };
    if !wd.is_direct() {
        return Err(Error::SplitViolation {
            node: node + 1,
            detail: format!(
                "W slots of dimensions {:?} do not form a direct decomposition",
                wd.dims()
            ),
        });
    }
    if wd.slot(0) != ud.slot(0) || wd.slot(wd.d2()) != vd.slot(0) {
        return Err(Error::SplitViolation {
            node: node + 1,
            detail: "end slots W(0) = U(0) and W(2d) = V(0) do not hold".into(),
        });
    }
    Ok(wd)
}

/// Number of basis vectors of `sub` that fall outside `sup`.
fn escapes(sub: &Subspace, sup: &Subspace) -> usize {
    sub.basis_vectors()
        .iter()
        .filter(|v| !sup.contains_vector(v))
        .count()
}

fn image(m: &Matrix, s: &Subspace) -> Subspace {
    s.image(m).expect("square operator on the module")
}

fn shifted(m: &Matrix, c: &Scalar) -> Matrix {
    m.shift(c)
}

struct Battery {
    report: VerifyReport,
}

impl Battery {
    fn within(&mut self, name: String, sub: &Subspace, sup: &Subspace) {
        let bad = escapes(sub, sup);
        self.report.push(name, bad == 0, bad);
    }

    fn equal(&mut self, name: String, a: &Subspace, b: &Subspace) {
        let bad = escapes(a, b) + escapes(b, a);
        self.report.push(name, bad == 0, bad);
    }
}

/// Every containment and equality relating `U_i`, `V_i`, `W_i` and the operators.
pub fn check_split_lemmas(
    rep: &Representation,
    ud: &Decomposition,
    vd: &Decomposition,
    wd: &Decomposition,
) -> Result<VerifyReport> {
    let ops = BorelOps::of(rep)?;
    let cd = rep.cartan();
    let i = ud.node;
    let n = rep.rank();
    let d2 = ud.d2();
    let dim = rep.dim();
    let prof = &ud.profile;
    let val = |s: i64| prof.slot_value(cd, i, s);
    let zero = Subspace::zero(dim);
    let mut b = Battery {
        report: VerifyReport::new(),
    };
    let range = || 0..=d2;
    let others = || (0..n).filter(move |&j| j != i);
    let a = |j: usize| cd.a(i, j);

    // U_i as k_i-eigenspaces, with nonzero end slots
    b.report.check("U_direct", ud.is_direct());
    b.report.check(
        "U_ends_nonzero",
        !ud.slot(0).is_zero() && !ud.slot(d2).is_zero(),
    );
    for s in range() {
        let img = image(&shifted(&ops.k[i], &val(s)), &ud.slot(s));
        b.within(format!("k_eigen_U[s={s}]"), &img, &zero);
    }
    // k_j and e_j on U_i
    for j in 0..n {
        for s in range() {
            let u = ud.slot(s);
            b.equal(
                format!("k_preserves_U[j={},s={s}]", j + 1),
                &image(&ops.k[j], &u),
                &u,
            );
            b.within(
                format!("e_shifts_U[j={},s={s}]", j + 1),
                &image(&ops.e[j], &u),
                &ud.slot(s + a(j)),
            );
        }
    }
    // (y_i - alpha q^{s-d}) U(s) ⊆ U(s+2)
    for s in range() {
        let img = image(&shifted(&ops.y[i], &val(s)), &ud.slot(s));
        b.within(format!("y_raises_U[s={s}]"), &img, &ud.slot(s + 2));
    }
    // V_i as y_i-eigenspaces
    b.report.check("V_direct", vd.is_direct());
    for s in range() {
        let img = image(&shifted(&ops.y[i], &val(s)), &vd.slot(s));
        b.within(format!("y_eigen_V[s={s}]"), &img, &zero);
    }
    // (k_i^{-1} - alpha^{-1} q^{d-s}) V(s) ⊆ V(s+2); e_j V(s) ⊆ sum_t V(s + A_ij + 2t)
    for s in range() {
        let c = val(s).inv().expect("nonzero eigenvalue");
        let img = image(&shifted(&ops.kinv[i], &c), &vd.slot(s));
        b.within(format!("kinv_raises_V[s={s}]"), &img, &vd.slot(s + 2));
    }
    for j in others() {
        for s in range() {
            let target: Vec<Subspace> = (0..=-a(j)).map(|t| vd.slot(s + a(j) + 2 * t)).collect();
            let target = Subspace::sum_of(dim, &target)?;
            b.within(
                format!("e_spreads_V[j={},s={s}]", j + 1),
                &image(&ops.e[j], &vd.slot(s)),
                &target,
            );
        }
    }
    // sum_t U(s+2t) = sum_t V(s+2t)
    for s in range() {
        b.equal(
            format!("UV_upper_sums[s={s}]"),
            &ud.ray_sum(s, 2),
            &vd.ray_sum(s, 2),
        );
    }

    // W_i(u,v): operator shifts, and vanishing for u < v
    let pair = |u: i64, v: i64| w_pair(ud, vd, u, v);
    for u in -1..=d2 + 1 {
        for v in -1..=d2 + 1 {
            let w = pair(u, v);
            let c = val(u).inv().expect("nonzero eigenvalue");
            b.within(
                format!("W2_kinv[u={u},v={v}]"),
                &image(&shifted(&ops.kinv[i], &c), &w),
                &pair(u - 2, v - 2),
            );
            b.within(
                format!("W2_y[u={u},v={v}]"),
                &image(&shifted(&ops.y[i], &val(d2 - v)), &w),
                &pair(u + 2, v + 2),
            );
            for j in others() {
                b.within(
                    format!("W2_e[j={},u={u},v={v}]", j + 1),
                    &image(&ops.e[j], &w),
                    &pair(u + a(j), v + a(j)),
                );
            }
        }
    }
    for u in range() {
        for v in (u + 1)..=d2 {
            b.within(format!("W2_vanish[u={u},v={v}]"), &pair(u, v), &zero);
        }
    }

    // the split itself
    b.report.check("W_direct", wd.is_direct());
    b.equal("W_first_is_U".into(), &wd.slot(0), &ud.slot(0));
    b.equal("W_last_is_V".into(), &wd.slot(d2), &vd.slot(0));
    for s in range() {
        let c = val(s).inv().expect("nonzero eigenvalue");
        b.within(
            format!("W_kinv_lowers[s={s}]"),
            &image(&shifted(&ops.kinv[i], &c), &wd.slot(s)),
            &wd.slot(s - 2),
        );
        b.within(
            format!("W_y_raises[s={s}]"),
            &image(&shifted(&ops.y[i], &val(d2 - s)), &wd.slot(s)),
            &wd.slot(s + 2),
        );
        for j in others() {
            b.within(
                format!("W_e_shifts[j={},s={s}]", j + 1),
                &image(&ops.e[j], &wd.slot(s)),
                &wd.slot(s + a(j)),
            );
        }
        b.equal(
            format!("W_lower_sums[s={s}]"),
            &wd.ray_sum(s, -2),
            &ud.ray_sum(s, -2),
        );
        b.equal(
            format!("W_upper_sums[s={s}]"),
            &wd.ray_sum(s, 2),
            &vd.ray_sum(d2 - s, -2),
        );
    }
    for (label, start) in [("even", 0), ("odd", 1)] {
        b.equal(
            format!("W_parity[{label}]"),
            &wd.ray_sum(start, 2),
            &ud.ray_sum(start, 2),
        );
    }
    let mut dims = [ud.dims(), vd.dims(), wd.dims()];
    for x in dims.iter_mut() {
        x.sort_unstable();
    }
    b.report
        .check("slot_dims_match", dims[0] == dims[1] && dims[1] == dims[2]);
    b.report
        .check("W_dims_sum", wd.dims().iter().sum::<usize>() == dim);
    Ok(b.report)
}

/// U, V, W decompositions for one node of a Borel module.
#[derive(Clone, Debug, Serialize)]
pub struct NodeSplit {
    pub u: Decomposition,
    pub v: Decomposition,
    pub w: Decomposition,
}

pub fn split_node(rep: &Representation, i: usize, prof: &NodeProfile) -> Result<NodeSplit> {
    let u = u_decomposition(rep, i, prof)?;
    let v = v_decomposition(rep, i, prof)?;
    let w = w_split(&u, &v)?;
    Ok(NodeSplit { u, v, w })
}
