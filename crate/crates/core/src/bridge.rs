//! Between Borel modules and full modules: the `Z_i` operators built from the split,
//! extension of a Borel module to `U_q(g)`, restriction back, and the round trip.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::module_store::{
    detect_full_type, detect_profile, is_irreducible, verify, AsymmetryPolicy, BorelOps,
    Irreducibility, ModuleProfile, Representation, Sign, VerifyReport,
};
use crate::presentation::{self, CartanData, Generator, PresentationId};
use crate::scalar::Scalar;
use crate::split::{split_node, Decomposition, NodeSplit};

/// The operator acting on `W_i(s)` as `eps_i q_i^{s - d_i}`.
pub fn build_z_action(wd: &Decomposition, eps_i: Sign, cd: &CartanData) -> Result<Matrix> {
    let n = wd.ambient();
    if !wd.is_direct() {
        return Err(Error::Domain(format!(
            "W slots of node {} are not a direct decomposition",
            wd.node + 1
        )));
    }
    let d = wd.profile.d().ok_or_else(|| Error::SplitViolation {
        node: wd.node + 1,
        detail: format!("d = {} is not an integer", wd.profile.d_label()),
    })? as i64;
    let mut columns = Vec::with_capacity(n);
    let mut eigen = Vec::with_capacity(n);
    for (s, slot) in wd.slots.iter().enumerate() {
        let value = &eps_i.as_scalar() * &cd.qp().q_pow(wd.node, s as i64 - d);
        for v in slot.basis_vectors() {
            columns.push(v.clone());
            eigen.push(value.clone());
        }
    }
    let p = Matrix::from_columns(n, &columns);
    let p_inv = p.inverse().expect("basis of a direct decomposition");
    Ok(&(&p * &Matrix::from_diagonal(&eigen)) * &p_inv)
}

/// Everything produced while extending a Borel module.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionCertificate {
    pub profile: ModuleProfile,
    pub eps: Vec<Sign>,
    #[serde(rename = "Z")]
    pub z: BTreeMap<String, Matrix>,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, Matrix>,
    pub equitable_report: VerifyReport,
    pub chevalley_report: VerifyReport,
    pub irreducibility: Irreducibility,
    #[serde(rename = "type")]
    pub detected_type: Vec<Sign>,
    /// Set when irreducibility could only be probed, not proved.
    pub provisional: bool,
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub full: Representation,
    pub equitable: Representation,
    pub splits: Vec<NodeSplit>,
    pub certificate: ExtensionCertificate,
}

/// Full module structure making `E_i - eps_i alpha_i^{-1} e_i` and
/// `K_i^{±1} - eps_i alpha_i^{∓1} k_i^{±1}` vanish.
pub fn extend(rep: &Representation, eps: &[Sign]) -> Result<Extension> {
    rep.require_borel()?;
    let cd = rep.cartan();
    let n = rep.rank();
    if eps.len() != n {
        return Err(Error::Dimension(format!(
            "need {n} signs, got {}",
            eps.len()
        )));
    }
    let profile = detect_profile(rep, None, AsymmetryPolicy::default())?;
    let irreducibility = is_irreducible(rep);
    if let Irreducibility::Reducible(witness) = irreducibility {
        return Err(Error::Reducible { witness });
    }
    let provisional = irreducibility == Irreducibility::Undecided;
    let ops = BorelOps::of(rep)?;

    let splits: Vec<NodeSplit> = (0..n)
        .map(|i| split_node(rep, i, &profile.nodes[i]))
        .collect::<Result<_>>()?;
    let alpha: Vec<Scalar> = profile
        .alpha()
        .expect("integral shapes give rational alpha");

    let mut assign = BTreeMap::new();
    let mut z_report = BTreeMap::new();
    for i in 0..n {
        let ea = &eps[i].as_scalar() * &alpha[i];
        let ea_inv = ea.inv().expect("nonzero alpha");
        let z = build_z_action(&splits[i].w, eps[i], cd)?;
        assign.insert(Generator::K(i), ops.k[i].scale(&ea_inv));
        assign.insert(Generator::Kinv(i), ops.kinv[i].scale(&ea));
        assign.insert(Generator::Y(i), ops.y[i].scale(&ea_inv));
        z_report.insert(Generator::Z(i).to_string(), z.clone());
        assign.insert(Generator::Z(i), z);
    }
    let equitable =
        Representation::new(PresentationId::EquitableFull, cd.clone(), rep.dim(), assign)?;
    let equitable_report = verify(&equitable);
    if !equitable_report.overall {
        return Err(Error::RelationFailure {
            stage: "equitable relations of the extension".into(),
            failed: equitable_report.failed(),
        });
    }
    let full = presentation::equitable_to_chevalley(&equitable)?;
    let chevalley_report = verify(&full);
    if !chevalley_report.overall {
        return Err(Error::RelationFailure {
            stage: "Chevalley relations of the extension".into(),
            failed: chevalley_report.failed(),
        });
    }
    let full_verdict = is_irreducible(&full);
    if let Irreducibility::Reducible(witness) = full_verdict {
        return Err(Error::Reducible { witness });
    }
    let detected = detect_full_type(&full)?;
    if let Some(i) = (0..n).find(|&i| detected.eps[i] != eps[i]) {
        return Err(Error::TypeMismatch {
            node: i + 1,
            expected: eps[i].to_string(),
            detected: detected.eps[i].to_string(),
        });
    }
    let f = (0..n)
        .map(|i| {
            Ok((
                Generator::F(i).to_string(),
                full.get(Generator::F(i))?.clone(),
            ))
        })
        .collect::<Result<_>>()?;
    let certificate = ExtensionCertificate {
        profile,
        eps: eps.to_vec(),
        z: z_report,
        f,
        equitable_report,
        chevalley_report,
        provisional: provisional || full_verdict == Irreducibility::Undecided,
        irreducibility: full_verdict,
        detected_type: detected.eps,
    };
    Ok(Extension {
        full,
        equitable,
        splits,
        certificate,
    })
}

pub fn extend_to_full(
    rep: &Representation,
    eps: &[Sign],
) -> Result<(Representation, ExtensionCertificate)> {
    let ext = extend(rep, eps)?;
    Ok((ext.full, ext.certificate))
}

/// Borel structure `e_i = eps_i alpha_i E_i`, `k_i^{±1} = eps_i alpha_i^{±1} K_i^{±1}`,
/// with `eps` read off the `K_i` spectra.
pub fn restrict_to_borel(rep: &Representation, alpha: &[Scalar]) -> Result<Representation> {
    rep.require(PresentationId::ChevalleyFull)?;
    let n = rep.rank();
    if alpha.len() != n {
        return Err(Error::Dimension(format!(
            "need {n} values of alpha, got {}",
            alpha.len()
        )));
    }
    if let Some(i) = alpha.iter().position(Scalar::is_zero) {
        return Err(Error::Domain(format!("alpha_{} must be nonzero", i + 1)));
    }
    let input = verify(rep);
    if !input.overall {
        return Err(Error::RelationFailure {
            stage: "restriction input".into(),
            failed: input.failed(),
        });
    }
    let eps = detect_full_type(rep)?.eps;
    let borel = crate::module_store::twist(&presentation::borel_of(rep)?, alpha, &eps)?;
    let report = verify(&borel);
    if !report.overall {
        return Err(Error::RelationFailure {
            stage: "restricted Borel relations".into(),
            failed: report.failed(),
        });
    }
    detect_profile(&borel, Some(alpha), AsymmetryPolicy::default())?;
    Ok(borel)
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub checks: VerifyReport,
    pub notes: Vec<String>,
    pub certificate: Option<ExtensionCertificate>,
}

impl RoundtripReport {
    pub fn overall(&self) -> bool {
        self.checks.overall
    }
}

/// Restrict with `alpha`, extend with the detected (or given) type, and compare every
/// generator matrix. A reducible input is refused with its witness.
pub fn roundtrip_check(
    rep: &Representation,
    alpha: &[Scalar],
    eps: Option<&[Sign]>,
) -> Result<RoundtripReport> {
    rep.require(PresentationId::ChevalleyFull)?;
    let mut checks = VerifyReport::new();
    let mut notes = Vec::new();
    let done = |checks: VerifyReport, notes: Vec<String>, cert| RoundtripReport {
        checks,
        notes,
        certificate: cert,
    };

    let input = verify(rep);
    checks.push("input_relations", input.overall, input.failed().len());
    if !input.overall {
        notes.push(format!("input fails {}", input.failed().join(", ")));
        return Ok(done(checks, notes, None));
    }
    match is_irreducible(rep) {
        Irreducibility::Reducible(witness) => return Err(Error::Reducible { witness }),
        v => checks.check("input_irreducible", v == Irreducibility::Irreducible),
    }
    let detected = match detect_full_type(rep) {
        Ok(t) => t.eps,
        Err(e) => {
            checks.check("input_type", false);
            notes.push(e.to_string());
            return Ok(done(checks, notes, None));
        }
    };
    let eps: Vec<Sign> = eps
        .map(<[Sign]>::to_vec)
        .unwrap_or_else(|| detected.clone());
    checks.check("input_type", eps == detected);

    let borel = match restrict_to_borel(rep, alpha) {
        Ok(b) => b,
        Err(e) => {
            checks.check("restriction", false);
            notes.push(e.to_string());
            return Ok(done(checks, notes, None));
        }
    };
    checks.check("borel_relations", verify(&borel).overall);
    let eb = presentation::borel_to_equitable(&borel)?;
    checks.check("borel_equitable_relations", verify(&eb).overall);
    checks.check(
        "borel_irreducible",
        is_irreducible(&borel) == Irreducibility::Irreducible,
    );
    checks.check(
        "borel_type_alpha",
        detect_profile(&borel, None, AsymmetryPolicy::default())
            .ok()
            .and_then(|p| p.alpha())
            .is_some_and(|a| a == alpha),
    );

    let ext = match extend(&borel, &eps) {
        Ok(x) => x,
        Err(e) => {
            checks.check("extension", false);
            notes.push(e.to_string());
            return Ok(done(checks, notes, None));
        }
    };
    checks.check("extension_certified", !ext.certificate.provisional);
    checks.check(
        "extended_irreducible",
        ext.certificate.irreducibility == Irreducibility::Irreducible,
    );
    checks.check("extended_type_eps", ext.certificate.detected_type == eps);
    for (g, m) in rep.assignments() {
        let same = ext.full.get(g).map(|x| x == m).unwrap_or(false);
        checks.check(format!("matrix_equal[{g}]"), same);
    }
    Ok(done(checks, notes, Some(ext.certificate)))
}

/// Identities of the constructed `Z_i` on an extended module, plus the inclusion of
/// `(Z_j - K_j) W_i(s)` and a uniqueness spot check on the recovered `F_i`.
pub fn check_z_identities(ext: &Extension) -> Result<VerifyReport> {
    let eq = &ext.equitable;
    let full = &ext.full;
    let cd = eq.cartan();
    let qp = cd.qp();
    let n = cd.rank();
    let dim = eq.dim();
    let id = Matrix::identity(dim);
    let k: Vec<&Matrix> = (0..n)
        .map(|i| eq.get(Generator::K(i)))
        .collect::<Result<_>>()?;
    let y: Vec<&Matrix> = (0..n)
        .map(|i| eq.get(Generator::Y(i)))
        .collect::<Result<_>>()?;
    let z: Vec<&Matrix> = (0..n)
        .map(|i| eq.get(Generator::Z(i)))
        .collect::<Result<_>>()?;
    let e: Vec<&Matrix> = (0..n)
        .map(|i| full.get(Generator::E(i)))
        .collect::<Result<_>>()?;
    let mut report = VerifyReport::new();
    let mut zero = |name: String, m: Matrix| {
        let bad = m.nonzero_count();
        report.push(name, bad == 0, bad);
    };

    for i in 0..n {
        let q2 = qp.q_pow(i, 2);
        let one_minus = Scalar::one() - &q2;
        zero(
            format!("Z_K_same[i={}]", i + 1),
            &(&(z[i] * k[i]) - &(k[i] * z[i]).scale(&q2)) - &(k[i] * k[i]).scale(&one_minus),
        );
        zero(
            format!("Z_Y_same[i={}]", i + 1),
            &(&(z[i] * y[i]) - &(y[i] * z[i]).scale(&q2)) - &id.scale(&one_minus),
        );
        for h in (0..n).filter(|&h| h != i) {
            let p = qp.q_pow(i, cd.a(i, h));
            zero(
                format!("Z_E_commute[i={},h={}]", i + 1, h + 1),
                &(z[i] * e[h]) - &(e[h] * z[i]).scale(&p),
            );
        }
        for j in 0..n {
            let a = cd.a(i, j);
            let p = qp.q_pow(i, a);
            let kk = k[i] * k[j];
            zero(
                format!("Z_K_mixed[i={},j={}]", i + 1, j + 1),
                &(&(z[i] * k[j]) - &(k[j] * z[i]).scale(&p)) - &kk.scale(&(Scalar::one() - &p)),
            );
            if j != i {
                zero(
                    format!("Z_Y_mixed[i={},j={}]", i + 1, j + 1),
                    &(&(z[i] * y[j]) - &(y[j] * z[i]).scale(&p)) - &kk.scale(&(Scalar::one() - &p)),
                );
                let top = 1 - a;
                let mut lhs = Matrix::zeros(dim, dim);
                for r in 0..=top {
                    let mut c = qp.q_binom(top, r, i)?;
                    if r % 2 == 1 {
                        c = -c;
                    }
                    let term = &(&z[i].pow((top - r) as u32) * z[j]) * &z[i].pow(r as u32);
                    lhs = &lhs + &term.scale(&c);
                }
                let prod: Scalar = (0..=-a)
                    .map(|s| Scalar::one() - qp.q_pow(i, a + 2 * s))
                    .product();
                let rhs = (&k[i].pow(top as u32) * k[j]).scale(&prod);
                zero(format!("Z_serre[i={},j={}]", i + 1, j + 1), &lhs - &rhs);
            }
            for m in 1..=3i64 {
                let lhs = &z[i].pow(m as u32) * k[j];
                let mut rhs = Matrix::zeros(dim, dim);
                for r in 0..=m {
                    let prod: Scalar = (0..r)
                        .map(|s| Scalar::one() - qp.q_pow(i, a + 2 * s))
                        .product();
                    let c = &(&qp.q_pow(i, (m - r) * (a + r)) * &qp.q_binom(m, r, i)?) * &prod;
                    let term = &(&k[i].pow(r as u32) * k[j]) * &z[i].pow((m - r) as u32);
                    rhs = &rhs + &term.scale(&c);
                }
                zero(
                    format!("Z_power_K[i={},j={},m={m}]", i + 1, j + 1),
                    &lhs - &rhs,
                );
            }
        }
    }

    // (Z_j - K_j) W_i(s) ⊆ sum_{t=0}^{-A_ij} W_i(s + A_ij + 2t)
    for (i, sp) in ext.splits.iter().enumerate() {
        let wd = &sp.w;
        for j in (0..n).filter(|&j| j != i) {
            let a = cd.a(i, j);
            let op = z[j] - k[j];
            for s in 0..=wd.d2() {
                let img = wd.slot(s).image(&op)?;
                let parts: Vec<Subspace> = (0..=-a).map(|t| wd.slot(s + a + 2 * t)).collect();
                let target = Subspace::sum_of(dim, &parts)?;
                let bad = img
                    .basis_vectors()
                    .iter()
                    .filter(|v| !target.contains_vector(v))
                    .count();
                report.push(
                    format!("ZK_spreads_W[i={},j={},s={s}]", i + 1, j + 1),
                    bad == 0,
                    bad,
                );
            }
        }
    }

    // perturbing F_i by the all-ones matrix must break a Chevalley relation
    let ones = Matrix::from_rows(vec![vec![Scalar::one(); dim]; dim])?;
    for i in 0..n {
        let f = full.get(Generator::F(i))?;
        let perturbed = full.with_matrix(Generator::F(i), f + &ones)?;
        let broken = verify(&perturbed)
            .entries
            .iter()
            .any(|e| !e.pass && (e.name.starts_with("R4") || e.name.starts_with("R5")));
        report.check(format!("F_perturbation_detected[i={}]", i + 1), broken);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_store::evaluation_module;
    use crate::scalar::s;

    fn ev(d: usize, a: Scalar, eps: [Sign; 2]) -> Representation {
        evaluation_module(d, &a, eps, &CartanData::affine_sl2(s(2, 1)).unwrap()).unwrap()
    }

    #[test]
    fn worked_z_matrix() {
        let rep = ev(1, s(1, 1), [Sign::Plus; 2]);
        let borel = restrict_to_borel(&rep, &[s(1, 1), s(1, 1)]).unwrap();
        let ext = extend(&borel, &[Sign::Plus; 2]).unwrap();
        let z2 = ext.equitable.get(Generator::Z(1)).unwrap();
        // oracle: Z = K - q (q - q^{-1}) K F on the original module
        let k = rep.get(Generator::K(1)).unwrap();
        let f = rep.get(Generator::F(1)).unwrap();
        let oracle = k - &(k * f).scale(&s(3, 1));
        assert_eq!(z2, &oracle);
        let expected =
            Matrix::from_rows(vec![vec![s(1, 2), s(-3, 2)], vec![s(0, 1), s(2, 1)]]).unwrap();
        assert_eq!(z2, &expected);
        assert!(ext.certificate.chevalley_report.overall);
        assert!(!ext.certificate.provisional);
    }

    #[test]
    fn trivial_module_extends_with_zero_f() {
        let rep = ev(0, s(1, 1), [Sign::Plus; 2]);
        let borel = presentation::borel_of(&rep).unwrap();
        let (full, cert) = extend_to_full(&borel, &[Sign::Plus; 2]).unwrap();
        assert!(cert.f.values().all(Matrix::is_zero));
        assert_eq!(full, rep);
        assert_eq!(cert.z["Z1"], Matrix::identity(1));
    }

    #[test]
    fn twisted_input_gives_the_same_extension() {
        let rep = ev(1, s(1, 1), [Sign::Plus; 2]);
        let plain = restrict_to_borel(&rep, &[s(1, 1), s(1, 1)]).unwrap();
        let twisted = restrict_to_borel(&rep, &[s(7, 1), s(1, 3)]).unwrap();
        let a = extend(&plain, &[Sign::Plus; 2]).unwrap();
        let b = extend(&twisted, &[Sign::Plus; 2]).unwrap();
        assert_eq!(a.full, rep);
        assert_eq!(b.full, rep);
        assert_eq!(a.certificate.z, b.certificate.z);
    }

    #[test]
    fn restriction_type_is_alpha() {
        let rep = ev(2, s(1, 1), [Sign::Plus; 2]);
        let borel = restrict_to_borel(&rep, &[s(2, 1), s(3, 1)]).unwrap();
        let p = detect_profile(&borel, None, AsymmetryPolicy::Reject).unwrap();
        assert_eq!(p.alpha().unwrap(), vec![s(2, 1), s(3, 1)]);
        assert!(restrict_to_borel(&rep, &[s(0, 1), s(1, 1)]).is_err());
    }

    #[test]
    fn roundtrips_and_z_identities() {
        for eps in [[Sign::Plus, Sign::Plus], [Sign::Minus, Sign::Plus]] {
            for d in 0..=3 {
                let rep = ev(d, s(3, 1), eps);
                for alpha in [[s(1, 1), s(1, 1)], [s(7, 1), s(1, 3)]] {
                    let rt = roundtrip_check(&rep, &alpha, None).unwrap();
                    assert!(
                        rt.overall(),
                        "d={d}: {:?} {:?}",
                        rt.checks.failed(),
                        rt.notes
                    );
                }
                let borel = restrict_to_borel(&rep, &[s(7, 1), s(1, 3)]).unwrap();
                let ext = extend(&borel, &eps).unwrap();
                let z = check_z_identities(&ext).unwrap();
                assert!(z.overall, "d={d}: {:?}", z.failed());
            }
        }
    }

    #[test]
    fn corrupted_input_is_reported() {
        let rep = ev(1, s(1, 1), [Sign::Plus; 2]);
        let bad = rep
            .with_matrix(Generator::E(0), Matrix::zeros(2, 2))
            .unwrap();
        assert!(matches!(
            restrict_to_borel(&bad, &[s(1, 1), s(1, 1)]),
            Err(Error::RelationFailure { .. })
        ));
        let rt = roundtrip_check(&bad, &[s(1, 1), s(1, 1)], None).unwrap();
        assert!(!rt.overall());
        assert_eq!(rt.checks.failed(), vec!["input_relations".to_string()]);
    }

    #[test]
    fn reducible_input_is_refused() {
        let sum = ev(1, s(1, 1), [Sign::Plus; 2])
            .direct_sum(&ev(1, s(3, 1), [Sign::Plus; 2]))
            .unwrap();
        match roundtrip_check(&sum, &[s(1, 1), s(1, 1)], None) {
            Err(Error::Reducible { witness }) => assert_eq!(witness.dim(), 2),
            other => panic!("expected refusal, got {other:?}"),
        }
        let borel = presentation::borel_of(&sum).unwrap();
        assert!(matches!(
            extend(&borel, &[Sign::Plus; 2]),
            Err(Error::Reducible { .. })
        ));
    }
}
