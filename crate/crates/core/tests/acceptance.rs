//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use qaffine::bridge::{check_z_identities, extend, restrict_to_borel, roundtrip_check};
use qaffine::linalg::Matrix;
use qaffine::module_store::{
    detect_profile, evaluation_module, is_irreducible, submodule_closure, verify, AsymmetryPolicy,
    Irreducibility, Sign,
};
use qaffine::presentation::{borel_of, borel_to_equitable, chevalley_to_equitable, relation_set};
use qaffine::scalar::{s, QProfile};
use qaffine::split::{check_split_lemmas, split_node};
use qaffine::weight::check_weight_lab;
use qaffine::{CartanData, Representation, Scalar};

struct Case {
    label: String,
    d: usize,
    eps: [Sign; 2],
    rep: Representation,
}

fn suite() -> Vec<Case> {
    let mut out = Vec::new();
    for q in [s(2, 1), s(3, 2)] {
        let cd = CartanData::affine_sl2(q.clone()).expect("valid q");
        for d in 0..=4 {
            for a in [s(1, 1), s(3, 1), s(1, 2)] {
                for eps in [[Sign::Plus, Sign::Plus], [Sign::Minus, Sign::Plus]] {
                    let rep = evaluation_module(d, &a, eps, &cd).expect("factory module");
                    out.push(Case {
                        label: format!("q={q} d={d} a={a} eps=({},{})", eps[0], eps[1]),
                        d,
                        eps,
                        rep,
                    });
                }
            }
        }
    }
    out
}

fn alphas() -> [[Scalar; 2]; 2] {
    [[s(1, 1), s(1, 1)], [s(7, 1), s(1, 3)]]
}

/// Collects the failures of `f` over every case, in order.
fn over<F>(cases: &[Case], f: F) -> Vec<String>
where
    F: Fn(&Case) -> Vec<String> + Sync,
{
    let per: Vec<Vec<String>> = cases.par_iter().map(|c| f(c)).collect();
    per.into_iter().flatten().collect()
}

fn fail(c: &Case, what: impl std::fmt::Display) -> String {
    format!("{}: {what}", c.label)
}

fn relation_soundness(c: &Case) -> Vec<String> {
    let mut bad = Vec::new();
    let cf = verify(&c.rep);
    if !cf.overall {
        bad.push(fail(c, format!("full {:?}", cf.failed())));
    }
    match chevalley_to_equitable(&c.rep) {
        Ok(ef) => {
            let r = verify(&ef);
            if !r.overall {
                bad.push(fail(c, format!("equitable {:?}", r.failed())));
            }
        }
        Err(e) => bad.push(fail(c, e)),
    }
    match borel_of(&c.rep) {
        Ok(b) => {
            let r = verify(&b);
            if !r.overall {
                bad.push(fail(c, format!("Borel {:?}", r.failed())));
            }
            match borel_to_equitable(&b) {
                Ok(eb) => {
                    let r = verify(&eb);
                    let has19 = r.entries.iter().any(|e| e.name.starts_with("rel19"));
                    if !r.overall || !has19 {
                        bad.push(fail(c, format!("equitable Borel {:?}", r.failed())));
                    }
                }
                Err(e) => bad.push(fail(c, e)),
            }
        }
        Err(e) => bad.push(fail(c, e)),
    }
    bad
}

fn split_theorem(c: &Case) -> Vec<String> {
    let borel = match borel_of(&c.rep) {
        Ok(b) => b,
        Err(e) => return vec![fail(c, e)],
    };
    let profile = match detect_profile(&borel, None, AsymmetryPolicy::Reject) {
        Ok(p) => p,
        Err(e) => return vec![fail(c, e)],
    };
    let mut bad = Vec::new();
    for i in 0..2 {
        let np = &profile.nodes[i];
        if !np.d_is_integral() || np.d() != Some(c.d as u32) {
            bad.push(fail(c, format!("node {}: shape {}", i + 1, np.d_label())));
            continue;
        }
        match split_node(&borel, i, np) {
            Ok(sp) if sp.w.is_direct() => {}
            Ok(_) => bad.push(fail(c, format!("node {}: W not direct", i + 1))),
            Err(e) => bad.push(fail(c, e)),
        }
    }
    bad
}

fn lemma_battery(c: &Case) -> Vec<String> {
    let mut bad = Vec::new();
    for alpha in alphas() {
        let borel = match restrict_to_borel(&c.rep, &alpha) {
            Ok(b) => b,
            Err(e) => return vec![fail(c, e)],
        };
        let profile = match detect_profile(&borel, None, AsymmetryPolicy::Reject) {
            Ok(p) => p,
            Err(e) => return vec![fail(c, e)],
        };
        for i in 0..2 {
            let r = split_node(&borel, i, &profile.nodes[i])
                .and_then(|sp| check_split_lemmas(&borel, &sp.u, &sp.v, &sp.w));
            match r {
                Ok(r) if r.overall => {}
                Ok(r) => bad.push(fail(c, format!("node {}: {:?}", i + 1, r.failed()))),
                Err(e) => bad.push(fail(c, e)),
            }
        }
    }
    bad
}

fn roundtrip(c: &Case) -> Vec<String> {
    let mut bad = Vec::new();
    for alpha in alphas() {
        match roundtrip_check(&c.rep, &alpha, Some(&c.eps)) {
            Ok(rt) if rt.overall() => {}
            Ok(rt) => bad.push(fail(c, format!("{:?} {:?}", rt.checks.failed(), rt.notes))),
            Err(e) => bad.push(fail(c, e)),
        }
    }
    bad
}

fn z_identities(c: &Case) -> Vec<String> {
    let mut bad = Vec::new();
    for alpha in alphas() {
        let r = restrict_to_borel(&c.rep, &alpha)
            .and_then(|b| extend(&b, &c.eps))
            .and_then(|x| check_z_identities(&x));
        match r {
            Ok(r) if r.overall => {}
            Ok(r) => bad.push(fail(c, format!("{:?}", r.failed()))),
            Err(e) => bad.push(fail(c, e)),
        }
    }
    bad
}

fn q_identities() -> Vec<String> {
    let mut bad = Vec::new();
    for q in [s(2, 1), s(3, 2), s(-3, 1)] {
        let qp = QProfile::new(q.clone(), vec![1]).expect("valid q");
        for m in 1..=8 {
            for r in 1..=m {
                if !qp.check_pascal_identity(m, r, 0) {
                    bad.push(format!("q={q}: Pascal identity at m={m}, r={r}"));
                }
            }
        }
        for lam in [s(-2, 1), s(1, 3), s(5, 1)] {
            for m in 0..=8 {
                if !qp.check_qbinomial_theorem(m, 0, &lam) {
                    bad.push(format!("q={q}: q-binomial theorem at m={m}, lambda={lam}"));
                }
            }
        }
    }
    bad
}

fn weight_lab(c: &Case) -> Vec<String> {
    match check_weight_lab(&c.rep) {
        Ok(r) if r.overall => Vec::new(),
        Ok(r) => vec![fail(c, format!("{:?}", r.failed()))],
        Err(e) => vec![fail(c, e)],
    }
}

fn negative_controls() -> Vec<String> {
    let mut bad = Vec::new();
    let cd = CartanData::affine_sl2(s(2, 1)).expect("valid q");
    let plus = [Sign::Plus, Sign::Plus];
    let m1 = evaluation_module(1, &s(1, 1), plus, &cd).expect("factory");
    let m3 = evaluation_module(1, &s(3, 1), plus, &cd).expect("factory");
    let sum = m1.direct_sum(&m3).expect("same algebra");
    match is_irreducible(&sum) {
        Irreducibility::Reducible(w) => {
            let proper = !w.is_zero() && !w.is_full();
            let invariant = sum
                .assignments()
                .all(|(_, m)| w.image(m).map(|img| w.contains(&img)).unwrap_or(false));
            let closed = w
                .basis_vectors()
                .iter()
                .all(|v| w.contains(&submodule_closure(&sum, v)));
            if !(proper && invariant && closed) {
                bad.push(format!(
                    "direct sum: witness of dimension {} is not a proper submodule",
                    w.dim()
                ));
            }
        }
        v => bad.push(format!("direct sum flagged {}", v.label())),
    }

    let full = evaluation_module(2, &s(3, 1), plus, &cd).expect("factory");
    // r1-r4 are homogeneous in each e_i, so a zeroed e_i is still a Borel module
    let borel = borel_of(&full).expect("converts");
    let trivial_e = (0..2).all(|i| {
        let g = qaffine::Generator::BE(i);
        verify(
            &borel
                .with_matrix(g, Matrix::zeros(3, 3))
                .expect("same shape"),
        )
        .overall
    });
    if !trivial_e {
        bad.push("Borel form: zeroed e_i unexpectedly breaks a relation".into());
    }
    let forms = [
        full.clone(),
        chevalley_to_equitable(&full).expect("converts"),
        borel_to_equitable(&borel).expect("converts"),
    ];
    for rep in &forms {
        for (g, m) in rep.assignments() {
            let broken = rep
                .with_matrix(g, Matrix::zeros(m.rows(), m.cols()))
                .expect("same shape");
            let failed = verify(&broken).failed();
            let names = relation_set(rep.pid(), &cd);
            let named = failed.iter().any(|f| names.iter().any(|r| &r.name == f));
            if !named {
                bad.push(format!(
                    "{}: zeroing {g} breaks no relation",
                    rep.pid().name()
                ));
            }
        }
    }
    bad
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cases = suite();
    let results: Vec<(&str, Vec<String>)> = vec![
        ("relation soundness", over(&cases, relation_soundness)),
        (
            "split decomposition integrality",
            over(&cases, split_theorem),
        ),
        ("split structure battery", over(&cases, lemma_battery)),
        ("bijection round trip", over(&cases, roundtrip)),
        ("Z-operator identities", over(&cases, z_identities)),
        ("q-identity suite", q_identities()),
        ("weight-lab battery", over(&cases, weight_lab)),
        ("negative controls", negative_controls()),
    ];
    let mut all = true;
    for (k, (name, failures)) in results.iter().enumerate() {
        let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name}", k + 1);
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        all &= failures.is_empty();
    }
    println!(
        "{} modules, {:.1}s",
        cases.len(),
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
