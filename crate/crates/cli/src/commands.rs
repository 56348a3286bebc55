//! The six subcommands. Each returns a JSON report and whether its checks passed.

use logconn_core::hpt::{self, ContractionReport};
use logconn_core::manin::verify_manin;
use logconn_core::moduli::{Connection, FiniteModel};
use logconn_core::rational::Q;
use logconn_core::wpoly::weight_basis;
use logconn_core::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::job::Job;
use crate::report::{self, labelled, q, qs};

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

pub struct Options {
    pub seed: u64,
    pub inject_zero_homotopy: bool,
}

type Run = Result<Outcome, String>;

fn core(e: Error) -> String {
    e.to_string()
}

fn header(cmd: &str, job: &Job, m: &FiniteModel, checks: Vec<String>) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert("command".into(), json!(cmd));
    let pr = job.params;
    h.insert("curve".into(), json!({ "p": pr.p(), "q": pr.q(), "w0": pr.w0() }));
    h.insert("n".into(), json!(m.n()));
    h.insert("s".into(), qs(m.s().diag()));
    if let Some(n0) = &job.n0 {
        h.insert("n0".into(), report::matrix(n0));
    }
    h.insert("wmax".into(), json!(m.wmax));
    h.insert("conventions".into(), report::conventions());
    h.insert("checks_run".into(), json!(checks));
    h
}

fn finish(mut h: Map<String, Value>, body: Map<String, Value>, passed: bool) -> Outcome {
    h.extend(body);
    h.insert("passed".into(), json!(passed));
    Outcome { report: Value::Object(h), passed }
}

fn element_labels(els: &[logconn_core::logdgla::DglaElement]) -> Vec<String> {
    els.iter().map(|e| e.label()).collect()
}

pub fn basis(job: &Job) -> Run {
    let m = job.model()?;
    let mut b = Map::new();
    let weights: Map<String, Value> = job
        .weights
        .iter()
        .map(|&w| {
            let labels: Vec<String> = weight_basis(w, &job.params).iter().map(|mo| mo.label()).collect();
            (w.to_string(), json!(labels))
        })
        .collect();
    b.insert("weight_bases".into(), Value::Object(weights));
    b.insert("u0_degree0".into(), json!(m.basis0().labels()));
    b.insert("u0_degree1".into(), json!(m.basis1().labels()));
    let coh = &m.u0.cohomology;
    b.insert("h0".into(), json!(element_labels(&coh.h0)));
    b.insert("h1".into(), json!(element_labels(&coh.h1)));
    b.insert(
        "dims".into(),
        json!({ "u0_0": m.basis0().len(), "u0_1": m.basis1().len(), "h0": coh.h0.len(), "h1": coh.h1.len() }),
    );
    b.insert("large_enough".into(), json!(m.is_large_enough()));
    let qa = m.qa_data(&job.residue_datum()).map_err(core)?;
    let pattern: Vec<[usize; 2]> = qa.parabolic.pairs().map(|&(i, j)| [i + 1, j + 1]).collect();
    b.insert(
        "residue_data".into(),
        json!({
            "parabolic_pattern": pattern,
            "nilradical": qa.nilradical,
            "orbit_jordan_type": qa.orbit_jordan_type,
        }),
    );
    let ok = m.u0.complex.check_cohomology(coh).map_err(core)?;
    let checks = vec!["H^0 spans ker delta and H^1 complements Im delta".to_string()];
    Ok(finish(header("basis", job, &m, checks), b, ok))
}

fn sample_point(nvars: usize, rng: &mut ChaCha8Rng) -> Vec<Q> {
    (0..nvars)
        .map(|_| Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
        .collect()
}

pub fn mc(job: &Job, opts: &Options) -> Run {
    let m = job.model()?;
    let mut b = Map::new();
    if let Some(fam) = &job.family {
        let r = m.mc_family_verify(fam).map_err(core)?;
        let res = r.residuals.iter().map(|f| report::ratfun(f, &fam.names)).collect();
        b.insert("family_parameters".into(), json!(fam.names));
        b.insert("residuals".into(), labelled(&r.labels, res));
        b.insert("family_verdict".into(), json!(if r.holds { "pass" } else { "fail" }));
        // numeric cross-check at random points
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let (mut tried, mut flat, mut attempts) = (0usize, 0usize, 0usize);
        while tried < job.samples && attempts < 20 * job.samples.max(1) {
            attempts += 1;
            let Some(w) = fam.at(&sample_point(fam.nvars, &mut rng)) else { continue };
            tried += 1;
            if m.mc_verify(&w).map_err(core)?.is_mc {
                flat += 1;
            }
        }
        b.insert("sampled".into(), json!({ "seed": opts.seed, "points": tried, "flat": flat }));
        let ok = r.holds && flat == tried;
        let checks = vec![
            "curvature vanishes identically on the family".to_string(),
            "curvature vanishes at sampled family points".to_string(),
        ];
        return Ok(finish(header("mc", job, &m, checks), b, ok));
    }
    let w = job.connection_or_zero(&m);
    let r = m.mc_verify(&w).map_err(core)?;
    b.insert("connection".into(), connection_json(&m, &w));
    b.insert("residual".into(), labelled(&r.labels, r.residual.iter().map(q).collect()));
    b.insert("is_mc".into(), json!(r.is_mc));
    b.insert("residue".into(), report::matrix(&m.residue(&w).map_err(core)?));
    b.insert("invariants".into(), invariants(&m, &w.c));
    let mut checks = vec!["curvature vanishes".to_string()];
    let mut ok = r.is_mc;
    if job.n0.is_some() {
        let inside = m.in_wa(&w, &job.residue_datum()).map_err(core)?;
        b.insert("residue_in_orbit".into(), json!(inside));
        checks.push("residue lies in the G_S orbit of N0".into());
        ok &= inside;
    }
    Ok(finish(header("mc", job, &m, checks), b, ok))
}

fn connection_json(m: &FiniteModel, w: &Connection) -> Value {
    json!({
        "c": labelled(&m.basis1().labels(), w.c.iter().map(q).collect()),
        "n": labelled(&m.basis0().labels(), w.n.iter().map(q).collect()),
    })
}

fn invariants(m: &FiniteModel, c: &[Q]) -> Value {
    Value::Object(m.pair_products(c).into_iter().map(|(k, v)| (k, q(&v))).collect())
}

pub fn normalize(job: &Job) -> Run {
    let m = job.model()?;
    let gamma = match (&job.gamma, &job.connection) {
        (Some(g), _) => g.clone(),
        (None, Some(c)) if c.n.iter().all(Zero::is_zero) => c.c.clone(),
        (None, Some(_)) => return Err("normalize acts on pure C connections; N must be zero".into()),
        (None, None) => return Err("normalize needs gamma".into()),
    };
    if gamma.len() != m.basis1().len() {
        return Err(format!("gamma must have {} entries", m.basis1().len()));
    }
    let labels = m.basis1().labels();
    let mut b = Map::new();
    b.insert("input".into(), labelled(&labels, gamma.iter().map(q).collect()));
    b.insert("invariants_before".into(), invariants(&m, &gamma));
    let checks = vec![
        "normalized coefficients lie in the H^1 complement".to_string(),
        "gauge word maps the input to the normalized coefficients".to_string(),
    ];
    match m.normalize_to_h1(&gamma) {
        Ok(st) => {
            let in_h1 = m.image_part(&st.gamma).map_err(core)?.iter().all(Zero::is_zero);
            let start = Connection { c: gamma.clone(), n: vec![Q::zero(); m.basis0().len()] };
            let moved = st.word.act(&m, &start).map_err(core)?;
            let reproduces = moved.c == st.gamma && moved.n.iter().all(Zero::is_zero);
            b.insert("normalized".into(), labelled(&labels, st.gamma.iter().map(q).collect()));
            b.insert("h1_coords".into(), qs(&st.h1_coords));
            b.insert("h1".into(), json!(element_labels(&m.u0.cohomology.h1)));
            b.insert(
                "gauge_word".into(),
                json!({
                    "g0": report::matrix(&st.word.g0),
                    "factors": st.word.factors.iter().map(|f| labelled(&m.basis0().labels(), f.iter().map(q).collect())).collect::<Vec<_>>(),
                    "order": "g = exp(u_k) ... exp(u_1) g0",
                }),
            );
            b.insert("invariants_after".into(), invariants(&m, &st.gamma));
            b.insert("in_h1".into(), json!(in_h1));
            b.insert("word_reproduces".into(), json!(reproduces));
            Ok(finish(header("normalize", job, &m, checks), b, in_h1 && reproduces))
        }
        Err(Error::NormalizationObstructed(why)) => {
            b.insert("obstructed".into(), json!(why));
            Ok(finish(header("normalize", job, &m, checks), b, false))
        }
        Err(e) => Err(core(e)),
    }
}

pub fn tangent(job: &Job) -> Run {
    let m = job.model()?;
    let w = job.connection_or_zero(&m);
    if !m.mc_verify(&w).map_err(core)?.is_mc {
        return Err("tangent needs a Maurer-Cartan connection".into());
    }
    let t = m.tangent_complex(&w).map_err(core)?;
    let (h0, h1, h2) = t.cohomology_dims();
    let composite = t.composite_is_zero();
    let mut b = Map::new();
    b.insert("h0".into(), json!(h0));
    b.insert("h1".into(), json!(h1));
    b.insert("h2".into(), json!(h2));
    b.insert(
        "complex_dims".into(),
        json!([t.labels[0].len(), t.t1.rank(), t.labels[2].len()]),
    );
    b.insert("labels".into(), json!({ "t0": t.labels[0], "slice1": t.labels[1], "t2": t.labels[2] }));
    let (u0h0, u0h1) = m.u0.complex.cohomology_dims();
    b.insert("u0_cohomology".into(), json!({ "h0": u0h0, "h1": u0h1 }));
    b.insert("d1_d0_zero".into(), json!(composite));
    let checks = vec!["tangent differential squares to zero".to_string()];
    Ok(finish(header("tangent", job, &m, checks), b, composite))
}

fn identities(r: &ContractionReport) -> Value {
    let failed: Vec<Value> = r
        .failures()
        .map(|c| json!({ "identity": c.name, "degree": c.degree, "witness_column": c.witness }))
        .collect();
    json!({ "passed": r.checks.len() - failed.len(), "failed": failed })
}

fn note(failing: &mut std::collections::BTreeSet<String>, r: &ContractionReport) {
    for f in r.failures() {
        failing.insert(f.name.clone());
    }
}

pub fn hpt(job: &Job, opts: &Options) -> Run {
    let m = job.model()?;
    let w = job.connection_or_zero(&m);
    if !m.mc_verify(&w).map_err(core)?.is_mc {
        return Err("hpt needs a Maurer-Cartan connection".into());
    }
    let max_eigen = job.max_eigen.unwrap_or(job.params.pq());
    let mut b = Map::new();
    let mut failing = std::collections::BTreeSet::new();

    let base = if opts.inject_zero_homotopy {
        hpt::with_zero_homotopy(&m.u0.contraction)
    } else {
        m.u0.contraction.clone()
    };
    let r = base.verify().map_err(core)?;
    note(&mut failing, &r);
    b.insert("u0_contraction".into(), identities(&r));

    let mut slices = Vec::new();
    if opts.inject_zero_homotopy {
        let elem = m.to_element(&w);
        for u in m.dgla.eigenvalues_up_to(max_eigen) {
            let slice = m.dgla.slice(&u, m.wmax).map_err(core)?;
            let c = hpt::with_zero_homotopy(&hpt::slice_contraction(&slice).map_err(core)?);
            let ad = hpt::ad_on_slice(&m.dgla, &slice, &elem).map_err(core)?;
            let r = c.perturb(&ad).map_err(core)?.verify().map_err(core)?;
            note(&mut failing, &r);
            slices.push(json!({ "u": q(&u), "dims": slice.dims(), "identities": identities(&r) }));
        }
    } else {
        for sp in m.perturb_slices(&w, max_eigen).map_err(core)? {
            note(&mut failing, &sp.report);
            if !(sp.a_unchanged && sp.b_unchanged && sp.h_respects_splitting) {
                failing.insert("perturbed maps respect the splitting".into());
            }
            slices.push(json!({
                "u": q(&sp.u),
                "dims": sp.perturbed.big.dims,
                "identities": identities(&sp.report),
                "a_unchanged": sp.a_unchanged,
                "b_unchanged": sp.b_unchanged,
                "h_respects_splitting": sp.h_respects_splitting,
            }));
        }
    }
    b.insert("max_eigen".into(), json!(max_eigen));
    b.insert("slices".into(), Value::Array(slices));

    if let Some(gamma) = &job.gamma {
        if gamma.len() != m.basis1().len() {
            return Err(format!("gamma must have {} entries", m.basis1().len()));
        }
        let v = match m.perturb_u0(gamma) {
            Ok(c) => {
                let r = c.verify().map_err(core)?;
                note(&mut failing, &r);
                identities(&r)
            }
            Err(Error::PerturbationNotNilpotent { bound }) => {
                failing.insert("perturbation is nilpotent".into());
                json!({ "not_nilpotent_within": bound })
            }
            Err(e) => return Err(core(e)),
        };
        b.insert("u0_perturbed_by_gamma".into(), v);
    }
    b.insert("debug_zero_homotopy".into(), json!(opts.inject_zero_homotopy));
    let failing: Vec<String> = failing.into_iter().collect();
    let ok = failing.is_empty();
    b.insert("failing_identities".into(), json!(failing));
    let checks = ["b a = id", "[delta, h] = id - a b", "h a = 0", "b h = 0", "h h = 0", "a chain map", "b chain map"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Ok(finish(header("hpt", job, &m, checks), b, ok))
}

pub fn manin(job: &Job) -> Run {
    let m = job.model()?;
    let r = verify_manin(job.params, job.s.clone()).map_err(core)?;
    let mut b = Map::new();
    b.insert("sizes".into(), json!(r.sizes));
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "holds": c.holds, "witness": c.witness }))
        .collect();
    b.insert("checks".into(), Value::Array(checks));
    let names = r.checks.iter().map(|c| c.name.clone()).collect();
    let ok = r.all_pass();
    Ok(finish(header("manin", job, &m, names), b, ok))
}
