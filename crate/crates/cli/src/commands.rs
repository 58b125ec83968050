use std::path::{Path, PathBuf};

use homforge_core::algebra::Ring;
use homforge_core::complexes::{cohomology, cone, cone_triangle, dual, dual_dual_witness, ChainMap, Complex, ModComplex};
use homforge_core::homotopy::{hom_space_k, homotopic, iso_in_k, minimize, rank, width, IsoVerdict};
use homforge_core::io::{
    filtration_from_value, filtration_to_value, map_from_spec, module_from_spec, ComplexSpec, MapSpec, ModuleSpec,
};
use homforge_core::resolutions::{koszul, minimal_resolution};
use homforge_core::serre_ar::{
    ar_triangle_ending_at, cone_power_family, default_bound, disguise, finite_length_certificate, miyata_split_test,
    serre_functor, serre_pairing_check, standard_family, verify_right_ar, Check, FiniteLength, MiyataVerdict,
};
use homforge_core::tate::{tate_filtration, tate_resolve, verify_good_filtration, FiltrationReport, VarKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::report::{complex_value, map_value, ranks_line, scalar_form, CliResult, Ctx, Failure, Outcome};

fn internal(what: impl Into<String>) -> Failure {
    Failure::Internal(what.into())
}

fn ranks_value(c: &Complex) -> Value {
    let m: Map<String, Value> = c.ranks().into_iter().filter(|(_, r)| *r > 0).map(|(i, r)| (i.to_string(), json!(r))).collect();
    Value::Object(m)
}

pub fn validate(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let c = ctx.complex_parts(complex, r.as_ref())?;
    Ok(match c.validate() {
        homforge_core::complexes::Validation::Ok => Outcome::ok(
            json!({ "valid": true, "support": c.support(), "ranks": ranks_value(&c), "minimal": c.is_minimal() }),
            vec!["ok".into()],
        ),
        homforge_core::complexes::Validation::Violation { index, row, col, entry } => {
            let msg = format!("d^{} d^{index} is nonzero at ({row}, {col}): {entry}", index + 1);
            Outcome::with_verdict(
                false,
                json!({ "valid": false, "violation": { "index": index, "row": row, "col": col, "entry": entry } }),
                vec![msg],
            )
        }
    })
}

pub fn cohomology_cmd(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let c = ctx.complex(complex, r.as_ref())?;
    let mut out = Map::new();
    let mut lines = vec![];
    if !c.is_zero() {
        for i in c.indices() {
            let h = cohomology(&c, i)?;
            let mut v = json!({ "dim": h.dim });
            if !c.ring().is_artinian() {
                let per: Map<String, Value> = h.per_degree.iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
                v["per_degree"] = Value::Object(per);
                v["certified_through"] = json!(h.certified_through);
            }
            lines.push(format!("H^{i}: {}", h.dim));
            out.insert(i.to_string(), v);
        }
    }
    Ok(Outcome::ok(json!({ "cohomology": out }), lines))
}

pub fn minimize_cmd(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let c = ctx.complex(complex, r.as_ref())?;
    let m = minimize(&c)?;
    if !m.verify()? {
        return Err(internal("minimal model fails its homotopy-equivalence check"));
    }
    let mut res = json!({
        "minimal": complex_value(&m.minimal),
        "cancellations": m.cancellations,
        "to_min": map_value(&m.to_min),
        "from_min": map_value(&m.from_min),
    });
    let mut lines = vec![format!("minimal ranks: {}", ranks_line(&m.minimal)), format!("cancellations: {}", m.cancellations)];
    if !m.minimal.is_zero() {
        let (w, k) = (width(&c)?, rank(&c)?);
        res["width"] = json!(w);
        res["rank"] = json!(k);
        lines.push(format!("width {w}, rank {k}"));
    }
    Ok(Outcome::ok(res, lines))
}

pub fn load_map(ctx: &mut Ctx, path: &Path, ring: Option<&Ring>) -> CliResult<ChainMap> {
    let spec: MapSpec = ctx.json(path)?;
    let r = ctx.pick_ring(spec.ring.as_ref(), path, ring)?;
    map_from_spec(&spec, &r).map_err(|e| Failure::from(e).at(path))
}

pub fn cone_cmd(ctx: &mut Ctx, map: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let f = load_map(ctx, map, r.as_ref())?;
    let c = cone(&f)?;
    Ok(Outcome::ok(json!({ "cone": complex_value(&c) }), vec![format!("cone ranks: {}", ranks_line(&c))]))
}

pub fn hom(ctx: &mut Ctx, x: &Path, y: Option<&PathBuf>, shift: i64, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let x = ctx.complex(x, r.as_ref())?;
    let y = match y {
        Some(p) => ctx.complex(p, r.as_ref())?,
        None => x.clone(),
    };
    let space = hom_space_k(&x, &y.shift(shift))?;
    let dim = space.dim();
    let mut res = json!({
        "shift": shift,
        "dim": dim,
        "basis": space.basis().iter().map(map_value).collect::<Vec<_>>(),
    });
    let mut lines = vec![format!("dim Hom_K(X, Y[{shift}]) = {dim}")];
    if x.ring().is_artinian() {
        let mu = space.mu()?;
        res["mu"] = json!(mu);
        lines.push(format!("minimal generators: {mu}"));
    }
    Ok(Outcome::ok(res, lines))
}

pub fn dual_cmd(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let c = ctx.complex(complex, r.as_ref())?;
    let d = dual(&c)?;
    let w = dual_dual_witness(&c)?;
    let ok = w.target == dual(&d)? && w.is_termwise_invertible();
    if !ok {
        return Err(internal("D D X -> X witness is not a termwise isomorphism"));
    }
    Ok(Outcome::ok(
        json!({ "dual": complex_value(&d), "double_dual_witness": map_value(&w) }),
        vec![format!("D X ranks: {}", ranks_line(&d)), "D D X = X: termwise isomorphism".into()],
    ))
}

fn mod_dims(m: &ModComplex) -> Value {
    let v: Map<String, Value> = m.indices().filter(|&i| m.dim(i) > 0).map(|i| (i.to_string(), json!(m.dim(i)))).collect();
    Value::Object(v)
}

pub fn matlis(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let c = ctx.complex(complex, r.as_ref())?;
    let m = ModComplex::from_free(&c)?;
    let e = m.matlis_dual();
    let w = m.double_dual_witness()?;
    if !w.is_quasi_iso()? {
        return Err(internal("E E X -> X witness is not a quasi-isomorphism"));
    }
    let coh: Map<String, Value> = e.cohomology_dims().into_iter().filter(|(_, d)| *d > 0).map(|(i, d)| (i.to_string(), json!(d))).collect();
    let mut res = json!({ "dims": mod_dims(&e), "cohomology": coh, "double_dual": "quasi-isomorphism" });
    let mut lines = vec![format!(
        "E X k-dimensions: {}",
        e.indices().map(|i| format!("{i}:{}", e.dim(i))).collect::<Vec<_>>().join(" ")
    )];
    if let Some((p, _)) = e.free_form() {
        res["free_form"] = complex_value(&p);
        lines.push(format!("E X is free: {}", ranks_line(&p)));
    }
    Ok(Outcome::ok(res, lines))
}

pub fn resolve(ctx: &mut Ctx, module: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let spec: ModuleSpec = ctx.json(module)?;
    let ring = ctx.pick_ring(spec.ring.as_ref(), module, r.as_ref())?;
    let m = module_from_spec(&spec, &ring).map_err(|e| Failure::from(e).at(module))?;
    let bound = ctx.bound_or(6);
    let res = minimal_resolution(&m, bound as i64)?;
    let betti = res.betti();
    Ok(Outcome::ok(
        json!({ "bound": bound, "betti": betti, "minimal": res.minimal, "truncated": res.truncated, "resolution": complex_value(&res.complex) }),
        vec![format!("betti: {}", json!(betti))],
    ))
}

pub fn koszul_cmd(ctx: &mut Ctx, ring: &Path, elems: &str) -> CliResult<Outcome> {
    let r = ctx.ring(ring)?;
    let es = elems.split(',').map(|s| r.parse(s.trim())).collect::<Result<Vec<_>, _>>()?;
    let k = koszul(&r, &es)?;
    let betti: Vec<usize> = (0..=es.len() as i64).map(|j| k.rank(-j)).collect();
    let mut coh = Map::new();
    for i in k.indices() {
        coh.insert(i.to_string(), json!(cohomology(&k, i)?.dim));
    }
    Ok(Outcome::ok(
        json!({ "complex": complex_value(&k), "betti": betti, "cohomology": coh }),
        vec![format!("betti: {}", json!(betti))],
    ))
}

fn filtration_report_value(rep: &FiltrationReport) -> Value {
    json!({
        "window": rep.window,
        "parameter": rep.parameter,
        "passed": rep.passed(),
        "axioms": rep.axioms.iter().map(|a| json!({ "axiom": a.axiom, "name": a.name, "passed": a.passed, "detail": a.detail })).collect::<Vec<_>>(),
    })
}

fn filtration_lines(rep: &FiltrationReport) -> Vec<String> {
    rep.axioms
        .iter()
        .map(|a| format!("axiom {} ({}): {}{}", a.axiom, a.name, if a.passed { "ok" } else { "FAILED " }, if a.passed { String::new() } else { a.detail.clone() }))
        .collect()
}

pub fn tate(ctx: &mut Ctx, ring: &Path, emit_filtration: bool) -> CliResult<Outcome> {
    let r = ctx.ring(ring)?;
    let bound = ctx.bound_or(8);
    let res = tate_resolve(&r, bound)?;
    let betti = res.betti();
    let acyclic = res.is_acyclic()?;
    if !acyclic {
        return Err(internal("Tate construction is not acyclic in the window"));
    }
    let vars: Vec<Value> = res
        .algebra
        .vars()
        .iter()
        .map(|v| {
            json!({
                "name": v.name,
                "degree": v.degree,
                "kind": match v.kind { VarKind::Exterior => "exterior", VarKind::DividedPower => "divided-power" },
            })
        })
        .collect();
    let mut out = json!({ "bound": bound, "betti": betti, "acyclic": acyclic, "variables": vars, "stages": res.stages });
    let mut lines = vec![betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")];
    if emit_filtration {
        let f = tate_filtration(&res)?;
        let rep = verify_good_filtration(&f)?;
        if !rep.passed() {
            return Err(internal(format!("constructed filtration fails verification: {:?}", rep.axioms)));
        }
        out["filtration"] = filtration_to_value(&f);
        out["filtration_check"] = filtration_report_value(&rep);
        lines.push(format!("good filtration: {} pieces, parameter {}", f.len(), f.parameter));
    }
    Ok(Outcome::ok(out, lines))
}

pub fn filtration_verify(ctx: &mut Ctx, ring: &Path, filtration: &Path) -> CliResult<Outcome> {
    let r = ctx.ring(ring)?;
    let bound = ctx.bound_or(8);
    let v: Value = ctx.json(filtration)?;
    let x = tate_resolve(&r, bound)?.algebra;
    let f = filtration_from_value(&x, &v).map_err(|e| Failure::from(e).at(filtration))?;
    let rep = verify_good_filtration(&f)?;
    Ok(Outcome::with_verdict(rep.passed(), json!({ "bound": bound, "check": filtration_report_value(&rep) }), filtration_lines(&rep)))
}

pub fn serre(ctx: &mut Ctx, complex: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let x = ctx.complex(complex, r.as_ref())?;
    let bound = ctx.bound_or(default_bound(&x));
    let img = serre_functor(&x, bound)?;
    if !img.verify()? {
        return Err(internal("Serre functor audit chain fails"));
    }
    let p = serre_pairing_check(&x, &x, ctx.seed)?;
    let route = match img.route {
        homforge_core::serre_ar::SerreRoute::FreeForm => "free-form",
        homforge_core::serre_ar::SerreRoute::Resolution => "resolution",
    };
    Ok(Outcome::with_verdict(
        p.passed(),
        json!({
            "bound": bound,
            "route": route,
            "serre_image": complex_value(&img.output),
            "pairing": {
                "hom_x_x": p.hom_xy,
                "hom_x_fx": p.hom_y_fx,
                "pairing_rank": p.pairing_rank,
                "squares_checked": p.squares_checked,
                "squares_failed": p.squares_failed,
                "seed": p.seed,
            },
        }),
        vec![
            format!("F(X) ranks: {}", ranks_line(&img.output)),
            format!("dim Hom_K(X, X) = {}, dim Hom_K(X, F X) = {}, pairing rank {}", p.hom_xy, p.hom_y_fx, p.pairing_rank),
            format!("naturality squares: {} checked, {} failed", p.squares_checked, p.squares_failed),
        ],
    ))
}

fn check_value(c: &Check) -> Value {
    match c {
        Check::Passed(s) => json!({ "result": "passed", "detail": s }),
        Check::Failed(s) => json!({ "result": "failed", "detail": s }),
        Check::Vacuous => json!({ "result": "vacuous" }),
        Check::Undecided(s) => json!({ "result": "undecided", "detail": s }),
    }
}

fn check_word(c: &Check) -> &'static str {
    match c {
        Check::Passed(_) => "passed",
        Check::Failed(_) => "FAILED",
        Check::Vacuous => "vacuous",
        Check::Undecided(_) => "undecided",
    }
}

pub fn ar(ctx: &mut Ctx, complex: &Path, family: Option<&PathBuf>, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let x = ctx.complex(complex, r.as_ref())?;
    let fam = match family {
        Some(p) => {
            let specs: Vec<ComplexSpec> = ctx.json(p)?;
            let mut out = vec![];
            for s in &specs {
                let ring = ctx.pick_ring(s.ring.as_ref(), p, Some(x.ring()))?;
                out.push(homforge_core::io::complex_from_spec(s, &ring).map_err(|e| Failure::from(e).at(p))?);
            }
            out
        }
        None => standard_family(&x),
    };
    let t = ar_triangle_ending_at(&x, ctx.seed)?;
    let rep = verify_right_ar(&t, &fam, ctx.seed)?;
    let h = t.connecting();
    let mut lines = vec![];
    let mut res = json!({
        "start": complex_value(t.start()),
        "middle": complex_value(t.triangle.middle()),
        "end": complex_value(t.end()),
        "connecting": map_value(h),
        "family_size": fam.len(),
        "checks": { "rar1": check_value(&rep.ar1), "rar2": check_value(&rep.ar2), "rar3": check_value(&rep.ar3), "samples": rep.samples, "seed": rep.seed },
    });
    match scalar_form(h) {
        Some((form, unit)) => {
            lines.push(format!("connecting map: {form}"));
            res["connecting_scalar"] = json!({ "normalized": form, "unit": unit });
        }
        None => lines.push("connecting map: not scalar; see the report".into()),
    }
    lines.push(format!("start ranks: {}; middle ranks: {}", ranks_line(t.start()), ranks_line(t.triangle.middle())));
    lines.push(format!(
        "RAR1 {}, RAR2 {}, RAR3 {} ({} samples, {} family members)",
        check_word(&rep.ar1),
        check_word(&rep.ar2),
        check_word(&rep.ar3),
        rep.samples,
        fam.len()
    ));
    Ok(Outcome::with_verdict(rep.passed(), res, lines))
}

pub fn miyata(ctx: &mut Ctx, triangle: &Path, disguised: bool, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let f = load_map(ctx, triangle, r.as_ref())?;
    let mut t = cone_triangle(&f)?;
    if disguised {
        t = disguise(&t, &mut ChaCha8Rng::seed_from_u64(ctx.seed))?;
    }
    Ok(match miyata_split_test(&t, ctx.seed)? {
        MiyataVerdict::Split { xi, iso } => {
            if !homotopic(&t.w.compose(&xi), &ChainMap::identity(t.last()))? {
                return Err(internal("split verdict without a section"));
            }
            Outcome::ok(
                json!({ "verdict": "split", "xi": map_value(&xi), "iso": map_value(&iso), "disguised": disguised }),
                vec!["split: section xi with w xi ~ id verified".into()],
            )
        }
        MiyataVerdict::HypothesisNotMet { separator } => Outcome::ok(
            json!({ "verdict": "hypothesis-not-met", "separator": separator, "disguised": disguised }),
            vec![format!("hypothesis not met: {separator}")],
        ),
        MiyataVerdict::Undecided { samples } => Outcome::with_verdict(
            false,
            json!({ "verdict": "undecided", "samples": samples, "disguised": disguised }),
            vec![format!("undecided after {samples} samples")],
        ),
    })
}

fn iso_word(v: &IsoVerdict) -> String {
    match v {
        IsoVerdict::Isomorphic { .. } => "isomorphic".into(),
        IsoVerdict::NotIsomorphic { separator } => format!("not isomorphic ({separator})"),
        IsoVerdict::Undecided { samples } => format!("undecided after {samples} samples"),
    }
}

pub fn cone_family(
    ctx: &mut Ctx,
    complex: &Path,
    endo: Option<&PathBuf>,
    elem: &str,
    max_n: usize,
    ring: Option<&PathBuf>,
) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let x = ctx.complex(complex, r.as_ref())?;
    let u = match endo {
        Some(p) => load_map(ctx, p, Some(x.ring()))?,
        None => ChainMap::identity(&x),
    };
    if u.source != x || u.target != x {
        return Err(Failure::User("the endomorphism must be a map from the complex to itself".into()));
    }
    let a = x.ring().parse(elem)?;
    let fam = cone_power_family(&u, &a, max_n, ctx.seed)?;
    let mut members = vec![];
    for (n, k) in fam.members.iter().enumerate() {
        let mut coh = Map::new();
        for i in k.indices() {
            let h = cohomology(k, i)?;
            let v = if k.ring().is_artinian() {
                json!(h.dim)
            } else {
                json!(h.per_degree.iter().map(|(d, c)| (d.to_string(), json!(c))).collect::<Map<String, Value>>())
            };
            coh.insert(i.to_string(), v);
        }
        members.push(json!({ "n": n + 1, "ranks": ranks_value(k), "cohomology": coh }));
    }
    let verdicts: Vec<Value> = fam.verdicts.iter().map(|(n, m, v)| json!({ "n": n, "m": m, "verdict": iso_word(v) })).collect();
    let fl = finite_length_certificate(&x)?;
    let fl_value = match &fl {
        FiniteLength::Certified => json!({ "result": "certified" }),
        FiniteLength::CertifiedWithinWindow { window, exponents } => {
            json!({ "result": "certified-within-window", "window": window, "exponents": exponents })
        }
        FiniteLength::RefutedWithinWindow { window, endomorphism, var } => {
            json!({ "result": "refuted-within-window", "window": window, "endomorphism": endomorphism, "var": var })
        }
    };
    let distinct = fam.pairwise_non_isomorphic();
    let isos = fam.verdicts.iter().filter(|(_, _, v)| v.is_isomorphic()).count();
    Ok(Outcome::ok(
        json!({ "elem": elem, "max_n": max_n, "members": members, "verdicts": verdicts, "pairwise_non_isomorphic": distinct, "finite_length": fl_value, "seed": ctx.seed }),
        vec![
            format!("K(1..{max_n}) pairwise non-isomorphic: {}", if distinct { "yes" } else { "no" }),
            format!("isomorphic pairs: {isos} of {}", fam.verdicts.len()),
            format!("finite-length cohomology: {}", fl_value["result"].as_str().unwrap_or("")),
        ],
    ))
}

pub fn iso(ctx: &mut Ctx, x: &Path, y: &Path, ring: Option<&PathBuf>) -> CliResult<Outcome> {
    let r = ctx.ring_opt(ring)?;
    let x = ctx.complex(x, r.as_ref())?;
    let y = ctx.complex(y, r.as_ref())?;
    let v = iso_in_k(&x, &y, ctx.seed)?;
    let line = iso_word(&v);
    Ok(match v {
        IsoVerdict::Isomorphic { forward, backward } => Outcome::ok(
            json!({ "verdict": "isomorphic", "forward": map_value(&forward), "backward": map_value(&backward) }),
            vec![line],
        ),
        IsoVerdict::NotIsomorphic { separator } => {
            Outcome::with_verdict(false, json!({ "verdict": "not-isomorphic", "separator": separator }), vec![line])
        }
        IsoVerdict::Undecided { samples } => {
            Outcome::with_verdict(false, json!({ "verdict": "undecided", "samples": samples }), vec![line])
        }
    })
}
