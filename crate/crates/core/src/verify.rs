//! Cross-checking suites: every suite recomputes a family of results by
//! an independent route (Euler forms, recursions, duality, closed forms,
//! dimension bookkeeping, or a second spectral-sequence construction)
//! and compares against the main engine.

use crate::error::{Error, Result};
use crate::ext_engine::{ExtEngine, FormalModule};
use crate::frobenius::{
    g1_ext1_weyl_weyl, g1_ext_higher_weyl_weyl, resolution_term, ResolutionVariant,
};
use crate::grothendieck::{euler_weyl_simple, Characters};
use crate::quantum::{gl2, QuantumContext};
use crate::specseq::{
    check_collapse, infinity_page, page, random_bicomplex, Couple, GeneratorMode,
    DEFAULT_MODULUS,
};
use crate::weights::{decompose, linked, weight, WeightContext};
use crate::Weight;

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    /// Number of individual comparisons performed.
    pub checked: u64,
    /// First failure, or a short summary on success.
    pub detail: String,
}

impl Report {
    fn pass(name: &str, checked: u64, detail: String) -> Report {
        Report { name: name.into(), pass: true, checked, detail }
    }

    fn fail(name: &str, checked: u64, detail: String) -> Report {
        Report { name: name.into(), pass: false, checked, detail }
    }
}

/// Tunable effort knobs shared by all suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest weight swept in the algebraic suites.
    pub max_weight: u64,
    /// Random trials in the spectral-sequence suites.
    pub trials: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_weight: 60, trials: 50, seed: 0 }
    }
}

pub const SUITES: &[&str] = &[
    "euler-weyl",
    "euler-simple",
    "top-degree",
    "route",
    "duality",
    "vanishing",
    "restricted",
    "closed-form",
    "frobenius-layer",
    "collapse",
    "dual-route",
    "quantum",
];

/// Run one named suite, or all of them for `"all"`.
pub fn run(name: &str, opts: &VerifyOptions) -> Result<Vec<Report>> {
    let all = name == "all";
    let mut out = Vec::new();
    for &suite in SUITES {
        if !all && suite != name {
            continue;
        }
        out.push(match suite {
            "euler-weyl" => euler_weyl(opts)?,
            "euler-simple" => euler_simple(opts)?,
            "top-degree" => top_degree(opts)?,
            "route" => route_consistency(opts)?,
            "duality" => duality(opts)?,
            "vanishing" => vanishing(opts)?,
            "restricted" => restricted(opts)?,
            "closed-form" => closed_form(opts)?,
            "frobenius-layer" => frobenius_layer(opts)?,
            "collapse" => collapse(opts)?,
            "dual-route" => dual_route(opts)?,
            "quantum" => quantum(opts)?,
            _ => unreachable!(),
        });
    }
    if out.is_empty() {
        return Err(Error::InvalidInput(format!(
            "unknown suite `{name}`; expected one of {SUITES:?} or `all`"
        )));
    }
    Ok(out)
}

fn engine(p: u64) -> Result<ExtEngine> {
    Ok(ExtEngine::new(WeightContext::new(p)?))
}

/// The Euler form of two standard modules is the Kronecker delta; every
/// computed vector must have alternating sum 0 or 1 accordingly.
fn euler_weyl(opts: &VerifyOptions) -> Result<Report> {
    let name = "euler-weyl";
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let e = engine(p)?;
        for l in 0..=opts.max_weight {
            for m in 0..=opts.max_weight {
                let v = e.query(&FormalModule::weyl(m), &FormalModule::weyl(l), None)?;
                let want = i64::from(l == m);
                if v.euler() != want {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("p={p} lambda={l} mu={m}: euler {} != {want}", v.euler()),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "alternating sums are delta".into()))
}

/// Euler form of a standard module against a simple equals the
/// inverse-decomposition coefficient, computed here from characters only.
fn euler_simple(opts: &VerifyOptions) -> Result<Report> {
    let name = "euler-simple";
    let mut checked = 0;
    let max = opts.max_weight.min(80);
    for p in [2u64, 3, 5] {
        let ctx = WeightContext::new(p)?;
        let e = ExtEngine::new(ctx);
        let chars = Characters::new(ctx);
        for l in 0..=max {
            for m in 0..=max {
                let v = e.query(&FormalModule::weyl(l), &FormalModule::simple(m), None)?;
                let want = euler_weyl_simple(&chars, &weight(l), &weight(m))?;
                if v.euler() != want {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("p={p} lambda={l} mu={m}: euler {} != {want}", v.euler()),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "character pairing agrees".into()))
}

/// For linked regular weights mu = pb+j < lambda = pa+i the extension
/// spaces stop exactly at degree a-b, where they are one-dimensional.
fn top_degree(opts: &VerifyOptions) -> Result<Report> {
    let name = "top-degree";
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let ctx = WeightContext::new(p)?;
        let e = ExtEngine::new(ctx);
        for l in 1..=opts.max_weight {
            let dl = decompose(&weight(l), &ctx)?;
            if dl.i == p - 1 {
                continue;
            }
            for m in 0..l {
                let dm = decompose(&weight(m), &ctx)?;
                if dm.i == p - 1 || !linked(&weight(l), &weight(m), &ctx)? {
                    continue;
                }
                let v = e.query(&FormalModule::weyl(m), &FormalModule::weyl(l), None)?;
                let top: Weight = &dl.a - &dm.a;
                let dims = v.dims();
                let got_top = dims.len() as i64 - 1;
                if Weight::from(got_top) != top || *dims.last().unwrap_or(&0) != 1 {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("p={p} lambda={l} mu={m}: dims {dims:?}, expected top {top}"),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "top degree a-b with dim 1".into()))
}

/// Recursion route: for bar-partner pairs the whole vector must satisfy
/// dims[m] = shifted even-pair dims[m-1] + digit-level dims[m]; for
/// matching-residue pairs the vector only depends on the difference of
/// the quotients (translation invariance).
fn route_consistency(opts: &VerifyOptions) -> Result<Report> {
    let name = "route";
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let ctx = WeightContext::new(p)?;
        let e = ExtEngine::new(ctx);
        for l in 1..=opts.max_weight {
            let dl = decompose(&weight(l), &ctx)?;
            if dl.i == p - 1 {
                continue;
            }
            for m in 0..l {
                let dm = decompose(&weight(m), &ctx)?;
                if dm.i == p - 1 || !linked(&weight(l), &weight(m), &ctx)? {
                    continue;
                }
                let v = e.query(&FormalModule::weyl(m), &FormalModule::weyl(l), None)?;
                let gap: Weight = &dl.a - &dm.a;
                if (&gap % 2u64) == Weight::from(0) {
                    // Matching residues: translate mu down to its digit.
                    let lhs2 = FormalModule::weyl(dm.i);
                    let shifted = &gap * p + dl.i;
                    let rhs2 = FormalModule::Weyl(shifted);
                    let w = e.query(&lhs2, &rhs2, None)?;
                    if v.dims() != w.dims() {
                        return Ok(Report::fail(
                            name,
                            checked,
                            format!("p={p} lambda={l} mu={m}: translation broke"),
                        ));
                    }
                } else {
                    // Bar partners: peel one quotient step off the target.
                    let mid_t = FormalModule::Weyl((&dl.a - 1u64) * p + dm.i);
                    let mid = e.query(&FormalModule::weyl(m), &mid_t, None)?;
                    let small = e.query(
                        &FormalModule::Weyl(dm.a.clone()),
                        &FormalModule::Weyl(&dl.a - 1u64),
                        None,
                    )?;
                    let len = v.dims().len().max(mid.dims().len() + 1).max(small.dims().len());
                    for q in 0..len {
                        let want = if q == 0 { 0 } else { mid.get(q - 1) } + small.get(q);
                        if v.get(q) != want {
                            return Ok(Report::fail(
                                name,
                                checked,
                                format!(
                                    "p={p} lambda={l} mu={m} q={q}: {} != {want}",
                                    v.get(q)
                                ),
                            ));
                        }
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "both recursion routes agree".into()))
}

/// Contravariant duality: Ext(M, N) has the same dimensions as
/// Ext(N*, M*).
fn duality(opts: &VerifyOptions) -> Result<Report> {
    let name = "duality";
    let mut checked = 0;
    let max = opts.max_weight.min(40);
    for p in [2u64, 3, 5] {
        let e = engine(p)?;
        for l in 0..=max {
            for m in 0..=max {
                let pairs = [
                    (FormalModule::weyl(m), FormalModule::weyl(l)),
                    (FormalModule::weyl(m), FormalModule::simple(l)),
                    (FormalModule::simple(m), FormalModule::weyl(l)),
                    (FormalModule::tilting(m), FormalModule::weyl(l)),
                ];
                for (src, tgt) in pairs {
                    let v = e.query(&src, &tgt, None)?;
                    let w = e.query(&tgt.dual(), &src.dual(), None)?;
                    if v.dims() != w.dims() {
                        return Ok(Report::fail(
                            name,
                            checked,
                            format!("p={p} {src} vs {tgt}: dual route disagrees"),
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Report::pass(name, checked, "dual queries agree".into()))
}

/// Nothing survives above the proven vanishing bound.
fn vanishing(opts: &VerifyOptions) -> Result<Report> {
    let name = "vanishing";
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let e = engine(p)?;
        for l in 0..=opts.max_weight {
            for m in 0..=opts.max_weight {
                for (src, tgt) in [
                    (FormalModule::weyl(m), FormalModule::weyl(l)),
                    (FormalModule::weyl(l), FormalModule::simple(m)),
                ] {
                    let v = e.query(&src, &tgt, None)?;
                    let bound = e.vanishing_bound(&src, &tgt);
                    for (q, &d) in v.dims().iter().enumerate() {
                        if d > 0 && Weight::from(q as u64) > bound {
                            return Ok(Report::fail(
                                name,
                                checked,
                                format!("p={p} {src} vs {tgt}: dim {d} at {q} > bound {bound}"),
                            ));
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Report::pass(name, checked, "all entries inside the bound".into()))
}

/// In the restricted range both families coincide with simples, and
/// distinct restricted weights sit in different blocks: the whole grid
/// is a Kronecker delta in degree zero.
fn restricted(_opts: &VerifyOptions) -> Result<Report> {
    let name = "restricted";
    let mut checked = 0;
    for p in [3u64, 5, 7] {
        let e = engine(p)?;
        for a in 0..p {
            for b in 0..p {
                let v = e.query(&FormalModule::simple(b), &FormalModule::weyl(a), None)?;
                let want: &[u64] = if a == b { &[1] } else { &[] };
                if v.dims() != want {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("p={p} a={a} b={b}: dims {:?}", v.dims()),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "restricted grid is delta".into()))
}

/// One-digit simples: compare the engine against an inline closed form
/// (an interval condition plus parity of a+b+q and a residue match).
fn closed_form(_opts: &VerifyOptions) -> Result<Report> {
    let name = "closed-form";
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let ctx = WeightContext::new(p)?;
        let e = ExtEngine::new(ctx);
        // Both quotients must stay restricted for the closed form to apply.
        for a in 0..p.min(4) {
            for b in 0..p.min(4) {
                for r1 in 0..p - 1 {
                    for r2 in 0..p - 1 {
                        let src = FormalModule::simple(p * a + r1);
                        let tgt = FormalModule::simple(p * b + r2);
                        let v = e.query(&src, &tgt, None)?;
                        for q in 0..=(a + b + 2) as usize {
                            let qw = q as u64;
                            let interval = qw + b >= a
                                && a + b >= qw
                                && a + qw >= b
                                && (a + b + qw) % 2 == 0;
                            let residues_ok = p == 2
                                || (q % 2 == 0 && r1 == r2)
                                || (q % 2 == 1 && r1 == p - 2 - r2);
                            let want = u64::from(interval && residues_ok);
                            if v.get(q) != want {
                                return Ok(Report::fail(
                                    name,
                                    checked,
                                    format!(
                                        "p={p} a={a} b={b} r1={r1} r2={r2} q={q}: \
                                         {} != {want}",
                                        v.get(q)
                                    ),
                                ));
                            }
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(Report::pass(name, checked, "closed form matches".into()))
}

/// Frobenius-kernel layer: the degree-1 clause of the general formula
/// matches the standalone first-extension formula, and the injective
/// resolutions balance dimensions at every step.
fn frobenius_layer(opts: &VerifyOptions) -> Result<Report> {
    let name = "frobenius-layer";
    let mut checked = 0;
    let max = opts.max_weight.min(30);
    for p in [2u64, 3, 5] {
        let ctx = WeightContext::new(p)?;
        for a in 0..max {
            for b in 0..max {
                for i in 0..p - 1 {
                    for j in 0..p - 1 {
                        let one = g1_ext1_weyl_weyl(&weight(b), j, &weight(a), i, &ctx)?;
                        let hi = g1_ext_higher_weyl_weyl(1, &weight(b), j, &weight(a), i, &ctx)?;
                        if one.dimension() != hi.dimension() {
                            return Ok(Report::fail(
                                name,
                                checked,
                                format!("p={p} a={a} b={b} i={i} j={j}: ext1 mismatch"),
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
        for variant in [ResolutionVariant::Delta, ResolutionVariant::Nabla] {
            for base in 0..max.min(20) {
                for i in 0..p - 1 {
                    for m in 0..40 {
                        let t = resolution_term(&weight(base), i, m, variant, &ctx)?;
                        let t1 = resolution_term(&weight(base), i, m + 1, variant, &ctx)?;
                        if t.kernel_dimension() + t1.kernel_dimension()
                            != t.injective_dimension(&ctx)
                        {
                            return Ok(Report::fail(
                                name,
                                checked,
                                format!("p={p} {variant:?} base={base} i={i} m={m}: \
                                         resolution dims unbalanced"),
                            ));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(Report::pass(name, checked, "layer formulas consistent".into()))
}

fn trial_seed(opts: &VerifyOptions, salt: u64, t: u64) -> u64 {
    opts.seed.wrapping_mul(1_000_003).wrapping_add(salt * 1_000_000 + t)
}

/// Degeneration: the structured generators satisfy the collapse
/// hypothesis and must collapse at the second page; generic bicomplexes
/// that happen to satisfy it must collapse too.
fn collapse(opts: &VerifyOptions) -> Result<Report> {
    let name = "collapse";
    let mut checked = 0;
    for (salt, mode) in [
        (1, GeneratorMode::AllVerticalZero),
        (2, GeneratorMode::AllVerticalInjective),
        (3, GeneratorMode::Generic),
    ] {
        for t in 0..opts.trials {
            let b = random_bicomplex(mode, 4, 3, 4, DEFAULT_MODULUS, trial_seed(opts, salt, t))?;
            if !b.validate().is_empty() {
                return Ok(Report::fail(name, checked, format!("{mode:?} trial {t}: invalid")));
            }
            let rep = check_collapse(&b);
            let structured = mode != GeneratorMode::Generic;
            if structured && !rep.hypothesis_holds {
                return Ok(Report::fail(
                    name,
                    checked,
                    format!("{mode:?} trial {t}: hypothesis should hold"),
                ));
            }
            if rep.hypothesis_holds && !(rep.e2_equals_einf && rep.totals_match) {
                return Ok(Report::fail(
                    name,
                    checked,
                    format!("{mode:?} trial {t}: hypothesis held but no collapse"),
                ));
            }
            checked += 1;
        }
    }
    Ok(Report::pass(name, checked, "hypothesis implies degeneration".into()))
}

/// Two independent constructions of the pages (filtration quotients vs
/// the derived-couple tower) must give identical dimension grids.
fn dual_route(opts: &VerifyOptions) -> Result<Report> {
    let name = "dual-route";
    let mut checked = 0;
    for t in 0..opts.trials {
        let b = random_bicomplex(
            GeneratorMode::Generic,
            4,
            3,
            3,
            DEFAULT_MODULUS,
            trial_seed(opts, 4, t),
        )?;
        let mut couple = Couple::level1(&b)?;
        for r in 1..=6usize {
            couple.check_exactness()?;
            let grid = couple.e_page_dims();
            let pg = page(&b, r);
            for (m, col) in grid.iter().enumerate() {
                for (n, &d) in col.iter().enumerate() {
                    if d != pg.dim(m, n) {
                        return Ok(Report::fail(
                            name,
                            checked,
                            format!("trial {t} r={r} ({m},{n}): couple {d} != page {}",
                                pg.dim(m, n)),
                        ));
                    }
                }
            }
            checked += 1;
            couple = couple.derive()?;
        }
        // The stable page carries the total homology.
        let einf = infinity_page(&b);
        let h = b.total_homology();
        for (k, &hk) in h.iter().enumerate() {
            if einf.diagonal_sum(k) != hk {
                return Ok(Report::fail(
                    name,
                    checked,
                    format!("trial {t}: stable page misses homology in degree {k}"),
                ));
            }
        }
        checked += 1;
    }
    Ok(Report::pass(name, checked, "couple and filtration agree".into()))
}

/// Quantum layer over a characteristic-zero base: same-weight queries
/// give the trivial line, the Euler form is a delta, off-block pairs
/// vanish, and even-gap pairs stop at degree gap with a single line.
fn quantum(opts: &VerifyOptions) -> Result<Report> {
    let name = "quantum";
    let mut checked = 0;
    let max = opts.max_weight.min(40) as i64;
    for l in [2u64, 3, 5] {
        let q = QuantumContext::new(l, 0)?;
        for x in 0..max {
            for y in 0..=x.min(6) {
                let lam = gl2(x, y);
                let v = q.qext_weyl_weyl(&lam, &lam)?;
                if v.dims() != [1] {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("l={l} ({x},{y}): self-ext not a point"),
                    ));
                }
                checked += 1;
            }
        }
        // The determinant degree is a central invariant: pairs with
        // different coordinate sums can never extend, so the Euler form
        // on the degree grid is a delta.
        for x1 in 0..max {
            for x2 in 0..max {
                let v = q.qext_weyl_weyl(&gl2(x1, 0), &gl2(x2, 0))?;
                if v.euler() != i64::from(x1 == x2) {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("l={l} ({x1},0) vs ({x2},0): euler {}", v.euler()),
                    ));
                }
                if x1 != x2 && !v.is_zero() {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("l={l} ({x1},0) vs ({x2},0): off-degree nonzero"),
                    ));
                }
                checked += 1;
            }
        }
        // Determinant-balanced even-gap pairs: no homomorphisms, and a
        // single line in the top degree.
        let li = l as i64;
        for i in 0..li - 1 {
            for g in (2..8).step_by(2) {
                let d = li * g / 2;
                let v = q.qext_weyl_weyl(&gl2(i + d, d), &gl2(li * g + i, 0))?;
                let dims = v.dims();
                if dims.len() as i64 != g + 1 || *dims.last().unwrap() != 1 || v.get(0) != 0 {
                    return Ok(Report::fail(
                        name,
                        checked,
                        format!("l={l} i={i} gap={g}: dims {dims:?}"),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(Report::pass(name, checked, "quantum layer consistent".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_a_small_budget() {
        let opts = VerifyOptions { max_weight: 25, trials: 6, seed: 1 };
        let reports = run("all", &opts).unwrap();
        assert_eq!(reports.len(), SUITES.len());
        for r in &reports {
            assert!(r.pass, "{}: {}", r.name, r.detail);
            assert!(r.checked > 0, "{} checked nothing", r.name);
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run("bogus", &VerifyOptions::default()).is_err());
    }
}
