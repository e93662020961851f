//! Acceptance gate: one criterion per check, one printed line each.

use std::time::{Duration, Instant};

use sl2ext_core::cache::{export_string, import_string};
use sl2ext_core::ext_engine::{ExtEngine, FormalModule};
use sl2ext_core::grothendieck::{euler_weyl_simple, Characters};
use sl2ext_core::specseq::{
    check_collapse, infinity_page, k2_is_zero, page, parse_bicomplex, random_bicomplex,
    witness, write_bicomplex, GeneratorMode, DEFAULT_MODULUS,
};
use sl2ext_core::verify::{run, VerifyOptions};
use sl2ext_core::weights::{weight, WeightContext};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn record(&mut self, name: &str, budget: Duration, body: impl FnOnce() -> Result<u64, String>) {
        let start = Instant::now();
        let outcome = body();
        let elapsed = start.elapsed();
        match outcome {
            Ok(checked) if elapsed <= budget => {
                println!("PASS {name} ({checked} checks, {elapsed:.2?})");
            }
            Ok(checked) => {
                println!(
                    "FAIL {name} (overtime: {elapsed:.2?} > {budget:.2?}, {checked} checks)"
                );
                self.failures.push(format!("{name}: overtime {elapsed:.2?}"));
            }
            Err(msg) => {
                println!("FAIL {name} ({msg}, {elapsed:.2?})");
                self.failures.push(format!("{name}: {msg}"));
            }
        }
    }

    fn suites(&mut self, name: &str, budget: Duration, suites: &[&str], opts: VerifyOptions) {
        self.record(name, budget, || {
            let mut checked = 0;
            for s in suites {
                for rep in run(s, &opts).map_err(|e| e.to_string())? {
                    if !rep.pass {
                        return Err(format!("{}: {}", rep.name, rep.detail));
                    }
                    checked += rep.checked;
                }
            }
            Ok(checked)
        });
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    gate.record("euler-form-standard", secs(30), || {
        let mut checked = 0;
        for p in [2u64, 3, 5, 7] {
            let e = ExtEngine::new(WeightContext::new(p).map_err(|e| e.to_string())?);
            for l in 0..=200u64 {
                for m in 0..=200u64 {
                    let v = e
                        .query(&FormalModule::weyl(m), &FormalModule::weyl(l), None)
                        .map_err(|e| e.to_string())?;
                    if v.euler() != i64::from(l == m) {
                        return Err(format!("p={p} lambda={l} mu={m}: euler {}", v.euler()));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    });

    gate.record("euler-form-simple", secs(60), || {
        let mut checked = 0;
        for p in [2u64, 3, 5] {
            let ctx = WeightContext::new(p).map_err(|e| e.to_string())?;
            let e = ExtEngine::new(ctx);
            let chars = Characters::new(ctx);
            for l in 0..=150u64 {
                for m in 0..=150u64 {
                    let v = e
                        .query(&FormalModule::weyl(l), &FormalModule::simple(m), None)
                        .map_err(|e| e.to_string())?;
                    let want =
                        euler_weyl_simple(&chars, &weight(l), &weight(m)).map_err(|e| e.to_string())?;
                    if v.euler() != want {
                        return Err(format!("p={p} lambda={l} mu={m}: {} != {want}", v.euler()));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    });

    gate.suites(
        "top-degree-line",
        secs(10),
        &["top-degree"],
        VerifyOptions { max_weight: 150, trials: 0, seed: 0 },
    );

    gate.suites(
        "recursion-routes",
        secs(30),
        &["route"],
        VerifyOptions { max_weight: 150, trials: 0, seed: 0 },
    );

    gate.suites(
        "vanishing-bounds",
        secs(30),
        &["vanishing", "duality"],
        VerifyOptions { max_weight: 100, trials: 0, seed: 0 },
    );

    gate.suites(
        "one-digit-closed-forms",
        secs(10),
        &["restricted", "closed-form"],
        VerifyOptions { max_weight: 40, trials: 0, seed: 0 },
    );

    gate.suites(
        "frobenius-kernel-layer",
        secs(30),
        &["frobenius-layer"],
        VerifyOptions { max_weight: 30, trials: 0, seed: 0 },
    );

    gate.record("degeneration-criterion", secs(60), || {
        let mut checked = 0;
        for (salt, mode) in [
            (11u64, GeneratorMode::AllVerticalZero),
            (12, GeneratorMode::AllVerticalInjective),
            (13, GeneratorMode::Generic),
        ] {
            for t in 0..1000u64 {
                let seed = salt * 1_000_000 + t;
                let w = 2 + (seed % 5) as usize;
                let h = 2 + (seed / 5 % 5) as usize;
                let b = random_bicomplex(mode, w, h, 5, DEFAULT_MODULUS, seed)
                    .map_err(|e| e.to_string())?;
                if !b.validate().is_empty() {
                    return Err(format!("{mode:?} seed {seed}: invalid bicomplex"));
                }
                let rep = check_collapse(&b);
                let structured = mode != GeneratorMode::Generic;
                if structured && !rep.hypothesis_holds {
                    return Err(format!("{mode:?} seed {seed}: hypothesis should hold"));
                }
                if rep.hypothesis_holds && !(rep.e2_equals_einf && rep.totals_match) {
                    return Err(format!("{mode:?} seed {seed}: no degeneration"));
                }
                checked += 1;
            }
        }
        // Golden witness: fails the hypothesis, supports a nonzero second
        // differential, and still converges to its (vanishing) homology.
        let text = write_bicomplex(&witness(DEFAULT_MODULUS));
        let b = parse_bicomplex(&text).map_err(|e| e.to_string())?;
        let rep = check_collapse(&b);
        if rep.hypothesis_holds {
            return Err("witness should fail the hypothesis".into());
        }
        if k2_is_zero(&b, 0, 1).map_err(|e| e.to_string())? {
            return Err("witness second differential should be nonzero".into());
        }
        if page(&b, 2).dim(0, 1) != 1 || page(&b, 2).dim(2, 0) != 1 {
            return Err("witness second page is wrong".into());
        }
        if infinity_page(&b).grid(3, 2) != vec![vec![0, 0]; 3] {
            return Err("witness stable page should vanish".into());
        }
        Ok(checked + 1)
    });

    gate.suites(
        "page-route-agreement",
        secs(120),
        &["dual-route"],
        VerifyOptions { max_weight: 0, trials: 200, seed: 0 },
    );

    gate.suites(
        "quantum-layer",
        secs(30),
        &["quantum"],
        VerifyOptions { max_weight: 60, trials: 0, seed: 0 },
    );

    gate.record("determinism-and-persistence", secs(60), || {
        let warm = || -> Result<ExtEngine, String> {
            let e = ExtEngine::new(WeightContext::new(3).map_err(|e| e.to_string())?);
            for a in 0..25u64 {
                for b in 0..25u64 {
                    e.query(&FormalModule::weyl(b), &FormalModule::weyl(a), None)
                        .map_err(|e| e.to_string())?;
                }
            }
            Ok(e)
        };
        let first = export_string(&warm()?);
        let second = export_string(&warm()?);
        if first != second {
            return Err("two identical runs exported different memo tables".into());
        }
        let fresh = ExtEngine::new(WeightContext::new(3).map_err(|e| e.to_string())?);
        let report = import_string(&fresh, &first, true).map_err(|e| e.to_string())?;
        if report.verified != report.imported || report.skipped != 0 {
            return Err(format!("paranoid import: {report:?}"));
        }
        if export_string(&fresh) != first {
            return Err("round trip changed the memo table".into());
        }
        Ok(report.imported as u64 + 1)
    });

    assert!(gate.failures.is_empty(), "failed criteria: {:?}", gate.failures);
}
