//! The two bundled demonstrations.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use jsnr_core::effectiveness::{build_witness, evaluate_witness, set_effective, Reason, ReferenceSet, SupportMethod};
use jsnr_core::oracle::{entanglement_oracle, lu_invariance_harness, ppt_check, OracleVerdict};
use jsnr_core::quantum::overlap;
use jsnr_core::range::{
    check_nested, hausdorff_distance, region_csv, region_svg, sampled_region, JnrOptions, JsnrOptions, RangeMode,
    SampleOptions, TupleClassifier, TupleVerdict,
};
use jsnr_core::subspace::is_ces;
use jsnr_core::tol;
use serde_json::{json, Value};

use crate::commands::{
    analytic_regions, evidence_line, fmt_vec, references, verdict_word, Context, DETECTION_FLOOR, HAUSDORFF_TOLERANCE,
    NESTING_TOLERANCE,
};
use crate::error::{CliError, EXIT_FAILURE};
use crate::input;
use crate::report::{self, short, Report, SCHEMA_VERSION};
use crate::DemoName;

pub const EXAMPLE1: &str = include_str!("../fixtures/example1.json");
pub const TILES_UPB: &str = include_str!("../fixtures/tiles_upb.json");

/// Orthogonality slack for the bundled product basis.
const TILES_ORTHOGONALITY: f64 = 1e-12;

struct Checks<'a> {
    ctx: &'a Context,
    rows: Vec<Value>,
    failed: usize,
}

impl<'a> Checks<'a> {
    fn new(ctx: &'a Context) -> Self {
        Self {
            ctx,
            rows: Vec::new(),
            failed: 0,
        }
    }

    fn line(&self, s: impl AsRef<str>) {
        if !self.ctx.quiet {
            println!("{}", s.as_ref());
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.line(format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }));
        if !pass {
            self.failed += 1;
        }
        self.rows.push(json!({"name": name, "pass": pass, "detail": detail}));
    }
}

fn out_dir(ctx: &Context) -> PathBuf {
    ctx.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn finish(ctx: &Context, name: &str, c: Checks, result: Value, artifacts: Vec<String>) -> Result<(), CliError> {
    let path = out_dir(ctx).join(format!("demo_{name}.json"));
    let r = Report {
        schema_version: SCHEMA_VERSION,
        command: "demo",
        args: json!({"name": name}),
        config: json!({
            "seed": ctx.seed,
            "ces_tol": ctx.tol,
            "witness_margin_tol": tol::WITNESS_MARGIN,
            "effectiveness": ctx.effectiveness(),
        }),
        warnings: &[],
        result: json!({"checks": c.rows, "details": result}),
        artifacts,
        wall_time_s: ctx.elapsed(),
    };
    report::write_atomic(&path, &report::to_json(&r)?)?;
    c.line(format!("report: {}", path.display()));
    if c.failed > 0 {
        return Err(CliError::new(
            EXIT_FAILURE,
            format!("{} demo check(s) failed", c.failed),
        ));
    }
    Ok(())
}

pub fn run(ctx: &Context, name: DemoName) -> Result<(), CliError> {
    match name {
        DemoName::Example1 => example1(ctx),
        DemoName::TilesUpb => tiles_upb(ctx),
    }
}

fn example1(ctx: &Context) -> Result<(), CliError> {
    let doc = input::parse(EXAMPLE1)?;
    let refs = references(&doc)?;
    let opts = ctx.effectiveness();
    let mut c = Checks::new(ctx);
    c.line("references: |00>, |++>");

    let verdict = set_effective(&refs, &opts)?;
    c.check(
        "pair is effective",
        verdict.effective && verdict.reason == Reason::EffectivePair { i: 0, j: 1 } && !verdict.inconclusive,
        verdict.to_string(),
    );

    // λ_max(P₁ + P₂) = 1 + |⟨00|++⟩| = 3/2 against α = 3/4 + √2/2.
    let expected = 1.5 - (0.75 + FRAC_1_SQRT_2);
    let seesaw = build_witness(&refs, &[1.0, 1.0], SupportMethod::Seesaw, &opts.support)?;
    c.check(
        "seesaw witness margin",
        (seesaw.margin - expected).abs() < 1e-6,
        format!("{} vs {} (tol 1e-6)", short(seesaw.margin), short(expected)),
    );
    let grid = build_witness(&refs, &[1.0, 1.0], SupportMethod::Grid, &opts.support)?;
    c.check(
        "grid witness margin",
        (grid.margin - expected).abs() < HAUSDORFF_TOLERANCE && !grid.oracle_fallback,
        format!("{} vs {} (tol 5e-3)", short(grid.margin), short(expected)),
    );

    let analytic = analytic_regions(&doc, &JnrOptions::default(), &JsnrOptions::default())?;
    let excess = check_nested(&analytic.jnr, &analytic.jsnr, NESTING_TOLERANCE);
    c.check(
        "JSNR inside JNR",
        excess.is_ok(),
        format!(
            "max excess {}",
            excess.as_ref().map(|e| short(*e)).unwrap_or_else(|e| e.to_string())
        ),
    );
    let cl = TupleClassifier::new(&analytic.jnr, &analytic.jsnr, tol::CLASSIFY)?;
    let probes = [
        ([0.75, 0.0], TupleVerdict::Detected),
        ([0.25, 0.25], TupleVerdict::Compatible),
        ([0.9, 0.9], TupleVerdict::Infeasible),
    ];
    let mut markers = Vec::new();
    for (t, want) in probes {
        let got = cl.classify(t);
        c.check(
            &format!("tuple {}", fmt_vec(&t)),
            got.verdict == want,
            verdict_word(got.verdict).to_string(),
        );
        markers.push(got);
    }

    let sample = SampleOptions {
        support: {
            let mut s = SampleOptions::default().support;
            s.seesaw.seed = ctx.seed;
            s
        },
        ..SampleOptions::default()
    };
    let mut sampled = serde_json::Map::new();
    for (name, mode, region) in [
        ("jnr", RangeMode::Jnr, &analytic.jnr),
        ("jsnr", RangeMode::Jsnr, &analytic.jsnr),
    ] {
        let s = sampled_region(&refs, mode, &sample)?;
        let h = hausdorff_distance(region, &s.region);
        c.check(
            &format!("sampled {name} matches analytic"),
            h < HAUSDORFF_TOLERANCE,
            format!("Hausdorff {} (tol 5e-3), inner/outer gap {}", short(h), short(s.gap)),
        );
        sampled.insert(name.into(), json!({"hausdorff": h, "gap": s.gap}));
    }

    let lu_opts = SampleOptions {
        directions: 180,
        ..sample
    };
    let lu = lu_invariance_harness(&refs, 3, ctx.seed, HAUSDORFF_TOLERANCE, &lu_opts)?;
    c.check(
        "JSNR invariant under local unitaries",
        lu.pass,
        format!("{} trials, max drift {}", lu.trials, short(lu.max_hausdorff)),
    );

    let dir = out_dir(ctx);
    let mut artifacts = Vec::new();
    for (file, body) in [
        (
            "fig_example1.svg",
            region_svg(Some(&analytic.jnr), Some(&analytic.jsnr), &markers),
        ),
        ("jnr_example1.csv", region_csv(&analytic.jnr)),
        ("jsnr_example1.csv", region_csv(&analytic.jsnr)),
    ] {
        let p = dir.join(file);
        report::write_atomic(&p, &body)?;
        c.line(format!("wrote {}", p.display()));
        artifacts.push(report::display(&p));
    }

    let details = json!({
        "verdict": verdict,
        "witness_seesaw": {"alpha": seesaw.alpha, "lambda_max": seesaw.lambda_max, "margin": seesaw.margin},
        "witness_grid": {"alpha": grid.alpha, "margin": grid.margin, "resolution": opts.support.grid_resolution},
        "expected_margin": expected,
        "tuples": markers,
        "sampled": sampled,
        "lu_invariance": lu,
    });
    finish(ctx, "example1", c, details, artifacts)
}

/// Orthogonality and complement checks of the bundled basis.
fn verify_tiles(refs: &ReferenceSet, c: &mut Checks, ctx: &Context) -> Result<Value, CliError> {
    let s = refs.states();
    let mut worst: f64 = 0.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            worst = worst.max(overlap(s[i].state(), s[j].state())?.norm());
        }
    }
    c.check(
        "pairwise orthogonal",
        worst < TILES_ORTHOGONALITY,
        format!("max |<psi_i|psi_j>| = {}", short(worst)),
    );
    let complement = refs.span().orthogonal_complement();
    let cert = is_ces(&complement, &ctx.effectiveness().ces);
    c.check(
        "complement is completely entangled",
        complement.dim() == 4 && cert.is_ces && !cert.borderline,
        format!(
            "dim {}, max product overlap {} < 1 - {:e}",
            complement.dim(),
            short(cert.max_product_overlap),
            cert.tolerance
        ),
    );
    Ok(json!({"max_pair_overlap": worst, "complement": cert}))
}

fn tiles_upb(ctx: &Context) -> Result<(), CliError> {
    let doc = input::parse(TILES_UPB)?;
    let refs = references(&doc)?;
    let opts = ctx.effectiveness();
    let mut c = Checks::new(ctx);
    c.line("references: Tiles unextendible product basis in 3x3");
    let fixture = verify_tiles(&refs, &mut c, ctx)?;

    let mut subsets = Vec::new();
    for skip in 0..refs.len() {
        let sub = refs.without(skip)?;
        let v = set_effective(&sub, &opts)?;
        c.check(
            &format!("subset without state {}", skip + 1),
            !v.effective,
            v.to_string(),
        );
        subsets.push(json!({"without": skip, "summary": v.to_string(), "verdict": v}));
    }
    let full = set_effective(&refs, &opts)?;
    c.check(
        "full set",
        full.effective && full.reason == Reason::ComplementCes && !full.inconclusive,
        full.to_string(),
    );
    if let Some(line) = evidence_line(&full) {
        c.line(format!("  evidence: {line}"));
    }

    let (_, rho) = doc
        .density
        .as_ref()
        .ok_or_else(|| CliError::new(EXIT_FAILURE, "bundled fixture lacks its density operator"))?;
    let ppt = ppt_check(rho, tol::DENSITY_POSITIVITY);
    c.check(
        "rho_c is PPT",
        !ppt.is_npt,
        format!(
            "ppt_check(rho_c).is_npt = {} (min eigenvalue {})",
            ppt.is_npt,
            short(ppt.min_eigenvalue)
        ),
    );
    let n = vec![-1.0; refs.len()];
    let w = build_witness(&refs, &n, SupportMethod::Seesaw, &opts.support)?;
    let value = evaluate_witness(&w, rho)?;
    c.check(
        "rho_c is detected",
        value < DETECTION_FLOOR && (value - w.alpha).abs() < 1e-9,
        format!(
            "evaluate_witness(rho_c) = {} along {} (alpha {})",
            short(value),
            fmt_vec(&n),
            short(w.alpha)
        ),
    );
    let oracle = entanglement_oracle(rho, &opts.ces);
    c.check(
        "oracle agrees",
        matches!(oracle.verdict, OracleVerdict::Entangled { .. }),
        format!("support dim {}, {}", oracle.support_dim, oracle_word(&oracle.verdict)),
    );

    let details = json!({
        "fixture": fixture,
        "subsets": subsets,
        "full": full,
        "ppt": ppt,
        "witness": {"direction": n, "alpha": w.alpha, "lambda_max": w.lambda_max, "margin": w.margin, "value": value},
        "oracle": oracle,
    });
    finish(ctx, "tiles_upb", c, details, Vec::new())
}

fn oracle_word(v: &OracleVerdict) -> &'static str {
    match v {
        OracleVerdict::Entangled { .. } => "entangled",
        OracleVerdict::Separable => "separable",
        OracleVerdict::Unknown => "unknown",
    }
}
