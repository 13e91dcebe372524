//! Scene files, verification suites, the pushforward check and reports for
//! the `hhpush` command line tool.

pub mod pushforward;
pub mod report;
pub mod rng;
pub mod scene_file;
pub mod suites;

use hhpush_core::homology::homology_dims;
use hhpush_core::forms::{Cone, OmegaY, OMEGA};
use hhpush_core::signs;

use report::{HomologyRow, Report};
use suites::{Ctx, ToddSign};

/// Settings shared by the subcommands.
#[derive(Clone, Debug)]
pub struct Options {
    pub scene: String,
    pub seed: u64,
    pub trunc: Option<usize>,
    pub window: Option<usize>,
    pub todd: ToddSign,
    pub timings: bool,
}

fn base(command: &str, opts: &Options, spec: &hhpush_core::SceneSpec) -> Report {
    Report {
        command: command.to_string(),
        scene: spec.name.clone(),
        seed: opts.seed,
        trunc: opts.trunc.unwrap_or(spec.trunc),
        window: opts.window.unwrap_or(spec.window),
        todd_sign: opts.todd.name().to_string(),
        sign_ledger_version: signs::VERSION.to_string(),
        validation: Vec::new(),
        suites: Vec::new(),
        homology: Vec::new(),
        pushforward: None,
        passed: false,
    }
}

/// Loads and validates the scene, applying the `--trunc`/`--window` overrides.
fn prepare(command: &str, opts: &Options) -> anyhow::Result<Result<(hhpush_core::Scene, Report), Report>> {
    let mut spec = scene_file::load_spec(&opts.scene)?;
    if let Some(n) = opts.trunc {
        spec.trunc = n;
    }
    if let Some(d) = opts.window {
        spec.window = d;
    }
    let mut report = base(command, opts, &spec);
    match scene_file::build(&spec) {
        Ok(scene) => Ok(Ok((scene, report))),
        Err(errs) => {
            report.validation = errs;
            Ok(Err(report))
        }
    }
}

/// `verify`: runs the named suite, or every suite for `all`.
pub fn verify(opts: &Options, suite: &str) -> anyhow::Result<Report> {
    let chosen: Vec<&suites::Suite> = if suite == "all" {
        suites::SUITES.iter().collect()
    } else {
        match suites::find(suite) {
            Some(s) => vec![s],
            None => {
                let names: Vec<&str> = suites::SUITES.iter().map(|s| s.name).collect();
                anyhow::bail!("unknown suite '{}' (suites: all, {})", suite, names.join(", "));
            }
        }
    };
    let (scene, mut report) = match prepare("verify", opts)? {
        Ok(x) => x,
        Err(r) => return Ok(r),
    };
    let ctx = Ctx { scene: &scene, seed: opts.seed, trunc: scene.trunc, window: scene.window, todd: opts.todd, scale: 1.0 };
    // one job per suite; joined in suite order so reports stay deterministic
    report.suites = std::thread::scope(|sc| {
        let jobs: Vec<_> = chosen.iter().map(|s| sc.spawn(|| suites::run(s, &ctx, opts.timings))).collect();
        jobs.into_iter().map(|j| j.join().expect("suite job panicked")).collect()
    });
    report.passed = report.suites.iter().all(|s| s.checks.iter().all(|c| c.passed()));
    Ok(report)
}

/// `pushforward`: both routes for the unit class on `Y`.
pub fn pushforward(opts: &Options) -> anyhow::Result<Report> {
    let (scene, mut report) = match prepare("pushforward", opts)? {
        Ok(x) => x,
        Err(r) => return Ok(r),
    };
    let p = pushforward::pushforward(&scene, opts.todd, scene.window)?;
    report.passed = p.agree;
    report.pushforward = Some(p);
    if let Ok(h) = homology_dims(&OMEGA, &scene, scene.window) {
        report.homology.push(row(h));
    }
    Ok(report)
}

fn row(h: hhpush_core::homology::HomologyDims) -> HomologyRow {
    HomologyRow {
        complex: h.complex,
        window: h.window,
        even: h.even,
        odd: h.odd,
        next_window: h.next,
        stable: h.stable,
        slices: h.slices.iter().map(|s| (s.weight, s.even, s.odd)).collect(),
    }
}

/// `homology`: windowed homology of `(Ω, −df∧)`, the cone and `Ω_Y`. Only the
/// first row decides the outcome; the others can grow with the window.
pub fn homology(opts: &Options) -> anyhow::Result<Report> {
    let (scene, mut report) = match prepare("homology", opts)? {
        Ok(x) => x,
        Err(r) => return Ok(r),
    };
    let d = scene.window;
    report.homology.push(row(homology_dims(&OMEGA, &scene, d)?));
    report.homology.push(row(homology_dims(&Cone, &scene, d)?));
    report.homology.push(row(homology_dims(&OmegaY, &scene, d)?));
    report.passed = report.homology[0].stable;
    Ok(report)
}
