//! The four command-line workflows. Each returns a [`Report`]; printing and
//! exit codes belong to the binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::{forward_direct_stack, forward_spectral, superpose, CurrentLayer, FieldMap};
use crate::geometry::{Layer, Plane, StackGeometry, ValidatedGeometry};
use crate::inverse::{
    auto_k_cut, detect_rank_deficiency, log_spaced, planes_same_side, reconstruct_two_layer, resolve_k_cut,
    DcPolicy, Reconstruction, Verdict,
};
use crate::scenarios::{add_field_noise, rasterize_layer, NOISE_PRNG};
use crate::spectral::{Component, ScalarField2D};

use super::config::RunConfig;
use super::gridfile::{read_grid, write_atomic, write_grid};
use super::metrics::{relative_rms, LayerMetrics, MetricsReport};

pub const TOOL: &str = "magstack";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FFT_BACKEND: &str = "rustfft 6 (complex, forward scaled by dx·dy)";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const METRICS_FILE: &str = "metrics.json";
/// Sub-cells per axis used by the `--oracle` quadrature.
pub const ORACLE_QUAD_SUBDIV: usize = 3;
/// Interior fraction compared by the oracle check.
pub const ORACLE_FRACTION: f64 = 0.5;

/// Outcome of a workflow: human-readable text, `key=value` pairs and
/// warnings.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub text: String,
    pub values: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub verdict: Option<Verdict>,
}

impl Report {
    fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.push((key.into(), value.to_string()));
    }

    /// Shell exit code implied by the report (errors are mapped separately).
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::RankDeficient) => 3,
            _ => 0,
        }
    }
}

/// Run metadata written next to every output set. Holds no timestamps or
/// paths, so a replay produces an identical file.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub fft: &'static str,
    pub noise_prng: &'static str,
    pub config: &'a RunConfig,
    pub outputs: Vec<String>,
}

fn write_manifest(dir: &Path, command: &str, cfg: &RunConfig, mut outputs: Vec<String>) -> Result<()> {
    outputs.sort();
    let m = Manifest {
        tool: TOOL,
        version: VERSION,
        command,
        fft: FFT_BACKEND,
        noise_prng: NOISE_PRNG,
        config: cfg,
        outputs,
    };
    let mut text = serde_json::to_string_pretty(&m).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
}

/// Validated geometry, reporting one-sided placements as such rather than
/// as a generic placement error.
pub fn validated_geometry(raw: &StackGeometry<f64>) -> Result<ValidatedGeometry<f64>> {
    if planes_same_side(raw) {
        return Err(Error::SameSidePlanes);
    }
    raw.validate()
}

/// Ground truth and the synthesized (optionally noisy) field maps.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub truth: [CurrentLayer<f64>; 2],
    pub clean: [FieldMap<f64>; 2],
    pub measured: [FieldMap<f64>; 2],
}

/// Rasterizes the scenario and evaluates the spectral forward model at both
/// planes. Noise on `M1` uses `seed`, on `M2` `seed + 1`.
pub fn simulate(cfg: &RunConfig, g: &ValidatedGeometry<f64>, warnings: &mut Vec<String>) -> Result<Simulation> {
    let grid = cfg.grid.to_grid();
    let strips = cfg.strips();
    if strips.is_empty() {
        warnings.push("scenario has no strips; all fields are zero".into());
    }
    let s1 = rasterize_layer(&strips, Layer::S1, &grid, g)?;
    let s2 = rasterize_layer(&strips, Layer::S2, &grid, g)?;
    let at = |plane: Plane| -> Result<FieldMap<f64>> {
        superpose(&[
            forward_spectral(&s1, g, plane, &cfg.reconstruction)?,
            forward_spectral(&s2, g, plane, &cfg.reconstruction)?,
        ])
    };
    let clean = [at(Plane::M1)?, at(Plane::M2)?];
    let sigma = cfg.scenario.noise_sigma_t;
    let seed = cfg.scenario.seed;
    let measured = [
        add_field_noise(&clean[0], sigma, seed)?,
        add_field_noise(&clean[1], sigma, seed.wrapping_add(1))?,
    ];
    Ok(Simulation {
        truth: [s1, s2],
        clean,
        measured,
    })
}

/// Relative RMS of `(B_x, B_y)` jointly over the central `fraction`.
fn field_rms(a: &FieldMap<f64>, t: &FieldMap<f64>, fraction: f64) -> Result<f64> {
    let ex = relative_rms(a.bx(), t.bx(), fraction)?;
    let ey = relative_rms(a.by(), t.by(), fraction)?;
    let nx = norm_sq(t.bx(), fraction);
    let ny = norm_sq(t.by(), fraction);
    if nx + ny == 0.0 {
        return Ok((ex * ex + ey * ey).sqrt());
    }
    Ok(((ex * ex * nx + ey * ey * ny) / (nx + ny)).sqrt())
}

fn norm_sq(f: &ScalarField2D<f64>, fraction: f64) -> f64 {
    let xs = super::metrics::central_range(f.nx(), fraction);
    super::metrics::central_range(f.ny(), fraction)
        .map(|j| f.row(j)[xs.clone()].iter().map(|v| v * v).sum::<f64>())
        .sum()
}

fn plane_tag(p: Plane) -> &'static str {
    match p {
        Plane::M1 => "m1",
        Plane::M2 => "m2",
    }
}

fn layer_tag(l: Layer) -> &'static str {
    match l {
        Layer::S1 => "s1",
        Layer::S2 => "s2",
    }
}

struct Writer<'a> {
    dir: &'a Path,
    cfg: &'a RunConfig,
    written: Vec<String>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path, cfg: &'a RunConfig) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Writer {
            dir,
            cfg,
            written: Vec::new(),
        })
    }

    fn grid(&mut self, stem: &str, f: &ScalarField2D<f64>) -> Result<()> {
        let format = self.cfg.output.format;
        let name = format!("{stem}.{}", format.extension());
        write_grid(&self.dir.join(&name), f, format)?;
        self.written.push(name);
        Ok(())
    }

    fn fields(&mut self, prefix: &str, m: &FieldMap<f64>) -> Result<()> {
        let p = plane_tag(m.plane());
        self.grid(&format!("{prefix}{p}_bx"), m.bx())?;
        self.grid(&format!("{prefix}{p}_by"), m.by())
    }

    fn layer(&mut self, prefix: &str, l: &CurrentLayer<f64>, with_jx: bool) -> Result<()> {
        let t = layer_tag(l.layer());
        if with_jx {
            self.grid(&format!("{prefix}{t}_jx"), l.jx())?;
        }
        self.grid(&format!("{prefix}{t}_jy"), l.jy())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
        text.push('\n');
        write_atomic(&self.dir.join(name), text.as_bytes())?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn finish(self, command: &str) -> Result<()> {
        write_manifest(self.dir, command, self.cfg, self.written)
    }
}

fn write_simulation(w: &mut Writer<'_>, sim: &Simulation) -> Result<()> {
    for m in &sim.measured {
        w.fields("", m)?;
    }
    for l in &sim.truth {
        w.layer("truth_", l, false)?;
    }
    Ok(())
}

/// `simulate`: writes field maps at both planes, the ground-truth layers and
/// a manifest. With `oracle`, also the direct-quadrature fields and their
/// deviation from the spectral model.
pub fn run_simulate(cfg: &RunConfig, out: &Path, oracle: bool) -> Result<Report> {
    let g = validated_geometry(&cfg.geometry.to_geometry())?;
    let mut report = Report::default();
    let sim = simulate(cfg, &g, &mut report.warnings)?;
    let mut w = Writer::new(out, cfg)?;
    write_simulation(&mut w, &sim)?;
    writeln!(report.text, "simulated {}×{} grid into {}", cfg.grid.nx, cfg.grid.ny, out.display()).ok();
    if oracle {
        for (clean, plane) in sim.clean.iter().zip(Plane::BOTH) {
            let direct = forward_direct_stack(&sim.truth, &g, plane, ORACLE_QUAD_SUBDIV)?;
            w.fields("oracle_", &direct)?;
            let rms = field_rms(clean, &direct, ORACLE_FRACTION)?;
            writeln!(
                report.text,
                "{plane:?}: spectral vs direct quadrature relative RMS {rms:.3e} over the interior {:.0}%",
                ORACLE_FRACTION * 100.0
            )
            .ok();
            report.put(format!("oracle_rms_{}", plane_tag(plane)), format!("{rms:e}"));
        }
    }
    w.finish("simulate")?;
    Ok(report)
}

fn reconstruct(cfg: &RunConfig, g: &ValidatedGeometry<f64>, m: &[FieldMap<f64>; 2]) -> Result<Reconstruction<f64>> {
    reconstruct_two_layer(&m[0], &m[1], g, &cfg.reconstruction)
}

fn write_reconstruction(w: &mut Writer<'_>, r: &Reconstruction<f64>) -> Result<()> {
    w.layer("", &r.s1, true)?;
    w.layer("", &r.s2, true)
}

fn metrics(r: &Reconstruction<f64>, truth: [&ScalarField2D<f64>; 2], g: &ValidatedGeometry<f64>) -> Result<MetricsReport> {
    Ok(MetricsReport {
        central_fraction: super::metrics::CENTRAL_FRACTION,
        s1: LayerMetrics::compute(r.s1.jy(), truth[0], g.delta1())?,
        s2: LayerMetrics::compute(r.s2.jy(), truth[1], g.delta2())?,
    })
}

fn describe_metrics(report: &mut Report, m: &MetricsReport) {
    for (tag, l) in [("s1", &m.s1), ("s2", &m.s2)] {
        writeln!(
            report.text,
            "{}: relative RMS {:.4} (central {:.0}%), peak |error| {:.4e} A/m², plateau current {:.5} A (truth {:.5} A)",
            tag.to_uppercase(),
            l.relative_rms,
            m.central_fraction * 100.0,
            l.peak_abs_error,
            l.plateau_current,
            l.truth_plateau_current
        )
        .ok();
        report.put(format!("{tag}_relative_rms"), format!("{:e}", l.relative_rms));
        report.put(format!("{tag}_peak_abs_error"), format!("{:e}", l.peak_abs_error));
        report.put(format!("{tag}_plateau_current"), format!("{:e}", l.plateau_current));
    }
}

fn describe_reconstruction(report: &mut Report, cfg: &RunConfig, r: &Reconstruction<f64>) {
    writeln!(report.text, "k_cut {:.6e} rad/m, DC policy {:?}", r.k_cut, cfg.reconstruction.dc_policy).ok();
    report.put("k_cut", format!("{:e}", r.k_cut));
}

/// Paths of the four measured components.
#[derive(Debug, Clone)]
pub struct FieldFiles {
    pub m1x: PathBuf,
    pub m1y: PathBuf,
    pub m2x: PathBuf,
    pub m2y: PathBuf,
}

fn load_component(path: &Path, expect: Component) -> Result<ScalarField2D<f64>> {
    let f = read_grid(path)?;
    if f.component() != expect {
        return Err(Error::InvalidParameter(format!(
            "{} holds {} but {} was expected",
            path.display(),
            f.component().name(),
            expect.name()
        )));
    }
    Ok(f)
}

fn load_plane(plane: Plane, x: &Path, y: &Path, g: &ValidatedGeometry<f64>, warnings: &mut Vec<String>) -> Result<FieldMap<f64>> {
    let bx = load_component(x, Component::Bx)?;
    let by = load_component(y, Component::By)?;
    if !bx.same_lattice(&by) {
        return Err(Error::GridMismatch(format!(
            "{} and {} are on different lattices",
            x.display(),
            y.display()
        )));
    }
    let z = g.plane_z(plane);
    if (bx.z() - z).abs() > 1e-9 || (by.z() - z).abs() > 1e-9 {
        warnings.push(format!(
            "{plane:?} files record z = {} m but the geometry places the plane at {z} m; using the geometry",
            bx.z()
        ));
    }
    FieldMap::new(plane, bx.with_z(z), by.with_z(z))
}

/// `reconstruct`: inverts measured maps; with truth files also writes a
/// metrics report.
pub fn run_reconstruct(
    cfg: &RunConfig,
    files: &FieldFiles,
    truth: Option<(&Path, &Path)>,
    out: &Path,
) -> Result<Report> {
    let g = validated_geometry(&cfg.geometry.to_geometry())?;
    let mut report = Report::default();
    let maps = [
        load_plane(Plane::M1, &files.m1x, &files.m1y, &g, &mut report.warnings)?,
        load_plane(Plane::M2, &files.m2x, &files.m2y, &g, &mut report.warnings)?,
    ];
    let r = reconstruct(cfg, &g, &maps)?;
    let mut w = Writer::new(out, cfg)?;
    write_reconstruction(&mut w, &r)?;
    describe_reconstruction(&mut report, cfg, &r);
    if let Some((t1, t2)) = truth {
        let (t1, t2) = (load_component(t1, Component::Jy)?, load_component(t2, Component::Jy)?);
        let m = metrics(&r, [&t1, &t2], &g)?;
        w.json(METRICS_FILE, &m)?;
        describe_metrics(&mut report, &m);
    }
    w.finish("reconstruct")?;
    Ok(report)
}

/// `roundtrip`: simulate, reconstruct and score in one run.
pub fn run_roundtrip(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let g = validated_geometry(&cfg.geometry.to_geometry())?;
    let mut report = Report::default();
    let sim = simulate(cfg, &g, &mut report.warnings)?;
    let r = reconstruct(cfg, &g, &sim.measured)?;
    let m = metrics(&r, [sim.truth[0].jy(), sim.truth[1].jy()], &g)?;
    let mut w = Writer::new(out, cfg)?;
    write_simulation(&mut w, &sim)?;
    write_reconstruction(&mut w, &r)?;
    w.json(METRICS_FILE, &m)?;
    w.finish("roundtrip")?;
    describe_reconstruction(&mut report, cfg, &r);
    describe_metrics(&mut report, &m);
    Ok(report)
}

/// `diagnose`: conditioning of the continuation matrix over a log-spaced
/// wavenumber sweep, the automatic cutoff and the invertibility verdict.
/// Writes nothing.
pub fn run_diagnose(cfg: &RunConfig) -> Result<Report> {
    let raw = cfg.geometry.to_geometry();
    let d = cfg.diagnose;
    let ks = log_spaced(d.k_min, d.k_max, d.samples);
    let diag = detect_rank_deficiency(&raw, &ks);
    let mut report = Report {
        verdict: Some(diag.verdict),
        ..Default::default()
    };
    let t = &mut report.text;
    writeln!(t, "plane placement: {}", if diag.same_side { "both planes on one side" } else { "one plane on each side" }).ok();
    writeln!(t, "{:>14}  {:>14}  {:>14}  {:>8}", "k (rad/m)", "det", "cond", "rank").ok();
    for b in &diag.bins {
        writeln!(
            t,
            "{:>14.6e}  {:>14.6e}  {:>14.6e}  {:>8}",
            b.k,
            b.det,
            b.condition_number,
            if b.rank_deficient { "1" } else { "2" }
        )
        .ok();
    }
    writeln!(
        t,
        "k = 0: both rows of the continuation matrix equal (δ1/2, δ2/2); only their weighted sum is determined, \
         handled by dc_policy = {:?}",
        cfg.reconstruction.dc_policy
    )
    .ok();
    if cfg.reconstruction.dc_policy == DcPolicy::MinimumNorm {
        writeln!(t, "  the minimum-norm split assigns the DC reading in proportion to the layer thicknesses").ok();
    }

    let mut values = vec![
        ("verdict".to_string(), format!("{:?}", diag.verdict)),
        ("same_side".to_string(), diag.same_side.to_string()),
        ("max_gain".to_string(), format!("{:e}", cfg.reconstruction.max_gain)),
        ("dc_degenerate".to_string(), "true".to_string()),
    ];
    if diag.same_side {
        writeln!(t, "auto k_cut: not applicable (no two-sided inversion exists)").ok();
        values.push(("auto_k_cut".into(), "none".into()));
    } else {
        match validated_geometry(&raw).and_then(|g| {
            let auto = auto_k_cut(&g, cfg.reconstruction.max_gain)?;
            Ok((auto, resolve_k_cut(&cfg.reconstruction, &g)?))
        }) {
            Ok((auto, used)) => {
                writeln!(t, "auto k_cut {auto:.6e} rad/m for max_gain {:e}", cfg.reconstruction.max_gain).ok();
                writeln!(t, "configured k_cut resolves to {used:.6e} rad/m").ok();
                values.push(("auto_k_cut".into(), format!("{auto:e}")));
                values.push(("k_cut".into(), format!("{used:e}")));
            }
            Err(e) => {
                writeln!(t, "auto k_cut: unavailable ({e})").ok();
                values.push(("auto_k_cut".into(), "none".into()));
            }
        }
    }
    writeln!(t, "verdict: {:?}", diag.verdict).ok();
    for (i, b) in diag.bins.iter().enumerate() {
        values.push((format!("k[{i}]"), format!("{:e}", b.k)));
        values.push((format!("cond[{i}]"), format!("{:e}", b.condition_number)));
    }
    report.values = values;
    Ok(report)
}
