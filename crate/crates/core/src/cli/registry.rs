//! Named experiments: parameter tables with defaults, the anchor text shown
//! by `describe`, and the glue from a config to a sweep.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cli::config::{parse_bool, parse_complex_list, parse_f64, parse_list, ExperimentConfig};
use crate::error::{Error, Result};
use crate::harness::class::ClassRanges;
use crate::harness::experiments::{
    carleman, kernel, lp_square, multiplier, projection, resolvent, smoothing, sobolev, strichartz, zeta,
};
use crate::harness::sweep::{SweepResult, SweepRow};
use crate::spectral::decomposition::{CutoffPhi, ScalarFn};

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub section: &'static str,
    pub key: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

const fn p(section: &'static str, key: &'static str, default: &'static str, doc: &'static str) -> ParamSpec {
    ParamSpec {
        section,
        key,
        default,
        doc,
    }
}

/// Exponent columns of a report row; `None` prints as an empty field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Exponents {
    pub d: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
}

impl Exponents {
    fn lebesgue(d: usize, p: f64, q: f64) -> Self {
        Self {
            d: Some(d),
            p: Some(p),
            q: Some(q),
            a: Some(p),
            b: Some(q),
            ..Default::default()
        }
    }
}

pub struct Run {
    pub result: SweepResult,
    pub exponents: Box<dyn Fn(&SweepRow) -> Exponents + Send + Sync>,
}

impl Run {
    fn fixed(result: SweepResult, e: Exponents) -> Self {
        Self {
            result,
            exponents: Box::new(move |_| e),
        }
    }
}

pub struct Experiment {
    pub name: &'static str,
    pub anchor: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    run: fn(&Params) -> Result<Run>,
}

impl Experiment {
    pub fn run(&self, cfg: &ExperimentConfig) -> Result<Run> {
        let params = Params::new(cfg, self)?;
        (self.run)(&params)
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}\n", self.name);
        let _ = writeln!(s, "{}\n", self.about);
        let _ = writeln!(s, "anchor: {}\n", self.anchor);
        let mut sections: Vec<&str> = Vec::new();
        for ps in self.params {
            if !sections.contains(&ps.section) {
                sections.push(ps.section);
            }
        }
        for sec in sections {
            let title = if sec == "thresholds" { "thresholds" } else { sec };
            let _ = writeln!(s, "[{title}]");
            for ps in self.params.iter().filter(|ps| ps.section == sec) {
                let _ = writeln!(s, "  {} = {}    {}", ps.key, ps.default, ps.doc);
            }
            s.push('\n');
        }
        s
    }

    /// The default config, with every key written out.
    pub fn default_config(&self, seed: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.name, seed);
        for ps in self.params {
            c.set(ps.section, ps.key, ps.default);
        }
        c
    }
}

/// Config values resolved against an experiment's parameter table.
pub struct Params<'a> {
    cfg: &'a ExperimentConfig,
    spec: &'static [ParamSpec],
}

impl<'a> Params<'a> {
    fn new(cfg: &'a ExperimentConfig, exp: &Experiment) -> Result<Self> {
        for (sec, key) in cfg.keys() {
            match exp.params.iter().find(|ps| ps.key == key) {
                None => return Err(Error::Config(format!("{} has no parameter '{key}'", exp.name))),
                Some(ps) if ps.section != sec => {
                    return Err(Error::Config(format!("'{key}' belongs in [{}], found in [{sec}]", ps.section)))
                }
                _ => {}
            }
        }
        Ok(Self { cfg, spec: exp.params })
    }

    pub fn seed(&self) -> u64 {
        self.cfg.seed
    }

    fn raw(&self, key: &str) -> Result<&str> {
        if let Some((_, v)) = self.cfg.lookup(key) {
            return Ok(v);
        }
        self.spec
            .iter()
            .find(|ps| ps.key == key)
            .map(|ps| ps.default)
            .ok_or_else(|| Error::Config(format!("no parameter '{key}'")))
    }

    fn ctx<T>(&self, key: &str, r: Result<T>) -> Result<T> {
        r.map_err(|e| Error::Config(format!("{key}: {e}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.ctx(key, parse_f64(self.raw(key)?))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let raw = self.raw(key)?;
        raw.trim()
            .parse()
            .map_err(|_| Error::Config(format!("{key}: '{raw}' is not a non-negative integer")))
    }

    pub fn i32(&self, key: &str) -> Result<i32> {
        let raw = self.raw(key)?;
        raw.trim()
            .parse()
            .map_err(|_| Error::Config(format!("{key}: '{raw}' is not an integer")))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        self.ctx(key, parse_bool(self.raw(key)?))
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        self.ctx(key, parse_list(self.raw(key)?))
    }

    pub fn nonempty(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.list(key)?;
        if v.is_empty() {
            return Err(Error::Config(format!("{key}: range is empty")));
        }
        Ok(v)
    }

    pub fn indices(&self, key: &str) -> Result<Vec<usize>> {
        self.nonempty(key)?
            .into_iter()
            .map(|v| {
                if v >= 0.0 && v.fract() == 0.0 {
                    Ok(v as usize)
                } else {
                    Err(Error::Config(format!("{key}: {v} is not a non-negative integer")))
                }
            })
            .collect()
    }

    pub fn pair(&self, key: &str) -> Result<(f64, f64)> {
        match self.list(key)?.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::Config(format!("{key}: expected two values"))),
        }
    }

    pub fn complex_list(&self, key: &str) -> Result<Vec<Complex64>> {
        self.ctx(key, parse_complex_list(self.raw(key)?))
    }

    pub fn text(&self, key: &str) -> Result<String> {
        Ok(self.raw(key)?.trim().to_string())
    }
}

const PROJECTION: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "2", "input exponent"),
    p("exponents", "q", "6", "output exponent"),
    p("sweep", "k", "1..40", "levels"),
    p("grid", "nodes", "64", "Gauss-Hermite nodes per axis"),
    p("probes", "probes", "10", "probes per family"),
    p("probes", "steps", "0", "coordinate-ascent steps on the best probe"),
    p("probes", "restricted_weak", "false", "indicator probes, |E|^(1/p) in, weak L^q out"),
    p("thresholds", "spread_max", "10", "max/min of the best ratios across k"),
];

const RESOLVENT: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "6/5", "input exponent"),
    p("exponents", "q", "6", "output exponent"),
    p("exponents", "m", "1", "power of the resolvent"),
    p("sweep", "j_max", "30", "z = 2j + d + 1 + 2i tau for j <= j_max"),
    p("sweep", "taus", "0, 5, 25", "imaginary offsets tau"),
    p("sweep", "zs", "", "explicit list of z; replaces the grid when set"),
    p("sweep", "gap", "1/2", "minimum distance from z to the spectrum"),
    p("probes", "width_evals", "10", "golden-section evaluations over ln a"),
    p("probes", "gaussians", "true", "radial Gaussian probes"),
    p("probes", "eigenfunctions", "true", "Hermite function probes"),
    p("thresholds", "spread_max", "10", "max/min of the normalized ratios"),
];

const SMOOTHING: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "s", "1", "order of H^(-s)"),
    p("exponents", "inside", "6/5, 6", "(p, q) on or inside the line 1/p - 1/q = 2s/d"),
    p("exponents", "outside", "8/7, 8", "(p, q) beyond the line"),
    p("sweep", "lambda_min", "16", "smallest dilation"),
    p("sweep", "lambda_max", "256", "largest dilation"),
    p("sweep", "lambda_count", "9", "geometric samples"),
    p("thresholds", "flat_tol", "0.1", "bound on the inside slope"),
    p("thresholds", "growth_min", "0.1", "lower bound on the outside slope"),
];

const CRITICAL: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "s", "1", "order of H^(-s)"),
    p("exponents", "inside", "4/3, 12", "(p, q) on the critical line"),
    p("exponents", "outside", "8/7, 8", "(p, q) with 1/p - 1/q = 3/4"),
    p("sweep", "lambda_min", "16", "smallest dilation"),
    p("sweep", "lambda_max", "256", "largest dilation"),
    p("sweep", "lambda_count", "9", "geometric samples"),
    p("thresholds", "flat_tol", "0.1", "bound on |slope| on the line"),
    p("thresholds", "growth_min", "0.1", "lower bound on the slope beyond it"),
];

const CLASS: &[ParamSpec] = &[
    p("symbol", "kind", "mu-tau", "mu-tau for 1/(i tau + t + mu), or constant"),
    p("symbol", "mu", "0.4", "mu"),
    p("symbol", "tau", "0.3", "tau"),
    p("symbol", "value", "1", "value of the constant symbol"),
    p("exponents", "d", "3", "dimension; derivatives up to (d+2)/2"),
    p("ranges", "t0", "1", "decay is tested on |t| > t0"),
    p("ranges", "n_max", "4096", "integers |n| <= n_max for the size condition"),
    p("ranges", "sum_max", "65536", "partial sums up to this index"),
    p("ranges", "t_max", "1000", "largest |t|"),
    p("ranges", "t_samples", "4000", "log-uniform samples of |t|"),
    p("ranges", "tail_tol", "0.01", "relative tail above which a series diverges"),
    p("ranges", "fd_step", "0.001", "relative finite-difference step"),
    p("probes", "controls", "true", "run the constant and pole controls"),
    p("thresholds", "bound", "100", "class constant"),
];

const ZETA: &[ParamSpec] = &[
    p("symbol", "mu", "0.4", "mu"),
    p("symbol", "tau", "0.3", "tau"),
    p("exponents", "d", "3", "dimension"),
    p("sweep", "log2_n", "4..12", "n = 2^e"),
    p("sweep", "t_samples", "10001", "samples of t in [0, pi]"),
    p("sweep", "control_amplitude", "4", "bump added to the non-monotone cutoff"),
    p("sweep", "sigma_kmax", "4096", "partial sums in the sine-sum bound; 0 skips it"),
    p("sweep", "sigma_step", "1e-4", "t step of the sine-sum bound"),
    p("thresholds", "slope_max", "0.02", "slope of sup |zeta_n| against log2 n"),
    p("thresholds", "sigma_range", "1.85, 1.86", "interval for the sine-sum sup"),
];

const CARLEMAN: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "4/3", "exponent on the heat side"),
    p("exponents", "q", "3", "exponent on the solution side"),
    p("exponents", "r", "2", "time exponent on the heat side"),
    p("exponents", "s", "2", "time exponent on the solution side"),
    p("exponents", "a", "2", "Lorentz index on the heat side"),
    p("exponents", "b", "2", "Lorentz index on the solution side"),
    p("sweep", "alpha", "0.7, 1.7, 2.7", "weight parameters"),
    p("sweep", "beta_trace", "0.3, 0.1, 0.03, 0.01", "beta - 1 offsets traced without a check"),
    p("data", "center", "0.5, 0, 0", "spatial centre of the bump"),
    p("data", "sigma2", "0.25", "spatial variance"),
    p("data", "t_center", "1", "time centre"),
    p("data", "tau", "0.12", "time width"),
    p("data", "amp", "1", "amplitude"),
    p("data", "scale", "8", "factor for the homogeneity check"),
    p("grid", "half_extent", "4", "box half-width"),
    p("grid", "points", "41", "points per axis"),
    p("grid", "times", "0.16, 1.84", "time window"),
    p("grid", "time_count", "61", "time samples"),
    p("thresholds", "spread_max", "10", "max/min across alpha"),
];

const SOBOLEV: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "6/5", "exponent on L h"),
    p("exponents", "q", "6", "exponent on h"),
    p("exponents", "a", "2", "Lorentz index on L h"),
    p("exponents", "b", "2", "Lorentz index on h"),
    p("exponents", "r", "2", "time exponent on L h"),
    p("exponents", "s", "2", "time exponent on h"),
    p("sweep", "beta", "0.5..20.5", "beta values"),
    p("sweep", "gap", "1/2", "minimum distance from beta to the naturals"),
    p("probes", "probes", "3", "packets per level"),
    p("grid", "nodes", "48", "Gauss-Hermite nodes per axis"),
    p("grid", "width", "2.5", "width of the Gaussian time profile"),
    p("grid", "time_window", "15", "time interval [-T, T]"),
    p("grid", "time_step", "0.005", "time step"),
    p("thresholds", "spread_max", "10", "max/min across beta"),
    p("thresholds", "residual_max", "1e-6", "relative residual of L S g - g"),
    p("thresholds", "route_max", "1e-5", "relative disagreement of the two routes"),
];

const KERNEL: &[ParamSpec] = &[
    p("exponents", "beta", "3.5", "beta"),
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "6/5", "input exponent"),
    p("exponents", "q", "6", "output exponent"),
    p("sweep", "t_range", "1, 50", "range of t for the slope fit"),
    p("sweep", "t_samples", "40", "log-uniform samples"),
    p("sweep", "kmax", "16", "levels probed"),
    p("sweep", "j_range", "0, 8", "dyadic scales for the envelope"),
    p("sweep", "gap", "1/2", "minimum distance from beta to the naturals"),
    p("thresholds", "slope_range", "-2.3, -1.7", "interval for the differentiated-kernel slope"),
    p("thresholds", "envelope_max", "10", "bound on the envelope constants"),
];

const LP_SQUARE: &[ParamSpec] = &[
    p("exponents", "r", "2", "time exponent"),
    p("exponents", "q", "3", "spatial exponent, Lorentz index 2"),
    p("grid", "times", "-40, 40", "time window"),
    p("grid", "time_count", "4096", "time samples"),
    p("grid", "nodes", "24", "Gauss-Hermite nodes in x (d = 1)"),
    p("data", "window", "4", "width of the Gaussian time window"),
    p("data", "freq_range", "0.25, 6", "time frequencies of the terms"),
    p("data", "terms", "3", "wave packets per trial"),
    p("sweep", "j_range", "-4, 4", "dyadic scales"),
    p("sweep", "trials", "20", "random trials"),
    p("sweep", "pieces", "8", "functions per normability trial"),
    p("thresholds", "bounds", "1/8, 8", "interval for both constants"),
    p("thresholds", "normability_max", "8", "bound on the normability constant"),
];

const STRICHARTZ: &[ParamSpec] = &[
    p("exponents", "d", "3", "dimension"),
    p("exponents", "p", "4/3", "input exponent"),
    p("exponents", "q", "4", "output exponent"),
    p("sweep", "j_range", "4, 10", "dyadic time scales"),
    p("probes", "width_evals", "16", "golden-section evaluations over ln a"),
    p("probes", "probes", "20", "random band-limited probes for the Strichartz ratio"),
    p("probes", "kmax", "8", "top level of those probes"),
    p("grid", "nodes", "24", "Gauss-Hermite nodes per axis"),
    p("grid", "time_samples", "257", "samples of t in [-pi, pi]"),
    p("thresholds", "slope_tol", "0.15", "allowed distance from the predicted slope"),
];

fn geometric(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::Config("dilations need 0 < lambda_min < lambda_max and two samples".into()));
    }
    Ok((0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect())
}

fn int_pair(p: &Params, key: &str) -> Result<(i32, i32)> {
    let (a, b) = p.pair(key)?;
    if a.fract() != 0.0 || b.fract() != 0.0 {
        return Err(Error::Config(format!("{key}: expected integers")));
    }
    Ok((a as i32, b as i32))
}

fn run_projection(p: &Params) -> Result<Run> {
    let par = projection::ProjectionParams {
        d: p.usize("d")?,
        p: p.f64("p")?,
        q: p.f64("q")?,
        ks: p.indices("k")?,
        nodes: p.usize("nodes")?,
        probes: p.usize("probes")?,
        steps: p.usize("steps")?,
        seed: p.seed(),
        restricted_weak: p.bool("restricted_weak")?,
        spread_max: p.f64("spread_max")?,
    };
    let mut e = Exponents::lebesgue(par.d, par.p, par.q);
    if par.restricted_weak {
        e.a = None;
        e.b = Some(f64::INFINITY);
    }
    Ok(Run::fixed(projection::projection_sweep(&par)?, e))
}

fn run_resolvent(p: &Params) -> Result<Run> {
    let d = p.usize("d")?;
    let mut zs = p.complex_list("zs")?;
    if zs.is_empty() {
        let j_max = p.usize("j_max")?;
        for tau in p.nonempty("taus")? {
            for j in 0..=j_max {
                zs.push(Complex64::new((2 * j + d + 1) as f64, 2.0 * tau));
            }
        }
    }
    let m = p.usize("m")?;
    let par = resolvent::ResolventParams {
        d,
        p: p.f64("p")?,
        q: p.f64("q")?,
        zs,
        m: u32::try_from(m).map_err(|_| Error::Config("m is too large".into()))?,
        gap: p.f64("gap")?,
        width_evals: p.usize("width_evals")?,
        gaussians: p.bool("gaussians")?,
        eigenfunctions: p.bool("eigenfunctions")?,
        spread_max: p.f64("spread_max")?,
    };
    let e = Exponents::lebesgue(d, par.p, par.q);
    Ok(Run::fixed(resolvent::resolvent_sweep(&par)?, e))
}

fn smoothing_params(p: &Params) -> Result<smoothing::SmoothingParams> {
    Ok(smoothing::SmoothingParams {
        d: p.usize("d")?,
        s: p.f64("s")?,
        inside: p.pair("inside")?,
        outside: p.pair("outside")?,
        lambdas: geometric(p.f64("lambda_min")?, p.f64("lambda_max")?, p.usize("lambda_count")?)?,
        flat_tol: p.f64("flat_tol")?,
        growth_min: p.f64("growth_min")?,
    })
}

fn smoothing_run(par: smoothing::SmoothingParams, result: SweepResult) -> Run {
    Run {
        result,
        exponents: Box::new(move |row| {
            let (pp, qq) = if row.probe.starts_with("inside") { par.inside } else { par.outside };
            Exponents::lebesgue(par.d, pp, qq)
        }),
    }
}

fn run_smoothing(p: &Params) -> Result<Run> {
    let par = smoothing_params(p)?;
    let res = smoothing::smoothing_boundary(&par)?;
    Ok(smoothing_run(par, res))
}

fn run_critical(p: &Params) -> Result<Run> {
    let par = smoothing_params(p)?;
    let res = smoothing::critical_necessity(&par)?;
    Ok(smoothing_run(par, res))
}

fn run_class(p: &Params) -> Result<Run> {
    let symbol = match p.text("kind")?.as_str() {
        "mu-tau" => multiplier::Symbol::MuTau {
            mu: p.f64("mu")?,
            tau: p.f64("tau")?,
        },
        "constant" => multiplier::Symbol::Constant(p.f64("value")?),
        other => return Err(Error::Config(format!("kind: unknown symbol '{other}'"))),
    };
    let d = p.usize("d")?;
    let par = multiplier::MultiplierClassParams {
        symbol,
        bound: p.f64("bound")?,
        t0: p.f64("t0")?,
        d,
        ranges: ClassRanges {
            n_max: p.usize("n_max")? as i64,
            sum_max: p.usize("sum_max")? as u64,
            t_max: p.f64("t_max")?,
            t_samples: p.usize("t_samples")?,
            tail_tol: p.f64("tail_tol")?,
            fd_step: p.f64("fd_step")?,
        },
        controls: p.bool("controls")?,
    };
    let e = Exponents {
        d: Some(d),
        ..Default::default()
    };
    Ok(Run::fixed(multiplier::multiplier_class(&par)?, e))
}

fn run_zeta(p: &Params) -> Result<Run> {
    let d = p.usize("d")?;
    let ns = p
        .indices("log2_n")?
        .into_iter()
        .map(|e| 1usize.checked_shl(e as u32).filter(|_| e < 40).ok_or_else(|| Error::Config("log2_n too large".into())))
        .collect::<Result<Vec<_>>>()?;
    let par = zeta::ZetaParams {
        g: ScalarFn::g_mu_tau(p.f64("mu")?, p.f64("tau")?),
        d,
        ns,
        t_samples: p.usize("t_samples")?,
        control: CutoffPhi::NonMonotone {
            amplitude: p.f64("control_amplitude")?,
        },
        sigma_kmax: p.usize("sigma_kmax")?,
        sigma_step: p.f64("sigma_step")?,
        slope_max: p.f64("slope_max")?,
        sigma_range: p.pair("sigma_range")?,
    };
    if !(par.sigma_step > 0.0) {
        return Err(Error::Config("sigma_step must be positive".into()));
    }
    let e = Exponents {
        d: Some(d),
        ..Default::default()
    };
    Ok(Run::fixed(zeta::zeta_sweep(&par)?, e))
}

fn run_carleman(p: &Params) -> Result<Run> {
    let d = p.usize("d")?;
    let exps = crate::exponents::CarlemanParams {
        alpha: 0.0,
        p: p.f64("p")?,
        q: p.f64("q")?,
        r: p.f64("r")?,
        s: p.f64("s")?,
        a: p.f64("a")?,
        b: p.f64("b")?,
    };
    let times = p.pair("times")?;
    let par = carleman::CarlemanRatioParams {
        d,
        exponents: exps,
        alphas: p.nonempty("alpha")?,
        bump: carleman::SpaceTimeBump {
            center: p.list("center")?,
            sigma2: p.f64("sigma2")?,
            t0: p.f64("t_center")?,
            tau: p.f64("tau")?,
            amp: p.f64("amp")?,
        },
        half_extent: p.f64("half_extent")?,
        points: p.usize("points")?,
        times: (times.0, times.1, p.usize("time_count")?),
        beta_trace: p.list("beta_trace")?,
        scale: p.f64("scale")?,
        spread_max: p.f64("spread_max")?,
    };
    let e = Exponents {
        d: Some(d),
        p: Some(exps.p),
        q: Some(exps.q),
        a: Some(exps.a),
        b: Some(exps.b),
        r: Some(exps.r),
        s: Some(exps.s),
    };
    Ok(Run::fixed(carleman::carleman_ratio(&par)?, e))
}

fn run_sobolev(p: &Params) -> Result<Run> {
    let par = sobolev::SobolevParams {
        d: p.usize("d")?,
        p: p.f64("p")?,
        q: p.f64("q")?,
        a: p.f64("a")?,
        b: p.f64("b")?,
        r: p.f64("r")?,
        s: p.f64("s")?,
        betas: p.nonempty("beta")?,
        gap: p.f64("gap")?,
        probes: p.usize("probes")?,
        nodes: p.usize("nodes")?,
        width: p.f64("width")?,
        time_window: p.f64("time_window")?,
        time_step: p.f64("time_step")?,
        seed: p.seed(),
        spread_max: p.f64("spread_max")?,
        residual_max: p.f64("residual_max")?,
        route_max: p.f64("route_max")?,
    };
    if !(par.time_step > 0.0 && par.time_window > 0.0) {
        return Err(Error::Config("time_step and time_window must be positive".into()));
    }
    let e = Exponents {
        d: Some(par.d),
        p: Some(par.p),
        q: Some(par.q),
        a: Some(par.a),
        b: Some(par.b),
        r: Some(par.r),
        s: Some(par.s),
    };
    Ok(Run::fixed(sobolev::sobolev_ratio(&par)?, e))
}

fn run_kernel(p: &Params) -> Result<Run> {
    let t = p.pair("t_range")?;
    let par = kernel::KernelParams {
        beta: p.f64("beta")?,
        d: p.usize("d")?,
        p: p.f64("p")?,
        q: p.f64("q")?,
        t_range: t,
        t_samples: p.usize("t_samples")?,
        kmax: p.usize("kmax")?,
        js: int_pair(p, "j_range")?,
        gap: p.f64("gap")?,
        slope_range: p.pair("slope_range")?,
        envelope_max: p.f64("envelope_max")?,
    };
    let e = Exponents::lebesgue(par.d, par.p, par.q);
    Ok(Run::fixed(kernel::kernel_decay(&par)?, e))
}

fn run_lp_square(p: &Params) -> Result<Run> {
    let times = p.pair("times")?;
    let par = lp_square::LpSquareParams {
        r: p.f64("r")?,
        q: p.f64("q")?,
        time: (times.0, times.1, p.usize("time_count")?),
        window: p.f64("window")?,
        js: int_pair(p, "j_range")?,
        freq_range: p.pair("freq_range")?,
        terms: p.usize("terms")?,
        trials: p.usize("trials")?,
        nodes: p.usize("nodes")?,
        pieces: p.usize("pieces")?,
        seed: p.seed(),
        bounds: p.pair("bounds")?,
        normability_max: p.f64("normability_max")?,
    };
    if !(par.freq_range.1 > par.freq_range.0) {
        return Err(Error::Config("freq_range must be increasing".into()));
    }
    let e = Exponents {
        d: Some(1),
        q: Some(par.q),
        b: Some(2.0),
        r: Some(par.r),
        s: Some(par.r),
        ..Default::default()
    };
    Ok(Run::fixed(lp_square::lp_square(&par)?, e))
}

fn run_strichartz(p: &Params) -> Result<Run> {
    let par = strichartz::StrichartzParams {
        d: p.usize("d")?,
        p: p.f64("p")?,
        q: p.f64("q")?,
        js: int_pair(p, "j_range")?,
        width_evals: p.usize("width_evals")?,
        slope_tol: p.f64("slope_tol")?,
        probes: p.usize("probes")?,
        kmax: p.usize("kmax")?,
        nodes: p.usize("nodes")?,
        time_samples: p.usize("time_samples")?,
        seed: p.seed(),
    };
    let d = par.d;
    let (pp, qq) = (par.p, par.q);
    let result = strichartz::strichartz_pieces(&par)?;
    Ok(Run {
        result,
        exponents: Box::new(move |row| {
            if row.probe.starts_with("strichartz-") {
                let q = 2.0 * d as f64 / (d as f64 - 2.0);
                Exponents {
                    r: Some(2.0),
                    ..Exponents::lebesgue(d, 2.0, q)
                }
            } else {
                Exponents::lebesgue(d, pp, qq)
            }
        }),
    })
}

pub const REGISTRY: &[Experiment] = &[
    Experiment {
        name: "projection-sweep",
        anchor: "Eq. (2.4) and Cor. 2.2; restricted weak type at the vertex B' = (3/4, 1/12)",
        about: "Lower bounds for the L^p -> L^q norms of the spectral projections Pi_k across k. \
                Probes are Hermite packets, random band-limited functions and modulated Gaussian bumps; \
                with restricted_weak = true, indicators of boxes measured as |E|^(1/p) -> weak L^q.",
        params: PROJECTION,
        run: run_projection,
    },
    Experiment {
        name: "resolvent-sweep",
        anchor: "Eq. (1.8)/(1.9) and Thm 3.1, Eq. (3.1); blow-up of Remark 1",
        about: "Lower bounds for ||(H - z)^(-m)||_{p->q} across z, divided by (1 + |Im z|)^(gamma - m) \
                with gamma = (d/2)(1/p - 1/q). Gaussian probes use the closed-form period integral; \
                Hermite function probes use the scalar action (2|alpha| + d - z)^(-m).",
        params: RESOLVENT,
        run: run_resolvent,
    },
    Experiment {
        name: "smoothing-boundary",
        anchor: "Thm 2.3, 1/p - 1/q <= 2s/d; footnote 1 heat-integral formula for H^(-s)",
        about: "Dilated Gaussians e^(-lambda^2 |x|^2 / 2) under H^(-s): the ratio is flat in lambda \
                on the line 1/p - 1/q = 2s/d and grows beyond it.",
        params: SMOOTHING,
        run: run_smoothing,
    },
    Experiment {
        name: "critical-necessity",
        anchor: "Remark 2, necessity of 1/p - 1/q <= 2/d for (1.4); Thm 2.3 boundary",
        about: "The dilation oracle with s = 1: slope near 0 on the critical line and positive beyond it.",
        params: CRITICAL,
        run: run_critical,
    },
    Experiment {
        name: "multiplier-class",
        anchor: "displays (3.2)-(3.5); G_{mu,tau}(t) = 1/(i tau + t + mu)",
        about: "Numerical membership test for the multiplier class: sup over integers, the two \
                summability conditions as monitored partial sums, and derivative decay on |t| > t0. \
                The constant symbol and G_{0,0} run as negative controls.",
        params: CLASS,
        run: run_class,
    },
    Experiment {
        name: "zeta-sweep",
        anchor: "Eq. (3.7), uniform bound on zeta_n; footnote 2 sine sums",
        about: "sup_t |zeta_n(t)| for n = 2^e with a monotone cutoff, a non-monotone cutoff recorded \
                alongside, and the sup of the partial sine sums sigma_k.",
        params: ZETA,
        run: run_zeta,
    },
    Experiment {
        name: "carleman-ratio",
        anchor: "Eq. (1.4) with conditions (1.3), (1.5), (1.6) checked by the admissibility predicate",
        about: "Both sides of the weighted heat inequality on a translated space-time Gaussian for each \
                alpha, after checking admissibility of (p, q, r, s, a, b) and beta = 2 alpha - d/q - 2/s. \
                A trace with beta approaching 1 is recorded without a check.",
        params: CARLEMAN,
        run: run_carleman,
    },
    Experiment {
        name: "sobolev-ratio",
        anchor: "Eq. (4.2)/(4.3), operator S_beta inverting Delta - |x|^2 + d_t + 2 beta + d",
        about: "||h|| / ||L_beta h|| across beta on separable probes c(t) P(x), P a Hermite packet next to \
                beta; also the inverse-pair residual of S_beta and L_beta and the agreement of the \
                differentiation and integration routes.",
        params: SOBOLEV,
        run: run_sobolev,
    },
    Experiment {
        name: "kernel-decay",
        anchor: "Section 4, min{|t|^(-gamma), |t|^(-2)}; footnote 3 for (4.4); Eq. (4.6), C 2^j (1 + 2^j |t|)^(-2)",
        about: "Log-log slope of the differentiated time kernel of S_beta on Hermite function probes, and \
                the constants of the dyadic pieces against the envelope 2^j (1 + 2^j |t|)^(-2).",
        params: KERNEL,
        run: run_kernel,
    },
    Experiment {
        name: "lp-square",
        anchor: "Eq. (4.5) Littlewood-Paley inequality in Lorentz spaces; Eq. (4.7) normability",
        about: "Random wave-packet sums g(t, x) in d = 1: ||g|| against the dyadic square function in \
                L^r_t L^(q,2)_x, and (sum |h_j|^2)^(1/2) against (sum ||h_j||^2)^(1/2) in L^(q,2).",
        params: LP_SQUARE,
        run: run_lp_square,
    },
    Experiment {
        name: "strichartz-pieces",
        anchor: "Prop. 2.1 partition of unity in t; Eq. (2.5) endpoint Strichartz estimate",
        about: "Dyadic time pieces of e^(-i(t/2)H) near t = 0 and t = +-pi on radial Gaussians, with the \
                log2-slope in j compared with (d/2)(1/p - 1/q) - 1; and the L^2_t L^(2d/(d-2))_x ratio on \
                random band-limited probes.",
        params: STRICHARTZ,
        run: run_strichartz,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describe_everything() {
        for e in REGISTRY {
            let text = e.describe();
            assert!(text.contains(e.anchor));
            for ps in e.params {
                assert!(text.contains(ps.key));
            }
        }
        assert!(find("carleman-ratio").unwrap().describe().contains("(1.4)"));
        assert!(find("carleman-ratio").unwrap().describe().contains("admissibility"));
        assert!(find("zeta-sweep").unwrap().describe().contains("(3.7)"));
    }

    #[test]
    fn defaults_parse() {
        // every default value goes through its typed getter
        for e in REGISTRY {
            let cfg = e.default_config(1);
            let again = ExperimentConfig::parse(&cfg.to_string()).unwrap();
            assert_eq!(again, cfg);
            let params = Params::new(&cfg, e).unwrap();
            for ps in e.params {
                assert!(params.raw(ps.key).is_ok());
            }
        }
    }

    #[test]
    fn unknown_and_misplaced_keys() {
        let e = find("zeta-sweep").unwrap();
        let mut cfg = ExperimentConfig::new("zeta-sweep", 1);
        cfg.set("sweep", "nonsense", "1");
        assert!(matches!(e.run(&cfg), Err(Error::Config(_))));
        let mut cfg = ExperimentConfig::new("zeta-sweep", 1);
        cfg.set("grid", "mu", "0.4");
        assert!(matches!(e.run(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn small_runs() {
        let e = find("zeta-sweep").unwrap();
        let mut cfg = ExperimentConfig::new("zeta-sweep", 1);
        cfg.set("sweep", "log2_n", "4..6");
        cfg.set("sweep", "sigma_kmax", "0");
        cfg.set("sweep", "t_samples", "101");
        let run = e.run(&cfg).unwrap();
        assert_eq!(run.result.rows.len(), 6);
        let e = find("resolvent-sweep").unwrap();
        let mut cfg = ExperimentConfig::new("resolvent-sweep", 1);
        cfg.set("sweep", "zs", "5+2i, 9-3i");
        cfg.set("probes", "gaussians", "false");
        let run = e.run(&cfg).unwrap();
        assert_eq!(run.result.rows.len(), 2);
        assert_eq!((run.exponents)(&run.result.rows[0]).p, Some(1.2));
    }
}
