use std::fs;
use std::path::{Path, PathBuf};

use hecke_core::arith::{is_prime, is_squarefree, squarefree_primes};
use hecke_core::equidist::{
    run_power_experiment, run_squarefree_experiment, spectrum, ConvergenceReport, StratumFunction, RELATIVE_SLACK,
};
use hecke_core::number_field::NumberFieldSpec;
use hecke_core::satake::{satake_row, stirling_failures, GlobalOperatorSpec, SatakeRow};
use hecke_core::supersingular::{
    enumerate_locus, hecke_matrix, HeckeMatrix, LocusCache, ModularPolynomial, ModularPolynomialLibrary,
    SupersingularLocus,
};
use hecke_core::Error;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;
use crate::report::{csv_rows, tag_csv, Summary};
use crate::CliError;

pub struct Outcome {
    pub config: Value,
    pub payload: Value,
    pub csv: String,
    pub summary: Summary,
}

const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn run(common: &Common, command: &Command) -> Result<Outcome, CliError> {
    let ctx = Context { common };
    match command {
        Command::Locus(a) => ctx.locus(a),
        Command::Hecke(a) => ctx.hecke(a),
        Command::Spectrum(a) => ctx.spectrum(a),
        Command::Equidist(a) => ctx.equidist(a),
        Command::Power(a) => ctx.power(a),
        Command::Satake(a) => ctx.satake(a),
        Command::Splitting(a) => ctx.splitting(a),
        Command::Stirling(a) => ctx.stirling(a),
        Command::ModpolyCheck(_) => ctx.modpoly_check(),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("csv output: {e}"))
}

struct Context<'a> {
    common: &'a Common,
}

/// A locus together with its optional cache file.
struct Store {
    locus: SupersingularLocus,
    cache: Option<(PathBuf, LocusCache)>,
    dirty: bool,
}

impl Store {
    fn prime_matrix(&mut self, phi: &ModularPolynomial) -> Result<HeckeMatrix, CliError> {
        if let Some((_, cache)) = &self.cache {
            if let Some(t) = cache.matrix(phi.level())? {
                return Ok(t);
            }
        }
        let t = hecke_matrix(&self.locus, phi)?;
        if let Some((_, cache)) = &mut self.cache {
            cache.insert_matrix(&t);
            self.dirty = true;
        }
        Ok(t)
    }

    fn save(&self) -> Result<(), CliError> {
        if let (true, Some((path, cache))) = (self.dirty, &self.cache) {
            cache.save(path)?;
        }
        Ok(())
    }
}

impl Context<'_> {
    fn library(&self) -> Result<ModularPolynomialLibrary, CliError> {
        match &self.common.data_dir {
            None => Ok(ModularPolynomialLibrary::builtin()?),
            Some(dir) if !dir.is_dir() => Err(CliError::MissingData(format!("data directory {} not found", dir.display()))),
            Some(dir) => ModularPolynomialLibrary::from_dir(dir).map_err(|e| CliError::MissingData(e.to_string())),
        }
    }

    fn store(&self, p: u64) -> Result<Store, CliError> {
        let Some(dir) = &self.common.cache_dir else {
            return Ok(Store { locus: enumerate_locus(p)?, cache: None, dirty: false });
        };
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("locus_{p}.json"));
        if path.exists() {
            let cache = LocusCache::load(&path)?;
            if cache.p != p {
                return Err(CliError::Usage(format!("{} holds p = {}", path.display(), cache.p)));
            }
            return Ok(Store { locus: cache.locus()?, cache: Some((path, cache)), dirty: false });
        }
        let locus = enumerate_locus(p)?;
        let cache = LocusCache::new(&locus);
        Ok(Store { locus, cache: Some((path, cache)), dirty: true })
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.common.jobs {
            if j == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            b = b.num_threads(j);
        }
        b.build().map_err(|e| CliError::Usage(e.to_string()))
    }

    fn initial_vectors(&self, locus: &SupersingularLocus, init: InitKind) -> Result<Vec<(String, StratumFunction)>, CliError> {
        let seed = self.common.seed.unwrap_or(0);
        let random = || (format!("random(seed={seed})"), StratumFunction::random_unit(locus, seed));
        let indicator = || StratumFunction::indicator(locus, 0).map(|v| ("indicator(0)".to_string(), v));
        Ok(match init {
            InitKind::All => vec![random(), indicator()?],
            InitKind::Random => vec![random()],
            InitKind::Indicator => vec![indicator()?],
        })
    }

    fn locus(&self, a: &LocusArgs) -> Result<Outcome, CliError> {
        let config = to_value(a);
        if let Some(range) = &a.range {
            let (lo, hi) = parse_range(range)?;
            let primes: Vec<u64> = (lo..=hi).filter(|&p| is_prime(p)).collect();
            let rows: Vec<Result<LocusRow, CliError>> = self.pool()?.install(|| {
                primes
                    .par_iter()
                    .map(|&p| match self.store(p).and_then(|s| s.save().map(|_| s)) {
                        Ok(s) => Ok(LocusRow::ok(&s.locus)),
                        Err(CliError::Failure(msg)) => Ok(LocusRow::failed(p, msg)),
                        Err(e) => Err(e),
                    })
                    .collect()
            });
            let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
            let mut summary = Summary::new();
            for r in &rows {
                summary.check(r.mass_ok, format!("mass formula at p = {}", r.p));
            }
            return Ok(Outcome { config, payload: to_value(&rows), csv: csv_rows(&rows).map_err(csv_err)?, summary });
        }
        let p = required(a.p, "p")?;
        let store = self.store(p)?;
        store.save()?;
        let locus = &store.locus;
        let masses: Vec<String> = locus.masses().iter().map(|m| m.to_string()).collect();
        let payload = json!({
            "p": p,
            "basis_ns": locus.field().nonresidue(),
            "count": locus.len(),
            "points": locus.points().iter().map(|x| [x.re, x.im]).collect::<Vec<_>>(),
            "weights": locus.weights(),
            "masses": masses,
            "total_mass": locus.total_mass().to_string(),
            "expected_mass": Ratio::new(p - 1, 24).to_string(),
            "mass_ok": true,
        });
        #[derive(Serialize)]
        struct PointRow {
            index: usize,
            re: u64,
            im: u64,
            weight: u8,
            mass: String,
        }
        let rows: Vec<PointRow> = locus
            .points()
            .iter()
            .zip(locus.weights())
            .zip(masses)
            .enumerate()
            .map(|(index, ((x, &weight), mass))| PointRow { index, re: x.re, im: x.im, weight, mass })
            .collect();
        let mut summary = Summary::new();
        summary.check(locus.total_mass() == Ratio::new(p - 1, 24), "mass formula");
        Ok(Outcome { config, payload, csv: csv_rows(&rows).map_err(csv_err)?, summary })
    }

    fn hecke(&self, a: &HeckeArgs) -> Result<Outcome, CliError> {
        let p = required(a.p, "p")?;
        let m = required(a.m, "m")?;
        if m == 0 {
            return Err(CliError::Usage("m must be positive".into()));
        }
        let primes = squarefree_primes(m).map_err(|_| CliError::Usage(format!("m = {m} is not squarefree")))?;
        if m % p == 0 && is_prime(p) {
            return Err(CliError::Usage(format!("gcd(m, p) != 1 for m = {m}, p = {p}")));
        }
        let lib = self.library()?;
        let mut store = self.store(p)?;
        let mats = primes
            .iter()
            .map(|&ell| store.prime_matrix(lib.get(ell)?))
            .collect::<Result<Vec<_>, _>>()?;
        store.save()?;
        let locus = &store.locus;

        let mut summary = Summary::new();
        let mut forward = HeckeMatrix::identity(locus.len());
        for t in &mats {
            summary.check(t.has_constant_row_sums(), format!("row sums of T_{}", t.level()));
            summary.check(t.is_weighted_symmetric(locus.weights()), format!("weighted symmetry of T_{}", t.level()));
            forward = forward.mul(t)?;
        }
        let mut backward = HeckeMatrix::identity(locus.len());
        for t in mats.iter().rev() {
            backward = backward.mul(t)?;
        }
        let commutes = forward == backward;
        summary.check(commutes, "factors commute");
        summary.check(forward.has_constant_row_sums(), format!("row sums of T_{m}"));
        let payload = json!({
            "p": p,
            "m": m,
            "degree": forward.degree(),
            "dim": forward.dim(),
            "matrix": forward.rows(),
            "row_sums_ok": forward.has_constant_row_sums(),
            "weighted_symmetric": forward.is_weighted_symmetric(locus.weights()),
            "commutes": commutes,
        });
        Ok(Outcome { config: to_value(a), payload, csv: csv_rows(&forward.rows()).map_err(csv_err)?, summary })
    }

    fn spectrum(&self, a: &SpectrumArgs) -> Result<Outcome, CliError> {
        let p = required(a.p, "p")?;
        let ell = required(a.ell, "ell")?;
        let lib = self.library()?;
        let mut store = self.store(p)?;
        let t = store.prime_matrix(lib.get(ell)?)?;
        store.save()?;
        let rep = spectrum(&store.locus, &t)?;
        let mut summary = Summary::new();
        summary.check(rep.eigenvalues.len() == store.locus.len(), "eigenvalue count");
        summary.check((rep.trivial_eigenvalue - (ell + 1) as f64).abs() <= 1e-9, "trivial eigenvalue");
        summary.check(rep.within_bound(1e-9), "Ramanujan bound");
        Ok(Outcome { config: to_value(a), payload: to_value(&rep), csv: rep.to_csv()?, summary })
    }

    fn experiment_outcome(&self, config: Value, reports: Vec<ConvergenceReport>, extra: impl Fn(&ConvergenceReport, &mut Summary)) -> Result<Outcome, CliError> {
        let mut summary = Summary::new();
        let mut csv = String::new();
        for (i, rep) in reports.iter().enumerate() {
            summary.check(rep.all_satisfied, format!("inequality for {}", rep.initial));
            extra(rep, &mut summary);
            let table = tag_csv(&rep.to_csv()?, "initial", &rep.initial);
            // one header for the whole file
            csv.push_str(if i == 0 { &table } else { table.split_once('\n').map_or("", |x| x.1) });
        }
        Ok(Outcome { config, payload: to_value(&reports), csv, summary })
    }

    fn equidist(&self, a: &EquidistArgs) -> Result<Outcome, CliError> {
        let p = required(a.p, "p")?;
        let primes = a.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
        let lib = self.library()?;
        let store = self.store(p)?;
        store.save()?;
        let reports = self
            .initial_vectors(&store.locus, a.init.unwrap_or_default())?
            .into_iter()
            .map(|(name, v)| run_squarefree_experiment(&store.locus, &primes, &v, &name, &lib))
            .collect::<Result<Vec<_>, _>>()?;
        self.experiment_outcome(to_value(a), reports, |_, _| {})
    }

    fn power(&self, a: &PowerArgs) -> Result<Outcome, CliError> {
        let p = required(a.p, "p")?;
        let ell = a.ell.unwrap_or(2);
        let count = a.count.unwrap_or(400);
        let lib = self.library()?;
        let phi = lib.get(ell)?;
        let store = self.store(p)?;
        store.save()?;
        let reports = self
            .initial_vectors(&store.locus, a.init.unwrap_or_default())?
            .into_iter()
            .map(|(name, v)| run_power_experiment(&store.locus, phi, &v, count, &name))
            .collect::<Result<Vec<_>, _>>()?;
        let factor = 2.0 * (ell as f64).sqrt() / (ell as f64 + 1.0);
        self.experiment_outcome(to_value(a), reports, |rep, s| {
            let worst = rep.max_contraction().unwrap_or(0.0);
            s.check(worst <= factor + RELATIVE_SLACK, format!("per-step contraction for {}", rep.initial));
        })
    }

    fn field(text: Option<&str>) -> Result<NumberFieldSpec, CliError> {
        match text {
            None => Ok(NumberFieldSpec::rationals()),
            Some(t) => Ok(NumberFieldSpec::parse(t)?),
        }
    }

    fn satake(&self, a: &SatakeArgs) -> Result<Outcome, CliError> {
        let n = required(a.n, "n")?;
        let field = Self::field(a.field.as_deref())?;
        let rs: Vec<usize> = match a.r {
            Some(r) => vec![r],
            None => (1..n).collect(),
        };
        let ms: Vec<u64> = match (&a.m, a.m_max) {
            (Some(ms), None) => ms.clone(),
            (None, Some(max)) => (2..=max)
                .filter(|&m| is_squarefree(m) && squarefree_primes(m).is_ok_and(|ps| ps.iter().all(|&l| !field.is_excluded(l))))
                .collect(),
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --m or --m-max".into())),
            (None, None) => return Err(CliError::Usage("missing required value --m or --m-max".into())),
        };
        let grid: Vec<(usize, u64)> = rs.iter().flat_map(|&r| ms.iter().map(move |&m| (r, m))).collect();
        let rows: Vec<SatakeRow> = self.pool()?.install(|| {
            grid.par_iter()
                .map(|&(r, m)| satake_row(&GlobalOperatorSpec::new(n, r, m, field.clone())?))
                .collect::<Result<Vec<_>, Error>>()
        })?;
        let mut summary = Summary::new();
        for row in &rows {
            summary.check(row.satisfied, format!("bound at n={}, r={}, m={}", row.n, row.r, row.m));
        }
        Ok(Outcome { config: to_value(a), payload: to_value(&rows), csv: csv_rows(&rows).map_err(csv_err)?, summary })
    }

    fn splitting(&self, a: &SplittingArgs) -> Result<Outcome, CliError> {
        let field = Self::field(Some(&required(a.field.clone(), "field")?))?;
        let ells = required(a.ell.clone(), "ell")?;
        #[derive(Serialize)]
        struct Row {
            prime: u64,
            residue_degrees: String,
            cardinalities: String,
            places: usize,
        }
        let mut rows = Vec::new();
        for ell in ells {
            let s = field.splitting_data(ell)?;
            let join = |v: Vec<String>| v.join(" ");
            rows.push(Row {
                prime: s.prime,
                residue_degrees: join(s.residue_degrees.iter().map(|d| d.to_string()).collect()),
                cardinalities: join(s.cardinalities.iter().map(|q| q.to_string()).collect()),
                places: s.place_count(),
            });
        }
        let payload = json!({
            "field": field.to_string(),
            "discriminant": field.discriminant().to_string(),
            "primes": to_value(&rows),
        });
        Ok(Outcome { config: to_value(a), payload, csv: csv_rows(&rows).map_err(csv_err)?, summary: Summary::new() })
    }

    fn stirling(&self, a: &StirlingArgs) -> Result<Outcome, CliError> {
        let n = required(a.n, "n")?;
        let r = required(a.r, "r")?;
        let eps = parse_ratio(&required(a.eps.clone(), "eps")?)?;
        let res = stirling_failures(n, r, eps, a.limit)?;
        #[derive(Serialize)]
        struct Row<'a> {
            n: usize,
            r: usize,
            eps: &'a str,
            threshold: u64,
            failure_count: usize,
            omega_cutoff: usize,
        }
        let row = Row {
            n,
            r,
            eps: &res.eps,
            threshold: res.threshold,
            failure_count: res.failures.len(),
            omega_cutoff: res.omega_cutoff,
        };
        let mut payload = to_value(&res);
        payload["limit"] = json!(a.limit);
        Ok(Outcome { config: to_value(a), payload, csv: csv_rows(&[row]).map_err(csv_err)?, summary: Summary::new() })
    }

    fn modpoly_check(&self) -> Result<Outcome, CliError> {
        #[derive(Serialize)]
        struct Row {
            source: String,
            level: Option<u64>,
            entries: Option<usize>,
            ok: bool,
            error: String,
        }
        let row = |source: String, res: Result<ModularPolynomial, Error>| match res {
            Ok(phi) => Row { source, level: Some(phi.level()), entries: Some(phi.entries().count()), ok: true, error: String::new() },
            Err(e) => Row { source, level: None, entries: None, ok: false, error: e.to_string() },
        };
        let rows: Vec<Row> = match &self.common.data_dir {
            None => DEFAULT_PRIMES.iter().map(|&l| row(format!("builtin:{l}"), ModularPolynomial::builtin(l))).collect(),
            Some(dir) => {
                let files = data_files(dir)?;
                if files.is_empty() {
                    return Err(CliError::MissingData(format!("no .txt files in {}", dir.display())));
                }
                files.into_iter().map(|f| row(f.display().to_string(), ModularPolynomial::load(&f))).collect()
            }
        };
        let mut summary = Summary::new();
        for r in &rows {
            summary.check(r.ok, format!("{}: {}", r.source, r.error));
        }
        Ok(Outcome { config: json!({}), payload: to_value(&rows), csv: csv_rows(&rows).map_err(csv_err)?, summary })
    }
}

#[derive(Serialize)]
struct LocusRow {
    p: u64,
    points: usize,
    total_mass: String,
    mass_ok: bool,
    error: String,
}

impl LocusRow {
    fn ok(locus: &SupersingularLocus) -> Self {
        LocusRow {
            p: locus.p(),
            points: locus.len(),
            total_mass: locus.total_mass().to_string(),
            mass_ok: true,
            error: String::new(),
        }
    }

    fn failed(p: u64, error: String) -> Self {
        LocusRow { p, points: 0, total_mass: String::new(), mass_ok: false, error }
    }
}

fn data_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::MissingData(format!("data directory {} not found", dir.display())));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    Ok(files)
}

/// `a..b` or `a..=b`, both inclusive, with `a >= 5`.
pub fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("range must look like 5..100, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 5 || hi < lo {
        return Err(CliError::Usage(format!("range {text:?} must satisfy 5 <= a <= b")));
    }
    Ok((lo, hi))
}

/// `a/b` or a terminating decimal such as `0.75`.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>, CliError> {
    let bad = || CliError::Usage(format!("expected a positive rational like 1/2 or 0.5, got {text:?}"));
    let t = text.trim();
    let value = if let Some((a, b)) = t.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ratio::new(a, b)
    } else {
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ratio::new(int.checked_mul(scale).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?, scale)
    };
    if *value.numer() == 0 {
        return Err(CliError::Usage("eps must be positive".into()));
    }
    Ok(value)
}
