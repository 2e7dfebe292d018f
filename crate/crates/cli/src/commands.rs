use std::fs;
use std::path::Path;

use anosov_core::certify::certify_uru_with;
use anosov_core::domain::{domain_sample, properness_witness, Membership, ThickenedLimitSet};
use anosov_core::flag::Flag;
use anosov_core::io;
use anosov_core::limit::{limit_set_sample, LimitSample};
use anosov_core::linalg::{cartan_projection_with, root_gaps, Matrix, Tolerances};
use anosov_core::representation::Representation;
use anosov_core::schottky::{find_min_powers, symmetric_square, AxialPair, PingPongOptions, PowerSearchOptions};
use anosov_core::weyl::{enumerate_balanced, FaceType, Thickening};
use anosov_core::Error;

use crate::output::{ensure_exists, num, nums, sci, Artifacts};
use crate::svg::{circle_point, cross, disk_point, scatter, Series};
use crate::{CertifyArgs, Cli, Command, DomainArgs, LimitArgs, SchottkyCommand, SearchArgs, WeylCommand};

pub enum Status {
    Success,
    CertificateFailed,
}

type Out = Result<Status, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn tolerances(cli: &Cli) -> Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    for entry in &cli.tol {
        let (name, value) = entry.split_once('=').ok_or_else(|| format!("--tol: expected NAME=VALUE, got `{entry}`"))?;
        let value: f64 = value.trim().parse().map_err(|_| format!("--tol: `{value}` is not a number"))?;
        tol.set(name.trim(), value).map_err(|e| format!("--tol: {e}"))?;
    }
    Ok(tol)
}

/// Everything that determines the output, i.e. the whole command line
/// except the thread count.
fn config_line(cli: &Cli) -> String {
    format!("precision={} tol={:?} command={:?}", cli.precision, cli.tol, cli.command)
}

fn read(path: &Path, flag: &str) -> Result<String, String> {
    ensure_exists(path, flag)?;
    fs::read_to_string(path).map_err(|e| format!("{flag}: {e}"))
}

fn load_rep(path: &Path, tol: &Tolerances) -> Result<Representation, String> {
    let gens = io::parse_generators(&read(path, "--rep")?).map_err(|e| format!("--rep: {e}"))?;
    Representation::new_with(&gens, tol).map_err(|e| format!("--rep: {e}"))
}

fn face_arg(d: usize, pivots: Option<&str>) -> Result<FaceType, String> {
    match pivots {
        Some(p) => FaceType::parse(d, p).map_err(|e| format!("--pivots: {e}")),
        None => Ok(FaceType::full(d)),
    }
}

fn emit(artifacts: &Artifacts, name: &str, body: &str) -> Result<(), String> {
    match artifacts.write(name, body) {
        Ok(Some(p)) => {
            println!("wrote {}", p.display());
            Ok(())
        }
        Ok(None) => Ok(()),
        Err(e) => Err(format!("--out-dir: {e}")),
    }
}

pub fn run(cli: &Cli) -> Out {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err("--threads: must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| format!("--threads: {e}"))?;
    }
    let tol = tolerances(cli)?;
    let p = cli.precision;
    let config = config_line(cli);
    match &cli.command {
        Command::Cartan { file, pivots } => cartan(file, pivots.as_deref(), &tol, p),
        Command::Weyl { command: WeylCommand::Thickenings { d, pivots } } => thickenings(*d, pivots),
        Command::Certify(a) => certify(a, &tol, p, config),
        Command::Schottky { command: SchottkyCommand::Search(a) } => search(a, p, config),
        Command::Limitset(a) => limitset(a, &tol, p, config),
        Command::Domain(a) => domain(a, &tol, p, config),
    }
}

fn cartan(file: &Path, pivots: Option<&str>, tol: &Tolerances, p: usize) -> Out {
    let mats = io::parse_matrices(&read(file, "file")?).map_err(|e| format!("file: {e}"))?;
    for m in &mats {
        let v = cartan_projection_with(m, tol).map_err(err)?;
        println!("{}", nums(v.components(), p, " "));
        if let Some(piv) = pivots {
            let face = face_arg(m.dim(), Some(piv))?;
            println!("gaps {}", nums(&root_gaps(&v, &face).map_err(err)?, p, " "));
        }
    }
    Ok(Status::Success)
}

fn thickenings(d: usize, pivots: &str) -> Out {
    let face = FaceType::parse(d, pivots).map_err(|e| format!("--pivots: {e}"))?;
    let all = enumerate_balanced(d, &face).map_err(err)?;
    println!("count = {}", all.len());
    for (i, t) in all.iter().enumerate() {
        println!("{i}: {}", t.one_line());
    }
    Ok(Status::Success)
}

fn certify(a: &CertifyArgs, tol: &Tolerances, p: usize, config: String) -> Out {
    let rho = load_rep(&a.rep, tol)?;
    let face = face_arg(rho.dim(), Some(&a.pivots))?;
    let cert = certify_uru_with(&rho, &face, a.radius, a.min_slope, a.budget).map_err(err)?;
    let report = format!(
        "pass={}\nface={}\nradius={}\nmin_slope={}\nslope={}\nintercept={}\nqi_slope={}\nqi_intercept={}\ntail_slope={}\nmargin={}\n",
        cert.pass,
        cert.face,
        cert.radius,
        num(cert.min_slope, p),
        num(cert.c, p),
        num(cert.a, p),
        num(cert.c_qi, p),
        num(cert.a_qi, p),
        num(cert.tail_slope, p),
        num(cert.margin, p),
    );
    print!("{report}");
    let mut csv = String::from("length,words,min_gap,min_norm,argmin\n");
    for r in &cert.profile.records {
        csv.push_str(&format!("{},{},{},{},{}\n", r.length, r.words, num(r.min_gap, p), num(r.min_norm, p), r.argmin));
    }
    let artifacts = Artifacts::new(a.out_dir.clone(), config).map_err(|e| format!("--out-dir: {e}"))?;
    emit(&artifacts, "certificate.txt", &report)?;
    emit(&artifacts, "gaps.csv", &csv)?;
    Ok(if cert.pass { Status::Success } else { Status::CertificateFailed })
}

fn search(a: &SearchArgs, p: usize, config: String) -> Out {
    let d = a.eigenvalues.len();
    let conj = match &a.conj {
        Some(path) => {
            let mats = io::parse_matrices(&read(path, "--conj")?).map_err(|e| format!("--conj: {e}"))?;
            mats.into_iter().next().ok_or("--conj: no matrix in file")?
        }
        None => Matrix::identity(d.max(1)),
    };
    let mut pair = AxialPair::from_eigenvalues(&a.eigenvalues, &conj, a.theta).map_err(|e| format!("--eigenvalues: {e}"))?;
    if a.sym2 {
        pair = AxialPair::new(
            symmetric_square(&pair.alpha).map_err(|e| format!("--sym2: {e}"))?,
            symmetric_square(&pair.beta).map_err(|e| format!("--sym2: {e}"))?,
        )
        .map_err(err)?;
    }
    let face = face_arg(pair.dim(), a.pivots.as_deref())?;
    let opts = PowerSearchOptions {
        pingpong: PingPongOptions { samples: a.samples, seed: a.seed, ..PingPongOptions::default() },
        ..PowerSearchOptions::default()
    };
    let artifacts = Artifacts::new(a.out_dir.clone(), config).map_err(|e| format!("--out-dir: {e}"))?;
    match find_min_powers(&pair, &face, a.radius, a.min_slope, a.cap, &opts) {
        Ok(found) => {
            let report = format!(
                "found=true\npower={}\npingpong_radius={}\npingpong_margin={}\nslope={}\nmargin={}\n",
                found.power,
                num(found.pingpong.radius, p),
                num(found.pingpong.margin(), p),
                num(found.uru.c, p),
                num(found.uru.margin, p),
            );
            print!("{report}");
            emit(&artifacts, "search.txt", &report)?;
            let rho = anosov_core::schottky::schottky_rep(&pair, found.power, found.power).map_err(err)?;
            emit(&artifacts, "rep.txt", &io::format_generators(&rho.generator_matrices()))?;
            Ok(Status::Success)
        }
        Err(e @ (Error::CapExceeded { .. } | Error::NotGeneric { .. })) => {
            let report = format!("found=false\nreason={e}\n");
            print!("{report}");
            emit(&artifacts, "search.txt", &report)?;
            Ok(Status::CertificateFailed)
        }
        Err(e) => Err(err(e)),
    }
}

fn certified_sample(
    rho: &Representation,
    face: &FaceType,
    word_length: usize,
    power: u64,
    radius: usize,
    min_slope: f64,
) -> Result<LimitSample, String> {
    let sample = limit_set_sample(rho, face, word_length, power).map_err(err)?;
    if radius == 0 {
        return Ok(sample);
    }
    let cert = anosov_core::certify::certify_uru(rho, face, radius, min_slope).map_err(err)?;
    Ok(sample.with_certificate(&cert))
}

fn frame_header(d: usize) -> String {
    (0..d).flat_map(|j| (0..d).map(move |i| format!("f{}{}", i + 1, j + 1))).collect::<Vec<_>>().join(",")
}

fn frame_fields(f: &Flag, p: usize) -> String {
    let d = f.dim();
    (0..d).flat_map(|j| f.frame().column(j)).map(|x| num(x, p)).collect::<Vec<_>>().join(",")
}

fn flag_points(flags: &[&Flag], color: &'static str, dual_color: &'static str) -> Option<Vec<Series>> {
    let d = flags.first()?.dim();
    match d {
        2 => Some(vec![Series { points: flags.iter().map(|f| circle_point(&f.frame().column(0))).collect(), color, radius: 2.0 }]),
        3 => {
            let points = flags.iter().map(|f| disk_point(&f.frame().column(0))).collect();
            let duals = if flags[0].face().is_full() {
                flags.iter().map(|f| disk_point(&cross(&f.frame().column(0), &f.frame().column(1)))).collect()
            } else {
                Vec::new()
            };
            Some(vec![
                Series { points, color, radius: 2.0 },
                Series { points: duals, color: dual_color, radius: 1.5 },
            ])
        }
        _ => None,
    }
}

fn limitset(a: &LimitArgs, tol: &Tolerances, p: usize, config: String) -> Out {
    let rho = load_rep(&a.rep, tol)?;
    let face = face_arg(rho.dim(), Some(&a.pivots))?;
    let sample = certified_sample(&rho, &face, a.word_length, a.power, a.radius, a.min_slope)?;
    let margin = sample.min_margin.map(|m| sci(m, p)).unwrap_or_else(|| "none".into());
    println!("points={}\nskipped={}\ncertified={}\nmin_margin={margin}", sample.len(), sample.skipped, sample.certified);
    let d = rho.dim();
    let mut csv = format!("index,word,{}\n", frame_header(d));
    for (i, pt) in sample.points.iter().enumerate() {
        csv.push_str(&format!("{i},{},{}\n", pt.word, frame_fields(&pt.flag, p)));
    }
    let artifacts = Artifacts::new(a.out_dir.clone(), config).map_err(|e| format!("--out-dir: {e}"))?;
    emit(&artifacts, "limitset.csv", &csv)?;
    if a.svg {
        let flags: Vec<&Flag> = sample.points.iter().map(|p| &p.flag).collect();
        match flag_points(&flags, "#1f4e9c", "#c0392b") {
            Some(series) => emit(&artifacts, "limitset.svg", &scatter("limit set", &series))?,
            None => eprintln!("--svg: plots need dimension 2 or 3 and a nonempty sample"),
        }
    }
    Ok(Status::Success)
}

fn load_thickening(arg: &str, face: &FaceType) -> Result<Thickening, String> {
    if let Ok(i) = arg.parse::<usize>() {
        let all = enumerate_balanced(face.dim(), face).map_err(|e| format!("--thickening: {e}"))?;
        let n = all.len();
        return all.into_iter().nth(i).ok_or_else(|| format!("--thickening: index {i} out of range (count = {n})"));
    }
    let text = read(Path::new(arg), "--thickening")?;
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("");
    Thickening::parse(&body).map_err(|e| format!("--thickening: {e}"))
}

fn domain(a: &DomainArgs, tol: &Tolerances, p: usize, config: String) -> Out {
    let rho = load_rep(&a.rep, tol)?;
    let face = face_arg(rho.dim(), a.pivots.as_deref())?;
    let th = load_thickening(&a.thickening, &face)?;
    let sample = certified_sample(&rho, &face, a.word_length, a.power, a.radius, a.min_slope)?;
    let sample_size = sample.len();
    let certified = sample.certified;
    let margin = sample.min_margin.map(|m| sci(m, p)).unwrap_or_else(|| "none".into());
    let t = ThickenedLimitSet::with_tolerance(th, sample, *tol).map_err(|e| format!("--thickening: {e}"))?;
    let cloud = domain_sample(&t, a.samples, a.seed).map_err(err)?;
    let (n_in, n_out, n_amb) = cloud.counts();
    println!(
        "thickening={}\nlimit_points={sample_size}\ncertified={certified}\nlimit_min_margin={margin}\nin={n_in}\nout={n_out}\nambiguous={n_amb}",
        t.thickening.one_line()
    );
    let d = rho.dim();
    let mut csv = format!("index,{},class,witness,margin\n", frame_header(d));
    for (i, c) in cloud.points.iter().enumerate() {
        let witness = match &c.class {
            Membership::In { word, .. } => word.to_string(),
            _ => String::new(),
        };
        csv.push_str(&format!("{i},{},{},{witness},{}\n", frame_fields(&c.chamber, p), c.class.label(), num(c.margin, p)));
    }
    let artifacts = Artifacts::new(a.out_dir.clone(), config).map_err(|e| format!("--out-dir: {e}"))?;
    emit(&artifacts, "domain.csv", &csv)?;
    if a.svg {
        let pick = |label: &str| cloud.points.iter().filter(|c| c.class.label() == label).map(|c| &c.chamber).collect::<Vec<_>>();
        let mut series = Vec::new();
        for (label, color) in [("out", "#2e7d32"), ("in", "#c0392b"), ("ambiguous", "#f39c12")] {
            let flags = pick(label);
            if let Some(mut s) = flag_points(&flags, color, color) {
                series.push(s.remove(0));
            }
        }
        if series.is_empty() {
            eprintln!("--svg: plots need dimension 2 or 3");
        } else {
            emit(&artifacts, "domain.svg", &scatter("domain", &series))?;
        }
    }
    if let Some(len) = a.census {
        let k = cloud.domain();
        let census = properness_witness(&rho, &t, &k, len, a.census_tol).map_err(err)?;
        let counts: Vec<String> = census.counts.iter().map(|c| c.to_string()).collect();
        println!("census_counts={}\ncensus_stabilized={}", counts.join(","), census.stabilized());
    }
    Ok(Status::Success)
}
