use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vdclab::adeles::{self, AdelicPolynomial, FiniteAdele};
use vdclab::besicovitch::{self as bes, Bits, IndicatorSource};
use vdclab::equidist::{self, default_frequencies};
use vdclab::ipcomb::{self, Coloring, IPGenerators, PatternFamily};
use vdclab::multiplicative::{self as mult, ComplexSequence};
use vdclab::pet::{self, CharacteristicVector, DescentBudget, PolyFamily};
use vdclab::real::{format_rational, parse_rational, Real};
use vdclab::sequences::{geometric_grid, SequenceSpec};
use vdclab::vdc::{self, ComplexFn};
use vdclab::{Error, Result};

use crate::cli::*;
use crate::output::{csv_field, read_file, write_file, Report};

fn spec(s: &str) -> Result<SequenceSpec> {
    s.parse()
}

fn n_max(c: &Common, default: u64) -> usize {
    c.n_max.unwrap_or(default) as usize
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

/// `a..b` and `a..=b` (both inclusive), or a comma list.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad integer '{t}' in '{s}'")))
    };
    if let Some((a, b)) = s.split_once("..=") {
        return Ok((num(a)?..=num(b)?).collect());
    }
    if let Some((a, b)) = s.split_once("..") {
        return Ok((num(a)?..=num(b)?).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect()
}

fn freqs(c: &Common) -> Result<Vec<i64>> {
    match &c.freqs {
        Some(f) => {
            let v = parse_int_list(f)?;
            if v.is_empty() {
                return bad("empty frequency list");
            }
            Ok(v)
        }
        None => Ok(default_frequencies()),
    }
}

fn scalar_points(s: &SequenceSpec, start: u64, count: usize) -> Result<Vec<f64>> {
    if s.dimension() != 1 {
        return bad("this command needs a scalar sequence spec");
    }
    s.compile()?.sample(start, count)
}

fn weyl_json(report: &equidist::WeylReport) -> Value {
    serde_json::to_value(report).expect("serializable")
}

pub fn gen(c: &Common, a: &GenArgs) -> Result<Report> {
    let s = spec(&a.spec)?;
    let n = n_max(c, 1000);
    let points = s.compile()?.sample_points(a.start, n)?;
    let dim = s.dimension();
    let mut csv = String::from("n");
    if dim == 1 {
        csv.push_str(",x\n");
    } else {
        for i in 1..=dim {
            let _ = write!(csv, ",x{i}");
        }
        csv.push('\n');
    }
    let mut values = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let _ = write!(csv, "{}", a.start + i as u64);
        for x in p.coords() {
            let _ = write!(csv, ",{x}");
        }
        csv.push('\n');
        values.push(if dim == 1 { json!(p.coords()[0]) } else { json!(p.coords()) });
    }
    let js = json!({"spec": s.to_json(), "start": a.start, "N": n, "values": values});
    Ok(Report::csv(csv, js))
}

pub fn analyze(c: &Common, a: &SpecArgs) -> Result<Report> {
    let s = spec(&a.spec)?;
    let n = n_max(c, 100_000);
    let points = scalar_points(&s, 1, n)?;
    let report = equidist::weyl_report(&points, &freqs(c)?)?;
    let disc = equidist::star_discrepancy(&points)?;
    let verdict = equidist::ud_verdict(&report, c.threshold.unwrap_or(0.01))?;
    let js = json!({
        "spec": s.to_json(),
        "weyl": weyl_json(&report),
        "discrepancy": disc,
        "verdict": verdict,
    });
    Ok(Report::csv(report.to_csv(), js).with_verdict(verdict.consistent))
}

pub fn scan(c: &Common, a: &ScanArgs) -> Result<Report> {
    let s = spec(&a.spec)?;
    let window = c.window.unwrap_or(1000) as usize;
    let stat = equidist::well_distribution_scan(&s, a.h, window, a.m_max as usize)?;
    let threshold = c.threshold.unwrap_or(0.1);
    let ok = stat.sup_magnitude < threshold;
    let csv = format!(
        "window,h,m_max,sup_magnitude,argmax_m\n{},{},{},{},{}\n",
        stat.window, stat.h, stat.m_max, stat.sup_magnitude, stat.argmax_m
    );
    let js = json!({"spec": s.to_json(), "scan": stat, "threshold": threshold, "consistent": ok});
    Ok(Report::csv(csv, js).with_verdict(ok))
}

pub fn vdc_cmd(c: &Common, cmd: &VdcCommand) -> Result<Report> {
    match cmd {
        VdcCommand::Chain { spec: s, depth } => {
            let s = spec(s)?;
            let n = n_max(c, 100_000);
            let points = scalar_points(&s, 1, n + depth)?;
            let fs = freqs(c)?;
            let threshold = c.threshold.unwrap_or(0.01);
            let mut csv = String::from("d,h,N,re,im,magnitude\n");
            let mut rows = Vec::new();
            let mut ok = true;
            for d in 1..=*depth {
                let diff = vdc::difference_sequence(&points, d)?;
                let report = equidist::weyl_report(&diff[..n], &fs)?;
                for e in &report.entries {
                    let _ = writeln!(csv, "{d},{},{},{},{},{}", e.h, report.n, e.re, e.im, e.magnitude);
                    ok &= e.magnitude < threshold;
                }
                rows.push(json!({"d": d, "weyl": weyl_json(&report)}));
            }
            Ok(Report::csv(csv, json!({"spec": s.to_json(), "chain": rows})).with_verdict(ok))
        }
        VdcCommand::Gap { spec: s, depth, h, random: None, .. } => {
            let s = spec(s.as_deref().expect("required without --random"))?;
            let n = n_max(c, 10_000);
            let points = scalar_points(&s, 1, n + depth)?;
            let u: Vec<Complex64> = points.iter().map(|&x| vdclab::accum::unit(*h as f64 * x)).collect();
            let r = vdc::vdc_inequality_gap(&u, n, *depth, 1.0)?;
            let csv = format!("lhs,rhs,gap,N,D,B\n{},{},{},{},{},{}\n", r.lhs, r.rhs, r.gap, r.n, r.depth, r.bound);
            let js = serde_json::to_value(r).expect("serializable");
            Ok(Report::csv(csv, js).with_verdict(r.gap >= -1e-9))
        }
        VdcCommand::Gap { random: Some(trials), max_depth, .. } => {
            let n = n_max(c, 10_000);
            if *max_depth == 0 || *max_depth > n {
                return bad("max-depth must lie in 1..=N");
            }
            let mut csv = String::from("trial,D,lhs,rhs,gap\n");
            let mut min_gap = f64::INFINITY;
            for t in 0..*trials {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                rng.set_stream(t as u64);
                let d = rng.gen_range(1..=*max_depth);
                let u: Vec<Complex64> = (0..n + d)
                    .map(|_| Complex64::from_polar(rng.gen::<f64>(), std::f64::consts::TAU * rng.gen::<f64>()))
                    .collect();
                let r = vdc::vdc_inequality_gap(&u, n, d, 1.0)?;
                let _ = writeln!(csv, "{t},{d},{},{},{}", r.lhs, r.rhs, r.gap);
                min_gap = min_gap.min(r.gap);
            }
            let ok = min_gap >= -1e-9;
            let js = json!({"trials": trials, "N": n, "max_depth": max_depth, "min_gap": min_gap, "consistent": ok});
            Ok(Report::csv(csv, js).with_verdict(ok))
        }
        VdcCommand::Cov { spec: s, depth, h } => {
            let s = spec(s)?;
            let n = n_max(c, 10_000);
            let points = scalar_points(&s, 1, n + depth)?;
            let u: Vec<Vec<Complex64>> = points
                .iter()
                .map(|&x| vec![vdclab::accum::unit(*h as f64 * x)])
                .collect();
            let p = vdc::correlation_profile(&u, n, *depth)?;
            let mut csv = String::from("shift,re,im,magnitude\n");
            for (k, g) in &p.gammas {
                let _ = writeln!(csv, "{k},{},{},{}", g.re, g.im, g.norm());
            }
            Ok(Report::csv(csv, serde_json::to_value(&p).expect("serializable")))
        }
        VdcCommand::Fejer { spec: s } => {
            let s = spec(s)?;
            let r = vdclab::sequences::fejer_check(&s, n_max(c, 1_000_000) as u64)?;
            let csv = format!(
                "horizon,eventually_decreasing,tail_delta,tail_n_delta,satisfied\n{},{},{},{},{}\n",
                r.horizon, r.eventually_decreasing, r.tail_delta, r.tail_n_delta, r.satisfied
            );
            Ok(Report::csv(csv, serde_json::to_value(&r).expect("serializable")).with_verdict(r.satisfied))
        }
        VdcCommand::Bosh { spec: s, p, grid } => {
            let s = spec(s)?;
            let coeffs = p.split(',').map(Real::parse).collect::<Result<Vec<_>>>()?;
            let parts: Vec<&str> = grid.split(',').collect();
            let [from, to, count] = parts[..] else {
                return bad("grid must be 'from,to,count'");
            };
            let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad grid value '{t}'")));
            let count = crate::cli::parse_count(count.trim()).map_err(Error::Parse)? as usize;
            let g = geometric_grid(num(from)?, num(to)?, count);
            let r = vdc::boshernitzan_ratio(&s, &coeffs, &g)?;
            let mut csv = String::from("x,ratio\n");
            for (x, q) in r.grid.iter().zip(&r.ratios) {
                let _ = writeln!(csv, "{x},{q}");
            }
            Ok(Report::csv(csv, serde_json::to_value(&r).expect("serializable")).with_verdict(r.consistent))
        }
        VdcCommand::Quad { inner, sigma, tau, step } => {
            let a = ComplexFn::Phase { inner: spec(inner)?, scale: 1.0 };
            let r = vdc::change_of_variable_gap(&a, &spec(sigma)?, *tau, *step)?;
            let threshold = c.threshold.unwrap_or(0.05);
            let csv = format!(
                "tau,step,intervals,gap,error_estimate\n{},{},{},{},{}\n",
                r.tau, r.step, r.intervals, r.gap, r.error_estimate
            );
            let ok = r.gap < threshold;
            Ok(Report::csv(csv, serde_json::to_value(&r).expect("serializable")).with_verdict(ok))
        }
    }
}

pub fn besicovitch_cmd(c: &Common, cmd: &BesicovitchCommand) -> Result<Report> {
    match cmd {
        BesicovitchCommand::Indicator { source, bits, rle } => {
            let src = IndicatorSource::parse(source)?;
            let ind = bes::build_indicator(&src, n_max(c, 1_000_000) as u64)?;
            if let Some(path) = bits {
                write_file(path, &ind.bits.to_bytes())?;
            }
            if let Some(path) = rle {
                let text = serde_json::to_string(&ind.to_rle_json()).expect("serializable");
                write_file(path, text.as_bytes())?;
            }
            let csv = format!(
                "source,N,count,density\n{},{},{},{}\n",
                csv_field(&src.to_string()),
                ind.horizon,
                ind.count(),
                ind.density()
            );
            let js = json!({
                "source": src.to_string(),
                "N": ind.horizon,
                "count": ind.count(),
                "density": ind.density(),
                "notes": ind.notes,
            });
            Ok(Report::csv(csv, js))
        }
        BesicovitchCommand::Distance { source, m } => {
            let src = IndicatorSource::parse(source)?;
            let n = n_max(c, 1_000_000) as u64;
            let f = bes::build_indicator(&src, n)?.as_complex();
            let mut csv = String::from("M,period,terms,density,distance,tail_bound,dropped_mass,error_bound\n");
            let mut rows = Vec::new();
            let mut ok = true;
            for level in parse_int_list(m)? {
                if level < 1 {
                    return bad("truncation level M must be positive");
                }
                let approx = bes::rational_approximation(&src, level as u64, n)?;
                let dist = bes::besicovitch_distance(&f, &approx.poly)?;
                ok &= dist <= approx.error_bound + 1e-9;
                let _ = writeln!(
                    csv,
                    "{level},{},{},{},{dist},{},{},{}",
                    approx.period,
                    approx.poly.terms().len(),
                    approx.density,
                    approx.tail_bound,
                    approx.dropped_mass,
                    approx.error_bound
                );
                rows.push(json!({
                    "M": level,
                    "period": approx.period,
                    "divisors": approx.divisors,
                    "terms": approx.poly.terms().len(),
                    "density": approx.density,
                    "distance": dist,
                    "tail_bound": approx.tail_bound,
                    "dropped_mass": approx.dropped_mass,
                    "error_bound": approx.error_bound,
                }));
            }
            Ok(Report::csv(csv, json!({"source": src.to_string(), "N": n, "levels": rows})).with_verdict(ok))
        }
        BesicovitchCommand::Subseq { source, spec: s } => {
            let src = IndicatorSource::parse(source)?;
            let n = n_max(c, 100_000);
            let ind = bes::build_indicator(&src, n as u64)?;
            let s = spec(s)?;
            let base = scalar_points(&s, 1, n)?;
            let ex = bes::subsequence_extract(&ind, &base)?;
            if ex.values.is_empty() {
                return bad(ex.warning.unwrap_or_else(|| "empty subsequence".into()));
            }
            let report = equidist::weyl_report(&ex.values, &freqs(c)?)?;
            let verdict = equidist::ud_verdict(&report, c.threshold.unwrap_or(0.05))?;
            let js = json!({
                "source": src.to_string(),
                "spec": s.to_json(),
                "members": ex.indices.len(),
                "weyl": weyl_json(&report),
                "verdict": verdict,
            });
            Ok(Report::csv(report.to_csv(), js).with_verdict(verdict.consistent))
        }
    }
}

fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

pub fn adele_cmd(c: &Common, cmd: &AdeleCommand) -> Result<Report> {
    match cmd {
        AdeleCommand::Pfrac { q, p } => {
            let y = adeles::p_fractional(&rational(q)?, *p)?;
            let text = format_rational(&y);
            Ok(Report::text(text.clone(), json!({"q": q, "p": p, "fractional": text})))
        }
        AdeleCommand::Frac { x } => {
            let x = FiniteAdele::parse(x)?;
            let f = format_rational(&adeles::adele_fractional(&x)?);
            Ok(Report::text(f.clone(), json!({"x": x.to_json(), "fractional": f})))
        }
        AdeleCommand::Phi { x } => {
            let x = FiniteAdele::parse(x)?;
            let y = adeles::phi(&x)?.adele().to_json();
            Ok(Report::text(y.to_string(), json!({"x": x.to_json(), "phi": y})))
        }
        AdeleCommand::Char { r, u } => {
            let r = rational(r)?;
            let u = FiniteAdele::parse(u)?;
            let e = adeles::character_exponent(&r, &u)?;
            let z = adeles::character(&r, &u)?;
            let csv = format!("r,exponent,re,im\n{},{},{},{}\n", format_rational(&r), format_rational(&e), z.re, z.im);
            let js = json!({"r": format_rational(&r), "u": u.to_json(), "exponent": format_rational(&e), "re": z.re, "im": z.im});
            Ok(Report::csv(csv, js))
        }
        AdeleCommand::Weyl { alpha, degree, r, levels } => {
            let alpha = FiniteAdele::parse(alpha)?;
            if *degree == 0 {
                return bad("degree must be >= 1");
            }
            let g = AdelicPolynomial::monomial(alpha.clone(), *degree);
            let r = rational(r)?;
            let mut csv = format!("{}\n", adeles::AdelicWeylReport::CSV_HEADER);
            let mut rows = Vec::new();
            for level in parse_int_list(levels)? {
                if level < 1 {
                    return bad("Følner levels must be positive");
                }
                let f = adeles::folner_rationals(level as u32)?;
                let rep = adeles::adelic_weyl_average(&g, &r, &f)?;
                let _ = writeln!(csv, "{}", rep.csv_row());
                rows.push(rep);
            }
            let threshold = c.threshold.unwrap_or(0.2);
            let ok = rows.last().is_some_and(|r| r.magnitude < threshold);
            let js = json!({"alpha": alpha.to_json(), "degree": degree, "r": format_rational(&r), "levels": rows});
            Ok(Report::csv(csv, js).with_verdict(ok))
        }
    }
}

fn weight_table(name: &str, n: usize) -> Result<Vec<f64>> {
    let t = match name {
        "mobius" => mult::mobius_table(n as u64)?,
        "liouville" => mult::liouville_table(n as u64)?,
        other => return bad(format!("unknown weight '{other}' (mobius or liouville)")),
    };
    Ok(mult::as_f64_table(&t))
}

pub fn katai_cmd(c: &Common, cmd: &KataiCommand) -> Result<Report> {
    let n = n_max(c, 100_000);
    match cmd {
        KataiCommand::Corr { seq, p, q } => {
            let a = ComplexSequence::parse(seq)?;
            let z = mult::katai_correlation(&a, *p, *q, n)?;
            let csv = format!("p,q,re,im,magnitude\n{p},{q},{},{},{}\n", z.re, z.im, z.norm());
            Ok(Report::csv(csv, json!({"N": n, "p": p, "q": q, "re": z.re, "im": z.im, "magnitude": z.norm()})))
        }
        KataiCommand::Report { seq, primes } => {
            let a = ComplexSequence::parse(seq)?;
            let r = mult::katai_report(&a, *primes, n, c.threshold)?;
            Ok(Report::csv(r.to_csv(), r.verdict_json()).with_verdict(r.consistent))
        }
        KataiCommand::Weighted { seq, weight } => {
            let a = ComplexSequence::parse(seq)?;
            let table = weight_table(weight, n)?;
            let z = mult::weighted_weyl_sum(&table, &a, n)?;
            let threshold = c.threshold.unwrap_or(0.02);
            let ok = z.norm() < threshold;
            let csv = format!("N,re,im,magnitude\n{n},{},{},{}\n", z.re, z.im, z.norm());
            let js = json!({"N": n, "weight": weight, "re": z.re, "im": z.im, "magnitude": z.norm(), "threshold": threshold, "consistent": ok});
            Ok(Report::csv(csv, js).with_verdict(ok))
        }
    }
}

/// `(1,2,3)` or `1,2,3`.
pub fn parse_vector(s: &str) -> Result<CharacteristicVector> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let v = inner
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("cannot parse characteristic vector '{s}'")))?;
    CharacteristicVector::new(v)
}

pub fn pet_cmd(cmd: &PetCommand) -> Result<Report> {
    match cmd {
        PetCommand::Cv { family } => {
            let f = PolyFamily::parse(family)?;
            let v = pet::characteristic_vector(&f)?;
            Ok(Report::text(v.to_string(), json!({"family": f.to_json(), "vector": v.entries()})))
        }
        PetCommand::Less { a, b } => {
            let (x, y) = (parse_vector(a)?, parse_vector(b)?);
            let less = pet::cv_less(&x, &y);
            Ok(Report::text(less.to_string(), json!({"a": x.entries(), "b": y.entries(), "less": less})))
        }
        PetCommand::Reduce { family, select } => {
            let f = PolyFamily::parse(family)?;
            let r = pet::reduce_family(&f, *select)?;
            let mut text = format!("{} -> {}\n", r.before, r.after);
            for m in r.family.members() {
                let _ = writeln!(text, "{m}");
            }
            let js = json!({
                "case": r.case,
                "selected": r.selected.to_string(),
                "before": r.before.entries(),
                "after": r.after.entries(),
                "family": r.family.to_json(),
                "exceptional_h": r.exceptional_h,
            });
            Ok(Report::text(text, js))
        }
        PetCommand::Chain { family, max_steps, max_size } => {
            let f = PolyFamily::parse(family)?;
            let budget = DescentBudget { max_steps: *max_steps, max_family_size: *max_size };
            let chain = pet::descent_chain_with(&f, budget)?;
            let steps: Vec<String> = chain.vectors.iter().map(ToString::to_string).collect();
            let mut text = steps.join(" -> ");
            if let Some(d) = &chain.diagnostic {
                let _ = write!(text, "\nstopped: {d}");
            }
            Ok(Report::text(text, chain.to_json()).with_verdict(chain.terminated))
        }
    }
}

/// `all`, `evens`, `odds`, `primes`, `random:<density>` or an indicator source.
fn build_set(s: &str, n: u64, seed: u64) -> Result<Bits> {
    let s = s.trim();
    let by = |pred: &dyn Fn(u64) -> bool| {
        let mut b = Bits::zeros(n);
        for i in 1..=n {
            if pred(i) {
                b.set(i, true);
            }
        }
        b
    };
    Ok(match s {
        "all" => Bits::ones(n),
        "evens" => by(&|i| i % 2 == 0),
        "odds" => by(&|i| i % 2 == 1),
        "primes" => {
            let mut b = Bits::zeros(n);
            for p in vdclab::arith::primes_up_to(n) {
                b.set(p, true);
            }
            b
        }
        _ => {
            if let Some(d) = s.strip_prefix("random:") {
                let d: f64 = d.parse().map_err(|_| Error::Parse(format!("bad density in '{s}'")))?;
                if !(0.0..=1.0).contains(&d) {
                    return bad("density must lie in [0, 1]");
                }
                ipcomb::random_subset(n, d, seed)
            } else {
                bes::build_indicator(&IndicatorSource::parse(s)?, n)?.bits
            }
        }
    })
}

fn gap_value(g: Option<u64>) -> Value {
    g.map_or(Value::String("inf".into()), Value::from)
}

pub fn ramsey_cmd(c: &Common, cmd: &RamseyCommand) -> Result<Report> {
    match cmd {
        RamseyCommand::Search { coloring, colors, patterns, candidates } => {
            let col = match (coloring, colors) {
                (Some(path), _) => Coloring::parse(&read_file(path)?)?,
                (None, Some(digits)) => {
                    let r = digits.chars().filter_map(|ch| ch.to_digit(10)).max().unwrap_or(1);
                    Coloring::parse(&format!("{} {r}\n{digits}", digits.chars().count()))?
                }
                (None, None) => return bad("give --coloring <file> or --colors <digits>"),
            };
            let pats = PatternFamily::parse(patterns)?;
            let cands: Vec<u64> = match candidates {
                Some(s) => parse_int_list(s)?
                    .into_iter()
                    .map(|v| u64::try_from(v).map_err(|_| Error::Argument("candidates must be >= 0".into())))
                    .collect::<Result<_>>()?,
                None => (1..=col.len()).collect(),
            };
            let r = ipcomb::pattern_search(&col, &pats, &cands)?;
            let found = r.hit.is_some();
            Ok(Report::json(r.to_json()).with_verdict(found))
        }
        RamseyCommand::Vdw { k, n } => {
            let r = ipcomb::vdw_exhaustive(*k, *n)?;
            let js = json!({
                "k": k,
                "window": r.window,
                "colorings": r.colorings,
                "with_hit": r.with_hit,
                "every_coloring_hit": r.every_coloring_hit(),
                "first_without": r.first_without,
            });
            Ok(Report::json(js).with_verdict(r.every_coloring_hit()))
        }
        RamseyCommand::FloorPower { a, b, spec_a, spec_b, m, trials } => {
            let n = n_max(c, 1_000_000) as u64;
            let (pa, pb) = (PatternFamily::parse(spec_a)?, PatternFamily::parse(spec_b)?);
            let mut csv = String::from("trial,k,n,x,y\n");
            let mut rows = Vec::new();
            let mut hits = 0;
            for t in 0..*trials {
                let seed = c.seed.wrapping_add(2 * t);
                let set_a = build_set(a, n, seed)?;
                let set_b = build_set(b, n, seed.wrapping_add(1))?;
                let hit = ipcomb::floor_power_search(&set_a, &set_b, &pa, &pb, *m, 1..=n)?;
                match &hit {
                    Some(h) => {
                        hits += 1;
                        let _ = writeln!(csv, "{t},{},{},{},{}", h.k, h.n, h.x, h.y);
                    }
                    None => {
                        let _ = writeln!(csv, "{t},,,,");
                    }
                }
                rows.push(hit.map_or(Value::Null, |h| h.to_json()));
            }
            let js = json!({"N": n, "m": m, "trials": trials, "hits": hits, "results": rows});
            Ok(Report::csv(csv, js).with_verdict(hits == *trials))
        }
        RamseyCommand::Ip { gens, set } => {
            let list = gens.iter().map(|g| IPGenerators::parse(g)).collect::<Result<Vec<_>>>()?;
            let mut enums = Vec::new();
            for g in &list {
                let e = ipcomb::ip_enumerate(g)?;
                enums.push(json!({
                    "generators": g.as_slice(),
                    "sums": e.values,
                    "multiplicity": e.multiplicity,
                    "all_distinct": e.all_distinct(),
                }));
            }
            let mut js = json!({"enumerations": enums});
            let mut verdict = None;
            if let Some(s) = set {
                let n = n_max(c, 10_000) as u64;
                let report = ipcomb::ip_star_window_test(&build_set(s, n, c.seed)?, &list)?;
                verdict = Some(report.consistent);
                js["ip_star"] = report.to_json();
            }
            let mut r = Report::json(js);
            r.verdict = verdict;
            Ok(r)
        }
        RamseyCommand::Syndetic { set, g } => {
            let n = n_max(c, 10_000) as u64;
            let l = c.window.unwrap_or(50);
            let b = build_set(set, n, c.seed)?;
            let gap = ipcomb::syndetic_gap(&b);
            let start = ipcomb::piecewise_syndetic_scan(&b, *g, l)?;
            let js = json!({
                "N": n,
                "max_gap": gap_value(gap),
                "g": g,
                "L": l,
                "first_window": start,
                "verdict": if start.is_some() { "window-consistent" } else { "no qualifying window" },
            });
            Ok(Report::json(js).with_verdict(start.is_some()))
        }
        RamseyCommand::SubIp { s, trials } => {
            if !(2..=12).contains(s) {
                return bad("s must lie in 2..=12");
            }
            let mut rows = Vec::new();
            let mut found = 0;
            for t in 0..*trials {
                let col = ipcomb::random_partition(*s, c.seed.wrapping_add(t));
                let triple = ipcomb::monochromatic_sub_ip(&col);
                found += u64::from(triple.is_some());
                rows.push(json!({
                    "seed": c.seed.wrapping_add(t),
                    "generators": triple,
                    "color": triple.and_then(|t| col.get(t[0])),
                }));
            }
            let js = json!({"s": s, "trials": trials, "found": found, "results": rows});
            Ok(Report::json(js).with_verdict(found == *trials))
        }
    }
}
