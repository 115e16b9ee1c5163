use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tracekit::bounds::{
    check_pv_kernel, check_thm1, delta_transfer_ratio, transfer_ratio_with, weyl_bound_ratio,
    witness,
};
use tracekit::calibration::dyadic_grid;
use tracekit::equidist::{
    angle_histogram, birch_moments, birch_tail_counts, equidist_report,
    psi_hat_identity_check_with, restrict, tail_frequency_floor, EquidistFamily,
};
use tracekit::mellin::{
    build_dlog, geometric_progression_bound, geometric_progression_sum, mellin_sup_check,
};
use tracekit::modarith::primitive_root;
use tracekit::sums::DeltaEvaluator;
use tracekit::tracezoo::{extract_angles, kloosterman_all, AngleFamily};
use tracekit::{
    dft_fast, dft_naive, make_spectral_pair, BoundReport, Family, Interval, Modulus, Poly,
};

use crate::cache::cache_lookup;
use crate::config::{Command, ExperimentConfig};
use crate::report::{Outcome, Table};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.command() {
        Command::DftSelftest => dft_selftest(cfg),
        Command::Thm1 => thm1(cfg),
        Command::Transfer => transfer(cfg),
        Command::Weyl => weyl(cfg),
        Command::Equidist => equidist(cfg),
        Command::Birch => birch(cfg),
        Command::Mellin => mellin(cfg),
        Command::Pv => pv(cfg),
    }
}

fn f(x: f64) -> String {
    format!("{x:.12e}")
}

fn table_for(
    cfg: &ExperimentConfig,
    family: Family,
    m: &Modulus,
) -> Result<tracekit::FunctionTable, CliError> {
    Ok(cache_lookup(cfg.cache_dir.as_deref(), family, m)?.0)
}

/// Interval starts: the configured one, then `placements` seeded random ones.
/// Each modulus draws from its own stream so adding a modulus to a ladder
/// does not move the others.
fn starts(cfg: &ExperimentConfig, m: u64) -> Vec<i64> {
    let mut out = vec![cfg.interval.start];
    if let Some(seed) = cfg.interval.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        out.extend((0..cfg.interval.placements).map(|_| rng.gen_range(0..m as i64)));
    }
    out
}

fn check_lengths(
    cfg: &ExperimentConfig,
    m: u64,
    ok: impl Fn(u64) -> bool,
    what: &str,
) -> Result<(), CliError> {
    match cfg.interval.lengths.iter().find(|&&l| !ok(l)) {
        Some(l) => Err(CliError::Config(format!(
            "length {l} invalid for {what} at m = {m}"
        ))),
        None => Ok(()),
    }
}

fn dft_selftest(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = cfg.family()?;
    let mut out = Outcome::default();
    for &m in &cfg.moduli {
        let md = Modulus::new(m)?;
        let phi = table_for(cfg, family, &md)?;
        let fast = dft_fast(&phi);
        let slow = dft_naive(&phi);
        let mut t = Table::new(format!("dft-m{m}"), &["h", "re", "im", "abs_err"]);
        let mut err = 0.0f64;
        for (h, (a, b)) in fast.values().iter().zip(slow.values()).enumerate() {
            let e = (a - b).norm();
            err = err.max(e);
            t.push(vec![h.to_string(), f(a.re), f(a.im), f(e)]);
        }
        let w = || witness([("m", m.into()), ("family", family.name().into())]);
        out.checks.push(BoundReport::new(
            "dft_oracle",
            err,
            1e-9 * (m as f64).sqrt(),
            Some(1.0),
            w(),
        ));
        let (a, b) = (phi.l2_norm_sq(), fast.l2_norm_sq());
        let rel = if a > 0.0 { (a - b).abs() / a } else { b };
        out.checks
            .push(BoundReport::new("parseval", rel, 1e-8, Some(1.0), w()));
        out.tables.push(t);
    }
    Ok(out)
}

fn default_thm1_lengths(m: u64) -> Vec<u64> {
    let valid = |l: u64| l * l > m && l <= m;
    if m <= 500 {
        return (1..=m).filter(|&l| valid(l)).collect();
    }
    let lo = (m as f64).sqrt();
    let mut v: Vec<u64> = (0..50)
        .map(|i| (lo * (m as f64 / lo).powf(i as f64 / 49.0)).round() as u64)
        .filter(|&l| valid(l))
        .collect();
    v.push(m);
    v.sort_unstable();
    v.dedup();
    v
}

fn thm1(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = cfg.family()?;
    let mut out = Outcome::default();
    let mut t = Table::new("thm1", &["m", "length", "start", "lhs", "rhs", "ratio"]);
    for &m in &cfg.moduli {
        check_lengths(
            cfg,
            m,
            |l| l * l > m && l <= m,
            "thm1 (need sqrt(m) < L <= m)",
        )?;
        let lengths = if cfg.interval.lengths.is_empty() {
            default_thm1_lengths(m)
        } else {
            cfg.interval.lengths.clone()
        };
        let pair = make_spectral_pair(table_for(cfg, family, &Modulus::new(m)?)?);
        for r in check_thm1(&pair, &lengths)? {
            t.push(vec![
                m.to_string(),
                r.witness["length"].to_string(),
                r.witness["start"].to_string(),
                f(r.lhs),
                f(r.rhs),
                f(r.ratio),
            ]);
            out.checks.push(r);
        }
    }
    let worst = out.checks.iter().map(|r| r.ratio).fold(0.0, f64::max);
    out.summary.insert("max_ratio".into(), json!(worst));
    out.tables.push(t);
    Ok(out)
}

fn transfer(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = cfg.family()?;
    let c = cfg.constant("c_transfer");
    let mut out = Outcome::default();
    let mut t = Table::new("transfer", &["m", "name", "n", "lhs", "rhs", "ratio"]);
    for &m in &cfg.moduli {
        if m < 4 {
            return Err(CliError::Config(format!("transfer needs m >= 4, got {m}")));
        }
        check_lengths(
            cfg,
            m,
            |n| n >= 2 && n <= m / 2,
            "transfer (need 2 <= N <= m/2)",
        )?;
        let pair = make_spectral_pair(table_for(cfg, family, &Modulus::new(m)?)?);
        let eval = DeltaEvaluator::for_pair(&pair);
        let grid = if cfg.interval.lengths.is_empty() {
            dyadic_grid(2, m / 2)
        } else {
            cfg.interval.lengths.clone()
        };
        let mut reports = Vec::new();
        for n in grid {
            reports.push(transfer_ratio_with(&pair, &eval, n, c)?);
        }
        reports.push(delta_transfer_ratio(&pair, c)?);
        let mut dual = delta_transfer_ratio(&pair.dual(), c)?;
        dual.name = "delta_transfer_dual".into();
        reports.push(dual);
        for r in reports {
            let n = r.witness.get("n").cloned().unwrap_or(Value::Null);
            t.push(vec![
                m.to_string(),
                r.name.clone(),
                n.to_string(),
                f(r.lhs),
                f(r.rhs),
                f(r.ratio),
            ]);
            out.checks.push(r);
        }
    }
    out.tables.push(t);
    Ok(out)
}

fn weyl(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let poly = Poly::new(cfg.function.poly.clone());
    let mut out = Outcome::default();
    let mut t = Table::new("weyl", &["m", "h", "lhs", "rhs", "ratio"]);
    for &m in &cfg.moduli {
        let md = Modulus::new(m)?;
        check_lengths(cfg, m, |h| h <= m, "weyl (need 1 <= H <= m)")?;
        let hs = if cfg.interval.lengths.is_empty() {
            vec![((m as f64).powf(2.0 / 3.0).ceil() as u64).min(m)]
        } else {
            cfg.interval.lengths.clone()
        };
        for h in hs {
            let r = weyl_bound_ratio(&poly, &md, h)?;
            t.push(vec![
                m.to_string(),
                h.to_string(),
                f(r.lhs),
                f(r.rhs),
                f(r.ratio),
            ]);
            out.checks.push(r);
        }
    }
    out.tables.push(t);
    Ok(out)
}

fn pv(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let mut t = Table::new("pv", &["m", "start", "length", "lhs", "rhs", "ratio"]);
    for &m in &cfg.moduli {
        let md = Modulus::new(m)?;
        check_lengths(cfg, m, |l| l <= m, "pv (need 1 <= |I| <= m)")?;
        let lengths = if cfg.interval.lengths.is_empty() {
            (1..=m).collect()
        } else {
            cfg.interval.lengths.clone()
        };
        let starts = starts(cfg, m);
        for &len in &lengths {
            for &s in &starts {
                let r = check_pv_kernel(&md, Interval::new(s, len))?;
                t.push(vec![
                    m.to_string(),
                    s.to_string(),
                    len.to_string(),
                    f(r.lhs),
                    f(r.rhs),
                    f(r.ratio),
                ]);
                out.checks.push(r);
            }
        }
    }
    out.tables.push(t);
    Ok(out)
}

fn equidist(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = match cfg.function.family.as_str() {
        "birch" => EquidistFamily::Birch,
        "kloosterman" => EquidistFamily::Kloosterman,
        _ => EquidistFamily::InverseFractional,
    };
    let mut out = Outcome::default();
    let mut reports = Vec::new();
    let mut ks = Vec::new();
    for &p in &cfg.moduli {
        let md = Modulus::prime(p)?;
        let interval = match cfg.interval.lengths.first() {
            Some(&l) if l <= p => Interval::new(cfg.interval.start, l),
            Some(&l) => return Err(CliError::Config(format!("length {l} exceeds p = {p}"))),
            None => Interval::new(0, p),
        };
        let r = equidist_report(family, &md, interval, cfg.max_test, &cfg.tails)?;
        ks.push(r.ks_distance);
        if family != EquidistFamily::InverseFractional {
            let (table, af) = if family == EquidistFamily::Birch {
                (table_for(cfg, Family::Birch, &md)?, AngleFamily::Birch)
            } else {
                (kloosterman_all(1, &md)?, AngleFamily::Kloosterman)
            };
            let sample = restrict(&extract_angles(&table, af)?, &md, interval);
            let mut t = Table::new(
                format!("equidist-hist-p{p}"),
                &["bin_left", "bin_right", "count", "satotate_mass"],
            );
            for b in angle_histogram(&sample, cfg.bins) {
                t.push(vec![
                    f(b.bin_left),
                    f(b.bin_right),
                    b.count.to_string(),
                    f(b.satotate_mass),
                ]);
            }
            out.tables.push(t);
        }
        reports.push(r);
    }
    let decreasing = ks.windows(2).all(|w| w[1] < w[0]);
    out.summary
        .insert("reports".into(), serde_json::to_value(&reports)?);
    out.summary.insert("ks_distances".into(), json!(ks));
    out.summary
        .insert("ks_decreasing".into(), json!(decreasing));
    Ok(out)
}

fn birch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let slack = cfg.constant("tail_slack");
    let mut out = Outcome::default();
    let mut intervals = Table::new(
        "birch-intervals",
        &[
            "p",
            "start",
            "length",
            "moment1_abs_rel",
            "moment2_rel_dev",
            "t",
            "above",
            "below",
            "tail_freq",
            "tail_floor",
        ],
    );
    for &p in &cfg.moduli {
        let md = Modulus::prime(p)?;
        let b = table_for(cfg, Family::Birch, &md)?;
        out.checks.push(psi_hat_identity_check_with(&b)?);
        let (_, full2) = birch_moments(&b, Interval::new(0, p))?;
        out.checks.push(BoundReport::new(
            "birch_moment2_full",
            (full2 - p as f64).abs(),
            1e-4,
            Some(1.0),
            witness([("p", p.into()), ("moment2", full2.into())]),
        ));
        let mut values = Table::new(format!("birch-p{p}"), &["n", "re", "im"]);
        for (n, v) in b.values().iter().enumerate() {
            values.push(vec![n.to_string(), f(v.re), f(v.im)]);
        }
        out.tables.push(values);

        check_lengths(cfg, p, |l| l <= p, "birch (need |I| <= p)")?;
        let lengths = if cfg.interval.lengths.is_empty() {
            vec![(p as f64).powf(0.49).ceil() as u64]
        } else {
            cfg.interval.lengths.clone()
        };
        for &len in &lengths {
            for s in starts(cfg, p) {
                let i = Interval::new(s, len);
                let (m1, m2) = birch_moments(&b, i)?;
                let r1 = m1.norm() / len as f64;
                let r2 = (m2 / len as f64 - 1.0).abs();
                for &t in &cfg.tails {
                    let c = birch_tail_counts(&b, i, t)?;
                    let freq = c.above.min(c.below) as f64 / len as f64;
                    let floor = tail_frequency_floor(t) - slack;
                    intervals.push(vec![
                        p.to_string(),
                        s.to_string(),
                        len.to_string(),
                        f(r1),
                        f(r2),
                        format!("{t}"),
                        c.above.to_string(),
                        c.below.to_string(),
                        f(freq),
                        f(floor),
                    ]);
                }
            }
        }
    }
    out.tables.push(intervals);
    Ok(out)
}

fn mellin(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = cfg.family()?;
    let conductor = cfg.conductor.as_ref().map(|c| c.value);
    let mut out = Outcome::default();
    let mut progressions = Table::new(
        "mellin-progressions",
        &["p", "start", "length", "abs_sum", "bound"],
    );
    for &p in &cfg.moduli {
        let md = Modulus::prime(p)?;
        let tau = table_for(cfg, family, &md)?;
        let dlog = build_dlog(&md, primitive_root(&md)?)?;
        let report = mellin_sup_check(&tau, &dlog, conductor, family.kummer_free())?;
        out.checks.push(report);
        let hat = tracekit::mellin::mellin_all(&tau, &dlog)?;
        let mut t = Table::new(format!("mellin-p{p}"), &["j", "re", "im", "abs"]);
        for (j, v) in hat.values().iter().enumerate() {
            t.push(vec![j.to_string(), f(v.re), f(v.im), f(v.norm())]);
        }
        out.tables.push(t);
        check_lengths(cfg, p, |l| l < p, "mellin (need |I| <= p - 1)")?;
        for &len in &cfg.interval.lengths {
            for s in starts(cfg, p - 1) {
                let sum: Complex64 =
                    geometric_progression_sum(&tau, &dlog, 1, Interval::new(s, len))?;
                let bound = conductor.map(|c| geometric_progression_bound(c, p, len));
                progressions.push(vec![
                    p.to_string(),
                    s.to_string(),
                    len.to_string(),
                    f(sum.norm()),
                    bound.map(f).unwrap_or_default(),
                ]);
            }
        }
    }
    if !progressions.rows.is_empty() {
        out.tables.push(progressions);
    }
    out.summary
        .insert("kummer_free".into(), json!(family.kummer_free()));
    Ok(out)
}
