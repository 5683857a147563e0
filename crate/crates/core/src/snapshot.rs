//! Versioned plain-text snapshots of clouds, edge lists and lattice
//! configurations.
//!
//! ```text
//! RCM1 d=2 rho=1.5 seed=7 stream=0 lo=-5,-5 hi=5,5 n=3 palm=1
//! 0.0000000000000000e0 0.0000000000000000e0
//! ...
//! EDGES m=2 kind=polynomial_tail alpha=4 M=- R=- norm=one seed=9 stream=0
//! 0 1
//! ...
//! ```
//!
//! Lattice configurations use a `LATTICE` header, one line of site flags
//! and one bond per line. Floats in headers use the shortest representation
//! that round-trips; coordinates carry 17 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::connection::{ConnectionSpec, EdgeList, EdgeProvenance, Kernel, Norm};
use crate::error::{Error, Result};
use crate::lrp::{pair_counts, LatticeConfig, LatticeParams};
use crate::pointprocess::{PointCloud, Provenance, Region};
use crate::stream::RngStream;

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_snapshot(cloud: &PointCloud, edges: Option<&EdgeList>) -> String {
    let p = cloud.provenance();
    let r = cloud.region();
    let mut out = String::new();
    writeln!(
        out,
        "RCM1 d={} rho={} seed={} stream={} lo={} hi={} n={} palm={}",
        cloud.dim(),
        p.rho,
        p.seed,
        p.stream_id,
        join(r.lo()),
        join(r.hi()),
        cloud.len(),
        cloud.palm_origin() as u8
    )
    .unwrap();
    for x in cloud.points() {
        let line: Vec<String> = x.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    if let Some(e) = edges {
        let prov = e.provenance();
        let (alpha, m, radius) = match prov.spec.kernel() {
            Kernel::PolynomialTail { alpha } => (alpha.to_string(), "-".into(), "-".into()),
            Kernel::Truncated { alpha, radius } => (alpha.to_string(), radius.to_string(), "-".into()),
            Kernel::Blob { radius } => ("-".into(), "-".into(), radius.to_string()),
        };
        writeln!(
            out,
            "EDGES m={} kind={} alpha={} M={} R={} norm={} seed={} stream={}",
            e.len(),
            prov.spec.kernel().name(),
            alpha,
            m,
            radius,
            prov.spec.norm().name(),
            prov.stream.seed,
            prov.stream.stream_id
        )
        .unwrap();
        for (i, j) in e.pairs() {
            writeln!(out, "{i} {j}").unwrap();
        }
    }
    out
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn header<'a>(line: &'a str, tag: &str) -> Result<HashMap<&'a str, &'a str>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(parse_err(format!("expected a {tag} header, got {line:?}")));
    }
    parts
        .map(|kv| kv.split_once('=').ok_or_else(|| parse_err(format!("malformed field {kv:?}"))))
        .collect()
}

fn field<T: std::str::FromStr>(h: &HashMap<&str, &str>, key: &str) -> Result<T> {
    let raw = h.get(key).ok_or_else(|| parse_err(format!("missing field {key}")))?;
    raw.parse().map_err(|_| parse_err(format!("bad value for {key}: {raw:?}")))
}

fn optional(h: &HashMap<&str, &str>, key: &str) -> Result<Option<f64>> {
    match h.get(key) {
        None | Some(&"-") => Ok(None),
        Some(_) => field(h, key).map(Some),
    }
}

fn floats(raw: &str) -> Result<Vec<f64>> {
    raw.split(',').map(|v| v.parse().map_err(|_| parse_err(format!("bad number {v:?}")))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub cloud: PointCloud,
    pub edges: Option<EdgeList>,
}

pub fn read_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    let h = header(lines.next().ok_or_else(|| parse_err("empty snapshot"))?, "RCM1")?;
    let d: usize = field(&h, "d")?;
    let n: usize = field(&h, "n")?;
    let lo = floats(h.get("lo").ok_or_else(|| parse_err("missing lo"))?)?;
    let hi = floats(h.get("hi").ok_or_else(|| parse_err("missing hi"))?)?;
    if lo.len() != d || hi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: lo.len().min(hi.len()) });
    }
    let provenance = Provenance { seed: field(&h, "seed")?, stream_id: field(&h, "stream")?, rho: field(&h, "rho")? };
    let palm = field::<u8>(&h, "palm")? == 1;
    let mut coords = Vec::with_capacity(n * d);
    for k in 0..n {
        let line = lines.next().ok_or_else(|| parse_err(format!("missing point {k}")))?;
        let before = coords.len();
        for v in line.split_whitespace() {
            coords.push(v.parse::<f64>().map_err(|_| parse_err(format!("bad coordinate {v:?}")))?);
        }
        if coords.len() - before != d {
            return Err(parse_err(format!("point {k} has the wrong number of coordinates")));
        }
    }
    let cloud = PointCloud::from_coords(Region::new(lo, hi)?, coords, palm, provenance)?;
    let edges = match lines.next() {
        None => None,
        Some(line) => {
            let h = header(line, "EDGES")?;
            let m: usize = field(&h, "m")?;
            let kind: String = field(&h, "kind")?;
            let alpha = optional(&h, "alpha")?;
            let need = |v: Option<f64>, name: &str| v.ok_or_else(|| parse_err(format!("{kind} needs {name}")));
            let kernel = match kind.as_str() {
                "polynomial_tail" => Kernel::PolynomialTail { alpha: need(alpha, "alpha")? },
                "truncated" => Kernel::Truncated { alpha: need(alpha, "alpha")?, radius: need(optional(&h, "M")?, "M")? },
                "blob" => Kernel::Blob { radius: need(optional(&h, "R")?, "R")? },
                other => return Err(parse_err(format!("unknown kernel {other:?}"))),
            };
            let norm = match h.get("norm").copied() {
                Some("one") => Norm::One,
                Some("two") => Norm::Two,
                other => return Err(parse_err(format!("unknown norm {other:?}"))),
            };
            let spec = ConnectionSpec::new(d, kernel, norm)?;
            let stream = RngStream::new(field(&h, "seed")?, field(&h, "stream")?);
            let mut pairs = Vec::with_capacity(m);
            for k in 0..m {
                let line = lines.next().ok_or_else(|| parse_err(format!("missing edge {k}")))?;
                let (a, b) = line.split_once(' ').ok_or_else(|| parse_err(format!("bad edge line {line:?}")))?;
                let a = a.parse().map_err(|_| parse_err(format!("bad edge line {line:?}")))?;
                let b = b.trim().parse().map_err(|_| parse_err(format!("bad edge line {line:?}")))?;
                pairs.push((a, b));
            }
            let prov = EdgeProvenance { cloud: provenance, spec, stream };
            Some(EdgeList::new(pairs, n, prov)?)
        }
    };
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(parse_err("trailing content after snapshot"));
    }
    Ok(Snapshot { cloud, edges })
}

pub fn write_lattice(config: &LatticeConfig) -> String {
    let p = &config.params;
    let mut out = String::new();
    writeln!(
        out,
        "LATTICE d={} side={} lambda={} mu={} alpha={} kmax={} seed={} stream={} sites={} bonds={}",
        p.dim,
        p.side,
        p.lambda,
        p.mu,
        p.alpha,
        config.k_max,
        config.stream.seed,
        config.stream.stream_id,
        config.vertex_count(),
        config.bonds.len()
    )
    .unwrap();
    out.extend(config.open_sites.iter().map(|&o| if o { '1' } else { '0' }));
    out.push('\n');
    for (a, b) in &config.bonds {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

pub fn read_lattice(text: &str) -> Result<LatticeConfig> {
    let mut lines = text.lines();
    let h = header(lines.next().ok_or_else(|| parse_err("empty snapshot"))?, "LATTICE")?;
    let mut params =
        LatticeParams::new(field(&h, "d")?, field(&h, "side")?, field(&h, "lambda")?, field(&h, "mu")?, field(&h, "alpha")?);
    let k_max: u64 = field(&h, "kmax")?;
    params.k_max = Some(k_max);
    let sites: usize = field(&h, "sites")?;
    let m: usize = field(&h, "bonds")?;
    let flags = lines.next().ok_or_else(|| parse_err("missing site flags"))?;
    let open_sites: Vec<bool> = flags
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(parse_err(format!("bad site flag {c:?}"))),
        })
        .collect::<Result<_>>()?;
    if open_sites.len() != sites || sites != (2 * params.side + 1).pow(params.dim as u32) {
        return Err(parse_err("site count does not match the lattice"));
    }
    let mut bonds = Vec::with_capacity(m);
    for k in 0..m {
        let line = lines.next().ok_or_else(|| parse_err(format!("missing bond {k}")))?;
        let mut it = line.split_whitespace().map(|v| v.parse::<usize>());
        match (it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b))) if a < b && b < sites => bonds.push((a, b)),
            _ => return Err(parse_err(format!("bad bond line {line:?}"))),
        }
    }
    let counts = pair_counts(params.dim, params.side);
    let skipped_mass = counts.range(k_max + 1..).map(|(&k, &n)| n as f64 * params.bond_probability(k)).sum();
    let examined = counts.range(..=k_max).map(|(&k, &n)| (k, n as u64)).collect();
    let stream = RngStream::new(field(&h, "seed")?, field(&h, "stream")?);
    Ok(LatticeConfig { params, k_max, stream, open_sites, bonds, examined, skipped_mass })
}
