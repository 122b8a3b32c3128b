use serde_json::Value;
use wvexp_core::birkhoff::{
    combine, distance, equality_locus, is_unistochastic, locus_cusps, permutation_corners, planar_embedding,
    sample_degenerate_surface, triangle_slack, BistochasticMatrix, PolytopePoint, Verdict,
};
use wvexp_core::hilbert::rotated_pair;
use wvexp_core::reconstruct::{is_irreversible, reconstruct_full, ReconstructionProblem};
use wvexp_core::weakval::{expand, overlap_matrix, weak_value_table, WOperatorSet};
use wvexp_core::{Error, Scalar};

use crate::input;
use crate::output::{cmatrix, fmt, num, object, reals, rmatrix, Document, Table};
use crate::CliError;

/// Largest grid the `sample` command will evaluate.
pub const MAX_SAMPLE_POINTS: usize = 2_000_000;

/// Largest `N` for `corners` and coefficient input.
pub const MAX_CLI_CORNER_N: usize = 5;

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant(what()))
    }
}

pub fn weak_table(operator: &str, basis: &str, theta: f64) -> Result<Document, CliError> {
    let pair = input::basis(basis, theta)?;
    let n = pair.dim();
    let op = input::operator(operator, theta, n)?;
    if op.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: op.dim() }.into());
    }
    let table = weak_value_table(&op, &pair)?;
    let mu = overlap_matrix(&pair);
    let wset = WOperatorSet::new(&pair)?;

    let residual = expand(&table).max_abs_diff(op.matrix());
    let scale = table.values().max_abs().max(1.0);
    invariant(residual <= 1e-10 * scale, || format!("expansion residual {residual:e}"))?;
    let defect = mu.stochastic_defect();
    invariant(defect <= f64::EPS_SUM, || format!("overlap matrix row/column sums off by {defect:e}"))?;

    let w: Vec<Value> =
        (0..n).map(|l| Value::Array((0..n).map(|j| cmatrix(wset.get(l, j))).collect())).collect();
    let json = object([
        ("command", "weak-table".into()),
        ("operator", operator.into()),
        ("basis", basis.into()),
        ("theta", num(theta)),
        ("dim", n.into()),
        ("weak_values", cmatrix(table.values())),
        ("mu", rmatrix(mu.matrix())),
        ("w_operators", Value::Array(w)),
        ("expansion_residual", num(residual)),
    ]);
    let mut csv = Table::new(["l", "j", "weak_re", "weak_im", "mu"]);
    for l in 0..n {
        for j in 0..n {
            let z = table.get(l, j);
            csv.push(vec![(l + 1).to_string(), (j + 1).to_string(), fmt(z.re), fmt(z.im), fmt(mu.get(l, j))]);
        }
    }
    Ok(Document { json, table: csv })
}

pub fn reconstruct(tau: &[f64], theta: f64, dim: usize) -> Result<Document, CliError> {
    let pair = rotated_pair(dim, theta)?;
    let irr = is_irreversible(&pair);
    let problem = ReconstructionProblem::new(pair, tau.to_vec())?;
    let sol = reconstruct_full(&problem)?;
    invariant(sol.residual <= 1e-8, || format!("reconstruction residual {:e}", sol.residual))?;

    let json = object([
        ("command", "reconstruct".into()),
        ("theta", num(theta)),
        ("dim", dim.into()),
        ("tau", reals(tau)),
        ("rho_psi", reals(&sol.rho_psi)),
        ("rho_phi_offdiag", cmatrix(&sol.rho_phi_offdiag)),
        ("det_mu", num(sol.det)),
        ("rcond", num(sol.rcond)),
        ("condition_number", num(1.0 / sol.rcond)),
        ("residual", num(sol.residual)),
        ("irreversible", irr.irreversible.into()),
        ("physical", sol.physical.into()),
    ]);
    let mut csv = Table::new(["kind", "k", "l", "value_re", "value_im"]);
    for (k, &r) in sol.rho_psi.iter().enumerate() {
        csv.push(vec!["rho_psi".into(), (k + 1).to_string(), (k + 1).to_string(), fmt(r), fmt(0.0)]);
    }
    for k in 0..dim {
        for l in (0..dim).filter(|&l| l != k) {
            let z = sol.rho_phi_offdiag[(k, l)];
            csv.push(vec!["rho_phi".into(), (k + 1).to_string(), (l + 1).to_string(), fmt(z.re), fmt(z.im)]);
        }
    }
    Ok(Document { json, table: csv })
}

fn corner_count_dim(len: usize) -> Option<usize> {
    (1..=MAX_CLI_CORNER_N).find(|&n| (1..=n).product::<usize>() == len)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

pub enum MatrixSource {
    Coefficients(Vec<f64>),
    File(std::path::PathBuf),
}

pub fn classify(source: &MatrixSource) -> Result<Document, CliError> {
    let raw = match source {
        MatrixSource::Coefficients(c) => {
            let n = corner_count_dim(c.len()).ok_or_else(|| {
                CliError::Input(format!("{} coefficients; expected N! for N up to {MAX_CLI_CORNER_N}", c.len()))
            })?;
            combine(&PolytopePoint::new(c.clone())?, &permutation_corners(n)?)?.matrix().clone()
        }
        MatrixSource::File(path) => input::real_matrix_file(path)?,
    };
    let det = raw.det();
    let bistochastic = BistochasticMatrix::new(raw.clone());
    let mut csv = Table::new(["bistochastic", "unistochastic", "det", "irreversible", "slack"]);
    let json = match &bistochastic {
        Err(Error::NotBistochastic(why)) => {
            csv.push(vec!["false".into(), String::new(), fmt(det), String::new(), String::new()]);
            object([
                ("command", "birkhoff classify".into()),
                ("dim", raw.nrows().into()),
                ("matrix", rmatrix(&raw)),
                ("bistochastic", false.into()),
                ("reason", why.as_str().into()),
                ("det", num(det)),
            ])
        }
        Err(e) => return Err(e.clone().into()),
        Ok(mu) => {
            let cert = is_unistochastic(mu);
            if let Some(g) = &cert.realizing_unitary {
                let moduli = g.map(|z| z.norm_sqr()).max_abs_diff(mu.matrix());
                invariant(g.unitarity_defect() <= 1e-9 && moduli <= 1e-9, || "realizing unitary failed its check".into())?;
            }
            let slack = cert.chain_links.map(triangle_slack);
            csv.push(vec![
                "true".into(),
                verdict_str(cert.verdict).into(),
                fmt(det),
                mu.is_degenerate().to_string(),
                slack.map(fmt).unwrap_or_default(),
            ]);
            object([
                ("command", "birkhoff classify".into()),
                ("dim", mu.dim().into()),
                ("matrix", rmatrix(mu.matrix())),
                ("bistochastic", true.into()),
                ("unistochastic", verdict_str(cert.verdict).into()),
                ("chain_links", cert.chain_links.map_or(Value::Null, |l| reals(&l))),
                ("slack", slack.map_or(Value::Null, num)),
                ("det", num(det)),
                ("irreversible", mu.is_degenerate().into()),
                ("realizing_unitary", cert.realizing_unitary.as_ref().map_or(Value::Null, cmatrix)),
            ])
        }
    };
    Ok(Document { json, table: csv })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SampleFilter {
    All,
    Degenerate,
    Intersection,
}

pub fn sample(corners: &[usize], resolution: usize, filter: SampleFilter) -> Result<Document, CliError> {
    // Grid size is C(resolution + k - 1, k - 1).
    let parts = corners.len().clamp(1, 4);
    let total = (1..parts).fold(1usize, |acc, i| acc * (resolution + i) / i);
    if total > MAX_SAMPLE_POINTS {
        return Err(CliError::Input(format!(
            "{total} grid points exceeds the limit of {MAX_SAMPLE_POINTS}; lower --resolution or use fewer corners"
        )));
    }
    let samples = sample_degenerate_surface::<f64>(corners, resolution)?;
    let keep = |s: &&wvexp_core::SurfaceSample<f64>| match filter {
        SampleFilter::All => true,
        SampleFilter::Degenerate => s.near_degenerate,
        SampleFilter::Intersection => s.near_degenerate && s.unistochastic,
    };
    let k = corners.len();
    let mut headers: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    headers.extend((0..3).flat_map(|i| (0..3).map(move |j| format!("m{i}{j}"))));
    headers.extend(["det", "slack", "unistochastic", "near_degenerate"].map(String::from));
    let mut csv = Table::new(headers);
    let mut points = Vec::new();
    for s in samples.iter().filter(keep) {
        let mut row: Vec<String> = s.point.coefficients().iter().map(|&x| fmt(x)).collect();
        row.extend(s.matrix.matrix().as_slice().iter().map(|&x| fmt(x)));
        row.extend([fmt(s.det), fmt(s.slack), s.unistochastic.to_string(), s.near_degenerate.to_string()]);
        csv.push(row);
        points.push(object([
            ("coefficients", reals(s.point.coefficients())),
            ("det", num(s.det)),
            ("slack", num(s.slack)),
            ("unistochastic", s.unistochastic.into()),
            ("near_degenerate", s.near_degenerate.into()),
            ("matrix", rmatrix(s.matrix.matrix())),
        ]));
    }
    let json = object([
        ("command", "birkhoff sample".into()),
        ("corners", corners.iter().map(|&c| Value::from(c)).collect()),
        ("resolution", resolution.into()),
        ("delta_surface", num(0.5 / resolution as f64)),
        ("filter", format!("{filter:?}").to_lowercase().into()),
        ("grid_points", samples.len().into()),
        ("count", points.len().into()),
        ("points", Value::Array(points)),
    ]);
    Ok(Document { json, table: csv })
}

pub fn hypocycloid(triangle: [usize; 3], resolution: usize) -> Result<Document, CliError> {
    let locus = equality_locus::<f64>(triangle, resolution)?;
    let third = 1.0 / 3.0;
    let (cx, cy) = planar_embedding(&PolytopePoint::new(vec![third, third, 1.0 - 2.0 * third])?);
    // Order the polyline by angle around the centroid, then by radius.
    let mut ordered: Vec<(f64, f64, f64, f64, &PolytopePoint<f64>)> = locus
        .iter()
        .map(|p| {
            let (x, y) = planar_embedding(p);
            ((y - cy).atan2(x - cx), (x - cx).hypot(y - cy), x, y, p)
        })
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let entry = |p: &PolytopePoint<f64>| {
        let (x, y) = planar_embedding(p);
        object([("coefficients", reals(p.coefficients())), ("x", num(x)), ("y", num(y))])
    };
    let cusps: Vec<Value> = locus_cusps(&locus, 3).iter().map(entry).collect();
    let mut csv = Table::new(["p0", "p1", "p2", "x", "y"]);
    for &(_, _, x, y, p) in &ordered {
        let c = p.coefficients();
        csv.push(vec![fmt(c[0]), fmt(c[1]), fmt(c[2]), fmt(x), fmt(y)]);
    }
    let json = object([
        ("command", "birkhoff hypocycloid".into()),
        ("triangle", triangle.iter().map(|&c| Value::from(c)).collect()),
        ("resolution", resolution.into()),
        ("band", num(2.0 / resolution as f64)),
        ("cusps", Value::Array(cusps)),
        ("count", ordered.len().into()),
        ("points", Value::Array(ordered.iter().map(|t| entry(t.4)).collect())),
    ]);
    Ok(Document { json, table: csv })
}

pub fn corners(n: usize) -> Result<Document, CliError> {
    if n == 0 || n > MAX_CLI_CORNER_N {
        return Err(CliError::Input(format!("--n must be between 1 and {MAX_CLI_CORNER_N}")));
    }
    let list = permutation_corners(n)?;
    let mats: Vec<BistochasticMatrix<f64>> = list.iter().map(|p| p.to_bistochastic()).collect();
    let k = mats.len();
    let mut d = wvexp_core::RMatrix::zeros(k, k);
    let mut csv = Table::new(["i", "j", "distance"]);
    // Distances between 0/1 matrices are square roots of even integers; group on that.
    let mut census: std::collections::BTreeMap<u64, usize> = Default::default();
    for i in 0..k {
        for j in 0..k {
            d[(i, j)] = distance(&mats[i], &mats[j])?;
            if i < j {
                csv.push(vec![i.to_string(), j.to_string(), fmt(d[(i, j)])]);
                *census.entry((d[(i, j)] * d[(i, j)]).round() as u64).or_default() += 1;
            }
        }
    }
    let corners_json: Vec<Value> = list
        .iter()
        .enumerate()
        .map(|(i, p)| {
            object([
                ("index", i.into()),
                ("permutation", p.perm().iter().map(|&x| Value::from(x)).collect()),
                ("matrix", rmatrix(&p.to_matrix())),
            ])
        })
        .collect();
    let census_json: Vec<Value> = census
        .iter()
        .map(|(&sq, &count)| object([("distance", num((sq as f64).sqrt())), ("squared", sq.into()), ("count", count.into())]))
        .collect();
    let json = object([
        ("command", "birkhoff corners".into()),
        ("n", n.into()),
        ("corners", Value::Array(corners_json)),
        ("distances", rmatrix(&d)),
        ("edge_lengths", Value::Array(census_json)),
    ]);
    Ok(Document { json, table: csv })
}
