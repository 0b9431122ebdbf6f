use std::str::FromStr;

use helix_steiner::helix::{self, PointKind, SubsequenceSpec};
use helix_steiner::optimize::{self, MinimizeOptions, ScanAxis, ScanQuantity, SearchBox};
use helix_steiner::oracle::{self, OracleOptions};
use helix_steiner::stability::{self, PChainSpec, TSumRange};
use helix_steiner::{srf, Error, HelixParams, Point3};
use serde::{Serialize, Serializer};

use crate::output::{fmt_f64, fmt_opt, json_report, Csv};
use crate::{
    CompareArgs, Failure, Format, HelixArgs, MinimizeArgs, OracleArgs, PointsArgs, ScanArgs,
    SrfArgs, StabilityArgs,
};

type CmdResult = Result<String, Failure>;

/// `lo:hi:steps` with inclusive endpoints, or a single fixed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg(pub ScanAxis);

impl FromStr for RangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let axis = match parts.as_slice() {
            [v] => ScanAxis::fixed(num(v)?),
            [lo, hi, steps] => {
                let steps = steps
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| format!("'{steps}': {e}"))?;
                ScanAxis::new(num(lo)?, num(hi)?, steps).map_err(|e| e.to_string())?
            }
            _ => return Err(format!("expected lo:hi:steps or a value, got '{s}'")),
        };
        Ok(Self(axis))
    }
}

impl Serialize for RangeArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl HelixArgs {
    pub fn params(&self) -> Result<HelixParams, Failure> {
        let (w, a, _) = optimize::closed_form_minimum();
        Ok(HelixParams::new(
            self.omega.unwrap_or(w),
            self.alpha.unwrap_or(a),
        )?)
    }

    /// Input echo with defaults filled in.
    fn resolved(&self) -> (f64, f64) {
        let (w, a, _) = optimize::closed_form_minimum();
        (self.omega.unwrap_or(w), self.alpha.unwrap_or(a))
    }
}

#[derive(Serialize)]
struct Echo<'a, T: Serialize> {
    omega: f64,
    alpha: f64,
    #[serde(flatten)]
    args: &'a T,
}

fn echo<'a, T: Serialize>(helix: &HelixArgs, args: &'a T) -> Echo<'a, T> {
    let (omega, alpha) = helix.resolved();
    Echo { omega, alpha, args }
}

pub fn points(a: &PointsArgs) -> CmdResult {
    let params = a.helix.params()?;
    let mut csv = Csv::new(&["kind", "subsequence_start", "index", "x", "y", "z"]);
    let mut push = |kind: &str, start: usize, index: usize, p: Point3| {
        csv.row([
            kind.to_string(),
            start.to_string(),
            index.to_string(),
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.z),
        ]);
    };
    for j in 0..a.m {
        let sub = SubsequenceSpec::new(PointKind::Input, j, a.m, a.n)?;
        for i in sub.indices() {
            push("P", j, i, helix::input_point(i, params));
        }
    }
    if a.include_steiner {
        let radius = helix::inner_radius(params, a.m)?;
        for k in 1..=a.m {
            let sub = SubsequenceSpec::new(PointKind::Steiner, k, a.m, a.n)?;
            for i in sub.indices() {
                push("S", k, i, helix::helix_point(radius, i, params));
            }
        }
    }
    Ok(csv.finish())
}

#[derive(Serialize)]
struct PerM {
    m: usize,
    rho_m: Option<f64>,
    spanning_per_point: f64,
    steiner_per_point: Option<f64>,
    cos_theta: f64,
    full_tree_feasible: bool,
}

#[derive(Serialize)]
struct SrfReport {
    srf: srf::SrfValue,
    per_m: Vec<PerM>,
}

pub fn srf(a: &SrfArgs) -> CmdResult {
    let params = a.helix.params()?;
    let value = srf::srf(params, a.m_max)?;
    let (omega, alpha) = a.helix.resolved();
    match a.format {
        Format::Json => {
            let per_m = (1..=a.m_max)
                .map(|m| PerM {
                    m,
                    rho_m: srf::rho_m(m, params).ok(),
                    spanning_per_point: srf::spanning_length_per_point(m, params),
                    steiner_per_point: srf::steiner_length_per_point(m, params).ok(),
                    cos_theta: srf::cos_theta_m(m, params),
                    full_tree_feasible: srf::full_tree_feasible(m, params),
                })
                .collect();
            Ok(json_report(
                "srf",
                &echo(&a.helix, a),
                &SrfReport { srf: value, per_m },
            ))
        }
        Format::Csv => {
            let mut csv = Csv::new(&[
                "omega",
                "alpha",
                "m_max",
                "value",
                "m_star",
                "feasible_m1",
                "at_cutoff",
            ]);
            csv.row([
                fmt_f64(omega),
                fmt_f64(alpha),
                a.m_max.to_string(),
                fmt_f64(value.value),
                value.m_star.to_string(),
                value.feasible_m1.to_string(),
                value.at_cutoff.to_string(),
            ]);
            Ok(csv.finish())
        }
    }
}

pub fn minimize(a: &MinimizeArgs) -> CmdResult {
    let d = SearchBox::default();
    let search = SearchBox {
        omega_lo: a.omega_lo.unwrap_or(d.omega_lo),
        omega_hi: a.omega_hi.unwrap_or(d.omega_hi),
        alpha_lo: a.alpha_lo.unwrap_or(d.alpha_lo),
        alpha_hi: a.alpha_hi.unwrap_or(d.alpha_hi),
    };
    let opts = MinimizeOptions {
        m_max: a.m_max,
        tol: a.tol,
        restarts: a.restarts,
        seed: a.seed,
        grid: a.grid,
        ..MinimizeOptions::default()
    };
    let res = optimize::minimize_srf(&search, &opts)?;
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Input<'a> {
                search_box: SearchBox,
                #[serde(flatten)]
                args: &'a MinimizeArgs,
            }
            Ok(json_report(
                "minimize",
                &Input {
                    search_box: search,
                    args: a,
                },
                &res,
            ))
        }
        Format::Csv => {
            let mut csv = Csv::new(&[
                "run",
                "start_omega",
                "start_alpha",
                "omega",
                "alpha",
                "rho",
                "evaluations",
                "converged",
            ]);
            for (i, m) in res.local_minima.iter().enumerate() {
                csv.row([
                    i.to_string(),
                    fmt_f64(m.start_omega),
                    fmt_f64(m.start_alpha),
                    fmt_f64(m.omega),
                    fmt_f64(m.alpha),
                    fmt_f64(m.rho),
                    m.evaluations.to_string(),
                    m.converged.to_string(),
                ]);
            }
            Ok(csv.finish())
        }
    }
}

pub fn scan(a: &ScanArgs) -> CmdResult {
    let quantity =
        ScanQuantity::from_str(&a.quantity).map_err(|e| Failure::invalid(e.to_string()))?;
    let table = optimize::scan_grid(a.omega.0, a.alpha.0, quantity, &a.m)?;
    match a.format {
        Format::Json => Ok(json_report("scan", a, &table)),
        Format::Csv => {
            let mut header = vec!["omega", "alpha"];
            header.extend(table.columns.iter().map(String::as_str));
            let mut csv = Csv::new(&header);
            for row in &table.rows {
                let mut fields = vec![fmt_f64(row.omega), fmt_f64(row.alpha)];
                fields.extend(row.values.iter().map(|v| fmt_opt(*v)));
                csv.row(fields);
            }
            Ok(csv.finish())
        }
    }
}

/// Reads `x,y,z` columns from a CSV with a header row. When a `kind` column is
/// present only `P` rows are kept.
pub fn read_points_csv(text: &str) -> Result<Vec<Point3>, Failure> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Failure::invalid("points file is empty"))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (x, y, z) = match (col("x"), col("y"), col("z")) {
        (Some(x), Some(y), Some(z)) => (x, y, z),
        _ => return Err(Failure::invalid("points file needs x,y,z columns")),
    };
    let kind = col("kind");
    let mut pts = Vec::new();
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if let Some(k) = kind {
            if f.get(k) != Some(&"P") {
                continue;
            }
        }
        let get = |c: usize| -> Result<f64, Failure> {
            f.get(c)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Failure::invalid(format!("points file row {}: bad number", i + 2)))
        };
        pts.push(Point3::new(get(x)?, get(y)?, get(z)?));
    }
    Ok(pts)
}

pub fn oracle(a: &OracleArgs) -> CmdResult {
    let points = match (&a.points_file, a.n) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure {
                code: 1,
                kind: "io",
                message: format!("{}: {e}", path.display()),
            })?;
            read_points_csv(&text)?
        }
        (None, Some(n)) => {
            let params = a.helix.params()?;
            (0..n).map(|j| helix::input_point(j, params)).collect()
        }
        (None, None) => return Err(Failure::invalid("oracle needs --points-file or --n")),
    };
    let opts = OracleOptions {
        n_cap: a.n_cap,
        ..OracleOptions::default()
    };
    let res = oracle::smt(&points, &opts)?;
    #[derive(Serialize)]
    struct Input<'a> {
        terminals: &'a [Point3],
        #[serde(flatten)]
        args: &'a OracleArgs,
    }
    Ok(json_report(
        "oracle",
        &Input {
            terminals: &points,
            args: a,
        },
        &res,
    ))
}

pub fn stability(a: &StabilityArgs) -> CmdResult {
    let params = a.helix.params()?;
    let radius = match a.radius {
        Some(r) => r,
        None => stability::r3_radius(params)?,
    };
    let spec = PChainSpec::new(a.n, a.p, params, radius)?;
    let range = if a.full_sum {
        TSumRange::All
    } else {
        TSumRange::Adjacent
    };
    let report = stability::stationarity_report(&spec, range)?;
    #[derive(Serialize)]
    struct Relaxed {
        relax: helix_steiner::oracle::RelaxReport,
        report: helix_steiner::EquilibriumReport,
        steiner_points: Vec<Point3>,
    }
    let relaxed = if a.relax {
        let (net, relax) = stability::relax_p_chain(&spec, &Default::default());
        Some(Relaxed {
            relax,
            report: stability::diagnose_network(&net)?,
            steiner_points: net.steiner_points,
        })
    } else {
        None
    };
    #[derive(Serialize)]
    struct Out {
        spec: PChainSpec,
        regular_angle_cos: f64,
        helical: helix_steiner::EquilibriumReport,
        relaxed: Option<Relaxed>,
    }
    Ok(json_report(
        "stability",
        &echo(&a.helix, a),
        &Out {
            spec,
            regular_angle_cos: stability::regular_angle_cos(a.p),
            helical: report,
            relaxed,
        },
    ))
}

pub fn compare_p(a: &CompareArgs) -> CmdResult {
    let params = a.helix.params()?;
    let rows = stability::compare_p_lengths(a.n, params, &a.p);
    if rows.iter().all(|r| r.q.is_none()) {
        let p = a.p.first().copied().unwrap_or(0);
        return Err(Error::Infeasible { n: a.n, p }.into());
    }
    match a.format {
        Format::Json => Ok(json_report("compare-p", &echo(&a.helix, a), &rows)),
        Format::Csv => {
            let mut csv = Csv::new(&["p", "q", "length", "converged"]);
            for r in &rows {
                csv.row([
                    r.p.to_string(),
                    r.q.map(|q| q.to_string()).unwrap_or_default(),
                    fmt_opt(r.length),
                    r.converged.to_string(),
                ]);
            }
            Ok(csv.finish())
        }
    }
}
