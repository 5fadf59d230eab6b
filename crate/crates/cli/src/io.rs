//! File formats.
//!
//! Arrays are CSV with one row per lattice point: the coordinates, then `re`
//! and `im`. An optional first line `# {"axes": [[n, extent], …], "measure": "riemann"}`
//! pins the grid; without it a one-axis grid is inferred from the `x` column,
//! which must start at `-L/2` and be evenly spaced. Profiles and symbols are
//! JSON; exponents are `"inf"`, `"a/b"` or plain numbers.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tfsym_core::exponents::{ExponentProfile, ExtExp, Perm};
use tfsym_core::lattice::{CArray, Grid, Measure};
use tfsym_core::symbols::{SymbolForm, SymbolSpec};
use tfsym_core::C64;

#[derive(Debug)]
pub struct IoError(pub String);

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoError {}

pub type IoResult<T> = Result<T, IoError>;

fn err(msg: impl Into<String>) -> IoError {
    IoError(msg.into())
}

impl From<tfsym_core::Error> for IoError {
    fn from(e: tfsym_core::Error) -> Self {
        IoError(e.to_string())
    }
}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError(e.to_string())
    }
}

impl From<csv::Error> for IoError {
    fn from(e: csv::Error) -> Self {
        IoError(e.to_string())
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError(e.to_string())
    }
}

pub fn parse_measure(s: &str) -> IoResult<Measure> {
    match s {
        "riemann" => Ok(Measure::Riemann),
        "counting" => Ok(Measure::Counting),
        other => Err(err(format!("unknown measure {other:?} (riemann|counting)"))),
    }
}

pub fn measure_name(m: Measure) -> &'static str {
    match m {
        Measure::Riemann => "riemann",
        Measure::Counting => "counting",
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridHeader {
    pub axes: Vec<(usize, f64)>,
    pub measure: String,
}

impl GridHeader {
    pub fn of(grid: &Grid) -> Self {
        GridHeader {
            axes: grid.axes().iter().map(|a| (a.n, a.extent)).collect(),
            measure: measure_name(grid.measure()).into(),
        }
    }

    pub fn grid(&self) -> IoResult<Grid> {
        Ok(Grid::new(&self.axes, parse_measure(&self.measure)?)?)
    }
}

/// Reads an array CSV. Without a header line the file must be one-axis and
/// `measure` applies.
pub fn read_array_str(text: &str, measure: Measure) -> IoResult<CArray> {
    let (header, body) = match text.strip_prefix('#') {
        Some(rest) => {
            let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
            let h: GridHeader = serde_json::from_str(line.trim())?;
            (Some(h), body)
        }
        None => (None, text),
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(body.as_bytes());
    let cols: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let re = cols.iter().position(|c| c == "re").ok_or_else(|| err("missing column `re`"))?;
    let im = cols.iter().position(|c| c == "im");
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut data = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let num = |k: usize| -> IoResult<f64> {
            row.get(k)
                .ok_or_else(|| err(format!("row {}: missing column {k}", line + 2)))?
                .parse::<f64>()
                .map_err(|e| err(format!("row {}: {e}", line + 2)))
        };
        coords.push((0..re).map(num).collect::<IoResult<_>>()?);
        data.push(C64::new(num(re)?, im.map(num).transpose()?.unwrap_or(0.0)));
    }
    let grid = match header {
        Some(h) => h.grid()?,
        None => infer_grid(&coords, measure)?,
    };
    if data.len() != grid.len() {
        return Err(err(format!("{} rows for a grid of {} points", data.len(), grid.len())));
    }
    Ok(CArray::new(grid, data)?)
}

fn infer_grid(coords: &[Vec<f64>], measure: Measure) -> IoResult<Grid> {
    let n = coords.len();
    if n < 2 {
        return Err(err("need at least two samples to infer a grid"));
    }
    if coords.iter().any(|c| c.len() != 1) {
        return Err(err("without a grid header the file needs exactly one coordinate column"));
    }
    let x: Vec<f64> = coords.iter().map(|c| c[0]).collect();
    let h = x[1] - x[0];
    if h <= 0.0 {
        return Err(err("coordinates must increase"));
    }
    let extent = h * n as f64;
    let tol = 1e-9 * extent.max(1.0);
    for (j, v) in x.iter().enumerate() {
        if (v - (-0.5 * extent + j as f64 * h)).abs() > tol {
            return Err(err(format!("x[{j}] = {v} is off the grid starting at -L/2 = {} with step {h}", -0.5 * extent)));
        }
    }
    Ok(Grid::new(&[(n, extent)], measure)?)
}

pub fn read_array(path: &Path, measure: Measure) -> IoResult<CArray> {
    let text = fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    read_array_str(&text, measure).map_err(|e| err(format!("{}: {e}", path.display())))
}

/// Writes the grid header, then `x0..x{r-1},re,im` rows (`x,re,im` for one axis).
pub fn write_array<W: Write>(mut w: W, a: &CArray) -> IoResult<()> {
    writeln!(w, "#{}", serde_json::to_string(&GridHeader::of(a.grid()))?)?;
    let grid = a.grid();
    let r = grid.rank();
    let mut out = csv::Writer::from_writer(w);
    let mut head: Vec<String> = if r == 1 { vec!["x".into()] } else { (0..r).map(|k| format!("x{k}")).collect() };
    head.push("re".into());
    head.push("im".into());
    out.write_record(&head)?;
    for (o, z) in a.data().iter().enumerate() {
        let mut row: Vec<String> = grid.coords(o).iter().map(|c| c.to_string()).collect();
        row.push(z.re.to_string());
        row.push(z.im.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpJson {
    Num(f64),
    Text(String),
}

impl ExpJson {
    pub fn parse(&self) -> IoResult<ExtExp> {
        let s = match self {
            ExpJson::Num(v) if v.is_infinite() => return Ok(ExtExp::INF),
            ExpJson::Num(v) => v.to_string(),
            ExpJson::Text(s) => s.clone(),
        };
        s.parse::<ExtExp>().map_err(|e| err(e.to_string()))
    }

    pub fn of(e: ExtExp) -> Self {
        ExpJson::Text(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub m: usize,
    pub p0: ExpJson,
    pub p: Vec<ExpJson>,
    pub q: Vec<ExpJson>,
    pub q_last: ExpJson,
    pub r0: ExpJson,
    pub r: Vec<ExpJson>,
    pub s: Vec<ExpJson>,
    pub s_last: ExpJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<usize>>,
}

impl ProfileJson {
    pub fn to_profile(&self) -> IoResult<ExponentProfile> {
        let list = |v: &[ExpJson]| v.iter().map(ExpJson::parse).collect::<IoResult<Vec<_>>>();
        let m = self.m;
        let pr = ExponentProfile {
            p0: self.p0.parse()?,
            p: list(&self.p)?,
            q: list(&self.q)?,
            q_last: self.q_last.parse()?,
            r0: self.r0.parse()?,
            r: list(&self.r)?,
            s: list(&self.s)?,
            s_last: self.s_last.parse()?,
            kappa: match &self.kappa {
                Some(v) => Perm::time(v)?,
                None => Perm::identity(m + 1, 0),
            },
            rho: match &self.rho {
                Some(v) => Perm::freq(v)?,
                None => Perm::identity(m + 1, 1),
            },
        };
        if pr.m() != m {
            return Err(err(format!("m = {m} but p has {} entries", pr.m())));
        }
        pr.validate()?;
        Ok(pr)
    }

    pub fn from_profile(pr: &ExponentProfile) -> Self {
        let list = |v: &[ExtExp]| v.iter().copied().map(ExpJson::of).collect();
        ProfileJson {
            m: pr.m(),
            p0: ExpJson::of(pr.p0),
            p: list(&pr.p),
            q: list(&pr.q),
            q_last: ExpJson::of(pr.q_last),
            r0: ExpJson::of(pr.r0),
            r: list(&pr.r),
            s: list(&pr.s),
            s_last: ExpJson::of(pr.s_last),
            kappa: Some(pr.kappa.images().to_vec()),
            rho: Some(pr.rho.images().to_vec()),
        }
    }
}

pub fn read_profile(path: &Path) -> IoResult<ExponentProfile> {
    let text = fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    let pj: ProfileJson = serde_json::from_str(&text).map_err(|e| err(format!("{}: {e}", path.display())))?;
    pj.to_profile()
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolParams {
    /// Points per axis of the space grid.
    pub n: Option<usize>,
    /// Extent of the space axis.
    pub extent: Option<f64>,
    /// Extent of each frequency axis; must equal `n / extent` when given.
    pub xi_extent: Option<f64>,
    pub measure: Option<String>,
    /// `[re, im]` for constant symbols.
    pub c: Option<[f64; 2]>,
    pub decay: Option<f64>,
    /// Array CSV with the samples of a dense or multiplier symbol.
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub m: usize,
    pub form: String,
    #[serde(default)]
    pub params: SymbolParams,
}

/// A symbol together with the symbol grid `(x, ξ₁..ξ_m)` it is evaluated on.
pub struct LoadedSymbol {
    pub spec: SymbolSpec,
    pub grid: Grid,
}

pub fn read_symbol(path: &Path) -> IoResult<LoadedSymbol> {
    let text = fs::read_to_string(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
    let sj: SymbolJson = serde_json::from_str(&text).map_err(|e| err(format!("{}: {e}", path.display())))?;
    symbol_from_json(&sj, path.parent().unwrap_or(Path::new(".")))
}

pub fn symbol_from_json(sj: &SymbolJson, base: &Path) -> IoResult<LoadedSymbol> {
    let p = &sj.params;
    let measure = parse_measure(p.measure.as_deref().unwrap_or("riemann"))?;
    let load_csv = || -> IoResult<CArray> {
        let rel = p.csv.as_ref().ok_or_else(|| err(format!("form {:?} needs params.csv", sj.form)))?;
        read_array(&base.join(rel), measure)
    };
    let (form, grid) = match sj.form.as_str() {
        "dense" => {
            let a = load_csv()?;
            let g = a.grid().clone();
            (SymbolForm::Dense(a), g)
        }
        "multiplier" => {
            let a = load_csv()?;
            let mut axes = vec![a.grid().axis(0).dual()];
            axes.extend_from_slice(a.grid().axes());
            let g = Grid::from_axes(axes, a.grid().measure())?;
            (SymbolForm::Multiplier(a), g)
        }
        other => {
            let n = p.n.ok_or_else(|| err("params.n is required"))?;
            let extent = p.extent.ok_or_else(|| err("params.extent is required"))?;
            let space = Grid::new(&[(n, extent)], measure)?;
            let form = match other {
                "bht" => SymbolForm::Bht,
                "tht" => SymbolForm::Tht,
                "constant" => {
                    let c = p.c.unwrap_or([1.0, 0.0]);
                    SymbolForm::Constant(C64::new(c[0], c[1]))
                }
                "chirp" => SymbolForm::Chirp { decay: p.decay.unwrap_or(0.0) },
                _ => return Err(err(format!("unknown symbol form {other:?}"))),
            };
            (form, tfsym_core::operators::symbol_grid(&space, sj.m)?)
        }
    };
    if let Some(xe) = p.xi_extent {
        let want = grid.axis(1).extent;
        if (xe - want).abs() > 1e-9 * want {
            return Err(err(format!("params.xi_extent = {xe}, but the grid implies {want}")));
        }
    }
    Ok(LoadedSymbol { spec: SymbolSpec::new(sj.m, form)?, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tfsym_core::lattice::make_grid;

    #[test]
    fn array_roundtrip_with_header() {
        let g = make_grid(&[(4, 2.0), (2, 1.0)], Measure::Counting).unwrap();
        let a = CArray::sample(&g, |x| C64::new(x[0], x[1] + 0.25)).unwrap();
        let mut buf = Vec::new();
        write_array(&mut buf, &a).unwrap();
        let back = read_array_str(std::str::from_utf8(&buf).unwrap(), Measure::Riemann).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn infers_one_axis_grid() {
        let text = "x,re,im\n-1,1,0\n-0.5,2,0\n0,3,1\n0.5,4,0\n";
        let a = read_array_str(text, Measure::Riemann).unwrap();
        assert_eq!(a.grid().axis(0).n, 4);
        assert!((a.grid().axis(0).extent - 2.0).abs() < 1e-12);
        assert_eq!(a.data()[2], C64::new(3.0, 1.0));
        // Real-only files are accepted.
        let b = read_array_str("x,re\n-1,1\n0,2\n", Measure::Riemann).unwrap();
        assert_eq!(b.data()[1], C64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_off_grid_start() {
        assert!(read_array_str("x,re\n0,1\n1,2\n", Measure::Riemann).is_err());
        assert!(read_array_str("x,re\n-1,1\n-0.5,1\n0.25,1\n0.5,1\n", Measure::Riemann).is_err());
    }

    #[test]
    fn profile_json() {
        let text = r#"{"m":2,"p0":"5","p":["10/9","10/9"],"q":[2,2],"q_last":2,"r0":1,"r":[2,2],
                       "s":[2,2],"s_last":"2","kappa":[1,0,2]}"#;
        let pj: ProfileJson = serde_json::from_str(text).unwrap();
        let pr = pj.to_profile().unwrap();
        assert_eq!(pr.p[0], "10/9".parse().unwrap());
        assert_eq!(pr.kappa.images(), &[1, 0, 2]);
        assert!(pr.rho.is_identity());
        let again = ProfileJson::from_profile(&pr).to_profile().unwrap();
        assert_eq!(again, pr);
        assert!(ExpJson::Num(1.5).parse().unwrap() == "3/2".parse().unwrap());
    }

    #[test]
    fn symbol_json() {
        let sj: SymbolJson =
            serde_json::from_str(r#"{"m":2,"form":"bht","params":{"n":8,"extent":4,"xi_extent":2}}"#).unwrap();
        let s = symbol_from_json(&sj, Path::new(".")).unwrap();
        assert_eq!(s.grid.rank(), 3);
        assert_eq!(s.spec.name(), "bht");
        let bad: SymbolJson =
            serde_json::from_str(r#"{"m":2,"form":"bht","params":{"n":8,"extent":4,"xi_extent":3}}"#).unwrap();
        assert!(symbol_from_json(&bad, Path::new(".")).is_err());
    }
}
