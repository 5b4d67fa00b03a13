//! Line-oriented text formats for codes, realizations and Markov sequences.
//!
//! Every file starts with `convlab v1` and a field header
//! `field <p> <m> <c0> ... <cm>`. Blank lines and `#` comments are ignored.
//! Matrix literals are `mat <rows> <cols>` followed by one line per row.

use std::fmt::Write as _;

use convlab_core::realize::MarkovSeq;
use convlab_core::{CodeParams, ConvCode, Field, Mat, PolyMat, Realization};

use crate::ParseError;

pub const MAGIC: &str = "convlab v1";

/// A parsed input file.
#[derive(Clone, Debug)]
pub enum Document {
    Code(ConvCode),
    Realization(Realization),
    /// Markov data with the degree inferred from its Hankel ranks.
    Markov { seq: MarkovSeq, params: CodeParams },
}

impl Document {
    pub fn field(&self) -> &Field {
        match self {
            Document::Code(c) => c.field(),
            Document::Realization(r) => r.field(),
            Document::Markov { seq, .. } => seq.field(),
        }
    }

    pub fn params(&self) -> &CodeParams {
        match self {
            Document::Code(c) => c.params(),
            Document::Realization(r) => r.params(),
            Document::Markov { params, .. } => params,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Document::Code(c) => write_code(c),
            Document::Realization(r) => write_realization(r),
            Document::Markov { seq, .. } => write_markov(seq),
        }
    }
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, line)| {
                let body = line.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Lines { lines, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        let line = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ParseError::new(self.last_line(), format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(line)
    }

    /// Next line, which must start with `keyword` followed by `count` numbers.
    fn header(&mut self, keyword: &str, count: usize) -> Result<(usize, Vec<u64>), ParseError> {
        let (no, toks) = self.next(&format!("`{keyword}` line"))?;
        if toks[0] != keyword {
            return Err(ParseError::new(no, format!("expected `{keyword}`, found `{}`", toks[0])));
        }
        if toks.len() != count + 1 {
            return Err(ParseError::new(no, format!("`{keyword}` takes {count} values, found {}", toks.len() - 1)));
        }
        let nums = toks[1..].iter().map(|t| num(no, t)).collect::<Result<_, _>>()?;
        Ok((no, nums))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.lines.get(self.pos) {
            Some((no, toks)) => Err(ParseError::new(*no, format!("trailing content starting with `{}`", toks[0]))),
            None => Ok(()),
        }
    }

    fn matrix(&mut self, f: &Field, rows: usize, cols: usize) -> Result<Mat, ParseError> {
        let (no, dims) = self.header("mat", 2)?;
        if (dims[0] as usize, dims[1] as usize) != (rows, cols) {
            return Err(ParseError::new(
                no,
                format!("expected a {rows}x{cols} matrix, found {}x{}", dims[0], dims[1]),
            ));
        }
        let mut data = Vec::with_capacity(rows * cols);
        if cols > 0 {
            for _ in 0..rows {
                let (no, toks) = self.next("matrix row")?;
                if toks.len() != cols {
                    return Err(ParseError::new(no, format!("expected {cols} entries, found {}", toks.len())));
                }
                for t in toks {
                    data.push(f.parse_elem(t).map_err(|e| ParseError::new(no, e.to_string()))?);
                }
            }
        }
        Mat::from_vec(f, rows, cols, data).map_err(|e| ParseError::new(no, e.to_string()))
    }
}

fn num(line: usize, tok: &str) -> Result<u64, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, format!("expected a nonnegative integer, found `{tok}`")))
}

fn core_err(line: usize) -> impl Fn(convlab_core::Error) -> ParseError {
    move |e| ParseError::new(line, e.to_string())
}

fn parse_field(lines: &mut Lines) -> Result<Field, ParseError> {
    let (no, toks) = lines.next("field header")?;
    if toks[0] != "field" {
        return Err(ParseError::new(no, format!("expected `field`, found `{}`", toks[0])));
    }
    if toks.len() < 3 {
        return Err(ParseError::new(no, "field header needs p, m and the modulus"));
    }
    let p = num(no, toks[1])?;
    let m = num(no, toks[2])?;
    let m = u32::try_from(m).map_err(|_| ParseError::new(no, "extension degree too large"))?;
    let modulus = toks[3..]
        .iter()
        .map(|t| num(no, t).and_then(|v| u32::try_from(v).map_err(|_| ParseError::new(no, "coefficient too large"))))
        .collect::<Result<Vec<u32>, _>>()?;
    Field::with_modulus(p, m, &modulus).map_err(core_err(no))
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut lines = Lines::new(text);
    let (no, toks) = lines.next("`convlab v1`")?;
    if toks.join(" ") != MAGIC {
        return Err(ParseError::new(no, format!("missing `{MAGIC}` magic line")));
    }
    let f = parse_field(&mut lines)?;
    let kind = lines.lines.get(lines.pos).map(|l| l.1[0]);
    let doc = match kind {
        Some("params") => Document::Code(parse_code_body(&mut lines, &f)?),
        Some("real") => Document::Realization(parse_realization_body(&mut lines, &f)?),
        Some("markov") => parse_markov_body(&mut lines, &f)?,
        Some(other) => {
            let no = lines.lines[lines.pos].0;
            return Err(ParseError::new(no, format!("expected `params`, `real` or `markov`, found `{other}`")));
        }
        None => return Err(ParseError::new(lines.last_line(), "no content after field header")),
    };
    lines.finish()?;
    Ok(doc)
}

fn parse_code_body(lines: &mut Lines, f: &Field) -> Result<ConvCode, ParseError> {
    let (pno, pv) = lines.header("params", 3)?;
    let params = CodeParams::new(pv[0] as usize, pv[1] as usize, pv[2] as usize).map_err(core_err(pno))?;
    let (gno, gv) = lines.header("gen", 3)?;
    let (n, k, dmax) = (gv[0] as usize, gv[1] as usize, gv[2] as usize);
    if (n, k) != (params.n, params.k) {
        return Err(ParseError::new(gno, format!("generator is {n}x{k} but params say {}x{}", params.n, params.k)));
    }
    let coeffs = (0..=dmax).map(|_| lines.matrix(f, n, k)).collect::<Result<Vec<_>, _>>()?;
    let g = PolyMat::new(f, n, k, coeffs).map_err(core_err(gno))?;
    ConvCode::with_params(params, g).map_err(core_err(gno))
}

fn parse_realization_body(lines: &mut Lines, f: &Field) -> Result<Realization, ParseError> {
    let (no, v) = lines.header("real", 3)?;
    let (n, k, dl) = (v[0] as usize, v[1] as usize, v[2] as usize);
    if k == 0 || k >= n {
        return Err(ParseError::new(no, format!("need 0 < k < n, found n={n} k={k}")));
    }
    let p = n - k;
    let a = lines.matrix(f, dl, dl)?;
    let b = lines.matrix(f, dl, k)?;
    let c = lines.matrix(f, p, dl)?;
    let d = lines.matrix(f, p, k)?;
    Realization::new(a, b, c, d).map_err(core_err(no))
}

fn parse_markov_body(lines: &mut Lines, f: &Field) -> Result<Document, ParseError> {
    let (no, v) = lines.header("markov", 3)?;
    let (n, k, m) = (v[0] as usize, v[1] as usize, v[2] as usize);
    if k == 0 || k >= n {
        return Err(ParseError::new(no, format!("need 0 < k < n, found n={n} k={k}")));
    }
    let blocks = (0..=m).map(|_| lines.matrix(f, n - k, k)).collect::<Result<Vec<_>, _>>()?;
    let seq = MarkovSeq::new(blocks).map_err(core_err(no))?;
    let params = CodeParams::new(n, k, seq.minimal_degree()).map_err(core_err(no))?;
    Ok(Document::Markov { seq, params })
}

fn write_header(out: &mut String, f: &Field) {
    out.push_str(MAGIC);
    out.push('\n');
    let modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
    writeln!(out, "field {} {} {}", f.p(), f.m(), modulus.join(" ")).unwrap();
}

pub fn write_matrix(out: &mut String, m: &Mat) {
    writeln!(out, "mat {} {}", m.rows(), m.cols()).unwrap();
    if m.cols() == 0 {
        return;
    }
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&e| m.field().format_elem(e)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn write_code(code: &ConvCode) -> String {
    let mut out = String::new();
    write_header(&mut out, code.field());
    let p = code.params();
    writeln!(out, "params {} {} {}", p.n, p.k, p.delta).unwrap();
    let g = code.generator();
    writeln!(out, "gen {} {} {}", p.n, p.k, g.degree()).unwrap();
    for t in 0..=g.degree() {
        write_matrix(&mut out, &g.coeff(t));
    }
    out
}

pub fn write_realization(r: &Realization) -> String {
    let mut out = String::new();
    write_header(&mut out, r.field());
    let p = r.params();
    writeln!(out, "real {} {} {}", p.n, p.k, p.delta).unwrap();
    for m in [r.a(), r.b(), r.c(), r.d()] {
        write_matrix(&mut out, m);
    }
    out
}

pub fn write_markov(seq: &MarkovSeq) -> String {
    let mut out = String::new();
    write_header(&mut out, seq.field());
    writeln!(out, "markov {} {} {}", seq.p() + seq.k(), seq.k(), seq.m()).unwrap();
    for b in seq.blocks() {
        write_matrix(&mut out, b);
    }
    out
}
