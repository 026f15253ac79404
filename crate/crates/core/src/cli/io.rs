//! Text formats for tensors and forms.
//!
//! Tensor file:
//!
//! ```text
//! curvop-tensor v1
//! n 2
//! r 1
//! # j k lambda mu re im
//! 1 1 1 1 2 0
//! ```
//!
//! Form file:
//!
//! ```text
//! curvop-form v1
//! n 2
//! r 1
//! bidegree 1 0
//! fiber E
//! # J K lambda re im
//! {1} {} 1 0.5 -1
//! ```
//!
//! Blank lines and `#` comments are ignored. Header lines come first, in any
//! order; unlisted records are zero. Index lists are written without spaces.
//! Numbers are emitted in shortest round-trip form, so `parse(emit(x)) == x`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::curvature::DEFAULT_SYMMETRY_TOL;
use crate::{BundleForm, CurvatureTensor, Error, Fiber, FormSpace, MultiIndex, Result, SymmetryMode, C64};

pub const TENSOR_MAGIC: &str = "curvop-tensor v1";
pub const FORM_MAGIC: &str = "curvop-form v1";

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("{what}: expected a non-negative integer, found {tok:?}")))
}

fn parse_f64(line: usize, tok: &str, what: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("{what}: expected a number, found {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what}: {tok} is not finite")));
    }
    Ok(v)
}

/// Consumes the magic line and the header lines (`key value...`) that precede the records.
fn read_header<'a, I>(it: &mut std::iter::Peekable<I>, magic: &str, keys: &[&str]) -> Result<Vec<(String, Vec<String>, usize)>>
where
    I: Iterator<Item = Line<'a>>,
{
    let first = it
        .next()
        .ok_or_else(|| Error::Invalid(format!("empty input, expected {magic:?}")))?;
    if first.tokens.join(" ") != magic {
        return Err(parse_err(first.number, format!("expected header {magic:?}")));
    }
    let mut out: Vec<(String, Vec<String>, usize)> = Vec::new();
    while let Some(line) = it.peek() {
        let key = line.tokens[0];
        if !keys.contains(&key) {
            break;
        }
        if out.iter().any(|(k, _, _)| k == key) {
            return Err(parse_err(line.number, format!("repeated header {key:?}")));
        }
        out.push((
            key.to_string(),
            line.tokens[1..].iter().map(|s| s.to_string()).collect(),
            line.number,
        ));
        it.next();
    }
    Ok(out)
}

fn header_usize(h: &[(String, Vec<String>, usize)], key: &str) -> Result<usize> {
    let (_, vals, line) = h
        .iter()
        .find(|(k, _, _)| k == key)
        .ok_or_else(|| Error::Invalid(format!("missing header {key:?}")))?;
    if vals.len() != 1 {
        return Err(parse_err(*line, format!("{key}: expected one value")));
    }
    let v = parse_usize(*line, &vals[0], key)?;
    if v == 0 {
        return Err(parse_err(*line, format!("{key} must be at least 1")));
    }
    Ok(v)
}

/// Parses a tensor file and validates Hermitian symmetry.
pub fn parse_tensor(text: &str, mode: SymmetryMode) -> Result<CurvatureTensor> {
    let mut it = lines(text).peekable();
    let header = read_header(&mut it, TENSOR_MAGIC, &["n", "r"])?;
    let n = header_usize(&header, "n")?;
    let r = header_usize(&header, "r")?;
    let mut c = CurvatureTensor::zeros(n, r);
    let mut seen = HashSet::new();
    for line in it {
        let t = &line.tokens;
        if t.len() != 6 {
            return Err(parse_err(
                line.number,
                format!("expected `j k lambda mu re im`, found {} fields", t.len()),
            ));
        }
        let j = parse_usize(line.number, t[0], "j")?;
        let k = parse_usize(line.number, t[1], "k")?;
        let l = parse_usize(line.number, t[2], "lambda")?;
        let m = parse_usize(line.number, t[3], "mu")?;
        let quad = (j, k, l, m);
        let ok = |x: usize, hi: usize| (1..=hi).contains(&x);
        if !(ok(j, n) && ok(k, n) && ok(l, r) && ok(m, r)) {
            return Err(parse_err(
                line.number,
                format!("(j,k,λ,μ) = {quad:?} out of range for n = {n}, r = {r}"),
            ));
        }
        if !seen.insert(quad) {
            return Err(Error::DuplicateEntry(quad));
        }
        let re = parse_f64(line.number, t[4], "re")?;
        let im = parse_f64(line.number, t[5], "im")?;
        c.set(j, k, l, m, C64::new(re, im))?;
    }
    c.validate(DEFAULT_SYMMETRY_TOL, mode)
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn read_tensor_file(path: &Path, mode: SymmetryMode) -> Result<CurvatureTensor> {
    let text = read_text(path)?;
    parse_tensor(&text, mode)
}

/// Tensor file with every nonzero entry, in `(j, k, λ, μ)` order.
pub fn emit_tensor(c: &CurvatureTensor) -> String {
    let mut s = format!("{TENSOR_MAGIC}\nn {}\nr {}\n# j k lambda mu re im\n", c.n(), c.rank());
    for j in 1..=c.n() {
        for k in 1..=c.n() {
            for l in 1..=c.rank() {
                for m in 1..=c.rank() {
                    let z = c.get(j, k, l, m);
                    if z != C64::new(0.0, 0.0) {
                        writeln!(s, "{j} {k} {l} {m} {:?} {:?}", z.re, z.im).expect("string write");
                    }
                }
            }
        }
    }
    s
}

fn parse_index_list(line: usize, tok: &str, n: usize) -> Result<MultiIndex> {
    let inner = tok
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| parse_err(line, format!("expected an index list like {{1,3}}, found {tok:?}")))?;
    let entries = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|e| parse_usize(line, e, "index"))
            .collect::<Result<Vec<_>>>()?
    };
    MultiIndex::new(n, entries).map_err(|e| parse_err(line, e.to_string()))
}

fn parse_fiber(line: usize, tok: &str) -> Result<Fiber> {
    match tok {
        "E" => Ok(Fiber::Bundle),
        "E*" => Ok(Fiber::Dual),
        _ => Err(parse_err(line, format!("fiber must be E or E*, found {tok:?}"))),
    }
}

pub fn parse_form(text: &str) -> Result<BundleForm> {
    let mut it = lines(text).peekable();
    let header = read_header(&mut it, FORM_MAGIC, &["n", "r", "bidegree", "fiber"])?;
    let n = header_usize(&header, "n")?;
    let r = header_usize(&header, "r")?;
    let (_, bd, bd_line) = header
        .iter()
        .find(|(k, _, _)| k == "bidegree")
        .ok_or_else(|| Error::Invalid("missing header \"bidegree\"".into()))?;
    if bd.len() != 2 {
        return Err(parse_err(*bd_line, "bidegree: expected `p q`"));
    }
    let p = parse_usize(*bd_line, &bd[0], "p")?;
    let q = parse_usize(*bd_line, &bd[1], "q")?;
    let fiber = match header.iter().find(|(k, _, _)| k == "fiber") {
        Some((_, v, line)) if v.len() == 1 => parse_fiber(*line, &v[0])?,
        Some((_, _, line)) => return Err(parse_err(*line, "fiber: expected one value")),
        None => Fiber::Bundle,
    };
    let space = FormSpace::new(n, r, p, q, fiber).map_err(|e| parse_err(*bd_line, e.to_string()))?;
    let mut u = BundleForm::zeros(space);
    let mut seen = HashSet::new();
    for line in it {
        let t = &line.tokens;
        if t.len() != 5 {
            return Err(parse_err(
                line.number,
                format!("expected `J K lambda re im`, found {} fields", t.len()),
            ));
        }
        let jj = parse_index_list(line.number, t[0], n)?;
        let kk = parse_index_list(line.number, t[1], n)?;
        if jj.degree() != p || kk.degree() != q {
            return Err(parse_err(
                line.number,
                format!("slot {jj} {kk} does not have bidegree ({p},{q})"),
            ));
        }
        let l = parse_usize(line.number, t[2], "lambda")?;
        if !(1..=r).contains(&l) {
            return Err(parse_err(line.number, format!("lambda = {l} out of range 1..={r}")));
        }
        if !seen.insert((jj.clone(), kk.clone(), l)) {
            return Err(parse_err(line.number, format!("duplicate slot {jj} {kk} {l}")));
        }
        let re = parse_f64(line.number, t[3], "re")?;
        let im = parse_f64(line.number, t[4], "im")?;
        u.set(&jj, &kk, l, C64::new(re, im))?;
    }
    Ok(u)
}

pub fn read_form_file(path: &Path) -> Result<BundleForm> {
    let text = read_text(path)?;
    parse_form(&text)
}

/// Form file with every nonzero slot in basis order.
pub fn emit_form(u: &BundleForm) -> String {
    let sp = u.space();
    let mut s = format!(
        "{FORM_MAGIC}\nn {}\nr {}\nbidegree {} {}\nfiber {}\n# J K lambda re im\n",
        sp.n(),
        sp.rank(),
        sp.p(),
        sp.q(),
        sp.fiber()
    );
    for (slot, z) in sp.slots().iter().zip(u.coeffs()) {
        if *z != C64::new(0.0, 0.0) {
            writeln!(s, "{} {} {} {:?} {:?}", slot.holo, slot.anti, slot.fiber, z.re, z.im).expect("string write");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::generators::{random_tensor, RandomMode};
    use proptest::prelude::*;

    #[test]
    fn parses_line_bundle() {
        let c = parse_tensor("curvop-tensor v1\nn 1\nr 1\n1 1 1 1 2.0 0.0\n", SymmetryMode::Strict).unwrap();
        assert_eq!(c.get(1, 1, 1, 1), C64::new(2.0, 0.0));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# fixture\ncurvop-tensor v1\n\nn 1  # dimension\nr 1\n1 1 1 1 -1 0 # entry\n";
        assert_eq!(parse_tensor(text, SymmetryMode::Strict).unwrap().get(1, 1, 1, 1).re, -1.0);
    }

    #[test]
    fn duplicate_names_quadruple() {
        let text = "curvop-tensor v1\nn 1\nr 1\n1 1 1 1 2 0\n1 1 1 1 3 0\n";
        let err = parse_tensor(text, SymmetryMode::Strict).unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry((1, 1, 1, 1))));
        assert!(err.to_string().contains("(1, 1, 1, 1)"));
    }

    #[test]
    fn out_of_range_is_reported_with_line() {
        let text = "curvop-tensor v1\nn 2\nr 1\n3 1 1 1 1 0\n";
        match parse_tensor(text, SymmetryMode::Strict).unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("(3, 1, 1, 1)"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "curvop-tensor v2\nn 1\nr 1\n",
            "curvop-tensor v1\nr 1\n",
            "curvop-tensor v1\nn 0\nr 1\n",
            "curvop-tensor v1\nn 1\nr 1\n1 1 1 1 x 0\n",
            "curvop-tensor v1\nn 1\nr 1\n1 1 1 2 0\n",
            "curvop-tensor v1\nn 1\nr 1\n1 1 1 1 inf 0\n",
            "curvop-tensor v1\nn 1\nn 1\nr 1\n",
        ] {
            assert!(parse_tensor(bad, SymmetryMode::Strict).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn symmetry_violation_and_symmetrize() {
        let text = "curvop-tensor v1\nn 2\nr 1\n1 2 1 1 1 0\n";
        assert!(matches!(
            parse_tensor(text, SymmetryMode::Strict),
            Err(Error::NotHermitian { .. })
        ));
        let c = parse_tensor(text, SymmetryMode::Symmetrize).unwrap();
        assert_eq!(c.get(1, 2, 1, 1), C64::new(0.5, 0.0));
        assert_eq!(c.get(2, 1, 1, 1), C64::new(0.5, 0.0));
    }

    #[test]
    fn form_round_trip_and_errors() {
        let text = "curvop-form v1\nn 3\nr 2\nbidegree 2 1\nfiber E*\n{1,3} {2} 2 0.5 -1\n";
        let u = parse_form(text).unwrap();
        assert_eq!(u.space().fiber(), Fiber::Dual);
        let jj = MultiIndex::new(3, vec![1, 3]).unwrap();
        let kk = MultiIndex::new(3, vec![2]).unwrap();
        assert_eq!(u.get(&jj, &kk, 2).unwrap(), C64::new(0.5, -1.0));
        assert_eq!(parse_form(&emit_form(&u)).unwrap(), u);
        for bad in [
            "curvop-form v1\nn 3\nr 2\nbidegree 2 1\n{1} {2} 1 1 0\n",
            "curvop-form v1\nn 3\nr 2\nbidegree 2 1\n{3,1} {2} 1 1 0\n",
            "curvop-form v1\nn 3\nr 2\nbidegree 2 1\n{1,3} {2} 3 1 0\n",
            "curvop-form v1\nn 3\nr 2\nbidegree 4 1\n",
            "curvop-form v1\nn 3\nr 2\nbidegree 2 1\nfiber F\n",
            "curvop-form v1\nn 3\nr 2\n",
        ] {
            assert!(parse_form(bad).is_err(), "{bad:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn tensor_round_trip_is_exact(n in 1usize..=3, r in 1usize..=3, seed in any::<u64>(), gram in any::<bool>()) {
            let mode = if gram { RandomMode::GramPsd } else { RandomMode::Hermitian };
            let c = random_tensor(n, r, seed, mode).hermitian_part();
            let back = parse_tensor(&emit_tensor(&c), SymmetryMode::Strict).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
