//! Wire formats. Integers that fit in `i64` are JSON numbers, larger ones
//! decimal strings; rationals are `"p/q"` strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rootfan::fan::Fan;
use rootfan::lattice::{IntMatrix, IntVector};
use rootfan::losev_manin::{CombType, MarkedChain};
use rootfan::rdata::{parse_rational, ChartPoint, ProjectiveRatio, RData};
use rootfan::root_system::{RootSystem, SimpleRootSet};
use rootfan::type_a::{CohomClass, GoodMonomial, SubsetA, TorusDivisor};
use rootfan::{Error, Result};
use serde_json::{json, Value};

fn bad(what: &str, v: &Value) -> Error {
    Error::InvalidInput(format!("expected {what}, got {v}"))
}

pub fn int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn vector(v: &IntVector) -> Value {
    Value::Array(v.0.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows().iter().map(vector).collect())
}

pub fn fan(f: &Fan) -> Value {
    json!({
        "rank": f.rank(),
        "rays": f.rays().iter().map(vector).collect::<Vec<_>>(),
        "max_cones": f.max_cones(),
    })
}

pub fn ratio(t: &ProjectiveRatio) -> Value {
    json!([t.numer().to_string(), t.denom().to_string()])
}

pub fn rdata(r: &RootSystem, d: &RData) -> Value {
    let pairs: Vec<Value> = d
        .positive_roots()
        .iter()
        .zip(d.positive_ratios())
        .map(|(&a, t)| json!({"positive_root": vector(r.root(a)), "ratio": ratio(t)}))
        .collect();
    json!({ "pairs": pairs })
}

pub fn chart_point(r: &RootSystem, p: &ChartPoint) -> Value {
    json!({
        "chart": p.chart.root_indices.iter().map(|&i| vector(r.root(i))).collect::<Vec<_>>(),
        "coords": p.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

pub fn subset(a: SubsetA) -> Value {
    json!(a.members())
}

pub fn monomial(y: &GoodMonomial) -> Value {
    Value::Array(y.chain.iter().map(|&a| subset(a)).collect())
}

pub fn cohom(c: &CohomClass) -> Value {
    let terms: Vec<Value> = c
        .terms
        .iter()
        .map(|(y, k)| json!({"chain": monomial(y), "coeff": int(k)}))
        .collect();
    json!({"n": c.n, "terms": terms})
}

pub fn chain(c: &MarkedChain) -> Value {
    let coords: Vec<Value> = c.coords.iter().map(|(i, t)| json!({"i": i, "pos": ratio(t)})).collect();
    json!({
        "n": c.coords.len() - 1,
        "blocks": c.ctype.blocks,
        "coords": coords,
    })
}

// Parsing.

/// Inline JSON, or `@path` to read it from a file.
pub fn load(arg: &str) -> Result<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| bad("an integer", v)),
        Value::String(s) => s.trim().parse().map_err(|_| bad("an integer", v)),
        _ => Err(bad("an integer", v)),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

pub fn parse_usize(v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad("a non-negative integer", v))
}

pub fn parse_vector(v: &Value) -> Result<IntVector> {
    Ok(IntVector(array(v, "an integer array")?.iter().map(parse_int).collect::<Result<_>>()?))
}

pub fn parse_matrix(v: &Value) -> Result<IntMatrix> {
    let rows: Vec<IntVector> = array(v, "an array of rows")?.iter().map(parse_vector).collect::<Result<_>>()?;
    let ncols = rows.first().map_or(0, IntVector::len);
    IntMatrix::new(rows, ncols)
}

pub fn parse_indices(v: &Value) -> Result<Vec<usize>> {
    array(v, "an index array")?.iter().map(parse_usize).collect()
}

fn parse_rat_value(v: &Value) -> Result<num_rational::BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(num_rational::BigRational::from_integer(parse_int(v)?)),
        _ => Err(bad("a rational", v)),
    }
}

pub fn parse_ratio(v: &Value) -> Result<ProjectiveRatio> {
    let pair = array(v, "a pair [p, q]")?;
    if pair.len() != 2 {
        return Err(bad("a pair [p, q]", v));
    }
    ProjectiveRatio::new(parse_rat_value(&pair[0])?, parse_rat_value(&pair[1])?)
}

pub fn parse_ratios(v: &Value) -> Result<Vec<ProjectiveRatio>> {
    array(v, "an array of ratios")?.iter().map(parse_ratio).collect()
}

fn root_index(r: &RootSystem, v: &Value) -> Result<usize> {
    let root = parse_vector(v)?;
    r.index_of(&root)
        .ok_or_else(|| Error::InvalidInput(format!("{root} is not a root of {}", r.label())))
}

pub fn parse_roots(r: &RootSystem, v: &Value) -> Result<Vec<usize>> {
    array(v, "an array of roots")?.iter().map(|x| root_index(r, x)).collect()
}

pub fn parse_rdata(r: &RootSystem, v: &Value) -> Result<RData> {
    let entries = array(field(v, "pairs")?, "an array of pairs")?
        .iter()
        .map(|p| {
            let root = field(p, "positive_root").or_else(|_| field(p, "root"))?;
            Ok((root_index(r, root)?, parse_ratio(field(p, "ratio")?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    RData::new(r, entries)
}

/// The rank `n` of the `A_n` carrying the data, read off the root length.
pub fn rdata_type_a_rank(v: &Value) -> Result<usize> {
    let first = array(field(v, "pairs")?, "an array of pairs")?
        .first()
        .ok_or_else(|| Error::InvalidInput("no pairs".into()))?;
    let len = array(field(first, "positive_root")?, "a root")?.len();
    len.checked_sub(1)
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidInput("roots of A_n have n+1 coordinates".into()))
}

pub fn parse_chart_point(r: &RootSystem, v: &Value) -> Result<ChartPoint> {
    let chart = SimpleRootSet::new(parse_roots(r, field(v, "chart")?)?);
    let coords = array(field(v, "coords")?, "an array of rationals")?
        .iter()
        .map(parse_rat_value)
        .collect::<Result<_>>()?;
    Ok(ChartPoint { chart, coords })
}

pub fn parse_subset(v: &Value) -> Result<Vec<usize>> {
    parse_indices(v)
}

pub fn parse_monomial(n: usize, v: &Value) -> Result<GoodMonomial> {
    let sets = array(v, "a chain of subsets")?
        .iter()
        .map(|s| SubsetA::checked(n, &parse_subset(s)?))
        .collect::<Result<Vec<_>>>()?;
    GoodMonomial::new(n, sets)
}

pub fn parse_cohom(v: &Value) -> Result<CohomClass> {
    let n = parse_usize(field(v, "n")?)?;
    rootfan::type_a::check_n(n)?;
    let mut c = CohomClass::zero(n);
    for t in array(field(v, "terms")?, "an array of terms")? {
        c.add(parse_monomial(n, field(t, "chain")?)?, parse_int(field(t, "coeff")?)?);
    }
    Ok(c)
}

pub fn parse_divisor(n: usize, v: &Value) -> Result<TorusDivisor> {
    rootfan::type_a::check_n(n)?;
    let mut coeffs = BTreeMap::new();
    for t in array(field(v, "coeffs")?, "an array of coefficients")? {
        let a = SubsetA::checked(n, &parse_subset(field(t, "subset")?)?)?;
        *coeffs.entry(a).or_insert_with(BigInt::default) += parse_int(field(t, "a")?)?;
    }
    TorusDivisor::new(n, coeffs)
}

pub fn parse_chain(v: &Value) -> Result<MarkedChain> {
    let blocks = array(field(v, "blocks")?, "an array of blocks")?
        .iter()
        .map(parse_indices)
        .collect::<Result<Vec<_>>>()?;
    let ctype = CombType::new(blocks)?;
    let mut coords = BTreeMap::new();
    for c in array(field(v, "coords")?, "an array of coordinates")? {
        coords.insert(parse_usize(field(c, "i")?)?, parse_ratio(field(c, "pos")?)?);
    }
    MarkedChain::new(ctype, coords)
}
