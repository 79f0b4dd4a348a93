//! Exact classification of exponent tuples `(1/p_1, …, 1/p_m)`.
//!
//! The three conditions, with `q_i = 1/p_i` and `Σ = Σ_i q_i`:
//!
//! * (a) `Σ < m - 1`
//! * (b) `Σ_{j≠i} q_j < m - 3/2` for every `i`
//! * (c) `q ∉ {0,1}^m \ {0}`
//!
//! and the boundary pieces
//!
//! * `H   = [0,1]^m ∩ {Σ = m - 1} ∩ ⋂_i {Σ_{j≠i} q_j ≤ m - 3/2}`
//! * `H_i = [0,1]^m ∩ {Σ_{j≠i} q_j = m - 3/2} ∩ {Σ ≤ m - 1}`
//!
//! All comparisons use `BigRational`; boundary membership is never decided
//! in floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Denominator of the lattice used by [`sample_region`].
pub const SAMPLE_DENOMINATOR: i64 = 120;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"1/2"`, `"3"`, `"0.25"` or `"-1/3"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// `"1/2"`, `"0"`, `"1"`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_strings(qs: &[BigRational]) -> Vec<String> {
    qs.iter().map(rational_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentPoint {
    q: Vec<BigRational>,
}

impl ExponentPoint {
    pub fn new(q: Vec<BigRational>) -> Result<Self> {
        if q.len() < 2 {
            return Err(Error::UnsupportedDimension(q.len()));
        }
        let one = BigRational::one();
        if let Some(bad) = q.iter().find(|v| v.is_negative() || **v > one) {
            return Err(Error::InvalidArgument(format!(
                "exponent {} outside [0, 1]",
                rational_string(bad)
            )));
        }
        Ok(Self { q })
    }

    pub fn from_ints(q: &[(i64, i64)]) -> Result<Self> {
        Self::new(q.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[BigRational] {
        &self.q
    }

    /// `1/p = Σ q_i`.
    pub fn recip_p(&self) -> BigRational {
        self.q.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// `Σ_{j≠i} q_j`.
    pub fn partial_sum(&self, i: usize) -> BigRational {
        self.recip_p() - &self.q[i]
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            q: perm.iter().map(|&i| self.q[i].clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.q
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl FromStr for ExponentPoint {
    type Err = Error;

    /// `1/2,1/3` or the displayed form `(1/2,1/3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(s);
        Self::new(s.split(',').map(parse_rational).collect::<Result<_>>()?)
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", rational_strings(&self.q).join(","))
    }
}

impl Serialize for ExponentPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExponentPoint", 3)?;
        st.serialize_field("m", &self.m())?;
        st.serialize_field("q", &rational_strings(&self.q))?;
        st.serialize_field("recip_p", &rational_string(&self.recip_p()))?;
        st.end()
    }
}

/// One outcome of the condition checks. Indices are 1-based in the string
/// form (`b_equal(2)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trigger {
    AStrict,
    AEqual,
    AViolated,
    BStrict(usize),
    BEqual(usize),
    BViolated(usize),
    CCorner,
}

impl Trigger {
    pub fn is_equal(&self) -> bool {
        matches!(self, Trigger::AEqual | Trigger::BEqual(_))
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Trigger::AViolated | Trigger::BViolated(_))
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trigger::AStrict => write!(f, "a_strict"),
            Trigger::AEqual => write!(f, "a_equal"),
            Trigger::AViolated => write!(f, "a_violated"),
            Trigger::BStrict(i) => write!(f, "b_strict({})", i + 1),
            Trigger::BEqual(i) => write!(f, "b_equal({})", i + 1),
            Trigger::BViolated(i) => write!(f, "b_violated({})", i + 1),
            Trigger::CCorner => write!(f, "c_corner"),
        }
    }
}

impl Serialize for Trigger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub triggers: Vec<Trigger>,
    pub in_h: bool,
    pub in_h_i: Vec<bool>,
}

impl Conditions {
    pub fn has(&self, t: Trigger) -> bool {
        self.triggers.contains(&t)
    }
}

/// Exact evaluation of (a), (b), (c) and of membership in `H`, `H_i`.
pub fn check_conditions(pt: &ExponentPoint) -> Conditions {
    let m = pt.m() as i64;
    let sum = pt.recip_p();
    let a_bound = BigRational::from_integer(BigInt::from(m - 1));
    let b_bound = rat(2 * m - 3, 2);
    let mut triggers = Vec::new();
    triggers.push(match sum.cmp(&a_bound) {
        std::cmp::Ordering::Less => Trigger::AStrict,
        std::cmp::Ordering::Equal => Trigger::AEqual,
        std::cmp::Ordering::Greater => Trigger::AViolated,
    });
    let partials: Vec<BigRational> = (0..pt.m()).map(|i| pt.partial_sum(i)).collect();
    for (i, ps) in partials.iter().enumerate() {
        triggers.push(match ps.cmp(&b_bound) {
            std::cmp::Ordering::Less => Trigger::BStrict(i),
            std::cmp::Ordering::Equal => Trigger::BEqual(i),
            std::cmp::Ordering::Greater => Trigger::BViolated(i),
        });
    }
    let corner = pt.q.iter().all(|v| v.is_zero() || v.is_one()) && pt.q.iter().any(|v| v.is_one());
    if corner {
        triggers.push(Trigger::CCorner);
    }
    let in_h = sum == a_bound && partials.iter().all(|ps| *ps <= b_bound);
    let in_h_i = partials
        .iter()
        .map(|ps| *ps == b_bound && sum <= a_bound)
        .collect();
    Conditions {
        triggers,
        in_h,
        in_h_i,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    StrongBounded,
    WeakOnly,
    StrongFailsWeakOpen,
    NotEvenWeak,
    Unbounded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub triggers: Vec<Trigger>,
    pub in_h: bool,
    pub in_h_i: Vec<bool>,
    pub citation: String,
}

/// Applies, in order: any violated condition gives `Unbounded`; for `m = 2`
/// an exponent `1/2` (with the other at most `1/2`) gives `NotEvenWeak`; any
/// equality gives `StrongFailsWeakOpen`; a corner gives `WeakOnly`;
/// everything else is `StrongBounded`.
pub fn classify(pt: &ExponentPoint) -> Classification {
    let cond = check_conditions(pt);
    let m = pt.m();
    let half = rat(1, 2);
    let max_q = pt.q.iter().max().cloned().unwrap_or_default();
    let (verdict, citation) = if cond.triggers.iter().any(Trigger::is_violated) {
        if m == 2 {
            (
                Verdict::Unbounded,
                "Theorem 1: strong bound holds if and only if p1, p2 > 2",
            )
        } else if cond.has(Trigger::AViolated) {
            (
                Verdict::Unbounded,
                "Theorem 2: condition (a) fails, counterexample with all inputs concentrated",
            )
        } else {
            (
                Verdict::Unbounded,
                "Theorem 2: condition (b) fails, counterexample tangent to a coordinate axis",
            )
        }
    } else if m == 2 && max_q == half {
        (
            Verdict::NotEvenWeak,
            "Theorem 1: fails to be weak type bounded when p1 = 2 or p2 = 2",
        )
    } else if cond.triggers.iter().any(Trigger::is_equal) {
        (
            Verdict::StrongFailsWeakOpen,
            "Theorem 2: strong bound cannot hold on H or H_i; weak type remains open",
        )
    } else if cond.has(Trigger::CCorner) {
        (
            Verdict::WeakOnly,
            "Theorem 2: weak-type bound at corner points where (a) and (b) hold",
        )
    } else if m == 2 {
        (
            Verdict::StrongBounded,
            "Theorem 1: strong bound holds if and only if p1, p2 > 2",
        )
    } else {
        (
            Verdict::StrongBounded,
            "Theorem 2: conditions (a), (b), (c) all hold",
        )
    };
    Classification {
        verdict,
        triggers: cond.triggers,
        in_h: cond.in_h,
        in_h_i: cond.in_h_i,
        citation: citation.to_string(),
    }
}

/// Seeded samples on the lattice `{k / 120}^m`.
pub fn sample_region(
    m: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(ExponentPoint, Classification)>> {
    if m < 2 {
        return Err(Error::UnsupportedDimension(m));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = (0..m)
                .map(|_| rat(rng.random_range(0..=SAMPLE_DENOMINATOR), SAMPLE_DENOMINATOR))
                .collect();
            let pt = ExponentPoint::new(q)?;
            let c = classify(&pt);
            Ok((pt, c))
        })
        .collect()
}

/// Half-space `a · q ≤ b` with a tag naming the face it bounds.
#[derive(Debug, Clone)]
struct Constraint {
    a: Vec<BigRational>,
    b: BigRational,
    tag: String,
}

fn closure_constraints(m: usize) -> Vec<Constraint> {
    let mut cs = Vec::new();
    let unit = |i: usize, v: i64| -> Vec<BigRational> {
        (0..m)
            .map(|j| {
                if j == i {
                    rat(v, 1)
                } else {
                    BigRational::zero()
                }
            })
            .collect()
    };
    for i in 0..m {
        cs.push(Constraint {
            a: unit(i, -1),
            b: BigRational::zero(),
            tag: format!("q{}=0", i + 1),
        });
        cs.push(Constraint {
            a: unit(i, 1),
            b: BigRational::one(),
            tag: format!("q{}=1", i + 1),
        });
    }
    cs.push(Constraint {
        a: vec![BigRational::one(); m],
        b: rat(m as i64 - 1, 1),
        tag: "H".into(),
    });
    for i in 0..m {
        cs.push(Constraint {
            a: (0..m)
                .map(|j| {
                    if j == i {
                        BigRational::zero()
                    } else {
                        BigRational::one()
                    }
                })
                .collect(),
            b: rat(2 * m as i64 - 3, 2),
            tag: format!("H_{}", i + 1),
        });
    }
    cs
}

fn dot(a: &[BigRational], x: &[BigRational]) -> BigRational {
    a.iter()
        .zip(x)
        .fold(BigRational::zero(), |acc, (p, q)| acc + p * q)
}

/// Solves the square system by Gauss–Jordan elimination; `None` if singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = rows[col][col].clone();
        for k in col..n {
            rows[col][k] = &rows[col][k] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in col..n {
                    let v = &rows[col][k] * &f;
                    rows[r][k] -= v;
                }
                let v = &rhs[col] * &f;
                rhs[r] -= v;
            }
        }
    }
    Some(rhs)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertices of `{q : a·q ≤ b}` in lexicographic order.
fn vertices(cs: &[Constraint], d: usize) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for combo in combinations(cs.len(), d) {
        let rows = combo.iter().map(|&i| cs[i].a.clone()).collect();
        let rhs = combo.iter().map(|&i| cs[i].b.clone()).collect();
        if let Some(x) = solve(rows, rhs) {
            if cs.iter().all(|c| dot(&c.a, &x) <= c.b) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}

/// Orders coplanar points cyclically around their centroid.
fn cyclic_order(points: &[Vec<f64>], idx: &mut [usize]) {
    let d = points[idx[0]].len();
    let n = idx.len() as f64;
    let c: Vec<f64> = (0..d)
        .map(|k| idx.iter().map(|&i| points[i][k]).sum::<f64>() / n)
        .collect();
    let sub = |i: usize| -> Vec<f64> { (0..d).map(|k| points[i][k] - c[k]).collect() };
    let u = sub(idx[0]);
    let v = if d == 2 {
        vec![-u[1], u[0]]
    } else {
        // normal from two spanning vectors, then v = normal × u
        let w = idx.iter().map(|&i| sub(i)).find(|w| {
            let cr = cross(&u, w);
            cr.iter().map(|x| x * x).sum::<f64>() > 1e-20
        });
        match w {
            Some(w) => cross(&cross(&u, &w), &u),
            None => return,
        }
    };
    let angle = |i: usize| {
        let p = sub(i);
        let x: f64 = p.iter().zip(&u).map(|(a, b)| a * b).sum();
        let y: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
        y.atan2(x)
    };
    idx.sort_by(|&i, &j| angle(i).total_cmp(&angle(j)));
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Vertex label in the style of the figures: `(1/2,0)` in the plane and
/// `(1,½,0)` in space.
pub fn vertex_label(q: &[BigRational]) -> String {
    let half = rat(1, 2);
    let parts: Vec<String> = q
        .iter()
        .map(|v| {
            if q.len() == 3 && *v == half {
                "½".to_string()
            } else {
                rational_string(v)
            }
        })
        .collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureVertex {
    pub coords: Vec<BigRational>,
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    pub tag: String,
    /// Indices into the vertex list, in cyclic order.
    pub vertices: Vec<usize>,
}

/// Closure of the strong-type region with its boundary pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionFigure {
    pub m: usize,
    pub slice: Option<BigRational>,
    pub vertices: Vec<FigureVertex>,
    /// Facets (edges in the plane) of the closed region.
    pub faces: Vec<Face>,
    /// Vertex indices lying in `H` and in each `H_i`.
    pub sets: BTreeMap<String, Vec<usize>>,
    /// Corners of `[0, 1]^m` (restricted to the slice, if any).
    pub cube: Vec<Vec<BigRational>>,
    /// Corners where only the weak-type bound holds.
    pub weak_points: Vec<Vec<BigRational>>,
}

impl Serialize for FigureVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FigureVertex", 3)?;
        st.serialize_field("coords", &rational_strings(&self.coords))?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.end()
    }
}

impl Serialize for RegionFigure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RegionFigure", 7)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("slice", &self.slice.as_ref().map(rational_string))?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("faces", &self.faces)?;
        st.serialize_field("sets", &self.sets)?;
        let cube: Vec<Vec<String>> = self.cube.iter().map(|c| rational_strings(c)).collect();
        st.serialize_field("cube", &cube)?;
        let weak: Vec<Vec<String>> = self
            .weak_points
            .iter()
            .map(|c| rational_strings(c))
            .collect();
        st.serialize_field("weak_points", &weak)?;
        st.end()
    }
}

impl RegionFigure {
    pub fn labels(&self) -> Vec<&str> {
        self.vertices.iter().map(|v| v.label.as_str()).collect()
    }

    pub fn contains_vertex(&self, q: &[BigRational]) -> bool {
        self.vertices.iter().any(|v| v.coords == q)
    }
}

fn cube_corners(m: usize) -> Vec<Vec<BigRational>> {
    (0..1usize << m)
        .map(|bits| {
            (0..m)
                .map(|i| rat(((bits >> (m - 1 - i)) & 1) as i64, 1))
                .collect()
        })
        .collect()
}

/// Geometry of the closed strong-type region for `m ∈ {2, 3}`; for `m = 3`
/// an optional `slice` fixes `q_3`.
pub fn region_figure(m: usize, slice: Option<BigRational>) -> Result<RegionFigure> {
    if !(m == 2 || m == 3) {
        return Err(Error::UnsupportedDimension(m));
    }
    if slice.is_some() && m != 3 {
        return Err(Error::InvalidArgument(
            "a slice is only defined for m = 3".into(),
        ));
    }
    let full = closure_constraints(m);
    let (d, cs) = match &slice {
        None => (m, full),
        Some(s) => {
            if s.is_negative() || *s > BigRational::one() {
                return Err(Error::InvalidArgument(format!(
                    "slice {} outside [0, 1]",
                    rational_string(s)
                )));
            }
            let mut reduced = Vec::new();
            for c in full {
                let b = &c.b - &c.a[2] * s;
                let a = c.a[..2].to_vec();
                if a.iter().all(Zero::is_zero) {
                    if b.is_negative() {
                        reduced.clear();
                        reduced.push(Constraint {
                            a: vec![BigRational::zero(); 2],
                            b: rat(-1, 1),
                            tag: "infeasible".into(),
                        });
                        break;
                    }
                    continue;
                }
                reduced.push(Constraint { a, b, tag: c.tag });
            }
            (2, reduced)
        }
    };
    let lift = |x: Vec<BigRational>| -> Vec<BigRational> {
        match &slice {
            Some(s) => {
                let mut v = x;
                v.push(s.clone());
                v
            }
            None => x,
        }
    };
    let raw = vertices(&cs, d);
    let approx: Vec<Vec<f64>> = raw
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
        .collect();
    let mut faces = Vec::new();
    let mut sets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for c in &cs {
        let mut on: Vec<usize> = (0..raw.len())
            .filter(|&i| dot(&c.a, &raw[i]) == c.b)
            .collect();
        if c.tag.starts_with('H') {
            sets.insert(c.tag.clone(), on.clone());
        }
        if on.len() >= d
            && !faces.iter().any(|f: &Face| {
                f.vertices.iter().all(|i| on.contains(i)) && f.vertices.len() == on.len()
            })
        {
            cyclic_order(&approx, &mut on);
            faces.push(Face {
                tag: c.tag.clone(),
                vertices: on,
            });
        }
    }
    let verts: Vec<FigureVertex> = raw
        .into_iter()
        .map(|x| {
            let coords = lift(x);
            let pt = ExponentPoint::new(coords.clone()).expect("vertices lie in the cube");
            FigureVertex {
                label: vertex_label(&coords),
                verdict: classify(&pt).verdict,
                coords,
            }
        })
        .collect();
    let cube: Vec<Vec<BigRational>> = match &slice {
        None => cube_corners(m),
        Some(_) => cube_corners(2).into_iter().map(lift).collect(),
    };
    let weak_points = cube
        .iter()
        .filter(|c| {
            ExponentPoint::new(c.to_vec())
                .map(|p| classify(&p).verdict == Verdict::WeakOnly)
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    Ok(RegionFigure {
        m,
        slice,
        vertices: verts,
        faces,
        sets,
        cube,
        weak_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> ExponentPoint {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational(" 1 ").unwrap(), rat(1, 1));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!("1/2".parse::<ExponentPoint>().is_err());
        assert!("1/2,3/2".parse::<ExponentPoint>().is_err());
        assert_eq!(pt("1/2, 1/3").to_string(), "(1/2,1/3)");
        assert_eq!(pt("1/2,1/2,1").recip_p(), rat(2, 1));
    }

    #[test]
    fn condition_examples() {
        let c = check_conditions(&pt("1/3,1/3,1/3"));
        assert!(c.has(Trigger::AStrict));
        assert!((0..3).all(|i| c.has(Trigger::BStrict(i))));
        assert!(!c.has(Trigger::CCorner));

        let c = check_conditions(&pt("1,0,0"));
        assert!(c.has(Trigger::AStrict) && c.has(Trigger::CCorner));
        assert!((0..3).all(|i| c.has(Trigger::BStrict(i))));

        let c = check_conditions(&pt("1/2,1/2,1"));
        assert!(c.has(Trigger::AEqual));
        assert!(c.has(Trigger::BEqual(0)));
        assert!(c.in_h && c.in_h_i[0]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&pt("1/3,1/3")).verdict, Verdict::StrongBounded);
        assert!(classify(&pt("1/3,1/3")).citation.starts_with("Theorem 1"));
        assert_eq!(classify(&pt("1/2,1/4")).verdict, Verdict::NotEvenWeak);
        assert_eq!(classify(&pt("1,0,0")).verdict, Verdict::WeakOnly);
        let c = classify(&pt("1/2,1/2,1"));
        assert_eq!(c.verdict, Verdict::StrongFailsWeakOpen);
        assert!(c.in_h && c.in_h_i[0]);
        assert_eq!(classify(&pt("3/5,3/5,9/10")).verdict, Verdict::Unbounded);
        assert_eq!(classify(&pt("0,0")).verdict, Verdict::StrongBounded);
        assert_eq!(classify(&pt("1,0")).verdict, Verdict::Unbounded);
    }

    #[test]
    fn trigger_strings() {
        let c = classify(&pt("1/2,1/2,1"));
        let s = serde_json::to_string(&c.triggers).unwrap();
        assert_eq!(s, r#"["a_equal","b_equal(1)","b_equal(2)","b_strict(3)"]"#);
    }

    #[test]
    fn figure_one() {
        let f = region_figure(2, None).unwrap();
        let labels = f.labels();
        assert_eq!(labels, vec!["(0,0)", "(0,1/2)", "(1/2,0)", "(1/2,1/2)"]);
        assert_eq!(f.sets["H"].len(), 1);
        assert_eq!(f.vertices[f.sets["H"][0]].label, "(1/2,1/2)");
        assert_eq!(f.sets["H_1"].len(), 2);
        assert_eq!(f.faces.len(), 4);
        assert!(f.weak_points.is_empty());
    }

    #[test]
    fn figure_two() {
        let f = region_figure(3, None).unwrap();
        for lbl in [
            "(1,½,0)", "(½,1,0)", "(0,1,½)", "(0,½,1)", "(½,0,1)", "(1,0,½)",
        ] {
            assert!(f.labels().contains(&lbl), "{lbl}");
        }
        for lbl in [
            "(0,0,0)",
            "(1,0,0)",
            "(0,1,0)",
            "(0,0,1)",
            "(1,½,½)",
            "(½,1,½)",
            "(½,½,1)",
        ] {
            assert!(f.labels().contains(&lbl), "{lbl}");
        }
        assert_eq!(f.vertices.len(), 13);
        let h = f.faces.iter().find(|x| x.tag == "H").unwrap();
        assert_eq!(h.vertices.len(), 3);
        for i in 1..=3 {
            let hi = f.faces.iter().find(|x| x.tag == format!("H_{i}")).unwrap();
            assert_eq!(hi.vertices.len(), 4);
        }
        assert_eq!(f.weak_points.len(), 3);
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["vertices"][0]["coords"][0], "0");
    }

    #[test]
    fn sliced_figure() {
        let f = region_figure(3, Some(rat(1, 4))).unwrap();
        assert!(f.vertices.iter().all(|v| v.coords[2] == rat(1, 4)));
        assert!(f.contains_vertex(&[rat(1, 1), rat(1, 2), rat(1, 4)]));
        assert!(f.contains_vertex(&[rat(1, 1), rat(0, 1), rat(1, 4)]));
        assert!(region_figure(3, Some(rat(3, 2))).is_err());
        assert!(region_figure(4, None).is_err());
        assert!(region_figure(2, Some(rat(1, 2))).is_err());
    }

    #[test]
    fn samples() {
        let s = sample_region(2, 4000, 11).unwrap();
        let strong = s
            .iter()
            .filter(|(_, c)| c.verdict == Verdict::StrongBounded)
            .count();
        let frac = strong as f64 / s.len() as f64;
        assert!((frac - 0.25).abs() < 0.03, "{frac}");
        for (_, c) in &s {
            if c.verdict == Verdict::StrongBounded {
                assert!(!c.in_h);
                assert!(c
                    .triggers
                    .iter()
                    .all(|t| matches!(t, Trigger::AStrict | Trigger::BStrict(_))));
            }
        }
        assert_eq!(
            sample_region(3, 5, 1).unwrap(),
            sample_region(3, 5, 1).unwrap()
        );
    }
}
