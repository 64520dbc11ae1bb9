//! Saw, triangle-wave and blancmange constructions, and the 2-D
//! magnification that makes infinitesimal teeth visible.
//!
//! The finite saw with `n` teeth climbs the diagonal from `(0,0)` to
//! `(1,1)`. Its hyperfinite analogue has `N = 1/ε` teeth indexed by
//! `k = c·N + j`; each tooth has infinitesimal size `1/N`, invisible at
//! unit scale (its shadow is a diagonal point), but the microscope
//! `p -> N·(p - center)` maps one tooth to the unit staircase step exactly.
//! Summing scaled triangle waves instead of stacking teeth along the
//! diagonal yields the blancmange function, with explicit partial sums and
//! a certified tail bound; its difference quotients at dyadic points are
//! computed exactly and grow without bound.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::ratfunc::RatFunc;
use crate::rational::Rational;
use crate::series::{Coeff, Mode, SeriesCtx, SeriesElem};

/// A point of the extended plane, coordinates in the rational-function
/// field (`x` infinitesimal, `N = 1/x` infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct HyperPoint2D {
    pub x: RatFunc,
    pub y: RatFunc,
}

impl HyperPoint2D {
    pub fn new(x: RatFunc, y: RatFunc) -> HyperPoint2D {
        HyperPoint2D { x, y }
    }
}

/// Tooth index `k = c·N + j` with `c` rational in `[0,1]` and `j` an
/// integer offset: `c = 0` addresses finite teeth, `c > 0` infinite ones.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperIndex {
    pub c: Rational,
    pub j: i64,
}

impl HyperIndex {
    pub fn new(c: Rational, j: i64) -> HyperIndex {
        HyperIndex { c, j }
    }

    /// The index as a field element `c/x + j`.
    pub fn as_element(&self) -> RatFunc {
        let scaled = &RatFunc::from_rational(self.c.clone()) * &RatFunc::omega();
        &scaled + &RatFunc::from_int(self.j)
    }

    /// Time parameter `t = k/N = c + j·x`.
    pub fn time(&self) -> RatFunc {
        let jx = &RatFunc::from_int(self.j) * &RatFunc::x();
        &RatFunc::from_rational(self.c.clone()) + &jx
    }
}

/// Phase of a saw tooth: its three corner points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Start,
    TopOfRiser,
    EndOfTread,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Start, Phase::TopOfRiser, Phase::EndOfTread];
}

/// Polylines and points in real coordinates, ready for rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotScene {
    pub polylines: Vec<(String, Vec<(Rational, Rational)>)>,
    pub points: Vec<(String, (Rational, Rational))>,
    /// `(xmin, xmax, ymin, ymax)`, non-degenerate.
    pub viewport: (Rational, Rational, Rational, Rational),
    pub samples_per_unit: u32,
}

impl PlotScene {
    pub fn new(viewport: (Rational, Rational, Rational, Rational), samples_per_unit: u32) -> PlotScene {
        PlotScene {
            polylines: Vec::new(),
            points: Vec::new(),
            viewport,
            samples_per_unit,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty() && self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Finite and hyperfinite saws
// ---------------------------------------------------------------------------

/// Vertices of the finite saw with `n` teeth: `2n + 1` points from `(0,0)`
/// to `(1,1)`.
pub fn saw_vertices(n: u32) -> Result<Vec<(Rational, Rational)>> {
    if n == 0 {
        return Err(Error::DomainError("a saw needs at least one tooth".into()));
    }
    let step = Rational::ratio(1, n as i64);
    let mut out = Vec::with_capacity(2 * n as usize + 1);
    out.push((Rational::zero(), Rational::zero()));
    for k in 0..n as i64 {
        let t = Rational::ratio(k, n as i64);
        let up = &t + &step;
        out.push((t.clone(), up.clone()));
        out.push((up.clone(), up));
    }
    Ok(out)
}

/// The finite saw as a renderable scene.
pub fn luzin_saw_finite(n: u32) -> Result<PlotScene> {
    let vertices = saw_vertices(n)?;
    let pad = Rational::ratio(1, 10);
    let mut scene = PlotScene::new(
        (
            -&pad,
            &Rational::one() + &pad,
            -&pad,
            &Rational::one() + &pad,
        ),
        1,
    );
    scene
        .polylines
        .push((format!("saw n={n}"), vertices));
    Ok(scene)
}

/// Corner of tooth `k` of the hyperfinite saw, in the extended plane.
/// Requires `0 <= k <= N - 1` in the field order.
pub fn luzin_saw_hyper(index: &HyperIndex, phase: Phase) -> Result<HyperPoint2D> {
    let k = index.as_element();
    let upper = &RatFunc::omega() - &RatFunc::one();
    if k.compare(&RatFunc::zero()).is_lt() || k.compare(&upper).is_gt() {
        return Err(Error::IndexOutOfRange(format!(
            "k = {} lies outside 0 ..= N-1",
            k.to_omega_string()
        )));
    }
    let t = index.time();
    let tooth = RatFunc::x(); // 1/N
    Ok(match phase {
        Phase::Start => HyperPoint2D::new(t.clone(), t),
        Phase::TopOfRiser => {
            let top = &t + &tooth;
            HyperPoint2D::new(t, top)
        }
        Phase::EndOfTread => {
            let end = &t + &tooth;
            HyperPoint2D::new(end.clone(), end)
        }
    })
}

/// The magnification `p -> factor · (p - center)`, componentwise and exact.
pub fn microscope2d(p: &HyperPoint2D, center: &HyperPoint2D, factor: &RatFunc) -> HyperPoint2D {
    HyperPoint2D::new(
        factor * &(&p.x - &center.x),
        factor * &(&p.y - &center.y),
    )
}

/// Componentwise standard part of a finite point.
pub fn shadow(p: &HyperPoint2D) -> Result<(Rational, Rational)> {
    let sx = p
        .x
        .standard_part()
        .map_err(|_| Error::NotFinite(format!("x = {}", p.x)))?;
    let sy = p
        .y
        .standard_part()
        .map_err(|_| Error::NotFinite(format!("y = {}", p.y)))?;
    Ok((sx, sy))
}

/// Magnified view of the saw around the start of tooth `index`: the tooth
/// and its in-range neighbors, mapped through the microscope at factor `N`
/// and shadowed to real coordinates.
pub fn magnified_tooth_scene(index: &HyperIndex) -> Result<PlotScene> {
    let center = luzin_saw_hyper(index, Phase::Start)?;
    let factor = RatFunc::omega();
    let mut polyline = Vec::new();
    for dj in -1..=1i64 {
        let neighbor = HyperIndex::new(index.c.clone(), index.j + dj);
        for phase in Phase::ALL {
            let Ok(p) = luzin_saw_hyper(&neighbor, phase) else {
                continue;
            };
            let m = microscope2d(&p, &center, &factor);
            polyline.push(shadow(&m)?);
        }
    }
    polyline.dedup();
    let two = Rational::from_int(2);
    let mut scene = PlotScene::new((-&two, two.clone(), -&two, two), 1);
    scene.polylines.push((
        format!("tooth c={}, j={} magnified", index.c, index.j),
        polyline,
    ));
    Ok(scene)
}

/// Supremum of `|y - x|` over the saw and its total arc length, both exact.
/// The deviation peaks at a riser top; every edge has length `1/n`.
pub fn saw_limit_check(n: u32) -> Result<(Rational, Rational)> {
    let vertices = saw_vertices(n)?;
    let mut sup = Rational::zero();
    for (x, y) in &vertices {
        let dev = (y - x).abs();
        sup = sup.max(dev);
    }
    let mut length = Rational::zero();
    for pair in vertices.windows(2) {
        let dx = (&pair[1].0 - &pair[0].0).abs();
        let dy = (&pair[1].1 - &pair[0].1).abs();
        // Edges are axis-parallel, so one of the two is zero.
        debug_assert!(dx.is_zero() || dy.is_zero());
        length = &length + &(&dx + &dy);
    }
    Ok((sup, length))
}

// ---------------------------------------------------------------------------
// Triangle waves and the blancmange function
// ---------------------------------------------------------------------------

/// The period-1 triangle wave: `x` on `[0, 1/2]`, `1 - x` on `[1/2, 1]`,
/// extended periodically.
pub fn triangle_base(x: &Rational) -> Rational {
    let f = x.fract();
    if f <= Rational::ratio(1, 2) {
        f
    } else {
        &Rational::one() - &f
    }
}

/// Level-`n` wave `s_n(x) = s_1(2^(n-1) x) / 2^(n-1)`.
pub fn triangle_wave(n: u32, x: &Rational) -> Rational {
    assert!(n >= 1, "levels are 1-based");
    let scale = Rational::from_int(2)
        .pow_int(n as i64 - 1)
        .expect("small exponent");
    let inner = triangle_base(&(&scale * x));
    (&inner / &scale).expect("power of two is nonzero")
}

/// Peak location and exact supremum of `s_n`: `sup s_n = 2^-n` at
/// `x = 2^-n`.
pub fn triangle_wave_peak(n: u32) -> (Rational, Rational) {
    let x = Rational::from_int(2)
        .pow_int(-(n as i64))
        .expect("small exponent");
    let sup = triangle_wave(n, &x);
    (x, sup)
}

/// Partial sum of the blancmange function and a certified tail bound:
/// `sum_{k=1..terms} s_k(x)` exactly, with tail below `2^-terms`. At a
/// dyadic `p/2^q` with `terms >= q` every later wave vanishes and the tail
/// bound is 0.
pub fn blancmange(x: &Rational, terms: u32) -> (Rational, Rational) {
    assert!(terms >= 1, "at least one term");
    let mut sum = Rational::zero();
    for n in 1..=terms {
        sum = &sum + &triangle_wave(n, x);
    }
    let exact = x
        .dyadic()
        .is_some_and(|(_, q)| q <= terms);
    let tail = if exact {
        Rational::zero()
    } else {
        Rational::from_int(2)
            .pow_int(-(terms as i64))
            .expect("small exponent")
    };
    (sum, tail)
}

/// Exact blancmange difference quotient `(bl(x0 + 2^-m) - bl(x0)) / 2^-m`.
///
/// Waves at level `n > m` have period dividing `2^-m`, so their
/// contributions to the difference cancel exactly; the first `m` levels
/// determine the quotient of the full limit function, for every rational
/// `x0`.
pub fn diff_quotient_probe(x0: &Rational, m: u32) -> Rational {
    assert!(m >= 1);
    let h = Rational::from_int(2)
        .pow_int(-(m as i64))
        .expect("small exponent");
    let shifted = x0 + &h;
    let mut diff = Rational::zero();
    for n in 1..=m {
        diff = &diff + &(&triangle_wave(n, &shifted) - &triangle_wave(n, x0));
    }
    (&diff / &h).expect("h nonzero")
}

// ---------------------------------------------------------------------------
// Sampled scenes
// ---------------------------------------------------------------------------

/// Maps `f` over items, optionally in parallel; output order is the input
/// order either way.
pub fn map_samples<T, U, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

fn unit_grid(samples_per_unit: u32) -> Vec<Rational> {
    let n = samples_per_unit.max(1);
    (0..=n)
        .map(|j| Rational::ratio(j as i64, n as i64))
        .collect()
}

/// The first `levels` triangle waves over `[0, 1]`.
pub fn triangle_waves_scene(levels: u32, samples_per_unit: u32, parallel: bool) -> Result<PlotScene> {
    if levels == 0 {
        return Err(Error::DomainError("need at least one level".into()));
    }
    let grid = unit_grid(samples_per_unit);
    let mut scene = PlotScene::new(
        (
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            Rational::ratio(3, 5),
        ),
        samples_per_unit,
    );
    for n in 1..=levels {
        let pts = map_samples(parallel, grid.clone(), |x| {
            let y = triangle_wave(n, &x);
            (x, y)
        });
        scene.polylines.push((format!("s{n}"), pts));
    }
    Ok(scene)
}

/// Blancmange partial-sum curves, one per entry of `terms_list`.
pub fn blancmange_scene(
    terms_list: &[u32],
    samples_per_unit: u32,
    parallel: bool,
) -> Result<PlotScene> {
    if terms_list.is_empty() {
        return Err(Error::DomainError("need at least one partial sum".into()));
    }
    let grid = unit_grid(samples_per_unit);
    let mut scene = PlotScene::new(
        (
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            Rational::ratio(7, 10),
        ),
        samples_per_unit,
    );
    for &terms in terms_list {
        if terms == 0 {
            return Err(Error::DomainError("partial sums need terms >= 1".into()));
        }
        let pts = map_samples(parallel, grid.clone(), |x| {
            let (y, _) = blancmange(&x, terms);
            (x, y)
        });
        scene.polylines.push((format!("bl terms={terms}"), pts));
    }
    Ok(scene)
}

/// A function graph near `center` next to its microscope view: the shadow
/// of `(f(center + tε) - f(center)) / ε` as `t` sweeps `[-1, 1]`, which for
/// differentiable `f` is the tangent-slope line through the origin.
pub fn microscope_scene(
    f: &Expr,
    var: &str,
    center: &Rational,
    ctx: &SeriesCtx,
    samples_per_unit: u32,
    parallel: bool,
) -> Result<PlotScene> {
    let n = samples_per_unit.max(4);
    let graph_grid: Vec<Rational> = (-(n as i64)..=n as i64)
        .map(|j| center + &Rational::ratio(j, n as i64))
        .collect();
    let graph_samples = map_samples(parallel, graph_grid, |x| {
        let mut bindings = std::collections::BTreeMap::new();
        bindings.insert(var.to_string(), x.clone());
        expr::eval_real(f, &bindings).ok().map(|y| (x, y))
    });
    let mut graph_segments: Vec<Vec<(Rational, Rational)>> = vec![Vec::new()];
    for s in graph_samples {
        match s {
            Some(p) => graph_segments.last_mut().expect("nonempty").push(p),
            None => {
                if !graph_segments.last().expect("nonempty").is_empty() {
                    graph_segments.push(Vec::new());
                }
            }
        }
    }

    let mode = Mode::Exact;
    let magnify_grid: Vec<Rational> = (-(n as i64)..=n as i64)
        .map(|j| Rational::ratio(j, n as i64))
        .collect();
    let magnified: Result<Vec<(Rational, Rational)>> =
        map_samples(parallel, magnify_grid, |t| -> Result<(Rational, Rational)> {
            let backend = expr::SeriesBackend::new(mode, *ctx);
            let arg = SeriesElem::from_rational(center, mode, ctx).add(
                &SeriesElem::monomial(1, Coeff::of_rational(&t, mode, ctx.work())),
                ctx,
            )?;
            let mut bindings = std::collections::BTreeMap::new();
            bindings.insert(var.to_string(), arg);
            let value = expr::eval_series(f, &backend, &bindings)?;
            let head = value.coeff_at(0).ok_or(Error::EmptyWindow)?;
            let quotient = value
                .sub(&SeriesElem::constant(head), ctx)?
                .div(&SeriesElem::epsilon(mode), ctx)?;
            let st = quotient.standard_part()?;
            Ok((t, st.to_rational()))
        })
        .into_iter()
        .collect();
    let magnified = magnified?;

    let mut ymin = Rational::from_int(-1);
    let mut ymax = Rational::one();
    for seg in &graph_segments {
        for (_, y) in seg {
            ymin = ymin.min(y.clone());
            ymax = ymax.max(y.clone());
        }
    }
    for (_, y) in &magnified {
        ymin = ymin.min(y.clone());
        ymax = ymax.max(y.clone());
    }
    let mut scene = PlotScene::new(
        (
            center - &Rational::one(),
            center + &Rational::one(),
            ymin,
            ymax,
        ),
        samples_per_unit,
    );
    for (i, seg) in graph_segments.into_iter().filter(|s| s.len() > 1).enumerate() {
        let label = if i == 0 {
            format!("{f}")
        } else {
            format!("{f} ({})", i + 1)
        };
        scene.polylines.push((label, seg));
    }
    scene
        .polylines
        .push((format!("microscope at {center}"), magnified));
    Ok(scene)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    /// Independent route to the base wave: distance to the nearest integer,
    /// via rounding instead of the branch formula.
    fn dist_to_nearest_int(x: &Rational) -> Rational {
        let rounded = Rational::from_bigint((x + &rat("1/2")).floor());
        (x - &rounded).abs()
    }

    #[test]
    fn saw_vertices_examples() {
        assert_eq!(
            saw_vertices(1).unwrap(),
            vec![
                (rat("0"), rat("0")),
                (rat("0"), rat("1")),
                (rat("1"), rat("1")),
            ]
        );
        assert_eq!(
            saw_vertices(2).unwrap(),
            vec![
                (rat("0"), rat("0")),
                (rat("0"), rat("1/2")),
                (rat("1/2"), rat("1/2")),
                (rat("1/2"), rat("1")),
                (rat("1"), rat("1")),
            ]
        );
        for n in 1..=64 {
            let v = saw_vertices(n).unwrap();
            assert_eq!(v.len(), 2 * n as usize + 1);
            assert_eq!(v[0], (rat("0"), rat("0")));
            assert_eq!(v[v.len() - 1], (rat("1"), rat("1")));
        }
        assert!(saw_vertices(0).is_err());
    }

    #[test]
    fn hyper_saw_phases() {
        // first tooth: (0,0) -> (0, ε) -> (ε, ε)
        let k0 = HyperIndex::new(rat("0"), 0);
        let top = luzin_saw_hyper(&k0, Phase::TopOfRiser).unwrap();
        assert!(top.x.is_zero());
        assert_eq!(top.y, RatFunc::x());

        // tooth at c = 1/2: starts exactly on (1/2, 1/2)
        let mid = HyperIndex::new(rat("1/2"), 0);
        let start = luzin_saw_hyper(&mid, Phase::Start).unwrap();
        assert_eq!(start.x, RatFunc::from_rational(rat("1/2")));
        assert_eq!(shadow(&start).unwrap(), (rat("1/2"), rat("1/2")));

        // k/N = c + jε for c = 1/3, j = 2
        let third = HyperIndex::new(rat("1/3"), 2);
        let p = luzin_saw_hyper(&third, Phase::Start).unwrap();
        let want = &RatFunc::from_rational(rat("1/3"))
            + &(&RatFunc::from_int(2) * &RatFunc::x());
        assert_eq!(p.x, want);
        assert_eq!(shadow(&p).unwrap(), (rat("1/3"), rat("1/3")));
    }

    #[test]
    fn hyper_saw_index_bounds() {
        // k = -1 is out of range
        assert!(matches!(
            luzin_saw_hyper(&HyperIndex::new(rat("0"), -1), Phase::Start),
            Err(Error::IndexOutOfRange(_))
        ));
        // k = N - 1 is the last tooth
        assert!(luzin_saw_hyper(&HyperIndex::new(rat("1"), -1), Phase::Start).is_ok());
        // k = N is out of range
        assert!(matches!(
            luzin_saw_hyper(&HyperIndex::new(rat("1"), 0), Phase::Start),
            Err(Error::IndexOutOfRange(_))
        ));
        // k = c·N + j stays in range for 0 < c < 1 and any moderate j
        assert!(luzin_saw_hyper(&HyperIndex::new(rat("1/7"), -1000), Phase::Start).is_ok());
    }

    #[test]
    fn microscope_maps_tooth_to_unit_step() {
        let factor = RatFunc::omega();
        for (c, j) in [("0", 0i64), ("1/2", 0), ("1/3", 2), ("2/3", -5)] {
            let index = HyperIndex::new(rat(c), j);
            let center = luzin_saw_hyper(&index, Phase::Start).unwrap();
            let want = [
                (rat("0"), rat("0")),
                (rat("0"), rat("1")),
                (rat("1"), rat("1")),
            ];
            for (phase, want) in Phase::ALL.iter().zip(want) {
                let p = luzin_saw_hyper(&index, *phase).unwrap();
                let m = microscope2d(&p, &center, &factor);
                assert_eq!(shadow(&m).unwrap(), want, "phase {phase:?} at c={c}, j={j}");
            }
        }
    }

    #[test]
    fn microscope_identities() {
        let p = HyperPoint2D::new(RatFunc::x(), RatFunc::from_int(3));
        // p = center maps to the origin
        let m = microscope2d(&p, &p, &RatFunc::omega());
        assert!(m.x.is_zero() && m.y.is_zero());
        // factor 1 is translation
        let center = HyperPoint2D::new(RatFunc::zero(), RatFunc::one());
        let t = microscope2d(&p, &center, &RatFunc::one());
        assert_eq!(t.x, RatFunc::x());
        assert_eq!(t.y, RatFunc::from_int(2));
    }

    #[test]
    fn shadow_examples() {
        let p = HyperPoint2D::new(
            &RatFunc::from_int(3) + &RatFunc::x(),
            &RatFunc::from_int(5) - &(&RatFunc::x() * &RatFunc::x()),
        );
        assert_eq!(shadow(&p).unwrap(), (rat("3"), rat("5")));
        let q = HyperPoint2D::new(RatFunc::omega(), RatFunc::zero());
        assert!(matches!(shadow(&q), Err(Error::NotFinite(_))));
    }

    #[test]
    fn saw_shadows_lie_on_the_diagonal() {
        for (c, j) in [("0", 0i64), ("0", 5), ("1/3", 2), ("5/7", -11), ("1/2", 0)] {
            let index = HyperIndex::new(rat(c), j);
            for phase in Phase::ALL {
                let p = luzin_saw_hyper(&index, phase).unwrap();
                let (sx, sy) = shadow(&p).unwrap();
                assert_eq!(sx, sy, "shadow off the diagonal at c={c}, j={j}");
                assert_eq!(sx, rat(c), "shadow at the wrong diagonal point");
            }
        }
    }

    #[test]
    fn triangle_wave_values() {
        // s1 peaks at 1/2 with value 1/2
        assert_eq!(triangle_wave(1, &rat("1/2")), rat("1/2"));
        // s_n(1/3) = (1/3) / 2^(n-1)
        for n in 1..=10 {
            let want = (&rat("1/3") / &Rational::from_int(2).pow_int(n - 1).unwrap()).unwrap();
            assert_eq!(triangle_wave(n as u32, &rat("1/3")), want);
        }
        // periodicity then scaling: s3(17/8) = s3(1/8) = 1/8
        assert_eq!(triangle_wave(3, &rat("17/8")), triangle_wave(3, &rat("1/8")));
        assert_eq!(triangle_wave(3, &rat("17/8")), rat("1/8"));
        // negative arguments use the periodic extension
        assert_eq!(triangle_wave(1, &rat("-1/4")), rat("1/4"));
    }

    #[test]
    fn triangle_base_matches_distance_to_nearest_integer() {
        for num in -24i64..=24 {
            for den in [1i64, 2, 3, 5, 8, 12] {
                let x = Rational::ratio(num, den);
                assert_eq!(triangle_base(&x), dist_to_nearest_int(&x), "at {x}");
            }
        }
    }

    #[test]
    fn triangle_wave_suprema() {
        for n in 1..=20u32 {
            let (peak_x, sup) = triangle_wave_peak(n);
            let want = Rational::from_int(2).pow_int(-(n as i64)).unwrap();
            assert_eq!(sup, want);
            // no sampled value exceeds the peak
            for j in 0..=64i64 {
                let x = Rational::ratio(j, 64);
                assert!(triangle_wave(n, &x) <= sup, "sample above peak at {x}");
            }
            assert_eq!(triangle_wave(n, &peak_x), sup);
        }
    }

    #[test]
    fn blancmange_dyadic_exactness() {
        // bl(2^-m) = m·2^-m, exactly, with zero tail bound
        for m in 1..=20i64 {
            let x = Rational::from_int(2).pow_int(-m).unwrap();
            let (value, tail) = blancmange(&x, m as u32);
            let want = &Rational::from_int(m) * &x;
            assert_eq!(value, want, "bl(2^-{m})");
            assert_eq!(tail, Rational::zero());
            // more terms change nothing at dyadic points
            let (value2, tail2) = blancmange(&x, m as u32 + 7);
            assert_eq!(value2, want);
            assert_eq!(tail2, Rational::zero());
        }
        assert_eq!(blancmange(&rat("0"), 5).0, rat("0"));
    }

    #[test]
    fn blancmange_at_one_third() {
        // bl(1/3) = 2/3: geometric series of s_n(1/3) = (1/3)/2^(n-1)
        let (value, tail) = blancmange(&rat("1/3"), 40);
        assert_eq!(tail, Rational::from_int(2).pow_int(-40).unwrap());
        let want = rat("2/3");
        assert!((&value - &want).abs() <= tail);
    }

    #[test]
    fn probe_grows_without_bound_at_zero() {
        for m in 1..=20u32 {
            assert_eq!(
                diff_quotient_probe(&rat("0"), m),
                Rational::from_int(m as i64)
            );
        }
    }

    #[test]
    fn probe_examples() {
        // (bl(1) - bl(1/2)) / (1/2) = (0 - 1/2)/(1/2) = -1
        assert_eq!(diff_quotient_probe(&rat("1/2"), 1), rat("-1"));
        assert_eq!(diff_quotient_probe(&rat("0"), 1), rat("1"));
        // non-dyadic points are exact too: cross-check against partial sums
        // at high depth (waves beyond level m cancel in the difference).
        let x0 = rat("1/3");
        let m = 6u32;
        let h = Rational::from_int(2).pow_int(-(m as i64)).unwrap();
        let deep = 40u32;
        let direct = (&(&blancmange(&(&x0 + &h), deep).0 - &blancmange(&x0, deep).0) / &h).unwrap();
        assert_eq!(diff_quotient_probe(&x0, m), direct);
    }

    #[test]
    fn saw_limit_check_values() {
        assert_eq!(saw_limit_check(1).unwrap(), (rat("1"), rat("2")));
        assert_eq!(saw_limit_check(4).unwrap(), (rat("1/4"), rat("2")));
        for n in 1..=64u32 {
            let (sup, len) = saw_limit_check(n).unwrap();
            assert_eq!(sup, Rational::ratio(1, n as i64));
            assert_eq!(len, rat("2"));
        }
    }

    #[test]
    fn scenes_build() {
        let saw = luzin_saw_finite(8).unwrap();
        assert_eq!(saw.polylines[0].1.len(), 17);

        let mag = magnified_tooth_scene(&HyperIndex::new(rat("1/3"), 0)).unwrap();
        // staircase through (-1,-1) .. (2,2) with duplicates removed
        assert!(mag.polylines[0].1.contains(&(rat("0"), rat("0"))));
        assert!(mag.polylines[0].1.contains(&(rat("0"), rat("1"))));
        assert!(mag.polylines[0].1.contains(&(rat("1"), rat("1"))));

        let tw = triangle_waves_scene(4, 32, false).unwrap();
        assert_eq!(tw.polylines.len(), 4);

        let bl = blancmange_scene(&[1, 2, 3, 8], 64, false).unwrap();
        assert_eq!(bl.polylines.len(), 4);
    }

    #[test]
    fn parallel_and_serial_sampling_agree() {
        let serial = blancmange_scene(&[1, 4, 8], 128, false).unwrap();
        let parallel = blancmange_scene(&[1, 4, 8], 128, true).unwrap();
        assert_eq!(serial, parallel);
        let ts = triangle_waves_scene(6, 100, false).unwrap();
        let tp = triangle_waves_scene(6, 100, true).unwrap();
        assert_eq!(ts, tp);
    }

    #[test]
    fn microscope_scene_shows_tangent_line() {
        let ctx = SeriesCtx::default();
        let f = expr::parse("x^2").unwrap();
        let scene = microscope_scene(&f, "x", &rat("3"), &ctx, 8, false).unwrap();
        let magnified = &scene.polylines[scene.polylines.len() - 1].1;
        // the microscope view of x^2 at 3 is the line t -> 6t
        for (t, y) in magnified {
            assert_eq!(y, &(&rat("6") * t), "tangent slope at t={t}");
        }
    }
}
