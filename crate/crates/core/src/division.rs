use rand::Rng;

use crate::error::{GaugeError, Result};
use crate::gauge::Gauge;
use crate::interval::Interval;

/// A cell together with its tag point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedInterval {
    pub cell: Interval,
    pub tag: f64,
}

impl TaggedInterval {
    pub fn new(cell: Interval, tag: f64) -> Result<Self> {
        if !cell.contains(tag) {
            return Err(GaugeError::InvalidArgument(format!(
                "tag {} outside cell [{}, {}]",
                tag,
                cell.lo(),
                cell.hi()
            )));
        }
        Ok(TaggedInterval { cell, tag })
    }

    pub fn width(&self) -> f64 {
        self.cell.width()
    }
}

/// A finite contiguous list of tagged cells covering a span end to end.
/// Tags may sit anywhere in their cell; the constructors in this module
/// always place them at cell endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    items: Vec<TaggedInterval>,
    span: Interval,
}

impl Division {
    pub fn new(items: Vec<TaggedInterval>) -> Result<Self> {
        if items.is_empty() {
            return Err(GaugeError::InvalidArgument(
                "division needs at least one cell".into(),
            ));
        }
        for w in items.windows(2) {
            if w[0].cell.hi() != w[1].cell.lo() {
                return Err(GaugeError::InvalidArgument(format!(
                    "cells not contiguous: [..,{}] then [{},..]",
                    w[0].cell.hi(),
                    w[1].cell.lo()
                )));
            }
        }
        let span = Interval::new(items[0].cell.lo(), items.last().unwrap().cell.hi())?;
        Ok(Division { items, span })
    }

    pub fn items(&self) -> &[TaggedInterval] {
        &self.items
    }

    pub fn span(&self) -> Interval {
        self.span
    }

    pub fn n_cells(&self) -> usize {
        self.items.len()
    }

    pub fn mesh(&self) -> f64 {
        self.items.iter().map(|t| t.width()).fold(0.0, f64::max)
    }

    /// Join two divisions of abutting spans into one.
    pub fn concat(self, other: Division) -> Result<Division> {
        if self.span.hi() != other.span.lo() {
            return Err(GaugeError::InvalidArgument(format!(
                "spans do not abut: [..,{}] then [{},..]",
                self.span.hi(),
                other.span.lo()
            )));
        }
        let mut items = self.items;
        items.extend(other.items);
        Division::new(items)
    }

    /// CSV rows `u,v,tag` with 17 significant digits (round-trips f64 exactly).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,tag\n");
        for t in &self.items {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                t.cell.lo(),
                t.cell.hi(),
                t.tag
            ));
        }
        out
    }
}

/// True iff every cell lies strictly inside the open ball (tag - g(tag), tag + g(tag)).
/// Tag placement is not constrained here: externally built divisions may tag anywhere.
pub fn is_delta_fine(d: &Division, g: &Gauge) -> Result<bool> {
    for t in d.items() {
        let delta = g.value_at(t.tag)?;
        if !(t.cell.lo() > t.tag - delta && t.cell.hi() < t.tag + delta) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How a cell that is still too wide gets split, and how ties between the two
/// admissible endpoint tags are broken.
enum SplitRule<'a> {
    /// Midpoint split, left endpoint preferred as tag.
    Deterministic,
    /// Split point uniform in [0.3, 0.7] of the cell, admissible tag chosen at random.
    Randomized(&'a mut dyn rand::RngCore),
}

fn fold_impl<V>(
    g: &Gauge,
    span: Interval,
    max_depth: u32,
    mut rule: SplitRule<'_>,
    visit: &mut V,
) -> Result<()>
where
    V: FnMut(Interval, f64) -> Result<()>,
{
    if !g.domain().contains_interval(&span) {
        return Err(GaugeError::InvalidArgument(format!(
            "span [{}, {}] outside gauge domain [{}, {}]",
            span.lo(),
            span.hi(),
            g.domain().lo(),
            g.domain().hi()
        )));
    }
    // explicit stack, left child on top, so cells are visited left to right
    let mut stack: Vec<(Interval, u32)> = vec![(span, 0)];
    while let Some((cell, depth)) = stack.pop() {
        let w = cell.width();
        let lo_fits = w < g.value_at(cell.lo())?;
        let hi_fits = w < g.value_at(cell.hi())?;
        let tag = match (&mut rule, lo_fits, hi_fits) {
            (_, false, false) => {
                if depth >= max_depth {
                    return Err(GaugeError::SubdivisionLimitExceeded {
                        lo: cell.lo(),
                        hi: cell.hi(),
                        max_depth,
                    });
                }
                let frac = match &mut rule {
                    SplitRule::Deterministic => 0.5,
                    SplitRule::Randomized(rng) => rng.gen_range(0.3..0.7),
                };
                let mid = cell.lo() + frac * w;
                if !(mid > cell.lo() && mid < cell.hi()) {
                    return Err(GaugeError::SubdivisionLimitExceeded {
                        lo: cell.lo(),
                        hi: cell.hi(),
                        max_depth,
                    });
                }
                stack.push((Interval::new(mid, cell.hi())?, depth + 1));
                stack.push((Interval::new(cell.lo(), mid)?, depth + 1));
                continue;
            }
            (SplitRule::Randomized(rng), true, true) => {
                if rng.gen_bool(0.5) {
                    cell.lo()
                } else {
                    cell.hi()
                }
            }
            (_, true, _) => cell.lo(),
            (_, false, true) => cell.hi(),
        };
        visit(cell, tag)?;
    }
    Ok(())
}

/// Stream the cells of a deterministic bisection division without materializing it.
/// Cells arrive in left-to-right order; each is tagged at one of its endpoints.
pub fn cousin_fold<V>(g: &Gauge, span: Interval, max_depth: u32, mut visit: V) -> Result<()>
where
    V: FnMut(Interval, f64) -> Result<()>,
{
    fold_impl(g, span, max_depth, SplitRule::Deterministic, &mut visit)
}

/// Streaming variant with randomized split points and tag choices, for
/// adversarial sampling of fine divisions.
pub fn cousin_fold_randomized<V>(
    g: &Gauge,
    span: Interval,
    max_depth: u32,
    rng: &mut dyn rand::RngCore,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(Interval, f64) -> Result<()>,
{
    fold_impl(g, span, max_depth, SplitRule::Randomized(rng), &mut visit)
}

/// Build a fine division of `span` under `g` by repeated bisection: a cell is
/// kept once its width drops strictly below the gauge at one of its endpoints,
/// which then becomes the tag.
pub fn cousin_divide(g: &Gauge, span: Interval, max_depth: u32) -> Result<Division> {
    let mut items = Vec::new();
    cousin_fold(g, span, max_depth, |cell, tag| {
        items.push(TaggedInterval { cell, tag });
        Ok(())
    })?;
    Division::new(items)
}

/// Randomized counterpart of cousin_divide.
pub fn cousin_divide_randomized(
    g: &Gauge,
    span: Interval,
    max_depth: u32,
    rng: &mut dyn rand::RngCore,
) -> Result<Division> {
    let mut items = Vec::new();
    cousin_fold_randomized(g, span, max_depth, rng, |cell, tag| {
        items.push(TaggedInterval { cell, tag });
        Ok(())
    })?;
    Division::new(items)
}

pub const DEFAULT_MAX_DEPTH: u32 = 60;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{endpoint_gauge, min_gauge, refinement_gauge, EndpointSide, Gauge};
    use crate::interval::Partition;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn single(tag: f64) -> Division {
        Division::new(vec![TaggedInterval::new(unit(), tag).unwrap()]).unwrap()
    }

    #[test]
    fn fine_under_wide_constant_gauge() {
        let g = Gauge::constant(unit(), 1.5);
        assert!(is_delta_fine(&single(0.0), &g).unwrap());
    }

    #[test]
    fn containment_is_open() {
        // width 1 cell tagged at 0 under g = 1: 1 is not < 0 + 1
        let g = Gauge::constant(unit(), 1.0);
        assert!(!is_delta_fine(&single(0.0), &g).unwrap());
    }

    #[test]
    fn cousin_single_cell_when_gauge_wide() {
        let g = Gauge::constant(unit(), 1.5);
        let d = cousin_divide(&g, unit(), DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(d.n_cells(), 1);
        assert_eq!(d.items()[0].tag, 0.0);
    }

    #[test]
    fn cousin_output_is_fine_for_linear_gauge() {
        let g = Gauge::new("lin", unit(), |x| (x / 2.0).max(0.01));
        let d = cousin_divide(&g, unit(), DEFAULT_MAX_DEPTH).unwrap();
        assert!(is_delta_fine(&d, &g).unwrap());
        for t in d.items() {
            assert!(t.tag == t.cell.lo() || t.tag == t.cell.hi());
        }
    }

    #[test]
    fn cousin_randomized_is_fine_and_deterministic_per_seed() {
        let g = Gauge::new("lin", unit(), |x| (x / 2.0).max(0.01));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d1 = cousin_divide_randomized(&g, unit(), DEFAULT_MAX_DEPTH, &mut rng).unwrap();
        assert!(is_delta_fine(&d1, &g).unwrap());
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let d2 = cousin_divide_randomized(&g, unit(), DEFAULT_MAX_DEPTH, &mut rng2).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn vanishing_gauge_exceeds_depth() {
        // gauge collapsing faster than float resolution near 0.3
        let g = Gauge::new("pinch", unit(), |x| {
            let d = (x - 0.3).abs();
            if d == 0.0 {
                f64::MIN_POSITIVE
            } else {
                d * d * f64::MIN_POSITIVE.max(1e-300)
            }
        });
        assert!(matches!(
            cousin_divide(&g, unit(), 40),
            Err(GaugeError::SubdivisionLimitExceeded { .. })
        ));
    }

    #[test]
    fn refinement_gauge_divisions_never_straddle() {
        let p = Partition::new(vec![0.0, 0.5, 1.0]).unwrap();
        let g = refinement_gauge(&p);
        let d = cousin_divide(&g, unit(), DEFAULT_MAX_DEPTH).unwrap();
        for t in d.items() {
            assert!(
                t.cell.hi() <= 0.5 || t.cell.lo() >= 0.5,
                "cell [{}, {}] straddles 0.5",
                t.cell.lo(),
                t.cell.hi()
            );
        }
    }

    #[test]
    fn left_endpoint_gauge_first_cell_tagged_at_lo() {
        let g = endpoint_gauge(unit(), EndpointSide::Left, 1.0, 0.25).unwrap();
        let d = cousin_divide(&g, unit(), DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(d.items()[0].tag, 0.0);
        assert!(is_delta_fine(&d, &g).unwrap());
    }

    #[test]
    fn concat_of_fine_divisions_is_fine() {
        let g = Gauge::new("lin", Interval::new(0.0, 2.0).unwrap(), |x| {
            0.05 + x / 10.0
        });
        let d1 = cousin_divide(&g, unit(), DEFAULT_MAX_DEPTH).unwrap();
        let d2 = cousin_divide(&g, Interval::new(1.0, 2.0).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
        let joined = d1.concat(d2).unwrap();
        assert_eq!(joined.span(), Interval::new(0.0, 2.0).unwrap());
        assert!(is_delta_fine(&joined, &g).unwrap());
    }

    #[test]
    fn min_gauge_fine_implies_both_fine() {
        let g1 = Gauge::new("a", unit(), |x| 0.02 + x / 3.0);
        let g2 = Gauge::new("b", unit(), |x| 0.05 + (1.0 - x) / 4.0);
        let m = min_gauge(&g1, &g2).unwrap();
        let d = cousin_divide(&m, unit(), DEFAULT_MAX_DEPTH).unwrap();
        assert!(is_delta_fine(&d, &g1).unwrap());
        assert!(is_delta_fine(&d, &g2).unwrap());
    }

    #[test]
    fn csv_shape() {
        let d = single(0.5);
        let csv = d.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "u,v,tag");
        assert_eq!(lines.next().unwrap().split(',').count(), 3);
    }

    proptest! {
        #[test]
        fn constant_gauge_cell_count_bound(c in 0.01f64..2.0, width in 0.1f64..10.0) {
            let span = Interval::new(0.0, width).unwrap();
            let g = Gauge::constant(span, c);
            let d = cousin_divide(&g, span, DEFAULT_MAX_DEPTH).unwrap();
            prop_assert!(is_delta_fine(&d, &g).unwrap());
            let bound = 2.0 * (width / c).ceil();
            prop_assert!((d.n_cells() as f64) <= bound.max(2.0));
        }

        #[test]
        fn randomized_output_fine_and_endpoint_tagged(seed in any::<u64>()) {
            let g = Gauge::new("lin", unit(), |x| (x / 2.0).max(0.02));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = cousin_divide_randomized(&g, unit(), DEFAULT_MAX_DEPTH, &mut rng).unwrap();
            prop_assert!(is_delta_fine(&d, &g).unwrap());
            for t in d.items() {
                prop_assert!(t.tag == t.cell.lo() || t.tag == t.cell.hi());
            }
        }
    }
}
