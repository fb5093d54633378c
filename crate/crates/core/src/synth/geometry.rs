//! Source shapes and the midpoint cell quadrature used for the volume integral.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modal::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Axis-aligned rectangle `[x1.0, x1.1] x [xperp.0, xperp.1]`.
    Rectangle {
        x1: (f64, f64),
        xperp: (f64, f64),
    },
    /// Simple polygon, vertices in order; membership by the even-odd rule.
    Polygon(Vec<Point>),
    Disc {
        center: Point,
        radius: f64,
    },
}

impl Shape {
    pub fn rectangle(x1: (f64, f64), xperp: (f64, f64)) -> Result<Self> {
        if !(x1.0 < x1.1 && xperp.0 < xperp.1) {
            return Err(Error::InvalidSource(format!(
                "degenerate rectangle {x1:?} x {xperp:?}"
            )));
        }
        Ok(Shape::Rectangle { x1, xperp })
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidSource(
                "polygon needs at least 3 vertices".into(),
            ));
        }
        if signed_area(&vertices).abs() <= f64::EPSILON {
            return Err(Error::InvalidSource("polygon has zero area".into()));
        }
        Ok(Shape::Polygon(vertices))
    }

    /// Rhombus with diagonals along the axes.
    pub fn rhombus(center: Point, half_range: f64, half_cross: f64) -> Result<Self> {
        if !(half_range > 0.0 && half_cross > 0.0) {
            return Err(Error::InvalidSource(
                "rhombus half-diagonals must be positive".into(),
            ));
        }
        Shape::polygon(vec![
            Point::new(center.x1 - half_range, center.xperp),
            Point::new(center.x1, center.xperp - half_cross),
            Point::new(center.x1 + half_range, center.xperp),
            Point::new(center.x1, center.xperp + half_cross),
        ])
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::InvalidSource("disc radius must be positive".into()));
        }
        Ok(Shape::Disc { center, radius })
    }

    /// L-shape as two abutting rectangles: a full-width foot `[x_lo, x_mid] x [p_lo, p_hi]`
    /// and a leg `[x_mid, x_hi] x [p_lo, p_leg]`.
    pub fn l_shape(
        x_lo: f64,
        x_mid: f64,
        x_hi: f64,
        p_lo: f64,
        p_hi: f64,
        p_leg: f64,
    ) -> Result<[Self; 2]> {
        Ok([
            Shape::rectangle((x_lo, x_mid), (p_lo, p_hi))?,
            Shape::rectangle((x_mid, x_hi), (p_lo, p_leg))?,
        ])
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Shape::Rectangle { x1, xperp } => {
                p.x1 >= x1.0 && p.x1 <= x1.1 && p.xperp >= xperp.0 && p.xperp <= xperp.1
            }
            Shape::Polygon(v) => even_odd(v, p),
            Shape::Disc { center, radius } => {
                let (dx, dy) = (p.x1 - center.x1, p.xperp - center.xperp);
                dx * dx + dy * dy <= radius * radius
            }
        }
    }

    /// `(x1_min, x1_max, xperp_min, xperp_max)`
    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        match self {
            Shape::Rectangle { x1, xperp } => (x1.0, x1.1, xperp.0, xperp.1),
            Shape::Polygon(v) => v.iter().fold(
                (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ),
                |(a, b, c, d), p| (a.min(p.x1), b.max(p.x1), c.min(p.xperp), d.max(p.xperp)),
            ),
            Shape::Disc { center, radius } => (
                center.x1 - radius,
                center.x1 + radius,
                center.xperp - radius,
                center.xperp + radius,
            ),
        }
    }

    pub fn range_extent(&self) -> (f64, f64) {
        let (a, b, _, _) = self.bbox();
        (a, b)
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.x1 * b.xperp - b.x1 * a.xperp
        })
        .sum::<f64>()
}

fn even_odd(v: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.xperp > p.xperp) != (b.xperp > p.xperp) {
            let t = (p.xperp - a.xperp) / (b.xperp - a.xperp);
            if p.x1 < a.x1 + t * (b.x1 - a.x1) {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Midpoint rule on an axis-aligned cell grid laid over each region's bounding box.
///
/// The grid is anchored at the lower-left corner of the box and the requested cell
/// size is shrunk so a whole number of cells spans each side; rectangles are then
/// integrated by the plain tensor midpoint rule. Cells that straddle a curved or
/// slanted boundary count in full when their midpoint is inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    cell: f64,
}

impl QuadratureRule {
    pub fn new(cell: f64) -> Result<Self> {
        if !(cell.is_finite() && cell > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "cell size must be positive, got {cell}"
            )));
        }
        Ok(Self { cell })
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn refined(&self) -> Self {
        Self {
            cell: self.cell / 2.0,
        }
    }

    pub fn cells_along(&self, extent: f64) -> usize {
        ((extent / self.cell) - 1e-9).ceil().max(1.0) as usize
    }
}

/// A single quadrature cell: midpoint, area weight and source amplitude there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub y: Point,
    pub weight: f64,
    pub amplitude: Complex64,
}

pub(crate) fn shape_nodes(
    shape: &Shape,
    amplitude: Complex64,
    rule: &QuadratureRule,
    out: &mut Vec<QuadNode>,
) {
    let (x0, x1, y0, y1) = shape.bbox();
    let (nx, ny) = (rule.cells_along(x1 - x0), rule.cells_along(y1 - y0));
    let (dx, dy) = ((x1 - x0) / nx as f64, (y1 - y0) / ny as f64);
    for i in 0..nx {
        let px = x0 + (i as f64 + 0.5) * dx;
        for j in 0..ny {
            let p = Point::new(px, y0 + (j as f64 + 0.5) * dy);
            if shape.contains(p) {
                out.push(QuadNode {
                    y: p,
                    weight: dx * dy,
                    amplitude,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let r = Shape::rhombus(Point::new(0.0, 1.0), 2.0, 0.5).unwrap();
        assert!(r.contains(Point::new(0.0, 1.0)));
        assert!(r.contains(Point::new(1.9, 1.0)));
        assert!(!r.contains(Point::new(1.5, 1.4)));
        assert!(!r.contains(Point::new(-2.1, 1.0)));
        let d = Shape::disc(Point::new(1.0, 1.0), 0.5).unwrap();
        assert!(d.contains(Point::new(1.3, 1.3)));
        assert!(!d.contains(Point::new(1.4, 1.4)));
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(Shape::rectangle((1.0, 1.0), (0.0, 1.0)).is_err());
        assert!(Shape::polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)]).is_err());
        assert!(Shape::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 2.0)
        ])
        .is_err());
        assert!(Shape::disc(Point::new(0.0, 0.0), 0.0).is_err());
        assert!(QuadratureRule::new(0.0).is_err());
    }

    #[test]
    fn node_areas_converge() {
        let one = Complex64::new(1.0, 0.0);
        let area = |s: &Shape, cell: f64| {
            let mut v = Vec::new();
            shape_nodes(s, one, &QuadratureRule::new(cell).unwrap(), &mut v);
            v.iter().map(|n| n.weight).sum::<f64>()
        };
        let rect = Shape::rectangle((-0.5, 0.5), (0.1, 0.2)).unwrap();
        assert!((area(&rect, 0.013) - 0.1).abs() < 1e-13);
        let disc = Shape::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        assert!((area(&disc, 0.005) - std::f64::consts::PI).abs() < 1e-3);
        let rh = Shape::rhombus(Point::new(0.0, 0.5), 0.6, 0.4).unwrap();
        assert!((area(&rh, 0.002) - 2.0 * 0.6 * 0.4).abs() < 2e-3);
    }
}
