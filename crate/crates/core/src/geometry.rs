use core::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point or displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    /// Rotation by -90°: the outward normal direction of a counter-clockwise edge.
    #[inline]
    pub fn perp_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = libm::sincos(angle);
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
#[inline]
pub fn twice_signed_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Area and centroid of a triangle or quadrilateral given counter-clockwise.
///
/// Quads are split along the 0-2 diagonal and the two triangle centroids
/// are combined with area weights, which is the exact polygon centroid.
pub fn polygon_area_centroid(pts: &[Vec2]) -> (f64, Vec2) {
    match pts {
        [a, b, c] => {
            let area = 0.5 * twice_signed_area(*a, *b, *c);
            (area, (*a + *b + *c) * (1.0 / 3.0))
        }
        [a, b, c, d] => {
            let a1 = 0.5 * twice_signed_area(*a, *b, *c);
            let a2 = 0.5 * twice_signed_area(*a, *c, *d);
            let c1 = (*a + *b + *c) * (1.0 / 3.0);
            let c2 = (*a + *c + *d) * (1.0 / 3.0);
            let area = a1 + a2;
            (area, (c1 * a1 + c2 * a2) * (1.0 / area))
        }
        _ => unreachable!("cells have 3 or 4 vertices"),
    }
}
