//! Small plane/space vectors. Just enough arithmetic for potential evaluation
//! and moment integrals; not a linear-algebra library.

#[allow(unused_imports)]
use num_traits::Float;

/// Point in the plane the Dirac operator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Vec2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, c: f64) -> Self {
        Vec2::new(c * self.x, c * self.y)
    }

    pub fn add(self, o: Vec2) -> Self {
        Vec2::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Vec2) -> Self {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    pub fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }

    /// Polar angle in (-pi, pi].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Point in three-space; charge distributions are given in R^3 even though the
/// operator acts on functions of the plane x3 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, c: f64) -> Self {
        Vec3::new(c * self.x, c * self.y, c * self.z)
    }

    pub fn sub(self, o: Vec3) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    /// Embed a plane point at x3 = 0.
    pub fn from_plane(p: Vec2) -> Self {
        Vec3::new(p.x, p.y, 0.0)
    }
}
