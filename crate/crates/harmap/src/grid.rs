//! Uniform rectangular grids carrying sampled scalar or complex fields,
//! with a per-node regular/singular mask.

/// A field sampled on a uniform (ξ, η) grid. Storage is row-major with ξ
/// varying fastest: index = j * nx + i for node (ξ_i, η_j). `mask[k]` is
/// true on regular nodes; masked nodes are excluded from norms.
#[derive(Debug, Clone)]
pub struct FieldGrid<T> {
    pub nx: usize,
    pub ny: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub values: Vec<T>,
    pub mask: Vec<bool>,
}

impl<T: Clone> FieldGrid<T> {
    pub fn from_fn(
        nx: usize,
        ny: usize,
        x_range: (f64, f64),
        y_range: (f64, f64),
        mut f: impl FnMut(f64, f64) -> T,
    ) -> Self {
        assert!(nx >= 3 && ny >= 3, "grid needs at least 3 nodes per axis");
        assert!(x_range.1 > x_range.0 && y_range.1 > y_range.0);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = y_range.0 + (y_range.1 - y_range.0) * j as f64 / (ny - 1) as f64;
            for i in 0..nx {
                let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / (nx - 1) as f64;
                values.push(f(x, y));
            }
        }
        Self { nx, ny, x_range, y_range, values, mask: vec![true; nx * ny] }
    }

    pub fn hx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_range.0 + (self.x_range.1 - self.x_range.0) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_range.0 + (self.y_range.1 - self.y_range.0) * j as f64 / (self.ny - 1) as f64
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.values[self.idx(i, j)]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        let k = self.idx(i, j);
        &mut self.values[k]
    }

    pub fn is_regular(&self, i: usize, j: usize) -> bool {
        self.mask[self.idx(i, j)]
    }

    pub fn set_masked(&mut self, i: usize, j: usize) {
        let k = self.idx(i, j);
        self.mask[k] = false;
    }

    /// Same geometry, values produced by `f` from the node values.
    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> FieldGrid<U> {
        FieldGrid {
            nx: self.nx,
            ny: self.ny,
            x_range: self.x_range,
            y_range: self.y_range,
            values: self.values.iter().map(f).collect(),
            mask: self.mask.clone(),
        }
    }

    pub fn same_geometry(&self, other: &FieldGrid<impl Clone>) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && self.x_range == other.x_range
            && self.y_range == other.y_range
    }

    /// True when (i, j) and its 4 (or 8 with `diagonal`) neighbours are
    /// all regular — the stencil footprint of the FD operators.
    pub fn stencil_regular(&self, i: usize, j: usize) -> bool {
        if i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny {
            return false;
        }
        self.is_regular(i, j)
            && self.is_regular(i - 1, j)
            && self.is_regular(i + 1, j)
            && self.is_regular(i, j - 1)
            && self.is_regular(i, j + 1)
    }
}
