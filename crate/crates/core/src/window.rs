//! Finite realizations of a walk on the sites `[-N, N]`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};
use crate::walk::{CoeffSite, WalkSpec};

pub const MIN_WINDOW: usize = 2;

/// The walk restricted to rows and columns in `[-N, N]`.
///
/// Entries whose row lies outside the window are dropped, so only the
/// interior columns `[-N+1, N-1]` are complete columns of `U`. The two
/// boundary columns are truncated and carry no unitarity guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowOperator {
    half_width: usize,
    matrix: DMatrix<C64>,
}

impl WindowOperator {
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn n(&self) -> i64 {
        self.half_width as i64
    }

    pub fn dim(&self) -> usize {
        2 * (2 * self.half_width + 1)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn contains(&self, site: i64) -> bool {
        site.abs() <= self.n()
    }

    pub fn is_interior(&self, site: i64) -> bool {
        site.abs() < self.n()
    }

    /// Row/column index of `(site, spin)`, spin 0 = e₁, 1 = e₂.
    pub fn index(&self, site: i64, spin: usize) -> usize {
        debug_assert!(self.contains(site) && spin < 2);
        2 * (site + self.n()) as usize + spin
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        -self.n()..=self.n()
    }

    /// Block `P_m U P_n`.
    pub fn block(&self, m: i64, n: i64) -> Matrix2<C64> {
        let (i, j) = (self.index(m, 0), self.index(n, 0));
        Matrix2::new(
            self.matrix[(i, j)],
            self.matrix[(i, j + 1)],
            self.matrix[(i + 1, j)],
            self.matrix[(i + 1, j + 1)],
        )
    }

    pub fn from_matrix(half_width: usize, matrix: DMatrix<C64>) -> Self {
        assert_eq!(matrix.nrows(), 2 * (2 * half_width + 1));
        WindowOperator { half_width, matrix }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &WindowOperator) -> f64 {
        assert_eq!(self.half_width, other.half_width, "window sizes differ");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Builds the window from an arbitrary site map.
pub fn window_from_sites<F>(half_width: usize, site: F) -> Result<WindowOperator>
where
    F: Fn(i64) -> CoeffSite,
{
    if half_width < MIN_WINDOW {
        return Err(WalkError::WindowTooSmall { got: half_width, min: MIN_WINDOW });
    }
    let n = half_width as i64;
    let dim = 2 * (2 * half_width + 1);
    let mut op = WindowOperator { half_width, matrix: DMatrix::zeros(dim, dim) };
    for col in -n..=n {
        let e = site(col).entries();
        for spin in 0..2 {
            let j = op.index(col, spin);
            if col > -n {
                let i = op.index(col - 1, 0);
                op.matrix[(i, j)] = e[0][spin];
            }
            if col < n {
                let i = op.index(col + 1, 1);
                op.matrix[(i, j)] = e[1][spin];
            }
        }
    }
    Ok(op)
}

pub fn build_window_operator(spec: &WalkSpec, half_width: usize) -> Result<WindowOperator> {
    window_from_sites(half_width, |n| spec.site(n))
}

/// Max-norm of `U*U - I` over the interior columns.
pub fn check_unitary(op: &WindowOperator) -> f64 {
    let n = op.n();
    let lo = op.index(-n + 1, 0);
    let hi = op.index(n - 1, 1);
    let m = op.matrix();
    let mut dev = 0.0f64;
    for i in lo..=hi {
        for j in lo..=hi {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..m.nrows() {
                acc += m[(k, i)].conj() * m[(k, j)];
            }
            if i == j {
                acc -= 1.0;
            }
            dev = dev.max(acc.norm());
        }
    }
    dev
}

/// Singular values of a 2×2 block, descending.
pub fn singular_values(block: &Matrix2<C64>) -> [f64; 2] {
    let sv = block.singular_values();
    let (a, b) = (sv[0], sv[1]);
    if a >= b {
        [a, b]
    } else {
        [b, a]
    }
}
