use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Uniform grid of `n_cells` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            n_cells,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::Config(format!(
                "grid bounds [{}, {}] are not an interval",
                self.x_min, self.x_max
            )));
        }
        if self.n_cells < 8 {
            return Err(Error::Config(format!(
                "grid needs at least 8 cells (got {})",
                self.n_cells
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Left edge of cell `i`; `edge(n_cells)` is `x_max`.
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.n_cells {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Index of the cell containing `x` (right-continuous at interior edges,
    /// `x_max` belongs to the last cell).
    pub fn cell_index(&self, x: f64) -> Option<usize> {
        if !(x >= self.x_min && x <= self.x_max) {
            return None;
        }
        let i = ((x - self.x_min) / self.dx()).floor() as usize;
        Some(i.min(self.n_cells - 1))
    }
}

/// Cell averages of the conserved variables at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub grid: Grid1D,
    pub cells: Vec<StateVector>,
}

impl FieldSnapshot {
    pub fn new(time: f64, grid: Grid1D, cells: Vec<StateVector>) -> Result<Self> {
        if cells.len() != grid.n_cells {
            return Err(Error::Config(format!(
                "{} cells for a grid of {}",
                cells.len(),
                grid.n_cells
            )));
        }
        Ok(Self { time, grid, cells })
    }

    pub fn constant(grid: Grid1D, u: StateVector) -> Self {
        Self {
            time: 0.0,
            grid,
            cells: vec![u; grid.n_cells],
        }
    }

    /// `sum_i U_i dx`.
    pub fn total(&self) -> StateVector {
        let dx = self.grid.dx();
        let mut acc = StateVector::zeros(self.cells[0].dim());
        for c in &self.cells {
            acc += *c;
        }
        acc * dx
    }

    /// Cells `[lo, hi)` as a field on the corresponding subgrid.
    pub fn subfield(&self, lo: usize, hi: usize) -> Result<Self> {
        if lo >= hi || hi > self.grid.n_cells || hi - lo < 8 {
            return Err(Error::OutOfRange(format!(
                "subfield [{lo}, {hi}) of {} cells",
                self.grid.n_cells
            )));
        }
        let grid = Grid1D {
            x_min: self.grid.edge(lo),
            x_max: self.grid.edge(hi),
            n_cells: hi - lo,
        };
        Ok(Self {
            time: self.time,
            grid,
            cells: self.cells[lo..hi].to_vec(),
        })
    }
}
