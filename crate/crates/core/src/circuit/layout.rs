use alloc::vec::Vec;

use crate::{Error, Result};

/// Two-row qubit grid carrying the significance roles of an image register.
///
/// The register holds `vertical` row-index qubits followed by `horizontal`
/// column-index qubits, each group most significant first, so register qubit
/// `i < vertical` is `v_{i+1}` and qubit `vertical + i` is `h_{i+1}`.
///
/// On the grid, column `c` holds `h_{c+1}` in the top row and `v_{c+1}` in
/// the bottom row; significance falls from left to right. When the counts
/// differ by one, the last column holds a single qubit of the longer axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridLayout {
    vertical: usize,
    horizontal: usize,
}

impl GridLayout {
    pub fn new(vertical: usize, horizontal: usize) -> Result<Self> {
        if vertical + horizontal == 0 {
            return Err(Error::Schedule("layout needs at least one qubit"));
        }
        if vertical.abs_diff(horizontal) > 1 {
            return Err(Error::Schedule("vertical and horizontal qubit counts must differ by at most one"));
        }
        Ok(Self { vertical, horizontal })
    }

    /// Balanced layout for `n` qubits; an odd qubit goes to the horizontal axis.
    pub fn for_qubits(n: usize) -> Result<Self> {
        Self::new(n / 2, n - n / 2)
    }

    /// Layout for a `2^j x 2^k` image.
    pub fn for_image(height: usize, width: usize) -> Result<Self> {
        let j = crate::exact_log2(height).ok_or(Error::Dimensions {
            height,
            width,
            reason: "height must be a power of two",
        })?;
        let k = crate::exact_log2(width).ok_or(Error::Dimensions {
            height,
            width,
            reason: "width must be a power of two",
        })?;
        Self::new(j, k).map_err(|_| Error::Dimensions {
            height,
            width,
            reason: "axis qubit counts must differ by at most one",
        })
    }

    pub fn vertical(&self) -> usize {
        self.vertical
    }

    pub fn horizontal(&self) -> usize {
        self.horizontal
    }

    pub fn num_qubits(&self) -> usize {
        self.vertical + self.horizontal
    }

    pub fn columns(&self) -> usize {
        self.vertical.max(self.horizontal)
    }

    /// Register qubit of `v_{i+1}`.
    pub fn vertical_qubit(&self, i: usize) -> Option<usize> {
        (i < self.vertical).then_some(i)
    }

    /// Register qubit of `h_{i+1}`.
    pub fn horizontal_qubit(&self, i: usize) -> Option<usize> {
        (i < self.horizontal).then_some(self.vertical + i)
    }

    /// Qubits of column `c`, top row first.
    pub fn column(&self, c: usize) -> Vec<usize> {
        self.horizontal_qubit(c).into_iter().chain(self.vertical_qubit(c)).collect()
    }

    /// `(vertical, horizontal)` qubit counts within the leftmost `cols` columns.
    pub fn active_counts(&self, cols: usize) -> (usize, usize) {
        (cols.min(self.vertical), cols.min(self.horizontal))
    }

    /// Sorted register qubits of the leftmost `cols` columns.
    pub fn qubits_in_columns(&self, cols: usize) -> Vec<usize> {
        let (a, b) = self.active_counts(cols);
        (0..a).chain(self.vertical..self.vertical + b).collect()
    }

    /// Qubits of the leftmost `cols` columns in layer order: column by
    /// column, top row before bottom row.
    pub fn layer_order(&self, cols: usize) -> Vec<usize> {
        (0..cols.min(self.columns())).flat_map(|c| self.column(c)).collect()
    }

    /// Nearest-neighbor edges among the leftmost `cols` columns. Per column,
    /// left to right: the vertical rung, the top-row edge to the next
    /// column, then the bottom-row edge to the next column.
    pub fn edges_in_columns(&self, cols: usize) -> Vec<(usize, usize)> {
        let cols = cols.min(self.columns());
        let mut edges = Vec::new();
        for c in 0..cols {
            if let (Some(h), Some(v)) = (self.horizontal_qubit(c), self.vertical_qubit(c)) {
                edges.push((h, v));
            }
            if c + 1 < cols {
                if let (Some(a), Some(b)) = (self.horizontal_qubit(c), self.horizontal_qubit(c + 1)) {
                    edges.push((a, b));
                }
                if let (Some(a), Some(b)) = (self.vertical_qubit(c), self.vertical_qubit(c + 1)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}
