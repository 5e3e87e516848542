use crate::error::{Error, Result};
use crate::numerics::simpson;

/// Uniform grid on the reference interval `[0, 1]` with an odd node count.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    spacing: f64,
}

/// Builds the uniform grid with `n_nodes` points.
pub fn build_grid(n_nodes: usize) -> Result<Grid> {
    Grid::new(n_nodes)
}

impl Grid {
    pub fn new(n_nodes: usize) -> Result<Self> {
        if n_nodes < 5 || n_nodes % 2 == 0 {
            return Err(Error::config(
                "n_nodes",
                format!("{n_nodes} nodes given; need an odd count of at least 5"),
            ));
        }
        let m = (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 / m).collect();
        nodes[n_nodes - 1] = 1.0;
        Ok(Self {
            nodes,
            spacing: 1.0 / m,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Index of the node at `x = 1/2`.
    pub fn mid_index(&self) -> usize {
        (self.nodes.len() - 1) / 2
    }

    /// Simpson integral of nodal values over `[0, 1]`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        simpson(values, self.spacing)
    }

    /// Simpson integral over the node range `lo..=hi`.
    pub fn integrate_range(&self, values: &[f64], lo: usize, hi: usize) -> f64 {
        simpson(&values[lo..=hi], self.spacing)
    }

    /// Evaluates `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}
