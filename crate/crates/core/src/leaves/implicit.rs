//! 4-dimensional maps defined implicitly through quadratic leaves: solve for
//! the aux coordinates, then apply the 6-dimensional map.

use rand::Rng;

use crate::catalog::{GuardLog, MapKind};
use crate::error::Result;

use super::quadratic::{solve_dihedral_leaf, solve_dnls_leaf, Branch, LeafRoots};

/// Relative agreement required between an image aux coordinate and the leaf
/// root at the image point.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImplicitMap {
    /// Leaves `X - X² x1 x2 = a`, evaluated with the original DNLS map.
    Dnls4,
    /// Leaves `(1-x1²)(1-x2²)X² + (2x1x2 - a)X + 1 = 0`, evaluated with the
    /// dihedral map at unit Lax parameters.
    Dihedral4,
}

/// Image of an implicit map together with the solved aux coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitImage {
    pub u: [f64; 2],
    pub v: [f64; 2],
    /// `(X, Y)` solved at the input.
    pub aux_in: (f64, f64),
    /// `(U, V)` produced by the 6-dimensional map.
    pub aux_out: (f64, f64),
}

impl ImplicitMap {
    pub fn name(&self) -> &'static str {
        match self {
            ImplicitMap::Dnls4 => "dnls4-implicit",
            ImplicitMap::Dihedral4 => "dihedral4-implicit",
        }
    }

    pub fn solve_leaf(&self, x1: f64, x2: f64, k: f64) -> Result<LeafRoots> {
        match self {
            ImplicitMap::Dnls4 => solve_dnls_leaf(x1, x2, k),
            ImplicitMap::Dihedral4 => solve_dihedral_leaf(x1, x2, k),
        }
    }

    pub fn eval(
        &self,
        x: [f64; 2],
        y: [f64; 2],
        a: f64,
        b: f64,
        branch: (Branch, Branch),
    ) -> Result<ImplicitImage> {
        let big_x = self.solve_leaf(x[0], x[1], a)?.select(branch.0);
        let big_y = self.solve_leaf(y[0], y[1], b)?.select(branch.1);
        let p = [x[0], x[1], big_x];
        let q = [y[0], y[1], big_y];
        let mut log = GuardLog::silent();
        let (u, v) = match self {
            ImplicitMap::Dnls4 => MapKind::Dnls6Orig.apply(&p, &q, &0.0, &0.0, &mut log)?,
            ImplicitMap::Dihedral4 => MapKind::Dihedral6.apply(&p, &q, &1.0, &1.0, &mut log)?,
        };
        Ok(ImplicitImage {
            u: [u[0], u[1]],
            v: [v[0], v[1]],
            aux_in: (big_x, big_y),
            aux_out: (u[2], v[2]),
        })
    }

    /// The image aux coordinates lie on the selected branch of the image
    /// leaves, so the 4-dimensional map is single-valued along this step.
    pub fn is_consistent(
        &self,
        img: &ImplicitImage,
        a: f64,
        b: f64,
        branch: (Branch, Branch),
    ) -> bool {
        let on_branch = |pt: [f64; 2], k: f64, br: Branch, value: f64| {
            self.solve_leaf(pt[0], pt[1], k).is_ok_and(|r| {
                let root = r.select(br);
                (root - value).abs() <= CONSISTENCY_TOLERANCE * value.abs().max(1.0)
            })
        };
        on_branch(img.u, a, branch.0, img.aux_out.0) && on_branch(img.v, b, branch.1, img.aux_out.1)
    }

    /// Draws a float state from the region the implicit map is sampled on.
    pub fn draw(&self, rng: &mut impl Rng) -> ([[f64; 2]; 3], [f64; 3]) {
        let (span, lo, hi) = match self {
            ImplicitMap::Dnls4 => (1.0, -1.0, 1.0),
            ImplicitMap::Dihedral4 => (0.6, 2.5, 5.0),
        };
        let mut pt = || [rng.gen_range(-span..span), rng.gen_range(-span..span)];
        let pts = [pt(), pt(), pt()];
        let params = [
            rng.gen_range(lo..hi),
            rng.gen_range(lo..hi),
            rng.gen_range(lo..hi),
        ];
        (pts, params)
    }
}

/// Max-norm gap between the two sides of the YB equation, or `None` when an
/// intermediate step leaves the selected branch.
pub fn implicit_yb_residual(
    map: ImplicitMap,
    pts: [[f64; 2]; 3],
    params: [f64; 3],
    branch: (Branch, Branch),
) -> Result<Option<f64>> {
    let [a, b, c] = params;
    let mut consistent = true;
    let mut step = |p: [f64; 2], q: [f64; 2], ka: f64, kb: f64| -> Result<([f64; 2], [f64; 2])> {
        let img = map.eval(p, q, ka, kb, branch)?;
        consistent &= map.is_consistent(&img, ka, kb, branch);
        Ok((img.u, img.v))
    };
    let [x, y, z] = pts;

    let (y1, z1) = step(y, z, b, c)?;
    let (x1, z2) = step(x, z1, a, c)?;
    let (x2, y2) = step(x1, y1, a, b)?;
    let left = [x2, y2, z2];

    let (x1, y1) = step(x, y, a, b)?;
    let (x2, z1) = step(x1, z, a, c)?;
    let (y2, z2) = step(y1, z1, b, c)?;
    let right = [x2, y2, z2];

    if !consistent {
        return Ok(None);
    }
    let gap = left
        .iter()
        .flatten()
        .zip(right.iter().flatten())
        .fold(0.0f64, |m, (l, r)| m.max((l - r).abs()));
    Ok(Some(gap))
}
