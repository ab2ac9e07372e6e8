//! Representations of a finite poset given by its Hasse quiver.
//!
//! Grid modules and claw modules both flatten to a [`Rep`]: a dimension per
//! vertex and a matrix per covering arrow. Morphism spaces, submodules and the
//! generic decomposer only need naturality along the arrows, so they are
//! written once here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Mat, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub map: Mat,
}

/// A family of per-vertex matrices: a morphism, endomorphism, or submodule basis.
pub type VertexMaps = Vec<Mat>;

/// Number of random elements of the hom space tried before declaring two
/// representations non-isomorphic.
pub const ISO_TRIALS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    field: PrimeField,
    dims: Vec<usize>,
    arrows: Vec<Arrow>,
}

impl Rep {
    pub fn new(field: PrimeField, dims: Vec<usize>, arrows: Vec<Arrow>) -> Self {
        debug_assert!(arrows
            .iter()
            .all(|a| a.map.shape() == (dims[a.dst], dims[a.src])));
        Rep {
            field,
            dims,
            arrows,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn same_quiver(&self, other: &Rep) -> bool {
        self.field == other.field
            && self.dims.len() == other.dims.len()
            && self.arrows.len() == other.arrows.len()
            && self
                .arrows
                .iter()
                .zip(&other.arrows)
                .all(|(a, b)| a.src == b.src && a.dst == b.dst)
    }

    /// A basis of `Hom(self, other)`: all families `φ_v` with
    /// `other_a · φ_src = φ_dst · self_a` for every arrow `a`.
    pub fn hom_basis(&self, other: &Rep) -> Result<Vec<VertexMaps>> {
        if !self.same_quiver(other) {
            return Err(Error::Incompatible);
        }
        let f = self.field;
        let nv = self.dims.len();
        let mut offsets = Vec::with_capacity(nv + 1);
        let mut total = 0;
        for v in 0..nv {
            offsets.push(total);
            total += other.dims[v] * self.dims[v];
        }
        if total == 0 {
            return Ok(Vec::new());
        }
        let nrows: usize = self
            .arrows
            .iter()
            .map(|a| other.dims[a.dst] * self.dims[a.src])
            .sum();
        let mut eq = Mat::zeros(nrows, total);
        let mut row = 0;
        for (a, b) in self.arrows.iter().zip(&other.arrows) {
            let (s, t) = (a.src, a.dst);
            let (xs, xt) = (self.dims[s], self.dims[t]);
            let (ys, yt) = (other.dims[s], other.dims[t]);
            for r in 0..yt {
                for c in 0..xs {
                    // (Y_a φ_s)[r, c] = Σ_k Y_a[r, k] φ_s[k, c]
                    for k in 0..ys {
                        let y = b.map.get(r, k);
                        if y != 0 {
                            let col = offsets[s] + k * xs + c;
                            eq.set(row, col, f.add(eq.get(row, col), y));
                        }
                    }
                    // (φ_t X_a)[r, c] = Σ_k φ_t[r, k] X_a[k, c]
                    for k in 0..xt {
                        let x = a.map.get(k, c);
                        if x != 0 {
                            let col = offsets[t] + r * xt + k;
                            eq.set(row, col, f.sub(eq.get(row, col), x));
                        }
                    }
                    row += 1;
                }
            }
        }
        let ker = eq.kernel_basis(f);
        Ok((0..ker.cols())
            .map(|j| {
                (0..nv)
                    .map(|v| {
                        let (r, c) = (other.dims[v], self.dims[v]);
                        let data = (0..r * c).map(|i| ker.get(offsets[v] + i, j)).collect();
                        Mat::from_vec(r, c, data).unwrap()
                    })
                    .collect()
            })
            .collect())
    }

    pub fn end_basis(&self) -> Vec<VertexMaps> {
        self.hom_basis(self).expect("same quiver")
    }

    /// Index of the first arrow along which `phi: self -> other` is not natural.
    pub fn naturality_failure(&self, other: &Rep, phi: &[Mat]) -> Option<usize> {
        let f = self.field;
        self.arrows
            .iter()
            .zip(&other.arrows)
            .position(|(a, b)| b.map.mul(f, &phi[a.src]) != phi[a.dst].mul(f, &a.map))
    }

    /// Random linear combination of a basis of morphisms.
    pub fn random_combination(
        &self,
        basis: &[VertexMaps],
        target_dims: &[usize],
        rng: &mut ChaCha8Rng,
    ) -> VertexMaps {
        let f = self.field;
        let mut acc: VertexMaps = self
            .dims
            .iter()
            .zip(target_dims)
            .map(|(&c, &r)| Mat::zeros(r, c))
            .collect();
        for b in basis {
            let c = f.random(rng);
            for (slot, m) in acc.iter_mut().zip(b) {
                *slot = slot.add(f, &m.scale(f, c));
            }
        }
        acc
    }

    /// Searches for an isomorphism `self -> other` among random elements of the
    /// hom space. `None` means none was found in [`ISO_TRIALS`] attempts.
    pub fn find_isomorphism(&self, other: &Rep, seed: u64) -> Result<Option<VertexMaps>> {
        if !self.same_quiver(other) {
            return Err(Error::Incompatible);
        }
        if self.dims != other.dims {
            return Ok(None);
        }
        let f = self.field;
        let basis = self.hom_basis(other)?;
        if self.total_dim() == 0 {
            return Ok(Some(self.dims.iter().map(|_| Mat::zeros(0, 0)).collect()));
        }
        if basis.is_empty() {
            return Ok(None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ISO_TRIALS {
            let phi = self.random_combination(&basis, &other.dims, &mut rng);
            if phi.iter().all(|m| m.is_invertible(f)) {
                return Ok(Some(phi));
            }
        }
        Ok(None)
    }

    /// The subrepresentation spanned pointwise by the columns of `basis`.
    /// Each `basis[v]` must have independent columns and the family must be
    /// closed under the arrows.
    pub fn subrep(&self, basis: &[Mat]) -> Result<Rep> {
        let f = self.field;
        let mut lefts = Vec::with_capacity(basis.len());
        for (v, b) in basis.iter().enumerate() {
            if b.rows() != self.dims[v] {
                return Err(Error::DimensionMismatch(format!(
                    "submodule basis at vertex {v} lives in the wrong space"
                )));
            }
            lefts.push(b.left_inverse(f)?);
        }
        let mut arrows = Vec::with_capacity(self.arrows.len());
        for a in &self.arrows {
            let image = a.map.mul(f, &basis[a.src]);
            let coords = lefts[a.dst].mul(f, &image);
            if basis[a.dst].mul(f, &coords) != image {
                return Err(Error::Inconsistency(format!(
                    "submodule is not closed along arrow {} -> {}",
                    a.src, a.dst
                )));
            }
            arrows.push(Arrow {
                src: a.src,
                dst: a.dst,
                map: coords,
            });
        }
        Ok(Rep::new(f, basis.iter().map(Mat::cols).collect(), arrows))
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if !self.same_quiver(other) {
            return Err(Error::Incompatible);
        }
        Ok(Rep::new(
            self.field,
            self.dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a + b)
                .collect(),
            self.arrows
                .iter()
                .zip(&other.arrows)
                .map(|(a, b)| Arrow {
                    src: a.src,
                    dst: a.dst,
                    map: a.map.block_diag(&b.map),
                })
                .collect(),
        ))
    }
}
