//! Grayscale images and their mapping to probability vectors.
//!
//! Pixel `(r, c)` of a `2^j x 2^k` image maps to outcome `x = r 2^k + c`:
//! the `j` row bits are the most significant qubits `v_1..v_j`, followed by
//! the `k` column bits `h_1..h_k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::ProbabilityVector;
use crate::{exact_log2, Error, Result};

/// Row-major grayscale image with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Dimensions { height, width, reason: "image is empty" });
        }
        if pixels.len() != height * width {
            return Err(Error::Length { expected: height * width, found: pixels.len() });
        }
        if pixels.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Intensity);
        }
        Ok(Self { height, width, pixels })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self { height, width, pixels: vec![0.0; height * width] }
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(height, width, pixels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn total_intensity(&self) -> f64 {
        self.pixels.iter().sum()
    }

    /// Copy of the `h x w` window whose top-left pixel is `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, h: usize, w: usize) -> Result<Self> {
        if row + h > self.height || col + w > self.width {
            return Err(Error::Dimensions {
                height: self.height,
                width: self.width,
                reason: "crop window out of bounds",
            });
        }
        let mut pixels = Vec::with_capacity(h * w);
        for r in row..row + h {
            pixels.extend_from_slice(&self.pixels[r * self.width + col..r * self.width + col + w]);
        }
        Ok(Self { height: h, width: w, pixels })
    }

    fn paste(&mut self, tile: &GrayImage, row: usize, col: usize) {
        for r in 0..tile.height {
            let dst = (row + r) * self.width + col;
            self.pixels[dst..dst + tile.width].copy_from_slice(&tile.pixels[r * tile.width..(r + 1) * tile.width]);
        }
    }
}

/// Zero-pads each axis up to the next power of two; content stays top-left.
pub fn pad_to_pow2(image: &GrayImage) -> GrayImage {
    let (h, w) = (image.height.next_power_of_two(), image.width.next_power_of_two());
    if (h, w) == (image.height, image.width) {
        return image.clone();
    }
    let mut out = GrayImage::zeros(h, w);
    out.paste(image, 0, 0);
    out
}

/// Block-mean pooling by `row_factor x col_factor`.
pub fn downsample(image: &GrayImage, row_factor: usize, col_factor: usize) -> Result<GrayImage> {
    if row_factor == 0 || col_factor == 0 || image.height % row_factor != 0 || image.width % col_factor != 0 {
        return Err(Error::Dimensions {
            height: image.height,
            width: image.width,
            reason: "dimensions not divisible by the pooling factor",
        });
    }
    let (h, w) = (image.height / row_factor, image.width / col_factor);
    let scale = 1.0 / (row_factor * col_factor) as f64;
    let mut pixels = vec![0.0; h * w];
    for r in 0..image.height {
        let row = &image.pixels[r * image.width..(r + 1) * image.width];
        let out = &mut pixels[(r / row_factor) * w..(r / row_factor + 1) * w];
        for (c, &v) in row.iter().enumerate() {
            out[c / col_factor] += v;
        }
    }
    for p in &mut pixels {
        *p = (*p * scale).clamp(0.0, 1.0);
    }
    Ok(GrayImage { height: h, width: w, pixels })
}

/// Pools a `2^j x 2^k` image down to `2^rows x 2^cols`, keeping the most
/// significant bits of each axis.
pub fn pool_to_bits(image: &GrayImage, row_bits: usize, col_bits: usize) -> Result<GrayImage> {
    let (j, k) = pow2_dims(image)?;
    if row_bits > j || col_bits > k {
        return Err(Error::Resolution { requested: row_bits + col_bits, available: j + k });
    }
    downsample(image, 1 << (j - row_bits), 1 << (k - col_bits))
}

fn pow2_dims(image: &GrayImage) -> Result<(usize, usize)> {
    let err =
        Error::Dimensions { height: image.height, width: image.width, reason: "dimensions must be powers of two" };
    Ok((exact_log2(image.height).ok_or(err.clone())?, exact_log2(image.width).ok_or(err)?))
}

/// Normalized pixel distribution of a power-of-two image. The norm constant
/// is the total intensity.
pub fn image_to_distribution(image: &GrayImage) -> Result<ProbabilityVector> {
    pow2_dims(image)?;
    if image.total_intensity() <= 0.0 {
        return Err(Error::Dimensions { height: image.height, width: image.width, reason: "image has no intensity" });
    }
    ProbabilityVector::from_weights(image.pixels.clone())
}

/// Inverse of [`image_to_distribution`]: intensities are `mass * norm`,
/// clamped to `[0, 1]`.
pub fn distribution_to_image(p: &ProbabilityVector, height: usize, width: usize, norm: f64) -> Result<GrayImage> {
    if p.len() != height * width {
        return Err(Error::Length { expected: height * width, found: p.len() });
    }
    let pixels = p.mass().iter().map(|m| (m * norm).clamp(0.0, 1.0)).collect();
    Ok(GrayImage { height, width, pixels })
}

/// Geometry of a block-amplitude partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGeometry {
    /// Block parameter; 0 means one block covering the whole image.
    pub b: usize,
    pub image_height: usize,
    pub image_width: usize,
    pub tile_height: usize,
    pub tile_width: usize,
    pub grid_rows: usize,
    pub grid_cols: usize,
}

impl BlockGeometry {
    pub fn new(height: usize, width: usize, b: usize) -> Result<Self> {
        if b == 0 {
            return Ok(Self {
                b,
                image_height: height,
                image_width: width,
                tile_height: height,
                tile_width: width,
                grid_rows: 1,
                grid_cols: 1,
            });
        }
        if height % b != 0 || width % (2 * b) != 0 || height / b != width / (2 * b) {
            return Err(Error::Dimensions {
                height,
                width,
                reason: "height must split into b and width into 2b equal square tiles",
            });
        }
        Ok(Self {
            b,
            image_height: height,
            image_width: width,
            tile_height: height / b,
            tile_width: width / (2 * b),
            grid_rows: b,
            grid_cols: 2 * b,
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.grid_rows * self.grid_cols
    }

    /// Top-left pixel of tile `index` (row-major tile order).
    pub fn origin(&self, index: usize) -> (usize, usize) {
        ((index / self.grid_cols) * self.tile_height, (index % self.grid_cols) * self.tile_width)
    }

    pub fn qubits_per_block(&self) -> Result<usize> {
        qubits_per_block(self.image_height, self.image_width, self.b)
    }
}

/// Image tiles plus the intensity total of each tile.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub geometry: BlockGeometry,
    pub tiles: Vec<GrayImage>,
    pub norms: Vec<f64>,
}

/// Splits an image into `2b^2` square tiles in row-major tile order.
pub fn partition_blocks(image: &GrayImage, b: usize) -> Result<BlockDecomposition> {
    let geometry = BlockGeometry::new(image.height, image.width, b)?;
    let tiles: Vec<GrayImage> = (0..geometry.num_blocks())
        .map(|i| {
            let (r, c) = geometry.origin(i);
            image.crop(r, c, geometry.tile_height, geometry.tile_width)
        })
        .collect::<Result<_>>()?;
    let norms = tiles.iter().map(GrayImage::total_intensity).collect();
    Ok(BlockDecomposition { geometry, tiles, norms })
}

/// Rebuilds the image from per-block distributions and norms.
pub fn assemble_blocks(geometry: &BlockGeometry, blocks: &[ProbabilityVector], norms: &[f64]) -> Result<GrayImage> {
    let count = geometry.num_blocks();
    if norms.len() < count {
        return Err(Error::MissingBlock(norms.len()));
    }
    if blocks.len() < count {
        return Err(Error::MissingBlock(blocks.len()));
    }
    let mut out = GrayImage::zeros(geometry.image_height, geometry.image_width);
    for i in 0..count {
        let tile = distribution_to_image(&blocks[i], geometry.tile_height, geometry.tile_width, norms[i])?;
        let (r, c) = geometry.origin(i);
        out.paste(&tile, r, c);
    }
    Ok(out)
}

/// Qubits needed for one block: `log2(d1 d2 / 2b^2)`, or `log2(d1 d2)` for
/// the single-block case `b = 0`.
pub fn qubits_per_block(height: usize, width: usize, b: usize) -> Result<usize> {
    let geometry = BlockGeometry::new(height, width, b)?;
    let pixels = geometry.tile_height * geometry.tile_width;
    exact_log2(pixels).ok_or(Error::NotPowerOfTwo(pixels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{seeded, uniform};

    fn random_image(h: usize, w: usize, seed: u64) -> GrayImage {
        let mut rng = seeded(seed);
        GrayImage::from_fn(h, w, |_, _| uniform(&mut rng)).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(GrayImage::new(1, 2, vec![0.5, 1.5]), Err(Error::Intensity));
        assert!(matches!(GrayImage::new(2, 2, vec![0.0; 3]), Err(Error::Length { .. })));
        assert!(GrayImage::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn padding() {
        let img = GrayImage::from_fn(28, 28, |r, c| ((r + c) % 2) as f64).unwrap();
        let p = pad_to_pow2(&img);
        assert_eq!((p.height(), p.width()), (32, 32));
        assert_eq!(p.get(27, 26), img.get(27, 26));
        assert_eq!(p.get(28, 0), 0.0);
        assert_eq!(p.get(0, 31), 0.0);
        assert_eq!(p.total_intensity(), img.total_intensity());

        let big = GrayImage::zeros(1024, 2048);
        assert_eq!(pad_to_pow2(&big), big);
        let odd = pad_to_pow2(&GrayImage::zeros(3, 5));
        assert_eq!((odd.height(), odd.width()), (4, 8));
    }

    #[test]
    fn downsample_examples() {
        let c = GrayImage::new(4, 4, vec![0.3; 16]).unwrap();
        let d = downsample(&c, 2, 2).unwrap();
        assert_eq!((d.height(), d.width()), (2, 2));
        assert!(d.pixels().iter().all(|&v| (v - 0.3).abs() < 1e-15));

        let checker = GrayImage::from_fn(4, 4, |r, c| ((r + c) % 2) as f64).unwrap();
        assert!(downsample(&checker, 2, 2).unwrap().pixels().iter().all(|&v| v == 0.5));

        let img = random_image(8, 8, 1);
        let d = downsample(&img, 2, 2).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let oracle = (img.get(2 * r, 2 * c)
                    + img.get(2 * r + 1, 2 * c)
                    + img.get(2 * r, 2 * c + 1)
                    + img.get(2 * r + 1, 2 * c + 1))
                    / 4.0;
                assert!((d.get(r, c) - oracle).abs() < 1e-15);
            }
        }
        assert!(downsample(&img, 3, 1).is_err());
    }

    #[test]
    fn distribution_examples() {
        let img = GrayImage::new(1, 2, vec![0.2, 0.6]).unwrap();
        let p = image_to_distribution(&img).unwrap();
        assert!((p.mass()[0] - 0.25).abs() < 1e-15 && (p.mass()[1] - 0.75).abs() < 1e-15);
        assert!((p.norm_constant() - 0.8).abs() < 1e-15);

        let corner = GrayImage::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(image_to_distribution(&corner).unwrap().mass(), &[1.0, 0.0, 0.0, 0.0]);

        let large = GrayImage::new(1024, 2048, vec![0.5; 1 << 21]).unwrap();
        assert_eq!(image_to_distribution(&large).unwrap().num_qubits(), 21);

        assert!(image_to_distribution(&GrayImage::zeros(2, 2)).is_err());
        assert!(image_to_distribution(&GrayImage::new(3, 1, vec![0.5; 3]).unwrap()).is_err());
    }

    #[test]
    fn pixel_index_layout() {
        // Row bits are the high half of the index.
        let img = GrayImage::from_fn(4, 8, |r, c| if (r, c) == (2, 5) { 1.0 } else { 0.0 }).unwrap();
        let p = image_to_distribution(&img).unwrap();
        assert_eq!(p.mass()[2 * 8 + 5], 1.0);
    }

    #[test]
    fn reconstruction() {
        let img = random_image(4, 4, 3);
        let p = image_to_distribution(&img).unwrap();
        let back = distribution_to_image(&p, 4, 4, p.norm_constant()).unwrap();
        for (a, b) in back.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-12);
        }
        let u = distribution_to_image(&ProbabilityVector::uniform(4), 4, 4, 8.0).unwrap();
        assert!(u.pixels().iter().all(|&v| v == 0.5));
        let d = distribution_to_image(&ProbabilityVector::delta(4, 0).unwrap(), 4, 4, 1.0).unwrap();
        assert_eq!(d.get(0, 0), 1.0);
        assert_eq!(d.total_intensity(), 1.0);
        assert!(distribution_to_image(&p, 2, 4, 1.0).is_err());
    }

    #[test]
    fn block_counts_match_table() {
        for (b, blocks, qubits) in [(0, 1, 21), (2, 8, 18), (4, 32, 16), (8, 128, 14), (16, 512, 12), (32, 2048, 10)] {
            let g = BlockGeometry::new(1024, 2048, b).unwrap();
            assert_eq!(g.num_blocks(), blocks);
            assert_eq!(qubits_per_block(1024, 2048, b).unwrap(), qubits);
            if b > 0 {
                assert_eq!(g.num_blocks(), 2 * b * b);
                assert_eq!(g.tile_height, g.tile_width);
            }
        }
        assert!(qubits_per_block(1024, 2048, 3).is_err());
        assert!(BlockGeometry::new(100, 100, 2).is_err());
        // Tiles that are square but not a power of two have no qubit count.
        assert_eq!(qubits_per_block(12, 24, 2), Err(Error::NotPowerOfTwo(36)));
    }

    #[test]
    fn partition_and_assemble_roundtrip() {
        let img = random_image(8, 16, 5);
        let d = partition_blocks(&img, 2).unwrap();
        assert_eq!(d.tiles.len(), 8);
        assert_eq!(d.tiles[1].get(0, 0), img.get(0, 4));
        assert_eq!(d.tiles[4].get(0, 0), img.get(4, 0));
        let dists: Vec<_> = d.tiles.iter().map(|t| image_to_distribution(t).unwrap()).collect();
        let back = assemble_blocks(&d.geometry, &dists, &d.norms).unwrap();
        for (a, b) in back.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-12);
        }
        // Every pixel lands in exactly one tile.
        let total: f64 = d.norms.iter().sum();
        assert!((total - img.total_intensity()).abs() < 1e-12);

        let mut zeroed = d.norms.clone();
        zeroed[3] = 0.0;
        let dark = assemble_blocks(&d.geometry, &dists, &zeroed).unwrap();
        let (r0, c0) = d.geometry.origin(3);
        for r in 0..dark.height() {
            for c in 0..dark.width() {
                let inside = (r0..r0 + 4).contains(&r) && (c0..c0 + 4).contains(&c);
                if inside {
                    assert_eq!(dark.get(r, c), 0.0);
                } else {
                    assert!((dark.get(r, c) - img.get(r, c)).abs() < 1e-12);
                }
            }
        }
        assert_eq!(assemble_blocks(&d.geometry, &dists[..7], &d.norms), Err(Error::MissingBlock(7)));

        let uniform_blocks = vec![ProbabilityVector::uniform(4); 8];
        let flat = assemble_blocks(&d.geometry, &uniform_blocks, &[4.0; 8]).unwrap();
        assert!(flat.pixels().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn whole_image_block() {
        let img = random_image(4, 8, 2);
        let d = partition_blocks(&img, 0).unwrap();
        assert_eq!(d.tiles.len(), 1);
        assert_eq!(d.tiles[0], img);
    }

    #[test]
    fn pooling_to_bits() {
        let img = random_image(8, 16, 9);
        let p = pool_to_bits(&img, 1, 2).unwrap();
        assert_eq!((p.height(), p.width()), (2, 4));
        assert!(pool_to_bits(&img, 4, 0).is_err());
    }
}
