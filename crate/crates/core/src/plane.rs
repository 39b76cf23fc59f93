//! Single-plane integer images and training corpora.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised when constructing a [`Plane`] or [`Corpus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneError {
    EmptyDimensions,
    UnsupportedBitDepth(u8),
    SampleCountMismatch { expected: usize, actual: usize },
    SampleOutOfRange { index: usize, value: u16, max: u16 },
    EmptyCorpus,
    MixedBitDepth { expected: u8, found: u8 },
    LabelCountMismatch,
}

impl fmt::Display for PlaneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneError::EmptyDimensions => write!(f, "plane dimensions must be non-zero"),
            PlaneError::UnsupportedBitDepth(d) => write!(f, "unsupported bit depth {d}"),
            PlaneError::SampleCountMismatch { expected, actual } => {
                write!(f, "expected {expected} samples, got {actual}")
            }
            PlaneError::SampleOutOfRange { index, value, max } => {
                write!(f, "sample {index} has value {value} above maximum {max}")
            }
            PlaneError::EmptyCorpus => write!(f, "corpus is empty"),
            PlaneError::MixedBitDepth { expected, found } => {
                write!(f, "corpus mixes bit depth {expected} with {found}")
            }
            PlaneError::LabelCountMismatch => write!(f, "corpus label count differs from plane count"),
        }
    }
}

impl core::error::Error for PlaneError {}

/// A row-major grid of unsigned samples, 8 or 10 bits deep.
#[derive(Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    bit_depth: u8,
    samples: Vec<u16>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plane")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("bit_depth", &self.bit_depth)
            .finish_non_exhaustive()
    }
}

impl Plane {
    pub fn new(
        width: usize,
        height: usize,
        bit_depth: u8,
        samples: Vec<u16>,
    ) -> Result<Self, PlaneError> {
        if width == 0 || height == 0 {
            return Err(PlaneError::EmptyDimensions);
        }
        if bit_depth != 8 && bit_depth != 10 {
            return Err(PlaneError::UnsupportedBitDepth(bit_depth));
        }
        let expected = width * height;
        if samples.len() != expected {
            return Err(PlaneError::SampleCountMismatch {
                expected,
                actual: samples.len(),
            });
        }
        let max = (1u16 << bit_depth) - 1;
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, &s)| s > max) {
            return Err(PlaneError::SampleOutOfRange { index, value, max });
        }
        Ok(Plane {
            width,
            height,
            bit_depth,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, bit_depth: u8, value: u16) -> Result<Self, PlaneError> {
        Plane::new(width, height, bit_depth, alloc::vec![value; width * height])
    }

    /// Builds a plane from a generator `f(x, y)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        bit_depth: u8,
        mut f: impl FnMut(usize, usize) -> u16,
    ) -> Result<Self, PlaneError> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Plane::new(width, height, bit_depth, samples)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    #[inline]
    pub fn max_value(&self) -> u16 {
        (1u16 << self.bit_depth) - 1
    }

    #[inline]
    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u16> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.samples[y * self.width + x]
    }

    pub fn transpose(&self) -> Plane {
        Plane::from_fn(self.height, self.width, self.bit_depth, |x, y| self.get(y, x))
            .expect("transposed plane keeps valid samples")
    }

    /// Extends the plane to `width × height` by replicating the last column
    /// and row.
    pub fn pad_to(&self, width: usize, height: usize) -> Plane {
        debug_assert!(width >= self.width && height >= self.height);
        Plane::from_fn(width, height, self.bit_depth, |x, y| {
            self.get(x.min(self.width - 1), y.min(self.height - 1))
        })
        .expect("padding keeps valid samples")
    }

    /// Top-left `width × height` window.
    pub fn crop(&self, width: usize, height: usize) -> Plane {
        debug_assert!(width <= self.width && height <= self.height);
        Plane::from_fn(width, height, self.bit_depth, |x, y| self.get(x, y))
            .expect("cropping keeps valid samples")
    }
}

/// Ordered training or benchmark set sharing one bit depth.
#[derive(Debug, Clone)]
pub struct Corpus {
    planes: Vec<Plane>,
    labels: Vec<String>,
}

impl Corpus {
    pub fn new(planes: Vec<Plane>, labels: Vec<String>) -> Result<Self, PlaneError> {
        if planes.len() != labels.len() {
            return Err(PlaneError::LabelCountMismatch);
        }
        let Some(first) = planes.first() else {
            return Err(PlaneError::EmptyCorpus);
        };
        let depth = first.bit_depth();
        if let Some(p) = planes.iter().find(|p| p.bit_depth() != depth) {
            return Err(PlaneError::MixedBitDepth {
                expected: depth,
                found: p.bit_depth(),
            });
        }
        Ok(Corpus { planes, labels })
    }

    /// Corpus with labels `#0`, `#1`, ...
    pub fn unlabeled(planes: Vec<Plane>) -> Result<Self, PlaneError> {
        let labels = (0..planes.len()).map(|i| alloc::format!("#{i}")).collect();
        Corpus::new(planes, labels)
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bit_depth(&self) -> u8 {
        self.planes[0].bit_depth()
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Plane)> {
        self.labels.iter().map(String::as_str).zip(self.planes.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_out_of_range_samples() {
        let err = Plane::new(2, 1, 8, vec![0, 256]).unwrap_err();
        assert_eq!(
            err,
            PlaneError::SampleOutOfRange {
                index: 1,
                value: 256,
                max: 255
            }
        );
        assert!(Plane::new(2, 1, 10, vec![0, 1023]).is_ok());
        assert!(Plane::new(2, 1, 10, vec![0, 1024]).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Plane::new(0, 1, 8, vec![]).unwrap_err(), PlaneError::EmptyDimensions);
        assert!(matches!(
            Plane::new(2, 2, 8, vec![0; 3]),
            Err(PlaneError::SampleCountMismatch { expected: 4, actual: 3 })
        ));
        assert_eq!(
            Plane::new(1, 1, 12, vec![0]).unwrap_err(),
            PlaneError::UnsupportedBitDepth(12)
        );
    }

    #[test]
    fn pad_replicates_edges_and_crop_restores() {
        let p = Plane::new(2, 2, 8, vec![1, 2, 3, 4]).unwrap();
        let q = p.pad_to(4, 3);
        assert_eq!(q.samples(), &[1, 2, 2, 2, 3, 4, 4, 4, 3, 4, 4, 4]);
        assert_eq!(q.crop(2, 2), p);
    }

    #[test]
    fn transpose_swaps_axes() {
        let p = Plane::new(3, 2, 8, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let t = p.transpose();
        assert_eq!((t.width(), t.height()), (2, 3));
        assert_eq!(t.samples(), &[1, 4, 2, 5, 3, 6]);
        assert_eq!(t.transpose(), p);
    }

    #[test]
    fn corpus_requires_one_bit_depth() {
        let a = Plane::filled(1, 1, 8, 0).unwrap();
        let b = Plane::filled(1, 1, 10, 0).unwrap();
        assert!(matches!(
            Corpus::unlabeled(vec![a.clone(), b]),
            Err(PlaneError::MixedBitDepth { expected: 8, found: 10 })
        ));
        assert_eq!(Corpus::unlabeled(vec![]).unwrap_err(), PlaneError::EmptyCorpus);
        assert_eq!(Corpus::unlabeled(vec![a]).unwrap().len(), 1);
    }
}
