//! Square-window median filter with edge replication.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Side length of a square filter window. Always odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowSpec(usize);

impl WindowSpec {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::InvalidWindow(size));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn radius(self) -> usize {
        self.0 / 2
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self(3)
    }
}

/// Element of rank `len / 2` in ascending order. Reorders `values`.
pub fn window_median(values: &mut [u8]) -> Result<u8> {
    if values.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mid = values.len() / 2;
    let (_, m, _) = values.select_nth_unstable(mid);
    Ok(*m)
}

/// Replaces every pixel by the median of its `size x size` neighborhood.
/// Coordinates outside the image are clamped to the nearest border pixel.
pub fn median_filter(img: &GrayImage, window: WindowSpec) -> GrayImage {
    if window.size() == 1 {
        return img.clone();
    }
    let r = window.radius() as isize;
    let mut buf = Vec::with_capacity(window.size() * window.size());
    let mut out = Vec::with_capacity(img.pixel_count());
    for row in 0..img.height() as isize {
        for col in 0..img.width() as isize {
            buf.clear();
            for dr in -r..=r {
                for dc in -r..=r {
                    buf.push(img.get_clamped(row + dr, col + dc));
                }
            }
            out.push(window_median(&mut buf).expect("window is never empty"));
        }
    }
    img.with_pixels(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG2: [u8; 25] = [
        123, 125, 126, 130, 140, //
        122, 124, 126, 127, 135, //
        118, 120, 150, 125, 134, //
        119, 115, 119, 123, 133, //
        111, 116, 110, 120, 130,
    ];

    fn fig2() -> GrayImage {
        GrayImage::new(5, 5, 255, FIG2.to_vec()).unwrap()
    }

    #[test]
    fn window_spec_rejects_even() {
        assert_eq!(WindowSpec::new(0), Err(Error::InvalidWindow(0)));
        assert_eq!(WindowSpec::new(4), Err(Error::InvalidWindow(4)));
        assert_eq!(WindowSpec::new(5).unwrap().radius(), 2);
        assert_eq!(WindowSpec::default().size(), 3);
    }

    #[test]
    fn median_of_fig2_neighborhood() {
        let mut v = [124, 126, 127, 120, 150, 125, 115, 119, 123];
        assert_eq!(window_median(&mut v), Ok(124));
        assert_eq!(window_median(&mut [5]), Ok(5));
        assert_eq!(window_median(&mut [0, 0, 255]), Ok(0));
        assert_eq!(window_median(&mut []), Err(Error::EmptyWindow));
    }

    #[test]
    fn fig2_center() {
        let out = median_filter(&fig2(), WindowSpec::new(3).unwrap());
        assert_eq!(out.get(2, 2), 124);
    }

    #[test]
    fn fig2_full_grid() {
        // brute-force oracle: clamped 3x3 windows, full sort, middle element
        let expected = [
            123, 125, 126, 130, 135, //
            122, 124, 126, 130, 134, //
            119, 120, 124, 127, 133, //
            118, 118, 120, 125, 130, //
            115, 115, 116, 120, 130,
        ];
        let out = median_filter(&fig2(), WindowSpec::new(3).unwrap());
        assert_eq!(out.pixels(), &expected);
    }

    #[test]
    fn unit_window_is_identity() {
        assert_eq!(median_filter(&fig2(), WindowSpec::new(1).unwrap()), fig2());
    }

    #[test]
    fn large_window_on_tiny_image() {
        let img = GrayImage::new(2, 1, 255, vec![10, 20]).unwrap();
        // 7x7 clamped windows hold 28 copies of one value and 21 of the other
        let out = median_filter(&img, WindowSpec::new(7).unwrap());
        assert_eq!(out.pixels(), &[10, 20]);
    }

    fn any_image() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, 255, px).unwrap())
        })
    }

    fn clamped_window(img: &GrayImage, row: usize, col: usize, r: isize) -> Vec<u8> {
        let mut v = Vec::new();
        for dr in -r..=r {
            for dc in -r..=r {
                v.push(img.get_clamped(row as isize + dr, col as isize + dc));
            }
        }
        v
    }

    proptest! {
        #[test]
        fn output_is_window_member_and_bounded(im in any_image(), size in prop::sample::select(vec![1usize, 3, 5])) {
            let w = WindowSpec::new(size).unwrap();
            let out = median_filter(&im, w);
            for row in 0..im.height() {
                for col in 0..im.width() {
                    let win = clamped_window(&im, row, col, w.radius() as isize);
                    let v = out.get(row, col);
                    prop_assert!(win.contains(&v));
                    prop_assert!(*win.iter().min().unwrap() <= v && v <= *win.iter().max().unwrap());
                }
            }
        }

        #[test]
        fn constant_is_fixed_point(w in 1usize..12, h in 1usize..12, v in any::<u8>(), size in prop::sample::select(vec![1usize, 3, 5, 7])) {
            let im = GrayImage::filled(w, h, 255, v).unwrap();
            prop_assert_eq!(median_filter(&im, WindowSpec::new(size).unwrap()), im);
        }

        #[test]
        fn no_new_levels(im in any_image()) {
            let out = median_filter(&im, WindowSpec::default());
            prop_assert!(out.pixels().iter().all(|p| im.pixels().contains(p)));
        }

        #[test]
        fn interior_translation_equivariance(im in any_image(), dx in 0usize..3, dy in 0usize..3) {
            prop_assume!(im.width() > dx + 2 && im.height() > dy + 2);
            // crop shifted by (dy, dx), then compare interior pixels
            let (w, h) = (im.width() - dx, im.height() - dy);
            let shifted = GrayImage::from_fn(w, h, 255, |r, c| im.get(r + dy, c + dx)).unwrap();
            let a = median_filter(&im, WindowSpec::default());
            let b = median_filter(&shifted, WindowSpec::default());
            for r in 1..h - 1 {
                for c in 1..w - 1 {
                    if r + dy + 1 < im.height() && c + dx + 1 < im.width() {
                        prop_assert_eq!(b.get(r, c), a.get(r + dy, c + dx));
                    }
                }
            }
        }
    }
}
