//! HCL palettes.
//!
//! Colours are specified as polar CIELUV (hue, chroma, luminance) and
//! converted to sRGB against a D65 white point, clipping out-of-gamut
//! channels to [0, 1].

use super::RenderError;

/// sRGB colour with opacity, every channel in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Color {
    pub r: f64,
    pub g: f64,
    pub b: f64,
    pub opacity: f64,
}

impl Color {
    pub const BLACK: Color = Color::rgb(0.0, 0.0, 0.0);
    pub const WHITE: Color = Color::rgb(1.0, 1.0, 1.0);

    pub const fn rgb(r: f64, g: f64, b: f64) -> Self {
        Self {
            r,
            g,
            b,
            opacity: 1.0,
        }
    }

    pub fn gray(level: f64) -> Self {
        Self::rgb(level, level, level)
    }

    pub fn with_opacity(self, opacity: f64) -> Self {
        Self {
            opacity: opacity.clamp(0.0, 1.0),
            ..self
        }
    }

    /// `#rrggbb`, opacity ignored.
    pub fn hex(&self) -> String {
        let byte = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
        format!(
            "#{:02x}{:02x}{:02x}",
            byte(self.r),
            byte(self.g),
            byte(self.b)
        )
    }

    /// Polar CIELUV to sRGB.
    pub fn from_hcl(hue: f64, chroma: f64, luminance: f64) -> Self {
        const XN: f64 = 0.95047;
        const YN: f64 = 1.0;
        const ZN: f64 = 1.08883;
        const KAPPA: f64 = 24389.0 / 27.0;

        if luminance <= 0.0 {
            return Color::BLACK;
        }
        let h = hue.to_radians();
        let u = chroma * h.cos();
        let v = chroma * h.sin();
        let l = luminance;

        let y = if l > 8.0 {
            YN * ((l + 16.0) / 116.0).powi(3)
        } else {
            YN * l / KAPPA
        };
        let denom = XN + 15.0 * YN + 3.0 * ZN;
        let un = 4.0 * XN / denom;
        let vn = 9.0 * YN / denom;
        let up = u / (13.0 * l) + un;
        let vp = v / (13.0 * l) + vn;
        let x = y * 9.0 * up / (4.0 * vp);
        let z = y * (12.0 - 3.0 * up - 20.0 * vp) / (4.0 * vp);

        let lin = [
            3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
            -0.9692660 * x + 1.8760108 * y + 0.0415560 * z,
            0.0556434 * x - 0.2040259 * y + 1.0572252 * z,
        ];
        let gamma = |c: f64| {
            let c = c.clamp(0.0, 1.0);
            if c <= 0.0031308 {
                12.92 * c
            } else {
                1.055 * c.powf(1.0 / 2.4) - 0.055
            }
            .clamp(0.0, 1.0)
        };
        Color::rgb(gamma(lin[0]), gamma(lin[1]), gamma(lin[2]))
    }
}

/// Palette families selectable by number 1 to 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaletteKind {
    Rainbow = 1,
    Heat = 2,
    Terrain = 3,
    Sequential = 4,
    Diverging = 5,
}

impl PaletteKind {
    pub fn from_code(code: u8) -> Result<Self, RenderError> {
        Ok(match code {
            1 => PaletteKind::Rainbow,
            2 => PaletteKind::Heat,
            3 => PaletteKind::Terrain,
            4 => PaletteKind::Sequential,
            5 => PaletteKind::Diverging,
            _ => return Err(RenderError::ColorType(code)),
        })
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// `count` colours from palette `color_type`, each with opacity `alpha`.
///
/// | code | family     | hue          | chroma   | luminance |
/// |------|------------|--------------|----------|-----------|
/// | 1    | rainbow    | 360 k / n    | 50       | 70        |
/// | 2    | heat       | 0 to 90      | 100 to 30| 50 to 90  |
/// | 3    | terrain    | 130 to 0     | 80 to 0  | 60 to 95  |
/// | 4    | sequential | 260          | 80 to 0  | 30 to 90  |
/// | 5    | diverging  | 260 / 0      | 80 to 0 to 80 | 30 to 90 to 30 |
pub fn palette(color_type: u8, count: usize, alpha: f64) -> Result<Vec<Color>, RenderError> {
    let kind = PaletteKind::from_code(color_type)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(RenderError::Alpha(alpha));
    }
    let ramp = |i: usize| {
        if count <= 1 {
            0.0
        } else {
            i as f64 / (count - 1) as f64
        }
    };
    let colors = (0..count)
        .map(|i| {
            let t = ramp(i);
            let (h, c, l) = match kind {
                PaletteKind::Rainbow => (360.0 * i as f64 / count as f64, 50.0, 70.0),
                PaletteKind::Heat => (
                    lerp(0.0, 90.0, t),
                    lerp(100.0, 30.0, t),
                    lerp(50.0, 90.0, t),
                ),
                PaletteKind::Terrain => {
                    (lerp(130.0, 0.0, t), lerp(80.0, 0.0, t), lerp(60.0, 95.0, t))
                }
                PaletteKind::Sequential => (260.0, lerp(80.0, 0.0, t), lerp(30.0, 90.0, t)),
                PaletteKind::Diverging => {
                    // s runs from -1 (first end) through 0 (neutral) to 1.
                    let s = if count <= 1 { 0.0 } else { 2.0 * t - 1.0 };
                    let hue = if s <= 0.0 { 260.0 } else { 0.0 };
                    (hue, 80.0 * s.abs(), lerp(90.0, 30.0, s.abs()))
                }
            };
            Color::from_hcl(h, c, l).with_opacity(alpha)
        })
        .collect();
    Ok(colors)
}
