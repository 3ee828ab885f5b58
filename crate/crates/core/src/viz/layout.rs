use super::scene::{Group, Item, Scene};
use super::RenderError;

/// Most subplots a single figure will hold.
pub const MAX_SUBPLOTS: usize = 10;

/// `(rows, cols)` for `k` subplots: `cols = ceil(sqrt k)`, `rows = ceil(k / cols)`.
pub fn grid_shape(k: usize) -> (usize, usize) {
    if k == 0 {
        return (0, 0);
    }
    let mut cols = (k as f64).sqrt().floor() as usize;
    if cols * cols < k {
        cols += 1;
    }
    (k.div_ceil(cols), cols)
}

/// Arrange subplot scenes row-major on a grid of equal cells.
pub fn layout(subplots: Vec<Scene>) -> Result<Scene, RenderError> {
    let k = subplots.len();
    if k == 0 {
        return Err(RenderError::NoSubplots);
    }
    if k > MAX_SUBPLOTS {
        return Err(RenderError::TooManySubplots(k));
    }
    let (rows, cols) = grid_shape(k);
    let cell_w = subplots.iter().map(|s| s.width).fold(0.0, f64::max);
    let cell_h = subplots.iter().map(|s| s.height).fold(0.0, f64::max);
    let mut figure = Scene::new("figure", cell_w * cols as f64, cell_h * rows as f64);
    for (i, scene) in subplots.into_iter().enumerate() {
        figure.items.push(Item::Group(Group {
            dx: (i % cols) as f64 * cell_w,
            dy: (i / cols) as f64 * cell_h,
            scene,
        }));
    }
    Ok(figure)
}
