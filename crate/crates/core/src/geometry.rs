//! Factory scene, IRS wall placement and per-link geometry.
//!
//! Coordinates are metres with the origin at a floor corner. The BS hangs at the
//! ceiling centre, a tall shelf sits in the plane `x = shelf_x` and the blind spot
//! is the region `0 < x < shelf_x` behind it. IRSs are placed on the three walls
//! around the blind spot: the back wall `x = 0` and the two side walls `y = 0`
//! and `y = W`.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Distance between the projections on the floor plane.
    pub fn horizontal_distance(self, other: Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl Add for Point3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Room dimensions, shelf plane and UE antenna height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactoryLayout {
    /// Extent along x (the shelf is parallel to the y axis).
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub shelf_x: f64,
    pub ue_height: f64,
}

impl FactoryLayout {
    pub fn new(length: f64, width: f64, height: f64, shelf_x: f64, ue_height: f64) -> Result<Self> {
        if !(length > 0.0 && width > 0.0 && height > 0.0) {
            return Err(invalid("factory dimensions must be positive"));
        }
        if !(shelf_x > 0.0 && shelf_x < length / 2.0) {
            return Err(invalid(format!(
                "shelf plane x = {shelf_x} must lie strictly inside (0, L/2 = {})",
                length / 2.0
            )));
        }
        if !(ue_height > 0.0 && ue_height < height) {
            return Err(invalid("UE antenna height must lie strictly between floor and ceiling"));
        }
        Ok(Self { length, width, height, shelf_x, ue_height })
    }

    /// 40 x 50 x 5 m hall, shelf at x = 19.5 m, UE antenna at 0.5 m.
    pub fn reference() -> Self {
        Self { length: 40.0, width: 50.0, height: 5.0, shelf_x: 19.5, ue_height: 0.5 }
    }

    /// The BS sits at the centre of the ceiling.
    pub fn bs_position(&self) -> Point3 {
        Point3::new(self.length / 2.0, self.width / 2.0, self.height)
    }

    /// Aspect ratio of the blind spot, `W / X_U`.
    pub fn blind_spot_aspect(&self) -> f64 {
        self.width / self.shelf_x
    }

    pub fn in_blind_spot(&self, p: Point3) -> bool {
        p.x > 0.0 && p.x < self.shelf_x && p.y > 0.0 && p.y < self.width && p.z == self.ue_height
    }

    pub fn ue_at(&self, x: f64, y: f64) -> Point3 {
        Point3::new(x, y, self.ue_height)
    }
}

/// Walls that can carry an IRS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wall {
    /// `x = 0`, opposite the shelf.
    Back,
    /// `y = W`.
    SideFar,
    /// `y = 0`.
    SideNear,
}

impl Wall {
    /// Unit normal pointing into the room.
    pub fn inward_normal(self) -> Point3 {
        match self {
            Wall::Back => Point3::new(1.0, 0.0, 0.0),
            Wall::SideFar => Point3::new(0.0, -1.0, 0.0),
            Wall::SideNear => Point3::new(0.0, 1.0, 0.0),
        }
    }

    /// Direction of increasing horizontal element index on this wall.
    pub fn horizontal_axis(self) -> Point3 {
        match self {
            Wall::Back => Point3::new(0.0, 1.0, 0.0),
            Wall::SideFar | Wall::SideNear => Point3::new(1.0, 0.0, 0.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Wall::Back => "x=0",
            Wall::SideFar => "y=W",
            Wall::SideNear => "y=0",
        }
    }
}

/// Number of IRSs on each wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCounts {
    pub back: usize,
    pub side_far: usize,
    pub side_near: usize,
}

impl WallCounts {
    pub fn total(&self) -> usize {
        self.back + self.side_far + self.side_near
    }
}

/// Splits `num_irs` panels over the three walls so that their density roughly
/// follows the wall lengths of a blind spot with aspect ratio `aspect = W / X_U`.
pub fn wall_counts(num_irs: usize, aspect: f64) -> Result<WallCounts> {
    if num_irs == 0 {
        return Err(invalid("at least one IRS is required for a wall split"));
    }
    if !(aspect > 0.0 && aspect.is_finite()) {
        return Err(invalid("blind-spot aspect ratio must be positive"));
    }
    let m = num_irs as f64;
    if aspect >= 1.0 {
        let side = (m / (aspect + 2.0)).floor() as usize;
        Ok(WallCounts { back: num_irs - 2 * side, side_far: side, side_near: side })
    } else {
        let back = (aspect * m / (2.0 + aspect)).floor() as usize;
        let rest = num_irs - back;
        let (side_far, side_near) = if rest.is_multiple_of(2) {
            (rest / 2, rest / 2)
        } else {
            (rest.div_ceil(2), (rest - 1) / 2)
        };
        Ok(WallCounts { back, side_far, side_near })
    }
}

/// One IRS panel: the position of its reference element and the wall it hangs on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsPanel {
    pub position: Point3,
    pub wall: Wall,
}

/// Evenly spaced panel positions, back wall first, then `y = W`, then `y = 0`.
pub fn irs_positions(layout: &FactoryLayout, counts: WallCounts, height: f64) -> Vec<IrsPanel> {
    let (l, w) = (layout.length, layout.width);
    let mut panels = Vec::with_capacity(counts.total());
    for k in 1..=counts.back {
        let y = k as f64 * w / (counts.back as f64 + 1.0);
        panels.push(IrsPanel { position: Point3::new(0.0, y, height), wall: Wall::Back });
    }
    for k in 1..=counts.side_far {
        let x = k as f64 * l / (2.0 * (counts.side_far as f64 + 1.0));
        panels.push(IrsPanel { position: Point3::new(x, w, height), wall: Wall::SideFar });
    }
    for k in 1..=counts.side_near {
        let x = k as f64 * l / (2.0 * (counts.side_near as f64 + 1.0));
        panels.push(IrsPanel { position: Point3::new(x, 0.0, height), wall: Wall::SideNear });
    }
    panels
}

/// Where an element grid came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSource {
    /// One of the published reference layouts for 960 elements.
    Reference,
    /// Closest factor pair of the per-panel element count.
    ClosestFactor,
}

/// Grids flatter than this are flagged.
pub const MAX_GRID_ASPECT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementGrid {
    pub horizontal: usize,
    pub vertical: usize,
    pub source: GridSource,
    /// Set when `horizontal / vertical` exceeds [`MAX_GRID_ASPECT`].
    pub aspect_warning: bool,
}

impl ElementGrid {
    pub fn elements(&self) -> usize {
        self.horizontal * self.vertical
    }
}

const REFERENCE_GRIDS: [(usize, usize, usize); 5] =
    [(1, 32, 30), (4, 16, 15), (8, 12, 10), (12, 10, 8), (16, 10, 6)];

/// Horizontal x vertical element layout for each of `num_irs` panels sharing
/// `total_elements`.
pub fn element_grid(num_irs: usize, total_elements: usize) -> Result<ElementGrid> {
    if num_irs == 0 || total_elements == 0 {
        return Err(invalid("element grid needs at least one IRS and one element"));
    }
    if !total_elements.is_multiple_of(num_irs) {
        return Err(invalid(format!(
            "{total_elements} elements cannot be shared evenly by {num_irs} IRSs"
        )));
    }
    if total_elements == 960 {
        if let Some(&(_, h, v)) = REFERENCE_GRIDS.iter().find(|(m, _, _)| *m == num_irs) {
            return Ok(ElementGrid {
                horizontal: h,
                vertical: v,
                source: GridSource::Reference,
                aspect_warning: false,
            });
        }
    }
    let per_panel = total_elements / num_irs;
    let mut vertical = (per_panel as f64).sqrt() as usize;
    while vertical > 1 && !per_panel.is_multiple_of(vertical) {
        vertical -= 1;
    }
    let vertical = vertical.max(1);
    let horizontal = per_panel / vertical;
    Ok(ElementGrid {
        horizontal,
        vertical,
        source: GridSource::ClosestFactor,
        aspect_warning: horizontal as f64 / vertical as f64 > MAX_GRID_ASPECT,
    })
}

/// Where and how the IRSs are deployed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsDeployment {
    pub num_irs: usize,
    pub total_elements: usize,
    pub height: f64,
    pub grid: Option<ElementGrid>,
    pub element_spacing: f64,
    pub counts: Option<WallCounts>,
    pub panels: Vec<IrsPanel>,
}

impl IrsDeployment {
    /// Deploys `num_irs` panels at `height`. `min_height` is the tallest blockage,
    /// below which the BS-IRS links could be shadowed. `num_irs = 0` gives the
    /// no-IRS baseline.
    pub fn new(
        layout: &FactoryLayout,
        num_irs: usize,
        total_elements: usize,
        height: f64,
        element_spacing: f64,
        min_height: f64,
    ) -> Result<Self> {
        if !(element_spacing > 0.0) {
            return Err(invalid("element spacing must be positive"));
        }
        if num_irs == 0 {
            return Ok(Self::none(height, element_spacing));
        }
        if !(height >= min_height && height <= layout.height) {
            return Err(invalid(format!(
                "IRS height {height} must lie in [{min_height}, {}]",
                layout.height
            )));
        }
        let counts = wall_counts(num_irs, layout.blind_spot_aspect())?;
        let grid = element_grid(num_irs, total_elements)?;
        Ok(Self {
            num_irs,
            total_elements,
            height,
            grid: Some(grid),
            element_spacing,
            counts: Some(counts),
            panels: irs_positions(layout, counts, height),
        })
    }

    pub fn none(height: f64, element_spacing: f64) -> Self {
        Self {
            num_irs: 0,
            total_elements: 0,
            height,
            grid: None,
            element_spacing,
            counts: None,
            panels: Vec::new(),
        }
    }

    pub fn elements_per_irs(&self) -> usize {
        self.grid.map_or(0, |g| g.elements())
    }
}

/// Direction of a ray leaving a panel, in the panel's local frame: `azimuth` is
/// measured in the wall plane from the horizontal element axis, `polar` from the
/// inward normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayAngles {
    pub azimuth: f64,
    pub polar: f64,
}

impl ArrayAngles {
    pub fn towards(wall: Wall, from: Point3, to: Point3) -> Self {
        let d = to - from;
        let n = d.norm();
        let (a, b, z) = (
            d.dot(wall.horizontal_axis()) / n,
            d.z / n,
            d.dot(wall.inward_normal()) / n,
        );
        Self { azimuth: b.atan2(a), polar: z.clamp(-1.0, 1.0).acos() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsLink {
    /// BS to IRS.
    pub bs_distance: f64,
    /// IRS to UE.
    pub ue_distance: f64,
    pub ue_horizontal: f64,
    /// Angle between the BS ray and the inward wall normal.
    pub incidence: f64,
    pub arrival_from_bs: ArrayAngles,
    pub departure_to_ue: ArrayAngles,
}

/// Distances and angles of every link serving one UE position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub direct_distance: f64,
    pub direct_horizontal: f64,
    pub irs: Vec<IrsLink>,
}

pub fn link_geometry(
    layout: &FactoryLayout,
    deployment: &IrsDeployment,
    ue: Point3,
) -> Result<LinkGeometry> {
    if !layout.in_blind_spot(ue) {
        return Err(invalid(format!(
            "UE ({}, {}, {}) is outside the blind spot",
            ue.x, ue.y, ue.z
        )));
    }
    let bs = layout.bs_position();
    let irs = deployment
        .panels
        .iter()
        .map(|panel| {
            let q = panel.position;
            let cos_incidence = (bs - q).dot(panel.wall.inward_normal()) / bs.distance(q);
            IrsLink {
                bs_distance: bs.distance(q),
                ue_distance: ue.distance(q),
                ue_horizontal: ue.horizontal_distance(q),
                incidence: cos_incidence.clamp(0.0, 1.0).acos().min(FRAC_PI_2),
                arrival_from_bs: ArrayAngles::towards(panel.wall, q, bs),
                departure_to_ue: ArrayAngles::towards(panel.wall, q, ue),
            }
        })
        .collect();
    Ok(LinkGeometry {
        direct_distance: bs.distance(ue),
        direct_horizontal: bs.horizontal_distance(ue),
        irs,
    })
}

/// Cell-centred UE sample points covering the blind spot at `resolution` spacing.
pub fn ue_grid(layout: &FactoryLayout, resolution: f64) -> Result<Vec<Point3>> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(invalid("grid resolution must be positive"));
    }
    let axis = |extent: f64| -> Vec<f64> {
        (0..)
            .map(|k| resolution / 2.0 + k as f64 * resolution)
            .take_while(|&v| v < extent)
            .collect()
    };
    let xs = axis(layout.shelf_x);
    let ys = axis(layout.width);
    if xs.is_empty() || ys.is_empty() {
        return Err(invalid(format!("resolution {resolution} m leaves the grid empty")));
    }
    Ok(xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| layout.ue_at(x, y)))
        .collect())
}

/// `nx` x `ny` cell-centred points over the blind spot, regardless of spacing.
pub fn ue_subgrid(layout: &FactoryLayout, nx: usize, ny: usize) -> Result<Vec<Point3>> {
    if nx == 0 || ny == 0 {
        return Err(invalid("subgrid needs at least one point per axis"));
    }
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = (i as f64 + 0.5) * layout.shelf_x / nx as f64;
        for j in 0..ny {
            let y = (j as f64 + 0.5) * layout.width / ny as f64;
            out.push(layout.ue_at(x, y));
        }
    }
    Ok(out)
}
