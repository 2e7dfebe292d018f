//! Static scatter plots.

const SIZE: f64 = 400.0;

pub struct Series {
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub radius: f64,
}

/// Points in `[-1, 1]²` on a square canvas with the unit circle drawn.
pub fn scatter(title: &str, series: &[Series]) -> String {
    let map = |v: f64| (v + 1.1) / 2.2 * SIZE;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    s.push_str(&format!("<title>{title}</title>\n"));
    s.push_str(&format!(
        "<circle cx=\"{c:.2}\" cy=\"{c:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"#999\"/>\n",
        c = SIZE / 2.0,
        r = SIZE / 2.2
    ));
    for ser in series {
        for &(x, y) in &ser.points {
            s.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\" fill=\"{}\"/>\n",
                map(x),
                map(-y),
                ser.radius,
                ser.color
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

/// A line of RP¹ given by a unit vector, as a point on the circle.
pub fn circle_point(v: &[f64]) -> (f64, f64) {
    let t = 2.0 * v[1].atan2(v[0]);
    (t.cos(), t.sin())
}

/// A point of RP² in the disk model of the upper hemisphere.
pub fn disk_point(v: &[f64]) -> (f64, f64) {
    let s = if v[2] < 0.0 { -1.0 } else { 1.0 };
    let (x, y, z) = (s * v[0], s * v[1], s * v[2]);
    (x / (1.0 + z), y / (1.0 + z))
}

pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
