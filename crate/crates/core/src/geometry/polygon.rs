use nalgebra::Vector2;

type P = Vector2<f64>;

/// Shoelace area, positive for counterclockwise vertex order.
pub fn polygon_area(vertices: &[P]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| cross(&vertices[i], &vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

pub fn polygon_centroid(vertices: &[P]) -> Option<P> {
    let n = vertices.len();
    let area = polygon_area(vertices);
    if n < 3 || area.abs() < 1e-300 {
        return None;
    }
    let mut c = P::zeros();
    for i in 0..n {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
        c += (a + b) * cross(a, b);
    }
    Some(c / (6.0 * area))
}

pub(crate) fn cross(a: &P, b: &P) -> f64 {
    a.x * b.y - a.y * b.x
}

/// A convex polygon whose edges remember which clipping constraint produced
/// them. `labels[i]` belongs to the edge `vertices[i] → vertices[i + 1]`.
#[derive(Clone, Debug)]
pub(crate) struct LabeledPolygon {
    pub vertices: Vec<P>,
    pub labels: Vec<Option<usize>>,
}

const ON_LINE: f64 = 1e-12;
const MERGE: f64 = 1e-12;

impl LabeledPolygon {
    pub fn rect(min: P, max: P) -> Self {
        LabeledPolygon {
            vertices: vec![min, P::new(max.x, min.y), max, P::new(min.x, max.y)],
            labels: vec![None; 4],
        }
    }

    /// One Sutherland–Hodgman step: keep `{p : normal·p ≤ offset}`.
    pub fn clip(&mut self, normal: &P, offset: f64, label: usize) {
        let n = self.vertices.len();
        if n == 0 {
            return;
        }
        let scale = normal.norm().max(1.0);
        let slack: Vec<f64> = self.vertices.iter().map(|p| (offset - normal.dot(p)) / scale).collect();
        if slack.iter().all(|&s| s >= -ON_LINE) {
            return;
        }
        let mut verts = Vec::with_capacity(n + 1);
        let mut labels = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (cur, next) = (self.vertices[i], self.vertices[j]);
            let (sc, sn) = (slack[i], slack[j]);
            let cur_in = sc >= -ON_LINE;
            let next_in = sn >= -ON_LINE;
            let crossing = || {
                let t = (sc / (sc - sn)).clamp(0.0, 1.0);
                cur + (next - cur) * t
            };
            match (cur_in, next_in) {
                (true, true) => {
                    verts.push(cur);
                    labels.push(self.labels[i]);
                }
                (true, false) => {
                    verts.push(cur);
                    labels.push(self.labels[i]);
                    verts.push(crossing());
                    labels.push(Some(label));
                }
                (false, true) => {
                    verts.push(crossing());
                    labels.push(self.labels[i]);
                }
                (false, false) => {}
            }
        }
        self.vertices = verts;
        self.labels = labels;
        self.merge_close();
    }

    fn merge_close(&mut self) {
        let mut i = 0;
        while self.vertices.len() > 1 && i < self.vertices.len() {
            let j = (i + 1) % self.vertices.len();
            if (self.vertices[i] - self.vertices[j]).norm() < MERGE {
                // the edge i → j has zero length; the edge leaving j survives
                self.vertices.remove(i);
                self.labels.remove(i);
            } else {
                i += 1;
            }
        }
    }

    #[cfg(test)]
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_area_and_centroid() {
        let sq = [P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(1.0, 1.0), P::new(0.0, 1.0)];
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        assert!((polygon_centroid(&sq).unwrap() - P::new(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn clip_square_diagonally() {
        let mut p = LabeledPolygon::rect(P::new(0.0, 0.0), P::new(1.0, 1.0));
        // keep x + y <= 1
        p.clip(&P::new(1.0, 1.0), 1.0, 7);
        assert_eq!(p.vertices.len(), 3);
        assert!((p.area() - 0.5).abs() < 1e-15);
        assert_eq!(p.labels.iter().filter(|l| **l == Some(7)).count(), 1);
    }

    #[test]
    fn clip_through_vertex_keeps_polygon_clean() {
        let mut p = LabeledPolygon::rect(P::new(0.0, 0.0), P::new(1.0, 1.0));
        p.clip(&P::new(1.0, 0.0), 1.0, 3); // coincides with an existing edge
        assert_eq!(p.vertices.len(), 4);
        p.clip(&P::new(1.0, 0.0), 0.5, 4);
        assert_eq!(p.vertices.len(), 4);
        assert!((p.area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clip_everything_away() {
        let mut p = LabeledPolygon::rect(P::new(0.0, 0.0), P::new(1.0, 1.0));
        p.clip(&P::new(1.0, 0.0), -1.0, 0);
        assert!(p.vertices.is_empty());
    }
}
