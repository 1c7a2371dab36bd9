use super::accumulator::GaussianAccumulator;
use super::unwrap::{vertex_values, UnwrappedImage, NO_VERTEX};
use crate::geometry::Vec3;
use crate::segmentation::MAX_GROUPS;

/// A dominant direction and its accumulated image weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub normal: Vec3,
    pub weight: f64,
}

/// Pixels above `v_min` that no 3x3 neighbor exceeds and at least one
/// neighbor falls below, in row-major order. Image borders only compare
/// against the neighbors that exist, and pixels outside the charts are
/// ignored. A flat top, such as the three vertices
/// of a lone busy cell, yields one peak per pixel for the clustering step
/// to merge; a constant image yields none.
pub fn detect_peaks(img: &UnwrappedImage, v_min: u8) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for r in 0..img.rows {
        for c in 0..img.cols {
            let v = img.pixel_vertex[r * img.cols + c];
            let value = img.get(r, c);
            if v == NO_VERTEX || !(value > f64::from(v_min)) {
                continue;
            }
            let mut is_max = true;
            let mut has_lower = false;
            'window: for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (rr, cc) = (r as isize + dr, c as isize + dc);
                    if rr < 0 || cc < 0 || rr >= img.rows as isize || cc >= img.cols as isize {
                        continue;
                    }
                    let (rr, cc) = (rr as usize, cc as usize);
                    if img.pixel_vertex[rr * img.cols + cc] == NO_VERTEX {
                        continue;
                    }
                    let other = img.get(rr, cc);
                    if other > value {
                        is_max = false;
                        break 'window;
                    }
                    has_lower |= other < value;
                }
            }
            if is_max && has_lower {
                peaks.push(Peak {
                    normal: img.vertex_normals[v],
                    weight: value,
                });
            }
        }
    }
    peaks
}

/// Reference detector working on the sphere itself: vertices above `v_min`
/// that no edge neighbor exceeds and at least one falls below.
pub fn detect_peaks_on_sphere(ga: &GaussianAccumulator, v_min: u8) -> Vec<Peak> {
    let values = vertex_values(ga);
    let adjacency = ga.icosahedron().vertex_neighbors();
    let mut peaks = Vec::new();
    for (v, &value) in values.iter().enumerate() {
        if value > f64::from(v_min) && adjacency[v].iter().all(|&w| values[w] <= value)
            && adjacency[v].iter().any(|&w| values[w] < value) {
            peaks.push(Peak {
                normal: ga.icosahedron().vertices[v],
                weight: value,
            });
        }
    }
    peaks
}

/// Merges peaks closer than `d_peak` (single linkage on Euclidean distance)
/// into weight-averaged unit normals. The result is ordered by descending
/// weight, ties keeping input order, and holds at most 254 peaks.
pub fn cluster_peaks(raw: &[Peak], d_peak: f64) -> Vec<Peak> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if raw[i].normal.distance(raw[j].normal) < d_peak {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    // Clusters keyed by their smallest member, in first-member order.
    let mut sums: Vec<(usize, Vec3, f64)> = Vec::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        let p = raw[i];
        match sums.iter_mut().find(|(key, _, _)| *key == r) {
            Some((_, acc, w)) => {
                *acc += p.normal * p.weight;
                *w += p.weight;
            }
            None => sums.push((r, p.normal * p.weight, p.weight)),
        }
    }
    let mut out: Vec<Peak> = sums
        .into_iter()
        .map(|(_, acc, w)| Peak {
            normal: acc.normalized(),
            weight: w,
        })
        .filter(|p| !p.normal.is_nan())
        .collect();
    out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    out.truncate(MAX_GROUPS);
    out
}
