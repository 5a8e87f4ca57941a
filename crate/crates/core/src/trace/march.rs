//! Marching squares over a rectangular box, streamed row by row.
//!
//! Nodes outside the neighbourhood disk or on the box frame are forced to the
//! "outside" state, so every contour closes; crossings next to such nodes are
//! flagged so callers can tell a real loop from one cut by the frame.

use std::collections::HashMap;

use crate::geometry::Point;
use crate::poly::Derivatives;

#[derive(Clone, Copy, Debug)]
pub(crate) struct GridBox {
    pub cx: f64,
    pub cy: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridBox {
    pub fn square(radius: f64, n: usize) -> Self {
        GridBox { cx: 0.0, cy: 0.0, hx: radius, hy: radius, nx: n, ny: n }
    }

    /// Node abscissa; `(2i - n) / n` keeps boxes centred on an axis exactly
    /// mirror-symmetric.
    pub fn x(&self, i: usize) -> f64 {
        self.cx + self.hx * ((2.0 * i as f64 - self.nx as f64) / self.nx as f64)
    }

    pub fn y(&self, j: usize) -> f64 {
        self.cy + self.hy * ((2.0 * j as f64 - self.ny as f64) / self.ny as f64)
    }

    pub fn cell_diag(&self) -> f64 {
        let dx = 2.0 * self.hx / self.nx as f64;
        let dy = 2.0 * self.hy / self.ny as f64;
        (dx * dx + dy * dy).sqrt()
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    v: f64,
    /// 0 real sample, 1 outside the disk, 2 box frame
    forced: u8,
}

impl Node {
    fn inside(&self) -> bool {
        self.forced == 0 && self.v < 0.0
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Crossing {
    pub p: Point,
    pub inside: Point,
    pub outside: Point,
    pub touches_disk: bool,
    pub touches_frame: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Contour {
    pub crossings: Vec<Crossing>,
    pub touches_disk: bool,
    pub touches_frame: bool,
}

impl Contour {
    pub fn points(&self) -> Vec<Point> {
        self.crossings.iter().map(|c| c.p).collect()
    }
}

const H: u64 = 0;
const V: u64 = 1;

fn key(kind: u64, i: usize, j: usize) -> u64 {
    (kind << 62) | ((i as u64) << 31) | j as u64
}

fn node_values(d: &Derivatives, level: f64, g: &GridBox, radius: f64, j: usize) -> Vec<Node> {
    let y = g.y(j);
    let coeffs = d.f.restrict_y(y);
    (0..=g.nx)
        .map(|i| {
            let x = g.x(i);
            if i == 0 || j == 0 || i == g.nx || j == g.ny {
                return Node { v: 1.0, forced: 2 };
            }
            if x * x + y * y >= radius * radius {
                return Node { v: 1.0, forced: 1 };
            }
            let mut acc = 0.0;
            for c in coeffs.iter().rev() {
                acc = acc * x + c;
            }
            Node { v: acc - level, forced: 0 }
        })
        .collect()
}

/// All closed contours of `f = level` inside the box.
pub(crate) fn march(d: &Derivatives, level: f64, g: &GridBox, radius: f64) -> Vec<Contour> {
    let mut crossings: HashMap<u64, Crossing> = HashMap::new();
    let mut adj: HashMap<u64, [u64; 2]> = HashMap::new();
    const NONE: u64 = u64::MAX;

    let mut link = |a: u64, b: u64| {
        for (from, to) in [(a, b), (b, a)] {
            let e = adj.entry(from).or_insert([NONE, NONE]);
            if e[0] == NONE {
                e[0] = to;
            } else {
                e[1] = to;
            }
        }
    };

    let mut add_crossing = |k: u64, pa: Point, na: Node, pb: Point, nb: Node| {
        crossings.entry(k).or_insert_with(|| {
            let (pin, nin, pout, nout) = if na.inside() { (pa, na, pb, nb) } else { (pb, nb, pa, na) };
            let p = if nin.forced == 0 && nout.forced == 0 {
                let t = nin.v / (nin.v - nout.v);
                (pin.0 + t * (pout.0 - pin.0), pin.1 + t * (pout.1 - pin.1))
            } else {
                (0.5 * (pin.0 + pout.0), 0.5 * (pin.1 + pout.1))
            };
            Crossing {
                p,
                inside: pin,
                outside: pout,
                touches_disk: nin.forced == 1 || nout.forced == 1,
                touches_frame: nin.forced == 2 || nout.forced == 2,
            }
        });
    };

    let mut lower = node_values(d, level, g, radius, 0);
    for j in 0..g.ny {
        let upper = node_values(d, level, g, radius, j + 1);
        let (y0, y1) = (g.y(j), g.y(j + 1));
        for i in 0..g.nx {
            let (bl, br, tr, tl) = (lower[i], lower[i + 1], upper[i + 1], upper[i]);
            let case = (bl.inside() as u8) | (br.inside() as u8) << 1 | (tr.inside() as u8) << 2 | (tl.inside() as u8) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            let (x0, x1) = (g.x(i), g.x(i + 1));
            let kb = key(H, i, j);
            let kt = key(H, i, j + 1);
            let kl = key(V, i, j);
            let kr = key(V, i + 1, j);
            let mut edge = |k: u64| match k {
                _ if k == kb => add_crossing(kb, (x0, y0), bl, (x1, y0), br),
                _ if k == kt => add_crossing(kt, (x0, y1), tl, (x1, y1), tr),
                _ if k == kl => add_crossing(kl, (x0, y0), bl, (x0, y1), tl),
                _ => add_crossing(kr, (x1, y0), br, (x1, y1), tr),
            };
            let center_inside = || {
                let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
                d.f.evaluate(cx, cy) - level < 0.0
            };
            let segs: &[(u64, u64)] = match case {
                1 | 14 => &[(kl, kb)],
                2 | 13 => &[(kb, kr)],
                3 | 12 => &[(kl, kr)],
                4 | 11 => &[(kr, kt)],
                6 | 9 => &[(kb, kt)],
                7 | 8 => &[(kl, kt)],
                5 => {
                    if center_inside() {
                        &[(kl, kt), (kb, kr)]
                    } else {
                        &[(kl, kb), (kr, kt)]
                    }
                }
                10 => {
                    if center_inside() {
                        &[(kl, kb), (kr, kt)]
                    } else {
                        &[(kb, kr), (kl, kt)]
                    }
                }
                _ => unreachable!(),
            };
            for &(a, b) in segs {
                edge(a);
                edge(b);
                link(a, b);
            }
        }
        lower = upper;
    }

    let mut keys: Vec<u64> = adj.keys().copied().collect();
    keys.sort_unstable();
    let mut visited: HashMap<u64, bool> = HashMap::with_capacity(keys.len());
    let mut out = Vec::new();
    for &start in &keys {
        if visited.contains_key(&start) {
            continue;
        }
        let mut ring = vec![start];
        visited.insert(start, true);
        let mut prev = NONE;
        let mut cur = start;
        loop {
            let nb = adj[&cur];
            let next = if nb[0] != prev { nb[0] } else { nb[1] };
            if next == NONE || next == start {
                break;
            }
            if visited.contains_key(&next) {
                break;
            }
            visited.insert(next, true);
            ring.push(next);
            prev = cur;
            cur = next;
        }
        let cs: Vec<Crossing> = ring.iter().map(|k| crossings[k]).collect();
        let touches_disk = cs.iter().any(|c| c.touches_disk);
        let touches_frame = cs.iter().any(|c| c.touches_frame);
        if cs.len() >= 3 {
            out.push(Contour { crossings: cs, touches_disk, touches_frame });
        }
    }
    out
}
