//! A two-player game over the decision tree. X picks `x`, Y picks `y` and
//! may also choose the correlation `rho` between them.

use crate::error::{Error, Result};

/// `c0 + cx x + cy y + cxy x y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bilinear {
    pub c0: f64,
    pub cx: f64,
    pub cy: f64,
    pub cxy: f64,
}

impl Bilinear {
    pub const fn new(c0: f64, cx: f64, cy: f64, cxy: f64) -> Self {
        Self { c0, cx, cy, cxy }
    }

    /// Evaluates at `(x, y)` with `<xy>` supplied separately, so the same
    /// form serves pure play, functional relations and independence.
    pub fn expect(&self, x: f64, y: f64, xy: f64) -> f64 {
        self.c0 + self.cx * x + self.cy * y + self.cxy * xy
    }

    pub fn at(&self, x: f64, y: f64) -> f64 {
        self.expect(x, y, x * y)
    }

    fn is_finite(&self) -> bool {
        [self.c0, self.cx, self.cy, self.cxy]
            .iter()
            .all(|c| c.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSpec {
    pub x: Bilinear,
    pub y: Bilinear,
}

impl Default for GameSpec {
    /// `Pi^X = 3 - 2x - y + 4xy`, `Pi^Y = 1 + 3x + y - 2xy`.
    fn default() -> Self {
        Self {
            x: Bilinear::new(3.0, -2.0, -1.0, 4.0),
            y: Bilinear::new(1.0, 3.0, 1.0, -2.0),
        }
    }
}

impl GameSpec {
    pub fn new(x: Bilinear, y: Bilinear) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::BadParams(
                "payoff coefficients must be finite".into(),
            ));
        }
        Ok(Self { x, y })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Pure { x: u8, y: u8 },
    Mixed { p: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameOutcome {
    /// `None` for the unconstrained baseline.
    pub rho: Option<f64>,
    pub strategy: Strategy,
    /// `(<Pi^X>, <Pi^Y>)`.
    pub payoffs: (f64, f64),
}

fn pure(g: &GameSpec, rho: Option<f64>, x: u8, y: u8) -> GameOutcome {
    let (xf, yf) = (x as f64, y as f64);
    GameOutcome {
        rho,
        strategy: Strategy::Pure { x, y },
        payoffs: (g.x.at(xf, yf), g.y.at(xf, yf)),
    }
}

/// `a` if `va >= vb` (ties go to the first), else `b`.
fn argmax2(va: f64, vb: f64) -> u8 {
    if vb > va {
        1
    } else {
        0
    }
}

/// Y answers each `x` (ties to `y = 0`), then X picks the better branch
/// (ties to `x = 0`).
pub fn backward_induction(g: &GameSpec) -> GameOutcome {
    let reply = |x: f64| argmax2(g.y.at(x, 0.0), g.y.at(x, 1.0));
    let (y0, y1) = (reply(0.0), reply(1.0));
    let x = argmax2(g.x.at(0.0, y0 as f64), g.x.at(1.0, y1 as f64));
    let y = if x == 0 { y0 } else { y1 };
    pure(g, None, x, y)
}

const BR_MAX_ITER: usize = 1000;
const BR_TOL: f64 = 1e-10;

/// Boundary reply to a slope; zero slope plays 0.
fn boundary(slope: f64) -> f64 {
    if slope > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Equilibrium under independence, where `<xy> = pq`.
fn independent_equilibrium(g: &GameSpec) -> (f64, f64) {
    // d<Pi^X>/dp = cx + cxy q, d<Pi^Y>/dq = cy + cxy' p
    let q_root = (g.x.cxy != 0.0).then(|| -g.x.cx / g.x.cxy);
    let p_root = (g.y.cxy != 0.0).then(|| -g.y.cy / g.y.cxy);
    if let (Some(p), Some(q)) = (p_root, q_root) {
        if (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q) {
            return (p, q);
        }
    }
    let (mut p, mut q) = (0.0, 0.0);
    for _ in 0..BR_MAX_ITER {
        let np = boundary(g.x.cx + g.x.cxy * q);
        let nq = boundary(g.y.cy + g.y.cxy * np);
        let done = (np - p).abs() <= BR_TOL && (nq - q).abs() <= BR_TOL;
        p = np;
        q = nq;
        if done {
            break;
        }
    }
    (p, q)
}

/// Equilibrium on the correlation slice `rho` in `{-1, 0, 1}`.
pub fn solve_slice(g: &GameSpec, rho: f64) -> Result<GameOutcome> {
    if rho == 1.0 {
        // y = x = xy
        let x = argmax2(g.x.at(0.0, 0.0), g.x.at(1.0, 1.0));
        Ok(pure(g, Some(rho), x, x))
    } else if rho == -1.0 {
        // y = 1 - x, xy = 0
        let x = argmax2(g.x.at(0.0, 1.0), g.x.at(1.0, 0.0));
        Ok(pure(g, Some(rho), x, 1 - x))
    } else if rho == 0.0 {
        let (p, q) = independent_equilibrium(g);
        Ok(GameOutcome {
            rho: Some(0.0),
            strategy: Strategy::Mixed { p, q },
            payoffs: (g.x.expect(p, q, p * q), g.y.expect(p, q, p * q)),
        })
    } else {
        Err(Error::UnsupportedRho(rho))
    }
}

pub const SLICES: [f64; 3] = [-1.0, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// One outcome per slice in [`SLICES`] order.
    pub slices: Vec<GameOutcome>,
    /// The slice Y prefers; ties go to the smaller `rho`.
    pub chosen: GameOutcome,
}

pub fn global_comparison(g: &GameSpec) -> Comparison {
    let slices: Vec<GameOutcome> = SLICES
        .iter()
        .map(|&rho| solve_slice(g, rho).expect("supported slice"))
        .collect();
    let mut chosen = slices[0];
    for s in &slices[1..] {
        if s.payoffs.1 > chosen.payoffs.1 {
            chosen = *s;
        }
    }
    Comparison { slices, chosen }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline() {
        let o = backward_induction(&GameSpec::default());
        assert_eq!(o.strategy, Strategy::Pure { x: 0, y: 1 });
        assert_eq!(o.payoffs, (2.0, 2.0));
    }

    #[test]
    fn dominant_and_zero_games() {
        let g = GameSpec::new(
            Bilinear::new(0.0, 1.0, 0.0, 0.0),
            Bilinear::new(0.0, 0.0, 1.0, 0.0),
        )
        .unwrap();
        let o = backward_induction(&g);
        assert_eq!(o.strategy, Strategy::Pure { x: 1, y: 1 });
        assert_eq!(o.payoffs, (1.0, 1.0));
        let zero = Bilinear::new(0.0, 0.0, 0.0, 0.0);
        let o = backward_induction(&GameSpec::new(zero, zero).unwrap());
        assert_eq!(o.strategy, Strategy::Pure { x: 0, y: 0 });
    }

    #[test]
    fn slices() {
        let g = GameSpec::default();
        assert_eq!(solve_slice(&g, 1.0).unwrap().payoffs, (4.0, 3.0));
        assert_eq!(solve_slice(&g, -1.0).unwrap().payoffs, (2.0, 2.0));
        let mid = solve_slice(&g, 0.0).unwrap();
        assert_eq!(mid.strategy, Strategy::Mixed { p: 0.5, q: 0.5 });
        assert_eq!(mid.payoffs, (2.5, 2.5));
        assert_eq!(solve_slice(&g, 0.5), Err(Error::UnsupportedRho(0.5)));
    }

    #[test]
    fn chosen_slice() {
        let c = global_comparison(&GameSpec::default());
        assert_eq!(c.chosen.rho, Some(1.0));
        assert_eq!(c.chosen.payoffs, (4.0, 3.0));
    }
}
