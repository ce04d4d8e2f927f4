use super::OriginTrajectory;

/// Values at or below this magnitude have no sign.
pub const ZERO_TOL: f64 = 1e-12;
/// A minimum of `|W(0,0)|` below this without a sign change is a touch.
pub const TOUCH_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Self {
        if v > ZERO_TOL {
            Sign::Positive
        } else if v < -ZERO_TOL {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        }
    }
}

/// Sign changes and tangential zeros of an origin trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroCrossings {
    pub crossings: Vec<f64>,
    pub touches: Vec<f64>,
}

impl ZeroCrossings {
    pub fn last_crossing(&self) -> Option<f64> {
        self.crossings.last().copied()
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimum of `|f|` on `[lo, hi]`.
fn min_abs(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a).abs(), f(b).abs());
    for _ in 0..200 {
        if hi - lo < 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a).abs();
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b).abs();
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t).abs())
}

fn scan(traj: &OriginTrajectory, f: Option<&dyn Fn(f64) -> f64>) -> ZeroCrossings {
    let (t, v) = (&traj.times, &traj.w00);
    let mut out = ZeroCrossings::default();
    let signs: Vec<Sign> = v.iter().map(|x| Sign::of(*x)).collect();
    let mut prev: Option<usize> = None;
    for i in 0..t.len() {
        if signs[i] == Sign::Zero {
            continue;
        }
        match prev {
            None if i > 0 => out.touches.push(t[0]),
            Some(p) if signs[p] != signs[i] => {
                let at = match f {
                    Some(f) => bisect(f, t[p], t[i]),
                    None if i - p > 1 => 0.5 * (t[p + 1] + t[i - 1]),
                    None => t[p] + (t[i] - t[p]) * v[p] / (v[p] - v[i]),
                };
                out.crossings.push(at);
            }
            Some(p) if i - p > 1 => out.touches.push(0.5 * (t[p + 1] + t[i - 1])),
            _ => {}
        }
        prev = Some(i);
    }
    match prev {
        None => out.touches.push(t[0]),
        Some(p) if p + 1 < t.len() => out.touches.push(t[t.len() - 1]),
        _ => {}
    }

    // Near-zero local minima between samples of equal sign.
    for i in 1..t.len().saturating_sub(1) {
        let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
        if Sign::of(b) == Sign::Zero || Sign::of(a) != Sign::of(b) || Sign::of(c) != Sign::of(b) {
            continue;
        }
        if !(b.abs() <= a.abs() && b.abs() <= c.abs()) {
            continue;
        }
        let (at, depth) = match f {
            Some(f) => min_abs(f, t[i - 1], t[i + 1]),
            None => (t[i], b.abs()),
        };
        if depth < TOUCH_LIMIT {
            out.touches.push(at);
        }
    }
    out.touches.sort_by(f64::total_cmp);
    out.touches.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// Crossings located by linear interpolation between bracketing samples.
pub fn origin_zero_crossings(traj: &OriginTrajectory) -> ZeroCrossings {
    scan(traj, None)
}

/// Crossings refined by bisection on the function that generated the
/// trajectory, to machine precision in `γt`.
pub fn origin_zero_crossings_with(traj: &OriginTrajectory, f: impl Fn(f64) -> f64) -> ZeroCrossings {
    scan(traj, Some(&f))
}

/// Sign sequence of `W(0,0)` between successive crossings on `(0, γt_c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regime {
    pub signs: Vec<Sign>,
}

impl Regime {
    pub fn label(&self) -> String {
        let names: Vec<&str> = self.signs.iter().map(Sign::name).collect();
        match names.as_slice() {
            [] => "undetermined".into(),
            [one] => format!("{one}-throughout"),
            [a, b] => format!("{a}-then-{b}"),
            many => many.join("-"),
        }
    }
}

fn regime_from(crossings: &ZeroCrossings, tc: f64, tc_tol: f64, sign_at: impl Fn(f64, f64) -> Sign) -> Regime {
    let mut cuts = vec![0.0];
    cuts.extend(crossings.crossings.iter().copied().filter(|c| *c > 0.0 && *c < tc - tc_tol));
    cuts.push(tc);
    let mut signs: Vec<Sign> = Vec::new();
    for w in cuts.windows(2) {
        let s = sign_at(w[0], w[1]);
        if s != Sign::Zero && signs.last() != Some(&s) {
            signs.push(s);
        }
    }
    Regime { signs }
}

/// Regime from trajectory samples. Crossings within `tc_tol` of `tc` are
/// taken to be the threshold itself.
pub fn classify_regime(traj: &OriginTrajectory, crossings: &ZeroCrossings, tc: f64, tc_tol: f64) -> Regime {
    regime_from(crossings, tc, tc_tol, |a, b| {
        let mid = 0.5 * (a + b);
        traj.times
            .iter()
            .zip(&traj.w00)
            .filter(|(t, v)| **t > a && **t < b && Sign::of(**v) != Sign::Zero)
            .min_by(|x, y| (x.0 - mid).abs().total_cmp(&(y.0 - mid).abs()))
            .map_or(Sign::Zero, |(_, v)| Sign::of(*v))
    })
}

/// Regime from the generating function, sampled at segment midpoints.
pub fn classify_regime_with(f: impl Fn(f64) -> f64, crossings: &ZeroCrossings, tc: f64, tc_tol: f64) -> Regime {
    regime_from(crossings, tc, tc_tol, |a, b| Sign::of(f(0.5 * (a + b))))
}
