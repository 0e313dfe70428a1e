//! Concrete Fuchsian realization of the surface group at curvature −1.
//!
//! The fundamental domain is the regular hyperbolic 4g-gon centered at the
//! base point i with vertex angle 2π/4g. At genus 2 the model is the Bolza
//! surface: the polygon is the Dirichlet domain of the group generated by
//! the four opposite-side translations k₀,…,k₃ (axes through the center at
//! angles jπ/4, translation length 2 arccosh(1+√2)). The commutator-relator
//! generators are fixed words in those translations,
//!
//!   a₁ = k₀,  b₁ = k₁⁻¹,  a₂ = k₂⁻¹k₃,  b₂ = k₀k₁⁻¹k₂,
//!
//! all of translation length 2 arccosh(1+√2) (the systole), satisfying
//! [a₁,b₁][a₂,b₂] = ±I. A literal side pairing of the regular octagon for
//! the commutator labeling produces a different, smaller-systole surface,
//! so the genus-2 generators are taken as the words above instead. For
//! genus ≥ 3 the generators are obtained directly from the side pairings of
//! the regular 4g-gon with the commutator boundary labeling.

use crate::group::{GroupError, Presentation, Word};
use crate::hyp::{self, Axis, HPoint, Isometry};
use rayon::prelude::*;
use std::collections::HashSet;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hyp(#[from] hyp::HypError),
    #[error("relator check failed: distance to ±identity = {0:.3e}")]
    RelatorCheck(f64),
    #[error("model file is malformed: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One side of the fundamental polygon with an orientation picked so that
/// the interior is the positive side.
#[derive(Clone, Debug)]
struct Side {
    axis: Axis,
    inside_sign: f64,
}

impl Side {
    fn value(&self, p: HPoint) -> f64 {
        match self.axis {
            Axis::Circle { center, radius } => {
                let dx = p.x - center;
                dx * dx + p.y * p.y - radius * radius
            }
            Axis::Vertical { x } => p.x - x,
        }
    }

    fn inside(&self, p: HPoint) -> bool {
        self.value(p) * self.inside_sign >= 0.0
    }
}

/// Fitted Svarc–Milnor comparison |γ|_𝒜 ≤ κ₁ d(γx₀, x₀) + κ₂.
#[derive(Clone, Copy, Debug)]
pub struct SvarcMilnor {
    pub kappa1: f64,
    pub kappa2: f64,
}

impl SvarcMilnor {
    /// Word-length cutoff that guarantees completeness of a displacement-R
    /// ball (one extra letter of safety margin).
    pub fn word_cutoff(&self, radius: f64) -> usize {
        (self.kappa1 * radius + self.kappa2).ceil() as usize + 1
    }
}

/// Immutable Fuchsian model; shareable across worker threads.
#[derive(Clone, Debug)]
pub struct FuchsianModel {
    presentation: Presentation,
    /// Generators a₁,b₁,…,a_g,b_g.
    gens: Vec<Isometry>,
    /// Per-letter matrices aligned with `Letter::index()`.
    steps: Vec<Isometry>,
    /// d(x₀, s x₀) per letter.
    step_disps: Vec<f64>,
    base: HPoint,
    domain_radius: f64,
    in_radius: f64,
    sides: Vec<Side>,
    systole: f64,
    svarc_milnor: SvarcMilnor,
}

/// Depth of the word ball used to fit κ₁, κ₂ and the systole at build time.
/// Words of length ≤ 8 at genus 2; shallower for larger alphabets to keep
/// the ball under ~10⁷ nodes.
fn fit_depth(genus: usize) -> usize {
    let letters = (4 * genus) as f64;
    let mut depth = 8usize;
    while depth > 4 && letters * (letters - 1.0).powi(depth as i32 - 1) > 1.2e7 {
        depth -= 1;
    }
    depth
}

impl FuchsianModel {
    /// Builds the model for a given genus (≥ 2), fits the Svarc–Milnor
    /// constants on the word ball and locates the systole by minimizing
    /// ℓ(γ) over the orbit ball of radius 8.
    pub fn build(genus: usize) -> Result<Self, ModelError> {
        let presentation = Presentation::new(genus)?;
        let n = 4 * genus;
        let alpha = 2.0 * PI / n as f64;
        // right triangle (center, side midpoint, vertex):
        let domain_radius = (1.0 / ((PI / n as f64).tan() * (alpha / 2.0).tan())).acosh();
        let in_radius = ((alpha / 2.0).cos() / (PI / n as f64).sin()).acosh();

        let verts: Vec<HPoint> = (0..n)
            .map(|j| hyp::point_at(domain_radius, 2.0 * PI * (j as f64 + 0.5) / n as f64))
            .collect();

        let gens = if genus == 2 {
            bolza_generators()
        } else {
            polygon_generators(genus, &verts)
        };

        // defining relation, evaluated on the generators
        let mut steps = Vec::with_capacity(2 * n);
        for g in &gens {
            steps.push(*g);
            steps.push(g.inverse());
        }
        let rel = eval_steps(&steps, presentation.relator());
        let err = rel.dist_to_pm_identity();
        if err > 1e-9 {
            return Err(ModelError::RelatorCheck(err));
        }

        let base = HPoint::i();
        let step_disps: Vec<f64> = steps.iter().map(|s| hyp::dist(base, s.apply(base))).collect();

        let sides: Vec<Side> = (0..n)
            .map(|j| {
                let axis = Axis::through(verts[j], verts[(j + 1) % n]);
                let mut side = Side { axis, inside_sign: 1.0 };
                let v = side.value(base);
                side.inside_sign = if v >= 0.0 { 1.0 } else { -1.0 };
                side
            })
            .collect();

        let mut model = FuchsianModel {
            presentation,
            gens,
            steps,
            step_disps,
            base,
            domain_radius,
            in_radius,
            sides,
            systole: 0.0,
            svarc_milnor: SvarcMilnor { kappa1: 1.0, kappa2: 1.0 },
        };
        let (systole, sm) = model.fit_geometry(fit_depth(genus));
        model.systole = systole;
        model.svarc_milnor = sm;
        Ok(model)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn genus(&self) -> usize {
        self.presentation.genus()
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.gens
    }

    /// Matrix of a single letter.
    pub fn step(&self, l: crate::group::Letter) -> &Isometry {
        &self.steps[l.index()]
    }

    /// Largest single-letter displacement; a partial product cannot recover
    /// more than this per remaining letter.
    pub fn max_step(&self) -> f64 {
        self.step_disps.iter().copied().fold(0.0, f64::max)
    }

    pub fn base_point(&self) -> HPoint {
        self.base
    }

    /// Circumradius of the fundamental polygon.
    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn in_radius(&self) -> f64 {
        self.in_radius
    }

    /// Hyperbolic area of the fundamental domain, 4π(g−1) by Gauss–Bonnet.
    pub fn domain_area(&self) -> f64 {
        4.0 * PI * (self.genus() as f64 - 1.0)
    }

    pub fn systole(&self) -> f64 {
        self.systole
    }

    pub fn svarc_milnor(&self) -> SvarcMilnor {
        self.svarc_milnor
    }

    /// Evaluates a word to its matrix (renormalized after every product).
    pub fn evaluate(&self, w: &Word) -> Isometry {
        eval_steps(&self.steps, w)
    }

    pub fn displacement(&self, g: &Isometry) -> f64 {
        hyp::dist(self.base, g.apply(self.base))
    }

    /// Membership in the closed fundamental polygon.
    pub fn domain_contains(&self, p: HPoint) -> bool {
        self.sides.iter().all(|s| s.inside(p))
    }

    /// Fits the systole (min ℓ over the radius-8 orbit ball) and the
    /// Svarc–Milnor envelope on the word ball of depth `depth`.
    fn fit_geometry(&self, depth: usize) -> (f64, SvarcMilnor) {
        const SYSTOLE_BALL: f64 = 8.0;
        let kappa2_grid: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
        let max_step = self.max_step();

        let mut visited: HashSet<u64> = HashSet::new();
        visited.insert(key_hash(&Isometry::identity()));
        let mut frontier: Vec<Isometry> = vec![Isometry::identity()];
        let mut systole = f64::INFINITY;
        // slopes[i] = max over sample of (len - kappa2_grid[i]) / d
        let mut slopes = vec![0.0f64; kappa2_grid.len()];

        for depth_now in 1..=depth {
            let children: Vec<(u64, Isometry, f64, f64)> = frontier
                .par_chunks(4096)
                .flat_map_iter(|chunk| {
                    let mut out = Vec::with_capacity(chunk.len() * self.steps.len());
                    for m in chunk {
                        for s in &self.steps {
                            let mm = m.mul(s);
                            let d = self.displacement(&mm);
                            out.push((key_hash(&mm), mm, d, mm.trace().abs()));
                        }
                    }
                    out
                })
                .collect();
            let mut next = Vec::new();
            for (k, m, d, t) in children {
                if !visited.insert(k) {
                    continue;
                }
                if d <= SYSTOLE_BALL && t > 2.0 + 1e-9 {
                    systole = systole.min(2.0 * (t / 2.0).acosh());
                }
                if d > 1e-9 {
                    for (i, k2) in kappa2_grid.iter().enumerate() {
                        let s = (depth_now as f64 - k2) / d;
                        if s > slopes[i] {
                            slopes[i] = s;
                        }
                    }
                }
                next.push(m);
            }
            frontier = next;
        }

        // choose the pair minimizing the cutoff at the default maximal radius
        let r_ref = 14.0;
        let mut best = (f64::INFINITY, SvarcMilnor { kappa1: 1.0, kappa2: 1.0 });
        for (i, k2) in kappa2_grid.iter().enumerate() {
            let k1 = slopes[i].max(1.0 / max_step);
            let cost = k1 * r_ref + k2;
            if cost < best.0 {
                best = (cost, SvarcMilnor { kappa1: k1, kappa2: *k2 });
            }
        }
        (systole, best.1)
    }

    /// Serializes the model to a structured text file: genus, generator
    /// matrices (row-major, 17 significant digits), κ₁, κ₂, ℓ₀.
    pub fn save(&self, w: &mut impl Write) -> Result<(), ModelError> {
        writeln!(w, "genus {}", self.genus())?;
        for (i, g) in self.gens.iter().enumerate() {
            writeln!(
                w,
                "gen {} {:.17e} {:.17e} {:.17e} {:.17e}",
                i, g.m[0][0], g.m[0][1], g.m[1][0], g.m[1][1]
            )?;
        }
        writeln!(w, "kappa1 {:.17e}", self.svarc_milnor.kappa1)?;
        writeln!(w, "kappa2 {:.17e}", self.svarc_milnor.kappa2)?;
        writeln!(w, "systole {:.17e}", self.systole)?;
        Ok(())
    }

    /// Reloads a serialized model. Polygon data is reconstructed from the
    /// genus; the stored matrices and fitted constants are taken verbatim.
    pub fn load(r: &mut impl BufRead) -> Result<Self, ModelError> {
        let mut lines = r.lines();
        let head = lines
            .next()
            .ok_or_else(|| ModelError::Parse("empty file".into()))??;
        let genus: usize = head
            .strip_prefix("genus ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ModelError::Parse(format!("bad header {head:?}")))?;
        let mut model = FuchsianModel::build(genus)?;
        let mut gens = Vec::with_capacity(2 * genus);
        let mut kappa1 = model.svarc_milnor.kappa1;
        let mut kappa2 = model.svarc_milnor.kappa2;
        let mut systole = model.systole;
        for line in lines {
            let line = line?;
            let mut it = line.split_whitespace();
            match it.next() {
                Some("gen") => {
                    let vals: Vec<f64> = it.skip(1).map(|t| t.parse().unwrap_or(f64::NAN)).collect();
                    if vals.len() != 4 || vals.iter().any(|v| !v.is_finite()) {
                        return Err(ModelError::Parse(format!("bad gen line {line:?}")));
                    }
                    gens.push(Isometry::new([[vals[0], vals[1]], [vals[2], vals[3]]])?);
                }
                Some("kappa1") => kappa1 = parse_f64(&line, it.next())?,
                Some("kappa2") => kappa2 = parse_f64(&line, it.next())?,
                Some("systole") => systole = parse_f64(&line, it.next())?,
                _ => return Err(ModelError::Parse(format!("unexpected line {line:?}"))),
            }
        }
        if gens.len() != 2 * genus {
            return Err(ModelError::Parse("wrong generator count".into()));
        }
        model.gens = gens;
        model.steps.clear();
        for g in &model.gens {
            model.steps.push(*g);
            model.steps.push(g.inverse());
        }
        model.step_disps = model
            .steps
            .iter()
            .map(|s| hyp::dist(model.base, s.apply(model.base)))
            .collect();
        model.svarc_milnor = SvarcMilnor { kappa1, kappa2 };
        model.systole = systole;
        Ok(model)
    }
}

fn parse_f64(line: &str, tok: Option<&str>) -> Result<f64, ModelError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| ModelError::Parse(format!("bad numeric line {line:?}")))
}

fn eval_steps(steps: &[Isometry], w: &Word) -> Isometry {
    let mut m = Isometry::identity();
    for l in w.letters() {
        m = m.mul(&steps[l.index()]);
    }
    m
}

/// Sign-canonical quantized key of a matrix, hashed to u64. Quantum 1e−7:
/// matrices of distinct group elements in the balls used here are separated
/// by ≫ 1e−6, and entries stay well inside i64 range.
pub(crate) fn key_hash(m: &Isometry) -> u64 {
    const Q: f64 = 1e7;
    let f = [m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]];
    let mut sign = 1.0;
    for v in f {
        if v.abs() > 1e-6 {
            if v < 0.0 {
                sign = -1.0;
            }
            break;
        }
    }
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in f {
        let q = (v * sign * Q).round() as i64;
        h ^= q as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
        h ^= h >> 29;
    }
    h
}

/// The four Bolza opposite-side translations and the systolic commutator
/// basis expressed in them.
fn bolza_generators() -> Vec<Isometry> {
    let l0 = 2.0 * (1.0 + 2.0f64.sqrt()).acosh();
    let k: Vec<Isometry> = (0..4)
        .map(|j| {
            let r = hyp::rotation_about_i(j as f64 * PI / 4.0);
            r.mul(&hyp::boost(l0)).mul(&r.inverse())
        })
        .collect();
    vec![
        k[0],
        k[1].inverse(),
        k[2].inverse().mul(&k[3]),
        k[0].mul(&k[1].inverse()).mul(&k[2]),
    ]
}

/// Side pairings of the regular 4g-gon with commutator boundary labeling
/// a₁ b₁ a₁⁻¹ b₁⁻¹ a₂ …: sides 4m and 4m+2 are paired, as are 4m+1 and
/// 4m+3. The generator assignment a_m = p_{m,0}, b_m = p_{m,1}⁻¹ satisfies
/// the commutator relator (verified at build time).
fn polygon_generators(genus: usize, verts: &[HPoint]) -> Vec<Isometry> {
    let n = 4 * genus;
    let mut gens = Vec::with_capacity(2 * genus);
    for m in 0..genus {
        for t in 0..2 {
            let p = 4 * m + t;
            let q = p + 2;
            let g = pair_map(
                verts[q],
                verts[(q + 1) % n],
                verts[(p + 1) % n],
                verts[p],
            );
            gens.push(if t == 0 { g } else { g.inverse() });
        }
    }
    gens
}

/// Unique orientation-preserving isometry with p ↦ p2 and q ↦ q2
/// (requires d(p,q) = d(p2,q2)).
fn pair_map(p: HPoint, q: HPoint, p2: HPoint, q2: HPoint) -> Isometry {
    let ta = to_standard(p, q);
    let tb = to_standard(p2, q2);
    tb.inverse().mul(&ta)
}

/// Isometry taking `p` to i and `q` onto the imaginary half-line above i.
fn to_standard(p: HPoint, q: HPoint) -> Isometry {
    let s = 1.0 / p.y.sqrt();
    let t1 = Isometry { m: [[s, -p.x * s], [0.0, p.y * s]] };
    let b = t1.apply(q);
    let rot = if b.x.abs() < 1e-14 {
        if b.y > 1.0 {
            Isometry::identity()
        } else {
            hyp::rotation_about_i(PI)
        }
    } else {
        // boundary endpoint of the geodesic from i through b
        let c = (b.x * b.x + b.y * b.y - 1.0) / (2.0 * b.x);
        let r = (c * c + 1.0).sqrt();
        let e = if b.x > 0.0 { c + r } else { c - r };
        let s = 1.0 / (1.0 + e * e).sqrt();
        let rot = Isometry { m: [[e * s, s], [-s, e * s]] };
        if rot.apply(b).y < 1.0 {
            hyp::rotation_about_i(PI).mul(&rot)
        } else {
            rot
        }
    };
    rot.mul(&t1)
}

#[cfg(test)]
pub(crate) fn shared_genus2() -> &'static FuchsianModel {
    use std::sync::OnceLock;
    static MODEL: OnceLock<FuchsianModel> = OnceLock::new();
    MODEL.get_or_init(|| FuchsianModel::build(2).expect("genus-2 model builds"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Letter;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn genus_guard() {
        assert!(FuchsianModel::build(1).is_err());
        assert!(Presentation::new(0).is_err());
    }

    #[test]
    fn genus2_generator_traces() {
        let m = shared_genus2();
        let expect = 2.0 / (PI / 8.0).tan();
        for g in m.generators() {
            assert_relative_eq!(g.trace().abs(), expect, max_relative = 1e-12);
        }
        assert_relative_eq!(expect, 2.0 * (1.0 + 2.0f64.sqrt()), max_relative = 1e-15);
    }

    #[test]
    fn genus2_relator_and_systole() {
        let m = shared_genus2();
        let rel = m.evaluate(m.presentation().relator());
        assert!(rel.dist_to_pm_identity() < 1e-9);
        let expect = 2.0 * (1.0 + 2.0f64.sqrt()).acosh();
        assert!((m.systole() - expect).abs() < 1e-6, "systole {}", m.systole());
    }

    #[test]
    fn genus3_relator_holds() {
        let m = FuchsianModel::build(3).unwrap();
        let rel = m.evaluate(m.presentation().relator());
        assert!(rel.dist_to_pm_identity() < 1e-9);
        assert!(m.systole() > 0.0);
    }

    #[test]
    fn homomorphism_property() {
        let m = shared_genus2();
        let mut rng = crate::rng::stream_rng(41, 0);
        for _ in 0..100 {
            let w1 = random_word(&mut rng, 6);
            let w2 = random_word(&mut rng, 6);
            let lhs = m.evaluate(&w1.concat(&w2));
            let rhs = m.evaluate(&w1).mul(&m.evaluate(&w2));
            assert!(lhs.rel_dist_up_to_sign(&rhs) < 1e-9);
        }
    }

    #[test]
    fn dehn_reduction_preserves_matrix() {
        let m = shared_genus2();
        let p = m.presentation();
        let mut rng = crate::rng::stream_rng(43, 0);
        for _ in 0..50 {
            let w = random_word(&mut rng, 10);
            let padded = p.relator().concat(&w);
            let red = p.dehn_reduce(&padded);
            assert!(m.evaluate(&padded).rel_dist_up_to_sign(&m.evaluate(&red)) < 1e-9);
        }
    }

    #[test]
    fn domain_membership() {
        let m = shared_genus2();
        assert!(m.domain_contains(m.base_point()));
        // interior of the in-circle is inside, far points are not
        assert!(m.domain_contains(hyp::point_at(m.in_radius() * 0.95, 0.3)));
        assert!(!m.domain_contains(hyp::point_at(m.domain_radius() * 1.05, 0.3)));
        // generator images of the base point leave the domain
        for g in m.generators() {
            assert!(!m.domain_contains(g.apply(m.base_point())));
        }
    }

    #[test]
    fn displacement_dominates_translation_length() {
        let m = shared_genus2();
        let mut rng = crate::rng::stream_rng(47, 0);
        for _ in 0..100 {
            let w = random_word(&mut rng, 7);
            let g = m.evaluate(&w);
            if !g.is_hyperbolic() {
                continue;
            }
            let l = g.translation_length().unwrap();
            assert!(m.displacement(&g) >= l - 1e-9);
            assert!(l >= m.systole() - 1e-6);
        }
    }

    #[test]
    fn save_load_round_trip() {
        let m = shared_genus2();
        let mut buf = Vec::new();
        m.save(&mut buf).unwrap();
        let m2 = FuchsianModel::load(&mut buf.as_slice()).unwrap();
        assert_eq!(m2.genus(), 2);
        for (a, b) in m.generators().iter().zip(m2.generators()) {
            assert!(a.dist_up_to_sign(b) < 1e-12);
        }
        assert_eq!(m.systole(), m2.systole());
        assert_eq!(m.svarc_milnor().kappa1, m2.svarc_milnor().kappa1);
    }

    pub(crate) fn random_word(rng: &mut impl Rng, len: usize) -> Word {
        Word::new((0..len).map(|_| Letter::from_index(rng.gen_range(0..8))))
    }
}
