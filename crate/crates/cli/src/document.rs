//! The JSON region document. Every number is an exact rational string.

use std::cmp::Ordering;

use anyhow::Result;
use cone_quantile::polyhedra::{Halfspace, Polyhedron, VRep};
use cone_quantile::quantile::{QuantileRegion, RegionSpec};
use cone_quantile::scalar::{format_rational, lex_cmp, to_f64};
use cone_quantile::{parse_rational, DataCloud, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEcho {
    pub generators: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interior: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub n: usize,
    pub d: usize,
    pub p: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_adjusted: Option<String>,
    pub ceil_np: usize,
    /// `None` for Tukey regions (the cone `{0}`).
    pub cone: Option<ConeEcho>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceDoc {
    pub w: Vec<String>,
    pub t: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub benson_rounds: usize,
    pub cuts_added: usize,
    pub scalarization_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDocument {
    pub input: InputEcho,
    pub provenance: String,
    /// Halfspaces `w^T z >= t` whose intersection is the region.
    pub halfspaces: Vec<HalfspaceDoc>,
    /// The dual solution entries `(w, t)` (lifted for Tukey regions).
    pub dual_entries: Vec<HalfspaceDoc>,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lines: Vec<Vec<String>>,
    pub empty: bool,
    pub bounded: bool,
    pub stats: SolverStats,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s).map_err(anyhow::Error::from)).collect()
}

impl RegionDocument {
    pub fn new(data: &DataCloud, spec: &RegionSpec, region: &QuantileRegion, original_p: &Rational) -> Self {
        let level = &region.level;
        let p_adjusted = (level.p() != original_p).then(|| format_rational(level.p()));
        let cone = match spec {
            RegionSpec::Tukey => None,
            RegionSpec::Cone { cone, interior } => Some(ConeEcho {
                generators: cone.generators().iter().map(|g| strings(g)).collect(),
                interior: interior.as_ref().map(|c| strings(c)),
            }),
        };
        let vrep = region.region.vrep().cloned().unwrap_or_default();
        let empty = region.region.is_empty();
        Self {
            input: InputEcho {
                n: data.len(),
                d: data.dim(),
                p: format_rational(original_p),
                p_adjusted,
                ceil_np: level.ceil_np(),
                cone,
            },
            provenance: region.provenance.as_str().to_string(),
            halfspaces: region.halfspaces.iter().map(|h| HalfspaceDoc { w: strings(&h.normal), t: format_rational(&h.offset) }).collect(),
            dual_entries: region.entries.iter().map(|e| HalfspaceDoc { w: strings(&e.w), t: format_rational(&e.t) }).collect(),
            vertices: vrep.points.iter().map(|v| strings(v)).collect(),
            rays: vrep.rays.iter().map(|v| strings(v)).collect(),
            lines: vrep.lines.iter().map(|v| strings(v)).collect(),
            empty,
            bounded: region.region.is_bounded(),
            stats: SolverStats {
                benson_rounds: region.stats.rounds,
                cuts_added: region.stats.cuts,
                scalarization_calls: region.stats.scalarizations,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The intersection of the listed halfspaces.
    pub fn halfspace_polyhedron(&self) -> Result<Polyhedron> {
        let d = self.input.d;
        let mut ineqs = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            let w = parse_all(&h.w)?;
            let t = parse_rational(&h.t)?;
            match Halfspace::new(w, t.clone()) {
                Some(h) => ineqs.push(h),
                None if t.is_positive() => return Ok(Polyhedron::empty(d)),
                None => {}
            }
        }
        Ok(Polyhedron::from_hrep(d, ineqs, Vec::new()))
    }

    /// The polyhedron spanned by the listed vertices, rays and lines.
    pub fn generator_polyhedron(&self) -> Result<Polyhedron> {
        let conv = |rows: &[Vec<String>]| rows.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>();
        Ok(Polyhedron::from_vrep(
            self.input.d,
            VRep { points: conv(&self.vertices)?, rays: conv(&self.rays)?, lines: conv(&self.lines)? },
        ))
    }
}

/// Vertices of a nonempty bounded planar region in counterclockwise
/// order, as decimal `x,y` lines with the first vertex repeated.
pub fn plot_cycle(region: &Polyhedron) -> Option<String> {
    if region.dim() != 2 || region.is_empty() || !region.is_bounded() {
        return None;
    }
    let points = region.vrep()?.points.clone();
    let n = Rational::from_integer(points.len().into());
    let centroid: Vec<Rational> = (0..2).map(|k| points.iter().map(|p| &p[k]).sum::<Rational>() / &n).collect();
    let mut rel: Vec<(Vec<Rational>, Vec<Rational>)> = points
        .into_iter()
        .map(|p| (vec![&p[0] - &centroid[0], &p[1] - &centroid[1]], p))
        .collect();
    rel.sort_by(|a, b| angle_cmp(&a.0, &b.0).then_with(|| lex_cmp(&a.1, &b.1)));
    let mut out = String::from("x,y\n");
    let first = rel.first().map(|(_, p)| p.clone());
    for p in rel.into_iter().map(|(_, p)| p).chain(first) {
        out.push_str(&format!("{},{}\n", to_f64(&p[0]), to_f64(&p[1])));
    }
    Some(out)
}

fn angle_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    let upper = |v: &[Rational]| v[1].is_positive() || (v[1].is_zero() && !v[0].is_negative());
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cone_quantile::scalar::frac;
    use cone_quantile::{tukey_region, QuantileLevel};

    #[test]
    fn square_plot_cycle_is_closed() {
        let x = crate::input::parse_cloud("0,0\n1,0\n0,1\n1,1\n").unwrap();
        let r = tukey_region(&x, &QuantileLevel::new(frac(1, 8), 4).unwrap()).unwrap();
        let plot = plot_cycle(&r.region).unwrap();
        let lines: Vec<&str> = plot.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[1], lines[5]);
    }
}
