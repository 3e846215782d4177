//! Boundary operators and greedy `(E, E')`-tilings of finite regions.

use std::collections::BTreeSet;

use crate::approx::model::GroupModel;
use crate::error::{Error, Result};
use crate::scalar::Ratio;

fn mul<G: GroupModel>(g: &G, a: &G::Elem, b: &G::Elem) -> Result<G::Elem> {
    g.multiply(a, b).map_err(|u| Error::Precondition(u.0))
}

fn check_model<G: GroupModel>(g: &G) -> Result<()> {
    if g.canonical() {
        Ok(())
    } else {
        Err(Error::Precondition("set computations need a model with canonical elements".into()))
    }
}

/// `AB = {ab}`.
pub fn product_set<G: GroupModel>(g: &G, a: &BTreeSet<G::Elem>, b: &BTreeSet<G::Elem>) -> Result<BTreeSet<G::Elem>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(mul(g, x, y)?);
        }
    }
    Ok(out)
}

/// `E E^-1`.
pub fn difference_set<G: GroupModel>(g: &G, e: &BTreeSet<G::Elem>) -> Result<BTreeSet<G::Elem>> {
    let inv: BTreeSet<G::Elem> = e.iter().map(|x| g.inverse(x)).collect();
    product_set(g, e, &inv)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary<T: Ord> {
    /// `F^{-E} = {x : xE ⊆ F}`.
    pub interior: BTreeSet<T>,
    /// `F^{+E} = {x : xE ∩ F ≠ ∅}`.
    pub closure: BTreeSet<T>,
    /// `∂_E F = F^{+E} \ F^{-E}`.
    pub boundary: BTreeSet<T>,
}

pub fn boundary_ops<G: GroupModel>(g: &G, f: &BTreeSet<G::Elem>, e: &BTreeSet<G::Elem>) -> Result<Boundary<G::Elem>> {
    check_model(g)?;
    if e.is_empty() {
        return Err(Error::EmptyDomain);
    }
    // x ∈ F γ^-1 iff xγ ∈ F
    let mut translates = Vec::with_capacity(e.len());
    for gamma in e {
        let gi = g.inverse(gamma);
        let t = f.iter().map(|x| mul(g, x, &gi)).collect::<Result<BTreeSet<_>>>()?;
        translates.push(t);
    }
    let closure: BTreeSet<G::Elem> = translates.iter().flatten().cloned().collect();
    let interior: BTreeSet<G::Elem> =
        translates[0].iter().filter(|x| translates[1..].iter().all(|t| t.contains(*x))).cloned().collect();
    let boundary = closure.difference(&interior).cloned().collect();
    Ok(Boundary { interior, closure, boundary })
}

#[derive(Debug, Clone)]
pub struct TilingReport<T: Ord> {
    /// Tile centers `γ`, in the order placed.
    pub tiles: Vec<T>,
    pub e_prime: BTreeSet<T>,
    /// The tiles `γE` are pairwise disjoint.
    pub disjoint: bool,
    /// The translates `γE'` cover the whole region.
    pub covers_region: bool,
    /// `|T ∩ F^{-E}|`.
    pub interior_tiles: usize,
    /// `|T ∩ F^{-E}| / |F|`.
    pub density: Ratio,
    /// `1/|E'| - |∂_{E'} F| / |F|`.
    pub bound: Ratio,
    pub holds: bool,
}

/// Greedy tiling of `region`: candidates are visited in increasing order and
/// kept when `γE` misses every tile placed so far. `e_prime` defaults to
/// `E E^-1`. The density inequality is evaluated for `f`, which must lie in
/// the region.
pub fn greedy_tiling<G: GroupModel>(
    g: &G,
    e: &BTreeSet<G::Elem>,
    e_prime: Option<&BTreeSet<G::Elem>>,
    region: &BTreeSet<G::Elem>,
    f: &BTreeSet<G::Elem>,
) -> Result<TilingReport<G::Elem>> {
    check_model(g)?;
    if f.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !f.is_subset(region) {
        return Err(Error::Precondition("the region must contain F".into()));
    }
    if !e.contains(&g.identity()) {
        return Err(Error::Precondition("the tile shape E must contain the identity".into()));
    }
    let ee = difference_set(g, e)?;
    let e_prime = match e_prime {
        Some(ep) if !ee.is_subset(ep) => {
            return Err(Error::Precondition("E' must contain E E^-1".into()));
        }
        Some(ep) => ep.clone(),
        None => ee,
    };
    let mut tiles = Vec::new();
    let mut used: BTreeSet<G::Elem> = BTreeSet::new();
    let mut disjoint = true;
    for x in region {
        let tile = e.iter().map(|y| mul(g, x, y)).collect::<Result<Vec<_>>>()?;
        if tile.iter().any(|t| used.contains(t)) {
            continue;
        }
        for t in tile {
            disjoint &= used.insert(t);
        }
        tiles.push(x.clone());
    }
    let mut covered = BTreeSet::new();
    for x in &tiles {
        for y in &e_prime {
            covered.insert(mul(g, x, y)?);
        }
    }
    let covers_region = region.is_subset(&covered);
    let inner = boundary_ops(g, f, e)?.interior;
    let interior_tiles = tiles.iter().filter(|t| inner.contains(*t)).count();
    let fsize = f.len() as i64;
    let density = Ratio::new(interior_tiles as i64, fsize);
    let dprime = boundary_ops(g, f, &e_prime)?.boundary.len() as i64;
    let bound = Ratio::new(1, e_prime.len() as i64) - Ratio::new(dprime, fsize);
    Ok(TilingReport {
        tiles,
        e_prime,
        disjoint,
        covers_region,
        interior_tiles,
        density,
        bound,
        holds: density >= bound,
    })
}

/// Integer interval `[a, b)` as a subset of `Z`.
pub fn interval(a: i64, b: i64) -> BTreeSet<Vec<i64>> {
    (a..b).map(|x| vec![x]).collect()
}

/// The box `[0, s_1) x ... x [0, s_d)`.
pub fn lattice_box(sides: &[i64]) -> BTreeSet<Vec<i64>> {
    crate::approx::model::Lattice::boxed(sides).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::model::{Lattice, TableModel};
    use crate::metric::group::FiniteGroup;
    use crate::scalar::ratio;
    use std::sync::Arc;

    fn set(v: &[i64]) -> BTreeSet<Vec<i64>> {
        v.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn boundary_examples() {
        let z = Lattice(1);
        let f = interval(0, 10);
        let b = boundary_ops(&z, &f, &set(&[0])).unwrap();
        assert_eq!((&b.interior, &b.closure), (&f, &f));
        assert!(b.boundary.is_empty());
        let b = boundary_ops(&z, &f, &set(&[0, 1])).unwrap();
        assert_eq!(b.interior, interval(0, 9));
        assert_eq!(b.closure, interval(-1, 10));
        assert_eq!(b.boundary, set(&[-1, 9]));
        let z2 = Lattice(2);
        let e: BTreeSet<Vec<i64>> = [vec![0, 0], vec![1, 0]].into_iter().collect();
        assert_eq!(boundary_ops(&z2, &lattice_box(&[5, 5]), &e).unwrap().boundary.len(), 10);
        assert_eq!(boundary_ops(&z, &f, &BTreeSet::new()), Err(Error::EmptyDomain));
    }

    #[test]
    fn boundary_brute_force_on_s3() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let g = TableModel(s3.clone());
        for fmask in 1u32..64 {
            for emask in [1u32, 3, 6, 9, 40, 63] {
                let pick = |m: u32| (0..6).filter(|i| m >> i & 1 == 1).collect::<BTreeSet<usize>>();
                let (f, e) = (pick(fmask), pick(emask));
                let b = boundary_ops(&g, &f, &e).unwrap();
                for x in 0..6 {
                    let xe: Vec<usize> = e.iter().map(|&y| s3.mul(x, y)).collect();
                    assert_eq!(b.interior.contains(&x), xe.iter().all(|y| f.contains(y)));
                    assert_eq!(b.closure.contains(&x), xe.iter().any(|y| f.contains(y)));
                }
            }
        }
    }

    #[test]
    fn tiling_examples() {
        let z = Lattice(1);
        let r = greedy_tiling(&z, &set(&[0]), Some(&set(&[0])), &interval(0, 10), &interval(0, 10)).unwrap();
        assert_eq!(r.tiles.len(), 10);
        assert_eq!((r.density, r.bound), (ratio(1, 1), ratio(1, 1)));
        assert!(r.holds && r.disjoint && r.covers_region);

        let f = interval(0, 30);
        let r = greedy_tiling(&z, &interval(0, 3), None, &f, &f).unwrap();
        let starts: Vec<i64> = r.tiles.iter().map(|t| t[0]).collect();
        assert_eq!(starts, (0..30).step_by(3).collect::<Vec<_>>());
        assert_eq!(r.e_prime, interval(-2, 3));
        // ∂_{E'} F = [-2, 2) ∪ [28, 32)
        assert_eq!(r.bound, ratio(1, 5) - ratio(8, 30));
        assert_eq!(r.density, ratio(1, 3));
        assert!(r.holds);

        let z2 = Lattice(2);
        let f = lattice_box(&[10, 10]);
        let r = greedy_tiling(&z2, &lattice_box(&[2, 2]), None, &f, &f).unwrap();
        assert_eq!(r.tiles.len(), 25);
        assert_eq!(r.bound, ratio(1, 9) - ratio(80, 100));
        assert!(r.holds && r.disjoint && r.covers_region);
    }

    #[test]
    fn tiling_preconditions() {
        let z = Lattice(1);
        let f = interval(0, 5);
        assert!(matches!(greedy_tiling(&z, &set(&[1, 2]), None, &f, &f), Err(Error::Precondition(_))));
        assert!(matches!(greedy_tiling(&z, &set(&[0, 1]), Some(&set(&[0, 1])), &f, &f), Err(Error::Precondition(_))));
        assert!(matches!(greedy_tiling(&z, &set(&[0]), None, &interval(1, 5), &f), Err(Error::Precondition(_))));
    }
}
