//! Sponges: finite sets of non-negative integers without gaps of length two
//! or more, together with the distance, environment and escape operations
//! used by the general factor and jump system algorithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpongeKind {
    /// Every second integer between the extremes (includes singletons).
    Parity,
    /// All integers between the extremes.
    Interval,
    General,
}

/// A one-dimensional sponge, stored as its sorted elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sponge {
    values: Vec<i64>,
}

impl Sponge {
    pub fn new(mut values: Vec<i64>) -> Result<Self> {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::EmptySponge);
        }
        if values[0] < 0 {
            return Err(Error::NegativeValue(values[0]));
        }
        for w in values.windows(2) {
            if w[1] - w[0] > 2 {
                return Err(Error::NotASponge { after: w[0], gap: w[1] - w[0] - 1 });
            }
        }
        Ok(Sponge { values })
    }

    pub fn interval(l: i64, u: i64) -> Result<Self> {
        if l > u {
            return Err(Error::InvertedBounds { vertex: 0, l, u });
        }
        Sponge::new((l..=u).collect())
    }

    pub fn parity(l: i64, u: i64) -> Result<Self> {
        if l > u {
            return Err(Error::InvertedBounds { vertex: 0, l, u });
        }
        if (u - l) % 2 != 0 {
            return Err(Error::ParityMismatch { vertex: 0, l, u });
        }
        Sponge::new((l..=u).step_by(2).collect())
    }

    pub fn singleton(v: i64) -> Result<Self> {
        Sponge::new(vec![v])
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn min(&self) -> i64 {
        self.values[0]
    }

    pub fn max(&self) -> i64 {
        *self.values.last().unwrap()
    }

    pub fn contains(&self, z: i64) -> bool {
        self.values.binary_search(&z).is_ok()
    }

    pub fn is_parity(&self) -> bool {
        self.values.windows(2).all(|w| w[1] - w[0] == 2)
    }

    pub fn is_interval(&self) -> bool {
        self.values.windows(2).all(|w| w[1] - w[0] == 1)
    }

    pub fn kind(&self) -> SpongeKind {
        if self.is_parity() {
            SpongeKind::Parity
        } else if self.is_interval() {
            SpongeKind::Interval
        } else {
            SpongeKind::General
        }
    }

    /// μ(z, H): distance from `z` to the nearest element.
    pub fn dist(&self, z: i64) -> u64 {
        match self.values.binary_search(&z) {
            Ok(_) => 0,
            Err(i) => {
                let below = i.checked_sub(1).map(|j| z.abs_diff(self.values[j]));
                let above = self.values.get(i).map(|&h| h.abs_diff(z));
                below.into_iter().chain(above).min().unwrap()
            }
        }
    }

    /// Bounds `[l_z, u_z]` of the environment: the longest run of
    /// same-parity consecutive elements reaching as close to `z` as possible
    /// from each side.
    pub fn environment_bounds(&self, z: i64) -> (i64, i64) {
        let v = &self.values;
        // l_z: walk down from the largest element <= z while parity holds.
        let lo = match v.partition_point(|&h| h <= z) {
            0 => v[0],
            p => {
                let mut i = p - 1;
                while i > 0 && v[i] - v[i - 1] == 2 {
                    i -= 1;
                }
                v[i]
            }
        };
        let hi = match v.partition_point(|&h| h < z) {
            p if p == v.len() => v[v.len() - 1],
            p => {
                let mut i = p;
                while i + 1 < v.len() && v[i + 1] - v[i] == 2 {
                    i += 1;
                }
                v[i]
            }
        };
        (lo, hi)
    }

    /// H_z = H ∩ [l_z, u_z]; always a parity sponge.
    pub fn environment(&self, z: i64) -> Sponge {
        let (lo, hi) = self.environment_bounds(z);
        Sponge { values: self.values.iter().copied().filter(|&h| lo <= h && h <= hi).collect() }
    }

    /// The lower and upper escape values `l_z - 1`, `u_z + 1`, when present.
    pub fn escapes(&self, z: i64) -> (Option<i64>, Option<i64>) {
        let (lo, hi) = self.environment_bounds(z);
        let lower = Some(lo - 1).filter(|&h| self.contains(h));
        let upper = Some(hi + 1).filter(|&h| self.contains(h));
        (lower, upper)
    }
}

impl Serialize for Sponge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (l, u) = (self.min(), self.max());
        let spec = if self.is_parity() {
            SpongeSpec::Parity([l, u])
        } else if self.is_interval() {
            SpongeSpec::Interval([l, u])
        } else {
            SpongeSpec::Set(self.values.clone())
        };
        spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sponge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = SpongeSpec::deserialize(d)?;
        spec.build().map_err(serde::de::Error::custom)
    }
}

/// Wire form of a single sponge.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpongeSpec {
    Interval([i64; 2]),
    Parity([i64; 2]),
    Set(Vec<i64>),
}

impl SpongeSpec {
    pub fn build(&self) -> Result<Sponge> {
        match self {
            SpongeSpec::Interval([l, u]) => Sponge::interval(*l, *u),
            SpongeSpec::Parity([l, u]) => Sponge::parity(*l, *u),
            SpongeSpec::Set(v) => Sponge::new(v.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

/// One escape of an environment: coordinate `coord` is replaced by a
/// single value just outside its environment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escape {
    pub coord: usize,
    pub direction: Direction,
    pub value: i64,
    pub sponge: SpongeVector,
}

/// A product of one-dimensional sponges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpongeVector(pub Vec<Sponge>);

impl SpongeVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn check_dim(&self, z: &[i64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        Ok(())
    }

    pub fn mu(&self, z: &[i64]) -> Result<u64> {
        self.check_dim(z)?;
        Ok(self.0.iter().zip(z).map(|(h, &x)| h.dist(x)).sum())
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        z.len() == self.dim() && self.0.iter().zip(z).all(|(h, &x)| h.contains(x))
    }

    pub fn is_parity(&self) -> bool {
        self.0.iter().all(Sponge::is_parity)
    }

    pub fn environment(&self, z: &[i64]) -> Result<SpongeVector> {
        self.check_dim(z)?;
        Ok(SpongeVector(self.0.iter().zip(z).map(|(h, &x)| h.environment(x)).collect()))
    }

    /// All escapes of H_z in coordinate order, lower before upper.
    pub fn escapes(&self, z: &[i64]) -> Result<Vec<Escape>> {
        let env = self.environment(z)?;
        let mut out = Vec::new();
        for (i, h) in self.0.iter().enumerate() {
            let (lo, hi) = h.escapes(z[i]);
            for (direction, value) in [(Direction::Lower, lo), (Direction::Upper, hi)] {
                if let Some(value) = value {
                    let mut sponge = env.clone();
                    sponge.0[i] = Sponge::singleton(value).expect("escape values are non-negative");
                    out.push(Escape { coord: i, direction, value, sponge });
                }
            }
        }
        Ok(out)
    }
}

/// Classical degree bounds: interval `[l, u]` at each vertex, or every
/// second value in `[l, u]` at the vertices of `parity`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalSpec {
    pub l: Vec<i64>,
    pub u: Vec<i64>,
    pub parity: Vec<bool>,
}

impl ClassicalSpec {
    /// Validates bounds and normalizes every vertex with `l = u` into the
    /// parity set.
    pub fn new(l: Vec<i64>, u: Vec<i64>, mut parity: Vec<bool>) -> Result<Self> {
        if u.len() != l.len() {
            return Err(Error::DimensionMismatch { expected: l.len(), got: u.len() });
        }
        if parity.len() != l.len() {
            return Err(Error::DimensionMismatch { expected: l.len(), got: parity.len() });
        }
        for v in 0..l.len() {
            if l[v] < 0 {
                return Err(Error::NegativeValue(l[v]));
            }
            if l[v] > u[v] {
                return Err(Error::InvertedBounds { vertex: v, l: l[v], u: u[v] });
            }
            if l[v] == u[v] {
                parity[v] = true;
            }
            if parity[v] && (u[v] - l[v]) % 2 != 0 {
                return Err(Error::ParityMismatch { vertex: v, l: l[v], u: u[v] });
            }
        }
        Ok(ClassicalSpec { l, u, parity })
    }

    /// Every vertex must have degree exactly one.
    pub fn perfect_matching(n: usize) -> Self {
        ClassicalSpec::new(vec![1; n], vec![1; n], vec![true; n]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.l.len()
    }

    /// Parity spec from a vector of parity (or interval) sponges.
    pub fn from_sponges(h: &SpongeVector) -> Result<Self> {
        let mut l = Vec::new();
        let mut u = Vec::new();
        let mut parity = Vec::new();
        for (i, s) in h.0.iter().enumerate() {
            let kind = s.kind();
            if kind == SpongeKind::General {
                return Err(Error::NotClassical(i));
            }
            l.push(s.min());
            u.push(s.max());
            parity.push(kind == SpongeKind::Parity);
        }
        ClassicalSpec::new(l, u, parity)
    }

    pub fn sponge(&self, v: usize) -> Sponge {
        if self.parity[v] {
            Sponge::parity(self.l[v], self.u[v]).unwrap()
        } else {
            Sponge::interval(self.l[v], self.u[v]).unwrap()
        }
    }

    pub fn to_sponges(&self) -> SpongeVector {
        SpongeVector((0..self.n()).map(|v| self.sponge(v)).collect())
    }

    /// Distance of degree `d` from the admissible set at `v`.
    pub fn dist(&self, v: usize, d: i64) -> u64 {
        let (l, u) = (self.l[v], self.u[v]);
        if d < l {
            (l - d) as u64
        } else if d > u {
            (d - u) as u64
        } else if self.parity[v] && (d - l) % 2 != 0 {
            1
        } else {
            0
        }
    }

    pub fn deficiency(&self, d: &[i64]) -> Result<u64> {
        if d.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: d.len() });
        }
        Ok((0..self.n()).map(|v| self.dist(v, d[v])).sum())
    }
}

/// Sponge vector of a classical spec, checked against the degrees `dmax`.
pub fn classical_to_sponge(spec: &ClassicalSpec, dmax: &[i64]) -> Result<SpongeVector> {
    if dmax.len() != spec.n() {
        return Err(Error::DimensionMismatch { expected: spec.n(), got: dmax.len() });
    }
    for v in 0..spec.n() {
        if spec.u[v] > dmax[v] {
            return Err(Error::BoundExceedsDegree { vertex: v, u: spec.u[v], degree: dmax[v] });
        }
    }
    Ok(spec.to_sponges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[i64]) -> Sponge {
        Sponge::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_long_gaps() {
        assert!(matches!(Sponge::new(vec![0, 3]), Err(Error::NotASponge { after: 0, gap: 2 })));
        assert!(matches!(Sponge::new(vec![]), Err(Error::EmptySponge)));
        assert!(Sponge::new(vec![-1, 0]).is_err());
    }

    #[test]
    fn environment_of_example_set() {
        let h = s(&[3, 4, 6, 8, 10]);
        assert_eq!(h.environment(12).values(), &[4, 6, 8, 10]);
        assert_eq!(h.escapes(12), (Some(3), None));
        assert_eq!(h.dist(12), 2);
    }

    #[test]
    fn environment_inside_an_interval() {
        let h = s(&[0, 1, 2]);
        assert_eq!(h.environment(1).values(), &[1]);
        assert_eq!(h.escapes(1), (Some(0), Some(2)));
    }

    #[test]
    fn environment_below_and_in_gap() {
        let h = s(&[2, 4, 6, 8]);
        assert_eq!(h.environment(0).values(), &[2, 4, 6, 8]);
        let h = s(&[0, 2, 3, 5]);
        assert_eq!(h.environment(4).values(), &[3, 5]);
        assert_eq!(h.escapes(4), (Some(2), None));
    }

    #[test]
    fn kinds() {
        assert_eq!(s(&[5]).kind(), SpongeKind::Parity);
        assert_eq!(s(&[1, 2, 3]).kind(), SpongeKind::Interval);
        assert_eq!(s(&[1, 3, 5]).kind(), SpongeKind::Parity);
        assert_eq!(s(&[0, 1, 3]).kind(), SpongeKind::General);
    }

    #[test]
    fn spec_normalization() {
        let spec = ClassicalSpec::new(vec![2, 0], vec![2, 3], vec![false, false]).unwrap();
        assert_eq!(spec.parity, vec![true, false]);
        assert!(matches!(
            ClassicalSpec::new(vec![0], vec![3], vec![true]),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(classical_to_sponge(&spec, &[1, 3]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let hv = SpongeVector(vec![s(&[0, 1, 2]), s(&[1, 3]), s(&[0, 1, 3])]);
        let text = serde_json::to_string(&hv).unwrap();
        assert_eq!(text, r#"[{"interval":[0,2]},{"parity":[1,3]},{"set":[0,1,3]}]"#);
        let back: SpongeVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, hv);
    }

    fn sponge_strategy() -> impl Strategy<Value = Sponge> {
        (0i64..5, proptest::collection::vec(1i64..=2, 0..5)).prop_map(|(start, steps)| {
            let mut v = vec![start];
            for st in steps {
                v.push(v.last().unwrap() + st);
            }
            Sponge::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn environment_is_parity_and_preserves_distance(h in sponge_strategy(), z in 0i64..16) {
            let env = h.environment(z);
            prop_assert!(env.is_parity());
            prop_assert_eq!(env.dist(z), h.dist(z));
            prop_assert!(env.values().iter().all(|&x| h.contains(x)));
        }

        #[test]
        fn environment_matches_definition(h in sponge_strategy(), z in 0i64..16) {
            let same_parity = |a: i64, b: i64| {
                let vals: Vec<i64> = h.values().iter().copied().filter(|&x| a <= x && x <= b).collect();
                vals.windows(2).all(|w| (w[1] - w[0]) % 2 == 0)
            };
            let lz = h.values().iter().copied().filter(|&x| same_parity(x, z)).min().unwrap();
            let uz = h.values().iter().copied().filter(|&x| same_parity(z, x)).max().unwrap();
            prop_assert_eq!(h.environment_bounds(z), (lz, uz));
        }

        #[test]
        fn escapes_keep_distance_bounded(h in sponge_strategy(), z in 0i64..16) {
            let (lo, hi) = h.escapes(z);
            for e in [lo, hi].into_iter().flatten() {
                prop_assert!(h.contains(e));
                prop_assert!(e.abs_diff(z) >= h.dist(z));
            }
        }
    }
}
