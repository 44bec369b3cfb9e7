//! Number basis of one conserved-charge sector.

use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 5_000_000;

/// Occupations `(n_LV, n_RV, n_LH, n_RH, n_M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation {
    pub n_lv: u32,
    pub n_rv: u32,
    pub n_lh: u32,
    pub n_rh: u32,
    pub n_m: u32,
}

impl Occupation {
    pub fn delta_nv(&self) -> i64 {
        self.n_rv as i64 - self.n_lv as i64
    }

    pub fn delta_nh(&self) -> i64 {
        self.n_rh as i64 - self.n_lh as i64
    }
}

/// Conserved photon numbers. `n_lh = Some(k)` additionally fixes the number
/// of left H photons, which is conserved when H photons cannot tunnel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    pub n_v: u32,
    pub n_h: u32,
    pub n_lh: Option<u32>,
}

impl Sector {
    pub fn coarse(n_v: u32, n_h: u32) -> Self {
        Self { n_v, n_h, n_lh: None }
    }

    pub fn fine(n_v: u32, n_h: u32, n_lh: u32) -> Self {
        Self {
            n_v,
            n_h,
            n_lh: Some(n_lh),
        }
    }
}

/// Enumerated sector basis; the membrane index runs fastest, then left H
/// count, then left V count.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    sector: Sector,
    d_m: usize,
    lh_min: u32,
    lh_count: u32,
    occupations: Vec<Occupation>,
}

impl FockBasis {
    pub fn new(sector: Sector, d_m: usize, cap: usize) -> Result<Self> {
        if d_m < 2 {
            return Err(Error::param("d_m", "membrane truncation must be at least 2"));
        }
        let (lh_min, lh_count) = match sector.n_lh {
            Some(k) if k > sector.n_h => {
                return Err(Error::param("n_lh", "left H count exceeds the sector's H photons"))
            }
            Some(k) => (k, 1),
            None => (0, sector.n_h + 1),
        };
        let dim = (sector.n_v as usize + 1) * lh_count as usize * d_m;
        if dim > cap {
            return Err(Error::DimensionCap { dimension: dim, cap });
        }
        let mut occupations = Vec::with_capacity(dim);
        for n_lv in 0..=sector.n_v {
            for n_lh in lh_min..lh_min + lh_count {
                for n_m in 0..d_m as u32 {
                    occupations.push(Occupation {
                        n_lv,
                        n_rv: sector.n_v - n_lv,
                        n_lh,
                        n_rh: sector.n_h - n_lh,
                        n_m,
                    });
                }
            }
        }
        Ok(Self {
            sector,
            d_m,
            lh_min,
            lh_count,
            occupations,
        })
    }

    pub fn dimension(&self) -> usize {
        self.occupations.len()
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn d_m(&self) -> usize {
        self.d_m
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn occupation(&self, index: usize) -> Occupation {
        self.occupations[index]
    }

    /// Position of `o` in the basis, `None` when it lies outside the sector.
    pub fn index(&self, o: &Occupation) -> Option<usize> {
        let s = &self.sector;
        if o.n_lv + o.n_rv != s.n_v
            || o.n_lh + o.n_rh != s.n_h
            || o.n_lh < self.lh_min
            || o.n_lh >= self.lh_min + self.lh_count
            || o.n_m as usize >= self.d_m
        {
            return None;
        }
        let photon = o.n_lv as usize * self.lh_count as usize + (o.n_lh - self.lh_min) as usize;
        Some(photon * self.d_m + o.n_m as usize)
    }
}

/// Basis for `sector`; with `lambda_h_zero` the sector must fix `n_lh`
/// or it is left coarse, and a fine sector is rejected when H photons
/// tunnel.
pub fn build_basis(sector: Sector, d_m: usize, lambda_h_zero: bool) -> Result<FockBasis> {
    if !lambda_h_zero && sector.n_lh.is_some() {
        return Err(Error::param(
            "sector",
            "left H count is not conserved when H photons tunnel",
        ));
    }
    FockBasis::new(sector, d_m, DEFAULT_DIMENSION_CAP)
}
