//! Named instance families shared by `gen` and `bench`.

use std::fmt;
use std::str::FromStr;

use detabp_core::convert::abp_to_pencil;
use detabp_core::instgen::{elem_sym_abp, power_sum_abp, random_hom_abp, random_regular_pencil, synth_r_regular_pencil};
use detabp_core::verify::pit_equal;
use detabp_core::{Abp, FieldSpec, Pencil, Poly};
use thiserror::Error;

use crate::json::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Family {
    /// `x_1^d + .. + x_n^d`
    #[value(name = "powersum")]
    PowerSum,
    /// The elementary symmetric polynomial `e_d(x_1, .., x_n)`.
    #[value(name = "elemsym")]
    ElemSym,
    /// Random homogeneous ABP of degree `d` and width `w`.
    #[value(name = "random-abp")]
    RandomAbp,
    /// Block-diagonal pencil of `blocks` regular blocks with total degree `d`.
    #[value(name = "r-regular")]
    RRegular,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PowerSum => "powersum",
            Family::ElemSym => "elemsym",
            Family::RandomAbp => "random-abp",
            Family::RRegular => "r-regular",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub blocks: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} needs {what}")]
    Parameters { family: Family, what: &'static str },
    #[error("range must look like key=lo..hi with key one of n, d, w, blocks: {0:?}")]
    Range(String),
}

fn need(ok: bool, family: Family, what: &'static str) -> Result<(), FamilyError> {
    if ok {
        Ok(())
    } else {
        Err(FamilyError::Parameters { family, what })
    }
}

/// The ABP of an ABP-valued family.
pub fn generate_abp(family: Family, p: &Params, field: FieldSpec) -> Result<Abp, FamilyError> {
    match family {
        Family::PowerSum => {
            need(p.n >= 1 && p.d >= 2, family, "n >= 1 and d >= 2")?;
            Ok(power_sum_abp(p.n, p.d, field))
        }
        Family::ElemSym => {
            need(p.d >= 2 && p.d <= p.n, family, "2 <= d <= n")?;
            Ok(elem_sym_abp(p.n, p.d, field))
        }
        Family::RandomAbp => {
            need(p.n >= 1 && p.d >= 2 && p.w >= 1, family, "n >= 1, d >= 2 and w >= 1")?;
            Ok(random_hom_abp(p.n, p.d, p.w, p.seed, field))
        }
        Family::RRegular => Err(FamilyError::Parameters { family, what: "to be generated as a pencil" }),
    }
}

/// The pencil of a family: the reverse reduction for ABP-valued families,
/// and for `r-regular` a direct sum of `blocks` scrambled regular pencils
/// whose degrees add up to `d` (each block gets `d / blocks`, the first
/// `d % blocks` one more). Blocks whose random program computes zero are
/// redrawn, so the determinant never vanishes.
pub fn generate_pencil(family: Family, p: &Params, field: FieldSpec) -> Result<Pencil, FamilyError> {
    if family != Family::RRegular {
        let abp = generate_abp(family, p, field)?;
        return Ok(abp_to_pencil(&abp).expect("family programs are homogeneous"));
    }
    need(
        p.n >= 1 && p.w >= 1 && p.blocks >= 1 && p.d >= 2 * p.blocks,
        family,
        "n >= 1, w >= 1, blocks >= 1 and d >= 2 * blocks",
    )?;
    let base: Vec<Pencil> = (0..p.blocks)
        .map(|i| {
            let deg = p.d / p.blocks + usize::from(i < p.d % p.blocks);
            let mut seed = p.seed.wrapping_add(i as u64 * 7919);
            while vanishes(&random_hom_abp(p.n, deg, p.w, seed, field)) {
                seed = seed.wrapping_add(1);
            }
            random_regular_pencil(p.n, deg, p.w, seed, field)
        })
        .collect();
    Ok(synth_r_regular_pencil(&base).expect("scrambled reverse reductions are regular"))
}

/// Whether `a` computes zero, by evaluation at a few random points (a
/// nonzero value is conclusive).
fn vanishes(a: &Abp) -> bool {
    let zero = Poly::zero(a.nvars(), a.field());
    pit_equal(a, &zero, 8, 0).is_ok_and(|v| v.is_success())
}

/// The instance as `gen` writes it: ABP families as ABPs unless a pencil is
/// requested.
pub fn generate(family: Family, p: &Params, field: FieldSpec, as_pencil: bool) -> Result<Instance, FamilyError> {
    if as_pencil || family == Family::RRegular {
        generate_pencil(family, p, field).map(Instance::Pencil)
    } else {
        generate_abp(family, p, field).map(Instance::Abp)
    }
}

/// Which parameter a bench range sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RangeKey {
    N,
    D,
    W,
    Blocks,
}

/// An inclusive sweep `key=lo..hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Range {
    pub key: RangeKey,
    pub lo: usize,
    pub hi: usize,
}

impl Range {
    pub fn apply(&self, base: &Params, value: usize) -> Params {
        let mut p = *base;
        match self.key {
            RangeKey::N => p.n = value,
            RangeKey::D => p.d = value,
            RangeKey::W => p.w = value,
            RangeKey::Blocks => p.blocks = value,
        }
        p
    }

    pub fn values(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Range {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::Range(s.to_string());
        let (key, span) = s.split_once('=').ok_or_else(bad)?;
        let key = match key.trim() {
            "n" => RangeKey::N,
            "d" => RangeKey::D,
            "w" => RangeKey::W,
            "blocks" | "r" => RangeKey::Blocks,
            _ => return Err(bad()),
        };
        let (lo, hi) = match span.split_once("..") {
            Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
            None => {
                let v = span.trim().parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(Range { key, lo, hi })
    }
}
