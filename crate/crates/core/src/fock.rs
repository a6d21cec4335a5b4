//! Occupation-number-basis representation of fermionic operators and
//! construction of impurity-model Hamiltonians.
//!
//! Bitstrings are `u64` with bit `m` set when spin orbital `m` is occupied.
//! Orbitals are spin-major: indices `0..L` are the spin-up copies of the `L`
//! spatial orbitals, `L..2L` the spin-down copies. Within each spin half the
//! correlated orbitals come first, then the bath orbitals. Signs follow the
//! Jordan-Wigner convention: applying `a_m^dagger` picks up the parity of the
//! occupied orbitals below `m`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{CoreError, Result};

/// `a_m^dagger` on a basis state. `None` when orbital `m` is already occupied.
pub fn apply_creation(state: u64, m: usize) -> Option<(u64, i8)> {
    assert!(m < 64, "orbital index {m} out of range");
    if state & (1 << m) != 0 {
        return None;
    }
    let below = (state & ((1u64 << m) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    Some((state | (1 << m), sign))
}

/// `a_m` on a basis state. `None` when orbital `m` is empty.
pub fn apply_annihilation(state: u64, m: usize) -> Option<(u64, i8)> {
    assert!(m < 64, "orbital index {m} out of range");
    if state & (1 << m) == 0 {
        return None;
    }
    let below = (state & ((1u64 << m) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    Some((state & !(1 << m), sign))
}

/// Basis of all `2^n_sorb` occupation states grouped by total particle number.
#[derive(Debug, Clone)]
pub struct FockBasis {
    pub n_sorb: usize,
    pub sectors: Vec<NumberSector>,
}

#[derive(Debug, Clone)]
pub struct NumberSector {
    pub n_elec: usize,
    /// Ascending bitstrings.
    pub states: Vec<u64>,
}

impl FockBasis {
    pub fn new(n_sorb: usize) -> Self {
        assert!(n_sorb <= 24, "dense Fock basis limited to 24 spin orbitals");
        let mut sectors: Vec<NumberSector> = (0..=n_sorb)
            .map(|n| NumberSector { n_elec: n, states: Vec::new() })
            .collect();
        for state in 0..(1u64 << n_sorb) {
            sectors[state.count_ones() as usize].states.push(state);
        }
        FockBasis { n_sorb, sectors }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sorb
    }
}

/// Basis blocked by `(n_up, n_dn)`; the Hamiltonians built here conserve both.
#[derive(Debug)]
pub struct SpinBasis {
    /// Spatial orbitals per spin (`n_sorb = 2 * n_spatial`).
    pub n_spatial: usize,
    pub blocks: Vec<SpinBlock>,
    /// bitstring -> (block index, index within block); u32::MAX when unused.
    lookup: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
pub struct SpinBlock {
    pub n_up: usize,
    pub n_dn: usize,
    /// Ascending bitstrings.
    pub states: Vec<u64>,
}

impl SpinBlock {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_elec(&self) -> usize {
        self.n_up + self.n_dn
    }
}

impl SpinBasis {
    pub fn new(n_spatial: usize) -> Self {
        let n_sorb = 2 * n_spatial;
        assert!(n_sorb <= 24, "dense Fock basis limited to 24 spin orbitals");
        let up_mask = (1u64 << n_spatial) - 1;
        let mut blocks = Vec::new();
        let mut block_of = vec![(u32::MAX, u32::MAX); 1 << n_sorb];
        for n_up in 0..=n_spatial {
            for n_dn in 0..=n_spatial {
                blocks.push(SpinBlock { n_up, n_dn, states: Vec::new() });
            }
        }
        for state in 0..(1u64 << n_sorb) {
            let n_up = (state & up_mask).count_ones() as usize;
            let n_dn = (state >> n_spatial).count_ones() as usize;
            let b = n_up * (n_spatial + 1) + n_dn;
            let idx = blocks[b].states.len();
            blocks[b].states.push(state);
            block_of[state as usize] = (b as u32, idx as u32);
        }
        SpinBasis { n_spatial, blocks, lookup: block_of }
    }

    pub fn n_sorb(&self) -> usize {
        2 * self.n_spatial
    }

    /// Locate a bitstring as (block index, index within block).
    pub fn locate(&self, state: u64) -> (usize, usize) {
        let (b, i) = self.lookup[state as usize];
        (b as usize, i as usize)
    }

    pub fn block_index(&self, n_up: usize, n_dn: usize) -> Option<usize> {
        if n_up > self.n_spatial || n_dn > self.n_spatial {
            return None;
        }
        Some(n_up * (self.n_spatial + 1) + n_dn)
    }

    /// Block reached from `from` by `a_m^dagger` (`None` when it annihilates
    /// the whole block, i.e. the spin species is full).
    pub fn creation_target(&self, from: usize, m: usize) -> Option<usize> {
        let blk = &self.blocks[from];
        if m < self.n_spatial {
            self.block_index(blk.n_up + 1, blk.n_dn)
        } else {
            self.block_index(blk.n_up, blk.n_dn + 1)
        }
    }

    pub fn annihilation_target(&self, from: usize, m: usize) -> Option<usize> {
        let blk = &self.blocks[from];
        if m < self.n_spatial {
            blk.n_up.checked_sub(1).and_then(|u| self.block_index(u, blk.n_dn))
        } else {
            blk.n_dn.checked_sub(1).and_then(|d| self.block_index(blk.n_up, d))
        }
    }

    /// Apply `a_m^dagger` to a coefficient vector living on block `from`.
    /// Returns the target block index and the image vector.
    pub fn apply_creation_vec(&self, from: usize, m: usize, coeffs: &[f64]) -> Option<(usize, Vec<f64>)> {
        let target = self.creation_target(from, m)?;
        let mut out = vec![0.0; self.blocks[target].dim()];
        for (i, &s) in self.blocks[from].states.iter().enumerate() {
            if coeffs[i] == 0.0 {
                continue;
            }
            if let Some((s2, sign)) = apply_creation(s, m) {
                let (_, j) = self.locate(s2);
                out[j] += sign as f64 * coeffs[i];
            }
        }
        Some((target, out))
    }

    pub fn apply_annihilation_vec(&self, from: usize, m: usize, coeffs: &[f64]) -> Option<(usize, Vec<f64>)> {
        let target = self.annihilation_target(from, m)?;
        let mut out = vec![0.0; self.blocks[target].dim()];
        for (i, &s) in self.blocks[from].states.iter().enumerate() {
            if coeffs[i] == 0.0 {
                continue;
            }
            if let Some((s2, sign)) = apply_annihilation(s, m) {
                let (_, j) = self.locate(s2);
                out[j] += sign as f64 * coeffs[i];
            }
        }
        Some((target, out))
    }
}

/// Kanamori interaction parameters (eV) acting on the correlated orbitals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KanamoriParams {
    /// Intra-orbital Coulomb repulsion U.
    pub u: f64,
    /// Inter-orbital repulsion U0 (often written U').
    pub u0: f64,
    /// Hund exchange J.
    pub j: f64,
    /// Keep only the density-density part, dropping spin flip and pair hopping.
    pub density_density_only: bool,
}

impl KanamoriParams {
    pub fn density_only(u: f64, u0: f64, j: f64) -> Self {
        KanamoriParams { u, u0, j, density_density_only: true }
    }

    pub fn full(u: f64, u0: f64, j: f64) -> Self {
        KanamoriParams { u, u0, j, density_density_only: false }
    }
}

/// Bath orbitals: energy, hybridization amplitude, and the correlated orbital
/// each bath couples to (diagonal-coupling layout).
#[derive(Debug, Clone, PartialEq)]
pub struct BathParams {
    pub energies: Vec<f64>,
    pub couplings: Vec<f64>,
    pub orbital_of: Vec<usize>,
}

impl BathParams {
    pub fn empty() -> Self {
        BathParams { energies: Vec::new(), couplings: Vec::new(), orbital_of: Vec::new() }
    }

    /// Round-robin assignment of `n_bath` sites over `n_corr` orbitals.
    pub fn diagonal(energies: Vec<f64>, couplings: Vec<f64>, n_corr: usize) -> Self {
        let orbital_of = (0..energies.len()).map(|b| b % n_corr).collect();
        BathParams { energies, couplings, orbital_of }
    }

    pub fn n_bath(&self) -> usize {
        self.energies.len()
    }
}

/// Second-quantized impurity Hamiltonian: symmetric one-body matrix over the
/// spin orbitals (chemical potential already absorbed) plus a Kanamori
/// interaction on the correlated block. Commutes with N and with S_z, so all
/// matrix blocks are labeled by `(n_up, n_dn)`.
#[derive(Debug)]
pub struct SecondQuantizedHamiltonian {
    pub basis: Arc<SpinBasis>,
    /// `n_sorb x n_sorb` symmetric one-body matrix (eV).
    pub h_one: DMatrix<f64>,
    pub kanamori: KanamoriParams,
    pub n_corr: usize,
    pub n_bath: usize,
}

impl SecondQuantizedHamiltonian {
    /// Assemble the Anderson impurity model from the correlated one-body
    /// block, Kanamori parameters, and bath parameters.
    pub fn build_aim(
        h_corr: &DMatrix<f64>,
        kanamori: KanamoriParams,
        bath: &BathParams,
    ) -> Result<Self> {
        let n_corr = h_corr.nrows();
        if h_corr.ncols() != n_corr {
            return Err(CoreError::InvalidInput("h_corr must be square".into()));
        }
        let asym = (h_corr - h_corr.transpose()).abs().max();
        if asym > 1e-12 {
            return Err(CoreError::InvalidInput(format!(
                "h_corr is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        if kanamori.u < 0.0 {
            return Err(CoreError::InvalidInput(format!("negative U = {}", kanamori.u)));
        }
        let n_bath = bath.n_bath();
        if bath.couplings.len() != n_bath || bath.orbital_of.len() != n_bath {
            return Err(CoreError::InvalidInput("bath arrays must share one length".into()));
        }
        if bath.orbital_of.iter().any(|&o| o >= n_corr) {
            return Err(CoreError::InvalidInput("bath couples to a non-correlated orbital".into()));
        }

        let n_spatial = n_corr + n_bath;
        let n_sorb = 2 * n_spatial;
        let mut h_one = DMatrix::zeros(n_sorb, n_sorb);
        for spin in 0..2 {
            let off = spin * n_spatial;
            for a in 0..n_corr {
                for b in 0..n_corr {
                    h_one[(off + a, off + b)] = h_corr[(a, b)];
                }
            }
            for (bi, (&eps, &v)) in bath.energies.iter().zip(&bath.couplings).enumerate() {
                let bidx = off + n_corr + bi;
                h_one[(bidx, bidx)] = eps;
                let oidx = off + bath.orbital_of[bi];
                h_one[(oidx, bidx)] = v;
                h_one[(bidx, oidx)] = v;
            }
        }

        Ok(SecondQuantizedHamiltonian {
            basis: Arc::new(SpinBasis::new(n_spatial)),
            h_one,
            kanamori,
            n_corr,
            n_bath,
        })
    }

    /// Build from an explicit full one-body matrix (no bath plumbing).
    pub fn from_one_body(h_one: DMatrix<f64>, kanamori: KanamoriParams, n_corr: usize) -> Result<Self> {
        let n_sorb = h_one.nrows();
        if h_one.ncols() != n_sorb || n_sorb % 2 != 0 {
            return Err(CoreError::InvalidInput("one-body matrix must be square with even dimension".into()));
        }
        let asym = (&h_one - h_one.transpose()).abs().max();
        if asym > 1e-12 {
            return Err(CoreError::InvalidInput(format!(
                "one-body matrix is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        if kanamori.u < 0.0 {
            return Err(CoreError::InvalidInput(format!("negative U = {}", kanamori.u)));
        }
        let n_spatial = n_sorb / 2;
        if n_corr > n_spatial {
            return Err(CoreError::InvalidInput("n_corr exceeds orbitals per spin".into()));
        }
        Ok(SecondQuantizedHamiltonian {
            basis: Arc::new(SpinBasis::new(n_spatial)),
            h_one,
            kanamori,
            n_corr,
            n_bath: n_spatial - n_corr,
        })
    }

    pub fn n_sorb(&self) -> usize {
        self.basis.n_sorb()
    }

    /// Spin-down copy of spatial orbital `a` as a spin-orbital index.
    fn dn(&self, a: usize) -> usize {
        self.basis.n_spatial + a
    }

    /// Dense matrix of the Hamiltonian restricted to one `(n_up, n_dn)` block.
    pub fn block_matrix(&self, block: usize) -> DMatrix<f64> {
        let states = &self.basis.blocks[block].states;
        let dim = states.len();
        let n_sorb = self.n_sorb();
        let mut h = DMatrix::zeros(dim, dim);

        for (col, &s) in states.iter().enumerate() {
            // One-body: diagonal occupations plus hopping.
            for p in 0..n_sorb {
                if self.h_one[(p, p)] != 0.0 && s & (1 << p) != 0 {
                    h[(col, col)] += self.h_one[(p, p)];
                }
                for q in 0..n_sorb {
                    if p == q || self.h_one[(p, q)] == 0.0 {
                        continue;
                    }
                    if let Some((s1, sg1)) = apply_annihilation(s, q) {
                        if let Some((s2, sg2)) = apply_creation(s1, p) {
                            let (_, row) = self.basis.locate(s2);
                            h[(row, col)] += self.h_one[(p, q)] * (sg1 * sg2) as f64;
                        }
                    }
                }
            }

            // Kanamori density-density part.
            let k = &self.kanamori;
            for a in 0..self.n_corr {
                let occ_up = s & (1 << a) != 0;
                let occ_dn = s & (1 << self.dn(a)) != 0;
                if occ_up && occ_dn {
                    h[(col, col)] += k.u;
                }
                for b in (a + 1)..self.n_corr {
                    let b_up = s & (1 << b) != 0;
                    let b_dn = s & (1 << self.dn(b)) != 0;
                    if occ_up && b_dn {
                        h[(col, col)] += k.u0;
                    }
                    if occ_dn && b_up {
                        h[(col, col)] += k.u0;
                    }
                    if occ_up && b_up {
                        h[(col, col)] += k.u0 - k.j;
                    }
                    if occ_dn && b_dn {
                        h[(col, col)] += k.u0 - k.j;
                    }
                }
            }

            if !k.density_density_only && k.j != 0.0 {
                for a in 0..self.n_corr {
                    for b in 0..self.n_corr {
                        if a == b {
                            continue;
                        }
                        // Spin flip: -J a^dag_{a up} a_{a dn} a^dag_{b dn} a_{b up}
                        if let Some((s2, sg)) =
                            apply_ops(s, &[(false, b), (true, self.dn(b)), (false, self.dn(a)), (true, a)])
                        {
                            let (_, row) = self.basis.locate(s2);
                            h[(row, col)] += -k.j * sg as f64;
                        }
                        // Pair hopping: +J a^dag_{a up} a^dag_{a dn} a_{b dn} a_{b up}
                        if let Some((s2, sg)) =
                            apply_ops(s, &[(false, b), (false, self.dn(b)), (true, self.dn(a)), (true, a)])
                        {
                            let (_, row) = self.basis.locate(s2);
                            h[(row, col)] += k.j * sg as f64;
                        }
                    }
                }
            }
        }
        h
    }
}

/// Apply a product of operators to a basis state, rightmost first.
/// Each entry is `(is_creation, orbital)`.
pub fn apply_ops(state: u64, ops: &[(bool, usize)]) -> Option<(u64, i8)> {
    let mut s = state;
    let mut sign = 1i8;
    for &(create, m) in ops {
        let (s2, sg) = if create { apply_creation(s, m)? } else { apply_annihilation(s, m)? };
        s = s2;
        sign *= sg;
    }
    Some((s, sign))
}
