//! Lattice Hamiltonians supplying the local Green's function: a k-resolved
//! Hermitian-matrix form read from file, and a semicircular-DOS toy band that
//! stands in when no ab-initio data is available.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Anything that can produce the momentum-summed (local) lattice GF for a
/// given frequency, chemical potential, and local self-energy on the
/// correlated block.
pub trait LocalGfProvider: Send + Sync {
    fn n_wan(&self) -> usize;
    /// Indices of the correlated orbitals within the n_wan space.
    fn corr_mask(&self) -> &[usize];
    /// Local (unit-cell) projection of the one-body lattice Hamiltonian on
    /// the correlated block; fixes the origin of the hybridization function.
    fn local_onebody_corr(&self) -> DMatrix<f64>;
    /// G_loc(z) as the full n_wan x n_wan matrix. `sigma_corr` is the local
    /// self-energy on the correlated block (embedded internally).
    fn local_gf(&self, z: Complex64, mu: f64, sigma_corr: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>>;

    fn n_corr(&self) -> usize {
        self.corr_mask().len()
    }
}

/// k-resolved lattice Hamiltonian: weighted k points with Hermitian
/// `n_wan x n_wan` matrices in eV.
#[derive(Debug, Clone)]
pub struct LatticeHamiltonian {
    pub weights: Vec<f64>,
    pub h_k: Vec<DMatrix<Complex64>>,
    pub corr_mask: Vec<usize>,
}

impl LatticeHamiltonian {
    pub fn new(weights: Vec<f64>, h_k: Vec<DMatrix<Complex64>>, corr_mask: Vec<usize>) -> Result<Self> {
        if weights.len() != h_k.len() || h_k.is_empty() {
            return Err(CoreError::InvalidInput("k-point weights and matrices must match".into()));
        }
        let n_wan = h_k[0].nrows();
        let wsum: f64 = weights.iter().sum();
        if (wsum - 1.0).abs() > 1e-8 {
            return Err(CoreError::InvalidInput(format!("k weights sum to {wsum}, expected 1")));
        }
        for (i, m) in h_k.iter().enumerate() {
            if m.nrows() != n_wan || m.ncols() != n_wan {
                return Err(CoreError::InvalidInput(format!("H(k) #{i} has inconsistent dimension")));
            }
            let herm = (m - m.adjoint()).map(|c| c.norm()).max();
            if herm > 1e-10 {
                return Err(CoreError::InvalidInput(format!(
                    "H(k) #{i} not Hermitian (max deviation {herm:.3e})"
                )));
            }
        }
        if corr_mask.iter().any(|&o| o >= n_wan) {
            return Err(CoreError::InvalidInput("corr_mask index out of range".into()));
        }
        Ok(LatticeHamiltonian { weights, h_k, corr_mask })
    }

    pub fn n_k(&self) -> usize {
        self.h_k.len()
    }

    /// Parse the plain-text format: header "nwan nk", then per k point one
    /// weight line followed by nwan^2 lines "i j Re Im".
    pub fn parse(text: &str, corr_mask: Vec<usize>) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            tokens
                .next()
                .ok_or_else(|| CoreError::InvalidInput(format!("lattice file truncated at {what}")))?
                .parse::<f64>()
                .map_err(|e| CoreError::InvalidInput(format!("lattice file: bad {what}: {e}")))
        };
        let n_wan = next("nwan")? as usize;
        let n_k = next("nk")? as usize;
        if n_wan == 0 || n_k == 0 {
            return Err(CoreError::InvalidInput("lattice file: empty header".into()));
        }
        let mut weights = Vec::with_capacity(n_k);
        let mut mats = Vec::with_capacity(n_k);
        for _ in 0..n_k {
            weights.push(next("weight")?);
            let mut m = DMatrix::from_element(n_wan, n_wan, Complex64::new(0.0, 0.0));
            for _ in 0..n_wan * n_wan {
                let i = next("row index")? as usize;
                let j = next("column index")? as usize;
                let re = next("Re H")?;
                let im = next("Im H")?;
                if i >= n_wan || j >= n_wan {
                    return Err(CoreError::InvalidInput(format!("lattice file: index ({i},{j}) out of range")));
                }
                m[(i, j)] = Complex64::new(re, im);
            }
            mats.push(m);
        }
        LatticeHamiltonian::new(weights, mats, corr_mask)
    }

    pub fn serialize(&self) -> String {
        let n_wan = self.h_k[0].nrows();
        let mut out = format!("{} {}\n", n_wan, self.n_k());
        for (w, m) in self.weights.iter().zip(&self.h_k) {
            out.push_str(&format!("{w:.17e}\n"));
            for i in 0..n_wan {
                for j in 0..n_wan {
                    out.push_str(&format!("{} {} {:.17e} {:.17e}\n", i, j, m[(i, j)].re, m[(i, j)].im));
                }
            }
        }
        out
    }
}

impl LocalGfProvider for LatticeHamiltonian {
    fn n_wan(&self) -> usize {
        self.h_k[0].nrows()
    }

    fn corr_mask(&self) -> &[usize] {
        &self.corr_mask
    }

    fn local_onebody_corr(&self) -> DMatrix<f64> {
        let n_wan = self.n_wan();
        let mut local = DMatrix::from_element(n_wan, n_wan, Complex64::new(0.0, 0.0));
        for (w, m) in self.weights.iter().zip(&self.h_k) {
            local += m * Complex64::new(*w, 0.0);
        }
        let nc = self.corr_mask.len();
        let mut out = DMatrix::zeros(nc, nc);
        for (a, &oa) in self.corr_mask.iter().enumerate() {
            for (b, &ob) in self.corr_mask.iter().enumerate() {
                out[(a, b)] = local[(oa, ob)].re;
            }
        }
        out
    }

    fn local_gf(&self, z: Complex64, mu: f64, sigma_corr: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let n_wan = self.n_wan();
        let mut sigma_full = DMatrix::from_element(n_wan, n_wan, Complex64::new(0.0, 0.0));
        for (a, &oa) in self.corr_mask.iter().enumerate() {
            for (b, &ob) in self.corr_mask.iter().enumerate() {
                sigma_full[(oa, ob)] = sigma_corr[(a, b)];
            }
        }
        let zmu = z + Complex64::new(mu, 0.0);
        let mut acc = DMatrix::from_element(n_wan, n_wan, Complex64::new(0.0, 0.0));
        for (ki, (w, hk)) in self.weights.iter().zip(&self.h_k).enumerate() {
            let mut m = -hk - &sigma_full;
            for i in 0..n_wan {
                m[(i, i)] += zmu;
            }
            let inv = m
                .try_inverse()
                .ok_or(CoreError::SingularLocalGf { k_index: ki, z: format!("{z}") })?;
            acc += inv * Complex64::new(*w, 0.0);
        }
        Ok(acc)
    }
}

/// Single-band toy lattice with a semicircular density of states of
/// half-bandwidth D, evaluated by Gauss-Chebyshev quadrature of the second
/// kind (exact for the sqrt-weighted integrand).
#[derive(Debug, Clone)]
pub struct BetheLattice {
    pub half_bandwidth: f64,
    pub n_dos_points: usize,
    corr: [usize; 1],
    /// Quadrature nodes (energies) and weights for the semicircular DOS.
    nodes: Vec<(f64, f64)>,
}

impl BetheLattice {
    pub fn new(half_bandwidth: f64, n_dos_points: usize) -> Result<Self> {
        if half_bandwidth <= 0.0 {
            return Err(CoreError::InvalidInput("half-bandwidth must be positive".into()));
        }
        let n = n_dos_points.max(8);
        // rho_sc(e) de = (2 / (pi D^2)) sqrt(D^2 - e^2) de; with e = D cos(th)
        // the Chebyshev-II rule integrates f against (2/pi) sin^2(th) dth.
        let nodes = (1..=n)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / (n as f64 + 1.0);
                let e = half_bandwidth * th.cos();
                let w = 2.0 / (n as f64 + 1.0) * th.sin() * th.sin();
                (e, w)
            })
            .collect();
        Ok(BetheLattice { half_bandwidth, n_dos_points: n, corr: [0], nodes })
    }

    /// Semicircular DOS value at energy `e`.
    pub fn dos(&self, e: f64) -> f64 {
        let d = self.half_bandwidth;
        if e.abs() >= d {
            0.0
        } else {
            2.0 / (std::f64::consts::PI * d * d) * (d * d - e * e).sqrt()
        }
    }
}

impl LocalGfProvider for BetheLattice {
    fn n_wan(&self) -> usize {
        1
    }

    fn corr_mask(&self) -> &[usize] {
        &self.corr
    }

    fn local_onebody_corr(&self) -> DMatrix<f64> {
        DMatrix::zeros(1, 1) // band center
    }

    fn local_gf(&self, z: Complex64, mu: f64, sigma_corr: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let zeta = z + Complex64::new(mu, 0.0) - sigma_corr[(0, 0)];
        let mut g = Complex64::new(0.0, 0.0);
        for &(e, w) in &self.nodes {
            g += Complex64::new(w, 0.0) / (zeta - Complex64::new(e, 0.0));
        }
        if !g.re.is_finite() || !g.im.is_finite() {
            return Err(CoreError::SingularLocalGf { k_index: 0, z: format!("{z}") });
        }
        Ok(DMatrix::from_element(1, 1, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form Hilbert transform of the semicircle: the independent oracle.
    fn semicircle_hilbert(zeta: Complex64, d: f64) -> Complex64 {
        // g = 2 (zeta - sqrt(zeta - D) sqrt(zeta + D)) / D^2, branch with g -> 1/zeta.
        let s = (zeta - d).sqrt() * (zeta + d).sqrt();
        2.0 * (zeta - s) / (d * d)
    }

    #[test]
    fn bethe_matches_closed_form_hilbert_transform() {
        let d = 2.0;
        let lat = BetheLattice::new(d, 1024).unwrap();
        let sigma = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0));
        for z in [
            Complex64::new(0.0, 2.0 * d),
            Complex64::new(0.3, 0.5),
            Complex64::new(-1.2, 0.2),
            Complex64::new(0.0, 0.0785),
        ] {
            let g = lat.local_gf(z, 0.0, &sigma).unwrap()[(0, 0)];
            let exact = semicircle_hilbert(z, d);
            assert!((g - exact).norm() < 1e-9, "z={z} got {g} want {exact}");
        }
    }

    #[test]
    fn bethe_asymptotics_and_normalization() {
        let d = 1.5;
        let lat = BetheLattice::new(d, 512).unwrap();
        let sigma = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0));
        let z = Complex64::new(0.0, 500.0);
        let g = lat.local_gf(z, 0.0, &sigma).unwrap()[(0, 0)];
        assert!((g - 1.0 / z).norm() < 1e-5 / 500.0);
        // DOS normalization by trapezoid.
        let n = 20000;
        let mut total = 0.0;
        for i in 0..n {
            let e = -d + 2.0 * d * (i as f64 + 0.5) / n as f64;
            total += lat.dos(e) * 2.0 * d / n as f64;
        }
        assert!((total - 1.0).abs() < 1e-6, "integral {total}");
    }

    #[test]
    fn lattice_file_roundtrip_and_local_gf() {
        let w = vec![0.5, 0.5];
        let h1 = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.2, 0.0),
            Complex64::new(0.1, 0.05),
            Complex64::new(0.1, -0.05),
            Complex64::new(-0.4, 0.0),
        ]);
        let h2 = h1.map(|c| c * 0.5);
        let lat = LatticeHamiltonian::new(w, vec![h1, h2], vec![0]).unwrap();
        let text = lat.serialize();
        let back = LatticeHamiltonian::parse(&text, vec![0]).unwrap();
        assert_eq!(back.n_k(), 2);
        let sigma = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0));
        let z = Complex64::new(0.0, 1.0);
        let a = lat.local_gf(z, 0.1, &sigma).unwrap();
        let b = back.local_gf(z, 0.1, &sigma).unwrap();
        assert!((a - b).map(|c| c.norm()).max() < 1e-14);
    }

    #[test]
    fn scalar_resolvent_single_kpoint() {
        let h = DMatrix::from_element(1, 1, Complex64::new(0.7, 0.0));
        let lat = LatticeHamiltonian::new(vec![1.0], vec![h], vec![0]).unwrap();
        let sigma = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0));
        let z = Complex64::new(0.2, 0.3);
        let mu = 0.4;
        let g = lat.local_gf(z, mu, &sigma).unwrap()[(0, 0)];
        let expect = 1.0 / (z + Complex64::new(mu - 0.7, 0.0));
        assert!((g - expect).norm() < 1e-14);
    }

    #[test]
    fn rejects_nonhermitian_and_bad_weights() {
        let h = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert!(LatticeHamiltonian::new(vec![1.0], vec![h.clone()], vec![0]).is_err());
        let herm = DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0));
        assert!(LatticeHamiltonian::new(vec![0.7], vec![herm], vec![0]).is_err());
    }
}
