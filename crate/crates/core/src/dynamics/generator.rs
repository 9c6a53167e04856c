use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::model::{DissipatorKind, Envelope, LindbladModel};
use crate::fock::{CsrMatrix, DensityMatrix};
use crate::Result;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `h * A rho B`; the Hermitian-conjugate partner comes from symmetrization.
#[derive(Debug)]
struct Sandwich {
    h: C64,
    a: CsrMatrix,
    b: CsrMatrix,
}

/// The master equation compiled to `d rho/dt = Z + Z^dagger` with
/// `Z = K(t) rho + sum_j h_j A_j rho B_j`.
///
/// `K(t) = -i H(t) - (1/2) sum of dissipative anticommutator pieces`, stored on
/// a single sparsity pattern shared by all time envelopes.
#[derive(Debug)]
pub(crate) struct Generator {
    n: usize,
    pattern: CsrMatrix,
    k_const: Vec<C64>,
    k_osc: Vec<(Envelope, Vec<C64>)>,
    sandwiches: Vec<Sandwich>,
}

impl Generator {
    pub(crate) fn new(model: &LindbladModel) -> Self {
        let n = model.space().total_dim();
        let mut const_pieces: Vec<(C64, CsrMatrix)> = Vec::new();
        let mut osc_pieces: Vec<(Envelope, CsrMatrix)> = Vec::new();
        let mut sandwiches = Vec::new();

        for term in model.terms() {
            let op = term.operator.to_csr().scale(-I);
            match term.envelope {
                Envelope::Constant(v) => const_pieces.push((v, op)),
                env => osc_pieces.push((env, op)),
            }
        }

        for d in model.dissipators() {
            let g = d.rate();
            let o = d.operator().to_csr().into_owned();
            let od = o.adjoint();
            let odo = od.matmul(&o);
            match d.kind() {
                DissipatorKind::Standard => {
                    const_pieces.push((c(-0.5 * g), odo));
                    sandwiches.push(Sandwich { h: c(0.5 * g), a: o, b: od });
                }
                DissipatorKind::Squeezed { n_env, m_env } => {
                    let ood = o.matmul(&od);
                    let o2 = o.matmul(&o);
                    let od2 = od.matmul(&od);
                    const_pieces.push((c(-0.5 * g * (n_env + 1.0)), odo));
                    const_pieces.push((c(-0.5 * g * n_env), ood));
                    const_pieces.push((0.5 * g * m_env, o2));
                    const_pieces.push((0.5 * g * m_env.conj(), od2));
                    sandwiches.push(Sandwich {
                        h: c(0.5 * g * (n_env + 1.0)),
                        a: o.clone(),
                        b: od.clone(),
                    });
                    sandwiches.push(Sandwich {
                        h: c(0.5 * g * n_env),
                        a: od,
                        b: o.clone(),
                    });
                    if m_env != C64::default() {
                        sandwiches.push(Sandwich {
                            h: -g * m_env,
                            a: o.clone(),
                            b: o,
                        });
                    }
                }
            }
        }

        // Union of all sparsity patterns; values are placeholders.
        let mut triplets = Vec::new();
        for m in const_pieces.iter().map(|p| &p.1).chain(osc_pieces.iter().map(|p| &p.1)) {
            triplets.extend(m.iter().map(|(r, c, _)| (r, c, C64::new(1.0, 0.0))));
        }
        let pattern = CsrMatrix::from_triplets(n, triplets);

        let mut k_const = vec![C64::default(); pattern.nnz()];
        for (coef, m) in &const_pieces {
            scatter(&pattern, m, *coef, &mut k_const);
        }
        let k_osc = osc_pieces
            .into_iter()
            .map(|(env, m)| {
                let mut data = vec![C64::default(); pattern.nnz()];
                scatter(&pattern, &m, c(1.0), &mut data);
                (env, data)
            })
            .collect();

        Self {
            n,
            pattern,
            k_const,
            k_osc,
            sandwiches,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.n
    }

    pub(crate) fn k_at(&self, t: f64) -> CsrMatrix {
        let mut data = self.k_const.clone();
        for (env, d) in &self.k_osc {
            let v = env.value(t);
            for (x, y) in data.iter_mut().zip(d) {
                *x += v * y;
            }
        }
        CsrMatrix::from_raw(
            self.n,
            self.pattern.indptr().to_vec(),
            self.pattern.indices().to_vec(),
            data,
        )
    }

    /// Writes `d rho/dt` for row-major `rho` into `out`; `scratch` holds `2 n^2` entries.
    pub(crate) fn apply_with(&self, k: &CsrMatrix, rho: &[C64], out: &mut [C64], scratch: &mut [C64]) {
        let n = self.n;
        let (z, tmp) = scratch.split_at_mut(n * n);
        z.fill(C64::default());
        k.mul_dense_acc(c(1.0), rho, z);
        for s in &self.sandwiches {
            tmp.fill(C64::default());
            s.a.mul_dense_acc(c(1.0), rho, tmp);
            s.b.dense_mul_acc(s.h, tmp, z);
        }
        for i in 0..n {
            for j in i..n {
                let v = z[i * n + j] + z[j * n + i].conj();
                out[i * n + j] = v;
                out[j * n + i] = v.conj();
            }
        }
    }

    pub(crate) fn apply(&self, t: f64, rho: &[C64], out: &mut [C64], scratch: &mut [C64]) {
        let k = self.k_at(t);
        self.apply_with(&k, rho, out, scratch);
    }

    /// Dense column-stacked superoperator at time `t`.
    pub(crate) fn superoperator(&self, t: f64) -> Array2<C64> {
        let n = self.n;
        let mut l = Array2::<C64>::zeros((n * n, n * n));
        let id = CsrMatrix::identity(n);
        let k = self.k_at(t);
        // K rho -> I (x) K ; rho K^dagger -> conj(K) (x) I.
        add_kron(&mut l, c(1.0), &id, &k, false);
        add_kron(&mut l, c(1.0), &k, &id, true);
        for s in &self.sandwiches {
            // h A rho B -> h B^T (x) A ; h^* B^dagger rho A^dagger -> h^* conj(A) (x) B^dagger.
            add_kron(&mut l, s.h, &transpose(&s.b), &s.a, false);
            add_kron(&mut l, s.h.conj(), &s.a, &s.b.adjoint(), true);
        }
        l
    }
}

fn transpose(m: &CsrMatrix) -> CsrMatrix {
    CsrMatrix::from_triplets(m.dim(), m.iter().map(|(r, c, v)| (c, r, v)).collect())
}

/// `l += coef * (x (x) y)`, conjugating `x` first when asked.
fn add_kron(l: &mut Array2<C64>, coef: C64, x: &CsrMatrix, y: &CsrMatrix, conj_x: bool) {
    let n = y.dim();
    for (xr, xc, xv) in x.iter() {
        let xv = if conj_x { xv.conj() } else { xv };
        for (yr, yc, yv) in y.iter() {
            l[[xr * n + yr, xc * n + yc]] += coef * xv * yv;
        }
    }
}

fn scatter(pattern: &CsrMatrix, m: &CsrMatrix, coef: C64, out: &mut [C64]) {
    let indptr = pattern.indptr();
    let indices = pattern.indices();
    for (r, c, v) in m.iter() {
        let row = &indices[indptr[r]..indptr[r + 1]];
        let pos = row.binary_search(&c).expect("pattern covers every piece");
        out[indptr[r] + pos] += coef * v;
    }
}

/// `d rho/dt` of the master equation at time `t`.
pub fn rhs(model: &LindbladModel, rho: &DensityMatrix, t: f64) -> Result<Array2<C64>> {
    model.space().ensure_same(rho.space())?;
    let g = Generator::new(model);
    let n = g.dim();
    let flat = rho.matrix().as_standard_layout().iter().cloned().collect::<Vec<_>>();
    let mut out = vec![C64::default(); n * n];
    let mut scratch = vec![C64::default(); 2 * n * n];
    g.apply(t, &flat, &mut out, &mut scratch);
    Ok(Array2::from_shape_vec((n, n), out).expect("square"))
}

/// Column-stacked Liouvillian at time `t`: `vec(d rho/dt) = L vec(rho)` with
/// `vec(A rho B) = (B^T (x) A) vec(rho)`.
pub fn superoperator(model: &LindbladModel, t: f64) -> Array2<C64> {
    Generator::new(model).superoperator(t)
}
