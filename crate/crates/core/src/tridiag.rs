//! Thomas algorithm without pivoting, factored once and reused for
//! several right-hand sides.

/// Forward-eliminated form of a tridiagonal matrix.
///
/// Row `i` reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]`; `sub[0]`
/// and `sup[m-1]` are ignored.
pub(crate) struct Thomas<'a> {
    sub: &'a [f64],
    // modified super-diagonal c'_i and pivots d'_i
    sup_mod: Vec<f64>,
    pivot: Vec<f64>,
}

impl<'a> Thomas<'a> {
    pub fn factor(sub: &'a [f64], diag: &[f64], sup: &[f64]) -> Self {
        let m = diag.len();
        debug_assert!(sub.len() == m && sup.len() == m);
        let mut sup_mod = vec![0.0; m];
        let mut pivot = vec![0.0; m];
        pivot[0] = diag[0];
        sup_mod[0] = sup[0] / pivot[0];
        for i in 1..m {
            pivot[i] = diag[i] - sub[i] * sup_mod[i - 1];
            sup_mod[i] = sup[i] / pivot[i];
        }
        Self { sub, sup_mod, pivot }
    }

    /// Solves in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let m = rhs.len();
        rhs[0] /= self.pivot[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - self.sub[i] * rhs[i - 1]) / self.pivot[i];
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= self.sup_mod[i] * rhs[i + 1];
        }
    }
}
