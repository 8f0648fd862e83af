//! Standard algebras used as test bedrock.

use crate::conformal::{LambdaTable, LieConformalAlgebra};
use crate::scalar::Scalar;
use crate::symalg::{ModElem, Poly};

/// Rank one algebra with `[L_λ L] = c(D, L1) L`.
pub fn rank_one<C: Scalar>(name: &str, c: &Poly<C>) -> LieConformalAlgebra<C> {
    let table = LambdaTable::new(1, 1, 1, vec![ModElem::from_coords(vec![c.clone()])]).expect("rank one table");
    LieConformalAlgebra::new(name, vec!["L".into()], table).expect("rank one algebra")
}

/// `[L_λ L] = (∂ + 2λ) L`.
pub fn virasoro<C: Scalar>() -> LieConformalAlgebra<C> {
    let c = &Poly::d() + &Poly::lambda(1).scale(&C::int(2));
    rank_one("Vir", &c)
}

pub fn abelian<C: Scalar>(n: usize) -> LieConformalAlgebra<C> {
    let basis = (1..=n).map(|k| format!("A{k}")).collect();
    LieConformalAlgebra::new(format!("ab{n}"), basis, LambdaTable::zero(n, n, n)).expect("abelian algebra")
}

/// Current algebra over a Lie algebra given by constant structure constants
/// `c[i][j][k]`: `[e_i λ e_j] = Σ_k c[i][j][k] e_k`.
pub fn current<C: Scalar>(name: &str, basis: &[&str], consts: &[Vec<Vec<i64>>]) -> LieConformalAlgebra<C> {
    let n = basis.len();
    let table = LambdaTable::from_fn(n, n, n, |i, j| {
        ModElem::from_coords(consts[i][j].iter().map(|&c| Poly::int(c)).collect())
    });
    LieConformalAlgebra::new(name, basis.iter().map(|s| s.to_string()).collect(), table).expect("current algebra")
}

fn sl2_consts(he: i64) -> Vec<Vec<Vec<i64>>> {
    // basis E, F, H with [E,F] = H, [H,E] = he*E, [H,F] = -2F
    let z = vec![0, 0, 0];
    vec![
        vec![z.clone(), vec![0, 0, 1], vec![-he, 0, 0]],
        vec![vec![0, 0, -1], z.clone(), vec![0, 2, 0]],
        vec![vec![he, 0, 0], vec![0, -2, 0], z],
    ]
}

/// `Cur(sl2)` on basis `E, F, H`.
pub fn cur_sl2<C: Scalar>() -> LieConformalAlgebra<C> {
    current("Cur_sl2", &["E", "F", "H"], &sl2_consts(2))
}

/// `Cur(sl2)` with `[H, E] = 3E`: skew-symmetric, Jacobi fails.
pub fn broken_jacobi<C: Scalar>() -> LieConformalAlgebra<C> {
    current("broken_jacobi", &["E", "F", "H"], &sl2_consts(3))
}

/// `[L_λ L] = λ L`: not skew-symmetric.
pub fn broken_skew<C: Scalar>() -> LieConformalAlgebra<C> {
    rank_one("broken_skew", &Poly::lambda(1))
}
