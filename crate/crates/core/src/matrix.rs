//! Integer matrix utilities: Hermite and Smith normal forms.
//!
//! Everything is `i128`. The lattices handled here come from desk-scale
//! groups (orders well below 2^20), where the intermediate entries of the
//! reduction never approach overflow; debug builds additionally carry
//! overflow checks.

// row operations index several matrices at once
#![allow(clippy::needless_range_loop)]

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    debug_assert_eq!(inner, b.len());
    let mut out = vec![vec![0i128; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Determinant of an upper triangular square matrix.
pub fn triangular_det(m: &Mat) -> i128 {
    m.iter().enumerate().map(|(i, row)| row[i]).product()
}

/// Row-style Hermite normal form of a full-rank lattice in Z^dim.
///
/// Input rows generate the lattice (they must span a finite-index sublattice,
/// which holds for every caller: the rows always include a diagonal relation
/// basis). The result is the unique square upper-triangular basis with
/// positive pivots and the entries above each pivot reduced into [0, pivot).
pub fn hnf_rows(rows: &[Vec<i128>], dim: usize) -> Mat {
    let mut m: Vec<Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    for r in &m {
        assert_eq!(r.len(), dim, "row length mismatch");
    }
    let mut pivot = 0usize;
    for col in 0..dim {
        loop {
            let mut best: Option<usize> = None;
            for (r, row) in m.iter().enumerate().skip(pivot) {
                if row[col] != 0 && best.is_none_or(|b| row[col].abs() < m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot, b);
            let mut clean = true;
            let p = m[pivot][col];
            for r in pivot + 1..m.len() {
                if m[r][col] != 0 {
                    let q = m[r][col].div_euclid(p);
                    for c in 0..dim {
                        m[r][c] -= q * m[pivot][c];
                    }
                    if m[r][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if pivot < m.len() && m[pivot][col] != 0 {
            if m[pivot][col] < 0 {
                for c in 0..dim {
                    m[pivot][c] = -m[pivot][c];
                }
            }
            let p = m[pivot][col];
            for r in 0..pivot {
                let q = m[r][col].div_euclid(p);
                if q != 0 {
                    for c in 0..dim {
                        m[r][c] -= q * m[pivot][c];
                    }
                }
            }
            pivot += 1;
        }
    }
    m.truncate(pivot);
    assert_eq!(pivot, dim, "lattice not of full rank");
    m
}

/// Deciding membership of `x` in the row lattice of an HNF basis.
pub fn in_lattice(h: &Mat, x: &[i128]) -> bool {
    solve_in_lattice(h, x).is_some()
}

/// Expresses `x` as an integer combination of the rows of the HNF basis `h`,
/// returning the coefficient vector when one exists.
pub fn solve_in_lattice(h: &Mat, x: &[i128]) -> Option<Vec<i128>> {
    let dim = x.len();
    debug_assert_eq!(h.len(), dim);
    let mut rem = x.to_vec();
    let mut coeffs = vec![0i128; dim];
    for i in 0..dim {
        let p = h[i][i];
        if rem[i] % p != 0 {
            return None;
        }
        let y = rem[i] / p;
        coeffs[i] = y;
        if y != 0 {
            for c in i..dim {
                rem[c] -= y * h[i][c];
            }
        }
    }
    rem.iter().all(|&v| v == 0).then_some(coeffs)
}

/// Smith normal form data. `u` is a unimodular row transform with inverse
/// `u_inv`, and `diag` holds the nonnegative diagonal entries of u*a*v for
/// a suitable (untracked) unimodular column transform v, with each entry
/// dividing the next.
pub struct Snf {
    pub u: Mat,
    pub u_inv: Mat,
    pub diag: Vec<i128>,
}

pub fn snf(a: &Mat) -> Snf {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut s = a.clone();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);

    // row i += q * row j, with the matching inverse column update on u_inv
    macro_rules! row_add {
        ($i:expr, $j:expr, $q:expr) => {{
            let (i, j, q) = ($i, $j, $q);
            for c in 0..cols {
                let t = q * s[j][c];
                s[i][c] += t;
            }
            for c in 0..rows {
                let t = q * u[j][c];
                u[i][c] += t;
            }
            for r in 0..rows {
                let t = q * u_inv[r][i];
                u_inv[r][j] -= t;
            }
        }};
    }

    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // locate a minimal nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j] != 0
                    && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        if bi != t {
            s.swap(bi, t);
            u.swap(bi, t);
            for r in 0..rows {
                u_inv[r].swap(bi, t);
            }
        }
        if bj != t {
            for row in s.iter_mut() {
                row.swap(bj, t);
            }
        }

        let mut dirty = false;
        for i in t + 1..rows {
            if s[i][t] != 0 {
                let q = s[i][t].div_euclid(s[t][t]);
                row_add!(i, t, -q);
                if s[i][t] != 0 {
                    dirty = true;
                }
            }
        }
        for j in t + 1..cols {
            if s[t][j] != 0 {
                let q = s[t][j].div_euclid(s[t][t]);
                if q != 0 {
                    for row in s.iter_mut() {
                        let v = row[t];
                        row[j] -= q * v;
                    }
                }
                if s[t][j] != 0 {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // force the pivot to divide the trailing block
        let mut offender = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if s[i][j] % s[t][t] != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_add!(t, i, 1);
            continue;
        }
        t += 1;
    }

    let diag: Vec<i128> = (0..n).map(|i| s[i][i].abs()).collect();
    // normalize row signs so that u * a * v really has the absolute values
    for (i, d) in diag.iter().enumerate() {
        if s[i][i] < 0 && *d != 0 {
            for c in 0..cols {
                s[i][c] = -s[i][c];
            }
            for c in 0..rows {
                u[i][c] = -u[i][c];
            }
            for r in 0..rows {
                u_inv[r][i] = -u_inv[r][i];
            }
        }
    }
    // the elimination already yields a divisibility chain; check it
    for w in diag.windows(2) {
        if w[0] != 0 {
            debug_assert_eq!(w[1] % w[0], 0, "smith chain broken");
        }
    }
    Snf { u, u_inv, diag }
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_i128(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd_i128(a, b)) * b
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
