//! Infinite DSRG families grown from a seed triple `(A1, B1, C1)`.
//!
//! Every term is assembled as the 2x2 Kronecker block matrix
//! `[[I2 ⊗ A_n, I2 ⊗ B_n], [K2 ⊗ C_n, K2 ⊗ P_n]]`, with `B_n`, `C_n` following
//! their own recurrences and `P_n = J_{2^n,1} ⊗ K_{2^n} ⊗ J_{t, t 2^n}`.

use alloc::vec::Vec;

use crate::dsrg::{verify_algebraic, DsrgParams, Failure, FailureKind, VerifyMode, VerifyReport};
use crate::error::{Error, Result, SeedClause};
use crate::matrix::{BinaryMatrix, Block, BlockLayout, IntMatrix};

/// Orders above this are too expensive for [`check_block_system`]'s full products.
pub const FULL_PRODUCT_LIMIT: usize = 8192;

/// Upper bound on the number of bits of any single matrix a family builder may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub max_bits: u64,
}

impl Default for Capacity {
    fn default() -> Self {
        Self { max_bits: 1 << 31 }
    }
}

impl Capacity {
    fn check(&self, context: &'static str, rows: u128, cols: u128) -> Result<()> {
        let bits = rows.saturating_mul(cols);
        if bits > u128::from(self.max_bits) {
            Err(Error::Capacity {
                context,
                bits,
                limit: self.max_bits,
            })
        } else {
            Ok(())
        }
    }
}

fn pow2(n: usize) -> Result<u128> {
    if n >= 64 {
        return Err(Error::Capacity {
            context: "family index",
            bits: u128::MAX,
            limit: u64::MAX,
        });
    }
    Ok(1u128 << n)
}

/// `t * 4^n`, the order of `P_n`.
fn p_order(n: usize, t: usize) -> Result<u128> {
    Ok(t as u128 * pow2(2 * n)?)
}

/// `(v + (2^{n+1} - 4) t) 2^{n-1}`, the order of `A_n`.
pub fn family_order(v: usize, t: usize, n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::FamilyIndex(n));
    }
    Ok((v as u128 + (pow2(n + 1)? - 4) * t as u128) * pow2(n - 1)?)
}

fn to_usize(x: u128, context: &'static str) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Capacity {
        context,
        bits: x,
        limit: usize::MAX as u64,
    })
}

/// Parameters of the `n`-th family term grown from a `mu = t` seed:
/// `((v + (2^{n+1} - 4) t) 2^{n-1}, k + (2^n - 2) t, t, lambda, t)`.
pub fn family_params(seed: &DsrgParams, n: usize) -> Result<DsrgParams> {
    if !seed.mu_equals_t() {
        return Err(Error::UnsupportedParameters(
            "family construction needs mu = t",
        ));
    }
    let v = to_usize(family_order(seed.v, seed.t, n)?, "family order")?;
    let k = to_usize(
        seed.k as u128 + (pow2(n)? - 2) * seed.t as u128,
        "family degree",
    )?;
    Ok(DsrgParams {
        v,
        k,
        t: seed.t,
        lambda: seed.lambda,
        mu: seed.t,
    })
}

pub fn build_p(n: usize, t: usize) -> Result<BinaryMatrix> {
    build_p_within(n, t, Capacity::default())
}

/// `P_n = J_{2^n,1} ⊗ K_{2^n} ⊗ J_{t, t 2^n}`, square of order `t 4^n`.
pub fn build_p_within(n: usize, t: usize, cap: Capacity) -> Result<BinaryMatrix> {
    if n == 0 {
        return Err(Error::FamilyIndex(n));
    }
    let order = p_order(n, t)?;
    cap.check("build_p", order, order)?;
    let m = to_usize(pow2(n)?, "build_p")?;
    BinaryMatrix::ones(m, 1)?
        .kron(&BinaryMatrix::exchange(m)?)?
        .kron(&BinaryMatrix::ones(t, t * m)?)
}

pub fn build_p_recursive(n: usize, t: usize) -> Result<BinaryMatrix> {
    build_p_recursive_within(n, t, Capacity::default())
}

/// `P'_1 = J_{2,1} ⊗ K_2 ⊗ J_{t,2t}`,
/// `P'_n = J_{2^n,1} ⊗ K_2 ⊗ alpha_{2^{n-1}}(P'_{n-1}) ⊗ J_{1,2}`; equals [`build_p`].
pub fn build_p_recursive_within(n: usize, t: usize, cap: Capacity) -> Result<BinaryMatrix> {
    if n == 0 {
        return Err(Error::FamilyIndex(n));
    }
    let order = p_order(n, t)?;
    cap.check("build_p_recursive", order, order)?;
    let k2 = BinaryMatrix::exchange(2)?;
    let j12 = BinaryMatrix::ones(1, 2)?;
    let mut p = BinaryMatrix::ones(2, 1)?
        .kron(&k2)?
        .kron(&BinaryMatrix::ones(t, 2 * t)?)?;
    for level in 2..=n {
        let half = 1usize << (level - 1);
        p = BinaryMatrix::ones(2 * half, 1)?
            .kron(&k2)?
            .kron(&p.alpha(half)?)?
            .kron(&j12)?;
    }
    Ok(p)
}

fn square_plus_scaled_identity_products(
    a: &BinaryMatrix,
    s: u32,
) -> impl Fn(&BinaryMatrix, bool) -> Result<IntMatrix> + '_ {
    // (A + sI) X  when left, X (A + sI) otherwise
    move |x: &BinaryMatrix, left: bool| {
        let product = if left { a.mul(x)? } else { x.mul(a)? };
        product.add_scaled(x, s)
    }
}

fn record_constant(report: &mut VerifyReport, eq: u8, m: &IntMatrix, value: u32) {
    for (i, j, got) in m.mismatches(value) {
        report.record(Failure {
            kind: FailureKind::Equation(eq),
            i,
            j,
            expected: value.into(),
            got: got.into(),
        });
    }
}

/// Checks the six product equations `BC`, `BP`, `PC`, `(A+sI)B`, `C(A+sI)`,
/// `CB+sP`, each against `tJ`, in that order.
fn block_equations(
    a: &BinaryMatrix,
    b: &BinaryMatrix,
    c: &BinaryMatrix,
    p: &BinaryMatrix,
    t: u32,
    s: u32,
    mut stop_at_first: Option<&mut Option<u8>>,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::new(VerifyMode::BlockSystem);
    let plus_s = square_plus_scaled_identity_products(a, s);
    let equations: [&dyn Fn() -> Result<IntMatrix>; 6] = [
        &|| b.mul(c),
        &|| b.mul(p),
        &|| p.mul(c),
        &|| plus_s(b, true),
        &|| plus_s(c, false),
        &|| c.mul(b)?.add_scaled(p, s),
    ];
    for (idx, eq) in equations.iter().enumerate() {
        let m = eq()?;
        let number = idx as u8 + 1;
        if let Some(first) = stop_at_first.as_deref_mut() {
            if !m.is_constant(t) {
                *first = Some(number);
                record_constant(&mut report, number, &m, t);
                return Ok(report);
            }
        } else {
            record_constant(&mut report, number, &m, t);
        }
    }
    Ok(report)
}

fn b_is_blocky(b: &BinaryMatrix, t: usize) -> bool {
    (0..b.rows()).all(|i| {
        let left = (0..2 * t).filter(|&j| b.get(i, j)).count();
        let right = (2 * t..4 * t).filter(|&j| b.get(i, j)).count();
        (left == 2 * t && right == 0) || (left == 0 && right == 2 * t)
    })
}

fn c_is_blocky(c: &BinaryMatrix, t: usize) -> bool {
    (0..c.cols()).all(|j| {
        let top = (0..2 * t).filter(|&i| c.get(i, j)).count();
        let bottom = (2 * t..4 * t).filter(|&i| c.get(i, j)).count();
        top == t && bottom == t
    })
}

/// Validates the complete seed contract for `(A1, B1, C1)`.
///
/// Checks shapes, then `A1`, then blockiness, then the six product equations,
/// then the four sum conditions; the first failure is reported.
pub fn check_seed_contract(
    params: &DsrgParams,
    a1: &BinaryMatrix,
    b1: &BinaryMatrix,
    c1: &BinaryMatrix,
) -> Result<()> {
    if !params.mu_equals_t() {
        return Err(Error::UnsupportedParameters(
            "family construction needs mu = t",
        ));
    }
    if params.s() <= 0 {
        return Err(Error::UnsupportedParameters(
            "family construction needs t > lambda",
        ));
    }
    check_pair_system(params, a1, b1, c1)
}

/// The seed contract without the `mu = t`, `t > lambda` gates: shapes, `A1`,
/// blockiness, product equations and sum conditions, first failure reported.
///
/// Used to re-validate pairs found with the feasibility precheck bypassed.
pub fn check_pair_system(
    params: &DsrgParams,
    a1: &BinaryMatrix,
    b1: &BinaryMatrix,
    c1: &BinaryMatrix,
) -> Result<()> {
    if params.s() < 0 {
        return Err(Error::UnsupportedParameters(
            "pair system needs t >= lambda",
        ));
    }
    let (v, t) = (params.v, params.t);
    if b1.shape() != (v, 4 * t) {
        return Err(Error::Dimension {
            context: "B1",
            expected: (v, 4 * t),
            found: b1.shape(),
        });
    }
    if c1.shape() != (4 * t, v) {
        return Err(Error::Dimension {
            context: "C1",
            expected: (4 * t, v),
            found: c1.shape(),
        });
    }
    if !verify_algebraic(a1, params)?.ok {
        return Err(Error::SeedContract(SeedClause::SeedAdjacency));
    }
    if !b_is_blocky(b1, t) {
        return Err(Error::SeedContract(SeedClause::BlockinessB));
    }
    if !c_is_blocky(c1, t) {
        return Err(Error::SeedContract(SeedClause::BlockinessC));
    }
    let p1 = build_p(1, t)?;
    let mut first = None;
    block_equations(
        a1,
        b1,
        c1,
        &p1,
        t as u32,
        params.s() as u32,
        Some(&mut first),
    )?;
    if let Some(eq) = first {
        return Err(Error::SeedContract(SeedClause::Equation(eq)));
    }
    let sums: [(Vec<u32>, usize); 4] = [
        (b1.row_sums(), 2 * t),
        (b1.col_sums(), params.k),
        (c1.row_sums(), params.k),
        (c1.col_sums(), 2 * t),
    ];
    for (idx, (got, want)) in sums.iter().enumerate() {
        if got.iter().any(|&x| x as usize != *want) {
            return Err(Error::SeedContract(SeedClause::SumCondition(idx as u8 + 1)));
        }
    }
    Ok(())
}

/// A validated seed: `A1` of order `v`, `B1` of size `v x 4t`, `C1` of size `4t x v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    params: DsrgParams,
    a1: BinaryMatrix,
    b1: BinaryMatrix,
    c1: BinaryMatrix,
    alpha_block: usize,
    capacity: Capacity,
}

impl FamilySpec {
    pub fn new(
        params: DsrgParams,
        a1: BinaryMatrix,
        b1: BinaryMatrix,
        c1: BinaryMatrix,
    ) -> Result<Self> {
        check_seed_contract(&params, &a1, &b1, &c1)?;
        Ok(Self {
            params,
            a1,
            b1,
            c1,
            alpha_block: 0,
            capacity: Capacity::default(),
        })
    }

    /// Selects which row block the truncation in the `C_n` recurrence keeps.
    /// At level `n` the index is taken modulo the `2^{n-1}` available blocks; 0 keeps the first.
    pub fn with_alpha_block(mut self, block: usize) -> Self {
        self.alpha_block = block;
        self
    }

    pub fn with_capacity(mut self, capacity: Capacity) -> Self {
        self.capacity = capacity;
        self
    }

    pub fn params(&self) -> &DsrgParams {
        &self.params
    }

    pub fn a1(&self) -> &BinaryMatrix {
        &self.a1
    }

    pub fn b1(&self) -> &BinaryMatrix {
        &self.b1
    }

    pub fn c1(&self) -> &BinaryMatrix {
        &self.c1
    }

    pub fn capacity(&self) -> Capacity {
        self.capacity
    }

    pub fn alpha_block(&self) -> usize {
        self.alpha_block
    }

    pub fn t(&self) -> usize {
        self.params.t
    }
}

/// One term `A_n` of a family with its parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTerm {
    pub n: usize,
    pub a_n: BinaryMatrix,
    pub params: DsrgParams,
}

impl FamilyTerm {
    pub fn order(&self) -> usize {
        self.a_n.rows()
    }
}

/// Walks a family level by level, holding only `A_n`, `B_n` and `C_n`.
pub struct FamilyBuilder<'s> {
    spec: &'s FamilySpec,
    n: usize,
    a: BinaryMatrix,
    b: BinaryMatrix,
    c: BinaryMatrix,
}

impl<'s> FamilyBuilder<'s> {
    pub fn new(spec: &'s FamilySpec) -> Self {
        Self {
            spec,
            n: 1,
            a: spec.a1.clone(),
            b: spec.b1.clone(),
            c: spec.c1.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &BinaryMatrix {
        &self.a
    }

    pub fn b(&self) -> &BinaryMatrix {
        &self.b
    }

    pub fn c(&self) -> &BinaryMatrix {
        &self.c
    }

    pub fn p(&self) -> Result<BinaryMatrix> {
        build_p_within(self.n, self.spec.t(), self.spec.capacity)
    }

    pub fn params(&self) -> Result<DsrgParams> {
        family_params(&self.spec.params, self.n)
    }

    pub fn term(&self) -> Result<FamilyTerm> {
        Ok(FamilyTerm {
            n: self.n,
            a_n: self.a.clone(),
            params: self.params()?,
        })
    }

    pub fn into_term(self) -> Result<FamilyTerm> {
        let params = self.params()?;
        Ok(FamilyTerm {
            n: self.n,
            a_n: self.a,
            params,
        })
    }

    /// Moves from level `n` to `n + 1`.
    pub fn advance(&mut self) -> Result<()> {
        self.advance_parts(true)
    }

    fn advance_parts(&mut self, with_a: bool) -> Result<()> {
        let cap = self.spec.capacity;
        let t = self.spec.t();
        let n = self.n;
        let next_order = family_order(self.spec.params.v, t, n + 1)?;
        let next_p = p_order(n + 1, t)?;
        if with_a {
            cap.check("A_n", next_order, next_order)?;
        }
        cap.check("B_n", next_order, next_p)?;
        let p = self.p()?;

        if with_a {
            let (a, b, c) = (&self.a, &self.b, &self.c);
            let za = Block::Zero {
                rows: a.rows(),
                cols: a.cols(),
            };
            let zb = Block::Zero {
                rows: b.rows(),
                cols: b.cols(),
            };
            let zc = Block::Zero {
                rows: c.rows(),
                cols: c.cols(),
            };
            let zp = Block::Zero {
                rows: p.rows(),
                cols: p.cols(),
            };
            let (ma, mb, mc, mp) = (
                Block::Matrix(a),
                Block::Matrix(b),
                Block::Matrix(c),
                Block::Matrix(&p),
            );
            self.a = BlockLayout::grid(&[
                [ma, za, mb, zb],
                [za, ma, zb, mb],
                [zc, mc, zp, mp],
                [mc, zc, mp, zp],
            ])?
            .assemble()?;
        }

        let k2 = BinaryMatrix::exchange(2)?;
        let i2 = BinaryMatrix::identity(2)?;
        let j12 = BinaryMatrix::ones(1, 2)?;
        let upper = k2.kron(&self.b)?.kron(&j12)?;
        let lower = i2.kron(&p)?.kron(&j12)?;
        let next_b = BinaryMatrix::vstack(&[&upper, &lower])?;

        let blocks = 1usize << n;
        let stack = BinaryMatrix::ones(2 * blocks, 1)?.kron(&i2)?;
        let left = stack.kron(&self.c.alpha_block(blocks, self.spec.alpha_block % blocks)?)?;
        let right = stack.kron(&p.alpha(blocks)?)?;
        let next_c = BinaryMatrix::hstack(&[&left, &right])?;

        self.b = next_b;
        self.c = next_c;
        self.n += 1;
        Ok(())
    }

    /// Advances `B_n` and `C_n` only; `A_n` is left at its previous level.
    fn advance_bc(&mut self) -> Result<()> {
        self.advance_parts(false)
    }
}

fn checked_index(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::FamilyIndex(n))
    } else {
        Ok(())
    }
}

/// `B_n`: `B_1` is the seed's, then `[K2 ⊗ B_{n-1} ⊗ J_{1,2} ; I2 ⊗ P_{n-1} ⊗ J_{1,2}]`.
pub fn build_b(spec: &FamilySpec, n: usize) -> Result<BinaryMatrix> {
    checked_index(n)?;
    let mut builder = FamilyBuilder::new(spec);
    while builder.n < n {
        builder.advance_bc()?;
    }
    Ok(builder.b)
}

/// `C_n`: `C_1` is the seed's, then
/// `[J_{2^n,1} ⊗ I2 ⊗ alpha(C_{n-1}) | J_{2^n,1} ⊗ I2 ⊗ alpha(P_{n-1})]` with `alpha = alpha_{2^{n-1}}`.
pub fn build_c(spec: &FamilySpec, n: usize) -> Result<BinaryMatrix> {
    checked_index(n)?;
    let mut builder = FamilyBuilder::new(spec);
    while builder.n < n {
        builder.advance_bc()?;
    }
    Ok(builder.c)
}

/// The `n`-th family term with its parameters.
pub fn build_a(spec: &FamilySpec, n: usize) -> Result<FamilyTerm> {
    checked_index(n)?;
    let mut builder = FamilyBuilder::new(spec);
    while builder.n < n {
        builder.advance()?;
    }
    builder.into_term()
}

/// Recomputes the six block equations at level `n` with exact products.
pub fn check_block_system(spec: &FamilySpec, n: usize) -> Result<VerifyReport> {
    checked_index(n)?;
    let order = family_order(spec.params.v, spec.t(), n)?;
    if order > FULL_PRODUCT_LIMIT as u128 {
        return Err(Error::Capacity {
            context: "full block-system products (use sampled verification)",
            bits: order * order,
            limit: (FULL_PRODUCT_LIMIT * FULL_PRODUCT_LIMIT) as u64,
        });
    }
    let mut builder = FamilyBuilder::new(spec);
    while builder.n < n {
        builder.advance()?;
    }
    let p = builder.p()?;
    block_equations(
        &builder.a,
        &builder.b,
        &builder.c,
        &p,
        spec.t() as u32,
        spec.params.s() as u32,
        None,
    )
}

fn row_block_failures(
    m: &BinaryMatrix,
    block: usize,
    name: &'static str,
    report: &mut VerifyReport,
) {
    let blocks = m.cols() / block;
    for i in 0..m.rows() {
        let mut counts = alloc::vec![0usize; blocks];
        m.for_each_one_in_row(i, |j| counts[j / block] += 1);
        let full = counts.iter().filter(|&&c| c == block).count();
        let clean = counts.iter().all(|&c| c == 0 || c == block);
        if full != 1 || !clean {
            report.record(Failure {
                kind: FailureKind::RowBlocks(name),
                i,
                j: 0,
                expected: 1,
                got: full as u64,
            });
        }
    }
}

fn column_block_failures(
    m: &BinaryMatrix,
    block: usize,
    t: usize,
    name: &'static str,
    report: &mut VerifyReport,
) {
    let m_t = m.transpose();
    let blocks = m_t.cols() / block;
    for col in 0..m_t.rows() {
        let mut counts = alloc::vec![0usize; blocks];
        m_t.for_each_one_in_row(col, |i| counts[i / block] += 1);
        for (j, &c) in counts.iter().enumerate() {
            if c != t {
                report.record(Failure {
                    kind: FailureKind::ColumnBlocks(name),
                    i: col,
                    j,
                    expected: t as u64,
                    got: c as u64,
                });
            }
        }
    }
}

fn sum_failures(sums: &[u32], expected: usize, kind: FailureKind, report: &mut VerifyReport) {
    for (i, &s) in sums.iter().enumerate() {
        if s as usize != expected {
            report.record(Failure {
                kind,
                i,
                j: 0,
                expected: expected as u64,
                got: s.into(),
            });
        }
    }
}

/// Row/column sums of `B_n`, `C_n` and `P_n`, and their block structure, at level `n`.
///
/// Rows of `B_n` and `P_n` split into blocks of length `t 2^n` must be one
/// all-ones block and zeros; columns of `C_n` and `P_n` split the same way
/// must hold exactly `t` ones per block.
pub fn check_structure(spec: &FamilySpec, n: usize) -> Result<VerifyReport> {
    checked_index(n)?;
    let mut builder = FamilyBuilder::new(spec);
    while builder.n < n {
        builder.advance_bc()?;
    }
    let t = spec.t();
    let p = builder.p()?;
    let block = t << n;
    let degree = family_params(&spec.params, n)?.k;
    let mut report = VerifyReport::new(VerifyMode::Structural);
    sum_failures(
        &builder.b.row_sums(),
        block,
        FailureKind::RowSum("B"),
        &mut report,
    );
    sum_failures(
        &builder.b.col_sums(),
        degree,
        FailureKind::ColumnSum("B"),
        &mut report,
    );
    sum_failures(
        &builder.c.row_sums(),
        degree,
        FailureKind::RowSum("C"),
        &mut report,
    );
    sum_failures(
        &builder.c.col_sums(),
        block,
        FailureKind::ColumnSum("C"),
        &mut report,
    );
    sum_failures(&p.row_sums(), block, FailureKind::RowSum("P"), &mut report);
    sum_failures(
        &p.col_sums(),
        block,
        FailureKind::ColumnSum("P"),
        &mut report,
    );
    row_block_failures(&builder.b, block, "B", &mut report);
    row_block_failures(&p, block, "P", &mut report);
    column_block_failures(&builder.c, block, t, "C", &mut report);
    column_block_failures(&p, block, t, "P", &mut report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_by_hand() {
        let expect =
            BinaryMatrix::from_rows(&[[0u8, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0]])
                .unwrap();
        assert_eq!(build_p(1, 1).unwrap(), expect);
        assert_eq!(build_p(3, 5).unwrap().rows(), 320);
        let p = build_p(2, 3).unwrap();
        assert!(p.mul(&p).unwrap().is_constant(3));
        assert_eq!(p.rows(), 48);
    }

    #[test]
    fn recursive_p_matches() {
        for t in 1..=3 {
            assert_eq!(build_p_recursive(1, t).unwrap(), build_p(1, t).unwrap());
        }
        assert_eq!(build_p_recursive(3, 2).unwrap(), build_p(3, 2).unwrap());
        assert_eq!(build_p_recursive(4, 1).unwrap().rows(), 256);
    }

    #[test]
    fn index_zero_rejected() {
        assert_eq!(build_p(0, 1), Err(Error::FamilyIndex(0)));
        assert_eq!(build_p_recursive(0, 1), Err(Error::FamilyIndex(0)));
        let seed = DsrgParams::new(6, 3, 2, 1, 2).unwrap();
        assert_eq!(family_params(&seed, 0), Err(Error::FamilyIndex(0)));
    }

    #[test]
    fn capacity_is_enforced() {
        let tiny = Capacity { max_bits: 1000 };
        assert!(build_p_within(1, 7, tiny).is_ok());
        assert!(matches!(
            build_p_within(2, 2, tiny),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(build_p(40, 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn params_formula() {
        let seed = DsrgParams::new(6, 3, 2, 1, 2).unwrap();
        assert_eq!(family_params(&seed, 1).unwrap(), seed);
        let p2 = family_params(&seed, 2).unwrap();
        assert_eq!((p2.v, p2.k), (2 * 6 + 8 * 2, 3 + 2 * 2));
        for n in 1..=10usize {
            let p = family_params(&seed, n).unwrap();
            let two_n = 1usize << n;
            assert_eq!(
                p,
                DsrgParams {
                    v: two_n * (2 * two_n - 1),
                    k: 2 * two_n - 1,
                    t: 2,
                    lambda: 1,
                    mu: 2
                }
            );
        }
        let general = DsrgParams::new(6, 3, 2, 1, 1).unwrap();
        assert!(matches!(
            family_params(&general, 2),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn order_recurrence() {
        for (v, t) in [(6usize, 2usize), (8, 3), (24, 7)] {
            for n in 1..8 {
                let here = family_order(v, t, n).unwrap();
                let next = family_order(v, t, n + 1).unwrap();
                assert_eq!(next, 2 * here + 2 * p_order(n, t).unwrap());
            }
        }
    }
}
