//! Frobenius-kernel (G1) level formulas.
//!
//! Hom and Ext1 between Weyl/induced modules over G1, the explicit
//! G1-injective resolutions of Delta(pa+i) and Nabla(pb+j), and the
//! higher G1-Ext displays. All results are formal twisted G/G1-module
//! expressions; only their shapes and dimensions are consumed downstream.
//!
//! Orientation convention: throughout, the source module carries the
//! weight pb+j and the target carries pa+i. The Ext1 formula's published
//! statement swaps the residue letters relative to its own derivation;
//! we follow the derivation's orientation (the residue conditions i=j
//! and i=bar(j) are symmetric, so only the a/b roles matter).

use num_traits::Zero;

use crate::error::Result;
use crate::weights::{bar, Weight, WeightContext};

/// One term of a formal G/G1-module expression.
///
/// Tensor terms keep the Delta/Nabla shape of the left slot distinguished
/// (the Hom formulas produce Delta (x) Nabla, the induced-module ones
/// Nabla (x) Nabla); only dimensions are consumed downstream, but the
/// shapes make test diagnostics readable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobTerm {
    /// Delta(c)^[1]
    TwistDelta(Weight),
    /// Nabla(c)^[1]
    TwistNabla(Weight),
    /// left^[1] (x) Nabla(right)^[1], left a Delta if `left_is_delta`.
    TwistTensor {
        left: Weight,
        right: Weight,
        left_is_delta: bool,
    },
}

impl FrobTerm {
    pub fn dimension(&self) -> Weight {
        match self {
            FrobTerm::TwistDelta(c) | FrobTerm::TwistNabla(c) => c + 1,
            FrobTerm::TwistTensor { left, right, .. } => (left + 1) * (right + 1),
        }
    }
}

/// A formal sum of twisted terms; empty means the zero module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalGModule(pub Vec<FrobTerm>);

impl FormalGModule {
    pub fn zero() -> Self {
        FormalGModule(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dimension(&self) -> Weight {
        self.0.iter().map(FrobTerm::dimension).sum()
    }

    /// Push a Delta(c)^[1] term, dropping it when c < 0 (zero module).
    fn push_delta(&mut self, c: Weight) {
        if c >= Weight::zero() {
            self.0.push(FrobTerm::TwistDelta(c));
        }
    }

    /// Push a Nabla(c)^[1] term, dropping it when c < 0.
    fn push_nabla(&mut self, c: Weight) {
        if c >= Weight::zero() {
            self.0.push(FrobTerm::TwistNabla(c));
        }
    }

    /// Push left^[1] (x) Nabla(right)^[1], dropping it if either side is negative.
    fn push_tensor(&mut self, left: Weight, right: Weight, left_is_delta: bool) {
        if left >= Weight::zero() && right >= Weight::zero() {
            self.0.push(FrobTerm::TwistTensor { left, right, left_is_delta });
        }
    }
}

/// Hom_{G1}(Delta(pb+j), M^[1] (x) Q(i)).
///
/// Returns Nabla(b)^[1] when i=j, Nabla(b-1)^[1] when i=bar(j), zero
/// otherwise; for p=2 the two clauses coincide in residue and the result
/// is their direct sum. The symbolic M^[1] tensor factor is implicit:
/// callers tensor the returned expression with M^[1] themselves.
pub fn g1_hom_weyl_q(b: &Weight, j: u64, i: u64, ctx: &WeightContext) -> Result<FormalGModule> {
    let mut out = FormalGModule::zero();
    let jb = bar(j, ctx)?;
    if i == j {
        out.push_nabla(b.clone());
    }
    if i == jb {
        out.push_nabla(b - 1);
    }
    Ok(out)
}

/// Ext^1_{G1}(Delta(pb+j), Delta(pa+i)).
///
/// Delta(a-b-2)^[1] when a-b >= 2 and the residues match; the twisted
/// Nabla(b-a+1)^[1] when a-b <= 1 and they are bar partners; zero
/// otherwise. For p=2 both residue conditions hold and the (disjoint)
/// range clauses select the term.
pub fn g1_ext1_weyl_weyl(
    b: &Weight,
    j: u64,
    a: &Weight,
    i: u64,
    ctx: &WeightContext,
) -> Result<FormalGModule> {
    let mut out = FormalGModule::zero();
    let jb = bar(j, ctx)?;
    let diff = a - b;
    if i == j && diff >= Weight::from(2) {
        out.push_delta(&diff - 2);
    }
    if i == jb && diff <= Weight::from(1) {
        out.push_nabla(-diff + 1);
    }
    Ok(out)
}

/// Ext^1_{G1}(Delta(pb+i), Nabla(pa+j)): Nabla(a+b+1)^[1] when i=bar(j).
pub fn g1_ext1_weyl_ind(
    b: &Weight,
    i: u64,
    a: &Weight,
    j: u64,
    ctx: &WeightContext,
) -> Result<FormalGModule> {
    let mut out = FormalGModule::zero();
    if i == bar(j, ctx)? {
        out.push_nabla(a + b + 1);
    }
    Ok(out)
}

/// Hom_{G1}(Delta(pb+j), Delta(pa+i)).
///
/// Delta(a-1)^[1] (x) Nabla(b)^[1] when j=bar(i) (Delta(-1) is the zero
/// module); Nabla(b-a)^[1] when j=i and b >= a; for p=2 the direct sum.
pub fn g1_hom_weyl_weyl(
    b: &Weight,
    j: u64,
    a: &Weight,
    i: u64,
    ctx: &WeightContext,
) -> Result<FormalGModule> {
    let mut out = FormalGModule::zero();
    if j == bar(i, ctx)? {
        out.push_tensor(a - 1, b.clone(), true);
    }
    if j == i && b >= a {
        out.push_nabla(b - a);
    }
    Ok(out)
}

/// Hom_{G1}(Delta(pb+i), Nabla(pa+j)): Nabla(b)^[1] (x) Nabla(a)^[1] when i=j.
pub fn g1_hom_weyl_ind(
    b: &Weight,
    i: u64,
    a: &Weight,
    j: u64,
    _ctx: &WeightContext,
) -> Result<FormalGModule> {
    let mut out = FormalGModule::zero();
    if i == j {
        out.push_tensor(b.clone(), a.clone(), false);
    }
    Ok(out)
}

/// Ext^m_{G1}(Delta(pb+j), Delta(pa+i)) for m >= 1.
///
/// Matching residues: Delta(a-m-b-1)^[1] for m odd with m <= a-b-1,
/// Nabla(m-a+b)^[1] for m even with m >= a-b. Bar-partner residues: the
/// same with parities swapped. For p=2 the clauses merge (range alone
/// selects the term).
pub fn g1_ext_higher_weyl_weyl(
    m: u64,
    b: &Weight,
    j: u64,
    a: &Weight,
    i: u64,
    ctx: &WeightContext,
) -> Result<FormalGModule> {
    assert!(m >= 1, "higher Ext display needs m >= 1");
    let mut out = FormalGModule::zero();
    let jb = bar(j, ctx)?;
    let diff = a - b;
    let m_w = Weight::from(m);
    let odd = m % 2 == 1;
    // Delta clause parity: odd for matching residues, even for bar partners.
    if i == j && odd && m_w <= &diff - 1 {
        out.push_delta(&diff - 1 - &m_w);
    }
    if i == jb && !odd && m_w <= &diff - 1 {
        out.push_delta(&diff - 1 - &m_w);
    }
    // Nabla clause parity: even for matching residues, odd for bar partners.
    if i == j && !odd && m_w >= diff {
        out.push_nabla(&m_w - &diff);
    }
    if i == jb && odd && m_w >= diff {
        out.push_nabla(&m_w - &diff);
    }
    Ok(out)
}

/// Which module the resolution resolves: Delta(pa+i) or Nabla(pb+j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionVariant {
    Delta,
    Nabla,
}

/// Twisted factor of an injective term, or shape of a kernel module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistShape {
    Delta(Weight),
    Nabla(Weight),
}

impl TwistShape {
    pub fn dimension(&self) -> Weight {
        match self {
            TwistShape::Delta(c) | TwistShape::Nabla(c) => c + 1,
        }
    }
}

/// One degree of a G1-injective resolution: I_m = twist^[1] (x) Q(r) and
/// the kernel M_m = ker(delta_m), a plain Delta or Nabla of weight
/// p*c + r'. Exactness forces dim M_m + dim M_{m+1} = dim I_m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTerm {
    pub m: u64,
    /// The twist c of I_m = Twist(c)^[1] (x) Q(r).
    pub injective_twist: TwistShape,
    /// The residue label r of the Q factor (dimension 2p).
    pub injective_residue: u64,
    /// M_m as a plain highest-weight shape.
    pub kernel: TwistShape,
}

impl ResolutionTerm {
    pub fn injective_dimension(&self, ctx: &WeightContext) -> Weight {
        self.injective_twist.dimension() * (2 * ctx.p())
    }

    pub fn kernel_dimension(&self) -> Weight {
        match &self.kernel {
            TwistShape::Delta(w) | TwistShape::Nabla(w) => w + 1,
        }
    }
}

/// Degree m of the G1-injective resolution of Delta(pa+i) (Delta variant,
/// parameter `base` = a) or Nabla(p*base+i) (Nabla variant, `base` = b).
pub fn resolution_term(
    base: &Weight,
    i: u64,
    m: u64,
    variant: ResolutionVariant,
    ctx: &WeightContext,
) -> Result<ResolutionTerm> {
    let ibar = bar(i, ctx)?;
    let p = ctx.p();
    let m_w = Weight::from(m);
    let odd = m % 2 == 1;
    let term = match variant {
        ResolutionVariant::Delta => {
            let a = base;
            if m_w < *a {
                // m <= a-1: injective Delta(a-m-1)^[1] (x) Q(i or bar i),
                // kernel Delta(p(a-m) + (bar i or i)).
                let c = a - &m_w - 1;
                let k = (a - &m_w) * p;
                if odd {
                    ResolutionTerm {
                        m,
                        injective_twist: TwistShape::Delta(c),
                        injective_residue: i,
                        kernel: TwistShape::Delta(k + ibar),
                    }
                } else {
                    ResolutionTerm {
                        m,
                        injective_twist: TwistShape::Delta(c),
                        injective_residue: ibar,
                        kernel: TwistShape::Delta(k + i),
                    }
                }
            } else {
                // m >= a: injective Nabla(m-a)^[1] (x) Q(bar i or i),
                // kernel Nabla(p(m-a) + (bar i or i)).
                let c = &m_w - a;
                let k = (&m_w - a) * p;
                if odd {
                    ResolutionTerm {
                        m,
                        injective_twist: TwistShape::Nabla(c),
                        injective_residue: ibar,
                        kernel: TwistShape::Nabla(k + ibar),
                    }
                } else {
                    ResolutionTerm {
                        m,
                        injective_twist: TwistShape::Nabla(c),
                        injective_residue: i,
                        kernel: TwistShape::Nabla(k + i),
                    }
                }
            }
        }
        ResolutionVariant::Nabla => {
            let b = base;
            let c = &m_w + b;
            let k = (&m_w + b) * p;
            if odd {
                ResolutionTerm {
                    m,
                    injective_twist: TwistShape::Nabla(c),
                    injective_residue: ibar,
                    kernel: TwistShape::Nabla(k + ibar),
                }
            } else {
                ResolutionTerm {
                    m,
                    injective_twist: TwistShape::Nabla(c),
                    injective_residue: i,
                    kernel: TwistShape::Nabla(k + i),
                }
            }
        }
    };
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::weight;

    fn ctx(p: u64) -> WeightContext {
        WeightContext::new(p).unwrap()
    }

    #[test]
    fn hom_weyl_q_clauses() {
        let c5 = ctx(5);
        let out = g1_hom_weyl_q(&weight(2), 1, 1, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(2))]);
        // i = bar(j): bar(1) = 2.
        let out = g1_hom_weyl_q(&weight(2), 1, 2, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(1))]);
        // p=2: both clauses; Nabla(-1) normalizes away.
        let out = g1_hom_weyl_q(&weight(0), 0, 0, &ctx(2)).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(0))]);
    }

    #[test]
    fn ext1_weyl_weyl_clauses() {
        let c5 = ctx(5);
        let out = g1_ext1_weyl_weyl(&weight(0), 1, &weight(2), 1, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistDelta(weight(0))]);
        // a-b <= 1 with bar-partner residues: j = bar(i), i=1 -> j=2.
        let out = g1_ext1_weyl_weyl(&weight(1), 2, &weight(1), 1, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(1))]);
        let out = g1_ext1_weyl_weyl(&weight(0), 1, &weight(2), 2, &c5).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn ext1_weyl_ind_clauses() {
        let c5 = ctx(5);
        let out = g1_ext1_weyl_ind(&weight(0), 1, &weight(0), 2, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(1))]);
        let out = g1_ext1_weyl_ind(&weight(3), 1, &weight(2), 1, &c5).unwrap();
        assert!(out.is_zero());
        // p=2: i = bar(j) always.
        let out = g1_ext1_weyl_ind(&weight(0), 0, &weight(0), 0, &ctx(2)).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(1))]);
    }

    #[test]
    fn hom_weyl_weyl_clauses() {
        let c5 = ctx(5);
        // j = i, b >= a.
        let out = g1_hom_weyl_weyl(&weight(2), 2, &weight(1), 2, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(1))]);
        // j = bar(i): i=1 -> j=2.
        let out = g1_hom_weyl_weyl(&weight(1), 2, &weight(2), 1, &c5).unwrap();
        assert_eq!(
            out.0,
            vec![FrobTerm::TwistTensor { left: weight(1), right: weight(1), left_is_delta: true }]
        );
        // p=2: direct sum of both clauses.
        let out = g1_hom_weyl_weyl(&weight(2), 0, &weight(1), 0, &ctx(2)).unwrap();
        assert_eq!(
            out.0,
            vec![
                FrobTerm::TwistTensor { left: weight(0), right: weight(2), left_is_delta: true },
                FrobTerm::TwistNabla(weight(1)),
            ]
        );
    }

    #[test]
    fn hom_weyl_ind_clauses() {
        let c5 = ctx(5);
        let out = g1_hom_weyl_ind(&weight(1), 2, &weight(3), 2, &c5).unwrap();
        assert_eq!(
            out.0,
            vec![FrobTerm::TwistTensor { left: weight(1), right: weight(3), left_is_delta: false }]
        );
        assert_eq!(out.dimension(), weight(8));
        let out = g1_hom_weyl_ind(&weight(1), 2, &weight(3), 1, &c5).unwrap();
        assert!(out.is_zero());
        let out = g1_hom_weyl_ind(&weight(0), 0, &weight(0), 0, &c5).unwrap();
        assert_eq!(out.dimension(), weight(1));
    }

    #[test]
    fn higher_ext_displays() {
        let c5 = ctx(5);
        let out = g1_ext_higher_weyl_weyl(1, &weight(0), 1, &weight(3), 1, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistDelta(weight(1))]);
        let out = g1_ext_higher_weyl_weyl(4, &weight(0), 1, &weight(2), 1, &c5).unwrap();
        assert_eq!(out.0, vec![FrobTerm::TwistNabla(weight(2))]);
    }

    #[test]
    fn higher_ext_matches_ext1() {
        for p in [2u64, 3, 5] {
            let c = ctx(p);
            for a in 0u64..30 {
                for b in 0u64..30 {
                    for i in 0..p - 1 {
                        for j in 0..p - 1 {
                            let one = g1_ext1_weyl_weyl(&weight(b), j, &weight(a), i, &c).unwrap();
                            let hi =
                                g1_ext_higher_weyl_weyl(1, &weight(b), j, &weight(a), i, &c).unwrap();
                            assert_eq!(
                                one.dimension(),
                                hi.dimension(),
                                "p={p} a={a} b={b} i={i} j={j}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn resolution_examples() {
        let c5 = ctx(5);
        // Delta variant, a=2: degree 0 is even and <= a-1.
        let t = resolution_term(&weight(2), 1, 0, ResolutionVariant::Delta, &c5).unwrap();
        assert_eq!(t.injective_twist, TwistShape::Delta(weight(1)));
        assert_eq!(t.injective_residue, 2); // bar(1)
        assert_eq!(t.kernel, TwistShape::Delta(weight(11))); // p*2 + 1
        // Degree 5 is odd and >= a.
        let t = resolution_term(&weight(2), 1, 5, ResolutionVariant::Delta, &c5).unwrap();
        assert_eq!(t.injective_twist, TwistShape::Nabla(weight(3)));
        assert_eq!(t.injective_residue, 2);
        assert_eq!(t.kernel, TwistShape::Nabla(weight(17))); // p*3 + bar(1)
    }

    #[test]
    fn resolution_exactness_bookkeeping() {
        for p in [2u64, 3, 5] {
            let c = ctx(p);
            for variant in [ResolutionVariant::Delta, ResolutionVariant::Nabla] {
                for a in 0u64..=20 {
                    for i in 0..p - 1 {
                        for m in 0u64..=40 {
                            let t = resolution_term(&weight(a), i, m, variant, &c).unwrap();
                            let t1 = resolution_term(&weight(a), i, m + 1, variant, &c).unwrap();
                            assert_eq!(
                                t.kernel_dimension() + t1.kernel_dimension(),
                                t.injective_dimension(&c),
                                "p={p} {variant:?} a={a} i={i} m={m}"
                            );
                        }
                    }
                }
            }
        }
    }
}
