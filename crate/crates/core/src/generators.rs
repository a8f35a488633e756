//! Natural endomorphism-valued 2-forms built from the normal tensors `N⁰` and `N¹`.
//!
//! Two families of `(3,1)` building blocks are formed by contraction and
//! insertion of the identity:
//!
//! - `C₀..C₃`, linear in `N¹`;
//! - `D₁..D₅`, quadratic in `N⁰`.
//!
//! Permuting covariant slots and skew-symmetrizing in the first two slots then
//! yields the nineteen generators `T1..T19`. Independently, every
//! GL-equivariant map between tensor types is a linear combination of
//! [`ContractionScheme`]s, which [`enumerate_schemes`] lists exhaustively.

use std::fmt;

use serde::Serialize;

use crate::poly::{rational, Polynomial};
use crate::tensor::{TensorError, TensorField, TensorShape};

/// Covariant-slot pattern turning a `(3,1)` block `X` into a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// `X_ijk - X_jik`
    SwapFirstPair,
    /// `X_jki - X_ikj`
    Cycle,
    /// `X_kij - X_kji`
    SwapLastPair,
    /// `2 X_ijk`
    Double,
}

impl Pattern {
    pub fn apply(self, x: &TensorField) -> Result<TensorField, TensorError> {
        match self {
            Pattern::SwapFirstPair => x
                .permute_covariant(&[1, 2, 3])?
                .try_sub(&x.permute_covariant(&[2, 1, 3])?),
            Pattern::Cycle => x
                .permute_covariant(&[2, 3, 1])?
                .try_sub(&x.permute_covariant(&[1, 3, 2])?),
            Pattern::SwapLastPair => x
                .permute_covariant(&[3, 1, 2])?
                .try_sub(&x.permute_covariant(&[3, 2, 1])?),
            Pattern::Double => Ok(x.scale(&rational(2, 1))),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::SwapFirstPair => write!(f, "(ijk)-(jik)"),
            Pattern::Cycle => write!(f, "(jki)-(ikj)"),
            Pattern::SwapLastPair => write!(f, "(kij)-(kji)"),
            Pattern::Double => write!(f, "2(ijk)"),
        }
    }
}

/// Which reading of an ambiguous generator definition to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// The definition exactly as printed.
    Literal,
    /// The nonzero skew-symmetric pattern for that block.
    Skew,
}

/// Choices for the two generators whose printed definitions are not 2-forms.
///
/// As printed, `T16 = D₃(jki) - D₃(ikj)` is identically zero because
/// `D₃ = A_ik δ^l_j` with `A` symmetric, and `T19 = 2 D₅` is symmetric in
/// `(i, j)`. The default replaces both with their nonzero skew patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorOptions {
    pub t16: Variant,
    pub t19: Variant,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions {
            t16: Variant::Skew,
            t19: Variant::Skew,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Building block, e.g. `"C1"` or `"D3"`.
    pub block: String,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub field: TensorField,
    pub provenance: Provenance,
}

/// The ordered generators `T1..T19`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub entries: Vec<Generator>,
    pub options: GeneratorOptions,
}

impl GeneratorFamily {
    pub fn fields(&self) -> Vec<&TensorField> {
        self.entries.iter().map(|g| &g.field).collect()
    }

    /// Generator by its 1-based number, `get(13)` is `T13`.
    pub fn get(&self, number: usize) -> &TensorField {
        &self.entries[number - 1].field
    }

    /// Labels of entries that are not antisymmetric in their first two slots.
    pub fn non_forms(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|g| !g.field.is_antisymmetric(1, 2).unwrap_or(false))
            .map(|g| g.label.clone())
            .collect()
    }
}

fn check_shape(t: &TensorField, p: usize, q: usize) -> Result<(), TensorError> {
    let expected = TensorShape::new(p, q, t.dim());
    if t.shape() != expected {
        return Err(TensorError::ShapeMismatch {
            expected,
            found: t.shape(),
        });
    }
    Ok(())
}

// records skewness in (1, 2) when it holds
fn mark_skew(t: TensorField) -> TensorField {
    if t.is_antisymmetric(1, 2).unwrap_or(false) {
        t.with_antisymmetry(&[(1, 2)]).expect("checked")
    } else {
        t
    }
}

/// `C₀ = N`, `C₁ = N^m_mij δ^l_k`, `C₂ = N^m_imj δ^l_k`, `C₃ = N^m_ijm δ^l_k`.
pub fn build_c_family(n1: &TensorField) -> Result<Vec<TensorField>, TensorError> {
    check_shape(n1, 3, 1)?;
    let mut out = vec![n1.clone()];
    for slot in 1..=3 {
        out.push(n1.contract(slot, 1)?.insert_delta(1));
    }
    Ok(out)
}

/// The five quadratic blocks in `N⁰` (written `N` below):
///
/// - `D₁ = N^m_ij N^l_mk`
/// - `D₂ = N^l_ij N^m_mk`
/// - `D₃ = N^m_si N^s_mk δ^l_j`
/// - `D₄ = N^m_ij N^s_ms δ^l_k`
/// - `D₅ = N^m_mi N^s_sj δ^l_k`
pub fn build_d_family(n0: &TensorField) -> Result<Vec<TensorField>, TensorError> {
    check_shape(n0, 2, 1)?;
    let n = n0.dim();
    let trace = n0.contract(1, 1)?; // θ_i = N^m_mi
    let zero = || Polynomial::zero(n);
    let d1 = TensorField::from_fn(TensorShape::new(3, 1, n), |c, u| {
        let mut acc = zero();
        for m in 0..n {
            acc.add_product(n0.get(&c[..2], &[m]), n0.get(&[m, c[2]], u));
        }
        acc
    });
    let d2 = TensorField::from_fn(TensorShape::new(3, 1, n), |c, u| {
        n0.get(&c[..2], u) * trace.get(&c[2..], &[])
    });
    // A_ik = N^m_si N^s_mk
    let a = TensorField::from_fn(TensorShape::new(2, 0, n), |c, _| {
        let mut acc = zero();
        for m in 0..n {
            for s in 0..n {
                acc.add_product(n0.get(&[s, c[0]], &[m]), n0.get(&[m, c[1]], &[s]));
            }
        }
        acc
    });
    let d3 = TensorField::from_fn(TensorShape::new(3, 1, n), |c, u| {
        if c[1] == u[0] {
            a.get(&[c[0], c[2]], &[]).clone()
        } else {
            zero()
        }
    });
    // N^m_ij θ_m
    let contracted = TensorField::from_fn(TensorShape::new(2, 0, n), |c, _| {
        let mut acc = zero();
        for m in 0..n {
            acc.add_product(n0.get(c, &[m]), trace.get(&[m], &[]));
        }
        acc
    });
    let d4 = contracted.insert_delta(1);
    let d5 = trace.tensor_product(&trace)?.insert_delta(1);
    Ok(vec![mark_skew(d1), mark_skew(d2), d3, d4, d5])
}

/// Builds `T1..T19` from `N⁰` and `N¹`.
///
/// `T1..T11` are the three patterns applied to `C₀..C₃` in order, with the
/// last one (`C₃` with [`Pattern::SwapLastPair`], see [`dropped_generator`])
/// left out. `T12..T19` come from the `D` blocks.
pub fn build_t_list(
    n0: &TensorField,
    n1: &TensorField,
    options: GeneratorOptions,
) -> Result<GeneratorFamily, TensorError> {
    let c = build_c_family(n1)?;
    let d = build_d_family(n0)?;
    let mut specs: Vec<(String, &TensorField, Pattern)> = Vec::new();
    for (alpha, block) in c.iter().enumerate() {
        for pattern in [
            Pattern::SwapFirstPair,
            Pattern::Cycle,
            Pattern::SwapLastPair,
        ] {
            if alpha == 3 && pattern == Pattern::SwapLastPair {
                continue;
            }
            specs.push((format!("C{alpha}"), block, pattern));
        }
    }
    let t16 = match options.t16 {
        Variant::Literal => Pattern::Cycle,
        Variant::Skew => Pattern::SwapFirstPair,
    };
    let t19 = match options.t19 {
        Variant::Literal => Pattern::Double,
        Variant::Skew => Pattern::Cycle,
    };
    let d_specs = [
        (0, Pattern::Double),
        (0, Pattern::Cycle),
        (1, Pattern::Double),
        (1, Pattern::Cycle),
        (2, t16),
        (3, Pattern::Double),
        (3, Pattern::Cycle),
        (4, t19),
    ];
    for (beta, pattern) in d_specs {
        specs.push((format!("D{}", beta + 1), &d[beta], pattern));
    }
    let entries = specs
        .into_iter()
        .enumerate()
        .map(|(idx, (block, x, pattern))| {
            let field = mark_skew(pattern.apply(x)?);
            Ok(Generator {
                label: format!("T{}", idx + 1),
                field,
                provenance: Provenance { block, pattern },
            })
        })
        .collect::<Result<Vec<_>, TensorError>>()?;
    debug_assert_eq!(entries.len(), 19);
    Ok(GeneratorFamily { entries, options })
}

/// The twelfth `C` generator, `C₃_kij - C₃_kji`, which is left out of `T1..T19`.
pub fn dropped_generator(n1: &TensorField) -> Result<TensorField, TensorError> {
    let c = build_c_family(n1)?;
    Pattern::SwapLastPair.apply(&c[3])
}

/// One spanning GL-equivariant map `T^{p,q} → T^{p̄,q̄}`: contract some source
/// index pairs, route the surviving source slots to target slots, and fill the
/// remaining target slots with Kronecker deltas.
///
/// All slot numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionScheme {
    pub source: TensorShape,
    pub target: TensorShape,
    /// `(source covariant, source contravariant)` pairs summed over.
    pub contracted_pairs: Vec<(usize, usize)>,
    /// `(source covariant, target covariant)`.
    pub covariant_assignment: Vec<(usize, usize)>,
    /// `(source contravariant, target contravariant)`.
    pub contravariant_assignment: Vec<(usize, usize)>,
    /// `(target covariant, target contravariant)` pairs carrying a `δ`.
    pub delta_fills: Vec<(usize, usize)>,
}

/// Lists every total-contraction scheme from `source` to `target`.
///
/// Schemes correspond to bijections between the "lower" slots (source
/// covariant, target contravariant) and the "upper" slots (source
/// contravariant, target covariant), so there are `r!` of them with
/// `r = p + q̄ = q + p̄`, and none when `p - p̄ ≠ q - q̄`.
pub fn enumerate_schemes(source: TensorShape, target: TensorShape) -> Vec<ContractionScheme> {
    let (p, q) = (source.covariant, source.contravariant);
    let (pt, qt) = (target.covariant, target.contravariant);
    if source.dim != target.dim || p + qt != q + pt {
        return Vec::new();
    }
    let r = p + qt;
    let mut perm: Vec<usize> = (0..r).collect();
    let mut out = Vec::new();
    loop {
        let mut scheme = ContractionScheme {
            source,
            target,
            contracted_pairs: Vec::new(),
            covariant_assignment: Vec::new(),
            contravariant_assignment: Vec::new(),
            delta_fills: Vec::new(),
        };
        // lower slot a in 0..p is source covariant a+1, in p..r target contravariant a-p+1;
        // upper slot b in 0..q is source contravariant b+1, in q..r target covariant b-q+1.
        for (a, &b) in perm.iter().enumerate() {
            match (a < p, b < q) {
                (true, true) => scheme.contracted_pairs.push((a + 1, b + 1)),
                (true, false) => scheme.covariant_assignment.push((a + 1, b - q + 1)),
                (false, true) => scheme.contravariant_assignment.push((b + 1, a - p + 1)),
                (false, false) => scheme.delta_fills.push((b - q + 1, a - p + 1)),
            }
        }
        scheme.contravariant_assignment.sort_unstable();
        scheme.delta_fills.sort_unstable();
        out.push(scheme);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Evaluates a scheme on `input` componentwise.
pub fn apply_scheme(
    scheme: &ContractionScheme,
    input: &TensorField,
) -> Result<TensorField, TensorError> {
    if input.shape() != scheme.source {
        return Err(TensorError::ShapeMismatch {
            expected: scheme.source,
            found: input.shape(),
        });
    }
    let n = input.dim();
    let ncontract = scheme.contracted_pairs.len();
    let mut src_cov = vec![0; scheme.source.covariant];
    let mut src_con = vec![0; scheme.source.contravariant];
    let mut dummy = vec![0; ncontract];
    Ok(TensorField::from_fn(scheme.target, |cov, con| {
        if scheme
            .delta_fills
            .iter()
            .any(|&(a, b)| cov[a - 1] != con[b - 1])
        {
            return Polynomial::zero(n);
        }
        for &(s, t) in &scheme.covariant_assignment {
            src_cov[s - 1] = cov[t - 1];
        }
        for &(s, t) in &scheme.contravariant_assignment {
            src_con[s - 1] = con[t - 1];
        }
        let mut acc = Polynomial::zero(n);
        dummy.iter_mut().for_each(|d| *d = 0);
        loop {
            for (&(s, u), &m) in scheme.contracted_pairs.iter().zip(&dummy) {
                src_cov[s - 1] = m;
                src_con[u - 1] = m;
            }
            let v = input.get(&src_cov, &src_con);
            if !v.is_zero() {
                acc = &acc + v;
            }
            // odometer over the contracted indices
            let mut pos = 0;
            while pos < ncontract {
                dummy[pos] += 1;
                if dummy[pos] < n {
                    break;
                }
                dummy[pos] = 0;
                pos += 1;
            }
            if pos == ncontract {
                break;
            }
        }
        acc
    }))
}
