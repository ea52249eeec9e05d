//! Interleaving an asymptotic and a distal index sequence along the merge
//! schedule `n_1 = 1, n_{k+1} = 2k n_k`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{merge_schedule, IndexSequence, SequenceRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    P,
    Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergedSequence {
    pub sequence: IndexSequence,
    /// `sources[i]` is where `t_{i+1}` was drawn from.
    pub sources: Vec<Source>,
    /// `(source, length)` per block, starting with the single term `t_1`.
    pub blocks: Vec<(Source, usize)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `P ∩ Q` is infinite: exact for two finite sequences and for two
/// arithmetic progressions, `None` otherwise.
pub fn intersection_is_infinite(p: &IndexSequence, q: &IndexSequence) -> Option<bool> {
    if !p.is_infinite() || !q.is_infinite() {
        return Some(false);
    }
    match (p.rule(), q.rule()) {
        (
            SequenceRule::Arithmetic { start: a, step: s },
            SequenceRule::Arithmetic { start: b, step: t },
        ) => Some((*a as i128 - *b as i128) % gcd(*s, *t) as i128 == 0),
        _ => None,
    }
}

pub(crate) fn merge_terms(
    p: &IndexSequence,
    q: &IndexSequence,
    k_max: usize,
) -> Result<(Vec<u64>, Vec<Source>)> {
    let n = merge_schedule(k_max)?;
    let n = n.materialized();
    let mut terms = Vec::with_capacity(n[k_max - 1] as usize);
    let mut sources = Vec::with_capacity(terms.capacity());
    terms.push(p.term(0)?);
    sources.push(Source::P);
    for j in 1..k_max {
        let (src, seq) = if j % 2 == 1 { (Source::P, p) } else { (Source::Q, q) };
        for _ in n[j - 1]..n[j] {
            let last = *terms.last().expect("t_1 present");
            let next = seq.next_after(last).ok_or_else(|| {
                Error::Extension(format!(
                    "{src:?} has no term after {last}; {} of {} terms built",
                    terms.len(),
                    n[k_max - 1]
                ))
            })?;
            terms.push(next);
            sources.push(src);
        }
    }
    Ok((terms, sources))
}

/// `T` with `t_1 = p_1`, `(n_{2k-1}, n_{2k}]` drawn from `P` and
/// `(n_{2k}, n_{2k+1}]` drawn from `Q`, each term the least one above its
/// predecessor.
///
/// `P ∩ Q` must be finite. Two arithmetic progressions are decided exactly;
/// other rule pairs are rejected when they still share a term in the upper
/// half of the range spanned by `T`.
pub fn merge_dc_sequence(p: &IndexSequence, q: &IndexSequence, k_max: usize) -> Result<MergedSequence> {
    if intersection_is_infinite(p, q) == Some(true) {
        return Err(Error::Precondition(
            "P and Q share infinitely many terms; the merge is vacuous".into(),
        ));
    }
    let (terms, sources) = merge_terms(p, q, k_max)?;
    if intersection_is_infinite(p, q).is_none() {
        let top = *terms.last().expect("nonempty");
        let mut x = top / 2;
        while let Some(t) = p.next_after(x).filter(|&t| t <= top) {
            if q.contains(t) {
                return Err(Error::Precondition(format!(
                    "P and Q share the term {t} in the upper half of [0, {top}]; P ∩ Q looks infinite"
                )));
            }
            x = t;
        }
    }
    let mut blocks: Vec<(Source, usize)> = Vec::new();
    blocks.push((Source::P, 1));
    let n = merge_schedule(k_max)?;
    for (j, w) in n.materialized().windows(2).enumerate() {
        let src = if j % 2 == 0 { Source::P } else { Source::Q };
        blocks.push((src, (w[1] - w[0]) as usize));
    }
    Ok(MergedSequence {
        sequence: IndexSequence::merged(terms, p.clone(), q.clone(), k_max),
        sources,
        blocks,
    })
}
