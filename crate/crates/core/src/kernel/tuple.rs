use crate::graph::{Prop, Vertex};

use super::hash::{hash_str, Fnv};
use super::{KernelError, MatchKind, TupleMode};

fn parts(v: &Vertex, mode: TupleMode) -> impl Iterator<Item = (usize, &Prop)> {
    v.props.iter().enumerate().filter(move |(_, p)| match p {
        Prop::Discrete(_) => mode.uses_discrete(),
        Prop::Real(_) => mode.uses_real(),
    })
}

/// Kernel between the property tuples of two vertices of one signature.
///
/// Soft: number of equal discrete values plus the dot product of the real
/// values. Hard: product of discrete indicators plus the real dot product.
/// An empty tuple scores 1; a purely real tuple has no indicator term.
pub fn kappa_tuple(v: &Vertex, w: &Vertex, mode: TupleMode, m: MatchKind) -> Result<f64, KernelError> {
    if v.signature != w.signature || v.props.len() != w.props.len() {
        return Err(KernelError::SignatureMismatch(
            v.signature.to_string(),
            w.signature.to_string(),
        ));
    }
    let mut eq = 0usize;
    let mut discrete = 0usize;
    let mut dot = 0.0;
    let mut any = false;
    for ((_, a), (_, b)) in parts(v, mode).zip(parts(w, mode)) {
        any = true;
        match (a, b) {
            (Prop::Discrete(x), Prop::Discrete(y)) => {
                discrete += 1;
                eq += usize::from(x == y);
            }
            (Prop::Real(x), Prop::Real(y)) => dot += x * y,
            _ => {
                return Err(KernelError::SignatureMismatch(
                    v.signature.to_string(),
                    w.signature.to_string(),
                ))
            }
        }
    }
    let indicator = match m {
        _ if !any => 1.0,
        MatchKind::Soft => eq as f64,
        MatchKind::Hard if discrete > 0 => f64::from(u8::from(eq == discrete)),
        MatchKind::Hard => 0.0,
    };
    Ok(indicator + dot)
}

/// Sparse expansion `phi(v)` with `<phi(v), phi(w)> = [same signature] *
/// term(v, w)`, where term is 1 for empty tuples and the soft tuple kernel
/// otherwise.
pub(crate) fn soft_vertex_features(v: &Vertex, mode: TupleMode, out: &mut Vec<(u64, f64)>) {
    let sig = hash_str(&v.signature);
    let mut any = false;
    for (k, p) in parts(v, mode) {
        any = true;
        match p {
            Prop::Discrete(c) => out.push((
                Fnv::tagged(b'd')
                    .write_u64(sig)
                    .write_u32(k as u32)
                    .write_str(&c.to_string())
                    .finish(),
                1.0,
            )),
            Prop::Real(x) => out.push((Fnv::tagged(b'r').write_u64(sig).write_u32(k as u32).finish(), *x)),
        }
    }
    if !any {
        out.push((Fnv::tagged(b's').write_u64(sig).finish(), 1.0));
    }
}

/// Sparse expansion for hard matching keyed by the vertex code `code`:
/// an indicator unit when the tuple has a discrete part or is empty, plus
/// one coordinate per real value.
pub(crate) fn hard_vertex_features(v: &Vertex, code: u64, mode: TupleMode, out: &mut Vec<(u64, f64)>) {
    let mut has_discrete = false;
    let mut any = false;
    for (k, p) in parts(v, mode) {
        any = true;
        match p {
            Prop::Discrete(_) => has_discrete = true,
            Prop::Real(x) => out.push((Fnv::tagged(b'R').write_u64(code).write_u32(k as u32).finish(), *x)),
        }
    }
    if has_discrete || !any {
        out.push((Fnv::tagged(b'I').write_u64(code).finish(), 1.0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Constant;
    use crate::graph::VertexKind;

    fn v(props: Vec<Prop>) -> Vertex {
        Vertex::with_props(VertexKind::Entity, "t", props)
    }

    fn d(s: &str) -> Prop {
        Prop::Discrete(Constant::sym(s))
    }

    #[test]
    fn mixed_soft() {
        let a = v(vec![d("red"), Prop::Real(2.0)]);
        let b = v(vec![d("red"), Prop::Real(3.0)]);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Mixed, MatchKind::Soft).unwrap(), 7.0);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Mixed, MatchKind::Hard).unwrap(), 7.0);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Real, MatchKind::Soft).unwrap(), 6.0);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Discrete, MatchKind::Soft).unwrap(), 1.0);
    }

    #[test]
    fn discrete_hard_vs_soft() {
        let a = v(vec![d("red"), d("blue")]);
        let b = v(vec![d("red"), d("green")]);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Discrete, MatchKind::Hard).unwrap(), 0.0);
        assert_eq!(kappa_tuple(&a, &b, TupleMode::Discrete, MatchKind::Soft).unwrap(), 1.0);
        assert_eq!(kappa_tuple(&a, &a, TupleMode::Discrete, MatchKind::Hard).unwrap(), 1.0);
    }

    #[test]
    fn empty_tuples_score_one() {
        let a = Vertex::plain("t");
        for m in [MatchKind::Soft, MatchKind::Hard] {
            assert_eq!(kappa_tuple(&a, &a, TupleMode::Discrete, m).unwrap(), 1.0);
        }
    }

    #[test]
    fn signature_mismatch() {
        let a = v(vec![d("red")]);
        let b = Vertex::with_props(VertexKind::Entity, "u", vec![d("red")]);
        assert!(matches!(
            kappa_tuple(&a, &b, TupleMode::Discrete, MatchKind::Soft),
            Err(KernelError::SignatureMismatch(..))
        ));
    }

    fn dot(a: &[(u64, f64)], b: &[(u64, f64)]) -> f64 {
        a.iter()
            .map(|(k, x)| b.iter().filter(|(j, _)| j == k).map(|(_, y)| x * y).sum::<f64>())
            .sum()
    }

    #[test]
    fn soft_expansion_reproduces_kernel() {
        let a = v(vec![d("red"), Prop::Real(2.0), d("x")]);
        let b = v(vec![d("red"), Prop::Real(-1.5), d("y")]);
        let (mut fa, mut fb) = (Vec::new(), Vec::new());
        soft_vertex_features(&a, TupleMode::Mixed, &mut fa);
        soft_vertex_features(&b, TupleMode::Mixed, &mut fb);
        let k = kappa_tuple(&a, &b, TupleMode::Mixed, MatchKind::Soft).unwrap();
        assert_eq!(dot(&fa, &fb), k);
    }
}
