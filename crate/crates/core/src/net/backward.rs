//! Backward coverability: the minimal basis of `Pre*(↑y)`, computed as a
//! fixpoint. Used as an independent oracle for the forward procedure.

use super::NetModel;
use crate::error::{Error, Result};
use crate::ideal::{Marking, OmegaNat};

fn leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Whether some marking `z ≥ y` is reachable from `x0`.
pub fn backward_coverable(net: &NetModel, x0: &Marking, y: &Marking) -> Result<bool> {
    if net.has_omega_outputs() {
        return Err(Error::OmegaOutputs("backward coverability"));
    }
    for m in [x0, y] {
        if m.dim() != net.dimension() {
            return Err(Error::DimensionMismatch {
                expected: net.dimension(),
                found: m.dim(),
            });
        }
    }
    let x0 = x0.components();
    let mut basis: Vec<Vec<u64>> = vec![y.components().to_vec()];
    let mut frontier = basis.clone();
    while !frontier.is_empty() {
        if basis.iter().any(|b| leq(b, x0)) {
            return Ok(true);
        }
        let mut next = Vec::new();
        for m in &frontier {
            for t in net.transitions() {
                // minimal x with x ≥ guard and x − guard + output ≥ m
                let pre: Vec<u64> = m
                    .iter()
                    .zip(&t.guard)
                    .zip(&t.output)
                    .map(|((&need, &g), o)| {
                        let produced = match o {
                            OmegaNat::Fin(k) => *k,
                            OmegaNat::Omega => unreachable!("rejected above"),
                        };
                        g + need.saturating_sub(produced)
                    })
                    .collect();
                if basis.iter().any(|b| leq(b, &pre)) {
                    continue;
                }
                basis.retain(|b| !leq(&pre, b));
                next.retain(|b: &Vec<u64>| !leq(&pre, b));
                basis.push(pre.clone());
                next.push(pre);
            }
        }
        // drop frontier entries that were subsumed during this round
        frontier = next
            .into_iter()
            .filter(|n| basis.iter().any(|b| b == n))
            .collect();
    }
    Ok(basis.iter().any(|b| leq(b, x0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(s: &str) -> Marking {
        s.parse().unwrap()
    }

    #[test]
    fn increment_covers() {
        let net = NetModel::vas(1, &[("t", &[1])]).unwrap();
        assert!(backward_coverable(&net, &mk("(0)"), &mk("(5)")).unwrap());
    }

    #[test]
    fn decrement_cannot_grow() {
        let net = NetModel::vas(1, &[("t", &[-1])]).unwrap();
        assert!(!backward_coverable(&net, &mk("(3)"), &mk("(4)")).unwrap());
        assert!(backward_coverable(&net, &mk("(3)"), &mk("(3)")).unwrap());
    }

    #[test]
    fn zero_target_is_covered() {
        let net = NetModel::vas(2, &[("t", &[-1, 1])]).unwrap();
        assert!(backward_coverable(&net, &mk("(0,0)"), &mk("(0,0)")).unwrap());
    }

    #[test]
    fn transfer_chain() {
        let net = NetModel::vas(2, &[("t", &[1, -1])]).unwrap();
        assert!(backward_coverable(&net, &mk("(0,5)"), &mk("(5,0)")).unwrap());
        assert!(!backward_coverable(&net, &mk("(0,5)"), &mk("(3,3)")).unwrap());
    }

    #[test]
    fn omega_nets_rejected() {
        let net: NetModel = "dim 1\nt | 0 | w\n".parse().unwrap();
        assert!(matches!(
            backward_coverable(&net, &mk("(0)"), &mk("(1)")),
            Err(Error::OmegaOutputs(_))
        ));
    }
}
