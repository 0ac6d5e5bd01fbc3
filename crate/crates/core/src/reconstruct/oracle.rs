use super::{MorphismInstance, ReconstructError};
use crate::gf::{list_homomorphisms, vecops, Matrix};
use crate::projective::SemilinearMap;

pub const DEFAULT_ORACLE_CAP: u64 = 1 << 24;

/// Every canonical semilinear map `K^(n+1) → K'^(m+1)` whose induced map
/// agrees with `φ` on `X` (so its kernel avoids `X`), by enumeration.
pub fn brute_force_oracle(
    inst: &MorphismInstance,
    cap: u64,
) -> Result<Vec<SemilinearMap>, ReconstructError> {
    let (p, inj) = inst.x.root_embedding();
    let rep = p.linear_rep().ok_or(ReconstructError::NotFullProjective)?;
    let trep = inst
        .target
        .linear_rep()
        .ok_or(ReconstructError::NotFullProjective)?;
    let (k, kp) = (rep.field(), trep.field());
    let (n1, m1) = (rep.ambient_dim() + 1, trep.ambient_dim() + 1);
    let homs = list_homomorphisms(k, kp);
    let q = kp.order() as u64;
    let entries = (n1 * m1) as u32;
    let space = q
        .checked_pow(entries)
        .and_then(|s| s.checked_mul(homs.len() as u64))
        .unwrap_or(u64::MAX);
    if space > cap {
        return Err(ReconstructError::CapExceeded { space, cap });
    }
    let expected: Vec<&[u8]> = inst.map.iter().map(|&y| trep.coords(y)).collect();
    let mut found = Vec::new();
    for sigma in homs {
        let twisted: Vec<Vec<u8>> = inj
            .iter()
            .map(|&i| rep.coords(i).iter().map(|&c| sigma.apply(c)).collect())
            .collect();
        let mut entries_buf = vec![0u8; n1 * m1];
        for code in 0..q.pow(entries) {
            entries_buf.copy_from_slice(&vecops::decode(q as u32, n1 * m1, code as usize));
            // canonical forms only: leading entry 1
            if entries_buf.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            let ok = twisted.iter().zip(&expected).all(|(v, &want)| {
                let img: Vec<u8> = (0..m1)
                    .map(|r| {
                        (0..n1).fold(0u8, |acc, c| {
                            kp.add(acc, kp.mul(entries_buf[r * n1 + c], v[c]))
                        })
                    })
                    .collect();
                vecops::normalize(kp, &img).is_some_and(|w| w == want)
            });
            if ok {
                let rows: Vec<Vec<u8>> = entries_buf.chunks(n1).map(<[u8]>::to_vec).collect();
                found.push(SemilinearMap::new(
                    sigma.clone(),
                    Matrix::from_rows(kp, &rows),
                )?);
            }
        }
    }
    Ok(found)
}
