//! Subsets of `N = {0..n-1}` as bitmasks: bit `i` set iff criterion `i` is a member.

pub type Mask = usize;

/// Largest supported number of criteria.
pub const MAX_CRITERIA: usize = 20;

#[inline]
pub fn full(n: usize) -> Mask {
    (1usize << n) - 1
}

#[inline]
pub fn card(mask: Mask) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn contains(mask: Mask, i: usize) -> bool {
    mask & (1 << i) != 0
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Members of `mask` in increasing order.
pub fn members(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

pub fn from_members(items: &[usize]) -> Mask {
    items.iter().fold(0, |m, &i| m | (1 << i))
}

/// All subsets of `mask`, including `0` and `mask` itself, in increasing order.
pub fn subsets_of(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0usize);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

pub fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Renders a mask as `{0,2}`.
pub fn render(mask: Mask) -> String {
    let items: Vec<String> = members(mask).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub(crate) fn check_n(n: usize) -> crate::Result<()> {
    if n == 0 || n > MAX_CRITERIA {
        return Err(crate::Error::malformed(format!(
            "criteria count {n} outside 1..={MAX_CRITERIA}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_is_complete_and_ordered() {
        let got: Vec<Mask> = subsets_of(0b1011).collect();
        assert_eq!(got, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(subsets_of(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn members_roundtrip() {
        let m = from_members(&[0, 3, 5]);
        assert_eq!(members(m).collect::<Vec<_>>(), vec![0, 3, 5]);
        assert_eq!(render(m), "{0,3,5}");
        assert_eq!(card(m), 3);
    }
}
